// Command-line front end: one verb per run mode plus `eval` for scoring an
// existing nomination list.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vnom/config.hpp"
#include "vnom/evaluation.hpp"
#include "vnom/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string manifest;
  std::string out;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("-c,--config", a.config, "Experiment config file (key = value with [section] headers)");
  cmd->add_option("--manifest", a.manifest, "Replay the configuration stored in a manifest.json");
  cmd->add_option("-o,--out", a.out, "Output directory (overrides run.out)");
  cmd->add_option("--set", a.sets, "Override a setting, e.g. --set model.rho=0.5")->take_all();
}

vnom::ExperimentConfig resolve(const CommonArgs& a, std::string_view mode, const std::vector<std::string>& extra) {
  if (!a.manifest.empty()) {
    if (!a.config.empty() || !a.sets.empty() || !extra.empty())
      throw vnom::ConfigError("--manifest cannot be combined with --config or overrides");
    vnom::ExperimentConfig cfg = vnom::load_manifest(a.manifest);
    if (vnom::to_string(cfg.mode) != mode)
      throw vnom::ConfigError(a.manifest + ": manifest was recorded in mode " + std::string(vnom::to_string(cfg.mode)));
    if (!a.out.empty()) cfg.out = a.out;
    return cfg;
  }
  vnom::IniConfig ini = a.config.empty() ? vnom::IniConfig{} : vnom::IniConfig::load(a.config);
  for (const auto& s : a.sets) ini.set(s);
  for (const auto& s : extra) ini.set(s, "command line");
  ini.set("run.mode", std::string(mode), "command line");
  if (!a.out.empty()) ini.set("run.out", a.out, "--out");
  return vnom::ExperimentConfig::from_ini(ini);
}

int run(const CommonArgs& a, std::string_view mode, const std::vector<std::string>& extra = {}) {
  const auto cfg = resolve(a, mode, extra);
  const auto res = vnom::run_experiment(cfg);
  for (const auto& f : res.files) std::cout << f.string() << '\n';
  return 0;
}

// Parses rank,g2_label,score rows.
vnom::NominationList read_nomination_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  vnom::NominationList list;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (no == 1 && line.rfind("rank,", 0) == 0) continue;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string rank, label, score;
    if (!std::getline(ss, rank, ',') || !std::getline(ss, label, ',') || !std::getline(ss, score))
      throw std::runtime_error(path + ":" + std::to_string(no) + ": expected rank,g2_label,score");
    if (std::stoul(rank) != list.order.size() + 1)
      throw std::runtime_error(path + ":" + std::to_string(no) + ": ranks must be consecutive from 1");
    list.vertices.push_back(static_cast<int>(list.order.size()));
    list.order.push_back(label);
    list.scores.push_back(std::stod(score));
  }
  return list;
}

int run_eval(const std::string& nomination, const std::string& truth, const std::vector<std::size_t>& ks,
             const std::string& out_path) {
  const auto list = read_nomination_csv(nomination);
  std::ifstream in(truth);
  if (!in) throw std::runtime_error("cannot open '" + truth + "'");
  std::vector<int> counterparts;
  std::string label;
  while (in >> label) {
    const auto it = std::find(list.order.begin(), list.order.end(), label);
    counterparts.push_back(it == list.order.end() ? -1 : static_cast<int>(it - list.order.begin()));
  }
  if (counterparts.empty()) throw std::runtime_error(truth + ": no counterpart labels");
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << "k,h,recall_loss,precision_loss,unranked\n";
  const auto ranks = vnom::counterpart_ranks(list, counterparts);
  const auto unranked = std::count(ranks.begin(), ranks.end(), vnom::kUnranked);
  for (std::size_t k : ks)
    out << k << ',' << vnom::verification_h(list, counterparts, k) << ','
        << vnom::level_k_recall_loss(list, counterparts, k) << ','
        << vnom::level_k_precision_loss(list, counterparts, k) << ',' << unranked << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex nomination toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(VNOM_VERSION));

  CommonArgs sim, nom, sweep, orc;
  auto* c_sim = app.add_subcommand("simulate", "Correlated SBM pair, contamination, trimming and nomination curves");
  add_common(c_sim, sim);
  auto* c_sweep = app.add_subcommand("trim-sweep", "Modularity grid over trimming parameters");
  add_common(c_sweep, sweep);
  auto* c_orc = app.add_subcommand("oracle", "Exact Bayes-optimal scheme on a tiny graph space");
  add_common(c_orc, orc);

  auto* c_nom = app.add_subcommand("nominate", "Nomination on a pair of edge-list files");
  add_common(c_nom, nom);
  std::string g1, g2, corr, seeds;
  c_nom->add_option("--g1", g1, "First graph edge list");
  c_nom->add_option("--g2", g2, "Second graph edge list");
  c_nom->add_option("--correspondence", corr, "TSV of g1_label, g2_label core pairs");
  c_nom->add_option("--seeds", seeds, "File of g1 seed labels");

  auto* c_eval = app.add_subcommand("eval", "Level-k losses of a nomination CSV");
  std::string nomination, truth, eval_out;
  std::vector<std::size_t> ks{1, 5, 10, 15, 20, 30};
  c_eval->add_option("--nomination", nomination, "CSV written by `nominate`")->required();
  c_eval->add_option("--truth", truth, "Counterpart g2 labels, whitespace separated")->required();
  c_eval->add_option("-k", ks, "Levels to evaluate")->delimiter(',');
  c_eval->add_option("-o,--out", eval_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (c_sim->parsed()) return run(sim, "simulate");
    if (c_sweep->parsed()) return run(sweep, "sweep");
    if (c_orc->parsed()) return run(orc, "oracle");
    if (c_nom->parsed()) {
      std::vector<std::string> extra;
      if (!g1.empty()) extra.push_back("data.g1=" + g1);
      if (!g2.empty()) extra.push_back("data.g2=" + g2);
      if (!corr.empty()) extra.push_back("data.correspondence=" + corr);
      if (!seeds.empty()) extra.push_back("data.seeds=" + seeds);
      return run(nom, "real-data", extra);
    }
    if (c_eval->parsed()) return run_eval(nomination, truth, ks, eval_out);
  } catch (const std::exception& e) {
    std::cerr << "vnom: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
