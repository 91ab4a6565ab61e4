#include "vnom/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "vnom/automorphism.hpp"
#include "vnom/oracle.hpp"
#include "vnom/rng.hpp"

#ifndef VNOM_VERSION
#define VNOM_VERSION "0.0.0"
#endif

namespace vnom {

namespace fs = std::filesystem;

std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::Simulate: return "simulate";
    case RunMode::RealData: return "real-data";
    case RunMode::Sweep: return "sweep";
    case RunMode::Oracle: return "oracle";
  }
  return "?";
}

namespace {

const std::vector<std::string> kKnownKeys = {
    "run.mode", "run.seed", "run.out",
    "model.n", "model.p", "model.q", "model.r", "model.prior", "model.rho",
    "adversary.enabled", "adversary.pi_plus", "adversary.pi_minus", "adversary.s_plus", "adversary.s_minus",
    "trim.regimes", "trim.sweep", "trim.add_selected", "trim.grid_l", "trim.grid_h", "trim.reps", "trim.semantics",
    "eval.n_seed_sets", "eval.seed_size", "eval.x_max", "eval.summary_x",
    "pipeline.dim", "pipeline.scree_cap", "pipeline.k_min", "pipeline.k_max", "pipeline.restarts",
    "pipeline.max_iter", "pipeline.tol", "pipeline.floor_scale", "pipeline.pooled", "pipeline.exclude_seeds",
    "data.g1", "data.g2", "data.correspondence", "data.seeds", "data.voi",
    "oracle.n", "oracle.m", "oracle.core", "oracle.p", "oracle.rho", "oracle.voi", "oracle.random_schemes",
    "oracle.obfuscation_checks",
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // Prefer the shortest form that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char s[32];
    std::snprintf(s, sizeof s, "%.*g", prec, x);
    if (std::strtod(s, nullptr) == x) return s;
  }
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v, std::string_view sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    if constexpr (std::is_same_v<T, std::string>)
      out += v[i];
    else if constexpr (std::is_floating_point_v<T>)
      out += fmt(v[i]);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(tok.substr(b, tok.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

std::vector<GridPoint> parse_regimes(const IniConfig& ini, const std::string& key) {
  std::vector<GridPoint> out;
  for (const auto& item : split_labels(ini.get_string(key, ""))) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) ini.fail(key, "expected l:h pairs, got '" + item + "'");
    IniConfig tmp;
    tmp.set("x.l", item.substr(0, colon));
    tmp.set("x.h", item.substr(colon + 1));
    try {
      out.push_back({tmp.get_double("x.l"), tmp.get_double("x.h")});
    } catch (const ConfigError&) {
      ini.fail(key, "expected l:h pairs, got '" + item + "'");
    }
  }
  return out;
}

std::size_t positive(const IniConfig& ini, const std::string& key, std::uint64_t fallback) {
  const auto v = ini.get_uint(key, fallback);
  if (v == 0) ini.fail(key, "must be positive");
  return static_cast<std::size_t>(v);
}

double probability(const IniConfig& ini, const std::string& key, double fallback) {
  const double v = ini.get_double(key, fallback);
  if (!(v >= 0.0 && v <= 1.0)) ini.fail(key, "must lie in [0, 1]");
  return v;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_ini(const IniConfig& ini) {
  ini.require_known(kKnownKeys);
  ExperimentConfig c;
  const std::string mode = ini.get_string("run.mode", "simulate");
  if (mode == "simulate")
    c.mode = RunMode::Simulate;
  else if (mode == "real-data")
    c.mode = RunMode::RealData;
  else if (mode == "sweep")
    c.mode = RunMode::Sweep;
  else if (mode == "oracle")
    c.mode = RunMode::Oracle;
  else
    ini.fail("run.mode", "expected simulate, real-data, sweep or oracle");
  c.seed = ini.get_uint("run.seed", c.seed);
  c.out = ini.get_string("run.out", c.out);

  c.n = positive(ini, "model.n", c.n);
  c.p = probability(ini, "model.p", c.p);
  c.q = probability(ini, "model.q", c.q);
  c.r = probability(ini, "model.r", c.r);
  c.prior = ini.get_doubles("model.prior", c.prior);
  if (c.prior.size() != 2) ini.fail("model.prior", "expected two block probabilities");
  c.rho = probability(ini, "model.rho", c.rho);
  try {
    SbmParams sp = SbmParams::two_block(c.n, c.p, c.q, c.r);
    sp.prior = c.prior;
    sp.validate();
  } catch (const std::invalid_argument& e) {
    ini.fail("model.prior", e.what());
  }

  c.adversary_enabled = ini.get_bool("adversary.enabled", c.adversary_enabled);
  c.adversary.pi_plus = probability(ini, "adversary.pi_plus", c.adversary.pi_plus);
  c.adversary.pi_minus = probability(ini, "adversary.pi_minus", c.adversary.pi_minus);
  c.adversary.s_plus = probability(ini, "adversary.s_plus", c.adversary.s_plus);
  c.adversary.s_minus = probability(ini, "adversary.s_minus", c.adversary.s_minus);
  try {
    c.adversary.validate();
  } catch (const std::invalid_argument& e) {
    ini.fail("adversary.pi_plus", e.what());
  }

  if (ini.has("trim.regimes")) c.regimes = parse_regimes(ini, "trim.regimes");
  for (const auto& g : c.regimes)
    if (!(g.l >= 0 && g.h >= 0 && g.l + g.h < 1)) ini.fail("trim.regimes", "every l:h needs l, h >= 0 and l + h < 1");
  c.sweep = ini.get_bool("trim.sweep", c.sweep);
  c.add_selected = ini.get_bool("trim.add_selected", c.add_selected);
  c.grid_l = ini.get_doubles("trim.grid_l", c.grid_l);
  c.grid_h = ini.get_doubles("trim.grid_h", c.grid_h);
  if (c.grid_l.empty()) ini.fail("trim.grid_l", "grid must be nonempty");
  if (c.grid_h.empty()) ini.fail("trim.grid_h", "grid must be nonempty");
  for (double x : c.grid_l)
    if (!(x >= 0 && x < 1)) ini.fail("trim.grid_l", "values must lie in [0, 1)");
  for (double x : c.grid_h)
    if (!(x >= 0 && x < 1)) ini.fail("trim.grid_h", "values must lie in [0, 1)");
  c.sweep_reps = positive(ini, "trim.reps", c.sweep_reps);
  const std::string sem = ini.get_string("trim.semantics", "prose");
  if (sem == "prose")
    c.semantics = TrimSemantics::Prose;
  else if (sem == "literal")
    c.semantics = TrimSemantics::Literal;
  else
    ini.fail("trim.semantics", "expected prose or literal");

  c.n_seed_sets = positive(ini, "eval.n_seed_sets", c.n_seed_sets);
  c.seed_size = positive(ini, "eval.seed_size", c.seed_size);
  c.x_max = positive(ini, "eval.x_max", c.x_max);
  if (ini.has("eval.summary_x")) {
    c.summary_x.clear();
    for (double x : ini.get_doubles("eval.summary_x")) {
      if (!(x >= 1) || x != std::floor(x)) ini.fail("eval.summary_x", "expected positive integers");
      c.summary_x.push_back(static_cast<std::size_t>(x));
    }
  }
  if (c.mode == RunMode::Simulate && c.seed_size >= c.n) ini.fail("eval.seed_size", "must be smaller than model.n");

  const std::string dim = ini.get_string("pipeline.dim", "auto");
  if (dim != "auto") c.pipeline.dim = positive(ini, "pipeline.dim", 1);
  c.pipeline.scree_cap = positive(ini, "pipeline.scree_cap", c.pipeline.scree_cap);
  c.pipeline.gmm.k_min = positive(ini, "pipeline.k_min", c.pipeline.gmm.k_min);
  c.pipeline.gmm.k_max = positive(ini, "pipeline.k_max", c.pipeline.gmm.k_max);
  if (c.pipeline.gmm.k_max < c.pipeline.gmm.k_min) ini.fail("pipeline.k_max", "must be >= pipeline.k_min");
  c.pipeline.gmm.restarts = positive(ini, "pipeline.restarts", c.pipeline.gmm.restarts);
  c.pipeline.gmm.max_iter = positive(ini, "pipeline.max_iter", c.pipeline.gmm.max_iter);
  c.pipeline.gmm.tol = ini.get_double("pipeline.tol", c.pipeline.gmm.tol);
  if (!(c.pipeline.gmm.tol > 0)) ini.fail("pipeline.tol", "must be positive");
  c.pipeline.gmm.floor_scale = ini.get_double("pipeline.floor_scale", c.pipeline.gmm.floor_scale);
  if (!(c.pipeline.gmm.floor_scale > 0)) ini.fail("pipeline.floor_scale", "must be positive");
  c.pipeline.pooled_gmm = ini.get_bool("pipeline.pooled", c.pipeline.pooled_gmm);
  c.pipeline.exclude_seeds = ini.get_bool("pipeline.exclude_seeds", c.pipeline.exclude_seeds);

  c.data.g1 = ini.get_string("data.g1", "");
  c.data.g2 = ini.get_string("data.g2", "");
  c.data.correspondence = ini.get_string("data.correspondence", "");
  c.data.seeds = ini.get_string("data.seeds", "");
  c.data.voi = split_labels(ini.get_string("data.voi", ""));
  if (c.mode == RunMode::RealData) {
    for (const char* key : {"data.g1", "data.g2"}) {
      const std::string path = ini.get_string(key, "");
      if (path.empty()) throw ConfigError(std::string("real-data mode requires ") + key);
      if (!fs::exists(path)) ini.fail(key, "file '" + path + "' does not exist");
    }
    for (const char* key : {"data.correspondence", "data.seeds"}) {
      const std::string path = ini.get_string(key, "");
      if (!path.empty() && !fs::exists(path)) ini.fail(key, "file '" + path + "' does not exist");
    }
  }

  auto& o = c.oracle;
  o.n = static_cast<std::size_t>(ini.get_uint("oracle.n", o.n));
  o.m = static_cast<std::size_t>(ini.get_uint("oracle.m", o.m));
  if (o.n > kOracleMaxVertices || o.n < 1) ini.fail("oracle.n", "must lie in 1..5");
  if (o.m > kOracleMaxVertices || o.m < 1) ini.fail("oracle.m", "must lie in 1..5");
  o.core = static_cast<std::size_t>(ini.get_uint("oracle.core", std::min(o.n, o.m)));
  if (o.core > std::min(o.n, o.m)) ini.fail("oracle.core", "cannot exceed min(oracle.n, oracle.m)");
  o.p = probability(ini, "oracle.p", o.p);
  o.rho = probability(ini, "oracle.rho", o.rho);
  if (ini.has("oracle.voi")) {
    o.voi.clear();
    for (double x : ini.get_doubles("oracle.voi")) {
      if (!(x >= 1 && x <= static_cast<double>(o.core)) || x != std::floor(x))
        ini.fail("oracle.voi", "vertices of interest are 1-based core indices");
      o.voi.push_back(static_cast<int>(x) - 1);
    }
  }
  if (o.voi.empty() || o.voi.front() >= static_cast<int>(o.core)) ini.fail("oracle.voi", "need a core vertex of interest");
  o.random_schemes = static_cast<std::size_t>(ini.get_uint("oracle.random_schemes", o.random_schemes));
  o.obfuscation_checks = static_cast<std::size_t>(ini.get_uint("oracle.obfuscation_checks", o.obfuscation_checks));
  return c;
}

IniConfig ExperimentConfig::to_ini() const {
  IniConfig ini;
  const std::string src = "manifest";
  auto put = [&](const std::string& k, std::string v) { ini.set(k, std::move(v), src); };
  put("run.mode", std::string(to_string(mode)));
  put("run.seed", std::to_string(seed));
  put("run.out", out);
  put("model.n", std::to_string(n));
  put("model.p", fmt(p));
  put("model.q", fmt(q));
  put("model.r", fmt(r));
  put("model.prior", join(prior));
  put("model.rho", fmt(rho));
  put("adversary.enabled", adversary_enabled ? "true" : "false");
  put("adversary.pi_plus", fmt(adversary.pi_plus));
  put("adversary.pi_minus", fmt(adversary.pi_minus));
  put("adversary.s_plus", fmt(adversary.s_plus));
  put("adversary.s_minus", fmt(adversary.s_minus));
  std::vector<std::string> reg;
  for (const auto& g : regimes) reg.push_back(fmt(g.l) + ":" + fmt(g.h));
  put("trim.regimes", join(reg));
  put("trim.sweep", sweep ? "true" : "false");
  put("trim.add_selected", add_selected ? "true" : "false");
  put("trim.grid_l", join(grid_l));
  put("trim.grid_h", join(grid_h));
  put("trim.reps", std::to_string(sweep_reps));
  put("trim.semantics", semantics == TrimSemantics::Prose ? "prose" : "literal");
  put("eval.n_seed_sets", std::to_string(n_seed_sets));
  put("eval.seed_size", std::to_string(seed_size));
  put("eval.x_max", std::to_string(x_max));
  put("eval.summary_x", join(summary_x));
  put("pipeline.dim", pipeline.dim ? std::to_string(*pipeline.dim) : "auto");
  put("pipeline.scree_cap", std::to_string(pipeline.scree_cap));
  put("pipeline.k_min", std::to_string(pipeline.gmm.k_min));
  put("pipeline.k_max", std::to_string(pipeline.gmm.k_max));
  put("pipeline.restarts", std::to_string(pipeline.gmm.restarts));
  put("pipeline.max_iter", std::to_string(pipeline.gmm.max_iter));
  put("pipeline.tol", fmt(pipeline.gmm.tol));
  put("pipeline.floor_scale", fmt(pipeline.gmm.floor_scale));
  put("pipeline.pooled", pipeline.pooled_gmm ? "true" : "false");
  put("pipeline.exclude_seeds", pipeline.exclude_seeds ? "true" : "false");
  put("data.g1", data.g1);
  put("data.g2", data.g2);
  put("data.correspondence", data.correspondence);
  put("data.seeds", data.seeds);
  put("data.voi", join(data.voi));
  put("oracle.n", std::to_string(oracle.n));
  put("oracle.m", std::to_string(oracle.m));
  put("oracle.core", std::to_string(oracle.core));
  put("oracle.p", fmt(oracle.p));
  put("oracle.rho", fmt(oracle.rho));
  std::vector<int> voi1;
  for (int v : oracle.voi) voi1.push_back(v + 1);
  put("oracle.voi", join(voi1));
  put("oracle.random_schemes", std::to_string(oracle.random_schemes));
  put("oracle.obfuscation_checks", std::to_string(oracle.obfuscation_checks));
  return ini;
}

std::vector<std::pair<std::string, std::string>> read_correspondence(std::istream& in, std::string_view source) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto c = line.find('#'); c != std::string::npos) line.resize(c);
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a)) continue;
    if (!(ss >> b) || (ss >> extra))
      throw std::invalid_argument(std::string(source) + ":" + std::to_string(no) + ": expected 'g1_label<TAB>g2_label'");
    out.emplace_back(a, b);
  }
  std::vector<std::string> left, right;
  for (const auto& [a, b] : out) {
    left.push_back(a);
    right.push_back(b);
  }
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  if (std::adjacent_find(left.begin(), left.end()) != left.end() ||
      std::adjacent_find(right.begin(), right.end()) != right.end())
    throw std::invalid_argument(std::string(source) + ": correspondence is not a bijection");
  return out;
}

LoadedPair load_pair(const std::string& e1, const std::string& e2, const std::string& corr, const std::string& seeds_file) {
  Graph g1 = load_edge_list(e1);
  Graph g2 = load_edge_list(e2);
  LoadedPair out;
  if (corr.empty()) {
    out.pair = make_nominatable_pair(std::move(g1), std::move(g2), std::vector<int>{}, VoiSpec::none());
  } else {
    std::ifstream in(corr);
    if (!in) throw std::runtime_error("cannot open '" + corr + "'");
    const auto c = read_correspondence(in, corr);
    out.pair = make_nominatable_pair(std::move(g1), std::move(g2), c, VoiSpec::none());
  }
  if (!seeds_file.empty()) {
    std::ifstream in(seeds_file);
    if (!in) throw std::runtime_error("cannot open '" + seeds_file + "'");
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (const auto c = line.find('#'); c != std::string::npos) line.resize(c);
      std::istringstream ss(line);
      std::string label;
      if (!(ss >> label)) continue;
      const auto where = seeds_file + ":" + std::to_string(no) + ": ";
      const auto v1 = out.pair.g1.find(label);
      if (!v1) throw std::invalid_argument(where + "seed '" + label + "' is not a vertex of g1");
      const auto v2 = out.pair.counterpart(*v1);
      if (!v2) throw std::invalid_argument(where + "seed '" + label + "' is not a core vertex");
      out.seeds.push_back({*v1, *v2});
    }
  }
  return out;
}

namespace {

class Staging {
 public:
  explicit Staging(const fs::path& out) : out_(out), dir_(out / ".staging") {
    fs::create_directories(out_);
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::ofstream open(const std::string& name) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + (dir_ / name).string() + "'");
    names_.push_back(name);
    return f;
  }
  std::vector<fs::path> commit() {
    std::vector<fs::path> out;
    for (const auto& n : names_) {
      fs::rename(dir_ / n, out_ / n);
      out.push_back(out_ / n);
    }
    return out;
  }
  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path out_;
  fs::path dir_;
  std::vector<std::string> names_;
};

std::string regime_name(const GridPoint& g) { return "regularized_" + fmt(g.l) + "_" + fmt(g.h); }

struct SimulatedPair {
  Graph g1i;                  // G1 on clean vertices
  Graph g2i;                  // G2 on clean vertices
  Graph g2c;                  // contaminated G2 on all vertices
  std::vector<int> clean;     // original indices of the clean vertices
  ContaminationRecord record;
  Graph g2;
};

SimulatedPair simulate_pair(const ExperimentConfig& cfg) {
  SbmParams sp = SbmParams::two_block(cfg.n, cfg.p, cfg.q, cfg.r);
  sp.prior = cfg.prior;
  const auto cs = sample_corr_sbm(cfg.rho, sp, derive_seed(cfg.seed, "sbm"));
  SimulatedPair s;
  s.g2 = cs.g2;
  if (cfg.adversary_enabled) {
    AdversaryConfig ac = cfg.adversary;
    ac.seed = derive_seed(cfg.seed, "adversary");
    s.record = contaminate(cs.g2, ac);
  } else {
    s.record = contaminate_sets(cs.g2, {}, {}, 0.0, 0.0, 0);
  }
  std::vector<char> dirty(cfg.n, 0);
  for (int v : s.record.w_plus) dirty[static_cast<std::size_t>(v)] = 1;
  for (int v : s.record.w_minus) dirty[static_cast<std::size_t>(v)] = 1;
  for (std::size_t v = 0; v < cfg.n; ++v)
    if (!dirty[v]) s.clean.push_back(static_cast<int>(v));
  s.g1i = induced_subgraph(cs.g1, s.clean);
  s.g2i = induced_subgraph(cs.g2, s.clean);
  s.g2c = s.record.contaminated;
  return s;
}

std::vector<GridPoint> grid_points(const ExperimentConfig& cfg) {
  std::vector<GridPoint> out;
  for (double l : cfg.grid_l)
    for (double h : cfg.grid_h) out.push_back({l, h});
  return out;
}

SweepOptions sweep_options(const ExperimentConfig& cfg) {
  SweepOptions so;
  so.reps = cfg.sweep_reps;
  so.seed_size = cfg.seed_size;
  so.seed = derive_seed(cfg.seed, "sweep");
  so.semantics = cfg.semantics;
  so.scree_cap = cfg.pipeline.scree_cap;
  so.gmm = cfg.pipeline.gmm;
  return so;
}

HarnessOptions harness_options(const ExperimentConfig& cfg) {
  HarnessOptions ho;
  ho.n_seed_sets = cfg.n_seed_sets;
  ho.seed_size = cfg.seed_size;
  ho.x_max = cfg.x_max;
  ho.seed = derive_seed(cfg.seed, "harness");
  ho.pipeline = cfg.pipeline;
  ho.loss_ks = cfg.summary_x;
  return ho;
}

void write_report(Staging& st, const EvalReport& rep, const ExperimentConfig& cfg) {
  for (const auto& r : rep.regimes) {
    auto f = st.open("curves_" + r.name + ".csv");
    write_curve_csv(f, r);
  }
  {
    auto f = st.open("summary.tsv");
    write_summary_tsv(f, rep, cfg.summary_x);
  }
  {
    auto f = st.open("losses.csv");
    write_losses_csv(f, rep);
  }
  auto f = st.open("replicates.csv");
  f << "replicate,regime,dim,unranked,mean_candidates\n";
  for (const auto& r : rep.regimes)
    for (std::size_t i = 0; i < r.dims.size(); ++i) {
      std::size_t unranked = 0;
      for (std::size_t x : r.ranks[i]) unranked += x == kUnranked ? 1 : 0;
      f << i << ',' << r.name << ',' << r.dims[i] << ',' << unranked << ',' << fmt(r.mean_candidates) << '\n';
    }
}

nlohmann::json run_oracle(const OracleSettings& o, std::uint64_t seed) {
  const auto spec = EnumerationSpec::erdos_renyi(o.n, o.m, o.core, o.p, o.rho, o.voi);
  const auto dist = enumerate_support(spec);
  const auto part = partition_by_isomorphism(dist);
  const auto oracle = bayes_optimal_scheme(dist, part);
  const auto best = expected_verification(dist, part, oracle.scheme);
  std::vector<double> best_hits(best.size());
  std::adjacent_difference(best.begin(), best.end(), best_hits.begin());
  bool recall_ok = true, precision_ok = true, majorized = true;
  for (std::size_t i = 0; i < o.random_schemes; ++i) {
    const auto s = (i % 2 == 0) ? random_scheme(part, derive_seed(seed, "oracle-scheme", i))
                                : random_scheme(part, derive_seed(seed, "oracle-scheme", i), &oracle.scheme, 1 + i % 3);
    const auto h = expected_verification(dist, part, s);
    std::vector<double> hits(h.size());
    std::adjacent_difference(h.begin(), h.end(), hits.begin());
    majorized = majorized && prefix_majorizes(best_hits, hits);
    for (std::size_t k = 1; k + 1 <= dist.m; ++k) {
      recall_ok = recall_ok && exact_loss(dist, part, oracle.scheme, k, LossKind::Recall) <=
                                   exact_loss(dist, part, s, k, LossKind::Recall) + 1e-12;
      precision_ok = precision_ok && exact_loss(dist, part, oracle.scheme, k, LossKind::Precision) <=
                                         exact_loss(dist, part, s, k, LossKind::Precision) + 1e-12;
    }
  }
  bool consistent = true;
  const auto scheme = oracle.scheme.as_scheme();
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    const auto& sp = dist.support[part.classes[c].members.front()];
    const Graph g1 = dist.g1(sp), g2 = dist.g2(sp);
    for (std::size_t t = 0; t < o.obfuscation_checks; ++t) {
      const auto o1 = Obfuscation::random(o.m, derive_seed(seed, "oracle-obf-a", c * 1000 + t));
      const auto o2 = Obfuscation::random(o.m, derive_seed(seed, "oracle-obf-b", c * 1000 + t));
      consistent = consistent && check_scheme_consistency(scheme, g1, g2, o.voi, o1, o2);
    }
  }
  nlohmann::json j = oracle_to_json(dist, part, oracle);
  j["optimality"] = {{"schemes_tested", o.random_schemes},
                     {"recall_optimal", recall_ok},
                     {"precision_optimal", precision_ok},
                     {"prefix_majorized", majorized},
                     {"consistent", consistent}};
  return j;
}

void write_contamination(Staging& st, const SimulatedPair& s) {
  auto f = st.open("contamination.jsonl");
  write_audit_line(f, s.record, s.g2, 0);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  Staging st(cfg.out);
  nlohmann::json manifest;
  manifest["tool"] = "vnom";
  manifest["version"] = VNOM_VERSION;
  manifest["mode"] = std::string(to_string(cfg.mode));
  manifest["master_seed"] = cfg.seed;
  nlohmann::json conf = nlohmann::json::object();
  const IniConfig resolved = cfg.to_ini();
  for (const auto& [k, e] : resolved.entries()) conf[k] = e.value;
  manifest["config"] = conf;
  nlohmann::json seeds = nlohmann::json::object();
  for (const char* c : {"sbm", "adversary", "sweep", "harness"}) seeds[c] = derive_seed(cfg.seed, c);
  manifest["derived_seeds"] = seeds;

  if (cfg.mode == RunMode::Oracle) {
    auto f = st.open("oracle.json");
    f << run_oracle(cfg.oracle, derive_seed(cfg.seed, "oracle")).dump(2) << '\n';
  } else if (cfg.mode == RunMode::Simulate || cfg.mode == RunMode::Sweep) {
    const SimulatedPair s = simulate_pair(cfg);
    write_contamination(st, s);
    std::optional<ModularityGrid> grid;
    if (cfg.sweep || cfg.mode == RunMode::Sweep) {
      const auto pts = grid_points(cfg);
      grid = sweep_trim_params(s.g2c, pts, sweep_options(cfg));
      auto f = st.open("modularity_grid.csv");
      write_modularity_csv(f, *grid);
      if (grid->argmax) manifest["selected_trim"] = {{"l", grid->best().point.l}, {"h", grid->best().point.h}};
    }
    if (cfg.mode == RunMode::Simulate) {
      std::vector<RegimeSpec> regimes;
      std::vector<int> ident(s.clean.size());
      std::iota(ident.begin(), ident.end(), 0);
      regimes.push_back({"idealized", s.g2i, ident, std::nullopt});
      regimes.push_back({"contaminated", s.g2c, s.clean, std::nullopt});
      std::vector<GridPoint> trims = cfg.regimes;
      if (cfg.add_selected && grid && grid->argmax) trims.push_back(grid->best().point);
      for (const auto& g : trims) {
        TrimConfig tc{g.l, g.h, {}, cfg.semantics};
        regimes.push_back({regime_name(g), s.g2c, s.clean, tc});
      }
      // A selected point equal to a listed regime would duplicate its files.
      std::vector<std::string> names;
      for (const auto& r : regimes) names.push_back(r.name);
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      if (names.size() != regimes.size()) regimes.pop_back();
      const EvalReport rep = monte_carlo_harness(s.g1i, regimes, harness_options(cfg));
      write_report(st, rep, cfg);
      manifest["seeds_excluded"] = rep.seeds_excluded;
    }
  } else {
    const LoadedPair lp = load_pair(cfg.data.g1, cfg.data.g2, cfg.data.correspondence, cfg.data.seeds);
    const NominatablePair& pair = lp.pair;
    std::vector<int> cp(pair.g1.size(), -1);
    for (const auto& c : pair.core) cp[static_cast<std::size_t>(c.v1)] = c.v2;
    Graph base = pair.g2;
    std::vector<RegimeSpec> regimes;
    regimes.push_back({"idealized", pair.g2, cp, std::nullopt});
    if (cfg.adversary_enabled) {
      AdversaryConfig ac = cfg.adversary;
      ac.seed = derive_seed(cfg.seed, "adversary");
      ContaminationRecord rec = contaminate(pair.g2, ac);
      {
        auto f = st.open("contamination.jsonl");
        write_audit_line(f, rec, pair.g2, 0);
      }
      base = rec.contaminated;
      regimes.push_back({"contaminated", base, cp, std::nullopt});
    }
    for (const auto& g : cfg.regimes) regimes.push_back({regime_name(g), base, cp, TrimConfig{g.l, g.h, {}, cfg.semantics}});
    HarnessOptions ho = harness_options(cfg);
    std::vector<int> pool;
    for (const auto& label : cfg.data.voi) {
      const auto v = pair.g1.find(label);
      if (!v || cp[static_cast<std::size_t>(*v)] < 0)
        throw ConfigError("data.voi: '" + label + "' is not a core vertex of g1");
      pool.push_back(*v);
    }
    ho.voi_pool = pool;
    if (!lp.seeds.empty()) {
      std::vector<int> s1;
      for (const auto& s : lp.seeds) s1.push_back(s.v1);
      std::sort(s1.begin(), s1.end());
      ho.fixed_seed_sets = {s1};
      std::vector<int> voi = pool;
      if (voi.empty())
        for (const auto& c : pair.core)
          if (!std::binary_search(s1.begin(), s1.end(), c.v1)) voi.push_back(c.v1);
      if (!voi.empty()) {
        PipelineConfig pc = cfg.pipeline;
        pc.gmm.seed = derive_seed(cfg.seed, "nominate");
        const NominationList list = nominate(pair.g1, pair.g2, voi, lp.seeds, pc);
        auto f = st.open("nomination.csv");
        write_nomination_csv(f, list);
      }
    }
    const EvalReport rep = monte_carlo_harness(pair.g1, regimes, ho);
    write_report(st, rep, cfg);
    manifest["seeds_excluded"] = rep.seeds_excluded;
  }

  std::vector<std::string> outputs = st.names();
  outputs.push_back("manifest.json");
  manifest["outputs"] = outputs;
  {
    auto f = st.open("manifest.json");
    f << manifest.dump(2) << '\n';
  }
  RunResult res;
  res.files = st.commit();
  res.manifest = std::move(manifest);
  return res;
}

ExperimentConfig config_from_manifest(const nlohmann::json& manifest) {
  if (!manifest.contains("config") || !manifest["config"].is_object())
    throw ConfigError("manifest: missing config object");
  IniConfig ini;
  for (const auto& [k, v] : manifest["config"].items()) {
    if (!v.is_string()) throw ConfigError("manifest: config value for " + k + " is not a string");
    ini.set(k, v.get<std::string>(), "manifest");
  }
  return ExperimentConfig::from_ini(ini);
}

ExperimentConfig load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open manifest");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_manifest(j);
}

}  // namespace vnom
