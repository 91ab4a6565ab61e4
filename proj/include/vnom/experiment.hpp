#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vnom/adversary.hpp"
#include "vnom/config.hpp"
#include "vnom/evaluation.hpp"
#include "vnom/models.hpp"
#include "vnom/nomination.hpp"
#include "vnom/regularization.hpp"

namespace vnom {

enum class RunMode { Simulate, RealData, Sweep, Oracle };

std::string_view to_string(RunMode m);

struct OracleSettings {
  std::size_t n = 3;
  std::size_t m = 3;
  std::size_t core = 3;
  double p = 0.3;
  double rho = 0.0;
  std::vector<int> voi{0};          // g1 indices
  std::size_t random_schemes = 1000;
  std::size_t obfuscation_checks = 3;  // random obfuscation pairs per class
};

struct DataSettings {
  std::string g1;
  std::string g2;
  std::string correspondence;  // TSV g1_label \t g2_label; empty means shared labels
  std::string seeds;           // optional file of g1 labels
  std::vector<std::string> voi;
};

struct ExperimentConfig {
  RunMode mode = RunMode::Simulate;
  std::uint64_t seed = 1;
  std::string out = "results";

  std::size_t n = 200;
  double p = 0.4, q = 0.5, r = 0.3;
  std::vector<double> prior{0.5, 0.5};
  double rho = 0.7;

  bool adversary_enabled = true;
  AdversaryConfig adversary;

  std::vector<GridPoint> regimes{{0.1, 0.1}, {0.1, 0.0}, {0.2, 0.2}};
  bool sweep = true;
  bool add_selected = false;  // extra regime at the modularity argmax
  std::vector<double> grid_l{0, 0.05, 0.1, 0.15, 0.2, 0.25};
  std::vector<double> grid_h{0, 0.05, 0.1, 0.15, 0.2, 0.25};
  std::size_t sweep_reps = 5;
  TrimSemantics semantics = TrimSemantics::Prose;

  std::size_t n_seed_sets = 50;
  std::size_t seed_size = 10;
  std::size_t x_max = 50;
  std::vector<std::size_t> summary_x{1, 5, 10, 15, 20, 30};

  PipelineConfig pipeline;
  DataSettings data;
  OracleSettings oracle;

  // Throws ConfigError pointing at the offending line.
  static ExperimentConfig from_ini(const IniConfig& ini);
  // Every setting written out explicitly, for manifests.
  IniConfig to_ini() const;
};

struct RunResult {
  std::vector<std::filesystem::path> files;
  nlohmann::json manifest;
};

// Writes all outputs into cfg.out. Files are produced in a staging
// directory and moved into place only once the whole run succeeded.
RunResult run_experiment(const ExperimentConfig& cfg);

// Replays the configuration stored in a manifest, optionally redirecting
// the output directory.
ExperimentConfig config_from_manifest(const nlohmann::json& manifest);
ExperimentConfig load_manifest(const std::string& path);

struct LoadedPair {
  NominatablePair pair;
  std::vector<CorePair> seeds;
};

// Edge lists plus a correspondence TSV (tab-separated label pairs, `#`
// comments) and an optional seed file (one g1 label per line).
LoadedPair load_pair(const std::string& edge_list_1, const std::string& edge_list_2,
                     const std::string& correspondence_tsv, const std::string& seeds_file = "");

std::vector<std::pair<std::string, std::string>> read_correspondence(std::istream& in, std::string_view source);

}  // namespace vnom
