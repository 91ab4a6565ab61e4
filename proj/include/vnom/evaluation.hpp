#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vnom/graph.hpp"
#include "vnom/nomination.hpp"
#include "vnom/regularization.hpp"

namespace vnom {

// Rank of a counterpart that is absent from the list (e.g. trimmed away).
inline constexpr std::size_t kUnranked = std::numeric_limits<std::size_t>::max();

// Ranks are 1-based; kUnranked never counts as within the top k.
std::size_t verification_h(std::span<const std::size_t> ranks, std::size_t k);
double level_k_recall_loss(std::span<const std::size_t> ranks, std::size_t k);
double level_k_precision_loss(std::span<const std::size_t> ranks, std::size_t k);

// Ranks of the given g2 vertices in `list`; missing vertices get kUnranked.
std::vector<std::size_t> counterpart_ranks(const NominationList& list, std::span<const int> counterparts);

// List-based forms; these also require k <= m - 1 for m listed vertices.
std::size_t verification_h(const NominationList& list, std::span<const int> counterparts, std::size_t k);
double level_k_recall_loss(const NominationList& list, std::span<const int> counterparts, std::size_t k);
double level_k_precision_loss(const NominationList& list, std::span<const int> counterparts, std::size_t k);

struct CurvePoint {
  std::size_t x = 0;
  double mean = 0.0;
  double se = 0.0;
  double chance = 0.0;
};

// Mean and standard error (sd / sqrt(replicates)) over replicates of the
// number of ranks <= x, for x = 1..x_max.
std::vector<CurvePoint> performance_curve(const std::vector<std::vector<std::size_t>>& ranks, std::size_t x_max);

struct RegimeSpec {
  std::string name;
  Graph g2;
  std::vector<int> counterpart;     // per g1 vertex: g2 index, or -1
  std::optional<TrimConfig> trim;   // protect list is replaced by the replicate's seeds
};

struct HarnessOptions {
  std::size_t n_seed_sets = 50;
  std::size_t seed_size = 10;
  std::size_t x_max = 50;
  std::uint64_t seed = 0;
  PipelineConfig pipeline;
  std::vector<int> voi_pool;  // g1 vertices swept as v.o.i.; empty means the whole shared core
  std::vector<std::vector<int>> fixed_seed_sets;  // used instead of random draws when nonempty
  std::vector<std::size_t> loss_ks{1, 5, 10, 15, 20, 30};
};

struct LossPoint {
  std::size_t k = 0;
  double recall = 0.0;
  double precision = 0.0;
};

struct RegimeResult {
  std::string name;
  std::vector<std::vector<std::size_t>> ranks;  // [replicate][v.o.i.]
  std::vector<CurvePoint> curve;
  std::vector<LossPoint> losses;
  std::vector<std::size_t> dims;                // embedding dimension per replicate
  double mean_candidates = 0.0;
  double mean_voi = 0.0;
  std::size_t unranked = 0;                     // counterparts trimmed away, summed over replicates
};

struct ReplicateInfo {
  std::vector<int> seeds;  // g1 indices
  std::vector<int> voi;
};

struct EvalReport {
  std::vector<RegimeResult> regimes;
  std::vector<ReplicateInfo> replicates;
  std::size_t seeds_excluded = 0;  // pool vertices skipped because they were seeds

  const RegimeResult& regime(std::string_view name) const;
};

// Replicate r draws one seed set from the shared core and reuses it in
// every regime. Each v.o.i. of the sweep is nominated on its own.
EvalReport monte_carlo_harness(const Graph& g1, const std::vector<RegimeSpec>& regimes, const HarnessOptions& opt);

void write_curve_csv(std::ostream& out, const RegimeResult& r);
// Regime x {1,5,10,15,20,30} table of mean counts.
void write_summary_tsv(std::ostream& out, const EvalReport& rep, std::span<const std::size_t> xs);
void write_losses_csv(std::ostream& out, const EvalReport& rep);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace vnom
