#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "vnom/graph.hpp"
#include "vnom/nomination.hpp"

namespace vnom {

enum class TrimSemantics {
  Prose,    // l trims the lowest-degree fraction, h the highest
  Literal,  // ranks by descending degree, so l trims the highest-degree fraction
};

struct TrimConfig {
  double l = 0.0;
  double h = 0.0;
  std::vector<int> protect;  // seeds, never trimmed
  TrimSemantics semantics = TrimSemantics::Prose;

  void validate() const;
};

// Kept vertex indices in original order, protected ones included. Ranks
// are average ranks over tied degrees.
std::vector<int> trim_keep(const Graph& g, const TrimConfig& cfg);
Graph trim(const Graph& g, const TrimConfig& cfg);

// Newman modularity with weighted degrees. Throws on an edgeless graph.
double modularity(const Graph& g, std::span<const int> clustering);

struct GridPoint {
  double l = 0.0;
  double h = 0.0;
};

struct GridEntry {
  GridPoint point;
  double mean_q = 0.0;
  double se_q = 0.0;
  std::size_t reps = 0;  // replicates that produced a value
  bool valid = false;
};

struct ModularityGrid {
  std::vector<GridEntry> entries;
  std::optional<std::size_t> argmax;  // index into entries

  const GridEntry& best() const { return entries.at(*argmax); }
};

struct SweepOptions {
  std::size_t reps = 1;
  std::size_t seed_size = 10;
  std::uint64_t seed = 0;
  TrimSemantics semantics = TrimSemantics::Prose;
  std::size_t scree_cap = kScreeCap;
  GmmOptions gmm;
};

// Standard grid l, h in {0, .05, ..., .25}.
std::vector<GridPoint> default_trim_grid();

// For each grid point and replicate: trim with a fresh random seed set
// protected, embed, cluster with the GMM, score modularity. Replicate r
// uses the same seed set at every grid point.
ModularityGrid sweep_trim_params(const Graph& g, std::span<const GridPoint> grid, const SweepOptions& opt);

void write_modularity_csv(std::ostream& out, const ModularityGrid& grid);

}  // namespace vnom
