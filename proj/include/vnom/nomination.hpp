#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vnom/embedding.hpp"
#include "vnom/gmm.hpp"
#include "vnom/graph.hpp"
#include "vnom/models.hpp"

namespace vnom {

// max(D_u, D_v) with D_w = sqrt((u - v) Sigma_w^{-1} (u - v)^T).
// Throws std::invalid_argument if a covariance is not SPD.
double mahalanobis_delta(const Eigen::VectorXd& xu, const Eigen::VectorXd& xv, const Eigen::MatrixXd& cov_u,
                         const Eigen::MatrixXd& cov_v);

struct PipelineConfig {
  std::optional<std::size_t> dim;  // overrides elbow selection
  std::size_t scree_cap = kScreeCap;
  GmmOptions gmm;
  bool pooled_gmm = true;  // one mixture over both graphs' points
  bool exclude_seeds = true;
};

struct PipelineState {
  std::optional<PairDimension> elbows;  // absent when dim was overridden
  std::size_t dim = 0;
  Embedding x;          // g1
  Embedding y;          // g2, aligned onto g1
  ProcrustesAlignment alignment;
  GmmModel model1;      // mixture used for g1 points
  GmmModel model2;      // mixture used for g2 points (same as model1 when pooled)
  std::vector<int> comp1;
  std::vector<int> comp2;
};

// Embeds both graphs at a shared dimension, aligns g2 onto g1 on the seed
// rows and clusters. Spectra may be passed in to skip the eigensolves.
PipelineState fit_pipeline(const Graph& g1, const Graph& g2, std::span<const CorePair> seeds,
                           const PipelineConfig& cfg, const AdjacencySpectrum* spec1 = nullptr,
                           const AdjacencySpectrum* spec2 = nullptr);

// Delta(v, u) for every v in `voi` (g1 rows) and u in `candidates` (g2 rows).
Eigen::MatrixXd score_matrix(const PipelineState& st, std::span<const int> voi, std::span<const int> candidates);

struct NominationList {
  std::vector<std::string> order;  // g2 labels, best first
  std::vector<int> vertices;       // g2 indices matching `order`
  std::vector<double> scores;
  std::string tiebreak = "score,label";

  std::optional<std::size_t> rank_of(int v2) const;  // 1-based
};

// Orders candidates by (min over V* of Delta, label). `labels` gives the
// (obfuscated) label of every g2 vertex and defaults to g2's names.
NominationList rank_candidates(const PipelineState& st, std::span<const int> voi, std::span<const int> candidates,
                               const std::vector<std::string>& labels);

// Full pipeline. Candidates are all g2 vertices, minus seeds unless the
// config keeps them; V* must not contain seeds when they are excluded.
NominationList nominate(const Graph& g1, const Graph& g2, std::span<const int> voi, std::span<const CorePair> seeds,
                        const PipelineConfig& cfg, const std::vector<std::string>& labels = {});
NominationList nominate(const NominatablePair& pair, std::span<const CorePair> seeds, const PipelineConfig& cfg);

// Probability x/m that a uniformly random order puts a given vertex in the top x.
double chance_rank_fraction(std::size_t m, std::size_t x);

void write_nomination_csv(std::ostream& out, const NominationList& list);

}  // namespace vnom
