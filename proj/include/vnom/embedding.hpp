#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vnom/graph.hpp"

namespace vnom {

// Eigenpairs of a symmetric adjacency matrix ordered by |eigenvalue|
// descending (ties: positive before negative, then original index). Each
// eigenvector is signed so its largest-magnitude entry is positive.
struct AdjacencySpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  // |eigenvalues| in order: the singular values of A.
  std::vector<double> magnitudes(std::size_t count) const;
};

AdjacencySpectrum adjacency_spectrum(const Graph& g);

struct Embedding {
  Eigen::MatrixXd points;        // n x d, row i is vertex vertex_order[i]
  std::vector<int> vertex_order;

  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
};

// X = U_A S_A^{1/2} from the d leading eigenpairs of |A|.
Embedding ase(const Graph& g, std::size_t d);
Embedding ase(const AdjacencySpectrum& spectrum, std::size_t d);

inline constexpr std::size_t kScreeCap = 100;

// Profile log-likelihood of a two-group Gaussian split after position q,
// for q = 1..values.size(); entry q-1 is the value for split q.
std::vector<double> profile_log_likelihood(std::span<const double> values);

struct ElbowResult {
  std::size_t first = 0;
  std::size_t second = 0;  // equal to `first` when the tail carries no second elbow
  std::size_t dim() const { return std::max(first, second); }
};

// Scree elbows by profile likelihood, the second found on the values
// strictly after the first. Requires >= 3 nonnegative descending values.
ElbowResult select_dim(std::span<const double> singular_values);

struct PairDimension {
  ElbowResult g1;
  ElbowResult g2;
  std::size_t dim;
};

PairDimension select_pair_dim(const AdjacencySpectrum& s1, const AdjacencySpectrum& s2,
                              std::size_t cap = kScreeCap);

struct ProcrustesAlignment {
  Eigen::MatrixXd rotation;
  double residual = 0.0;
};

// R = argmin over orthogonal O of ||Xs - Ys O||_F, via the SVD of Ys^T Xs.
ProcrustesAlignment procrustes(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys);

// Right-multiplies every row by r; rejects r that is not orthogonal to 1e-8.
Embedding align(const Embedding& emb, const Eigen::MatrixXd& r);

void write_embedding_csv(std::ostream& out, const Embedding& emb, const Graph& g);

}  // namespace vnom
