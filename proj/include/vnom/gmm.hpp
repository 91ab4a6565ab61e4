#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace vnom {

struct KMeansResult {
  Eigen::MatrixXd centers;  // k x d
  std::vector<int> labels;
  double inertia = 0.0;
};

// k-means++ seeding followed by Lloyd iterations.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter = 100);

struct GmmOptions {
  std::size_t k_min = 1;
  std::size_t k_max = 9;
  std::size_t restarts = 5;
  std::size_t max_iter = 500;
  double tol = 1e-8;          // relative log-likelihood change
  double floor_scale = 1e-6;  // covariance eigenvalue floor, times trace(cov)/d
  std::uint64_t seed = 0;
};

// Full-covariance Gaussian mixture.
struct GmmModel {
  std::size_t k = 0;
  Eigen::VectorXd weights;
  Eigen::MatrixXd means;                  // k x d
  std::vector<Eigen::MatrixXd> covariances;
  std::vector<int> assignment;            // argmax responsibility per fitted point
  double loglik = 0.0;
  double bic = 0.0;
  double floor = 0.0;
  std::vector<double> loglik_trace;       // one entry per EM iteration
  bool monotone = true;                   // trace never dropped by more than 1e-9 relative

  std::size_t dim() const { return static_cast<std::size_t>(means.cols()); }
  // Hard assignment of arbitrary points.
  std::vector<int> predict(const Eigen::MatrixXd& points) const;
  std::size_t parameter_count() const;
};

// Fits one mixture with exactly k components (best of the restarts), or
// nothing if every restart degenerates.
std::optional<GmmModel> fit_gmm_k(const Eigen::MatrixXd& points, std::size_t k, const GmmOptions& opt);

struct GmmSelection {
  GmmModel best;
  std::vector<double> bic_by_k;  // NaN for skipped k, indexed from k_min
};

// BIC-optimal model over k_min..k_max (larger BIC wins, ties to smaller k).
// Throws std::runtime_error if no k produced a model.
GmmSelection fit_gmm(const Eigen::MatrixXd& points, const GmmOptions& opt);

}  // namespace vnom
