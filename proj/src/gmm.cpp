#include "vnom/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vnom/rng.hpp"

namespace vnom {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double sq_dist(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

Eigen::MatrixXd plus_plus_centers(const Eigen::MatrixXd& x, std::size_t k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), x.cols());
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  Eigen::Index pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
  for (std::size_t c = 0; c < k; ++c) {
    centers.row(static_cast<Eigen::Index>(c)) = x.row(pick);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& di = d2[static_cast<std::size_t>(i)];
      di = std::min(di, sq_dist(x, i, centers, static_cast<Eigen::Index>(c)));
      total += di;
    }
    if (c + 1 == k) break;
    if (total <= 0.0) {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
      continue;
    }
    double u = rng.uniform() * total;
    pick = n - 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      u -= d2[static_cast<std::size_t>(i)];
      if (u < 0.0) {
        pick = i;
        break;
      }
    }
  }
  return centers;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& x, std::size_t k, std::uint64_t seed, std::size_t max_iter) {
  const Eigen::Index n = x.rows();
  if (k < 1 || static_cast<Eigen::Index>(k) > n) throw std::invalid_argument("kmeans: need 1 <= k <= n");
  Rng rng(seed);
  KMeansResult r;
  r.centers = plus_plus_centers(x, k, rng);
  r.labels.assign(static_cast<std::size_t>(n), -1);
  const auto kk = static_cast<Eigen::Index>(k);
  for (std::size_t it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < kk; ++c) {
        const double d = sq_dist(x, i, r.centers, c);
        if (d < bd) {
          bd = d;
          best = static_cast<int>(c);
        }
      }
      if (r.labels[static_cast<std::size_t>(i)] != best) {
        r.labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kk, x.cols());
    std::vector<std::size_t> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = r.labels[static_cast<std::size_t>(i)];
      sums.row(c) += x.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < kk; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        r.centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: move it onto the point farthest from its center.
      Eigen::Index far = 0;
      double fd = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = sq_dist(x, i, r.centers, r.labels[static_cast<std::size_t>(i)]);
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      r.centers.row(c) = x.row(far);
      r.labels[static_cast<std::size_t>(far)] = static_cast<int>(c);
      changed = true;
    }
    if (!changed) break;
  }
  r.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) r.inertia += sq_dist(x, i, r.centers, r.labels[static_cast<std::size_t>(i)]);
  return r;
}

std::size_t GmmModel::parameter_count() const {
  const std::size_t d = dim();
  return (k - 1) + k * d + k * d * (d + 1) / 2;
}

namespace {

// logp(i, c) = log w_c + log N(x_i; mu_c, Sigma_c). Returns false if some covariance is not positive definite.
bool component_log_densities(const Eigen::MatrixXd& x, const GmmModel& m, Eigen::MatrixXd& logp) {
  const Eigen::Index n = x.rows(), d = x.cols();
  logp.resize(n, static_cast<Eigen::Index>(m.k));
  for (std::size_t c = 0; c < m.k; ++c) {
    Eigen::LLT<Eigen::MatrixXd> llt(m.covariances[c]);
    if (llt.info() != Eigen::Success) return false;
    const Eigen::MatrixXd l = llt.matrixL();
    const double logdet = 2.0 * l.diagonal().array().log().sum();
    Eigen::MatrixXd centered = (x.rowwise() - m.means.row(static_cast<Eigen::Index>(c))).transpose();
    llt.matrixL().solveInPlace(centered);
    const Eigen::VectorXd maha = centered.colwise().squaredNorm().transpose();
    const double base = std::log(m.weights(static_cast<Eigen::Index>(c))) - 0.5 * (static_cast<double>(d) * kLog2Pi + logdet);
    logp.col(static_cast<Eigen::Index>(c)) = (base - 0.5 * maha.array()).matrix();
  }
  return true;
}

// Normalizes logp rows into responsibilities; returns the log-likelihood.
double e_step(Eigen::MatrixXd& logp) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < logp.rows(); ++i) {
    const double mx = logp.row(i).maxCoeff();
    const double lse = mx + std::log((logp.row(i).array() - mx).exp().sum());
    logp.row(i) = (logp.row(i).array() - lse).exp().matrix();
    total += lse;
  }
  return total;
}

Eigen::MatrixXd clamp_eigenvalues(const Eigen::MatrixXd& s, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(floor);
  Eigen::MatrixXd out = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

// M-step from responsibilities; false if a component collapses.
bool m_step(const Eigen::MatrixXd& x, const Eigen::MatrixXd& resp, GmmModel& m) {
  const Eigen::Index n = x.rows();
  const Eigen::VectorXd nk = resp.colwise().sum().transpose();
  for (std::size_t c = 0; c < m.k; ++c)
    if (nk(static_cast<Eigen::Index>(c)) < 1e-8) return false;
  m.weights = nk / static_cast<double>(n);
  m.means = (resp.transpose() * x).array().colwise() / nk.array();
  m.covariances.resize(m.k);
  for (std::size_t c = 0; c < m.k; ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    const Eigen::MatrixXd centered = x.rowwise() - m.means.row(ci);
    Eigen::MatrixXd s = (centered.array().colwise() * resp.col(ci).array()).matrix().transpose() * centered / nk(ci);
    s = 0.5 * (s + s.transpose());
    m.covariances[c] = clamp_eigenvalues(s, m.floor);
  }
  return true;
}

double covariance_floor(const Eigen::MatrixXd& x, double scale) {
  const Eigen::RowVectorXd mu = x.colwise().mean();
  const double trace = (x.rowwise() - mu).squaredNorm() / static_cast<double>(x.rows());
  const double f = scale * trace / static_cast<double>(x.cols());
  return f > 0.0 ? f : scale;
}

std::optional<GmmModel> run_em(const Eigen::MatrixXd& x, std::size_t k, const GmmOptions& opt, double floor,
                               std::uint64_t seed) {
  const Eigen::Index n = x.rows();
  GmmModel m;
  m.k = k;
  m.floor = floor;
  const KMeansResult km = kmeans(x, k, seed);
  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < n; ++i) resp(i, km.labels[static_cast<std::size_t>(i)]) = 1.0;
  if (!m_step(x, resp, m)) return std::nullopt;
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    if (!component_log_densities(x, m, resp)) return std::nullopt;
    const double ll = e_step(resp);
    if (!std::isfinite(ll)) return std::nullopt;
    m.loglik_trace.push_back(ll);
    if (ll < prev - 1e-9 * std::max(1.0, std::abs(prev))) m.monotone = false;
    m.loglik = ll;
    const bool converged = std::isfinite(prev) && std::abs(ll - prev) <= opt.tol * std::abs(ll);
    if (converged) break;
    prev = ll;
    GmmModel next = m;
    if (!m_step(x, resp, next)) return std::nullopt;
    m = std::move(next);
  }
  // Final responsibilities for the returned parameters.
  if (!component_log_densities(x, m, resp)) return std::nullopt;
  m.loglik = e_step(resp);
  m.assignment.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index arg = 0;
    resp.row(i).maxCoeff(&arg);
    m.assignment[static_cast<std::size_t>(i)] = static_cast<int>(arg);
  }
  m.bic = 2.0 * m.loglik - static_cast<double>(m.parameter_count()) * std::log(static_cast<double>(n));
  return m;
}

}  // namespace

std::vector<int> GmmModel::predict(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd logp;
  if (!component_log_densities(points, *this, logp)) throw std::runtime_error("GmmModel::predict: covariance not SPD");
  std::vector<int> out(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    Eigen::Index arg = 0;
    logp.row(i).maxCoeff(&arg);
    out[static_cast<std::size_t>(i)] = static_cast<int>(arg);
  }
  return out;
}

std::optional<GmmModel> fit_gmm_k(const Eigen::MatrixXd& x, std::size_t k, const GmmOptions& opt) {
  if (x.cols() < 1) throw std::invalid_argument("fit_gmm: need d >= 1");
  if (k < 1 || static_cast<Eigen::Index>(k) > x.rows()) return std::nullopt;
  const double floor = covariance_floor(x, opt.floor_scale);
  std::optional<GmmModel> best;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, opt.restarts); ++r) {
    auto m = run_em(x, k, opt, floor, derive_seed(opt.seed, "gmm-restart", k * 1000 + r));
    if (m && (!best || m->loglik > best->loglik)) best = std::move(m);
  }
  return best;
}

GmmSelection fit_gmm(const Eigen::MatrixXd& x, const GmmOptions& opt) {
  if (opt.k_min < 1 || opt.k_max < opt.k_min) throw std::invalid_argument("fit_gmm: invalid k range");
  if (static_cast<Eigen::Index>(opt.k_min) > x.rows()) throw std::invalid_argument("fit_gmm: fewer points than k_min");
  GmmSelection sel;
  bool found = false;
  for (std::size_t k = opt.k_min; k <= opt.k_max; ++k) {
    auto m = fit_gmm_k(x, k, opt);
    sel.bic_by_k.push_back(m ? m->bic : std::numeric_limits<double>::quiet_NaN());
    if (m && (!found || m->bic > sel.best.bic)) {
      sel.best = std::move(*m);
      found = true;
    }
  }
  if (!found) throw std::runtime_error("fit_gmm: every component count degenerated");
  return sel;
}

}  // namespace vnom
