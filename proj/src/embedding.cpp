#include "vnom/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace vnom {

std::vector<double> AdjacencySpectrum::magnitudes(std::size_t count) const {
  count = std::min<std::size_t>(count, static_cast<std::size_t>(values.size()));
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::abs(values(static_cast<Eigen::Index>(i)));
  return out;
}

AdjacencySpectrum adjacency_spectrum(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  AdjacencySpectrum s;
  if (n == 0) return s;
  Eigen::Map<const Eigen::MatrixXd> a(g.adjacency().data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.info() != Eigen::Success) throw std::runtime_error("adjacency_spectrum: eigensolver did not converge");
  const Eigen::VectorXd& vals = eig.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    const double ax = std::abs(vals(x)), ay = std::abs(vals(y));
    if (ax != ay) return ax > ay;
    if ((vals(x) > 0) != (vals(y) > 0)) return vals(x) > 0;
    return x < y;
  });
  s.values.resize(n);
  s.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    s.values(j) = vals(src);
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    s.vectors.col(j) = v;
  }
  return s;
}

Embedding ase(const AdjacencySpectrum& spectrum, std::size_t d) {
  const auto n = spectrum.values.size();
  if (d < 1 || d > static_cast<std::size_t>(n)) throw std::invalid_argument("ase: need 1 <= d <= n");
  const auto dd = static_cast<Eigen::Index>(d);
  Embedding e;
  e.points = spectrum.vectors.leftCols(dd) * spectrum.values.head(dd).cwiseAbs().cwiseSqrt().asDiagonal();
  e.vertex_order.resize(static_cast<std::size_t>(n));
  std::iota(e.vertex_order.begin(), e.vertex_order.end(), 0);
  return e;
}

Embedding ase(const Graph& g, std::size_t d) {
  if (d < 1 || d > g.size()) throw std::invalid_argument("ase: need 1 <= d <= n");
  return ase(adjacency_spectrum(g), d);
}

std::vector<double> profile_log_likelihood(std::span<const double> values) {
  const std::size_t p = values.size();
  std::vector<double> ll(p, -std::numeric_limits<double>::infinity());
  constexpr double kLog2Pi = 1.8378770664093453;
  for (std::size_t q = 1; q <= p; ++q) {
    if (q == 1 && p == 2) continue;
    auto mean = [](std::span<const double> s) {
      return s.empty() ? 0.0 : std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    };
    const auto head = values.subspan(0, q);
    const auto tail = values.subspan(q);
    const double m1 = mean(head), m2 = mean(tail);
    double ss = 0.0;
    for (double x : head) ss += (x - m1) * (x - m1);
    for (double x : tail) ss += (x - m2) * (x - m2);
    const double denom = static_cast<double>(p) - 1.0 - (q < p ? 1.0 : 0.0);
    const double var = ss / denom;
    if (var == 0.0) {
      ll[q - 1] = std::numeric_limits<double>::infinity();
      continue;
    }
    // Sum of Gaussian log-densities with the pooled variance.
    ll[q - 1] = -0.5 * static_cast<double>(p) * (kLog2Pi + std::log(var)) - 0.5 * ss / var;
  }
  return ll;
}

namespace {

std::size_t single_elbow(std::span<const double> values) {
  const auto ll = profile_log_likelihood(values);
  // max_element keeps the first maximum: ties go to the lowest split.
  return static_cast<std::size_t>(std::max_element(ll.begin(), ll.end()) - ll.begin()) + 1;
}

}  // namespace

ElbowResult select_dim(std::span<const double> values) {
  if (values.size() < 3) throw std::invalid_argument("select_dim: need at least 3 values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) throw std::invalid_argument("select_dim: values must be finite and >= 0");
    if (i > 0 && values[i] > values[i - 1]) throw std::invalid_argument("select_dim: values must be descending");
  }
  ElbowResult r;
  r.first = single_elbow(values);
  r.second = r.first;
  const auto tail = values.subspan(r.first);
  if (tail.size() >= 3 && tail.front() != tail.back()) r.second = r.first + single_elbow(tail);
  return r;
}

PairDimension select_pair_dim(const AdjacencySpectrum& s1, const AdjacencySpectrum& s2, std::size_t cap) {
  PairDimension out;
  const auto v1 = s1.magnitudes(cap);
  const auto v2 = s2.magnitudes(cap);
  out.g1 = select_dim(v1);
  out.g2 = select_dim(v2);
  out.dim = std::max(out.g1.dim(), out.g2.dim());
  return out;
}

ProcrustesAlignment procrustes(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys) {
  if (xs.rows() != ys.rows() || xs.cols() != ys.cols())
    throw std::invalid_argument("procrustes: seed matrices must have matching shapes");
  if (xs.rows() < 1 || xs.cols() < 1) throw std::invalid_argument("procrustes: need at least one seed and one dimension");
  const Eigen::MatrixXd m = ys.transpose() * xs;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesAlignment out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  out.residual = (xs - ys * out.rotation).norm();
  return out;
}

Embedding align(const Embedding& emb, const Eigen::MatrixXd& r) {
  const auto d = static_cast<Eigen::Index>(emb.dim());
  if (r.rows() != d || r.cols() != d) throw std::invalid_argument("align: rotation has the wrong shape");
  if ((r.transpose() * r - Eigen::MatrixXd::Identity(d, d)).norm() > 1e-8)
    throw std::invalid_argument("align: rotation is not orthogonal");
  Embedding out = emb;
  out.points = emb.points * r;
  return out;
}

void write_embedding_csv(std::ostream& out, const Embedding& emb, const Graph& g) {
  out << "vertex";
  for (std::size_t j = 0; j < emb.dim(); ++j) out << ",x" << j + 1;
  out << '\n';
  const auto old = out.precision(12);
  for (std::size_t i = 0; i < emb.size(); ++i) {
    out << g.name(emb.vertex_order[i]);
    for (Eigen::Index j = 0; j < emb.points.cols(); ++j) out << ',' << emb.points(static_cast<Eigen::Index>(i), j);
    out << '\n';
  }
  out.precision(old);
}

}  // namespace vnom
