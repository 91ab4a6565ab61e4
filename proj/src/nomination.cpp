#include "vnom/nomination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "vnom/rng.hpp"

namespace vnom {

namespace {

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (cov.rows() != cov.cols() || llt.info() != Eigen::Success)
    throw std::invalid_argument("mahalanobis_delta: covariance is not SPD");
  return llt;
}

double maha(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& diff) {
  return std::sqrt(llt.matrixL().solve(diff).squaredNorm());
}

Eigen::MatrixXd rows_of(const Embedding& e, std::span<const int> idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), e.points.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = e.points.row(idx[i]);
  return out;
}

}  // namespace

double mahalanobis_delta(const Eigen::VectorXd& xu, const Eigen::VectorXd& xv, const Eigen::MatrixXd& cov_u,
                         const Eigen::MatrixXd& cov_v) {
  if (xu.size() != xv.size() || cov_u.rows() != xu.size() || cov_v.rows() != xu.size())
    throw std::invalid_argument("mahalanobis_delta: dimension mismatch");
  const Eigen::VectorXd diff = xu - xv;
  return std::max(maha(checked_llt(cov_u), diff), maha(checked_llt(cov_v), diff));
}

PipelineState fit_pipeline(const Graph& g1, const Graph& g2, std::span<const CorePair> seeds,
                           const PipelineConfig& cfg, const AdjacencySpectrum* spec1,
                           const AdjacencySpectrum* spec2) {
  if (seeds.empty()) throw std::invalid_argument("fit_pipeline: need at least one seed");
  for (const auto& s : seeds)
    if (!g1.contains(s.v1) || !g2.contains(s.v2)) throw std::invalid_argument("fit_pipeline: seed not in both graphs");
  AdjacencySpectrum own1, own2;
  if (!spec1) {
    own1 = adjacency_spectrum(g1);
    spec1 = &own1;
  }
  if (!spec2) {
    own2 = adjacency_spectrum(g2);
    spec2 = &own2;
  }
  PipelineState st;
  if (cfg.dim) {
    st.dim = *cfg.dim;
  } else {
    st.elbows = select_pair_dim(*spec1, *spec2, cfg.scree_cap);
    st.dim = st.elbows->dim;
  }
  st.dim = std::min({st.dim, g1.size(), g2.size()});
  st.x = ase(*spec1, st.dim);
  const Embedding y = ase(*spec2, st.dim);
  std::vector<int> s1, s2;
  for (const auto& s : seeds) {
    s1.push_back(s.v1);
    s2.push_back(s.v2);
  }
  st.alignment = procrustes(rows_of(st.x, s1), rows_of(y, s2));
  st.y = align(y, st.alignment.rotation);

  if (cfg.pooled_gmm) {
    Eigen::MatrixXd all(st.x.points.rows() + st.y.points.rows(), static_cast<Eigen::Index>(st.dim));
    all << st.x.points, st.y.points;
    st.model1 = fit_gmm(all, cfg.gmm).best;
    st.model2 = st.model1;
    const auto n1 = static_cast<std::ptrdiff_t>(g1.size());
    st.comp1.assign(st.model1.assignment.begin(), st.model1.assignment.begin() + n1);
    st.comp2.assign(st.model1.assignment.begin() + n1, st.model1.assignment.end());
  } else {
    st.model1 = fit_gmm(st.x.points, cfg.gmm).best;
    GmmOptions o2 = cfg.gmm;
    o2.seed = derive_seed(cfg.gmm.seed, "gmm-second-graph");
    st.model2 = fit_gmm(st.y.points, o2).best;
    st.comp1 = st.model1.assignment;
    st.comp2 = st.model2.assignment;
  }
  return st;
}

namespace {

// whitened[c] = L_c^{-1} P^T for every component c, so that the
// Mahalanobis distance under component c is a Euclidean column distance.
std::vector<Eigen::MatrixXd> whiten(const GmmModel& m, const Eigen::MatrixXd& p) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& c : m.covariances) {
    const auto llt = checked_llt(c);
    out.push_back(llt.matrixL().solve(p.transpose()));
  }
  return out;
}

}  // namespace

Eigen::MatrixXd score_matrix(const PipelineState& st, std::span<const int> voi, std::span<const int> candidates) {
  const auto x1 = whiten(st.model1, st.x.points), y1 = whiten(st.model1, st.y.points);
  const auto x2 = whiten(st.model2, st.x.points), y2 = whiten(st.model2, st.y.points);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(voi.size()), static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t i = 0; i < voi.size(); ++i) {
    const int v = voi[i];
    const auto cv = static_cast<std::size_t>(st.comp1[static_cast<std::size_t>(v)]);
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      const int u = candidates[j];
      const auto cu = static_cast<std::size_t>(st.comp2[static_cast<std::size_t>(u)]);
      const double dv = (x1[cv].col(v) - y1[cv].col(u)).norm();
      const double du = (x2[cu].col(v) - y2[cu].col(u)).norm();
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::max(du, dv);
    }
  }
  return out;
}

std::optional<std::size_t> NominationList::rank_of(int v2) const {
  const auto it = std::find(vertices.begin(), vertices.end(), v2);
  if (it == vertices.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vertices.begin()) + 1;
}

NominationList rank_candidates(const PipelineState& st, std::span<const int> voi, std::span<const int> candidates,
                               const std::vector<std::string>& labels) {
  if (voi.empty()) throw std::invalid_argument("rank_candidates: V* is empty");
  const Eigen::MatrixXd s = score_matrix(st, voi, candidates);
  const Eigen::VectorXd best = s.colwise().minCoeff().transpose();
  std::vector<std::size_t> idx(candidates.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto label = [&](std::size_t j) -> const std::string& { return labels[static_cast<std::size_t>(candidates[j])]; };
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double sa = best(static_cast<Eigen::Index>(a)), sb = best(static_cast<Eigen::Index>(b));
    if (sa != sb) return sa < sb;
    return label(a) < label(b);
  });
  NominationList out;
  for (std::size_t j : idx) {
    out.order.push_back(label(j));
    out.vertices.push_back(candidates[j]);
    out.scores.push_back(best(static_cast<Eigen::Index>(j)));
  }
  return out;
}

NominationList nominate(const Graph& g1, const Graph& g2, std::span<const int> voi, std::span<const CorePair> seeds,
                        const PipelineConfig& cfg, const std::vector<std::string>& labels) {
  const std::vector<std::string>& lab = labels.empty() ? g2.names() : labels;
  if (lab.size() != g2.size()) throw std::invalid_argument("nominate: label count differs from g2 size");
  std::vector<char> seed2(g2.size(), 0);
  for (const auto& s : seeds) {
    if (!g2.contains(s.v2)) throw std::invalid_argument("nominate: seed not in g2");
    seed2[static_cast<std::size_t>(s.v2)] = 1;
  }
  for (int v : voi) {
    if (!g1.contains(v)) throw std::invalid_argument("nominate: vertex of interest not in g1");
    if (cfg.exclude_seeds && std::any_of(seeds.begin(), seeds.end(), [v](const CorePair& s) { return s.v1 == v; }))
      throw std::invalid_argument("nominate: vertex of interest is a seed");
  }
  std::vector<int> candidates;
  for (std::size_t u = 0; u < g2.size(); ++u)
    if (!cfg.exclude_seeds || !seed2[u]) candidates.push_back(static_cast<int>(u));
  const PipelineState st = fit_pipeline(g1, g2, seeds, cfg);
  return rank_candidates(st, voi, candidates, lab);
}

NominationList nominate(const NominatablePair& pair, std::span<const CorePair> seeds, const PipelineConfig& cfg) {
  for (const auto& s : seeds) {
    const auto c = pair.counterpart(s.v1);
    if (!c || *c != s.v2) throw std::invalid_argument("nominate: seed is not a core pair");
  }
  return nominate(pair.g1, pair.g2, pair.voi, seeds, cfg);
}

double chance_rank_fraction(std::size_t m, std::size_t x) {
  if (x < 1 || x > m) throw std::invalid_argument("chance_rank_fraction: need 1 <= x <= m");
  return static_cast<double>(x) / static_cast<double>(m);
}

void write_nomination_csv(std::ostream& out, const NominationList& list) {
  out << "rank,g2_label,score\n";
  const auto old = out.precision(12);
  for (std::size_t i = 0; i < list.order.size(); ++i) out << i + 1 << ',' << list.order[i] << ',' << list.scores[i] << '\n';
  out.precision(old);
}

}  // namespace vnom
