#include "vnom/adversary.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "vnom/rng.hpp"

namespace vnom {

void AdversaryConfig::validate() const {
  if (!(pi_plus > 0.0 && pi_plus < 1.0) || !(pi_minus > 0.0 && pi_minus < 1.0))
    throw std::invalid_argument("adversary: selection probabilities must lie in (0, 1)");
  if (!(s_plus >= 0.0 && s_plus <= 1.0) || !(s_minus >= 0.0 && s_minus <= 1.0))
    throw std::invalid_argument("adversary: edge probabilities must lie in [0, 1]");
}

ContaminationRecord contaminate(const Graph& g, const AdversaryConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, "adversary.select"));
  std::vector<int> w_plus, w_minus;
  std::vector<char> plus(g.size(), 0);
  for (std::size_t v = 0; v < g.size(); ++v)
    if (rng.bernoulli(cfg.pi_plus)) {
      plus[v] = 1;
      w_plus.push_back(static_cast<int>(v));
    }
  for (std::size_t v = 0; v < g.size(); ++v)
    if (!plus[v] && rng.bernoulli(cfg.pi_minus)) w_minus.push_back(static_cast<int>(v));
  return contaminate_sets(g, std::move(w_plus), std::move(w_minus), cfg.s_plus, cfg.s_minus,
                          derive_seed(cfg.seed, "adversary.edges"));
}

ContaminationRecord contaminate_sets(const Graph& g, std::vector<int> w_plus, std::vector<int> w_minus,
                                     double s_plus, double s_minus, std::uint64_t seed) {
  if (g.is_weighted()) throw std::invalid_argument("contaminate: graph must be unweighted");
  const std::size_t n = g.size();
  // 0 = untouched, 1 = W+, 2 = W-
  std::vector<char> status(n, 0);
  for (int v : w_plus) {
    if (!g.contains(v)) throw std::out_of_range("contaminate: W+ vertex out of range");
    status[static_cast<std::size_t>(v)] = 1;
  }
  for (int v : w_minus) {
    if (!g.contains(v)) throw std::out_of_range("contaminate: W- vertex out of range");
    if (status[static_cast<std::size_t>(v)] == 1) throw std::invalid_argument("contaminate: W+ and W- must be disjoint");
    status[static_cast<std::size_t>(v)] = 2;
  }
  std::sort(w_plus.begin(), w_plus.end());
  std::sort(w_minus.begin(), w_minus.end());

  Rng rng(seed);
  GraphBuilder b(g);
  ContaminationRecord rec;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const char su = status[u], sv = status[v];
      if (su == 0 && sv == 0) continue;
      // W+ x (V \ W-) for additions, W- x (V \ W+) for deletions, each
      // unordered pair visited once.
      const bool add = (su == 1 && sv != 2) || (sv == 1 && su != 2);
      const bool del = (su == 2 && sv != 1) || (sv == 2 && su != 1);
      if (add && del) throw std::logic_error("contaminate: pair eligible for both addition and deletion");
      const bool present = g.adjacent(static_cast<int>(u), static_cast<int>(v));
      if (add && !present) {
        if (rng.bernoulli(s_plus)) {
          b.set_edge(static_cast<int>(u), static_cast<int>(v));
          rec.added.push_back({static_cast<int>(u), static_cast<int>(v), 1.0});
        }
      } else if (del && present) {
        if (rng.bernoulli(s_minus)) {
          b.remove_edge(static_cast<int>(u), static_cast<int>(v));
          rec.deleted.push_back({static_cast<int>(u), static_cast<int>(v), 1.0});
        }
      }
    }
  }
  rec.contaminated = std::move(b).build();
  rec.w_plus = std::move(w_plus);
  rec.w_minus = std::move(w_minus);
  return rec;
}

std::string_view to_string(CrossTermVariant v) {
  switch (v) {
    case CrossTermVariant::Verbatim: return "verbatim";
    case CrossTermVariant::TwoTrial: return "two-trial";
    case CrossTermVariant::SingleTrial: return "single-trial";
  }
  return "?";
}

Eigen::Matrix<double, 6, 6> contaminated_block_matrix(const Eigen::MatrixXd& b, double sp, double sm,
                                                      CrossTermVariant variant) {
  if (b.rows() != 2 || b.cols() != 2) throw std::invalid_argument("contaminated_block_matrix: B must be 2 x 2");
  if (b(0, 1) != b(1, 0)) throw std::invalid_argument("contaminated_block_matrix: B must be symmetric");
  const double p = b(0, 0), q = b(1, 1), r = b(0, 1);
  const double x1 = p + sp * (1 - p);
  const double x2 = p * (1 - sm);
  const double x3 = r + sp * (1 - r);
  const double x4 = (1 - sm) * r;
  double x5 = 0, x6 = 0;
  switch (variant) {
    case CrossTermVariant::Verbatim:
      x5 = r + (2 * sp - sp) * (2 * sp - sp) * (1 - r);
      x6 = r * (1 - sm) * (1 - sm);
      break;
    case CrossTermVariant::TwoTrial:
      x5 = r + (2 * sp - sp * sp) * (1 - r);
      x6 = r * (1 - sm) * (1 - sm);
      break;
    case CrossTermVariant::SingleTrial:
      x5 = x3;
      x6 = x4;
      break;
  }
  const double x7 = q + sp * (1 - q);
  const double x8 = q * (1 - sm);
  Eigen::Matrix<double, 6, 6> m;
  // clang-format off
  m << p,  x1, x2, r,  x3, x4,
       x1, x1, p,  x3, x5, r,
       x2, p,  x2, x4, r,  x6,
       r,  x3, x4, q,  x7, x8,
       x3, x5, r,  x7, x7, q,
       x4, r,  x6, x8, q,  x8;
  // clang-format on
  return m;
}

bool deletion_condition(double p, double q, double s_minus) { return p - q < s_minus; }

InconsistencyConditions inconsistency_conditions(double p, double q, double s_plus, double s_minus) {
  for (double x : {p, q, s_plus, s_minus})
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("inconsistency_conditions: probabilities must lie in [0, 1]");
  if (q == 1.0) throw std::domain_error("inconsistency_conditions: addition test undefined for q = 1");
  return {deletion_condition(p, q, s_minus), (p - q) / (1 - q) < s_plus};
}

std::vector<int> contamination_strata(const std::vector<int>& blocks, const std::vector<int>& w_plus,
                                      const std::vector<int>& w_minus) {
  std::vector<int> s(blocks.size());
  for (std::size_t v = 0; v < blocks.size(); ++v) s[v] = 3 * blocks[v];
  for (int v : w_plus) s[static_cast<std::size_t>(v)] += 1;
  for (int v : w_minus) s[static_cast<std::size_t>(v)] += 2;
  return s;
}

StratumDensities stratum_densities(const Graph& g, const std::vector<int>& strata, int stratum_count) {
  StratumDensities d{Eigen::MatrixXd::Zero(stratum_count, stratum_count),
                     Eigen::MatrixXd::Zero(stratum_count, stratum_count)};
  const std::size_t n = g.size();
  for (std::size_t u = 0; u < n; ++u) {
    const auto row = g.row(static_cast<int>(u));
    const int a = strata[u];
    for (std::size_t v = u + 1; v < n; ++v) {
      const int c = strata[v];
      d.pairs(a, c) += 1;
      if (row[v] != 0.0) d.edges(a, c) += 1;
    }
  }
  const Eigen::MatrixXd e = d.edges, p = d.pairs;
  d.edges = e + e.transpose();
  d.pairs = p + p.transpose();
  d.edges.diagonal() = e.diagonal();
  d.pairs.diagonal() = p.diagonal();
  return d;
}

nlohmann::json to_json(const ContaminationRecord& rec, const Graph& original, std::size_t replicate) {
  auto names = [&](const std::vector<int>& vs) {
    nlohmann::json a = nlohmann::json::array();
    for (int v : vs) a.push_back(original.name(v));
    return a;
  };
  auto edges = [&](const std::vector<Edge>& es) {
    nlohmann::json a = nlohmann::json::array();
    for (const Edge& e : es) a.push_back({original.name(e.u), original.name(e.v)});
    return a;
  };
  return {{"replicate", replicate},
          {"w_plus", names(rec.w_plus)},
          {"w_minus", names(rec.w_minus)},
          {"edges_added", edges(rec.added)},
          {"edges_deleted", edges(rec.deleted)}};
}

void write_audit_line(std::ostream& out, const ContaminationRecord& rec, const Graph& original,
                      std::size_t replicate) {
  out << to_json(rec, original, replicate).dump() << '\n';
}

}  // namespace vnom
