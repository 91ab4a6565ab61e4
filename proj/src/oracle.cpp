#include "vnom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vnom/rng.hpp"

namespace vnom {

namespace {

std::vector<std::pair<int, int>> pair_list(std::size_t n) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) out.emplace_back(static_cast<int>(u), static_cast<int>(v));
  return out;
}

}  // namespace

void EnumerationSpec::validate() const {
  if (n > kOracleMaxVertices || m > kOracleMaxVertices)
    throw std::length_error("enumerate_support: n and m must be at most 5");
  if (core > std::min(n, m)) throw std::invalid_argument("enumerate_support: core larger than a graph");
  if (blocks1.size() != n || blocks2.size() != m) throw std::invalid_argument("enumerate_support: block vector size");
  const auto k = block_probs.rows();
  if (block_probs.cols() != k) throw std::invalid_argument("enumerate_support: block matrix must be square");
  for (int b : blocks1)
    if (b < 0 || b >= k) throw std::invalid_argument("enumerate_support: block label out of range");
  for (int b : blocks2)
    if (b < 0 || b >= k) throw std::invalid_argument("enumerate_support: block label out of range");
  for (std::size_t i = 0; i < core; ++i)
    if (blocks1[i] != blocks2[i]) throw std::invalid_argument("enumerate_support: core blocks differ between graphs");
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      if (!(block_probs(i, j) >= 0.0 && block_probs(i, j) <= 1.0) || block_probs(i, j) != block_probs(j, i))
        throw std::invalid_argument("enumerate_support: block matrix must be symmetric in [0, 1]");
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("enumerate_support: rho must lie in [0, 1]");
  for (int v : voi)
    if (v < 0 || static_cast<std::size_t>(v) >= core) throw std::invalid_argument("enumerate_support: V* must lie in the core");
}

EnumerationSpec EnumerationSpec::erdos_renyi(std::size_t n, std::size_t m, std::size_t core, double p, double rho,
                                             std::vector<int> voi) {
  EnumerationSpec s;
  s.n = n;
  s.m = m;
  s.core = core;
  s.voi = std::move(voi);
  s.block_probs = Eigen::MatrixXd::Constant(1, 1, p);
  s.blocks1.assign(n, 0);
  s.blocks2.assign(m, 0);
  s.rho = rho;
  return s;
}

Graph graph_from_mask(std::size_t n, std::uint32_t mask) {
  GraphBuilder b(n);
  const auto pairs = pair_list(n);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (mask >> i & 1u) b.set_edge(pairs[i].first, pairs[i].second);
  return std::move(b).build();
}

std::uint32_t mask_of(const Graph& g) {
  if (g.size() > kOracleMaxVertices) throw std::length_error("mask_of: graph too large");
  std::uint32_t mask = 0;
  const auto pairs = pair_list(g.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (g.adjacent(pairs[i].first, pairs[i].second)) mask |= 1u << i;
  return mask;
}

Graph EnumeratedDistribution::g1(const SupportPoint& p) const { return graph_from_mask(n, p.mask1); }
Graph EnumeratedDistribution::g2(const SupportPoint& p) const { return graph_from_mask(m, p.mask2); }

EnumeratedDistribution enumerate_support(const EnumerationSpec& spec) {
  spec.validate();
  const auto pairs1 = pair_list(spec.n), pairs2 = pair_list(spec.m);
  const std::size_t e1 = pairs1.size(), e2 = pairs2.size();
  auto prob1 = [&](std::size_t i) {
    return spec.block_probs(spec.blocks1[static_cast<std::size_t>(pairs1[i].first)],
                            spec.blocks1[static_cast<std::size_t>(pairs1[i].second)]);
  };
  auto prob2 = [&](std::size_t i) {
    return spec.block_probs(spec.blocks2[static_cast<std::size_t>(pairs2[i].first)],
                            spec.blocks2[static_cast<std::size_t>(pairs2[i].second)]);
  };
  // Pair index in g2 of each core-core pair of g1 (pair_list is the same
  // lexicographic order restricted to vertices below `core`).
  std::vector<int> twin(e1, -1);
  for (std::size_t i = 0; i < e1; ++i) {
    const auto [u, v] = pairs1[i];
    if (static_cast<std::size_t>(v) < spec.core)
      twin[i] = static_cast<int>(std::find(pairs2.begin(), pairs2.end(), pairs1[i]) - pairs2.begin());
  }
  std::vector<char> twinned2(e2, 0);
  for (int t : twin)
    if (t >= 0) twinned2[static_cast<std::size_t>(t)] = 1;

  // Orbit filter on g2 only depends on mask2.
  std::vector<char> admissible(std::size_t{1} << e2, 0);
  for (std::uint32_t m2 = 0; m2 < (1u << e2); ++m2) {
    const OrbitPartition orb = automorphism_orbits(graph_from_mask(spec.m, m2));
    admissible[m2] = std::all_of(spec.voi.begin(), spec.voi.end(), [&](int v) { return orb.singleton(v); });
  }

  EnumeratedDistribution dist;
  dist.n = spec.n;
  dist.m = spec.m;
  dist.voi = spec.voi;
  double kept = 0.0, dropped = 0.0;
  for (std::uint32_t m1 = 0; m1 < (1u << e1); ++m1) {
    for (std::uint32_t m2 = 0; m2 < (1u << e2); ++m2) {
      double pr = 1.0;
      for (std::size_t i = 0; i < e1 && pr > 0.0; ++i) {
        const bool a = m1 >> i & 1u;
        const double p = prob1(i);
        if (twin[i] < 0) {
          pr *= a ? p : 1.0 - p;
          continue;
        }
        const bool b = m2 >> twin[i] & 1u;
        const double pb1 = p + spec.rho * (1.0 - p);  // P(b = 1 | a = 1)
        const double pb0 = p * (1.0 - spec.rho);      // P(b = 1 | a = 0)
        pr *= (a ? p : 1.0 - p) * (a ? (b ? pb1 : 1.0 - pb1) : (b ? pb0 : 1.0 - pb0));
      }
      for (std::size_t i = 0; i < e2 && pr > 0.0; ++i) {
        if (twinned2[i]) continue;
        const double p = prob2(i);
        pr *= (m2 >> i & 1u) ? p : 1.0 - p;
      }
      if (pr <= 0.0) continue;
      ++dist.raw_support;
      if (!admissible[m2]) {
        dropped += pr;
        continue;
      }
      kept += pr;
      dist.support.push_back({m1, m2, pr});
    }
  }
  if (dist.support.empty()) throw std::domain_error("enumerate_support: no pair has singleton orbits for V*");
  for (auto& p : dist.support) p.prob /= kept;
  dist.removed_mass = dropped / (kept + dropped);
  return dist;
}

IsoClassPartition partition_by_isomorphism(const EnumeratedDistribution& dist) {
  IsoClassPartition part;
  std::map<std::uint32_t, CanonicalForm> canon;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const auto& sp = dist.support[i];
    auto it = canon.find(sp.mask2);
    if (it == canon.end()) it = canon.emplace(sp.mask2, canonical_form(dist.g2(sp))).first;
    const CanonicalForm& cf = it->second;
    const auto key = std::make_pair(sp.mask1, cf.code);
    auto [pos, fresh] = part.index.emplace(key, part.classes.size());
    if (fresh) {
      IsoClass c;
      c.mask1 = sp.mask1;
      c.code2 = cf.code;
      c.representative = permute(dist.g2(sp), cf.position);
      part.classes.push_back(std::move(c));
    }
    auto& cls = part.classes[pos->second];
    cls.members.push_back(i);
    cls.prob += sp.prob;
    part.positions.push_back(cf.position);
  }
  return part;
}

std::vector<std::size_t> ExactScheme::ranks(std::uint32_t mask1, const Graph& g2) const {
  const CanonicalForm cf = canonical_form(g2);
  const auto it = tables_.find({mask1, cf.code});
  if (it == tables_.end()) throw std::out_of_range("ExactScheme: observed pair lies outside every known class");
  const auto& table = it->second;
  std::vector<std::size_t> rank_of_position(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) rank_of_position[static_cast<std::size_t>(table[r])] = r + 1;
  std::vector<std::size_t> out(g2.size());
  for (std::size_t v = 0; v < g2.size(); ++v) out[v] = rank_of_position[static_cast<std::size_t>(cf.position[v])];
  return out;
}

std::vector<std::string> ExactScheme::operator()(const Graph& g1, const Graph& g2, std::span<const int>) const {
  const auto r = ranks(mask_of(g1), g2);
  std::vector<std::string> out(g2.size());
  for (std::size_t v = 0; v < g2.size(); ++v) out[r[v] - 1] = g2.name(static_cast<int>(v));
  return out;
}

NominationScheme ExactScheme::as_scheme() const {
  return [self = *this](const Graph& g1, const Graph& g2, std::span<const int> voi) { return self(g1, g2, voi); };
}

BayesOracle bayes_optimal_scheme(const EnumeratedDistribution& dist, const IsoClassPartition& part) {
  BayesOracle out;
  std::map<std::pair<std::uint32_t, std::uint64_t>, std::vector<int>> tables;
  for (const auto& cls : part.classes) {
    std::vector<double> p(dist.m, 0.0);
    for (std::size_t i : cls.members) {
      const auto& pos = part.positions[i];
      for (int v : dist.voi) p[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])] += dist.support[i].prob;
    }
    for (double& x : p) x /= cls.prob;
    std::vector<int> table(dist.m);
    std::iota(table.begin(), table.end(), 0);
    // Descending P_u, ties by canonical position.
    std::stable_sort(table.begin(), table.end(),
                     [&](int a, int b) { return p[static_cast<std::size_t>(a)] > p[static_cast<std::size_t>(b)]; });
    tables.emplace(std::make_pair(cls.mask1, cls.code2), std::move(table));
    out.p_u.push_back(std::move(p));
  }
  out.scheme = ExactScheme(std::move(tables));
  return out;
}

std::vector<double> expected_verification(const EnumeratedDistribution& dist, const IsoClassPartition& part,
                                          const ExactScheme& scheme) {
  std::vector<double> hit(dist.m, 0.0);  // hit[r]: mass of a counterpart at rank r + 1
  for (const auto& cls : part.classes) {
    const auto it = scheme.tables().find({cls.mask1, cls.code2});
    if (it == scheme.tables().end()) throw std::out_of_range("exact_loss: scheme undefined on a support class");
    std::vector<std::size_t> rank_of_position(dist.m);
    for (std::size_t r = 0; r < it->second.size(); ++r) rank_of_position[static_cast<std::size_t>(it->second[r])] = r;
    for (std::size_t i : cls.members) {
      const auto& pos = part.positions[i];
      for (int v : dist.voi)
        hit[rank_of_position[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])]] += dist.support[i].prob;
    }
  }
  std::partial_sum(hit.begin(), hit.end(), hit.begin());
  return hit;
}

double exact_loss(const EnumeratedDistribution& dist, const IsoClassPartition& part, const ExactScheme& scheme,
                  std::size_t k, LossKind kind) {
  if (k < 1 || k > dist.m) throw std::invalid_argument("exact_loss: need 1 <= k <= m");
  if (dist.voi.empty()) throw std::invalid_argument("exact_loss: V* is empty");
  const double h = expected_verification(dist, part, scheme)[k - 1];
  const double denom = kind == LossKind::Recall ? static_cast<double>(dist.voi.size()) : static_cast<double>(k);
  return 1.0 - h / denom;
}

ExactScheme random_scheme(const IsoClassPartition& part, std::uint64_t seed, const ExactScheme* perturb_from,
                          std::size_t swaps) {
  Rng rng(seed);
  std::map<std::pair<std::uint32_t, std::uint64_t>, std::vector<int>> tables;
  for (const auto& cls : part.classes) {
    const auto key = std::make_pair(cls.mask1, cls.code2);
    const std::size_t m = cls.representative.size();
    std::vector<int> t(m);
    if (perturb_from) {
      t = perturb_from->tables().at(key);
      for (std::size_t s = 0; s < swaps && m > 1; ++s) std::swap(t[rng.below(m)], t[rng.below(m)]);
    } else {
      std::iota(t.begin(), t.end(), 0);
      rng.shuffle(t.begin(), t.end());
    }
    tables.emplace(key, std::move(t));
  }
  return ExactScheme(std::move(tables));
}

bool prefix_majorizes(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.size() != b.size()) throw std::invalid_argument("prefix_majorizes: length mismatch");
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    if (sa < sb - tol) return false;
  }
  return true;
}

nlohmann::json oracle_to_json(const EnumeratedDistribution& dist, const IsoClassPartition& part,
                              const BayesOracle& oracle) {
  nlohmann::json j;
  j["n"] = dist.n;
  j["m"] = dist.m;
  j["voi"] = dist.voi;
  j["support_size"] = dist.support.size();
  j["raw_support_size"] = dist.raw_support;
  j["removed_mass"] = dist.removed_mass;
  auto& classes = j["classes"] = nlohmann::json::array();
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    const auto& cls = part.classes[c];
    nlohmann::json e;
    e["g1_mask"] = cls.mask1;
    e["g2_code"] = cls.code2;
    e["prob"] = cls.prob;
    e["members"] = cls.members.size();
    e["p_u"] = oracle.p_u[c];
    e["ranking"] = oracle.scheme.tables().at({cls.mask1, cls.code2});
    classes.push_back(std::move(e));
  }
  const auto h = expected_verification(dist, part, oracle.scheme);
  auto& losses = j["losses"] = nlohmann::json::array();
  for (std::size_t k = 1; k <= dist.m; ++k) {
    losses.push_back({{"k", k},
                      {"recall", 1.0 - h[k - 1] / static_cast<double>(dist.voi.size())},
                      {"precision", 1.0 - h[k - 1] / static_cast<double>(k)}});
  }
  return j;
}

PsiResult psi_block_identifier(const Graph& g, const ConsistencyClassSpec& spec) {
  spec.validate();
  if (g.size() != spec.n) throw std::invalid_argument("psi_block_identifier: graph size differs from spec");
  const std::size_t hub_size = spec.hub_size();
  PsiResult out;
  std::vector<char> in_hub(g.size(), 0);
  for (std::size_t v = 0; v < g.size(); ++v)
    if (g.degree(static_cast<int>(v)) >= static_cast<double>(hub_size - 1)) {
      in_hub[v] = 1;
      out.hub.push_back(static_cast<int>(v));
    }
  if (out.hub.size() != hub_size) throw std::logic_error("psi_block_identifier: hub is not identifiable");
  std::vector<int> rest;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (in_hub[v]) {
      rest.push_back(static_cast<int>(v));
      continue;
    }
    std::size_t links = 0;
    for (int h : out.hub) links += g.adjacent(static_cast<int>(v), h) ? 1 : 0;
    if (links == spec.index)
      out.block.push_back(static_cast<int>(v));
    else
      rest.push_back(static_cast<int>(v));
  }
  out.list.tiebreak = "block,input-order";
  for (int v : out.block) {
    out.list.vertices.push_back(v);
    out.list.order.push_back(g.name(v));
    out.list.scores.push_back(0.0);
  }
  for (int v : rest) {
    out.list.vertices.push_back(v);
    out.list.order.push_back(g.name(v));
    out.list.scores.push_back(1.0);
  }
  return out;
}

}  // namespace vnom
