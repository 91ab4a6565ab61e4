#include "vnom/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "vnom/rng.hpp"

namespace vnom {

void SbmParams::validate() const {
  const auto k = static_cast<Eigen::Index>(prior.size());
  if (k == 0) throw std::invalid_argument("sbm: at least one block required");
  if (block_probs.rows() != k || block_probs.cols() != k)
    throw std::invalid_argument("sbm: block matrix must be K x K with K = prior length");
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const double b = block_probs(i, j);
      if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("sbm: block probabilities must lie in [0, 1]");
      if (b != block_probs(j, i)) throw std::invalid_argument("sbm: block matrix must be symmetric");
    }
  double total = 0.0;
  for (double p : prior) {
    if (!(p >= 0.0)) throw std::invalid_argument("sbm: block prior entries must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("sbm: block prior must sum to 1");
}

SbmParams SbmParams::two_block(std::size_t n, double p, double q, double r) {
  SbmParams s;
  s.n = n;
  s.block_probs.resize(2, 2);
  s.block_probs << p, r, r, q;
  s.prior = {0.5, 0.5};
  return s;
}

namespace {

std::vector<int> draw_blocks(const SbmParams& params, Rng& rng) {
  std::vector<double> cumulative(params.prior.size());
  std::partial_sum(params.prior.begin(), params.prior.end(), cumulative.begin());
  std::vector<int> blocks(params.n);
  const int last = static_cast<int>(params.prior.size()) - 1;
  for (auto& b : blocks) {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    b = std::min(static_cast<int>(it - cumulative.begin()), last);
  }
  return blocks;
}

}  // namespace

Graph sample_sbm_given_blocks(const Eigen::MatrixXd& block_probs, const std::vector<int>& blocks,
                              std::uint64_t seed) {
  const std::size_t n = blocks.size();
  Rng rng(seed);
  GraphBuilder b(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(block_probs(blocks[u], blocks[v]))) b.set_edge(static_cast<int>(u), static_cast<int>(v));
  return std::move(b).build();
}

SbmSample sample_sbm(const SbmParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(derive_seed(seed, "sbm.blocks"));
  auto blocks = draw_blocks(params, rng);
  Graph g = sample_sbm_given_blocks(params.block_probs, blocks, derive_seed(seed, "sbm.edges"));
  return {std::move(g), std::move(blocks)};
}

CorrelatedSbmSample sample_corr_sbm(double rho, const SbmParams& params, std::uint64_t seed, bool second_first) {
  params.validate();
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("corr_sbm: rho must lie in [0, 1]");
  Rng block_rng(derive_seed(seed, "sbm.blocks"));
  auto blocks = draw_blocks(params, block_rng);
  const std::size_t n = params.n;
  Rng rng(derive_seed(seed, "corr_sbm.edges"));
  GraphBuilder first(n), second(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = params.block_probs(blocks[u], blocks[v]);
      const bool e1 = rng.uniform() < p;
      const double cond = e1 ? p + rho * (1.0 - p) : p * (1.0 - rho);
      const bool e2 = rng.uniform() < cond;
      if (e1) first.set_edge(static_cast<int>(u), static_cast<int>(v));
      if (e2) second.set_edge(static_cast<int>(u), static_cast<int>(v));
    }
  }
  Graph a = std::move(first).build();
  Graph b = std::move(second).build();
  if (second_first) std::swap(a, b);
  return {std::move(a), std::move(b), std::move(blocks)};
}

std::optional<int> NominatablePair::counterpart(int v1) const {
  for (const CorePair& c : core)
    if (c.v1 == v1) return c.v2;
  return std::nullopt;
}

std::vector<int> NominatablePair::core_g1() const {
  std::vector<int> out;
  out.reserve(core.size());
  for (const CorePair& c : core) out.push_back(c.v1);
  return out;
}

void NominatablePair::validate() const {
  std::vector<char> in1(g1.size(), 0), in2(g2.size(), 0);
  for (const CorePair& c : core) {
    if (!g1.contains(c.v1) || !g2.contains(c.v2)) throw std::invalid_argument("pair: core vertex out of range");
    if (in1[static_cast<std::size_t>(c.v1)]++ || in2[static_cast<std::size_t>(c.v2)]++)
      throw std::invalid_argument("pair: core correspondence is not injective");
  }
  for (int j : junk1) {
    if (!g1.contains(j) || in1[static_cast<std::size_t>(j)]++) throw std::invalid_argument("pair: bad junk1 vertex");
  }
  for (int j : junk2) {
    if (!g2.contains(j) || in2[static_cast<std::size_t>(j)]++) throw std::invalid_argument("pair: bad junk2 vertex");
  }
  if (std::count(in1.begin(), in1.end(), 1) != static_cast<long>(g1.size()) ||
      std::count(in2.begin(), in2.end(), 1) != static_cast<long>(g2.size()))
    throw std::invalid_argument("pair: core and junk must tile each vertex set");
  for (int v : voi)
    if (!counterpart(v)) throw std::invalid_argument("pair: vertex of interest is not a core vertex");
  if (!blocks1.empty() && blocks1.size() != g1.size()) throw std::invalid_argument("pair: block labels size mismatch");
}

namespace {

void assign_voi(NominatablePair& pair, const VoiSpec& spec) {
  switch (spec.kind) {
    case VoiSpec::Kind::AllCore:
      pair.voi = pair.core_g1();
      break;
    case VoiSpec::Kind::Explicit:
      pair.voi.clear();
      for (const auto& name : spec.names) {
        auto v = pair.g1.find(name);
        if (!v || !pair.is_core(*v)) throw std::invalid_argument("vertex of interest '" + name + "' is not in the core");
        pair.voi.push_back(*v);
      }
      break;
    case VoiSpec::Kind::Sample: {
      auto core = pair.core_g1();
      if (spec.count > core.size()) throw std::invalid_argument("cannot sample more vertices of interest than core vertices");
      Rng rng(derive_seed(spec.seed, "voi.sample"));
      rng.shuffle(core.begin(), core.end());
      core.resize(spec.count);
      std::sort(core.begin(), core.end());
      pair.voi = std::move(core);
      break;
    }
  }
}

void fill_junk(NominatablePair& pair) {
  std::vector<char> c1(pair.g1.size(), 0), c2(pair.g2.size(), 0);
  for (const CorePair& c : pair.core) c1[static_cast<std::size_t>(c.v1)] = c2[static_cast<std::size_t>(c.v2)] = 1;
  pair.junk1.clear();
  pair.junk2.clear();
  for (std::size_t v = 0; v < c1.size(); ++v)
    if (!c1[v]) pair.junk1.push_back(static_cast<int>(v));
  for (std::size_t v = 0; v < c2.size(); ++v)
    if (!c2[v]) pair.junk2.push_back(static_cast<int>(v));
}

}  // namespace

NominatablePair make_nominatable_pair(Graph g1, Graph g2, std::vector<int> blocks1, const VoiSpec& voi) {
  NominatablePair pair;
  pair.g1 = std::move(g1);
  pair.g2 = std::move(g2);
  pair.blocks1 = std::move(blocks1);
  for (std::size_t v = 0; v < pair.g1.size(); ++v)
    if (auto u = pair.g2.find(pair.g1.name(static_cast<int>(v)))) pair.core.push_back({static_cast<int>(v), *u});
  fill_junk(pair);
  assign_voi(pair, voi);
  pair.validate();
  return pair;
}

NominatablePair make_nominatable_pair(Graph g1, Graph g2,
                                      const std::vector<std::pair<std::string, std::string>>& correspondence,
                                      const VoiSpec& voi) {
  NominatablePair pair;
  pair.g1 = std::move(g1);
  pair.g2 = std::move(g2);
  std::vector<std::pair<int, int>> matched;
  for (const auto& [a, b] : correspondence) {
    auto u = pair.g1.find(a);
    auto v = pair.g2.find(b);
    if (!u) throw std::invalid_argument("correspondence: '" + a + "' is not a vertex of g1");
    if (!v) throw std::invalid_argument("correspondence: '" + b + "' is not a vertex of g2");
    matched.emplace_back(*u, *v);
  }
  std::sort(matched.begin(), matched.end());
  for (auto [u, v] : matched) pair.core.push_back({u, v});
  fill_junk(pair);
  assign_voi(pair, voi);
  pair.validate();
  return pair;
}

void export_pair(const NominatablePair& pair, const std::string& prefix) {
  auto open = [](const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
  };
  {
    auto out = open(prefix + "g1.edgelist");
    write_edge_list(out, pair.g1);
  }
  {
    auto out = open(prefix + "g2.edgelist");
    write_edge_list(out, pair.g2);
  }
  auto out = open(prefix + "core.tsv");
  for (const CorePair& c : pair.core) out << pair.g1.name(c.v1) << '\t' << pair.g2.name(c.v2) << '\n';
}

ConsistencyClassSpec ConsistencyClassSpec::make(std::size_t n, std::size_t index, double p, std::size_t k,
                                                std::size_t nu) {
  ConsistencyClassSpec s;
  s.n = n;
  s.index = index;
  s.p = p;
  s.k = k;
  s.nu = nu;
  s.xi = std::max(k, nu);
  s.validate();
  return s;
}

void ConsistencyClassSpec::validate() const {
  if (xi == 0 || xi != std::max(k, nu)) throw std::invalid_argument("consistency class: xi must equal max(k, nu) > 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("consistency class: p must lie in [0, 1]");
  const std::size_t blocks = block_count();
  if (blocks == 0 || index < 1 || index > blocks)
    throw std::invalid_argument("consistency class: n too small for block index " + std::to_string(index));
  // Hub vertices have degree >= |H| - 1, block vertices at most xi - 1 + blocks.
  if (xi - 1 + blocks >= hub_size() - 1)
    throw std::invalid_argument("consistency class: hub is not identifiable by degree at this n");
}

ConsistencyClassInstance sample_consistency_class_instance(const ConsistencyClassSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t xi = spec.xi;
  const std::size_t blocks = spec.block_count();
  const std::size_t hub_begin = xi * blocks;
  Rng rng(derive_seed(seed, "consistency_class"));
  GraphBuilder b(spec.n);
  ConsistencyClassInstance inst;
  inst.block_of.assign(spec.n, 0);

  // Block B_index takes the first slot, B_1 takes slot `index`.
  auto slot_of = [&](std::size_t block) {
    if (block == spec.index) return std::size_t{1};
    if (block == 1) return spec.index;
    return block;
  };
  std::vector<int> hub(spec.n - hub_begin);
  std::iota(hub.begin(), hub.end(), static_cast<int>(hub_begin));
  for (std::size_t block = 1; block <= blocks; ++block) {
    const std::size_t first = (slot_of(block) - 1) * xi;
    for (std::size_t a = first; a < first + xi; ++a) {
      inst.block_of[a] = static_cast<int>(block);
      for (std::size_t c = a + 1; c < first + xi; ++c)
        if (rng.bernoulli(spec.p)) b.set_edge(static_cast<int>(a), static_cast<int>(c));
    }
    for (std::size_t a = first; a < first + xi; ++a) {
      // Partial Fisher-Yates: the first `block` entries are a uniform subset.
      for (std::size_t t = 0; t < block; ++t) {
        const std::size_t j = t + rng.below(hub.size() - t);
        std::swap(hub[t], hub[j]);
        b.set_edge(static_cast<int>(a), hub[t]);
      }
    }
  }
  for (std::size_t u = hub_begin; u < spec.n; ++u)
    for (std::size_t v = u + 1; v < spec.n; ++v) b.set_edge(static_cast<int>(u), static_cast<int>(v));
  inst.graph = std::move(b).build();
  inst.voi.resize(spec.nu);
  std::iota(inst.voi.begin(), inst.voi.end(), 0);
  return inst;
}

}  // namespace vnom
