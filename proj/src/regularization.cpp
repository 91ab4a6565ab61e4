#include "vnom/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "vnom/rng.hpp"

namespace vnom {

void TrimConfig::validate() const {
  if (!(l >= 0.0 && l < 1.0) || !(h >= 0.0 && h < 1.0)) throw std::invalid_argument("trim: l and h must lie in [0, 1)");
  if (l + h >= 1.0) throw std::invalid_argument("trim: need l + h < 1");
}

std::vector<int> trim_keep(const Graph& g, const TrimConfig& cfg) {
  cfg.validate();
  std::vector<char> prot(g.size(), 0);
  for (int v : cfg.protect) {
    if (!g.contains(v)) throw std::invalid_argument("trim: protected vertex not in graph");
    prot[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<int> rest;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (!prot[v]) rest.push_back(static_cast<int>(v));
  const auto& deg = g.degrees();
  // Ascending degree for prose semantics, descending for literal.
  const bool descending = cfg.semantics == TrimSemantics::Literal;
  std::vector<int> order = rest;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = deg[static_cast<std::size_t>(a)], db = deg[static_cast<std::size_t>(b)];
    return descending ? da > db : da < db;
  });
  std::vector<double> rank(g.size(), 0.0);
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && deg[static_cast<std::size_t>(order[j])] == deg[static_cast<std::size_t>(order[i])]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t t = i; t < j; ++t) rank[static_cast<std::size_t>(order[t])] = avg;
    i = j;
  }
  const double n = static_cast<double>(rest.size());
  constexpr double eps = 1e-9;
  std::vector<int> keep;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (prot[v]) {
      keep.push_back(static_cast<int>(v));
      continue;
    }
    // l < rk/N <= 1 - h, compared as rk > lN and rk <= (1-h)N.
    const double rk = rank[v];
    if (rk > cfg.l * n + eps && rk <= (1.0 - cfg.h) * n + eps) keep.push_back(static_cast<int>(v));
  }
  return keep;
}

Graph trim(const Graph& g, const TrimConfig& cfg) {
  const auto keep = trim_keep(g, cfg);
  return induced_subgraph(g, keep);
}

double modularity(const Graph& g, std::span<const int> c) {
  if (c.size() != g.size()) throw std::invalid_argument("modularity: clustering size differs from graph size");
  const double two_m = 2.0 * g.total_weight();
  if (!(two_m > 0.0)) throw std::invalid_argument("modularity: graph has no edges");
  const auto& deg = g.degrees();
  // Sum of A_ij within clusters, minus sum over clusters of (cluster degree)^2 / 2m.
  double inside = 0.0;
  for (const auto& e : g.edges())
    if (c[static_cast<std::size_t>(e.u)] == c[static_cast<std::size_t>(e.v)]) inside += 2.0 * e.weight;
  std::vector<std::pair<int, double>> totals;
  {
    std::vector<int> labels(c.begin(), c.end());
    std::vector<std::size_t> idx(labels.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
    for (std::size_t i : idx) {
      if (totals.empty() || totals.back().first != labels[i]) totals.emplace_back(labels[i], 0.0);
      totals.back().second += deg[i];
    }
  }
  double expected = 0.0;
  for (const auto& [lab, d] : totals) expected += d * d;
  return (inside - expected / two_m) / two_m;
}

std::vector<GridPoint> default_trim_grid() {
  std::vector<GridPoint> grid;
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; j <= 5; ++j) grid.push_back({0.05 * i, 0.05 * j});
  return grid;
}

namespace {

std::optional<double> trimmed_modularity(const Graph& g, const TrimConfig& cfg, const SweepOptions& opt,
                                         std::uint64_t gmm_seed) {
  if (cfg.l + cfg.h >= 1.0) return std::nullopt;
  const Graph t = trim(g, cfg);
  if (t.size() < 3 || t.edge_count() == 0) return std::nullopt;
  try {
    const AdjacencySpectrum spec = adjacency_spectrum(t);
    const std::size_t d = select_dim(spec.magnitudes(opt.scree_cap)).dim();
    const Embedding e = ase(spec, d);
    GmmOptions go = opt.gmm;
    go.seed = gmm_seed;
    go.k_max = std::min(go.k_max, t.size());
    const GmmModel m = fit_gmm(e.points, go).best;
    return modularity(t, m.assignment);
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

}  // namespace

ModularityGrid sweep_trim_params(const Graph& g, std::span<const GridPoint> grid, const SweepOptions& opt) {
  if (grid.empty()) throw std::invalid_argument("sweep_trim_params: empty grid");
  if (opt.reps < 1) throw std::invalid_argument("sweep_trim_params: need reps >= 1");
  if (opt.seed_size > g.size()) throw std::invalid_argument("sweep_trim_params: seed set larger than graph");
  std::vector<std::vector<int>> seed_sets;
  for (std::size_t r = 0; r < opt.reps; ++r) {
    std::vector<int> all(g.size());
    std::iota(all.begin(), all.end(), 0);
    Rng rng(derive_seed(opt.seed, "sweep-seeds", r));
    rng.shuffle(all.begin(), all.end());
    all.resize(opt.seed_size);
    std::sort(all.begin(), all.end());
    seed_sets.push_back(std::move(all));
  }
  ModularityGrid out;
  for (const auto& pt : grid) {
    GridEntry e;
    e.point = pt;
    std::vector<double> qs;
    for (std::size_t r = 0; r < opt.reps; ++r) {
      TrimConfig tc{pt.l, pt.h, seed_sets[r], opt.semantics};
      if (auto q = trimmed_modularity(g, tc, opt, derive_seed(opt.seed, "sweep-gmm", r))) qs.push_back(*q);
    }
    // A point counts only if every replicate produced a clustering.
    e.reps = qs.size();
    e.valid = qs.size() == opt.reps;
    if (!qs.empty()) {
      const double k = static_cast<double>(qs.size());
      e.mean_q = std::accumulate(qs.begin(), qs.end(), 0.0) / k;
      double ss = 0.0;
      for (double q : qs) ss += (q - e.mean_q) * (q - e.mean_q);
      e.se_q = qs.size() > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
    }
    out.entries.push_back(e);
  }
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    const auto& e = out.entries[i];
    if (!e.valid) continue;
    if (!out.argmax) {
      out.argmax = i;
      continue;
    }
    const auto& b = out.entries[*out.argmax];
    const double se = e.point.l + e.point.h, sb = b.point.l + b.point.h;
    if (e.mean_q > b.mean_q || (e.mean_q == b.mean_q && (se < sb || (se == sb && e.point.l < b.point.l))))
      out.argmax = i;
  }
  return out;
}

void write_modularity_csv(std::ostream& out, const ModularityGrid& grid) {
  out << "l,h,mean_q,se_q,valid\n";
  const auto old = out.precision(12);
  for (const auto& e : grid.entries)
    out << e.point.l << ',' << e.point.h << ',' << e.mean_q << ',' << e.se_q << ',' << (e.valid ? 1 : 0) << '\n';
  out.precision(old);
}

}  // namespace vnom
