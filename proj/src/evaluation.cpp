#include "vnom/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "vnom/rng.hpp"

namespace vnom {

std::size_t verification_h(std::span<const std::size_t> ranks, std::size_t k) {
  if (k < 1) throw std::invalid_argument("verification_h: need k >= 1");
  return static_cast<std::size_t>(std::count_if(ranks.begin(), ranks.end(), [k](std::size_t r) { return r <= k; }));
}

double level_k_recall_loss(std::span<const std::size_t> ranks, std::size_t k) {
  if (ranks.empty()) throw std::invalid_argument("level_k_recall_loss: V* is empty");
  return 1.0 - static_cast<double>(verification_h(ranks, k)) / static_cast<double>(ranks.size());
}

double level_k_precision_loss(std::span<const std::size_t> ranks, std::size_t k) {
  if (ranks.empty()) throw std::invalid_argument("level_k_precision_loss: V* is empty");
  return 1.0 - static_cast<double>(verification_h(ranks, k)) / static_cast<double>(k);
}

std::vector<std::size_t> counterpart_ranks(const NominationList& list, std::span<const int> counterparts) {
  std::vector<std::size_t> out;
  for (int c : counterparts) out.push_back(list.rank_of(c).value_or(kUnranked));
  return out;
}

namespace {

void check_k(const NominationList& list, std::size_t k) {
  if (k < 1 || k + 1 > list.order.size()) throw std::invalid_argument("level-k loss: need 1 <= k <= m - 1");
}

}  // namespace

std::size_t verification_h(const NominationList& list, std::span<const int> counterparts, std::size_t k) {
  check_k(list, k);
  return verification_h(counterpart_ranks(list, counterparts), k);
}

double level_k_recall_loss(const NominationList& list, std::span<const int> counterparts, std::size_t k) {
  check_k(list, k);
  return level_k_recall_loss(counterpart_ranks(list, counterparts), k);
}

double level_k_precision_loss(const NominationList& list, std::span<const int> counterparts, std::size_t k) {
  check_k(list, k);
  return level_k_precision_loss(counterpart_ranks(list, counterparts), k);
}

namespace {

std::pair<double, double> mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

std::vector<CurvePoint> performance_curve(const std::vector<std::vector<std::size_t>>& ranks, std::size_t x_max) {
  if (ranks.empty()) throw std::invalid_argument("performance_curve: no replicates");
  std::vector<CurvePoint> out;
  std::vector<double> counts(ranks.size());
  for (std::size_t x = 1; x <= x_max; ++x) {
    for (std::size_t r = 0; r < ranks.size(); ++r) counts[r] = static_cast<double>(verification_h(ranks[r], x));
    const auto [m, se] = mean_se(counts);
    out.push_back({x, m, se, 0.0});
  }
  return out;
}

const RegimeResult& EvalReport::regime(std::string_view name) const {
  for (const auto& r : regimes)
    if (r.name == name) return r;
  throw std::out_of_range("EvalReport: unknown regime " + std::string(name));
}

EvalReport monte_carlo_harness(const Graph& g1, const std::vector<RegimeSpec>& regimes, const HarnessOptions& opt) {
  if (regimes.empty()) throw std::invalid_argument("monte_carlo_harness: no regimes");
  if (opt.n_seed_sets < 1 && opt.fixed_seed_sets.empty()) throw std::invalid_argument("monte_carlo_harness: need at least one seed set");
  for (const auto& rg : regimes)
    if (rg.counterpart.size() != g1.size()) throw std::invalid_argument("monte_carlo_harness: counterpart map size");

  std::vector<int> core;
  for (std::size_t v = 0; v < g1.size(); ++v)
    if (std::all_of(regimes.begin(), regimes.end(), [v](const RegimeSpec& r) { return r.counterpart[v] >= 0; }))
      core.push_back(static_cast<int>(v));
  const bool fixed = !opt.fixed_seed_sets.empty();
  if (!fixed && (opt.seed_size < 1 || opt.seed_size > core.size()))
    throw std::invalid_argument("monte_carlo_harness: seed set size exceeds the shared core");
  for (const auto& set : opt.fixed_seed_sets)
    for (int s : set)
      if (!std::binary_search(core.begin(), core.end(), s))
        throw std::invalid_argument("monte_carlo_harness: fixed seed outside the shared core");
  const std::size_t n_sets = fixed ? opt.fixed_seed_sets.size() : opt.n_seed_sets;
  const std::vector<int> pool = opt.voi_pool.empty() ? core : opt.voi_pool;

  const AdjacencySpectrum spec1 = adjacency_spectrum(g1);
  std::vector<std::optional<AdjacencySpectrum>> cached(regimes.size());
  for (std::size_t j = 0; j < regimes.size(); ++j)
    if (!regimes[j].trim) cached[j] = adjacency_spectrum(regimes[j].g2);

  EvalReport rep;
  rep.regimes.resize(regimes.size());
  for (std::size_t j = 0; j < regimes.size(); ++j) rep.regimes[j].name = regimes[j].name;
  std::vector<std::vector<double>> chance(regimes.size(), std::vector<double>(opt.x_max, 0.0));

  for (std::size_t r = 0; r < n_sets; ++r) {
    ReplicateInfo info;
    if (fixed) {
      info.seeds = opt.fixed_seed_sets[r];
    } else {
      std::vector<int> shuffled = core;
      Rng rng(derive_seed(opt.seed, "seed-set", r));
      rng.shuffle(shuffled.begin(), shuffled.end());
      info.seeds.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(opt.seed_size));
    }
    if (info.seeds.empty()) throw std::invalid_argument("monte_carlo_harness: empty seed set");
    std::sort(info.seeds.begin(), info.seeds.end());
    for (int v : pool) {
      if (std::binary_search(info.seeds.begin(), info.seeds.end(), v))
        ++rep.seeds_excluded;
      else
        info.voi.push_back(v);
    }
    if (info.voi.empty()) throw std::invalid_argument("monte_carlo_harness: every v.o.i. is a seed");

    for (std::size_t j = 0; j < regimes.size(); ++j) {
      const RegimeSpec& rg = regimes[j];
      const std::uint64_t stream = r * regimes.size() + j;
      Graph g2 = rg.g2;
      std::vector<int> to_new(rg.g2.size());
      std::iota(to_new.begin(), to_new.end(), 0);
      if (rg.trim) {
        TrimConfig tc = *rg.trim;
        tc.protect.clear();
        for (int s : info.seeds) tc.protect.push_back(rg.counterpart[static_cast<std::size_t>(s)]);
        const auto keep = trim_keep(rg.g2, tc);
        std::fill(to_new.begin(), to_new.end(), -1);
        for (std::size_t i = 0; i < keep.size(); ++i) to_new[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
        g2 = induced_subgraph(rg.g2, keep);
      }
      auto mapped = [&](int v1) {
        const int c = rg.counterpart[static_cast<std::size_t>(v1)];
        return c < 0 ? -1 : to_new[static_cast<std::size_t>(c)];
      };
      std::vector<CorePair> seeds;
      std::vector<char> is_seed(g2.size(), 0);
      for (int s : info.seeds) {
        const int s2 = mapped(s);
        if (s2 < 0) throw std::logic_error("monte_carlo_harness: seed lost its counterpart");
        seeds.push_back({s, s2});
        is_seed[static_cast<std::size_t>(s2)] = 1;
      }
      std::vector<int> candidates;
      for (std::size_t u = 0; u < g2.size(); ++u)
        if (!is_seed[u]) candidates.push_back(static_cast<int>(u));

      // Obfuscated labels only matter for tie-breaking.
      const Obfuscation obf = Obfuscation::random(g2.size(), derive_seed(opt.seed, "obfuscate", stream));
      std::vector<std::string> labels(g2.size());
      for (std::size_t v = 0; v < g2.size(); ++v) labels[v] = obf.labels[static_cast<std::size_t>(obf.position[v])];

      PipelineConfig pc = opt.pipeline;
      pc.gmm.seed = derive_seed(opt.seed, "gmm", stream);
      std::optional<AdjacencySpectrum> own;
      if (!cached[j]) own = adjacency_spectrum(g2);
      const PipelineState st = fit_pipeline(g1, g2, seeds, pc, &spec1, cached[j] ? &*cached[j] : &*own);
      const Eigen::MatrixXd s = score_matrix(st, info.voi, candidates);

      std::vector<int> col_of(g2.size(), -1);
      for (std::size_t c = 0; c < candidates.size(); ++c) col_of[static_cast<std::size_t>(candidates[c])] = static_cast<int>(c);
      std::vector<std::size_t> ranks;
      for (std::size_t i = 0; i < info.voi.size(); ++i) {
        const int c2 = mapped(info.voi[i]);
        if (c2 < 0) {
          ranks.push_back(kUnranked);
          ++rep.regimes[j].unranked;
          continue;
        }
        const int col = col_of[static_cast<std::size_t>(c2)];
        const auto ii = static_cast<Eigen::Index>(i);
        const double sc = s(ii, col);
        const std::string& lc = labels[static_cast<std::size_t>(c2)];
        std::size_t rank = 1;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
          const double x = s(ii, static_cast<Eigen::Index>(c));
          if (x < sc || (x == sc && labels[static_cast<std::size_t>(candidates[c])] < lc)) ++rank;
        }
        ranks.push_back(rank);
      }
      auto& res = rep.regimes[j];
      res.ranks.push_back(std::move(ranks));
      res.dims.push_back(st.dim);
      res.mean_candidates += static_cast<double>(candidates.size());
      res.mean_voi += static_cast<double>(info.voi.size());
      for (std::size_t x = 1; x <= opt.x_max; ++x)
        chance[j][x - 1] += static_cast<double>(info.voi.size()) *
                            chance_rank_fraction(candidates.size(), std::min(x, candidates.size()));
    }
    rep.replicates.push_back(std::move(info));
  }

  const double reps = static_cast<double>(n_sets);
  for (std::size_t j = 0; j < regimes.size(); ++j) {
    auto& res = rep.regimes[j];
    res.mean_candidates /= reps;
    res.mean_voi /= reps;
    res.curve = performance_curve(res.ranks, opt.x_max);
    for (std::size_t x = 0; x < opt.x_max; ++x) res.curve[x].chance = chance[j][x] / reps;
    for (std::size_t k : opt.loss_ks) {
      LossPoint lp{k, 0.0, 0.0};
      // Every v.o.i. has its own ranked list, so the loss is taken with
      // V* = {v} and averaged over v.o.i.
      for (const auto& rk : res.ranks) {
        double rec = 0.0, prec = 0.0;
        for (std::size_t i = 0; i < rk.size(); ++i) {
          rec += level_k_recall_loss(std::span(rk).subspan(i, 1), k);
          prec += level_k_precision_loss(std::span(rk).subspan(i, 1), k);
        }
        lp.recall += rec / static_cast<double>(rk.size());
        lp.precision += prec / static_cast<double>(rk.size());
      }
      lp.recall /= reps;
      lp.precision /= reps;
      res.losses.push_back(lp);
    }
  }
  return rep;
}

void write_curve_csv(std::ostream& out, const RegimeResult& r) {
  out << "x,mean,se,chance\n";
  const auto old = out.precision(12);
  for (const auto& p : r.curve) out << p.x << ',' << p.mean << ',' << p.se << ',' << p.chance << '\n';
  out.precision(old);
}

void write_summary_tsv(std::ostream& out, const EvalReport& rep, std::span<const std::size_t> xs) {
  out << "regime";
  for (std::size_t x : xs) out << "\tx=" << x;
  out << '\n';
  const auto old = out.precision(6);
  for (const auto& r : rep.regimes) {
    out << r.name;
    for (std::size_t x : xs) {
      out << '\t';
      if (x >= 1 && x <= r.curve.size())
        out << r.curve[x - 1].mean;
      else
        out << "NA";
    }
    out << '\n';
  }
  out.precision(old);
}

void write_losses_csv(std::ostream& out, const EvalReport& rep) {
  out << "regime,k,recall_loss,precision_loss\n";
  const auto old = out.precision(12);
  for (const auto& r : rep.regimes)
    for (const auto& l : r.losses) out << r.name << ',' << l.k << ',' << l.recall << ',' << l.precision << '\n';
  out.precision(old);
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("adjusted_rand_index: size mismatch");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    ra[a[i]] += 1.0;
    rb[b[i]] += 1.0;
  }
  auto c2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sj = 0.0, sa = 0.0, sb = 0.0;
  for (const auto& [k, v] : joint) sj += c2(v);
  for (const auto& [k, v] : ra) sa += c2(v);
  for (const auto& [k, v] : rb) sb += c2(v);
  const double expected = sa * sb / c2(n);
  const double maxi = 0.5 * (sa + sb);
  if (maxi == expected) return 1.0;
  return (sj - expected) / (maxi - expected);
}

}  // namespace vnom
