// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "vnom/adversary.hpp"
#include "vnom/embedding.hpp"
#include "vnom/evaluation.hpp"
#include "vnom/experiment.hpp"
#include "vnom/gmm.hpp"
#include "vnom/models.hpp"
#include "vnom/oracle.hpp"
#include "vnom/regularization.hpp"
#include "vnom/rng.hpp"

using namespace vnom;
namespace fs = std::filesystem;

namespace {

// Fixed before any run; never tuned.
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::MatrixXd section_b() {
  Eigen::MatrixXd b(2, 2);
  b << 0.4, 0.3, 0.3, 0.5;
  return b;
}

// 1. Stratified contaminated densities against each matrix variant.
Outcome adversary_density() {
  const auto t0 = Clock::now();
  const auto params = SbmParams::two_block(2000, 0.4, 0.5, 0.3);
  const auto sample = sample_sbm(params, derive_seed(kSeed, "c1-sbm"));
  const auto rec = contaminate(sample.graph, {0.1, 0.1, 0.8, 0.8, derive_seed(kSeed, "c1-adv")});
  const auto strata = contamination_strata(sample.blocks, rec.w_plus, rec.w_minus);
  const auto dens = stratum_densities(rec.contaminated, strata, 6);
  std::string detail;
  bool any = false;
  for (auto v : {CrossTermVariant::Verbatim, CrossTermVariant::TwoTrial, CrossTermVariant::SingleTrial}) {
    const auto m = contaminated_block_matrix(params.block_probs, 0.8, 0.8, v);
    int ok = 0, total = 0;
    double worst = 0;
    for (int a = 0; a < 6; ++a)
      for (int c = a; c < 6; ++c) {
        ++total;
        const double n = dens.pairs(a, c), pr = m(a, c);
        if (n == 0) continue;
        const double se = std::sqrt(pr * (1 - pr) / n);
        const double z = se > 0 ? std::abs(dens.density(a, c) - pr) / se : (dens.density(a, c) == pr ? 0 : 1e9);
        worst = std::max(worst, z);
        ok += z <= 3.0 ? 1 : 0;
      }
    const bool match = ok == total;
    any = any || match;
    detail += fmt("%s %d/%d (max z %.2f)%s; ", std::string(to_string(v)).c_str(), ok, total, worst,
                  match ? " MATCH" : "");
  }
  const double secs = seconds_since(t0);
  detail += fmt("%.1f s", secs);
  return {any && secs < 60.0, detail};
}

// 2. Edgewise correlation with known marginals.
Outcome correlation_law() {
  std::string detail;
  bool pass = true;
  const auto params = SbmParams::two_block(2000, 0.4, 0.5, 0.3);
  for (double rho : {0.3, 0.5, 0.7}) {
    const auto s = sample_corr_sbm(rho, params, derive_seed(kSeed, "c2", static_cast<std::uint64_t>(rho * 10)));
    double sum = 0, sum2 = 0, count = 0;
    for (std::size_t u = 0; u < 2000; ++u) {
      const auto ra = s.g1.row(static_cast<int>(u)), rb = s.g2.row(static_cast<int>(u));
      for (std::size_t v = u + 1; v < 2000; ++v) {
        const double p = params.block_probs(s.blocks[u], s.blocks[v]);
        const double var = p * (1 - p);
        const double x = ((ra[v] != 0 ? 1.0 : 0.0) - p) * ((rb[v] != 0 ? 1.0 : 0.0) - p) / var;
        sum += x;
        sum2 += x * x;
        count += 1;
      }
    }
    const double mean = sum / count;
    const double se = std::sqrt((sum2 / count - mean * mean) / count);
    const double z = std::abs(mean - rho) / se;
    pass = pass && z <= 3.0;
    detail += fmt("rho=%.1f est %.4f (z %.2f); ", rho, mean, z);
  }
  return {pass, detail};
}

// 3. Exact Bayes optimality against 1000 random consistent schemes.
Outcome bayes_optimality() {
  const auto t0 = Clock::now();
  const auto dist = enumerate_support(EnumerationSpec::erdos_renyi(3, 3, 3, 0.3, 0.0, {0}));
  const auto part = partition_by_isomorphism(dist);
  const auto oracle = bayes_optimal_scheme(dist, part);
  const std::size_t m = 3;
  auto per_rank = [](std::vector<double> h) {
    std::adjacent_difference(h.begin(), h.end(), h.begin());
    return h;
  };
  const auto hb = per_rank(expected_verification(dist, part, oracle.scheme));
  std::size_t violations = 0, major_fail = 0, consist_fail = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const std::uint64_t seed = derive_seed(kSeed, "c3", i);
    // Half uniformly random tables, half small perturbations of the optimum.
    const ExactScheme phi = i % 2 ? random_scheme(part, seed) : random_scheme(part, seed, &oracle.scheme, 1 + i % 3);
    for (std::size_t k = 1; k <= m - 1; ++k)
      for (auto kind : {LossKind::Recall, LossKind::Precision})
        if (exact_loss(dist, part, oracle.scheme, k, kind) > exact_loss(dist, part, phi, k, kind) + 1e-12)
          ++violations;
    if (!prefix_majorizes(hb, per_rank(expected_verification(dist, part, phi)))) ++major_fail;
    if (i < 20) {
      const auto& sp = dist.support[i % dist.support.size()];
      const std::vector<int> voi = dist.voi;
      if (!check_scheme_consistency(phi.as_scheme(), dist.g1(sp), dist.g2(sp), voi,
                                    Obfuscation::random(m, seed + 1), Obfuscation::random(m, seed + 2)))
        ++consist_fail;
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && major_fail == 0 && consist_fail == 0 && secs < 300.0,
          fmt("%zu classes, loss violations %zu, majorization failures %zu, consistency failures %zu, %.1f s",
              part.classes.size(), violations, major_fail, consist_fail, secs)};
}

// 4. Block-identifier loss and exact recovery.
Outcome psi_loss() {
  const auto spec = ConsistencyClassSpec::make(60, 1, 0.5, 2, 4);
  const std::size_t draws = 2000;
  std::vector<double> losses;
  std::size_t exact = 0;
  for (std::size_t t = 0; t < draws; ++t) {
    const auto inst = sample_consistency_class_instance(spec, derive_seed(kSeed, "c4", t));
    // Hide the construction order before nominating.
    const auto obf = Obfuscation::random(inst.graph.size(), derive_seed(kSeed, "c4-obf", t));
    const Graph g = permute(inst.graph, obf.position);
    const auto psi = psi_block_identifier(g, spec);
    std::vector<int> hub, block;
    for (std::size_t v = 0; v < inst.block_of.size(); ++v) {
      const int pv = obf.position[v];
      if (inst.block_of[v] == 0) hub.push_back(pv);
      if (inst.block_of[v] == static_cast<int>(spec.index)) block.push_back(pv);
    }
    std::sort(hub.begin(), hub.end());
    std::sort(block.begin(), block.end());
    std::vector<int> got_hub = psi.hub, got_block = psi.block;
    std::sort(got_hub.begin(), got_hub.end());
    std::sort(got_block.begin(), got_block.end());
    if (got_hub == hub && got_block == block) ++exact;
    std::vector<int> cps;
    for (int v : inst.voi) cps.push_back(obf.position[static_cast<std::size_t>(v)]);
    losses.push_back(level_k_recall_loss(psi.list, cps, spec.k));
  }
  const double n = static_cast<double>(draws);
  const double mean = std::accumulate(losses.begin(), losses.end(), 0.0) / n;
  double ss = 0;
  for (double x : losses) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / (n - 1) / n);
  const double target = 1.0 - static_cast<double>(spec.k) / static_cast<double>(spec.xi);
  const bool within = std::abs(mean - target) <= 3 * se + 1e-12;
  return {within && exact == draws,
          fmt("mean recall loss %.4f (se %.4f, target %.2f), exact recovery %zu/%zu", mean, se, target, exact, draws)};
}

// Rows of a curve CSV (x, mean, se, chance), header skipped.
std::vector<std::vector<double>> read_curve(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    rows.push_back(row);
  }
  return rows;
}

// 5. Qualitative ordering of the five regimes at x = 20.
Outcome regime_ordering() {
  const auto t0 = Clock::now();
  const fs::path dir = fs::temp_directory_path() / "vnom_acceptance_c5";
  fs::remove_all(dir);
  ExperimentConfig cfg;
  cfg.mode = RunMode::Simulate;
  cfg.seed = kSeed;
  cfg.out = dir.string();
  cfg.rho = 0.7;
  cfg.n_seed_sets = 50;
  cfg.seed_size = 10;
  cfg.sweep = false;
  run_experiment(cfg);
  auto at20 = [&](const std::string& name) {
    const auto rows = read_curve(dir / ("curves_" + name + ".csv"));
    return std::pair<double, double>{rows.at(19).at(1), rows.at(19).at(2)};
  };
  const auto ideal = at20("idealized"), cont = at20("contaminated"), reg = at20("regularized_0.1_0.1"),
             over = at20("regularized_0.2_0.2"), reg_l = at20("regularized_0.1_0");
  auto gap_ok = [](std::pair<double, double> a, std::pair<double, double> b) {
    return a.first - b.first >= 2.0 * std::sqrt(a.second * a.second + b.second * b.second);
  };
  const bool o1 = gap_ok(ideal, reg), o2 = gap_ok(reg, cont), o3 = over.first < reg.first;
  const double secs = seconds_since(t0);
  fs::remove_all(dir);
  return {o1 && o2 && o3 && secs < 1800.0,
          fmt("top-20 means: idealized %.2f (%.2f), reg(.1,.1) %.2f (%.2f), reg(.1,0) %.2f (%.2f), "
              "contaminated %.2f (%.2f), reg(.2,.2) %.2f (%.2f); ideal>reg %s, reg>cont %s, over<reg %s; %.0f s",
              ideal.first, ideal.second, reg.first, reg.second, reg_l.first, reg_l.second, cont.first, cont.second,
              over.first, over.second, o1 ? "yes" : "no", o2 ? "yes" : "no", o3 ? "yes" : "no", secs)};
}

// 6. Modularity identities and a pair-loop oracle.
Outcome modularity_identities() {
  const Graph tri = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  const double q_split = modularity(tri, std::vector<int>{0, 0, 0, 1, 1, 1});
  const double q_one = modularity(tri, std::vector<int>(6, 0));
  double worst = 0;
  std::size_t checked = 0;
  for (std::uint64_t t = 0; checked < 100; ++t) {
    Rng rng(derive_seed(kSeed, "c6", t));
    const std::size_t n = 2 + rng.below(49);
    const double p = 0.05 + 0.5 * rng.uniform();
    const bool weighted = t % 2;
    GraphBuilder b(n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (rng.bernoulli(p)) b.set_edge(static_cast<int>(u), static_cast<int>(v), weighted ? 0.1 + rng.uniform() : 1.0);
    const Graph g = std::move(b).build();
    if (g.edge_count() == 0) continue;
    std::vector<int> c(n);
    const std::size_t k = 1 + rng.below(5);
    for (auto& x : c) x = static_cast<int>(rng.below(k));
    double two_m = 0;
    std::vector<double> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        deg[i] += g.weight(static_cast<int>(i), static_cast<int>(j));
        two_m += g.weight(static_cast<int>(i), static_cast<int>(j));
      }
    double q = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (c[i] == c[j]) q += g.weight(static_cast<int>(i), static_cast<int>(j)) - deg[i] * deg[j] / two_m;
    q /= two_m;
    worst = std::max(worst, std::abs(q - modularity(g, c)));
    ++checked;
  }
  const bool pass = std::abs(q_one) <= 1e-12 && std::abs(q_split - 0.5) <= 1e-12 && worst <= 1e-12;
  return {pass, fmt("single cluster %.3g, two triangles %.15f, max oracle diff %.3g over %zu graphs", q_one, q_split,
                    worst, checked)};
}

// 7. Procrustes recovers a planted orthogonal map.
Outcome procrustes_recovery() {
  double worst_res = 0, worst_r = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(kSeed, "c7", t));
    const auto d = static_cast<Eigen::Index>(1 + rng.below(6));
    const auto s = d + static_cast<Eigen::Index>(rng.below(20));
    Eigen::MatrixXd y(s, d), g(d, d);
    for (Eigen::Index i = 0; i < s; ++i)
      for (Eigen::Index j = 0; j < d; ++j) y(i, j) = rng.normal();
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.normal();
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    const auto al = procrustes(y * q, y);
    worst_res = std::max(worst_res, al.residual);
    worst_r = std::max(worst_r, (al.rotation - q).norm());
  }
  return {worst_res <= 1e-8 && worst_r <= 1e-8, fmt("max residual %.3g, max ||R - Q||_F %.3g", worst_res, worst_r)};
}

// 8. ASE followed by k-means recovers the blocks.
Outcome ase_sanity() {
  const auto t0 = Clock::now();
  std::size_t good = 0;
  double worst = 1;
  for (std::uint64_t t = 0; t < 100; ++t) {
    SbmParams sp{1000, section_b(), {0.5, 0.5}};
    const auto s = sample_sbm(sp, derive_seed(kSeed, "c8", t));
    const auto e = ase(s.graph, 2);
    const auto km = kmeans(e.points, 2, derive_seed(kSeed, "c8-km", t));
    const double ari = adjusted_rand_index(km.labels, s.blocks);
    worst = std::min(worst, ari);
    good += ari >= 0.95 ? 1 : 0;
  }
  return {good >= 95, fmt("%zu/100 trials with ARI >= 0.95 (min %.3f), %.0f s", good, worst, seconds_since(t0))};
}

// 9. Both losses recover the same verification count.
Outcome loss_identity() {
  std::size_t bad = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    Rng rng(derive_seed(kSeed, "c9", t));
    const std::size_t m = 2 + rng.below(100);
    const std::size_t nv = 1 + rng.below(m);
    std::vector<std::size_t> pos(m);
    std::iota(pos.begin(), pos.end(), 1);
    rng.shuffle(pos.begin(), pos.end());
    pos.resize(nv);
    if (rng.bernoulli(0.2)) pos[0] = kUnranked;
    const std::size_t k = 1 + rng.below(m - 1);
    const auto h = static_cast<double>(verification_h(pos, k));
    const double a = static_cast<double>(nv) * (1 - level_k_recall_loss(pos, k));
    const double b = static_cast<double>(k) * (1 - level_k_precision_loss(pos, k));
    if (std::round(a) != h || std::round(b) != h || std::abs(a - h) > 1e-9 || std::abs(b - h) > 1e-9) ++bad;
  }
  return {bad == 0, fmt("%zu mismatches in 1000 configurations", bad)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Replaying a manifest reproduces every CSV byte for byte.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "vnom_acceptance_c10";
  fs::remove_all(root);
  ExperimentConfig base;
  base.mode = RunMode::Simulate;
  base.seed = kSeed;
  base.n = 120;
  base.n_seed_sets = 3;
  base.x_max = 20;
  base.sweep_reps = 2;
  base.grid_l = {0.0, 0.1};
  base.grid_h = {0.0, 0.1};
  base.add_selected = true;
  base.out = (root / "first").string();
  const auto first = run_experiment(base);
  std::size_t compared = 0, differ = 0;
  for (const char* name : {"a", "b"}) {
    auto replay = config_from_manifest(first.manifest);
    replay.out = (root / name).string();
    run_experiment(replay);
  }
  for (const auto& entry : fs::directory_iterator(root / "first")) {
    const auto fname = entry.path().filename();
    const auto ext = fname.extension();
    if (ext != ".csv" && ext != ".tsv" && ext != ".jsonl") continue;
    const std::string ref = slurp(entry.path());
    for (const char* name : {"a", "b"}) {
      ++compared;
      if (slurp(root / name / fname) != ref) ++differ;
    }
  }
  fs::remove_all(root);
  return {compared > 0 && differ == 0, fmt("%zu file comparisons, %zu differ", compared, differ)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"adversary density law", adversary_density},
      {"correlation law", correlation_law},
      {"bayes optimality (exact)", bayes_optimality},
      {"block-identifier loss", psi_loss},
      {"regime ordering at x=20", regime_ordering},
      {"modularity identities", modularity_identities},
      {"procrustes recovery", procrustes_recovery},
      {"ase sanity", ase_sanity},
      {"loss bookkeeping identity", loss_identity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
