#include <cmath>
#include <sstream>

#include "doctest.h"
#include "vnom/adversary.hpp"
#include "vnom/models.hpp"

using namespace vnom;

namespace {

// Per-pair probability straight from the edge rules: a pair is eligible for
// addition when one endpoint is in W+ and the other is not in W-, and for
// deletion symmetrically. Each unordered pair gets one trial.
double rule_probability(double base, int ca, int cb, double sp, double sm) {
  const bool add = (ca == 1 && cb != 2) || (cb == 1 && ca != 2);
  const bool del = (ca == 2 && cb != 1) || (cb == 2 && ca != 1);
  if (add) return base + (1.0 - base) * sp;
  if (del) return base * (1.0 - sm);
  return base;
}

Eigen::MatrixXd two_block(double p, double q, double r) {
  Eigen::MatrixXd b(2, 2);
  b << p, r, r, q;
  return b;
}

}  // namespace

TEST_CASE("single-trial block matrix matches the per-pair edge rules") {
  const double p = 0.4, q = 0.5, r = 0.3, sp = 0.8, sm = 0.6;
  const auto b = two_block(p, q, r);
  const auto m = contaminated_block_matrix(b, sp, sm, CrossTermVariant::SingleTrial);
  for (int a = 0; a < 6; ++a)
    for (int c = 0; c < 6; ++c) {
      const double base = b(a / 3, c / 3);
      CHECK(m(a, c) == doctest::Approx(rule_probability(base, a % 3, c % 3, sp, sm)).epsilon(1e-15));
    }
  CHECK(m.isApprox(m.transpose()));
}

TEST_CASE("variants differ only in the cross-block contaminated terms") {
  const auto b = two_block(0.4, 0.5, 0.3);
  const double sp = 0.7, sm = 0.5;
  const auto v = contaminated_block_matrix(b, sp, sm, CrossTermVariant::Verbatim);
  const auto t = contaminated_block_matrix(b, sp, sm, CrossTermVariant::TwoTrial);
  const auto s = contaminated_block_matrix(b, sp, sm, CrossTermVariant::SingleTrial);
  CHECK(v(1, 4) == doctest::Approx(0.3 + sp * sp * 0.7));
  CHECK(t(1, 4) == doctest::Approx(0.3 + (2 * sp - sp * sp) * 0.7));
  CHECK(s(1, 4) == doctest::Approx(0.3 + sp * 0.7));
  CHECK(v(2, 5) == doctest::Approx(0.3 * (1 - sm) * (1 - sm)));
  CHECK(s(2, 5) == doctest::Approx(0.3 * (1 - sm)));
  for (int a = 0; a < 6; ++a)
    for (int c = 0; c < 6; ++c) {
      const bool cross = (a == 1 && c == 4) || (a == 4 && c == 1) || (a == 2 && c == 5) || (a == 5 && c == 2);
      if (!cross) {
        CHECK(v(a, c) == s(a, c));
        CHECK(t(a, c) == s(a, c));
      }
    }
  CHECK_THROWS_AS(contaminated_block_matrix(Eigen::MatrixXd::Ones(3, 3), sp, sm), std::invalid_argument);
}

TEST_CASE("contaminated densities agree with the single-trial matrix") {
  const auto params = SbmParams::two_block(600, 0.4, 0.5, 0.3);
  const auto sample = sample_sbm(params, 101);
  AdversaryConfig cfg{0.15, 0.15, 0.8, 0.7, 55};
  const auto rec = contaminate(sample.graph, cfg);
  const auto strata = contamination_strata(sample.blocks, rec.w_plus, rec.w_minus);
  const auto dens = stratum_densities(rec.contaminated, strata, 6);
  const auto m = contaminated_block_matrix(params.block_probs, cfg.s_plus, cfg.s_minus,
                                           CrossTermVariant::SingleTrial);
  for (int a = 0; a < 6; ++a)
    for (int c = a; c < 6; ++c) {
      const double n = dens.pairs(a, c);
      if (n < 50) continue;
      const double pr = m(a, c);
      const double se = std::sqrt(std::max(pr * (1 - pr), 1e-12) / n);
      CHECK(std::abs(dens.density(a, c) - pr) < 4.5 * se + 1e-12);
    }
}

TEST_CASE("contamination record reconstructs the contaminated graph") {
  const auto sample = sample_sbm(SbmParams::two_block(80, 0.4, 0.5, 0.3), 3);
  const auto rec = contaminate(sample.graph, {0.2, 0.2, 0.5, 0.5, 9});
  GraphBuilder b(sample.graph);
  for (const Edge& e : rec.added) {
    CHECK_FALSE(sample.graph.adjacent(e.u, e.v));
    b.set_edge(e.u, e.v);
  }
  for (const Edge& e : rec.deleted) {
    CHECK(sample.graph.adjacent(e.u, e.v));
    b.remove_edge(e.u, e.v);
  }
  CHECK(std::move(b).build() == rec.contaminated);
  for (int u : rec.w_plus)
    for (int v : rec.w_minus) CHECK(u != v);
  // Same seed, same record.
  const auto again = contaminate(sample.graph, {0.2, 0.2, 0.5, 0.5, 9});
  CHECK(again.contaminated == rec.contaminated);
  CHECK(again.added == rec.added);
}

TEST_CASE("pairs between W+ and W- are untouched") {
  Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1}});
  const auto rec = contaminate_sets(g, {0, 2}, {1, 3}, 1.0, 1.0, 1);
  CHECK(rec.contaminated.adjacent(0, 1));   // + / - edge kept
  CHECK_FALSE(rec.contaminated.adjacent(2, 3));  // + / - non-edge not added
  CHECK(rec.contaminated.adjacent(0, 2));   // + / + added
  CHECK_FALSE(rec.contaminated.adjacent(1, 3));
  CHECK_THROWS_AS(contaminate_sets(g, {0}, {0}, 0.5, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(contaminate_sets(g, {7}, {}, 0.5, 0.5, 1), std::out_of_range);
  GraphBuilder wb(2);
  wb.set_edge(0, 1, 2.5);
  CHECK_THROWS_AS(contaminate_sets(std::move(wb).build(), {0}, {}, 0.5, 0.5, 1), std::invalid_argument);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(contaminate(Graph(3), {0.0, 0.1, 0.5, 0.5, 0}), std::invalid_argument);
  CHECK_THROWS_AS(contaminate(Graph(3), {0.1, 1.0, 0.5, 0.5, 0}), std::invalid_argument);
  CHECK_THROWS_AS(contaminate(Graph(3), {0.1, 0.1, 1.5, 0.5, 0}), std::invalid_argument);
}

TEST_CASE("inconsistency conditions") {
  const auto c = inconsistency_conditions(0.5, 0.3, 0.2, 0.3);
  CHECK(c.deletion);          // 0.2 < 0.3
  CHECK_FALSE(c.addition);    // 0.2 / 0.7 = 0.2857 > 0.2
  const auto d = inconsistency_conditions(0.5, 0.3, 0.3, 0.1);
  CHECK_FALSE(d.deletion);
  CHECK(d.addition);
  CHECK_THROWS_AS(inconsistency_conditions(0.5, 1.0, 0.3, 0.1), std::domain_error);
  CHECK_THROWS_AS(inconsistency_conditions(1.5, 0.2, 0.3, 0.1), std::invalid_argument);
}

TEST_CASE("audit line lists names of moved vertices and edges") {
  Graph g = Graph::from_edges(3, std::vector<Edge>{{0, 1}}, {"a", "b", "c"});
  const auto rec = contaminate_sets(g, {2}, {}, 1.0, 0.0, 4);
  std::ostringstream os;
  write_audit_line(os, rec, g, 7);
  const auto j = nlohmann::json::parse(os.str());
  CHECK(j["replicate"] == 7);
  CHECK(j["w_plus"] == nlohmann::json::array({"c"}));
  CHECK(j["edges_added"].size() == 2);
  CHECK(j["edges_deleted"].empty());
}
