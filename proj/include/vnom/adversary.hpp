#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "vnom/graph.hpp"

namespace vnom {

// Edge adversary parameters. Vertices enter W+ with probability pi_plus and
// the rest enter W- with probability pi_minus; missing edges between W+ and
// V \ W- are added with probability s_plus, present edges between W- and
// V \ W+ deleted with probability s_minus.
struct AdversaryConfig {
  double pi_plus = 0.1;
  double pi_minus = 0.1;
  double s_plus = 0.8;
  double s_minus = 0.8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ContaminationRecord {
  Graph contaminated;
  std::vector<int> w_plus;
  std::vector<int> w_minus;
  std::vector<Edge> added;
  std::vector<Edge> deleted;
};

ContaminationRecord contaminate(const Graph& g, const AdversaryConfig& cfg);

// Same edge rules with caller-chosen W+ and W- (must be disjoint).
ContaminationRecord contaminate_sets(const Graph& g, std::vector<int> w_plus, std::vector<int> w_minus,
                                     double s_plus, double s_minus, std::uint64_t seed);

// How pairs with both endpoints contaminated, in different blocks, are
// treated in the induced block matrix. The printed matrix has
// x5 = r + (2s+ - s+)^2 (1 - r) and x6 = r (1 - s-)^2.
enum class CrossTermVariant {
  Verbatim,     // x5 = r + s+^2 (1 - r),           x6 = r (1 - s-)^2
  TwoTrial,     // x5 = r + (2 s+ - s+^2) (1 - r),  x6 = r (1 - s-)^2
  SingleTrial,  // x5 = r + s+ (1 - r),             x6 = r (1 - s-)
};

std::string_view to_string(CrossTermVariant v);

// Induced 6x6 edge-probability matrix over the strata
// (B1, B1+, B1-, B2, B2+, B2-) for B = [[p, r], [r, q]].
Eigen::Matrix<double, 6, 6> contaminated_block_matrix(const Eigen::MatrixXd& b, double s_plus, double s_minus,
                                                      CrossTermVariant variant = CrossTermVariant::Verbatim);

struct InconsistencyConditions {
  bool deletion;  // p - q < s-
  bool addition;  // (p - q) / (1 - q) < s+
};

// Throws std::domain_error when q == 1 (the addition test is undefined).
InconsistencyConditions inconsistency_conditions(double p, double q, double s_plus, double s_minus);
bool deletion_condition(double p, double q, double s_minus);

// Stratum of each vertex: 3 * block + {0 clean, 1 in W+, 2 in W-}.
std::vector<int> contamination_strata(const std::vector<int>& blocks, const std::vector<int>& w_plus,
                                      const std::vector<int>& w_minus);

struct StratumDensities {
  Eigen::MatrixXd edges;  // edge counts per stratum pair
  Eigen::MatrixXd pairs;  // vertex-pair counts per stratum pair
  double density(int a, int b) const { return pairs(a, b) > 0 ? edges(a, b) / pairs(a, b) : 0.0; }
};

StratumDensities stratum_densities(const Graph& g, const std::vector<int>& strata, int stratum_count);

nlohmann::json to_json(const ContaminationRecord& rec, const Graph& original, std::size_t replicate);
void write_audit_line(std::ostream& out, const ContaminationRecord& rec, const Graph& original,
                      std::size_t replicate);

}  // namespace vnom
