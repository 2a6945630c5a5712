#pragma once

#include <vector>

#include "netcover/model.hpp"
#include "netcover/preprocess.hpp"

namespace netcover {

/// Forward (12): X1 is the access point from A_i and X2 the exit towards
/// A_j. Reverse (21) swaps the two roles.
enum class Orientation { Forward, Reverse };

/// Which routing form of a Type1 pair. Both coincide for Type2.
enum class Branch { A, B };

inline constexpr double kCoverageTolerance = 1e-9;

const char* to_string(Orientation o);
const char* to_string(Branch b);

/// d(X1, X2) for X1 = L_p(x), X2 = L_q(y). Throws std::domain_error when
/// (x, y) is outside the parameter rectangle.
double network_distance(const SegmentPair& sp, double x, double y);

/// Travel length of one branch: |A_i - access| + alpha * d_t + |exit - A_j|.
double branch_length(const ProblemInstance& inst, const ODPair& pair, const SegmentPair& sp, double x, double y,
                     Orientation orient, Branch branch);

/// h_ij for the given orientation; min over both branches.
double path_length_h(const ProblemInstance& inst, const ODPair& pair, const SegmentPair& sp, double x, double y,
                     Orientation orient);

/// f_ij = min over both orientations.
double mixed_distance_f(const ProblemInstance& inst, const ODPair& pair, const SegmentPair& sp, double x, double y);

struct Coverage {
  std::vector<PairKey> covered;
  double objective = 0.0;
};

/// A pair is covered when f_ij <= d_ij + tol.
Coverage coverage_and_objective(const ProblemInstance& inst, const SegmentPair& sp, double x, double y,
                                double tol = kCoverageTolerance);

}  // namespace netcover
