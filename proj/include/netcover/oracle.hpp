#pragma once

#include <Eigen/Core>

#include "netcover/fds_solver.hpp"

namespace netcover {

/// Sorted sample coordinates on [0, extent]: the union of the uniform grids
/// with r, r/2, r/4, ... points (halving while r stays even and >= 2), so the
/// grid for 2r contains the grid for r. r = 2 gives the two endpoints.
Eigen::ArrayXd nested_grid(double extent, int res);

struct OracleResult {
  double objective = 0.0;
  Point2 local = Point2::Zero();
  int p_index = 0;
  int q_index = 0;
  Solution solution;
  long samples = 0;
};

/// Brute-force maximum of F over the nested res x res grid of one rectangle.
/// Ties go to the smaller x, then the smaller y. Throws std::invalid_argument
/// for res < 2.
OracleResult oracle_grid(const ProblemInstance& inst, const RestrictedProblem& rp, int res,
                         double tol = kCoverageTolerance);

/// Same over every unordered segment pair of the network.
OracleResult oracle_grid(const ProblemInstance& inst, const Preprocessed& pre, int res,
                         double tol = kCoverageTolerance);

}  // namespace netcover
