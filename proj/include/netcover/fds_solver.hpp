#pragma once

#include <array>
#include <optional>
#include <vector>

#include "netcover/level_curves.hpp"
#include "netcover/mixed_distance.hpp"
#include "netcover/model.hpp"
#include "netcover/preprocess.hpp"

namespace netcover {

struct SolverOptions {
  int trace_resolution = kDefaultTraceResolution;
  double trace_tol = kTraceTolerance;
  double refine_tol = kRefineTolerance;
  double dedupe_radius = kDedupeRadius;
  double coverage_tol = kCoverageTolerance;
  /// Worker threads for the global solve; 0 means all hardware threads.
  int jobs = 0;

  IntersectOptions intersect_options() const { return {refine_tol, dedupe_radius, kMaxCrossings, 50}; }
};

/// Problem restricted to X1 in L_p, X2 in L_q. p_index and q_index refer to
/// Preprocessed::segments.
struct RestrictedProblem {
  int p_index = 0;
  int q_index = 0;
  SegmentPair pair;

  Rect rect() const { return {pair.width(), pair.height()}; }
};

RestrictedProblem make_restricted_problem(const Network& net, const Preprocessed& pre, int p_index, int q_index);

/// Boundary curves of one O/D pair on one rectangle, indexed
/// [orientation][branch]. Type2 pairs only carry branch A.
struct PairCurves {
  int pair_index = -1;
  std::array<std::array<std::optional<LevelCurve>, 2>, 2> curves;

  const std::optional<LevelCurve>& at(Orientation o, Branch b) const {
    return curves[o == Orientation::Forward ? 0 : 1][b == Branch::A ? 0 : 1];
  }
  /// Non-empty curves in (12a, 12b, 21a, 21b) order.
  std::vector<const LevelCurve*> nonempty() const;
  int traced() const;
};

PairCurves trace_pair_curves(const ProblemInstance& inst, const RestrictedProblem& rp, int pair_index,
                             const SolverOptions& opts = {});

/// Bookkeeping for the intersections computed while building Ω.
struct IntersectionStats {
  int curve_pairs = 0;
  int points = 0;
  int max_per_curve_pair = 0;
  int retraces = 0;
  int bound_violations = 0;
  int unrefined = 0;

  void add(const IntersectionSet& set);
  void merge(const IntersectionStats& other);
};

/// Per orientation: the crossings of the two branch curves if any, else the
/// first vertex of each non-empty branch curve.
std::vector<Point2> build_Q(const PairCurves& curves, const SolverOptions& opts = {},
                            IntersectionStats* stats = nullptr);

/// Union over all curve combinations of the two pairs, deduped. Throws
/// std::invalid_argument when both arguments describe the same O/D pair.
std::vector<IntersectionPoint> build_P(const PairCurves& ij, const PairCurves& kr, const SolverOptions& opts = {},
                                       IntersectionStats* stats = nullptr);

enum class Provenance { Q, P, BoundaryAugment, Fallback };

const char* to_string(Provenance p);

struct OmegaPoint {
  Point2 point = Point2::Zero();
  Provenance provenance = Provenance::Fallback;
};

struct FdsSolution {
  std::vector<OmegaPoint> omega;
  Point2 best = Point2::Zero();
  Provenance best_provenance = Provenance::Fallback;
  double objective = 0.0;
  std::vector<PairKey> covered;
  int curves = 0;
  IntersectionStats intersections;
};

FdsSolution solve_restricted(const ProblemInstance& inst, const RestrictedProblem& rp, const SolverOptions& opts = {});

struct GlobalStats {
  int segments = 0;
  int restricted_problems = 0;
  long omega_total = 0;
  int type1_problems = 0;
  int type2_problems = 0;
  int curves = 0;
  IntersectionStats intersections;
};

struct GlobalResult {
  Solution solution;
  int p_index = 0;
  int q_index = 0;
  Point2 local = Point2::Zero();
  Provenance provenance = Provenance::Fallback;
  GlobalStats stats;
};

/// Unordered segment pairs including the diagonal, reduced by (F desc,
/// problem index, x, y) so the result does not depend on `jobs`.
GlobalResult solve_global(const ProblemInstance& inst, const Preprocessed& pre, const SolverOptions& opts = {});
GlobalResult solve_global(const ProblemInstance& inst, const SolverOptions& opts = {});

/// Unordered pairs (p, q), p <= q, in problem-index order.
std::vector<std::pair<int, int>> segment_pairs(int segment_count);

/// Maps local rectangle coordinates back to network points.
Solution to_solution(const Network& net, const RestrictedProblem& rp, const Point2& local, double objective,
                     std::vector<PairKey> covered);

}  // namespace netcover
