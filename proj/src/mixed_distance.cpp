#include "netcover/mixed_distance.hpp"

#include <stdexcept>

namespace netcover {

const char* to_string(Orientation o) { return o == Orientation::Forward ? "12" : "21"; }
const char* to_string(Branch b) { return b == Branch::A ? "a" : "b"; }

namespace {

constexpr double kDomainSlack = 1e-9;

void check_domain(const SegmentPair& sp, double x, double y) {
  if (!(x >= -kDomainSlack && x <= sp.width() + kDomainSlack && y >= -kDomainSlack &&
        y <= sp.height() + kDomainSlack)) {
    throw std::domain_error("point outside the segment-pair rectangle");
  }
}

}  // namespace

double network_distance(const SegmentPair& sp, double x, double y) {
  check_domain(sp, x, y);
  return std::max(0.0, sp.cls.distance(x, y));
}

double branch_length(const ProblemInstance& inst, const ODPair& pair, const SegmentPair& sp, double x, double y,
                     Orientation orient, Branch branch) {
  check_domain(sp, x, y);
  const Point2 x1 = sp.frame_p.at(x);
  const Point2 x2 = sp.frame_q.at(y);
  const Point2& ai = inst.facility(pair.origin);
  const Point2& aj = inst.facility(pair.dest);
  const double d = branch == Branch::A ? sp.cls.a(x, y) : sp.cls.b(x, y);
  if (orient == Orientation::Forward) return (ai - x1).norm() + inst.alpha * d + (x2 - aj).norm();
  return (ai - x2).norm() + inst.alpha * d + (x1 - aj).norm();
}

double path_length_h(const ProblemInstance& inst, const ODPair& pair, const SegmentPair& sp, double x, double y,
                     Orientation orient) {
  check_domain(sp, x, y);
  const Point2 x1 = sp.frame_p.at(x);
  const Point2 x2 = sp.frame_q.at(y);
  const Point2& ai = inst.facility(pair.origin);
  const Point2& aj = inst.facility(pair.dest);
  const double d = std::max(0.0, sp.cls.distance(x, y));
  if (orient == Orientation::Forward) return (ai - x1).norm() + inst.alpha * d + (x2 - aj).norm();
  return (ai - x2).norm() + inst.alpha * d + (x1 - aj).norm();
}

double mixed_distance_f(const ProblemInstance& inst, const ODPair& pair, const SegmentPair& sp, double x, double y) {
  return std::min(path_length_h(inst, pair, sp, x, y, Orientation::Forward),
                  path_length_h(inst, pair, sp, x, y, Orientation::Reverse));
}

Coverage coverage_and_objective(const ProblemInstance& inst, const SegmentPair& sp, double x, double y, double tol) {
  Coverage cov;
  for (const ODPair& pair : inst.pairs) {
    if (mixed_distance_f(inst, pair, sp, x, y) <= pair.acceptance + tol) {
      cov.covered.emplace_back(pair.origin, pair.dest);
      cov.objective += pair.weight;
    }
  }
  return cov;
}

}  // namespace netcover
