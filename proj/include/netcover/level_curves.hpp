#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "netcover/mixed_distance.hpp"
#include "netcover/model.hpp"
#include "netcover/preprocess.hpp"

namespace netcover {

/// weight * |anchor - (origin + t * step)|, convex in t.
struct RadialTerm {
  double weight = 0.0;
  Point2 anchor = Point2::Zero();
  Point2 origin = Point2::Zero();
  Point2 step = Point2::UnitX();

  double value(double t) const { return weight == 0.0 ? 0.0 : weight * (anchor - (origin + t * step)).norm(); }
  double derivative(double t) const;
  Eigen::ArrayXd sample(const Eigen::ArrayXd& ts) const;

  bool operator==(const RadialTerm&) const = default;
};

/// g(x, y) = x_term(x) + scale * coupling(x, y) + y_term(y).
///
/// Every branch field of a segment pair has this shape: two Euclidean access
/// and exit terms plus alpha times one routing form. Convex whenever the
/// coupling is affine or |x - y| with nonnegative scale.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(RadialTerm x_term, RadialTerm y_term, double scale, DistanceForm coupling)
      : x_term_(std::move(x_term)), y_term_(std::move(y_term)), scale_(scale), coupling_(coupling) {}

  static ScalarField affine(const AffineForm& form) { return {{}, {}, 1.0, {FormKind::Affine, form}}; }

  double operator()(double x, double y) const { return x_term_.value(x) + scale_ * coupling_(x, y) + y_term_.value(y); }
  double operator()(const Point2& p) const { return (*this)(p.x(), p.y()); }
  Eigen::Vector2d gradient(const Point2& p) const;

  /// Values on the tensor grid xs x ys; entry (k, m) is g(xs[k], ys[m]).
  Eigen::ArrayXXd sample(const Eigen::ArrayXd& xs, const Eigen::ArrayXd& ys) const;

  const RadialTerm& x_term() const { return x_term_; }
  const RadialTerm& y_term() const { return y_term_; }
  double scale() const { return scale_; }
  const DistanceForm& coupling() const { return coupling_; }

  bool operator==(const ScalarField&) const = default;

 private:
  RadialTerm x_term_;
  RadialTerm y_term_;
  double scale_ = 0.0;
  DistanceForm coupling_;
};

/// g_ij^t for the given orientation over the pair's rectangle.
ScalarField branch_field(const ProblemInstance& inst, const ODPair& pair, const SegmentPair& sp, Orientation orient,
                         Branch branch);

struct Rect {
  double width = 0.0;
  double height = 0.0;

  bool contains(const Point2& p, double slack = 0.0) const {
    return p.x() >= -slack && p.x() <= width + slack && p.y() >= -slack && p.y() <= height + slack;
  }
  bool on_boundary(const Point2& p, double slack) const;
  Point2 clamp(const Point2& p) const;
};

/// Lower bound of a field on a rectangle (each term minimized on its own)
/// and its exact maximum (attained at a corner since the field is convex).
struct FieldBounds {
  double lower = 0.0;
  double upper = 0.0;
};

FieldBounds field_bounds(const ScalarField& field, const Rect& rect);

struct Polyline {
  std::vector<Point2> vertices;
  /// Closed loops repeat their first vertex at the end.
  bool closed = false;
};

struct CurveLabel {
  int pair_index = -1;
  int origin = -1;
  int dest = -1;
  Orientation orientation = Orientation::Forward;
  Branch branch = Branch::A;
};

inline constexpr int kDefaultTraceResolution = 256;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kRefineTolerance = 1e-9;
inline constexpr double kDedupeRadius = 1e-7;
inline constexpr int kMaxCrossings = 12;

struct LevelCurve {
  CurveLabel label;
  ScalarField field;
  double level = 0.0;
  Rect rect;
  int resolution = kDefaultTraceResolution;
  double tolerance = kTraceTolerance;
  std::vector<Polyline> polylines;

  bool empty() const { return polylines.empty(); }
  std::size_t vertex_count() const;
};

/// Grid contouring of {g = level} over `rect` with `resolution` cells per
/// axis. Returns no polylines when field_bounds() shows the level is outside
/// the field's range on the rectangle. Crossings are refined along their grid edge to |g - level| <
/// `tolerance`. Throws std::invalid_argument on resolution < 16 or negative
/// level, std::domain_error on a non-finite field value.
LevelCurve trace_level_curve(const ScalarField& field, double level, const Rect& rect,
                             int resolution = kDefaultTraceResolution, double tolerance = kTraceTolerance);

struct IntersectionPoint {
  Point2 point = Point2::Zero();
  /// max(|g1 - level1|, |g2 - level2|)
  double residual = 0.0;
  bool refined = true;
};

struct IntersectionSet {
  CurveLabel first;
  CurveLabel second;
  std::vector<IntersectionPoint> points;
  bool retraced = false;
  bool bound_exceeded = false;
};

struct IntersectOptions {
  double refine_tol = kRefineTolerance;
  double dedupe_radius = kDedupeRadius;
  int max_points = kMaxCrossings;
  int max_iterations = 50;
};

/// Crossing points of two curves on the same rectangle. Each polyline
/// crossing is refined by a damped Newton iteration on (g1 - l1, g2 - l2)
/// with a bisection fallback along the first curve's chord. More than
/// `max_points` deduped points triggers one re-trace at doubled resolution.
/// Curves with identical field and level have no isolated crossings and
/// yield an empty set.
IntersectionSet intersect_curves(const LevelCurve& c1, const LevelCurve& c2, const IntersectOptions& opts = {});

/// Polyline endpoints lying on the rectangle boundary.
std::vector<Point2> rectangle_boundary_points(const LevelCurve& c);

/// Columns: pair_i, pair_j, orientation, branch, polyline_id, vertex_index, x, y.
void write_curves_csv(std::ostream& out, std::span<const LevelCurve> curves);

}  // namespace netcover
