#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "netcover/model.hpp"

namespace netcover {

/// Shortest network distances between vertices, indexed by vertex position
/// in Network::vertices().
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(Eigen::MatrixXd d) : d_(std::move(d)) {}

  double operator()(int i, int j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const { return d_; }
  Eigen::Index size() const { return d_.rows(); }

 private:
  Eigen::MatrixXd d_;
};

class DisconnectedNetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One Dijkstra run per vertex. Throws DisconnectedNetworkError naming an
/// unreachable vertex pair.
DistanceMatrix all_pairs_shortest_paths(const Network& net);

/// Interior edge point where both routings to some vertex tie. Several
/// vertices may define the same point; their ids are all kept.
struct BottleneckPoint {
  int edge = 0;
  std::vector<int> vertices;
  double arc = 0.0;
};

inline constexpr double kPartitionTolerance = 1e-9;

/// Arc length on `edge` of the point farthest from `vertex_index` (clamped
/// to the edge when the distance is monotone along it).
double antipodal_arc(const Network& net, int edge, int vertex_index, const DistanceMatrix& dist);

std::vector<BottleneckPoint> arc_bottleneck_points(const Network& net, int edge, const DistanceMatrix& dist);

/// Subedge [start, end] on which every vertex distance is affine.
struct LinearArcSegment {
  int edge = 0;
  double start = 0.0;
  double end = 0.0;
  int index = 0;

  double length() const { return end - start; }
  bool operator==(const LinearArcSegment&) const = default;
};

std::vector<LinearArcSegment> linear_arc_segments(const Network& net, int edge,
                                                  std::span<const BottleneckPoint> bottlenecks);

/// c0 + cx*x + cy*y over local segment coordinates.
struct AffineForm {
  double c0 = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  double operator()(double x, double y) const { return c0 + cx * x + cy * y; }
  bool operator==(const AffineForm&) const = default;
};

enum class FormKind { Affine, AbsDifference };

/// Network distance between X1 = L_p(x) and X2 = L_q(y) as an affine form,
/// or |x - y| for two points on the same segment.
struct DistanceForm {
  FormKind kind = FormKind::Affine;
  AffineForm affine;

  double operator()(double x, double y) const {
    return kind == FormKind::Affine ? affine(x, y) : std::abs(x - y);
  }
  Eigen::Vector2d gradient(double x, double y) const;
  bool operator==(const DistanceForm&) const = default;
};

enum class PairType { Type1, Type2 };

/// Type1: d = min(a, b), concave. Type2: a == b, linear or |x - y|.
struct PairClass {
  PairType type = PairType::Type2;
  DistanceForm a;
  DistanceForm b;

  double distance(double x, double y) const { return std::min(a(x, y), b(x, y)); }
};

/// Antipodal-segment test for different edges, or the non-adjacent
/// subedge test for the same edge. Closed containment with
/// kPartitionTolerance slack.
bool concave_pair(const LinearArcSegment& lp, const LinearArcSegment& lq, const DistanceMatrix& dist,
                  const Network& net);

/// x is measured from L_p.start, y from L_q.start, both along u -> w.
PairClass classify_segment_pair(const LinearArcSegment& lp, const LinearArcSegment& lq, const DistanceMatrix& dist,
                                const Network& net);

/// Planar parametrization X(s) = origin + s * step of a segment, s in [0, length].
struct SegmentFrame {
  Point2 origin = Point2::Zero();
  Point2 step = Point2::UnitX();
  double length = 0.0;

  Point2 at(double s) const { return origin + s * step; }
};

SegmentFrame segment_frame(const Network& net, const LinearArcSegment& seg);

/// A classified pair of segments with its planar geometry.
struct SegmentPair {
  LinearArcSegment p;
  LinearArcSegment q;
  SegmentFrame frame_p;
  SegmentFrame frame_q;
  PairClass cls;

  double width() const { return p.length(); }
  double height() const { return q.length(); }
};

SegmentPair make_segment_pair(const Network& net, const DistanceMatrix& dist, const LinearArcSegment& lp,
                              const LinearArcSegment& lq);

struct Preprocessed {
  DistanceMatrix distances;
  std::vector<std::vector<BottleneckPoint>> bottlenecks;
  std::vector<LinearArcSegment> segments;
};

Preprocessed preprocess(const Network& net);

}  // namespace netcover
