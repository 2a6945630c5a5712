#include "netcover/preprocess.hpp"

#include <functional>
#include <limits>
#include <queue>
#include <sstream>

namespace netcover {

DistanceMatrix all_pairs_shortest_paths(const Network& net) {
  const auto n = static_cast<int>(net.vertex_count());
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (int e = 0; e < static_cast<int>(net.edge_count()); ++e) {
    const int a = net.u_index(e);
    const int b = net.w_index(e);
    const double len = net.edges()[static_cast<std::size_t>(e)].length;
    adj[static_cast<std::size_t>(a)].emplace_back(b, len);
    adj[static_cast<std::size_t>(b)].emplace_back(a, len);
  }

  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, inf);
  using Item = std::pair<double, int>;
  for (int s = 0; s < n; ++s) {
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    d(s, s) = 0.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      auto [dv, v] = heap.top();
      heap.pop();
      if (dv > d(s, v)) continue;
      for (auto [n2, len] : adj[static_cast<std::size_t>(v)]) {
        if (dv + len < d(s, n2)) {
          d(s, n2) = dv + len;
          heap.emplace(d(s, n2), n2);
        }
      }
    }
    for (int t = 0; t < n; ++t) {
      if (!std::isfinite(d(s, t))) {
        std::ostringstream os;
        os << "network not connected: no path between vertex " << net.vertices()[static_cast<std::size_t>(s)].id
           << " and vertex " << net.vertices()[static_cast<std::size_t>(t)].id;
        throw DisconnectedNetworkError(os.str());
      }
    }
  }
  // Dijkstra sums may differ in the last ulp between directions.
  d = (0.5 * (d + d.transpose())).eval();
  return DistanceMatrix(std::move(d));
}

double antipodal_arc(const Network& net, int edge, int vertex_index, const DistanceMatrix& dist) {
  const double len = net.edges()[static_cast<std::size_t>(edge)].length;
  const double du = dist(vertex_index, net.u_index(edge));
  const double dw = dist(vertex_index, net.w_index(edge));
  return std::clamp((dw - du + len) / 2.0, 0.0, len);
}

std::vector<BottleneckPoint> arc_bottleneck_points(const Network& net, int edge, const DistanceMatrix& dist) {
  const double len = net.edges()[static_cast<std::size_t>(edge)].length;
  const int u = net.u_index(edge);
  const int w = net.w_index(edge);

  std::vector<BottleneckPoint> raw;
  for (int v = 0; v < static_cast<int>(net.vertex_count()); ++v) {
    const double arc = (dist(v, w) - dist(v, u) + len) / 2.0;
    if (arc > kPartitionTolerance && arc < len - kPartitionTolerance) {
      raw.push_back({edge, {net.vertices()[static_cast<std::size_t>(v)].id}, arc});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.arc < b.arc; });

  std::vector<BottleneckPoint> merged;
  for (auto& bp : raw) {
    if (!merged.empty() && bp.arc - merged.back().arc <= kPartitionTolerance) {
      merged.back().vertices.push_back(bp.vertices.front());
    } else {
      merged.push_back(std::move(bp));
    }
  }
  return merged;
}

std::vector<LinearArcSegment> linear_arc_segments(const Network& net, int edge,
                                                  std::span<const BottleneckPoint> bottlenecks) {
  const double len = net.edges()[static_cast<std::size_t>(edge)].length;
  std::vector<double> cuts{0.0};
  for (const auto& bp : bottlenecks) cuts.push_back(bp.arc);
  cuts.push_back(len);

  std::vector<LinearArcSegment> segs;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    segs.push_back({edge, cuts[k], cuts[k + 1], static_cast<int>(k)});
  }
  return segs;
}

Eigen::Vector2d DistanceForm::gradient(double x, double y) const {
  if (kind == FormKind::Affine) return {affine.cx, affine.cy};
  const double s = x > y ? 1.0 : (x < y ? -1.0 : 0.0);
  return {s, -s};
}

namespace {

bool within(double lo, double hi, double a, double b) {
  if (lo > hi) std::swap(lo, hi);
  return a >= lo - kPartitionTolerance && b <= hi + kPartitionTolerance;
}

// Distance from vertex `v` to the point at arc `s_q + y` of L_q, affine in y
// because L_q is a linear arc segment. Returned as (constant, slope in y).
std::pair<double, double> vertex_to_segment(int v, const LinearArcSegment& lq, const DistanceMatrix& dist,
                                            const Network& net) {
  const double len = net.edges()[static_cast<std::size_t>(lq.edge)].length;
  const double du = dist(v, net.u_index(lq.edge));
  const double dw = dist(v, net.w_index(lq.edge));
  const double mid = 0.5 * (lq.start + lq.end);
  if (du + mid <= dw + len - mid) return {du + lq.start, 1.0};
  return {dw + len - lq.start, -1.0};
}

// Largest and smallest value of an affine form over [0,w] x [0,h].
std::pair<double, double> range_over(const AffineForm& f, double w, double h) {
  double lo = f.c0 + std::min(0.0, f.cx * w) + std::min(0.0, f.cy * h);
  double hi = f.c0 + std::max(0.0, f.cx * w) + std::max(0.0, f.cy * h);
  return {lo, hi};
}

// Builds the class from the two routing forms. Type2 keeps whichever form
// dominates the rectangle; if neither does the pair is concave regardless of
// the containment test.
PairClass from_forms(bool concave, const AffineForm& fa, const AffineForm& fb, double w, double h) {
  PairClass pc;
  pc.a = {FormKind::Affine, fa};
  pc.b = {FormKind::Affine, fb};
  if (concave) {
    pc.type = PairType::Type1;
    return pc;
  }
  AffineForm diff{fa.c0 - fb.c0, fa.cx - fb.cx, fa.cy - fb.cy};
  auto [lo, hi] = range_over(diff, w, h);
  if (hi <= kPartitionTolerance) {
    pc.type = PairType::Type2;
    pc.b = pc.a;
  } else if (lo >= -kPartitionTolerance) {
    pc.type = PairType::Type2;
    pc.a = pc.b;
  } else {
    pc.type = PairType::Type1;
  }
  return pc;
}

}  // namespace

bool concave_pair(const LinearArcSegment& lp, const LinearArcSegment& lq, const DistanceMatrix& dist,
                  const Network& net) {
  if (lp.edge == lq.edge) {
    if (lp.index == lq.index) return false;
    const double len = net.edges()[static_cast<std::size_t>(lp.edge)].length;
    const double duw = dist(net.u_index(lp.edge), net.w_index(lp.edge));
    if (!(duw < len - kPartitionTolerance)) return false;
    const double w_bar = (len - duw) / 2.0;
    const double u_bar = (len + duw) / 2.0;
    const LinearArcSegment& left = lp.start < lq.start ? lp : lq;
    const LinearArcSegment& right = lp.start < lq.start ? lq : lp;
    return within(0.0, w_bar, left.start, left.end) && within(u_bar, len, right.start, right.end);
  }
  // [w̄_q, ū_q] on e_p holds the antipodal points of e_q's endpoints, and
  // symmetrically on e_q.
  const double wq_bar = antipodal_arc(net, lp.edge, net.w_index(lq.edge), dist);
  const double uq_bar = antipodal_arc(net, lp.edge, net.u_index(lq.edge), dist);
  const double wp_bar = antipodal_arc(net, lq.edge, net.w_index(lp.edge), dist);
  const double up_bar = antipodal_arc(net, lq.edge, net.u_index(lp.edge), dist);
  return within(wq_bar, uq_bar, lp.start, lp.end) && within(wp_bar, up_bar, lq.start, lq.end);
}

PairClass classify_segment_pair(const LinearArcSegment& lp, const LinearArcSegment& lq, const DistanceMatrix& dist,
                                const Network& net) {
  const bool concave = concave_pair(lp, lq, dist, net);
  const double w = lp.length();
  const double h = lq.length();

  if (lp.edge == lq.edge) {
    if (lp.index == lq.index) {
      PairClass pc;
      pc.type = PairType::Type2;
      pc.a = {FormKind::AbsDifference, {}};
      pc.b = pc.a;
      return pc;
    }
    const double len = net.edges()[static_cast<std::size_t>(lp.edge)].length;
    const double duw = dist(net.u_index(lp.edge), net.w_index(lp.edge));
    const double shift = lq.start - lp.start;
    // Direct route along the edge, and the route that leaves through one
    // endpoint and comes back through the other.
    AffineForm direct, around;
    if (shift > 0.0) {
      direct = {shift, -1.0, 1.0};
      around = {duw + len - shift, 1.0, -1.0};
    } else {
      direct = {-shift, 1.0, -1.0};
      around = {duw + len + shift, -1.0, 1.0};
    }
    return from_forms(concave, direct, around, w, h);
  }

  const double len_p = net.edges()[static_cast<std::size_t>(lp.edge)].length;
  auto [cu, su] = vertex_to_segment(net.u_index(lp.edge), lq, dist, net);
  auto [cw, sw] = vertex_to_segment(net.w_index(lp.edge), lq, dist, net);
  // Leave e_p through u_p (x grows the route) or through w_p.
  AffineForm via_u{lp.start + cu, 1.0, su};
  AffineForm via_w{len_p - lp.start + cw, -1.0, sw};
  return from_forms(concave, via_u, via_w, w, h);
}

SegmentFrame segment_frame(const Network& net, const LinearArcSegment& seg) {
  const double len = net.edges()[static_cast<std::size_t>(seg.edge)].length;
  SegmentFrame f;
  f.origin = make_network_point(net, seg.edge, seg.start).position;
  f.step = (net.w_position(seg.edge) - net.u_position(seg.edge)) / len;
  f.length = seg.length();
  return f;
}

SegmentPair make_segment_pair(const Network& net, const DistanceMatrix& dist, const LinearArcSegment& lp,
                              const LinearArcSegment& lq) {
  return {lp, lq, segment_frame(net, lp), segment_frame(net, lq), classify_segment_pair(lp, lq, dist, net)};
}

Preprocessed preprocess(const Network& net) {
  Preprocessed out;
  out.distances = all_pairs_shortest_paths(net);
  for (int e = 0; e < static_cast<int>(net.edge_count()); ++e) {
    out.bottlenecks.push_back(arc_bottleneck_points(net, e, out.distances));
    auto segs = linear_arc_segments(net, e, out.bottlenecks.back());
    out.segments.insert(out.segments.end(), segs.begin(), segs.end());
  }
  return out;
}

}  // namespace netcover
