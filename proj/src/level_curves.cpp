#include "netcover/level_curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <Eigen/LU>

namespace netcover {

double RadialTerm::derivative(double t) const {
  if (weight == 0.0) return 0.0;
  const Point2 diff = (origin + t * step) - anchor;
  const double r = diff.norm();
  if (r == 0.0) return 0.0;
  return weight * diff.dot(step) / r;
}

Eigen::ArrayXd RadialTerm::sample(const Eigen::ArrayXd& ts) const {
  if (weight == 0.0) return Eigen::ArrayXd::Zero(ts.size());
  const Eigen::ArrayXd dx = anchor.x() - (origin.x() + ts * step.x());
  const Eigen::ArrayXd dy = anchor.y() - (origin.y() + ts * step.y());
  return weight * (dx.square() + dy.square()).sqrt();
}

Eigen::Vector2d ScalarField::gradient(const Point2& p) const {
  Eigen::Vector2d g = scale_ * coupling_.gradient(p.x(), p.y());
  g.x() += x_term_.derivative(p.x());
  g.y() += y_term_.derivative(p.y());
  return g;
}

Eigen::ArrayXXd ScalarField::sample(const Eigen::ArrayXd& xs, const Eigen::ArrayXd& ys) const {
  const Eigen::Index nx = xs.size();
  const Eigen::Index ny = ys.size();
  Eigen::ArrayXXd coupling(nx, ny);
  if (coupling_.kind == FormKind::Affine) {
    const AffineForm& f = coupling_.affine;
    coupling = (f.c0 + f.cx * xs).replicate(1, ny) + (f.cy * ys).transpose().replicate(nx, 1);
  } else {
    coupling = (xs.replicate(1, ny) - ys.transpose().replicate(nx, 1)).abs();
  }
  return (x_term_.sample(xs).replicate(1, ny) + scale_ * coupling) + y_term_.sample(ys).transpose().replicate(nx, 1);
}

ScalarField branch_field(const ProblemInstance& inst, const ODPair& pair, const SegmentPair& sp, Orientation orient,
                         Branch branch) {
  const Point2& ai = inst.facility(pair.origin);
  const Point2& aj = inst.facility(pair.dest);
  // Forward: A_i reaches X1 on L_p, X2 on L_q exits to A_j.
  const Point2& x_anchor = orient == Orientation::Forward ? ai : aj;
  const Point2& y_anchor = orient == Orientation::Forward ? aj : ai;
  RadialTerm xt{1.0, x_anchor, sp.frame_p.origin, sp.frame_p.step};
  RadialTerm yt{1.0, y_anchor, sp.frame_q.origin, sp.frame_q.step};
  return {xt, yt, inst.alpha, branch == Branch::A ? sp.cls.a : sp.cls.b};
}

bool Rect::on_boundary(const Point2& p, double slack) const {
  if (!contains(p, slack)) return false;
  return std::abs(p.x()) <= slack || std::abs(p.x() - width) <= slack || std::abs(p.y()) <= slack ||
         std::abs(p.y() - height) <= slack;
}

Point2 Rect::clamp(const Point2& p) const {
  return {std::clamp(p.x(), 0.0, width), std::clamp(p.y(), 0.0, height)};
}

namespace {

double radial_minimum(const RadialTerm& term, double extent) {
  if (term.weight == 0.0) return 0.0;
  const double ss = term.step.squaredNorm();
  const double t = ss > 0.0 ? std::clamp((term.anchor - term.origin).dot(term.step) / ss, 0.0, extent) : 0.0;
  return term.value(t);
}

}  // namespace

FieldBounds field_bounds(const ScalarField& field, const Rect& rect) {
  double coupling_min = 0.0;
  const DistanceForm& form = field.coupling();
  if (form.kind == FormKind::Affine) {
    const AffineForm& f = form.affine;
    coupling_min = f.c0 + std::min(0.0, f.cx * rect.width) + std::min(0.0, f.cy * rect.height);
  }
  const double scaled = field.scale() >= 0.0 ? field.scale() * coupling_min : -std::numeric_limits<double>::infinity();
  FieldBounds b;
  b.lower = radial_minimum(field.x_term(), rect.width) + scaled + radial_minimum(field.y_term(), rect.height);
  b.upper = std::max({field(0.0, 0.0), field(rect.width, 0.0), field(0.0, rect.height), field(rect.width, rect.height)});
  return b;
}

std::size_t LevelCurve::vertex_count() const {
  std::size_t n = 0;
  for (const auto& pl : polylines) n += pl.vertices.size();
  return n;
}

namespace {

// Root of phi on [a, b] with phi(a) <= 0 < phi(b) or the reverse; Illinois
// false position, which keeps the bracket like bisection.
Point2 refine_on_edge(const ScalarField& field, double level, const Point2& a, const Point2& b, double tol) {
  double fa = field(a) - level;
  double fb = field(b) - level;
  if (std::abs(fa) < tol) return a;
  if (std::abs(fb) < tol) return b;
  if ((fa > 0.0) == (fb > 0.0)) return std::abs(fa) < std::abs(fb) ? a : b;
  double ta = 0.0;
  double tb = 1.0;
  int side = 0;
  Point2 best = a;
  double best_f = std::abs(fa);
  for (int it = 0; it < 200; ++it) {
    double t = (ta * fb - tb * fa) / (fb - fa);
    if (!(t > ta && t < tb)) t = 0.5 * (ta + tb);
    const Point2 p = a + t * (b - a);
    const double ft = field(p) - level;
    if (std::abs(ft) < best_f) {
      best_f = std::abs(ft);
      best = p;
    }
    if (best_f < tol || tb - ta < 4.0 * std::numeric_limits<double>::epsilon()) break;
    if ((ft > 0.0) == (fb > 0.0)) {
      tb = t;
      fb = ft;
      if (side == 1) fa *= 0.5;
      side = 1;
    } else {
      ta = t;
      fa = ft;
      if (side == -1) fb *= 0.5;
      side = -1;
    }
  }
  return best;
}

void push_distinct(std::vector<Point2>& pts, const Point2& p) {
  if (pts.empty() || (pts.back() - p).norm() > 1e-13) pts.push_back(p);
}

}  // namespace

LevelCurve trace_level_curve(const ScalarField& field, double level, const Rect& rect, int resolution,
                             double tolerance) {
  if (resolution < 16) throw std::invalid_argument("trace resolution must be at least 16");
  if (!(level >= 0.0)) throw std::invalid_argument("level must be nonnegative");

  LevelCurve curve;
  curve.field = field;
  curve.level = level;
  curve.rect = rect;
  curve.resolution = resolution;
  curve.tolerance = tolerance;

  const FieldBounds range = field_bounds(field, rect);
  if (range.lower > level || range.upper <= level) return curve;

  const int n = resolution;
  const Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(n + 1, 0.0, rect.width);
  const Eigen::ArrayXd ys = Eigen::ArrayXd::LinSpaced(n + 1, 0.0, rect.height);
  const Eigen::ArrayXXd values = field.sample(xs, ys) - level;
  if (!values.allFinite()) throw std::domain_error("non-finite field value");
  if ((values > 0.0).all() || (values <= 0.0).all()) return curve;

  auto inside = [&](int k, int m) { return values(k, m) <= 0.0; };
  auto node = [&](int k, int m) { return Point2(xs(k), ys(m)); };

  // Edge ids: horizontal (k,m)-(k+1,m) first, then vertical (k,m)-(k,m+1).
  const int horizontal = n * (n + 1);
  auto h_id = [&](int k, int m) { return m * n + k; };
  auto v_id = [&](int k, int m) { return horizontal + k * n + m; };
  const int edge_total = 2 * n * (n + 1);

  std::vector<Point2> crossing(static_cast<std::size_t>(edge_total));
  std::vector<char> computed(static_cast<std::size_t>(edge_total), 0);
  std::vector<std::array<int, 2>> links(static_cast<std::size_t>(edge_total), {-1, -1});

  auto crossing_at = [&](int id) -> const Point2& {
    auto& slot = crossing[static_cast<std::size_t>(id)];
    if (!computed[static_cast<std::size_t>(id)]) {
      Point2 a, b;
      if (id < horizontal) {
        const int m = id / n;
        const int k = id % n;
        a = node(k, m);
        b = node(k + 1, m);
      } else {
        const int k = (id - horizontal) / n;
        const int m = (id - horizontal) % n;
        a = node(k, m);
        b = node(k, m + 1);
      }
      slot = refine_on_edge(field, level, a, b, tolerance);
      computed[static_cast<std::size_t>(id)] = 1;
    }
    return slot;
  };
  auto link = [&](int e1, int e2) {
    auto add = [&](int from, int to) {
      auto& l = links[static_cast<std::size_t>(from)];
      (l[0] < 0 ? l[0] : l[1]) = to;
    };
    add(e1, e2);
    add(e2, e1);
  };

  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      const bool c0 = inside(k, m);
      const bool c1 = inside(k + 1, m);
      const bool c2 = inside(k + 1, m + 1);
      const bool c3 = inside(k, m + 1);
      const int e0 = h_id(k, m);
      const int e1 = v_id(k + 1, m);
      const int e2 = h_id(k, m + 1);
      const int e3 = v_id(k, m);
      std::array<int, 4> crossed{};
      int count = 0;
      if (c0 != c1) crossed[static_cast<std::size_t>(count++)] = e0;
      if (c1 != c2) crossed[static_cast<std::size_t>(count++)] = e1;
      if (c2 != c3) crossed[static_cast<std::size_t>(count++)] = e2;
      if (c3 != c0) crossed[static_cast<std::size_t>(count++)] = e3;
      if (count == 2) {
        link(crossed[0], crossed[1]);
      } else if (count == 4) {
        // Saddle: decide which corners connect through the cell center.
        const bool center_in = field(0.5 * (xs(k) + xs(k + 1)), 0.5 * (ys(m) + ys(m + 1))) <= level;
        if (c0 == center_in) {
          link(e0, e1);
          link(e2, e3);
        } else {
          link(e3, e0);
          link(e1, e2);
        }
      }
    }
  }

  std::vector<char> visited(static_cast<std::size_t>(edge_total), 0);
  auto walk = [&](int start, bool closed) {
    Polyline pl;
    pl.closed = closed;
    int prev = -1;
    int cur = start;
    while (cur >= 0 && !visited[static_cast<std::size_t>(cur)]) {
      visited[static_cast<std::size_t>(cur)] = 1;
      push_distinct(pl.vertices, crossing_at(cur));
      const auto& l = links[static_cast<std::size_t>(cur)];
      const int next = l[0] != prev ? l[0] : l[1];
      prev = cur;
      cur = next;
    }
    if (closed && !pl.vertices.empty()) {
      if (pl.vertices.size() > 1 && (pl.vertices.back() - pl.vertices.front()).norm() <= 1e-13) {
        pl.vertices.pop_back();
      }
      pl.vertices.push_back(pl.vertices.front());
    }
    curve.polylines.push_back(std::move(pl));
  };

  for (int id = 0; id < edge_total; ++id) {
    const auto& l = links[static_cast<std::size_t>(id)];
    if (!visited[static_cast<std::size_t>(id)] && l[0] >= 0 && l[1] < 0) walk(id, false);
  }
  for (int id = 0; id < edge_total; ++id) {
    const auto& l = links[static_cast<std::size_t>(id)];
    if (!visited[static_cast<std::size_t>(id)] && l[0] >= 0) walk(id, true);
  }
  return curve;
}

namespace {

struct Chord {
  Point2 a;
  Point2 b;
};

std::vector<Chord> chords(const LevelCurve& c) {
  std::vector<Chord> out;
  for (const auto& pl : c.polylines) {
    for (std::size_t k = 0; k + 1 < pl.vertices.size(); ++k) out.push_back({pl.vertices[k], pl.vertices[k + 1]});
  }
  return out;
}

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool chord_crossing(const Chord& c1, const Chord& c2, Point2& out) {
  const Point2 r = c1.b - c1.a;
  const Point2 s = c2.b - c2.a;
  const double denom = cross(r, s);
  if (std::abs(denom) <= 1e-300) return false;
  const Point2 qp = c2.a - c1.a;
  const double t = cross(qp, s) / denom;
  const double u = cross(qp, r) / denom;
  constexpr double eps = 1e-12;
  if (t < -eps || t > 1.0 + eps || u < -eps || u > 1.0 + eps) return false;
  out = c1.a + std::clamp(t, 0.0, 1.0) * r;
  return true;
}

struct Candidate {
  Point2 point;
  Chord chord;
};

// Polyline crossings through a uniform bucket grid over the rectangle.
std::vector<Candidate> polyline_crossings(const LevelCurve& c1, const LevelCurve& c2) {
  const auto ch1 = chords(c1);
  const auto ch2 = chords(c2);
  std::vector<Candidate> out;
  if (ch1.empty() || ch2.empty()) return out;

  const int n = std::max(1, std::min(c1.resolution, c2.resolution));
  const double w = std::max(c1.rect.width, 1e-300);
  const double h = std::max(c1.rect.height, 1e-300);
  auto cell = [&](double v, double extent) {
    return std::clamp(static_cast<int>(std::floor(v / extent * n)), 0, n - 1);
  };
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  auto for_cells = [&](const Chord& c, auto&& fn) {
    const int kx0 = cell(std::min(c.a.x(), c.b.x()), w);
    const int kx1 = cell(std::max(c.a.x(), c.b.x()), w);
    const int ky0 = cell(std::min(c.a.y(), c.b.y()), h);
    const int ky1 = cell(std::max(c.a.y(), c.b.y()), h);
    for (int ky = ky0; ky <= ky1; ++ky) {
      for (int kx = kx0; kx <= kx1; ++kx) fn(static_cast<std::size_t>(ky) * static_cast<std::size_t>(n) + kx);
    }
  };
  for (std::size_t k = 0; k < ch2.size(); ++k) {
    for_cells(ch2[k], [&](std::size_t b) { buckets[b].push_back(static_cast<int>(k)); });
  }
  std::vector<std::size_t> stamp(ch2.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t k = 0; k < ch1.size(); ++k) {
    for_cells(ch1[k], [&](std::size_t b) {
      for (int j : buckets[b]) {
        if (stamp[static_cast<std::size_t>(j)] == k) continue;
        stamp[static_cast<std::size_t>(j)] = k;
        Point2 p;
        if (chord_crossing(ch1[k], ch2[static_cast<std::size_t>(j)], p)) out.push_back({p, ch1[k]});
      }
    });
  }
  return out;
}

double residual_at(const LevelCurve& c1, const LevelCurve& c2, const Point2& p) {
  return std::max(std::abs(c1.field(p) - c1.level), std::abs(c2.field(p) - c2.level));
}

// Damped Newton on the pair of level equations, kept inside the rectangle.
Point2 newton(const LevelCurve& c1, const LevelCurve& c2, Point2 z, int max_iterations) {
  const Rect& rect = c1.rect;
  auto residual = [&](const Point2& p) {
    return Eigen::Vector2d(c1.field(p) - c1.level, c2.field(p) - c2.level);
  };
  Eigen::Vector2d r = residual(z);
  for (int it = 0; it < max_iterations; ++it) {
    if (r.cwiseAbs().maxCoeff() < 1e-14) break;
    Eigen::Matrix2d jac;
    jac.row(0) = c1.field.gradient(z).transpose();
    jac.row(1) = c2.field.gradient(z).transpose();
    const double det = jac.determinant();
    if (std::abs(det) <= 1e-14 * jac.row(0).norm() * jac.row(1).norm() || !std::isfinite(det)) break;
    const Eigen::Vector2d step = jac.partialPivLu().solve(r);
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls) {
      const Point2 zn = rect.clamp(z - lambda * step);
      const Eigen::Vector2d rn = residual(zn);
      if (rn.norm() < r.norm()) {
        z = zn;
        r = rn;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  return z;
}

// Bisection of the second level equation along a chord of the first curve.
std::optional<Point2> chord_bisection(const LevelCurve& c2, const Chord& chord) {
  double fa = c2.field(chord.a) - c2.level;
  double fb = c2.field(chord.b) - c2.level;
  if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;
  Point2 a = chord.a;
  Point2 b = chord.b;
  for (int it = 0; it < 100; ++it) {
    const Point2 m = 0.5 * (a + b);
    const double fm = c2.field(m) - c2.level;
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

IntersectionPoint refine(const LevelCurve& c1, const LevelCurve& c2, const Candidate& cand,
                         const IntersectOptions& opts) {
  const double cell = std::hypot(c1.rect.width, c1.rect.height) / std::min(c1.resolution, c2.resolution);
  const double reach = 4.0 * cell;

  Point2 z = newton(c1, c2, cand.point, opts.max_iterations);
  double res = residual_at(c1, c2, z);
  if (res <= opts.refine_tol && (z - cand.point).norm() <= reach) return {z, res, true};

  if (auto zb = chord_bisection(c2, cand.chord)) {
    Point2 z2 = newton(c1, c2, *zb, opts.max_iterations);
    double res2 = residual_at(c1, c2, z2);
    if (res2 <= opts.refine_tol && (z2 - cand.point).norm() <= reach) return {z2, res2, true};
    const double res_b = residual_at(c1, c2, *zb);
    if (res_b < res2) {
      z2 = *zb;
      res2 = res_b;
    }
    return {z2, res2, false};
  }
  const double res0 = residual_at(c1, c2, cand.point);
  return {cand.point, res0, false};
}

IntersectionSet intersect_once(const LevelCurve& c1, const LevelCurve& c2, const IntersectOptions& opts) {
  IntersectionSet set;
  set.first = c1.label;
  set.second = c2.label;
  for (const auto& cand : polyline_crossings(c1, c2)) {
    IntersectionPoint ip = refine(c1, c2, cand, opts);
    bool duplicate = false;
    for (auto& existing : set.points) {
      if ((existing.point - ip.point).norm() <= opts.dedupe_radius) {
        if (ip.residual < existing.residual) existing = ip;
        duplicate = true;
        break;
      }
    }
    if (!duplicate) set.points.push_back(ip);
  }
  std::sort(set.points.begin(), set.points.end(), [](const auto& a, const auto& b) {
    return a.point.x() < b.point.x() || (a.point.x() == b.point.x() && a.point.y() < b.point.y());
  });
  return set;
}

}  // namespace

IntersectionSet intersect_curves(const LevelCurve& c1, const LevelCurve& c2, const IntersectOptions& opts) {
  if (c1.field == c2.field && c1.level == c2.level) {
    IntersectionSet coincident;
    coincident.first = c1.label;
    coincident.second = c2.label;
    return coincident;
  }
  IntersectionSet set = intersect_once(c1, c2, opts);
  if (static_cast<int>(set.points.size()) > opts.max_points) {
    LevelCurve f1 = trace_level_curve(c1.field, c1.level, c1.rect, 2 * c1.resolution, c1.tolerance);
    LevelCurve f2 = trace_level_curve(c2.field, c2.level, c2.rect, 2 * c2.resolution, c2.tolerance);
    f1.label = c1.label;
    f2.label = c2.label;
    set = intersect_once(f1, f2, opts);
    set.retraced = true;
    set.bound_exceeded = static_cast<int>(set.points.size()) > opts.max_points;
  }
  return set;
}

std::vector<Point2> rectangle_boundary_points(const LevelCurve& c) {
  std::vector<Point2> out;
  for (const auto& pl : c.polylines) {
    if (pl.closed || pl.vertices.empty()) continue;
    for (const Point2* p : {&pl.vertices.front(), &pl.vertices.back()}) {
      if (c.rect.on_boundary(*p, 1e-9)) out.push_back(*p);
    }
    if (pl.vertices.size() == 1 && out.size() >= 2 && out[out.size() - 1] == out[out.size() - 2]) out.pop_back();
  }
  return out;
}

void write_curves_csv(std::ostream& out, std::span<const LevelCurve> curves) {
  out << "pair_i,pair_j,orientation,branch,polyline_id,vertex_index,x,y\n";
  const auto old_precision = out.precision(17);
  for (const auto& c : curves) {
    for (std::size_t p = 0; p < c.polylines.size(); ++p) {
      const auto& verts = c.polylines[p].vertices;
      for (std::size_t v = 0; v < verts.size(); ++v) {
        out << c.label.origin << ',' << c.label.dest << ',' << to_string(c.label.orientation) << ','
            << to_string(c.label.branch) << ',' << p << ',' << v << ',' << verts[v].x() << ',' << verts[v].y() << '\n';
      }
    }
  }
  out.precision(old_precision);
}

}  // namespace netcover
