#include "netcover/fds_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace netcover {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Q: return "Q";
    case Provenance::P: return "P";
    case Provenance::BoundaryAugment: return "boundary";
    case Provenance::Fallback: return "fallback";
  }
  return "?";
}

RestrictedProblem make_restricted_problem(const Network& net, const Preprocessed& pre, int p_index, int q_index) {
  const auto& segs = pre.segments;
  return {p_index, q_index,
          make_segment_pair(net, pre.distances, segs.at(static_cast<std::size_t>(p_index)),
                            segs.at(static_cast<std::size_t>(q_index)))};
}

std::vector<const LevelCurve*> PairCurves::nonempty() const {
  std::vector<const LevelCurve*> out;
  for (const auto& row : curves) {
    for (const auto& c : row) {
      if (c && !c->empty()) out.push_back(&*c);
    }
  }
  return out;
}

int PairCurves::traced() const {
  int n = 0;
  for (const auto& row : curves) {
    for (const auto& c : row) n += c.has_value();
  }
  return n;
}

PairCurves trace_pair_curves(const ProblemInstance& inst, const RestrictedProblem& rp, int pair_index,
                             const SolverOptions& opts) {
  const ODPair& pair = inst.pairs.at(static_cast<std::size_t>(pair_index));
  PairCurves pc;
  pc.pair_index = pair_index;
  const bool two_branches = rp.pair.cls.type == PairType::Type1;
  for (Orientation o : {Orientation::Forward, Orientation::Reverse}) {
    for (Branch b : {Branch::A, Branch::B}) {
      if (b == Branch::B && !two_branches) continue;
      LevelCurve c = trace_level_curve(branch_field(inst, pair, rp.pair, o, b), pair.acceptance, rp.rect(),
                                       opts.trace_resolution, opts.trace_tol);
      c.label = {pair_index, pair.origin, pair.dest, o, b};
      pc.curves[o == Orientation::Forward ? 0 : 1][b == Branch::A ? 0 : 1] = std::move(c);
    }
  }
  return pc;
}

void IntersectionStats::add(const IntersectionSet& set) {
  const int n = static_cast<int>(set.points.size());
  ++curve_pairs;
  points += n;
  max_per_curve_pair = std::max(max_per_curve_pair, n);
  retraces += set.retraced;
  bound_violations += set.bound_exceeded;
  for (const auto& p : set.points) unrefined += !p.refined;
}

void IntersectionStats::merge(const IntersectionStats& other) {
  curve_pairs += other.curve_pairs;
  points += other.points;
  max_per_curve_pair = std::max(max_per_curve_pair, other.max_per_curve_pair);
  retraces += other.retraces;
  bound_violations += other.bound_violations;
  unrefined += other.unrefined;
}

std::vector<Point2> build_Q(const PairCurves& curves, const SolverOptions& opts, IntersectionStats* stats) {
  std::vector<Point2> out;
  auto first_vertex = [&](const std::optional<LevelCurve>& c) {
    if (c && !c->empty()) out.push_back(c->polylines.front().vertices.front());
  };
  for (Orientation o : {Orientation::Forward, Orientation::Reverse}) {
    const auto& a = curves.at(o, Branch::A);
    const auto& b = curves.at(o, Branch::B);
    if (a && b && !a->empty() && !b->empty()) {
      IntersectionSet set = intersect_curves(*a, *b, opts.intersect_options());
      if (stats != nullptr) stats->add(set);
      if (!set.points.empty()) {
        for (const auto& p : set.points) out.push_back(p.point);
        continue;
      }
    }
    first_vertex(a);
    first_vertex(b);
  }
  return out;
}

std::vector<IntersectionPoint> build_P(const PairCurves& ij, const PairCurves& kr, const SolverOptions& opts,
                                       IntersectionStats* stats) {
  if (ij.pair_index == kr.pair_index) throw std::invalid_argument("build_P needs two different O/D pairs");
  std::vector<IntersectionPoint> out;
  for (const LevelCurve* c1 : ij.nonempty()) {
    for (const LevelCurve* c2 : kr.nonempty()) {
      IntersectionSet set = intersect_curves(*c1, *c2, opts.intersect_options());
      if (stats != nullptr) stats->add(set);
      for (const auto& p : set.points) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](const IntersectionPoint& q) {
          return (q.point - p.point).norm() <= opts.dedupe_radius;
        });
        if (!seen) out.push_back(p);
      }
    }
  }
  return out;
}

namespace {

// Ω with dedupe radius, bucketed on a grid of radius-sized cells.
class OmegaBuilder {
 public:
  explicit OmegaBuilder(double radius) : radius_(radius) {}

  bool contains(const Point2& p) const {
    const auto [cx, cy] = cell(p);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = buckets_.find(key(cx + dx, cy + dy));
        if (it == buckets_.end()) continue;
        for (int idx : it->second) {
          if ((points_[static_cast<std::size_t>(idx)].point - p).norm() <= radius_) return true;
        }
      }
    }
    return false;
  }

  void add(const Point2& p, Provenance prov) {
    if (contains(p)) return;
    const auto [cx, cy] = cell(p);
    buckets_[key(cx, cy)].push_back(static_cast<int>(points_.size()));
    points_.push_back({p, prov});
  }

  std::vector<OmegaPoint> take() { return std::move(points_); }

 private:
  std::pair<std::int64_t, std::int64_t> cell(const Point2& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x() / radius_)), static_cast<std::int64_t>(std::floor(p.y() / radius_))};
  }
  static std::uint64_t key(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) * 0x9E3779B97F4A7C15ull) ^ static_cast<std::uint64_t>(cy);
  }

  double radius_;
  std::vector<OmegaPoint> points_;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

bool lex_less(const Point2& a, const Point2& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); }

}  // namespace

FdsSolution solve_restricted(const ProblemInstance& inst, const RestrictedProblem& rp, const SolverOptions& opts) {
  FdsSolution sol;
  const Rect rect = rp.rect();

  std::vector<PairCurves> curves;
  curves.reserve(inst.pairs.size());
  for (int n = 0; n < static_cast<int>(inst.pairs.size()); ++n) {
    curves.push_back(trace_pair_curves(inst, rp, n, opts));
    sol.curves += curves.back().traced();
  }

  OmegaBuilder omega(opts.dedupe_radius);
  for (const auto& pc : curves) {
    for (const Point2& p : build_Q(pc, opts, &sol.intersections)) omega.add(p, Provenance::Q);
  }
  for (std::size_t n = 0; n < curves.size(); ++n) {
    if (curves[n].nonempty().empty()) continue;
    for (std::size_t m = n + 1; m < curves.size(); ++m) {
      if (curves[m].nonempty().empty()) continue;
      for (const auto& ip : build_P(curves[n], curves[m], opts, &sol.intersections)) omega.add(ip.point, Provenance::P);
    }
  }
  bool any_curve = false;
  for (const auto& pc : curves) {
    for (const LevelCurve* c : pc.nonempty()) {
      any_curve = true;
      for (const Point2& p : rectangle_boundary_points(*c)) omega.add(p, Provenance::BoundaryAugment);
    }
  }
  // Without any curve F is constant on the rectangle and X_pq alone suffices.
  if (any_curve) {
    for (const Point2& corner : {Point2(0.0, 0.0), Point2(rect.width, 0.0), Point2(0.0, rect.height),
                                 Point2(rect.width, rect.height)}) {
      omega.add(corner, Provenance::BoundaryAugment);
    }
  }

  // X_pq: the center, nudged until it is not already in Ω.
  const double delta = std::min(rect.width, rect.height) * 1e-3;
  Point2 fallback(0.5 * rect.width, 0.5 * rect.height);
  for (int k = 0; k < 1000 && omega.contains(fallback); ++k) fallback = rect.clamp(fallback + Point2(delta, -delta));
  omega.add(fallback, Provenance::Fallback);

  sol.omega = omega.take();
  bool first = true;
  for (const auto& op : sol.omega) {
    Coverage cov = coverage_and_objective(inst, rp.pair, op.point.x(), op.point.y(), opts.coverage_tol);
    if (first || cov.objective > sol.objective || (cov.objective == sol.objective && lex_less(op.point, sol.best))) {
      first = false;
      sol.objective = cov.objective;
      sol.best = op.point;
      sol.best_provenance = op.provenance;
      sol.covered = std::move(cov.covered);
    }
  }
  return sol;
}

std::vector<std::pair<int, int>> segment_pairs(int segment_count) {
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p < segment_count; ++p) {
    for (int q = p; q < segment_count; ++q) out.emplace_back(p, q);
  }
  return out;
}

Solution to_solution(const Network& net, const RestrictedProblem& rp, const Point2& local, double objective,
                     std::vector<PairKey> covered) {
  auto place = [&](const LinearArcSegment& seg, double offset) {
    const double len = net.edges()[static_cast<std::size_t>(seg.edge)].length;
    return make_network_point(net, seg.edge, std::clamp(seg.start + offset, 0.0, len));
  };
  Solution s;
  s.x1 = place(rp.pair.p, local.x());
  s.x2 = place(rp.pair.q, local.y());
  s.objective = objective;
  s.covered = std::move(covered);
  return s;
}

namespace {

struct ProblemSummary {
  double objective = 0.0;
  Point2 best = Point2::Zero();
  Provenance provenance = Provenance::Fallback;
  std::vector<PairKey> covered;
  long omega = 0;
  int curves = 0;
  PairType type = PairType::Type2;
  IntersectionStats intersections;
};

}  // namespace

GlobalResult solve_global(const ProblemInstance& inst, const Preprocessed& pre, const SolverOptions& opts) {
  const auto problems = segment_pairs(static_cast<int>(pre.segments.size()));
  std::vector<ProblemSummary> summaries(problems.size());

  auto work = [&](std::size_t k) {
    RestrictedProblem rp = make_restricted_problem(inst.network, pre, problems[k].first, problems[k].second);
    FdsSolution sol = solve_restricted(inst, rp, opts);
    ProblemSummary& s = summaries[k];
    s.objective = sol.objective;
    s.best = sol.best;
    s.provenance = sol.best_provenance;
    s.covered = std::move(sol.covered);
    s.omega = static_cast<long>(sol.omega.size());
    s.curves = sol.curves;
    s.type = rp.pair.cls.type;
    s.intersections = sol.intersections;
  };

  int jobs = opts.jobs > 0 ? opts.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(1, problems.size())));
  if (jobs <= 1) {
    for (std::size_t k = 0; k < problems.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t k = next++; k < problems.size(); k = next++) work(k);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
          next = problems.size();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  GlobalResult result;
  result.stats.segments = static_cast<int>(pre.segments.size());
  result.stats.restricted_problems = static_cast<int>(problems.size());
  std::size_t best = 0;
  for (std::size_t k = 0; k < summaries.size(); ++k) {
    const auto& s = summaries[k];
    result.stats.omega_total += s.omega;
    result.stats.curves += s.curves;
    (s.type == PairType::Type1 ? result.stats.type1_problems : result.stats.type2_problems)++;
    result.stats.intersections.merge(s.intersections);
    if (s.objective > summaries[best].objective) best = k;
  }
  if (!summaries.empty()) {
    const auto& s = summaries[best];
    RestrictedProblem rp = make_restricted_problem(inst.network, pre, problems[best].first, problems[best].second);
    result.p_index = problems[best].first;
    result.q_index = problems[best].second;
    result.local = s.best;
    result.provenance = s.provenance;
    result.solution = to_solution(inst.network, rp, s.best, s.objective, s.covered);
  }
  return result;
}

GlobalResult solve_global(const ProblemInstance& inst, const SolverOptions& opts) {
  return solve_global(inst, preprocess(inst.network), opts);
}

}  // namespace netcover
