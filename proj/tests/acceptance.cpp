// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "netcover/cli.hpp"
#include "netcover/fds_solver.hpp"
#include "netcover/instance_io.hpp"
#include "netcover/oracle.hpp"

namespace {

using namespace netcover;
using netcover::testing::trapezoid_instance;
using netcover::testing::random_instance;

constexpr int kSuiteSize = 20;
constexpr std::uint64_t kSuiteSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_ms;
  std::function<Outcome()> run;
};

std::vector<ProblemInstance> suite() {
  std::vector<ProblemInstance> out;
  for (int k = 0; k < kSuiteSize; ++k) out.push_back(random_instance(kSuiteSeed + static_cast<std::uint64_t>(k)));
  return out;
}

Outcome trapezoid_bottlenecks() {
  const Network net = netcover::testing::trapezoid_network();
  const DistanceMatrix dist = all_pairs_shortest_paths(net);
  const auto bottom = arc_bottleneck_points(net, netcover::testing::kBottomEdge, dist);
  const auto top = arc_bottleneck_points(net, netcover::testing::kTopEdge, dist);
  std::ostringstream d;
  d << "bottom " << bottom.size() << " points, top " << top.size();
  if (bottom.size() != 2 || !top.empty()) return {false, d.str()};
  const double arcs[2] = {1.0, 6.0};
  const Point2 pts[2] = {{0.0, 0.0}, {5.0, 0.0}};
  double err = 0.0;
  for (int k = 0; k < 2; ++k) {
    err = std::max(err, std::abs(bottom[static_cast<std::size_t>(k)].arc - arcs[k]));
    const NetworkPoint np = make_network_point(net, netcover::testing::kBottomEdge, bottom[static_cast<std::size_t>(k)].arc);
    err = std::max(err, (np.position - pts[k]).norm());
  }
  d << ", max error " << err;
  return {err < 1e-9, d.str()};
}

// The top edge is segment 0, the bottom middle [1, 6] is segment 2.
RestrictedProblem antipodal_rectangle(const ProblemInstance& inst, const Preprocessed& pre) {
  for (std::size_t s = 0; s < pre.segments.size(); ++s) {
    const auto& seg = pre.segments[s];
    if (seg.edge == netcover::testing::kBottomEdge && std::abs(seg.start - 1.0) < 1e-9) {
      return make_restricted_problem(inst.network, pre, 0, static_cast<int>(s));
    }
  }
  throw std::runtime_error("bottom middle segment missing");
}

Outcome trapezoid_distance() {
  const ProblemInstance inst = trapezoid_instance(0.4, {});
  const Preprocessed pre = preprocess(inst.network);
  const RestrictedProblem rp = antipodal_rectangle(inst, pre);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  double err = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng);
    const double y = u(rng);
    err = std::max(err, std::abs(network_distance(rp.pair, x, y) - std::min(6.0 + x + y, 16.0 - x - y)));
  }
  std::ostringstream d;
  d << "type " << (rp.pair.cls.type == PairType::Type1 ? 1 : 2) << ", max error " << err;
  return {rp.pair.cls.type == PairType::Type1 && err < 1e-9, d.str()};
}

// Distance from a point to the nearest branch level set of a pair,
// measured on the mixed distance itself.
double level_gap(const ProblemInstance& inst, const ODPair& pair, const SegmentPair& sp, const Point2& p) {
  double gap = std::numeric_limits<double>::infinity();
  for (Orientation o : {Orientation::Forward, Orientation::Reverse}) {
    for (Branch b : {Branch::A, Branch::B}) {
      gap = std::min(gap, std::abs(branch_length(inst, pair, sp, p.x(), p.y(), o, b) - pair.acceptance));
    }
  }
  return gap;
}

Outcome crossing_counts(IntersectionStats& stats) {
  std::ostringstream d;
  bool ok = true;
  for (const auto& [dkr, expected] : {std::pair{10.5, 3}, std::pair{9.8, 0}}) {
    const ProblemInstance inst = trapezoid_instance(0.4, {{0, 1, 1.0, 10.0}, {2, 3, 1.0, dkr}});
    const Preprocessed pre = preprocess(inst.network);
    const RestrictedProblem rp = antipodal_rectangle(inst, pre);
    SolverOptions opts;
    opts.trace_resolution = 256;
    const PairCurves ij = trace_pair_curves(inst, rp, 0, opts);
    const PairCurves kr = trace_pair_curves(inst, rp, 1, opts);
    const auto pts = build_P(ij, kr, opts, &stats);
    double worst = 0.0;
    for (const auto& p : pts) {
      worst = std::max({worst, p.residual, level_gap(inst, inst.pairs[0], rp.pair, p.point),
                        level_gap(inst, inst.pairs[1], rp.pair, p.point)});
    }
    d << "d_kr=" << dkr << ": " << pts.size() << " points (residual " << worst << ") ";
    ok = ok && static_cast<int>(pts.size()) == expected && worst < 1e-6;
  }
  return {ok, d.str()};
}

struct SuiteRun {
  double fds = 0.0;
  double oracle200 = 0.0;
  double oracle400 = 0.0;
  GlobalStats stats;
};

std::vector<SuiteRun> run_suite(const std::vector<ProblemInstance>& instances) {
  std::vector<SuiteRun> out;
  for (const auto& inst : instances) {
    const Preprocessed pre = preprocess(inst.network);
    SuiteRun r;
    const GlobalResult g = solve_global(inst, pre);
    r.fds = g.solution.objective;
    r.stats = g.stats;
    r.oracle200 = oracle_grid(inst, pre, 200).objective;
    r.oracle400 = oracle_grid(inst, pre, 400).objective;
    out.push_back(r);
  }
  return out;
}

Outcome dominance(const std::vector<SuiteRun>& runs) {
  int below = 0;
  int equal400 = 0;
  std::ostringstream d;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k];
    if (r.oracle200 > r.fds || r.oracle400 > r.fds) {
      ++below;
      d << "[instance " << k << ": fds " << r.fds << " < oracle " << std::max(r.oracle200, r.oracle400) << "] ";
    }
    equal400 += r.oracle400 == r.fds;
  }
  d << runs.size() << " instances, oracle beats FDS on " << below << ", equal at res 400 on " << equal400;
  return {runs.size() >= 20 && below == 0 && equal400 >= 18, d.str()};
}

Outcome disjointness(const std::vector<ProblemInstance>& instances) {
  std::mt19937_64 rng(11);
  long samples = 0;
  long both = 0;
  for (const auto& inst : instances) {
    const Preprocessed pre = preprocess(inst.network);
    const int n = static_cast<int>(pre.segments.size());
    std::uniform_int_distribution<int> seg(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const ODPair& pair : inst.pairs) {
      if ((inst.facility(pair.origin) - inst.facility(pair.dest)).norm() <= pair.acceptance) continue;
      for (int s = 0; s < 10000; ++s) {
        const RestrictedProblem rp = make_restricted_problem(inst.network, pre, seg(rng), seg(rng));
        const double x = unit(rng) * rp.pair.width();
        const double y = unit(rng) * rp.pair.height();
        const double level = pair.acceptance + kCoverageTolerance;
        const bool in12 = path_length_h(inst, pair, rp.pair, x, y, Orientation::Forward) <= level;
        const bool in21 = path_length_h(inst, pair, rp.pair, x, y, Orientation::Reverse) <= level;
        both += in12 && in21;
        ++samples;
      }
    }
  }
  std::ostringstream d;
  d << samples << " samples, " << both << " in both orientations";
  return {both == 0 && samples > 0, d.str()};
}

Outcome witnesses(const std::vector<ProblemInstance>& instances) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long pairs = 0;
  long bad_shape = 0;
  long bad_value = 0;
  for (const auto& inst : instances) {
    const Preprocessed pre = preprocess(inst.network);
    for (const auto& [p, q] : segment_pairs(static_cast<int>(pre.segments.size()))) {
      const SegmentPair sp = make_restricted_problem(inst.network, pre, p, q).pair;
      const bool concave = sp.cls.type == PairType::Type1;
      // Type 2 on distinct segments is affine; only its values are checked.
      const bool same = p == q;
      ++pairs;
      const double w = sp.width();
      const double h = sp.height();
      for (int k = 0; k < 1000; ++k) {
        const Point2 a(unit(rng) * w, unit(rng) * h);
        const Point2 b(unit(rng) * w, unit(rng) * h);
        const Point2 m = 0.5 * (a + b);
        const double dm = network_distance(sp, m.x(), m.y());
        const double avg = 0.5 * (network_distance(sp, a.x(), a.y()) + network_distance(sp, b.x(), b.y()));
        if (concave && dm < avg - 1e-9) ++bad_shape;
        if (!concave && same && dm > avg + 1e-9) ++bad_shape;
      }
      // The forms must also be the true distance.
      for (int k = 0; k < 20; ++k) {
        const double x = unit(rng) * w;
        const double y = unit(rng) * h;
        const double truth = netcover::testing::brute_network_distance(inst.network, sp.p.edge, sp.p.start + x,
                                                                       sp.q.edge, sp.q.start + y);
        if (std::abs(truth - network_distance(sp, x, y)) > 1e-9) ++bad_value;
      }
    }
  }
  std::ostringstream d;
  d << pairs << " classified pairs, " << bad_shape << " midpoint violations, " << bad_value << " value mismatches";
  return {bad_shape == 0 && bad_value == 0 && pairs > 0, d.str()};
}

Outcome intersection_bound(const std::vector<SuiteRun>& runs, const IntersectionStats& crossings) {
  IntersectionStats all = crossings;
  for (const auto& r : runs) all.merge(r.stats.intersections);
  std::ostringstream d;
  d << all.curve_pairs << " curve pairs, max " << all.max_per_curve_pair << " points, " << all.retraces
    << " re-traced, " << all.bound_violations << " over the bound";
  return {all.bound_violations == 0 && all.max_per_curve_pair <= kMaxCrossings, d.str()};
}

std::string solve_via_cli(const std::string& path, const char* jobs) {
  const char* argv[] = {"netcover", "solve", "--instance", path.c_str(), "--jobs", jobs};
  std::ostringstream out;
  std::ostringstream err;
  const int status = netcover::cli::run(6, argv, out, err);
  if (status != 0) throw std::runtime_error("solve failed: " + err.str());
  return out.str();
}

Outcome determinism(const std::vector<ProblemInstance>& instances) {
  const auto dir = std::filesystem::temp_directory_path() / "netcover_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<ProblemInstance> picks = {trapezoid_instance(0.4, {{0, 1, 1.0, 10.0}, {2, 3, 1.0, 10.5}}), instances[0],
                                        instances[1], instances[2]};
  int identical = 0;
  for (std::size_t k = 0; k < picks.size(); ++k) {
    const auto path = (dir / ("instance_" + std::to_string(k) + ".json")).string();
    std::ofstream(path) << serialize_instance(picks[k]);
    identical += solve_via_cli(path, "1") == solve_via_cli(path, "8");
  }
  std::ostringstream d;
  d << identical << "/" << picks.size() << " result documents byte-identical";
  return {identical == static_cast<int>(picks.size()), d.str()};
}

}  // namespace

int main() {
  const auto instances = suite();
  std::vector<SuiteRun> runs;
  IntersectionStats crossing_stats;

  const std::vector<Criterion> criteria = {
      {1, "trapezoid bottleneck points", 1000.0, trapezoid_bottlenecks},
      {2, "trapezoid distance formula", 1000.0, trapezoid_distance},
      {3, "two-pair crossing counts", 10000.0, [&] { return crossing_counts(crossing_stats); }},
      {4, "oracle dominance suite", 300000.0, [&] {
         runs = run_suite(instances);
         return dominance(runs);
       }},
      {5, "orientation disjointness", 30000.0, [&] { return disjointness(instances); }},
      {6, "concavity and convexity witnesses", 0.0, [&] { return witnesses(instances); }},
      {7, "intersection count bound", 0.0, [&] { return intersection_bound(runs, crossing_stats); }},
      {8, "determinism across job counts", 0.0, [&] { return determinism(instances); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_ms > 0.0 && ms > c.budget_ms) {
      o.pass = false;
      o.detail += " (over time budget)";
    }
    failures += !o.pass;
    std::printf("%s criterion %d: %s: %s [%.0f ms]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), ms);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
