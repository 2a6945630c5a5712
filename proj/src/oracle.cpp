#include "netcover/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace netcover {

Eigen::ArrayXd nested_grid(double extent, int res) {
  if (res < 2) throw std::invalid_argument("oracle resolution must be >= 2");
  std::vector<double> pts;
  for (int r = res;; r /= 2) {
    for (int k = 0; k < r; ++k) pts.push_back(k == r - 1 ? extent : extent * k / (r - 1));
    if (r % 2 != 0 || r / 2 < 2) break;
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return Eigen::Map<Eigen::ArrayXd>(pts.data(), static_cast<Eigen::Index>(pts.size()));
}

namespace {

using Eigen::ArrayXd;
using Eigen::ArrayXXd;

ArrayXXd form_on_grid(const DistanceForm& f, const ArrayXd& xs, const ArrayXd& ys) {
  const auto n = xs.size();
  const auto m = ys.size();
  if (f.kind == FormKind::AbsDifference) {
    return (xs.replicate(1, m) - ys.transpose().replicate(n, 1)).abs();
  }
  return f.affine.c0 + (f.affine.cx * xs).replicate(1, m) + (f.affine.cy * ys).transpose().replicate(n, 1);
}

ArrayXd distances_to(const SegmentFrame& frame, const ArrayXd& ts, const Point2& a) {
  ArrayXd out(ts.size());
  for (Eigen::Index k = 0; k < ts.size(); ++k) out[k] = (a - frame.at(ts[k])).norm();
  return out;
}

struct Best {
  double objective = -1.0;
  Point2 local = Point2::Zero();
};

// One rectangle; `floor` is the value a candidate must beat to matter.
Best scan_rectangle(const ProblemInstance& inst, const SegmentPair& sp, int res, double tol, double floor,
                    long& samples) {
  const ArrayXd xs = nested_grid(sp.width(), res);
  const ArrayXd ys = nested_grid(sp.height(), res);
  samples += static_cast<long>(xs.size() * ys.size());
  const ArrayXXd dist = form_on_grid(sp.cls.a, xs, ys).min(form_on_grid(sp.cls.b, xs, ys)).max(0.0);
  const double dmin = dist.minCoeff();

  struct Live {
    double weight;
    double level;
    ArrayXd u[2];
    ArrayXd v[2];
  };
  std::vector<Live> live;
  double potential = 0.0;
  for (const ODPair& pair : inst.pairs) {
    const Point2& ai = inst.facility(pair.origin);
    const Point2& aj = inst.facility(pair.dest);
    Live l{pair.weight, pair.acceptance + tol, {}, {}};
    l.u[0] = distances_to(sp.frame_p, xs, ai);  // 12: access at X1
    l.v[0] = distances_to(sp.frame_q, ys, aj);
    l.u[1] = distances_to(sp.frame_p, xs, aj);  // 21: exit at X1
    l.v[1] = distances_to(sp.frame_q, ys, ai);
    bool reachable = false;
    for (int o = 0; o < 2; ++o) {
      reachable |= l.u[o].minCoeff() + inst.alpha * dmin + l.v[o].minCoeff() <= l.level;
    }
    if (reachable && pair.weight > 0.0) {
      potential += pair.weight;
      live.push_back(std::move(l));
    }
  }
  if (potential <= floor && floor >= 0.0) return {};

  ArrayXXd total = ArrayXXd::Zero(xs.size(), ys.size());
  const ArrayXXd scaled = inst.alpha * dist;
  for (const Live& l : live) {
    auto covered = [&](int o) {
      return (l.u[o].replicate(1, ys.size()) + scaled + l.v[o].transpose().replicate(xs.size(), 1)) <= l.level;
    };
    total += (covered(0) || covered(1)).cast<double>() * l.weight;
  }

  Best best;
  for (Eigen::Index k = 0; k < xs.size(); ++k) {
    for (Eigen::Index m = 0; m < ys.size(); ++m) {
      if (total(k, m) > best.objective) {
        best.objective = total(k, m);
        best.local = Point2(xs[k], ys[m]);
      }
    }
  }
  return best;
}

}  // namespace

OracleResult oracle_grid(const ProblemInstance& inst, const RestrictedProblem& rp, int res, double tol) {
  OracleResult out;
  const Best b = scan_rectangle(inst, rp.pair, res, tol, -1.0, out.samples);
  Coverage cov = coverage_and_objective(inst, rp.pair, b.local.x(), b.local.y(), tol);
  out.objective = cov.objective;
  out.local = b.local;
  out.p_index = rp.p_index;
  out.q_index = rp.q_index;
  out.solution = to_solution(inst.network, rp, b.local, cov.objective, std::move(cov.covered));
  return out;
}

OracleResult oracle_grid(const ProblemInstance& inst, const Preprocessed& pre, int res, double tol) {
  if (res < 2) throw std::invalid_argument("oracle resolution must be >= 2");
  const auto problems = segment_pairs(static_cast<int>(pre.segments.size()));
  OracleResult out;
  Best best;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < problems.size(); ++k) {
    const RestrictedProblem rp = make_restricted_problem(inst.network, pre, problems[k].first, problems[k].second);
    const Best b = scan_rectangle(inst, rp.pair, res, tol, best.objective, out.samples);
    if (b.objective > best.objective) {
      best = b;
      best_k = k;
    }
  }
  if (problems.empty()) return out;
  const RestrictedProblem rp =
      make_restricted_problem(inst.network, pre, problems[best_k].first, problems[best_k].second);
  Coverage cov = coverage_and_objective(inst, rp.pair, best.local.x(), best.local.y(), tol);
  out.objective = cov.objective;
  out.local = best.local;
  out.p_index = rp.p_index;
  out.q_index = rp.q_index;
  out.solution = to_solution(inst.network, rp, best.local, cov.objective, std::move(cov.covered));
  return out;
}

}  // namespace netcover
