#include "netcover/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "netcover/fds_solver.hpp"
#include "netcover/instance_io.hpp"
#include "netcover/oracle.hpp"

namespace netcover::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Config {
  std::string instance;
  std::string out;
  std::string out_dir;
  std::string format = "json";
  int grid_res = 200;
  int trace_res = kDefaultTraceResolution;
  double cov_tol = kCoverageTolerance;
  double refine_tol = kRefineTolerance;
  int jobs = 0;
  bool timing = false;
  int seg_p = -1;
  int seg_q = -1;
  std::vector<std::string> pairs;
  std::string x1;
  std::string x2;
};

// Input problems map to status 1, file system problems to status 2.
struct Failure {
  int status;
  std::string message;
};

SolverOptions solver_options(const Config& cfg) {
  SolverOptions opts;
  opts.trace_resolution = cfg.trace_res;
  opts.refine_tol = cfg.refine_tol;
  opts.coverage_tol = cfg.cov_tol;
  opts.jobs = cfg.jobs;
  return opts;
}

ProblemInstance load_valid(const Config& cfg, std::ostream& err) {
  ProblemInstance inst;
  try {
    inst = load_instance(cfg.instance);
  } catch (const InstanceFormatError& e) {
    throw Failure{kExitInvalid, std::string("malformed instance: ") + e.what()};
  } catch (const std::ios_base::failure& e) {
    throw Failure{kExitIo, e.what()};
  }
  const ValidationReport report = validate_instance(inst);
  for (const auto& w : report.warnings()) err << "warning: " << w.path << ": " << w.message << '\n';
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "invalid instance";
    for (const auto& e : report.errors()) msg << "\n  " << e.path << ": " << e.message;
    throw Failure{kExitInvalid, msg.str()};
  }
  return inst;
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw Failure{kExitIo, "cannot open output file " + cfg.out};
  f << text;
  if (!f) throw Failure{kExitIo, "write failed: " + cfg.out};
}

json point_json(const NetworkPoint& p) {
  return {{"edge", p.edge}, {"arc_length", p.arc}, {"x", p.position.x()}, {"y", p.position.y()}};
}

json covered_json(const std::vector<PairKey>& covered) {
  json arr = json::array();
  for (const auto& [i, j] : covered) arr.push_back({i, j});
  return arr;
}

std::string solution_text(const Config& cfg, const Solution& s, const json& stats) {
  if (cfg.format == "csv") {
    std::ostringstream o;
    o.precision(17);
    o << "objective,x1_edge,x1_arc_length,x1_x,x1_y,x2_edge,x2_arc_length,x2_x,x2_y\n";
    o << s.objective << ',' << s.x1.edge << ',' << s.x1.arc << ',' << s.x1.position.x() << ',' << s.x1.position.y()
      << ',' << s.x2.edge << ',' << s.x2.arc << ',' << s.x2.position.x() << ',' << s.x2.position.y() << '\n';
    return o.str();
  }
  json doc = {{"objective", s.objective},
              {"X1", point_json(s.x1)},
              {"X2", point_json(s.x2)},
              {"covered", covered_json(s.covered)},
              {"stats", stats}};
  return doc.dump(2) + "\n";
}

void require_format(const Config& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (cfg.format == f) return;
  }
  throw Failure{kExitInvalid, "format '" + cfg.format + "' not supported by this subcommand"};
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int cmd_solve(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json", "csv"});
  const auto t0 = Clock::now();
  const ProblemInstance inst = load_valid(cfg, err);
  const GlobalResult r = solve_global(inst, solver_options(cfg));
  json stats = {{"segments", r.stats.segments},
                {"restricted_problems", r.stats.restricted_problems},
                {"omega_total", r.stats.omega_total}};
  if (cfg.timing) stats["runtime_ms"] = elapsed_ms(t0);
  emit(cfg, solution_text(cfg, r.solution, stats), out);
  return kExitOk;
}

int cmd_oracle(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json", "csv"});
  const auto t0 = Clock::now();
  const ProblemInstance inst = load_valid(cfg, err);
  const Preprocessed pre = preprocess(inst.network);
  const OracleResult r = oracle_grid(inst, pre, cfg.grid_res, cfg.cov_tol);
  const auto n = static_cast<int>(pre.segments.size());
  json stats = {{"segments", n}, {"restricted_problems", n * (n + 1) / 2}, {"samples", r.samples}};
  if (cfg.timing) stats["runtime_ms"] = elapsed_ms(t0);
  emit(cfg, solution_text(cfg, r.solution, stats), out);
  return kExitOk;
}

json form_json(const DistanceForm& f) {
  if (f.kind == FormKind::AbsDifference) return {{"kind", "abs_difference"}};
  return {{"kind", "affine"}, {"c0", f.affine.c0}, {"cx", f.affine.cx}, {"cy", f.affine.cy}};
}

int cmd_preprocess(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json"});
  const ProblemInstance inst = load_valid(cfg, err);
  const Network& net = inst.network;
  const Preprocessed pre = preprocess(net);

  json ids = json::array();
  for (const auto& v : net.vertices()) ids.push_back(v.id);
  json rows = json::array();
  for (Eigen::Index r = 0; r < pre.distances.size(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < pre.distances.size(); ++c) {
      row.push_back(pre.distances(static_cast<int>(r), static_cast<int>(c)));
    }
    rows.push_back(row);
  }
  json bottlenecks = json::array();
  for (std::size_t e = 0; e < pre.bottlenecks.size(); ++e) {
    for (const auto& b : pre.bottlenecks[e]) {
      const NetworkPoint np = make_network_point(net, b.edge, b.arc);
      bottlenecks.push_back({{"edge", b.edge},
                             {"arc_length", b.arc},
                             {"x", np.position.x()},
                             {"y", np.position.y()},
                             {"vertices", b.vertices}});
    }
  }
  json segments = json::array();
  for (std::size_t s = 0; s < pre.segments.size(); ++s) {
    const auto& seg = pre.segments[s];
    segments.push_back({{"index", s}, {"edge", seg.edge}, {"start", seg.start}, {"end", seg.end}});
  }
  json pairs = json::array();
  for (const auto& [p, q] : segment_pairs(static_cast<int>(pre.segments.size()))) {
    const RestrictedProblem rp = make_restricted_problem(net, pre, p, q);
    pairs.push_back({{"p", p},
                     {"q", q},
                     {"type", rp.pair.cls.type == PairType::Type1 ? 1 : 2},
                     {"a", form_json(rp.pair.cls.a)},
                     {"b", form_json(rp.pair.cls.b)}});
  }
  json doc = {{"vertex_ids", ids},
              {"distances", rows},
              {"bottlenecks", bottlenecks},
              {"segments", segments},
              {"pairs", pairs}};
  emit(cfg, doc.dump(2) + "\n", out);
  return kExitOk;
}

std::pair<int, int> parse_int_pair(const std::string& text, const char* what) {
  std::istringstream in(text);
  int a = 0;
  int b = 0;
  char comma = 0;
  if (!(in >> a >> comma >> b) || comma != ',' || !(in >> std::ws).eof()) {
    throw Failure{kExitInvalid, std::string("bad ") + what + " '" + text + "', expected i,j"};
  }
  return {a, b};
}

int cmd_curves(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"csv"});
  const ProblemInstance inst = load_valid(cfg, err);
  const Preprocessed pre = preprocess(inst.network);
  const int n = static_cast<int>(pre.segments.size());
  if (cfg.seg_p < 0 || cfg.seg_q < 0 || cfg.seg_p >= n || cfg.seg_q >= n) {
    throw Failure{kExitInvalid, "segment selector matches nothing (have " + std::to_string(n) + " segments)"};
  }
  std::vector<int> selected;
  if (cfg.pairs.empty()) {
    for (int k = 0; k < static_cast<int>(inst.pairs.size()); ++k) selected.push_back(k);
  }
  for (const auto& text : cfg.pairs) {
    const auto [i, j] = parse_int_pair(text, "pair selector");
    for (int k = 0; k < static_cast<int>(inst.pairs.size()); ++k) {
      if (inst.pairs[static_cast<std::size_t>(k)].origin == i && inst.pairs[static_cast<std::size_t>(k)].dest == j) {
        selected.push_back(k);
      }
    }
  }
  if (selected.empty()) throw Failure{kExitInvalid, "pair selector matches nothing"};

  const RestrictedProblem rp = make_restricted_problem(inst.network, pre, cfg.seg_p, cfg.seg_q);
  std::vector<LevelCurve> curves;
  for (int k : selected) {
    PairCurves pc = trace_pair_curves(inst, rp, k, solver_options(cfg));
    for (auto& row : pc.curves) {
      for (auto& c : row) {
        if (c) curves.push_back(std::move(*c));
      }
    }
  }

  if (!cfg.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw Failure{kExitIo, "cannot create " + cfg.out_dir + ": " + ec.message()};
    for (const auto& c : curves) {
      const fs::path file = fs::path(cfg.out_dir) / ("curve_" + std::to_string(c.label.origin) + "_" +
                                                     std::to_string(c.label.dest) + "_" +
                                                     to_string(c.label.orientation) + to_string(c.label.branch) + ".csv");
      std::ofstream f(file, std::ios::binary);
      if (!f) throw Failure{kExitIo, "cannot open output file " + file.string()};
      write_curves_csv(f, std::span<const LevelCurve>(&c, 1));
    }
    return kExitOk;
  }
  std::ostringstream o;
  write_curves_csv(o, curves);
  emit(cfg, o.str(), out);
  return kExitOk;
}

// Segment holding (edge, arc) and the offset inside it.
std::pair<int, double> locate(const Preprocessed& pre, const Network& net, const std::string& text) {
  std::istringstream in(text);
  int edge = 0;
  double arc = 0.0;
  char comma = 0;
  if (!(in >> edge >> comma >> arc) || comma != ',' || !(in >> std::ws).eof()) {
    throw Failure{kExitInvalid, "bad point '" + text + "', expected edge,arc_length"};
  }
  if (edge < 0 || edge >= static_cast<int>(net.edge_count())) {
    throw Failure{kExitInvalid, "unknown edge in point '" + text + "'"};
  }
  const double len = net.edges()[static_cast<std::size_t>(edge)].length;
  if (!(arc >= 0.0 && arc <= len)) throw Failure{kExitInvalid, "arc length outside edge in point '" + text + "'"};
  for (std::size_t s = 0; s < pre.segments.size(); ++s) {
    const auto& seg = pre.segments[s];
    if (seg.edge == edge && arc <= seg.end) return {static_cast<int>(s), std::max(0.0, arc - seg.start)};
  }
  throw Failure{kExitInvalid, "no segment holds point '" + text + "'"};
}

int cmd_evaluate(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json"});
  const ProblemInstance inst = load_valid(cfg, err);
  const Preprocessed pre = preprocess(inst.network);
  const auto [p, x] = locate(pre, inst.network, cfg.x1);
  const auto [q, y] = locate(pre, inst.network, cfg.x2);
  const RestrictedProblem rp = make_restricted_problem(inst.network, pre, p, q);

  json rows = json::array();
  for (const ODPair& pair : inst.pairs) {
    const double h12 = path_length_h(inst, pair, rp.pair, x, y, Orientation::Forward);
    const double h21 = path_length_h(inst, pair, rp.pair, x, y, Orientation::Reverse);
    const double f = std::min(h12, h21);
    rows.push_back({{"pair", {pair.origin, pair.dest}},
                    {"h12", h12},
                    {"h21", h21},
                    {"f", f},
                    {"acceptance", pair.acceptance},
                    {"covered", f <= pair.acceptance + cfg.cov_tol}});
  }
  const Coverage cov = coverage_and_objective(inst, rp.pair, x, y, cfg.cov_tol);
  const Solution s = to_solution(inst.network, rp, Point2(x, y), cov.objective, cov.covered);
  json doc = {{"objective", cov.objective},
              {"X1", point_json(s.x1)},
              {"X2", point_json(s.x2)},
              {"network_distance", network_distance(rp.pair, x, y)},
              {"covered", covered_json(cov.covered)},
              {"pairs", rows}};
  emit(cfg, doc.dump(2) + "\n", out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Two transfer points on a planar network, maximizing covered trip weight"};
  app.require_subcommand(1);

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--instance", cfg.instance, "Instance document")->required();
    sub->add_option("--out", cfg.out, "Output file (default: standard output)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--cov-tol", cfg.cov_tol, "Coverage tolerance")->check(CLI::PositiveNumber);
  };
  auto solver = [&cfg](CLI::App* sub) {
    sub->add_option("--trace-res", cfg.trace_res, "Contour grid cells per axis")->check(CLI::Range(16, 1 << 16));
    sub->add_option("--refine-tol", cfg.refine_tol, "Intersection refinement tolerance")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve the two-point location problem");
  common(solve);
  solver(solve);
  solve->add_option("--jobs", cfg.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  solve->add_flag("--timing", cfg.timing, "Add runtime_ms to the stats");

  CLI::App* oracle = app.add_subcommand("oracle", "Brute-force grid search over every segment pair");
  common(oracle);
  oracle->add_option("--grid-res", cfg.grid_res, "Samples per axis and rectangle")->check(CLI::Range(2, 1 << 16));
  oracle->add_option("--jobs", cfg.jobs, "Accepted for symmetry with solve; the oracle is sequential");
  oracle->add_flag("--timing", cfg.timing, "Add runtime_ms to the stats");

  CLI::App* pre = app.add_subcommand("preprocess", "Dump distances, bottleneck points, segments and pair classes");
  common(pre);

  CLI::App* curves = app.add_subcommand("curves", "Export level curves of one segment pair as CSV");
  curves->add_option("--instance", cfg.instance, "Instance document")->required();
  curves->add_option("--out", cfg.out, "Output file (default: standard output)");
  curves->add_option("--out-dir", cfg.out_dir, "Write one file per curve into this directory");
  curves->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cfg.format = "json";
  curves->add_option("--seg-p", cfg.seg_p, "Index of L_p")->required();
  curves->add_option("--seg-q", cfg.seg_q, "Index of L_q")->required();
  curves->add_option("--pair", cfg.pairs, "O/D pair i,j (repeatable; default all)");
  solver(curves);

  CLI::App* eval = app.add_subcommand("evaluate", "Mixed distances and coverage at a pair of network points");
  common(eval);
  eval->add_option("--x1", cfg.x1, "First point as edge,arc_length")->required();
  eval->add_option("--x2", cfg.x2, "Second point as edge,arc_length")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }
  if (curves->parsed() && curves->count("--format") == 0) cfg.format = "csv";

  try {
    if (solve->parsed()) return cmd_solve(cfg, out, err);
    if (oracle->parsed()) return cmd_oracle(cfg, out, err);
    if (pre->parsed()) return cmd_preprocess(cfg, out, err);
    if (curves->parsed()) return cmd_curves(cfg, out, err);
    return cmd_evaluate(cfg, out, err);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace netcover::cli
