#include "netcover/model.hpp"

#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace netcover {

Network::Network(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    index_.emplace(vertices_[k].id, static_cast<int>(k));
  }
}

std::optional<int> Network::index_of(int vertex_id) const {
  auto it = index_.find(vertex_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Network::u_index(int edge) const {
  auto idx = index_of(edges_.at(static_cast<std::size_t>(edge)).u);
  if (!idx) throw std::out_of_range("edge references unknown vertex");
  return *idx;
}

int Network::w_index(int edge) const {
  auto idx = index_of(edges_.at(static_cast<std::size_t>(edge)).w);
  if (!idx) throw std::out_of_range("edge references unknown vertex");
  return *idx;
}

const Point2& Network::u_position(int edge) const {
  return vertices_[static_cast<std::size_t>(u_index(edge))].position;
}

const Point2& Network::w_position(int edge) const {
  return vertices_[static_cast<std::size_t>(w_index(edge))].position;
}

NetworkPoint make_network_point(const Network& net, int edge, double arc) {
  const Edge& e = net.edges().at(static_cast<std::size_t>(edge));
  if (!(arc >= 0.0 && arc <= e.length)) {
    throw std::domain_error("arc length outside [0, l_e]");
  }
  const Point2& u = net.u_position(edge);
  const Point2& w = net.w_position(edge);
  NetworkPoint p;
  p.edge = edge;
  p.arc = arc;
  // Exact endpoints at 0 and l_e.
  if (arc == 0.0) {
    p.position = u;
  } else if (arc == e.length) {
    p.position = w;
  } else {
    p.position = u + (arc / e.length) * (w - u);
  }
  return p;
}

bool ValidationReport::ok() const {
  for (const auto& issue : issues) {
    if (issue.severity == Severity::Error) return false;
  }
  return true;
}

std::vector<ValidationIssue> ValidationReport::errors() const {
  std::vector<ValidationIssue> out;
  for (const auto& issue : issues) {
    if (issue.severity == Severity::Error) out.push_back(issue);
  }
  return out;
}

std::vector<ValidationIssue> ValidationReport::warnings() const {
  std::vector<ValidationIssue> out;
  for (const auto& issue : issues) {
    if (issue.severity == Severity::Warning) out.push_back(issue);
  }
  return out;
}

namespace {

bool finite(const Point2& p) { return std::isfinite(p.x()) && std::isfinite(p.y()); }

std::string at(const char* list, std::size_t k, const char* field = nullptr) {
  std::ostringstream os;
  os << list << '[' << k << ']';
  if (field != nullptr) os << '.' << field;
  return os.str();
}

class Reporter {
 public:
  explicit Reporter(ValidationReport& report) : report_(report) {}
  void error(std::string path, std::string message) {
    report_.issues.push_back({Severity::Error, std::move(path), std::move(message)});
  }
  void warning(std::string path, std::string message) {
    report_.issues.push_back({Severity::Warning, std::move(path), std::move(message)});
  }

 private:
  ValidationReport& report_;
};

void validate_network(const Network& net, Reporter& rep) {
  const auto& vertices = net.vertices();
  const auto& edges = net.edges();
  if (vertices.empty()) rep.error("vertices", "network has no vertices");
  if (edges.empty()) rep.error("edges", "network has no edges");

  std::set<int> seen;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (!seen.insert(vertices[k].id).second) rep.error(at("vertices", k, "id"), "duplicate vertex id");
    if (!finite(vertices[k].position)) rep.error(at("vertices", k), "vertex coordinates not finite");
  }

  std::set<std::pair<int, int>> unordered;
  bool endpoints_ok = true;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (!net.index_of(e.u)) {
      rep.error(at("edges", k, "u"), "edge references unknown vertex");
      endpoints_ok = false;
    }
    if (!net.index_of(e.w)) {
      rep.error(at("edges", k, "w"), "edge references unknown vertex");
      endpoints_ok = false;
    }
    if (e.u == e.w) rep.error(at("edges", k), "self-loop edge");
    if (!(std::isfinite(e.length) && e.length > 0.0)) rep.error(at("edges", k, "length"), "edge length not positive");
    if (!unordered.insert(std::minmax(e.u, e.w)).second) rep.error(at("edges", k), "multiple edges between the same vertices");
  }

  if (!endpoints_ok || vertices.empty()) return;

  // Connectivity by breadth-first search over vertex indices.
  std::vector<std::vector<int>> adj(vertices.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    int a = *net.index_of(edges[k].u);
    int b = *net.index_of(edges[k].w);
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<bool> reached(vertices.size(), false);
  std::queue<int> frontier;
  frontier.push(0);
  reached[0] = true;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int n : adj[static_cast<std::size_t>(v)]) {
      if (!reached[static_cast<std::size_t>(n)]) {
        reached[static_cast<std::size_t>(n)] = true;
        frontier.push(n);
      }
    }
  }
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (!reached[k]) {
      std::ostringstream os;
      os << "network not connected: vertex " << vertices[k].id << " unreachable from vertex " << vertices[0].id;
      rep.error(at("vertices", k), os.str());
    }
  }
}

}  // namespace

ValidationReport validate_instance(const ProblemInstance& inst) {
  ValidationReport report;
  Reporter rep(report);

  if (!(inst.alpha > 0.0 && inst.alpha < 1.0)) rep.error("alpha", "alpha not in (0,1)");

  for (std::size_t k = 0; k < inst.facilities.size(); ++k) {
    if (inst.facilities[k].id != static_cast<int>(k)) {
      rep.error(at("facilities", k, "id"), "facility ids must be unique and contiguous from 0");
    }
    if (!finite(inst.facilities[k].position)) rep.error(at("facilities", k), "facility coordinates not finite");
  }

  validate_network(inst.network, rep);

  const auto n = static_cast<int>(inst.facilities.size());
  std::map<std::pair<int, int>, std::size_t> rows;
  for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
    const ODPair& p = inst.pairs[k];
    bool refs_ok = true;
    if (p.origin < 0 || p.origin >= n) {
      rep.error(at("pairs", k, "i"), "origin references unknown facility");
      refs_ok = false;
    }
    if (p.dest < 0 || p.dest >= n) {
      rep.error(at("pairs", k, "j"), "destination references unknown facility");
      refs_ok = false;
    }
    if (p.origin == p.dest) rep.error(at("pairs", k), "origin equals destination");
    if (!(std::isfinite(p.weight) && p.weight >= 0.0)) rep.error(at("pairs", k, "t"), "weight must be nonnegative");
    if (!(std::isfinite(p.acceptance) && p.acceptance >= 0.0)) {
      rep.error(at("pairs", k, "d"), "acceptance must be nonnegative");
    }
    if (refs_ok && p.origin != p.dest) {
      double euclid = (inst.facility(p.origin) - inst.facility(p.dest)).norm();
      if (!(p.acceptance < euclid)) {
        rep.error(at("pairs", k, "d"), "acceptance not strictly below Euclidean distance");
      }
    }
    if (!rows.emplace(std::make_pair(p.origin, p.dest), k).second) {
      rep.error(at("pairs", k), "duplicate (i,j) row");
    }
  }

  // Symmetry of T and D is assumed by the covering theory but not required.
  for (const auto& [key, k] : rows) {
    auto rev = rows.find({key.second, key.first});
    if (rev == rows.end()) continue;
    const ODPair& p = inst.pairs[k];
    const ODPair& q = inst.pairs[rev->second];
    if (p.acceptance != q.acceptance && key.first < key.second) {
      rep.warning(at("pairs", k, "d"), "acceptance matrix not symmetric");
    }
  }

  return report;
}

}  // namespace netcover
