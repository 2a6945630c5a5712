#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace netcover {

using Point2 = Eigen::Vector2d;

/// Existing facility A_i on the plane. Ids are contiguous from 0.
struct Facility {
  int id = 0;
  Point2 position = Point2::Zero();
};

/// Ordered origin/destination pair with trip weight t_ij and acceptance
/// level d_ij.
struct ODPair {
  int origin = 0;
  int dest = 0;
  double weight = 0.0;
  double acceptance = 0.0;
};

struct Vertex {
  int id = 0;
  Point2 position = Point2::Zero();
};

/// Undirected edge [u, w] between two vertex ids. The length is an
/// independent datum and may exceed the Euclidean distance of the endpoints.
struct Edge {
  int u = 0;
  int w = 0;
  double length = 0.0;
};

/// Embedded high-speed network. Edges refer to vertices by id.
class Network {
 public:
  Network() = default;
  Network(std::vector<Vertex> vertices, std::vector<Edge> edges);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Position of a vertex id in vertices(), if present.
  std::optional<int> index_of(int vertex_id) const;

  /// Index-based endpoint lookup; throws std::out_of_range on unknown ids.
  int u_index(int edge) const;
  int w_index(int edge) const;
  const Point2& u_position(int edge) const;
  const Point2& w_position(int edge) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<int, int> index_;
};

struct ProblemInstance {
  std::vector<Facility> facilities;
  std::vector<ODPair> pairs;
  Network network;
  double alpha = 0.5;

  const Point2& facility(int id) const { return facilities.at(static_cast<std::size_t>(id)).position; }
};

/// Point on an edge at arc length `arc` from the edge's first vertex.
struct NetworkPoint {
  int edge = 0;
  double arc = 0.0;
  Point2 position = Point2::Zero();
};

NetworkPoint make_network_point(const Network& net, int edge, double arc);

using PairKey = std::pair<int, int>;

struct Solution {
  NetworkPoint x1;
  NetworkPoint x2;
  double objective = 0.0;
  std::vector<PairKey> covered;
};

enum class Severity { Error, Warning };

struct ValidationIssue {
  Severity severity = Severity::Error;
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  /// True when no issue has error severity; warnings do not invalidate.
  bool ok() const;
  std::vector<ValidationIssue> errors() const;
  std::vector<ValidationIssue> warnings() const;
};

ValidationReport validate_instance(const ProblemInstance& inst);

}  // namespace netcover
