#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace netcover::testing {

Network trapezoid_network() {
  const double h = 2.0 * std::sqrt(6.0);
  std::vector<Vertex> v = {{0, {0.0, h}}, {1, {5.0, h}}, {2, {-1.0, 0.0}}, {3, {6.0, 0.0}}};
  std::vector<Edge> e = {{0, 1, 5.0}, {2, 3, 7.0}, {2, 0, 5.0}, {3, 1, 5.0}};
  return Network(std::move(v), std::move(e));
}

ProblemInstance trapezoid_instance(double alpha, std::vector<ODPair> pairs) {
  ProblemInstance inst;
  inst.alpha = alpha;
  inst.network = trapezoid_network();
  inst.facilities = {{0, {2.5, 6.0}}, {1, {1.0, -4.0}}, {2, {-2.0, -4.5}}, {3, {3.0, 5.5}}};
  inst.pairs = std::move(pairs);
  return inst;
}

ProblemInstance random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };

  ProblemInstance inst;
  inst.alpha = uniform(0.1, 0.5);

  const int nv = pick(3, 6);
  std::vector<Vertex> verts;
  for (int k = 0; k < nv; ++k) verts.push_back({k, {uniform(0.0, 10.0), uniform(0.0, 10.0)}});

  std::set<std::pair<int, int>> used;
  std::vector<Edge> edges;
  auto add_edge = [&](int a, int b) {
    if (a == b || used.count({std::min(a, b), std::max(a, b)}) != 0) return;
    used.insert({std::min(a, b), std::max(a, b)});
    const double eu = (verts[static_cast<std::size_t>(a)].position - verts[static_cast<std::size_t>(b)].position).norm();
    // Some edges are longer than the straight line between their endpoints.
    const double stretch = pick(0, 3) == 0 ? uniform(1.0, 1.4) : 1.0;
    edges.push_back({a, b, eu * stretch});
  };
  for (int k = 1; k < nv; ++k) add_edge(pick(0, k - 1), k);
  const int target = std::min(8, pick(nv - 1, nv + 2));
  for (int tries = 0; static_cast<int>(edges.size()) < target && tries < 50; ++tries) add_edge(pick(0, nv - 1), pick(0, nv - 1));
  inst.network = Network(std::move(verts), std::move(edges));

  // Facilities sit near the network so that some trips can use it.
  const int nf = pick(2, 5);
  for (int k = 0; k < nf; ++k) {
    const auto& edge = inst.network.edges()[static_cast<std::size_t>(pick(0, static_cast<int>(inst.network.edge_count()) - 1))];
    const Point2 a = inst.network.vertices()[static_cast<std::size_t>(*inst.network.index_of(edge.u))].position;
    const Point2 b = inst.network.vertices()[static_cast<std::size_t>(*inst.network.index_of(edge.w))].position;
    const Point2 base = a + uniform(0.0, 1.0) * (b - a);
    inst.facilities.push_back({k, base + Point2(uniform(-2.0, 2.0), uniform(-2.0, 2.0))});
  }

  std::vector<std::pair<int, int>> od;
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) {
      if (i != j) od.emplace_back(i, j);
    }
  }
  std::shuffle(od.begin(), od.end(), rng);
  od.resize(static_cast<std::size_t>(pick(1, std::min<int>(20, static_cast<int>(od.size())))));
  for (const auto& [i, j] : od) {
    const double eu = (inst.facilities[static_cast<std::size_t>(i)].position - inst.facilities[static_cast<std::size_t>(j)].position).norm();
    inst.pairs.push_back({i, j, static_cast<double>(pick(1, 5)), eu * uniform(0.75, 0.99)});
  }
  return inst;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Graph {
  int n = 0;
  std::vector<std::vector<double>> d;

  explicit Graph(int size) : n(size), d(static_cast<std::size_t>(size), std::vector<double>(static_cast<std::size_t>(size), kInf)) {
    for (int k = 0; k < n; ++k) d[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = 0.0;
  }
  void link(int a, int b, double len) {
    auto& x = d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    x = std::min(x, len);
    d[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = x;
  }
  void close() {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double via = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] + d[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
          if (via < d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = via;
        }
      }
    }
  }
};

int vertex_slot(const Network& net, int id) { return *net.index_of(id); }

}  // namespace

double brute_network_distance(const Network& net, int e1, double a1, int e2, double a2) {
  const int nv = static_cast<int>(net.vertex_count());
  Graph g(nv + 2);
  const int p1 = nv;
  const int p2 = nv + 1;
  for (int e = 0; e < static_cast<int>(net.edge_count()); ++e) {
    const Edge& edge = net.edges()[static_cast<std::size_t>(e)];
    const int u = vertex_slot(net, edge.u);
    const int w = vertex_slot(net, edge.w);
    // Stops along the edge, sorted by arc length.
    std::vector<std::pair<double, int>> stops = {{0.0, u}, {edge.length, w}};
    if (e == e1) stops.emplace_back(a1, p1);
    if (e == e2) stops.emplace_back(a2, p2);
    std::sort(stops.begin(), stops.end());
    for (std::size_t k = 1; k < stops.size(); ++k) {
      g.link(stops[k - 1].second, stops[k].second, stops[k].first - stops[k - 1].first);
    }
  }
  g.close();
  return g.d[static_cast<std::size_t>(p1)][static_cast<std::size_t>(p2)];
}

std::vector<std::vector<double>> brute_bottleneck_arcs(const Network& net) {
  const int nv = static_cast<int>(net.vertex_count());
  Graph g(nv);
  for (const Edge& e : net.edges()) g.link(vertex_slot(net, e.u), vertex_slot(net, e.w), e.length);
  g.close();
  std::vector<std::vector<double>> out(net.edge_count());
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edges()[e];
    const int u = vertex_slot(net, edge.u);
    const int w = vertex_slot(net, edge.w);
    for (int v = 0; v < nv; ++v) {
      // t -> min(d(v,u) + t, d(v,w) + l - t) peaks where the two lines meet.
      const double du = g.d[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
      const double dw = g.d[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)];
      const double t = 0.5 * (dw - du + edge.length);
      // Values within rounding of an endpoint are the endpoint itself.
      if (t > 1e-9 && t < edge.length - 1e-9) out[e].push_back(t);
    }
    std::sort(out[e].begin(), out[e].end());
  }
  return out;
}

}  // namespace netcover::testing
