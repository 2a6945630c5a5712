#pragma once

#include <cstdint>
#include <vector>

#include "netcover/model.hpp"

namespace netcover::testing {

// Trapezoid: top edge 0 = [u_p, w_p], bottom edge 1 = [u_q, w_q],
// edge 2 = [u_q, u_p], edge 3 = [w_q, w_p].
inline constexpr int kTopEdge = 0;
inline constexpr int kBottomEdge = 1;

Network trapezoid_network();

// Facilities A_i(2.5, 6), A_j(1, -4), A_k(-2, -4.5), A_r(3, 5.5) as ids 0..3.
ProblemInstance trapezoid_instance(double alpha, std::vector<ODPair> pairs);

// |V| <= 6, |E| <= 8, <= 5 facilities, <= 20 pairs with integer weights.
ProblemInstance random_instance(std::uint64_t seed);

// Shortest path between two network points, computed by splitting their
// edges into new vertices and running Floyd-Warshall on the result.
double brute_network_distance(const Network& net, int e1, double a1, int e2, double a2);

// Interior antipodal arc lengths per edge from Floyd-Warshall vertex
// distances, with no merging of near-equal values. Arcs within 1e-9 of an
// endpoint are dropped.
std::vector<std::vector<double>> brute_bottleneck_arcs(const Network& net);

}  // namespace netcover::testing
