#pragma once

// Shared helpers for unit and acceptance tests: seeded random graph
// generators and small combinatorial oracles.

#include <string>
#include <vector>

#include "graphdrift/graph.hpp"
#include "graphdrift/rng.hpp"

namespace testsupport {

using graphdrift::AttributedGraph;
using graphdrift::AttributeValue;
using graphdrift::Edge;
using graphdrift::SplitMix64;

enum class AttrFlavour { none, planar2d, categorical };

// Random undirected graph with vertex count in [min_v, max_v], independent
// edges with probability edge_p, and the requested attribute flavour
// (2-D coordinates in [0,1]^2 or a symbol from a 5-letter alphabet).
inline AttributedGraph random_graph(SplitMix64& rng, std::size_t min_v, std::size_t max_v,
                                    double edge_p = 0.4,
                                    AttrFlavour flavour = AttrFlavour::planar2d,
                                    double coord_scale = 1.0) {
  std::size_t n = min_v + static_cast<std::size_t>(rng.next_below(max_v - min_v + 1));
  std::vector<std::string> ids(n);
  std::vector<AttributeValue> attrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids[i] = std::to_string(i);
    switch (flavour) {
      case AttrFlavour::none:
        attrs[i] = AttributeValue{};
        break;
      case AttrFlavour::planar2d:
        attrs[i] = std::vector<double>{coord_scale * rng.next_unit_co(),
                                       coord_scale * rng.next_unit_co()};
        break;
      case AttrFlavour::categorical:
        attrs[i] = std::string(1, static_cast<char>('A' + rng.next_below(5)));
        break;
    }
  }
  std::vector<Edge> edges;
  for (std::uint32_t u = 0; u + 1 < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v)
      if (rng.next_unit_co() < edge_p) edges.push_back(Edge{u, v});
  return AttributedGraph(std::move(ids), std::move(attrs), std::move(edges), {}, false);
}

// Path graph on n vertices, no attributes.
inline AttributedGraph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i + 1 < n; ++i) edges.push_back(Edge{i, i + 1});
  return AttributedGraph::skeleton(n, std::move(edges));
}

// Complete graph on n vertices, no attributes.
inline AttributedGraph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::uint32_t u = 0; u + 1 < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) edges.push_back(Edge{u, v});
  return AttributedGraph::skeleton(n, std::move(edges));
}

// Single-vertex graph carrying one categorical symbol.
inline AttributedGraph one_vertex(const std::string& symbol) {
  return AttributedGraph({"0"}, {AttributeValue{symbol}}, {}, {}, false);
}

// Brute-force optimal assignment value by enumerating all n! permutations.
inline double lsap_brute_force(const Eigen::MatrixXd& cost) {
  std::vector<int> perm(static_cast<std::size_t>(cost.rows()));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  double best = std::numeric_limits<double>::infinity();
  do {
    double acc = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      acc += cost(static_cast<Eigen::Index>(i), perm[i]);
    best = std::min(best, acc);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace testsupport
