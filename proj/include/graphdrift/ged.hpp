#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "graphdrift/graph.hpp"

namespace graphdrift {

// Edit operation prices. Insertion and deletion prices must match for each
// element type, otherwise the resulting distance is not symmetric.
// Substitution charges scale * attribute distance, where the attribute
// distance is Euclidean for numeric attributes, 0/1 for categorical ones and
// 0 when elements carry no attribute.
struct CostModel {
  double node_insert = 1.0;
  double node_delete = 1.0;
  double node_subst_scale = 1.0;
  double edge_insert = 1.0;
  double edge_delete = 1.0;
  double edge_subst_scale = 1.0;

  void validate() const;

  double node_subst(const AttributeValue& a, const AttributeValue& b) const;
  double edge_subst(const AttributeValue& a, const AttributeValue& b) const;
};

// Distance between two attribute payloads of the same kind.
double attribute_distance(const AttributeValue& a, const AttributeValue& b);

struct Assignment {
  std::vector<int> permutation;  // permutation[row] = assigned column
  double total_cost = 0.0;
};

// Optimal linear sum assignment on a square cost matrix with finite entries
// (shortest augmenting path, O(n^3)).
Assignment lsap_solve(const Eigen::MatrixXd& cost);

// Upper bound on exact_ged from the bipartite heuristic: solve an LSAP over
// vertices (substitution cells carry a local assignment over incident edges),
// then price the complete edit path induced by that vertex assignment.
double bipartite_ged(const AttributedGraph& g1, const AttributedGraph& g2,
                     const CostModel& cost);

// Exact edit distance by exhaustive search over injective partial vertex
// maps with branch-and-bound pruning. Guarded by a total-size cap because
// the search is exponential.
double exact_ged(const AttributedGraph& g1, const AttributedGraph& g2,
                 const CostModel& cost, std::size_t max_total_vertices = 12);

}  // namespace graphdrift
