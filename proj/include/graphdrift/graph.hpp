#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace graphdrift {

// A vertex or edge payload: absent, a fixed-length numeric vector, or a
// categorical symbol. All graphs in one collection must use the same kind.
using AttributeValue = std::variant<std::monostate, std::vector<double>, std::string>;

enum class AttrKind { none, numeric, categorical };

AttrKind kind_of(const AttributeValue& value);

struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
};

// Finite graph with opaque vertex identifiers and optional attributes.
// Instances are validated on construction and immutable afterwards.
// Undirected edges are stored canonically with u < v; self loops and
// duplicate edges are rejected.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  AttributedGraph(std::vector<std::string> vertex_ids,
                  std::vector<AttributeValue> vertex_attrs,
                  std::vector<Edge> edges,
                  std::vector<AttributeValue> edge_attrs,
                  bool directed = false);

  // Unattributed graph on vertices "0".."n-1".
  static AttributedGraph skeleton(std::size_t num_vertices, std::vector<Edge> edges,
                                  bool directed = false);

  std::size_t num_vertices() const { return vertex_ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  bool directed() const { return directed_; }

  const std::string& vertex_id(std::size_t i) const { return vertex_ids_.at(i); }
  const AttributeValue& vertex_attr(std::size_t i) const { return vertex_attrs_.at(i); }
  const std::vector<Edge>& edges() const { return edges_; }
  const AttributeValue& edge_attr(std::size_t e) const { return edge_attrs_.at(e); }

  std::optional<std::size_t> index_of(const std::string& vertex_id) const;

  // Edge slot for (u, v); order is ignored for undirected graphs.
  std::optional<std::size_t> edge_index(std::uint32_t u, std::uint32_t v) const;
  bool has_edge(std::uint32_t u, std::uint32_t v) const { return edge_index(u, v).has_value(); }

  // Indices into edges() of every edge touching vertex i (either endpoint
  // for undirected graphs, both directions for directed ones).
  const std::vector<std::size_t>& incident_edges(std::size_t i) const {
    return incident_.at(i);
  }

  bool operator==(const AttributedGraph& other) const;

 private:
  std::vector<std::string> vertex_ids_;
  std::vector<AttributeValue> vertex_attrs_;
  std::vector<Edge> edges_;
  std::vector<AttributeValue> edge_attrs_;
  bool directed_ = false;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::pair<std::uint64_t, std::size_t>> edge_lookup_;  // sorted (key, slot)
};

// Graph over a fixed vertex universe 1..N identified across the stream;
// state is the full weight matrix with entries in [0, 1].
class IdentifiedGraph {
 public:
  explicit IdentifiedGraph(Eigen::MatrixXd weights, bool directed = false);

  std::size_t universe_size() const { return static_cast<std::size_t>(weights_.rows()); }
  bool directed() const { return directed_; }
  const Eigen::MatrixXd& weights() const { return weights_; }

 private:
  Eigen::MatrixXd weights_;
  bool directed_ = false;
};

// Euclidean distance between the weight matrices seen as vectors.
double frobenius_distance(const IdentifiedGraph& a, const IdentifiedGraph& b);

// Weighted adjacency matrix. weight_rule maps an edge attribute to a weight;
// the default weighs every present edge 1.0. Undirected edges fill both
// triangles.
Eigen::MatrixXd adjacency_matrix(const AttributedGraph& g);
Eigen::MatrixXd adjacency_matrix(const AttributedGraph& g,
                                 double (*weight_rule)(const AttributeValue&));

// Combinatorial Laplacian D - A of the undirected unweighted skeleton.
Eigen::MatrixXd laplacian(const AttributedGraph& g);

// Inverse of adjacency_matrix for unattributed graphs (used by round-trip
// checks): nonzero entries become edges.
AttributedGraph graph_from_adjacency(const Eigen::MatrixXd& a, bool directed = false);

}  // namespace graphdrift
