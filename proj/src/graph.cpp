#include "graphdrift/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "graphdrift/errors.hpp"

namespace graphdrift {

namespace {

std::uint64_t edge_key(std::uint32_t u, std::uint32_t v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

AttrKind kind_of(const AttributeValue& value) {
  switch (value.index()) {
    case 1: return AttrKind::numeric;
    case 2: return AttrKind::categorical;
    default: return AttrKind::none;
  }
}

AttributedGraph::AttributedGraph(std::vector<std::string> vertex_ids,
                                 std::vector<AttributeValue> vertex_attrs,
                                 std::vector<Edge> edges,
                                 std::vector<AttributeValue> edge_attrs,
                                 bool directed)
    : vertex_ids_(std::move(vertex_ids)),
      vertex_attrs_(std::move(vertex_attrs)),
      edges_(std::move(edges)),
      edge_attrs_(std::move(edge_attrs)),
      directed_(directed) {
  if (vertex_attrs_.empty() && !vertex_ids_.empty())
    vertex_attrs_.resize(vertex_ids_.size());
  if (edge_attrs_.empty() && !edges_.empty())
    edge_attrs_.resize(edges_.size());
  if (vertex_attrs_.size() != vertex_ids_.size())
    throw std::invalid_argument("AttributedGraph: one attribute per vertex required");
  if (edge_attrs_.size() != edges_.size())
    throw std::invalid_argument("AttributedGraph: one attribute per edge required");

  std::unordered_map<std::string, std::size_t> seen_ids;
  seen_ids.reserve(vertex_ids_.size());
  for (std::size_t i = 0; i < vertex_ids_.size(); ++i) {
    if (!seen_ids.emplace(vertex_ids_[i], i).second)
      throw std::invalid_argument("AttributedGraph: duplicate vertex id '" + vertex_ids_[i] + "'");
  }

  std::uint32_t n = static_cast<std::uint32_t>(vertex_ids_.size());
  for (auto& e : edges_) {
    if (e.u >= n || e.v >= n)
      throw std::invalid_argument("AttributedGraph: edge endpoint out of range");
    if (e.u == e.v)
      throw std::invalid_argument("AttributedGraph: self loops are not allowed");
    if (!directed_ && e.u > e.v) std::swap(e.u, e.v);
  }

  edge_lookup_.reserve(edges_.size());
  for (std::size_t k = 0; k < edges_.size(); ++k)
    edge_lookup_.emplace_back(edge_key(edges_[k].u, edges_[k].v), k);
  std::sort(edge_lookup_.begin(), edge_lookup_.end());
  for (std::size_t k = 1; k < edge_lookup_.size(); ++k) {
    if (edge_lookup_[k].first == edge_lookup_[k - 1].first)
      throw std::invalid_argument("AttributedGraph: duplicate edge");
  }

  incident_.assign(vertex_ids_.size(), {});
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    incident_[edges_[k].u].push_back(k);
    if (edges_[k].v != edges_[k].u) incident_[edges_[k].v].push_back(k);
  }
}

AttributedGraph AttributedGraph::skeleton(std::size_t num_vertices, std::vector<Edge> edges,
                                          bool directed) {
  std::vector<std::string> ids(num_vertices);
  for (std::size_t i = 0; i < num_vertices; ++i) ids[i] = std::to_string(i);
  return AttributedGraph(std::move(ids), {}, std::move(edges), {}, directed);
}

std::optional<std::size_t> AttributedGraph::index_of(const std::string& vertex_id) const {
  for (std::size_t i = 0; i < vertex_ids_.size(); ++i)
    if (vertex_ids_[i] == vertex_id) return i;
  return std::nullopt;
}

std::optional<std::size_t> AttributedGraph::edge_index(std::uint32_t u, std::uint32_t v) const {
  if (!directed_ && u > v) std::swap(u, v);
  std::uint64_t key = edge_key(u, v);
  auto it = std::lower_bound(edge_lookup_.begin(), edge_lookup_.end(),
                             std::make_pair(key, std::size_t{0}));
  if (it != edge_lookup_.end() && it->first == key) return it->second;
  return std::nullopt;
}

bool AttributedGraph::operator==(const AttributedGraph& other) const {
  return directed_ == other.directed_ && vertex_ids_ == other.vertex_ids_ &&
         vertex_attrs_ == other.vertex_attrs_ &&
         edge_attrs_ == other.edge_attrs_ &&
         edges_.size() == other.edges_.size() &&
         std::equal(edges_.begin(), edges_.end(), other.edges_.begin(),
                    [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; });
}

IdentifiedGraph::IdentifiedGraph(Eigen::MatrixXd weights, bool directed)
    : weights_(std::move(weights)), directed_(directed) {
  if (weights_.rows() != weights_.cols())
    throw std::invalid_argument("IdentifiedGraph: weight matrix must be square");
  for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
      double w = weights_(i, j);
      if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument("IdentifiedGraph: weights must lie in [0,1]");
    }
    if (weights_(i, i) != 0.0)
      throw std::invalid_argument("IdentifiedGraph: no self loops, diagonal must be 0");
  }
  if (!directed_ && !weights_.isApprox(weights_.transpose(), 0.0))
    throw std::invalid_argument("IdentifiedGraph: undirected graph needs a symmetric matrix");
}

double frobenius_distance(const IdentifiedGraph& a, const IdentifiedGraph& b) {
  if (a.universe_size() != b.universe_size())
    throw std::invalid_argument("frobenius_distance: universes differ in size");
  return (a.weights() - b.weights()).norm();
}

Eigen::MatrixXd adjacency_matrix(const AttributedGraph& g) {
  return adjacency_matrix(g, nullptr);
}

Eigen::MatrixXd adjacency_matrix(const AttributedGraph& g,
                                 double (*weight_rule)(const AttributeValue&)) {
  Eigen::Index n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    const Edge& e = g.edges()[k];
    double w = weight_rule ? weight_rule(g.edge_attr(k)) : 1.0;
    a(e.u, e.v) = w;
    if (!g.directed()) a(e.v, e.u) = w;
  }
  return a;
}

Eigen::MatrixXd laplacian(const AttributedGraph& g) {
  Eigen::Index n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    // Directed graphs contribute their undirected skeleton.
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  Eigen::VectorXd deg = a.rowwise().sum();
  Eigen::MatrixXd l = -a;
  l.diagonal() += deg;
  return l;
}

AttributedGraph graph_from_adjacency(const Eigen::MatrixXd& a, bool directed) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("graph_from_adjacency: matrix must be square");
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Eigen::Index j0 = directed ? 0 : i + 1;
    for (Eigen::Index j = j0; j < a.cols(); ++j) {
      if (i == j) continue;
      if (a(i, j) != 0.0)
        edges.push_back(Edge{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  return AttributedGraph::skeleton(static_cast<std::size_t>(a.rows()), std::move(edges), directed);
}

}  // namespace graphdrift
