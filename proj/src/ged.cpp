#include "graphdrift/ged.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphdrift/errors.hpp"

namespace graphdrift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Multiplier for forbidden cells in the bipartite vertex matrix. Keeps the
// matrix finite for the LSAP solver while making forbidden cells never win.
constexpr double kForbiddenFactor = 1e6;

}  // namespace

void CostModel::validate() const {
  const double values[] = {node_insert, node_delete, node_subst_scale,
                           edge_insert, edge_delete, edge_subst_scale};
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("CostModel: prices must be finite and nonnegative");
  }
  if (node_insert != node_delete || edge_insert != edge_delete)
    throw std::invalid_argument(
        "CostModel: insertion and deletion prices must match (symmetry)");
}

double attribute_distance(const AttributeValue& a, const AttributeValue& b) {
  AttrKind ka = kind_of(a);
  AttrKind kb = kind_of(b);
  if (ka != kb)
    throw SchemaError("attribute_distance: mixed attribute kinds");
  switch (ka) {
    case AttrKind::none:
      return 0.0;
    case AttrKind::categorical:
      return std::get<std::string>(a) == std::get<std::string>(b) ? 0.0 : 1.0;
    case AttrKind::numeric: {
      const auto& x = std::get<std::vector<double>>(a);
      const auto& y = std::get<std::vector<double>>(b);
      if (x.size() != y.size())
        throw SchemaError("attribute_distance: numeric dimensions differ");
      double acc = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(acc);
    }
  }
  return 0.0;
}

double CostModel::node_subst(const AttributeValue& a, const AttributeValue& b) const {
  return node_subst_scale * attribute_distance(a, b);
}

double CostModel::edge_subst(const AttributeValue& a, const AttributeValue& b) const {
  return edge_subst_scale * attribute_distance(a, b);
}

Assignment lsap_solve(const Eigen::MatrixXd& cost) {
  const Eigen::Index n = cost.rows();
  if (n != cost.cols())
    throw std::invalid_argument("lsap_solve: cost matrix must be square");
  if (n == 0) return Assignment{{}, 0.0};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!std::isfinite(cost(i, j)))
        throw std::invalid_argument("lsap_solve: cost matrix entries must be finite");

  // Shortest augmenting path with dual potentials (Jonker-Volgenant flavour).
  // Rows and columns are 1-based internally; column 0 is the virtual root.
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // column -> row
  std::vector<int> path(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      int i0 = match[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                     v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          path[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    // Augment along the alternating path back to the root.
    do {
      int j1 = path[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }

  Assignment out;
  out.permutation.assign(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    out.permutation[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  for (Eigen::Index i = 0; i < n; ++i)
    out.total_cost += cost(i, out.permutation[static_cast<std::size_t>(i)]);
  return out;
}

namespace {

// Local assignment over the edges incident to u (in g1) and v (in g2):
// substitutions compete with deleting/inserting the unmatched remainder.
double incident_edge_cost(const AttributedGraph& g1, std::size_t ui,
                          const AttributedGraph& g2, std::size_t vj,
                          const CostModel& cost) {
  const auto& e1 = g1.incident_edges(ui);
  const auto& e2 = g2.incident_edges(vj);
  const std::size_t p = e1.size();
  const std::size_t q = e2.size();
  if (p == 0 && q == 0) return 0.0;
  const Eigen::Index n = static_cast<Eigen::Index>(p + q);
  Eigen::MatrixXd local(n, n);
  const double big = kForbiddenFactor *
      std::max({cost.edge_insert, cost.edge_delete, 1.0});
  local.setZero();
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < q; ++b)
      local(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          cost.edge_subst(g1.edge_attr(e1[a]), g2.edge_attr(e2[b]));
    for (std::size_t b = 0; b < p; ++b)
      local(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(q + b)) =
          (a == b) ? cost.edge_delete : big;
  }
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b)
      local(static_cast<Eigen::Index>(p + a), static_cast<Eigen::Index>(b)) =
          (a == b) ? cost.edge_insert : big;
  }
  return lsap_solve(local).total_cost;
}

// Price of the full edit path determined by a vertex mapping.
// map1[i] = target vertex in g2 or -1 for deletion; mapped2[j] = source
// vertex in g1 or -1 for insertion.
double induced_path_cost(const AttributedGraph& g1, const AttributedGraph& g2,
                         const CostModel& cost, const std::vector<int>& map1,
                         const std::vector<int>& mapped2) {
  double total = 0.0;
  for (std::size_t i = 0; i < g1.num_vertices(); ++i) {
    if (map1[i] < 0)
      total += cost.node_delete;
    else
      total += cost.node_subst(g1.vertex_attr(i),
                               g2.vertex_attr(static_cast<std::size_t>(map1[i])));
  }
  for (std::size_t j = 0; j < g2.num_vertices(); ++j)
    if (mapped2[j] < 0) total += cost.node_insert;

  for (std::size_t k = 0; k < g1.num_edges(); ++k) {
    const Edge& e = g1.edges()[k];
    int a = map1[e.u];
    int b = map1[e.v];
    if (a < 0 || b < 0) {
      total += cost.edge_delete;
      continue;
    }
    auto slot = g2.edge_index(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
    if (slot)
      total += cost.edge_subst(g1.edge_attr(k), g2.edge_attr(*slot));
    else
      total += cost.edge_delete;
  }
  for (std::size_t k = 0; k < g2.num_edges(); ++k) {
    const Edge& e = g2.edges()[k];
    int a = mapped2[e.u];
    int b = mapped2[e.v];
    bool covered = a >= 0 && b >= 0 &&
                   g1.edge_index(static_cast<std::uint32_t>(a),
                                 static_cast<std::uint32_t>(b)).has_value();
    if (!covered) total += cost.edge_insert;
  }
  return total;
}

void check_same_direction(const AttributedGraph& g1, const AttributedGraph& g2) {
  if (g1.directed() != g2.directed())
    throw std::invalid_argument("graph edit distance: directedness must match");
}

}  // namespace

double bipartite_ged(const AttributedGraph& g1, const AttributedGraph& g2,
                     const CostModel& cost) {
  cost.validate();
  check_same_direction(g1, g2);
  const std::size_t n1 = g1.num_vertices();
  const std::size_t n2 = g2.num_vertices();
  if (n1 == 0 && n2 == 0) return 0.0;

  const Eigen::Index n = static_cast<Eigen::Index>(n1 + n2);
  Eigen::MatrixXd c(n, n);

  // Substitution block, then deletion/insertion diagonals; the dummy-dummy
  // block is free. Forbidden cells get a large finite sentinel afterwards.
  double max_finite = 0.0;
  auto track = [&max_finite](double v) {
    if (v > max_finite) max_finite = v;
    return v;
  };
  c.setZero();
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          track(cost.node_subst(g1.vertex_attr(i), g2.vertex_attr(j)) +
                incident_edge_cost(g1, i, g2, j, cost));
  std::vector<double> del(n1), ins(n2);
  for (std::size_t i = 0; i < n1; ++i) {
    double v = cost.node_delete;
    for (std::size_t k : g1.incident_edges(i)) {
      (void)k;
      v += cost.edge_delete;
    }
    del[i] = track(v);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    double v = cost.node_insert;
    for (std::size_t k : g2.incident_edges(j)) {
      (void)k;
      v += cost.edge_insert;
    }
    ins[j] = track(v);
  }
  const double sentinel = kForbiddenFactor * std::max(max_finite, 1.0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n1; ++k)
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n2 + k)) =
          (i == k) ? del[i] : sentinel;
  for (std::size_t k = 0; k < n2; ++k)
    for (std::size_t j = 0; j < n2; ++j)
      c(static_cast<Eigen::Index>(n1 + k), static_cast<Eigen::Index>(j)) =
          (k == j) ? ins[j] : sentinel;

  Assignment assignment = lsap_solve(c);

  std::vector<int> map1(n1, -1);
  std::vector<int> mapped2(n2, -1);
  for (std::size_t i = 0; i < n1; ++i) {
    int j = assignment.permutation[i];
    if (j < static_cast<int>(n2)) {
      map1[i] = j;
      mapped2[static_cast<std::size_t>(j)] = static_cast<int>(i);
    }
  }
  return induced_path_cost(g1, g2, cost, map1, mapped2);
}

namespace {

struct ExactSearch {
  const AttributedGraph& g1;
  const AttributedGraph& g2;
  const CostModel& cost;
  std::vector<int> map1;      // g1 vertex -> g2 vertex or -1 (deleted)
  std::vector<char> used2;    // g2 vertex already an image
  double best = kInf;

  ExactSearch(const AttributedGraph& a, const AttributedGraph& b, const CostModel& c)
      : g1(a), g2(b), cost(c), map1(a.num_vertices(), -1), used2(b.num_vertices(), 0) {}

  // Cost contributions that become decidable when vertex i gets its fate:
  // the vertex operation itself plus every edge between i and an already
  // decided vertex (on either side).
  double step_cost(std::size_t i, int target) const {
    double add = 0.0;
    if (target < 0) {
      add += cost.node_delete;
      for (std::size_t k : g1.incident_edges(i)) {
        const Edge& e = g1.edges()[k];
        std::size_t other = (e.u == i) ? e.v : e.u;
        if (other < i) add += cost.edge_delete;
      }
      return add;
    }
    std::size_t j = static_cast<std::size_t>(target);
    add += cost.node_subst(g1.vertex_attr(i), g2.vertex_attr(j));
    auto pair_cost = [&](std::uint32_t a1, std::uint32_t b1, int l,
                         std::uint32_t a2, std::uint32_t b2) {
      auto e1 = g1.edge_index(a1, b1);
      if (l < 0) {
        if (e1) add += cost.edge_delete;
        return;
      }
      auto e2 = g2.edge_index(a2, b2);
      if (e1 && e2)
        add += cost.edge_subst(g1.edge_attr(*e1), g2.edge_attr(*e2));
      else if (e1)
        add += cost.edge_delete;
      else if (e2)
        add += cost.edge_insert;
    };
    for (std::size_t k = 0; k < i; ++k) {
      int l = map1[k];
      std::uint32_t ui = static_cast<std::uint32_t>(i);
      std::uint32_t uk = static_cast<std::uint32_t>(k);
      std::uint32_t vj = static_cast<std::uint32_t>(j);
      std::uint32_t vl = l < 0 ? 0 : static_cast<std::uint32_t>(l);
      pair_cost(ui, uk, l, vj, vl);
      if (g1.directed()) pair_cost(uk, ui, l, vl, vj);
    }
    return add;
  }

  // Remaining cost once all of g1 is decided: insert untouched g2 vertices
  // and every g2 edge not covered by a substitution.
  double closing_cost() const {
    double add = 0.0;
    for (std::size_t j = 0; j < g2.num_vertices(); ++j)
      if (!used2[j]) add += cost.node_insert;
    for (std::size_t k = 0; k < g2.num_edges(); ++k) {
      const Edge& e = g2.edges()[k];
      if (!used2[e.u] || !used2[e.v]) add += cost.edge_insert;
    }
    return add;
  }

  void dfs(std::size_t i, double acc) {
    if (acc >= best) return;
    if (i == g1.num_vertices()) {
      double total = acc + closing_cost();
      if (total < best) best = total;
      return;
    }
    for (std::size_t j = 0; j < g2.num_vertices(); ++j) {
      if (used2[j]) continue;
      double add = step_cost(i, static_cast<int>(j));
      if (acc + add < best) {
        map1[i] = static_cast<int>(j);
        used2[j] = 1;
        dfs(i + 1, acc + add);
        used2[j] = 0;
        map1[i] = -1;
      }
    }
    double add = step_cost(i, -1);
    if (acc + add < best) {
      map1[i] = -1;
      dfs(i + 1, acc + add);
    }
  }
};

}  // namespace

double exact_ged(const AttributedGraph& g1, const AttributedGraph& g2,
                 const CostModel& cost, std::size_t max_total_vertices) {
  cost.validate();
  check_same_direction(g1, g2);
  if (g1.num_vertices() + g2.num_vertices() > max_total_vertices)
    throw SizeLimitError("exact_ged: graphs exceed the exhaustive-search size cap");
  ExactSearch search(g1, g2, cost);
  search.dfs(0, 0.0);
  return search.best;
}

}  // namespace graphdrift
