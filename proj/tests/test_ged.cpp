#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "graphdrift/errors.hpp"
#include "graphdrift/ged.hpp"
#include "support.hpp"

using namespace graphdrift;
using testsupport::AttrFlavour;
using testsupport::lsap_brute_force;
using testsupport::one_vertex;
using testsupport::random_graph;

TEST_CASE("lsap matches the permutation oracle on random matrices") {
  SplitMix64 rng(7);
  for (int rep = 0; rep < 300; ++rep) {
    int n = 1 + static_cast<int>(rng.next_below(6));
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = 10.0 * rng.next_unit_co();
    Assignment a = lsap_solve(cost);
    CHECK(a.total_cost == doctest::Approx(lsap_brute_force(cost)).epsilon(1e-12));
    // The result must be a permutation.
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (int j : a.permutation) seen[static_cast<std::size_t>(j)]++;
    CHECK(*std::min_element(seen.begin(), seen.end()) == 1);
  }
}

TEST_CASE("lsap identity matrix and rejection of bad input") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
  // Cheapest on 1 - I is the identity permutation at zero cost.
  Assignment a = lsap_solve(Eigen::MatrixXd::Ones(4, 4) - eye);
  CHECK(a.total_cost == doctest::Approx(0.0));
  CHECK_THROWS_AS(lsap_solve(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
  Eigen::MatrixXd inf = Eigen::MatrixXd::Zero(2, 2);
  inf(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(lsap_solve(inf), std::invalid_argument);
  CHECK(lsap_solve(Eigen::MatrixXd(0, 0)).total_cost == doctest::Approx(0.0));
}

TEST_CASE("cost model validation") {
  CostModel ok;
  CHECK_NOTHROW(ok.validate());
  CostModel bad;
  bad.node_insert = 2.0;  // no longer equals node_delete
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CostModel neg;
  neg.edge_subst_scale = -1.0;
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}

TEST_CASE("exact ged hand values") {
  CostModel cost;
  AttributedGraph empty;
  // Empty vs one vertex: exactly one insertion.
  CHECK(exact_ged(empty, one_vertex("A"), cost) == doctest::Approx(cost.node_insert));
  CHECK(exact_ged(one_vertex("A"), empty, cost) == doctest::Approx(cost.node_delete));
  // Two singleton graphs with different symbols: substitution competes with
  // delete + insert.
  CHECK(exact_ged(one_vertex("A"), one_vertex("B"), cost) ==
        doctest::Approx(std::min(cost.node_subst_scale, cost.node_insert + cost.node_delete)));
  CostModel pricey;
  pricey.node_subst_scale = 5.0;
  CHECK(exact_ged(one_vertex("A"), one_vertex("B"), pricey) ==
        doctest::Approx(pricey.node_insert + pricey.node_delete));
  CHECK(exact_ged(one_vertex("A"), one_vertex("A"), cost) == doctest::Approx(0.0));
}

TEST_CASE("exact ged identity of indiscernibles on random graphs") {
  SplitMix64 rng(11);
  CostModel cost;
  for (int rep = 0; rep < 40; ++rep) {
    AttributedGraph g = random_graph(rng, 1, 5);
    CHECK(exact_ged(g, g, cost) == doctest::Approx(0.0));
  }
}

TEST_CASE("exact ged size cap") {
  CostModel cost;
  AttributedGraph a = testsupport::complete_graph(7);
  AttributedGraph b = testsupport::complete_graph(6);
  CHECK_THROWS_AS(exact_ged(a, b, cost), SizeLimitError);
  CHECK_NOTHROW(exact_ged(a, b, cost, 13));
}

TEST_CASE("bipartite ged agrees with exact on easy pairs and never undershoots") {
  SplitMix64 rng(13);
  CostModel cost;
  int exact_hits = 0;
  for (int rep = 0; rep < 120; ++rep) {
    AttrFlavour flavour = (rep % 2 == 0) ? AttrFlavour::planar2d : AttrFlavour::categorical;
    AttributedGraph g1 = random_graph(rng, 1, 5, 0.4, flavour);
    AttributedGraph g2 = random_graph(rng, 1, 5, 0.4, flavour);
    double ub = bipartite_ged(g1, g2, cost);
    double ex = exact_ged(g1, g2, cost);
    CHECK(ub >= ex - 1e-9);
    if (ub <= ex + 1e-9) ++exact_hits;
  }
  // The heuristic is known to be tight on most small instances.
  CHECK(exact_hits > 60);
}

TEST_CASE("bipartite ged of a graph with itself is zero") {
  SplitMix64 rng(17);
  CostModel cost;
  for (int rep = 0; rep < 30; ++rep) {
    AttributedGraph g = random_graph(rng, 1, 6);
    CHECK(bipartite_ged(g, g, cost) == doctest::Approx(0.0));
  }
}

TEST_CASE("ged is symmetric when prices are symmetric") {
  SplitMix64 rng(19);
  CostModel cost;
  for (int rep = 0; rep < 60; ++rep) {
    AttributedGraph g1 = random_graph(rng, 1, 5);
    AttributedGraph g2 = random_graph(rng, 1, 5);
    CHECK(exact_ged(g1, g2, cost) == doctest::Approx(exact_ged(g2, g1, cost)).epsilon(1e-9));
    CHECK(bipartite_ged(g1, g2, cost) ==
          doctest::Approx(bipartite_ged(g2, g1, cost)).epsilon(1e-9));
  }
}

TEST_CASE("exact ged satisfies the triangle inequality") {
  SplitMix64 rng(23);
  CostModel cost;
  for (int rep = 0; rep < 80; ++rep) {
    AttributedGraph a = random_graph(rng, 1, 4);
    AttributedGraph b = random_graph(rng, 1, 4);
    AttributedGraph c = random_graph(rng, 1, 4);
    double ab = exact_ged(a, b, cost);
    double bc = exact_ged(b, c, cost);
    double ac = exact_ged(a, c, cost);
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("schema mismatches are rejected") {
  CostModel cost;
  AttributedGraph num({"0"}, {AttributeValue{std::vector<double>{0.0, 0.0}}}, {}, {}, false);
  CHECK_THROWS_AS(exact_ged(num, one_vertex("A"), cost), SchemaError);
  AttributedGraph three({"0"}, {AttributeValue{std::vector<double>{0.0, 0.0, 0.0}}}, {}, {},
                        false);
  CHECK_THROWS_AS(exact_ged(num, three, cost), SchemaError);
  AttributedGraph directed = AttributedGraph::skeleton(2, {Edge{0, 1}}, true);
  AttributedGraph undirected = AttributedGraph::skeleton(2, {Edge{0, 1}}, false);
  CHECK_THROWS_AS(exact_ged(directed, undirected, cost), std::invalid_argument);
}

TEST_CASE("numeric substitution prices scale with euclidean distance") {
  CostModel cost;
  cost.node_subst_scale = 2.0;
  AttributedGraph p({"0"}, {AttributeValue{std::vector<double>{0.0, 0.0}}}, {}, {}, false);
  AttributedGraph q({"0"}, {AttributeValue{std::vector<double>{0.3, 0.4}}}, {}, {}, false);
  // Substitution at 2 * 0.5 = 1.0 still beats delete + insert = 2.0.
  CHECK(exact_ged(p, q, cost) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("edge operations are priced through vertex decisions") {
  CostModel cost;
  // Path 0-1-2 versus the same path missing its middle edge: one edge delete.
  AttributedGraph p2 = testsupport::path_graph(3);
  AttributedGraph broken = AttributedGraph::skeleton(3, {Edge{0, 1}});
  CHECK(exact_ged(p2, broken, cost) == doctest::Approx(cost.edge_delete));
  // Deleting a degree-2 vertex costs the vertex and both incident edges.
  AttributedGraph p_small = testsupport::path_graph(2);
  CHECK(exact_ged(p2, p_small, cost) <=
        doctest::Approx(cost.node_delete + 2.0 * cost.edge_delete));
}
