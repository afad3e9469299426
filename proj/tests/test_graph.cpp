#include <random>
#include <sstream>

#include "dbnad/dag.hpp"
#include "dbnad/error.hpp"
#include "dbnad/graph_metrics.hpp"
#include "doctest.h"

using namespace dbnad;

TEST_SUITE("graph") {
  TEST_CASE("from_edges rejects cycles, self-loops and duplicates") {
    const std::vector<Edge> cycle{{0, 1}, {1, 2}, {2, 0}};
    CHECK_THROWS_AS(Dag::from_edges(3, cycle), StructuralError);
    const std::vector<Edge> loop{{1, 1}};
    CHECK_THROWS_AS(Dag::from_edges(3, loop), StructuralError);
    const std::vector<Edge> dup{{0, 1}, {0, 1}};
    CHECK_THROWS_AS(Dag::from_edges(3, dup), StructuralError);
    const std::vector<Edge> range{{0, 3}};
    CHECK_THROWS_AS(Dag::from_edges(3, range), StructuralError);
    CHECK_FALSE(is_dag(3, cycle));
  }

  TEST_CASE("add_edge refuses an edge closing a cycle") {
    Dag g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    CHECK_FALSE(g.can_add(2, 0));
    CHECK_THROWS_AS(g.add_edge(2, 0), StructuralError);
    CHECK(g.edge_count() == 2);
    CHECK(g.reaches(0, 2));
    CHECK_FALSE(g.reaches(2, 0));
    g.remove_edge(1, 2);
    CHECK(g.can_add(2, 0));
    CHECK_THROWS_AS(g.remove_edge(1, 2), StructuralError);
  }

  TEST_CASE("parents and edges are sorted") {
    const std::vector<Edge> e{{3, 1}, {0, 1}, {2, 1}};
    const Dag g = Dag::from_edges(4, e);
    CHECK(g.parents(1) == std::vector<int>{0, 2, 3});
    const auto edges = g.edges();
    CHECK(edges.front() == Edge{0, 1});
    CHECK(edges.back() == Edge{3, 1});
  }

  TEST_CASE("topological order prefers the more volatile available node") {
    const std::vector<Edge> e{{0, 2}};
    const Dag g = Dag::from_edges(3, e);
    const std::vector<double> vol{0.1, 0.5, 0.3};
    // 1 and 0 are sources; node 1 is more volatile and goes first.
    CHECK(topological_order(g, vol) == std::vector<int>{1, 0, 2});
    const std::vector<double> tie{1.0, 1.0, 1.0};
    CHECK(topological_order(g, tie) == std::vector<int>{0, 1, 2});
  }

  TEST_CASE("max_changes counts edges and unconnected pairs") {
    const std::vector<Edge> e{{0, 1}, {1, 2}};
    const auto caps = max_changes(Dag::from_edges(4, e));
    CHECK(caps.d_max == 2);
    CHECK(caps.a_max == 4);
  }

  TEST_CASE("edge-list text round trip") {
    const std::vector<Edge> e{{0, 2}, {1, 2}, {3, 0}};
    const Dag g = Dag::from_edges(4, e);
    const std::string text = to_edge_list_string(g);
    CHECK(text.rfind("n=4", 0) == 0);
    std::istringstream in(text);
    CHECK(read_edge_list(in) == g);
    std::istringstream bad("n=3\n1 2\n2 3\n3 1\n");
    CHECK_THROWS_AS(read_edge_list(bad), DataError);
  }

  TEST_CASE("hash distinguishes graphs and is stable for equal graphs") {
    const std::vector<Edge> a{{0, 1}}, b{{1, 0}};
    CHECK(Dag::from_edges(2, a).hash() == Dag::from_edges(2, a).hash());
    CHECK(Dag::from_edges(2, a).hash() != Dag::from_edges(2, b).hash());
  }

  TEST_CASE("network distance counts differing directed cells") {
    const std::vector<Edge> a{{0, 1}, {1, 2}}, b{{1, 0}, {1, 2}};
    CHECK(network_distance(Dag::from_edges(3, a), Dag::from_edges(3, b)) == 2);
    CHECK(network_distance(Dag::from_edges(3, a), Dag::from_edges(3, a)) == 0);
    CHECK_THROWS_AS(network_distance(Dag(2), Dag(3)), StructuralError);
  }

  TEST_CASE("network statistics") {
    const auto empty = network_stats(Dag(4));
    CHECK(empty.density == 0.0);
    CHECK(empty.clustering == 0.0);
    const std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
    const auto t = network_stats(Dag::from_edges(3, tri));
    CHECK(t.clustering == doctest::Approx(1.0));
    CHECK(t.density == doctest::Approx(0.5));
    // A path has one connected triple and no triangle.
    const std::vector<Edge> path{{0, 1}, {1, 2}};
    CHECK(network_stats(Dag::from_edges(3, path)).clustering == 0.0);
  }

  TEST_CASE("auroc against a brute-force pair count") {
    const std::vector<double> s{0.9, 0.8, 0.1, 0.2};
    const std::vector<int> y{1, 0, 0, 1};
    // Positives 0.9 and 0.2 against negatives 0.8 and 0.1: 3 of 4 pairs won.
    CHECK(auroc(s, y).value == doctest::Approx(0.75));
    const std::vector<double> perfect{0.9, 0.1};
    const std::vector<int> py{1, 0};
    CHECK(auroc(perfect, py).value == 1.0);
    const std::vector<double> tied{0.5, 0.5};
    CHECK(auroc(tied, py).value == 0.5);
    const std::vector<int> ones{1, 1};
    const auto degenerate = auroc(tied, ones);
    CHECK(degenerate.degenerate);
    CHECK(degenerate.value == 0.5);
    CHECK_THROWS(auroc(std::vector<double>{}, std::vector<int>{}));
  }

  TEST_CASE("auroc of complementary scores sums to one") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> s(30), c(30);
      std::vector<int> y(30);
      for (int i = 0; i < 30; ++i) {
        s[i] = u(rng);
        c[i] = 1.0 - s[i];
        y[i] = i % 3 == 0;
      }
      CHECK(auroc(s, y).value + auroc(c, y).value == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("matrix auroc ranks directed pairs") {
    const std::vector<Edge> e{{0, 1}};
    const Dag truth = Dag::from_edges(3, e);
    Matrix scores = Matrix::Zero(3, 3);
    scores(0, 1) = 1.0;
    CHECK(auroc(scores, truth).value == 1.0);
    scores(0, 1) = 0.0;
    scores(1, 0) = 1.0;
    CHECK(auroc(scores, truth).value < 0.5);
  }
}
