#include <catch2/catch.hpp>

#include <algorithm>
#include <set>
#include <string>

#include "netalign/graph.hpp"
#include "netalign/rng.hpp"
#include "netalign/synth.hpp"

using namespace netalign;

TEST_CASE("load_edge_list parses a path graph", "[net-io]") {
  const auto g = load_edge_list("a b\nb c");
  REQUIRE(g.node_count() == 3);
  REQUIRE(g.edge_count() == 2);
  CHECK(g.degree(*g.index_of("a")) == 1);
  CHECK(g.degree(*g.index_of("b")) == 2);
  CHECK(g.degree(*g.index_of("c")) == 1);
}

TEST_CASE("duplicate and reversed edges collapse", "[net-io]") {
  const auto g = load_edge_list("a b\nb a\na b");
  REQUIRE(g.node_count() == 2);
  REQUIRE(g.edge_count() == 1);
}

TEST_CASE("self-loops are rejected with the node named", "[net-io]") {
  REQUIRE_THROWS_MATCHES(load_edge_list("a a"), validation_error,
                         Catch::Matchers::Message("self-loop at node \"a\" (line 1)"));
}

TEST_CASE("malformed lines report their line number", "[net-io]") {
  try {
    load_edge_list("a b\nx\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_edge_list("a b c"), parse_error);
}

TEST_CASE("comments and blank lines are skipped; first-appearance indexing",
          "[net-io]") {
  const auto g = load_edge_list("# header\n\n  b a\n#tail\na c\n");
  REQUIRE(g.node_count() == 3);
  CHECK(g.label(0) == "b");
  CHECK(g.label(1) == "a");
  CHECK(g.label(2) == "c");
}

TEST_CASE("degree sum is twice the edge count", "[net-io][property]") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = make_planted({1, static_cast<std::size_t>(10 + trial), 0.3, 49.0, 0.0, rng.next()}).target;
    std::size_t degsum = 0;
    for (std::uint32_t v = 0; v < g.node_count(); ++v) degsum += g.degree(v);
    CHECK(degsum == 2 * g.edge_count());
  }
}

TEST_CASE("edge list round-trips through canonical text", "[net-io][property]") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = make_planted({1, static_cast<std::size_t>(8 + trial), 0.25, 49.0, 0.0, rng.next()}).target;
    const auto text = to_edge_list(g);
    const auto back = load_edge_list(text);
    REQUIRE(back.node_count() == g.node_count());
    REQUIRE(back.edge_count() == g.edge_count());
    // identical adjacency as label pairs
    auto edge_set = [](const Graph& graph) {
      std::set<std::pair<std::string, std::string>> s;
      for (std::uint32_t u = 0; u < graph.node_count(); ++u) {
        for (auto v : graph.neighbors(u)) {
          s.insert({std::min(graph.label(u), graph.label(v)),
                    std::max(graph.label(u), graph.label(v))});
        }
      }
      return s;
    };
    CHECK(edge_set(back) == edge_set(g));
    CHECK(to_edge_list(back) == text);
  }
}

TEST_CASE("validate_pair on two triangles", "[net-io]") {
  const auto k3 = load_edge_list("a b\nb c\nc a");
  const auto r = validate_pair(k3, k3);
  CHECK(r.query.connected);
  CHECK(r.target.connected);
  CHECK_FALSE(r.query.bipartite);
  CHECK_FALSE(r.target.bipartite);
  CHECK(r.query.isolated.empty());
}

TEST_CASE("validate_pair flags bipartite path graphs", "[net-io]") {
  const auto p2 = load_edge_list("a b");
  const auto r = validate_pair(p2, p2);
  CHECK(r.query.bipartite);
  CHECK(r.target.bipartite);
}

TEST_CASE("isolated declared node breaks connectivity", "[net-io]") {
  const Graph g({"a", "b", "c"}, {{0, 1}});
  const auto c = check_graph(g);
  CHECK_FALSE(c.connected);
  REQUIRE(c.isolated.size() == 1);
  CHECK(c.isolated[0] == "c");
}

TEST_CASE("validate_pair rejects empty graphs", "[net-io]") {
  const Graph empty({}, {});
  const auto k3 = load_edge_list("a b\nb c\nc a");
  CHECK_THROWS_AS(validate_pair(empty, k3), validation_error);
}

TEST_CASE("duplicate labels are rejected", "[net-io]") {
  CHECK_THROWS_AS(Graph({"a", "a"}, {}), validation_error);
}

namespace {

// Brute-force 2-colorability by enumerating all colorings.
bool brute_bipartite(const Graph& g) {
  const std::size_t n = g.node_count();
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    bool proper = true;
    for (std::uint32_t u = 0; u < n && proper; ++u) {
      for (auto v : g.neighbors(u)) {
        if (((mask >> u) & 1) == ((mask >> v) & 1)) {
          proper = false;
          break;
        }
      }
    }
    if (proper) return true;
  }
  return n == 0;
}

}  // namespace

TEST_CASE("bipartiteness agrees with brute-force 2-coloring", "[net-io][property]") {
  Rng rng(13);
  int odd_cycles = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.index(9);  // up to 10 nodes
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = "v" + std::to_string(i);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t v = u + 1; v < n; ++v) {
        if (rng.real01() < 0.35) edges.emplace_back(u, v);
      }
    }
    const Graph g(std::move(labels), std::move(edges));
    const bool brute = brute_bipartite(g);
    CHECK(check_graph(g).bipartite == brute);
    if (!brute) ++odd_cycles;  // an odd cycle exists exactly when not 2-colorable
  }
  CHECK(odd_cycles > 0);
}
