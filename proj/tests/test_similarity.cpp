#include <catch2/catch.hpp>

#include "netalign/graph.hpp"
#include "netalign/similarity.hpp"

using namespace netalign;

namespace {
Graph query_graph() { return load_edge_list("q1 q2\nq2 q3\nq3 q1"); }
Graph target_graph() { return load_edge_list("t1 t2\nt2 t3\nt3 t1"); }
}  // namespace

TEST_CASE("load_similarity reads triples", "[net-io]") {
  const auto q = query_graph();
  const auto t = target_graph();
  const auto sim = load_similarity("q1 t1 2.0\nq1 t2 1.0", q, t);
  REQUIRE(sim.size() == 2);
  CHECK(sim.total() == Approx(3.0));
  CHECK(sim.score(*q.index_of("q1"), *t.index_of("t1")) == 2.0);
  CHECK(sim.score(*q.index_of("q2"), *t.index_of("t1")) == 0.0);
}

TEST_CASE("unknown labels name the offending side", "[net-io]") {
  const auto q = query_graph();
  const auto t = target_graph();
  REQUIRE_THROWS_WITH(load_similarity("q1 tX 1.0", q, t),
                      Catch::Contains("unknown target label \"tX\""));
  REQUIRE_THROWS_WITH(load_similarity("qX t1 1.0", q, t),
                      Catch::Contains("unknown query label \"qX\""));
}

TEST_CASE("empty similarity text is accepted", "[net-io]") {
  const auto sim = load_similarity("", query_graph(), target_graph());
  CHECK(sim.empty());
  CHECK(sim.total() == 0.0);
}

TEST_CASE("negative or non-finite scores are rejected", "[net-io]") {
  const auto q = query_graph();
  const auto t = target_graph();
  CHECK_THROWS_AS(load_similarity("q1 t1 -0.5", q, t), validation_error);
  CHECK_THROWS_AS(load_similarity("q1 t1 nan", q, t), validation_error);
}

TEST_CASE("malformed similarity lines carry the line number", "[net-io]") {
  const auto q = query_graph();
  const auto t = target_graph();
  try {
    load_similarity("q1 t1 1.0\nq1 t2\n", q, t);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_similarity("q1 t1 abc", q, t), parse_error);
}

TEST_CASE("duplicate entries keep the larger score", "[net-io]") {
  const auto sim =
      load_similarity("q1 t1 1.0\nq1 t1 3.0\nq1 t1 2.0", query_graph(), target_graph());
  REQUIRE(sim.size() == 1);
  CHECK(sim.total() == 3.0);
}
