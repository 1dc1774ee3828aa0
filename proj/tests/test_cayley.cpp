#include <doctest.h>

#include <set>

#include "eulerdd/cayley.hpp"
#include "eulerdd/error.hpp"

using namespace eulerdd;

namespace {

RepresentedGroup pauli1() { return close_group(std::vector<Matrix>{sigma_x(), sigma_z()}, 16); }

RepresentedGroup s3() {
  const Matrix s12 = swap_gate(0, 1, 3);
  return close_group(std::vector<Matrix>{s12, s12 * swap_gate(1, 2, 3)}, 16);
}

}  // namespace

TEST_CASE("Cayley graph edges") {
  const auto g = s3();
  const auto graph = build_cayley(g.group);
  CHECK(graph.vertex_count == 6);
  CHECK(graph.colors == 2);
  REQUIRE(graph.edges.size() == 12);
  for (std::size_t v = 0; v < 6; ++v) {
    for (std::size_t c = 0; c < 2; ++c) {
      const auto& e = graph.departing(v, c);
      CHECK(e.from == v);
      CHECK(e.color == c);
      CHECK(e.to == g.group.multiply(g.group.generators[c], v));
    }
  }
  // every vertex has in-degree = out-degree = number of colours
  std::vector<int> in(6, 0);
  for (const auto& e : graph.edges) ++in[e.to];
  for (int d : in) CHECK(d == 2);
}

TEST_CASE("Hierholzer cycle lengths are |G||Gamma|") {
  CHECK(eulerian_cycle(build_cayley(close_group(std::vector<Matrix>{sigma_x()}, 4).group)).length() == 2);
  CHECK(eulerian_cycle(build_cayley(pauli1().group)).length() == 8);
  CHECK(eulerian_cycle(build_cayley(s3().group)).length() == 12);
  const auto coll = close_group(std::vector<Matrix>{pauli_string("XX"), pauli_string("ZZ")}, 8);
  CHECK(eulerian_cycle(build_cayley(coll.group)).length() == 8);
}

TEST_CASE("Hierholzer output is a valid Eulerian cycle from any start") {
  const auto graph = build_cayley(s3().group);
  for (std::size_t start = 0; start < graph.vertex_count; ++start) {
    const auto path = eulerian_cycle(graph, start);
    CHECK(path.start == start);
    const auto vs = path.vertices(graph);
    CHECK(vs.front() == start);
    CHECK(vs.back() == start);
    std::set<std::pair<std::size_t, std::size_t>> used;
    for (std::size_t k = 0; k < path.length(); ++k) used.insert({vs[k], path.colors[k]});
    CHECK(used.size() == graph.edges.size());
  }
  CHECK(validate_path(graph, eulerian_cycle(graph).colors).valid);
}

TEST_CASE("reference paths are Eulerian") {
  const auto p = validate_path(build_cayley(pauli1().group), parse_path("1,2,1,2,2,1,2,1"));
  CHECK(p.valid);
  CHECK(p.diagnostic == "ok");
  CHECK(validate_path(build_cayley(s3().group), parse_path("2,2,2,1,2,1,1,2,1,1,2,1")).valid);
  const auto coll = close_group(std::vector<Matrix>{pauli_string("XXX"), pauli_string("ZZZ")}, 8);
  CHECK(validate_path(build_cayley(coll.group), parse_path("1,2,1,2,2,1,2,1")).valid);
}

TEST_CASE("path diagnostics") {
  const auto graph = build_cayley(pauli1().group);
  auto d = [&](const char* text) { return validate_path(graph, parse_path(text)).diagnostic; };
  CHECK(d("1,1,2,2").find("edges unused") != std::string::npos);
  CHECK(d("1,1,1").find("edge reused") != std::string::npos);
  CHECK(d("1,2,1,2,2,1,2") == "edges unused");
  CHECK(validate_path(graph, {0, 5}).diagnostic.find("out of range") != std::string::npos);
  CHECK_FALSE(validate_path(graph, {}).valid);
}

TEST_CASE("path text format is 1-based") {
  CHECK(format_path({0, 1, 0}) == "1,2,1");
  CHECK(parse_path(" 2, 1 ,2") == std::vector<std::size_t>{1, 0, 1});
  CHECK(parse_path(format_path({3, 0, 2})) == std::vector<std::size_t>{3, 0, 2});
  CHECK_THROWS_AS(parse_path("0,1"), Error);
  CHECK_THROWS_AS(parse_path("1,x"), Error);
}

TEST_CASE("graphs without an Eulerian cycle are rejected") {
  CayleyGraph broken;
  broken.vertex_count = 2;
  broken.colors = 1;
  broken.edges = {{0, 1, 0}, {1, 1, 0}};
  try {
    eulerian_cycle(broken);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoEulerianCycle);
  }
}
