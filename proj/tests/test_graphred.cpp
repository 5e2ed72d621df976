#include <doctest.h>

#include <random>

#include "nnrank/graphred.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nnr;
using testing::code_of;

namespace {

Graph cycle(std::size_t n) {
  Graph g(n);
  for (std::size_t v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

Graph complete(std::size_t n) {
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("graph files") {
  const Graph tri = parse_graph("graph 3\n0 1\n1 2\n0 2\n");
  CHECK(tri == complete(3));
  CHECK(parse_graph(format_graph(cycle(5))) == cycle(5));
  CHECK(parse_graph("graph 3\n2 1\n") == parse_graph("graph 3\n1 2\n"));
  CHECK(code_of([] { parse_graph("graph 2\n0 0\n"); }) == ErrorCode::LoopEdge);
  CHECK(code_of([] { parse_graph("graph 2\n0 1\n1 0\n"); }) == ErrorCode::MalformedGraph);
  CHECK(code_of([] { parse_graph("graph 2\n0 2\n"); }) == ErrorCode::MalformedGraph);
  CHECK(code_of([] { parse_graph("graph 2\n0\n"); }) == ErrorCode::MalformedGraph);
  CHECK(code_of([] { parse_graph("grph 2\n"); }) == ErrorCode::MalformedGraph);
  CHECK(parse_graph("graph 0\n").vertex_count() == 0);
}

TEST_CASE("X(G)") {
  const PartialMatrix pm = build_partial_01(cycle(4));
  CHECK(pm.variables().size() == 8);
  for (std::size_t v = 0; v < 4; ++v) CHECK(std::get<Scalar>(pm(v, v)) == Scalar(1));
  CHECK(std::get<VarEntry>(pm(0, 1)).name == edge_var_name(0, 1));
  CHECK(std::get<VarEntry>(pm(1, 0)).name == edge_var_name(1, 0));
  CHECK(std::get<Scalar>(pm(0, 2)) == Scalar(0));
  for (const auto& [name, s] : pm.variables()) CHECK(s == Scalar(1));

  const PartialMatrix sym = build_partial_01(cycle(4), true);
  CHECK(sym.variables().size() == 4);
  CHECK(std::get<VarEntry>(sym(1, 0)).name == std::get<VarEntry>(sym(0, 1)).name);
}

TEST_CASE("clique cover number examples") {
  CHECK(clique_cover_number(complete(3)).number == 1);
  CHECK(clique_cover_number(cycle(4)).number == 2);
  Graph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  CHECK(clique_cover_number(path).number == 2);
  CHECK(clique_cover_number(Graph(4)).number == 4);
  CHECK(clique_cover_number(Graph(0)).number == 0);
  CHECK(clique_cover_number(cycle(5)).number == 3);
  CHECK(code_of([] { clique_cover_number(Graph(17)); }) == ErrorCode::TooLarge);
  CHECK(clique_cover_number(Graph(17), 17).number == 17);
}

TEST_CASE("clique cover number matches set-partition brute force") {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = 1 + it % 7;
    const Graph g = oracle::random_graph(rng, n, 0.2 + 0.1 * (it % 6));
    const CliqueCoverResult res = clique_cover_number(g);
    CHECK(res.number == oracle::clique_cover_brute(g));
    CHECK(res.cover.size() == res.number);
    std::vector<bool> seen(n, false);
    for (const auto& c : res.cover.cliques) {
      CHECK(g.is_clique(c));
      for (auto v : c) seen[v] = true;
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
  }
}

TEST_CASE("disjointify") {
  const CliqueCover c{{{0, 1, 2}, {2, 3}, {1}}};
  const CliqueCover d = disjointify(c, 4);
  REQUIRE(d.size() == 2);
  CHECK(d.cliques[0] == std::vector<std::size_t>{0, 1, 2});
  CHECK(d.cliques[1] == std::vector<std::size_t>{3});
}

TEST_CASE("cover_to_completion and extract_cliques") {
  const Graph g = cycle(4);
  const CliqueCover cover{{{0, 1}, {2, 3}}};
  const Completion comp = cover_to_completion(g, cover);
  CHECK(comp.factorization.size() == 2);
  CHECK(validate_factorization(comp.matrix, comp.factorization).passed());
  const PartialMatrix pm = build_partial_01(g);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (const auto* c = std::get_if<Scalar>(&pm(i, j))) CHECK(comp.matrix(i, j) == *c);
      else CHECK((comp.matrix(i, j) == Scalar(0) || comp.matrix(i, j) == Scalar(1)));
    }
  CHECK(extract_cliques(comp.factorization, g) == cover);

  CHECK(code_of([&] { cover_to_completion(g, CliqueCover{{{0, 2}, {1, 3}}}); }) == ErrorCode::InvalidCover);
  CHECK(code_of([&] { cover_to_completion(g, CliqueCover{{{0, 1}}}); }) == ErrorCode::InvalidCover);

  Graph p(3);
  p.add_edge(0, 1);
  p.add_edge(1, 2);
  NNFactorization bad(3, 3);
  bad.add_term({1, 0, 1}, {1, 0, 1});
  bad.add_term({0, 1, 0}, {0, 1, 0});
  try {
    extract_cliques(bad, p);
    FAIL("expected NotAClique");
  } catch (const NotACliqueError& e) {
    CHECK(e.code() == ErrorCode::NotAClique);
    CHECK(e.witness() == std::pair<std::size_t, std::size_t>{0, 2});
  }
  NNFactorization partial(3, 3);
  partial.add_term({1, 1, 0}, {1, 1, 0});
  CHECK(code_of([&] { extract_cliques(partial, p); }) == ErrorCode::NotACover);
}

TEST_CASE("round trip and size match on all graphs with at most 5 vertices") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const std::size_t pairs = n * (n - 1) / 2;
    for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
      const Graph g = oracle::graph_from_mask(n, mask);
      const CliqueCoverResult res = clique_cover_number(g);
      const Completion comp = cover_to_completion(g, res.cover);
      CHECK(comp.factorization.size() == res.number);
      CHECK(extract_cliques(comp.factorization, g) == disjointify(res.cover, n));
    }
  }
}

TEST_CASE("valid completion factorizations need at least cc(G) terms") {
  // every completion factorization built from an arbitrary cover extracts to a
  // cover of at most that many cliques, which cc(G) bounds from below
  std::mt19937_64 rng(13);
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 2 + it % 5;
    const Graph g = oracle::random_graph(rng, n, 0.5);
    CliqueCover cover;
    for (std::size_t v = 0; v < n; ++v) cover.cliques.push_back({v});
    for (const auto& [u, v] : g.edges())
      if (rng() % 2) cover.cliques.push_back({u, v});
    const Completion comp = cover_to_completion(g, cover);
    const CliqueCover back = extract_cliques(comp.factorization, g);
    CHECK(back.size() <= comp.factorization.size());
    CHECK(comp.factorization.size() >= clique_cover_number(g).number);
  }
}

TEST_CASE("reduce_graph and certify_reduction_ub") {
  Graph k2(2);
  k2.add_edge(0, 1);
  const ReducedGraph r2 = reduce_graph(k2);
  CHECK(r2.matrix.rows() == 10);
  CHECK(r2.matrix.cols() == 10);
  CHECK(r2.trace.steps.size() == 2);
  CHECK(r2.predicted_rank == 9);
  const NNFactorization f2 = certify_reduction_ub(k2);
  CHECK(f2.size() == 9);
  CHECK(validate_factorization(r2.matrix, f2).passed());

  const ReducedGraph r4 = reduce_graph(cycle(4));
  CHECK(r4.matrix.rows() == 36);
  CHECK(r4.predicted_rank == 34);
  const NNFactorization f4 = certify_reduction_ub(cycle(4));
  CHECK(f4.size() == 34);
  CHECK(validate_factorization(r4.matrix, f4).passed());
  CHECK(replay_trace(build_partial_01(cycle(4)), r4.trace) == r4.matrix);

  // variables are eliminated in name order
  for (std::size_t i = 1; i < r4.trace.steps.size(); ++i)
    CHECK(r4.trace.steps[i - 1].var < r4.trace.steps[i].var);

  const ReducedGraph empty = reduce_graph(Graph(3));
  CHECK(empty.matrix == ExactMatrix::identity(3));
  CHECK(empty.predicted_rank == 3);
}
