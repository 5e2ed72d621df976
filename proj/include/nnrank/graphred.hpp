#pragma once

// Reduction from clique cover to nonnegative rank: graphs, the partial 0-1
// matrix X(G), clique covers and their completions, clique extraction from a
// factorization, and the graph -> constant matrix pipeline.

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nnrank/error.hpp"
#include "nnrank/gadgets.hpp"
#include "nnrank/matrix.hpp"

namespace nnr {

class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), adj_(n, std::vector<bool>(n, false)) {}

  std::size_t vertex_count() const { return n_; }
  const std::set<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  bool adjacent(std::size_t u, std::size_t v) const { return adj_[u][v]; }

  // Throws LoopEdge, MalformedGraph (out of range or duplicate edge).
  void add_edge(std::size_t u, std::size_t v);
  bool is_clique(const std::vector<std::size_t>& vertices) const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  std::size_t n_ = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges_;  // u < v
  std::vector<std::vector<bool>> adj_;
};

struct CliqueCover {
  std::vector<std::vector<std::size_t>> cliques;
  std::size_t size() const { return cliques.size(); }
  friend bool operator==(const CliqueCover&, const CliqueCover&) = default;
};

struct CliqueCoverResult {
  std::size_t number = 0;
  CliqueCover cover;
};

struct ReducedGraph {
  ExactMatrix matrix;
  GadgetTrace trace;
  std::size_t predicted_rank = 0;
};

class NotACliqueError : public Error {
 public:
  NotACliqueError(std::size_t u, std::size_t v, const std::string& what)
      : Error(ErrorCode::NotAClique, what), u_(u), v_(v) {}
  std::pair<std::size_t, std::size_t> witness() const { return {u_, v_}; }

 private:
  std::size_t u_, v_;
};

inline constexpr std::size_t kDefaultGraphLimit = 16;

// graph <n>
// <u v>   (one edge per line)
Graph parse_graph(std::string_view text);
std::string format_graph(const Graph& g);

std::string edge_var_name(std::size_t u, std::size_t v);

// Diagonal 1, x_u_v at (u,v) for adjacent u, v, zero elsewhere; every
// variable ranges over [0, 1] (s = 1). With `symmetric`, (u,v) and (v,u)
// share one variable x_min_max.
PartialMatrix build_partial_01(const Graph& g, bool symmetric = false);

// Exact minimum clique cover by branch and bound. Throws TooLarge if
// n > limit.
CliqueCoverResult clique_cover_number(const Graph& g, std::size_t limit = kDefaultGraphLimit);

// Each vertex goes to the lowest-index clique containing it; empty sets dropped.
CliqueCover disjointify(const CliqueCover& cover, std::size_t n);

struct Completion {
  ExactMatrix matrix;
  NNFactorization factorization;
};

// Throws InvalidCover.
Completion cover_to_completion(const Graph& g, const CliqueCover& cover);

// V^l = { v : (u_l)_v * (v_l)_v > 0 }, empty sets dropped. Throws
// NotACliqueError (with witness) or NotACover.
CliqueCover extract_cliques(const NNFactorization& f, const Graph& g);

ReducedGraph reduce_graph(const Graph& g, std::size_t limit = kDefaultGraphLimit);

// A factorization of reduce_graph(g).matrix with cc(G) + 4t terms.
NNFactorization certify_reduction_ub(const Graph& g, std::size_t limit = kDefaultGraphLimit);

}  // namespace nnr
