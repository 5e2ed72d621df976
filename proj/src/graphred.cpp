#include "nnrank/graphred.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "nnrank/error.hpp"
#include "text.hpp"

namespace nnr {

void Graph::add_edge(std::size_t u, std::size_t v) {
  if (u >= n_ || v >= n_) throw Error(ErrorCode::MalformedGraph, "vertex out of range");
  if (u == v) throw Error(ErrorCode::LoopEdge, "loop at vertex " + std::to_string(u));
  auto e = std::minmax(u, v);
  if (!edges_.emplace(e.first, e.second).second)
    throw Error(ErrorCode::MalformedGraph,
                "duplicate edge " + std::to_string(e.first) + " " + std::to_string(e.second));
  adj_[u][v] = adj_[v][u] = true;
}

bool Graph::is_clique(const std::vector<std::size_t>& vs) const {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (vs[i] == vs[j] || !adjacent(vs[i], vs[j])) return false;
  return true;
}

Graph parse_graph(std::string_view txt) {
  auto ls = text::lines(txt);
  if (ls.empty()) throw Error(ErrorCode::MalformedGraph, "empty graph file");
  auto head = text::split_ws(ls[0]);
  if (head.size() != 2 || head[0] != "graph") throw Error(ErrorCode::MalformedGraph, "expected 'graph <n>'");
  Graph g;
  try {
    g = Graph(text::parse_count(head[1], "vertex count"));
    for (std::size_t k = 1; k < ls.size(); ++k) {
      auto toks = text::split_ws(ls[k]);
      if (toks.size() != 2) throw Error(ErrorCode::MalformedGraph, "expected 'u v' on line " + std::to_string(k + 1));
      g.add_edge(text::parse_count(toks[0], "vertex"), text::parse_count(toks[1], "vertex"));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedFile) throw Error(ErrorCode::MalformedGraph, e.what());
    throw;
  }
  return g;
}

std::string format_graph(const Graph& g) {
  std::ostringstream os;
  os << "graph " << g.vertex_count() << '\n';
  for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
  return os.str();
}

std::string edge_var_name(std::size_t u, std::size_t v) {
  return "x_" + std::to_string(u) + "_" + std::to_string(v);
}

PartialMatrix build_partial_01(const Graph& g, bool symmetric) {
  const std::size_t n = g.vertex_count();
  PartialMatrix pm(n, n);
  for (std::size_t v = 0; v < n; ++v) pm.set_const(v, v, 1);
  for (const auto& [u, v] : g.edges()) {
    if (symmetric) {
      const auto name = edge_var_name(u, v);
      pm.declare_var(name, 1);
      pm.set_var(u, v, name);
      pm.set_var(v, u, name);
    } else {
      pm.declare_var(edge_var_name(u, v), 1);
      pm.declare_var(edge_var_name(v, u), 1);
      pm.set_var(u, v, edge_var_name(u, v));
      pm.set_var(v, u, edge_var_name(v, u));
    }
  }
  return pm;
}

namespace {

// Vertices are placed in index order; each joins a compatible open clique or
// opens a new one. Bound: open cliques plus a greedy independent set of the
// remaining vertices that fit no open clique.
class CoverSearch {
 public:
  explicit CoverSearch(const Graph& g) : g_(g), n_(g.vertex_count()) {}

  CliqueCover run() {
    // first-fit greedy gives the initial incumbent
    std::vector<std::vector<std::size_t>> greedy;
    for (std::size_t v = 0; v < n_; ++v) {
      bool placed = false;
      for (auto& c : greedy)
        if (fits(c, v)) {
          c.push_back(v);
          placed = true;
          break;
        }
      if (!placed) greedy.push_back({v});
    }
    best_ = greedy;
    current_.clear();
    branch(0);
    return CliqueCover{best_};
  }

 private:
  bool fits(const std::vector<std::size_t>& clique, std::size_t v) const {
    return std::all_of(clique.begin(), clique.end(), [&](std::size_t w) { return g_.adjacent(v, w); });
  }

  std::size_t lower_bound(std::size_t next) const {
    std::vector<std::size_t> forced;
    for (std::size_t v = next; v < n_; ++v) {
      if (std::any_of(current_.begin(), current_.end(), [&](const auto& c) { return fits(c, v); })) continue;
      if (std::none_of(forced.begin(), forced.end(), [&](std::size_t w) { return g_.adjacent(v, w); }))
        forced.push_back(v);
    }
    return current_.size() + forced.size();
  }

  void branch(std::size_t v) {
    if (v == n_) {
      if (current_.size() < best_.size()) best_ = current_;
      return;
    }
    if (lower_bound(v) >= best_.size()) return;
    for (std::size_t k = 0; k < current_.size(); ++k) {
      if (!fits(current_[k], v)) continue;
      current_[k].push_back(v);
      branch(v + 1);
      current_[k].pop_back();
    }
    if (current_.size() + 1 < best_.size()) {
      current_.push_back({v});
      branch(v + 1);
      current_.pop_back();
    }
  }

  const Graph& g_;
  std::size_t n_;
  std::vector<std::vector<std::size_t>> current_, best_;
};

}  // namespace

CliqueCoverResult clique_cover_number(const Graph& g, std::size_t limit) {
  if (g.vertex_count() > limit)
    throw Error(ErrorCode::TooLarge, std::to_string(g.vertex_count()) + " vertices exceed the limit of " +
                                         std::to_string(limit));
  CliqueCover cover = CoverSearch(g).run();
  return {cover.size(), std::move(cover)};
}

CliqueCover disjointify(const CliqueCover& cover, std::size_t n) {
  std::vector<std::size_t> owner(n, cover.size());
  for (std::size_t k = cover.size(); k-- > 0;)
    for (auto v : cover.cliques[k])
      if (v < n) owner[v] = k;
  CliqueCover out;
  std::vector<std::vector<std::size_t>> sets(cover.size());
  for (std::size_t v = 0; v < n; ++v)
    if (owner[v] < cover.size()) sets[owner[v]].push_back(v);
  for (auto& s : sets)
    if (!s.empty()) out.cliques.push_back(std::move(s));
  return out;
}

Completion cover_to_completion(const Graph& g, const CliqueCover& cover) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> covered(n, false);
  for (const auto& c : cover.cliques) {
    for (auto v : c) {
      if (v >= n) throw Error(ErrorCode::InvalidCover, "vertex " + std::to_string(v) + " out of range");
      covered[v] = true;
    }
    std::vector<std::size_t> sorted = c;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (!g.is_clique(sorted)) throw Error(ErrorCode::InvalidCover, "a cover set is not a clique");
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end())
    throw Error(ErrorCode::InvalidCover, "cover misses a vertex");

  const CliqueCover disjoint = disjointify(cover, n);
  Completion out{ExactMatrix(n, n), NNFactorization(n, n)};
  for (const auto& c : disjoint.cliques) {
    std::vector<Scalar> ind(n, Scalar(0));
    for (auto v : c) ind[v] = 1;
    for (auto u : c)
      for (auto v : c) out.matrix.set(u, v, 1);
    out.factorization.add_term(ind, ind);
  }
  return out;
}

CliqueCover extract_cliques(const NNFactorization& f, const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (f.rows() != n || f.cols() != n) throw Error(ErrorCode::DimMismatch, "factorization is not n x n");
  CliqueCover out;
  std::vector<bool> covered(n, false);
  for (const auto& t : f.terms()) {
    std::vector<std::size_t> set;
    for (std::size_t v = 0; v < n; ++v)
      if (quad_sign(t.u[v] * t.v[v]) > 0) set.push_back(v);
    for (std::size_t i = 0; i < set.size(); ++i)
      for (std::size_t j = i + 1; j < set.size(); ++j)
        if (!g.adjacent(set[i], set[j]))
          throw NotACliqueError(set[i], set[j], "vertices " + std::to_string(set[i]) + " and " +
                                                    std::to_string(set[j]) + " share a term but are not adjacent");
    for (auto v : set) covered[v] = true;
    if (!set.empty()) out.cliques.push_back(std::move(set));
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!covered[v]) throw Error(ErrorCode::NotACover, "vertex " + std::to_string(v) + " is in no term");
  return out;
}

ReducedGraph reduce_graph(const Graph& g, std::size_t limit) {
  const auto cc = clique_cover_number(g, limit);
  PartialMatrix pm = build_partial_01(g);
  ReducedGraph out;
  out.trace.initial_rows = pm.rows();
  out.trace.initial_cols = pm.cols();
  std::vector<std::string> names;
  for (const auto& [name, s] : pm.variables()) names.push_back(name);  // map order is lexicographic
  for (const auto& name : names) {
    auto [next, step] = eliminate_variable(pm, name);
    out.trace.steps.push_back(std::move(step));
    pm = std::move(next);
  }
  out.matrix = pm.to_matrix();
  out.predicted_rank = cc.number + 4 * names.size();
  return out;
}

NNFactorization certify_reduction_ub(const Graph& g, std::size_t limit) {
  const auto cc = clique_cover_number(g, limit);
  const ReducedGraph red = reduce_graph(g, limit);
  Completion comp = cover_to_completion(g, cc.cover);
  ExactMatrix matrix = std::move(comp.matrix);
  NNFactorization f = std::move(comp.factorization);
  for (const auto& step : red.trace.steps) {
    const Scalar xi = matrix(step.pivot_row, step.var_cols.front());
    Lift lifted = lift_factorization(matrix, f, step, xi);
    matrix = std::move(lifted.matrix);
    f = std::move(lifted.factorization);
  }
  if (!(matrix == red.matrix))
    throw Error(ErrorCode::ValidationFailure, "lifted completion differs from the reduced matrix");
  return f;
}

}  // namespace nnr
