#include "nnrank/bounds.hpp"

#include <mpfr.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "nnrank/error.hpp"

namespace nnr {

SupportPattern SupportPattern::of(const ExactMatrix& m) {
  SupportPattern p{m.rows(), m.cols(), std::vector<bool>(m.rows() * m.cols())};
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) p.bits[i * m.cols() + j] = quad_sign(m(i, j)) != 0;
  return p;
}

std::size_t SupportPattern::count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true)); }

SupportPattern SupportPattern::transpose() const {
  SupportPattern t{cols, rows, std::vector<bool>(bits.size())};
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t.bits[j * rows + i] = at(i, j);
  return t;
}

namespace {

class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(std::size_t n) : words_((n + 63) / 64, 0) {}
  void set(std::size_t k) { words_[k / 64] |= std::uint64_t{1} << (k % 64); }
  bool test(std::size_t k) const { return (words_[k / 64] >> (k % 64)) & 1U; }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  std::size_t first() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return words_.size() * 64;
  }
  std::size_t overlap(const CellSet& o) const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) c += static_cast<std::size_t>(std::popcount(words_[w] & o.words_[w]));
    return c;
  }
  CellSet minus(const CellSet& o) const {
    CellSet out = *this;
    for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] &= ~o.words_[w];
    return out;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

class RectangleSearch {
 public:
  RectangleSearch(const SupportPattern& p, std::size_t budget) : p_(p), budget_(budget) {
    std::vector<std::uint64_t> row_masks(p.rows, 0);
    for (std::size_t i = 0; i < p.rows; ++i)
      for (std::size_t j = 0; j < p.cols; ++j)
        if (p.at(i, j)) {
          row_masks[i] |= std::uint64_t{1} << j;
          cell_id_.emplace_back(i, j);
        }
    // closed column sets = intersections of nonempty families of row supports
    std::set<std::uint64_t> closed;
    for (auto rm : row_masks) {
      if (!rm) continue;
      std::vector<std::uint64_t> add{rm};
      for (auto c : closed)
        if (c & rm) add.push_back(c & rm);
      closed.insert(add.begin(), add.end());
    }
    for (auto colset : closed) {
      CellSet cells(cell_id_.size());
      for (std::size_t k = 0; k < cell_id_.size(); ++k) {
        const auto [i, j] = cell_id_[k];
        if (((colset >> j) & 1U) && (row_masks[i] & colset) == colset) cells.set(k);
      }
      rects_.push_back(std::move(cells));
    }
    containing_.resize(cell_id_.size());
    for (std::size_t r = 0; r < rects_.size(); ++r)
      rects_[r].for_each([&](std::size_t k) { containing_[k].push_back(r); });
  }

  RectangleCover run() {
    RectangleCover out;
    out.maximal_rectangles = rects_.size();
    CellSet all(cell_id_.size());
    for (std::size_t k = 0; k < cell_id_.size(); ++k) all.set(k);
    best_ = greedy(all);
    const std::size_t root_lb = fooling(all);
    search(all, 0);
    out.nodes = nodes_;
    out.upper = best_;
    out.exact = !aborted_;
    out.lower = aborted_ ? root_lb : best_;
    return out;
  }

 private:
  std::size_t greedy(CellSet uncovered) const {
    std::size_t used = 0;
    while (!uncovered.empty()) {
      std::size_t pick = 0, gain = 0;
      for (std::size_t r = 0; r < rects_.size(); ++r)
        if (auto g = rects_[r].overlap(uncovered); g > gain) {
          gain = g;
          pick = r;
        }
      uncovered = uncovered.minus(rects_[pick]);
      ++used;
    }
    return used;
  }

  // Greedy set of cells no two of which fit in one rectangle.
  std::size_t fooling(const CellSet& uncovered) const {
    std::vector<std::size_t> chosen;
    uncovered.for_each([&](std::size_t k) {
      const auto [i, j] = cell_id_[k];
      for (auto c : chosen) {
        const auto [i2, j2] = cell_id_[c];
        if (p_.at(i, j2) && p_.at(i2, j)) return;
      }
      chosen.push_back(k);
    });
    return chosen.size();
  }

  void search(const CellSet& uncovered, std::size_t used) {
    if (aborted_) return;
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    if (uncovered.empty()) {
      best_ = std::min(best_, used);
      return;
    }
    if (used + fooling(uncovered) >= best_) return;
    const std::size_t cell = uncovered.first();
    std::vector<std::pair<std::size_t, std::size_t>> cands;  // (-gain, rect)
    for (auto r : containing_[cell]) cands.emplace_back(rects_[r].overlap(uncovered), r);
    std::stable_sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [gain, r] : cands) {
      search(uncovered.minus(rects_[r]), used + 1);
      if (aborted_) return;
    }
  }

  const SupportPattern& p_;
  std::size_t budget_;
  std::vector<std::pair<std::size_t, std::size_t>> cell_id_;
  std::vector<CellSet> rects_;
  std::vector<std::vector<std::size_t>> containing_;
  std::size_t best_ = 0;
  std::size_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

RectangleCover rectangle_cover(const SupportPattern& pattern, const RectangleCoverOptions& opts) {
  if (pattern.rows * pattern.cols > opts.cell_limit)
    throw Error(ErrorCode::TooLarge, std::to_string(pattern.rows * pattern.cols) + " cells exceed the limit of " +
                                         std::to_string(opts.cell_limit));
  const SupportPattern p = pattern.cols > pattern.rows ? pattern.transpose() : pattern;
  if (p.cols > 64) throw Error(ErrorCode::TooLarge, "support too wide for the rectangle search");
  if (p.count() == 0) return RectangleCover{0, 0, true, 0, 0};
  return RectangleSearch(p, opts.node_budget).run();
}

std::size_t rectangle_cover_lb(const SupportPattern& p, std::size_t cell_limit) {
  RectangleCoverOptions opts;
  opts.cell_limit = cell_limit;
  return rectangle_cover(p, opts).lower;
}

double to_double(const Scalar& x) {
  mpfr_t p, q, r2;
  mpfr_inits2(256, p, q, r2, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(p, x.rational_part().get_mpq_t(), MPFR_RNDN);
  mpfr_set_q(q, x.sqrt2_part().get_mpq_t(), MPFR_RNDN);
  mpfr_sqrt_ui(r2, 2, MPFR_RNDN);
  mpfr_mul(q, q, r2, MPFR_RNDN);
  mpfr_add(p, p, q, MPFR_RNDN);
  const double d = mpfr_get_d(p, MPFR_RNDN);
  mpfr_clears(p, q, r2, static_cast<mpfr_ptr>(nullptr));
  return d;
}

FloatMatrix FloatMatrix::of(const ExactMatrix& m) {
  FloatMatrix f{m.rows(), m.cols(), std::vector<double>(m.rows() * m.cols())};
  for (std::size_t k = 0; k < f.data.size(); ++k) f.data[k] = to_double(m.entries()[k]);
  return f;
}

double FloatMatrix::frobenius() const {
  double s = 0.0;
  for (double x : data) s += x * x;
  return std::sqrt(s);
}

double relative_residual(const FloatMatrix& m, const FloatFactorization& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) {
      double v = m(i, j);
      for (std::size_t k = 0; k < f.rank; ++k) v -= f.left[i * f.rank + k] * f.right[k * m.cols + j];
      s += v * v;
    }
  const double norm = m.frobenius();
  return norm > 0.0 ? std::sqrt(s) / norm : std::sqrt(s);
}

namespace {

// Hierarchical alternating least squares on m ~ wt^T * h, with wt (r x rows)
// and h (r x cols) stored by rows so both half-steps are row updates.
class Hals {
 public:
  Hals(const FloatMatrix& m, std::size_t r, const kernels::Table& k)
      : m_(m), r_(r), k_(k), mt_(m.cols * m.rows), g_(std::max(m.rows, m.cols)), resid_(m.cols) {
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j) mt_[j * m.rows + i] = m(i, j);
    norm_ = m.frobenius();
  }

  // Returns the relative residual reached.
  double run(std::vector<double>& wt, std::vector<double>& h, std::size_t iters, double tol) {
    double res = residual(wt, h);
    for (std::size_t it = 0; it < iters && res > tol; ++it) {
      half_step(wt, h, m_.data, m_.rows, m_.cols);
      half_step(h, wt, mt_, m_.cols, m_.rows);
      balance(wt, h);
      if (it % 10 == 9 || it + 1 == iters) res = residual(wt, h);
    }
    return res;
  }

  double residual(const std::vector<double>& wt, const std::vector<double>& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < m_.rows; ++i) {
      std::copy_n(&m_.data[i * m_.cols], m_.cols, resid_.begin());
      for (std::size_t k = 0; k < r_; ++k) {
        const double w = wt[k * m_.rows + i];
        if (w != 0.0) k_.axpy(-w, &h[k * m_.cols], resid_.data(), m_.cols);
      }
      s += k_.dot(resid_.data(), resid_.data(), m_.cols);
    }
    return norm_ > 0.0 ? std::sqrt(s) / norm_ : std::sqrt(s);
  }

 private:
  // Updates `target` (r x tn) for fixed `fixed` (r x fn) against data (fn x tn).
  void half_step(const std::vector<double>& fixed, std::vector<double>& target, const std::vector<double>& data,
                 std::size_t fn, std::size_t tn) {
    gram_.assign(r_ * r_, 0.0);
    for (std::size_t a = 0; a < r_; ++a)
      for (std::size_t b = a; b < r_; ++b)
        gram_[a * r_ + b] = gram_[b * r_ + a] = k_.dot(&fixed[a * fn], &fixed[b * fn], fn);
    cross_.assign(r_ * tn, 0.0);
    for (std::size_t a = 0; a < r_; ++a)
      for (std::size_t i = 0; i < fn; ++i)
        if (const double w = fixed[a * fn + i]; w != 0.0) k_.axpy(w, &data[i * tn], &cross_[a * tn], tn);
    for (std::size_t a = 0; a < r_; ++a) {
      const double diag = gram_[a * r_ + a];
      if (diag <= 0.0) continue;
      std::copy_n(&cross_[a * tn], tn, g_.begin());
      for (std::size_t b = 0; b < r_; ++b)
        if (const double c = gram_[a * r_ + b]; c != 0.0) k_.axpy(-c, &target[b * tn], g_.data(), tn);
      k_.step_project(&target[a * tn], g_.data(), 1.0 / diag, 0.0, tn);
    }
  }

  void balance(std::vector<double>& wt, std::vector<double>& h) const {
    for (std::size_t a = 0; a < r_; ++a) {
      const double nw = std::sqrt(k_.dot(&wt[a * m_.rows], &wt[a * m_.rows], m_.rows));
      const double nh = std::sqrt(k_.dot(&h[a * m_.cols], &h[a * m_.cols], m_.cols));
      if (nw <= 0.0 || nh <= 0.0) continue;
      const double f = std::sqrt(nh / nw);
      for (std::size_t i = 0; i < m_.rows; ++i) wt[a * m_.rows + i] *= f;
      for (std::size_t j = 0; j < m_.cols; ++j) h[a * m_.cols + j] /= f;
    }
  }

  const FloatMatrix& m_;
  std::size_t r_;
  const kernels::Table& k_;
  std::vector<double> mt_, g_, resid_, gram_, cross_;
  double norm_ = 0.0;
};

FloatFactorization pack(const FloatMatrix& m, std::size_t r, const std::vector<double>& wt,
                        const std::vector<double>& h, double res, std::size_t restart) {
  FloatFactorization f{m.rows, m.cols, r, std::vector<double>(m.rows * r), h, res, restart};
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < m.rows; ++i) f.left[i * r + k] = wt[k * m.rows + i];
  return f;
}

}  // namespace

HeuristicResult heuristic_search(const FloatMatrix& m, std::size_t r, const HeuristicOptions& opts) {
  HeuristicResult out;
  out.best_residual = std::numeric_limits<double>::infinity();
  if (r == 0) return out;
  for (double x : m.data)
    if (!(x >= 0.0)) return out;
  const kernels::Table& k = opts.isa ? kernels::table(*opts.isa) : kernels::active();
  Hals hals(m, r, k);

  auto attempt = [&](std::vector<double>& wt, std::vector<double>& h, std::size_t restart, std::size_t iters) {
    const double res = hals.run(wt, h, iters, opts.tol);
    out.best_residual = std::min(out.best_residual, res);
    if (res <= opts.tol && !out.found) out.found = pack(m, r, wt, h, res, restart);
    return out.found.has_value();
  };

  // start index 0 and 1 are the trivial row / column factorizations
  if (opts.trivial_starts && r >= m.rows) {
    std::vector<double> wt(r * m.rows, 0.0), h(r * m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
      wt[i * m.rows + i] = 1.0;
      std::copy_n(&m.data[i * m.cols], m.cols, &h[i * m.cols]);
    }
    if (attempt(wt, h, 0, 0)) return out;
  }
  if (opts.trivial_starts && r >= m.cols) {
    std::vector<double> wt(r * m.rows, 0.0), h(r * m.cols, 0.0);
    for (std::size_t j = 0; j < m.cols; ++j) {
      h[j * m.cols + j] = 1.0;
      for (std::size_t i = 0; i < m.rows; ++i) wt[j * m.rows + i] = m(i, j);
    }
    if (attempt(wt, h, 1, 0)) return out;
  }

  double mean = 0.0;
  for (double x : m.data) mean += x;
  mean = m.data.empty() ? 0.0 : mean / static_cast<double>(m.data.size());
  const double scale = std::sqrt(std::max(mean, 1e-12) / static_cast<double>(r));
  for (std::size_t s = 0; s < opts.restarts; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> wt(r * m.rows), h(r * m.cols);
    for (auto& x : wt) x = unit(rng) * scale;
    for (auto& x : h) x = unit(rng) * scale;
    if (attempt(wt, h, s + 2, opts.iters)) return out;
  }
  return out;
}

std::optional<FloatFactorization> heuristic_nnr_ub(const FloatMatrix& m, std::size_t r,
                                                   const HeuristicOptions& opts) {
  return heuristic_search(m, r, opts).found;
}

Rational best_rational(double x, long denom_bound) {
  if (denom_bound < 1) denom_bound = 1;
  Rational exact(x);  // doubles are dyadic rationals
  if (exact.get_den() <= denom_bound) return exact;
  // continued-fraction convergents and the best semiconvergent
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  mpz_class n = exact.get_num(), d = exact.get_den();
  const mpz_class bound = denom_bound;
  while (true) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    mpz_class q2 = q0 + a * q1;
    if (q2 > bound) break;
    mpz_class p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    mpz_class rem = n - a * d;
    n = d;
    d = rem;
    if (d == 0) break;
  }
  mpz_class k = (bound - q0) / q1;
  Rational b1(p0 + k * p1, q0 + k * q1);
  Rational b2(p1, q1);
  b1.canonicalize();
  b2.canonicalize();
  return abs(b2 - exact) <= abs(b1 - exact) ? b2 : b1;
}

std::optional<NNFactorization> exactify_factorization(const FloatFactorization& f, const ExactMatrix& m,
                                                      long denom_bound) {
  if (f.rows != m.rows() || f.cols != m.cols()) return std::nullopt;
  NNFactorization out(m.rows(), m.cols(), Domain::Rational);
  for (std::size_t k = 0; k < f.rank; ++k) {
    double vmax = 0.0;
    for (std::size_t j = 0; j < f.cols; ++j) vmax = std::max(vmax, f.right[k * f.cols + j]);
    if (vmax <= 0.0) continue;
    std::vector<Scalar> u(f.rows), v(f.cols);
    bool any = false;
    for (std::size_t i = 0; i < f.rows; ++i) {
      u[i] = Scalar(best_rational(std::max(0.0, f.left[i * f.rank + k] * vmax), denom_bound));
      any = any || !u[i].is_zero();
    }
    for (std::size_t j = 0; j < f.cols; ++j)
      v[j] = Scalar(best_rational(std::max(0.0, f.right[k * f.cols + j] / vmax), denom_bound));
    if (any) out.add_term(std::move(u), std::move(v));
  }
  if (!validate_factorization(m, out).passed()) return std::nullopt;
  return out;
}

BoundsReport bounds_report(const ExactMatrix& m, const BoundsOptions& opts) {
  BoundsReport rep;
  rep.rows = m.rows();
  rep.cols = m.cols();
  if (!m.is_nonnegative()) throw Error(ErrorCode::NegativeInput, "bounds need a nonnegative matrix");
  const auto rect = rectangle_cover(SupportPattern::of(m), opts.rectangles);
  rep.rank_lb = rank_exact(m);
  rep.rect_lb = rect.lower;
  rep.rect_exact = rect.exact;
  const std::size_t lo = rep.lower();
  if (lo == 0) {
    rep.heur_ub = 0;
    rep.pinned = 0;
    rep.exact_witness = NNFactorization(m.rows(), m.cols(), m.domain());
    return rep;
  }
  std::size_t hi = std::min(m.rows(), m.cols());
  if (opts.max_rank) hi = std::min(hi, *opts.max_rank);
  const FloatMatrix fm = FloatMatrix::of(m);
  for (std::size_t r = lo; r <= hi; ++r) {
    const HeuristicResult res = heuristic_search(fm, r, opts.heuristic);
    rep.attempts.emplace_back(r, res.best_residual);
    rep.heur_residual = res.best_residual;
    if (res.found) {
      rep.heur_ub = r;
      rep.heur_residual = res.found->residual;
      rep.exact_witness = exactify_factorization(*res.found, m, opts.denom_bound);
      break;
    }
  }
  if (rep.heur_ub && *rep.heur_ub == lo) rep.pinned = lo;
  return rep;
}

std::string format_bounds_report(const BoundsReport& rep) {
  std::ostringstream os;
  auto line = [&](std::string_view key, const std::string& value) {
    os << "  " << std::left << std::setw(26) << key << value << '\n';
  };
  auto fmt_res = [](double r) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(3) << r;
    return s.str();
  };
  os << "nonnegative rank bounds for a " << rep.rows << "x" << rep.cols << " matrix\n";
  line("rank lower bound", std::to_string(rep.rank_lb));
  line("rectangle lower bound", std::to_string(rep.rect_lb) + (rep.rect_exact ? "" : " (search budget hit)"));
  for (const auto& [r, res] : rep.attempts) line("heuristic r=" + std::to_string(r), "best residual " + fmt_res(res));
  line("heuristic upper bound", rep.heur_ub ? std::to_string(*rep.heur_ub) : std::string("none found"));
  line("exact rational witness", rep.exact_witness ? "yes" : "no");
  line("pinned", rep.pinned ? std::to_string(*rep.pinned) : std::string("no (bounds do not meet)"));
  os << "  note: heuristic failure at a rank is evidence only, never a certificate\n";
  os << "--\n";
  os << "rank_lb=" << rep.rank_lb << '\n';
  os << "rect_lb=" << rep.rect_lb << '\n';
  os << "rect_exact=" << (rep.rect_exact ? 1 : 0) << '\n';
  os << "heur_ub=" << (rep.heur_ub ? std::to_string(*rep.heur_ub) : "none") << '\n';
  os << "heur_residual=" << fmt_res(rep.heur_residual) << '\n';
  os << "exact_witness=" << (rep.exact_witness ? 1 : 0) << '\n';
  os << "pinned=" << (rep.pinned ? std::to_string(*rep.pinned) : "none") << '\n';
  return os.str();
}

}  // namespace nnr
