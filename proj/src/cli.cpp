#include "nnrank/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "nnrank/bounds.hpp"
#include "nnrank/cohen_rothblum.hpp"
#include "nnrank/error.hpp"
#include "nnrank/gadgets.hpp"
#include "nnrank/graphred.hpp"

namespace nnr::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MalformedFile, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MalformedFile, "cannot write " + path);
  out << text;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::TooLarge:
      return kTooLarge;
    case ErrorCode::ValidationFailure:
    case ErrorCode::CertificateFailure:
    case ErrorCode::ReconstructionMismatch:
    case ErrorCode::NotAClique:
    case ErrorCode::NotACover:
      return kFail;
    default:
      return kUsage;
  }
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string describe(const ValidationReport& rep) {
  std::ostringstream os;
  if (rep.first_negative) {
    const auto& n = *rep.first_negative;
    os << "negative entry in term " << n.term << ' ' << (n.in_u ? 'u' : 'v') << '[' << n.index << "]\n";
  }
  if (rep.first_mismatch) {
    const auto& m = *rep.first_mismatch;
    os << "first mismatch at (" << m.row << ',' << m.col << "): expected " << format_scalar(m.expected) << ", got "
       << format_scalar(m.actual) << '\n';
  }
  return os.str();
}

struct Options {
  std::vector<std::string> alphas;
  bool factor = false;
  std::string fa, fb, fc, s_text;
  std::size_t r = 0;
  std::string input, var, output, trace_out, matrix_out, fact_out, matrix, fact, alpha_text;
  std::optional<std::size_t> er;
  bool symmetric = false;
  std::size_t limit = kDefaultGraphLimit;
  BoundsOptions opts;
  std::optional<std::size_t> max_rank;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  long max_den = 64;
};

struct Context {
  std::ostream& out;
  int code = kOk;
  Options opt;
};

void add_gadget(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* gadget = app.add_subcommand("gadget", "gadget matrices and single eliminations");
  gadget->require_subcommand(1);

  auto* b0 = gadget->add_subcommand("b0", "the 4x4 cyclic matrix");
  b0->callback([&] { action = [&] { ctx.out << format_matrix(build_b0()); }; });

  auto* b = gadget->add_subcommand("b", "the 5x(n+4) matrix for alpha_1..alpha_n");
  auto& alphas = ctx.opt.alphas;
  auto& factor = ctx.opt.factor;
  b->add_option("--alpha", alphas, "alpha values (repeat or comma-separate)")->required()->delimiter(',');
  b->add_flag("--factor", factor, "emit the 4-term factorization (all alphas equal, in [0,1])");
  b->callback([&] {
    action = [&] {
      std::vector<Scalar> vals;
      for (const auto& a : alphas) vals.push_back(parse_scalar(a, Domain::Quadratic));
      if (!factor) {
        ctx.out << format_matrix(build_b(vals));
        return;
      }
      if (std::adjacent_find(vals.begin(), vals.end(), std::not_equal_to<>()) != vals.end())
        throw Error(ErrorCode::AlphaOutOfRange, "--factor needs equal alphas");
      ctx.out << format_factorization(factor_b_equal(vals.front(), vals.size()));
    };
  });

  auto* wrap = gadget->add_subcommand("wrap", "[A B 0; c s..s 1111; 0 1..1 B0_0; 0 0 B0_1..3]");
  auto& fa = ctx.opt.fa;
  auto& fb = ctx.opt.fb;
  auto& fc = ctx.opt.fc;
  auto& s_text = ctx.opt.s_text;
  auto& r = ctx.opt.r;
  wrap->add_option("--a", fa, "matrix file for A")->required();
  wrap->add_option("--b", fb, "matrix file for B (m x k)")->required();
  wrap->add_option("--c", fc, "matrix file for the row c (1 x n)")->required();
  wrap->add_option("--s", s_text, "upper end of the variable range")->required();
  wrap->add_option("--r", r, "certified rank of A (k > 1)");
  wrap->callback([&] {
    action = [&] {
      const ExactMatrix a = parse_matrix(read_file(fa));
      const ExactMatrix bm = parse_matrix(read_file(fb));
      const ExactMatrix c = parse_matrix(read_file(fc));
      ctx.out << format_matrix(wrap_gadget(a, bm, c, parse_scalar(s_text, Domain::Quadratic), r));
    };
  });

  auto* elim = gadget->add_subcommand("eliminate", "eliminate one variable of a partial matrix");
  auto& input = ctx.opt.input;
  auto& var = ctx.opt.var;
  auto& output = ctx.opt.output;
  auto& trace_out = ctx.opt.trace_out;
  auto& er = ctx.opt.er;
  elim->add_option("--input", input, "partial matrix file")->required();
  elim->add_option("--var", var, "variable name")->required();
  elim->add_option("--r", er, "rank to certify when the variable spans several columns");
  elim->add_option("--output", output, "write the resulting partial matrix here");
  elim->add_option("--trace-out", trace_out, "write the step here");
  elim->callback([&] {
    action = [&] {
      const PartialMatrix pm = parse_partial(read_file(input));
      const Elimination e = eliminate_variable(pm, var, er);
      GadgetTrace trace{pm.rows(), pm.cols(), {e.step}};
      const std::string partial_text = format_partial(e.matrix);
      const std::string trace_text = format_trace(trace);
      write_file(output, partial_text);
      write_file(trace_out, trace_text);
      ctx.out << partial_text << "--\n" << trace_text << "--\n";
      ctx.out << "rows=" << e.matrix.rows() << "\ncols=" << e.matrix.cols() << "\nvariables_left="
              << e.matrix.variables().size() << '\n';
    };
  });
}

void add_reduce(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* reduce = app.add_subcommand("reduce", "clique cover to nonnegative rank");
  reduce->require_subcommand(1);
  auto& input = ctx.opt.input;
  auto& symmetric = ctx.opt.symmetric;
  auto& limit = ctx.opt.limit;

  auto* partial = reduce->add_subcommand("partial", "the partial 0-1 matrix X(G)");
  partial->add_option("--input", input, "graph file")->required();
  partial->add_flag("--symmetric", symmetric, "share one variable between (u,v) and (v,u)");
  partial->callback([&] {
    action = [&] { ctx.out << format_partial(build_partial_01(parse_graph(read_file(input)), symmetric)); };
  });

  auto* cover = reduce->add_subcommand("cover", "minimum clique cover");
  cover->add_option("--input", input, "graph file")->required();
  cover->add_option("--limit", limit, "largest vertex count accepted");
  cover->callback([&] {
    action = [&] {
      const CliqueCoverResult res = clique_cover_number(parse_graph(read_file(input)), limit);
      for (const auto& clique : res.cover.cliques) {
        ctx.out << "clique";
        for (std::size_t v : clique) ctx.out << ' ' << v;
        ctx.out << '\n';
      }
      ctx.out << "--\ncc=" << res.number << '\n';
    };
  });

  auto* graph = reduce->add_subcommand("graph", "reduce a graph to a constant matrix");
  auto& matrix_out = ctx.opt.matrix_out;
  auto& trace_out = ctx.opt.trace_out;
  graph->add_option("--input", input, "graph file")->required();
  graph->add_flag("--symmetric", symmetric, "share one variable between (u,v) and (v,u)");
  graph->add_option("--limit", limit, "largest vertex count accepted");
  graph->add_option("--matrix-out", matrix_out, "write the matrix file here");
  graph->add_option("--trace-out", trace_out, "write the trace file here");
  graph->callback([&] {
    action = [&] {
      const Graph g = parse_graph(read_file(input));
      ReducedGraph red;
      if (symmetric) {
        // independent variables are the supported mode; this surfaces the
        // elimination error for shared ones
        PartialMatrix pm = build_partial_01(g, true);
        for (const auto& [name, s] : std::map<std::string, Scalar>(pm.variables()))
          pm = eliminate_variable(pm, name).matrix;
        red.matrix = pm.to_matrix();
      } else {
        red = reduce_graph(g, limit);
      }
      const std::string mtext = format_matrix(red.matrix);
      const std::string ttext = format_trace(red.trace);
      write_file(matrix_out, mtext);
      write_file(trace_out, ttext);
      ctx.out << mtext << "--\n" << ttext << "--\n";
      ctx.out << "vertices=" << g.vertex_count() << "\nedges=" << g.edges().size() << "\nt=" << red.trace.steps.size()
              << "\nrows=" << red.matrix.rows() << "\ncols=" << red.matrix.cols()
              << "\npredicted_nnr=" << red.predicted_rank << '\n';
    };
  });

  auto* certify = reduce->add_subcommand("certify", "exact cc(G) + 4t factorization of the reduced matrix");
  auto& fact_out = ctx.opt.fact_out;
  certify->add_option("--input", input, "graph file")->required();
  certify->add_option("--limit", limit, "largest vertex count accepted");
  certify->add_option("--factorization-out", fact_out, "write the factorization here");
  certify->callback([&] {
    action = [&] {
      const Graph g = parse_graph(read_file(input));
      const ReducedGraph red = reduce_graph(g, limit);
      const NNFactorization f = certify_reduction_ub(g, limit);
      const ValidationReport rep = validate_factorization(red.matrix, f);
      const bool ok = rep.passed() && f.size() == red.predicted_rank;
      write_file(fact_out, format_factorization(f));
      ctx.out << describe(rep);
      ctx.out << "vertices=" << g.vertex_count() << "\nt=" << red.trace.steps.size() << "\nrows=" << red.matrix.rows()
              << "\nterms=" << f.size() << "\npredicted_nnr=" << red.predicted_rank << "\nresult=" << verdict(ok)
              << '\n';
      if (!ok) ctx.code = kFail;
    };
  });
}

void add_bounds(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* bounds = app.add_subcommand("bounds", "lower and heuristic upper bounds on nonnegative rank");
  auto& matrix = ctx.opt.matrix;
  auto& opts = ctx.opt.opts;
  auto& max_rank = ctx.opt.max_rank;
  bounds->add_option("--matrix", matrix, "matrix file")->required();
  bounds->add_option("--max-rank", max_rank, "largest rank tried by the heuristic");
  bounds->add_option("--restarts", opts.heuristic.restarts, "random starts per rank");
  bounds->add_option("--iters", opts.heuristic.iters, "iterations per start");
  bounds->add_option("--tol", opts.heuristic.tol, "relative residual accepted");
  bounds->add_option("--seed", opts.heuristic.seed, "random seed");
  bounds->add_option("--denom-bound", opts.denom_bound, "denominator bound when exactifying");
  bounds->callback([&] {
    action = [&] {
      opts.max_rank = max_rank;
      ctx.out << format_bounds_report(bounds_report(parse_matrix(read_file(matrix)), opts));
    };
  });
}

void add_cr(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* cr = app.add_subcommand("cr", "the 21x21 separation example");
  cr->require_subcommand(1);
  auto& output = ctx.opt.output;
  auto& samples = ctx.opt.samples;
  auto& seed = ctx.opt.seed;
  auto& max_den = ctx.opt.max_den;

  auto* rebuild = cr->add_subcommand("rebuild-m", "rebuild M from C by four eliminations");
  rebuild->add_option("--output", output, "write the matrix file here");
  rebuild->callback([&] {
    action = [&] {
      const cr::Rebuild rb = cr::rebuild_m_from_gadgets();
      const std::string text = format_matrix(rb.matrix);
      write_file(output, text);
      ctx.out << text << "--\n" << format_trace(rb.trace) << "--\n";
      ctx.out << "rows=" << rb.matrix.rows() << "\ncols=" << rb.matrix.cols() << "\nsteps=" << rb.trace.steps.size()
              << "\nmatches_printed=1\nresult=PASS\n";
    };
  });

  auto* verify = cr->add_subcommand("verify-19", "the 19-term witness over Q(sqrt2)");
  auto& alpha_text = ctx.opt.alpha_text;
  verify->add_option("--output", output, "write the factorization here");
  verify->add_option("--alpha", alpha_text, "check the 3-term witness of C with this alpha instead");
  verify->callback([&] {
    action = [&] {
      if (!alpha_text.empty()) {
        const Scalar al = cr::alpha();
        const NNFactorization f = cr::explicit_c_factorization(parse_scalar(alpha_text, Domain::Quadratic));
        const ValidationReport rep = validate_factorization(cr::build_c({cr::a_star(), al, al, al}), f);
        write_file(output, format_factorization(f));
        ctx.out << describe(rep) << "terms=" << f.size() << "\nresult=" << verdict(rep.passed()) << '\n';
        if (!rep.passed()) ctx.code = kFail;
        return;
      }
      const NNFactorization f = cr::build_m_factorization_19();
      const ValidationReport rep = validate_factorization(cr::build_m(), f);
      write_file(output, format_factorization(f));
      ctx.out << "terms=" << f.size() << "\nnonnegative=" << rep.nonnegative << "\nsums_match=" << rep.sums_match
              << "\nresult=" << verdict(rep.passed()) << '\n';
      if (!rep.passed()) ctx.code = kFail;
    };
  });

  auto* minors = cr->add_subcommand("minors", "the 25 symbolic 4x4 minors of C");
  minors->callback([&] {
    action = [&] {
      const auto ms = cr::symbolic_minors_c();
      for (const auto& m : ms)
        ctx.out << "minor(" << m.deleted_row << ',' << m.deleted_col << ") = " << m.poly.to_string() << '\n';
      ctx.out << "--\ncount=" << ms.size() << '\n';
    };
  });

  auto* cert = cr->add_subcommand("certify-rational", "no rational point makes rank(C) <= 3");
  cert->callback([&] {
    action = [&] {
      const cr::CertificateReport rep = cr::verify_certificate(cr::default_certificate());
      ctx.out << rep.text() << "--\nidentities=" << rep.identities.size()
              << "\nno_rational_root=" << rep.no_rational_root << "\nresult=" << verdict(rep.passed()) << '\n';
      if (!rep.passed()) ctx.code = kFail;
    };
  });

  auto* probe = cr->add_subcommand("probe", "rank of C at seeded rational points of [1,2]^4");
  probe->add_option("--samples", samples, "number of points");
  probe->add_option("--seed", seed, "random seed");
  probe->add_option("--max-den", max_den, "largest denominator")->check(CLI::PositiveNumber);
  probe->callback([&] {
    action = [&] {
      const cr::ProbeReport rep = cr::probe_rational_points(samples, seed, max_den);
      for (std::size_t r = 0; r < rep.rank_counts.size(); ++r)
        if (rep.rank_counts[r]) ctx.out << "rank " << r << ": " << rep.rank_counts[r] << '\n';
      if (rep.first_low_rank) {
        const auto& p = *rep.first_low_rank;
        ctx.out << "low-rank point: " << format_scalar(p.a) << ' ' << format_scalar(p.b) << ' '
                << format_scalar(p.c) << ' ' << format_scalar(p.d) << '\n';
      }
      ctx.out << "--\nsamples=" << rep.samples << "\nseed=" << rep.seed;
      for (std::size_t r = 0; r < rep.rank_counts.size(); ++r)
        if (rep.rank_counts[r]) ctx.out << "\nrank" << r << '=' << rep.rank_counts[r];
      ctx.out << "\nbelow4=" << rep.below_four() << "\nresult=" << verdict(rep.below_four() == 0) << '\n';
      if (rep.below_four()) ctx.code = kFail;
    };
  });

  auto* report = cr->add_subcommand("report", "full verification chain");
  report->add_option("--samples", samples, "number of probe points");
  report->add_option("--seed", seed, "random seed");
  report->callback([&] {
    action = [&] {
      cr::SeparationOptions opts;
      opts.samples = samples;
      opts.seed = seed;
      const cr::SeparationReport rep = cr::separation_report(opts);
      ctx.out << rep.text();
      if (!rep.passed()) ctx.code = kFail;
    };
  });
}

void add_check(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* check = app.add_subcommand("check", "validate a factorization against a matrix");
  auto& matrix = ctx.opt.matrix;
  auto& fact = ctx.opt.fact;
  check->add_option("--matrix", matrix, "matrix file")->required();
  check->add_option("--factorization", fact, "factorization file")->required();
  check->callback([&] {
    action = [&] {
      const ExactMatrix m = parse_matrix(read_file(matrix));
      const NNFactorization f = parse_factorization(read_file(fact));
      const ValidationReport rep = validate_factorization(m, f);
      ctx.out << verdict(rep.passed()) << '\n' << describe(rep);
      ctx.out << "--\nterms=" << rep.terms << "\nnonnegative=" << rep.nonnegative << "\nsums_match=" << rep.sums_match
              << "\nresult=" << verdict(rep.passed()) << '\n';
      if (!rep.passed()) ctx.code = kFail;
    };
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact nonnegative-rank gadgets and certificates", "nnrank"};
  app.require_subcommand(1);
  Context ctx{out, kOk, {}};
  std::function<void()> action;
  add_gadget(app, ctx, action);
  add_reduce(app, ctx, action);
  add_bounds(app, ctx, action);
  add_cr(app, ctx, action);
  add_check(app, ctx, action);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (action) action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return ctx.code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace nnr::cli
