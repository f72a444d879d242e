#pragma once

// Command-line front end. run_cli is the whole program; tools/ only wraps it.
// Exit codes: 0 all checks passed, 1 finding (violation, uncertified
// hypothesis, failed suite), 2 usage or domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracineq/bounds.hpp"
#include "fracineq/error.hpp"
#include "fracineq/fracint.hpp"
#include "fracineq/funcspace.hpp"
#include "fracineq/harness.hpp"

namespace fracineq {

namespace cli_detail {

inline void print_report(std::ostream& out, const SlackReport& r) {
  SweepRow row;
  row.report = r;
  out << kCsvHeader << '\n';
  write_csv_row(out, row);
  if (r.middle) out << "middle " << format_double(*r.middle) << '\n';
}

inline void print_certificate(std::ostream& out, const ClassCertificate& c) {
  out << to_string(c.cls) << ": " << to_string(c.verdict) << " (" << c.samples_used << " samples)\n";
  if (c.witness) {
    const auto& w = *c.witness;
    out << "witness x=" << format_double(w.x) << " y=" << format_double(w.y) << " t=" << format_double(w.t)
        << " lhs=" << format_double(w.lhs) << " rhs=" << format_double(w.rhs) << " gap=" << format_double(w.gap)
        << '\n';
  }
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical verification of fractional Hermite-Hadamard type inequalities"};
  app.require_subcommand(1);

  // rl
  auto* rl = app.add_subcommand("rl", "Riemann-Liouville integral of a registry function");
  std::string rl_f;
  double rl_a = 0.0, rl_b = 0.0, rl_x = 0.0, rl_alpha = 0.0;
  bool rl_is_right = false;
  rl->add_option("--f", rl_f, "function name")->required();
  auto* rl_a_opt = rl->add_option("--a", rl_a, "left end (left-sided)");
  auto* rl_b_opt = rl->add_option("--b", rl_b, "right end (right-sided)");
  rl->add_option("--x", rl_x, "evaluation point")->required();
  rl->add_option("--alpha", rl_alpha, "order")->required();
  rl->add_flag("--right", rl_is_right, "right-sided operator");

  // identity
  auto* id = app.add_subcommand("identity", "Dual evaluation of I_f");
  std::vector<std::string> id_f;
  std::vector<double> id_m;
  id->add_option("--f", id_f, "restrict to these functions");
  id->add_option("--m", id_m, "m values for the substituted form");

  // classify
  auto* cl = app.add_subcommand("classify", "Sample-based convexity class check");
  std::string cl_f, cl_class;
  double cl_lo = 0.0, cl_hi = 0.0, cl_s = 1.0, cl_m = 1.0;
  int cl_grid = 41, cl_random = 1000;
  std::uint64_t cl_seed = 42;
  cl->add_option("--f", cl_f, "function name")->required();
  cl->add_option("--class", cl_class, "ga | ga-s | gg | quasi | sm")->required();
  cl->add_option("--lo", cl_lo)->required();
  cl->add_option("--hi", cl_hi)->required();
  cl->add_option("--s", cl_s);
  cl->add_option("--m", cl_m);
  cl->add_option("--grid", cl_grid, "lattice points per axis");
  cl->add_option("--samples", cl_random, "random samples");
  cl->add_option("--seed", cl_seed);

  // verify
  auto* vf = app.add_subcommand("verify", "Verify one bound instance");
  std::string vf_theorem, vf_corollary = "none", vf_f;
  double vf_a = 0.0, vf_b = 0.0;
  std::optional<double> vf_x, vf_alpha, vf_lambda, vf_q, vf_s, vf_m, vf_M;
  vf->add_option("--theorem", vf_theorem, "hh | ga-s | quasi | sm")->required();
  vf->add_option("--corollary", vf_corollary, "none, s1, s1-alpha1, q1, simpson, midpoint, trapezoid, ostrowski, left-link, right-link");
  vf->add_option("--f", vf_f, "function name")->required();
  vf->add_option("--a", vf_a)->required();
  vf->add_option("--b", vf_b)->required();
  vf->add_option("--x", vf_x);
  vf->add_option("--alpha", vf_alpha);
  vf->add_option("--lambda", vf_lambda);
  vf->add_option("--q", vf_q);
  vf->add_option("--s", vf_s);
  vf->add_option("--m", vf_m);
  vf->add_option("--M", vf_M, "bound on |f'| (Ostrowski forms)");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Seeded parameter sweep");
  std::string sw_spec, sw_out;
  int sw_threads = 0;
  sw->add_option("--spec", sw_spec, "spec file")->required();
  sw->add_option("--out", sw_out, "output prefix; writes PREFIX.csv and PREFIX.json")->required();
  sw->add_option("--threads", sw_threads, "worker count (default: hardware, capped by FRACINEQ_THREADS)");

  // suite
  auto* st = app.add_subcommand("suite", "Run every acceptance check");
  AcceptanceOptions st_opt;
  st->add_option("--sweep-samples", st_opt.sweep_samples, "instances per theorem in the slack sweeps");
  st->add_option("--determinism-samples", st_opt.determinism_samples);
  st->add_option("--threads", st_opt.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*rl) {
      const auto f = lookup(rl_f);
      const FracOrder al(rl_alpha);
      QuadResult r;
      if (rl_is_right) {
        if (!*rl_b_opt) fail(ErrorKind::invalid_config, "--right requires --b");
        r = rl_right(f, rl_b, al, rl_x);
      } else {
        if (!*rl_a_opt) fail(ErrorKind::invalid_config, "left-sided operator requires --a");
        r = rl_left(f, rl_a, al, rl_x);
      }
      out << format_double(r.value) << '\n';
      return 0;
    }

    if (*id) {
      IdentitySuiteOptions opt;
      opt.functions = id_f;
      if (!id_m.empty()) opt.ms = id_m;
      const auto res = check_identity_suite(opt);
      out << "evaluations " << res.evaluations << '\n'
          << "max deviation " << format_double(res.max_dev) << '\n'
          << "m-form max deviation " << format_double(res.max_dev_m) << '\n'
          << "lemma (x^m, a^m, b^m) second-member sign: " << to_string(res.sign) << " (other sign deviation "
          << format_double(res.sign_dev_other) << ")\n";
      for (const auto& fl : res.failures) {
        out << "FAIL " << fl.function << (fl.m_form ? " m-form" : "") << " x=" << format_double(fl.params.x)
            << " alpha=" << format_double(fl.params.alpha) << " lambda=" << format_double(fl.params.lambda)
            << " m=" << format_double(fl.params.cls.m) << ": " << format_double(fl.direct) << " vs "
            << format_double(fl.lemma) << '\n';
      }
      for (const auto& e : res.errors) out << "ERROR " << e << '\n';
      return res.pass() ? 0 : 1;
    }

    if (*cl) {
      const ConvexityClass cls = parse_class(cl_class);
      const Interval iv(cl_lo, cl_hi);
      const ClassParams params{cl_s, cl_m};
      const auto f = resolve_function(cl_f, GeneratorContext{iv, cls, params, 1.0});
      const auto cert = check_class(f, cls, params, iv, cl_grid, cl_random, cl_seed);
      cli_detail::print_certificate(out, cert);
      return cert.certified() ? 0 : 1;
    }

    if (*vf) {
      BoundKind k{parse_theorem(vf_theorem), parse_corollary(vf_corollary)};
      Params p;
      p.iv = Interval(vf_a, vf_b);
      // Unset values take the kind's forced value, else the Params default.
      const Params forced = apply_kind_params(k, p);
      p.x = vf_x.value_or(is_named(k.corollary) ? forced.x : p.iv.geometric_mid());
      p.alpha = vf_alpha.value_or(forced.alpha);
      p.lambda = vf_lambda.value_or(forced.lambda);
      p.q = vf_q.value_or(forced.q);
      p.cls.s = vf_s.value_or(forced.cls.s);
      p.cls.m = vf_m.value_or(forced.cls.m);
      if (!vf_x && !(k.theorem == Theorem::hh || (is_named(k.corollary) && k.corollary != Corollary::ostrowski))) {
        fail(ErrorKind::invalid_config, "--x is required for " + to_string(k));
      }
      const auto f = resolve_function(vf_f, GeneratorContext{p.iv, hypothesis_class(k.theorem), p.cls, p.q});
      try {
        const auto r = verify(k, f, p, vf_M);
        cli_detail::print_report(out, r);
        return r.pass ? 0 : 1;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::hypothesis_not_certified) throw;
        out << "uncertified: " << e.what() << '\n';
        return 1;
      }
    }

    if (*sw) {
      const auto spec = SweepSpec::from_file(sw_spec);
      const auto rep = run_sweep(spec, sw_threads);
      {
        std::ofstream csv(sw_out + ".csv");
        if (!csv) fail(ErrorKind::invalid_config, "cannot write " + sw_out + ".csv");
        write_csv(csv, rep);
      }
      {
        std::ofstream js(sw_out + ".json");
        if (!js) fail(ErrorKind::invalid_config, "cannot write " + sw_out + ".json");
        js << to_json(rep).dump(2) << '\n';
      }
      print_summary(out, rep);
      return rep.summary.violations == 0 && rep.summary.errors == 0 ? 0 : 1;
    }

    if (*st) {
      bool all = true;
      for (const auto& c : run_acceptance(st_opt)) {
        print_criterion(out, c);
        all = all && c.pass;
      }
      return all ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace fracineq
