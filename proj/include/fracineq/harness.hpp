#pragma once

/**
 * Sweep orchestration, verification suites and report writers.
 *
 * A sweep draws instances per bound kind from parameter boxes, resolves a
 * function for each, certifies the theorem's hypothesis on samples (redrawing
 * uncertified draws), and verifies the bound. Instances are independent and
 * seeded by (spec seed, kind, index), so results do not depend on the thread
 * count or completion order; rows are stored by instance id.
 */

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fracineq/bounds.hpp"
#include "fracineq/error.hpp"
#include "fracineq/fracint.hpp"
#include "fracineq/funcspace.hpp"
#include "fracineq/functionals.hpp"
#include "fracineq/quadrature.hpp"
#include "fracineq/random.hpp"
#include "fracineq/special.hpp"
#include "fracineq/toml_lite.hpp"

namespace fracineq {

// ---------------------------------------------------------------------------
// Sweep specification

struct Range {
  double lo = 0.0, hi = 0.0;
  bool inside(double l, double h) const { return lo >= l && hi <= h && lo <= hi; }
};

struct SweepSpec {
  std::vector<BoundKind> kinds = {{Theorem::ga_s}, {Theorem::quasi}, {Theorem::sm}};
  /// Registry names, seeded generators ("deriv-random:7"), or bare generator
  /// names ("deriv-random"), which get a fresh seed per instance.
  std::vector<std::string> functions = {"deriv-random"};
  Range alpha{0.2, 5.0};
  Range lambda{0.0, 1.0};
  Range q{1.0, 4.0};
  Range s{0.1, 1.0};
  Range m{0.1, 0.9};
  Range x_fraction{0.0, 1.0};
  double interval_lo = 0.2;
  double interval_hi = 10.0;
  Range ratio{1.2, 20.0};
  int n_samples = 1000;  // per kind
  std::uint64_t seed = 42;
  int max_attempts = 64;
  QuadConfig quad;
  CertOptions cert;

  void validate() const {
    auto bad = [](const std::string& what) { fail(ErrorKind::invalid_config, what); };
    if (kinds.empty()) bad("at least one kind is required");
    if (functions.empty()) bad("at least one function source is required");
    for (const auto& f : functions) {
      if (!find_function(f) && !is_generator_name(f) && f != "deriv-random" && f != "ga-random" &&
          f != "ga-s-random") {
        fail(ErrorKind::unknown_function, "unknown function source '" + f + "'");
      }
    }
    if (!(alpha.lo > 0.0) || !alpha.inside(0.0, std::numeric_limits<double>::infinity())) bad("alpha box must lie in (0, inf)");
    if (!lambda.inside(0.0, 1.0)) bad("lambda box must lie in [0, 1]");
    if (!q.inside(1.0, std::numeric_limits<double>::infinity())) bad("q box must lie in [1, inf)");
    if (!(s.lo > 0.0) || !s.inside(0.0, 1.0)) bad("s box must lie in (0, 1]");
    if (!(m.lo > 0.0) || !m.inside(0.0, 1.0)) bad("m box must lie in (0, 1]");
    if (!x_fraction.inside(0.0, 1.0)) bad("x_fraction box must lie in [0, 1]");
    if (!(interval_lo > 0.0) || !(interval_hi > interval_lo)) bad("interval requires 0 < lo < hi");
    if (!(ratio.lo > 1.0) || !(ratio.hi >= ratio.lo)) bad("ratio box must satisfy 1 < lo <= hi");
    if (interval_lo * ratio.lo > interval_hi) bad("interval too narrow for the smallest ratio");
    if (n_samples < 1) bad("n_samples must be >= 1");
    if (max_attempts < 1) bad("max_attempts must be >= 1");
    if (!(quad.abs_tol > 0.0) || !(quad.rel_tol > 0.0)) bad("tolerances must be positive");
    if (cert.n_grid < 3) bad("certification n_grid must be >= 3");
  }

  static SweepSpec from_document(const toml_lite::Document& doc) {
    using toml_lite::Scalar;
    SweepSpec spec;
    auto number = [&](const std::string& key, const toml_lite::Value& v) {
      if (!std::holds_alternative<double>(v)) fail(ErrorKind::parse_error, "'" + key + "' must be a number");
      return std::get<double>(v);
    };
    auto integer = [&](const std::string& key, const toml_lite::Value& v) {
      const double d = number(key, v);
      if (d != std::floor(d) || d < 0 || d > 9.0e15) fail(ErrorKind::parse_error, "'" + key + "' must be a nonnegative integer");
      return static_cast<std::int64_t>(d);
    };
    auto range = [&](const std::string& key, const toml_lite::Value& v) {
      const auto* arr = std::get_if<std::vector<Scalar>>(&v);
      if (!arr || arr->size() != 2 || !std::holds_alternative<double>((*arr)[0]) ||
          !std::holds_alternative<double>((*arr)[1])) {
        fail(ErrorKind::parse_error, "'" + key + "' must be a [lo, hi] pair of numbers");
      }
      return Range{std::get<double>((*arr)[0]), std::get<double>((*arr)[1])};
    };
    auto strings = [&](const std::string& key, const toml_lite::Value& v) {
      const auto* arr = std::get_if<std::vector<Scalar>>(&v);
      if (!arr) fail(ErrorKind::parse_error, "'" + key + "' must be an array of strings");
      std::vector<std::string> out;
      for (const auto& item : *arr) {
        if (!std::holds_alternative<std::string>(item)) fail(ErrorKind::parse_error, "'" + key + "' must be an array of strings");
        out.push_back(std::get<std::string>(item));
      }
      return out;
    };

    for (const auto& [key, v] : doc) {
      if (key == "seed") spec.seed = static_cast<std::uint64_t>(integer(key, v));
      else if (key == "n_samples") spec.n_samples = static_cast<int>(integer(key, v));
      else if (key == "max_attempts") spec.max_attempts = static_cast<int>(integer(key, v));
      else if (key == "kinds") {
        spec.kinds.clear();
        for (const auto& k : strings(key, v)) spec.kinds.push_back(parse_bound_kind(k));
      } else if (key == "functions") spec.functions = strings(key, v);
      else if (key == "box.alpha") spec.alpha = range(key, v);
      else if (key == "box.lambda") spec.lambda = range(key, v);
      else if (key == "box.q") spec.q = range(key, v);
      else if (key == "box.s") spec.s = range(key, v);
      else if (key == "box.m") spec.m = range(key, v);
      else if (key == "box.x_fraction") spec.x_fraction = range(key, v);
      else if (key == "interval.lo") spec.interval_lo = number(key, v);
      else if (key == "interval.hi") spec.interval_hi = number(key, v);
      else if (key == "interval.ratio") spec.ratio = range(key, v);
      else if (key == "tolerance.abs_tol") spec.quad.abs_tol = number(key, v);
      else if (key == "tolerance.rel_tol") spec.quad.rel_tol = number(key, v);
      else if (key == "tolerance.max_subdivisions") spec.quad.max_subdivisions = static_cast<int>(integer(key, v));
      else if (key == "certification.n_grid") spec.cert.n_grid = static_cast<int>(integer(key, v));
      else if (key == "certification.n_random") spec.cert.n_random = static_cast<int>(integer(key, v));
      else if (key == "certification.seed") spec.cert.seed = static_cast<std::uint64_t>(integer(key, v));
      else fail(ErrorKind::invalid_config, "unknown spec key '" + key + "'");
    }
    spec.validate();
    return spec;
  }

  static SweepSpec from_string(const std::string& text) { return from_document(toml_lite::parse_string(text)); }
  static SweepSpec from_file(const std::string& path) { return from_document(toml_lite::parse_file(path)); }
};

// ---------------------------------------------------------------------------
// Sweep execution

struct SweepRow {
  long id = 0;
  SlackReport report;
  /// Empty for evaluated rows, else "error:<Kind>".
  std::string error;
  /// For failing rows: "numerical" if the tight quadrature rerun passes,
  /// "substantive" otherwise.
  std::string violation_class;
  int attempts = 0;

  bool is_error() const { return !error.empty(); }
  bool violation() const { return error.empty() && !report.pass; }
};

struct KindSummary {
  BoundKind kind;
  long instances = 0;
  long passed = 0;
  long violations = 0;
  long numerical = 0;
  long substantive = 0;
  long errors = 0;
  double min_slack = std::numeric_limits<double>::infinity();
};

struct SweepSummary {
  std::vector<KindSummary> per_kind;
  long violations = 0;
  long errors = 0;
  LemmaSign lemma_sign = LemmaSign::minus;
  double lemma_sign_deviation = 0.0;
  std::vector<BoundKind> corollary_findings;
};

struct SweepReport {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  SweepSummary summary;
};

/// FRACINEQ_THREADS caps the worker count; default is the hardware count.
inline int default_thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("FRACINEQ_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

namespace detail {

inline std::string function_for_instance(const std::string& source, Rng& rng) {
  if (source == "deriv-random" || source == "ga-random" || source == "ga-s-random") {
    return source + ":" + std::to_string(rng.below(1000000000ULL));
  }
  return source;
}

inline bool kind_is_error_redraw(ErrorKind k) {
  return k == ErrorKind::hypothesis_not_certified || k == ErrorKind::domain_error;
}

inline SweepRow run_instance(const SweepSpec& spec, std::size_t kind_index, long local, long id) {
  const BoundKind kind = spec.kinds[kind_index];
  SweepRow row;
  row.id = id;
  row.report.kind = kind;
  Rng rng(derive_seed(spec.seed, kind_index + 1, static_cast<std::uint64_t>(local)));
  ErrorKind last = ErrorKind::hypothesis_not_certified;

  for (int attempt = 1; attempt <= spec.max_attempts; ++attempt) {
    row.attempts = attempt;
    // Draw every coordinate before anything can fail so the stream stays aligned.
    const double a = std::exp(rng.uniform(std::log(spec.interval_lo), std::log(spec.interval_hi / spec.ratio.lo)));
    const double rmax = std::max(spec.ratio.lo, std::min(spec.ratio.hi, spec.interval_hi / a));
    const double ratio = rng.log_uniform(spec.ratio.lo, rmax);
    const double xf = rng.uniform(spec.x_fraction.lo, spec.x_fraction.hi);
    Params p;
    p.alpha = rng.uniform(spec.alpha.lo, spec.alpha.hi);
    p.lambda = rng.uniform(spec.lambda.lo, spec.lambda.hi);
    p.q = rng.uniform(spec.q.lo, spec.q.hi);
    p.cls.s = std::min(1.0, rng.uniform(spec.s.lo, spec.s.hi));
    p.cls.m = std::min(1.0, rng.uniform(spec.m.lo, spec.m.hi));
    const std::string& source = spec.functions[rng.below(spec.functions.size())];
    const std::string fname = function_for_instance(source, rng);
    try {
      p.iv = Interval(a, a * ratio);
      p.x = std::clamp(a * std::pow(ratio, xf), p.a(), p.b());
      p = apply_kind_params(kind, p);
      row.report.params = p;
      row.report.function = fname;
      const GeneratorContext ctx{p.iv, hypothesis_class(kind.theorem), p.cls, p.q};
      const FunctionHandle f = resolve_function(fname, ctx);
      require_domain(f, hypothesis_range(kind.theorem, p));
      CertOptions cert = spec.cert;
      cert.seed = derive_seed(spec.cert.seed, static_cast<std::uint64_t>(id), static_cast<std::uint64_t>(attempt));
      const auto certificate = certify_hypothesis(kind.theorem, f, p, cert);
      if (!certificate.certified()) {
        last = ErrorKind::hypothesis_not_certified;
        continue;
      }
      std::optional<double> M;
      if (kind.corollary == Corollary::ostrowski) {
        const Interval r = ostrowski_range(kind.theorem, p);
        const double xp = kind.theorem == Theorem::sm ? std::pow(p.x, p.cls.m) : p.x;
        M = sampled_derivative_sup(f, r.a(), r.b(), {p.a(), p.b(), xp});
      }
      row.report = verify_instance(kind, f, p, certificate, M, spec.quad);
      if (!row.report.pass) {
        const auto tight = evaluate_instance(kind, f, p, M, QuadConfig::tight());
        row.violation_class = tight.pass ? "numerical" : "substantive";
      }
      return row;
    } catch (const Error& e) {
      last = e.kind();
      if (!kind_is_error_redraw(e.kind())) break;
    }
  }
  row.error = "error:" + std::string(to_string(last));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.report.lhs = row.report.rhs = row.report.slack = row.report.tol = nan;
  row.report.max_quad_err = nan;
  row.report.subdivisions = 0;
  row.report.pass = false;
  return row;
}

}  // namespace detail

/// Probe used to report the sign convention of the substituted lemma.
inline LemmaSign probe_lemma_sign(double* deviation = nullptr) {
  Params p;
  p.iv = Interval(0.5, 3.0);
  p.x = 0.9;
  p.alpha = 0.7;
  p.lambda = 1.0 / 3.0;
  return resolve_lemma_sign(lookup("log-squared"), p, QuadConfig::tight(), deviation);
}

inline SweepSummary summarize(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  SweepSummary s;
  for (const auto& k : spec.kinds) s.per_kind.push_back(KindSummary{k});
  const std::size_t n = static_cast<std::size_t>(spec.n_samples);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& ks = s.per_kind[i / n];
    const auto& r = rows[i];
    ++ks.instances;
    if (r.is_error()) {
      ++ks.errors;
      ++s.errors;
      continue;
    }
    ks.min_slack = std::min(ks.min_slack, r.report.slack);
    if (r.report.pass) {
      ++ks.passed;
    } else {
      ++ks.violations;
      ++s.violations;
      if (r.violation_class == "numerical") ++ks.numerical;
      else ++ks.substantive;
    }
  }
  s.lemma_sign = probe_lemma_sign(&s.lemma_sign_deviation);
  for (const auto& row : audit_corollaries(4).rows) {
    if (row.mismatch) s.corollary_findings.push_back(row.kind);
  }
  return s;
}

/// Runs every instance of the spec on `threads` workers (0 = default).
inline SweepReport run_sweep(const SweepSpec& spec, int threads = 0) {
  spec.validate();
  SweepReport report;
  report.spec = spec;
  const long per_kind = spec.n_samples;
  const long total = per_kind * static_cast<long>(spec.kinds.size());
  report.rows.resize(static_cast<std::size_t>(total));

  std::atomic<long> next{0};
  auto worker = [&] {
    for (long i = next++; i < total; i = next++) {
      report.rows[static_cast<std::size_t>(i)] =
          detail::run_instance(spec, static_cast<std::size_t>(i / per_kind), i % per_kind, i);
    }
  };
  const int n = std::max(1, threads > 0 ? threads : default_thread_count());
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  report.summary = summarize(spec, report.rows);
  return report;
}

// ---------------------------------------------------------------------------
// Report writers

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* kCsvHeader =
    "instance_id,kind,corollary,function,a,b,x,alpha,lambda,q,s,m,lhs,rhs,slack,pass,max_quad_err,"
    "subdivisions,wall_ms";

inline std::string pass_field(const SweepRow& r) {
  if (r.is_error()) return r.error;
  return r.report.pass ? "true" : "false";
}

inline void write_csv_row(std::ostream& out, const SweepRow& r, bool with_wall_time = true) {
  const auto& rep = r.report;
  const auto& p = rep.params;
  out << r.id << ',' << to_string(rep.kind.theorem) << ',' << to_string(rep.kind.corollary) << ','
      << rep.function << ',' << format_double(p.a()) << ',' << format_double(p.b()) << ','
      << format_double(p.x) << ',' << format_double(p.alpha) << ',' << format_double(p.lambda) << ','
      << format_double(p.q) << ',' << format_double(p.cls.s) << ',' << format_double(p.cls.m) << ','
      << format_double(rep.lhs) << ',' << format_double(rep.rhs) << ',' << format_double(rep.slack) << ','
      << pass_field(r) << ',' << format_double(rep.max_quad_err) << ',' << rep.subdivisions << ','
      << (with_wall_time ? format_double(rep.wall_ms) : std::string()) << '\n';
}

inline void write_csv(std::ostream& out, const SweepReport& report, bool with_wall_time = true) {
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) write_csv_row(out, r, with_wall_time);
}

/// CSV with the wall-time column left empty: identical across repeated runs.
inline std::string csv_without_wall_time(const SweepReport& report) {
  std::ostringstream out;
  write_csv(out, report, false);
  return out.str();
}

inline nlohmann::json to_json(const SweepReport& report) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json rows = json::array();
  for (const auto& r : report.rows) {
    const auto& rep = r.report;
    const auto& p = rep.params;
    json row = {{"instance_id", r.id},
                {"kind", std::string(to_string(rep.kind.theorem))},
                {"corollary", std::string(to_string(rep.kind.corollary))},
                {"function", rep.function},
                {"a", num(p.a())},
                {"b", num(p.b())},
                {"x", num(p.x)},
                {"alpha", num(p.alpha)},
                {"lambda", num(p.lambda)},
                {"q", num(p.q)},
                {"s", num(p.cls.s)},
                {"m", num(p.cls.m)},
                {"lhs", num(rep.lhs)},
                {"rhs", num(rep.rhs)},
                {"slack", num(rep.slack)},
                {"pass", pass_field(r)},
                {"max_quad_err", num(rep.max_quad_err)},
                {"subdivisions", rep.subdivisions},
                {"wall_ms", num(rep.wall_ms)}};
    if (!r.violation_class.empty()) row["violation_class"] = r.violation_class;
    rows.push_back(std::move(row));
  }
  json kinds = json::array();
  for (const auto& k : report.summary.per_kind) {
    kinds.push_back({{"kind", to_string(k.kind)},
                     {"instances", k.instances},
                     {"passed", k.passed},
                     {"violations", k.violations},
                     {"numerical_violations", k.numerical},
                     {"substantive_violations", k.substantive},
                     {"errors", k.errors},
                     {"min_slack", num(k.min_slack)}});
  }
  json findings = json::array();
  for (const auto& k : report.summary.corollary_findings) findings.push_back(to_string(k));
  return {{"rows", rows},
          {"summary",
           {{"seed", report.spec.seed},
            {"n_samples", report.spec.n_samples},
            {"violations", report.summary.violations},
            {"errors", report.summary.errors},
            {"lemma_m_sign", std::string(to_string(report.summary.lemma_sign))},
            {"lemma_m_sign_deviation", report.summary.lemma_sign_deviation},
            {"corollary_findings", findings},
            {"per_kind", kinds}}}};
}

inline void print_summary(std::ostream& out, const SweepReport& report) {
  const auto& s = report.summary;
  out << "lemma (x^m, a^m, b^m) second-member sign: " << to_string(s.lemma_sign) << '\n';
  for (const auto& k : s.per_kind) {
    out << to_string(k.kind) << ": " << k.instances << " instances, " << k.passed << " pass, " << k.violations
        << " violations (" << k.numerical << " numerical, " << k.substantive << " substantive), " << k.errors
        << " errors, min slack " << format_double(k.min_slack) << '\n';
  }
  out << "corollary findings:";
  for (const auto& k : s.corollary_findings) out << ' ' << to_string(k);
  out << '\n';
}

// ---------------------------------------------------------------------------
// Identity suite

struct IdentitySuiteOptions {
  std::vector<std::string> functions;  // empty = whole registry
  std::vector<double> alphas = {0.5, 1.0, 2.0};
  std::vector<double> lambdas = {0.0, 1.0 / 3.0, 0.5, 1.0};
  std::vector<double> ms = {0.3, 0.7, 1.0};
  double a = 0.5, b = 3.0;
  std::uint64_t seed = 42;
  double tol = 1e-7;
};

struct IdentityFailure {
  std::string function;
  Params params;
  double direct = 0.0, lemma = 0.0;
  bool m_form = false;
};

struct IdentitySuiteResult {
  long evaluations = 0;
  double max_dev = 0.0;    // |direct - lemma| / (1 + |direct|)
  double max_dev_m = 0.0;  // same for the (x^m, a^m, b^m) form
  LemmaSign sign = LemmaSign::minus;
  double sign_dev_chosen = 0.0;  // worst m = 1 deviation under the chosen sign
  double sign_dev_other = 0.0;   // best m = 1 deviation under the other sign
  std::vector<IdentityFailure> failures;
  std::vector<std::string> errors;
  bool pass() const { return failures.empty() && errors.empty(); }
};

/// Dual evaluation of I_f (definition vs derivative representation) over
/// functions x alpha x lambda x {a, sqrt(ab), b, seeded interior x}, then the
/// same for the (x^m, a^m, b^m) form with the sign fixed by the m = 1
/// reduction.
inline IdentitySuiteResult check_identity_suite(const IdentitySuiteOptions& opt = {}) {
  IdentitySuiteResult res;
  const QuadConfig cfg = QuadConfig::tight();
  std::vector<FunctionHandle> fs;
  if (opt.functions.empty()) fs = registry();
  for (const auto& name : opt.functions) fs.push_back(lookup(name));

  const Interval iv(opt.a, opt.b);
  Rng rng(derive_seed(opt.seed, 0x1D));
  const double interior = std::exp(rng.uniform(std::log(opt.a), std::log(opt.b)));
  const std::vector<double> xs = {opt.a, iv.geometric_mid(), opt.b, interior};

  std::vector<Params> grid;
  for (double al : opt.alphas) {
    for (double la : opt.lambdas) {
      for (double x : xs) {
        Params p;
        p.iv = iv;
        p.x = x;
        p.alpha = al;
        p.lambda = la;
        grid.push_back(p);
      }
    }
  }

  // Sign of the substituted form: compare both signs at m = 1 against the plain lemma.
  double worst_plus = 0.0, worst_minus = 0.0;
  for (const auto& f : fs) {
    for (const auto& p : grid) {
      try {
        const double ref = i_f_lemma(f, p, cfg);
        const double scale = 1.0 + std::abs(ref);
        worst_plus = std::max(worst_plus, std::abs(i_f_m_lemma(f, p, LemmaSign::plus, cfg) - ref) / scale);
        worst_minus = std::max(worst_minus, std::abs(i_f_m_lemma(f, p, LemmaSign::minus, cfg) - ref) / scale);
      } catch (const Error& e) {
        res.errors.push_back(f.name + ": " + e.what());
      }
    }
  }
  res.sign = worst_minus <= worst_plus ? LemmaSign::minus : LemmaSign::plus;
  res.sign_dev_chosen = std::min(worst_plus, worst_minus);
  res.sign_dev_other = std::max(worst_plus, worst_minus);

  for (const auto& f : fs) {
    for (const auto& base : grid) {
      try {
        const double d = i_f_direct(f, base, cfg);
        const double l = i_f_lemma(f, base, cfg);
        const double dev = std::abs(d - l) / (1.0 + std::abs(d));
        ++res.evaluations;
        res.max_dev = std::max(res.max_dev, dev);
        if (dev > opt.tol) res.failures.push_back({f.name, base, d, l, false});
        for (double m : opt.ms) {
          Params p = base;
          p.cls.m = m;
          const double dm = i_f_m_direct(f, p, cfg);
          const double lm = i_f_m_lemma(f, p, res.sign, cfg);
          const double devm = std::abs(dm - lm) / (1.0 + std::abs(dm));
          ++res.evaluations;
          res.max_dev_m = std::max(res.max_dev_m, devm);
          if (devm > opt.tol) res.failures.push_back({f.name, p, dm, lm, true});
        }
      } catch (const Error& e) {
        res.errors.push_back(f.name + ": " + e.what());
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Hermite-Hadamard chain suite

struct HhSuiteOptions {
  int n_functions = 100;
  std::vector<double> alphas = {0.5, 1.0, 2.0, 3.0};
  std::uint64_t seed = 42;
  double tol = 1e-9;
};

struct HhSuiteResult {
  long chains = 0;
  double min_left_gap = std::numeric_limits<double>::infinity();   // middle - f(sqrt(ab))
  double min_right_gap = std::numeric_limits<double>::infinity();  // (f(a)+f(b))/2 - middle
  double max_equality_gap = 0.0;        // constants (both links) and ln (left link)
  double max_classical_dev = 0.0;       // alpha = 1 middle vs classical mean of f o exp
  bool classical_chain_holds = true;    // g((A+B)/2) <= mean <= (g(A)+g(B))/2 at alpha = 1
  bool anchor_ok = true;                // f(x) = x on [1, 4], alpha = 1
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

inline HhSuiteResult check_hh_suite(const HhSuiteOptions& opt = {}) {
  HhSuiteResult res;
  const QuadConfig cfg = QuadConfig::tight();
  Rng rng(derive_seed(opt.seed, 0x44));
  auto fail_row = [&](const std::string& what) { res.failures.push_back(what); };

  for (int i = 0; i < opt.n_functions; ++i) {
    const double a = rng.uniform(0.2, 5.0);
    const double b = a * rng.uniform(1.2, 8.0);
    const Interval iv(a, b);
    const std::uint64_t fseed = derive_seed(opt.seed, 0x6A5, static_cast<std::uint64_t>(i));
    const auto f = make_ga_convex(fseed, iv);
    const double g = f(iv.geometric_mid());
    const double avg = 0.5 * (f(a) + f(b));
    for (double al : opt.alphas) {
      const double mid = hh_middle(f, iv, al, cfg);
      const double left = mid - g, right = avg - mid;
      ++res.chains;
      res.min_left_gap = std::min(res.min_left_gap, left);
      res.min_right_gap = std::min(res.min_right_gap, right);
      if (left < -opt.tol || right < -opt.tol) {
        fail_row(f.name + " alpha=" + format_double(al) + " gaps " + format_double(left) + ", " + format_double(right));
      }
      if (al == 1.0) {
        // Classical anchor: with g = f o exp on [A, B] = [ln a, ln b], the middle
        // term is the mean of g and the chain is the classical one.
        const double A = std::log(a), B = std::log(b);
        auto r = integrate([&](double t) { return f(std::exp(t)); }, A, B, cfg.with_breakpoints(interior_points(A, B, [&] {
                             std::vector<double> k;
                             for (double kk : f.kinks) k.push_back(std::log(kk));
                             return k;
                           }())));
        const double mean = r.value / (B - A);
        res.max_classical_dev = std::max(res.max_classical_dev, std::abs(mean - mid) / (1.0 + std::abs(mid)));
        const double gm = f(std::exp(0.5 * (A + B)));
        const double ge = 0.5 * (f(std::exp(A)) + f(std::exp(B)));
        if (gm > mean + opt.tol || mean > ge + opt.tol) res.classical_chain_holds = false;
      }
    }
  }
  if (res.max_classical_dev > opt.tol) fail_row("alpha = 1 middle term differs from the classical mean");
  if (!res.classical_chain_holds) fail_row("classical chain failed at alpha = 1");

  // Equality cases.
  for (double al : opt.alphas) {
    for (const char* name : {"const-1", "const-5"}) {
      const auto f = lookup(name);
      const Interval iv(0.5, 3.0);
      const double mid = hh_middle(f, iv, al, cfg);
      const double gap = std::max(std::abs(mid - f(1.0)), std::abs(mid - f(1.0)));
      res.max_equality_gap = std::max(res.max_equality_gap, gap);
    }
    const auto ln = lookup("log");
    const Interval iv(0.5, 3.0);
    const double mid = hh_middle(ln, iv, al, cfg);
    res.max_equality_gap = std::max(res.max_equality_gap, std::abs(mid - std::log(iv.geometric_mid())));
  }
  if (res.max_equality_gap > opt.tol) fail_row("equality cases exceed tolerance: " + format_double(res.max_equality_gap));

  {
    const auto f = lookup("identity");
    const Interval iv(1.0, 4.0);
    const double mid = hh_middle(f, iv, 1.0, cfg);
    res.anchor_ok = 2.0 <= mid + opt.tol && mid <= 2.5 + opt.tol;
    if (!res.anchor_ok) fail_row("identity on [1,4]: middle " + format_double(mid) + " outside [2, 2.5]");
  }
  return res;
}

// ---------------------------------------------------------------------------
// Structural identities of the auxiliary integrals

struct StructuralResult {
  int tuples = 0;
  double max_dev = 0.0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

inline StructuralResult check_structural_identities(int n_tuples = 50, std::uint64_t seed = 42, double tol = 1e-9) {
  StructuralResult res;
  const QuadConfig cfg = QuadConfig::tight();
  Rng rng(derive_seed(seed, 0x57));
  auto check = [&](const std::string& what, double u, double v) {
    const double dev = std::abs(u - v);
    res.max_dev = std::max(res.max_dev, dev / (1.0 + std::abs(v)));
    if (dev > tol * (1.0 + std::abs(v))) res.failures.push_back(what + ": " + format_double(u) + " vs " + format_double(v));
  };
  for (int i = 0; i < n_tuples; ++i) {
    const double a = rng.uniform(0.2, 5.0);
    const double b = a * rng.uniform(1.2, 10.0);
    Params p;
    p.iv = Interval(a, b);
    p.x = std::exp(rng.uniform(std::log(a), std::log(b)));
    p.alpha = rng.uniform(0.2, 5.0);
    p.lambda = rng.u01();
    p.q = rng.uniform(1.0, 4.0);
    p.cls = {rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)};
    ++res.tuples;

    Params s1 = p;
    s1.cls.s = 1.0;
    check("A2+A3=B1", a_integral(2, s1, cfg) + a_integral(3, s1, cfg), b_integral(1, s1, cfg));
    check("A4+A5=B2", a_integral(4, s1, cfg) + a_integral(5, s1, cfg), b_integral(2, s1, cfg));

    const double qm = p.q * p.cls.m;
    check("C1+C2=B1(qm)", c_integral(1, p, cfg) + c_integral(2, p, cfg), b_integral_at(1, p, qm, cfg));
    check("C3+C4=B2(qm)", c_integral(3, p, cfg) + c_integral(4, p, cfg), b_integral_at(2, p, qm, cfg));

    Params m1 = p;
    m1.cls.m = 1.0;
    check("C1=A2 at m=1", c_integral(1, m1, cfg), a_integral(2, m1, cfg));
    check("C3=A4 at m=1", c_integral(3, m1, cfg), a_integral(4, m1, cfg));
    Params m1s1 = m1;
    m1s1.cls.s = 1.0;
    check("C2=A3 at m=s=1", c_integral(2, m1s1, cfg), a_integral(3, m1s1, cfg));
    check("C4=A5 at m=s=1", c_integral(4, m1s1, cfg), a_integral(5, m1s1, cfg));

    Params xa = p;
    xa.x = a;
    check("B1(x=a)=A1", b_integral(1, xa, cfg), a1_closed(p.alpha, p.lambda));
    Params xb = p;
    xb.x = b;
    check("B2(x=b)=A1", b_integral(2, xb, cfg), a1_closed(p.alpha, p.lambda));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Left-side dual paths of the corollaries

struct LhsPathResult {
  double max_dev = 0.0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

/// Each corollary's displayed middle expression against the normalized
/// |I_f|, for several registry functions and parameters.
inline LhsPathResult check_corollary_lhs_paths(double tol = 1e-9) {
  LhsPathResult res;
  const QuadConfig cfg = QuadConfig::tight();
  auto check = [&](const std::string& what, double u, double v) {
    const double dev = std::abs(u - v);
    res.max_dev = std::max(res.max_dev, dev / (1.0 + std::abs(v)));
    if (dev > tol * (1.0 + std::abs(v))) res.failures.push_back(what + ": " + format_double(u) + " vs " + format_double(v));
  };
  const std::vector<std::pair<std::string, Interval>> cases = {
      {"log-squared", Interval(1.0, std::exp(1.0))},
      {"exp", Interval(0.5, 2.0)},
      {"sqrt", Interval(0.3, 5.0)},
      {"paper-piecewise", Interval(0.5, 3.5)},
  };
  for (const auto& [name, iv] : cases) {
    const auto f = lookup(name);
    for (double al : {0.4, 1.0, 2.5}) {
      for (NamedForm k : {NamedForm::simpson, NamedForm::midpoint, NamedForm::trapezoid, NamedForm::ostrowski}) {
        Params p;
        p.iv = iv;
        p.alpha = al;
        p.lambda = forced_lambda(k);
        p.x = k == NamedForm::ostrowski ? std::exp(0.3 * std::log(iv.a()) + 0.7 * std::log(iv.b())) : iv.geometric_mid();
        const std::string tag = name + " " + std::string(to_string(k)) + " alpha=" + format_double(al);
        check(tag, named_lhs_display(k, f, p, cfg), named_lhs(k, f, p, cfg));
        // m-forms: the displays are the plain ones on [a^m, b^m] at x^m.
        for (double m : {0.5, 0.8}) {
          Params pm = p;
          pm.cls.m = m;
          Params sub = p;
          sub.iv = Interval(std::pow(iv.a(), m), std::pow(iv.b(), m));
          sub.x = std::clamp(std::pow(p.x, m), sub.iv.a(), sub.iv.b());
          if (k != NamedForm::ostrowski) sub.x = sub.iv.geometric_mid();
          double disp = named_lhs_display(k, f, sub, cfg);
          if (k == NamedForm::ostrowski) disp /= std::pow(m, al);
          check(tag + " m=" + format_double(m), disp, named_lhs_m(k, f, pm, cfg));
        }
      }
      // alpha = 1 written with the classical integral.
      Params p1;
      p1.iv = iv;
      p1.alpha = 1.0;
      p1.lambda = 0.25;
      p1.x = std::exp(0.6 * std::log(iv.a()) + 0.4 * std::log(iv.b()));
      check(name + " s1-alpha1", i_f_alpha1_classical(f, p1, cfg), i_f_direct(f, p1, cfg));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Acceptance

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int sweep_samples = 1000;       // per theorem, criterion 5
  int determinism_samples = 100;  // per theorem, criterion 9
  int threads = 0;
};

namespace detail {

template <class F>
CriterionResult timed(int id, std::string name, F&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

inline CriterionResult criterion_closed_form() {
  return detail::timed(1, "closed-form A1 vs quadrature", [](CriterionResult& r) {
    double worst = 0.0;
    int n = 0;
    for (double al : {0.5, 1.0, 2.0, 3.7}) {
      for (double la : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.9, 1.0}) {
        QuadConfig cfg = QuadConfig::tight();
        if (la > 0.0 && la < 1.0) cfg.breakpoints = {std::pow(la, 1.0 / al)};
        const double q = integrate([&](double t) { return std::abs(std::pow(t, al) - la); }, 0.0, 1.0, cfg).value;
        worst = std::max(worst, std::abs(q - a1_closed(al, la)));
        ++n;
      }
    }
    r.pass = worst <= 1e-10;
    r.detail = std::to_string(n) + " points, max |diff| " + format_double(worst);
  });
}

inline CriterionResult criterion_operator_anchors() {
  return detail::timed(2, "fractional-operator anchors", [](CriterionResult& r) {
    const QuadConfig cfg = QuadConfig::tight();
    const auto one = lookup("const-1");
    Rng rng(derive_seed(42, 0xA2));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double a = rng.uniform(0.0, 2.0);
      const double x = a + rng.uniform(0.1, 3.0);
      const double al = i % 4 == 0 ? 0.3 : i % 4 == 1 ? 0.5 : rng.uniform(0.2, 4.0);
      const double ref = std::pow(x - a, al) / gamma(al + 1.0);
      worst = std::max(worst, std::abs(rl_left(one, a, FracOrder(al), x, cfg).value - ref));
    }
    double worst_red = 0.0;
    for (const auto& f : registry()) {
      const double a = 0.5, x = 3.0;
      const double j = rl_left(f, a, FracOrder(1.0), x, cfg).value;
      const double c = integrate(f.value, a, x, cfg.with_breakpoints(interior_points(a, x, f.kinks))).value;
      worst_red = std::max(worst_red, std::abs(j - c));
    }
    r.pass = worst <= 1e-9 && worst_red <= 1e-9;
    r.detail = "kernel anchor max |diff| " + format_double(worst) + ", alpha=1 reduction max |diff| " +
               format_double(worst_red);
  });
}

inline CriterionResult criterion_identity(std::string* sign_out = nullptr) {
  return detail::timed(3, "lemma dual evaluation", [&](CriterionResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = check_identity_suite();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = res.pass() && secs < 60.0 && res.sign_dev_chosen <= 1e-7;
    r.detail = std::to_string(res.evaluations) + " evaluations, max dev " + format_double(res.max_dev) +
               ", m-form max dev " + format_double(res.max_dev_m) + ", sign=" + std::string(to_string(res.sign)) +
               " (other sign dev " + format_double(res.sign_dev_other) + ")";
    if (!res.errors.empty()) r.detail += ", first error: " + res.errors.front();
    if (sign_out) *sign_out = std::string(to_string(res.sign));
  });
}

inline CriterionResult criterion_hh() {
  return detail::timed(4, "Hermite-Hadamard chain", [](CriterionResult& r) {
    const auto res = check_hh_suite();
    r.pass = res.pass();
    r.detail = std::to_string(res.chains) + " chains, min gaps " + format_double(res.min_left_gap) + " / " +
               format_double(res.min_right_gap) + ", equality max " + format_double(res.max_equality_gap);
    if (!res.failures.empty()) r.detail += ", first failure: " + res.failures.front();
  });
}

inline CriterionResult criterion_sweeps(const AcceptanceOptions& opt) {
  return detail::timed(5, "slack nonnegativity sweeps", [&](CriterionResult& r) {
    SweepSpec spec;
    spec.n_samples = opt.sweep_samples;
    const auto rep = run_sweep(spec, opt.threads);
    std::ostringstream d;
    for (const auto& k : rep.summary.per_kind) {
      d << to_string(k.kind) << ": " << k.instances << " inst, " << k.violations << " viol, " << k.errors
        << " err, min slack " << format_double(k.min_slack) << "; ";
    }
    r.pass = rep.summary.violations == 0 && rep.summary.errors == 0;
    r.detail = d.str();
  });
}

inline CriterionResult criterion_structural() {
  return detail::timed(6, "structural identities", [](CriterionResult& r) {
    const auto res = check_structural_identities();
    r.pass = res.pass();
    r.detail = std::to_string(res.tuples) + " tuples, max rel dev " + format_double(res.max_dev);
    if (!res.failures.empty()) r.detail += ", first failure: " + res.failures.front();
  });
}

inline CriterionResult criterion_separating_example() {
  return detail::timed(7, "separating example", [](CriterionResult& r) {
    const auto f = lookup("paper-piecewise");
    const Interval iv(0.01, 4.0);
    const auto quasi = check_class(f, ConvexityClass::quasi, {}, iv, 41, 1000, 42);
    const auto ga = check_class(f, ConvexityClass::ga, {}, iv, 41, 1000, 42);
    const auto gg = check_class(f, ConvexityClass::gg, {}, iv, 41, 1000, 42);
    r.pass = quasi.certified() && !ga.certified() && !gg.certified();
    std::ostringstream d;
    d << "quasi " << to_string(quasi.verdict);
    for (const auto* c : {&ga, &gg}) {
      d << "; " << to_string(c->cls) << ' ' << to_string(c->verdict);
      if (c->witness) {
        d << " at (" << format_double(c->witness->x) << ", " << format_double(c->witness->y) << ", "
          << format_double(c->witness->t) << ") lhs " << format_double(c->witness->lhs) << " > rhs "
          << format_double(c->witness->rhs);
      }
    }
    r.detail = d.str();
  });
}

inline CriterionResult criterion_corollary_audit() {
  return detail::timed(8, "corollary consistency audit", [](CriterionResult& r) {
    const auto audit = audit_corollaries();
    const auto lhs = check_corollary_lhs_paths();
    r.pass = audit.pass() && lhs.pass();
    std::ostringstream d;
    d << "findings:";
    for (const auto& row : audit.rows) {
      if (row.mismatch) d << ' ' << to_string(row.kind);
    }
    d << "; unexpected " << audit.unexpected_mismatches.size() << ", missing " << audit.missing_findings.size()
      << ", uncorrected " << audit.uncorrected.size() << "; lhs paths max dev " << format_double(lhs.max_dev);
    if (!lhs.failures.empty()) d << ", first lhs failure: " << lhs.failures.front();
    r.detail = d.str();
  });
}

inline CriterionResult criterion_determinism(const AcceptanceOptions& opt) {
  return detail::timed(9, "sweep determinism", [&](CriterionResult& r) {
    SweepSpec spec;
    spec.n_samples = opt.determinism_samples;
    const auto one = csv_without_wall_time(run_sweep(spec, 1));
    const auto many = csv_without_wall_time(run_sweep(spec, 3));
    r.pass = one == many;
    r.detail = std::to_string(spec.n_samples * static_cast<int>(spec.kinds.size())) +
               " rows, 1 vs 3 workers " + (r.pass ? "identical" : "differ");
  });
}

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {}) {
  return {criterion_closed_form(),     criterion_operator_anchors(), criterion_identity(),
          criterion_hh(),              criterion_sweeps(opt),        criterion_structural(),
          criterion_separating_example(), criterion_corollary_audit(), criterion_determinism(opt)};
}

inline void print_criterion(std::ostream& out, const CriterionResult& c) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2fs", c.seconds);
  out << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ", " << secs << "): " << c.detail
      << '\n';
}

}  // namespace fracineq
