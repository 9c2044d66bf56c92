#include "schatten/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "schatten/bounds.hpp"
#include "schatten/cli/io.hpp"
#include "schatten/cli/report.hpp"
#include "schatten/cli/validate.hpp"
#include "schatten/errors.hpp"
#include "schatten/sketch.hpp"
#include "schatten/variance.hpp"

namespace schatten::cli {

namespace {

struct Common {
  std::string format = "json";
  std::optional<unsigned> threads;
};

unsigned resolve_threads(const Common& c) {
  if (c.threads) return std::max(1U, *c.threads);
  if (const char* env = std::getenv("SCHATTEN_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InputError(std::string("SCHATTEN_THREADS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

void require_order(int p, int n) {
  if (p < 1) throw InputError("p must be ≥ 1");
  if (n < p) throw InputError("n must be ≥ p (p=" + std::to_string(p) + ", n=" + std::to_string(n) + ")");
}

Json spectrum_json(const Spectrum& s) {
  Json a = Json::array();
  for (double v : s.eigenvalues()) a.push_back(v);
  return a;
}

void emit(std::ostream& out, Format f, const Json& report, const CsvTable& table) {
  switch (f) {
    case Format::Json: out << report.dump(2) << '\n'; break;
    case Format::Csv: table.write(out); break;
    case Format::Text: write_text(out, report); break;
  }
}

// ---- estimate --------------------------------------------------------------

struct EstimateArgs {
  std::string matrix;
  std::string spectrum;
  int p = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::optional<int> reps;
};

int cmd_estimate(const EstimateArgs& a, const Common& c, std::ostream& out) {
  const Format f = parse_format(c.format);
  require_order(a.p, a.n);
  if (a.matrix.empty() == a.spectrum.empty()) {
    throw InputError("exactly one of --matrix or --spectrum is required");
  }
  if (a.reps && *a.reps < 1) throw InputError("reps must be ≥ 1");
  const LoadedInput in = a.matrix.empty() ? load_spectrum(a.spectrum) : load_matrix(a.matrix);
  const TracePowerTable table(in.spectrum, 4 * a.p);

  Manifest m;
  m.subcommand = "estimate";
  m.params = {{"p", a.p}, {"n", a.n}, {"d", in.spectrum.dimension()}};
  m.params["reps"] = a.reps ? Json(*a.reps) : Json(nullptr);
  m.inputs.push_back(in);
  m.seed = a.seed;

  Json report;
  report["manifest"] = m.to_json();
  report["target"] = table[a.p];
  CsvTable csv({"p", "n", "d", "reps", "target", "estimate", "empirical_variance", "stderr_mean",
                "stderr_variance"});
  const std::string d = std::to_string(in.spectrum.dimension());
  if (!a.reps) {
    const Eigen::MatrixXd S = in.gram ? *in.gram : in.spectrum.as_diagonal();
    const Eigen::MatrixXd X =
        sample_sketch(a.n, static_cast<int>(in.spectrum.dimension()), derive_seed(a.seed, 0));
    const double v = estimate_vpn(X, S, a.p);
    report["estimate"] = v;
    csv.add_row({std::to_string(a.p), std::to_string(a.n), d, "", format_number(table[a.p]),
                 format_number(v), "", "", ""});
  } else {
    SketchConfig cfg;
    cfg.p = a.p;
    cfg.n = a.n;
    cfg.seed = a.seed;
    cfg.reps = *a.reps;
    cfg.spectrum = in.spectrum;
    cfg.gram = in.gram;
    const EstimateStats st = run_experiment(cfg, resolve_threads(c));
    report["stats"] = to_json(st);
    csv.add_row({std::to_string(a.p), std::to_string(a.n), d, std::to_string(st.reps),
                 format_number(table[a.p]), format_number(st.empirical_mean),
                 format_number(st.empirical_variance), format_number(st.stderr_mean),
                 format_number(st.stderr_variance)});
  }
  emit(out, f, report, csv);
  return kExitOk;
}

// ---- variance --------------------------------------------------------------

struct VarianceArgs {
  std::string spectrum;
  int p = 0;
  int n = 0;
  std::string method = "recursion";
};

int cmd_variance(VarianceArgs a, const Common& c, std::ostream& out) {
  if (a.method == "paper-literal") a.method = "single-sum";
  const Format f = parse_format(c.format);
  require_order(a.p, a.n);
  const LoadedInput in = load_spectrum(a.spectrum);
  const TracePowerTable table(in.spectrum, 4 * a.p);

  Manifest m;
  m.subcommand = "variance";
  m.params = {{"p", a.p}, {"n", a.n}, {"d", in.spectrum.dimension()}, {"method", a.method}};
  m.inputs.push_back(in);

  Json report;
  report["manifest"] = m.to_json();
  VarianceOptions opts;
  opts.threads = resolve_threads(c);
  std::optional<double> discrepancy;
  VarianceReport r;
  if (a.method == "recursion") {
    r = exact_variance(a.p, a.n, table, opts);
  } else if (a.method == "single-sum") {
    const auto lit = variance_single_sum(a.p, a.n, table);
    r = lit.literal;
    discrepancy = lit.discrepancy;
    report["normative_variance"] = lit.normative_variance;
    report["discrepancy"] = lit.discrepancy;
    report["convention"] = lit.convention;
  } else if (a.method == "brute") {
    const double pairs = std::pow(binomial(a.n, a.p).convert_to<double>(), 2);
    if (pairs > kBruteMaxPairs) {
      throw SizeGuardError("all-pairs enumeration limit: C(n,p)^2 <= 1e6; requested " +
                           format_number(pairs));
    }
    opts.enumeration = PatternEnumeration::AllPairs;
    r = exact_variance(a.p, a.n, table, opts);
  } else if (a.method == "oracle") {
    r = brute_variance(a.p, a.n, in.spectrum);
  } else {
    throw InputError("unknown method '" + a.method + "' (expected recursion, single-sum, brute or oracle)");
  }
  report["variance"] = to_json(r);

  CsvTable csv({"p", "n", "d", "method", "mean", "second_moment", "variance", "discrepancy"});
  csv.add_row({std::to_string(r.p), std::to_string(r.n), std::to_string(r.d), a.method,
               format_number(r.mean), format_number(r.second_moment), format_number(r.variance),
               format_number(discrepancy)});
  emit(out, f, report, csv);
  return kExitOk;
}

// ---- bounds ----------------------------------------------------------------

struct Range {
  int lo = 0;
  int hi = 0;
};

// "p=2:3,n=4:12,d=2:6"; a single value "p=2" is a one-point range.
std::map<std::string, Range> parse_grid(const std::string& spec) {
  std::map<std::string, Range> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("grid item '" + item + "' must look like key=a:b");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    if (key != "p" && key != "n" && key != "d") throw InputError("grid key must be p, n or d");
    Range r;
    try {
      const auto colon = val.find(':');
      r.lo = std::stoi(val.substr(0, colon));
      r.hi = colon == std::string::npos ? r.lo : std::stoi(val.substr(colon + 1));
    } catch (const std::exception&) {
      throw InputError("grid range '" + val + "' is not a:b with integers");
    }
    if (r.lo > r.hi) throw InputError("grid range '" + val + "' is empty");
    out[key] = r;
  }
  return out;
}

struct BoundsArgs {
  std::string spectrum;
  std::optional<int> p;
  std::optional<int> n;
  double kappa = 3.0;
  std::string grid;
};

BoundReport bound_with_exact(int p, int n, const Spectrum& s, double kappa, unsigned threads) {
  const TracePowerTable table(s, 4 * p);
  BoundReport b = new_bound(p, n, static_cast<int>(s.dimension()), table[p], kappa);
  VarianceOptions opts;
  opts.threads = threads;
  b.attach_exact(exact_variance(p, n, table, opts).variance);
  return b;
}

std::vector<std::string> bound_row(const BoundReport& b) {
  return {std::to_string(b.p),        std::to_string(b.n),          std::to_string(b.d),
          format_number(b.b1),        format_number(b.b2),          format_number(b.b3),
          format_number(b.b4),        format_number(b.new_bound),   format_number(b.kv_bound),
          format_number(b.exact_variance), format_number(b.slack), format_number(b.ratio)};
}

int cmd_bounds(const BoundsArgs& a, const Common& c, std::ostream& out) {
  const Format f = parse_format(c.format);
  if (!(a.kappa > 0.0)) throw InputError("kappa must be > 0");
  const unsigned threads = resolve_threads(c);
  std::optional<LoadedInput> in;
  if (!a.spectrum.empty()) in = load_spectrum(a.spectrum);

  Manifest m;
  m.subcommand = "bounds";
  m.params["kappa"] = a.kappa;
  if (in) m.inputs.push_back(*in);
  CsvTable csv({"p", "n", "d", "b1", "b2", "b3", "b4", "new_bound", "kv_bound", "exact_variance", "slack",
                "ratio"});
  Json report;

  if (a.grid.empty()) {
    if (!a.p || !a.n) throw InputError("--p and --n are required without --grid");
    if (!in) throw InputError("--spectrum is required without --grid");
    require_order(*a.p, *a.n);
    if (*a.p < 2) throw InputError("the comparison bound needs p ≥ 2");
    m.params["p"] = *a.p;
    m.params["n"] = *a.n;
    m.params["d"] = in->spectrum.dimension();
    const BoundReport b = bound_with_exact(*a.p, *a.n, in->spectrum, a.kappa, threads);
    report["manifest"] = m.to_json();
    report["bound"] = to_json(b);
    csv.add_row(bound_row(b));
  } else {
    auto g = parse_grid(a.grid);
    if (!g.count("p") || !g.count("n")) throw InputError("grid needs p and n ranges");
    if (in && g.count("d")) throw InputError("grid key d conflicts with --spectrum");
    if (!in && !g.count("d")) throw InputError("grid needs a d range or --spectrum");
    if (g["p"].lo < 2) throw InputError("the comparison bound needs p ≥ 2");
    const Range dr = in ? Range{static_cast<int>(in->spectrum.dimension()),
                                static_cast<int>(in->spectrum.dimension())}
                        : g["d"];
    if (dr.lo < 1) throw InputError("d must be ≥ 1");
    m.params["grid"] = a.grid;
    m.params["spectrum"] = in ? "input" : "identity";
    Json rows = Json::array();
    for (int p = g["p"].lo; p <= g["p"].hi; ++p) {
      for (int n = std::max(g["n"].lo, p); n <= g["n"].hi; ++n) {
        for (int d = dr.lo; d <= dr.hi; ++d) {
          const Spectrum s = in ? in->spectrum : Spectrum(std::vector<double>(static_cast<std::size_t>(d), 1.0));
          const BoundReport b = bound_with_exact(p, n, s, a.kappa, threads);
          rows.push_back(to_json(b));
          csv.add_row(bound_row(b));
        }
      }
    }
    report["manifest"] = m.to_json();
    report["rows"] = rows;
  }
  emit(out, f, report, csv);
  return kExitOk;
}

// ---- validate --------------------------------------------------------------

struct ValidateArgs {
  int p = 2;
  int n = 6;
  int d = 3;
  int reps = 200000;
  std::uint64_t seed = 0;
  std::string spectrum;
};

int cmd_validate(const ValidateArgs& a, const Common& c, std::ostream& out) {
  const Format f = parse_format(c.format);
  require_order(a.p, a.n);
  if (a.d < 1) throw InputError("d must be ≥ 1");
  std::optional<LoadedInput> in;
  if (!a.spectrum.empty()) in = load_spectrum(a.spectrum);
  const Spectrum s = in ? in->spectrum : Spectrum(std::vector<double>(static_cast<std::size_t>(a.d), 1.0));

  ValidateOptions o;
  o.p = a.p;
  o.n = a.n;
  o.reps = a.reps;
  o.seed = a.seed;
  o.threads = resolve_threads(c);
  const ValidationResult r = run_validation(o, s);

  Manifest m;
  m.subcommand = "validate";
  m.params = {{"p", a.p}, {"n", a.n}, {"d", s.dimension()}, {"reps", a.reps}};
  if (in) m.inputs.push_back(*in);
  m.seed = a.seed;
  Json report;
  report["manifest"] = m.to_json();
  report["spectrum"] = spectrum_json(s);
  const Json body = r.to_json();
  for (const auto& [k, v] : body.items()) report[k] = v;

  CsvTable csv({"section", "name", "status", "detail"});
  for (const auto& ch : r.checks) csv.add_row({"check", ch.name, to_string(ch.status), ch.detail});
  for (const auto& e : r.errata) {
    csv.add_row({"errata", e.name, e.expected ? "expected" : "unexpected",
                 "literal " + format_number(e.literal) + " vs normative " + format_number(e.normative)});
  }

  if (f == Format::Text) {
    for (const auto& ch : r.checks) {
      out << (ch.status == CheckStatus::Pass ? "PASS " : ch.status == CheckStatus::Fail ? "FAIL " : "SKIP ")
          << ch.name << ": " << ch.detail << '\n';
    }
    out << "SANDWICH (informational)\n";
    for (const auto& sw : r.sandwiches) {
      for (const auto& e : sw.entries) {
        out << "  " << (sw.kind == MomentKind::M ? "M" : "N") << " q=" << sw.q << ' ' << e.name << " ["
            << format_number(e.interval.lo) << ", " << format_number(e.interval.hi) << "] value "
            << format_number(sw.value) << (e.contains ? " inside" : " outside")
            << (e.condition_holds ? "" : " (case not applicable)") << '\n';
      }
    }
    out << "ERRATA\n";
    for (const auto& e : r.errata) {
      out << "  " << e.name << (e.expected ? " (expected)" : " (UNEXPECTED)") << ": literal "
          << format_number(e.literal) << " vs normative " << format_number(e.normative) << "; " << e.detail
          << '\n';
    }
    out << (r.passed() ? "RESULT pass\n" : "RESULT fail\n");
  } else {
    emit(out, f, report, csv);
  }
  return r.passed() ? kExitOk : kExitValidation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian-sketch Schatten norm estimator: exact variance, bounds and Monte Carlo checks",
               "schatten"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SCHATTEN_VERSION);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Output format: json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--threads", common.threads, "Worker threads (fallback: SCHATTEN_THREADS, then 1)");
  };

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Sample the estimator");
  auto* est_matrix = est->add_option("--matrix", ea.matrix, "CSV matrix B; S = B^T B");
  auto* est_spec = est->add_option("--spectrum", ea.spectrum, "JSON array of eigenvalues of S");
  est_matrix->excludes(est_spec);
  est->add_option("--p", ea.p, "Cycle length p")->required();
  est->add_option("--n", ea.n, "Number of sketch rows n")->required();
  est->add_option("--seed", ea.seed, "Master seed");
  est->add_option("--reps", ea.reps, "Replicates; omit for a single estimate");
  add_common(est);

  VarianceArgs va;
  auto* var = app.add_subcommand("variance", "Exact variance of the estimator");
  var->add_option("--spectrum", va.spectrum, "JSON array of eigenvalues of S")->required();
  var->add_option("--p", va.p, "Cycle length p")->required();
  var->add_option("--n", va.n, "Number of sketch rows n")->required();
  var->add_option("--method", va.method, "recursion, single-sum, brute or oracle");
  add_common(var);

  BoundsArgs ba;
  auto* bnd = app.add_subcommand("bounds", "Variance bounds against the exact variance");
  bnd->add_option("--spectrum", ba.spectrum, "JSON array of eigenvalues of S");
  bnd->add_option("--p", ba.p, "Cycle length p");
  bnd->add_option("--n", ba.n, "Number of sketch rows n");
  bnd->add_option("--kappa", ba.kappa, "Fourth-moment constant of the comparison bound");
  bnd->add_option("--grid", ba.grid, "Sweep, e.g. p=2:3,n=4:12,d=2:6 (identity spectra)");
  add_common(bnd);

  ValidateArgs vl;
  auto* val = app.add_subcommand("validate", "Run the consistency suite");
  val->add_option("--p", vl.p, "Cycle length p")->capture_default_str();
  val->add_option("--n", vl.n, "Number of sketch rows n")->capture_default_str();
  val->add_option("--d", vl.d, "Dimension of the identity spectrum")->capture_default_str();
  val->add_option("--reps", vl.reps, "Monte Carlo replicates")->capture_default_str();
  val->add_option("--seed", vl.seed, "Master seed")->capture_default_str();
  val->add_option("--spectrum", vl.spectrum, "JSON spectrum replacing the identity");
  add_common(val);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << SCHATTEN_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*est) return cmd_estimate(ea, common, out);
    if (*var) return cmd_variance(va, common, out);
    if (*bnd) return cmd_bounds(ba, common, out);
    return cmd_validate(vl, common, out);
  } catch (const SizeGuardError& e) {
    err << "error: size guard: " << e.what() << '\n';
    return kExitSizeGuard;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace schatten::cli
