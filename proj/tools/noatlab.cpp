// noatlab command-line harness. Payloads go to --out (or stdout), human
// diagnostics to stderr. Exit codes: 0 ok, 2 invalid input, 3/4 from certify.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "noatlab/circle_measures.hpp"
#include "noatlab/criterion.hpp"
#include "noatlab/gaussian.hpp"
#include "noatlab/measure_io.hpp"
#include "noatlab/name_source.hpp"
#include "noatlab/sbh.hpp"
#include "noatlab/symbolic.hpp"

using namespace noatlab;

namespace {

constexpr int kExitInvalid = 2;

struct Global {
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;
  bool to_stdout = false;
};

// Writes the payload to --out and/or stdout. With neither flag, stdout.
void emit(const Global& g, const std::string& payload) {
  if (!g.out.empty()) {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + g.out);
    f << payload;
  }
  if (g.out.empty() || g.to_stdout) std::cout << payload << std::flush;
}

double parse_real(const std::string& s) {
  if (s == "sqrt2-1") return std::numbers::sqrt2 - 1.0;
  if (s == "golden") return (std::sqrt(5.0) - 1.0) / 2.0;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: " + s);
  return v;
}

std::string g17(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

std::string jsonl(const nlohmann::json& j) { return j.dump() + "\n"; }

// ---------------------------------------------------------------------------
// measure
// ---------------------------------------------------------------------------

struct MeasureArgs {
  std::string kind;
  int N = 64;
  double rho = 0.5;
  double c = 0.3;
  int m = 2;
  std::vector<double> a;
  std::vector<long> freq;
  std::string in;
  std::string density;
  int grid = 0;
};

FourierTable build_measure(const MeasureArgs& a) {
  const auto& k = a.kind;
  if (k == "lebesgue") return lebesgue_table(a.N);
  if (k == "dirac") return dirac_table(a.N);
  if (k == "geometric") return geometric_table(a.rho, a.N);
  if (k == "riesz") return riesz_product(a.a, a.freq, a.N);
  if (k == "sqrt") return sqrt_template(a.c, a.N);
  if (k != "arcsine" && k != "arcsine4" && k != "subsample") throw std::invalid_argument("unknown measure: " + k);
  if (a.in.empty()) throw std::invalid_argument(k + " needs --in");
  // Templates and transforms of templates need not be positive definite.
  MeasureReadOptions opts;
  opts.check_psd = false;
  const auto src = read_measure_file(a.in, opts);
  if (k == "arcsine") return arcsine_transform(src);
  if (k == "arcsine4") return arcsine_fourth_transform(src);
  return power_subsample(src, a.m);
}

int cmd_measure(const Global& g, const MeasureArgs& a) {
  const auto t = build_measure(a);
  std::ostringstream os;
  write_measure(os, t);
  emit(g, os.str());
  if (!a.density.empty()) {
    const int grid = a.grid > 0 ? a.grid : std::max(4 * t.half_width() + 4, 1024);
    const auto d = density_on_grid(t, grid);
    std::ofstream f(a.density);
    if (!f) throw std::runtime_error("cannot open " + a.density);
    f << "theta,density\n";
    for (int j = 0; j < grid; ++j) f << g17(static_cast<double>(j) / grid) << ',' << g17(d[j]) << '\n';
  }
  std::cerr << "measure " << t.label() << ": N = " << t.half_width() << ", tail = " << t.tail_bound() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

struct CertifyArgs {
  std::string in;
  int k = 4;
  int window = 8;
  int heuristic_k = 8;
  int heuristic_window = 32;
  std::string scan;
  bool no_psd = false;
};

int exit_code(SbhVerdict v) {
  switch (v) {
    case SbhVerdict::CertifiedSbh: return 0;
    case SbhVerdict::CertifiedNotSbh: return 3;
    case SbhVerdict::Undecided: return 4;
  }
  return 4;
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw std::invalid_argument("range must look like 1..16");
  const int lo = std::stoi(s.substr(0, dots));
  const int hi = std::stoi(s.substr(dots + 2));
  if (lo < 1 || hi < lo) throw std::invalid_argument("bad range " + s);
  return {lo, hi};
}

int cmd_certify(const Global& g, const CertifyArgs& a) {
  MeasureReadOptions ro;
  ro.check_psd = !a.no_psd;
  const auto t = read_measure_file(a.in, ro);
  CertifyParams p;
  p.exhaustive = ExhaustiveParams{a.k, a.window};
  HeuristicOptions h;
  h.k = a.heuristic_k;
  h.window = a.heuristic_window;
  h.seed = g.seed;
  h.workers = g.workers;
  p.heuristic = h;
  p.workers = g.workers;

  if (a.scan.empty()) {
    const auto r = certify(t, p);
    emit(g, jsonl(to_json(r)));
    std::cerr << "verdict " << to_string(r.verdict) << '\n';
    return exit_code(r.verdict);
  }

  const auto [lo, hi] = parse_range(a.scan);
  std::string out;
  std::optional<int> first;
  SbhVerdict last = SbhVerdict::Undecided;
  for (int m = lo; m <= hi && m <= std::max(1, t.half_width()); ++m) {
    const auto r = certify(power_subsample(t, m), p);
    auto j = to_json(r);
    j["m"] = m;
    out += jsonl(j);
    last = r.verdict;
    if (r.verdict == SbhVerdict::CertifiedSbh) {
      first = m;
      break;
    }
  }
  out += jsonl({{"scan", a.scan}, {"first_certified_m", first ? nlohmann::json(*first) : nlohmann::json()}});
  emit(g, out);
  std::cerr << (first ? "first certified at m = " + std::to_string(*first) : std::string("no m certified")) << '\n';
  return first ? 0 : exit_code(last);
}

// ---------------------------------------------------------------------------
// system
// ---------------------------------------------------------------------------

struct SystemArgs {
  std::string kind;
  std::size_t L = std::size_t{1} << 20;
  int nmax = 16;
  std::optional<long> n;
  std::string alpha = "sqrt2-1";
  double beta = 0.8;
  double gamma = 0.0;
  double delta = 0.1;
  double delta0 = 0.5;
  long m_scale = 1;
  std::string cocycle = "01";
  std::size_t names = 0;
  std::size_t length = 64;
  std::string names_out;
};

SourceParams source_params(const SystemArgs& a) {
  SourceParams p;
  p.alpha = parse_real(a.alpha);
  p.beta = a.beta;
  p.gamma = a.gamma;
  p.delta = a.delta;
  p.delta0 = a.delta0;
  p.m_scale = a.m_scale;
  p.cocycle = a.cocycle;
  return p;
}

std::vector<CorrelationRow> system_rows(const SystemArgs& a) {
  std::vector<long> ns;
  if (a.n) {
    ns.push_back(*a.n);
  } else {
    for (long n = 0; n <= a.nmax; ++n) ns.push_back(n);
  }
  std::vector<CorrelationRow> rows;
  const double alpha = parse_real(a.alpha);
  if (a.kind == "rudin-shapiro") {
    const long top = *std::max_element(ns.begin(), ns.end());
    const auto t = empirical_correlation(rudin_shapiro_signs(a.L), static_cast<int>(std::max(0L, top)));
    for (long n : ns) rows.push_back({n, {t(n), 0.0, "empirical"}});
  } else if (a.kind == "nil") {
    NilRotation nr{alpha, a.beta, a.gamma};
    nr.validate();
    for (long n : ns) rows.push_back({n, {nil_rotation_correlation(nr, n), 0.0, "series"}});
  } else if (a.kind == "distal") {
    for (long n : ns) rows.push_back({n, {distal_integral(n, a.m_scale), 0.0, "exact"}});
  } else if (a.kind == "rotation") {
    const RotationCocycle rc{alpha, a.delta, a.delta0};
    rc.validate();
    for (long n : ns) rows.push_back({n, rotation_ac_cocycle_correlation(rc, n)});
  } else if (a.kind == "odometer") {
    const auto oc = OdometerCocycle::from_bits(a.cocycle);
    for (long n : ns) rows.push_back({n, {two_point_extension_correlation(oc, n), 0.0, "exact"}});
  } else {
    throw std::invalid_argument("unknown system: " + a.kind);
  }
  return rows;
}

int cmd_system(const Global& g, const SystemArgs& a) {
  if (a.names > 0) {
    if (a.names_out.empty()) throw std::invalid_argument("--names needs --names-out");
    const auto src = make_source(a.kind, source_params(a));
    const auto m = src->sample_names(a.names, a.length, g.seed, g.workers);
    std::ofstream f(a.names_out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + a.names_out);
    write_names(f, m);
    std::cerr << "wrote " << a.names << " names of length " << a.length << " to " << a.names_out << '\n';
  }
  const auto rows = system_rows(a);
  std::ostringstream os;
  write_correlation_csv(os, rows);
  emit(g, os.str());
  return 0;
}

// ---------------------------------------------------------------------------
// gaussian
// ---------------------------------------------------------------------------

struct GaussianArgs {
  std::string kind;
  double r = 0.5;
  std::uint64_t samples = 1000000;
  int level = 1;
  bool negative = false;
  std::optional<double> c;
  int N = 10000;
  std::string spec;
  int white = 0;
  int nmax = 8;
  int max_order = 10000;
};

int cmd_gaussian(const Global& g, const GaussianArgs& a) {
  if (a.kind == "orthant") {
    const auto spec = GaussianSpec::from_autocov({1.0, a.r});
    const auto rep = a.level == 1 ? sign_orthant_mc(spec, 1, a.samples, g.seed, g.workers)
                                  : product_orthant_mc(spec, 1, a.level, a.samples, g.seed, g.workers, a.negative);
    emit(g, jsonl(to_json(rep)));
    std::cerr << rep.event << ": " << rep.estimate << " vs " << rep.formula_value << " (z = " << rep.z_score << ")\n";
    return 0;
  }
  if (a.kind == "constants") {
    const auto rep = gnoat_constant_check(a.c.value_or(gnoat_default_c()), a.N, g.workers);
    emit(g, jsonl(to_json(rep)));
    std::cerr << "series margin " << rep.series_margin << ", pipeline " << to_string(rep.pipeline_verdict) << '\n';
    return 0;
  }
  if (a.kind == "cocycle") {
    GaussianSpec spec;
    if (!a.spec.empty()) {
      spec = GaussianSpec::from_table(read_measure_file(a.spec));
    } else if (a.white > 0) {
      spec = GaussianSpec::white_noise(a.white);
    } else {
      throw std::invalid_argument("cocycle needs --spec FILE or --white N");
    }
    const auto t = cocycle_correlation_table(spec, a.max_order, a.nmax);
    std::ostringstream os;
    write_measure(os, t);
    emit(g, os.str());
    return 0;
  }
  throw std::invalid_argument("unknown gaussian command: " + a.kind);
}

// ---------------------------------------------------------------------------
// funny
// ---------------------------------------------------------------------------

struct FunnyArgs {
  SystemArgs sys;
  LambdaFamily fam;
  double eps = 0.1;
  std::size_t samples = 10000;
  double p0 = 0.6;
};

int cmd_funny(const Global& g, FunnyArgs a) {
  auto p = source_params(a.sys);
  p.p0 = a.p0;
  const auto src = make_source(a.sys.kind, p);
  const auto rep = funny_word_search(*src, a.fam, a.eps, a.samples, g.seed, g.workers);
  std::string out = jsonl(summary_json(rep));
  for (const auto& c : rep.candidates) out += jsonl(to_json(c));
  emit(g, out);
  const auto& best = rep.candidates[rep.best];
  std::cerr << rep.source << ": best k*mu = " << best.k_times_mass << " vs bound " << rep.bound << ", "
            << rep.violations << " of " << rep.candidates.size() << " candidates above bound + 4 se\n";
  return 0;
}

void add_system_params(CLI::App* cmd, SystemArgs& s) {
  cmd->add_option("--alpha", s.alpha, "rotation number (number, sqrt2-1 or golden)")->capture_default_str();
  cmd->add_option("--beta", s.beta)->capture_default_str();
  cmd->add_option("--gamma", s.gamma)->capture_default_str();
  cmd->add_option("--delta", s.delta)->capture_default_str();
  cmd->add_option("--delta0", s.delta0)->capture_default_str();
  cmd->add_option("--m-scale", s.m_scale)->capture_default_str();
  cmd->add_option("--cocycle", s.cocycle, "odometer cocycle as a bit string of length 2^d")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noatlab: spectral and symbolic experiments on measure-preserving systems"};
  app.require_subcommand(1);
  // Global flags may also follow the subcommand.
  app.fallthrough();
  app.set_config("--config", "", "key=value file supplying defaults; flags override it");

  Global g;
  app.add_option("--seed", g.seed)->capture_default_str();
  app.add_option("--workers", g.workers)->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", g.out, "payload file");
  app.add_flag("--stdout", g.to_stdout, "also write the payload to stdout");

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "build or transform a coefficient table");
  measure->add_option("kind", ma.kind, "lebesgue|dirac|geometric|riesz|sqrt|arcsine|arcsine4|subsample")
      ->required();
  measure->add_option("--N", ma.N, "half width")->check(CLI::NonNegativeNumber)->capture_default_str();
  measure->add_option("--rho", ma.rho)->capture_default_str();
  measure->add_option("--c", ma.c)->capture_default_str();
  measure->add_option("--m", ma.m, "subsampling power")->check(CLI::PositiveNumber)->capture_default_str();
  measure->add_option("--a", ma.a, "Riesz amplitudes")->delimiter(',');
  measure->add_option("--freq", ma.freq, "Riesz frequencies")->delimiter(',');
  measure->add_option("--in", ma.in, "input measure file");
  measure->add_option("--density", ma.density, "write the truncated density as CSV");
  measure->add_option("--grid", ma.grid, "density grid size");

  CertifyArgs ca;
  auto* cert = app.add_subcommand("certify", "SBH verdict for a measure file (exit 0/3/4)");
  cert->add_option("--in", ca.in)->required();
  cert->add_option("--k", ca.k)->capture_default_str();
  cert->add_option("--window", ca.window)->capture_default_str();
  cert->add_option("--heuristic-k", ca.heuristic_k)->capture_default_str();
  cert->add_option("--heuristic-window", ca.heuristic_window)->capture_default_str();
  cert->add_option("--subsample-scan", ca.scan, "range lo..hi of powers to try");
  cert->add_flag("--no-psd", ca.no_psd, "skip the positive-definiteness check on read");

  SystemArgs sa;
  auto* sys = app.add_subcommand("system", "correlation table and name batches of a system");
  sys->add_option("kind", sa.kind, "rudin-shapiro|nil|distal|rotation|odometer")->required();
  sys->add_option("--L", sa.L, "Rudin-Shapiro prefix length")->capture_default_str();
  sys->add_option("--nmax", sa.nmax)->check(CLI::NonNegativeNumber)->capture_default_str();
  sys->add_option("--n", sa.n, "single lag instead of 0..nmax");
  add_system_params(sys, sa);
  sys->add_option("--names", sa.names, "number of names to sample");
  sys->add_option("--length", sa.length)->capture_default_str();
  sys->add_option("--names-out", sa.names_out, "binary name batch file");

  GaussianArgs ga;
  auto* gauss = app.add_subcommand("gaussian", "Gaussian process experiments");
  gauss->add_option("kind", ga.kind, "orthant|constants|cocycle")->required();
  gauss->add_option("--r", ga.r)->capture_default_str();
  gauss->add_option("--samples", ga.samples)->capture_default_str();
  gauss->add_option("--level", ga.level)->check(CLI::IsMember({1, 2, 4}))->capture_default_str();
  gauss->add_flag("--negative", ga.negative, "negative orthant for product processes");
  gauss->add_option("--c", ga.c, "constant for the chain check");
  gauss->add_option("--N", ga.N, "pipeline half width")->capture_default_str();
  gauss->add_option("--spec", ga.spec, "autocovariance as a measure file");
  gauss->add_option("--white", ga.white, "white-noise spec of this half width");
  gauss->add_option("--nmax", ga.nmax)->capture_default_str();
  gauss->add_option("--max-order", ga.max_order)->capture_default_str();

  FunnyArgs fa;
  fa.sys.kind = "rotation";
  fa.sys.delta = 0.0;
  auto* funny = app.add_subcommand("funny", "funny-word search against the non-AT bound");
  funny->add_option("--system", fa.sys.kind, "name source id")->capture_default_str();
  funny->add_option("--k", fa.fam.k)->check(CLI::PositiveNumber)->capture_default_str();
  funny->add_option("--eps", fa.eps)->capture_default_str();
  funny->add_option("--samples", fa.samples)->capture_default_str();
  funny->add_option("--horizon", fa.fam.horizon)->capture_default_str();
  funny->add_option("--max-step", fa.fam.max_step)->capture_default_str();
  funny->add_option("--offsets", fa.fam.offsets)->capture_default_str();
  funny->add_option("--random-subsets", fa.fam.random_subsets)->capture_default_str();
  funny->add_option("--p0", fa.p0, "P(symbol 0) for the biased source")->capture_default_str();
  add_system_params(funny, fa.sys);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*measure) return cmd_measure(g, ma);
    if (*cert) return cmd_certify(g, ca);
    if (*sys) return cmd_system(g, sa);
    if (*gauss) return cmd_gaussian(g, ga);
    if (*funny) return cmd_funny(g, fa);
  } catch (const InvariantError& e) {
    std::cerr << "error [" << e.invariant() << "]: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
