#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "noatlab/circle_measures.hpp"
#include "noatlab/criterion.hpp"
#include "noatlab/gaussian.hpp"
#include "noatlab/measure_io.hpp"
#include "noatlab/name_source.hpp"
#include "noatlab/sbh.hpp"
#include "noatlab/symbolic.hpp"

namespace py = pybind11;
using namespace noatlab;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

FourierTable table_from_dict(const py::dict& d, bool check_psd) {
  MeasureReadOptions opts;
  opts.check_psd = check_psd;
  return measure_from_json(from_py(d), opts);
}

py::object measure(const std::string& kind, int N, double rho, double c, std::vector<double> a,
                   std::vector<long> freq, std::optional<py::dict> in, int m) {
  if (kind == "lebesgue") return to_py(measure_to_json(lebesgue_table(N)));
  if (kind == "dirac") return to_py(measure_to_json(dirac_table(N)));
  if (kind == "geometric") return to_py(measure_to_json(geometric_table(rho, N)));
  if (kind == "riesz") return to_py(measure_to_json(riesz_product(a, freq, N)));
  if (kind == "sqrt") return to_py(measure_to_json(sqrt_template(c, N)));
  if (!in) throw std::invalid_argument(kind + " needs in_table");
  const auto src = table_from_dict(*in, false);
  if (kind == "arcsine") return to_py(measure_to_json(arcsine_transform(src)));
  if (kind == "arcsine4") return to_py(measure_to_json(arcsine_fourth_transform(src)));
  if (kind == "subsample") return to_py(measure_to_json(power_subsample(src, m)));
  throw std::invalid_argument("unknown measure: " + kind);
}

py::object certify_dict(const py::dict& table, int k, int window, std::uint64_t seed, int workers,
                        bool check_psd) {
  CertifyParams p;
  p.exhaustive = ExhaustiveParams{k, window};
  HeuristicOptions h;
  h.seed = seed;
  h.workers = workers;
  p.heuristic = h;
  p.workers = workers;
  return to_py(to_json(certify(table_from_dict(table, check_psd), p)));
}

SourceParams params_from(double alpha, double beta, double gamma, double delta, double delta0, long m_scale,
                         const std::string& cocycle) {
  SourceParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.delta = delta;
  p.delta0 = delta0;
  p.m_scale = m_scale;
  p.cocycle = cocycle;
  return p;
}

// Rows (n, re, im, error_bar) for n = 0..nmax.
std::vector<std::tuple<long, double, double, double>> system_correlations(
    const std::string& kind, int nmax, std::size_t L, double alpha, double beta, double gamma, double delta,
    double delta0, long m_scale, const std::string& cocycle) {
  std::vector<std::tuple<long, double, double, double>> rows;
  auto push = [&](long n, cplx v, double err) { rows.emplace_back(n, v.real(), v.imag(), err); };
  if (kind == "rudin-shapiro") {
    const auto t = empirical_correlation(rudin_shapiro_signs(L), nmax);
    for (long n = 0; n <= nmax; ++n) push(n, t(n), 0.0);
  } else if (kind == "nil") {
    NilRotation nr{alpha, beta, gamma};
    nr.validate();
    for (long n = 0; n <= nmax; ++n) push(n, nil_rotation_correlation(nr, n), 0.0);
  } else if (kind == "distal") {
    for (long n = 0; n <= nmax; ++n) push(n, distal_integral(n, m_scale), 0.0);
  } else if (kind == "rotation") {
    const RotationCocycle rc{alpha, delta, delta0};
    rc.validate();
    for (long n = 0; n <= nmax; ++n) {
      const auto v = rotation_ac_cocycle_correlation(rc, n);
      push(n, v.value, v.error_bar);
    }
  } else if (kind == "odometer") {
    const auto oc = OdometerCocycle::from_bits(cocycle);
    for (long n = 0; n <= nmax; ++n) push(n, two_point_extension_correlation(oc, n), 0.0);
  } else {
    throw std::invalid_argument("unknown system: " + kind);
  }
  return rows;
}

py::array_t<std::uint8_t> sample_names(const std::string& system, std::size_t count, std::size_t length,
                                       std::uint64_t seed, int workers, double alpha, double beta, double delta) {
  auto p = params_from(alpha, beta, 0.0, delta, 0.5, 1, "01");
  const auto m = make_source(system, p)->sample_names(count, length, seed, workers);
  py::array_t<std::uint8_t> out({m.rows, m.cols});
  std::copy(m.bits.begin(), m.bits.end(), out.mutable_data());
  return out;
}

py::object orthant_mc(double r, std::uint64_t samples, int level, std::uint64_t seed, int workers, bool negative) {
  const auto spec = GaussianSpec::from_autocov({1.0, r});
  if (level == 1) return to_py(to_json(sign_orthant_mc(spec, 1, samples, seed, workers)));
  return to_py(to_json(product_orthant_mc(spec, 1, level, samples, seed, workers, negative)));
}

py::object funny(const std::string& system, int k, double eps, std::size_t samples, std::uint64_t seed,
                 int workers, long horizon, int random_subsets, double alpha, double beta, double delta) {
  LambdaFamily fam;
  fam.k = k;
  fam.horizon = horizon;
  fam.random_subsets = random_subsets;
  const auto src = make_source(system, params_from(alpha, beta, 0.0, delta, 0.5, 1, "01"));
  const auto rep = funny_word_search(*src, fam, eps, samples, seed, workers);
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : rep.candidates) cands.push_back(to_json(c));
  return to_py({{"summary", summary_json(rep)}, {"candidates", cands}});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "noatlab C++ core";
  constexpr double kAlpha = 0.41421356237309503;

  m.def("epsilon0", &epsilon0);
  m.def("sbh_polynomial", &sbh_polynomial, py::arg("t"));
  m.def("non_at_bound", &non_at_bound, py::arg("eps"));
  m.def("measure", &measure, py::arg("kind"), py::arg("N") = 64, py::arg("rho") = 0.5, py::arg("c") = 0.3,
        py::arg("a") = std::vector<double>{}, py::arg("freq") = std::vector<long>{},
        py::arg("in_table") = py::none(), py::arg("m") = 2,
        "Measure table as a dict: label, half_width, tail_bound, coeffs [[n, re, im], ...].");
  m.def("certify", &certify_dict, py::arg("table"), py::arg("k") = 4, py::arg("window") = 8, py::arg("seed") = 1,
        py::arg("workers") = 1, py::arg("check_psd") = true);
  m.def("system_correlations", &system_correlations, py::arg("kind"), py::arg("nmax") = 16,
        py::arg("L") = std::size_t{1} << 20, py::arg("alpha") = kAlpha, py::arg("beta") = 0.8,
        py::arg("gamma") = 0.0, py::arg("delta") = 0.1, py::arg("delta0") = 0.5, py::arg("m_scale") = 1,
        py::arg("cocycle") = "01");
  m.def(
      "rudin_shapiro_signs",
      [](std::size_t L) {
        const auto s = rudin_shapiro_signs(L);
        py::array_t<std::int8_t> out(static_cast<py::ssize_t>(s.size()));
        std::copy(s.begin(), s.end(), out.mutable_data());
        return out;
      },
      py::arg("L"));
  m.def("sample_names", &sample_names, py::arg("system"), py::arg("count"), py::arg("length"), py::arg("seed") = 1,
        py::arg("workers") = 1, py::arg("alpha") = kAlpha, py::arg("beta") = 0.8, py::arg("delta") = 0.0);
  m.def("orthant_mc", &orthant_mc, py::arg("r"), py::arg("samples") = 1000000, py::arg("level") = 1,
        py::arg("seed") = 1, py::arg("workers") = 1, py::arg("negative") = false);
  m.def(
      "gnoat_constants",
      [](std::optional<double> c, int N, int workers) {
        return to_py(to_json(gnoat_constant_check(c.value_or(gnoat_default_c()), N, workers)));
      },
      py::arg("c") = py::none(), py::arg("N") = 10000, py::arg("workers") = 1);
  m.def("funny_word_search", &funny, py::arg("system"), py::arg("k") = 32, py::arg("eps") = 0.1,
        py::arg("samples") = 10000, py::arg("seed") = 1, py::arg("workers") = 1, py::arg("horizon") = 256,
        py::arg("random_subsets") = 16, py::arg("alpha") = kAlpha, py::arg("beta") = 0.8, py::arg("delta") = 0.0);
}
