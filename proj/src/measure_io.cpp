#include "noatlab/measure_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "noatlab/circle_measures.hpp"

namespace noatlab {

using nlohmann::json;

json measure_to_json(const FourierTable& t) {
  json coeffs = json::array();
  const auto c = t.nonnegative();
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (n != 0 && c[n] == cplx(0.0)) continue;
    coeffs.push_back(json::array({n, c[n].real(), c[n].imag()}));
  }
  return json{{"label", t.label()},
              {"half_width", t.half_width()},
              {"tail_bound", t.tail_bound()},
              {"coeffs", std::move(coeffs)}};
}

FourierTable measure_from_json(const json& j, const MeasureReadOptions& opts) {
  if (!j.is_object()) throw InvariantError("schema", "measure file must be a JSON object");
  for (const char* key : {"half_width", "tail_bound", "coeffs"})
    if (!j.contains(key)) throw InvariantError("schema", std::string("missing field '") + key + "'");

  const auto& hw = j.at("half_width");
  if (!hw.is_number_integer() || hw.get<long>() < 0)
    throw InvariantError("half_width", "half_width must be a nonnegative integer");
  const long N = hw.get<long>();
  if (!j.at("tail_bound").is_number()) throw InvariantError("schema", "tail_bound must be a number");
  const double tail = j.at("tail_bound").get<double>();
  const std::string label = j.value("label", std::string{});

  const auto& rows = j.at("coeffs");
  if (!rows.is_array()) throw InvariantError("schema", "coeffs must be an array");
  std::vector<cplx> c(static_cast<std::size_t>(N) + 1, 0.0);
  long prev = -1;
  bool have_zero = false;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() || !row[1].is_number() ||
        !row[2].is_number())
      throw InvariantError("schema", "each coefficient must be [n, re, im]");
    const long n = row[0].get<long>();
    if (n < 0)
      throw InvariantError("hermitian_symmetry",
                           "negative index " + std::to_string(n) +
                               " listed; the negative side is implied by c(-n) = conj(c(n))");
    if (n > N)
      throw InvariantError("half_width", "index " + std::to_string(n) + " exceeds half_width");
    if (n <= prev) throw InvariantError("sorted_indices", "indices must be strictly increasing");
    prev = n;
    if (n == 0) have_zero = true;
    c[static_cast<std::size_t>(n)] = cplx(row[1].get<double>(), row[2].get<double>());
  }
  if (!have_zero) throw InvariantError("unit_mass", "c(0) missing");

  FourierTable t(std::move(c), tail, label);
  if (opts.check_psd) {
    const int k = static_cast<int>(std::min<long>(N + 1, opts.psd_max_order));
    const auto psd = is_positive_definite(t, k);
    if (!psd.passes)
      throw InvariantError("positive_semidefinite",
                           "Toeplitz matrix of order " + std::to_string(k) +
                               " has eigenvalue " + std::to_string(psd.min_eigenvalue));
  }
  return t;
}

void write_measure(std::ostream& os, const FourierTable& t) { os << measure_to_json(t).dump(2) << '\n'; }

void write_measure_file(const std::filesystem::path& path, const FourierTable& t) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_measure(os, t);
}

FourierTable read_measure_file(const std::filesystem::path& path, const MeasureReadOptions& opts) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw InvariantError("schema", path.string() + ": " + e.what());
  }
  return measure_from_json(j, opts);
}

}  // namespace noatlab
