#include "noatlab/circle_measures.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

namespace noatlab {

namespace {

using std::numbers::pi;

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void require_half_width(int n) {
  if (n < 0) throw std::invalid_argument("half width must be >= 0");
}

// FFTW's planner is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void check_arcsine_domain(const FourierTable& t) {
  const auto c = t.nonnegative();
  for (std::size_t n = 1; n < c.size(); ++n) {
    if (c[n].imag() != 0.0)
      throw std::domain_error("arcsine transform needs real coefficients; c(" +
                              std::to_string(n) + ") has nonzero imaginary part");
    if (!(std::abs(c[n].real()) < 1.0))
      throw std::domain_error("arcsine transform needs |c(n)| < 1 for n != 0; |c(" +
                              std::to_string(n) + ")| = 1");
  }
}

}  // namespace

FourierTable lebesgue_table(int half_width) {
  require_half_width(half_width);
  std::vector<cplx> c(static_cast<std::size_t>(half_width) + 1, 0.0);
  c[0] = 1.0;
  return FourierTable(std::move(c), 0.0, "lebesgue");
}

FourierTable dirac_table(int half_width) {
  require_half_width(half_width);
  std::vector<cplx> c(static_cast<std::size_t>(half_width) + 1, 1.0);
  return FourierTable(std::move(c), 0.0, "dirac (truncated; true tail is infinite)");
}

FourierTable geometric_table(double rho, int half_width) {
  require_half_width(half_width);
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("geometric table needs 0 <= rho < 1");
  std::vector<cplx> c(static_cast<std::size_t>(half_width) + 1);
  double p = 1.0;
  for (auto& v : c) {
    v = p;
    p *= rho;
  }
  const double tail = 2.0 * p / (1.0 - rho);
  return FourierTable(std::move(c), tail, "geometric(rho=" + fmt_double(rho) + ")");
}

FourierTable riesz_product(std::span<const double> amplitudes, std::span<const long> frequencies,
                           int half_width) {
  require_half_width(half_width);
  if (amplitudes.size() != frequencies.size())
    throw std::invalid_argument("riesz product: amplitude and frequency lists differ in length");
  const std::size_t J = amplitudes.size();
  for (std::size_t j = 0; j < J; ++j) {
    if (!(std::abs(amplitudes[j]) <= 1.0))
      throw std::invalid_argument("riesz product: amplitudes must lie in [-1, 1]");
    if (frequencies[j] < 1 || frequencies[j] > (1L << 50))
      throw std::invalid_argument("riesz product: frequencies must be positive");
    if (j > 0 && frequencies[j] < 3 * frequencies[j - 1])
      throw InvariantError("lacunarity", "riesz product needs lambda_{j+1} >= 3 lambda_j");
  }

  // lower[j] = sum of frequencies below j: the furthest the remaining factors
  // can move a partial sum.
  std::vector<long> lower(J + 1, 0);
  for (std::size_t j = 0; j < J; ++j) lower[j + 1] = lower[j] + frequencies[j];

  std::vector<cplx> c(static_cast<std::size_t>(half_width) + 1, 0.0);
  const long N = half_width;
  auto dfs = [&](auto&& self, std::size_t level, long sum, double weight) -> void {
    if (level == 0) {
      if (sum >= 0 && sum <= N) c[static_cast<std::size_t>(sum)] += weight;
      return;
    }
    const std::size_t j = level - 1;
    for (int eps = -1; eps <= 1; ++eps) {
      const long s = sum + eps * frequencies[j];
      if (std::labs(s) - lower[j] > N) continue;
      self(self, j, s, eps == 0 ? weight : weight * amplitudes[j] / 2.0);
    }
  };
  dfs(dfs, J, 0, 1.0);

  double total = 1.0;
  for (double a : amplitudes) total *= 1.0 + std::abs(a);
  double inside = 1.0;
  for (std::size_t n = 1; n < c.size(); ++n) inside += 2.0 * std::abs(c[n]);
  const double tail = std::max(0.0, total - inside);

  std::ostringstream label;
  label << "riesz_product(";
  for (std::size_t j = 0; j < J; ++j)
    label << (j ? "," : "") << fmt_double(amplitudes[j]) << "@" << frequencies[j];
  label << ")";
  return FourierTable(std::move(c), tail, label.str());
}

FourierTable sqrt_template(double c, int half_width) {
  require_half_width(half_width);
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("sqrt template needs 0 <= c <= 1");
  std::vector<cplx> coeffs(static_cast<std::size_t>(half_width) + 1);
  coeffs[0] = 1.0;
  for (std::size_t n = 1; n < coeffs.size(); ++n) coeffs[n] = c / std::sqrt(static_cast<double>(n));
  return FourierTable(std::move(coeffs), 0.0,
                      "sqrt_template(c=" + fmt_double(c) +
                          ") [coefficient template, not certified PSD; tail not tracked]");
}

FourierTable power_subsample(const FourierTable& t, int m) {
  if (m < 1) throw std::invalid_argument("power_subsample needs m >= 1");
  const int N = t.half_width() / m;
  std::vector<cplx> c(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) c[static_cast<std::size_t>(n)] = t(static_cast<long>(n) * m);
  return FourierTable(std::move(c), t.tail_bound(),
                      t.label() + " |> power_subsample(m=" + std::to_string(m) + ")");
}

double l1_tail(const FourierTable& t) {
  double s = 0.0;
  const auto c = t.nonnegative();
  for (std::size_t n = 1; n < c.size(); ++n) s += std::abs(c[n]);
  return 2.0 * s + t.tail_bound();
}

std::vector<double> density_on_grid(const FourierTable& t, int grid_size) {
  const int N = t.half_width();
  if (grid_size <= 2 * N) throw std::invalid_argument("density grid must have more than 2N points");
  const auto G = static_cast<std::size_t>(grid_size);
  const std::size_t half = G / 2 + 1;

  fftw_complex* in = fftw_alloc_complex(half);
  double* out = fftw_alloc_real(G);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_c2r_1d(grid_size, in, out, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < half; ++k) in[k][0] = in[k][1] = 0.0;
  const auto c = t.nonnegative();
  for (std::size_t n = 0; n < c.size(); ++n) {
    in[n][0] = c[n].real();
    in[n][1] = c[n].imag();
  }
  fftw_execute(plan);
  std::vector<double> d(out, out + G);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return d;
}

DensityBoundReport density_sup(const FourierTable& t, int grid_size) {
  const int N = t.half_width();
  if (grid_size < 4 * N + 4)
    throw std::invalid_argument("density grid too coarse: need grid_size >= 4N+4 = " +
                                std::to_string(4 * N + 4));
  const auto d = density_on_grid(t, grid_size);
  const auto it = std::max_element(d.begin(), d.end());

  double weighted = 0.0;  // sum_{n != 0} |n| |c(n)|
  const auto c = t.nonnegative();
  for (std::size_t n = 1; n < c.size(); ++n) weighted += 2.0 * static_cast<double>(n) * std::abs(c[n]);

  DensityBoundReport r;
  r.grid_size = grid_size;
  r.sup_estimate = *it;
  r.argmax_theta = static_cast<double>(it - d.begin()) / grid_size;
  r.grid_margin = 2.0 * pi * weighted / (2.0 * grid_size);
  r.certified_upper = r.sup_estimate + t.tail_bound() + r.grid_margin;
  return r;
}

FourierTable arcsine_transform(const FourierTable& t) {
  check_arcsine_domain(t);
  const auto c = t.nonnegative();
  std::vector<cplx> out(c.size());
  out[0] = 1.0;
  for (std::size_t n = 1; n < c.size(); ++n) out[n] = 2.0 / pi * std::asin(c[n].real());
  // |(2/pi) arcsin x| <= |x|, so the old tail still dominates.
  return FourierTable(std::move(out), t.tail_bound(), t.label() + " |> arcsine");
}

FourierTable arcsine_fourth_transform(const FourierTable& t) {
  check_arcsine_domain(t);
  const auto c = t.nonnegative();
  std::vector<cplx> out(c.size());
  out[0] = 1.0;
  const double k = 16.0 / (pi * pi * pi * pi);
  for (std::size_t n = 1; n < c.size(); ++n) {
    const double a = std::asin(c[n].real());
    out[n] = k * a * a * a * a;
  }
  return FourierTable(std::move(out), t.tail_bound(), t.label() + " |> arcsine4");
}

PsdReport is_positive_definite(const FourierTable& t, int k) {
  if (k < 1 || k > t.half_width() + 1)
    throw std::invalid_argument("Toeplitz order must satisfy 1 <= k <= N+1");
  PsdReport r;
  r.order = k;
  if (t.is_real()) {
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m(i, j) = t(i - j).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
  } else {
    Eigen::MatrixXcd m(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m(i, j) = t(i - j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
  }
  r.passes = r.min_eigenvalue >= kPsdTolerance;
  return r;
}

}  // namespace noatlab
