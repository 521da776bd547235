#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "noatlab/fourier_table.hpp"
#include "noatlab/sbh.hpp"

namespace noatlab {

/// Autocovariance r(0..N) of a real stationary centered Gaussian process,
/// r(0) = 1, r(-n) = r(n).
struct GaussianSpec {
  std::vector<double> autocov;
  bool psd_checked = false;

  int half_width() const { return static_cast<int>(autocov.size()) - 1; }
  double r(long n) const;

  /// Real table; the Toeplitz matrix of order min(N+1, 256) must pass
  /// is_positive_definite.
  static GaussianSpec from_table(const FourierTable& t);
  static GaussianSpec from_autocov(std::vector<double> r);
  static GaussianSpec white_noise(int half_width);
  static GaussianSpec geometric(double rho, int half_width);

  FourierTable to_table(const std::string& label = "gaussian autocovariance") const;
};

/// count x cols matrix of reals, row-major.
struct PathMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Lower Cholesky factor of [r(i_a - i_b)], with diagonal jitter raised from
/// 1e-12 to 1e-8 if needed. Throws InvariantError("positive_semidefinite")
/// when even the largest jitter fails.
std::vector<double> toeplitz_cholesky(const GaussianSpec& spec, std::span<const long> indices);

/// `count` independent draws of (X_i) for i in `indices`; draw r uses the
/// substream derive_seed(seed, r).
PathMatrix sample_at(const GaussianSpec& spec, std::span<const long> indices, std::size_t count,
                     std::uint64_t seed, int workers = 1);

/// Draws of (X_0, ..., X_{length-1}); length <= N + 1.
PathMatrix sample_path(const GaussianSpec& spec, std::size_t length, std::size_t count,
                       std::uint64_t seed, int workers = 1);

struct McReport {
  std::string event;
  double estimate = 0.0;
  double stderr_ = 0.0;  ///< sqrt(p (1 - p) / samples) at the closed-form p
  double formula_value = 0.0;
  double z_score = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// mu{X_0 > 0, X_n > 0} against 1/4 + arcsin(r(n)) / (2 pi).
McReport sign_orthant_mc(const GaussianSpec& spec, long n, std::uint64_t samples, std::uint64_t seed,
                         int workers = 1);

/// Y = product of `level` (2 or 4) independent copies. Estimates
/// mu{Y_0 > 0, Y_n > 0} (or mu{Y_0 < 0, Y_n < 0} when `negative`) against
/// 1/4 + arcsin^2/pi^2 (level 2) or 1/4 + 4 arcsin^4/pi^4 (level 4).
McReport product_orthant_mc(const GaussianSpec& spec, long n, int level, std::uint64_t samples,
                            std::uint64_t seed, int workers = 1, bool negative = false);

double orthant_formula(double r, int level);

/// Var(X_0 + ... + X_{n-1}) = sum_{|k|<n} (n - |k|) r(k). Requires 1 <= n <= N + 1.
double cocycle_variance(const GaussianSpec& spec, long n);

/// Correlation of the sign partition of the circle fiber under the skew
/// product with Gaussian cocycle: c(n) = sum_{|m|<=M odd} |f^(m)|^2
/// exp(-2 pi^2 m^2 Var(n)). Rejects negative autocovariances.
FourierTable cocycle_correlation_table(const GaussianSpec& spec, int max_order, int n_max);

struct GnoatReport {
  double c = 0.0;
  double epsilon0 = 0.0;
  double arcsin_margin = 0.0;  ///< min over [0, c] of 2x - arcsin x (= 2c - arcsin c)
  double series_sum = 0.0;     ///< sum_{k>=1} (32/pi^4) arcsin^4(c/sqrt k), upper bound
  double series_tail = 0.0;    ///< integral-test bound for k > 10^6 (included above)
  double chain_value = 0.0;    ///< (512 c^4 / pi^4) zeta(2)
  double chain_margin = 0.0;   ///< 1 + eps0 - chain_value
  double series_margin = 0.0;  ///< 1 + eps0 - series_sum
  int pipeline_half_width = 0;
  double pipeline_l1 = 0.0;
  double pipeline_l1_margin = 0.0;  ///< eps0 - pipeline_l1
  SbhVerdict pipeline_verdict = SbhVerdict::Undecided;
};

/// Default c = sqrt(pi) ((1 + eps0)/86)^{1/4}.
double gnoat_default_c();
GnoatReport gnoat_constant_check(double c, int pipeline_half_width = 10000, int workers = 1);

nlohmann::json to_json(const McReport& r);
nlohmann::json to_json(const GnoatReport& r);

}  // namespace noatlab
