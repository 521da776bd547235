#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "noatlab/circle_measures.hpp"
#include "noatlab/gaussian.hpp"
#include "noatlab/sbh.hpp"

using namespace noatlab;
using std::numbers::pi;

namespace {

double lag_cov(const PathMatrix& m, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t r = 0; r < m.rows; ++r) s += m(r, a) * m(r, b);
  return s / static_cast<double>(m.rows);
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(GaussianSpec::from_autocov({0.5}), InvariantError);
  CHECK_THROWS_AS(GaussianSpec::from_autocov({1.0, 0.9, 0.6}), InvariantError);
  CHECK_THROWS_AS(GaussianSpec::from_table(FourierTable({1.0, cplx(0.1, 0.1)}, 0.0, "")), InvariantError);
  const auto s = GaussianSpec::geometric(0.5, 8);
  CHECK(s.psd_checked);
  CHECK(s.r(-2) == doctest::Approx(0.25));
}

TEST_CASE("white noise paths are uncorrelated") {
  const auto m = sample_path(GaussianSpec::white_noise(4), 2, 100000, 1);
  CHECK(std::abs(lag_cov(m, 0, 1)) <= 4.0 / std::sqrt(1e5));
}

TEST_CASE("geometric autocovariance is reproduced") {
  const std::size_t n = 100000;
  const auto m = sample_path(GaussianSpec::geometric(0.5, 4), 3, n, 2);
  // Var(X_0 X_1) = 1 + r^2 for a standard bivariate normal pair.
  const double se = std::sqrt((1.0 + 0.25) / n);
  CHECK(std::abs(lag_cov(m, 0, 1) - 0.5) <= 4.0 * se);
  CHECK(std::abs(lag_cov(m, 0, 2) - 0.25) <= 4.0 * std::sqrt((1.0 + 0.0625) / n));
}

TEST_CASE("single coordinate is standard normal (Kolmogorov-Smirnov)") {
  const std::size_t n = 100000;
  const auto m = sample_path(GaussianSpec::white_noise(0), 1, n, 3);
  std::vector<double> x(m.data);
  std::sort(x.begin(), x.end());
  double D = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double F = 0.5 * std::erfc(-x[i] / std::sqrt(2.0));
    D = std::max({D, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(i + 1) / n)});
  }
  CHECK(D * std::sqrt(static_cast<double>(n)) < 1.95);  // 0.1% critical value
}

TEST_CASE("cholesky jitter accepts boundary specs and rejects indefinite ones") {
  // r = (1, 1): rank-one Toeplitz matrix, only jitter makes it factorable.
  const GaussianSpec degenerate{{1.0, 1.0}, false};
  const long idx[2] = {0, 1};
  const auto L = toeplitz_cholesky(degenerate, idx);
  CHECK(L[0] == doctest::Approx(1.0));
  const GaussianSpec bad{{1.0, 0.9, 0.6}, false};
  const long idx3[3] = {0, 1, 2};
  CHECK_THROWS_AS(toeplitz_cholesky(bad, idx3), InvariantError);
}

TEST_CASE("sampling does not depend on workers") {
  const auto s = GaussianSpec::geometric(0.3, 16);
  CHECK(sample_path(s, 10, 1000, 5, 1).data == sample_path(s, 10, 1000, 5, 3).data);
  CHECK(sign_orthant_mc(s, 2, 200000, 9, 1).estimate == sign_orthant_mc(s, 2, 200000, 9, 4).estimate);
}

TEST_CASE("orthant formulas") {
  CHECK(orthant_formula(0.5, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(orthant_formula(-0.5, 1) == doctest::Approx(1.0 / 6.0));
  CHECK(orthant_formula(0.5, 2) == doctest::Approx(0.25 + 1.0 / 36.0));
  CHECK(orthant_formula(0.5, 4) == doctest::Approx(0.25 + 1.0 / 324.0));
  CHECK(orthant_formula(0.0, 4) == 0.25);
}

TEST_CASE("arcsine laws by Monte Carlo") {
  for (double r : {-0.5, 0.0, 0.5}) {
    const auto spec = GaussianSpec::from_autocov({1.0, r});
    const auto s = sign_orthant_mc(spec, 1, 200000, 21);
    CHECK(std::abs(s.z_score) <= 4.0);
    for (int level : {2, 4}) {
      const auto p = product_orthant_mc(spec, 1, level, 200000, 22);
      CHECK(std::abs(p.z_score) <= 4.0);
      const auto q = product_orthant_mc(spec, 1, level, 200000, 23, 1, true);
      CHECK(std::abs(q.estimate - p.estimate) <= 4.0 * std::sqrt(2.0) * p.stderr_);
    }
  }
  CHECK_THROWS_AS(sign_orthant_mc(GaussianSpec{{1.0, 1.0}, false}, 1, 10, 1), std::domain_error);
  CHECK_THROWS(product_orthant_mc(GaussianSpec::white_noise(2), 1, 3, 10, 1));
}

TEST_CASE("sign process correlation matches the arcsine transform") {
  const auto spec = GaussianSpec::geometric(0.6, 8);
  const auto table = arcsine_transform(spec.to_table());
  const std::size_t n = 50000;
  const auto m = sample_path(spec, 6, n, 31);
  for (std::size_t lag = 1; lag < 6; ++lag) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += ((m(r, 0) > 0) == (m(r, lag) > 0)) ? 1.0 : -1.0;
    CHECK(std::abs(s / n - table(static_cast<long>(lag)).real()) <= 5.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("cocycle variance") {
  CHECK(cocycle_variance(GaussianSpec::white_noise(10), 7) == 7.0);
  CHECK(cocycle_variance(GaussianSpec::geometric(0.5, 4), 2) == doctest::Approx(3.0));
  const auto s = GaussianSpec::geometric(0.2, 40);
  for (long n = 1; n <= 41; ++n) CHECK(cocycle_variance(s, n) >= n - 1e-12);
  CHECK_THROWS(cocycle_variance(s, 0));
  CHECK_THROWS(cocycle_variance(s, 42));
}

TEST_CASE("cocycle correlation table") {
  const auto t = cocycle_correlation_table(GaussianSpec::white_noise(16), 10000, 16);
  CHECK(t(1).real() == doctest::Approx(2.0 * 4.0 / (pi * pi) * std::exp(-2.0 * pi * pi)).epsilon(1e-6));
  CHECK(t(1).real() == doctest::Approx(2.17e-9).epsilon(0.01));
  for (long n = 1; n < 16; ++n) {
    CHECK(t(n).real() > 0.0);
    CHECK(t(n + 1).real() < t(n).real());
  }
  for (int m = 1; m <= 8; ++m) {
    const auto sub = power_subsample(t, m);
    CHECK(certify(sub).verdict == SbhVerdict::CertifiedSbh);
    if (m > 1) CHECK(l1_tail(sub) <= l1_tail(power_subsample(t, m - 1)));
  }
  const auto g = cocycle_correlation_table(GaussianSpec::geometric(0.5, 16), 10000, 16);
  // Strictly decreasing until the values underflow to 0.
  for (long n = 1; n < 16; ++n) {
    CHECK(g(n + 1).real() <= g(n).real());
    if (g(n + 1).real() > 0.0) CHECK(g(n + 1).real() < g(n).real());
  }
  CHECK(g(8).real() > 0.0);
  CHECK_THROWS_AS(cocycle_correlation_table(GaussianSpec::from_autocov({1.0, -0.3}), 100, 1), InvariantError);
}

TEST_CASE("gnoat constant chain") {
  const double c = gnoat_default_c();
  CHECK(c == doctest::Approx(std::sqrt(pi) * std::pow((1.0 + epsilon0()) / 86.0, 0.25)));
  const auto r = gnoat_constant_check(c, 2000);
  CHECK(r.arcsin_margin > 0.0);
  CHECK(r.chain_margin > 0.0);
  CHECK(r.series_margin > 0.0);
  CHECK(r.series_sum <= r.chain_value);
  CHECK(r.series_sum == doctest::Approx(0.08415).epsilon(1e-3));
  const auto zero = gnoat_constant_check(0.0, 100);
  CHECK(zero.series_sum == 0.0);
  CHECK(zero.chain_value == 0.0);
  CHECK(to_json(r)["pipeline_verdict"].is_string());
}
