#include "noatlab/gaussian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <random>

#include "noatlab/circle_measures.hpp"
#include "noatlab/parallel.hpp"
#include "noatlab/symbolic.hpp"

namespace noatlab {

using std::numbers::pi;

double GaussianSpec::r(long n) const {
  const long a = std::labs(n);
  if (a > half_width()) throw std::out_of_range("lag " + std::to_string(n) + " outside autocovariance table");
  return autocov[static_cast<std::size_t>(a)];
}

GaussianSpec GaussianSpec::from_autocov(std::vector<double> r) {
  if (r.empty()) throw InvariantError("half_width", "empty autocovariance");
  if (std::abs(r[0] - 1.0) > 1e-12) throw InvariantError("unit_mass", "r(0) must be 1");
  r[0] = 1.0;
  for (double v : r) {
    if (!std::isfinite(v)) throw InvariantError("finite", "non-finite autocovariance");
    if (std::abs(v) > 1.0 + 1e-12) throw InvariantError("modulus_bound", "|r(n)| > 1");
  }
  std::vector<cplx> c(r.begin(), r.end());
  FourierTable t(std::move(c), 0.0, "autocov");
  const int k = std::min(t.half_width() + 1, 256);
  const auto psd = is_positive_definite(t, k);
  if (!psd.passes)
    throw InvariantError("positive_semidefinite",
                         "Toeplitz matrix of order " + std::to_string(k) + " has eigenvalue " +
                             std::to_string(psd.min_eigenvalue));
  return GaussianSpec{std::move(r), true};
}

GaussianSpec GaussianSpec::from_table(const FourierTable& t) {
  if (!t.is_real(1e-12)) throw InvariantError("real", "Gaussian autocovariance must be real");
  std::vector<double> r;
  for (const auto& v : t.nonnegative()) r.push_back(v.real());
  return from_autocov(std::move(r));
}

GaussianSpec GaussianSpec::white_noise(int half_width) {
  std::vector<double> r(static_cast<std::size_t>(half_width) + 1, 0.0);
  r[0] = 1.0;
  return GaussianSpec{std::move(r), true};
}

GaussianSpec GaussianSpec::geometric(double rho, int half_width) {
  return from_table(geometric_table(rho, half_width));
}

FourierTable GaussianSpec::to_table(const std::string& label) const {
  return FourierTable(std::vector<cplx>(autocov.begin(), autocov.end()), 0.0, label);
}

// ---------------------------------------------------------------------------

std::vector<double> toeplitz_cholesky(const GaussianSpec& spec, std::span<const long> indices) {
  const auto k = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd A(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) A(i, j) = spec.r(indices[i] - indices[j]);

  for (double jitter : {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8}) {
    Eigen::MatrixXd B = A;
    B.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) continue;
    const Eigen::MatrixXd L = llt.matrixL();
    std::vector<double> out(static_cast<std::size_t>(k * k));
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) out[static_cast<std::size_t>(i * k + j)] = L(i, j);
    return out;
  }
  throw InvariantError("positive_semidefinite", "Toeplitz factorization failed with jitter 1e-8");
}

namespace {

// x = L z for one draw; L lower triangular k x k row-major.
void correlate(const std::vector<double>& L, std::size_t k, std::normal_distribution<double>& nd,
               std::mt19937_64& rng, std::vector<double>& z, double* x) {
  for (std::size_t i = 0; i < k; ++i) z[i] = nd(rng);
  for (std::size_t i = 0; i < k; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += L[i * k + j] * z[j];
    x[i] = s;
  }
}

constexpr std::uint64_t kMcBlock = 1 << 16;

}  // namespace

PathMatrix sample_at(const GaussianSpec& spec, std::span<const long> indices, std::size_t count,
                     std::uint64_t seed, int workers) {
  const auto L = toeplitz_cholesky(spec, indices);
  const std::size_t k = indices.size();
  PathMatrix m{count, k, std::vector<double>(count * k)};
  constexpr std::size_t kBlock = 256;
  parallel_for((count + kBlock - 1) / kBlock, workers, [&](std::size_t b) {
    std::vector<double> z(k);
    for (std::size_t r = b * kBlock; r < std::min(count, (b + 1) * kBlock); ++r) {
      std::mt19937_64 rng(derive_seed(seed, r));
      std::normal_distribution<double> nd;
      correlate(L, k, nd, rng, z, &m.data[r * k]);
    }
  });
  return m;
}

PathMatrix sample_path(const GaussianSpec& spec, std::size_t length, std::size_t count,
                       std::uint64_t seed, int workers) {
  if (length == 0 || length > static_cast<std::size_t>(spec.half_width()) + 1)
    throw std::invalid_argument("path length must be in [1, N+1]");
  std::vector<long> idx(length);
  for (std::size_t i = 0; i < length; ++i) idx[i] = static_cast<long>(i);
  return sample_at(spec, idx, count, seed, workers);
}

// ---------------------------------------------------------------------------

double orthant_formula(double r, int level) {
  const double a = std::asin(r);
  switch (level) {
    case 1: return 0.25 + a / (2.0 * pi);
    case 2: return 0.25 + a * a / (pi * pi);
    case 4: return 0.25 + 4.0 * std::pow(a, 4) / std::pow(pi, 4);
    default: throw std::invalid_argument("product level must be 2 or 4");
  }
}

namespace {

McReport orthant_mc(const GaussianSpec& spec, long n, int level, std::uint64_t samples,
                    std::uint64_t seed, int workers, bool negative, std::string event) {
  const double r = spec.r(n);
  if (!(std::abs(r) < 1.0)) throw std::domain_error("degenerate correlation |r(n)| = 1");
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  const long idx[2] = {0, n};
  const auto L = toeplitz_cholesky(spec, idx);

  const std::uint64_t blocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<std::uint64_t> hits(blocks, 0);
  parallel_for(blocks, workers, [&](std::size_t b) {
    std::mt19937_64 rng(derive_seed(seed, b));
    std::normal_distribution<double> nd;
    std::vector<double> z(2);
    double x[2];
    const std::uint64_t end = std::min<std::uint64_t>(samples, (b + 1) * kMcBlock);
    std::uint64_t h = 0;
    for (std::uint64_t s = b * kMcBlock; s < end; ++s) {
      double y0 = 1.0, yn = 1.0;
      for (int c = 0; c < level; ++c) {
        correlate(L, 2, nd, rng, z, x);
        y0 *= x[0];
        yn *= x[1];
      }
      h += negative ? (y0 < 0.0 && yn < 0.0) : (y0 > 0.0 && yn > 0.0);
    }
    hits[b] = h;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;

  McReport rep;
  rep.event = std::move(event);
  rep.samples = samples;
  rep.seed = seed;
  rep.estimate = static_cast<double>(total) / static_cast<double>(samples);
  rep.formula_value = orthant_formula(r, level);
  const double p = rep.formula_value;
  rep.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  rep.z_score = rep.stderr_ > 0.0 ? (rep.estimate - p) / rep.stderr_ : 0.0;
  return rep;
}

}  // namespace

McReport sign_orthant_mc(const GaussianSpec& spec, long n, std::uint64_t samples, std::uint64_t seed,
                         int workers) {
  return orthant_mc(spec, n, 1, samples, seed, workers, false, "X_0>0,X_n>0");
}

McReport product_orthant_mc(const GaussianSpec& spec, long n, int level, std::uint64_t samples,
                            std::uint64_t seed, int workers, bool negative) {
  if (level != 2 && level != 4) throw std::invalid_argument("product level must be 2 or 4");
  std::string event = std::to_string(level) + "-fold " + (negative ? "Y_0<0,Y_n<0" : "Y_0>0,Y_n>0");
  return orthant_mc(spec, n, level, samples, seed, workers, negative, std::move(event));
}

// ---------------------------------------------------------------------------

double cocycle_variance(const GaussianSpec& spec, long n) {
  if (n < 1 || n - 1 > spec.half_width())
    throw std::out_of_range("cocycle_variance needs 1 <= n <= N+1");
  double v = static_cast<double>(n);
  for (long k = 1; k < n; ++k) v += 2.0 * static_cast<double>(n - k) * spec.r(k);
  return v;
}

FourierTable cocycle_correlation_table(const GaussianSpec& spec, int max_order, int n_max) {
  for (double v : spec.autocov)
    if (v < 0.0) throw InvariantError("nonnegative_autocov", "cocycle table needs r(k) >= 0");
  if (n_max < 0 || n_max > spec.half_width() + 1) throw std::out_of_range("n_max must be in [0, N+1]");
  const auto f = square_wave_coeffs(max_order);
  std::vector<cplx> c(static_cast<std::size_t>(n_max) + 1);
  c[0] = 1.0;
  for (long n = 1; n <= n_max; ++n) {
    const double var = cocycle_variance(spec, n);
    double s = 0.0;
    // Terms decay like exp(-2 pi^2 m^2 n); stop once they underflow.
    for (long m = 1; m <= max_order; m += 2) {
      const double term = 2.0 * f.weight(m) * std::exp(-2.0 * pi * pi * static_cast<double>(m * m) * var);
      if (term == 0.0) break;
      s += term;
    }
    c[static_cast<std::size_t>(n)] = s;
  }
  // Var(n) >= n and sum |f^|^2 <= 1, so |c(n)| <= exp(-2 pi^2 n).
  const double q = std::exp(-2.0 * pi * pi);
  const double tail = 2.0 * std::pow(q, n_max + 1) / (1.0 - q);
  return FourierTable(std::move(c), tail, "gaussian cocycle sign correlation (M=" + std::to_string(max_order) + ")");
}

// ---------------------------------------------------------------------------

double gnoat_default_c() { return std::sqrt(pi) * std::pow((1.0 + epsilon0()) / 86.0, 0.25); }

GnoatReport gnoat_constant_check(double c, int pipeline_half_width, int workers) {
  if (!(c >= 0.0 && c < 1.0)) throw std::invalid_argument("c must lie in [0, 1)");
  GnoatReport rep;
  rep.c = c;
  rep.epsilon0 = epsilon0();
  rep.arcsin_margin = 2.0 * c - std::asin(c);

  constexpr long K = 1000000;
  const double pref = 32.0 / std::pow(pi, 4);
  double s = 0.0;
  for (long k = K; k >= 1; --k) s += std::pow(std::asin(c / std::sqrt(static_cast<double>(k))), 4);
  // arcsin x <= (pi/2) x on [0, 1] and sum_{k>K} 1/k^2 <= 1/K
  rep.series_tail = pref * std::pow(pi / 2.0, 4) * std::pow(c, 4) / static_cast<double>(K);
  rep.series_sum = pref * s + rep.series_tail;
  rep.chain_value = 512.0 * std::pow(c, 4) / std::pow(pi, 4) * (pi * pi / 6.0);
  rep.chain_margin = 1.0 + rep.epsilon0 - rep.chain_value;
  rep.series_margin = 1.0 + rep.epsilon0 - rep.series_sum;

  rep.pipeline_half_width = pipeline_half_width;
  if (pipeline_half_width > 0 && c > 0.0) {
    // (16/pi^4) arcsin^4(c/sqrt n) <= 256 c^4 / (pi^4 n^2) by arcsin x <= 2x.
    const double N = pipeline_half_width;
    const auto table = arcsine_fourth_transform(sqrt_template(c, pipeline_half_width))
                           .with_tail_bound(512.0 * std::pow(c, 4) / (std::pow(pi, 4) * N));
    rep.pipeline_l1 = l1_tail(table);
    rep.pipeline_l1_margin = rep.epsilon0 - rep.pipeline_l1;
    CertifyParams params;
    params.workers = workers;
    rep.pipeline_verdict = certify(table, params).verdict;
  } else {
    rep.pipeline_verdict = SbhVerdict::CertifiedSbh;  // Lebesgue
  }
  return rep;
}

nlohmann::json to_json(const McReport& r) {
  return {{"event", r.event},           {"estimate", r.estimate}, {"stderr", r.stderr_},
          {"formula_value", r.formula_value}, {"z_score", r.z_score},   {"samples", r.samples},
          {"seed", r.seed}};
}

nlohmann::json to_json(const GnoatReport& r) {
  return {{"c", r.c},
          {"epsilon0", r.epsilon0},
          {"arcsin_margin", r.arcsin_margin},
          {"series_sum", r.series_sum},
          {"series_tail", r.series_tail},
          {"series_margin", r.series_margin},
          {"chain_value", r.chain_value},
          {"chain_margin", r.chain_margin},
          {"pipeline_half_width", r.pipeline_half_width},
          {"pipeline_l1", r.pipeline_l1},
          {"pipeline_l1_margin", r.pipeline_l1_margin},
          {"pipeline_verdict", to_string(r.pipeline_verdict)}};
}

}  // namespace noatlab
