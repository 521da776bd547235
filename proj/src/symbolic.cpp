#include "noatlab/symbolic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "noatlab/name_source.hpp"

namespace noatlab {

namespace {

using std::numbers::pi;

double frac(double x) { return x - std::floor(x); }

long double frac_ld(long double x) { return x - std::floor(x); }

// e(t) = exp(2 pi i t), reduced mod 1 first.
cplx expi(double t) {
  const double a = 2.0 * pi * frac(t);
  return {std::cos(a), std::sin(a)};
}

// int_a^b e(kappa y) dy
cplx exp_segment(double kappa, double a, double b) {
  if (std::abs(kappa) < 1e-14) return b - a;
  return (expi(kappa * b) - expi(kappa * a)) / cplx(0.0, 2.0 * pi * kappa);
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::int8_t> rudin_shapiro_signs(std::size_t length) {
  if (length == 0) throw std::invalid_argument("rudin_shapiro_signs needs length >= 1");
  // letters a=0, b=1, c=2, d=3
  static constexpr std::uint8_t rule[4][2] = {{0, 1}, {0, 2}, {3, 1}, {3, 2}};
  std::vector<std::uint8_t> word{0};
  while (word.size() < length) {
    std::vector<std::uint8_t> next(word.size() * 2);
    for (std::size_t i = 0; i < word.size(); ++i) {
      next[2 * i] = rule[word[i]][0];
      next[2 * i + 1] = rule[word[i]][1];
    }
    word.swap(next);
  }
  std::vector<std::int8_t> signs(length);
  for (std::size_t i = 0; i < length; ++i) signs[i] = word[i] < 2 ? 1 : -1;
  return signs;
}

// ---------------------------------------------------------------------------

FourierTable empirical_correlation(std::span<const std::int8_t> signs, int n_max) {
  const std::size_t L = signs.size();
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  if (L == 0 || L < 4 * static_cast<std::size_t>(n_max))
    throw std::invalid_argument("empirical correlation needs length >= 4 n_max");
  std::vector<cplx> c(static_cast<std::size_t>(n_max) + 1);
  c[0] = 1.0;
  for (std::size_t n = 1; n < c.size(); ++n) {
    long long acc = 0;
    for (std::size_t k = 0; k + n < L; ++k) acc += signs[k] * signs[k + n];
    c[n] = static_cast<double>(acc) / static_cast<double>(L - n);
  }
  return FourierTable(std::move(c), 0.0, "empirical (L=" + std::to_string(L) + ")");
}

FourierTable empirical_correlation(const BitMatrix& names, int n_max) {
  const std::size_t L = names.cols;
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  if (names.rows == 0 || L == 0 || L < 4 * static_cast<std::size_t>(n_max))
    throw std::invalid_argument("empirical correlation needs names of length >= 4 n_max");
  std::vector<cplx> c(static_cast<std::size_t>(n_max) + 1);
  c[0] = 1.0;
  for (std::size_t n = 1; n < c.size(); ++n) {
    long long acc = 0;
    for (std::size_t r = 0; r < names.rows; ++r) {
      const auto row = names.row(r);
      for (std::size_t k = 0; k + n < L; ++k) acc += (row[k] == row[k + n]) ? 1 : -1;
    }
    c[n] = static_cast<double>(acc) / (static_cast<double>(names.rows) * static_cast<double>(L - n));
  }
  return FourierTable(std::move(c), 0.0,
                      "empirical (" + std::to_string(names.rows) + " names of length " +
                          std::to_string(L) + ")");
}

// ---------------------------------------------------------------------------

OdometerCocycle OdometerCocycle::constant(std::uint8_t value) { return {0, {static_cast<std::uint8_t>(value & 1)}}; }

OdometerCocycle OdometerCocycle::digit(int digit) {
  if (digit < 0 || digit >= kMaxOdometerDepth) throw std::invalid_argument("digit out of range");
  OdometerCocycle c{digit + 1, std::vector<std::uint8_t>(std::size_t{1} << (digit + 1))};
  for (std::size_t r = 0; r < c.phi.size(); ++r) c.phi[r] = (r >> digit) & 1;
  return c;
}

OdometerCocycle OdometerCocycle::from_bits(const std::string& bits) {
  if (bits.empty() || !std::has_single_bit(bits.size()))
    throw std::invalid_argument("cocycle table length must be a power of two");
  OdometerCocycle c{std::countr_zero(bits.size()), {}};
  if (c.depth > kMaxOdometerDepth) throw BudgetExceeded("cocycle depth exceeds enumeration budget");
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("cocycle table must be a 0/1 string");
    c.phi.push_back(ch == '1');
  }
  return c;
}

double two_point_extension_correlation(const OdometerCocycle& cocycle, long n) {
  if (cocycle.depth < 0 || cocycle.depth > kMaxOdometerDepth)
    throw BudgetExceeded("cocycle depth exceeds enumeration budget (max " +
                         std::to_string(kMaxOdometerDepth) + ")");
  const std::size_t P = std::size_t{1} << cocycle.depth;
  if (cocycle.phi.size() != P) throw std::invalid_argument("cocycle table must have 2^depth entries");
  if (n < 0) n = -n;  // the correlation is real, so c(-n) = c(n)
  if (n == 0) return 1.0;

  std::vector<std::uint64_t> prefix(2 * P + 1, 0);
  for (std::size_t i = 0; i < 2 * P; ++i) prefix[i + 1] = prefix[i] + (cocycle.phi[i % P] & 1);
  const std::uint64_t full = prefix[P];
  const auto un = static_cast<std::uint64_t>(n);
  const std::uint64_t q = un / P;
  const std::size_t rem = static_cast<std::size_t>(un % P);

  long long balance = 0;
  for (std::size_t r = 0; r < P; ++r) {
    const std::uint64_t s = q * full + prefix[r + rem] - prefix[r];
    balance += (s & 1) ? -1 : 1;
  }
  return static_cast<double>(balance) / static_cast<double>(P);
}

// ---------------------------------------------------------------------------

cplx SquareWaveCoeffs::operator()(long m) const {
  if (m % 2 == 0) return 0.0;
  return cplx(0.0, -2.0 / (pi * static_cast<double>(m)));  // 2/(pi i m)
}

double SquareWaveCoeffs::weight(long m) const {
  if (m % 2 == 0) return 0.0;
  const double md = static_cast<double>(m);
  return 4.0 / (pi * pi * md * md);
}

double SquareWaveCoeffs::energy() const {
  double s = 0.0;
  for (long m = max_order - (max_order % 2 == 0 ? 1 : 0); m >= 1; m -= 2) s += 2.0 * weight(m);
  return s;
}

double SquareWaveCoeffs::tail_bound() const { return 8.0 / (pi * pi * std::max(1, max_order)); }

SquareWaveCoeffs square_wave_coeffs(int max_order) {
  if (max_order < 1) throw std::invalid_argument("square wave truncation needs M >= 1");
  return SquareWaveCoeffs{max_order};
}

// ---------------------------------------------------------------------------

void RotationCocycle::validate() const {
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw std::invalid_argument("rotation cocycle needs 0 < delta0 < 1");
  if (!(delta >= 0.0 && delta < 1.0 - delta0))
    throw std::invalid_argument("rotation cocycle needs 0 <= delta < 1 - delta0 (g' > -1 + delta0)");
  if (!std::isfinite(alpha)) throw std::invalid_argument("rotation cocycle needs finite alpha");
}

double RotationCocycle::g(double x) const { return delta / (2.0 * pi) * std::sin(2.0 * pi * x); }

cplx rotation_cocycle_fiber_integral(const RotationCocycle& rc, long m, long n,
                                     const QuadratureOptions& opts) {
  rc.validate();
  if (n < 1) throw std::invalid_argument("fiber integral needs n >= 1");
  // g^(n)(x) = (delta/2pi) Im(e(x) S) with S = sum_{j<n} e(j alpha).
  cplx S = 0.0;
  for (long j = 0; j < n; ++j) S += expi(static_cast<double>(j) * rc.alpha);
  const auto tri = static_cast<long double>(n) * static_cast<long double>(n - 1) / 2.0L;
  const double shift = static_cast<double>(frac_ld(tri * static_cast<long double>(rc.alpha)));
  const double amp = rc.delta / (2.0 * pi);

  auto midpoint = [&](long q) {
    cplx acc = 0.0;
    const double h = 1.0 / static_cast<double>(q);
    for (long i = 0; i < q; ++i) {
      const double x = (static_cast<double>(i) + 0.5) * h;
      const double gn = amp * (std::sin(2.0 * pi * x) * S.real() + std::cos(2.0 * pi * x) * S.imag());
      const double base = frac(static_cast<double>(n) * x + shift + gn);
      acc += expi(static_cast<double>(m) * base);
    }
    return acc * h;
  };

  const double band = std::abs(static_cast<double>(m)) * static_cast<double>(n) * (1.0 + rc.delta) + 16.0;
  long q = static_cast<long>(std::bit_ceil(static_cast<unsigned long>(4.0 * band)));
  q = std::max<long>(q, opts.min_nodes);
  cplx prev = midpoint(q);
  while (2 * q <= opts.max_nodes) {
    q *= 2;
    const cplx cur = midpoint(q);
    if (std::abs(cur - prev) < opts.tolerance) return cur;
    prev = cur;
  }
  throw std::runtime_error("fiber quadrature did not converge to " + std::to_string(opts.tolerance) +
                           " within " + std::to_string(opts.max_nodes) + " nodes");
}

CorrelationValue rotation_ac_cocycle_correlation(const RotationCocycle& rc, long n,
                                                 const QuadratureOptions& opts) {
  rc.validate();
  if (n == 0) return {1.0, 0.0, "exact"};
  const long an = std::labs(n);
  const auto f = square_wave_coeffs(opts.max_order);
  if (rc.delta == 0.0) return {0.0, 0.0, "exact"};

  double sum = 0.0;
  double quad_err = 0.0;
  int small_run = 0;
  long last = 1;
  for (long m = 1; m <= opts.max_order; m += 2) {
    const cplx I = rotation_cocycle_fiber_integral(rc, m, an, opts);
    const double term = 2.0 * f.weight(m) * I.real();  // orders m and -m
    sum += term;
    quad_err += 2.0 * f.weight(m) * opts.tolerance;
    last = m;
    small_run = std::abs(f.weight(m) * std::abs(I)) < 1e-17 ? small_run + 1 : 0;
    if (small_run >= 3) break;
  }
  // Orders beyond `last`: |integral| <= Var(g') / (2 pi |m| (1-delta0)^2 |n|)
  // (integration by parts), and trivially <= 1.
  const double var = 4.0 * rc.delta;
  const double ibp = var / (2.0 * pi * (1.0 - rc.delta0) * (1.0 - rc.delta0) * static_cast<double>(an));
  const double lm = static_cast<double>(last);
  const double tail_ibp = (8.0 / (pi * pi)) * ibp / (4.0 * lm * lm);
  const double tail_trivial = 8.0 / (pi * pi * lm);
  return {sum, quad_err + std::min(tail_ibp, tail_trivial), "quadrature"};
}

double rotation_ac_decay_constant(const RotationCocycle& rc, int max_order) {
  rc.validate();
  const auto f = square_wave_coeffs(max_order);
  double s = 0.0;
  for (long m = 1; m <= max_order; m += 2) s += 2.0 * f.weight(m) / (2.0 * pi * static_cast<double>(m));
  // sum over odd m > M of 1/m^3 <= 1/(4 M^2)
  const double M = max_order;
  s += 2.0 * (4.0 / (pi * pi)) / (2.0 * pi) / (4.0 * M * M);
  const double var = 4.0 * rc.delta;
  return s * var / ((1.0 - rc.delta0) * (1.0 - rc.delta0));
}

// ---------------------------------------------------------------------------

bool is_near_rational(double x, int max_denominator, double tol) {
  for (int q = 1; q <= max_denominator; ++q) {
    const double p = std::round(x * q);
    if (std::abs(x - p / q) <= tol) return true;
  }
  return false;
}

void NilRotation::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("nil-rotation needs 0 < beta < 1");
  if (!std::isfinite(alpha) || !std::isfinite(gamma))
    throw std::invalid_argument("nil-rotation needs finite alpha and gamma");
  if (frac(alpha) == 0.0) throw std::invalid_argument("nil-rotation needs alpha not an integer");
  if (strict_irrationality) {
    if (is_near_rational(beta)) throw std::invalid_argument("beta is rational within 1e-12");
    if (is_near_rational(alpha)) throw std::invalid_argument("alpha is rational within 1e-12");
  }
}

double NilRotation::phi(double x, double y) const {
  const double fx = frac(x);
  const double fy = frac(y);
  return alpha * fy - (fx + alpha) * std::floor(fy + beta) + gamma;
}

long nil_carry_count(double beta, double y, long n) {
  long carries = 0;
  for (long j = 0; j < n; ++j) carries += static_cast<long>(std::floor(frac(y + static_cast<double>(j) * beta) + beta));
  return carries;
}

cplx nil_rotation_correlation(const NilRotation& nr, long n, int max_order) {
  nr.validate();
  if (max_order < 1) throw std::invalid_argument("square wave truncation needs M >= 1");
  if (n == 0) return 1.0;
  if (n < 0) return std::conj(nil_rotation_correlation(nr, -n, max_order));

  std::vector<double> cuts{0.0, 1.0};
  for (long j = 0; j < n; ++j) {
    const double jb = static_cast<double>(j) * nr.beta;
    cuts.push_back(frac(-jb));
    cuts.push_back(frac(1.0 - nr.beta - jb));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Carry-free pieces [a, b): there y_j = y + j beta - k_j with k_j fixed, so
  // the phase is alpha (n y + D) + n gamma with D = sum_j (j beta - k_j).
  struct Piece {
    double a, b, offset;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    if (nil_carry_count(nr.beta, mid, n) != 0) continue;
    long double D = 0.0L;
    for (long j = 0; j < n; ++j) {
      const long double jb = static_cast<long double>(j) * nr.beta;
      D += jb - std::floor(static_cast<long double>(mid) + jb);
    }
    const double offset = static_cast<double>(
        frac_ld(static_cast<long double>(nr.alpha) * D + static_cast<long double>(n) * nr.gamma));
    pieces.push_back({a, b, offset});
  }
  if (pieces.empty()) return 0.0;

  const auto f = square_wave_coeffs(max_order);
  const double kappa1 = nr.alpha * static_cast<double>(n);
  double total = 0.0;
  for (long m = 1; m <= max_order; m += 2) {
    cplx J = 0.0;
    for (const auto& p : pieces)
      J += expi(static_cast<double>(m) * p.offset) * exp_segment(static_cast<double>(m) * kappa1, p.a, p.b);
    total += 2.0 * f.weight(m) * J.real();  // orders m and -m are conjugate
  }
  return total;
}

cplx nil_rotation_closed_form_n1(const NilRotation& nr, int max_order) {
  nr.validate();
  const auto f = square_wave_coeffs(max_order);
  double total = 0.0;
  for (long m = 1; m <= max_order; m += 2) {
    const double md = static_cast<double>(m);
    const cplx term = expi(md * nr.gamma) * (expi(md * nr.alpha * (1.0 - nr.beta)) - 1.0) /
                      cplx(0.0, 2.0 * pi * md * nr.alpha);
    total += 2.0 * f.weight(m) * term.real();
  }
  return total;
}

// ---------------------------------------------------------------------------

cplx distal_integral(long n, long m_scale) {
  const long K = std::labs(n * m_scale);
  if (K == 0) return 0.0;
  // Interval j = [j/(2K), (j+1)/(2K)); K y mod 1 at its midpoint decides the sign.
  long long balance = 0;
  const long intervals = 2 * K;
  constexpr long kDirectLimit = 1L << 24;
  if (intervals <= kDirectLimit) {
    for (long j = 0; j < intervals; ++j) {
      const double ky = frac((static_cast<double>(j) + 0.5) / 2.0);
      balance += ky < 0.5 ? -1 : 1;
    }
  } else {
    // Alternation -1, +1 over an even number of intervals.
    balance = 0;
  }
  return static_cast<double>(balance) / static_cast<double>(intervals);
}

// ---------------------------------------------------------------------------

void write_correlation_csv(std::ostream& os, std::span<const CorrelationRow> rows) {
  os << "n,re,im,method,error_bar\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,", r.n, r.value.value.real(), r.value.value.imag());
    os << buf << r.value.method;
    std::snprintf(buf, sizeof buf, ",%.17g\n", r.value.error_bar);
    os << buf;
  }
}

}  // namespace noatlab
