#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "noatlab/fourier_table.hpp"

namespace noatlab {

struct BitMatrix;

// ---------------------------------------------------------------------------
// Rudin-Shapiro
// ---------------------------------------------------------------------------

/// First `length` signs of the Rudin-Shapiro sequence, generated by the
/// substitution a->ab, b->ac, c->db, d->dc from a, reading a,b as +1 and
/// c,d as -1.
std::vector<std::int8_t> rudin_shapiro_signs(std::size_t length);

// ---------------------------------------------------------------------------
// Empirical correlations
// ---------------------------------------------------------------------------

/// c(n) = (1/(L-n)) sum_k s_k s_{k+n} for 0 <= n <= n_max on a +-1 sequence.
/// Requires L >= 4 n_max.
FourierTable empirical_correlation(std::span<const std::int8_t> signs, int n_max);

/// Same estimator on P-names (bit 0 -> +1, bit 1 -> -1), averaged over rows.
FourierTable empirical_correlation(const BitMatrix& names, int n_max);

// ---------------------------------------------------------------------------
// Two-point extensions of the dyadic odometer
// ---------------------------------------------------------------------------

/// Cocycle phi: X -> Z/2 depending on the first `depth` binary digits of the
/// odometer point. phi[r] is its value on the cylinder x = r mod 2^depth
/// (digit 0 is the least significant bit).
struct OdometerCocycle {
  int depth = 0;
  std::vector<std::uint8_t> phi;

  static OdometerCocycle constant(std::uint8_t value);
  /// phi(x) = x_digit.
  static OdometerCocycle digit(int digit);
  /// Parse a bit string "0110..." of length 2^depth.
  static OdometerCocycle from_bits(const std::string& bits);
};

inline constexpr int kMaxOdometerDepth = 26;

/// <V^n 1, 1> = mu(phi^(n) = 0) - mu(phi^(n) = 1), exact.
///
/// (x + j) mod 2^d only depends on x mod 2^d, so phi^(n) is constant on the
/// 2^depth cylinders of depth d and is read off prefix sums of the periodic
/// sequence j -> phi((r + j) mod 2^d).
double two_point_extension_correlation(const OdometerCocycle& cocycle, long n);

// ---------------------------------------------------------------------------
// Square wave f = 2 chi_[0,1/2) - 1
// ---------------------------------------------------------------------------

struct SquareWaveCoeffs {
  int max_order = 0;

  /// f^(m) = 2/(pi i m) for odd m, 0 for even m (including m = 0).
  cplx operator()(long m) const;
  /// |f^(m)|^2.
  double weight(long m) const;
  /// sum_{|m| <= M} |f^(m)|^2.
  double energy() const;
  /// Upper bound on sum_{|m| > M} |f^(m)|^2.
  double tail_bound() const;
};

SquareWaveCoeffs square_wave_coeffs(int max_order);

/// A correlation value with its provenance, as written to correlation CSVs.
struct CorrelationValue {
  cplx value;
  double error_bar = 0.0;
  std::string method;  ///< exact | series | quadrature | empirical
};

// ---------------------------------------------------------------------------
// Smooth cocycle over an irrational rotation
// ---------------------------------------------------------------------------

/// Skew product (x, y) -> (x + alpha, y + x + g(x)) with
/// g(x) = (delta / 2 pi) sin(2 pi x), so g' = delta cos(2 pi x) and
/// Var(g') = 4 delta. Requires 0 < delta0 < 1 and 0 <= delta < 1 - delta0
/// (i.e. g' > -1 + delta0).
struct RotationCocycle {
  double alpha = 0.41421356237309503;  // sqrt(2) - 1
  double delta = 0.1;
  double delta0 = 0.5;

  void validate() const;
  double g(double x) const;
};

struct QuadratureOptions {
  int max_order = 10000;    ///< square-wave truncation M
  int min_nodes = 64;       ///< smallest midpoint grid
  double tolerance = 1e-8;  ///< successive-doubling agreement
  int max_nodes = 1 << 22;
};

/// int_0^1 e(m (n x + n(n-1) alpha / 2 + g^(n)(x))) dx by composite midpoint
/// with doubling. Throws std::runtime_error when doubling stops agreeing to
/// `tolerance` before max_nodes.
cplx rotation_cocycle_fiber_integral(const RotationCocycle& rc, long m, long n,
                                     const QuadratureOptions& opts = {});

/// sigma_F(n) = sum_{|m| <= M, m odd} |f^(m)|^2 * fiber integral.
///
/// The summand for order m is bounded by a Bessel term J_{mn}(m delta A)
/// with A <= n, which decays geometrically in m because delta < 1; the sum
/// stops once three consecutive orders fall below 1e-17 and adds the
/// square-wave tail 8/(pi^2 m) to the error bar.
CorrelationValue rotation_ac_cocycle_correlation(const RotationCocycle& rc, long n,
                                                 const QuadratureOptions& opts = {});

/// (sum_{m != 0} |f^(m)|^2 / (2 pi |m|)) * Var(g') / (1 - delta0)^2, the
/// constant C with |sigma_F(n)| <= C / |n|.
double rotation_ac_decay_constant(const RotationCocycle& rc, int max_order = 10000);

// ---------------------------------------------------------------------------
// Nil-rotation as a skew product over (x, y) -> (x + alpha, y + beta)
// ---------------------------------------------------------------------------

/// Cocycle alpha {y} - ({x} + alpha) [{y} + beta] + gamma.
struct NilRotation {
  double alpha = 0.41421356237309503;
  double beta = 0.8;
  double gamma = 0.0;
  /// Reject alpha or beta within 1e-12 of a rational with denominator <= 1000.
  /// Off by default: the correlation formulas hold for any 0 < beta < 1.
  bool strict_irrationality = false;

  void validate() const;
  double phi(double x, double y) const;
};

/// True if x is within tol of p/q for some q <= max_denominator.
bool is_near_rational(double x, int max_denominator = 1000, double tol = 1e-12);

/// Number of carries sum_{j<n} [{y + j beta} + beta].
long nil_carry_count(double beta, double y, long n);

/// <F o T^n, F> for the fiber square wave. The x-integral kills every y with
/// a nonzero carry count; the remaining y-set is a union of intervals with
/// breakpoints {-j beta} and {1 - beta - j beta} on which the phase is affine,
/// so each interval integrates in closed form. Returns exactly 0 when that
/// set is empty.
cplx nil_rotation_correlation(const NilRotation& nr, long n, int max_order = 10000);

/// n = 1 closed form sum_m |f^(m)|^2 e(m gamma) (e(m alpha (1-beta)) - 1) / (2 pi i m alpha).
cplx nil_rotation_closed_form_n1(const NilRotation& nr, int max_order = 10000);

// ---------------------------------------------------------------------------
// Distal extension
// ---------------------------------------------------------------------------

/// int_0^1 exp(i pi chi_[0,1/2)(K y mod 1)) dy with K = m_scale * n, summed
/// exactly over the 2|K| intervals of length 1/(2|K|) on which the integrand
/// alternates -1, +1. For K = 0 this returns the mean of the square wave
/// itself, 0.
cplx distal_integral(long n, long m_scale = 1);

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

struct CorrelationRow {
  long n = 0;
  CorrelationValue value;
};

/// Header "n,re,im,method,error_bar"; numbers with 17 significant digits.
void write_correlation_csv(std::ostream& os, std::span<const CorrelationRow> rows);

}  // namespace noatlab
