#pragma once

#include <span>
#include <vector>

#include "noatlab/fourier_table.hpp"

namespace noatlab {

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

/// Lebesgue measure: c(0) = 1, every other coefficient 0, tail 0.
FourierTable lebesgue_table(int half_width);

/// Point mass at 1: c(n) = 1 for every n. The tail is infinite, so the table
/// carries tail_bound 0 and a label saying it is a truncation. Used as the
/// canonical non-Rajchman fixture.
FourierTable dirac_table(int half_width);

/// Poisson kernel, c(n) = rho^|n| for 0 <= rho < 1, with exact geometric tail.
FourierTable geometric_table(double rho, int half_width);

/// Riesz product prod_j (1 + a_j cos(2 pi lambda_j x)).
///
/// Requires |a_j| <= 1, lambda_j >= 1 and lambda_{j+1} >= 3 lambda_j, which
/// makes every n = sum eps_j lambda_j (eps_j in {-1,0,1}) uniquely
/// representable; then c(n) = prod_j (a_j/2)^{|eps_j|}. The tail bound is
/// exact: total l1 mass prod(1+|a_j|) minus the mass inside the window.
FourierTable riesz_product(std::span<const double> amplitudes,
                           std::span<const long> frequencies, int half_width);

/// Coefficient template c(n) = c/sqrt|n|. Not certified to be a measure;
/// check with is_positive_definite() before treating it as one.
FourierTable sqrt_template(double c, int half_width);

// ---------------------------------------------------------------------------
// Transforms and functionals
// ---------------------------------------------------------------------------

/// Table of the measure seen by the m-th power: c_m(n) = c(mn), half width
/// floor(N/m). The tail of the subsampled table is dominated by the tail of
/// the original, so tail_bound is carried over unchanged.
FourierTable power_subsample(const FourierTable& t, int m);

/// sum_{0<|n|<=N} |c(n)| + tail_bound.
double l1_tail(const FourierTable& t);

struct DensityBoundReport {
  int grid_size = 0;
  double sup_estimate = 0.0;    ///< max of the truncated density on the grid
  double argmax_theta = 0.0;    ///< grid point attaining sup_estimate
  double grid_margin = 0.0;     ///< Bernstein derivative bound / (2 grid_size)
  double certified_upper = 0.0; ///< sup_estimate + tail_bound + grid_margin
};

/// Values of d(theta) = sum_{|n|<=N} c(n) e^{2 pi i n theta} at theta = j/grid_size.
std::vector<double> density_on_grid(const FourierTable& t, int grid_size);

/// Certified upper bound on the density. Requires grid_size >= 4N+4.
DensityBoundReport density_sup(const FourierTable& t, int grid_size);

/// Coefficients (2/pi) arcsin(c(n)) of the sign process of a Gaussian
/// process with autocovariance c. Needs real c(n) with |c(n)| < 1 for n != 0.
FourierTable arcsine_transform(const FourierTable& t);

/// Coefficients (16/pi^4) arcsin(c(n))^4 of the four-fold product sign process.
FourierTable arcsine_fourth_transform(const FourierTable& t);

struct PsdReport {
  bool passes = false;
  double min_eigenvalue = 0.0;
  int order = 0;
};

inline constexpr double kPsdTolerance = -1e-8;

/// Smallest eigenvalue of the k x k Toeplitz matrix [c(i-j)]; passes iff it
/// is >= -1e-8. Requires 1 <= k <= N+1.
PsdReport is_positive_definite(const FourierTable& t, int k);

}  // namespace noatlab
