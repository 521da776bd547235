#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace noatlab {

using cplx = std::complex<double>;

/// Raised when a value would break a documented invariant. `invariant()`
/// names the rule so file readers can report which check failed.
class InvariantError : public std::invalid_argument {
 public:
  InvariantError(std::string invariant, const std::string& detail);
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Raised when a requested computation exceeds its enumeration budget.
class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Truncated Fourier-coefficient table of a probability measure on the circle.
///
/// Only c(0..N) is stored; c(-n) = conj(c(n)) is implied, so Hermitian
/// symmetry holds by construction. `tail_bound()` is an upper bound on
/// sum_{|n|>N} |c(n)| and must be added to every downstream estimate.
///
/// Construction enforces c(0) = 1 and |c(n)| <= 1. Positive
/// semidefiniteness is not checked here (empirical tables and coefficient
/// templates need not satisfy it); use is_positive_definite().
class FourierTable {
 public:
  FourierTable(std::vector<cplx> nonnegative, double tail_bound, std::string label);

  int half_width() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double tail_bound() const noexcept { return tail_bound_; }
  const std::string& label() const noexcept { return label_; }

  /// c(n) for |n| <= N; throws std::out_of_range otherwise.
  cplx operator()(long n) const;
  /// c(n), or 0 outside the stored window.
  cplx coeff_or_zero(long n) const noexcept;
  std::span<const cplx> nonnegative() const noexcept { return coeffs_; }

  bool is_real(double tol = 0.0) const noexcept;

  FourierTable with_tail_bound(double tail_bound) const;
  FourierTable with_label(std::string label) const;

 private:
  std::vector<cplx> coeffs_;
  double tail_bound_;
  std::string label_;
};

}  // namespace noatlab
