#include "noatlab/fourier_table.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace noatlab {

namespace {
constexpr double kUnitTol = 1e-12;
}

InvariantError::InvariantError(std::string invariant, const std::string& detail)
    : std::invalid_argument("invariant '" + invariant + "' violated: " + detail),
      invariant_(std::move(invariant)) {}

FourierTable::FourierTable(std::vector<cplx> nonnegative, double tail_bound, std::string label)
    : coeffs_(std::move(nonnegative)), tail_bound_(tail_bound), label_(std::move(label)) {
  if (coeffs_.empty()) throw InvariantError("half_width", "table needs at least c(0)");
  if (!std::isfinite(tail_bound_) || tail_bound_ < 0.0)
    throw InvariantError("tail_bound", "tail bound must be finite and nonnegative");
  const cplx c0 = coeffs_[0];
  if (std::abs(c0.real() - 1.0) > kUnitTol || std::abs(c0.imag()) > kUnitTol)
    throw InvariantError("unit_mass", "c(0) must equal 1");
  coeffs_[0] = 1.0;
  for (std::size_t n = 1; n < coeffs_.size(); ++n) {
    const cplx c = coeffs_[n];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InvariantError("finite", "c(" + std::to_string(n) + ") is not finite");
    if (std::abs(c) > 1.0 + kUnitTol)
      throw InvariantError("modulus_bound", "|c(" + std::to_string(n) + ")| exceeds 1");
  }
}

cplx FourierTable::operator()(long n) const {
  const long a = std::labs(n);
  if (a > half_width())
    throw std::out_of_range("coefficient index " + std::to_string(n) + " outside |n| <= " +
                            std::to_string(half_width()));
  const cplx c = coeffs_[static_cast<std::size_t>(a)];
  return n >= 0 ? c : std::conj(c);
}

cplx FourierTable::coeff_or_zero(long n) const noexcept {
  const long a = std::labs(n);
  if (a > half_width()) return 0.0;
  const cplx c = coeffs_[static_cast<std::size_t>(a)];
  return n >= 0 ? c : std::conj(c);
}

bool FourierTable::is_real(double tol) const noexcept {
  for (const auto& c : coeffs_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

FourierTable FourierTable::with_tail_bound(double tail_bound) const {
  return FourierTable(coeffs_, tail_bound, label_);
}

FourierTable FourierTable::with_label(std::string label) const {
  return FourierTable(coeffs_, tail_bound_, std::move(label));
}

}  // namespace noatlab
