#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "noatlab/symbolic.hpp"

namespace noatlab {

/// count x length matrix of P-name bits, one byte per bit, row-major.
struct BitMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> bits;

  BitMatrix() = default;
  BitMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), bits(r * c, 0) {}

  std::span<const std::uint8_t> row(std::size_t r) const { return {bits.data() + r * cols, cols}; }
  std::span<std::uint8_t> row(std::size_t r) { return {bits.data() + r * cols, cols}; }
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// A system with a distinguished two-set partition {P0, P1}. Each sampled
/// row is the P-name (bit 0 on P0) of an independently drawn initial point
/// along times 0..length-1.
class NameSource {
 public:
  virtual ~NameSource() = default;
  virtual std::string id() const = 0;

  /// Row r uses the generator seeded with derive_seed(seed, r), so the
  /// result does not depend on `workers`.
  BitMatrix sample_names(std::size_t count, std::size_t length, std::uint64_t seed,
                         int workers = 1) const;

  /// <(chi_P0 - chi_P1) o T^n, chi_P0 - chi_P1> when known in closed form.
  virtual std::optional<double> exact_correlation(long n) const;

 protected:
  virtual void sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const = 0;
};

/// (x, y) -> (x + alpha, y + x + g(x)); P0 = {y in [0, 1/2)}.
class RotationCocycleSource : public NameSource {
 public:
  explicit RotationCocycleSource(RotationCocycle rc, QuadratureOptions quad = {});
  std::string id() const override { return "rotation"; }
  std::optional<double> exact_correlation(long n) const override;

 protected:
  void sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const override;

 private:
  RotationCocycle rc_;
  QuadratureOptions quad_;
};

/// (x, y, z) -> (x + alpha, y + beta, z + phi(x, y)); P0 = {z in [0, 1/2)}.
class NilRotationSource : public NameSource {
 public:
  explicit NilRotationSource(NilRotation nr, int max_order = 10000);
  std::string id() const override { return "nil"; }
  std::optional<double> exact_correlation(long n) const override;

 protected:
  void sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const override;

 private:
  NilRotation nr_;
  int max_order_;
};

/// Two-step extension (x, y, z) -> (x + alpha, y + x, z + m_scale y) of an
/// irrational rotation; P0 = {z in [0, 1/2)}. The correlation of the
/// partition is exactly that of Lebesgue measure.
class DistalSource : public NameSource {
 public:
  DistalSource(double alpha, long m_scale);
  std::string id() const override { return "distal"; }
  std::optional<double> exact_correlation(long n) const override;

 protected:
  void sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const override;

 private:
  double alpha_;
  long m_scale_;
};

/// (x, s) -> (x + 1, s + phi(x)) over the dyadic odometer; P0 = {s = 0}.
class OdometerExtensionSource : public NameSource {
 public:
  explicit OdometerExtensionSource(OdometerCocycle cocycle);
  std::string id() const override { return "odometer"; }
  std::optional<double> exact_correlation(long n) const override;

 protected:
  void sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const override;

 private:
  OdometerCocycle cocycle_;
};

/// Windows of the Rudin-Shapiro sequence: a uniform start in a prefix of
/// length 2^22 and an independent global sign flip (the flip is the
/// symmetry S exchanging P0 and P1).
class RudinShapiroSource : public NameSource {
 public:
  static constexpr std::size_t kPrefix = std::size_t{1} << 22;
  RudinShapiroSource();
  std::string id() const override { return "rudin-shapiro"; }

 protected:
  void sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const override;

 private:
  std::shared_ptr<const std::vector<std::int8_t>> signs_;
};

/// I.i.d. bits, P(bit = 0) = p0. p0 = 1/2 is the fair coin.
class BernoulliSource : public NameSource {
 public:
  explicit BernoulliSource(double p0 = 0.5);
  std::string id() const override { return p0_ == 0.5 ? "coin" : "biased"; }
  std::optional<double> exact_correlation(long n) const override;

 protected:
  void sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const override;

 private:
  double p0_;
};

/// The identity map: each name is all 0 or all 1 with probability 1/2.
class ConstantSource : public NameSource {
 public:
  std::string id() const override { return "constant"; }
  std::optional<double> exact_correlation(long) const override { return 1.0; }

 protected:
  void sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const override;
};

/// Always emits the same name (test fixture).
class FixedNameSource : public NameSource {
 public:
  explicit FixedNameSource(std::vector<std::uint8_t> name);
  std::string id() const override { return "fixed"; }

 protected:
  void sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const override;

 private:
  std::vector<std::uint8_t> name_;
};

struct SourceParams {
  double alpha = 0.41421356237309503;
  double beta = 0.8;
  double gamma = 0.0;
  double delta = 0.0;
  double delta0 = 0.5;
  long m_scale = 1;
  std::string cocycle = "01";  ///< odometer cocycle table as a bit string
  double p0 = 0.6;             ///< for "biased"
};

/// ids: rotation, nil, distal, odometer, rudin-shapiro, coin, biased, constant.
std::unique_ptr<NameSource> make_source(const std::string& id, const SourceParams& params = {});

// Batch file: "NOATNAME", uint64 count, uint64 length (little endian), then
// count*length bits packed MSB first as one row-major stream, zero padded.
void write_names(std::ostream& os, const BitMatrix& names);
BitMatrix read_names(std::istream& is);

}  // namespace noatlab
