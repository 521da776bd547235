#include "noatlab/name_source.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "noatlab/parallel.hpp"

namespace noatlab {

namespace {

double frac(double x) { return x - std::floor(x); }

}  // namespace

BitMatrix NameSource::sample_names(std::size_t count, std::size_t length, std::uint64_t seed,
                                   int workers) const {
  if (length == 0) throw std::invalid_argument("name length must be >= 1");
  BitMatrix m(count, length);
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t r = b * kBlock; r < end; ++r) {
      std::mt19937_64 rng(derive_seed(seed, r));
      sample_row(rng, m.row(r));
    }
  });
  return m;
}

std::optional<double> NameSource::exact_correlation(long) const { return std::nullopt; }

// ---------------------------------------------------------------------------

RotationCocycleSource::RotationCocycleSource(RotationCocycle rc, QuadratureOptions quad)
    : rc_(rc), quad_(quad) {
  rc_.validate();
}

void RotationCocycleSource::sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const {
  double x = uniform01(rng);
  double y = uniform01(rng);
  for (auto& b : out) {
    b = y < 0.5 ? 0 : 1;
    y = frac(y + x + rc_.g(x));
    x = frac(x + rc_.alpha);
  }
}

std::optional<double> RotationCocycleSource::exact_correlation(long n) const {
  if (n == 0) return 1.0;
  if (rc_.delta == 0.0) return 0.0;
  return rotation_ac_cocycle_correlation(rc_, n, quad_).value.real();
}

// ---------------------------------------------------------------------------

NilRotationSource::NilRotationSource(NilRotation nr, int max_order) : nr_(nr), max_order_(max_order) {
  nr_.validate();
}

void NilRotationSource::sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const {
  double x = uniform01(rng);
  double y = uniform01(rng);
  double z = uniform01(rng);
  for (auto& b : out) {
    b = z < 0.5 ? 0 : 1;
    z = frac(z + nr_.phi(x, y));
    x = frac(x + nr_.alpha);
    y = frac(y + nr_.beta);
  }
}

std::optional<double> NilRotationSource::exact_correlation(long n) const {
  return nil_rotation_correlation(nr_, n, max_order_).real();
}

// ---------------------------------------------------------------------------

DistalSource::DistalSource(double alpha, long m_scale) : alpha_(alpha), m_scale_(m_scale) {
  if (m_scale == 0) throw std::invalid_argument("distal extension needs m_scale != 0");
  if (!std::isfinite(alpha)) throw std::invalid_argument("distal extension needs finite alpha");
}

void DistalSource::sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const {
  double x = uniform01(rng);
  double y = uniform01(rng);
  double z = uniform01(rng);
  for (auto& b : out) {
    b = z < 0.5 ? 0 : 1;
    z = frac(z + frac(static_cast<double>(m_scale_) * y));
    y = frac(y + x);
    x = frac(x + alpha_);
  }
}

std::optional<double> DistalSource::exact_correlation(long n) const {
  // The fiber average of the square wave's autocorrelation over z + m n y
  // vanishes for m n != 0, as distal_integral shows interval by interval.
  return n == 0 ? 1.0 : distal_integral(n, m_scale_).real();
}

// ---------------------------------------------------------------------------

OdometerExtensionSource::OdometerExtensionSource(OdometerCocycle cocycle) : cocycle_(std::move(cocycle)) {
  if (cocycle_.depth < 0 || cocycle_.depth > kMaxOdometerDepth)
    throw BudgetExceeded("cocycle depth exceeds enumeration budget");
  if (cocycle_.phi.size() != (std::size_t{1} << cocycle_.depth))
    throw std::invalid_argument("cocycle table must have 2^depth entries");
}

void OdometerExtensionSource::sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const {
  // Only the low `depth` digits of the odometer point matter to phi.
  const std::uint64_t mask = (std::uint64_t{1} << cocycle_.depth) - 1;
  std::uint64_t x = rng();
  std::uint8_t s = rng() & 1;
  for (auto& b : out) {
    b = s;
    s ^= cocycle_.phi[x & mask] & 1;
    ++x;
  }
}

std::optional<double> OdometerExtensionSource::exact_correlation(long n) const {
  return two_point_extension_correlation(cocycle_, n);
}

// ---------------------------------------------------------------------------

RudinShapiroSource::RudinShapiroSource() {
  static std::once_flag once;
  static std::shared_ptr<const std::vector<std::int8_t>> cache;
  std::call_once(once, [] {
    cache = std::make_shared<const std::vector<std::int8_t>>(rudin_shapiro_signs(kPrefix));
  });
  signs_ = cache;
}

void RudinShapiroSource::sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const {
  if (out.size() > kPrefix) throw std::invalid_argument("Rudin-Shapiro names are limited to 2^22 symbols");
  const std::uint64_t starts = kPrefix - out.size() + 1;
  const std::size_t start = static_cast<std::size_t>(rng() % starts);
  const std::uint8_t flip = rng() & 1;
  const auto& s = *signs_;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = static_cast<std::uint8_t>((s[start + j] < 0) ^ flip);
}

// ---------------------------------------------------------------------------

BernoulliSource::BernoulliSource(double p0) : p0_(p0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must lie in [0, 1]");
}

void BernoulliSource::sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const {
  if (p0_ == 0.5) {
    std::uint64_t word = 0;
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (j % 64 == 0) word = rng();
      out[j] = (word >> (j % 64)) & 1;
    }
    return;
  }
  for (auto& b : out) b = uniform01(rng) < p0_ ? 0 : 1;
}

std::optional<double> BernoulliSource::exact_correlation(long n) const {
  const double mean = 2.0 * p0_ - 1.0;
  return n == 0 ? 1.0 : mean * mean;
}

void ConstantSource::sample_row(std::mt19937_64& rng, std::span<std::uint8_t> out) const {
  const std::uint8_t v = rng() & 1;
  for (auto& b : out) b = v;
}

FixedNameSource::FixedNameSource(std::vector<std::uint8_t> name) : name_(std::move(name)) {}

void FixedNameSource::sample_row(std::mt19937_64&, std::span<std::uint8_t> out) const {
  if (out.size() > name_.size()) throw std::invalid_argument("fixed name is shorter than requested length");
  std::copy_n(name_.begin(), out.size(), out.begin());
}

// ---------------------------------------------------------------------------

std::unique_ptr<NameSource> make_source(const std::string& id, const SourceParams& p) {
  if (id == "rotation") return std::make_unique<RotationCocycleSource>(RotationCocycle{p.alpha, p.delta, p.delta0});
  if (id == "nil") return std::make_unique<NilRotationSource>(NilRotation{p.alpha, p.beta, p.gamma});
  if (id == "distal") return std::make_unique<DistalSource>(p.alpha, p.m_scale);
  if (id == "odometer") return std::make_unique<OdometerExtensionSource>(OdometerCocycle::from_bits(p.cocycle));
  if (id == "rudin-shapiro") return std::make_unique<RudinShapiroSource>();
  if (id == "coin") return std::make_unique<BernoulliSource>(0.5);
  if (id == "biased") return std::make_unique<BernoulliSource>(p.p0);
  if (id == "constant") return std::make_unique<ConstantSource>();
  throw std::invalid_argument("unknown system '" + id + "'");
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<char, 8> kMagic = {'N', 'O', 'A', 'T', 'N', 'A', 'M', 'E'};

void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("truncated name batch header");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

void write_names(std::ostream& os, const BitMatrix& names) {
  os.write(kMagic.data(), kMagic.size());
  put_u64(os, names.rows);
  put_u64(os, names.cols);
  std::vector<char> packed((names.bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < names.bits.size(); ++i)
    if (names.bits[i]) packed[i / 8] = static_cast<char>(packed[i / 8] | (0x80 >> (i % 8)));
  os.write(packed.data(), static_cast<std::streamsize>(packed.size()));
}

BitMatrix read_names(std::istream& is) {
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error("not a name batch (bad magic)");
  const std::uint64_t rows = get_u64(is);
  const std::uint64_t cols = get_u64(is);
  BitMatrix m(rows, cols);
  std::vector<char> packed((m.bits.size() + 7) / 8);
  if (!is.read(packed.data(), static_cast<std::streamsize>(packed.size())))
    throw std::runtime_error("truncated name batch");
  for (std::size_t i = 0; i < m.bits.size(); ++i)
    m.bits[i] = (static_cast<unsigned char>(packed[i / 8]) >> (7 - i % 8)) & 1;
  return m;
}

}  // namespace noatlab
