#include "noatlab/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "noatlab/parallel.hpp"
#include "noatlab/sbh.hpp"

namespace noatlab {

void FunnyWord::validate() const {
  if (indices.empty()) throw std::invalid_argument("funny word needs k >= 1");
  if (indices.size() != bits.size()) throw std::invalid_argument("indices and bits differ in length");
  for (std::size_t i = 1; i < indices.size(); ++i)
    if (indices[i] <= indices[i - 1]) throw std::invalid_argument("indices must be strictly increasing");
  for (auto b : bits)
    if (b > 1) throw std::invalid_argument("bits must be 0 or 1");
}

double hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming: length mismatch");
  if (a.empty()) throw std::invalid_argument("hamming: empty words");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return static_cast<double>(d) / static_cast<double>(a.size());
}

double theta_of_name(std::span<const std::uint8_t> name_on_lambda, const FunnyWord& w) {
  return 1.0 - 2.0 * hamming(name_on_lambda, w.bits);
}

namespace {

std::size_t disagreements(std::span<const std::uint8_t> name, const FunnyWord& w) {
  std::size_t d = 0;
  for (std::size_t j = 0; j < w.indices.size(); ++j)
    d += (name[static_cast<std::size_t>(w.indices[j])] != w.bits[j]);
  return d;
}

void check_fits(const FunnyWord& w, std::size_t length) {
  w.validate();
  if (w.indices.front() < 0 || static_cast<std::size_t>(w.indices.back()) >= length)
    throw std::invalid_argument("name length must exceed the largest word index");
}

// Disagreement counts of `samples` names against w.
std::vector<std::size_t> disagreement_counts(const NameSource& src, const FunnyWord& w,
                                             std::size_t samples, std::uint64_t seed, int workers) {
  w.validate();
  if (w.indices.front() < 0) throw std::invalid_argument("word indices must be >= 0");
  const auto length = static_cast<std::size_t>(w.indices.back()) + 1;
  const BitMatrix names = src.sample_names(samples, length, seed, workers);
  std::vector<std::size_t> d(samples);
  for (std::size_t r = 0; r < samples; ++r) d[r] = disagreements(names.row(r), w);
  return d;
}

}  // namespace

double theta_of_full_name(std::span<const std::uint8_t> name, const FunnyWord& w) {
  check_fits(w, name.size());
  return 1.0 - 2.0 * static_cast<double>(disagreements(name, w)) / w.k();
}

double theta_l2_exact(const FourierTable& t, const FunnyWord& w) {
  w.validate();
  return sbh_form(t, w.indices, w.bits) / w.k();
}

Estimate theta_l2_empirical(const NameSource& src, const FunnyWord& w, std::size_t samples,
                            std::uint64_t seed, int workers) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  const auto d = disagreement_counts(src, w, samples, seed, workers);
  const double k = w.k();
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double th = 1.0 - 2.0 * static_cast<double>(d[i]) / k;
    const double x = th * th;
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const double n = static_cast<double>(samples);
  return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

double ThetaReport::mass_below(double eps) const {
  const double k = word.k();
  double s = 0.0;
  for (std::size_t d = 0; d < histogram.size(); ++d)
    if (static_cast<double>(d) / k < eps) s += histogram[d];
  return s;
}

ThetaReport theta_report(const NameSource& src, const FunnyWord& w, std::size_t samples,
                         std::uint64_t seed, int workers, const FourierTable* table) {
  ThetaReport rep;
  rep.word = w;
  const auto d = disagreement_counts(src, w, samples, seed, workers);
  rep.histogram.assign(static_cast<std::size_t>(w.k()) + 1, 0.0);
  for (auto v : d) rep.histogram[v] += 1.0;
  for (auto& h : rep.histogram) h /= static_cast<double>(samples);
  if (samples >= 2) rep.empirical_l2 = theta_l2_empirical(src, w, samples, seed, workers);
  if (table) rep.exact_l2 = theta_l2_exact(*table, w);
  return rep;
}

double non_at_bound(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  return (1.0 + epsilon0()) / (2.0 * (1.0 - 2.0 * eps) * (1.0 - 2.0 * eps));
}

double non_at_bound_eps_numerator(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  return (1.0 + eps) / (2.0 * (1.0 - 2.0 * eps) * (1.0 - 2.0 * eps));
}

// ---------------------------------------------------------------------------

std::vector<std::vector<long>> lambda_candidates(const LambdaFamily& fam, std::uint64_t seed) {
  if (fam.k < 1) throw std::invalid_argument("k must be >= 1");
  if (fam.horizon < fam.k) throw std::invalid_argument("horizon must be >= k");
  std::vector<std::vector<long>> out;
  for (int d = 1; d <= fam.max_step; ++d)
    for (int a = 0; a < fam.offsets; ++a) {
      if (a + static_cast<long>(fam.k - 1) * d >= fam.horizon) continue;
      std::vector<long> lam(static_cast<std::size_t>(fam.k));
      for (int j = 0; j < fam.k; ++j) lam[static_cast<std::size_t>(j)] = a + static_cast<long>(j) * d;
      out.push_back(std::move(lam));
    }
  std::vector<long> pool(static_cast<std::size_t>(fam.horizon));
  for (int i = 0; i < fam.random_subsets; ++i) {
    std::iota(pool.begin(), pool.end(), 0L);
    std::mt19937_64 rng(derive_seed(seed, {0x4c414d424441ULL, static_cast<std::uint64_t>(i)}));
    // partial Fisher-Yates
    for (int j = 0; j < fam.k; ++j) {
      const auto span = static_cast<std::uint64_t>(pool.size() - static_cast<std::size_t>(j));
      std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(j) + rng() % span]);
    }
    std::vector<long> lam(pool.begin(), pool.begin() + fam.k);
    std::sort(lam.begin(), lam.end());
    out.push_back(std::move(lam));
  }
  return out;
}

SearchReport funny_word_search(const NameSource& src, const LambdaFamily& fam, double eps,
                               std::size_t samples, std::uint64_t seed, int workers) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  SearchReport rep;
  rep.source = src.id();
  rep.epsilon = eps;
  rep.bound = non_at_bound(eps);
  rep.bound_eps_numerator = non_at_bound_eps_numerator(eps);
  rep.samples = samples;
  rep.seed = seed;

  const auto lambdas = lambda_candidates(fam, seed);
  const BitMatrix names =
      src.sample_names(2 * samples, static_cast<std::size_t>(fam.horizon), derive_seed(seed, 1), workers);

  rep.candidates.resize(lambdas.size());
  parallel_for(lambdas.size(), workers, [&](std::size_t c) {
    const auto& lam = lambdas[c];
    const std::size_t k = lam.size();
    std::vector<std::size_t> ones(k, 0);
    for (std::size_t r = 0; r < samples; ++r) {
      const auto row = names.row(r);
      for (std::size_t j = 0; j < k; ++j) ones[j] += row[static_cast<std::size_t>(lam[j])];
    }
    FunnyWord w{lam, std::vector<std::uint8_t>(k)};
    for (std::size_t j = 0; j < k; ++j) w.bits[j] = 2 * ones[j] > samples ? 1 : 0;

    std::size_t hits = 0;
    for (std::size_t r = samples; r < 2 * samples; ++r)
      if (static_cast<double>(disagreements(names.row(r), w)) / static_cast<double>(k) < eps) ++hits;
    CandidateResult& out = rep.candidates[c];
    out.mass_below = static_cast<double>(hits) / static_cast<double>(samples);
    out.k_times_mass = static_cast<double>(k) * out.mass_below;
    out.bound = rep.bound;
    out.stderr_ = static_cast<double>(k) *
                  std::sqrt(out.mass_below * (1.0 - out.mass_below) / static_cast<double>(samples));
    out.word = std::move(w);
  });

  for (std::size_t c = 0; c < rep.candidates.size(); ++c) {
    const auto& cur = rep.candidates[c];
    if (cur.k_times_mass > rep.bound + 4.0 * cur.stderr_) ++rep.violations;
    if (c == 0) continue;
    const auto& best = rep.candidates[rep.best];
    const bool better =
        cur.k_times_mass > best.k_times_mass ||
        (cur.k_times_mass == best.k_times_mass &&
         std::tie(cur.word.indices, cur.word.bits) < std::tie(best.word.indices, best.word.bits));
    if (better) rep.best = c;
  }
  return rep;
}

// ---------------------------------------------------------------------------

SymmetryReport theta_symmetry_check(const NameSource& src, const FunnyWord& w, std::size_t samples,
                                    std::uint64_t seed, int workers) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  const auto d = disagreement_counts(src, w, samples, seed, workers);
  const std::size_t k = static_cast<std::size_t>(w.k());
  std::vector<double> count(k + 1, 0.0);
  for (auto v : d) count[v] += 1.0;

  // Theta = 1 - 2d/k, so -Theta corresponds to k - d. Compare
  // P(Theta <= t) with P(-Theta <= t) at each attainable t, i.e. the
  // indicator difference 1{d >= s} - 1{d <= k - s} for s = 0..k.
  SymmetryReport rep;
  rep.samples = samples;
  const double n = static_cast<double>(samples);
  for (std::size_t s = 0; s <= k; ++s) {
    double plus = 0.0, minus = 0.0;  // counts where the difference is +1 / -1
    for (std::size_t v = 0; v <= k; ++v) {
      const int a = (v >= s ? 1 : 0) - (v <= k - s ? 1 : 0);
      if (a > 0) plus += count[v];
      if (a < 0) minus += count[v];
    }
    const double mean = (plus - minus) / n;
    const double var = (plus + minus) / n - mean * mean;
    double z = 0.0;
    if (mean != 0.0)
      z = var > 0.0 ? std::abs(mean) / std::sqrt(var / n) : std::numeric_limits<double>::infinity();
    rep.statistic = std::max(rep.statistic, z);
  }
  rep.symmetric = rep.statistic <= rep.threshold;
  return rep;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const FunnyWord& w) {
  std::string bits;
  for (auto b : w.bits) bits.push_back(b ? '1' : '0');
  return {{"lambda", w.indices}, {"word", bits}};
}

nlohmann::json to_json(const CandidateResult& r) {
  auto j = to_json(r.word);
  j["mass_below"] = r.mass_below;
  j["k_times_mass"] = r.k_times_mass;
  j["bound"] = r.bound;
  j["stderr"] = r.stderr_;
  return j;
}

nlohmann::json to_json(const ThetaReport& r) {
  auto j = to_json(r.word);
  j["histogram"] = r.histogram;
  nlohmann::json mb = nlohmann::json::object();
  for (double e : kDefaultEpsilonGrid) {
    char key[32];
    std::snprintf(key, sizeof key, "%g", e);
    mb[key] = r.mass_below(e);
  }
  j["mass_below"] = mb;
  j["exact_l2"] = r.exact_l2 ? nlohmann::json(*r.exact_l2) : nlohmann::json(nullptr);
  if (r.empirical_l2)
    j["empirical_l2"] = {{"estimate", r.empirical_l2->estimate}, {"stderr", r.empirical_l2->stderr_}};
  else
    j["empirical_l2"] = nullptr;
  return j;
}

nlohmann::json to_json(const SymmetryReport& r) {
  return {{"statistic", std::isfinite(r.statistic) ? nlohmann::json(r.statistic) : nlohmann::json("inf")},
          {"threshold", r.threshold},
          {"symmetric", r.symmetric},
          {"samples", r.samples}};
}

nlohmann::json summary_json(const SearchReport& r) {
  nlohmann::json best = r.candidates.empty() ? nlohmann::json(nullptr) : to_json(r.candidates[r.best]);
  return {{"source", r.source},
          {"epsilon", r.epsilon},
          {"bound", r.bound},
          {"bound_eps_numerator", r.bound_eps_numerator},
          {"samples", r.samples},
          {"seed", r.seed},
          {"candidates", r.candidates.size()},
          {"violations", r.violations},
          {"best", best},
          {"caveat", r.caveat}};
}

}  // namespace noatlab
