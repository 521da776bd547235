#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "noatlab/fourier_table.hpp"
#include "noatlab/name_source.hpp"

namespace noatlab {

/// Word W in {0,1}^k indexed by n_1 < ... < n_k.
struct FunnyWord {
  std::vector<long> indices;
  std::vector<std::uint8_t> bits;

  int k() const { return static_cast<int>(indices.size()); }
  void validate() const;
};

/// Fraction of positions where the words differ.
double hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// 1 - 2 hamming(name restricted to the word's indices, W).
double theta_of_name(std::span<const std::uint8_t> name_on_lambda, const FunnyWord& w);

/// Same, reading a full name at the word's indices.
double theta_of_full_name(std::span<const std::uint8_t> name, const FunnyWord& w);

/// ||Theta^W||^2 = (1/k^2) sum_{i,j} (-1)^{W_i + W_j} c(n_i - n_j)
/// = sbh_form / k. Coefficients beyond the table are taken as 0; the
/// matching error bar is form_truncation_error / k.
double theta_l2_exact(const FourierTable& t, const FunnyWord& w);

struct Estimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// Mean of Theta^2 over `samples` names from `src`.
Estimate theta_l2_empirical(const NameSource& src, const FunnyWord& w, std::size_t samples,
                            std::uint64_t seed, int workers = 1);

inline const std::vector<double> kDefaultEpsilonGrid = {0.05, 0.1, 0.2};

struct ThetaReport {
  FunnyWord word;
  std::optional<double> exact_l2;
  std::optional<Estimate> empirical_l2;
  /// histogram[d] = fraction of names at Hamming count d, i.e. Theta = 1 - 2d/k.
  std::vector<double> histogram;

  /// mu^{d < eps} read off the histogram.
  double mass_below(double eps) const;
};

ThetaReport theta_report(const NameSource& src, const FunnyWord& w, std::size_t samples,
                         std::uint64_t seed, int workers = 1,
                         const FourierTable* table = nullptr);

/// (1 + eps0) / (2 (1 - 2 eps)^2), for 0 < eps < 1/2.
double non_at_bound(double eps);
/// The same with numerator 1 + eps.
double non_at_bound_eps_numerator(double eps);

/// Arithmetic progressions {a + j d : j < k} for d in [1, max_step] and
/// a in [0, offsets), kept when they fit in [0, horizon), then
/// `random_subsets` uniform k-subsets of [0, horizon).
struct LambdaFamily {
  int k = 32;
  long horizon = 256;
  int max_step = 4;
  int offsets = 4;
  int random_subsets = 16;
};

std::vector<std::vector<long>> lambda_candidates(const LambdaFamily& fam, std::uint64_t seed);

struct CandidateResult {
  FunnyWord word;
  double mass_below = 0.0;
  double k_times_mass = 0.0;
  double bound = 0.0;
  double stderr_ = 0.0;  ///< standard error of k_times_mass
};

inline constexpr const char* kSearchCaveat =
    "finite-sample probe of a necessary condition for AT: no searched word exceeding the bound is "
    "evidence only, it does not certify non-AT";

struct SearchReport {
  std::string source;
  double epsilon = 0.0;
  double bound = 0.0;
  double bound_eps_numerator = 0.0;
  std::size_t samples = 0;  ///< held-out names
  std::uint64_t seed = 0;
  std::vector<CandidateResult> candidates;
  std::size_t best = 0;
  std::size_t violations = 0;  ///< candidates with k_times_mass > bound + 4 stderr
  std::string caveat = kSearchCaveat;
};

/// W by coordinatewise majority over `samples` training names (ties -> 0),
/// mu^ on `samples` further held-out names. best maximizes k_times_mass,
/// ties broken by the lexicographically smallest Lambda, then W.
SearchReport funny_word_search(const NameSource& src, const LambdaFamily& fam, double eps,
                               std::size_t samples, std::uint64_t seed, int workers = 1);

struct SymmetryReport {
  double statistic = 0.0;  ///< max over thresholds t of |z| for P(Theta <= t) - P(-Theta <= t)
  double threshold = 4.0;
  bool symmetric = true;
  std::size_t samples = 0;
};

SymmetryReport theta_symmetry_check(const NameSource& src, const FunnyWord& w, std::size_t samples,
                                    std::uint64_t seed, int workers = 1);

nlohmann::json to_json(const FunnyWord& w);
nlohmann::json to_json(const CandidateResult& r);
nlohmann::json to_json(const ThetaReport& r);
nlohmann::json to_json(const SymmetryReport& r);
/// Summary object (without the per-candidate rows).
nlohmann::json summary_json(const SearchReport& r);

}  // namespace noatlab
