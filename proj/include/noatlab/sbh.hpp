#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "noatlab/fourier_table.hpp"

namespace noatlab {

/// P(t) = 2(1-t)(1-2t)^2 - 1 - t.
double sbh_polynomial(double t);

/// The unique zero of sbh_polynomial in (0, 0.2), found by bisection and
/// cached. Approximately 0.10654.
double epsilon0();

/// ||(1/k) sum_j z^{n_j}||^2 in L^2 of the measure:
/// (1/k^2) sum_{i,j} c(n_i - n_j). Indices must be strictly increasing.
double blum_hanson_average(const FourierTable& t, std::span<const long> indices);

/// ||k^{-1/2} sum_j (-1)^{eta_j} z^{n_j}||^2 = (1/k) sum_{i,j} (-1)^{eta_i+eta_j} c(n_i-n_j).
/// Coefficients outside the table count as zero; see form_truncation_error().
double sbh_form(const FourierTable& t, std::span<const long> indices,
                std::span<const std::uint8_t> signs);

/// Error bar on sbh_form from pairs whose difference exceeds the half width.
/// For fixed i the differences n_i - n_j are distinct, so the omitted terms
/// total at most k * tail_bound before the 1/k normalisation.
double form_truncation_error(const FourierTable& t, std::span<const long> indices);

struct FormWitness {
  double value = 0.0;
  int k = 0;
  int window = 0;
  std::vector<long> indices;
  std::vector<std::uint8_t> signs;
};

/// Number of form evaluations sbh_sup_exhaustive performs.
double exhaustive_evaluations(int k, int window);
inline constexpr double kExhaustiveBudget = 1e8;

/// Exact maximum of sbh_form over k-subsets of [0, window) and all sign
/// patterns. Because the form only depends on index differences, subsets are
/// taken to contain 0; signs are canonicalised with eta_1 = 0. Requires
/// k <= 12, window <= 24 and at most 1e8 evaluations. Ties keep the first
/// candidate in lexicographic order, so the result is independent of workers.
FormWitness sbh_sup_exhaustive(const FourierTable& t, int k, int window, int workers = 1);

struct HeuristicOptions {
  int k = 8;
  int window = 32;
  long budget = 2000;  ///< local-search steps per restart
  std::uint64_t seed = 1;
  int restarts = 4;    ///< restart 0 is pure greedy, the rest start at random
  int workers = 1;
};

/// Lower bound on the supremum: greedy construction followed by local moves
/// (swap one index, flip one sign). Deterministic for a given seed.
FormWitness sbh_sup_heuristic(const FourierTable& t, const HeuristicOptions& opts);

/// max |c(n)| over N - window < n <= N.
double rajchman_decay(const FourierTable& t, int window);

enum class SbhVerdict { CertifiedSbh, CertifiedNotSbh, Undecided };
std::string to_string(SbhVerdict v);

struct ExhaustiveParams {
  int k = 4;
  int window = 8;
};

struct CertifyParams {
  std::optional<ExhaustiveParams> exhaustive = ExhaustiveParams{};
  std::optional<HeuristicOptions> heuristic = HeuristicOptions{};
  int density_grid = 0;  ///< 0 picks max(4N+4, 4096)
  int workers = 1;
};

struct SbhReport {
  std::string label;
  int half_width = 0;
  double tail_bound = 0.0;
  double epsilon0 = 0.0;
  double l1_certificate = 0.0;
  double density_certificate = 0.0;
  int density_grid = 0;
  std::optional<FormWitness> exhaustive_sup;
  std::optional<FormWitness> heuristic_sup;
  SbhVerdict verdict = SbhVerdict::Undecided;
  std::string note;
};

/// Certificates first (l1 tail, density sup), then witnesses. CertifiedSbh
/// needs one certificate <= 1 + eps0; CertifiedNotSbh needs a witnessed form
/// value > 1 + eps0 (a lower bound on the sup at that k only).
SbhReport certify(const FourierTable& t, const CertifyParams& params = {});

nlohmann::json to_json(const FormWitness& w);
nlohmann::json to_json(const SbhReport& r);

}  // namespace noatlab
