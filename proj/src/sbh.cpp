#include "noatlab/sbh.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "noatlab/circle_measures.hpp"
#include "noatlab/parallel.hpp"

namespace noatlab {

namespace {

constexpr int kMaxExhaustiveK = 12;
constexpr int kMaxExhaustiveWindow = 24;

void require_increasing(std::span<const long> indices) {
  if (indices.empty()) throw std::invalid_argument("index list must be nonempty");
  for (std::size_t i = 1; i < indices.size(); ++i)
    if (indices[i] <= indices[i - 1])
      throw std::invalid_argument("indices must be strictly increasing");
}

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

// Form value for an unsorted index set; only differences matter.
double form_unsorted(std::span<const double> re_by_gap, std::span<const long> idx,
                     std::span<const std::uint8_t> signs) {
  const std::size_t k = idx.size();
  double s = static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double sgn = (signs[i] ^ signs[j]) ? -1.0 : 1.0;
      s += 2.0 * sgn * re_by_gap[static_cast<std::size_t>(std::labs(idx[i] - idx[j]))];
    }
  return s / static_cast<double>(k);
}

std::vector<double> real_parts(const FourierTable& t, int window) {
  std::vector<double> r(static_cast<std::size_t>(window));
  for (int d = 0; d < window; ++d) r[static_cast<std::size_t>(d)] = t.coeff_or_zero(d).real();
  return r;
}

FormWitness sorted_witness(const FourierTable& t, int k, int window, std::vector<long> idx,
                           std::vector<std::uint8_t> signs) {
  std::vector<std::size_t> order(idx.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return idx[a] < idx[b]; });
  FormWitness w;
  w.k = k;
  w.window = window;
  for (auto o : order) {
    w.indices.push_back(idx[o]);
    w.signs.push_back(signs[o]);
  }
  // Canonical global sign: first sign 0.
  if (!w.signs.empty() && w.signs[0] == 1)
    for (auto& s : w.signs) s ^= 1;
  w.value = sbh_form(t, w.indices, w.signs);
  return w;
}

struct ExhaustiveBest {
  double score = -1.0;  // k * form value
  std::array<long, kMaxExhaustiveK> idx{};
  std::array<std::uint8_t, kMaxExhaustiveK> signs{};
  bool found = false;
};

// Scans every sign pattern (eta_1 = 0) of one index subset by Gray code,
// updating the quadratic form in O(k) per flip.
void scan_signs(std::span<const double> re_by_gap, const long* idx, int k, ExhaustiveBest& best) {
  double C[kMaxExhaustiveK][kMaxExhaustiveK];
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) C[i][j] = re_by_gap[static_cast<std::size_t>(std::labs(idx[i] - idx[j]))];
  double s[kMaxExhaustiveK];
  double g[kMaxExhaustiveK];
  double S = 0.0;
  for (int i = 0; i < k; ++i) {
    s[i] = 1.0;
    g[i] = 0.0;
    for (int j = 0; j < k; ++j) g[i] += C[i][j];
    S += g[i];
  }
  auto consider = [&] {
    if (S > best.score) {
      best.score = S;
      best.found = true;
      for (int i = 0; i < k; ++i) {
        best.idx[static_cast<std::size_t>(i)] = idx[i];
        best.signs[static_cast<std::size_t>(i)] = s[i] > 0 ? 0 : 1;
      }
    }
  };
  consider();
  const std::uint32_t patterns = 1u << (k - 1);
  for (std::uint32_t step = 1; step < patterns; ++step) {
    const int p = 1 + std::countr_zero(step);
    const double sp = s[p];
    S -= 4.0 * sp * (g[p] - C[p][p] * sp);
    for (int j = 0; j < k; ++j) g[j] -= 2.0 * C[j][p] * sp;
    s[p] = -sp;
    consider();
  }
}

}  // namespace

double sbh_polynomial(double t) { return 2.0 * (1.0 - t) * (1.0 - 2.0 * t) * (1.0 - 2.0 * t) - 1.0 - t; }

double epsilon0() {
  static const double root = [] {
    double lo = 0.0;
    double hi = 0.2;  // P(0) = 1 > 0, P(0.2) = -0.624 < 0
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (sbh_polynomial(mid) > 0.0 ? lo : hi) = mid;
    }
    return std::abs(sbh_polynomial(lo)) <= std::abs(sbh_polynomial(hi)) ? lo : hi;
  }();
  return root;
}

double blum_hanson_average(const FourierTable& t, std::span<const long> indices) {
  require_increasing(indices);
  const std::vector<std::uint8_t> zeros(indices.size(), 0);
  return sbh_form(t, indices, zeros) / static_cast<double>(indices.size());
}

double sbh_form(const FourierTable& t, std::span<const long> indices,
                std::span<const std::uint8_t> signs) {
  if (indices.size() != signs.size())
    throw std::invalid_argument("sbh_form: indices and signs differ in length");
  require_increasing(indices);
  const std::size_t k = indices.size();
  double s = static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double sgn = ((signs[i] ^ signs[j]) & 1) ? -1.0 : 1.0;
      s += 2.0 * sgn * t.coeff_or_zero(indices[j] - indices[i]).real();
    }
  return s / static_cast<double>(k);
}

double form_truncation_error(const FourierTable& t, std::span<const long> indices) {
  if (indices.empty()) return 0.0;
  const long spread = indices.back() - indices.front();
  return spread > t.half_width() ? t.tail_bound() : 0.0;
}

double exhaustive_evaluations(int k, int window) {
  return binomial(window - 1, k - 1) * std::ldexp(1.0, k - 1);
}

FormWitness sbh_sup_exhaustive(const FourierTable& t, int k, int window, int workers) {
  if (k < 1 || k > kMaxExhaustiveK) throw std::invalid_argument("exhaustive search needs 1 <= k <= 12");
  if (window < k || window > kMaxExhaustiveWindow)
    throw std::invalid_argument("exhaustive search needs k <= window <= 24");
  if (exhaustive_evaluations(k, window) > kExhaustiveBudget)
    throw BudgetExceeded("exhaustive search over " + std::to_string(exhaustive_evaluations(k, window)) +
                         " evaluations exceeds the 1e8 budget");

  const auto re = real_parts(t, window);

  // Task a covers the subsets {0, a, ...}; k = 1 has the single subset {0}.
  const int n_tasks = k == 1 ? 1 : window - k + 1;
  std::vector<ExhaustiveBest> results(static_cast<std::size_t>(n_tasks));
  parallel_for(static_cast<std::size_t>(n_tasks), workers, [&](std::size_t task) {
    ExhaustiveBest& best = results[task];
    long idx[kMaxExhaustiveK];
    idx[0] = 0;
    if (k == 1) {
      scan_signs(re, idx, k, best);
      return;
    }
    idx[1] = static_cast<long>(task) + 1;
    // Remaining k-2 elements from (idx[1], window), lexicographic.
    const int rest = k - 2;
    std::array<long, kMaxExhaustiveK> comb{};
    for (int i = 0; i < rest; ++i) comb[static_cast<std::size_t>(i)] = idx[1] + 1 + i;
    for (;;) {
      if (rest == 0 || comb[static_cast<std::size_t>(rest - 1)] < window) {
        for (int i = 0; i < rest; ++i) idx[2 + i] = comb[static_cast<std::size_t>(i)];
        scan_signs(re, idx, k, best);
      }
      if (rest == 0) break;
      int i = rest - 1;
      while (i >= 0 && comb[static_cast<std::size_t>(i)] == window - rest + i) --i;
      if (i < 0) break;
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < rest; ++j) comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  });

  const ExhaustiveBest* best = nullptr;
  for (const auto& r : results)
    if (r.found && (!best || r.score > best->score)) best = &r;
  std::vector<long> idx(best->idx.begin(), best->idx.begin() + k);
  std::vector<std::uint8_t> signs(best->signs.begin(), best->signs.begin() + k);
  return sorted_witness(t, k, window, std::move(idx), std::move(signs));
}

FormWitness sbh_sup_heuristic(const FourierTable& t, const HeuristicOptions& o) {
  if (o.k < 1 || o.window < o.k) throw std::invalid_argument("heuristic search needs 1 <= k <= window");
  if (o.restarts < 1) throw std::invalid_argument("heuristic search needs at least one restart");
  const auto re = real_parts(t, o.window);
  const auto k = static_cast<std::size_t>(o.k);

  struct Run {
    double value = -1.0;
    std::vector<long> idx;
    std::vector<std::uint8_t> signs;
  };
  std::vector<Run> runs(static_cast<std::size_t>(o.restarts));

  parallel_for(runs.size(), o.workers, [&](std::size_t r) {
    std::mt19937_64 rng(derive_seed(o.seed, r));
    std::vector<long> idx;
    std::vector<std::uint8_t> signs;
    std::vector<char> used(static_cast<std::size_t>(o.window), 0);

    if (r == 0) {
      idx.push_back(0);
      signs.push_back(0);
      used[0] = 1;
      while (idx.size() < k) {
        double best = -1e300;
        long best_i = -1;
        std::uint8_t best_s = 0;
        idx.push_back(0);
        signs.push_back(0);
        for (long cand = 0; cand < o.window; ++cand) {
          if (used[static_cast<std::size_t>(cand)]) continue;
          for (std::uint8_t sg = 0; sg < 2; ++sg) {
            idx.back() = cand;
            signs.back() = sg;
            const double v = form_unsorted(re, idx, signs);
            if (v > best) {
              best = v;
              best_i = cand;
              best_s = sg;
            }
          }
        }
        idx.back() = best_i;
        signs.back() = best_s;
        used[static_cast<std::size_t>(best_i)] = 1;
      }
    } else {
      std::vector<long> pool(static_cast<std::size_t>(o.window));
      std::iota(pool.begin(), pool.end(), 0L);
      std::shuffle(pool.begin(), pool.end(), rng);
      std::bernoulli_distribution coin(0.5);
      for (std::size_t i = 0; i < k; ++i) {
        idx.push_back(pool[i]);
        signs.push_back(coin(rng) ? 1 : 0);
        used[static_cast<std::size_t>(pool[i])] = 1;
      }
    }

    double cur = form_unsorted(re, idx, signs);
    Run best{cur, idx, signs};
    std::uniform_int_distribution<std::size_t> pick_pos(0, k - 1);
    std::uniform_int_distribution<long> pick_idx(0, o.window - 1);
    std::bernoulli_distribution do_flip(0.5);
    for (long step = 0; step < o.budget; ++step) {
      const std::size_t p = pick_pos(rng);
      const bool flip = static_cast<long>(k) == o.window || do_flip(rng);
      const long old_idx = idx[p];
      if (flip) {
        signs[p] ^= 1;
      } else {
        long cand;
        do cand = pick_idx(rng);
        while (used[static_cast<std::size_t>(cand)]);
        idx[p] = cand;
      }
      const double v = form_unsorted(re, idx, signs);
      if (v >= cur) {
        cur = v;
        if (!flip) {
          used[static_cast<std::size_t>(old_idx)] = 0;
          used[static_cast<std::size_t>(idx[p])] = 1;
        }
        if (v > best.value) best = Run{v, idx, signs};
      } else if (flip) {
        signs[p] ^= 1;
      } else {
        idx[p] = old_idx;
      }
    }
    runs[r] = std::move(best);
  });

  const Run* best = &runs[0];
  for (const auto& r : runs)
    if (r.value > best->value) best = &r;
  return sorted_witness(t, o.k, o.window, best->idx, best->signs);
}

double rajchman_decay(const FourierTable& t, int window) {
  const int N = t.half_width();
  if (window < 1 || window > N) throw std::invalid_argument("rajchman_decay needs 1 <= window <= N");
  double m = 0.0;
  for (int n = N - window + 1; n <= N; ++n) m = std::max(m, std::abs(t(n)));
  return m;
}

std::string to_string(SbhVerdict v) {
  switch (v) {
    case SbhVerdict::CertifiedSbh: return "CERTIFIED_SBH";
    case SbhVerdict::CertifiedNotSbh: return "CERTIFIED_NOT_SBH";
    case SbhVerdict::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

SbhReport certify(const FourierTable& t, const CertifyParams& params) {
  SbhReport r;
  r.label = t.label();
  r.half_width = t.half_width();
  r.tail_bound = t.tail_bound();
  r.epsilon0 = epsilon0();
  r.l1_certificate = 1.0 + l1_tail(t);
  r.density_grid = params.density_grid > 0 ? params.density_grid
                                           : std::max(4 * t.half_width() + 4, 4096);
  r.density_certificate = density_sup(t, r.density_grid).certified_upper;

  if (params.exhaustive) {
    const auto& e = *params.exhaustive;
    r.exhaustive_sup = sbh_sup_exhaustive(t, e.k, e.window, params.workers);
  }
  if (params.heuristic) {
    auto h = *params.heuristic;
    h.workers = params.workers;
    r.heuristic_sup = sbh_sup_heuristic(t, h);
  }

  const double threshold = 1.0 + r.epsilon0;
  const double certificate = std::min(r.l1_certificate, r.density_certificate);
  double witnessed = -1.0;
  if (r.exhaustive_sup) witnessed = std::max(witnessed, r.exhaustive_sup->value);
  if (r.heuristic_sup) witnessed = std::max(witnessed, r.heuristic_sup->value);

  if (certificate <= threshold) {
    r.verdict = SbhVerdict::CertifiedSbh;
    r.note = r.l1_certificate <= r.density_certificate
                 ? "l1 certificate: 1 + sum_{n!=0}|c(n)| + tail_bound <= 1 + eps0"
                 : "density certificate: certified sup of the density <= 1 + eps0";
  } else if (witnessed > threshold) {
    r.verdict = SbhVerdict::CertifiedNotSbh;
    r.note =
        "witnessed form value exceeds 1 + eps0; a finite witness bounds the sup from below "
        "at this k only, so the limsup claim over k is heuristic";
  } else {
    r.verdict = SbhVerdict::Undecided;
    r.note = "no certificate <= 1 + eps0 and no witness above it";
  }
  return r;
}

nlohmann::json to_json(const FormWitness& w) {
  return nlohmann::json{{"value", w.value},     {"k", w.k},
                        {"window", w.window},   {"indices", w.indices},
                        {"signs", w.signs}};
}

nlohmann::json to_json(const SbhReport& r) {
  nlohmann::json j{{"label", r.label},
                   {"half_width", r.half_width},
                   {"tail_bound", r.tail_bound},
                   {"epsilon0", r.epsilon0},
                   {"l1_certificate", r.l1_certificate},
                   {"density_certificate", r.density_certificate},
                   {"density_grid", r.density_grid},
                   {"exhaustive_sup", nullptr},
                   {"heuristic_sup", nullptr},
                   {"verdict", to_string(r.verdict)},
                   {"note", r.note}};
  if (r.exhaustive_sup) j["exhaustive_sup"] = to_json(*r.exhaustive_sup);
  if (r.heuristic_sup) j["heuristic_sup"] = to_json(*r.heuristic_sup);
  return j;
}

}  // namespace noatlab
