#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "noatlab/circle_measures.hpp"
#include "noatlab/criterion.hpp"
#include "noatlab/sbh.hpp"
#include "oracles.hpp"

using namespace noatlab;

namespace {

FunnyWord random_word(std::mt19937_64& rng, int k, long spread) {
  FunnyWord w;
  long v = -1;
  for (int i = 0; i < k; ++i) {
    v += 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(spread));
    w.indices.push_back(v);
    w.bits.push_back(rng() & 1);
  }
  return w;
}

}  // namespace

TEST_CASE("hamming and theta") {
  const std::vector<std::uint8_t> a{0, 1, 1, 0}, b{0, 0, 1, 1}, c{1, 0, 0, 1};
  CHECK(hamming(a, a) == 0.0);
  CHECK(hamming(a, c) == 1.0);
  CHECK(hamming(a, b) == 0.5);
  CHECK_THROWS(hamming(a, std::vector<std::uint8_t>{0, 1}));

  const FunnyWord w{{0, 3, 5, 9}, a};
  CHECK(theta_of_name(a, w) == 1.0);
  CHECK(theta_of_name(c, w) == -1.0);
  CHECK(theta_of_name(b, w) == 0.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::uint8_t> name(4);
    for (auto& x : name) x = rng() & 1;
    CHECK(theta_of_name(name, w) == 1.0 - 2.0 * hamming(name, w.bits));
  }
  CHECK_THROWS(FunnyWord({{1, 1}, {0, 0}}).validate());
  CHECK_THROWS(FunnyWord({{1, 2}, {0}}).validate());
}

TEST_CASE("theta l2 exact") {
  std::mt19937_64 rng(5);
  const auto leb = lebesgue_table(256);
  for (int i = 0; i < 100; ++i) {
    const auto w = random_word(rng, 1 + static_cast<int>(rng() % 12), 5);
    CHECK(theta_l2_exact(leb, w) == doctest::Approx(1.0 / w.k()).epsilon(1e-15));
  }
  CHECK(theta_l2_exact(geometric_table(0.5, 4), FunnyWord{{7}, {1}}) == 1.0);
  const FourierTable t({1.0, 0.4}, 0.0, "");
  CHECK(theta_l2_exact(t, FunnyWord{{0, 1}, {0, 1}}) == doctest::Approx(0.3));

  const auto g = geometric_table(0.6, 64);
  for (int i = 0; i < 50; ++i) {
    const auto w = random_word(rng, 6, 4);
    std::vector<int> eta(w.bits.begin(), w.bits.end());
    const double v = theta_l2_exact(g, w);
    CHECK(v == doctest::Approx(oracle::form([&](long n) { return g.coeff_or_zero(n); }, w.indices, eta) / 6.0));
    CHECK(v == doctest::Approx(sbh_form(g, w.indices, w.bits) / 6.0).epsilon(1e-15));
    CHECK(v >= 0.0);
    CHECK(v <= (1.0 + l1_tail(g)) / 6.0 + 1e-12);
  }
}

TEST_CASE("theta l2 empirical") {
  const FunnyWord w{{0, 2, 3, 7}, {0, 1, 1, 0}};
  FixedNameSource fixed({0, 1, 1, 1, 1, 0, 0, 0});
  const auto e = theta_l2_empirical(fixed, w, 100, 1);
  CHECK(e.estimate == 1.0);
  CHECK(e.stderr_ == 0.0);

  BernoulliSource coin;
  std::mt19937_64 rng(9);
  const auto wk = random_word(rng, 16, 3);
  const auto c = theta_l2_empirical(coin, wk, 100000, 2);
  CHECK(std::abs(c.estimate - 1.0 / 16) <= 4.0 * c.stderr_);

  CHECK_THROWS(theta_l2_empirical(coin, FunnyWord{{-1, 2}, {0, 0}}, 10, 1));
}

TEST_CASE("empirical theta matches the exact value under the empirical rudin-shapiro table") {
  RudinShapiroSource rs;
  std::mt19937_64 rng(13);
  const auto w = random_word(rng, 32, 4);
  const auto table = empirical_correlation(rudin_shapiro_signs(RudinShapiroSource::kPrefix),
                                           static_cast<int>(w.indices.back()) + 1);
  const auto emp = theta_l2_empirical(rs, w, 100000, 4);
  CHECK(std::abs(emp.estimate - theta_l2_exact(table, w)) <= 4.0 * emp.stderr_);
}

TEST_CASE("exact and empirical agree on systems with exact correlations") {
  std::mt19937_64 rng(17);
  const auto w = random_word(rng, 8, 2);
  const int span = static_cast<int>(w.indices.back());
  for (const char* id : {"nil", "odometer", "distal"}) {
    SourceParams p;
    p.cocycle = "0111";
    const auto src = make_source(id, p);
    std::vector<cplx> c(static_cast<std::size_t>(span) + 1);
    for (int n = 0; n <= span; ++n) c[static_cast<std::size_t>(n)] = *src->exact_correlation(n);
    const FourierTable t(c, 0.0, id);
    const auto emp = theta_l2_empirical(*src, w, 100000, 6);
    CAPTURE(id);
    CHECK(std::abs(emp.estimate - theta_l2_exact(t, w)) <= 4.0 * emp.stderr_);
  }
}

TEST_CASE("non-AT bound") {
  const double e0 = epsilon0();
  CHECK(non_at_bound(1e-9) == doctest::Approx((1.0 + e0) / 2.0));
  CHECK(non_at_bound(1e-9) == doctest::Approx(0.5533).epsilon(1e-4));
  CHECK(non_at_bound(0.1) == doctest::Approx(0.8645).epsilon(1e-4));
  CHECK(non_at_bound(0.25) == doctest::Approx(2.213).epsilon(1e-3));
  CHECK(non_at_bound_eps_numerator(0.1) == doctest::Approx(1.1 / 1.28));
  CHECK_THROWS(non_at_bound(0.5));
  CHECK_THROWS(non_at_bound(0.0));
}

TEST_CASE("lambda candidates") {
  LambdaFamily fam;
  fam.k = 4;
  fam.horizon = 12;
  fam.max_step = 3;
  fam.offsets = 2;
  fam.random_subsets = 3;
  const auto c = lambda_candidates(fam, 1);
  CHECK(c.size() == 6 + 3);
  CHECK(c.front() == std::vector<long>{0, 1, 2, 3});
  CHECK(c[5] == std::vector<long>{1, 4, 7, 10});
  for (const auto& lam : c) {
    CHECK(lam.size() == 4);
    CHECK(std::is_sorted(lam.begin(), lam.end()));
    CHECK(std::adjacent_find(lam.begin(), lam.end()) == lam.end());
    CHECK(lam.back() < 12);
  }
  CHECK(lambda_candidates(fam, 1) == c);
}

TEST_CASE("funny word search") {
  LambdaFamily fam;
  fam.k = 16;
  fam.horizon = 64;
  fam.random_subsets = 4;

  ConstantSource constant;
  const auto deg = funny_word_search(constant, fam, 0.1, 4000, 3);
  CHECK(deg.candidates[deg.best].k_times_mass == doctest::Approx(8.0).epsilon(0.1));
  CHECK(deg.violations == deg.candidates.size());

  BernoulliSource coin;
  const auto rep = funny_word_search(coin, fam, 0.1, 4000, 3);
  CHECK(rep.violations == 0);
  CHECK(rep.bound == doctest::Approx(non_at_bound(0.1)));
  CHECK(rep.caveat.find("does not certify") != std::string::npos);

  const auto a = funny_word_search(coin, fam, 0.1, 2000, 8, 1);
  const auto b = funny_word_search(coin, fam, 0.1, 2000, 8, 4);
  CHECK(summary_json(a).dump() == summary_json(b).dump());
  for (std::size_t i = 0; i < a.candidates.size(); ++i)
    CHECK(to_json(a.candidates[i]).dump() == to_json(b.candidates[i]).dump());
}

TEST_CASE("theta report") {
  BernoulliSource coin;
  const FunnyWord w{{0, 1, 2, 3}, {0, 0, 0, 0}};
  const auto leb = lebesgue_table(8);
  const auto rep = theta_report(coin, w, 20000, 1, 1, &leb);
  double total = 0.0;
  for (double h : rep.histogram) total += h;
  CHECK(total == doctest::Approx(1.0));
  REQUIRE(rep.exact_l2);
  CHECK(*rep.exact_l2 == doctest::Approx(0.25));
  CHECK(rep.mass_below(0.05) == doctest::Approx(1.0 / 16).epsilon(0.1));
  CHECK(rep.mass_below(0.3) == doctest::Approx(5.0 / 16).epsilon(0.05));
  CHECK(to_json(rep)["mass_below"].contains("0.05"));
}

TEST_CASE("theta symmetry check") {
  std::mt19937_64 rng(21);
  const auto w = random_word(rng, 16, 3);
  BernoulliSource coin;
  CHECK(theta_symmetry_check(coin, w, 20000, 1).symmetric);
  CHECK(theta_symmetry_check(*make_source("nil"), w, 20000, 2).symmetric);
  BernoulliSource biased(0.6);
  const FunnyWord zeros{w.indices, std::vector<std::uint8_t>(w.bits.size(), 0)};
  const auto r = theta_symmetry_check(biased, zeros, 20000, 3);
  CHECK_FALSE(r.symmetric);
  CHECK(r.statistic > r.threshold);
  CHECK_FALSE(theta_symmetry_check(FixedNameSource(std::vector<std::uint8_t>(64, 0)), zeros, 100, 1).symmetric);
}
