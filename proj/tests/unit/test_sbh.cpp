#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "noatlab/circle_measures.hpp"
#include "noatlab/sbh.hpp"
#include "oracles.hpp"

using namespace noatlab;

namespace {

FourierTable table_from(std::vector<double> c, double tail = 0.0) {
  return FourierTable(std::vector<cplx>(c.begin(), c.end()), tail, "test");
}

std::function<cplx(long)> coeffs_of(const FourierTable& t) {
  return [&t](long n) { return t.coeff_or_zero(n); };
}

}  // namespace

TEST_CASE("epsilon0 bracket and root") {
  CHECK(sbh_polynomial(0.0) == 1.0);
  CHECK(sbh_polynomial(0.2) == doctest::Approx(-0.624));
  CHECK(sbh_polynomial(0.105) > 0.0);
  CHECK(sbh_polynomial(0.11) < 0.0);
  const double e = epsilon0();
  CHECK(std::abs(sbh_polynomial(e)) <= 1e-12);
  CHECK(e > 0.106);
  CHECK(e < 0.107);
}

TEST_CASE("blum-hanson averages") {
  const std::vector<long> idx{0, 1, 2};
  CHECK(blum_hanson_average(lebesgue_table(4), idx) == doctest::Approx(1.0 / 3.0));
  CHECK(blum_hanson_average(dirac_table(4), idx) == doctest::Approx(1.0));
  CHECK(blum_hanson_average(geometric_table(0.5, 4), idx) == doctest::Approx((3 + 4 * 0.5 + 2 * 0.25) / 9.0));
}

TEST_CASE("sbh form examples") {
  const auto t = table_from({1.0, 0.4});
  const std::vector<long> idx{0, 1};
  CHECK(sbh_form(t, idx, std::vector<std::uint8_t>{0, 1}) == doctest::Approx(0.6));
  CHECK(sbh_form(t, idx, std::vector<std::uint8_t>{0, 0}) == doctest::Approx(1.4));
  CHECK(sbh_form(lebesgue_table(8), std::vector<long>{1, 4, 6}, std::vector<std::uint8_t>{1, 0, 1}) ==
        doctest::Approx(1.0));
  CHECK(sbh_form(t, std::vector<long>{5}, std::vector<std::uint8_t>{1}) == doctest::Approx(1.0));
  CHECK_THROWS(sbh_form(t, std::vector<long>{1, 0}, std::vector<std::uint8_t>{0, 0}));
  CHECK_THROWS(sbh_form(t, idx, std::vector<std::uint8_t>{0}));
}

TEST_CASE("sbh form matches the direct double sum, flip invariance, psd") {
  std::mt19937_64 rng(7);
  FourierTable t({1.0, cplx(0.3, 0.1), cplx(-0.2, 0.05), 0.1, cplx(0.0, -0.15)}, 0.0, "c");
  const auto g = geometric_table(0.6, 30);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 6);
    std::vector<long> idx;
    long v = 0;
    for (int i = 0; i < k; ++i) idx.push_back(v += 1 + static_cast<long>(rng() % 3));
    std::vector<std::uint8_t> s(static_cast<std::size_t>(k)), flipped(s.size());
    std::vector<int> eta(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = rng() & 1;
      flipped[i] = s[i] ^ 1;
      eta[i] = s[i];
    }
    CHECK(sbh_form(t, idx, s) == doctest::Approx(oracle::form(coeffs_of(t), idx, eta)).epsilon(1e-12));
    CHECK(sbh_form(t, idx, s) == doctest::Approx(sbh_form(t, idx, flipped)).epsilon(1e-12));
    CHECK(sbh_form(g, idx, s) >= -1e-9);
    const std::vector<std::uint8_t> zeros(s.size(), 0);
    CHECK(sbh_form(g, idx, zeros) == doctest::Approx(k * blum_hanson_average(g, idx)).epsilon(1e-12));
    CHECK(sbh_form(g, idx, s) <= 1.0 + l1_tail(g) + 1e-9);
  }
}

TEST_CASE("truncation error bar") {
  const auto t = geometric_table(0.5, 3);
  CHECK(form_truncation_error(t, std::vector<long>{0, 1, 2}) == 0.0);
  CHECK(form_truncation_error(t, std::vector<long>{0, 5}) == doctest::Approx(t.tail_bound()));
}

TEST_CASE("exhaustive sup on fixtures") {
  CHECK(sbh_sup_exhaustive(lebesgue_table(16), 5, 12).value == 1.0);
  CHECK(sbh_sup_exhaustive(dirac_table(16), 4, 8).value == doctest::Approx(4.0));
  const auto w = sbh_sup_exhaustive(table_from({1.0, 0.4}), 2, 4);
  CHECK(w.value == doctest::Approx(1.4));
  CHECK(w.indices.size() == 2);
  CHECK(w.signs.front() == 0);
  CHECK_THROWS(sbh_sup_exhaustive(lebesgue_table(30), 13, 20));
  CHECK_THROWS(sbh_sup_exhaustive(lebesgue_table(30), 4, 25));
}

TEST_CASE("exhaustive sup agrees with an unreduced brute force") {
  const std::vector<double> a{0.9, -0.7};
  const std::vector<long> f{1, 3};
  const auto rz = riesz_product(a, f, 12);
  FourierTable cx({1.0, cplx(0.2, 0.35), cplx(-0.3, 0.1), cplx(0.1, -0.2), 0.25, cplx(0.0, 0.1)}, 0.0, "cx");
  for (const FourierTable* t : std::vector<const FourierTable*>{&rz, &cx})
    for (auto [k, win] : {std::pair{2, 5}, std::pair{3, 6}, std::pair{4, 7}}) {
      const auto w = sbh_sup_exhaustive(*t, k, win, 2);
      CHECK(w.value == doctest::Approx(oracle::brute_sup(coeffs_of(*t), k, win)).epsilon(1e-12));
      CHECK(w.value == doctest::Approx(sbh_form(*t, w.indices, w.signs)).epsilon(1e-12));
    }
}

TEST_CASE("exhaustive sup is monotone in the window and bounded by the certificates") {
  const auto g = geometric_table(0.4, 24);
  double prev = 0.0;
  for (int win = 4; win <= 10; ++win) {
    const double v = sbh_sup_exhaustive(g, 4, win).value;
    CHECK(v >= prev - 1e-15);
    prev = v;
    CHECK(v <= 1.0 + l1_tail(g) + 1e-9);
    CHECK(v <= density_sup(g, 4096).certified_upper + 1e-9);
  }
}

TEST_CASE("exhaustive result does not depend on workers") {
  const auto g = geometric_table(0.45, 24);
  const auto a = sbh_sup_exhaustive(g, 6, 14, 1);
  const auto b = sbh_sup_exhaustive(g, 6, 14, 4);
  CHECK(a.value == b.value);
  CHECK(a.indices == b.indices);
  CHECK(a.signs == b.signs);
}

TEST_CASE("heuristic search") {
  HeuristicOptions o;
  o.k = 4;
  o.window = 8;
  CHECK(sbh_sup_heuristic(lebesgue_table(16), o).value == doctest::Approx(1.0));
  o.k = 8;
  o.window = 16;
  o.budget = 200;
  CHECK(sbh_sup_heuristic(dirac_table(16), o).value == doctest::Approx(8.0));

  const auto g = geometric_table(0.5, 16);
  o.k = 4;
  o.window = 8;
  const double h = sbh_sup_heuristic(g, o).value;
  const double e = sbh_sup_exhaustive(g, 4, 8).value;
  CHECK(h <= e + 1e-12);
  CHECK(h >= 1.0);

  HeuristicOptions o4 = o;
  o4.workers = 4;
  CHECK(sbh_sup_heuristic(g, o).value == sbh_sup_heuristic(g, o4).value);
}

TEST_CASE("rajchman decay") {
  CHECK(rajchman_decay(lebesgue_table(32), 8) == 0.0);
  CHECK(rajchman_decay(dirac_table(32), 8) == 1.0);
  CHECK(rajchman_decay(sqrt_template(0.3, 64), 16) == doctest::Approx(0.3 / 7.0));
}

TEST_CASE("certify verdicts") {
  const auto leb = certify(lebesgue_table(16));
  CHECK(leb.verdict == SbhVerdict::CertifiedSbh);
  CHECK(leb.l1_certificate == 1.0);
  CHECK(leb.density_certificate == doctest::Approx(1.0));

  CHECK(certify(table_from({1.0, 0.025})).verdict == SbhVerdict::CertifiedSbh);

  const auto dirac = certify(dirac_table(16));
  CHECK(dirac.verdict == SbhVerdict::CertifiedNotSbh);
  REQUIRE(dirac.exhaustive_sup);
  CHECK(dirac.exhaustive_sup->value == doctest::Approx(4.0));

  CertifyParams none;
  none.exhaustive.reset();
  none.heuristic.reset();
  CHECK(certify(geometric_table(0.5, 16), none).verdict == SbhVerdict::Undecided);

  const auto j = to_json(leb);
  CHECK(j["verdict"] == "CERTIFIED_SBH");
  CHECK(to_string(SbhVerdict::Undecided) == "UNDECIDED");
}
