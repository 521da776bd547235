import math

import numpy as np
import pytest

import noatlab


def test_epsilon0_is_the_polynomial_root():
    e = noatlab.epsilon0()
    assert 0.106 < e < 0.107
    assert abs(noatlab.sbh_polynomial(e)) <= 1e-12
    assert noatlab.non_at_bound(0.1) == pytest.approx(0.8645, rel=1e-4)


def test_measure_and_certify_round_trip():
    leb = noatlab.measure("lebesgue", N=32)
    assert leb["coeffs"] == [[0, 1.0, 0.0]]
    assert noatlab.certify(leb)["verdict"] == "CERTIFIED_SBH"
    assert noatlab.certify(noatlab.measure("dirac", N=16))["verdict"] == "CERTIFIED_NOT_SBH"

    riesz = noatlab.measure("riesz", N=8, a=[1.0, 1.0], freq=[1, 3])
    coeffs = {n: re for n, re, _ in riesz["coeffs"]}
    assert coeffs == {0: 1.0, 1: 0.5, 2: 0.25, 3: 0.5, 4: 0.25}

    assert noatlab.measure("arcsine4", in_table=leb)["coeffs"] == leb["coeffs"]


def test_bad_parameters_raise():
    with pytest.raises(ValueError):
        noatlab.measure("riesz", a=[2.0], freq=[1])
    with pytest.raises(ValueError):
        noatlab.system_correlations("nope")


def test_system_correlations():
    nil = noatlab.system_correlations("nil", nmax=8, beta=0.7)
    assert all(re == 0.0 and im == 0.0 for n, re, im, _ in nil if n >= 2)
    assert all(row[1] == 0.0 for row in noatlab.system_correlations("distal", nmax=10) if row[0] > 0)

    signs = noatlab.rudin_shapiro_signs(1 << 12)
    assert signs.dtype == np.int8
    assert set(np.unique(signs)) == {-1, 1}
    rs = noatlab.system_correlations("rudin-shapiro", nmax=16, L=1 << 16)
    assert max(abs(row[1]) for row in rs[1:]) <= 5 / math.sqrt(1 << 16)


def test_orthant_and_constants():
    rep = noatlab.orthant_mc(0.5, samples=200000, seed=3)
    assert rep["formula_value"] == pytest.approx(1 / 3)
    assert abs(rep["z_score"]) <= 4
    assert rep == noatlab.orthant_mc(0.5, samples=200000, seed=3, workers=4)

    const = noatlab.gnoat_constants(N=2000)
    assert const["series_margin"] > 0
    assert const["chain_margin"] > 0


def test_names_and_funny_words():
    names = noatlab.sample_names("nil", 100, 32, seed=5)
    assert names.shape == (100, 32)
    assert np.array_equal(names, noatlab.sample_names("nil", 100, 32, seed=5, workers=4))

    const = noatlab.funny_word_search("constant", k=16, samples=1000, horizon=64, random_subsets=2)
    assert const["summary"]["violations"] == len(const["candidates"])
    coin = noatlab.funny_word_search("coin", k=16, samples=1000, horizon=64, random_subsets=2)
    assert coin["summary"]["violations"] == 0
