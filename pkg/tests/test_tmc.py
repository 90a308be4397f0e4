from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gibbsfactor as gf
from gibbsfactor.tmc import PeriodicPoint, sequence_metric


def golden_mean_tmc():
    # 0 -> 0, 0 -> 1, 1 -> 0
    alph = gf.Alphabet(["0", "1"])
    return gf.Tmc(alph, np.array([[1, 1], [1, 0]]))


def test_alphabet_rejects_duplicates():
    with pytest.raises(gf.ModelError):
        gf.Alphabet(["a", "a"])


def test_tmc_rejects_zero_row():
    alph = gf.Alphabet(["x", "y"])
    with pytest.raises(gf.ModelError):
        gf.Tmc(alph, np.array([[1, 1], [0, 0]]))


def test_tmc_rejects_nonbinary():
    alph = gf.Alphabet(["x", "y"])
    with pytest.raises(gf.ModelError):
        gf.Tmc(alph, np.array([[1, 2], [1, 0]]))


def test_word_requires_admissibility():
    tmc = golden_mean_tmc()
    with pytest.raises(gf.AdmissibilityError):
        gf.Word(tmc, (1, 1))
    w = gf.Word(tmc, (0, 1, 0))
    assert w.labels == ("0", "1", "0")


def test_primitivity_golden_mean():
    res = gf.check_primitivity(golden_mean_tmc())
    assert res.primitive
    # [[1,1],[1,0]]^2 = [[2,1],[1,1]] > 0
    assert res.exponent == 2


def test_pattern_primitivity_permutation_fails():
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    res = gf.pattern_primitivity(swap)
    assert not res.primitive


def test_enumerate_words_golden_mean_counts():
    # golden mean: #words(n) follows the Fibonacci recursion 2,3,5,8,13
    tmc = golden_mean_tmc()
    counts = [len(gf.enumerate_words(tmc, n)) for n in range(1, 6)]
    assert counts == [2, 3, 5, 8, 13]


def test_enumerate_words_matches_matrix_count():
    tmc = golden_mean_tmc()
    for n in range(1, 9):
        m = np.linalg.matrix_power(tmc.incidence, n - 1)
        assert len(gf.enumerate_words(tmc, n)) == int(m.sum())


def test_enumerate_words_lexicographic():
    tmc = golden_mean_tmc()
    words = [w.symbols for w in gf.enumerate_words(tmc, 3)]
    assert words == sorted(words)


def test_enumerate_periodic_golden_mean():
    # fixed point 0, the 2-cycle 01/10, and the 3-cycles 001,010,100
    pts = gf.enumerate_periodic(golden_mean_tmc(), 3)
    symbols = {p.symbols for p in pts}
    assert symbols == {(0,), (0, 1), (1, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)}


def test_periodic_point_rejects_power_word():
    tmc = golden_mean_tmc()
    with pytest.raises(gf.AdmissibilityError):
        PeriodicPoint(tmc, (0, 0))


def test_periodic_point_rejects_open_cycle():
    tmc = golden_mean_tmc()
    # 1 -> 1 is forbidden so (1) cannot close up
    with pytest.raises(gf.AdmissibilityError):
        PeriodicPoint(tmc, (1,))


def test_sequence_metric_basics():
    assert sequence_metric((0, 1), (1, 1), 2) == 1.0
    d1 = sequence_metric((0, 1, 0), (0, 1, 1), 2)
    d2 = sequence_metric((0, 1, 0, 1), (0, 1, 0, 0), 2)
    assert d2 < d1 < 1.0
    assert sequence_metric((0, 1), (0, 1), 2, equal=True) == 0.0


def test_sequence_metric_refuses_undecided_prefixes():
    with pytest.raises(gf.AdmissibilityError):
        sequence_metric((0, 1), (0, 1, 0), 2)


@given(st.integers(0, 50), st.integers(0, 50), st.integers(2, 6))
def test_sequence_metric_is_ultrametric_scale(j, k, nb):
    # agreement depth j gives exp(-j / (2 (nb+1))), decreasing in j
    a = tuple([0] * j + [1])
    b = tuple([0] * j + [2])
    d = sequence_metric(a, b, nb)
    assert d == pytest.approx(np.exp(-j / (2.0 * (nb + 1))))
    if k > j:
        a2 = tuple([0] * k + [1])
        b2 = tuple([0] * k + [2])
        assert sequence_metric(a2, b2, nb) < d


@settings(max_examples=60)
@given(st.integers(2, 5), st.data())
def test_random_tmc_word_counts_match_matrix(size, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    # random incidence with no dead rows or columns
    while True:
        inc = (rng.random((size, size)) < 0.5).astype(int)
        if (inc.sum(axis=1) > 0).all() and (inc.sum(axis=0) > 0).all():
            break
    tmc = gf.Tmc(gf.Alphabet([str(i) for i in range(size)]), inc)
    n = data.draw(st.integers(1, 5))
    expected = int(np.linalg.matrix_power(inc, n - 1).sum())
    assert len(gf.enumerate_words(tmc, n)) == expected
