import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.corpus import build_corpus
from src.decay import AgeHistogram, DecayParams, age_histogram, fit_lambda, weight
from src.errors import InsufficientData, InvalidRecord
from src.synthgen import GenSpec, generate
from tests.conftest import event


def test_default_weights_round_like_the_worked_example():
    assert [round(weight(i), 2) for i in range(3)] == [1.00, 0.89, 0.79]
    assert weight(0) == 1.0


def test_weight_accepts_arrays():
    w = weight(np.array([0, 1, 2]), DecayParams(0.5))
    np.testing.assert_allclose(w, np.exp([0.0, -0.5, -1.0]))


def test_lambda_must_be_positive():
    with pytest.raises(InvalidRecord):
        DecayParams(0.0)


@given(st.integers(0, 50), st.integers(0, 50), st.floats(0.01, 2.0))
def test_weight_is_multiplicative(a, b, lambda_):
    params = DecayParams(lambda_)
    assert weight(a + b, params) == pytest.approx(weight(a, params) * weight(b, params), rel=1e-12)


@given(st.integers(0, 100), st.floats(0.01, 2.0))
def test_weight_is_monotone(a, lambda_):
    params = DecayParams(lambda_)
    assert 0 < weight(a + 1, params) <= weight(a, params) <= 1


def test_histogram_clamps_negative_ages():
    corpus = build_corpus([event('A', 2005, 'C1', 'J', 2004), event('A', 2005, 'C2', 'J', 2005),
                           event('A', 2005, 'C3', 'J', 2007)], [])
    assert age_histogram(corpus).counts == {0: 2, 2: 1}


def test_fit_recovers_noiseless_lambda():
    hist = AgeHistogram({x: math.exp(-0.117 * x) * 1000 for x in range(11)})
    fit = fit_lambda(hist, start_age=0)
    assert fit.lambda_ == pytest.approx(0.117, abs=1e-9)
    assert fit.r2 == pytest.approx(1.0, abs=1e-9)
    assert fit.n_points == 11


def test_fit_recovers_rounded_lambda():
    hist = AgeHistogram({x: round(1000 * math.exp(-0.117 * x)) for x in range(11)})
    assert fit_lambda(hist, start_age=0).lambda_ == pytest.approx(0.117, abs=0.002)


def test_auto_start_age_uses_the_peak():
    counts = {0: 10, 1: 40, 2: 100}
    counts.update({x: round(100 * math.exp(-0.2 * (x - 2))) for x in range(3, 12)})
    fit = fit_lambda(AgeHistogram(counts))
    assert fit.start_age == 2
    assert fit.lambda_ == pytest.approx(0.2, abs=0.01)


def test_peak_ties_take_the_smaller_age():
    assert AgeHistogram({3: 5, 1: 5, 2: 4}).peak_age() == 1


def test_flat_histogram_gives_zero_lambda():
    fit = fit_lambda(AgeHistogram({x: 50 for x in range(6)}), start_age=0)
    assert fit.lambda_ == pytest.approx(0.0, abs=1e-12)


def test_zero_counts_are_skipped():
    fit = fit_lambda(AgeHistogram({0: 100, 1: 0, 2: 50, 3: 25}), start_age=0)
    assert fit.n_points == 3


def test_not_enough_points():
    with pytest.raises(InsufficientData):
        fit_lambda(AgeHistogram({0: 0, 1: 10}), start_age=0)
    with pytest.raises(InsufficientData):
        fit_lambda(AgeHistogram({}))


def test_fit_on_a_large_synthetic_corpus():
    corpus, _ = generate(GenSpec(seed=117, n_articles=5_000, n_journals=5, citations_per_article=(10, 14),
                                 max_age=10))
    assert len(corpus) >= 50_000
    assert fit_lambda(age_histogram(corpus)).lambda_ == pytest.approx(0.117, abs=0.01)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([1e-3, 1.0, 7.5, 1e6]), st.floats(0.01, 1.0), st.integers(0, 3))
def test_noiseless_recovery_for_any_amplitude(amplitude, lambda_, start_age):
    hist = AgeHistogram({x: amplitude * math.exp(-lambda_ * x) for x in range(12)})
    fit = fit_lambda(hist, start_age=start_age)
    assert fit.lambda_ == pytest.approx(lambda_, abs=1e-9)
    assert fit.r2 == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 10_000), min_size=2, max_size=15), st.sampled_from([0.25, 3.0, 1e4]))
def test_fit_ignores_the_scale_of_the_counts(counts, c):
    hist = AgeHistogram(dict(enumerate(counts)))
    scaled = AgeHistogram({age: c * count for age, count in enumerate(counts)})
    assert fit_lambda(scaled, start_age=0).lambda_ == pytest.approx(fit_lambda(hist, start_age=0).lambda_, abs=1e-9)


def test_histogram_rejects_negative_entries():
    with pytest.raises(InvalidRecord):
        AgeHistogram({-1: 3})
    with pytest.raises(InvalidRecord):
        AgeHistogram({2: -3})
