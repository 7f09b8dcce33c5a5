import math

import numpy as np
import pytest

from catphase import analytic, montecarlo
from catphase.analytic import CatParams
from catphase.errors import InvalidArgumentError
from catphase.montecarlo import (
    ALGORITHM,
    RngSpec,
    detection_experiment,
    sample_counts,
    sampling_table,
    wilson_interval,
)
from catphase.optimizer import minimize_parity


def test_sampling_table_properties():
    cdf = sampling_table(CatParams(1.5, 0.0))
    assert cdf[-1] == 1.0
    assert np.all(np.diff(cdf) >= 0)
    # odd bins carry no mass and the cut lands on an even index
    assert np.all(np.diff(cdf)[0::2] == 0)
    assert (cdf.size - 1) % 2 == 0
    assert cdf[-2] >= 1 - 1e-12 or cdf[-3] < 1 - 1e-12


def test_null_samples_all_even():
    hist = sample_counts(CatParams(1.5, 0.0), 200_000, RngSpec(3))
    assert hist.sum() == 200_000
    assert hist[1::2].sum() == 0


def test_sample_counts_deterministic():
    p = CatParams(1.5, 0.5236)
    a = sample_counts(p, 50_000, RngSpec(11))
    b = sample_counts(p, 50_000, RngSpec(11))
    c = sample_counts(p, 50_000, RngSpec(12))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sample_counts_independent_of_thread_count(monkeypatch):
    p = CatParams(2.0, 0.3)
    monkeypatch.setenv("CATPHASE_THREADS", "1")
    serial = sample_counts(p, 2_500_000, RngSpec(5))
    monkeypatch.setenv("CATPHASE_THREADS", "3")
    assert np.array_equal(sample_counts(p, 2_500_000, RngSpec(5)), serial)


def test_odd_fraction_within_4_sigma():
    hist = sample_counts(CatParams(1.5, 0.5236), 100_000, RngSpec(2024))
    frac = hist[1::2].sum() / 100_000
    p = 0.7826120958292509
    sigma = math.sqrt(p * (1 - p) / 100_000)
    assert sigma == pytest.approx(1.30e-3, abs=1e-5)
    assert abs(frac - p) <= 4 * sigma


@pytest.mark.slow
def test_total_variation_convergence():
    params = CatParams(1.5, 0.5236)
    shots = 1_000_000
    hist = sample_counts(params, shots, RngSpec(77))
    p = analytic.photon_distribution(1.5, 0.5236, hist.size - 1)
    tv = 0.5 * np.abs(hist / shots - p).sum()
    assert tv <= 5 / math.sqrt(shots)


def test_rng_spec_validation():
    with pytest.raises(InvalidArgumentError):
        RngSpec(-1)
    with pytest.raises(InvalidArgumentError):
        RngSpec(2 ** 64)
    with pytest.raises(InvalidArgumentError):
        RngSpec(1, "mt19937")
    assert RngSpec(2 ** 64 - 1).algorithm == ALGORITHM


def test_rejects_bad_shots():
    with pytest.raises(InvalidArgumentError):
        sample_counts(CatParams(1.0, 0.1), 0, RngSpec(1))


# --- Wilson interval ---------------------------------------------------------

def test_wilson_known_values():
    # standard textbook values (z = 1.959964)
    lo, hi = wilson_interval(0, 10)
    assert lo == pytest.approx(0.0, abs=1e-15) and hi == pytest.approx(0.27753, abs=1e-5)
    lo, hi = wilson_interval(9, 10)
    assert lo == pytest.approx(0.59585, abs=1e-5) and hi == pytest.approx(0.98212, abs=1e-5)
    lo, hi = wilson_interval(50, 100)
    assert (lo + hi) / 2 == pytest.approx(0.5, abs=1e-15)


def test_wilson_coverage_by_enumeration():
    # exact binomial coverage at n=200 should be near 95%
    from scipy.stats import binom
    n = 200
    for p in [0.1, 0.2174, 0.5, 0.9]:
        cover = sum(binom.pmf(k, n, p) for k in range(n + 1)
                    if wilson_interval(k, n)[0] <= p <= wilson_interval(k, n)[1])
        assert 0.93 <= cover <= 0.97


# --- detection experiment -----------------------------------------------------

def test_detection_experiment_counts_and_rates():
    stats = detection_experiment(1.5, 0.5236, 10_000, RngSpec(42))
    assert stats.odd_count + stats.even_count == 10_000
    assert stats.null_odd_count + stats.null_even_count == 10_000
    assert stats.false_negative_rate == stats.even_count / 10_000
    assert stats.false_positive_rate == 0.0
    assert stats.null_odd_count == 0
    lo, hi = stats.false_negative_interval
    assert lo <= 0.2173879041707491 <= hi
    assert stats.ci_halfwidth == pytest.approx((hi - lo) / 2)
    assert stats.seed == 42 and stats.algorithm == ALGORITHM


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_null_campaign_zero_false_positive(seed):
    stats = detection_experiment(2.0, 0.37, 300_000, RngSpec(seed))
    assert stats.false_positive_rate == 0.0
    assert stats.false_positive_interval[0] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.slow
def test_false_negative_rate_at_optimum_alpha_25():
    delta = minimize_parity(2.5).delta_star
    shots = 1_000_000
    stats = detection_experiment(2.5, delta, shots, RngSpec(9))
    p_even = analytic.even_odd_probabilities(2.5, delta)[0]
    sigma = math.sqrt(p_even * (1 - p_even) / shots)
    assert stats.false_negative_rate <= 0.1 + 4 * sigma
    assert abs(stats.false_negative_rate - p_even) <= 4 * sigma


@pytest.mark.parametrize("alpha, delta", [(1.0, 0.2), (1.5, 0.47), (2.0, 0.8), (3.0, 0.25)])
def test_false_negative_within_band(alpha, delta):
    shots = 100_000
    stats = detection_experiment(alpha, delta, shots, RngSpec(31))
    p_even = analytic.even_odd_probabilities(alpha, delta)[0]
    sigma = math.sqrt(p_even * (1 - p_even) / shots)
    assert abs(stats.false_negative_rate - p_even) <= 4 * sigma


def test_stats_to_dict_json_ready():
    import json
    d = detection_experiment(1.5, 0.5, 1000, RngSpec(1)).to_dict()
    assert json.loads(json.dumps(d))["shots"] == 1000
