import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catphase import analytic
from catphase.errors import InvalidArgumentError, TruncationError
from catphase.fock import (
    FockVector,
    TruncationPolicy,
    cat_state,
    coherent_state,
    displace,
    fidelity,
    fock_state,
    inner,
    parity_expectation,
    photon_distribution,
    poisson_tail,
    required_truncation,
)

TOL = 1e-14


def brute_tail(mu, n):
    """Poisson tail above n via 1 - CDF in extended precision."""
    import mpmath as mp
    mp.mp.dps = 40
    mu = mp.mpf(mu)
    return float(1 - mp.fsum(mp.e ** (-mu) * mu ** k / mp.factorial(k) for k in range(n + 1)))


# --- truncation -------------------------------------------------------------

def test_required_truncation_vacuum():
    assert required_truncation(0.0, 0.0, 1e-14) == 0


@pytest.mark.parametrize("alpha, delta, expected", [
    # frozen from an mpmath tail summation
    (1.5, 0.5, 22),
    (3.0, 0.0, 40),
])
def test_required_truncation_values(alpha, delta, expected):
    n = required_truncation(alpha, delta, 1e-14)
    assert n == expected
    mu = alpha ** 2 + delta ** 2
    assert brute_tail(mu, n) < 1e-14 <= brute_tail(mu, n - 1)


def test_required_truncation_alpha3_above_mean():
    assert required_truncation(3.0, 0.0, 1e-14) > 9


@pytest.mark.parametrize("tol", [0.0, 1.0, -1e-3, 2.0])
def test_required_truncation_rejects_tolerance(tol):
    with pytest.raises(InvalidArgumentError):
        required_truncation(1.0, 0.0, tol)


@pytest.mark.parametrize("mu, n", [(2.5, 10), (9.0, 25), (20.0, 40)])
def test_poisson_tail_matches_extended_precision(mu, n):
    assert poisson_tail(mu, n) == pytest.approx(brute_tail(mu, n), rel=1e-9)


def test_policy_for_state_adds_margin():
    pol = TruncationPolicy.for_state(1.5, 0.5)
    assert pol.n_max == 22 + 10
    with pytest.raises(InvalidArgumentError):
        TruncationPolicy(-1)
    with pytest.raises(InvalidArgumentError):
        TruncationPolicy(5, 0.0)


# --- FockVector -------------------------------------------------------------

def test_fock_vector_is_immutable():
    v = FockVector([1.0, 0.0])
    with pytest.raises(ValueError):
        v.amplitudes[0] = 2.0
    assert v.n_max == 1


def test_fock_vector_rejects_nan():
    with pytest.raises(InvalidArgumentError):
        FockVector([1.0, float("nan")])


# --- coherent and cat states -------------------------------------------------

def test_coherent_vacuum():
    v = coherent_state(0, TruncationPolicy(5))
    assert np.array_equal(v.amplitudes, [1, 0, 0, 0, 0, 0])


def test_coherent_overlap_opposite_amplitudes():
    pol = TruncationPolicy.for_state(1.5)
    ov = inner(coherent_state(1.5, pol), coherent_state(-1.5, pol))
    assert ov.real == pytest.approx(math.exp(-4.5), abs=1e-14)
    assert ov.real == pytest.approx(1.1109e-2, abs=1e-6)
    assert abs(ov.imag) < 1e-16


@settings(max_examples=60, deadline=None)
@given(r1=st.floats(0, 4), t1=st.floats(0, 2 * math.pi), r2=st.floats(0, 4), t2=st.floats(0, 2 * math.pi))
def test_coherent_overlap_closed_form(r1, t1, r2, t2):
    b1, b2 = r1 * complex(math.cos(t1), math.sin(t1)), r2 * complex(math.cos(t2), math.sin(t2))
    pol = TruncationPolicy.for_state(4.0)
    got = inner(coherent_state(b1, pol), coherent_state(b2, pol))
    expected = np.exp(-(abs(b1) ** 2 + abs(b2) ** 2) / 2 + b1.conjugate() * b2)
    assert abs(got - expected) <= 1e-10


def test_coherent_truncation_error():
    with pytest.raises(TruncationError):
        coherent_state(4.0, TruncationPolicy(10))


def test_cat_degenerate_is_vacuum():
    v = cat_state(0.0, TruncationPolicy(6))
    assert np.array_equal(v.amplitudes, [1, 0, 0, 0, 0, 0, 0])


def test_cat_odd_amplitudes_exact_zero():
    v = cat_state(1.5, TruncationPolicy.for_state(1.5))
    assert v.amplitudes[1] == 0 and v.amplitudes[3] == 0
    assert np.all(v.amplitudes[1::2] == 0)


def test_cat_vacuum_probability():
    v = cat_state(1.5, TruncationPolicy.for_state(1.5))
    # mpmath oracle: 0.20848241865658825
    assert abs(v.amplitudes[0]) ** 2 == pytest.approx(0.20848241865658825, abs=1e-14)
    assert abs(v.amplitudes[0]) ** 2 == pytest.approx(analytic.photon_probability(1.5, 0.0, 0), abs=1e-14)


def test_cat_norm_matches_K():
    pol = TruncationPolicy.for_state(1.5)
    raw = coherent_state(1.5, pol).amplitudes + coherent_state(-1.5, pol).amplitudes
    assert np.vdot(raw, raw).real == pytest.approx(analytic.normalization_K(1.5), abs=1e-13)
    assert analytic.normalization_K(1.5) == pytest.approx(2.022217993076485, abs=1e-12)


def test_cat_truncation_error():
    with pytest.raises(TruncationError):
        cat_state(3.0, TruncationPolicy(8))


def test_cat_rejects_negative_and_complex():
    with pytest.raises(InvalidArgumentError):
        cat_state(-1.0, TruncationPolicy(10))
    with pytest.raises(InvalidArgumentError):
        cat_state(1j, TruncationPolicy(10))


# --- displacement -----------------------------------------------------------

def test_displace_zero_is_identity():
    pol = TruncationPolicy.for_state(1.5)
    c = cat_state(1.5, pol)
    assert np.array_equal(displace(c, 0.0, pol).amplitudes, c.amplitudes)


@pytest.mark.parametrize("alpha, delta", [(0.0, 0.7), (1.0, 0.3), (2.0, -1.2), (3.0, 1.5)])
def test_displace_coherent_matches_shifted_coherent(alpha, delta):
    pol = TruncationPolicy.for_state(alpha, delta)
    out = displace(coherent_state(alpha, pol), delta, pol)
    target = coherent_state(complex(alpha, delta), pol)
    assert fidelity(out, target) >= 1 - 1e-10
    # phase e^{i delta alpha} as well
    expected = complex(math.cos(delta * alpha), math.sin(delta * alpha))
    assert abs(inner(target, out) - expected) < 1e-10


def test_displaced_cat_orthogonal_at_first_zero():
    pol = TruncationPolicy.for_state(1.5, 0.5273)
    c = cat_state(1.5, pol)
    d0 = analytic.overlap_zero(1.5)
    assert abs(inner(c, displace(c, d0, pol))) <= 1e-12
    # at the 4-digit rounding 0.5273 the overlap is ~4.8e-6 (slope ~2.6 times 1.85e-6)
    assert abs(inner(c, displace(c, 0.5273, pol))) <= 5e-6


def test_displace_detects_small_space():
    pol = TruncationPolicy(4)
    with pytest.raises(TruncationError):
        displace(fock_state(0, 4), 2.0, pol)
    with pytest.raises(TruncationError):
        displace(fock_state(0, 0), 0.1, TruncationPolicy(0))


def test_displace_pads_smaller_state():
    pol = TruncationPolicy(30)
    out = displace(fock_state(0, 3), 0.5, pol)
    assert out.n_max == 30
    with pytest.raises(InvalidArgumentError):
        displace(fock_state(0, 40), 0.5, pol)


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(0, 4), delta=st.floats(-2, 2))
def test_displace_unitary(alpha, delta):
    pol = TruncationPolicy.for_state(alpha, delta)
    c = cat_state(alpha, pol)
    out = displace(c, delta, pol)
    assert abs(math.sqrt(out.norm_squared()) - math.sqrt(c.norm_squared())) <= pol.tail_tolerance


@settings(max_examples=30, deadline=None)
@given(alpha=st.floats(0, 3), d1=st.floats(-1, 1), d2=st.floats(-1, 1))
def test_displace_composition(alpha, d1, d2):
    pol = TruncationPolicy.for_state(alpha, abs(d1) + abs(d2))
    c = cat_state(alpha, pol)
    two_step = displace(displace(c, d1, pol), d2, pol)
    one_step = displace(c, d1 + d2, pol)
    assert fidelity(two_step, one_step) >= 1 - 1e-8


# --- inner / distribution / parity -------------------------------------------

def test_inner_basics():
    assert inner(fock_state(0, 3), fock_state(1, 3)) == 0
    v = FockVector([0.3, 0.4j, -0.5])
    assert inner(v, v) == pytest.approx(0.5)
    with pytest.raises(InvalidArgumentError):
        inner(fock_state(0, 3), fock_state(0, 4))


def test_inner_displaced_cat_overlap_value():
    pol = TruncationPolicy.for_state(1.5, 0.2)
    c = cat_state(1.5, pol)
    ov = inner(c, displace(c, 0.2, pol))
    # mpmath oracle: 0.81087390305385983
    assert ov.real == pytest.approx(0.8108739030538598, abs=1e-9)
    assert abs(ov.imag) < 1e-12


def test_photon_distribution_vacuum_and_cat():
    assert np.array_equal(photon_distribution(fock_state(0, 3)), [1, 0, 0, 0])
    p = photon_distribution(cat_state(2.0, TruncationPolicy.for_state(2.0)))
    assert np.all(p[1::2] == 0)


def test_photon_distribution_displaced_cat_matches_closed_form():
    pol = TruncationPolicy.for_state(1.5, 0.5273)
    out = displace(cat_state(1.5, pol), 0.5273, pol)
    p = photon_distribution(out)
    assert np.max(np.abs(p - analytic.photon_distribution(1.5, 0.5273, pol.n_max))) <= 1e-9
    assert 1 - pol.tail_tolerance <= p.sum() <= 1 + 1e-15


def test_parity_expectation():
    assert parity_expectation(fock_state(1, 3)) == -1
    c = cat_state(1.5, TruncationPolicy.for_state(1.5))
    assert parity_expectation(c) == pytest.approx(1.0, abs=TOL)
    pol = TruncationPolicy.for_state(1.5, 0.5236)
    out = displace(cat_state(1.5, pol), 0.5236, pol)
    # mpmath oracle: -0.56522419165850184
    assert parity_expectation(out) == pytest.approx(-0.5652241916585018, abs=1e-9)
