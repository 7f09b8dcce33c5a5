"""Closed-form results for the displaced even cat state.

All functions take a real cat amplitude ``alpha >= 0`` and a real
displacement ``delta``. ``delta`` may be a numpy array, in which case the
result is evaluated elementwise; ``alpha`` is always a scalar.

The displaced state is ``D(delta)|Psi_0>`` with ``D(delta) = exp(i delta (a^dag + a))``
and ``|Psi_0> = (|alpha> + |-alpha>)/sqrt(K)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, InvalidArgumentError

__all__ = [
    "CatParams",
    "ReferenceLimits",
    "Limits",
    "check_alpha",
    "normalization_K",
    "overlap",
    "overlap_zero",
    "detectable_phase",
    "detectable_phase_approx",
    "parity",
    "even_odd_probabilities",
    "even_odd_probabilities_series",
    "photon_probability",
    "photon_distribution",
    "reference_limits",
]


def check_alpha(alpha) -> float:
    """Validate a cat amplitude and return it as a float.

    Complex amplitudes are rejected rather than projected: every formula here
    assumes a real amplitude.
    """
    if isinstance(alpha, complex) or np.iscomplexobj(alpha):
        raise DomainError(f"alpha must be real, got {alpha!r}")
    if np.ndim(alpha) != 0:
        raise InvalidArgumentError("alpha must be a scalar")
    a = float(alpha)
    if not math.isfinite(a) or a < 0:
        raise DomainError(f"alpha must be finite and >= 0, got {a}")
    return a


def _check_delta(delta):
    if np.iscomplexobj(delta):
        raise DomainError("delta must be real")
    d = np.asarray(delta, dtype=float)
    if not np.all(np.isfinite(d)):
        raise DomainError("delta must be finite")
    return d


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class CatParams:
    """Cat amplitude and displacement, the two parameters of every closed form."""

    alpha: float
    delta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        d = _check_delta(self.delta)
        if d.ndim != 0:
            raise InvalidArgumentError("CatParams.delta must be a scalar")
        object.__setattr__(self, "delta", float(d))


@dataclass(frozen=True)
class ReferenceLimits:
    n_photons: float
    squeeze_factor: float = 0.0

    def __post_init__(self):
        if not (self.n_photons > 0 and math.isfinite(self.n_photons)):
            raise InvalidArgumentError("n_photons must be positive")
        if not (self.squeeze_factor >= 0 and math.isfinite(self.squeeze_factor)):
            raise InvalidArgumentError("squeeze_factor must be >= 0")


class Limits(NamedTuple):
    snl: float
    sqz: float
    hl: float


def normalization_K(alpha: float) -> float:
    """Return ``K = 2 (1 + exp(-2 alpha^2))``, the squared norm of ``|alpha> + |-alpha>``."""
    a = check_alpha(alpha)
    return 2.0 * (1.0 + math.exp(-2.0 * a * a))


def overlap(alpha: float, delta):
    """Overlap ``<Psi_0|Psi_delta>`` between the cat state and its displaced copy.

    The overlap is real with the phase convention of ``D(delta)``.
    """
    a = check_alpha(alpha)
    d = _check_delta(delta)
    K = normalization_K(a)
    return _out(2.0 * np.exp(-0.5 * d * d) / K * (np.cos(2.0 * a * d) + math.exp(-2.0 * a * a)))


def overlap_zero(alpha: float, k: int = 0) -> float:
    """Return the ``k``-th positive displacement at which the overlap vanishes.

    ``arccos`` is taken on its principal branch, so the zeros are ordered by ``k``.
    """
    a = check_alpha(alpha)
    if a == 0.0:
        raise DomainError("the overlap has no zero at alpha = 0")
    if int(k) != k or k < 0:
        raise InvalidArgumentError(f"k must be a nonnegative integer, got {k!r}")
    return (math.acos(-math.exp(-2.0 * a * a)) + 2.0 * math.pi * int(k)) / (2.0 * a)


def _check_n(n_photons: float) -> float:
    n = float(n_photons)
    if not (n > 0 and math.isfinite(n)):
        raise DomainError(f"n_photons must be positive, got {n_photons!r}")
    return n


def detectable_phase(alpha: float, n_photons: float) -> float:
    """Smallest phase shift that makes the output state orthogonal to the input."""
    return overlap_zero(alpha, 0) / math.sqrt(_check_n(n_photons))


def detectable_phase_approx(alpha: float, n_photons: float) -> float:
    """Large-amplitude form of :func:`detectable_phase`, ``pi / (4 alpha sqrt(N))``."""
    a = check_alpha(alpha)
    if a == 0.0:
        raise DomainError("alpha must be > 0")
    return math.pi / (4.0 * a * math.sqrt(_check_n(n_photons)))


def parity(alpha: float, delta):
    """Expectation of ``(-1)^n`` in the displaced cat state."""
    a = check_alpha(alpha)
    d = _check_delta(delta)
    c = math.exp(-2.0 * a * a)
    return _out(np.exp(-2.0 * d * d) * (np.cos(4.0 * a * d) + c) / (1.0 + c))


def even_odd_probabilities(alpha: float, delta):
    """Return ``(p_even, p_odd)`` derived from the parity.

    At ``delta == 0`` the odd probability is exactly zero.
    """
    P = parity(alpha, delta)
    return (1.0 + P) / 2.0, (1.0 - P) / 2.0


def even_odd_probabilities_series(alpha: float, delta):
    """Return ``(p_even, p_odd)`` from the cosh/sinh resummation of the photon distribution.

    Independent of :func:`parity`; used to cross-check it. Exponentials are
    rescaled by ``exp(-(alpha^2 + delta^2))`` before being combined, so large
    amplitudes do not overflow.
    """
    a = check_alpha(alpha)
    d = _check_delta(delta)
    mu = a * a + d * d
    z = (a * a - d * d) + 2j * a * d
    rot = np.exp(2j * a * d)
    # exp(-mu) cosh(mu), exp(-mu) sinh(mu)
    ch_mu = 0.5 * (1.0 + np.exp(-2.0 * mu))
    sh_mu = 0.5 * (1.0 - np.exp(-2.0 * mu))
    # exp(-mu) cosh(z), exp(-mu) sinh(z); Re z <= mu keeps both bounded
    ez, emz = np.exp(z - mu), np.exp(-z - mu)
    ch_z, sh_z = 0.5 * (ez + emz), 0.5 * (ez - emz)
    pref = 2.0 / normalization_K(a)
    p_even = pref * (ch_mu + np.real(rot * ch_z))
    p_odd = pref * (sh_mu - np.real(rot * sh_z))
    return _out(p_even), _out(p_odd)


def photon_probability(alpha: float, delta: float, n):
    """Probability of counting ``n`` photons in the displaced cat state.

    Evaluated in log space. With ``mu = alpha^2 + delta^2`` and
    ``theta = atan2(delta, alpha)`` the bracketed term of the distribution
    equals ``mu^n (1 + (-1)^n cos(2 alpha delta + 2 n theta))``, which is
    written as ``2 cos^2`` or ``2 sin^2`` of half the angle so that odd
    counts vanish exactly at ``delta = 0``.
    """
    a = check_alpha(alpha)
    d = float(_check_delta(delta))
    n_arr = np.asarray(n)
    if not np.issubdtype(n_arr.dtype, np.integer):
        if not np.all(n_arr == np.floor(n_arr)):
            raise InvalidArgumentError("n must be integral")
        n_arr = n_arr.astype(np.int64)
    if np.any(n_arr < 0):
        raise InvalidArgumentError("n must be >= 0")
    mu = a * a + d * d
    K = normalization_K(a)
    if mu == 0.0:
        return _out(np.where(n_arr == 0, 1.0, 0.0))
    theta = math.atan2(d, a)
    half = a * d + n_arr * theta
    odd = (n_arr % 2) == 1
    shape = np.where(odd, 2.0 * np.sin(half) ** 2, 2.0 * np.cos(half) ** 2)
    log_poisson = n_arr * math.log(mu) - mu - gammaln(n_arr + 1)
    return _out(2.0 / K * np.exp(log_poisson) * shape)


def photon_distribution(alpha: float, delta: float, n_max: int) -> np.ndarray:
    """Vector of :func:`photon_probability` for ``n = 0 .. n_max``."""
    if int(n_max) != n_max or n_max < 0:
        raise InvalidArgumentError("n_max must be a nonnegative integer")
    return np.asarray(photon_probability(alpha, delta, np.arange(int(n_max) + 1)), dtype=float)


def reference_limits(limits: ReferenceLimits) -> Limits:
    """Shot-noise, squeezed and Heisenberg phase sensitivities for ``N`` photons."""
    n = limits.n_photons
    snl = 1.0 / (2.0 * math.sqrt(n))
    return Limits(snl=snl, sqz=math.exp(-limits.squeeze_factor) * snl, hl=1.0 / n)
