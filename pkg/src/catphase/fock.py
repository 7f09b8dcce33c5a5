"""Single-mode truncated Fock space.

States are stored as complex amplitude vectors over ``|0>, ..., |n_max>``.
This module does not use any closed-form result from :mod:`catphase.analytic`;
it builds states from their series expansions and applies displacements by
exponentiating the truncated generator, so it can serve as an independent
check of the formulas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .errors import InvalidArgumentError, TruncationError

__all__ = [
    "SAFETY_MARGIN",
    "FockVector",
    "TruncationPolicy",
    "poisson_tail",
    "required_truncation",
    "coherent_state",
    "cat_state",
    "fock_state",
    "displace",
    "inner",
    "fidelity",
    "photon_distribution",
    "parity_expectation",
]

#: Extra levels kept above the Poisson cutoff; displacement couples neighbouring levels.
SAFETY_MARGIN = 10


@dataclass(frozen=True)
class FockVector:
    """Immutable truncated state vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex, copy=True).reshape(-1)
        if amps.size == 0:
            raise InvalidArgumentError("a Fock vector needs at least one amplitude")
        if not np.all(np.isfinite(amps)):
            raise InvalidArgumentError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return self.amplitudes.size - 1

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def padded(self, n_max: int) -> "FockVector":
        """Return the same state embedded in a larger truncation."""
        if n_max < self.n_max:
            raise InvalidArgumentError(f"cannot shrink n_max from {self.n_max} to {n_max}")
        out = np.zeros(n_max + 1, dtype=complex)
        out[: self.amplitudes.size] = self.amplitudes
        return FockVector(out)

    def __len__(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoff ``n_max`` together with the probability tail it is allowed to discard."""

    n_max: int
    tail_tolerance: float = 1e-14

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise InvalidArgumentError(f"n_max must be a nonnegative integer, got {self.n_max!r}")
        _check_tolerance(self.tail_tolerance)
        object.__setattr__(self, "n_max", int(self.n_max))

    @classmethod
    def for_state(cls, alpha: float, delta: float = 0.0, tail_tolerance: float = 1e-14,
                  margin: int = SAFETY_MARGIN) -> "TruncationPolicy":
        """Policy large enough for a cat or coherent state of amplitude ``alpha`` displaced by ``delta``."""
        n = required_truncation(alpha, delta, tail_tolerance)
        return cls(n + margin, tail_tolerance)


def _check_tolerance(tol: float) -> None:
    if not (0.0 < tol < 1.0):
        raise InvalidArgumentError(f"tail_tolerance must lie in (0, 1), got {tol!r}")


def _log_poisson(mu: float, n: np.ndarray) -> np.ndarray:
    if mu == 0.0:
        return np.where(n == 0, 0.0, -np.inf)
    return n * math.log(mu) - mu - gammaln(n + 1)


def poisson_tail(mu: float, n_max: int) -> float:
    """Probability mass of Poisson(``mu``) strictly above ``n_max``, summed term by term."""
    if mu == 0.0:
        return 0.0
    stop = int(mu + 40.0 * math.sqrt(mu) + 200)
    if stop <= n_max:
        stop = n_max + 200
    k = np.arange(n_max + 1, stop + 1)
    # summed smallest-first to keep the tiny terms
    return float(np.sum(np.exp(_log_poisson(mu, k))[::-1]))


def required_truncation(alpha: float, delta: float, tail_tolerance: float) -> int:
    """Smallest ``n_max`` whose Poisson tail for ``mu = alpha^2 + delta^2`` is below ``tail_tolerance``.

    >>> required_truncation(0.0, 0.0, 1e-14)
    0
    """
    if alpha < 0 or not math.isfinite(alpha) or not math.isfinite(delta):
        raise InvalidArgumentError("alpha must be >= 0 and delta finite")
    _check_tolerance(tail_tolerance)
    mu = alpha * alpha + delta * delta
    if mu == 0.0:
        return 0
    stop = int(mu + 40.0 * math.sqrt(mu) + 200)
    k = np.arange(stop + 1)
    p = np.exp(_log_poisson(mu, k))
    # tails[n] = sum_{j >= n} p_j, accumulated from the far end
    tails = np.cumsum(p[::-1])[::-1]
    above = np.append(tails[1:], 0.0)  # mass strictly above n
    return int(np.argmax(above < tail_tolerance))


def _series_amplitudes(beta: complex, n_max: int) -> np.ndarray:
    """``exp(-|beta|^2/2) beta^n / sqrt(n!)`` for ``n = 0..n_max`` by recurrence."""
    out = np.empty(n_max + 1, dtype=complex)
    out[0] = math.exp(-0.5 * abs(beta) ** 2)
    for n in range(1, n_max + 1):
        out[n] = out[n - 1] * beta / math.sqrt(n)
    return out


def coherent_state(beta: complex, policy: TruncationPolicy) -> FockVector:
    """Truncated coherent state ``|beta>``."""
    beta = complex(beta)
    tail = poisson_tail(abs(beta) ** 2, policy.n_max)
    if tail > policy.tail_tolerance:
        raise TruncationError(
            f"n_max={policy.n_max} discards {tail:.3g} of |beta={beta}>, "
            f"above tolerance {policy.tail_tolerance:g}")
    return FockVector(_series_amplitudes(beta, policy.n_max))


def cat_state(alpha: float, policy: TruncationPolicy) -> FockVector:
    """Normalized even cat ``(|alpha> + |-alpha>)/sqrt(K)`` with odd amplitudes set to exactly zero."""
    if isinstance(alpha, complex) or alpha < 0 or not math.isfinite(alpha):
        raise InvalidArgumentError(f"alpha must be real and >= 0, got {alpha!r}")
    amps = _series_amplitudes(complex(alpha), policy.n_max)
    amps[1::2] = 0.0
    amps[0::2] *= 2.0
    # norm of the unnormalized branch sum, taken from the series rather than a closed form
    norm2 = float(np.sum(np.abs(amps) ** 2))
    full = 2.0 * (1.0 + math.exp(-2.0 * alpha * alpha))
    if abs(1.0 - norm2 / full) > policy.tail_tolerance:
        raise TruncationError(f"n_max={policy.n_max} too small for a cat of alpha={alpha}")
    state = amps / math.sqrt(norm2)
    state[1::2] = 0.0
    return FockVector(state)


def fock_state(n: int, n_max: int) -> FockVector:
    """Number state ``|n>`` in a space truncated at ``n_max``."""
    if not 0 <= n <= n_max:
        raise InvalidArgumentError(f"need 0 <= n <= n_max, got n={n}, n_max={n_max}")
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def _displacement_propagator(delta: float, n_max: int) -> np.ndarray:
    # generator delta (a^dag + a) is real symmetric tridiagonal with zero diagonal
    off = delta * np.sqrt(np.arange(1, n_max + 1, dtype=float))
    w, v = eigh_tridiagonal(np.zeros(n_max + 1), off)
    return (v * np.exp(1j * w)) @ v.T


def displace(state: FockVector, delta: float, policy: TruncationPolicy) -> FockVector:
    """Apply ``exp(i delta (a^dag + a))`` in the truncated space.

    The truncated propagator is exactly unitary, so leakage out of the space
    shows up as population piling into the top levels rather than as norm
    loss. The population of the top ``SAFETY_MARGIN // 2`` levels (fewer if
    the space is smaller) must stay below the policy tolerance.
    """
    if not math.isfinite(delta):
        raise InvalidArgumentError("delta must be finite")
    if state.n_max > policy.n_max:
        raise InvalidArgumentError(
            f"state has n_max={state.n_max}, larger than the policy's {policy.n_max}")
    if state.n_max < policy.n_max:
        state = state.padded(policy.n_max)
    if delta == 0.0:
        return state
    out = _displacement_propagator(float(delta), policy.n_max) @ state.amplitudes
    guard = min(max(SAFETY_MARGIN // 2, 1), policy.n_max + 1)
    edge = float(np.sum(np.abs(out[-guard:]) ** 2))
    if edge > policy.tail_tolerance:
        raise TruncationError(
            f"displacement by {delta} puts {edge:.3g} of the population in the top "
            f"{guard} levels of n_max={policy.n_max}")
    # eigendecomposition is unitary only up to O(n eps) rounding
    slack = policy.tail_tolerance + 16 * (policy.n_max + 1) * np.finfo(float).eps
    if abs(np.vdot(out, out).real - state.norm_squared()) > slack:
        raise TruncationError("displacement changed the norm beyond tolerance")
    return FockVector(out)


def inner(a: FockVector, b: FockVector) -> complex:
    """``<a|b>``, antilinear in the first argument."""
    if a.n_max != b.n_max:
        raise InvalidArgumentError(f"dimension mismatch: n_max {a.n_max} vs {b.n_max}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: FockVector, b: FockVector) -> float:
    """Phase-insensitive overlap ``|<a|b>|^2 / (||a||^2 ||b||^2)``."""
    return abs(inner(a, b)) ** 2 / (a.norm_squared() * b.norm_squared())


def photon_distribution(state: FockVector) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def parity_expectation(state: FockVector) -> float:
    p = photon_distribution(state)
    return float(np.sum(p[0::2]) - np.sum(p[1::2]))
