"""Location of the parity minimum of the displaced cat state.

The minimum of the false-negative probability coincides with the first
minimum of the parity in ``delta > 0``. It is found as the root of the exact
stationarity condition

    g(delta) = delta (cos 4 alpha delta + exp(-2 alpha^2)) + alpha sin 4 alpha delta = 0,

which is ``dP/d delta`` up to a negative factor. The large-amplitude series
for the same minimum is kept for comparison.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

import numpy as np

from . import analytic
from ._parallel import max_workers
from .errors import BracketingError, InvalidArgumentError

__all__ = [
    "DEFAULT_TOLERANCE",
    "SCAN_POINTS",
    "Optimum",
    "ErrorPoint",
    "brent_root",
    "stationarity",
    "minimize_parity",
    "parity_min_series",
    "approximate_condition_root",
    "false_negative_curve",
]

DEFAULT_TOLERANCE = 1e-10
SCAN_POINTS = 10_000


@dataclass(frozen=True)
class Optimum:
    alpha: float
    delta_star: float
    parity_at_min: float
    p_even_at_min: float
    iterations: int
    bracket: tuple[float, float]
    method: str = "bracket"


class ErrorPoint(NamedTuple):
    alpha: float
    delta_star: float
    p_even: float
    p_odd: float


def brent_root(f: Callable[[float], float], a: float, b: float, tol: float,
               maxiter: int = 200) -> tuple[float, tuple[float, float], int]:
    """Brent's method on a sign-changing bracket ``[a, b]``.

    Returns ``(root, (lo, hi), iterations)`` where ``[lo, hi]`` is the final
    sign-changing bracket, narrower than ``tol`` unless an exact zero was hit.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a, (a, a), 0
    if fb == 0.0:
        return b, (b, b), 0
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise BracketingError(f"no sign change on [{a}, {b}]")
    c, fc = a, fa
    d = e = b - a
    for it in range(1, maxiter + 1):
        if math.copysign(1.0, fb) == math.copysign(1.0, fc):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * np.finfo(float).eps * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if fb == 0.0:
            return b, (b, b), it
        if abs(xm) <= tol1:
            lo, hi = sorted((b, c))
            return b, (lo, hi), it
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p, q = 2.0 * xm * s, 1.0 - s
            else:
                q, r = fa / fc, fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
    raise BracketingError(f"Brent iteration did not converge in {maxiter} steps")


def stationarity(alpha: float, delta):
    """``g(delta)``; positive just right of zero, negative past the first parity minimum."""
    c = math.exp(-2.0 * alpha * alpha)
    d = np.asarray(delta, dtype=float)
    g = d * (np.cos(4.0 * alpha * d) + c) + alpha * np.sin(4.0 * alpha * d)
    return float(g) if g.ndim == 0 else g


def _scan_bracket(alpha: float, points: int) -> tuple[float, float]:
    hi = math.pi / (2.0 * alpha)
    grid = np.linspace(hi / points, hi, points)
    g = stationarity(alpha, grid)
    # first +/- crossing of g is the first parity minimum
    idx = np.nonzero((g[:-1] > 0) & (g[1:] <= 0))[0]
    if idx.size == 0:
        raise BracketingError(f"no parity minimum found in (0, {hi}] for alpha={alpha}")
    i = int(idx[0])
    return float(grid[i]), float(grid[i + 1])


def minimize_parity(alpha: float, tolerance: float = DEFAULT_TOLERANCE) -> Optimum:
    """First local minimum of the parity in ``delta > 0``.

    For ``alpha >= 1`` the root of the stationarity condition is bracketed by
    ``[pi/(8 alpha), 1.05 pi/(4 alpha)]``. Below that, or if the bracket does
    not change sign, a scan of ``SCAN_POINTS`` points over ``(0, pi/(2 alpha)]``
    supplies the bracket instead.
    """
    a = analytic.check_alpha(alpha)
    if a == 0.0:
        raise InvalidArgumentError("alpha must be > 0")
    if not tolerance > 0:
        raise InvalidArgumentError("tolerance must be positive")

    def g(x):
        return stationarity(a, x)

    method = "bracket"
    lo, hi = math.pi / (8.0 * a), 1.05 * math.pi / (4.0 * a)
    if a < 1.0 or g(lo) * g(hi) > 0:
        lo, hi = _scan_bracket(a, SCAN_POINTS)
        method = "scan"
    root, bracket, iters = brent_root(g, lo, hi, tolerance)

    h = 1e-3 / a
    p0 = analytic.parity(a, root)
    if not (analytic.parity(a, root - h) > p0 and analytic.parity(a, root + h) > p0):
        raise BracketingError(f"stationary point at delta={root} for alpha={a} is not a minimum")
    return Optimum(alpha=a, delta_star=root, parity_at_min=p0, p_even_at_min=(1.0 + p0) / 2.0,
                   iterations=iters, bracket=bracket, method=method)


def parity_min_series(alpha: float) -> float:
    """Series for the parity minimum, ``(pi/4a)(1 - 1/(4a^2) + 1/(16a^4))``; meant for ``alpha >~ 1``."""
    a = analytic.check_alpha(alpha)
    if a == 0.0:
        raise InvalidArgumentError("alpha must be > 0")
    x = 1.0 / (4.0 * a * a)
    return math.pi / (4.0 * a) * (1.0 - x + x * x)


def approximate_condition_root(alpha: float, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """First positive root of ``delta/alpha = -tan(4 alpha delta)``.

    This is the stationarity condition with ``exp(-2 alpha^2)`` dropped. The
    root lies between the pole of the tangent at ``pi/(8 alpha)`` and its zero
    at ``pi/(4 alpha)``.
    """
    a = analytic.check_alpha(alpha)
    if a == 0.0:
        raise InvalidArgumentError("alpha must be > 0")

    def f(x):
        return x * math.cos(4.0 * a * x) + a * math.sin(4.0 * a * x)

    return brent_root(f, math.pi / (8.0 * a), math.pi / (4.0 * a), tolerance)[0]


def false_negative_curve(alphas: Iterable[float],
                         tolerance: float = DEFAULT_TOLERANCE) -> list[ErrorPoint]:
    """Optimized ``(alpha, delta*, p_even, p_odd)`` for each amplitude."""
    alphas = [float(x) for x in alphas]
    for x in alphas:
        if x < 1.0:
            raise InvalidArgumentError(f"false_negative_curve needs alpha >= 1, got {x}")

    def point(x: float) -> ErrorPoint:
        opt = minimize_parity(x, tolerance)
        p_even, p_odd = analytic.even_odd_probabilities(x, opt.delta_star)
        return ErrorPoint(x, opt.delta_star, p_even, p_odd)

    workers = max_workers()
    if workers <= 1 or len(alphas) < 2:
        return [point(x) for x in alphas]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, alphas))
