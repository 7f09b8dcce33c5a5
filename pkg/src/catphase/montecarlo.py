"""Simulated photon-counting detection campaigns.

Photon numbers are drawn by inverse-CDF lookup on the exact photon-number
distribution of the displaced cat. The decision rule is "odd count means a
phase shift is present", so a campaign at ``delta = 0`` can never give an odd
count: the odd bins of its table carry exactly zero mass.

Random streams
--------------
Every campaign is split into shards of ``SHARD_SIZE`` shots. Shard ``j`` of
campaign ``c`` draws its uniforms from ``numpy.random.PCG64`` seeded with
``SeedSequence(seed, spawn_key=(c, j))``. The signal campaign is ``c = 0`` and
the null campaign ``c = 1``. Shards are independent, so results do not depend
on how many worker threads process them.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from statistics import NormalDist

import numpy as np

from . import analytic
from ._parallel import max_workers
from .errors import InvalidArgumentError

__all__ = [
    "ALGORITHM",
    "SHARD_SIZE",
    "CDF_CUT",
    "SIGNAL_CAMPAIGN",
    "NULL_CAMPAIGN",
    "RngSpec",
    "DetectionStats",
    "sampling_table",
    "sample_counts",
    "wilson_interval",
    "detection_experiment",
]

ALGORITHM = "numpy-pcg64/seedsequence(seed,spawn_key=(campaign,shard))/shard=1000000/v1"
SHARD_SIZE = 1_000_000
CDF_CUT = 1.0 - 1e-12
SIGNAL_CAMPAIGN = 0
NULL_CAMPAIGN = 1


@dataclass(frozen=True)
class RngSpec:
    seed: int
    algorithm: str = ALGORITHM

    def __post_init__(self):
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise InvalidArgumentError(f"seed must be an integer in [0, 2^64), got {self.seed!r}")
        if self.algorithm != ALGORITHM:
            raise InvalidArgumentError(f"unsupported RNG algorithm {self.algorithm!r}")
        object.__setattr__(self, "seed", int(self.seed))

    def generator(self, campaign: int, shard: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(campaign, shard))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class DetectionStats:
    """Outcome of a signal campaign and a matching null campaign.

    ``odd_count``/``even_count`` refer to the signal campaign; the null
    campaign is summarized by ``null_odd_count``/``null_even_count``.
    ``ci_halfwidth`` is half the width of the 95% Wilson interval on the
    false-negative rate.
    """

    alpha: float
    delta: float
    shots: int
    odd_count: int
    even_count: int
    null_odd_count: int
    null_even_count: int
    false_negative_rate: float
    false_positive_rate: float
    ci_halfwidth: float
    false_negative_interval: tuple[float, float]
    false_positive_interval: tuple[float, float]
    seed: int
    algorithm: str = field(default=ALGORITHM)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["false_negative_interval"] = list(self.false_negative_interval)
        d["false_positive_interval"] = list(self.false_positive_interval)
        return d


def sampling_table(params: analytic.CatParams) -> np.ndarray:
    """Cumulative distribution over ``n = 0..n_cut`` with the last entry forced to 1.

    ``n_cut`` is the first index where the cumulative mass reaches ``CDF_CUT``;
    the remaining mass goes to that bin.
    """
    mu = params.alpha ** 2 + params.delta ** 2
    n_big = int(mu + 40.0 * math.sqrt(mu) + 60)
    p = analytic.photon_distribution(params.alpha, params.delta, n_big)
    cdf = np.cumsum(p)
    hit = np.nonzero(cdf >= CDF_CUT)[0]
    if hit.size == 0:
        raise ArithmeticError(f"photon table for {params} sums to {cdf[-1]!r}")
    cdf = cdf[: hit[0] + 1].copy()
    cdf[-1] = 1.0
    return cdf


def _sample_shard(cdf: np.ndarray, rng: RngSpec, campaign: int, shard: int, size: int) -> np.ndarray:
    u = rng.generator(campaign, shard).random(size)
    return np.bincount(np.searchsorted(cdf, u, side="right"), minlength=cdf.size)


def _campaign(params: analytic.CatParams, shots: int, rng: RngSpec, campaign: int) -> np.ndarray:
    if int(shots) != shots or shots < 1:
        raise InvalidArgumentError(f"shots must be a positive integer, got {shots!r}")
    cdf = sampling_table(params)
    sizes = [SHARD_SIZE] * (shots // SHARD_SIZE)
    if shots % SHARD_SIZE:
        sizes.append(shots % SHARD_SIZE)
    jobs = list(enumerate(sizes))
    workers = min(max_workers(), len(jobs))
    if workers <= 1:
        parts = [_sample_shard(cdf, rng, campaign, j, s) for j, s in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda js: _sample_shard(cdf, rng, campaign, *js), jobs))
    return np.sum(parts, axis=0)


def sample_counts(params: analytic.CatParams, shots: int, rng: RngSpec) -> np.ndarray:
    """Histogram of ``shots`` photon counts; entry ``n`` counts outcomes with ``n`` photons."""
    return _campaign(params, shots, rng, SIGNAL_CAMPAIGN)


_Z95 = NormalDist().inv_cdf(0.975)


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (95% by default)."""
    if trials <= 0:
        raise InvalidArgumentError("trials must be positive")
    if not 0 <= successes <= trials:
        raise InvalidArgumentError("need 0 <= successes <= trials")
    p = successes / trials
    z2n = z * z / trials
    denom = 1.0 + z2n
    centre = (p + z2n / 2.0) / denom
    half = z / denom * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials))
    return max(0.0, centre - half), min(1.0, centre + half)


def _odd_even(hist: np.ndarray) -> tuple[int, int]:
    return int(hist[1::2].sum()), int(hist[0::2].sum())


def detection_experiment(alpha: float, delta_signal: float, shots: int, rng: RngSpec) -> DetectionStats:
    """Run ``shots`` trials with the phase shift present and ``shots`` with it absent."""
    signal = analytic.CatParams(alpha, delta_signal)
    odd, even = _odd_even(_campaign(signal, shots, rng, SIGNAL_CAMPAIGN))
    n_odd, n_even = _odd_even(_campaign(analytic.CatParams(alpha, 0.0), shots, rng, NULL_CAMPAIGN))
    fn_lo, fn_hi = wilson_interval(even, shots)
    return DetectionStats(
        alpha=signal.alpha,
        delta=signal.delta,
        shots=int(shots),
        odd_count=odd,
        even_count=even,
        null_odd_count=n_odd,
        null_even_count=n_even,
        false_negative_rate=even / shots,
        false_positive_rate=n_odd / shots,
        ci_halfwidth=(fn_hi - fn_lo) / 2.0,
        false_negative_interval=(fn_lo, fn_hi),
        false_positive_interval=wilson_interval(n_odd, shots),
        seed=rng.seed,
    )
