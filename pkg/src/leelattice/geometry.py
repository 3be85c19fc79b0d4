"""
Lee-ball combinatorics and Lee vs. Euclidean ball volumes.

Angular integrals are taken over the positive orthant of the unit sphere
in hyperspherical coordinates ``phi in [0, pi/2]^(n-1)`` with the plain
measure ``dphi`` (no surface Jacobian)::

    I(n, p) = int (x_1 + ... + x_n)^p dphi_1 ... dphi_{n-1}

Peeling off the first angle gives the exact recursion

    I(n, p) = sum_i C(p, i) * Beta-term(i, p - i) * I(n-1, i),   I(1, p) = 1,

which :func:`angular_moment` evaluates.  :func:`angular_integral` is the
independent direct route (tensor Gauss-Legendre for small ``n``, seeded
Monte Carlo above).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import comb, lgamma
from typing import List, Optional, Tuple

import numpy as np

#: direct quadrature switches from tensor Gauss-Legendre to Monte Carlo above this n
TENSOR_MAX_N = 4
DEFAULT_SAMPLES = 10**6
_MC_CHUNK = 1 << 17


def lee_ball_terms(j: int, R: int) -> List[int]:
    """Summands ``2^i C(j,i) C(R,i)`` of the Lee-ball count."""
    if j < 0 or R < 0:
        raise ValueError("j and R must be nonnegative")
    return [2**i * comb(j, i) * comb(R, i) for i in range(min(j, R) + 1)]


def lee_ball_cardinality(j: int, R: int) -> int:
    """Number of points of Z^j with l1 norm at most ``R``."""
    if int(R) != R:
        raise ValueError("R must be an integer")
    return sum(lee_ball_terms(int(j), int(R)))


def lee_ball_volume(k: int, R: float) -> float:
    """Volume ``(2R)^k / k!`` of the k-dimensional cross-polytope of radius ``R``."""
    if k < 1 or R < 0:
        raise ValueError("need k >= 1 and R >= 0")
    if R == 0:
        return 0.0
    return math.exp(k * math.log(2 * R) - lgamma(k + 1))


def euclid_ball_volume(n: int, R: float) -> float:
    if n < 1 or R < 0:
        raise ValueError("need n >= 1 and R >= 0")
    if R == 0:
        return 0.0
    return math.exp(0.5 * n * math.log(math.pi) + n * math.log(R) - lgamma(n / 2 + 1))


def _beta_half(a: int, b: int) -> float:
    """``int_0^{pi/2} cos^a(t) sin^b(t) dt``."""
    return 0.5 * math.exp(lgamma((a + 1) / 2) + lgamma((b + 1) / 2) - lgamma((a + b) / 2 + 1))


def recursion_weights(n: int, p: Optional[int] = None) -> np.ndarray:
    """Coefficients of ``I(n-1, i)`` in the expansion of ``I(n, p)`` (default ``p = n``)."""
    p = n if p is None else p
    return np.array([comb(p, i) * _beta_half(p - i, i) for i in range(p + 1)])


@lru_cache(maxsize=None)
def angular_moment(n: int, p: int) -> float:
    """``I(n, p)`` by the exact angle-peeling recursion."""
    if n < 1 or p < 0:
        raise ValueError("need n >= 1 and p >= 0")
    if n == 1:
        return 1.0
    w = recursion_weights(n, p)
    return math.fsum(w[i] * angular_moment(n - 1, i) for i in range(p + 1))


def _orthant_points(phi: np.ndarray) -> np.ndarray:
    """Hyperspherical map; ``phi`` has shape (..., n-1), result (..., n)."""
    c, s = np.cos(phi), np.sin(phi)
    n = phi.shape[-1] + 1
    sin_prefix = np.ones(phi.shape[:-1] + (n,))
    sin_prefix[..., 1:] = np.cumprod(s, axis=-1)
    x = sin_prefix.copy()
    x[..., :-1] *= c
    return x


def _tensor_quadrature(n: int, powers: np.ndarray, order: int) -> np.ndarray:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    t = (nodes + 1) * (math.pi / 4)
    w = weights * (math.pi / 4)
    dims = n - 1
    grids = np.meshgrid(*([t] * dims), indexing="ij")
    phi = np.stack([g.reshape(-1) for g in grids], axis=-1)
    wt = np.ones(phi.shape[0])
    for wg in np.meshgrid(*([w] * dims), indexing="ij"):
        wt = wt * wg.reshape(-1)
    s = _orthant_points(phi).sum(axis=-1)
    return np.array([np.dot(wt, s**p) for p in powers])


def _monte_carlo(n: int, powers: np.ndarray, samples: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    shards = max(1, -(-samples // _MC_CHUNK))
    seqs = np.random.SeedSequence(seed).spawn(shards)
    total = np.zeros(len(powers))
    total_sq = np.zeros(len(powers))
    remaining = samples
    for ss in seqs:
        m = min(_MC_CHUNK, remaining)
        remaining -= m
        rng = np.random.default_rng(ss)
        phi = rng.uniform(0.0, math.pi / 2, size=(m, n - 1))
        s = _orthant_points(phi).sum(axis=-1)
        vals = s[None, :] ** powers[:, None]
        total += vals.sum(axis=1)
        total_sq += (vals**2).sum(axis=1)
    mean = total / samples
    var = np.maximum(total_sq / samples - mean**2, 0.0)
    scale = (math.pi / 2) ** (n - 1)
    return mean * scale, np.sqrt(var / samples) * scale


def angular_integrals(
    n: int, powers, samples: int = DEFAULT_SAMPLES, seed: int = 0, order: int = 48
) -> Tuple[np.ndarray, np.ndarray]:
    """Direct numerical ``I(n, p)`` for several powers at once, with error estimates.

    For ``n <= 4`` the error estimate is the change from halving the
    Gauss-Legendre order; above that it is the Monte Carlo standard error.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    powers = np.asarray(powers, dtype=np.int64).reshape(-1)
    if n <= TENSOR_MAX_N:
        fine = _tensor_quadrature(n, powers, order)
        coarse = _tensor_quadrature(n, powers, order // 2)
        return fine, np.abs(fine - coarse)
    return _monte_carlo(n, powers, samples, seed)


def angular_integral(n: int, j: int, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> Tuple[float, float]:
    """Direct numerical ``I(n, j)`` and its error estimate."""
    v, e = angular_integrals(n, [j], samples, seed)
    return float(v[0]), float(e[0])


def angular_integral_recursive(
    n: int, samples: int = DEFAULT_SAMPLES, seed: int = 0, lower: str = "quadrature"
) -> Tuple[float, float]:
    """``I(n, n)`` from one recursion step over ``I(n-1, j)``, ``j = 0..n``.

    ``lower="quadrature"`` computes the lower-order integrals numerically
    (for ``n = 2`` they are the constants ``I(1, j) = 1``); ``lower="exact"``
    uses :func:`angular_moment`.  Returns ``(value, error_estimate)``.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    w = recursion_weights(n)
    powers = np.arange(n + 1)
    if lower == "exact" or n == 2:
        sub = np.array([angular_moment(n - 1, int(j)) for j in powers])
        err = np.zeros_like(sub)
    elif lower == "quadrature":
        sub, err = angular_integrals(n - 1, powers, samples, seed)
    else:
        raise ValueError(f"unknown lower={lower!r}")
    # MC estimates of different powers share samples; add errors linearly
    return float(np.dot(w, sub)), float(np.dot(w, err))


def avg_lee_volume(n: int, r2: float = 1.0, method: str = "exact", samples: int = DEFAULT_SAMPLES, seed: int = 0) -> float:
    """Angle-averaged volume of Lee balls through points of the Euclidean sphere of radius ``r2``.

    ``method`` picks how ``I(n, n)`` is obtained: ``"exact"`` recursion,
    ``"recursive"`` (one step over direct quadrature) or ``"direct"``.
    """
    if n < 2 or r2 <= 0:
        raise ValueError("need n >= 2 and r2 > 0")
    if method == "exact":
        i_nn = angular_moment(n, n)
    elif method == "recursive":
        i_nn = angular_integral_recursive(n, samples, seed)[0]
    elif method == "direct":
        i_nn = angular_integral(n, n, samples, seed)[0]
    else:
        raise ValueError(f"unknown method={method!r}")
    log_pref = n * math.log(2 * r2) - lgamma(n + 1) - (n - 1) * math.log(math.pi / 2)
    return math.exp(log_pref) * i_nn


@dataclass(frozen=True)
class VolumeComparison:
    n: int
    euclid_volume: float
    avg_lee_volume: float

    @property
    def ratio(self) -> float:
        return self.avg_lee_volume / self.euclid_volume


def volume_table(max_n: int, method: str = "exact", samples: int = DEFAULT_SAMPLES, seed: int = 0) -> List[VolumeComparison]:
    """Unit-radius comparison rows for ``n = 2..max_n``."""
    if max_n < 2:
        raise ValueError("max_n must be >= 2")
    return [
        VolumeComparison(n, euclid_ball_volume(n, 1.0), avg_lee_volume(n, 1.0, method, samples, seed + n))
        for n in range(2, max_n + 1)
    ]


def crossover_dimension(max_n: int, method: str = "exact", samples: int = DEFAULT_SAMPLES, seed: int = 0):
    """Smallest ``n <= max_n`` where the average Lee volume drops below the Euclidean one.

    Returns ``(n_o, table)``; ``n_o`` is ``None`` when no crossover occurs.
    """
    table = volume_table(max_n, method, samples, seed)
    for row in table:
        if row.avg_lee_volume < row.euclid_volume:
            return row.n, table
    return None, table
