"""
Lee sphere decoding for q-ary lattices in block form.

The first ``k`` lattice coordinates equal the free coefficients, so the
search runs over integer prefixes ``x_1..x_k`` inside a Lee ball around
``r_1..r_k``.  For a fixed prefix the remaining coordinates separate and
the best completion is a per-coordinate rounding, so every depth-``k`` node
yields exactly one candidate point.

The enumeration kernel is compiled (Cython) when available; set
``LEELATTICE_PURE=1`` to force the pure-Python implementation.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from . import _kernel_py
from .code_decode import DecodeResult, _received, round_half_up
from .construction import QaryLattice
from .geometry import lee_ball_cardinality
from .metrics import l1_distance

try:
    if os.environ.get("LEELATTICE_PURE"):
        raise ImportError("pure-Python kernel requested")
    from . import _kernel as _kernel_c
except ImportError:
    _kernel_c = None

BACKENDS = {"python": _kernel_py.sphere_search}
if _kernel_c is not None:
    BACKENDS["cython"] = _kernel_c.sphere_search

#: backend used when none is requested explicitly
BACKEND = "cython" if _kernel_c is not None else "python"


@dataclass(frozen=True)
class DecodeConfig:
    radius: Union[float, str] = "babai"
    shrink_on_improve: bool = True
    count_nodes: bool = True

    def __post_init__(self) -> None:
        if self.radius != "babai":
            r = float(self.radius)
            if not math.isfinite(r) or r < 0:
                raise ValueError(f"radius must be a finite nonnegative number, got {self.radius!r}")
            object.__setattr__(self, "radius", r)


def _tail_completion(lat: QaryLattice, r_perm: np.ndarray, head: np.ndarray) -> np.ndarray:
    """Best tail for a fixed integer prefix (permuted coordinates)."""
    k = lat.k
    acc = lat.b_block @ head
    w = round_half_up((r_perm[k:] - acc) / lat.q)
    return np.concatenate([head, acc + lat.q * w])


def babai_radius(lat: QaryLattice, r, successive: bool = True) -> Tuple[float, np.ndarray]:
    """Babai radius estimate and the lattice point it comes from.

    With ``successive=True`` (default) the forward substitution uses the
    already-rounded leading coefficients, so every tail coordinate is off
    by at most ``q/2`` and the radius never exceeds ``k/2 + q(n-k)/2``.
    ``successive=False`` rounds the exact real solution of ``M x = r``
    all at once; its radius can exceed that bound.
    """
    r = _received(r, lat.n)
    rp = lat.to_permuted(r)
    k = lat.k
    head = round_half_up(rp[:k])
    if successive:
        zp = _tail_completion(lat, rp, head)
    else:
        x_tail = (rp[k:] - lat.b_block @ rp[:k]) / lat.q
        zp = np.concatenate([head, lat.b_block @ head + lat.q * round_half_up(x_tail)])
    z = lat.from_permuted(zp)
    return l1_distance(r, z), z


def babai_bound(lat: QaryLattice) -> float:
    return lat.k / 2 + lat.q * (lat.n - lat.k) / 2


def lee_sphere_decode(
    lat: QaryLattice,
    r,
    cfg: Optional[DecodeConfig] = None,
    backend: Optional[str] = None,
) -> DecodeResult:
    """Closest lattice point to ``r`` in the Lee metric among those within the radius.

    Children are tried in ascending order and a new point replaces the
    incumbent only on strict improvement, so among equidistant candidates
    the lexicographically smallest prefix wins.  With the Babai radius the
    ball always contains a lattice point and the result is a global
    minimizer.
    """
    cfg = cfg or DecodeConfig()
    r = _received(r, lat.n)
    if cfg.radius == "babai":
        radius, _ = babai_radius(lat, r)
    else:
        radius = float(cfg.radius)
    rp = np.ascontiguousarray(lat.to_permuted(r), dtype=np.float64)
    search = BACKENDS[backend or BACKEND]
    found, zp, _, nodes, leaves = search(lat.b_block, lat.q, rp, float(radius), bool(cfg.shrink_on_improve))
    nodes_list = [int(c) for c in nodes] if cfg.count_nodes else []
    if not found:
        return DecodeResult(
            point=None,
            distance=math.inf,
            method="sphere",
            radius=radius,
            nodes_per_depth=nodes_list,
            leaves_tested=int(leaves),
        )
    z = lat.from_permuted(np.asarray(zp, dtype=np.int64))
    return DecodeResult(
        point=z,
        distance=l1_distance(r, z),
        method="sphere",
        radius=radius,
        nodes_per_depth=nodes_list,
        leaves_tested=int(leaves),
    )


def exact_node_count(k: int, R: int, per_depth: bool = False):
    """Number of tree nodes through depth ``k`` for an integer target and radius ``R``."""
    if k < 0 or R < 0 or int(R) != R:
        raise ValueError("k must be >= 0 and R a nonnegative integer")
    R = int(R)
    depths = [lee_ball_cardinality(j, R) for j in range(k + 1)]
    return depths if per_depth else sum(depths)


def log_expected_node_bound(lat: QaryLattice) -> float:
    """Natural log of ``sum_{j=0}^{k} (j + q(n-j))^j / j!``."""
    q, n, k = lat.q, lat.n, lat.k
    logs = []
    for j in range(k + 1):
        base = j + q * (n - j)
        logs.append(j * math.log(base) - math.lgamma(j + 1) if j else 0.0)
    top = max(logs)
    return top + math.log(math.fsum(math.exp(v - top) for v in logs))


def within_node_bound(lat: QaryLattice, total_nodes: int) -> bool:
    # small relative slack guards the log-domain evaluation only
    return math.log(max(total_nodes, 1)) <= log_expected_node_bound(lat) + 1e-12
