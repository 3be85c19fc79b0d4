"""
Lattice decoding through the underlying code.

A lattice point is a codeword plus a multiple of ``q`` in every coordinate,
and in the Lee metric the best multiple can be picked coordinate by
coordinate (:func:`nearest_representative`).  Decoding a real vector
therefore reduces to Lee-decoding its reduction mod ``q`` in the code and
lifting the winner back (:func:`decode_via_code`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .construction import QaryCode, QaryLattice
from .errors import CapacityError, ShapeError
from .metrics import l1_distance, real_mod

#: brute_force_cvp guards
BRUTE_MAX_N = 8
BRUTE_MAX_CODEWORDS = 10**5


@dataclass
class LiftResult:
    z: np.ndarray
    w: np.ndarray
    distance: float


@dataclass
class DecodeResult:
    """Outcome of one decode.

    ``point`` is ``None`` when an explicit radius excluded every lattice
    point.  Enumeration statistics are only filled in by the sphere decoder.
    """

    point: Optional[np.ndarray]
    distance: float
    method: str
    radius: Optional[float] = None
    nodes_per_depth: List[int] = field(default_factory=list)
    leaves_tested: int = 0
    codeword: Optional[np.ndarray] = None

    @property
    def found(self) -> bool:
        return self.point is not None

    @property
    def total_nodes(self) -> int:
        return int(sum(self.nodes_per_depth))


def round_half_up(a) -> np.ndarray:
    """Nearest integer, exact halves going toward +inf."""
    return np.floor(np.asarray(a, dtype=np.float64) + 0.5).astype(np.int64)


def _received(r, n: int) -> np.ndarray:
    r = np.asarray(r, dtype=np.float64).reshape(-1)
    if r.shape[0] != n:
        raise ShapeError(f"received vector has length {r.shape[0]}, expected {n}")
    if not np.all(np.isfinite(r)):
        raise ValueError("received vector has non-finite coordinates")
    return r


def nearest_representative(x, r, q: int) -> LiftResult:
    """Closest (l1) lift ``z = x + q*w`` of the class of ``x`` to ``r``."""
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    r = _received(r, x.shape[0])
    w = round_half_up((r - x) / q)
    z = x + q * w
    return LiftResult(z=z, w=w, distance=l1_distance(r, z))


def _lift_all(words: np.ndarray, r: np.ndarray, q: int) -> np.ndarray:
    return words + q * np.floor((r[None, :] - words) / q + 0.5).astype(np.int64)


def _lex_first(rows: np.ndarray) -> int:
    """Index of the lexicographically smallest row."""
    order = np.lexsort(rows.T[::-1])
    return int(order[0])


def exhaustive_code_decode(code: QaryCode, target) -> Tuple[np.ndarray, float]:
    """Lee-closest codeword to a point of the torus ``[0, q)^n``.

    Ties go to the lexicographically smallest codeword.
    """
    q = code.q
    t = _received(target, code.n)
    if np.any(t < 0) or np.any(t >= q):
        t = real_mod(t, q)
    words = code.codewords()
    d = np.abs(t[None, :] - words)
    dist = np.minimum(d, q - d).sum(axis=1)
    ties = np.nonzero(dist == dist.min())[0]
    best = ties[_lex_first(words[ties])] if ties.size > 1 else ties[0]
    word = words[best]
    dd = np.abs(t - word)
    return word.copy(), float(np.minimum(dd, q - dd).sum())


CodeDecoder = Callable[[QaryCode, np.ndarray], Tuple[np.ndarray, float]]


def decode_via_code(
    code: QaryCode,
    lat: Optional[QaryLattice],
    r,
    code_decoder: CodeDecoder = exhaustive_code_decode,
) -> DecodeResult:
    """Decode ``r`` by decoding ``r mod q`` in the code, then lifting.

    ``code_decoder`` is any callable returning a Lee-closest codeword for a
    torus point; the default searches the whole code.
    """
    r = _received(r, code.n)
    word, _ = code_decoder(code, real_mod(r, code.q))
    lift = nearest_representative(word, r, code.q)
    return DecodeResult(point=lift.z, distance=lift.distance, method="code", codeword=word)


def brute_force_cvp(lat: QaryLattice, r) -> DecodeResult:
    """Reference decoder: best lift of every codeword, lexicographic tie-break."""
    if lat.n > BRUTE_MAX_N or lat.q**lat.k > BRUTE_MAX_CODEWORDS:
        raise CapacityError(
            f"brute force limited to n <= {BRUTE_MAX_N} and q^k <= {BRUTE_MAX_CODEWORDS}"
        )
    r = _received(r, lat.n)
    words = lat.code().codewords()
    pts = _lift_all(words, r, lat.q)
    approx = np.abs(r[None, :] - pts).sum(axis=1)
    lo = approx.min()
    # re-rank the near-minimal candidates by exact distance
    near = np.nonzero(approx <= lo + 1e-9 * (1.0 + lo))[0]
    exact = np.array([l1_distance(r, pts[i]) for i in near])
    ties = near[exact == exact.min()]
    best = ties[_lex_first(pts[ties])] if ties.size > 1 else ties[0]
    z = pts[best].copy()
    return DecodeResult(
        point=z, distance=l1_distance(r, z), method="brute", codeword=words[best].copy()
    )
