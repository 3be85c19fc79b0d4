"""l1 distance on R^n and Lee distance on Z_q^n and on the torus R^n / qZ^n."""

from __future__ import annotations

import math
from typing import Iterable, List, Sequence, Union

import numpy as np

from .errors import ParseError, ShapeError

Number = Union[int, float]


def _as_vector(x, name: str) -> np.ndarray:
    a = np.asarray(x)
    if a.ndim != 1:
        a = a.reshape(-1)
    if a.dtype.kind not in "iuf":
        a = a.astype(np.float64)
    if a.dtype.kind == "f" and not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite coordinates")
    return a


def _pair(x, y):
    a, b = _as_vector(x, "x"), _as_vector(y, "y")
    if a.shape != b.shape:
        raise ShapeError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def _is_int(a: np.ndarray) -> bool:
    return a.dtype.kind in "iu"


def real_mod(a, q: Number) -> np.ndarray:
    """``a - q*floor(a/q)``: representative in ``[0, q)``."""
    a = np.asarray(a)
    if _is_int(a):
        return np.mod(a, int(q))
    out = a - q * np.floor(a / q)
    # a tiny negative a can round up to exactly q
    return np.where(out >= q, out - q, out)


def l1_distance(x, y) -> Number:
    """Sum of absolute coordinate differences.

    Integer inputs give an exact ``int``.  Otherwise the result is the
    correctly rounded value of the exact sum: each term is split into its
    signed inputs before :func:`math.fsum`, so points tied in exact
    arithmetic get bit-identical distances.
    """
    a, b = _pair(x, y)
    if _is_int(a) and _is_int(b):
        return int(np.abs(a.astype(np.int64) - b.astype(np.int64)).sum())
    a, b = a.astype(np.float64), b.astype(np.float64)
    s = np.where(a >= b, 1.0, -1.0)
    return math.fsum(np.concatenate([s * a, -s * b]).tolist())


def lee_distance(x, y, q: int) -> int:
    """Lee distance between two vectors of Z_q^n."""
    a, b = _pair(x, y)
    if not (_is_int(a) and _is_int(b)):
        raise TypeError("lee_distance expects integer vectors; use lee_distance_torus")
    d = np.mod(a.astype(np.int64) - b.astype(np.int64), q)
    return int(np.minimum(d, q - d).sum())


def lee_distance_torus(x, y, q: Number) -> Number:
    """Lee distance on R^n / qZ^n (exact ``int`` for integer inputs)."""
    a, b = _pair(x, y)
    if _is_int(a) and _is_int(b):
        return lee_distance(a, b, int(q))
    d = real_mod(a.astype(np.float64) - b.astype(np.float64), q)
    return math.fsum(np.minimum(d, q - d).tolist())


def lee_weight(x, q: int) -> int:
    x = np.mod(np.asarray(x, dtype=np.int64), q)
    return int(np.minimum(x, q - x).sum())


# ---------------------------------------------------------------------------
# vector text format: whitespace-separated numbers, one vector per line


def parse_vector(text: str) -> np.ndarray:
    """Parse one vector; returns int64 when every token is an integer."""
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise ParseError("empty vector")
    try:
        if all(_looks_int(t) for t in tokens):
            return np.array([int(t) for t in tokens], dtype=np.int64)
        vals = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"malformed vector {text!r}: {exc}") from None
    if not np.all(np.isfinite(vals)):
        raise ParseError(f"non-finite coordinate in {text!r}")
    return vals


def _looks_int(tok: str) -> bool:
    t = tok[1:] if tok[:1] in "+-" else tok
    return t.isdigit()


def parse_vectors(lines: Iterable[str]) -> List[np.ndarray]:
    out = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_vector(line))
    return out


def format_vector(v: Sequence[Number]) -> str:
    return " ".join(format_number(x) for x in v)


def format_number(x: Number) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x.is_integer():
        return str(int(x))
    return repr(x)
