"""
Exact integer linear algebra over Z_q.

Matrices are stored as canonical representatives in ``[0, q)``.  Field
operations (rank, systematic form, linear solves) require prime ``q``;
reduction and I/O work for any modulus ``q >= 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO, Tuple

import numpy as np

from .errors import (
    InvalidModulusError,
    ParseError,
    RankDeficientError,
    ShapeError,
    UnsupportedModulusError,
)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def _check_modulus(q: int) -> int:
    q = int(q)
    if q < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {q}")
    return q


def _require_prime(q: int) -> None:
    if not is_prime(q):
        raise UnsupportedModulusError(
            f"q={q} is not prime; field operations are only defined for prime q"
        )


@dataclass(frozen=True, eq=False)
class ZqMatrix:
    """Integer matrix with entries reduced modulo ``q``.

    Build instances with :func:`reduce_mod_q`; the constructor assumes
    ``entries`` is already canonical.
    """

    q: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        e = np.array(self.entries, dtype=np.int64, copy=True)
        if e.ndim != 2 or e.shape[0] < 1 or e.shape[1] < 1:
            raise ShapeError(f"ZqMatrix needs a non-empty 2-D array, got shape {e.shape}")
        if e.min() < 0 or e.max() >= self.q:
            raise ValueError("entries must lie in [0, q)")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZqMatrix):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.q, self.entries.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"ZqMatrix(q={self.q}, entries={self.entries.tolist()})"


def reduce_mod_q(m, q: int) -> ZqMatrix:
    """Reduce an integer matrix entrywise into ``[0, q)``.

    >>> reduce_mod_q([[13, -1]], 13).entries.tolist()
    [[0, 12]]
    """
    q = _check_modulus(q)
    a = np.asarray(m)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if not np.issubdtype(a.dtype, np.integer):
        if not np.all(np.asarray(a) == np.round(a)):
            raise ValueError("reduce_mod_q expects integer entries")
    a = np.mod(a.astype(np.int64), q)
    return ZqMatrix(q, a)


def _rref(a: np.ndarray, q: int) -> Tuple[np.ndarray, list]:
    """Reduced row echelon form of ``a`` over the prime field Z_q."""
    a = np.mod(np.array(a, dtype=np.int64), q)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        inv = pow(int(a[r, c]), -1, q)
        a[r] = (a[r] * inv) % q
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % q
        pivots.append(c)
        r += 1
    return a, pivots


def code_rank(g: ZqMatrix) -> int:
    """Rank of ``g`` over the field Z_q (q prime)."""
    _require_prime(g.q)
    return len(_rref(g.entries, g.q)[1])


def systematic_form(g: ZqMatrix) -> Tuple[ZqMatrix, Tuple[int, ...]]:
    """Bring an ``n x k`` generator (columns span the code) to ``[I_k ; B]``.

    Returns ``(s, perm)`` where row ``i`` of ``s`` refers to original
    coordinate ``perm[i]``.  Column operations are unrestricted (they do not
    change the code), so ``s`` generates ``{c[perm] : c in C}``.
    """
    _require_prime(g.q)
    n, k = g.shape
    if k > n:
        raise RankDeficientError(f"{k} generators in length {n} cannot be independent")
    red, pivots = _rref(g.entries.T, g.q)
    if len(pivots) < k:
        raise RankDeficientError(f"generator has rank {len(pivots)} < k={k} over Z_{g.q}")
    rest = [c for c in range(n) if c not in set(pivots)]
    perm = tuple(pivots + rest)
    s = red[:, perm].T
    return ZqMatrix(g.q, s), perm


def solve_membership(g: ZqMatrix, v: Sequence[int]) -> Optional[np.ndarray]:
    """Coefficients ``x`` with ``g @ x = v (mod q)``, or ``None`` when ``v`` is not a codeword."""
    _require_prime(g.q)
    q = g.q
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    if v.shape[0] != g.rows:
        raise ShapeError(f"vector length {v.shape[0]} != generator rows {g.rows}")
    aug = np.concatenate([g.entries, np.mod(v, q).reshape(-1, 1)], axis=1)
    red, pivots = _rref(aug, q)
    k = g.cols
    if pivots and pivots[-1] == k:
        return None
    x = np.zeros(k, dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = red[row, k]
    return x


def all_vectors(units: int, q: int) -> np.ndarray:
    """All vectors of ``Z_q^units`` in lexicographic order, shape ``(q**units, units)``."""
    if units == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((q,) * units, dtype=np.int64).reshape(units, -1).T
    return np.ascontiguousarray(grid)


# ---------------------------------------------------------------------------
# text format: "q rows cols" header, then rows of integers


def _data_lines(lines: Iterable[str]):
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_matrix(lines: Iterable[str]) -> ZqMatrix:
    """Parse the shared matrix text format (reducing entries mod q)."""
    it = _data_lines(lines)
    try:
        header = next(it).split()
    except StopIteration:
        raise ParseError("empty matrix text") from None
    if len(header) != 3:
        raise ParseError(f"matrix header must be 'q rows cols', got {' '.join(header)!r}")
    try:
        q, rows, cols = (int(h) for h in header)
    except ValueError as exc:
        raise ParseError(f"non-integer matrix header: {exc}") from None
    body = []
    for _ in range(rows):
        try:
            row = [int(t) for t in next(it).split()]
        except StopIteration:
            raise ParseError(f"expected {rows} rows") from None
        except ValueError as exc:
            raise ParseError(f"non-integer matrix entry: {exc}") from None
        if len(row) != cols:
            raise ParseError(f"row has {len(row)} entries, expected {cols}")
        body.append(row)
    if next(it, None) is not None:
        raise ParseError("trailing data after matrix")
    return reduce_mod_q(np.array(body, dtype=np.int64).reshape(rows, cols), q)


def format_matrix(m: ZqMatrix) -> str:
    lines = [f"{m.q} {m.rows} {m.cols}"]
    lines += [" ".join(str(int(e)) for e in row) for row in m.entries]
    return "\n".join(lines) + "\n"


def read_matrix(fh: TextIO) -> ZqMatrix:
    return parse_matrix(fh)
