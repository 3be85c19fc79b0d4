"""
Construction A: q-ary lattices from linear codes over Z_q.

A lattice is stored through its block data ``(q, n, k, B)``; in permuted
coordinates its generator is::

    M = [[I_k, 0      ],
         [B,   q*I_n-k]]

``permutation[i]`` names the original coordinate held by permuted slot
``i``.  All public functions take and return vectors in original
coordinates.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO, Tuple

import numpy as np

from .errors import CapacityError, ParseError, ShapeError
from .metrics import lee_weight
from .zq import ZqMatrix, all_vectors, parse_matrix, reduce_mod_q, systematic_form

#: exhaustive procedures refuse codes with more codewords than this
MAX_CODEWORDS = 10**6


def _identity_perm(n: int) -> Tuple[int, ...]:
    return tuple(range(n))


def _check_perm(perm, n: int) -> Tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise ShapeError(f"{perm} is not a permutation of range({n})")
    return perm


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QaryCode:
    """Linear code over Z_q with its systematic data.

    ``b_block`` is the ``(n-k) x k`` block with ``[I_k ; B]`` generating the
    code in permuted coordinates.  ``generator`` is the matrix the code was
    built from (original coordinates).
    """

    q: int
    n: int
    k: int
    b_block: np.ndarray
    permutation: Tuple[int, ...]
    generator: Optional[ZqMatrix] = None
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)
    _dmin: list = field(default_factory=list, init=False, repr=False)

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.n:
            raise ShapeError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        b = np.mod(np.asarray(self.b_block, dtype=np.int64).reshape(self.n - self.k, self.k), self.q)
        object.__setattr__(self, "b_block", _frozen(b))
        object.__setattr__(self, "permutation", _check_perm(self.permutation, self.n))

    @property
    def size(self) -> int:
        return self.q**self.k

    def systematic_generator(self) -> np.ndarray:
        """``[I_k ; B]`` in permuted coordinates."""
        return np.vstack([np.eye(self.k, dtype=np.int64), self.b_block])

    def codewords(self) -> np.ndarray:
        """All ``q**k`` codewords in original coordinates, shape ``(q**k, n)``.

        Rows follow the lexicographic order of the information symbols.
        """
        if self.size > MAX_CODEWORDS:
            raise CapacityError(f"code has {self.size} codewords > {MAX_CODEWORDS}")
        info = all_vectors(self.k, self.q)
        perm_words = np.concatenate([info, (info @ self.b_block.T) % self.q], axis=1)
        words = np.empty_like(perm_words)
        words[:, list(self.permutation)] = perm_words
        return words

    def contains(self, v) -> bool:
        v = np.mod(np.asarray(v, dtype=np.int64), self.q)
        vp = v[list(self.permutation)]
        return bool(np.array_equal((self.b_block @ vp[: self.k]) % self.q, vp[self.k :]))

    @property
    def min_lee_distance(self) -> int:
        """Minimum Lee weight over nonzero codewords (exhaustive, cached once)."""
        if self._dmin:
            return self._dmin[0]
        with self._lock:
            if not self._dmin:
                self._dmin.append(_min_lee_weight(self))
        return self._dmin[0]


def _min_lee_weight(code: QaryCode) -> int:
    words = code.codewords()[1:]  # row 0 is the zero word
    w = np.minimum(words, code.q - words).sum(axis=1)
    return int(w.min())


@dataclass(frozen=True, eq=False)
class QaryLattice:
    """q-ary lattice given by its Construction A block data."""

    q: int
    n: int
    k: int
    b_block: np.ndarray
    permutation: Tuple[int, ...] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.n:
            raise ShapeError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        b = np.asarray(self.b_block, dtype=np.int64)
        if b.size == 0:
            b = b.reshape(self.n - self.k, self.k)
        if b.shape != (self.n - self.k, self.k):
            raise ShapeError(f"B must be {(self.n - self.k, self.k)}, got {b.shape}")
        object.__setattr__(self, "b_block", _frozen(np.mod(b, self.q)))
        perm = self.permutation if self.permutation is not None else _identity_perm(self.n)
        object.__setattr__(self, "permutation", _check_perm(perm, self.n))

    @property
    def generator(self) -> np.ndarray:
        """The ``n x n`` block generator ``M`` (permuted coordinates)."""
        n, k = self.n, self.k
        m = np.zeros((n, n), dtype=np.int64)
        m[:k, :k] = np.eye(k, dtype=np.int64)
        m[k:, :k] = self.b_block
        m[k:, k:] = self.q * np.eye(n - k, dtype=np.int64)
        return m

    @property
    def basis(self) -> np.ndarray:
        """Generator with rows moved back to original coordinates."""
        out = np.empty((self.n, self.n), dtype=np.int64)
        out[list(self.permutation), :] = self.generator
        return out

    @property
    def determinant(self) -> int:
        return self.q ** (self.n - self.k)

    @property
    def is_permuted(self) -> bool:
        return self.permutation != _identity_perm(self.n)

    def to_permuted(self, v) -> np.ndarray:
        return np.asarray(v)[list(self.permutation)]

    def from_permuted(self, v) -> np.ndarray:
        v = np.asarray(v)
        out = np.empty_like(v)
        out[list(self.permutation)] = v
        return out

    def point(self, coeffs) -> np.ndarray:
        """Lattice point ``M @ coeffs`` in original coordinates."""
        c = np.asarray(coeffs, dtype=np.int64)
        return self.from_permuted(self.generator @ c)

    def code(self) -> QaryCode:
        return QaryCode(self.q, self.n, self.k, self.b_block, self.permutation)


def build_code(g: ZqMatrix) -> QaryCode:
    """Systematize an ``n x k`` generator over a prime field."""
    s, perm = systematic_form(g)
    n, k = g.shape
    return QaryCode(g.q, n, k, s.entries[k:, :], perm, generator=g)


def code_from_blocks(q: int, n: int, k: int, b_block, permutation=None) -> QaryCode:
    b = np.asarray(b_block, dtype=np.int64).reshape(n - k, k)
    perm = permutation if permutation is not None else _identity_perm(n)
    return QaryCode(int(q), int(n), int(k), b, perm)


def build_lattice(c: QaryCode) -> QaryLattice:
    lat = QaryLattice(c.q, c.n, c.k, c.b_block, c.permutation)
    # M is block lower-triangular, so |det M| is the product of its diagonal
    assert int(np.prod(np.diag(lat.generator).astype(object))) == lat.determinant
    return lat


def build_lattice_from_blocks(q: int, n: int, k: int, b_block) -> QaryLattice:
    """Assemble the block generator directly; ``q`` may be composite."""
    b = np.asarray(b_block, dtype=np.int64)
    if b.size == 0:
        b = b.reshape(n - k, k)
    if b.shape != (n - k, k):
        raise ShapeError(f"B must be {(n - k, k)}, got {b.shape}")
    return QaryLattice(int(q), int(n), int(k), b)


def lattice_from_generator(m) -> QaryLattice:
    """Recover block data from a full ``n x n`` generator already in block form."""
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ShapeError("generator must be square")
    k = 0
    while k < n and m[k, k] == 1:
        k += 1
    q = int(m[n - 1, n - 1]) if k < n else 2
    candidate = build_lattice_from_blocks(q, n, k, m[k:, :k]) if k >= 1 else None
    if candidate is None or not np.array_equal(candidate.generator, m):
        raise ShapeError("matrix is not of the form [[I, 0], [B, qI]]")
    return candidate


def lattice_contains(lat: QaryLattice, v) -> bool:
    """Membership test ``v mod q in C``.

    Uses the parity relation ``y_tail = B y_head (mod q)`` of the block
    generator, which is exact for every modulus.
    """
    v = np.asarray(v)
    if v.shape != (lat.n,):
        raise ShapeError(f"vector must have length {lat.n}")
    if v.dtype.kind == "f":
        if not np.all(v == np.round(v)):
            return False
        v = v.astype(np.int64)
    vp = lat.to_permuted(v.astype(np.int64))
    head, tail = vp[: lat.k], vp[lat.k :]
    return bool(np.all((tail - lat.b_block @ head) % lat.q == 0))


def min_lee_distance(c: QaryCode) -> int:
    return c.min_lee_distance


def minimum_norm(lat: QaryLattice, c: Optional[QaryCode] = None) -> int:
    """Minimum Lee norm of the lattice, ``min(q, d(C))``."""
    c = c if c is not None else lat.code()
    return min(lat.q, c.min_lee_distance)


def brute_force_minimum_norm(lat: QaryLattice) -> int:
    """Smallest l1 norm over nonzero lattice points in the box ``[-q, q]^n``.

    Enumerates every codeword lift in the box, so it never uses the
    ``min(q, d(C))`` law it is meant to check.
    """
    q, n = lat.q, lat.n
    words = lat.code().codewords()
    if words.shape[0] * 3**n > 5 * 10**7:
        raise CapacityError("box enumeration too large")
    best = q  # q * e_1 is always a lattice vector
    shifts = all_vectors(n, 3) - 1  # coset shifts {-1, 0, 1}^n
    for s in shifts:
        pts = words + q * s[None, :]
        mask = np.any(pts != 0, axis=1) & np.all(np.abs(pts) <= q, axis=1)
        if mask.any():
            best = min(best, int(np.abs(pts[mask]).sum(axis=1).min()))
    return best


# ---------------------------------------------------------------------------
# file format: an optional kind line ("code" or "blocks"), then a matrix in
# the shared "q rows cols" format.  "code" holds an n x k generator,
# "blocks" holds the (n-k) x k block B with n = rows + cols.


def parse_lattice_file(lines: Iterable[str]) -> Tuple[QaryLattice, QaryCode]:
    lines = list(lines)
    kind = "code"
    body = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not body and line.lower() in ("code", "blocks"):
            kind = line.lower()
            continue
        body.append(line)
    if not body:
        raise ParseError("empty lattice file")
    if kind == "code":
        g = parse_matrix(body)
        code = build_code(g)
        return build_lattice(code), code
    header = body[0].split()
    if len(header) != 3:
        raise ParseError("blocks header must be 'q rows cols'")
    try:
        q, rows, cols = (int(h) for h in header)
    except ValueError:
        raise ParseError("non-integer blocks header") from None
    n, k = rows + cols, cols
    if rows == 0:
        if len(body) != 1:
            raise ParseError("trailing data after empty block")
        b = np.zeros((0, k), dtype=np.int64)
    else:
        b = parse_matrix(body).entries
    lat = build_lattice_from_blocks(q, n, k, b)
    return lat, lat.code()


def read_lattice_file(path) -> Tuple[QaryLattice, QaryCode]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_lattice_file(fh)


def format_lattice_file(lat: QaryLattice) -> str:
    """Serialize as a ``blocks`` file (permutation is not stored)."""
    if lat.is_permuted:
        raise ValueError("blocks files cannot record a coordinate permutation")
    rows, cols = lat.n - lat.k, lat.k
    out = ["blocks", f"{lat.q} {rows} {cols}"]
    out += [" ".join(str(int(e)) for e in row) for row in lat.b_block]
    return "\n".join(out) + "\n"


def write_lattice_file(lat: QaryLattice, fh: TextIO) -> None:
    fh.write(format_lattice_file(lat))
