import itertools

import numpy as np
import pytest

from leelattice.construction import build_code, build_lattice, build_lattice_from_blocks
from leelattice.sphere import BACKENDS
from leelattice.zq import reduce_mod_q

EXAMPLE2_B = [[2, 1, 3], [1, 3, 2], [1, 1, 1], [3, 2, 1]]
EXAMPLE2_M = [
    [1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0],
    [2, 1, 3, 4, 0, 0, 0],
    [1, 3, 2, 0, 4, 0, 0],
    [1, 1, 1, 0, 0, 4, 0],
    [3, 2, 1, 0, 0, 0, 4],
]


@pytest.fixture
def example1():
    code = build_code(reduce_mod_q([[1], [5]], 13))
    return code, build_lattice(code)


@pytest.fixture
def example2():
    lat = build_lattice_from_blocks(4, 7, 3, EXAMPLE2_B)
    return lat.code(), lat


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return request.param


def box_cvp(lat, r, span=None):
    """Independent oracle: scan integer coefficient vectors in a box.

    Lattice points are ``M x`` for integer ``x``; the box is wide enough to
    hold every point within the Babai-type radius of a small target.
    """
    r = np.asarray(r, dtype=float)
    M = lat.basis
    Minv = np.linalg.inv(M)
    center = np.rint(Minv @ r).astype(int)
    span = span if span is not None else 2
    best, best_d = None, np.inf
    for off in itertools.product(range(-span, span + 1), repeat=lat.n):
        x = center + np.array(off)
        z = M @ x
        d = np.abs(z - r).sum()
        if d < best_d - 1e-12:
            best, best_d = z, d
    return best, best_d


def brute_ball_count(j, R):
    if j == 0:
        return 1
    return sum(
        1 for p in itertools.product(range(-R, R + 1), repeat=j) if sum(abs(v) for v in p) <= R
    )


def random_lattice(rng, n=None, q=None, k=None):
    q = q if q is not None else int(rng.choice([3, 5, 7]))
    n = n if n is not None else int(rng.integers(2, 7))
    k = k if k is not None else int(rng.integers(1, n))
    b = rng.integers(0, q, size=(n - k, k))
    return build_lattice_from_blocks(q, n, k, b)


# acceptance criteria report one line each; collected here and printed at the end
ACCEPTANCE_LINES = []


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
