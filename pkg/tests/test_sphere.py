import itertools
import math

import numpy as np
import pytest

from leelattice.code_decode import brute_force_cvp
from leelattice.construction import build_lattice_from_blocks
from leelattice.geometry import lee_ball_cardinality
from leelattice.sphere import (
    DecodeConfig,
    babai_bound,
    babai_radius,
    exact_node_count,
    lee_sphere_decode,
    log_expected_node_bound,
    within_node_bound,
)

from conftest import brute_ball_count, random_lattice


def test_babai_example1(example1):
    _, lat = example1
    radius, point = babai_radius(lat, [0, -6])
    assert radius == 6 and point.tolist() == [0, 0]
    assert radius <= babai_bound(lat) == 7


def test_babai_lattice_point(example2):
    _, lat = example2
    z = lat.point([3, -1, 2, 1, 0, 2, -3])
    assert babai_radius(lat, z)[0] == 0


def test_babai_bound_successive():
    rng = np.random.default_rng(20)
    for _ in range(500):
        lat = random_lattice(rng)
        r = rng.uniform(-20, 20, lat.n)
        radius, point = babai_radius(lat, r)
        assert radius <= babai_bound(lat) + 1e-9
        assert brute_force_cvp(lat, r).distance <= radius + 1e-9


def test_round_off_variant_can_break_bound():
    # rounding the real solution all at once lets B amplify the head error
    lat = build_lattice_from_blocks(7, 3, 2, [[6, 6]])
    r = [4.59, 2.5, 4.47]
    off, _ = babai_radius(lat, r, successive=False)
    seq, _ = babai_radius(lat, r)
    assert seq <= babai_bound(lat)
    assert off > babai_bound(lat)


def test_sphere_example1(example1, backend):
    _, lat = example1
    res = lee_sphere_decode(lat, [0, -6], backend=backend)
    assert res.point.tolist() == [-1, -5] and res.distance == 2


def test_fig2_tree(example2, backend):
    _, lat = example2
    res = lee_sphere_decode(lat, [1, 1, 1, 5, 2, 3, 5], DecodeConfig(2, shrink_on_improve=False), backend=backend)
    assert res.nodes_per_depth == [1, 5, 13, 25]
    assert res.total_nodes == exact_node_count(3, 2) == 44
    assert res.leaves_tested == 25
    assert res.distance == brute_force_cvp(lat, [1, 1, 1, 5, 2, 3, 5]).distance


def test_zero_radius_at_lattice_point(example2, backend):
    _, lat = example2
    z = lat.point([1, 2, 3, 0, -1, 0, 1])
    res = lee_sphere_decode(lat, z, DecodeConfig(0, shrink_on_improve=False), backend=backend)
    assert res.point.tolist() == z.tolist() and res.distance == 0
    assert res.nodes_per_depth == [1, 1, 1, 1]


def test_none_in_radius(example2, backend):
    _, lat = example2
    res = lee_sphere_decode(lat, [0.5] * 7, DecodeConfig(0.25), backend=backend)
    assert not res.found and res.distance == math.inf


def test_config_validation():
    with pytest.raises(ValueError):
        DecodeConfig(-1)
    with pytest.raises(ValueError):
        DecodeConfig(float("nan"))


def test_oracle_equivalence_random(backend):
    rng = np.random.default_rng(21)
    trials = 300 if backend == "cython" else 120
    for _ in range(trials):
        lat = random_lattice(rng)
        r = lat.point(rng.integers(0, lat.q, lat.n)) + rng.laplace(0, 1.0, lat.n)
        res = lee_sphere_decode(lat, r, backend=backend)
        assert res.distance == brute_force_cvp(lat, r).distance


def test_backends_agree():
    from leelattice.sphere import BACKENDS

    if len(BACKENDS) < 2:
        pytest.skip("compiled kernel not built")
    rng = np.random.default_rng(22)
    for _ in range(200):
        lat = random_lattice(rng)
        r = rng.normal(0, 3, lat.n)
        for shrink in (True, False):
            cfg = DecodeConfig(shrink_on_improve=shrink)
            a = lee_sphere_decode(lat, r, cfg, backend="python")
            b = lee_sphere_decode(lat, r, cfg, backend="cython")
            assert a.point.tolist() == b.point.tolist()
            assert a.nodes_per_depth == b.nodes_per_depth
            assert a.leaves_tested == b.leaves_tested


@pytest.mark.parametrize("k, R, expected", [(0, 7, 1), (3, 2, 44), (2, 1, 9)])
def test_exact_node_count(k, R, expected):
    assert exact_node_count(k, R) == expected
    assert expected == sum(brute_ball_count(j, R) for j in range(k + 1))


def test_prop3_random_integer_targets(backend):
    rng = np.random.default_rng(23)
    for _ in range(60):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, min(n, 5)))
        lat = random_lattice(rng, n=n, k=k)
        R = int(rng.integers(0, 5))
        r = rng.integers(-10, 10, n).astype(float)
        r[k:] += rng.uniform(-0.5, 0.5, n - k)  # only the head must be integral
        res = lee_sphere_decode(lat, r, DecodeConfig(R, shrink_on_improve=False), backend=backend)
        assert res.nodes_per_depth == exact_node_count(k, R, per_depth=True)


def _prefixes_within(r, k, R):
    """Every integer prefix with sum |x_i - r_i| <= R, by box scan."""
    out = {0: 1}
    for j in range(1, k + 1):
        lo = [math.floor(r[i] - R) - 1 for i in range(j)]
        cnt = 0
        for off in itertools.product(range(int(2 * R) + 4), repeat=j):
            x = [lo[i] + off[i] for i in range(j)]
            if sum(abs(x[i] - r[i]) for i in range(j)) <= R:
                cnt += 1
        out[j] = cnt
    return [out[j] for j in range(k + 1)]


def test_feasible_set_real_target(backend):
    rng = np.random.default_rng(24)
    for _ in range(30):
        lat = random_lattice(rng, n=int(rng.integers(2, 5)))
        R = float(rng.uniform(0.2, 2.5))
        r = rng.normal(0, 2, lat.n)
        res = lee_sphere_decode(lat, r, DecodeConfig(R, shrink_on_improve=False), backend=backend)
        assert res.nodes_per_depth == _prefixes_within(r, lat.k, R)


def test_tail_completion_is_locally_optimal():
    from leelattice.sphere import _tail_completion

    rng = np.random.default_rng(25)
    for _ in range(200):
        lat = random_lattice(rng)
        r = rng.normal(0, 4, lat.n)
        head = rng.integers(-3, 4, lat.k)
        z = _tail_completion(lat, r, head)
        d = np.abs(z - r).sum()
        for t in range(lat.k, lat.n):
            for step in (-lat.q, lat.q):
                alt = z.copy()
                alt[t] += step
                assert np.abs(alt - r).sum() >= d - 1e-12


def test_node_bound():
    lat = build_lattice_from_blocks(5, 17, 8, np.zeros((9, 8), dtype=int))
    terms = [(j + 5 * (17 - j)) ** j / math.factorial(j) for j in range(9)]
    assert log_expected_node_bound(lat) == pytest.approx(math.log(sum(terms)))
    assert within_node_bound(lat, int(sum(terms) * 0.99))
    assert not within_node_bound(lat, int(sum(terms) * 1.01))


def test_shrink_reduces_work(example2):
    _, lat = example2
    r = [1.2, 0.7, 3.1, 5.2, 2.4, 3.3, 4.9]
    full = lee_sphere_decode(lat, r, DecodeConfig(shrink_on_improve=False))
    fast = lee_sphere_decode(lat, r, DecodeConfig(shrink_on_improve=True))
    assert fast.distance == full.distance
    assert fast.total_nodes <= full.total_nodes


def test_permuted_lattice(backend):
    from leelattice.construction import build_code, build_lattice
    from leelattice.zq import reduce_mod_q

    lat = build_lattice(build_code(reduce_mod_q([[0, 0], [1, 0], [0, 1], [1, 1]], 3)))
    rng = np.random.default_rng(26)
    for _ in range(40):
        r = rng.normal(0, 3, 4)
        assert lee_sphere_decode(lat, r, backend=backend).distance == brute_force_cvp(lat, r).distance


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys

    env = dict(os.environ, LEELATTICE_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from leelattice import sphere; print(sphere.BACKEND, sorted(sphere.BACKENDS))"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.split()[0] == "python"
    assert "cython" not in out.stdout
