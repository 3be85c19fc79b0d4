"""Pure-Python Lee sphere enumeration (fallback for the compiled kernel)."""

import math

import numpy as np


def sphere_search(b_block, q, r, radius, shrink):
    """Depth-first Lee-ball search over the first ``k`` coordinates.

    Arguments are in permuted coordinates.  Returns
    ``(found, z, dist, nodes_per_depth, leaves)``; ``nodes_per_depth`` has
    ``k + 1`` entries including the root.
    """
    b = [[int(v) for v in row] for row in np.asarray(b_block, dtype=np.int64)]
    r = [float(v) for v in np.asarray(r, dtype=np.float64)]
    n = len(r)
    m = len(b)
    k = n - m
    q = int(q)
    tol = 1e-9 * (1.0 + radius)

    nodes = [0] * (k + 1)
    nodes[0] = 1
    state = {"R": float(radius), "best": math.inf, "z": None, "leaves": 0}
    x = [0] * k
    acc = [0] * m
    r_tail = r[k:]

    def leaf(partial):
        state["leaves"] += 1
        lim = state["R"] + tol
        d = partial
        tail = [0] * m
        for t in range(m):
            a = acc[t]
            w = math.floor((r_tail[t] - a) / q + 0.5)
            zt = a + q * w
            tail[t] = zt
            d += abs(r_tail[t] - zt)
            if d > lim:
                return
        if d < state["best"]:
            state["best"] = d
            state["z"] = x + tail
            if shrink:
                state["R"] = d

    def descend(j, partial):
        if j == k:
            leaf(partial)
            return
        rj = r[j]
        col = [row[j] for row in b]
        v = math.ceil(rj - (state["R"] - partial) - tol)
        for t in range(m):
            acc[t] += col[t] * v
        x[j] = v
        while True:
            rem = state["R"] + tol - partial
            if v > rj + rem:
                break
            dev = abs(v - rj)
            if dev <= rem:
                nodes[j + 1] += 1
                descend(j + 1, partial + dev)
            v += 1
            x[j] = v
            for t in range(m):
                acc[t] += col[t]
        for t in range(m):
            acc[t] -= col[t] * v

    descend(0, 0.0)
    if state["z"] is None:
        return False, np.zeros(n, dtype=np.int64), math.inf, np.array(nodes, dtype=np.int64), state["leaves"]
    return (
        True,
        np.array(state["z"], dtype=np.int64),
        state["best"],
        np.array(nodes, dtype=np.int64),
        state["leaves"],
    )
