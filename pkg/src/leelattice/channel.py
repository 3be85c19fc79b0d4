"""
Laplacian-noise channel experiments over random q-ary lattices.

Each trial draws a lattice with uniform ``B``, a coefficient vector ``x``,
and i.i.d. Laplace noise ``e``; it decodes ``r = M x + e`` with the Lee
sphere decoder (Babai radius) and records node statistics.  Trial ``t`` of
dimension ``k`` uses its own generator seeded by ``(seed, k, t)``, so serial
and threaded runs produce the same table.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .code_decode import BRUTE_MAX_CODEWORDS, BRUTE_MAX_N, brute_force_cvp
from .construction import QaryLattice, build_lattice_from_blocks
from .metrics import l1_distance
from .sphere import DecodeConfig, babai_bound, lee_sphere_decode, within_node_bound

log = logging.getLogger(__name__)

AGGREGATE_COLUMNS = [
    "k",
    "trials",
    "mean_nodes",
    "median_nodes",
    "p95_nodes",
    "mean_distance",
    "exact_recovery_rate",
    "mean_time_us",
    "distance_ok_rate",
    "oracle_agreement_rate",
    "invariant_violations",
    "errors",
]

TRIAL_COLUMNS = [
    "k",
    "trial",
    "babai_radius",
    "distance",
    "noise_l1",
    "total_nodes",
    "leaves_tested",
    "exact",
    "distance_ok",
    "oracle_ok",
    "babai_bound_ok",
    "node_bound_ok",
    "time_us",
    "error",
]


def sample_lattice(q: int, n: int, k: int, rng: np.random.Generator) -> QaryLattice:
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    b = rng.integers(0, q, size=(n - k, k), dtype=np.int64)
    return build_lattice_from_blocks(q, n, k, b)


def sample_laplace_noise(n: int, scale: float, rng: np.random.Generator) -> np.ndarray:
    """Laplace(0, scale) samples by inverse CDF; ``scale == 0`` gives zeros."""
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    # open interval (0, 1) keeps both logarithms finite
    u = (rng.integers(0, 2**53, size=n, dtype=np.int64) + 0.5) / 2.0**53
    if scale == 0:
        return np.zeros(n)
    return np.where(u < 0.5, scale * np.log(2.0 * u), -scale * np.log(2.0 * (1.0 - u)))


@dataclass(frozen=True)
class ExperimentSpec:
    n: int = 17
    q: int = 5
    ks: Sequence[int] = tuple(range(1, 17))
    trials: int = 100
    scale: float = 1.0
    seed: int = 0
    decoder: DecodeConfig = field(default_factory=DecodeConfig)
    coeff_low: int = 0
    coeff_high: Optional[int] = None  # exclusive; defaults to q
    check_oracle: Optional[bool] = None  # default: only when brute force is feasible
    threads: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.scale < 0:
            raise ValueError("scale must be nonnegative")
        for k in self.ks:
            if not 1 <= k < self.n:
                raise ValueError(f"k={k} outside 1..{self.n - 1}")


@dataclass
class TrialRecord:
    k: int
    trial: int
    babai_radius: float = math.nan
    distance: float = math.nan
    noise_l1: float = math.nan
    total_nodes: int = 0
    leaves_tested: int = 0
    exact: bool = False
    distance_ok: bool = False
    oracle_ok: Optional[bool] = None
    babai_bound_ok: bool = False
    node_bound_ok: bool = False
    time_us: float = 0.0
    error: str = ""
    nodes_per_depth: List[int] = field(default_factory=list)

    @property
    def invariants_ok(self) -> bool:
        return (
            not self.error
            and self.babai_bound_ok
            and self.node_bound_ok
            and self.distance <= self.babai_radius + 1e-9
            and self.oracle_ok is not False
        )


def trial_rng(seed: int, k: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(k), int(trial)]))


def _oracle_enabled(spec: ExperimentSpec, k: int) -> bool:
    if spec.check_oracle is not None:
        return spec.check_oracle
    return spec.n <= BRUTE_MAX_N and spec.q**k <= BRUTE_MAX_CODEWORDS


def run_trial(spec: ExperimentSpec, k: int, trial: int) -> TrialRecord:
    rec = TrialRecord(k=k, trial=trial)
    try:
        rng = trial_rng(spec.seed, k, trial)
        lat = sample_lattice(spec.q, spec.n, k, rng)
        hi = spec.coeff_high if spec.coeff_high is not None else spec.q
        x = rng.integers(spec.coeff_low, hi, size=spec.n, dtype=np.int64)
        sent = lat.point(x)
        e = sample_laplace_noise(spec.n, spec.scale, rng)
        r = sent + e
        t0 = time.perf_counter()
        res = lee_sphere_decode(lat, r, spec.decoder)
        rec.time_us = (time.perf_counter() - t0) * 1e6
        rec.babai_radius = float(res.radius)
        rec.nodes_per_depth = res.nodes_per_depth
        rec.total_nodes = res.total_nodes
        rec.leaves_tested = res.leaves_tested
        rec.noise_l1 = l1_distance(r, sent)
        rec.babai_bound_ok = (spec.decoder.radius != "babai") or rec.babai_radius <= babai_bound(lat) + 1e-9
        rec.node_bound_ok = within_node_bound(lat, rec.total_nodes)
        if not res.found:
            rec.error = "none-in-radius"
            return rec
        rec.distance = float(res.distance)
        rec.exact = bool(np.array_equal(res.point, sent))
        rec.distance_ok = rec.distance <= rec.noise_l1 + 1e-9
        if _oracle_enabled(spec, k):
            rec.oracle_ok = brute_force_cvp(lat, r).distance == rec.distance
    except Exception as exc:  # a failing trial must not abort the batch
        log.exception("trial k=%d #%d failed", k, trial)
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def run_trials(spec: ExperimentSpec) -> List[TrialRecord]:
    jobs = [(k, t) for k in spec.ks for t in range(spec.trials)]
    if spec.threads <= 1:
        return [run_trial(spec, k, t) for k, t in jobs]
    with ThreadPoolExecutor(max_workers=spec.threads) as pool:
        return list(pool.map(lambda kt: run_trial(spec, *kt), jobs))


def aggregate(records: Iterable[TrialRecord], ks: Sequence[int]) -> List[Dict[str, object]]:
    by_k: Dict[int, List[TrialRecord]] = {k: [] for k in ks}
    for rec in records:
        by_k[rec.k].append(rec)
    rows = []
    for k in ks:
        recs = sorted(by_k[k], key=lambda r: r.trial)
        good = [r for r in recs if not r.error]
        nodes = np.array([r.total_nodes for r in good], dtype=np.float64)
        oracle = [r.oracle_ok for r in good if r.oracle_ok is not None]
        rows.append(
            {
                "k": k,
                "trials": len(recs),
                "mean_nodes": float(nodes.mean()) if good else math.nan,
                "median_nodes": float(np.median(nodes)) if good else math.nan,
                "p95_nodes": float(np.percentile(nodes, 95)) if good else math.nan,
                "mean_distance": math.fsum(r.distance for r in good) / len(good) if good else math.nan,
                "exact_recovery_rate": sum(r.exact for r in good) / len(recs),
                "mean_time_us": math.fsum(r.time_us for r in good) / len(good) if good else math.nan,
                "distance_ok_rate": sum(r.distance_ok for r in good) / len(recs),
                "oracle_agreement_rate": (sum(oracle) / len(oracle)) if oracle else "",
                "invariant_violations": sum(not r.invariants_ok for r in recs),
                "errors": len(recs) - len(good),
            }
        )
    return rows


def run_experiment(spec: ExperimentSpec):
    """Run every trial and return ``(aggregate_rows, trial_records)``."""
    records = run_trials(spec)
    return aggregate(records, spec.ks), records


def trial_row(rec: TrialRecord) -> Dict[str, object]:
    return {c: getattr(rec, c) for c in TRIAL_COLUMNS}
