"""Monte Carlo harness: simulate, estimate, and compare against theory."""

from __future__ import annotations

import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from scipy import stats

from . import analytic
from .estimator import ml_estimate
from .model import DistanceDistribution, Kind, check_delta
from .oracle import exact_correct_prob
from .tree_sim import distance, simulate_clock, simulate_uniform, trial_stream

__all__ = [
    "Z_LIMIT",
    "ExperimentConfig",
    "ComparisonRow",
    "ComparisonReport",
    "run_trials",
    "compare",
    "exact_target",
    "validate",
    "figure_tables",
    "CSV_COLUMNS",
]

Z_LIMIT = 4.0
CSV_COLUMNS = ("delta", "d", "m", "lower", "upper", "exact", "empirical", "se", "z")
THREADS_ENV = "RUMOR_LOCUS_THREADS"
_CHUNK = 2000


@dataclass(frozen=True)
class ExperimentConfig:
    delta: int
    n: int
    trials: int
    master_seed: int
    mode: str = "uniform"
    target: str = "exact-finite-n"

    def __post_init__(self):
        check_delta(self.delta)
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.mode not in ("uniform", "clock"):
            raise ValueError(f"mode must be 'uniform' or 'clock', got {self.mode!r}")
        if self.target not in ("exact-finite-n", "limit", "bound"):
            raise ValueError(f"unknown comparison target {self.target!r}")


def _one_trial(delta: int, n: int, seed: int, trial: int, mode: str) -> int:
    rng = trial_stream(seed, trial)
    simulate = simulate_uniform if mode == "uniform" else simulate_clock
    tree = simulate(delta, n, rng)
    return distance(tree.source, ml_estimate(tree, rng))


def _run_chunk(args) -> Counter:
    delta, n, seed, mode, start, stop = args
    return Counter(_one_trial(delta, n, seed, t, mode) for t in range(start, stop))


def _workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def run_trials(config: ExperimentConfig, workers: Optional[int] = None) -> DistanceDistribution:
    """Empirical law of the source-to-estimate distance.

    Trial t draws only from the substream (master_seed, t), so the result
    does not depend on how trials are spread over worker processes.
    """
    workers = workers or _workers()
    chunks = [
        (config.delta, config.n, config.master_seed, config.mode, s, min(s + _CHUNK, config.trials))
        for s in range(0, config.trials, _CHUNK)
    ]
    counts = Counter()
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_chunk, chunks):
                counts.update(part)
    else:
        for chunk in chunks:
            counts.update(_run_chunk(chunk))
    masses = {d: counts[d] / config.trials for d in sorted(counts)}
    meta = {"delta": config.delta, "n": config.n, "trials": config.trials,
            "seed": config.master_seed, "mode": config.mode,
            "counts": {d: counts[d] for d in sorted(counts)}}
    return DistanceDistribution(masses, Kind.EMPIRICAL, meta)


@dataclass(frozen=True)
class ComparisonRow:
    d: int
    empirical: float
    target: float
    target_upper: Optional[float]
    se: float
    z: float


@dataclass
class ComparisonReport:
    rows: list
    chi2: float
    chi2_dof: int
    chi2_pvalue: float
    passed: bool
    runtime: float = 0.0
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "rows": [
                {"d": r.d, "empirical": r.empirical, "target": r.target,
                 "target_upper": r.target_upper, "se": r.se, "z": r.z}
                for r in self.rows
            ],
            "chi2": self.chi2,
            "chi2_dof": self.chi2_dof,
            "chi2_pvalue": self.chi2_pvalue,
            "verdict": "pass" if self.passed else "fail",
            "runtime": self.runtime,
            "meta": self.meta,
        }


def _z_score(emp: float, lo: float, hi: float, trials: int) -> tuple[float, float]:
    # distance from the target interval, in binomial standard errors at its nearest end
    if lo <= emp <= hi:
        return math.sqrt(max(lo * (1 - lo), 0.0) / trials), 0.0
    p = lo if emp < lo else hi
    se = math.sqrt(max(p * (1 - p), 0.0) / trials)
    if se == 0.0:
        return 0.0, math.copysign(math.inf, emp - p)
    return se, (emp - p) / se


def compare(
    empirical: DistanceDistribution,
    target: DistanceDistribution,
    dmax: Optional[int] = None,
) -> ComparisonReport:
    """Per-distance z-scores and a pooled chi-square goodness of fit.

    Verdict rows cover d <= ``dmax`` (every d in either support when None).
    Chi-square cells with expected count below 5 are pooled into one.
    """
    t0 = time.perf_counter()
    trials = empirical.meta.get("trials") if empirical.meta else None
    if not trials or not empirical.masses:
        raise ValueError("empirical distribution is empty")
    support = sorted(set(empirical.masses) | set(target.masses))
    if dmax is not None:
        support = [d for d in support if d <= dmax]
    rows = []
    for d in support:
        emp = float(empirical[d])
        lo = float(target[d])
        hi = float(target.upper.get(d, lo)) if target.upper is not None else lo
        se, z = _z_score(emp, lo, hi, trials)
        rows.append(ComparisonRow(d, emp, lo, hi if target.upper is not None else None, se, z))
    passed = all(abs(r.z) <= Z_LIMIT for r in rows)

    observed, expected = [], []
    pool_obs = pool_exp = 0.0
    for d in sorted(set(empirical.masses) | set(target.masses)):
        o = float(empirical[d]) * trials
        e = float(target[d]) * trials
        if e >= 5:
            observed.append(o)
            expected.append(e)
        else:
            pool_obs += o
            pool_exp += e
    if pool_exp > 0 or pool_obs > 0:
        observed.append(pool_obs)
        expected.append(pool_exp)
    chi2 = sum((o - e) ** 2 / e for o, e in zip(observed, expected) if e > 0)
    dof = max(len(observed) - 1, 1)
    pvalue = float(stats.chi2.sf(chi2, dof))
    return ComparisonReport(rows, chi2, dof, pvalue, passed,
                            runtime=time.perf_counter() - t0,
                            meta={"target_kind": target.kind.value})


def exact_target(delta: int, n: int) -> DistanceDistribution:
    """Exact finite-n distance law on the 3-regular tree."""
    if delta != 3:
        raise ValueError("exact finite-n targets are available for delta = 3 only")
    masses = {0: float(exact_correct_prob(3, n))}
    masses.update(analytic.dn_exact_delta3_table(n))
    return DistanceDistribution(masses, Kind.EXACT, {"delta": 3, "n": n})


def _target_for(config: ExperimentConfig, dmax: int, m: int) -> DistanceDistribution:
    if config.target == "exact-finite-n":
        return exact_target(config.delta, config.n)
    if config.target == "limit" and config.delta == 3:
        return analytic.limit_distribution(3, dmax)
    lower = {d: analytic.g_bound(config.delta, d, m) for d in range(dmax + 1)}
    eps = analytic.epsilon(m)
    upper = {d: lower[d] + (eps if d else 0.0) for d in lower}
    return DistanceDistribution(lower, Kind.LOWER_BOUND, {"delta": config.delta, "m": m}, upper)


def validate(config: ExperimentConfig, dmax: int = 3, m: int = analytic.DEFAULT_M,
             workers: Optional[int] = None) -> ComparisonReport:
    """Run the trials and compare them with the configured target."""
    t0 = time.perf_counter()
    empirical = run_trials(config, workers)
    target = _target_for(config, dmax, m)
    report = compare(empirical, target, dmax=dmax)
    report.runtime = time.perf_counter() - t0
    report.meta.update({"delta": config.delta, "n": config.n, "trials": config.trials,
                        "seed": config.master_seed, "mode": config.mode})
    return report


def figure_tables(dmax: int, deltas, m: int = analytic.DEFAULT_M) -> list:
    """Cumulative within-distance rows: bound pair per degree, exact value for delta 3."""
    if m < dmax + 1:
        raise ValueError(f"m must be >= dmax + 1 (m={m}, dmax={dmax})")
    rows = []
    for delta in deltas:
        delta = check_delta(delta)
        for d in range(dmax + 1):
            b = analytic.cumulative_within(delta, d, m)
            rows.append({"delta": delta, "d": d, "m": m, "lower": b.lower,
                         "upper": b.upper, "exact": b.exact, "epsilon": analytic.epsilon(m)})
    return rows
