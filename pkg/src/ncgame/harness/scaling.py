"""Demand-scaling runs: PoA along a demand path, and fits of its decay."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..analysis.decomposition import DecompositionReport
from ..analysis.demand import DemandPath
from ..analysis.poa import price_of_anarchy
from ..equilibrium import SolverConfig, check_epsilon_ne_of_so
from ..game import Game

logger = logging.getLogger(__name__)

CSV_FIELDS = ("phase", "n", "T", "C_ne", "C_so", "poa", "gap_ne", "gap_so", "eps_so", "ms")


@dataclass
class Record:
    phase: int
    n: int
    T: float
    C_ne: float
    C_so: float
    poa: float | None
    gap_ne: float
    gap_so: float
    eps_so: float
    ms: float
    converged: bool = True

    @property
    def total_ne(self) -> float:
        return self.C_ne * self.T


@dataclass
class ScaleRun:
    records: list
    modulus: int = 1
    meta: dict = field(default_factory=dict)

    def phase_records(self, residue: int) -> list:
        return [r for r in self.records if r.phase == residue]

    @property
    def phases(self) -> list:
        return sorted({r.phase for r in self.records})

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in self.records:
            w.writerow([
                r.phase, r.n, repr(r.T), repr(r.C_ne), repr(r.C_so),
                "" if r.poa is None else repr(r.poa),
                repr(r.gap_ne), repr(r.gap_so), repr(r.eps_so), f"{r.ms:.3f}",
            ])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "meta": self.meta, "records": [asdict(r) for r in self.records]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def save(self, csv_path, json_path=None) -> None:
        with open(csv_path, "w", newline="") as fh:
            fh.write(self.to_csv())
        if json_path is not None:
            with open(json_path, "w") as fh:
                fh.write(self.to_json(indent=2) + "\n")


def geometric_grid(lo: int, hi: int, num: int | None = None) -> list[int]:
    """Integers from ``lo`` to ``hi``; powers of two when ``num`` is omitted."""
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    if num is None:
        out, n = [], lo
        while n <= hi:
            out.append(n)
            n *= 2
        if out[-1] != hi:
            out.append(hi)
        return out
    return sorted({int(round(v)) for v in np.geomspace(lo, hi, num)})


def parse_grid(spec: str) -> list[int]:
    """``"a:b:geometric"`` (powers of two), ``"a:b:geometric:num"`` or ``"a:b:linear[:step]"``."""
    parts = spec.split(":")
    if len(parts) < 3:
        raise ValueError(f"grid spec {spec!r} must look like a:b:geometric")
    lo, hi, kind = int(parts[0]), int(parts[1]), parts[2]
    if kind == "geometric":
        return geometric_grid(lo, hi, int(parts[3]) if len(parts) > 3 else None)
    if kind == "linear":
        step = int(parts[3]) if len(parts) > 3 else 1
        return list(range(lo, hi + 1, step))
    raise ValueError(f"unknown grid kind {kind!r}")


def phase_grid(grid, modulus: int, residue: int) -> list[int]:
    """Shift each grid point up to the next ``n`` with ``n % modulus == residue``."""
    return sorted({n + (residue - n) % modulus for n in grid})


def _solve_point(game, path, n, residue, config, record_time):
    d = path.demand(n, game.group_ids)
    t0 = time.perf_counter()
    res = price_of_anarchy(game, d, config)
    eps = check_epsilon_ne_of_so(game, d, res.so.profile)
    ms = (time.perf_counter() - t0) * 1e3 if record_time else 0.0
    converged = bool(res.ne.converged and res.so.converged)
    if not converged:
        logger.warning("n=%d (phase %d) did not converge", n, residue)
    return Record(
        residue, n, res.T, res.C_ne, res.C_so, res.poa,
        res.ne.gap, res.so.gap, eps, ms, converged,
    )


def default_workers() -> int:
    """Worker threads for :func:`scale_poa`, from ``NCGAME_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("NCGAME_THREADS", "1")))
    except ValueError:
        return 1


def scale_poa(
    game: Game,
    path: DemandPath,
    grid,
    config: SolverConfig | None = None,
    phases=None,
    record_time: bool = True,
    workers: int | None = None,
) -> ScaleRun:
    """Solve NE and SO for every ``n`` of ``grid`` on every phase of ``path``.

    On paths with several phases each phase gets its own copy of the grid,
    shifted onto its residue class.  Points are independent, so they may be
    solved by ``workers`` threads; records always come back ordered by
    phase, then ``n``.  Set ``record_time=False`` for byte-reproducible
    output (the ``ms`` column is then 0).
    """
    grid = sorted(int(n) for n in grid)
    if not grid or grid[0] < 1:
        raise ValueError("grid must contain integers >= 1")
    phases = range(path.modulus) if phases is None else phases
    jobs = [(n, r) for r in phases for n in phase_grid(grid, path.modulus, r)]
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1:
        records = [_solve_point(game, path, n, r, config, record_time) for n, r in jobs]
    else:
        with ThreadPoolExecutor(workers) as pool:
            records = list(pool.map(lambda job: _solve_point(game, path, *job, config, record_time), jobs))
    meta = {"config": asdict(config or SolverConfig()), "grid": grid}
    return ScaleRun(records, path.modulus, meta)


@dataclass
class PhaseConvergence:
    phase: int
    n_records: int
    last_excess: float | None
    monotone_tail: bool
    gamma: float | None
    gamma_residual: float | None
    gamma_points: int
    verdict: str
    growth_measured: float | None = None
    growth_predicted: float | None = None
    growth_ok: bool | None = None


@dataclass
class ConvergenceReport:
    phases: list

    def phase(self, residue: int = 0) -> PhaseConvergence:
        for p in self.phases:
            if p.phase == residue:
                return p
        raise KeyError(residue)

    def to_dict(self) -> dict:
        return {"phases": [asdict(p) for p in self.phases]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def __str__(self):
        lines = []
        for p in self.phases:
            g = "n/a" if p.gamma is None else f"{p.gamma:.4f} (rms {p.gamma_residual:.2g}, {p.gamma_points} pts)"
            lines.append(f"phase {p.phase}: {p.verdict}; PoA(last)-1 = {p.last_excess:.3g}; gamma = {g}")
            if p.growth_predicted is not None:
                lines.append(
                    f"  cost growth: measured {p.growth_measured:.4f}, predicted {p.growth_predicted:g}"
                    f" -> {'ok' if p.growth_ok else 'mismatch'}"
                )
        return "\n".join(lines)


def _loglog_fit(x, y):
    X = np.log(np.asarray(x, dtype=float))
    Y = np.log(np.asarray(y, dtype=float))
    slope, intercept = np.polyfit(X, Y, 1)
    resid = Y - (slope * X + intercept)
    return float(slope), float(np.sqrt(np.mean(resid ** 2)))


def convergence_report(
    run: ScaleRun,
    decomposition: DecompositionReport | None = None,
    floor: float = 1e-10,
    tail: int = 5,
    monotone_slack: float = 1e-6,
    growth_tol: float = 0.2,
    min_points: int = 4,
) -> ConvergenceReport:
    """Fit ``PoA - 1 ~ T**(-gamma)`` per phase and compare cost growth with a prediction.

    The fit uses the upper half (by ``T``) of the converged records whose
    ``PoA - 1`` exceeds ``floor``; values below it are solver noise.  When
    every record sits below the floor the verdict is ``"already optimal"``.
    Cost growth is the slope of ``log C_ne * T`` against ``log n`` over the
    top decade of ``n``.
    """
    out = []
    for residue in run.phases:
        recs = [r for r in run.phase_records(residue) if r.converged and r.poa is not None]
        if len(recs) < min_points:
            raise ValueError(f"phase {residue}: need >= {min_points} converged records, got {len(recs)}")
        recs.sort(key=lambda r: r.T)
        excess = [r.poa - 1 for r in recs]
        last = excess[-1]
        tail_vals = [r.poa for r in recs[-tail:]]
        monotone = all(b <= a + monotone_slack for a, b in zip(tail_vals, tail_vals[1:]))
        resolvable = [r for r in recs if r.poa - 1 > floor]
        gamma = resid = None
        npts = 0
        if not resolvable:
            verdict = "already optimal"
        else:
            verdict = "converging" if last <= 1e-2 and monotone else "not converged"
            top = resolvable[len(resolvable) // 2:]
            npts = len(top)
            if npts >= min_points:
                slope, resid = _loglog_fit([r.T for r in top], [r.poa - 1 for r in top])
                gamma = -slope
        pc = PhaseConvergence(residue, len(recs), last, monotone, gamma, resid, npts, verdict)
        if decomposition is not None:
            pred = decomposition.phases[residue].predicted_cost_exponent
            n_max = max(r.n for r in recs)
            top = [r for r in recs if r.n >= n_max / 10]
            if pred is not None and len(top) >= 2:
                slope, _ = _loglog_fit([r.n for r in top], [r.total_ne for r in top])
                pc.growth_measured = slope
                pc.growth_predicted = float(pred)
                pc.growth_ok = abs(slope - float(pred)) <= growth_tol
        out.append(pc)
    return ConvergenceReport(out)
