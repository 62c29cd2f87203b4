"""Convergence-study driver: sweeps over (k, eps, N), observed rates against
N^{-1} and against the mesh-adjusted factor N^{-1} ln N, CSV and text tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .assembly1d import FluxConfig, solve_1d
from .assembly2d import FluxConfig2D, solve_2d
from .mesh import MeshParams, build_shishkin_1d, build_tensor_2d
from .norms import ErrorReport, error_report_1d, error_report_2d
from .problems import PROBLEM_NAMES, get_problem

__all__ = [
    "StudyConfig",
    "ConvergenceRecord",
    "rate_s",
    "rate_p",
    "run_study",
    "records_to_csv",
    "records_to_table",
    "CSV_HEADER",
]

CSV_HEADER = ("dim,k,sigma,eps,N,err_energy,err_balanced,err_l2_u,err_linf_u,"
              "rs_energy,rp_energy,rs_balanced,rp_balanced,status")


def rate_s(e_n: float, e_2n: float) -> float:
    """Observed order against N^{-1}: log(e_N / e_2N) / log 2."""
    if e_n <= 0.0 or e_2n <= 0.0:
        raise ValueError("errors must be positive to compute a rate")
    return (math.log(e_n) - math.log(e_2n)) / math.log(2.0)


def rate_p(e_n: float, e_2n: float, n: int) -> float:
    """Observed order against N^{-1} ln N: log(e_N / e_2N) divided by the
    log-ratio of that factor between N and 2N."""
    if e_n <= 0.0 or e_2n <= 0.0:
        raise ValueError("errors must be positive to compute a rate")
    if n < 2:
        raise ValueError(f"N must be at least 2, got {n}")
    return (math.log(e_n) - math.log(e_2n)) / math.log(2.0 * math.log(n) / math.log(2 * n))


@dataclass(frozen=True)
class StudyConfig:
    """One sweep: problem, degrees, eps values, mesh sizes and flux variant.

    sigma=None applies the default grading rule sigma = k + 1.
    """

    dim: int = 1
    degrees: tuple[int, ...] = (1,)
    eps_list: tuple[float, ...] = (1e-8,)
    n_list: tuple[int, ...] = (32, 64)
    sigma: float | None = None
    problem: str = "layer1d"
    flux: str = "paper"
    beta: float = 1.0

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if not self.degrees or not self.eps_list or not self.n_list:
            raise ValueError("degrees, eps_list and n_list must be nonempty")
        for n in self.n_list:
            if n < 4 or n % 4 != 0:
                raise ValueError(f"every N must be a positive multiple of 4, got {n}")
        if self.flux not in ("paper", "classic"):
            raise ValueError(f"flux must be 'paper' or 'classic', got {self.flux!r}")
        if self.problem not in PROBLEM_NAMES:
            raise ValueError(f"unknown problem {self.problem!r}")
        pdim, _ = PROBLEM_NAMES[self.problem]
        if pdim != self.dim:
            raise ValueError(f"problem {self.problem!r} is {pdim}D but dim={self.dim}")

    def sigma_for(self, k: int) -> float:
        return float(k + 1) if self.sigma is None else float(self.sigma)


@dataclass
class ConvergenceRecord:
    """One (k, eps, N) case; rates are attached only when the 2N case ran."""

    dim: int
    k: int
    sigma: float
    eps: float
    N: int
    status: str = "ok"
    report: ErrorReport | None = None
    rs_energy: float | None = None
    rp_energy: float | None = None
    rs_balanced: float | None = None
    rp_balanced: float | None = None
    detail: str = field(default="", repr=False)


def _run_case(cfg: StudyConfig, k: int, eps: float, n: int) -> ConvergenceRecord:
    sigma = cfg.sigma_for(k)
    rec = ConvergenceRecord(dim=cfg.dim, k=k, sigma=sigma, eps=eps, N=n)
    try:
        params = MeshParams(eps=eps, beta=cfg.beta, sigma=sigma, N=n)
        mesh1 = build_shishkin_1d(params)
        problem = get_problem(cfg.problem, eps)
        if cfg.dim == 1:
            fc = FluxConfig.paper(eps, n) if cfg.flux == "paper" else FluxConfig.classic(eps, n)
            w = solve_1d(mesh1, problem, k, fc)
            rec.report = error_report_1d(w, problem, fc)
        else:
            mesh2 = build_tensor_2d(mesh1, mesh1)
            fc2 = FluxConfig2D.paper(eps, n) if cfg.flux == "paper" else FluxConfig2D.classic(eps, n)
            t = solve_2d(mesh2, problem, k, fc2)
            rec.report = error_report_2d(t, problem, fc2)
    except Exception as exc:  # per-case failures recorded; the sweep continues
        rec.status = f"error: {type(exc).__name__}"
        rec.detail = str(exc)
    return rec


def run_study(cfg: StudyConfig) -> list[ConvergenceRecord]:
    """Run every (k, eps, N) case, attach observed rates between consecutive
    mesh sizes, and return records ordered by (k, eps, N)."""
    records = []
    for k in sorted(cfg.degrees):
        for eps in sorted(cfg.eps_list):
            group = [_run_case(cfg, k, eps, n) for n in sorted(cfg.n_list)]
            by_n = {rec.N: rec for rec in group}
            for rec in group:
                nxt = by_n.get(2 * rec.N)
                if nxt is None or rec.report is None or nxt.report is None:
                    continue
                try:
                    rec.rs_energy = rate_s(rec.report.err_energy, nxt.report.err_energy)
                    rec.rp_energy = rate_p(rec.report.err_energy, nxt.report.err_energy, rec.N)
                    rec.rs_balanced = rate_s(rec.report.err_balanced, nxt.report.err_balanced)
                    rec.rp_balanced = rate_p(rec.report.err_balanced, nxt.report.err_balanced, rec.N)
                except ValueError:
                    pass  # zero error (exactness cases) has no meaningful rate
            records.extend(group)
    return records


def _fmt(v, spec: str) -> str:
    return "" if v is None else format(v, spec)


def records_to_csv(records: list[ConvergenceRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        rep = r.report
        lines.append(",".join([
            str(r.dim),
            str(r.k),
            format(r.sigma, ".6g"),
            format(r.eps, ".6g"),
            str(r.N),
            _fmt(rep.err_energy if rep else None, ".6g"),
            _fmt(rep.err_balanced if rep else None, ".6g"),
            _fmt(rep.err_l2_u if rep else None, ".6g"),
            _fmt(rep.err_linf_u if rep else None, ".6g"),
            _fmt(r.rs_energy, ".2f"),
            _fmt(r.rp_energy, ".2f"),
            _fmt(r.rs_balanced, ".2f"),
            _fmt(r.rp_balanced, ".2f"),
            r.status,
        ]))
    return "\n".join(lines) + "\n"


def records_to_table(records: list[ConvergenceRecord]) -> str:
    """Aligned text table: one block per degree, rows over N, per-eps columns
    of balanced-norm error with both observed rates."""
    out = []
    degrees = sorted({r.k for r in records})
    for k in degrees:
        recs_k = [r for r in records if r.k == k]
        eps_vals = sorted({r.eps for r in recs_k}, reverse=True)
        n_vals = sorted({r.N for r in recs_k})
        header = f"k = {k}  (sigma = {recs_k[0].sigma:g})"
        out.append(header)
        cols = "".join(f"{f'eps={e:.0e}':>28s}" for e in eps_vals)
        out.append(f"{'N':>6s}" + cols)
        sub = "".join(f"{'err_B':>12s}{'r_s':>8s}{'r_p':>8s}" for _ in eps_vals)
        out.append(f"{'':>6s}" + sub)
        index = {(r.eps, r.N): r for r in recs_k}
        for n in n_vals:
            row = [f"{n:>6d}"]
            for e in eps_vals:
                r = index.get((e, n))
                if r is None or r.report is None:
                    row.append(f"{'--':>12s}{'--':>8s}{'--':>8s}")
                    continue
                rs = f"{r.rs_balanced:.2f}" if r.rs_balanced is not None else "--"
                rp = f"{r.rp_balanced:.2f}" if r.rp_balanced is not None else "--"
                row.append(f"{r.report.err_balanced:>12.4e}{rs:>8s}{rp:>8s}")
            out.append("".join(row))
        out.append("")
    return "\n".join(out)
