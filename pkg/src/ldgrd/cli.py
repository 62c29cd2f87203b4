"""Command-line driver for convergence sweeps."""

from __future__ import annotations

import argparse
import sys

from .study import StudyConfig, records_to_csv, records_to_table, run_study


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in text.split(",") if s.strip())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(s) for s in text.split(",") if s.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldg-study",
        description="Convergence study for the LDG reaction-diffusion solver "
                    "on layer-adapted meshes.",
    )
    parser.add_argument("--dim", type=int, choices=(1, 2), default=1)
    parser.add_argument("--degree", type=_int_list, default=(1,),
                        help="comma-separated polynomial degrees, e.g. 1,2,3")
    parser.add_argument("--eps", type=_float_list, default=(1e-8,),
                        help="comma-separated perturbation parameters")
    parser.add_argument("--N", type=_int_list, default=(32, 64, 128),
                        help="comma-separated cell counts (multiples of 4)")
    parser.add_argument("--sigma", default="k+1",
                        help="mesh grading constant; the default rule 'k+1' "
                             "ties it to the degree")
    parser.add_argument("--problem", default="layer1d",
                        choices=("layer1d", "poly1d", "layer2d", "poly2d"))
    parser.add_argument("--flux", default="paper", choices=("paper", "classic"),
                        help="'classic' drops the interior jump penalty")
    parser.add_argument("--format", dest="fmt", default="table", choices=("csv", "table"))
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    sigma = None if str(args.sigma).strip() == "k+1" else float(args.sigma)
    try:
        cfg = StudyConfig(
            dim=args.dim,
            degrees=tuple(args.degree),
            eps_list=tuple(args.eps),
            n_list=tuple(args.N),
            sigma=sigma,
            problem=args.problem,
            flux=args.flux,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    records = run_study(cfg)
    text = records_to_csv(records) if args.fmt == "csv" else records_to_table(records)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    failures = [r for r in records if r.status != "ok"]
    for r in failures:
        print(f"case k={r.k} eps={r.eps:g} N={r.N} failed: {r.status} {r.detail}",
              file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
