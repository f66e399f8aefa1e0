"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure
(including a failed invariance check).
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .block_solver import BlockSolveError
from .core import (CovMatrix, DegenerateQuadraticError, NotPositiveDefiniteError,
                   read_matrix_csv, write_matrix_csv)
from .descent import DescentConfig, PathResult, default_rho_grid, regularization_path
from .metrics import evaluate, holdout_loglik
from .selection import scores, select
from .simgen import KINDS, Scenario, make_truth, sample_cov, sample_gaussian

log = logging.getLogger("pcglasso")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class DataError(ValueError):
    """Input files that cannot be used."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ input

def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_data_csv(path) -> tuple[np.ndarray, list[str]]:
    """Observations in rows; a first row with any non-numeric cell is a header."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{path}: empty file")
    names = [f"V{k + 1}" for k in range(len(rows[0]))]
    if not all(_is_number(c) for c in rows[0]):
        names = [c.strip() for c in rows[0]]
        rows = rows[1:]
    p = len(names)
    if p == 0:
        raise DataError(f"{path}: no columns")
    for k, r in enumerate(rows):
        if len(r) != p:
            raise DataError(f"{path}: row {k + 1} has {len(r)} fields, expected {p}")
    try:
        x = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric entry ({exc})") from None
    if x.shape[0] < 2:
        raise DataError(f"{path}: need at least two observations")
    if not np.all(np.isfinite(x)):
        raise DataError(f"{path}: non-finite entry")
    const = np.flatnonzero(np.ptp(x, axis=0) == 0)
    if const.size:
        raise DataError(f"{path}: column {names[const[0]]!r} has zero variance")
    return x, names


def _cov_from_args(args) -> tuple[CovMatrix, list[str], np.ndarray | None]:
    if args.input:
        x, names = read_data_csv(args.input)
        return sample_cov(x), names, x
    if args.matrix:
        if args.n is None:
            raise DataError("--matrix needs --n (the sample size)")
        try:
            s = read_matrix_csv(args.matrix)
        except (OSError, ValueError) as exc:
            raise DataError(str(exc)) from None
        try:
            cov = CovMatrix(s, args.n)
        except ValueError as exc:
            raise DataError(f"{args.matrix}: {exc}") from None
        return cov, [f"V{k + 1}" for k in range(cov.p)], None
    raise DataError("one of --input or --matrix is required")


def _config(args) -> DescentConfig:
    return DescentConfig(epsilon=args.epsilon, max_sweeps=args.max_sweeps, rng_seed=args.seed)


def _grid(cov: CovMatrix, args) -> list[float]:
    if cov.p == 1:
        return [0.0]
    return default_rho_grid(cov, args.rho_count, args.rho_min_ratio)


def _check_n(cov: CovMatrix) -> None:
    if cov.n <= 4:
        raise DataError(f"need more than 4 observations, got {cov.n}")


def _outdir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


# ------------------------------------------------------------------ output

def write_path_csv(path, result: PathResult) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("rho,i,j,delta_hat\n")
        for rho, est in zip(result.rhos, result.estimates):
            p = est.p
            for i in range(p):
                for j in range(i + 1, p):
                    fh.write(f"{_fmt(rho)},{i + 1},{j + 1},{_fmt(est.delta[i, j])}\n")


def path_svg(result: PathResult, truth: np.ndarray | None = None,
             width: int = 640, height: int = 400) -> str:
    """Line plot of every ``delta_ij`` against ``rho`` as an SVG 1.1 document.

    Pairs that are nonzero in ``truth`` are drawn in red on top of the rest.
    """
    rhos = np.asarray(result.rhos, dtype=float)
    d = np.array([e.delta for e in result.estimates])
    p = d.shape[1]
    m = 50
    w, h = width - 2 * m, height - 2 * m
    xmax = rhos[-1] if rhos[-1] > 0 else 1.0
    iu, ju = np.triu_indices(p, 1)
    vals = d[:, iu, ju] if iu.size else np.zeros((len(rhos), 0))
    ymax = max(float(np.max(np.abs(vals))) if vals.size else 0.0, 1e-12)

    def sx(r):
        return m + w * r / xmax

    def sy(v):
        return m + h * (0.5 - 0.5 * v / ymax)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="{m}" y="{m}" width="{w}" height="{h}" fill="none" stroke="black"/>',
        f'<line x1="{m}" y1="{sy(0):.3f}" x2="{m + w}" y2="{sy(0):.3f}" '
        'stroke="#999999" stroke-dasharray="4 3"/>',
        f'<text x="{m + w / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        'font-size="14">rho</text>',
        f'<text x="14" y="{m + h / 2:.1f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 14 {m + h / 2:.1f})">partial correlation (-delta)</text>',
        f'<text x="{m - 4}" y="{m + 4}" text-anchor="end" font-size="11">{ymax:.3g}</text>',
        f'<text x="{m - 4}" y="{m + h + 4}" text-anchor="end" font-size="11">{-ymax:.3g}</text>',
        f'<text x="{m}" y="{m + h + 16}" text-anchor="middle" font-size="11">0</text>',
        f'<text x="{m + w}" y="{m + h + 16}" text-anchor="middle" font-size="11">{xmax:.3g}</text>',
    ]
    signal = np.zeros(iu.size, dtype=bool)
    if truth is not None:
        signal = np.asarray(truth)[iu, ju] != 0
    for highlight in (False, True):
        colour, sw = ("#d62728", 1.6) if highlight else ("#7f7f7f", 0.8)
        for k in np.flatnonzero(signal == highlight):
            pts = " ".join(f"{sx(r):.3f},{sy(-v):.3f}" for r, v in zip(rhos, vals[:, k]))
            lines.append(f'<polyline fill="none" stroke="{colour}" stroke-width="{sw}" '
                         f'points="{pts}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands

def cmd_fit(args) -> int:
    cov, names, _ = _cov_from_args(args)
    _check_n(cov)
    out = _outdir(args)
    result = regularization_path(cov, _grid(cov, args), _config(args))
    sc = scores(result, cov, args.gamma)
    ib, ie = select(result, cov, args.gamma)
    write_matrix_csv(out / "theta_bic.csv", result.estimates[ib].precision())
    write_matrix_csv(out / "theta_ebic.csv", result.estimates[ie].precision())
    with open(out / "path_summary.csv", "w", newline="") as fh:
        fh.write("rho,edges,loglik,bic,ebic,converged\n")
        for s, ok in zip(sc, result.converged):
            fh.write(f"{_fmt(s.rho)},{s.edges},{_fmt(s.loglik)},{_fmt(s.bic)},"
                     f"{_fmt(s.ebic)},{int(ok)}\n")
    for label, k in (("BIC", ib), ("EBIC", ie)):
        est = result.estimates[k]
        print(f"{label}: rho={result.rhos[k]:.6g} edges={est.edges()}")
        if est.p == 1:
            print(f"  precision of {names[0]}: {est.theta[0]:.6g}")
        for i in range(est.p):
            for j in range(i + 1, est.p):
                if est.delta[i, j] != 0:
                    print(f"  {names[i]} -- {names[j]}: partial correlation "
                          f"{-est.delta[i, j]:.6f}")
    if not all(result.converged):
        log.warning("%d of %d fits hit --max-sweeps", result.converged.count(False),
                    len(result.converged))
    return EXIT_OK


def cmd_path(args) -> int:
    cov, _, _ = _cov_from_args(args)
    _check_n(cov)
    truth = None
    if args.truth:
        try:
            truth = read_matrix_csv(args.truth)
        except (OSError, ValueError) as exc:
            raise DataError(str(exc)) from None
        if truth.shape != (cov.p, cov.p):
            raise DataError(f"{args.truth}: truth is {truth.shape}, data has p={cov.p}")
    out = _outdir(args)
    result = regularization_path(cov, _grid(cov, args), _config(args))
    write_path_csv(out / "path.csv", result)
    (out / "path.svg").write_text(path_svg(result, truth))
    print(f"wrote {out / 'path.csv'} and {out / 'path.svg'} ({len(result)} rho values)")
    return EXIT_OK


def run_replicate(kind: str, p: int, n: int, seed: int, cfg: DescentConfig,
                  rho_count: int, rho_min_ratio: float, gamma: float) -> dict:
    """One simulated data set, fitted along a path and scored at the BIC choice."""
    truth = make_truth(Scenario(kind, p, seed))
    cov = sample_cov(sample_gaussian(truth, n, seed))
    result = regularization_path(cov, default_rho_grid(cov, rho_count, rho_min_ratio), cfg)
    ib, _ = select(result, cov, gamma)
    m = evaluate(truth, result.estimates[ib])
    return {"seed": seed, "rho": result.rhos[ib], "edges": result.estimates[ib].edges(),
            "kl": m.kl, "fnorm": m.fnorm, "mcc": m.mcc, "sensitivity": m.sensitivity,
            "specificity": m.specificity, "traces": result.traces}


METRIC_COLUMNS = ("kl", "fnorm", "mcc", "sensitivity", "specificity")


def summarize(rows: list[dict]) -> dict[str, tuple[float, float]]:
    """Mean and sample standard deviation per metric (sd is 0 for one row)."""
    out = {}
    for c in METRIC_COLUMNS:
        v = np.array([r[c] for r in rows], dtype=float)
        out[c] = (float(v.mean()), float(v.std(ddof=1)) if v.size > 1 else 0.0)
    return out


def cmd_simulate(args) -> int:
    if args.scenario is None or args.p is None or args.n is None:
        raise DataError("simulate needs --scenario, --p and --n")
    try:
        Scenario(args.scenario, args.p, args.seed)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if args.n <= 4:
        raise DataError("--n must exceed 4")
    if args.reps < 1:
        raise DataError("--reps must be at least 1")
    out = _outdir(args)
    cfg = _config(args)
    jobs = [(args.scenario, args.p, args.n, args.seed + r, cfg, args.rho_count,
             args.rho_min_ratio, args.gamma) for r in range(args.reps)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(run_replicate, *zip(*jobs)))
    else:
        rows = [run_replicate(*j) for j in jobs]
    summ = summarize(rows)
    with open(out / "metrics.csv", "w", newline="") as fh:
        fh.write("replicate,seed,rho,edges," + ",".join(METRIC_COLUMNS) + "\n")
        for r, row in enumerate(rows):
            fh.write(f"{r},{row['seed']},{_fmt(row['rho'])},{row['edges']},"
                     + ",".join(_fmt(row[c]) for c in METRIC_COLUMNS) + "\n")
        fh.write("mean,,,," + ",".join(_fmt(summ[c][0]) for c in METRIC_COLUMNS) + "\n")
        fh.write("sd,,,," + ",".join(_fmt(summ[c][1]) for c in METRIC_COLUMNS) + "\n")
        fh.write("summary,,,," + ",".join(f"{summ[c][0]:.3f} ({summ[c][1]:.3f})"
                                          for c in METRIC_COLUMNS) + "\n")
    print(f"{args.scenario} p={args.p} n={args.n} reps={args.reps}")
    for c in METRIC_COLUMNS:
        print(f"  {c:12s} {summ[c][0]:.3f} ({summ[c][1]:.3f})")
    return EXIT_OK


def cmd_eval(args) -> int:
    xtr, _ = read_data_csv(args.train)
    xte, _ = read_data_csv(args.test)
    if xtr.shape[1] != xte.shape[1]:
        raise DataError(f"train has {xtr.shape[1]} columns, test has {xte.shape[1]}")
    cov = sample_cov(xtr)
    _check_n(cov)
    out = _outdir(args)
    result = regularization_path(cov, _grid(cov, args), _config(args))
    ib, ie = select(result, cov, args.gamma)
    center = xtr.mean(axis=0)
    with open(out / "eval.csv", "w", newline="") as fh:
        fh.write("rho,edges,holdout_loglik,bic_selected,ebic_selected\n")
        for k, (rho, est) in enumerate(zip(result.rhos, result.estimates)):
            ll = holdout_loglik(est, xte, center)
            fh.write(f"{_fmt(rho)},{est.edges()},{_fmt(ll)},{int(k == ib)},{int(k == ie)}\n")
    print(f"wrote {out / 'eval.csv'}; BIC edges={result.estimates[ib].edges()}, "
          f"EBIC edges={result.estimates[ie].edges()}")
    return EXIT_OK


def invariance_report(cov: CovMatrix, d: np.ndarray, rhos, cfg: DescentConfig):
    """Fit ``S`` and ``D S D`` on the same grid.

    Returns ``(max deviation, supports match)``. Deviations are measured as
    ``|A_ij - B_ij| / sqrt(B_ii B_jj)`` between ``A = path(DSD)`` and
    ``B = D^-1 path(S) D^-1``, i.e. relative to the scale of the entry's row
    and column.
    """
    d = np.asarray(d, dtype=float)
    scaled = CovMatrix(cov.s * np.outer(d, d), cov.n)
    a = regularization_path(scaled, rhos, cfg)
    b = regularization_path(cov, rhos, cfg)
    worst = 0.0
    same = True
    for ea, eb in zip(a.estimates, b.estimates):
        A = ea.precision()
        B = eb.precision() / np.outer(d, d)
        diag = np.sqrt(np.abs(np.outer(np.diag(B), np.diag(B))))
        worst = max(worst, float(np.max(np.abs(A - B) / diag)))
        same &= bool(np.array_equal(A == 0, B == 0))
    return worst, same


def cmd_check_invariance(args) -> int:
    cov, _, _ = _cov_from_args(args)
    _check_n(cov)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    d = np.exp(rng.uniform(math.log(0.1), math.log(10.0), cov.p))
    d *= np.where(rng.random(cov.p) < 0.5, -1.0, 1.0)
    worst, same = invariance_report(cov, d, _grid(cov, args), _config(args))
    ok = worst < args.tolerance and same
    print(f"max relative deviation {worst:.3e}; supports match: {'yes' if same else 'no'}")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_NUMERIC


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", default=".", help="directory for output files")
    common.add_argument("--rho-count", type=int, default=50, help="grid size including 0")
    common.add_argument("--rho-min-ratio", type=float, default=0.01,
                        help="smallest positive rho as a fraction of the largest")
    common.add_argument("--gamma", type=float, default=0.5, help="EBIC gamma in [0, 1]")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--epsilon", type=float, default=1e-8, help="convergence threshold")
    common.add_argument("--max-sweeps", type=int, default=500, help="sweep limit per rho")
    common.add_argument("-v", "--verbose", action="store_true")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--input", help="data CSV: rows are observations")
    source.add_argument("--matrix", help="covariance matrix CSV (headerless)")
    source.add_argument("--n", type=int, help="sample size behind --matrix")

    ap = _Parser(prog="pcglasso",
                 description="Sparse partial-correlation estimation of Gaussian graphical models.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("fit", parents=[common, source],
                   help="fit a path and write the BIC and EBIC choices")
    p = sub.add_parser("path", parents=[common, source],
                       help="write the regularisation path as CSV and SVG")
    p.add_argument("--truth", help="true precision matrix CSV; its edges are highlighted")

    p = sub.add_parser("simulate", parents=[common], help="simulation study")
    p.add_argument("--scenario", choices=KINDS)
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = sub.add_parser("eval", parents=[common], help="held-out log-likelihood along a path")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)

    p = sub.add_parser("check-invariance", parents=[common, source],
                       help="compare fits of S and D S D for a random diagonal D")
    p.add_argument("--tolerance", type=float, default=1e-6)
    return ap


COMMANDS = {"fit": cmd_fit, "path": cmd_path, "simulate": cmd_simulate, "eval": cmd_eval,
            "check-invariance": cmd_check_invariance}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.rho_count < 2 or not 0 < args.rho_min_ratio < 1:
        parser.error("--rho-count must be >= 2 and --rho-min-ratio in (0, 1)")
    if not 0 <= args.gamma <= 1:
        parser.error("--gamma must lie in [0, 1]")
    if not args.epsilon > 0 or args.max_sweeps < 1:
        parser.error("--epsilon must be positive and --max-sweeps at least 1")
    try:
        return COMMANDS[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NotPositiveDefiniteError, BlockSolveError, DegenerateQuadraticError,
            FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
