"""Command-line harness: deterministic CSV experiments tying predictor to solver.

Commands: k2, predict, solve, sweep, scan, lemma, gauge-check, keps.
Every command is a pure function of (config file, seed) to output bytes:
fixed scientific formatting, LF endings, no wall-clock or locale input,
so repeated runs are byte-identical and diffable.

Exit codes: 0 success, 2 configuration problems, 3 numerical
non-convergence in the single-shot `solve` command.  Sweeps never abort on
a bad record; they flag it and keep going.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import asymptotics as asym
from . import solver as slv
from .averaging import DEFAULT_QUADRATURE, decay_order_fit
from .config import ConfigError, ExperimentConfig, load_config
from .gauge import build_gauge, default_catalog, identity_residual

CSV_HEADER = (
    "eps,k2_re,k2_im,lambda_pred_re,lambda_pred_im,"
    "lambda_num_re,lambda_num_im,rel_err,remainder_ratio,verdict,converged"
)

_THEOREM_COMMANDS = frozenset({"k2", "predict", "solve", "sweep", "scan", "gauge-check", "keps"})


def _fmt(x: float) -> str:
    return "%.16e" % (float(x) + 0.0)  # the add folds negative zero into plain zero


@dataclass(frozen=True)
class SweepRecord:
    eps: float
    k2: complex
    lambda_pred: complex
    lambda_num: Optional[complex]
    rel_err: Optional[float]
    remainder_ratio: Optional[float]
    verdict: str
    converged: Optional[bool]

    def __post_init__(self) -> None:
        have_num = self.lambda_num is not None
        if (self.rel_err is not None) != have_num or (self.remainder_ratio is not None) != have_num:
            raise ValueError("rel_err and remainder_ratio must be present exactly when lambda_num is")


@dataclass(frozen=True)
class SweepSummary:
    slope: Optional[float]
    mean_remainder_ratio: Optional[float]
    ratio_spread: Optional[float]


def _record_row(r: SweepRecord) -> str:
    cells = [
        _fmt(r.eps),
        _fmt(r.k2.real),
        _fmt(r.k2.imag),
        _fmt(r.lambda_pred.real),
        _fmt(r.lambda_pred.imag),
        _fmt(r.lambda_num.real) if r.lambda_num is not None else "",
        _fmt(r.lambda_num.imag) if r.lambda_num is not None else "",
        _fmt(r.rel_err) if r.rel_err is not None else "",
        _fmt(r.remainder_ratio) if r.remainder_ratio is not None else "",
        r.verdict,
        ("1" if r.converged else "0") if r.converged is not None else "",
    ]
    return ",".join(cells)


def emit_csv(records: Sequence[SweepRecord], destination=None, summary: SweepSummary | None = None) -> bytes:
    """Render records (and an optional summary as # comments) to CSV bytes."""
    lines = [CSV_HEADER]
    lines.extend(_record_row(r) for r in records)
    if summary is not None:
        lines.append("# slope=" + (_fmt(summary.slope) if summary.slope is not None else ""))
        lines.append(
            "# mean_remainder_ratio="
            + (_fmt(summary.mean_remainder_ratio) if summary.mean_remainder_ratio is not None else "")
        )
        lines.append(
            "# ratio_spread=" + (_fmt(summary.ratio_spread) if summary.ratio_spread is not None else "")
        )
    data = ("\n".join(lines) + "\n").encode("utf-8")
    if destination is not None:
        _write_bytes(destination, data)
    return data


def _write_bytes(destination, data: bytes) -> None:
    if hasattr(destination, "write"):
        destination.write(data)
        return
    try:
        with open(destination, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(f"failed writing {destination}: {exc}") from exc


def _solve_record(
    V,
    eps: float,
    k2: complex,
    verdict: str,
    exists: bool,
    solver_cfg: slv.SolverConfig,
) -> SweepRecord:
    lam_pred = asym.predict_lambda(k2, eps)
    lam_num = None
    rel_err = None
    ratio = None
    converged: Optional[bool] = None
    try:
        res = slv.find_bound_state(V, eps, k2_hint=k2, cfg=solver_cfg)
    except Exception:
        res = None
        converged = False
    else:
        if res is not None:
            lam_num = res.eigenvalue
            rel_err = abs(lam_num - lam_pred) / abs(lam_pred)
            ratio = abs(lam_num - lam_pred) / eps**5
            converged = res.converged
        else:
            # no admissible root; for the Absent branch this is the expected
            # certification, for Exists it is a failed solve
            converged = not exists
    return SweepRecord(
        eps=eps,
        k2=k2,
        lambda_pred=lam_pred,
        lambda_num=lam_num,
        rel_err=rel_err,
        remainder_ratio=ratio,
        verdict=verdict,
        converged=converged,
    )


def run_sweep(
    cfg: ExperimentConfig,
    solver_cfg: slv.SolverConfig | None = None,
) -> tuple[list[SweepRecord], SweepSummary]:
    """One record per configured eps; k2 is computed once for the whole sweep."""
    if solver_cfg is None:
        solver_cfg = slv.SolverConfig(points_per_fast_period=cfg.points_per_period)
    V = cfg.build_potential()
    rep = asym.compute_k2(V)
    verdict = str(rep.classification)
    exists = rep.classification is asym.Existence.EXISTS
    records = [
        _solve_record(V, eps, rep.value, verdict, exists, solver_cfg) for eps in cfg.epsilons
    ]

    fit_pts = [
        r for r in records if r.lambda_num is not None and r.converged and abs(r.lambda_num) > 0
    ]
    slope = None
    if len(fit_pts) >= 2:
        xs = np.log([r.eps for r in fit_pts])
        ys = np.log([abs(r.lambda_num) for r in fit_pts])
        slope = float(np.polyfit(xs, ys, 1)[0])
    ratios = [r.remainder_ratio for r in fit_pts if r.remainder_ratio is not None]
    mean_ratio = float(np.mean(ratios)) if ratios else None
    spread = None
    if ratios and min(ratios) > 0:
        spread = max(ratios) / min(ratios)
    return records, SweepSummary(slope=slope, mean_remainder_ratio=mean_ratio, ratio_spread=spread)


def _table(header: str, rows: list[tuple[str, str]], comments: list[str]) -> bytes:
    lines = [header]
    lines.extend(f"{a},{b}" for a, b in rows)
    lines.extend(comments)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _cmd_k2(cfg: ExperimentConfig) -> bytes:
    rep = asym.compute_k2(cfg.build_potential())
    rows = [
        ("k2_re", _fmt(rep.value.real)),
        ("k2_im", _fmt(rep.value.imag)),
        ("quadrature_re", _fmt(rep.by_quadrature.real)),
        ("quadrature_im", _fmt(rep.by_quadrature.imag)),
        ("closed_form_re", _fmt(rep.by_closed_form.real)),
        ("closed_form_im", _fmt(rep.by_closed_form.imag)),
        ("agreement", _fmt(rep.agreement)),
        ("classification", str(rep.classification)),
        ("flagged", "1" if rep.flagged else "0"),
    ]
    return _table("quantity,value", rows, [])


def _cmd_predict(cfg: ExperimentConfig) -> bytes:
    rep = asym.compute_k2(cfg.build_potential())
    verdict = str(rep.classification)
    records = [
        SweepRecord(
            eps=eps,
            k2=rep.value,
            lambda_pred=asym.predict_lambda(rep.value, eps),
            lambda_num=None,
            rel_err=None,
            remainder_ratio=None,
            verdict=verdict,
            converged=None,
        )
        for eps in cfg.epsilons
    ]
    return emit_csv(records)


def _cmd_solve(cfg: ExperimentConfig, solver_cfg: slv.SolverConfig) -> tuple[bytes, int]:
    V = cfg.build_potential()
    rep = asym.compute_k2(V)
    eps = cfg.epsilons[0]
    record = _solve_record(
        V, eps, rep.value, str(rep.classification), rep.classification is asym.Existence.EXISTS, solver_cfg
    )
    data = emit_csv([record])
    failed = rep.classification is asym.Existence.EXISTS and (
        record.lambda_num is None or not record.converged
    )
    return data, (3 if failed else 0)


def _cmd_sweep(cfg: ExperimentConfig, solver_cfg: slv.SolverConfig) -> bytes:
    records, summary = run_sweep(cfg, solver_cfg)
    return emit_csv(records, summary=summary)


def _cmd_scan(cfg: ExperimentConfig, solver_cfg: slv.SolverConfig) -> bytes:
    V = cfg.build_potential()
    eps = cfg.epsilons[0]
    result = slv.scan_roots(V, eps, cfg=solver_cfg)
    rows = [(_fmt(k), _fmt(lam)) for k, lam in zip(result.kappas, result.eigenvalues)]
    comments = [
        f"# count={result.count}",
        "# window_low=" + _fmt(result.window[0]),
        "# window_high=" + _fmt(result.window[1]),
        f"# samples={result.samples}",
    ]
    return _table("kappa,eigenvalue", rows, comments)


def _cmd_lemma(cfg: ExperimentConfig) -> bytes:
    u = cfg.build_potential()
    fit = decay_order_fit(u, list(cfg.epsilons), DEFAULT_QUADRATURE)
    rows = [(_fmt(e), _fmt(err)) for e, err in zip(fit.epsilons, fit.errors)]
    comments = [
        "# fitted_order=" + _fmt(fit.fitted_order),
        "# floor=" + _fmt(fit.floor),
        f"# floor_limited={1 if fit.floor_flag else 0}",
        f"# points_used={fit.used}",
    ]
    return _table("eps,remainder", rows, comments)


def _cmd_gauge_check(cfg: ExperimentConfig) -> bytes:
    V = cfg.build_potential()
    catalog = default_catalog()
    rows = []
    worst = 0.0
    for eps in cfg.epsilons:
        g = build_gauge(V, eps)
        x0, x1 = V.support_hull
        grid = np.arange(x0, x1 + eps / 80.0, eps / 40.0)
        for probe in catalog:
            res = identity_residual(g, probe, grid)
            worst = max(worst, res)
            rows.append((f"eps={eps:.6g}:{probe.label}", _fmt(res)))
    return _table("probe,residual", rows, ["# max_residual=" + _fmt(worst)])


def _cmd_keps(cfg: ExperimentConfig) -> bytes:
    V = cfg.build_potential()
    reports = [asym.compute_k_eps(V, eps) for eps in cfg.epsilons]
    header = "eps,m1_re,m1_im,m2_re,m2_im,keps_re,keps_im"
    lines = [header]
    for r in reports:
        lines.append(
            ",".join(
                [
                    _fmt(r.eps),
                    _fmt(r.m1.real),
                    _fmt(r.m1.imag),
                    _fmt(r.m2.real),
                    _fmt(r.m2.imag),
                    _fmt(r.k_eps.real),
                    _fmt(r.k_eps.imag),
                ]
            )
        )
    comments = []
    if len(reports) >= 3:
        c1, c2 = asym.fit_k_eps_coefficients(reports)
        rep2 = asym.compute_k2(V)
        comments = [
            "# c1_re=" + _fmt(c1.real),
            "# c1_im=" + _fmt(c1.imag),
            "# c2_re=" + _fmt(c2.real),
            "# c2_im=" + _fmt(c2.imag),
            "# k2_re=" + _fmt(rep2.value.real),
            "# k2_im=" + _fmt(rep2.value.imag),
        ]
    return ("\n".join(lines + comments) + "\n").encode("utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscispec",
        description="Emerging-eigenvalue experiments: asymptotic prediction vs direct solve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("k2", "compute the k2 constant by both routes and classify existence"),
        ("predict", "tabulate the leading-order eigenvalue prediction per eps"),
        ("solve", "locate the bound state at the first configured eps"),
        ("sweep", "full eps sweep: prediction, solve, remainder diagnostics"),
        ("scan", "count mismatch roots in the kappa window at the first eps"),
        ("lemma", "tabulate the oscillatory-average remainder decay in eps"),
        ("gauge-check", "residual of the gauge identity over the probe catalog"),
        ("keps", "tabulate the finite-eps coefficient chain and its eps-fit"),
    ]:
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="path to the experiment config file")
        p.add_argument("--out", default=None, help="output path (default: standard output)")
        p.add_argument("--seed", type=int, default=None, help="seed recorded for randomized suites")
        p.add_argument(
            "--points-per-period",
            type=int,
            default=None,
            help="override the solver sampling density per fast period",
        )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, require_zero_mean=args.command in _THEOREM_COMMANDS)
        if args.points_per_period is not None:
            if args.points_per_period < 20:
                raise ConfigError(["--points-per-period must be at least 20"])
            cfg = ExperimentConfig(
                modes=cfg.modes,
                support=cfg.support,
                epsilons=cfg.epsilons,
                points_per_period=args.points_per_period,
                seed=cfg.seed if args.seed is None else args.seed,
            )
        elif args.seed is not None:
            cfg = ExperimentConfig(
                modes=cfg.modes,
                support=cfg.support,
                epsilons=cfg.epsilons,
                points_per_period=cfg.points_per_period,
                seed=args.seed,
            )
        solver_cfg = slv.SolverConfig(points_per_fast_period=cfg.points_per_period)

        code = 0
        if args.command == "k2":
            data = _cmd_k2(cfg)
        elif args.command == "predict":
            data = _cmd_predict(cfg)
        elif args.command == "solve":
            data, code = _cmd_solve(cfg, solver_cfg)
        elif args.command == "sweep":
            data = _cmd_sweep(cfg, solver_cfg)
        elif args.command == "scan":
            data = _cmd_scan(cfg, solver_cfg)
        elif args.command == "lemma":
            data = _cmd_lemma(cfg)
        elif args.command == "gauge-check":
            data = _cmd_gauge_check(cfg)
        else:
            data = _cmd_keps(cfg)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        try:
            _write_bytes(args.out, data)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
