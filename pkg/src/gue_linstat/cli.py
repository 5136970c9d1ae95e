"""``gue-linstat`` experiment driver.

Each command writes one report (JSON by default, CSV on request) holding the
full configuration, one row per degree, and any fitted constants. Reports
are deterministic: the same arguments produce byte-identical output whatever
``--workers`` is. Wall-clock time is only recorded with ``--timing``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, hermite, kernel, montecarlo, testfns, variance
from .errors import NumericalError

SCHEMA = "gue-linstat/1"
COMMANDS = ("variance-table", "clt-run", "necessity-demo", "bounds-check",
            "correlation-check", "semicircle-check")

DEFAULT_F = {
    "variance-table": "identity",
    "clt-run": "bump",
    "necessity-demo": "step",
    "bounds-check": "identity",
    "correlation-check": "identity",
    "semicircle-check": "identity",
}
DEFAULT_N = {
    "variance-table": [50],
    "clt-run": [100],
    "necessity-demo": [16, 64, 256, 1024],
    "bounds-check": [10, 20, 40, 80, 160, 320, 400],
    "correlation-check": [5, 20],
    "semicircle-check": [20, 80, 320],
}
ENVELOPE_POINTS = (-1.99, -1.5, 0.0, 1.5, 1.9, 1.99)
REPRODUCING_PAIRS = ((0.0, 0.0), (1.0, -1.0))

logger = logging.getLogger("gue_linstat")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    f_id: str
    n_list: tuple
    m_grid: int
    m_samples: int
    seed: int
    delta: float
    out_format: str
    out_path: str = None
    workers: int = 1

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ConfigError("degrees must be positive")
        if self.m_grid < 1 or self.m_samples < 1 or self.workers < 1:
            raise ConfigError("grid size, sample count and workers must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta must lie in (0, 1)")
        if self.out_format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        try:
            testfns.builtin(self.f_id)
        except (KeyError, ValueError) as exc:
            raise ConfigError(str(exc)) from None


def _num(x):
    """JSON-safe float (non-finite values become strings)."""
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def _variance_table(cfg, f):
    rows = []
    v_quad, q_err = variance.v_gue(f, max(cfg.m_grid, variance.M_LIMIT))
    v_cheb = variance.v_gue_cheb(f)
    v_tail = variance.v_gue_cheb_tail(f)
    for n in cfg.n_list:
        rep = variance.variance_report(f, n, cfg.m_grid, max(cfg.m_grid, variance.M_LIMIT),
                                       delta=cfg.delta)
        rows.append({
            "n": n,
            "var_exact": _num(rep.var_exact),
            "error": _num(rep.var_exact_error),
            "var_psi": _num(rep.var_psi),
            "v_limit_quad": _num(v_quad),
            "v_limit_quad_error": _num(q_err),
            "v_limit_cheb": _num(v_cheb),
            "v_limit_cheb_tail": _num(v_tail),
            "known_v": f.known_v,
            "edge_fraction": _num(rep.edge_fraction),
            "delta": cfg.delta,
            "provenance": "formula",
        })
    return rows, {}


def _clt_run(cfg, f):
    rows = []
    v_pred, v_err = variance.v_gue(f, max(cfg.m_grid, variance.M_LIMIT))
    for n in cfg.n_list:
        summary = montecarlo.linear_statistic_samples(f, n, cfg.m_samples, cfg.seed,
                                                      v_reference=v_pred, workers=cfg.workers,
                                                      progress=True)
        exact_var = variance.exact_variance(f, n, cfg.m_grid)
        diag = montecarlo.clt_diagnostics(summary, v_pred) if v_pred > 0 and summary.m >= 50 else None
        rows.append({
            "n": n,
            "samples": summary.m,
            "mean": _num(summary.mean),
            "mean_exact": _num(variance.expectation(f, n, cfg.m_grid)),
            "variance": _num(summary.variance),
            "error": _num(summary.variance * math.sqrt(2.0 / max(1, summary.m - 1))),
            "var_exact": _num(exact_var),
            "v_predicted": _num(v_pred),
            "v_predicted_error": _num(v_err),
            "skewness": _num(summary.skewness),
            "excess_kurtosis": _num(summary.excess_kurtosis),
            "ks_distance": _num(summary.ks_distance),
            "ks_pvalue": None if diag is None else _num(diag.ks_pvalue),
            "provenance": "monte_carlo",
        })
    return rows, {}


def _necessity_demo(cfg, f):
    table = variance.variance_growth(f, sorted(set(cfg.n_list)), cfg.m_grid)
    rows = []
    for n, v in table:
        _, err = variance.exact_variance(f, n, cfg.m_grid, with_error=True)
        rows.append({"n": n, "var_exact": _num(v), "error": _num(err), "provenance": "formula"})
    fitted = {}
    if len(table) >= 2:
        logn = np.log([n for n, _ in table])
        vals = np.array([v for _, v in table])
        slope, intercept = np.polyfit(logn, vals, 1)
        pred = slope * logn + intercept
        ss_res = float(np.sum((vals - pred) ** 2))
        ss_tot = float(np.sum((vals - vals.mean()) ** 2))
        fitted = {"log_slope": _num(slope), "log_intercept": _num(intercept),
                  "log_fit_r2": _num(1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0),
                  "strictly_increasing": bool(np.all(np.diff(vals) > 0))}
    return rows, fitted


def _bounds_check(cfg, f):
    rows = []
    sup_all = []
    for n in cfg.n_list:
        psi_sq, cross = hermite.bulk_sup(n)
        env_sup = hermite.envelope_ratio_sup(n)
        env_pts = float(np.max(hermite.envelope_ratio(n, np.array(ENVELOPE_POINTS))))
        sup_all.append(env_pts)
        rows.append({"n": n, "bulk_sup_psi_sq": _num(psi_sq), "bulk_sup_cross": _num(cross),
                     "envelope_ratio_sup": _num(env_sup), "envelope_ratio_points": _num(env_pts),
                     "error": "exact", "provenance": "formula"})
    fitted = {"envelope_C": _num(max(r["envelope_ratio_sup"] for r in rows)),
              "envelope_C_points": _num(max(sup_all))}
    top = max(cfg.n_list)
    octave = [r["bulk_sup_psi_sq"] for r in rows if r["n"] * 2 >= top]
    if octave:
        fitted["bulk_sup_top_octave_spread"] = _num(max(octave) / min(octave) - 1.0)
    return rows, fitted


def _correlation_check(cfg, f):
    rows = []
    for n in cfg.n_list:
        ctx = kernel.KernelContext(n)
        trace = kernel.kernel_trace(ctx)
        repro = max(abs(kernel.reproduced(ctx, a, b) - kernel.kernel(ctx, a, b))
                    for a, b in REPRODUCING_PAIRS)
        row = {"n": n, "trace": _num(trace), "trace_rel_error": _num(abs(trace / n - 1.0)),
               "reproducing_residual": _num(repro),
               "p2_repeated": _num(kernel.correlation(ctx, [0.7, 0.7])),
               "cd_vs_direct": None, "error": "exact", "provenance": "formula"}
        if n <= 20:
            a = np.array([0.0, 1.0, 2.0, 0.3, -1.4])
            b = np.array([0.5, -1.0, 2.0, 1.3, -1.4])
            direct = kernel.kernel_direct_sum(n, a, b)
            cd = kernel.kernel(ctx, a, b)
            row["cd_vs_direct"] = _num(np.max(np.abs(cd - direct) / np.maximum(np.abs(direct), 1e-300)))
        rows.append(row)
    return rows, {}


def _semicircle_check(cfg, f):
    rows = []
    for n in cfg.n_list:
        f1, l1 = variance.semicircle_functional_1(f, n, cfg.m_grid)
        f2, l2 = variance.semicircle_functional_2(f, n, cfg.m_grid)
        one = lambda x, y: np.ones_like(x)
        p2, pl = variance.psi2d_functional(one, n, cfg.m_grid)
        p2_sq, _ = variance.psi2d_functional(one, n, cfg.m_grid, domain="square")
        rows.append({"n": n, "functional_1": _num(f1), "functional_1_limit": _num(l1),
                     "functional_2": _num(f2), "functional_2_limit": _num(l2),
                     "psi2d_one": _num(p2), "psi2d_one_square": _num(p2_sq),
                     "psi2d_one_limit": _num(pl),
                     "error": _num(abs(f1 - l1) + abs(f2 - l2)), "provenance": "quadrature"})
    return rows, {}


_RUNNERS = {
    "variance-table": _variance_table,
    "clt-run": _clt_run,
    "necessity-demo": _necessity_demo,
    "bounds-check": _bounds_check,
    "correlation-check": _correlation_check,
    "semicircle-check": _semicircle_check,
}


def build_report(cfg: ExperimentConfig, timing=False):
    cfg.validate()
    f = testfns.builtin(cfg.f_id)
    t0 = time.perf_counter()
    rows, fitted = _RUNNERS[cfg.command](cfg, f)
    config = asdict(cfg)
    config["n_list"] = list(cfg.n_list)
    config.pop("out_path")
    config.pop("workers")  # results never depend on it
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": cfg.command,
        "config": config,
        "rows": rows,
        "fitted_constants": fitted,
        "runtime_seconds": round(time.perf_counter() - t0, 3) if timing else None,
    }


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    rows = report["rows"]
    fields = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    writer = csv.DictWriter(buf, fieldnames=["command"] + fields, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({"command": report["command"], **r})
    return buf.getvalue()


def run(cfg: ExperimentConfig, timing=False):
    """Run one experiment and write its report; return the exit code."""
    try:
        report = build_report(cfg, timing=timing)
    except ConfigError as exc:
        print(f"gue-linstat: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"gue-linstat: numerical failure: {exc}", file=sys.stderr)
        return 3
    text = render(report, cfg.out_format)
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _int_list(text):
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def make_parser():
    p = argparse.ArgumentParser(prog="gue-linstat",
                                description="Linear statistics of the GUE: exact variance, "
                                            "limiting variance, and Monte Carlo CLT checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--f", dest="f_id", default=None, help="catalog id of the test function")
    p.add_argument("--n", dest="n_list", type=_int_list, default=None,
                   help="comma-separated degrees, e.g. 16,64,256")
    p.add_argument("--grid", dest="m_grid", type=int, default=variance.M_FINITE)
    p.add_argument("--samples", dest="m_samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument("--format", dest="out_format", choices=("json", "csv"), default="json")
    p.add_argument("--out", dest="out_path", default=None)
    p.add_argument("--workers", type=int, default=1, help="threads for Monte Carlo sampling")
    p.add_argument("--timing", action="store_true", help="record wall-clock runtime in the report")
    p.add_argument("-q", "--quiet", action="store_true", help="no progress on stderr")
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(message)s")
    cfg = ExperimentConfig(
        command=args.command,
        f_id=args.f_id or DEFAULT_F[args.command],
        n_list=args.n_list or tuple(DEFAULT_N[args.command]),
        m_grid=args.m_grid,
        m_samples=args.m_samples,
        seed=args.seed,
        delta=args.delta,
        out_format=args.out_format,
        out_path=args.out_path,
        workers=args.workers,
    )
    return run(cfg, timing=args.timing)


if __name__ == "__main__":
    sys.exit(main())
