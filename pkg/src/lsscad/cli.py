"""Command-line entry point: ``lsscad {fit,tune,simulate,diagnose}``.

Exit status is 0 on success, 1 for invalid input or configuration and 2 for
numerical failures. Every report echoes the full resolved settings,
defaults included, so a run can be repeated from its output alone.
"""

import argparse
import json
import logging
import math
from pathlib import Path
import sys
import warnings

import numpy as np

from .design import SupportSplit, standardize
from .diagnostics import condition_ratios, eigen_quantities
from .errors import EmptySupportError, NumericalError, ValidationError
from .gcv import default_grid, gcv_score, tune
from .inference import covariance_estimate
from .io import FORMATS, _write_text, dumps, load_dataset, write_fit_report
from .penalty import DEFAULT_A, PenaltyParams
from .simulation import ESTIMATORS, SIM_MAX_ITER, SimulationConfig, run_replications
from .solver import ZERO_RULES, SolverConfig, fit_standardized

log = logging.getLogger(__name__)

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2

REQUIRED = object()


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise ValueError("must be a positive integer")
    return v


def _grid_count(text):
    v = int(text)
    if v < 2:
        raise ValueError("must be an integer >= 2")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise ValueError("must be a nonnegative integer")
    return v


def _positive(text):
    v = float(text)
    if not (math.isfinite(v) and v > 0):
        raise ValueError("must be a positive number")
    return v


def _nonneg(text):
    v = float(text)
    if not (math.isfinite(v) and v >= 0):
        raise ValueError("must be a nonnegative number")
    return v


def _shape(text):
    v = float(text)
    if not (math.isfinite(v) and v > 2):
        raise ValueError("must be a number greater than 2")
    return v


def _unit_interval(text):
    v = float(text)
    if not 0 <= v < 1:
        raise ValueError("must lie in [0, 1)")
    return v


def _open_unit(text):
    v = float(text)
    if not 0 < v < 1:
        raise ValueError("must lie in (0, 1)")
    return v


def _float_list(item):
    def parse(text):
        parts = text if isinstance(text, list) else [p for p in str(text).split(",") if p.strip()]
        if not parts:
            raise ValueError("must be a non-empty comma-separated list")
        return [item(str(p).strip()) for p in parts]
    return parse


def _index_list(text):
    parts = text if isinstance(text, list) else [p for p in str(text).split(",") if p.strip()]
    return sorted({_nonneg_int(str(p).strip()) for p in parts})


def _estimators(text):
    parts = text if isinstance(text, list) else [p.strip() for p in str(text).split(",") if p.strip()]
    bad = [p for p in parts if p not in ESTIMATORS]
    if bad or not parts:
        raise ValueError(f"choose from {','.join(ESTIMATORS)}")
    return [e for e in ESTIMATORS if e in parts]


def _choice(options):
    def parse(text):
        if text not in options:
            raise ValueError(f"choose from {', '.join(options)}")
        return text
    return parse


def _bool(text):
    if isinstance(text, bool):
        return text
    raise ValueError("must be true or false")


# (flag, converter, default); REQUIRED marks options without a default
_DATA = [("--data", str, REQUIRED), ("--response", str, None)]
_OUT = [("--output", str, None), ("--format", _choice(FORMATS), "json")]
_SOLVER = [
    ("--a", _shape, DEFAULT_A),
    ("--tau", _positive, 1e-5),
    ("--max-iter", _positive_int, 500),
    ("--zero-rule", _choice(ZERO_RULES), "gap"),
]
OPTIONS = {
    "fit": _DATA + [("--lambda", _nonneg, REQUIRED)] + _SOLVER + _OUT,
    "tune": _DATA + [
        ("--grid-size", _grid_count, 50),
        ("--lambda-min-ratio", _open_unit, 1e-3),
        ("--a-grid", _float_list(_shape), None),
        ("--cold-start", _bool, False),
        ("--xi-source", _choice(("start", "ols")), "start"),
    ] + _SOLVER + _OUT,
    "simulate": [
        ("--n", _positive_int, REQUIRED),
        ("--p", _positive_int, REQUIRED),
        ("--rho", _unit_interval, REQUIRED),
        ("--reps", _positive_int, 400),
        ("--seed", _nonneg_int, REQUIRED),
        ("--estimators", _estimators, list(ESTIMATORS)),
        ("--noise-sd", _nonneg, 1.0),
        ("--beta", _float_list(float), None),
        ("--grid-size", _grid_count, 50),
        ("--workers", _positive_int, 1),
        ("--a", _shape, DEFAULT_A),
        ("--tau", _positive, 1e-5),
        ("--max-iter", _positive_int, SIM_MAX_ITER),
        ("--zero-rule", _choice(ZERO_RULES), "gap"),
        ("--xi-source", _choice(("start", "ols")), "start"),
    ] + _OUT,
    "diagnose": _DATA + [
        ("--support", _index_list, None),
        ("--k", _nonneg_int, None),
        ("--lambda", _positive, REQUIRED),
        ("--beta-min", _positive, REQUIRED),
    ] + _OUT,
}
_FLAGS_ONLY = {"--cold-start"}


def _key(flag):
    return flag[2:].replace("-", "_")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="lsscad", description="SCAD-penalized least squares.", allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", metavar="{fit,tune,simulate,diagnose}")
    sub.required = True
    helps = {
        "fit": "single SCAD fit at a fixed lambda, with standard errors",
        "tune": "choose lambda by generalized cross validation",
        "simulate": "Monte Carlo comparison of LS, AIC, ORA and SCAD",
        "diagnose": "eigenvalue quantities and condition ratios of a design",
    }
    for name, opts in OPTIONS.items():
        sp = sub.add_parser(name, help=helps[name], allow_abbrev=False)
        for flag, _, default in opts:
            shown = "required" if default is REQUIRED else f"default {default}"
            if flag in _FLAGS_ONLY:
                sp.add_argument(flag, dest=_key(flag), action="store_const", const=True,
                                default=None, help=shown)
            else:
                sp.add_argument(flag, dest=_key(flag), default=None, help=shown)
        sp.add_argument("--config", default=None,
                        help="JSON file of option values keyed by option name")
    return parser


def _read_config(path, command):
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ValidationError(f"--config: file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"--config: {path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ValidationError("--config: top level must be an object")
    known = {_key(f) for f, _, _ in OPTIONS[command]}
    out = {}
    for k, v in raw.items():
        key = k.lstrip("-").replace("-", "_")
        if key not in known:
            raise ValidationError(f"--config: unknown key {k!r} for {command}; "
                                  f"allowed: {', '.join(sorted(known))}")
        out[key] = v
    return out


def resolve_settings(args):
    """Merge command line, config file and defaults; validate every value."""
    command = args.command
    config = _read_config(args.config, command) if args.config else {}
    settings = {}
    for flag, convert, default in OPTIONS[command]:
        key = _key(flag)
        given = getattr(args, key)
        source = flag
        if given is None and key in config:
            given, source = config[key], f"--config key {key!r} ({flag})"
        if given is None:
            if default is REQUIRED:
                raise ValidationError(f"{command}: missing required option {flag}")
            settings[key] = default
            continue
        try:
            value = convert(given if isinstance(given, (list, bool)) else str(given))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{source}: invalid value {given!r}: {exc}") from None
        settings[key] = value
    if command == "diagnose":
        if (settings["support"] is None) == (settings["k"] is None):
            raise ValidationError("diagnose: give exactly one of --support or --k")
    return settings


def _solver(settings, lam=0.0):
    return SolverConfig(PenaltyParams(lam, settings["a"]), settings["tau"], settings["max_iter"],
                        zero_rule=settings["zero_rule"])


def _covariance(fit, s):
    try:
        return covariance_estimate(fit, s)
    except EmptySupportError:
        return None


def _header(command, settings):
    # the output location is not an input to the computation
    return {"command": command, "settings": {k: v for k, v in settings.items() if k != "output"}}


def cmd_fit(settings):
    d = load_dataset(settings["data"], settings["response"])
    s = standardize(d)
    fit = fit_standardized(d, s, _solver(settings, settings["lambda"]))
    cov = _covariance(fit, s)
    return write_fit_report(fit, cov, settings["output"], settings["format"], names=d.names,
                            gcv=gcv_score(fit, s), extra=_header("fit", settings))


def cmd_tune(settings):
    d = load_dataset(settings["data"], settings["response"])
    s = standardize(d)
    grid = default_grid(s, settings["grid_size"], settings["lambda_min_ratio"])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = tune(d, grid, a=settings["a"], solver=_solver(settings),
                   warm_start=not settings["cold_start"], a_grid=settings["a_grid"],
                   xi_source=settings["xi_source"])
    for w in caught:
        log.warning("%s", w.message)
    fit = res.best_fit
    cov = _covariance(fit, s)
    extra = _header("tune", settings)
    extra["best_lambda"] = res.best_lambda
    extra["best_a"] = res.best_a
    extra["all_unconverged"] = res.all_unconverged
    extra["path"] = [
        {"lambda": pt.lam, "a": pt.a, "gcv": pt.gcv if math.isfinite(pt.gcv) else None,
         "effective_params": pt.effective_params if math.isfinite(pt.effective_params) else None,
         "support_size": pt.support_size, "converged": pt.converged}
        for pt in res.path
    ]
    best = [pt for pt in res.path if pt.lam == res.best_lambda and pt.a == res.best_a][0]
    return write_fit_report(fit, cov, settings["output"], settings["format"], names=d.names,
                            gcv=best.gcv, extra=extra)


def _r4(x):
    return "" if x is None or not math.isfinite(x) else f"{x:.4f}"


def simulation_table(report):
    """Per-estimator summary rounded to 4 decimals, one row per true nonzero coefficient."""
    lines = ["estimator,coefficient,bias,sd,mean_se,k_bar,k_mode,exact_recovery,ame_median,failures"]
    beta = np.asarray(report.config["true_beta"])
    nz = np.flatnonzero(beta != 0)
    for name, est in report.estimators.items():
        for i, j in enumerate(nz):
            bias = est.bias[i] if est.bias else None
            sd = est.sd[i] if est.sd else None
            se = est.mean_se[i] if est.mean_se else None
            lines.append(",".join([name, str(j + 1), _r4(bias), _r4(sd), _r4(se), _r4(est.k_bar),
                                   str(est.k_mode), _r4(est.exact_recovery_fraction),
                                   _r4(est.ame_median), str(est.failures)]))
    return "\n".join(lines) + "\n"


def cmd_simulate(settings):
    config = SimulationConfig(
        n=settings["n"], p=settings["p"], rho=settings["rho"], seed=settings["seed"],
        true_beta=None if settings["beta"] is None else tuple(settings["beta"]),
        noise_sd=settings["noise_sd"], replications=settings["reps"], tau=settings["tau"],
        max_iter=settings["max_iter"], grid_size=settings["grid_size"], a=settings["a"],
        estimators=tuple(settings["estimators"]), zero_rule=settings["zero_rule"],
        xi_source=settings["xi_source"])
    report = run_replications(config, workers=settings["workers"])
    if settings["format"] == "csv":
        return _write_text(settings["output"], simulation_table(report))
    doc = _header("simulate", settings)
    doc.update(report.to_dict())
    return _write_text(settings["output"], dumps(doc))


def cmd_diagnose(settings):
    d = load_dataset(settings["data"], settings["response"])
    s = standardize(d)
    if settings["k"] is not None:
        if settings["k"] > d.p:
            raise ValidationError(f"--k {settings['k']} exceeds the covariate count {d.p}")
        split = SupportSplit.prefix(settings["k"], d.p)
    else:
        bad = [j for j in settings["support"] if j >= d.p]
        if bad:
            raise ValidationError(f"--support index {bad[0]} out of range for {d.p} covariates")
        split = SupportSplit(settings["support"], p=d.p)
    q = eigen_quantities(s.Xs, split)
    ratios = condition_ratios(q, settings["lambda"], settings["beta_min"], d.n, d.p, split.k)
    doc = _header("diagnose", settings)
    doc.update({
        "n": d.n, "p": d.p, "k": split.k, "m": split.m,
        "support": list(split.nonzero_indices),
        "rho_min": q.rho_min, "pi_max": q.pi_max, "omega_max": q.omega_max,
        "ratios": ratios.to_dict(),
    })
    if settings["format"] == "csv":
        rows = ["quantity,value"] + [f"{k},{v!r}" for k, v in
                                     [("rho_min", q.rho_min), ("pi_max", q.pi_max),
                                      ("omega_max", q.omega_max)] + list(ratios.to_dict().items())]
        return _write_text(settings["output"], "\n".join(rows) + "\n")
    return _write_text(settings["output"], dumps(doc))


COMMANDS = {"fit": cmd_fit, "tune": cmd_tune, "simulate": cmd_simulate, "diagnose": cmd_diagnose}


def run_cli(argv=None, stdout=None, stderr=None):
    """Run one subcommand; returns the exit status instead of exiting."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        settings = resolve_settings(args)
        text = COMMANDS[args.command](settings)
    except ValidationError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=stderr)
        return EXIT_NUMERICAL
    if settings["output"] is None or settings["output"] == "-":
        stdout.write(text)
    else:
        print(f"wrote {settings['output']}", file=stderr)
    return EXIT_OK


def main():
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run_cli())
