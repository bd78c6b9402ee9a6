"""Command-line driver: verification suites, scaling scans, planning and ingestion.

Exit codes: 0 pass, 1 check failure, 2 usage or argument error, 3 numeric
engine failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, constants
from .errors import ChardeltaError, FormatError, InfeasibleError, NumericError, PreconditionError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
SUITES = ("delta", "gamma", "fe", "dual", "oscillatory", "charsum")
MAX_SCAN_T = 1e4
SCAN_G_SCALE = 2.0  # G = 1 needs more than 1e6 coefficients once t exceeds about 100
CONFIG_KEYS = ("epsilon", "tol", "coeff_path", "threads")


class UsageError(ChardeltaError):
    """Bad command-line or config input."""


# records ---------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""


@dataclass
class RunRecord:
    command: str
    params: dict
    outputs: dict
    tolerances: dict
    wall_time: float = 0.0
    version: str = __version__
    timestamp: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, default=_jsonable) + "\n"


def _jsonable(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _pmap(fn, items, threads: int):
    """Map in a worker pool; results come back in input order."""
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# config and constants --------------------------------------------------------------


def read_config(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment.

    Recognized keys: epsilon, tol, coeff_path, threads and ``tolerance.<check>``.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise UsageError(f"config line {line_no}: expected 'key = value'")
        if key not in CONFIG_KEYS and not key.startswith("tolerance."):
            raise UsageError(f"config line {line_no}: unknown key {key!r}")
        out[key] = value
    return out


def _override_constants(pairs) -> dict[str, tuple[float, float]]:
    """Apply NAME=VALUE overrides; returns {name: (old, new)} for restoring."""
    changed = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep or not name.isupper() or not hasattr(constants, name):
            raise UsageError(f"--set-constant expects NAME=VALUE with a known constant, got {pair!r}")
        try:
            new = float(value)
        except ValueError:
            raise UsageError(f"--set-constant value {value!r} is not a number") from None
        changed[name] = (getattr(constants, name), new)
        setattr(constants, name, new)
    return changed


@dataclass
class Settings:
    eps: float = 0.05
    tol: float | None = None
    coeff_path: str | None = None
    threads: int = 1
    tolerance_overrides: dict[str, float] = field(default_factory=dict)

    def tolerance(self, family: str, default: float) -> float:
        return self.tolerance_overrides.get(family, default)


def _settings(args) -> Settings:
    config = read_config(args.config) if args.config else {}
    try:
        s = Settings(
            eps=float(config.get("epsilon", 0.05)),
            tol=float(config["tol"]) if "tol" in config else None,
            coeff_path=config.get("coeff_path"),
            threads=int(config.get("threads", 1)),
            tolerance_overrides={k.split(".", 1)[1]: float(v) for k, v in config.items() if k.startswith("tolerance.")},
        )
    except ValueError as exc:
        raise UsageError(f"bad config value: {exc}") from None
    if args.epsilon is not None:
        s.eps = args.epsilon
    if args.tol is not None:
        s.tol = args.tol
    if getattr(args, "coeff_path", None):
        s.coeff_path = args.coeff_path
    if args.threads is not None:
        s.threads = args.threads
    if s.threads < 1 or s.eps <= 0 or (s.tol is not None and s.tol <= 0):
        raise UsageError("need threads >= 1, epsilon > 0 and tol > 0")
    return s


def _coefficients(settings: Settings, n_needed: int):
    from .modforms import delta_coefficients, load_coefficients

    if settings.coeff_path:
        form = load_coefficients(settings.coeff_path)
        if form.n_max < n_needed:
            raise UsageError(f"coefficient table has {form.n_max} entries, {n_needed} needed")
        return form
    return delta_coefficients(max(n_needed, 16))


def _snapshot(args, settings: Settings, **extra) -> dict:
    snap = {
        "t": args.t,
        "N": args.N,
        "P": args.P,
        "K": args.K,
        "eps": settings.eps,
        "tol": settings.tol,
        "threads": settings.threads,
        "coeff_path": settings.coeff_path,
        "constant_overrides": dict(pair.split("=", 1) for pair in args.set_constant or ()),
    }
    snap.update(extra)
    return snap


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs {', '.join(missing)}")


# verification suites ---------------------------------------------------------------


def _suite_delta(settings: Settings) -> list[Check]:
    from .delta import decompose_S, delta_multiplicative
    from .params import PipelineParams

    tol = settings.tolerance("delta", 1e-8)
    checks = []
    diag = abs(delta_multiplicative(150, 150, 101, 50, N=100) - 1)
    checks.append(Check("delta lemma diagonal (n = r = 150, p = 101)", diag, tol, diag < tol))
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(200):
        p = int(rng.choice([53, 59, 61, 67, 71]))
        n, r = (int(x) for x in rng.integers(1, 400, 2))
        if r % p and n % p and (n - r) % p:
            worst = max(worst, abs(delta_multiplicative(n, r, p, float(rng.uniform(1, 200)))))
    exact = settings.tolerance("delta_orthogonality", 1e-12)
    checks.append(Check("delta lemma non-congruent pairs vanish", worst, exact, worst < exact))
    d = decompose_S(PipelineParams(200, 20, 20, 30, eps=settings.eps))
    gap = abs(d.residual - d.off_diagonal)
    bound = 1e-12 + d.quadrature_bound
    checks.append(Check("decomposition residual equals the off-diagonal error", gap, bound, gap <= bound))
    return checks


GAMMA_ALPHAS = (0.25, 0.75, 6.0)
GAMMA_BETAS = (100.0, 500.0, 1000.0)


def _suite_gamma(settings: Settings) -> list[Check]:
    from .specialfun import gamma_ratio_asymptotic, gamma_ratio_bound_check, gamma_ratio_exact

    checks = []
    for alpha in GAMMA_ALPHAS:
        for beta in GAMMA_BETAS:
            taus = np.linspace(-math.sqrt(beta) / 10, math.sqrt(beta) / 10, 21)
            excess, worst = 0.0, 0.0
            for tau in taus:
                res = gamma_ratio_asymptotic(alpha, beta, float(tau))
                err = abs(res.main_term - complex(gamma_ratio_exact(alpha, beta, float(tau))))
                worst = max(worst, err)
                excess = max(excess, err / res.error_bound)
            checks.append(
                Check(f"GammaRatioLemma alpha={alpha} beta={beta}", excess, 1.0, excess <= 1,
                      f"error / bound; max error {worst:.3e}")
            )
    grid = np.concatenate([np.geomspace(1, 1e4, 41), -np.geomspace(1, 1e4, 41)])
    for alpha, beta in ((0.5, 0.5), (1.5, -0.5), (-1.0, 2.0)):
        rep = gamma_ratio_bound_check(alpha, beta, grid)
        checks.append(
            Check(f"GammaRatioBound alpha={alpha} beta={beta}", rep.max_normalized, 5.0, rep.passed,
                  f"normalized ratio in [{rep.min_normalized:.3g}, {rep.max_normalized:.3g}]")
        )
    return checks


def _suite_fe(settings: Settings) -> list[Check]:
    from .arithmetic import character, characters, quadratic_character
    from .lfunc import afe_L_value, verify_cuspform_fe, verify_dirichlet_fe, verify_twisted_fe
    from .modforms import delta_coefficients

    checks = []
    tol = settings.tolerance("dirichlet_fe", 1e-8)
    for chi in characters(13)[1:]:
        rep = verify_dirichlet_fe(chi, 0.5 + 5j)
        checks.append(Check(f"Dirichlet FE chi mod 13 index {chi.index}", rep.difference, tol, rep.difference < tol))
    form = _coefficients(settings, 2000) if settings.coeff_path else delta_coefficients(2000)
    tol = settings.tolerance("cusp_fe", 1e-7)
    for s in (0.5, 0.5 + 3j):
        rep = verify_cuspform_fe(form, s)
        checks.append(Check(f"cusp form FE at s = {s}", rep.difference, tol, rep.difference < tol))
    tol = settings.tolerance("twisted_fe", 1e-6)
    for chi in (quadratic_character(5), character(5, 1)):
        rep = verify_twisted_fe(form, chi, 0.5 + 2j)
        checks.append(Check(f"twisted FE mod 5 index {chi.index}", rep.difference, tol, rep.difference < tol))
    tol = settings.tolerance("afe", 1e-8)
    for t in (10.0, 50.0):
        gap = abs(afe_L_value(t, G_scale=1.0).value - afe_L_value(t, G_scale=2.0).value)
        checks.append(Check(f"AFE independent of G at t = {t}", gap, tol, gap < tol))
    return checks


def _suite_dual(settings: Settings) -> list[Check]:
    from .arithmetic import characters
    from .lfunc import n_dual_transform, r_dual_transform
    from .modforms import delta_coefficients

    checks = []
    tol = settings.tolerance("dual_exact", 1e-6)
    for index in (1, 5):
        rep = r_dual_transform(53, characters(53)[index], 500.0, 20.0, 1.3, 100, mode="exact", window="none")
        checks.append(Check(f"r-dual exact identity p=53 index {index}", rep.difference, tol, rep.difference < tol))
    form = _coefficients(settings, 400000) if settings.coeff_path else delta_coefficients(400000)
    rep = n_dual_transform(29, characters(29)[1], 40.0, 1.5, 50, form=form, t=500.0, mode="exact", window="none")
    checks.append(Check("n-dual exact identity p=29 index 1", rep.difference, tol, rep.difference < tol))

    chars = characters(53)[1:]
    reps = _pmap(lambda c: r_dual_transform(53, c, 2000.0, 20.0, 1.3, 100, eps=settings.eps), chars, settings.threads)
    worst = max(r.difference / r.budget for r in reps)
    checks.append(Check("r-dual lemma mode, every chi mod 53 at t = 2000", worst, 10.0, all(r.passed for r in reps),
                        "max difference / budget"))
    chars = characters(29)[1:]
    reps = _pmap(lambda c: n_dual_transform(29, c, 40.0, 1.5, 50, t=500.0, eps=settings.eps), chars, settings.threads)
    median = float(np.median([r.difference / r.budget for r in reps]))
    checks.append(Check("n-dual lemma mode, median chi mod 29 at t = 500", median, 10.0, median <= 10.0,
                        f"{sum(r.passed for r in reps)} of {len(reps)} characters within 10x budget"))
    return checks


def _poisson_families():
    from .windows import make_window

    V = make_window("V_bump")
    amp = lambda x: V(np.asarray(x, dtype=float) / 100)
    return {
        "classical": (amp, lambda x: 0 * np.asarray(x, dtype=float), 1, 0),
        "sqrt phase mod 15": (amp, lambda x: -2 * math.pi * 3.0 * np.sqrt(np.asarray(x, dtype=float)), 15, 4),
        "two-root phase mod 21": (
            amp,
            lambda x: 2 * math.pi * (-np.sqrt(2.0 * np.asarray(x, dtype=float)) + np.sqrt(1.5 * np.asarray(x, dtype=float))),
            21,
            5,
        ),
    }


def _poisson_checks(tol: float, families=None) -> list[Check]:
    from .oscillatory import poisson_verify

    checks = []
    for name, (amp, phase, m, gamma) in _poisson_families().items():
        if families and name not in families:
            continue
        rep = poisson_verify(amp, phase, (100, 200), m, gamma, tol)
        checks.append(Check(f"Poisson {name}", rep.difference, tol, rep.difference < tol, f"{rep.terms} dual terms"))
    return checks


def _suite_oscillatory(settings: Settings) -> list[Check]:
    from .oscillatory import (
        OscillatoryIntegral,
        integrate_oracle,
        second_derivative_bound,
        second_derivative_estimate,
        stationary_phase,
    )
    from .windows import make_window

    V = make_window("V_bump")
    checks = []
    for Y in (1e3, 1e4):
        I = OscillatoryIntegral(
            V, lambda x, Y=Y: Y * (x - 1.5) ** 2, (1.0, 2.0),
            dh=lambda x, Y=Y: 2 * Y * (x - 1.5), d2h=lambda x, Y=Y: 2 * Y + 0 * x, Y=Y, Z=1.0,
        )
        oracle = integrate_oracle(I, 1e-12)
        sp = stationary_phase(I)
        rel = abs(oracle - sp.main) / abs(oracle)
        checks.append(Check(f"stationary phase Fresnel Y = {Y:g}", rel, sp.certified_rel_error, rel <= sp.certified_rel_error))
        r = 2 * Y
        est = second_derivative_estimate(I, r)
        bound = second_derivative_bound(r)
        checks.append(Check(f"second-derivative bound Y = {Y:g}", est, bound, est <= bound))
    checks += _poisson_checks(settings.tolerance("poisson", 1e-8))
    return checks


def _suite_charsum(settings: Settings) -> list[Check]:
    from .arithmetic import sieve_primes
    from .lfunc import character_sum_C, character_sum_C_brute

    tol = settings.tolerance("charsum", 1e-12)
    checks = []
    for p in sieve_primes(3, 50):
        worst = 0.0
        for n in range(1, 11):
            for r in range(1, 11):
                for M in (1, 2):
                    if (M * n * r) % p == 0:
                        continue
                    for sign in (1, -1):
                        worst = max(worst, abs(character_sum_C(p, n, r, M, sign) - character_sum_C_brute(p, n, r, M, sign)))
        checks.append(Check(f"character sum closed form p = {p}", worst, tol, worst <= tol))
    return checks


SUITE_RUNNERS = {
    "delta": _suite_delta,
    "gamma": _suite_gamma,
    "fe": _suite_fe,
    "dual": _suite_dual,
    "oscillatory": _suite_oscillatory,
    "charsum": _suite_charsum,
}


# commands --------------------------------------------------------------------------


def _checks_outputs(checks: list[Check]) -> tuple[dict, dict, bool]:
    outputs = {"checks": [asdict(c) for c in checks], "failed": [c.name for c in checks if not c.passed]}
    tolerances = {c.name: c.tolerance for c in checks}
    return outputs, tolerances, all(c.passed for c in checks)


def _report_checks(checks: list[Check], stream) -> None:
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.measured:.3e} (tol {c.tolerance:.3e})", file=stream)


def cmd_verify(args, settings: Settings):
    names = SUITES if args.suite == "all" else (args.suite,)
    checks = []
    for name in names:
        suite = SUITE_RUNNERS[name](settings)
        for c in suite:
            c.name = f"[{name}] {c.name}"
        checks += suite
    _report_checks(checks, sys.stderr)
    outputs, tolerances, ok = _checks_outputs(checks)
    return _snapshot(args, settings, suite=args.suite), outputs, tolerances, ok


def _slope(ts, values) -> float:
    return float(np.polyfit(np.log(ts), np.log(values), 1)[0])


def scan_rows(t_grid, mode: str, settings: Settings) -> list[dict]:
    """One row per t (sorted), with the cumulative least-squares slope when the grid has two or more points."""
    from .lfunc import afe_L_value
    from .lfunc.direct import S_direct
    from .params import PipelineParams

    ts = sorted(float(t) for t in t_grid)
    if not ts or ts[0] <= 0 or ts[-1] > MAX_SCAN_T:
        raise UsageError(f"t values must lie in (0, {MAX_SCAN_T:g}]")
    if mode == "S_of_N":
        form = _coefficients(settings, int(2 * ts[-1]))

        def point(t):
            N = round(t)
            params = PipelineParams(t, N, 2, 1.0, eps=settings.eps, form=form)
            return N, abs(S_direct(params)) / math.sqrt(N)
    elif mode == "L_value":
        form = _coefficients(settings, 1) if settings.coeff_path else None

        def point(t):
            res = afe_L_value(t, form=form, G_scale=SCAN_G_SCALE)
            return max(res.lengths), abs(res.value)
    else:
        raise UsageError(f"unknown scan mode {mode!r}")
    results = _pmap(point, ts, settings.threads)
    rows = []
    for i, (t, (N, value)) in enumerate(zip(ts, results)):
        row = {"t": t, "N": N, "value": value}
        if len(ts) > 1:
            row["cum_slope"] = _slope(ts[: i + 1], [v for _, v in results[: i + 1]]) if i else None
        rows.append(row)
    return rows


def scan_csv(rows: list[dict], snapshot: dict) -> str:
    buf = io.StringIO()
    for key, value in snapshot.items():
        buf.write(f"# {key} = {value}\n")
    columns = list(rows[0])
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row[c] is None else repr(row[c]) for c in columns])
    return buf.getvalue()


def cmd_scan_exponent(args, settings: Settings):
    try:
        t_grid = [float(x) for x in args.t_grid.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--t-grid must be comma-separated numbers, got {args.t_grid!r}") from None
    rows = scan_rows(t_grid, args.mode, settings)
    snap = _snapshot(args, settings, mode=args.mode, t_grid=",".join(repr(t) for t in sorted(t_grid)), version=__version__)
    for key in ("t", "N", "P", "K"):  # t and N vary per row; P and K play no part
        snap.pop(key)
    text = scan_csv(rows, snap)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return None


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected a rational number, got {text!r}") from None


def cmd_plan(args, settings: Settings):
    from .planner import ConstraintSet, optimize, term_table

    nu = _parse_fraction(args.nu)
    extra = []
    for row in args.constraint or ():
        parts = row.split(",")
        if len(parts) != 3:
            raise UsageError(f"--constraint expects a,b,c (a pi + b kappa < c), got {row!r}")
        extra.append(tuple(_parse_fraction(x) for x in parts))
    kappa_max = None if args.kappa_max == "none" else _parse_fraction(args.kappa_max)
    constraints = ConstraintSet(kappa_max=kappa_max, extra=tuple(extra))
    snap = _snapshot(args, settings, nu=str(nu), kappa_max=str(kappa_max), extra_constraints=[list(map(str, e)) for e in extra])
    try:
        result = optimize(nu, _parse_fraction(args.grid_step), constraints)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return snap, {"feasible": False, "message": str(exc)}, {}, False
    for label, (c0, cp, ck) in term_table(nu):
        print(f"{label:22s} exponent = {c0} + ({cp}) pi + ({ck}) kappa -> {result.exponents[label]}")
    print(f"optimum: pi = {result.pi}, kappa = {result.kappa}, objective = {result.objective}")
    if result.active_constraints:
        print(f"attained on the boundary of: {', '.join(result.active_constraints)}")
    outputs = {
        "feasible": True,
        "pi": result.pi,
        "kappa": result.kappa,
        "objective": result.objective,
        "binding_terms": list(result.binding_terms),
        "active_constraints": list(result.active_constraints),
        "grid_objective": result.grid_objective,
        "exponents": result.exponents,
    }
    return snap, outputs, {"grid_step": str(result.grid_step)}, True


def cmd_decompose(args, settings: Settings):
    from .delta import decompose_S
    from .params import PipelineParams

    _need(args, "t", "N", "P", "K")
    tol = settings.tol if settings.tol is not None else 1e-6
    form = _coefficients(settings, int(3 * args.N) + 1)
    params = PipelineParams(args.t, args.N, args.P, args.K, eps=settings.eps, form=form)
    d = decompose_S(params)
    gap = abs(d.residual - d.off_diagonal)
    checks = [
        Check("residual within tol * N", abs(d.residual), tol * args.N, abs(d.residual) < tol * args.N),
        Check("residual equals the off-diagonal error", gap, 1e-12 + d.quadrature_bound, gap <= 1e-12 + d.quadrature_bound),
    ]
    _report_checks(checks, sys.stderr)
    outputs, tolerances, ok = _checks_outputs(checks)
    outputs.update(d.as_dict())
    outputs["constraints"] = params.constraint_flags()
    return {**_snapshot(args, settings), **params.snapshot()}, outputs, tolerances, ok


def cmd_nu_integral(args, settings: Settings):
    from .lfunc import nu_integral

    _need(args, "t", "K", "p", "n", "r")
    tol = settings.tol if settings.tol is not None else 1e-8
    rep = nu_integral(args.p, args.n, args.r, args.t, args.K, N=args.N, tol=tol)
    outputs = {"oracle": rep.oracle, "nu0": rep.nu0, "h1_residual": rep.h1_residual, "R": rep.R}
    if rep.stationary is None:
        outputs["stationary"] = None
        outputs["min_slope"] = rep.min_slope
        checks = [Check("stationary point outside (1, 2): decay regime", abs(rep.oracle), 1.0, True)]
    else:
        outputs["stationary"] = rep.stationary
        checks = [
            Check("h'(nu0) = 0", rep.h1_residual, 1e-10, rep.h1_residual < 1e-10),
            Check("stationary phase vs oracle", rep.relative_error, rep.allowed_error, rep.relative_error <= rep.allowed_error),
        ]
    _report_checks(checks, sys.stderr)
    extra, tolerances, ok = _checks_outputs(checks)
    outputs.update(extra)
    snap = _snapshot(args, settings, p=args.p, n=args.n, r=args.r)
    return snap, outputs, {"quadrature": tol, **tolerances}, ok


def cmd_poisson_check(args, settings: Settings):
    tol = settings.tol if settings.tol is not None else settings.tolerance("poisson", 1e-8)
    families = None if args.family == "all" else [args.family]
    checks = _poisson_checks(tol, families)
    _report_checks(checks, sys.stderr)
    outputs, tolerances, ok = _checks_outputs(checks)
    return _snapshot(args, settings, family=args.family), outputs, tolerances, ok


def cmd_ingest_coeffs(args, settings: Settings):
    from .modforms import deligne_violations, hecke_violations, load_coefficients

    form = load_coefficients(args.path)
    n_max = form.n_max if args.n_max is None else min(args.n_max, form.n_max)
    deligne = deligne_violations(form, n_max)
    hecke = hecke_violations(form, n_max) if form.form.level == 1 else []
    checks = [
        Check(f"Deligne bound for n <= {n_max}", len(deligne), 0, not deligne, str(deligne[:10])),
        Check(f"Hecke relations for n <= {n_max}", len(hecke), 0, not hecke, str(hecke[:10])),
    ]
    _report_checks(checks, sys.stderr)
    outputs, tolerances, ok = _checks_outputs(checks)
    outputs.update({"entries": form.n_max, "weight": form.form.weight, "level": form.form.level, "label": form.form.label})
    return _snapshot(args, settings, path=str(args.path), n_max=n_max), outputs, tolerances, ok


COMMANDS = {
    "verify": cmd_verify,
    "scan-exponent": cmd_scan_exponent,
    "plan": cmd_plan,
    "decompose": cmd_decompose,
    "nu-integral": cmd_nu_integral,
    "poisson-check": cmd_poisson_check,
    "ingest-coeffs": cmd_ingest_coeffs,
}


# parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--t", type=float, help="height t")
    common.add_argument("--N", type=int, help="sum length N")
    common.add_argument("--P", type=int, help="prime range [P, 2P]")
    common.add_argument("--K", type=float, help="archimedean scale K")
    common.add_argument("--epsilon", type=float, help="epsilon (default 0.05)")
    common.add_argument("--tol", type=float, help="tolerance override")
    common.add_argument("--out", help="output file (JSON report, or CSV for scan-exponent)")
    common.add_argument("--threads", type=int, help="worker threads; 1 forces serial execution")
    common.add_argument("--config", help="'key = value' config file")
    common.add_argument("--coeff-path", dest="coeff_path", help="coefficient file (see ingest-coeffs)")
    common.add_argument("--set-constant", action="append", metavar="NAME=VALUE", help="override a calibrated constant")

    parser = argparse.ArgumentParser(prog="chardelta", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"chardelta {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=SUITES + ("all",))

    p = sub.add_parser("scan-exponent", parents=[common], help="scaling scan over t, CSV output")
    p.add_argument("--t-grid", required=True, help="comma-separated t values")
    p.add_argument("--mode", choices=("S_of_N", "L_value"), default="S_of_N")

    p = sub.add_parser("plan", parents=[common], help="optimize the exponent parameters")
    p.add_argument("--nu", required=True, help="log N / log t as a rational, e.g. 1 or 4/5")
    p.add_argument("--grid-step", default="1/96")
    p.add_argument("--kappa-max", default="2/3", help="bound on kappa, or 'none'")
    p.add_argument("--constraint", action="append", metavar="A,B,C", help="extra strict constraint A pi + B kappa < C")

    sub.add_parser("decompose", parents=[common], help="S = S0 + S1 + S* at (t, N, P, K)")

    p = sub.add_parser("nu-integral", parents=[common], help="stationary phase for the nu-integral")
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)

    p = sub.add_parser("poisson-check", parents=[common], help="Poisson summation families")
    p.add_argument("--family", default="all", choices=("all", *_poisson_families()))

    p = sub.add_parser("ingest-coeffs", parents=[common], help="load and check a coefficient file")
    p.add_argument("path")
    p.add_argument("--n-max", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    start = time.perf_counter()
    changed = {}
    try:
        changed = _override_constants(args.set_constant)
        settings = _settings(args)
        result = COMMANDS[args.command](args, settings)
    except (UsageError, PreconditionError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ChardeltaError as exc:
        print(f"check failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        for name, (old, _) in changed.items():
            setattr(constants, name, old)
    if result is None:  # the command wrote its own output
        return EXIT_PASS
    params, outputs, tolerances, ok = result
    record = RunRecord(
        args.command,
        params,
        outputs,
        tolerances,
        wall_time=time.perf_counter() - start,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    text = record.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    elif args.command != "plan":  # plan already printed its table
        sys.stdout.write(text)
    if not ok and outputs.get("failed"):
        print(f"failed: {'; '.join(outputs['failed'])}", file=sys.stderr)
    return EXIT_PASS if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
