"""Command-line front end: deterministic CSV/JSON emission for every
computation, plus bundled reproduction targets.

CSV conventions: comma separated, header row, LF line endings, floats at 17
significant digits so doubles round-trip exactly.  Identical run
configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic, dynamics, krylov, operators, optimize
from .errors import (CapacityError, ConfigurationError, DomainError, FitError,
                     InputError, PxpError, SizeError)
from .hilbert import enumerate_basis, special_state
from .operators import ModelConfig, SCHEMES, TERM_NAMES

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_USAGE = 64

THREADS_ENV = "PXPFSA_THREADS"

REPRODUCE_TARGETS = (
    "z2-beta-compare", "z2-complexity", "z3-summary", "z3-exact",
    "vacuum-complexity", "fsa-errors-z2", "fsa-errors-vacuum",
    "error3-scan", "q-scan",
)

_CONFIG_KEYS = {"L", "initial", "scheme", "terms", "time", "threads", "seed"}
_TIME_KEYS = {"dt", "t_max"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures map to exit code 64."""

    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    """Serializable description of one run."""

    L: int = 12
    initial: str = "z2"
    scheme: str | None = None
    terms: dict = field(default_factory=dict)
    dt: float = 0.02
    t_max: float = 40.0
    threads: int = 1
    seed: int = 0

    def model(self) -> ModelConfig:
        return ModelConfig(self.L, self.initial, dict(self.terms))

    def times(self) -> np.ndarray:
        return dynamics.time_grid(self.dt, self.t_max)

    def to_json(self) -> dict:
        return {
            "L": self.L, "initial": self.initial, "scheme": self.scheme,
            "terms": {k: float(v) for k, v in sorted(self.terms.items())},
            "time": {"dt": self.dt, "t_max": self.t_max},
            "threads": self.threads, "seed": self.seed,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "RunConfig":
        if not isinstance(payload, dict):
            raise ConfigurationError("config file must hold a JSON object")
        unknown = set(payload) - _CONFIG_KEYS
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        time_block = payload.get("time", {})
        if not isinstance(time_block, dict) or set(time_block) - _TIME_KEYS:
            raise ConfigurationError("config 'time' must be {dt, t_max}")
        terms = payload.get("terms", {})
        if not isinstance(terms, dict):
            raise ConfigurationError("config 'terms' must be an object")
        scheme = payload.get("scheme")
        if scheme is not None and scheme not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {scheme!r}")
        return cls(
            L=int(payload.get("L", 12)),
            initial=str(payload.get("initial", "z2")),
            scheme=scheme,
            terms={str(k): float(v) for k, v in terms.items()},
            dt=float(time_block.get("dt", 0.02)),
            t_max=float(time_block.get("t_max", 40.0)),
            threads=int(payload.get("threads", _default_threads())),
            seed=int(payload.get("seed", 0)),
        )


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _fmt(value) -> str:
    x = float(value)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _write_csv(path, header, rows):
    def emit(stream):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else _fmt(cell)
                             for cell in row])

    if path is None:
        emit(sys.stdout)
    else:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as stream:
            emit(stream)


def _write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")


def _parse_term(raw: str) -> tuple[str, float]:
    name, sep, value = raw.partition("=")
    if not sep:
        raise UsageError(f"--term expects name=value, got {raw!r}")
    if name not in TERM_NAMES:
        raise ConfigurationError(f"unknown term {name!r}")
    try:
        return name, float(value)
    except ValueError:
        raise UsageError(f"--term {name}: {value!r} is not a number") from None


def _add_common(parser, scheme=False, time=False):
    parser.add_argument("--config", type=Path, help="JSON run configuration")
    parser.add_argument("--L", type=int, help="number of sites")
    parser.add_argument("--initial", choices=("vacuum", "z2", "z2prime", "z3"))
    if scheme:
        parser.add_argument("--scheme", choices=SCHEMES)
    parser.add_argument("--term", action="append", default=[],
                        metavar="NAME=VALUE", help="repeatable term strength")
    if time:
        parser.add_argument("--dt", type=float)
        parser.add_argument("--t-max", type=float, dest="t_max")
    parser.add_argument("--threads", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", type=Path, help="output path (default stdout)")


def _config_from_args(args) -> RunConfig:
    if getattr(args, "config", None):
        try:
            payload = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigurationError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
        cfg = RunConfig.from_json(payload)
    else:
        cfg = RunConfig(threads=_default_threads())
    for attr in ("L", "initial", "scheme", "dt", "t_max", "threads", "seed"):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(cfg, attr, value)
    for raw in getattr(args, "term", []):
        name, value = _parse_term(raw)
        cfg.terms[name] = value
    cfg.model()  # validate eagerly
    return cfg


def _scheme_for(cfg: RunConfig) -> str:
    if cfg.scheme:
        return cfg.scheme
    defaults = {"z2": "z2", "z2prime": "z2", "z3": "z3", "vacuum": "vacuum"}
    return defaults[cfg.initial]


# ---------------------------------------------------------------------------
# plain subcommands


def _cmd_basis(args) -> int:
    cfg = _config_from_args(args)
    basis = enumerate_basis(cfg.L)
    sectors = {str(k): int(np.count_nonzero(basis.popcounts == k))
               for k in range(cfg.L // 2 + 1)}
    _write_json(args.out, {"L": cfg.L, "dim": basis.dim, "sectors": sectors})
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    cfg = _config_from_args(args)
    basis = enumerate_basis(cfg.L)
    eig = dynamics.eigendecompose(operators.assemble(basis, cfg.model()))
    rows = [(i, e) for i, e in enumerate(eig.eigenvalues)]
    _write_csv(args.out, ["index", "energy"], rows)
    return EXIT_OK


def _cmd_lanczos(args) -> int:
    cfg = _config_from_args(args)
    basis = enumerate_basis(cfg.L)
    h = operators.assemble(basis, cfg.model())
    v0 = special_state(basis, cfg.initial)
    steps = args.steps if args.steps is not None else cfg.L + 1
    data = krylov.lanczos(h, v0, steps)
    rows = [(n, data.alphas[n], data.betas[n - 1] if n else 0.0)
            for n in range(data.steps_run)]
    _write_csv(args.out, ["n", "alpha", "beta"], rows)
    return EXIT_OK


def _fsa_rows(data: krylov.FsaData):
    rows = [(n + 1, data.betas[n], data.errors_norm[n], data.errors_sq[n])
            for n in range(len(data.betas))]
    rows.append((len(data.betas) + 1, data.closure_beta, float("nan"), float("nan")))
    return rows


def _cmd_fsa(args) -> int:
    cfg = _config_from_args(args)
    basis = enumerate_basis(cfg.L)
    ladder = operators.ladder_split(basis, cfg.model(), _scheme_for(cfg))
    data = krylov.fsa(ladder, special_state(basis, cfg.initial))
    _write_csv(args.out, ["n", "beta", "delta", "epsilon"], _fsa_rows(data))
    if args.out is not None:
        # CSV went to a file; the chain summary goes to stdout
        _write_json(None, {"L": cfg.L, "scheme": _scheme_for(cfg),
                           "closed_after": data.closed_after,
                           "closure_beta": data.closure_beta,
                           "delta_av": data.delta_av})
    return EXIT_OK


def _cmd_evolve(args) -> int:
    cfg = _config_from_args(args)
    basis = enumerate_basis(cfg.L)
    eig = dynamics.eigendecompose(operators.assemble(basis, cfg.model()))
    v0 = special_state(basis, cfg.initial)
    times = cfg.times()
    r = dynamics.return_probability(eig, v0, times)
    dens = dynamics.expectation_series(eig, v0, operators.up_density(basis), times)
    nn2 = dynamics.expectation_series(
        eig, v0, operators.next_nearest_pair_density(basis), times)
    rows = zip(times, r.values, dens.values, nn2.values)
    _write_csv(args.out, ["t", "return_probability", "up_density", "nn2_density"],
               rows)
    return EXIT_OK


def _complexity_columns(cfg: RunConfig, basis, eig, times, method: str,
                        lanczos_steps: int | None):
    v0 = special_state(basis, cfg.initial)
    header, columns = [], []
    if method in ("fsa", "both"):
        ladder = operators.ladder_split(basis, cfg.model(), _scheme_for(cfg))
        data = krylov.fsa(ladder, v0)
        c, leak = dynamics.spread_complexity(eig, v0, data.vectors, times)
        header += ["c_fsa", "leakage_fsa"]
        columns += [c.values, leak.values]
    if method in ("lanczos", "both"):
        steps = lanczos_steps if lanczos_steps else 2 * (cfg.L + 1)
        h = operators.assemble(basis, cfg.model())
        kd = krylov.lanczos(h, v0, min(steps, basis.dim) - 1)
        c, leak = dynamics.spread_complexity(eig, v0, kd.vectors, times)
        header += ["c_lanczos", "leakage_lanczos"]
        columns += [c.values, leak.values]
    return header, columns


def _cmd_complexity(args) -> int:
    cfg = _config_from_args(args)
    basis = enumerate_basis(cfg.L)
    eig = dynamics.eigendecompose(operators.assemble(basis, cfg.model()))
    times = cfg.times()
    header, columns = _complexity_columns(cfg, basis, eig, times, args.method,
                                          args.steps)
    rows = zip(times, *columns)
    _write_csv(args.out, ["t"] + header, rows)
    return EXIT_OK


def _parse_grid(spec: str) -> list[float]:
    """Either comma-separated values or start:stop:step (inclusive stop)."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid must be start:stop:step, got {spec!r}")
        start, stop, step = (float(x) for x in parts)
        if step <= 0:
            raise UsageError("grid step must be positive")
        count = int(round((stop - start) / step))
        return [start + i * step for i in range(count + 1)]
    try:
        return [float(x) for x in spec.split(",") if x]
    except ValueError:
        raise UsageError(f"bad grid {spec!r}") from None


def _cmd_errors(args) -> int:
    cfg = _config_from_args(args)
    steps = [int(s) for s in args.error_steps.split(",")]
    values = _parse_grid(args.values)
    scheme = _scheme_for(cfg)

    def profile(value):
        if args.scan == "h":
            model = cfg.model().with_terms(**{args.scan_term: value})
            L = cfg.L
        else:
            L = int(value)
            model = ModelConfig(L, cfg.initial, dict(cfg.terms))
        basis = enumerate_basis(L)
        ladder = operators.ladder_split(basis, model, scheme)
        data = krylov.fsa(ladder, special_state(basis, cfg.initial))
        out = []
        for step in steps:
            if step <= len(data.errors_norm):
                out.append((value, step, data.errors_norm[step - 1],
                            data.errors_sq[step - 1]))
        return out

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        chunks = list(pool.map(profile, values))
    rows = [row for chunk in chunks for row in chunk]
    _write_csv(args.out, [args.scan, "step", "delta", "epsilon"], rows)
    return EXIT_OK


def _cmd_qfit(args) -> int:
    cfg = _config_from_args(args)
    basis = enumerate_basis(cfg.L)
    ladder = operators.ladder_split(basis, cfg.model(), _scheme_for(cfg))
    data = krylov.fsa(ladder, special_state(basis, cfg.initial))
    fit = analytic.fit_q(data.betas)
    _write_json(args.out, {
        "L": cfg.L, "scheme": _scheme_for(cfg),
        "q": fit.q, "alpha": fit.alpha, "j": fit.j, "residual": fit.residual,
        "betas": [float(b) for b in data.betas]})
    return EXIT_OK


def _cmd_optimize(args) -> int:
    cfg = _config_from_args(args)
    free = tuple(s for s in args.free.split(",") if s) if args.free else ()
    objective = optimize.Objective(
        kind=args.objective, config=cfg.model(), free_terms=free,
        scheme=cfg.scheme, times=cfg.times(),
        error_step=args.error_step)
    if args.x0 is not None:
        x0 = [float(x) for x in args.x0.split(",")]
        if len(x0) != len(free) and args.objective != "neg_error3_analytic":
            raise ConfigurationError("--x0 length must match --free names")
        result = optimize.optimize_vector(objective, x0, radius=args.radius,
                                          seed=cfg.seed)
    else:
        if args.objective != "neg_error3_analytic" and len(free) != 1:
            raise ConfigurationError("grid scan needs exactly one --free name")
        result = optimize.scan_1d(objective, args.lo, args.hi, args.steps)
    payload = {
        "objective": args.objective, "free": list(free),
        "strengths": [float(x) for x in result.strengths],
        "value": result.value, "evaluations": result.evaluations,
        "converged": result.converged, "seed": cfg.seed,
    }
    _write_json(args.out, payload)
    if args.trace_out:
        rows = [(i,) + tuple(np.atleast_1d(x)) + (v,)
                for i, (x, v) in enumerate(result.trace)]
        names = [f"x{i}" for i in range(len(result.strengths))]
        _write_csv(args.trace_out, ["eval"] + names + ["value"], rows)
    return EXIT_OK


def _cmd_xcorr(args) -> int:
    with open(args.input, newline="") as stream:
        reader = csv.DictReader(stream)
        if reader.fieldnames is None or args.col_a not in reader.fieldnames \
                or args.col_b not in reader.fieldnames:
            raise ConfigurationError(
                f"input must contain columns {args.col_a!r} and {args.col_b!r}")
        t, a, b = [], [], []
        for record in reader:
            t.append(float(record[args.time_col]))
            a.append(float(record[args.col_a]))
            b.append(float(record[args.col_b]))
    series_a = dynamics.TimeSeries(np.array(t), np.array(a))
    series_b = dynamics.TimeSeries(np.array(t), np.array(b))
    lags, raw, norm = dynamics.cross_correlation(series_a, series_b, args.max_lag)
    _write_csv(args.out, ["lag", "raw", "normalized"], zip(lags, raw, norm))
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduction targets


def _out_dir(args, target: str) -> Path:
    out = args.out if args.out else Path(f"reproduce-{target}")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _target_z2_beta_compare(args, cfg: RunConfig) -> dict:
    out = _out_dir(args, "z2-beta-compare")
    lam = args.lam if args.lam is not None else 0.108
    if lam:
        cfg.terms.setdefault("z2pert", lam)
    basis = enumerate_basis(cfg.L)
    model = cfg.model()
    v0 = special_state(basis, cfg.initial)
    kd = krylov.lanczos(operators.assemble(basis, model), v0, cfg.L + 1)
    lanczos_path = out / "lanczos.csv"
    _write_csv(lanczos_path, ["n", "alpha", "beta"],
               [(n, kd.alphas[n], kd.betas[n - 1] if n else 0.0)
                for n in range(kd.steps_run)])
    data = krylov.fsa(operators.ladder_split(basis, model, "z2"), v0)
    fsa_path = out / "fsa.csv"
    _write_csv(fsa_path, ["n", "beta", "delta", "epsilon"], _fsa_rows(data))
    return {"files": [str(lanczos_path), str(fsa_path)],
            "closed_after": data.closed_after}


def _target_z2_complexity(args, cfg: RunConfig) -> dict:
    out = _out_dir(args, "z2-complexity")
    lambdas = _parse_grid(args.lambdas) if args.lambdas else [0.0, 0.05, 0.108, 0.2]
    basis = enumerate_basis(cfg.L)
    times = cfg.times()
    rows = []
    for lam in lambdas:
        model = ModelConfig(cfg.L, "z2", {"z2pert": lam} if lam else {})
        eig = dynamics.eigendecompose(operators.assemble(basis, model))
        v0 = special_state(basis, "z2")
        r = dynamics.return_probability(eig, v0, times)
        run = RunConfig(L=cfg.L, initial="z2", terms=dict(model.terms),
                        dt=cfg.dt, t_max=cfg.t_max)
        header, cols = _complexity_columns(run, basis, eig, times, "both", None)
        for i, t in enumerate(times):
            rows.append((lam, t, r.values[i]) + tuple(col[i] for col in cols))
    path = out / "z2-complexity.csv"
    _write_csv(path, ["lambda", "t", "return_probability", "c_fsa",
                      "leakage_fsa", "c_lanczos", "leakage_lanczos"], rows)
    return {"files": [str(path)], "lambdas": lambdas}


def _target_z3_summary(args, cfg: RunConfig) -> dict:
    out = _out_dir(args, "z3-summary")
    L = cfg.L if cfg.L % 3 == 0 else 12
    basis = enumerate_basis(L)
    tuned = {"z3pert1": 0.18244, "z3pert2": -0.10390, "z3pert3": 0.05445}
    beta_rows, dyn_rows = [], []
    times = cfg.times()
    for variant, terms in (("bare", {}), ("tuned", tuned)):
        model = ModelConfig(L, "z3", terms)
        v0 = special_state(basis, "z3")
        h = operators.assemble(basis, model)
        kd = krylov.lanczos(h, v0, 2 * L // 3 + 3)
        for n in range(1, len(kd.betas) + 1):
            beta_rows.append((variant, "lanczos", n, kd.betas[n - 1]))
        data = krylov.fsa(operators.ladder_split(basis, model, "z3"), v0)
        for n in range(1, len(data.betas) + 1):
            beta_rows.append((variant, "fsa", n, data.betas[n - 1]))
        beta_rows.append((variant, "fsa", len(data.betas) + 1, data.closure_beta))
        eig = dynamics.eigendecompose(h)
        r = dynamics.return_probability(eig, v0, times)
        c_f, _ = dynamics.spread_complexity(eig, v0, data.vectors, times)
        c_l, _ = dynamics.spread_complexity(eig, v0, kd.vectors, times)
        for i, t in enumerate(times):
            dyn_rows.append((variant, t, r.values[i], c_f.values[i], c_l.values[i]))
    betas_path = out / "z3-betas.csv"
    dyn_path = out / "z3-dynamics.csv"
    _write_csv(betas_path, ["variant", "method", "n", "beta"], beta_rows)
    _write_csv(dyn_path, ["variant", "t", "return_probability", "c_fsa",
                          "c_lanczos"], dyn_rows)
    return {"files": [str(betas_path), str(dyn_path)], "L": L}


def _target_z3_exact(args, cfg: RunConfig) -> dict:
    out = _out_dir(args, "z3-exact")
    L = cfg.L if cfg.L % 3 == 0 else 12
    basis = enumerate_basis(L)
    model = ModelConfig(L, "z3", {"z3pert1": -1.0})
    v0 = special_state(basis, "z3")
    data = krylov.fsa(operators.ladder_split(basis, model, "z3exact"), v0)
    betas_path = out / "z3-exact-betas.csv"
    _write_csv(betas_path, ["n", "beta", "su2"],
               [(n + 1, data.betas[n], analytic.su2_beta(n + 1, L // 3))
                for n in range(len(data.betas))])
    eig = dynamics.eigendecompose(operators.assemble(basis, model))
    times = cfg.times()
    r = dynamics.return_probability(eig, v0, times)
    c, leak = dynamics.spread_complexity(eig, v0, data.vectors, times)
    dyn_path = out / "z3-exact-dynamics.csv"
    _write_csv(dyn_path, ["t", "return_probability", "c_fsa", "leakage_fsa"],
               zip(times, r.values, c.values, leak.values))
    return {"files": [str(betas_path), str(dyn_path)], "L": L}


_VACUUM_VARIANTS = (
    ("bare", {}),
    ("sigma3", {"sigma3": 0.31}),
    ("sigma3_sigma5", {"sigma3": 0.43, "sigma5": 0.28}),
    ("long_range", {"sigma3": 0.31, "sigma5": 0.23, "sigma7": 0.2,
                    "sigma9": 0.18, "sigma11": 0.19, "sigma13": 0.01}),
)


def _target_vacuum_complexity(args, cfg: RunConfig) -> dict:
    out = _out_dir(args, "vacuum-complexity")
    L = cfg.L if cfg.L % 2 == 0 else 14
    basis = enumerate_basis(L)
    times = cfg.times()
    rows, ensemble = [], {}
    density = operators.up_density(basis)
    for variant, terms in _VACUUM_VARIANTS:
        if any(_needs_larger_ring(name, L) for name in terms):
            continue
        model = ModelConfig(L, "vacuum", terms)
        v0 = special_state(basis, "vacuum")
        eig = dynamics.eigendecompose(operators.assemble(basis, model))
        r = dynamics.return_probability(eig, v0, times)
        data = krylov.fsa(operators.ladder_split(basis, model, "vacuum"), v0)
        c, leak = dynamics.spread_complexity(eig, v0, data.vectors, times)
        dens = dynamics.expectation_series(eig, v0, density, times)
        for i, t in enumerate(times):
            rows.append((variant, t, r.values[i], c.values[i], leak.values[i],
                         dens.values[i]))
        ensemble[variant] = dynamics.diagonal_ensemble(eig, v0, density)
    path = out / "vacuum-dynamics.csv"
    _write_csv(path, ["variant", "t", "return_probability", "c_fsa",
                      "leakage_fsa", "up_density"], rows)
    ens_path = out / "vacuum-diagonal-ensemble.json"
    _write_json(ens_path, ensemble)
    return {"files": [str(path), str(ens_path)], "L": L}


def _needs_larger_ring(name: str, L: int) -> bool:
    return name.startswith("sigma") and L < int(name[5:]) + 1


def _target_fsa_errors(args, cfg: RunConfig, scheme: str) -> dict:
    out = _out_dir(args, f"fsa-errors-{scheme}")
    sizes = ([int(v) for v in _parse_grid(args.sizes)] if args.sizes
             else list(range(8, 19, 2)))
    initial = "z2" if scheme == "z2" else "vacuum"
    rows = []

    def profile(L):
        basis = enumerate_basis(L)
        model = ModelConfig(L, initial, dict(cfg.terms))
        ladder = operators.ladder_split(basis, model, scheme)
        data = krylov.fsa(ladder, special_state(basis, initial))
        return [(L, n + 1, data.errors_norm[n], data.errors_sq[n])
                for n in range(len(data.errors_norm))]

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        for chunk in pool.map(profile, sizes):
            rows.extend(chunk)
    path = out / f"fsa-errors-{scheme}.csv"
    _write_csv(path, ["L", "step", "delta", "epsilon"], rows)
    return {"files": [str(path)], "sizes": sizes}


def _target_error3_scan(args, cfg: RunConfig) -> dict:
    out = _out_dir(args, "error3-scan")
    L = cfg.L if cfg.L >= 8 else 1000
    grid = _parse_grid(args.values) if args.values else _parse_grid("0.01:1.0:0.005")
    rows = []
    for h in grid:
        err = analytic.error3_vacuum(h, L)
        rows.append((h, err, math.log(err) if err > 0 else float("nan")))
    path = out / "error3-scan.csv"
    _write_csv(path, ["h", "error3", "ln_error3"], rows)
    best = min(rows, key=lambda row: row[1])
    summary_path = out / "error3-scan.json"
    _write_json(summary_path, {"L": L, "h_min": best[0], "error3_min": best[1]})
    return {"files": [str(path), str(summary_path)], "h_min": best[0]}


def _target_q_scan(args, cfg: RunConfig) -> dict:
    out = _out_dir(args, "q-scan")
    lambdas = _parse_grid(args.lambdas) if args.lambdas else [0.0, 0.02, 0.05, 0.108, 0.15]
    basis = enumerate_basis(cfg.L)
    v0 = special_state(basis, "z2")
    fit_rows, beta_rows = [], []
    for lam in lambdas:
        model = ModelConfig(cfg.L, "z2", {"z2pert": lam} if lam else {})
        data = krylov.fsa(operators.ladder_split(basis, model, "z2"), v0)
        fit = analytic.fit_q(data.betas)
        fit_rows.append((lam, fit.q, fit.alpha, fit.residual, data.delta_av))
        for n in range(1, len(data.betas) + 1):
            beta_rows.append((lam, n, data.betas[n - 1]))
    fits_path = out / "q-fits.csv"
    betas_path = out / "q-betas.csv"
    _write_csv(fits_path, ["lambda", "q", "alpha", "residual", "delta_av"], fit_rows)
    _write_csv(betas_path, ["lambda", "n", "beta"], beta_rows)
    return {"files": [str(fits_path), str(betas_path)], "lambdas": lambdas}


def _cmd_reproduce(args) -> int:
    cfg = _config_from_args(args)
    target = args.target
    if target not in REPRODUCE_TARGETS:
        raise UsageError(f"unknown reproduce target {target!r}; "
                         f"expected one of {', '.join(REPRODUCE_TARGETS)}")
    cfg.L = args.L if args.L is not None else _default_target_size(target)
    cfg.initial = _default_target_initial(target)
    dispatch = {
        "z2-beta-compare": _target_z2_beta_compare,
        "z2-complexity": _target_z2_complexity,
        "z3-summary": _target_z3_summary,
        "z3-exact": _target_z3_exact,
        "vacuum-complexity": _target_vacuum_complexity,
        "error3-scan": _target_error3_scan,
        "q-scan": _target_q_scan,
    }
    if target == "fsa-errors-z2":
        manifest = _target_fsa_errors(args, cfg, "z2")
    elif target == "fsa-errors-vacuum":
        manifest = _target_fsa_errors(args, cfg, "vacuum")
    else:
        manifest = dispatch[target](args, cfg)
    manifest["target"] = target
    _write_json(None, manifest)
    return EXIT_OK


def _default_target_size(target: str) -> int:
    return {
        "z2-beta-compare": 18, "z2-complexity": 18, "z3-summary": 12,
        "z3-exact": 12, "vacuum-complexity": 14, "fsa-errors-z2": 12,
        "fsa-errors-vacuum": 12, "error3-scan": 1000, "q-scan": 18,
    }[target]


def _default_target_initial(target: str) -> str:
    if target.startswith("z3"):
        return "z3"
    if target.startswith("vacuum") or target == "error3-scan" \
            or target == "fsa-errors-vacuum":
        return "vacuum"
    return "z2"


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="pxpfsa", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    sp = sub.add_parser("basis", help="basis dimension and sector counts")
    _add_common(sp)
    sp.set_defaults(func=_cmd_basis)

    sp = sub.add_parser("spectrum", help="eigenvalues of the assembled model")
    _add_common(sp)
    sp.set_defaults(func=_cmd_spectrum)

    sp = sub.add_parser("lanczos", help="three-term recursion coefficients")
    _add_common(sp)
    sp.add_argument("--steps", type=int)
    sp.set_defaults(func=_cmd_lanczos)

    sp = sub.add_parser("fsa", help="forward-scattering chain and errors")
    _add_common(sp, scheme=True)
    sp.set_defaults(func=_cmd_fsa)

    sp = sub.add_parser("evolve", help="return probability and observables")
    _add_common(sp, time=True)
    sp.set_defaults(func=_cmd_evolve)

    sp = sub.add_parser("complexity", help="spread complexity series")
    _add_common(sp, scheme=True, time=True)
    sp.add_argument("--method", choices=("fsa", "lanczos", "both"), default="both")
    sp.add_argument("--steps", type=int, help="chain length for the lanczos column")
    sp.set_defaults(func=_cmd_complexity)

    sp = sub.add_parser("errors", help="chain errors over a parameter grid")
    _add_common(sp, scheme=True)
    sp.add_argument("--scan", choices=("h", "L"), default="h")
    sp.add_argument("--scan-term", default="sigma3")
    sp.add_argument("--values", required=True,
                    help="comma list or start:stop:step")
    sp.add_argument("--error-steps", default="3,4,5")
    sp.set_defaults(func=_cmd_errors)

    sp = sub.add_parser("qfit", help="deformation fit of the chain coefficients")
    _add_common(sp, scheme=True)
    sp.set_defaults(func=_cmd_qfit)

    sp = sub.add_parser("optimize", help="tune strengths for revivals or errors")
    _add_common(sp, scheme=True, time=True)
    sp.add_argument("--objective", choices=optimize.OBJECTIVE_KINDS,
                    default="revival_height")
    sp.add_argument("--free", help="comma-separated term names")
    sp.add_argument("--lo", type=float, default=0.0)
    sp.add_argument("--hi", type=float, default=0.5)
    sp.add_argument("--steps", type=int, default=11)
    sp.add_argument("--x0", help="comma list: use the simplex optimizer")
    sp.add_argument("--radius", type=float, default=0.05)
    sp.add_argument("--error-step", type=int, dest="error_step")
    sp.add_argument("--trace-out", type=Path)
    sp.set_defaults(func=_cmd_optimize)

    sp = sub.add_parser("xcorr", help="cross-correlation of two CSV columns")
    _add_common(sp)
    sp.add_argument("--input", type=Path, required=True)
    sp.add_argument("--col-a", required=True)
    sp.add_argument("--col-b", required=True)
    sp.add_argument("--time-col", default="t")
    sp.add_argument("--max-lag", type=int, default=100)
    sp.set_defaults(func=_cmd_xcorr)

    sp = sub.add_parser("reproduce", help="bundled paper-panel runs")
    sp.add_argument("target")
    _add_common(sp, scheme=True, time=True)
    sp.add_argument("--lam", "--lambda", dest="lam", type=float,
                    help="even/odd correction strength")
    sp.add_argument("--lambdas", help="grid for multi-strength targets")
    sp.add_argument("--sizes", help="grid of system sizes")
    sp.add_argument("--values", help="grid of strengths (error3-scan)")
    sp.set_defaults(func=_cmd_reproduce)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ConfigurationError, SizeError, InputError, DomainError,
            FitError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PxpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
