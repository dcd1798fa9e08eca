"""Config-driven batch runner.

    warped-ineq verify --config cfg.json --out results/
    warped-ineq --list-inequalities

A config is one JSON document with the keys ``models``, ``experiments`` and
optionally ``output`` and ``workers``; unknown keys anywhere are errors.
See README.md for the full schema.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import functionals as F
from .geometry import DimensionError, ManifoldModel, curvatures
from .profiles import FAMILIES, ProfileError, make_builtin_profile
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .sharpness import SharpnessResult, ground_state_product, sequence_sweep, spectral_sweep
from .testfunctions import ModalTestFunction, log_uniform_bumps, make_spline

KINDS = ("verify", "sharpness", "sequence", "curvature")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
TEST_KINDS = ("bump", "spline", "ground_state_product")
# ground-state products have kinks at their ends: first-order statements only
GROUND_STATE_IDS = ("first_order", "first_order_poincare")


class ConfigError(ValueError):
    pass


# --- config -----------------------------------------------------------------


def _keys(obj, where, required=(), optional=()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ConfigError(f"{where}: missing key(s) {missing}")


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise ConfigError(f"{where}: expected a finite number, got {x!r}")
    return float(x)


def _pair(x, where):
    if not (isinstance(x, (list, tuple)) and len(x) == 2):
        raise ConfigError(f"{where}: expected [lo, hi]")
    lo, hi = (_number(v, where) for v in x)
    if not lo < hi:
        raise ConfigError(f"{where}: need lo < hi")
    return lo, hi


@dataclass(frozen=True)
class ModelEntry:
    name: str
    model: ManifoldModel


@dataclass(frozen=True)
class TestFunctionSpec:
    kind: str
    count: int
    support: tuple
    width: object
    seed: int
    modes: tuple = (0,)


@dataclass(frozen=True)
class Experiment:
    index: int
    kind: str
    name: str
    models: tuple
    inequality: str = ""
    target: str = ""
    beta: float = 0.0
    tests: TestFunctionSpec | None = None
    quadrature: QuadratureSpec = DEFAULT_SPEC
    n_values: tuple = ()
    alpha: float = 2.0
    radii: tuple = ()
    grid_points: int = 4000
    eps: float | None = None
    window: tuple | None = None


@dataclass(frozen=True)
class RunConfig:
    models: tuple
    experiments: tuple
    output_format: str = "csv"
    output_path: str = "results"
    workers: int = 1


def _parse_model(obj, i):
    where = f"models[{i}]"
    _keys(obj, where, ("family", "N"), ("params", "name"))
    fam = obj["family"]
    if fam not in FAMILIES or fam == "custom":
        raise ConfigError(f"{where}: unknown family {fam!r}")
    N = obj["N"]
    if isinstance(N, bool) or not isinstance(N, int):
        raise ConfigError(f"{where}: N must be an integer")
    try:
        prof = make_builtin_profile(fam, obj.get("params", {}))
        model = ManifoldModel(N, prof)
    except (ProfileError, DimensionError, ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    name = obj.get("name") or f"{fam}_N{N}"
    return ModelEntry(str(name), model)


def _parse_tests(obj, where):
    _keys(obj, where, ("count", "support", "seed"), ("width", "kind", "modes"))
    kind = obj.get("kind", "bump")
    if kind not in TEST_KINDS:
        raise ConfigError(f"{where}.kind: expected one of {list(TEST_KINDS)}")
    count = obj["count"]
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise ConfigError(f"{where}.count: positive integer required")
    seed = obj["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError(f"{where}.seed: 64-bit non-negative integer required")
    support = _pair(obj["support"], f"{where}.support")
    if support[0] < 0:
        raise ConfigError(f"{where}.support: must lie in [0, inf)")
    if kind == "ground_state_product":
        if "width" in obj:
            raise ConfigError(f"{where}.width: not used by ground_state_product")
        if support[0] <= 0:
            raise ConfigError(f"{where}.support: ground_state_product needs support[0] > 0")
        width = None
    else:
        width = obj.get("width", 0.5)
        width = _pair(width, f"{where}.width") if isinstance(width, list) else _number(width, f"{where}.width")
        wmax = width[1] if isinstance(width, tuple) else width
        if not (np.min(width) > 0 and support[0] + wmax < support[1] - wmax):
            raise ConfigError(f"{where}: support {list(support)} too narrow for width {width}")
    modes = obj.get("modes", [0])
    if not (isinstance(modes, list) and modes and all(isinstance(m, int) and m >= 0 for m in modes)):
        raise ConfigError(f"{where}.modes: non-empty list of non-negative integers required")
    if len(set(modes)) != len(modes):
        raise ConfigError(f"{where}.modes: indices must be distinct")
    return TestFunctionSpec(kind, count, support, width, seed, tuple(modes))


def _parse_quadrature(obj, where):
    _keys(obj, where, (), ("rel_tol", "abs_tol", "max_subdivisions", "panel_rule"))
    try:
        return DEFAULT_SPEC.replace(**obj)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


_EXPERIMENT_KEYS = {
    "verify": (("kind", "inequality", "test_functions"), ("name", "models", "beta", "quadrature")),
    "sequence": (("kind", "n"), ("name", "models", "alpha", "window")),
    "sharpness": (("kind", "target", "radii"), ("name", "models", "grid_points", "eps", "window")),
    "curvature": (("kind", "radii"), ("name", "models")),
}


def _parse_experiment(obj, i, models):
    where = f"experiments[{i}]"
    if not isinstance(obj, dict) or obj.get("kind") not in KINDS:
        raise ConfigError(f"{where}.kind: expected one of {list(KINDS)}")
    kind = obj["kind"]
    _keys(obj, where, *_EXPERIMENT_KEYS[kind])
    names = obj.get("models")
    if names is None:
        chosen = tuple(models)
    else:
        if not isinstance(names, list):
            raise ConfigError(f"{where}.models: list of model names required")
        by_name = {m.name: m for m in models}
        bad = [n for n in names if n not in by_name]
        if bad:
            raise ConfigError(f"{where}.models: unknown model(s) {bad}")
        chosen = tuple(by_name[n] for n in names)
    kw = {"index": i, "kind": kind, "models": chosen}
    window = obj.get("window")
    if window is not None:
        kw["window"] = _pair(window, f"{where}.window")

    if kind == "verify":
        iid = obj["inequality"]
        if iid not in F.CATALOG:
            raise ConfigError(f"{where}.inequality: unknown id {iid!r}; see --list-inequalities")
        _, min_n, input_kind, takes_beta, _ = F.CATALOG[iid]
        beta = _number(obj.get("beta", 0.0), f"{where}.beta")
        if "beta" in obj and not takes_beta:
            raise ConfigError(f"{where}.beta: {iid} takes no weight exponent")
        tests = _parse_tests(obj["test_functions"], f"{where}.test_functions")
        if tests.kind == "ground_state_product" and (iid not in GROUND_STATE_IDS or tests.modes != (0,)):
            raise ConfigError(f"{where}.test_functions.kind: ground_state_product only feeds {list(GROUND_STATE_IDS)}")
        if input_kind != "modal" and tests.modes != (0,):
            raise ConfigError(f"{where}.test_functions.modes: {iid} takes radial inputs only")
        if input_kind == "line":
            chosen = ()
        elif not chosen:
            raise ConfigError(f"{where}: {iid} needs at least one model")
        for m in chosen:
            N = m.model.N
            if N < min_n:
                raise ConfigError(f"{where}: {iid} requires N >= {min_n}, got N = {N} (model {m.name})")
            if takes_beta and not 0 <= beta < N - 4:
                raise ConfigError(f"{where}: {iid} requires 0 <= beta < N - 4 = {N - 4}, got beta = {beta:g} (model {m.name})")
            if iid.startswith("proto_"):
                fam = F.PROTOTYPE_FAMILY[{"proto_exp": "proto", "proto_rexp": "proto2", "proto_gauss": "gauss"}[iid]]
                if m.model.profile.family != fam:
                    raise ConfigError(f"{where}: {iid} needs a {fam} model, got {m.model.profile.family} ({m.name})")
            vf = m.model.profile.valid_from
            if tests.support[0] < vf or (iid.startswith("proto_") and tests.support[0] <= 0):
                raise ConfigError(f"{where}: support must start at or beyond R = {vf:g} for model {m.name}")
        kw.update(
            inequality=iid,
            beta=beta,
            tests=tests,
            models=chosen,
            quadrature=_parse_quadrature(obj.get("quadrature", {}), f"{where}.quadrature"),
        )
        kw["name"] = obj.get("name") or iid
    elif kind == "sequence":
        ns = obj["n"]
        if not (isinstance(ns, list) and len(ns) >= 4):
            raise ConfigError(f"{where}.n: at least 4 values required for the fit")
        ns = tuple(_number(v, f"{where}.n") for v in ns)
        if any(v < 3 for v in ns) or list(ns) != sorted(set(ns)):
            raise ConfigError(f"{where}.n: strictly increasing values >= 3 required")
        kw.update(n_values=ns, alpha=_number(obj.get("alpha", 2.0), f"{where}.alpha"))
        for m in chosen:
            if not m.model.profile.is_global:
                raise ConfigError(f"{where}: sequence needs a global model, {m.name} is a tail profile")
        kw["name"] = obj.get("name") or "sequence"
    elif kind == "sharpness":
        target = obj["target"]
        if target not in ("poincare_gap", "cm_quotient"):
            raise ConfigError(f"{where}.target: expected 'poincare_gap' or 'cm_quotient'")
        radii = obj["radii"]
        if not (isinstance(radii, list) and len(radii) >= 2):
            raise ConfigError(f"{where}.radii: at least 2 radii required")
        radii = tuple(sorted(_number(v, f"{where}.radii") for v in radii))
        if radii[0] <= 1:
            raise ConfigError(f"{where}.radii: every R must exceed 1")
        gp = obj.get("grid_points", 4000)
        if isinstance(gp, bool) or not isinstance(gp, int) or gp < 256:
            raise ConfigError(f"{where}.grid_points: integer >= 256 required")
        eps = obj.get("eps")
        for m in chosen:
            if not m.model.profile.is_global:
                raise ConfigError(f"{where}: spectral estimates need a global model, {m.name} is a tail profile")
        kw.update(
            target=target,
            radii=radii,
            grid_points=gp,
            eps=None if eps is None else _number(eps, f"{where}.eps"),
        )
        kw["name"] = obj.get("name") or target
    else:
        r = obj["radii"]
        if isinstance(r, dict):
            _keys(r, f"{where}.radii", ("start", "stop", "num"))
            grid = np.linspace(_number(r["start"], where), _number(r["stop"], where), int(r["num"]))
        elif isinstance(r, list) and r:
            grid = np.array([_number(v, f"{where}.radii") for v in r])
        else:
            raise ConfigError(f"{where}.radii: list or {{start, stop, num}} required")
        for m in chosen:
            lo = 1e-6 if m.model.profile.is_global else m.model.profile.valid_from
            if np.any(grid < lo):
                raise ConfigError(f"{where}.radii: {m.name} is only evaluated for r >= {lo:g}")
        kw.update(radii=tuple(float(x) for x in grid))
        kw["name"] = obj.get("name") or "curvature"
    return Experiment(**kw)


def parse_config(obj):
    _keys(obj, "config", ("models", "experiments"), ("output", "workers"))
    if not isinstance(obj["models"], list) or not isinstance(obj["experiments"], list):
        raise ConfigError("config: models and experiments must be lists")
    models = tuple(_parse_model(m, i) for i, m in enumerate(obj["models"]))
    names = [m.name for m in models]
    if len(set(names)) != len(names):
        raise ConfigError(f"models: duplicate names {names}")
    experiments = tuple(_parse_experiment(e, i, models) for i, e in enumerate(obj["experiments"]))
    out = obj.get("output", {})
    _keys(out, "output", (), ("format", "path"))
    fmt = out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("output.format: expected 'csv' or 'json'")
    workers = obj.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigError("workers: positive integer required")
    return RunConfig(models, experiments, fmt, str(out.get("path", "results")), workers)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(obj)


# --- execution --------------------------------------------------------------


def draw_test_functions(spec: TestFunctionSpec, stream: int, model=None):
    """Seeded draws; ``stream`` separates the models of one experiment.

    ground_state_product draws put the inner end log-uniformly in the lowest
    tenth of the log-span of the support and the outer end in the highest tenth.
    """
    rng = np.random.default_rng([spec.seed, stream])
    if spec.kind == "ground_state_product":
        if model is None:
            raise ValueError("ground_state_product draws need a model")
        lo, hi = np.log(spec.support)
        span = 0.1 * (hi - lo)

        def draw():
            a = float(np.exp(rng.uniform(lo, lo + span)))
            b = float(np.exp(rng.uniform(hi - span, hi)))
            return ground_state_product(model, a, b)
    elif spec.kind == "bump":
        draw = lambda: log_uniform_bumps(rng, 1, spec.support, spec.width)[0]
    else:
        def draw():
            lo, hi = spec.support
            w = float(rng.uniform(*spec.width)) if isinstance(spec.width, tuple) else spec.width
            c = float(np.exp(rng.uniform(np.log(max(lo + w, 1e-12)), np.log(hi - w))))
            return make_spline(max(c - w, 1e-12), c + w)
    out = []
    for _ in range(spec.count):
        if spec.modes == (0,):
            out.append(draw())
        else:
            out.append(ModalTestFunction(tuple((n, draw()) for n in spec.modes)))
    return out


@dataclass
class ExperimentOutcome:
    experiment: Experiment
    failures: list = field(default_factory=list)
    files: list = field(default_factory=list)


def _evaluate(exp, entry, u):
    fn = F.CATALOG[exp.inequality][0]
    _, _, input_kind, takes_beta, _ = F.CATALOG[exp.inequality]
    if input_kind == "line":
        return fn(u, exp.quadrature)
    if takes_beta:
        return fn(entry.model, u, exp.beta, exp.quadrature)
    return fn(entry.model, u, spec=exp.quadrature)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def reports_to_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    terms = []
    for rep in reports:
        for k in rep.terms:
            if k not in terms:
                terms.append(k)
    w.writerow(
        ["inequality_id", "model", "N", "params", "test_function", *terms,
         "margin", "quotient", "error", "hypothesis_ok", "passed"]
    )
    for rep in reports:
        row = [rep.inequality_id, rep.model, _fmt(rep.N), json.dumps(rep.params, sort_keys=True), rep.test_function]
        row += [_fmt(rep.terms.get(k)) for k in terms]
        row += [_fmt(rep.margin), _fmt(rep.quotient), _fmt(rep.quadrature_error), _fmt(rep.hypothesis_ok), _fmt(rep.passed)]
        w.writerow(row)
    return buf.getvalue()


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not serialisable: {type(o).__name__}")


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def emit_plot_data(result: SharpnessResult, path):
    """Two-column (parameter, value) CSV headed by the fitted model and limit."""
    if len(result.samples) < 2:
        raise ValueError("plot data needs at least 2 samples")
    param = "n" if result.experiment_id == "sequence_quotient" else "R"
    value = "quotient" if result.experiment_id != "poincare_gap" else "lambda_min"
    buf = io.StringIO()
    buf.write(f"# fit: {result.fit_model}; c0={result.fitted_limit!r}; rms={result.fit_residual!r}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([param, value])
    for p, v in result.samples:
        w.writerow([_fmt(float(p)), _fmt(float(v))])
    return atomic_write(path, buf.getvalue())


def _stem(exp):
    safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in exp.name)
    return f"{exp.index:02d}_{exp.kind}_{safe}"


def _run_verify(exp, out_dir, fmt):
    outcome = ExperimentOutcome(exp)
    reports = []
    entries = exp.models or (None,)
    for stream, entry in enumerate(entries):
        for u in draw_test_functions(exp.tests, stream, entry.model if entry else None):
            rep = _evaluate(exp, entry, u)
            reports.append(rep)
            if rep.hypothesis_ok and not rep.passed:
                outcome.failures.append(
                    f"{exp.name}: {rep.model} {rep.test_function}: margin {rep.margin:.6g} < -{rep.slack:.3g}"
                )
    if fmt == "csv":
        path = atomic_write(out_dir / f"{_stem(exp)}.csv", reports_to_csv(reports))
    else:
        path = atomic_write(out_dir / f"{_stem(exp)}.json", _dumps([r.to_dict() for r in reports]))
    outcome.files.append(path)
    return outcome


def _run_sharpness(exp, out_dir, fmt):
    outcome = ExperimentOutcome(exp)
    summary = []
    for entry in exp.models:
        if exp.kind == "sequence":
            res = sequence_sweep(entry.model, exp.n_values, exp.alpha)
            target = "sequence_quotient"
        else:
            res = spectral_sweep(entry.model, exp.target, exp.radii, exp.grid_points, exp.eps)
            target = exp.target
        outcome.files.append(emit_plot_data(res, out_dir / f"{_stem(exp)}__{entry.name}.csv"))
        ok = True
        if exp.window is not None:
            ok = exp.window[0] <= res.fitted_limit <= exp.window[1]
            if not ok:
                outcome.failures.append(
                    f"{exp.name}: {entry.name}: fitted limit {res.fitted_limit:.6g} outside {list(exp.window)}"
                )
        summary.append(
            {
                "model": entry.name,
                "target": target,
                "fitted_limit": res.fitted_limit,
                "fit_residual": res.fit_residual,
                "fit_model": res.fit_model,
                "window": list(exp.window) if exp.window else None,
                "in_window": ok,
                "samples": [[p, v] for p, v in res.samples],
            }
        )
    outcome.files.append(atomic_write(out_dir / f"{_stem(exp)}.json", _dumps(summary)))
    return outcome


def _run_curvature(exp, out_dir, fmt):
    outcome = ExperimentOutcome(exp)
    r = np.array(exp.radii)
    if fmt == "json":
        doc = {}
        for entry in exp.models:
            k, h, lam = curvatures(entry.model, r)
            doc[entry.name] = {"r": r.tolist(), "K": k.tolist(), "H": h.tolist(), "Lambda": lam.tolist()}
        outcome.files.append(atomic_write(out_dir / f"{_stem(exp)}.json", _dumps(doc)))
        return outcome
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["model", "N", "r", "K", "H", "Lambda"])
    for entry in exp.models:
        k, h, lam = curvatures(entry.model, r)
        for row in zip(r, k, h, lam):
            w.writerow([entry.name, entry.model.N, *(_fmt(float(x)) for x in row)])
    outcome.files.append(atomic_write(out_dir / f"{_stem(exp)}.csv", buf.getvalue()))
    return outcome


_RUNNERS = {
    "verify": _run_verify,
    "sequence": _run_sharpness,
    "sharpness": _run_sharpness,
    "curvature": _run_curvature,
}


def _run_one(exp, out_dir, fmt):
    try:
        return _RUNNERS[exp.kind](exp, out_dir, fmt)
    except (ArithmeticError, ValueError) as exc:
        return ExperimentOutcome(exp, failures=[f"{exp.name}: {type(exc).__name__}: {exc}"])


@dataclass
class RunResult:
    status: int
    outcomes: list

    @property
    def files(self):
        return [p for o in self.outcomes for p in o.files]

    @property
    def failures(self):
        return [f for o in self.outcomes for f in o.failures]


def run(config, out_dir=None, kinds=None):
    """Execute every experiment (optionally only those of ``kinds``)."""
    if isinstance(config, dict):
        config = parse_config(config)
    out = Path(out_dir if out_dir is not None else config.output_path)
    todo = [e for e in config.experiments if kinds is None or e.kind in kinds]
    if not todo:
        return RunResult(EXIT_OK, [])
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        outcomes = list(pool.map(lambda e: _run_one(e, out, config.output_format), todo))
    failed = any(o.failures for o in outcomes)
    return RunResult(EXIT_FAIL if failed else EXIT_OK, outcomes)


def list_inequalities(stream=None):
    stream = stream or sys.stdout
    for iid, (_, min_n, kind, beta, statement) in F.CATALOG.items():
        extra = ", beta" if beta else ""
        stream.write(f"{iid:<22} N>={min_n:<2} input={kind}{extra}\n    {statement}\n")


def build_parser():
    p = argparse.ArgumentParser(prog="warped-ineq", description=__doc__.splitlines()[0])
    p.add_argument("--list-inequalities", action="store_true", help="print the inequality catalog and exit")
    sub = p.add_subparsers(dest="command")
    for name, help_ in [
        ("run", "run every experiment in the config"),
        ("verify", "evaluate inequality margins on random test functions"),
        ("sharpness", "spectral estimates of best constants"),
        ("sequence", "minimizing-sequence quotients and their fitted limit"),
        ("curvature", "tabulate K_rad, H_tan and Lambda"),
    ]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", default=None, help="output directory (overrides output.path)")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_inequalities:
        list_inequalities()
        return EXIT_OK
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    kinds = None if args.command == "run" else {args.command}
    result = run(cfg, args.out, kinds)
    for path in result.files:
        print(path)
    if result.failures:
        print(f"{len(result.failures)} failure(s):", file=sys.stderr)
        for f in result.failures:
            print(f"  {f}", file=sys.stderr)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
