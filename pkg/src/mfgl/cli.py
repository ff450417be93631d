"""Command-line surface: parse Hamiltonian specs, run analyses, write reports.

Commands
--------
analyze       complexity parameters, scalar roots where applicable, and
              multi-start fixed points with structural-set membership
fixed-points  multi-start fixed points only
ld-scan       smoothed-cutoff construction, tail/TV audits, and the lambda
              scan over the conditioning window
audit         named audit suites (appendix, proximity, main, ld, tightness, all)
report        re-serialize an existing JSON report (e.g. to CSV)

Hamiltonian spec JSON schema (one object, dispatch on "type"):
    {"type": "linear", "theta": [0.1, -0.2]}
    {"type": "ising", "coupling": [[0,1],[1,0]], "field": [0,0]}   # row-major
    {"type": "curie_weiss", "beta": 2.0, "n": 8}
    {"type": "triangle_count", "beta": 1.0, "num_vertices": 5}
    {"type": "sparse_fourier", "n": 6, "terms": [{"subset": [0, 2], "coeff": 1.5}]}
    {"type": "smoothed_cutoff", "inner": {...}, "t": 0.5, "delta": 0.05}
Matrices are row-major nested arrays; subsets are sorted index lists.

Every flag can be defaulted through an environment variable with the MFGL_
prefix (e.g. MFGL_SEED, MFGL_SAMPLES, MFGL_MAX_N); explicit flags win.
Numbers in reports are emitted with 17 significant digits and reports are
written atomically (temp file + rename), so identical configs and seeds
produce byte-identical files.  Exit codes: 0 success, 1 input error,
2 at least one proven-bound audit failed.
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
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .boolfn import CapExceeded, DimensionMismatch, FourierExpansion, vertex_values
from .complexity import complexity_params
from .hamiltonians import (
    BuiltHamiltonian,
    CurieWeissSpec,
    HamiltonianSpec,
    InvalidSpec,
    IsingSpec,
    LinearSpec,
    SmoothedCutoffSpec,
    SparseFourierSpec,
    TriangleCountSpec,
    build_hamiltonian,
    ising_complexity_bounds,
    CutoffShape,
    smoothed_cutoff_weights,
)
from .meanfield import (
    FixedPointSolution,
    curie_weiss_roots,
    lambda_scan,
    solve_multistart,
    structural_set_test,
)
from .verify import (
    AuditRow,
    audit_chain_rule_and_moments,
    audit_large_deviations,
    audit_main_residuals,
    audit_product_proximity,
    audit_tanh_mean_swap,
    failures,
    sample_tilts,
    tightness_demo,
)

ENV_PREFIX = "MFGL_"
SUITES = ("appendix", "proximity", "main", "ld", "tightness", "all")

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_AUDIT_FAILED = 2


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    command: str
    spec_path: Optional[str] = None
    out_path: Optional[str] = None
    fmt: str = "json"
    seed: int = 0
    samples: int = 100_000
    tol: float = 1e-10
    damping: float = 0.5
    epsilon: float = 0.2
    t: Optional[float] = None
    delta: Optional[float] = None
    max_n: int = 20
    transport_max_states: int = 256
    suite: str = "all"
    lambda_grid: str = "1e-2:1e2:64"
    timings: bool = False

    def validate(self) -> None:
        if self.fmt not in ("json", "csv"):
            raise InputError(f"unsupported format {self.fmt!r}")
        if self.max_n < 1 or self.transport_max_states < 1:
            raise InputError("caps must be at least 1")
        if self.tol <= 0:
            raise InputError("tol must be positive")
        if not (0.0 < self.damping <= 1.0):
            raise InputError("damping must lie in (0, 1]")
        if self.suite not in SUITES:
            raise InputError(f"unknown suite {self.suite!r}; choose from {SUITES}")

    def parsed_lambda_grid(self) -> np.ndarray:
        try:
            lo, hi, count = self.lambda_grid.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
        except ValueError as exc:
            raise InputError(f"bad lambda grid {self.lambda_grid!r}, want LO:HI:COUNT") from exc
        if not (0 < lo < hi) or count < 1:
            raise InputError("lambda grid needs 0 < LO < HI and COUNT >= 1")
        pos = np.geomspace(lo, hi, count)
        return np.unique(np.concatenate([-pos[::-1], [0.0], pos]))


_ENV_FIELDS = {
    "spec_path": ("MFGL_SPEC", str),
    "out_path": ("MFGL_OUT", str),
    "fmt": ("MFGL_FORMAT", str),
    "seed": ("MFGL_SEED", int),
    "samples": ("MFGL_SAMPLES", int),
    "tol": ("MFGL_TOL", float),
    "damping": ("MFGL_DAMPING", float),
    "epsilon": ("MFGL_EPSILON", float),
    "t": ("MFGL_T", float),
    "delta": ("MFGL_DELTA", float),
    "max_n": ("MFGL_MAX_N", int),
    "transport_max_states": ("MFGL_TRANSPORT_MAX_STATES", int),
    "suite": ("MFGL_SUITE", str),
    "lambda_grid": ("MFGL_LAMBDA_GRID", str),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfgl", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"mfgl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "fixed-points", "ld-scan", "audit", "report"):
        p = sub.add_parser(name)
        p.add_argument("--spec", dest="spec_path", help="Hamiltonian spec JSON (or input report for `report`)")
        p.add_argument("--out", dest="out_path", help="output path; stdout when omitted")
        p.add_argument("--format", dest="fmt", choices=("json", "csv"))
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--damping", type=float)
        p.add_argument("--epsilon", type=float)
        p.add_argument("--t", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--max-n", dest="max_n", type=int)
        p.add_argument("--transport-max-states", dest="transport_max_states", type=int)
        p.add_argument("--suite", choices=SUITES)
        p.add_argument("--lambda-grid", dest="lambda_grid", help="LO:HI:COUNT geometric grid, mirrored, plus 0")
        p.add_argument("--timings", action="store_true", default=None,
                       help="record wall-clock stage timings (breaks byte-identical reports)")
    return parser


def build_config(argv: Sequence[str], env: dict | None = None) -> RunConfig:
    env = dict(os.environ if env is None else env)
    ns = _build_parser().parse_args(list(argv))
    config = RunConfig(command=ns.command)
    for field_name, (env_key, cast) in _ENV_FIELDS.items():
        cli_val = getattr(ns, field_name, None)
        if cli_val is not None:
            setattr(config, field_name, cli_val)
        elif env_key in env:
            try:
                setattr(config, field_name, cast(env[env_key]))
            except ValueError as exc:
                raise InputError(f"bad value for {env_key}: {env[env_key]!r}") from exc
    if ns.timings is not None:
        config.timings = ns.timings
    config.validate()
    return config


# ---------------------------------------------------------------------------
# Hamiltonian spec wire format
# ---------------------------------------------------------------------------


def spec_from_dict(data: dict) -> HamiltonianSpec:
    if not isinstance(data, dict) or "type" not in data:
        raise InputError("Hamiltonian spec must be an object with a 'type' key")
    kind = data["type"]
    try:
        if kind == "linear":
            return LinearSpec(tuple(data["theta"]))
        if kind == "ising":
            return IsingSpec(tuple(map(tuple, data["coupling"])), tuple(data["field"]))
        if kind == "curie_weiss":
            return CurieWeissSpec(float(data["beta"]), int(data["n"]))
        if kind == "triangle_count":
            return TriangleCountSpec(float(data["beta"]), int(data["num_vertices"]))
        if kind == "sparse_fourier":
            terms = tuple((tuple(t["subset"]), float(t["coeff"])) for t in data["terms"])
            return SparseFourierSpec(int(data["n"]), terms)
        if kind == "smoothed_cutoff":
            return SmoothedCutoffSpec(spec_from_dict(data["inner"]),
                                      float(data["t"]), float(data["delta"]))
    except (KeyError, TypeError, InvalidSpec) as exc:
        raise InputError(f"malformed {kind!r} spec: {exc}") from exc
    raise InputError(f"unknown Hamiltonian type {kind!r}")


def spec_to_dict(spec: HamiltonianSpec) -> dict:
    if isinstance(spec, LinearSpec):
        return {"type": "linear", "theta": list(spec.theta)}
    if isinstance(spec, IsingSpec):
        return {"type": "ising", "coupling": [list(r) for r in spec.coupling],
                "field": list(spec.field)}
    if isinstance(spec, CurieWeissSpec):
        return {"type": "curie_weiss", "beta": spec.beta, "n": spec.n}
    if isinstance(spec, TriangleCountSpec):
        return {"type": "triangle_count", "beta": spec.beta, "num_vertices": spec.num_vertices}
    if isinstance(spec, SparseFourierSpec):
        return {"type": "sparse_fourier", "n": spec.n,
                "terms": [{"subset": list(s), "coeff": c} for s, c in spec.terms]}
    if isinstance(spec, SmoothedCutoffSpec):
        return {"type": "smoothed_cutoff", "inner": spec_to_dict(spec.inner),
                "t": spec.t, "delta": spec.delta}
    raise InputError(f"unknown spec type {type(spec).__name__}")


def load_spec(path: str) -> HamiltonianSpec:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"spec file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"spec file is not valid JSON: {exc}") from exc
    return spec_from_dict(data)


# ---------------------------------------------------------------------------
# Report serialization (17 significant digits, deterministic)
# ---------------------------------------------------------------------------


def _emit_json(obj, out: list, indent: int) -> None:
    pad = " " * indent
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            out.append("null")
        else:
            out.append(format(x, ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(pad + "  " + json.dumps(str(k)) + ": ")
            _emit_json(v, out, indent + 2)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(seq):
            out.append(pad + "  ")
            _emit_json(v, out, indent + 2)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


CSV_COLUMNS = ("check_id", "measured", "bound", "ratio", "pass", "kind",
               "hypothesis_met", "instance")


def serialize_report(report: dict, fmt: str) -> bytes:
    """Render a report as JSON (full document) or CSV (flat audit projection)."""
    if fmt == "json":
        out: list[str] = []
        _emit_json(report, out, 0)
        out.append("\n")
        return "".join(out).encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in report.get("audits", []):
            writer.writerow([
                row["check_id"],
                _csv_num(row["measured"]),
                _csv_num(row["bound"]),
                _csv_num(row["ratio"]),
                str(bool(row["pass"])).lower(),
                row["kind"],
                str(bool(row["hypothesis_met"])).lower(),
                json.dumps(row["instance"], sort_keys=True),
            ])
        return buf.getvalue().encode()
    raise InputError(f"unsupported format {fmt!r}")


def _csv_num(x) -> str:
    if x is None:
        return ""
    x = float(x)
    return format(x, ".17g") if math.isfinite(x) else ""


def parse_report(data: bytes | str) -> dict:
    return json.loads(data)


def write_atomic(path: str, data: bytes) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Row/solution conversion
# ---------------------------------------------------------------------------


def _round_trip_float(x: float) -> float:
    return x if x is None or not math.isfinite(x) else float(format(x, ".17g"))


def _solution_dict(sol: FixedPointSolution, xf=None) -> dict:
    out = {
        "start_id": sol.start_id,
        "lambda": sol.lam,
        "point": [float(v) for v in sol.point],
        "residual_l1": sol.residual_l1,
        "iterations": sol.iterations,
        "converged": sol.converged,
    }
    if xf is not None:
        out["structural_set"] = {
            "threshold": xf.threshold,
            "residual": xf.residual,
            "member": xf.member,
            "residual_over_n": xf.residual_over_n,
        }
    return out


def _row_dicts(rows: Sequence[AuditRow]) -> list[dict]:
    out = []
    for r in rows:
        d = r.as_dict()
        d["measured"] = None if not math.isfinite(d["measured"]) else d["measured"]
        d["bound"] = None if not math.isfinite(d["bound"]) else d["bound"]
        out.append(d)
    return out


def _params_dict(p) -> dict:
    return {
        "d": p.d, "d_stderr": p.d_stderr, "l1": p.l1, "l2": p.l2,
        "d_provenance": p.d_provenance, "l1_provenance": p.l1_provenance,
        "l2_provenance": p.l2_provenance,
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _new_report(config: RunConfig, spec_dict: dict | None) -> dict:
    cfg = asdict(config)
    cfg["hamiltonian"] = spec_dict
    return {"config": cfg, "params": None, "solutions": [], "audits": [], "timings": {}}


def _require_spec(config: RunConfig) -> tuple[HamiltonianSpec, BuiltHamiltonian]:
    if not config.spec_path:
        raise InputError(f"command {config.command!r} requires --spec")
    spec = load_spec(config.spec_path)
    return spec, build_hamiltonian(spec, config.max_n)


def _cmd_analyze(config: RunConfig) -> tuple[int, dict]:
    spec, built = _require_spec(config)
    report = _new_report(config, spec_to_dict(spec))
    timer = _Timer(report, config.timings)
    with timer.stage("complexity"):
        params = complexity_params(built.expansion, samples=config.samples,
                                   seed=config.seed, max_n=config.max_n)
    report["params"] = _params_dict(params)
    if isinstance(spec, IsingSpec):
        bounds = ising_complexity_bounds(*spec.matrices())
        report["closed_form_bounds"] = _params_dict(bounds)
    elif isinstance(spec, CurieWeissSpec):
        a = 2.0 * spec.beta / spec.n * (np.ones((spec.n, spec.n)) - np.eye(spec.n))
        report["closed_form_bounds"] = _params_dict(ising_complexity_bounds(a, np.zeros(spec.n)))
        report["scalar_roots"] = [float(r) for r in curie_weiss_roots(spec.beta)]
    with timer.stage("fixed_points"):
        field = built.gradient if built.gradient is not None else built.expansion
        sols = solve_multistart(field, built.expansion.n, lam=1.0, seed=config.seed,
                                damping=config.damping, tol=config.tol)
    report["solutions"] = [
        _solution_dict(s, structural_set_test(field, s.point, params, n=built.expansion.n) if s.converged else None)
        for s in sols
    ]
    return EXIT_OK, report


def _cmd_fixed_points(config: RunConfig) -> tuple[int, dict]:
    spec, built = _require_spec(config)
    report = _new_report(config, spec_to_dict(spec))
    field = built.gradient if built.gradient is not None else built.expansion
    sols = solve_multistart(field, built.expansion.n, lam=1.0, seed=config.seed,
                            damping=config.damping, tol=config.tol)
    report["solutions"] = [_solution_dict(s) for s in sols]
    return EXIT_OK, report


def _cmd_ld_scan(config: RunConfig) -> tuple[int, dict]:
    spec, built = _require_spec(config)
    if config.t is None or config.delta is None:
        raise InputError("ld-scan requires --t and --delta")
    f = built.expansion
    report = _new_report(config, spec_to_dict(spec))
    fvals = vertex_values(f, config.max_n)
    rows = audit_large_deviations(f, config.t, config.delta, max_n=config.max_n,
                                  instance={"spec": config.spec_path})
    report["audits"] = _row_dicts(rows)
    if rows and rows[0].kind == "error":
        print(f"witness-missing: no vertex reaches f >= t*n = {config.t * f.n:.17g} "
              f"(max f = {float(fvals.max()):.17g})", file=sys.stderr)
        return EXIT_INPUT_ERROR, report
    cutoff = smoothed_cutoff_weights(f, config.t, config.delta, config.max_n)
    # The derived lower-cutoff width delta' sits below the looser 2*delta
    # description; report both so the gap stays visible.
    report["cutoff"] = {
        "t": config.t,
        "delta": config.delta,
        "delta_prime": cutoff.delta_prime,
        "two_delta_upper_bound": 2.0 * config.delta,
        "delta_prime_within_two_delta": cutoff.delta_prime <= 2.0 * config.delta,
        "window": [(config.t - 6.0 * config.delta) * f.n, config.t * f.n],
        "zero_band_states": int(cutoff.zero_mask.sum()),
        "mid_band_states": int(cutoff.mid_mask.sum()),
        "top_band_states": int(cutoff.top_mask.sum()),
    }
    timer = _Timer(report, config.timings)
    with timer.stage("lambda_scan"):
        sols = lambda_scan(f, config.t, config.delta,
                           lambda_grid=config.parsed_lambda_grid(), seed=config.seed,
                           tol=max(config.tol, 1e-10), damping=config.damping)
    report["solutions"] = [_solution_dict(s) for s in sols]
    return (EXIT_AUDIT_FAILED if failures(rows) else EXIT_OK), report


def _default_random_instances(seed: int, count: int, n_range=(4, 8), degree=3):
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        terms = []
        for _ in range(int(rng.integers(3, 3 + 2 * n))):
            size = int(rng.integers(1, degree + 1))
            subset = tuple(sorted(rng.choice(n, size=size, replace=False).tolist()))
            terms.append((subset, float(rng.normal())))
        out.append((k, FourierExpansion.from_terms(n, terms)))
    return out


def _cmd_audit(config: RunConfig) -> tuple[int, dict]:
    spec_dict = None
    built = None
    if config.spec_path:
        spec, built = _require_spec(config)
        spec_dict = spec_to_dict(spec)
    report = _new_report(config, spec_dict)
    rows: list[AuditRow] = []
    suites = SUITES[:-1] if config.suite == "all" else (config.suite,)
    timer = _Timer(report, config.timings)

    if "appendix" in suites:
        with timer.stage("appendix"):
            rows.append(audit_tanh_mean_swap(2000, (1.0, 5.0), seed=config.seed))
            rng = np.random.default_rng(config.seed + 1)
            for k, f in _default_random_instances(config.seed + 2, 3, n_range=(6, 8), degree=2):
                means = [rng.uniform(-0.9, 0.9, f.n) for _ in range(4)]
                rows.extend(audit_chain_rule_and_moments(f, CutoffShape(), means, seed=config.seed,
                                                max_n=config.max_n,
                                                instance={"suite_instance": k}))
            t_rows, _ = tightness_demo([16, 64, 256])
            rows.extend(t_rows)

    if "proximity" in suites:
        with timer.stage("proximity"):
            instances = ([(0, built.expansion)] if built is not None
                         else _default_random_instances(config.seed + 3, 4, n_range=(4, 6)))
            for k, f in instances:
                thetas = [np.zeros(f.n)] + list(sample_tilts(f.n, config.epsilon, 4,
                                                             seed=config.seed + 10 + k))
                rows.extend(audit_product_proximity(f, thetas, max_states=config.transport_max_states,
                                         max_n=config.max_n, instance={"suite_instance": k}))

    if "main" in suites:
        with timer.stage("main"):
            f = built.expansion if built is not None else build_hamiltonian(
                CurieWeissSpec(2.0, 8)).expansion
            params = complexity_params(f, samples=min(config.samples, 20_000),
                                       seed=config.seed, max_n=config.max_n)
            thetas = sample_tilts(f.n, config.epsilon, 8, seed=config.seed + 20)
            rows.extend(audit_main_residuals(f, thetas, config.epsilon, params,
                                             max_n=config.max_n,
                                             instance={"spec": config.spec_path}))

    if "ld" in suites:
        with timer.stage("ld"):
            if built is not None and config.t is not None and config.delta is not None:
                f, t, delta = built.expansion, config.t, config.delta
            else:
                f = build_hamiltonian(CurieWeissSpec(1.5, 10)).expansion
                t, delta = 0.675, 0.05
            rows.extend(audit_large_deviations(f, t, delta, max_n=config.max_n,
                                               instance={"spec": config.spec_path}))

    if "tightness" in suites:
        with timer.stage("tightness"):
            t_rows, _ = tightness_demo([16, 64, 256, 1024])
            rows.extend(t_rows)

    report["audits"] = _row_dicts(rows)
    bad = failures(rows)
    errors = [r for r in rows if r.kind == "error"]
    report["summary"] = {
        "rows": len(rows),
        "bound_rows": sum(1 for r in rows if r.kind == "bound" and r.hypothesis_met),
        "failures": len(bad),
        "errors": len(errors),
    }
    if errors:
        return EXIT_INPUT_ERROR, report
    return (EXIT_AUDIT_FAILED if bad else EXIT_OK), report


def _cmd_report(config: RunConfig) -> tuple[int, dict]:
    if not config.spec_path:
        raise InputError("report requires --spec pointing at an existing JSON report")
    try:
        report = parse_report(Path(config.spec_path).read_bytes())
    except FileNotFoundError as exc:
        raise InputError(f"report not found: {config.spec_path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"input is not a JSON report: {exc}") from exc
    if not isinstance(report, dict) or "audits" not in report:
        raise InputError("input does not look like a report (missing 'audits')")
    return EXIT_OK, report


class _Timer:
    def __init__(self, report: dict, enabled: bool):
        self.report = report
        self.enabled = enabled

    def stage(self, name: str):
        timer = self

        class _Stage:
            def __enter__(self):
                self.start = time.perf_counter()

            def __exit__(self, *exc):
                if timer.enabled:
                    timer.report["timings"][name] = time.perf_counter() - self.start
                return False

        return _Stage()


_COMMANDS = {
    "analyze": _cmd_analyze,
    "fixed-points": _cmd_fixed_points,
    "ld-scan": _cmd_ld_scan,
    "audit": _cmd_audit,
    "report": _cmd_report,
}


def run(config: RunConfig) -> tuple[int, dict | None]:
    """Execute one command; returns (exit status, report)."""
    config.validate()
    code, report = _COMMANDS[config.command](config)
    payload = serialize_report(report, config.fmt)
    if config.out_path:
        write_atomic(config.out_path, payload)
    else:
        sys.stdout.write(payload.decode())
    return code, report


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = build_config(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; remap usage
        # errors onto the input-error code to keep 2 for audit failures.
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT_ERROR
    try:
        code, _ = run(config)
        return code
    except (InputError, InvalidSpec, CapExceeded, DimensionMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
