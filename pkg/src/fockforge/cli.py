"""Experiment harness: ``fockforge run`` and ``fockforge verify``."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .expstates import exp_homogeneous, gaussian, gaussian_norm2_exact
from .implementer import (build_implementer, cocycle, intertwining_deviation, truncated_cocycle,
                          unitarity_deviation)
from .symalg import FockVector
from .symplectic import make_squeeze, make_unitary, random_symplectic, shale_operator
from .weyl import implementer_kernel, truncated_kernel

EXIT_OK, EXIT_TOLERANCE, EXIT_CONFIG = 0, 1, 2
FORMATS = ("csv", "json")
CORE_KEYS = ("experiment", "modes", "cap", "seed", "out", "format")
DEFAULTS = {"modes": "1", "cap": "20", "seed": "0", "format": "csv"}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    modes: int = 1
    caps: tuple[int, ...] = (20,)
    seed: int = 0
    params: dict[str, str] = field(default_factory=dict)
    out: str | None = None
    format: str = "csv"

    @property
    def cap(self) -> int:
        return max(self.caps)


@dataclass
class ExperimentRow:
    experiment: str
    params: list[tuple[str, object]]
    measured: complex
    reference: complex
    ms: float
    tolerance: float | None = None
    status: str = ""

    @property
    def abs_error(self) -> float:
        if not np.isfinite(self.reference):
            return math.inf
        return float(abs(self.measured - self.reference))

    def failed(self) -> bool:
        return self.status == "fail"


# --- experiments -----------------------------------------------------------------

def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _timed(fn: Callable[[], tuple[complex, complex]]) -> tuple[complex, complex, float]:
    start = time.perf_counter()
    measured, reference = fn()
    return measured, reference, 1e3 * (time.perf_counter() - start)


def _gate(row: ExperimentRow, tol: float | None) -> ExperimentRow:
    row.tolerance = tol
    if tol is None:
        row.status = "info"
    else:
        row.status = "ok" if row.abs_error <= tol else "fail"
    return row


def _exp_gaussian_norm(cfg: ExperimentConfig) -> list[ExperimentRow]:
    p = cfg.params
    lams = _floats(p.get("lam", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"))
    rows = []
    for lam in lams:
        M = lam * np.eye(cfg.modes)
        for cap in cfg.caps:
            meas, ref, ms = _timed(lambda: (gaussian(M, cap).norm2(), gaussian_norm2_exact(M)))
            tol = float(p["tol"]) if "tol" in p else (1e-8 if lam <= 0.7 else 1e-4)
            row = ExperimentRow("gaussian-norm", [("lam", lam), ("cap", cap)], meas, ref, ms)
            rows.append(_gate(row, tol if cap == cfg.cap and np.isfinite(ref) else None))
    return rows


def _fixed_unitary(m: int):
    if m == 1:
        return make_unitary([[np.exp(0.7j)]])
    U = np.eye(m, dtype=complex)
    th, ph = 0.6, 0.3
    U[:2, :2] = [[np.cos(th), -np.exp(1j * ph) * np.sin(th)],
                 [np.exp(-1j * ph) * np.sin(th), np.cos(th)]]
    return make_unitary(U)


def _exp_cocycle(cfg: ExperimentConfig) -> list[ExperimentRow]:
    p = cfg.params
    rs = _floats(p.get("r", "0.3,0.6"))
    tol = float(p.get("tol", 1e-6))
    gens = [(f"S{r:g}", make_squeeze(r, 0, cfg.modes)) for r in rs] + [("U", _fixed_unitary(cfg.modes))]
    rows = []
    for (ng, g), (nh, h) in itertools.product(gens, repeat=2):
        for cap in cfg.caps:
            meas, ref, ms = _timed(lambda: (truncated_cocycle(g, h, cap), cocycle(g, h)))
            row = ExperimentRow("cocycle", [("word", f"{ng}*{nh}"), ("cap", cap)], meas, ref, ms)
            rows.append(_gate(row, tol if cap == cfg.cap else None))
    return rows


def _exp_unitarity(cfg: ExperimentConfig) -> list[ExperimentRow]:
    p = cfg.params
    r = float(p.get("r", 0.4))
    block = int(p.get("block", 8))
    tol = float(p.get("tol", 1e-6))
    g = make_squeeze(r, 0, cfg.modes)
    rows = []
    for cap in cfg.caps:
        if block > cap:
            raise ConfigError(f"block: {block} exceeds cap {cap}")
        meas, ref, ms = _timed(lambda: (unitarity_deviation(g, cap, block), 0.0))
        row = ExperimentRow("unitarity", [("r", r), ("block", block), ("cap", cap)], meas, ref, ms)
        rows.append(_gate(row, tol if cap == cfg.cap else None))
    return rows


def _exp_intertwine(cfg: ExperimentConfig) -> list[ExperimentRow]:
    p = cfg.params
    spread = float(p.get("spread", 0.25))
    count = int(p.get("count", 5))
    tol = float(p.get("tol", 1e-8))
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for i in range(count):
        g = random_symplectic(cfg.modes, cfg.seed * 1000 + i, spread=spread, depth=2)
        v = rng.normal(size=cfg.modes) + 1j * rng.normal(size=cfg.modes)
        znorm = shale_operator(g).norm()
        for cap in cfg.caps:
            imp = build_implementer(g, cap)
            meas, ref, ms = _timed(lambda: (intertwining_deviation(g, v, cap, imp=imp), 0.0))
            row = ExperimentRow("intertwine", [("map", i), ("znorm", round(znorm, 12)), ("cap", cap)],
                                meas, ref, ms)
            rows.append(_gate(row, tol if cap == cfg.cap else None))
    return rows


def _exp_divergence(cfg: ExperimentConfig) -> list[ExperimentRow]:
    p = cfg.params
    kind = p.get("kind", "gaussian")
    if kind not in ("gaussian", "cubic"):
        raise ConfigError(f"kind: expected gaussian or cubic, got {kind!r}")
    lam = float(p.get("lam", 1.0 if kind == "gaussian" else 0.1))
    m = cfg.modes
    if kind == "gaussian":
        M = lam * np.eye(m)
        reference = gaussian_norm2_exact(M) ** 0.5
        build = lambda cap: gaussian(M, cap)  # noqa: E731
    else:
        idx = (3,) + (0,) * (m - 1)
        seed_vec = FockVector(m, 3, {idx: lam * math.sqrt(6.0)})  # lam * e_1^3
        reference = math.inf if lam else 1.0
        build = lambda cap: exp_homogeneous(seed_vec, cap)  # noqa: E731
    rows, prev = [], None
    increasing = True
    for cap in cfg.caps:
        meas, ref, ms = _timed(lambda: (build(cap).norm(), reference))
        increasing &= prev is None or meas > prev
        prev = meas
        row = ExperimentRow("divergence", [("kind", kind), ("lam", lam), ("cap", cap)], meas, ref, ms)
        if math.isinf(ref):
            row.status = "diverges" if increasing else ("fail" if cap == cfg.cap else "bounded")
        else:
            _gate(row, float(p.get("tol", 1e-8)) if cap == cfg.cap else None)
        rows.append(row)
    return rows


def _exp_weyl_kernel(cfg: ExperimentConfig) -> list[ExperimentRow]:
    p = cfg.params
    r = float(p.get("r", 0.4))
    count = int(p.get("count", 20))
    tol = float(p.get("tol", 1e-6))
    g = make_squeeze(r, 0, cfg.modes)
    rng = np.random.default_rng(cfg.seed)
    m = cfg.modes
    rows = []

    def ball():
        z = rng.normal(size=m) + 1j * rng.normal(size=m)
        return z / np.linalg.norm(z) * rng.uniform() ** (1 / (2 * m))

    for i in range(count):
        x, y = ball(), ball()
        for cap in cfg.caps:
            meas, ref, ms = _timed(lambda: (truncated_kernel(g, x, y, cap), implementer_kernel(g, x, y)))
            row = ExperimentRow("weyl-kernel", [("r", r), ("point", i), ("cap", cap)], meas, ref, ms)
            rows.append(_gate(row, tol if cap == cfg.cap else None))
    return rows


EXPERIMENTS: dict[str, tuple[Callable[[ExperimentConfig], list[ExperimentRow]], tuple[str, ...]]] = {
    "gaussian-norm": (_exp_gaussian_norm, ("lam", "tol")),
    "cocycle": (_exp_cocycle, ("r", "tol")),
    "unitarity": (_exp_unitarity, ("r", "block", "tol")),
    "intertwine": (_exp_intertwine, ("spread", "count", "tol")),
    "divergence": (_exp_divergence, ("kind", "lam", "tol")),
    "weyl-kernel": (_exp_weyl_kernel, ("r", "count", "tol")),
}


# --- configuration ---------------------------------------------------------------

def read_config_file(path: str | Path) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"config line {lineno}: empty key")
        values[key] = value
    return values


def _int_field(name: str, text: str, lo: int, hi: int) -> int:
    try:
        val = int(text)
    except ValueError:
        raise ConfigError(f"{name}: expected an integer, got {text!r}") from None
    if not lo <= val <= hi:
        raise ConfigError(f"{name}: {val} outside [{lo}, {hi}]")
    return val


def parse_config(file_values: dict[str, str] | None = None,
                 flag_values: dict[str, str] | None = None) -> ExperimentConfig:
    """Merge defaults, file values and flag values (in that order of precedence)."""
    merged = dict(DEFAULTS)
    merged.update(file_values or {})
    merged.update({k: v for k, v in (flag_values or {}).items() if v is not None})

    name = merged.get("experiment")
    if name is None:
        raise ConfigError("experiment: missing")
    if name not in EXPERIMENTS:
        raise ConfigError(f"experiment: unknown name {name!r} (choose from {', '.join(EXPERIMENTS)})")
    allowed = set(CORE_KEYS) | set(EXPERIMENTS[name][1])
    unknown = sorted(set(merged) - allowed)
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(unknown)}")

    modes = _int_field("modes", merged["modes"], 1, 8)
    caps = tuple(_int_field("cap", c.strip(), 0, 64) for c in merged["cap"].split(",") if c.strip())
    if not caps:
        raise ConfigError("cap: empty grid")
    seed = _int_field("seed", merged["seed"], 0, 2**32 - 1)
    fmt = merged["format"]
    if fmt not in FORMATS:
        raise ConfigError(f"format: expected csv or json, got {fmt!r}")
    params = {k: merged[k] for k in EXPERIMENTS[name][1] if k in merged}
    return ExperimentConfig(name, modes, caps, seed, params, merged.get("out"), fmt)


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRow]:
    fn, _ = EXPERIMENTS[cfg.experiment]
    try:
        return fn(cfg)
    except (ValueError, KeyError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"params: {exc}") from exc


# --- output ----------------------------------------------------------------------

def _num(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def row_record(row: ExperimentRow) -> dict[str, str]:
    rec = {"experiment": row.experiment}
    for i, (k, v) in enumerate(row.params, start=1):
        rec[f"param_{i}"] = f"{k}={v}"
    meas, ref = complex(row.measured), complex(row.reference)
    rec.update({
        "measured_re": _num(meas.real), "measured_im": _num(meas.imag),
        "reference_re": _num(ref.real), "reference_im": _num(ref.imag if np.isfinite(ref.real) else 0.0),
        "abs_error": _num(row.abs_error), "ms": f"{row.ms:.3f}", "status": row.status,
    })
    return rec


def format_rows(rows: list[ExperimentRow], fmt: str) -> str:
    records = [row_record(r) for r in rows]
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    width = max((len(r.params) for r in rows), default=0)
    header = (["experiment"] + [f"param_{i}" for i in range(1, width + 1)]
              + ["measured_re", "measured_im", "reference_re", "reference_im", "abs_error", "ms", "status"])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, restval="", lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    return buf.getvalue()


# --- entry point -----------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fockforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a named experiment over a parameter grid")
    run.add_argument("--experiment")
    run.add_argument("--config")
    run.add_argument("--modes")
    run.add_argument("--cap", help="a degree cap or a comma-separated grid")
    run.add_argument("--seed")
    run.add_argument("--out")
    run.add_argument("--format")
    run.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="experiment parameter, repeatable")
    verify = sub.add_parser("verify", help="run the acceptance suite")
    verify.add_argument("--only", type=int, action="append", metavar="N",
                        help="run only criterion N (repeatable)")
    return parser


def _cmd_run(args) -> int:
    try:
        file_values = read_config_file(args.config) if args.config else {}
        flags = {k: getattr(args, k) for k in ("experiment", "modes", "cap", "seed", "out", "format")}
        for item in args.param:
            if "=" not in item:
                raise ConfigError(f"--param: expected KEY=VALUE, got {item!r}")
            k, v = item.split("=", 1)
            flags[k.strip()] = v.strip()
        cfg = parse_config(file_values, flags)
        rows = run_experiment(cfg)
    except ConfigError as exc:
        print(f"fockforge: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = format_rows(rows, cfg.format)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text)
        except OSError as exc:
            print(f"fockforge: cannot write {cfg.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.write(text)
    return EXIT_TOLERANCE if any(r.failed() for r in rows) else EXIT_OK


def _cmd_verify(args) -> int:
    from .acceptance import CRITERIA, run_criterion

    numbers = args.only or [num for num, _, _ in CRITERIA]
    results = []
    for num in numbers:
        try:
            res = run_criterion(num)
        except KeyError:
            print(f"fockforge: no criterion {num}", file=sys.stderr)
            return EXIT_CONFIG
        print(res.line(), flush=True)
        results.append(res)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return EXIT_OK if passed == len(results) else EXIT_TOLERANCE


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
