"""Command-line front end and the BTD v1 text format.

A BTD v1 file looks like::

    BTD v1
    n=3 m=1 corners=1
    A 1
    0 0
    B 1
    1 0
    ...

Each block label is followed by ``m`` rows of ``m`` complex entries written
as ``re im`` pairs.  Blank lines and ``#`` comments are ignored and blocks may
appear in any order.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .core import BlockTridiagSpec, rel_err
from .determinants import (
    BACKENDS,
    charpoly,
    check_backend,
    det,
    det_corners,
    det_corners_product_variant,
    det_corners_variant_inverse,
    det_no_corners,
    det_salkuyeh,
    det_scalar,
    dual_roots,
    transfer_det,
    transfer_det_product,
)
from .errors import ComputationError, InvariantViolation, ParseError, UsageError
from .oracle import det_dense

COMMANDS = ("det", "charpoly", "dual-roots", "verify", "bench", "sweep")
CSV_HEADER = ["z_re", "z_im", "det_re", "det_im", "log10_abs_det"]

# per-identity tolerances used by ``verify``
VERIFY_TOL = {
    "Lemma1-vs-dense": 1e-8,
    "Eq5": 1e-8,
    "variant-1": 1e-7,
    "variant-2": 1e-7,
    "Theorem2-vs-dense": 1e-8,
    "Salkuyeh-vs-dense": 1e-8,
    "scalar-vs-dense": 1e-9,
}


# ---------------------------------------------------------------------------
# BTD v1
# ---------------------------------------------------------------------------


def _required_labels(n: int, corners: bool) -> list:
    labels = [("A", i) for i in range(1, n + 1)]
    labels += [("B", i) for i in range(1, n)]
    labels += [("C", i) for i in range(1, n)]
    if corners:
        labels += [("B", n), ("C", 0)]
    return labels


def _parse_header(line: str, lineno: int):
    fields = {}
    for tok in line.split():
        key, sep, val = tok.partition("=")
        if not sep:
            raise ParseError(f"malformed header token {tok!r}", lineno)
        fields[key] = val
    if set(fields) != {"n", "m", "corners"}:
        raise ParseError("header must be 'n=<int> m=<int> corners=<0|1>'", lineno)
    try:
        n, m = int(fields["n"]), int(fields["m"])
    except ValueError:
        raise ParseError("n and m must be integers", lineno) from None
    if fields["corners"] not in ("0", "1"):
        raise ParseError("corners must be 0 or 1", lineno)
    if n < 1 or m < 1:
        raise InvariantViolation(f"n and m must be positive, got n={n} m={m}")
    if fields["corners"] == "1" and n < 3:
        raise InvariantViolation(f"cornered matrices need n >= 3, got n={n}")
    return n, m, fields["corners"] == "1"


def parse_btd_text(text: str) -> BlockTridiagSpec:
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines or lines[0][1] != "BTD v1":
        raise ParseError("expected 'BTD v1' on the first line", lines[0][0] if lines else 1)
    if len(lines) < 2:
        raise ParseError("missing 'n= m= corners=' header", lines[0][0] + 1)
    n, m, corners = _parse_header(lines[1][1], lines[1][0])
    required = set(_required_labels(n, corners))

    blocks = {}
    pos = 2
    while pos < len(lines):
        lineno, head = lines[pos]
        parts = head.split()
        if len(parts) != 2 or parts[0] not in ("A", "B", "C"):
            raise ParseError(f"expected a block label like 'A 1', got {head!r}", lineno)
        try:
            label = (parts[0], int(parts[1]))
        except ValueError:
            raise ParseError(f"block index must be an integer, got {parts[1]!r}", lineno) from None
        if label not in required:
            raise ParseError(f"unexpected block {label[0]} {label[1]}", lineno)
        if label in blocks:
            raise ParseError(f"duplicate block {label[0]} {label[1]}", lineno)
        rows = lines[pos + 1 : pos + 1 + m]
        if len(rows) < m:
            raise ParseError(f"block {label[0]} {label[1]} needs {m} rows", lines[-1][0])
        block = np.empty((m, m), dtype=np.complex128)
        for r, (rno, row) in enumerate(rows):
            toks = row.split()
            if len(toks) != 2 * m:
                raise ParseError(f"expected {2 * m} numbers per row, got {len(toks)}", rno)
            try:
                vals = [float(t) for t in toks]
            except ValueError:
                raise ParseError(f"bad number in row {row!r}", rno) from None
            block[r] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
        blocks[label] = block
        pos += 1 + m

    for label in _required_labels(n, corners):
        if label not in blocks:
            raise ParseError(f"missing block {label[0]} {label[1]}")
    A = tuple(blocks[("A", i)] for i in range(1, n + 1))
    if corners:
        B = tuple(blocks[("B", i)] for i in range(1, n + 1))
        C = tuple(blocks[("C", i)] for i in range(0, n))
    else:
        B = tuple(blocks[("B", i)] for i in range(1, n))
        C = tuple(blocks[("C", i)] for i in range(1, n))
    return BlockTridiagSpec(A, B, C, corners)


def parse_btd_file(path) -> BlockTridiagSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_btd_text(text)


def format_btd(spec: BlockTridiagSpec) -> str:
    """BTD v1 text; ``repr`` of a float is its shortest round-trip decimal."""
    n, m = spec.n, spec.m
    out = ["BTD v1", f"n={n} m={m} corners={int(spec.has_corners)}"]
    getter = {"A": spec.a, "B": spec.b, "C": spec.c}
    for lab, i in _required_labels(n, spec.has_corners):
        out.append(f"{lab} {i}")
        for row in getter[lab](i):
            out.append(" ".join(f"{float(x.real)!r} {float(x.imag)!r}" for x in row))
    return "\n".join(out) + "\n"


def emit_btd_file(spec: BlockTridiagSpec, path) -> None:
    Path(path).write_text(format_btd(spec), encoding="utf-8")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Path
    backend: str = "auto"
    z: complex = 1.0 + 0.0j
    lam: complex = 0.0 + 0.0j
    sweep_points: int = 256
    radius: float = 1.0
    seed: int = 0
    output_path: Optional[Path] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.backend not in BACKENDS:
            raise UsageError(f"unknown backend {self.backend!r}")
        if self.sweep_points < 1:
            raise UsageError("--sweep-points must be positive")
        if not self.radius > 0:
            raise UsageError("--radius must be positive")
        if self.seed < 0:
            raise UsageError("--seed must be non-negative")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _pair(v: complex, fmt=_fmt) -> str:
    v = complex(v)
    return f"{fmt(v.real)} {fmt(v.imag)}"


def _fmt_display(x: float) -> str:
    # DBL_DIG digits: drops the last-ulp noise of exp(log|det|)
    x = float(x)
    return format(x, ".15g") if x != 0 else "0"


def tolerance_scale() -> float:
    raw = os.environ.get("BTDET_TOL_OVERRIDE")
    if raw is None or raw == "":
        return 1.0
    try:
        val = float(raw)
    except ValueError:
        raise UsageError(f"BTDET_TOL_OVERRIDE must be a real number, got {raw!r}") from None
    if not val > 0 or not math.isfinite(val):
        raise UsageError("BTDET_TOL_OVERRIDE must be positive and finite")
    return val


def verify_spec(spec: BlockTridiagSpec, seed: int = 0, scale: float = 1.0) -> list:
    """Cross-backend identity checks on one spec.

    Returns ``(name, max_rel_err, tol, passed)`` tuples.  Cornered specs are
    checked at a few seeded boundary parameters on and off the unit circle.
    """
    rng = np.random.default_rng(seed)
    results = []

    def record(name, errs):
        worst = max(errs)
        tol = VERIFY_TOL[name] * scale
        results.append((name, worst, tol, bool(worst <= tol)))

    if spec.has_corners:
        zs = [complex(np.exp(1j * rng.uniform(0, 2 * np.pi))) for _ in range(3)] + [0.5, 2.0]
        record("Lemma1-vs-dense", [rel_err(det_corners(spec, z), det_dense(spec, z)) for z in zs])
        ref = transfer_det_product(spec)
        lams = [0.0] + [complex(*rng.uniform(-1, 1, 2)) for _ in range(2)]
        record("Eq5", [rel_err(transfer_det(spec, lam).value(), ref) for lam in lams])
        record("variant-1", [rel_err(det_corners_variant_inverse(spec, z), det_dense(spec, z)) for z in zs])
        record(
            "variant-2",
            [rel_err(det_corners_product_variant(spec, z), det_dense(spec, z) * det_dense(spec, 1 / z)) for z in zs],
        )
    else:
        ref = det_dense(spec)
        record("Theorem2-vs-dense", [rel_err(det_no_corners(spec), ref)])
        record("Salkuyeh-vs-dense", [rel_err(det_salkuyeh(spec).value(), ref)])
        if spec.m == 1:
            record("scalar-vs-dense", [rel_err(det_scalar(spec), ref)])
    return results


def _applicable_backends(spec: BlockTridiagSpec, z: complex) -> list:
    out = []
    for name in BACKENDS:
        if name == "auto":
            continue
        try:
            check_backend(spec, name, z)
        except UsageError:
            continue
        out.append(name)
    return out


def bench_spec(spec: BlockTridiagSpec, z: complex = 1.0, repeats: int = 5) -> list:
    """``(backend, median_seconds)`` per applicable backend, warm-up excluded."""
    rows = []
    for name in _applicable_backends(spec, z):
        det(spec, z, name)
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            det(spec, z, name)
            times.append(time.perf_counter() - t0)
        rows.append((name, statistics.median(times)))
    return rows


def sweep_rows(spec: BlockTridiagSpec, points: int, radius: float = 1.0, backend: str = "auto") -> list:
    rows = []
    for k in range(points):
        z = radius * complex(np.exp(2j * np.pi * k / points))
        d = det(spec, z, backend)
        v = d.value()
        rows.append((z.real, z.imag, v.real, v.imag, d.log10_abs))
    return rows


def _write_csv(rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([_fmt(x) for x in row])


def run_command(cfg: RunConfig, out=None) -> int:
    """Execute one command; returns the exit code (errors propagate)."""
    out = sys.stdout if out is None else out
    spec = parse_btd_file(cfg.input_path)

    if cfg.command == "det":
        d = det(spec, cfg.z, cfg.backend)
        print(_pair(d.value(), _fmt_display), file=out)
        print(f"logdet phase={_pair(d.phase)} log_abs={_fmt(d.log_magnitude)}", file=out)
    elif cfg.command == "charpoly":
        for c in charpoly(spec, cfg.z).coeffs:
            print(_pair(c), file=out)
    elif cfg.command == "dual-roots":
        for r in dual_roots(spec, cfg.lam):
            print(_pair(r), file=out)
    elif cfg.command == "verify":
        results = verify_spec(spec, cfg.seed, tolerance_scale())
        for name, err, tol, ok in results:
            print(f"{name}: max_rel_err={err:.3e} tol={tol:.1e} {'PASS' if ok else 'FAIL'}", file=out)
        return 0 if all(r[3] for r in results) else 1
    elif cfg.command == "bench":
        for name, secs in bench_spec(spec, cfg.z):
            print(f"{name}: median {secs * 1e3:.3f} ms over 5 runs", file=out)
    elif cfg.command == "sweep":
        if cfg.backend != "auto":
            check_backend(spec, cfg.backend, cfg.radius)
        rows = sweep_rows(spec, cfg.sweep_points, cfg.radius, cfg.backend)
        if cfg.output_path is None:
            _write_csv(rows, out)
        else:
            with open(cfg.output_path, "w", newline="", encoding="utf-8") as fh:
                _write_csv(rows, fh)
    return 0


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="btdet", description="Block-tridiagonal determinants via transfer matrices.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", type=Path, help="BTD v1 input file")
    parser.add_argument("--backend", default="auto", choices=BACKENDS)
    parser.add_argument("--z", type=_complex_arg, default=1.0 + 0.0j, metavar="RE,IM")
    parser.add_argument("--lambda", dest="lam", type=_complex_arg, default=0.0j, metavar="RE,IM")
    parser.add_argument("--sweep-points", type=int, default=256, metavar="N")
    parser.add_argument("--radius", type=float, default=1.0, metavar="R")
    parser.add_argument("--seed", type=int, default=0, metavar="S")
    parser.add_argument("--out", type=Path, default=None, metavar="PATH")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(
            command=args.command,
            input_path=args.input,
            backend=args.backend,
            z=args.z,
            lam=args.lam,
            sweep_points=args.sweep_points,
            radius=args.radius,
            seed=args.seed,
            output_path=args.out,
        )
        return run_command(cfg)
    except UsageError as exc:
        print(f"btdet: error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"btdet: computation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
