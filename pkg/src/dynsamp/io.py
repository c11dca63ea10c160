"""Text file formats for kernels, signals, patterns, samples and reports.

Floats are written with 17 significant digits, which round-trips IEEE doubles.
Lines starting with ``#`` are provenance comments and are skipped on read.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path

import numpy as np

from .sampling import PeriodicPattern, SamplingPattern, SpaceTimeSamples
from .signals import Kernel, Signal

__all__ = [
    "FormatError",
    "fmt",
    "kernel_to_csv",
    "read_kernel",
    "write_kernel",
    "signal_to_csv",
    "read_signal",
    "write_signal",
    "pattern_to_text",
    "read_pattern",
    "write_pattern",
    "samples_to_csv",
    "read_samples",
    "write_samples",
    "kernel_hash",
    "write_csv",
    "dump_json",
]


class FormatError(ValueError):
    pass


def fmt(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def _rows(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    return list(csv.reader(lines))


def _header(comment: str | None) -> str:
    return f"# {comment}\n" if comment else ""


def _complex_table(text: str, key: str) -> tuple[np.ndarray, np.ndarray]:
    rows = _rows(text)
    if not rows or [h.strip() for h in rows[0]] != [key, "re", "im"]:
        raise FormatError(f"expected header '{key},re,im'")
    idx, vals = [], []
    for lineno, r in enumerate(rows[1:], start=2):
        if len(r) != 3:
            raise FormatError(f"row {lineno}: expected 3 fields, got {len(r)}")
        try:
            idx.append(int(r[0]))
            vals.append(complex(float(r[1]), float(r[2])))
        except ValueError as exc:
            raise FormatError(f"row {lineno}: {exc}") from None
    if len(set(idx)) != len(idx):
        raise FormatError(f"duplicate {key} values")
    if not idx:
        raise FormatError("no data rows")
    return np.asarray(idx, dtype=np.int64), np.asarray(vals, dtype=np.complex128)


def _dense(idx: np.ndarray, vals: np.ndarray) -> tuple[int, np.ndarray]:
    lo, hi = int(idx.min()), int(idx.max())
    out = np.zeros(hi - lo + 1, dtype=np.complex128)
    out[idx - lo] = vals
    return lo, out


def kernel_to_csv(kernel: Kernel, comment: str | None = None) -> str:
    lines = ["offset,re,im"]
    for k, v in zip(kernel.indices, kernel.values):
        if v != 0:
            lines.append(f"{k},{fmt(v.real)},{fmt(v.imag)}")
    return _header(comment) + "\n".join(lines) + "\n"


def read_kernel(path) -> Kernel:
    idx, vals = _complex_table(Path(path).read_text(), "offset")
    try:
        return Kernel(*_dense(idx, vals))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def write_kernel(path, kernel: Kernel, comment: str | None = None):
    Path(path).write_text(kernel_to_csv(kernel, comment))


def kernel_hash(kernel: Kernel) -> str:
    return hashlib.sha256(kernel_to_csv(kernel).encode()).hexdigest()


def signal_to_csv(f: Signal, comment: str | None = None) -> str:
    lines = ["index,re,im"]
    lines += [f"{n},{fmt(v.real)},{fmt(v.imag)}" for n, v in zip(f.indices, f.values)]
    return _header(comment) + "\n".join(lines) + "\n"


def read_signal(path) -> Signal:
    idx, vals = _complex_table(Path(path).read_text(), "index")
    return Signal(*_dense(idx, vals))


def write_signal(path, f: Signal, comment: str | None = None):
    Path(path).write_text(signal_to_csv(f, comment))


def pattern_to_text(pattern: SamplingPattern) -> str:
    if isinstance(pattern, PeriodicPattern):
        if not pattern.is_sublattice:
            raise FormatError("only sub-lattice periodic patterns have a file form")
        return f"periodic,{pattern.m},{pattern.L}\n"
    head = "explicit"
    pts = pattern.points
    if not pts or (pattern.lo, pattern.hi) != (pts[0], pts[-1]):
        head = f"explicit,{pattern.lo},{pattern.hi}"
    return head + "\n" + "".join(f"{p}\n" for p in pts)


def read_pattern(path) -> SamplingPattern:
    from .sampling import InvalidPatternError, explicit, sublattice

    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty pattern file")
    head = lines[0].split(",")
    try:
        if head[0] == "periodic" and len(head) == 3:
            return sublattice(int(head[1]), int(head[2]))
        if head[0] == "explicit" and len(head) in (1, 3):
            pts = [int(x) for x in lines[1:]]
            window = (int(head[1]), int(head[2])) if len(head) == 3 else None
            return explicit(pts, window)
    except (ValueError, InvalidPatternError) as exc:
        raise FormatError(str(exc)) from None
    raise FormatError(f"unrecognized pattern header {lines[0]!r}")


def write_pattern(path, pattern: SamplingPattern):
    Path(path).write_text(pattern_to_text(pattern))


def samples_to_csv(samples: SpaceTimeSamples, comment: str | None = None) -> str:
    buf = io.StringIO()
    buf.write(_header(comment))
    buf.write("s,lambda,re,im\n")
    for s in range(samples.N):
        for lam, v in zip(samples.points, samples.values[s]):
            buf.write(f"{s},{lam},{fmt(v.real)},{fmt(v.imag)}\n")
    return buf.getvalue()


def write_samples(path, samples: SpaceTimeSamples, comment: str | None = None):
    Path(path).write_text(samples_to_csv(samples, comment))


def read_samples(path) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(values, points)`` with ``values[s, i]`` at ``points[i]``."""
    rows = _rows(Path(path).read_text())
    if not rows or [h.strip() for h in rows[0]] != ["s", "lambda", "re", "im"]:
        raise FormatError("expected header 's,lambda,re,im'")
    data = {}
    try:
        for r in rows[1:]:
            data[(int(r[0]), int(r[1]))] = complex(float(r[2]), float(r[3]))
    except (ValueError, IndexError) as exc:
        raise FormatError(str(exc)) from None
    steps = sorted({s for s, _ in data})
    pts = sorted({p for _, p in data})
    if steps != list(range(len(steps))) or len(data) != len(steps) * len(pts):
        raise FormatError("samples do not form a full (s, lambda) grid")
    vals = np.array([[data[(s, p)] for p in pts] for s in steps], dtype=np.complex128)
    return vals, np.asarray(pts, dtype=np.int64)


def write_csv(path, header: list[str], rows, comment: str | None = None):
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(fmt(x) if isinstance(x, float) else str(x) for x in r))
    Path(path).write_text(_header(comment) + "\n".join(lines) + "\n")


def _encode(x, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(x[k], indent + 1)}" for k in sorted(x, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_encode(v, indent + 1) for v in x) + "]"
    if x is None or isinstance(x, (bool, np.bool_)):
        return json.dumps(None if x is None else bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return fmt(x) if math.isfinite(x) else json.dumps(fmt(x))
    return json.dumps(str(x))


def dump_json(path, obj: dict):
    """Sorted-key JSON with 17-significant-digit floats; non-finite floats become strings."""
    Path(path).write_text(_encode(obj) + "\n")
