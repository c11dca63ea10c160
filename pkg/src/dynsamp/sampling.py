"""Spatial sampling sets, space-time sample collection and density statistics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .signals import Kernel, Signal, convolve

__all__ = [
    "PeriodicPattern",
    "ExplicitPattern",
    "SamplingPattern",
    "InvalidPatternError",
    "WindowCoverageError",
    "SpaceTimeSamples",
    "DensityReport",
    "sublattice",
    "explicit",
    "collect",
    "banach_density",
    "gap_stats",
]


class InvalidPatternError(ValueError):
    pass


class WindowCoverageError(ValueError):
    """Sampling window misses pattern points where the evolved signal lives."""

    def __init__(self, required: tuple[int, int], window: tuple[int, int]):
        self.required = required
        self.window = window
        super().__init__(
            f"window [{window[0]}, {window[1]}] does not cover the pattern points in "
            f"[{required[0]}, {required[1]}]"
        )


@dataclass(frozen=True)
class PeriodicPattern:
    """``Lambda = m Z + offsets``."""

    m: int
    offsets: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1:
            raise InvalidPatternError(f"period must be >= 1, got {self.m}")
        offs = tuple(sorted(set(int(c) for c in self.offsets)))
        if len(offs) != len(tuple(self.offsets)):
            raise InvalidPatternError("offsets must be distinct")
        if any(c < 0 or c >= self.m for c in offs):
            raise InvalidPatternError(f"offsets must lie in [0, {self.m})")
        object.__setattr__(self, "offsets", offs)

    @property
    def L(self) -> int:
        return len(self.offsets)

    @property
    def is_sublattice(self) -> bool:
        """True when the offsets are exactly ``0, ..., L-1``."""
        return self.offsets == tuple(range(self.L))

    def points_in(self, lo: int, hi: int) -> np.ndarray:
        """Ascending pattern points in the inclusive range ``[lo, hi]``."""
        if hi < lo or not self.offsets:
            return np.zeros(0, dtype=np.int64)
        n = np.arange(lo, hi + 1, dtype=np.int64)
        return n[np.isin(np.mod(n, self.m), self.offsets)]

    def contains(self, n) -> np.ndarray:
        return np.isin(np.mod(np.asarray(n), self.m), self.offsets)


@dataclass(frozen=True)
class ExplicitPattern:
    """A finite list of sites, known to be the whole pattern on ``[lo, hi]``."""

    points: tuple[int, ...]
    lo: int
    hi: int

    def __post_init__(self):
        pts = tuple(int(p) for p in self.points)
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise InvalidPatternError("explicit points must be strictly increasing")
        if pts and (pts[0] < self.lo or pts[-1] > self.hi):
            raise InvalidPatternError("explicit points fall outside their window")
        object.__setattr__(self, "points", pts)

    def points_in(self, lo: int, hi: int) -> np.ndarray:
        p = np.asarray(self.points, dtype=np.int64)
        return p[(p >= lo) & (p <= hi)]

    def contains(self, n) -> np.ndarray:
        return np.isin(np.asarray(n), self.points)


SamplingPattern = PeriodicPattern | ExplicitPattern


def sublattice(m: int, L: int) -> PeriodicPattern:
    """``{m j + c : j in Z, c = 0, ..., L-1}``."""
    if not 1 <= L <= m:
        raise InvalidPatternError(f"need 1 <= L <= m, got m={m}, L={L}")
    return PeriodicPattern(m, tuple(range(L)))


def explicit(points, window: tuple[int, int] | None = None) -> ExplicitPattern:
    pts = sorted(int(p) for p in points)
    if window is None:
        window = (pts[0], pts[-1]) if pts else (0, 0)
    return ExplicitPattern(tuple(pts), int(window[0]), int(window[1]))


@dataclass(frozen=True, eq=False)
class SpaceTimeSamples:
    """Measured values ``(A^s f)(lambda_i)``.

    ``values[s, i]`` belongs to time step ``s`` and the ``i``-th pattern point of
    the window, in ascending order (``points[i]``).
    """

    values: np.ndarray
    points: np.ndarray
    pattern: SamplingPattern
    N: int
    window: tuple[int, int]
    signal_window: tuple[int, int]
    kernel_id: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128, copy=True)
        pts = np.array(self.points, dtype=np.int64, copy=True)
        if vals.shape != (self.N, len(pts)):
            raise ValueError(f"values shape {vals.shape} != ({self.N}, {len(pts)})")
        vals.flags.writeable = False
        pts.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "points", pts)

    def with_values(self, values: np.ndarray, **meta) -> "SpaceTimeSamples":
        return SpaceTimeSamples(
            values,
            self.points,
            self.pattern,
            self.N,
            self.window,
            self.signal_window,
            self.kernel_id,
            {**self.meta, **meta},
        )

    def __add__(self, other: "SpaceTimeSamples") -> "SpaceTimeSamples":
        if not np.array_equal(self.points, other.points) or self.N != other.N:
            raise ValueError("sample sets are not on the same layout")
        lo = min(self.signal_window[0], other.signal_window[0])
        hi = max(self.signal_window[1], other.signal_window[1])
        out = self.with_values(self.values + other.values)
        object.__setattr__(out, "signal_window", (lo, hi))
        return out

    def scale(self, alpha: complex) -> "SpaceTimeSamples":
        return self.with_values(alpha * self.values)


def _support_hull(kernel: Kernel, f: Signal, N: int) -> tuple[int, int]:
    # union of supports of A^s f for s < N
    lo = f.start + min(0, (N - 1) * kernel.start)
    hi = f.end + max(0, (N - 1) * kernel.end)
    return lo, hi


def collect(
    kernel: Kernel,
    f: Signal,
    pattern: SamplingPattern,
    N: int,
    window: tuple[int, int],
    kernel_id: str = "",
) -> SpaceTimeSamples:
    """Sample ``A^s f`` on the pattern points of ``window`` for ``s = 0, ..., N-1``.

    Raises :class:`WindowCoverageError` if a pattern point where some
    ``A^s f`` can be nonzero lies outside ``window``.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    lo, hi = int(window[0]), int(window[1])
    if hi < lo:
        raise ValueError("empty window")
    req = _support_hull(kernel, f, N)
    missed = np.concatenate(
        [pattern.points_in(req[0], min(req[1], lo - 1)), pattern.points_in(max(req[0], hi + 1), req[1])]
    )
    if missed.size:
        raise WindowCoverageError(req, (lo, hi))

    pts = pattern.points_in(lo, hi)
    vals = np.empty((N, len(pts)), dtype=np.complex128)
    h = f
    for s in range(N):
        vals[s] = h.at(pts)
        if s + 1 < N:
            h = convolve(kernel, h)
    return SpaceTimeSamples(vals, pts, pattern, N, (lo, hi), (f.start, f.end), kernel_id)


@dataclass(frozen=True)
class DensityReport:
    """Finite-window Banach density statistics.

    ``sup_ratio[i]``/``inf_ratio[i]`` are the sup/inf over centers of
    ``|Lambda ∩ [K-l, K+l]| / (2l)`` for ``l = l_values[i]``.
    """

    l_values: tuple[int, ...]
    sup_ratio: tuple[float, ...]
    inf_ratio: tuple[float, ...]
    upper: float
    lower: float
    n_lambda: int
    gap_radius: int
    exact: bool
    degenerate: bool = False


def _window_counts(pattern: SamplingPattern, l: int, centers: np.ndarray) -> np.ndarray:
    lo, hi = centers.min() - l, centers.max() + l
    pts = pattern.points_in(lo, hi)
    marks = np.zeros(hi - lo + 2, dtype=np.int64)
    marks[pts - lo + 1] = 1
    csum = np.cumsum(marks)
    return csum[centers + l - lo + 1] - csum[centers - l - lo]


def banach_density(pattern: SamplingPattern, l_values) -> DensityReport:
    """Upper/lower Banach density estimates.

    Periodic patterns get the exact value ``|offsets| / m``; the per-``l``
    ratios are still reported (centers over one period).  Explicit patterns
    use centers whose ``l``-window fits inside the pattern window, and the
    estimate is the value at the largest ``l``.
    """
    ls = tuple(int(l) for l in l_values)
    if not ls or min(ls) < 1:
        raise ValueError("l_values must be positive integers")

    if isinstance(pattern, PeriodicPattern):
        centers = np.arange(0, pattern.m)
        sup_r, inf_r = [], []
        for l in ls:
            cnt = _window_counts(pattern, l, centers)
            sup_r.append(cnt.max() / (2 * l))
            inf_r.append(cnt.min() / (2 * l))
        d = pattern.L / pattern.m
        if pattern.L == 0:
            return DensityReport(ls, tuple(sup_r), tuple(inf_r), 0.0, 0.0, 0, 0, True, True)
        n_lam, R = gap_stats(pattern, (0, 4 * pattern.m))
        return DensityReport(ls, tuple(sup_r), tuple(inf_r), d, d, n_lam, R, True)

    width = pattern.hi - pattern.lo + 1
    if width < 4 * max(ls):
        raise ValueError(f"explicit window width {width} < 4 * max(l) = {4 * max(ls)}")
    sup_r, inf_r = [], []
    for l in ls:
        centers = np.arange(pattern.lo + l, pattern.hi - l + 1)
        cnt = _window_counts(pattern, l, centers)
        sup_r.append(cnt.max() / (2 * l))
        inf_r.append(cnt.min() / (2 * l))
    if not pattern.points:
        return DensityReport(ls, tuple(sup_r), tuple(inf_r), 0.0, 0.0, 0, 0, False, True)
    n_lam, R = gap_stats(pattern, (pattern.lo, pattern.hi))
    i = int(np.argmax(ls))
    return DensityReport(ls, tuple(sup_r), tuple(inf_r), sup_r[i], inf_r[i], n_lam, R, False)


def gap_stats(pattern: SamplingPattern, window: tuple[int, int]) -> tuple[int, int]:
    """``(N(Lambda), R)`` on ``window``.

    ``N(Lambda)`` is the largest number of pattern points in any ``[x-1, x+1]``
    with integer ``x`` in the window.  ``R`` is half (rounded down) the longest
    run of consecutive window integers missing from the pattern, so every run
    of ``2R + 2`` consecutive integers meets the pattern and some run of ``2R``
    does not.
    """
    lo, hi = int(window[0]), int(window[1])
    pts = pattern.points_in(lo, hi)
    if pts.size == 0:
        raise ValueError("pattern is empty on the window")
    centers = np.arange(lo, hi + 1)
    n_lambda = int(_window_counts(pattern, 1, centers).max())

    edges = np.concatenate([[lo - 1], pts, [hi + 1]])
    longest = int(np.max(np.diff(edges) - 1))
    return n_lambda, longest // 2
