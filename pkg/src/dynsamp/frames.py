"""Frame bounds, kernel regularity constants and density certificates.

The probe signal throughout is the half-band sequence returned by
:func:`~dynsamp.signals.discrete_sinc`, whose transform is ``2`` on
``|omega| < 1/4``.  All envelope constants are certified bounds, not
estimates: grid extrema are padded by a Taylor remainder bound.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .sampling import PeriodicPattern, SamplingPattern
from .signals import FrequencyGrid, Kernel, Signal, kernel_power, symbol, symbol_derivative
from .spectral import node_matrix, stacked_matrices, sup_inverse_norm

__all__ = [
    "RegularityError",
    "NoCertificateError",
    "RegularityEnvelope",
    "LemmaConstants",
    "FrameBounds",
    "DensityCertificate",
    "DecayCurve",
    "regularity",
    "lemma_constants",
    "analytic_frame_bounds",
    "analysis_matrix",
    "empirical_frame_bounds",
    "density_certificate",
    "finite_set_decay",
]


class RegularityError(ValueError):
    def __init__(self, msg: str, omega: float):
        self.omega = omega
        super().__init__(f"{msg} (witness omega={omega:.17g})")


class NoCertificateError(ValueError):
    pass


@dataclass(frozen=True)
class RegularityEnvelope:
    """``mu >= a_hat >= nu > 0`` and ``|a_hat'| <= kappa`` on the circle."""

    nu: float
    mu: float
    kappa: float
    grid_M: int = 0
    pad: float = 0.0


def regularity(kernel: Kernel, grid: FrequencyGrid, imag_tol: float = 1e-10) -> RegularityEnvelope:
    """Certified envelope of a real, positive symbol.

    Every point of the circle is within ``h = spacing / 2`` of a grid point
    ``w``, and Taylor's theorem gives
    ``|a_hat(w + t) - a_hat(w)| <= |a_hat'(w)| h + Lip2 h^2 / 2`` with
    ``Lip2 = 4 pi^2 sum |k^2 a(k)|``.  ``nu``/``mu`` are the padded grid
    extrema; ``kappa`` is padded the same way one derivative up.
    """
    om = grid.points
    vals = symbol(kernel, om)
    bad = np.flatnonzero(np.abs(vals.imag) > imag_tol)
    if bad.size:
        raise RegularityError("symbol is not real", float(om[bad[0]]))
    re = vals.real
    if re.min() <= 0:
        raise RegularityError("symbol is not positive", float(om[int(np.argmin(re))]))

    k = kernel.indices.astype(float)
    a = np.abs(kernel.values)
    h = grid.spacing / 2
    lip1 = 2 * np.pi * np.sum(np.abs(k) * a)
    lip2 = (2 * np.pi) ** 2 * np.sum(k**2 * a)
    lip3 = (2 * np.pi) ** 3 * np.sum(np.abs(k) ** 3 * a)

    d1 = np.abs(symbol_derivative(kernel, om))
    d2 = np.abs(_second_derivative(kernel, om))
    spread = d1 * h + lip2 * h * h / 2
    nu = float(np.min(re - spread))
    if nu <= 0:
        raise RegularityError("grid too coarse to certify a positive lower bound", float(om[int(np.argmin(re))]))
    mu = min(float(np.max(re + spread)), float(a.sum()))
    kappa = min(float(np.max(d1 + d2 * h + lip3 * h * h / 2)), lip1)
    return RegularityEnvelope(nu, mu, kappa, grid.M, float(spread.max()))


def _second_derivative(kernel: Kernel, omega):
    k = kernel.indices
    return symbol(Signal(kernel.start, (-4 * np.pi**2) * k**2 * kernel.values), omega)


@dataclass(frozen=True)
class LemmaConstants:
    """``c_a <= sum_s |A^s g(0 or ±1)|^2`` and ``sum_s |A^s g(l)|^2 <= C_a / (1 + l^2)``."""

    c_a: float
    C_a: float
    N: int


def lemma_constants(env: RegularityEnvelope, N: int) -> LemmaConstants:
    """Energy constants of the half-band probe under ``N`` evolution steps.

    ``c_a = (4/pi^2) sum_{s<N} nu^{2s}``.  ``C_a = 1 + B0 + Bx`` where
    ``|A^s g(l)| <= mu^s`` gives ``B0 = sum_{1<=s<N} mu^{2s}`` and integration
    by parts gives ``|l A^s g(l)| <= 2 mu^s/pi + s mu^{s-1} kappa / (2 pi)``,
    hence ``Bx = sum_{1<=s<N} mu^{2(s-1)} (8 mu^2/pi^2 + (N-1)^2 kappa^2 / (2 pi^2))``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    nu, mu, kappa = env.nu, env.mu, env.kappa
    c_a = 4 / np.pi**2 * sum(nu ** (2 * s) for s in range(N))
    b0 = sum(mu ** (2 * s) for s in range(1, N))
    geo = sum(mu ** (2 * (s - 1)) for s in range(1, N))
    bx = geo * (8 * mu**2 / np.pi**2 + (N - 1) ** 2 * kappa**2 / (2 * np.pi**2))
    return LemmaConstants(float(c_a), float(1 + b0 + bx), N)


@dataclass(frozen=True)
class FrameBounds:
    c_min: float
    c_max: float
    method: str  # analytic | empirical
    context: dict = field(default_factory=dict)
    is_frame: bool = True


def analytic_frame_bounds(
    kernel: Kernel, m: int, grid: FrequencyGrid, normalization: str = "exact"
) -> FrameBounds:
    """Frame constants of ``{A^s e_{mj} : j in Z, s < m}`` from the per-frequency matrices.

    Sampling energy equals ``(1/m) int ||A_m(w) f_vec(w)||^2 dw`` while
    ``int ||f_vec||^2 = m ||f||^2``, so the constants are
    ``1 / (m sup ||A_m^{-1}||^2)`` and ``sup ||A_m||^2 / m``.
    ``normalization="m_squared"`` divides by ``m^2`` instead, which under-states the
    upper constant by a factor ``m``.
    """
    if normalization not in ("exact", "m_squared"):
        raise ValueError(f"unknown normalization {normalization!r}")
    scale = m if normalization == "exact" else m * m
    mats = stacked_matrices(node_matrix(kernel, m, grid.points), 1, m)
    sv = np.linalg.svd(mats, compute_uv=False)
    smax = float(sv[:, 0].max())
    inv = sup_inverse_norm(kernel, m, m, grid)
    ctx = {"m": m, "L": 1, "N": m, "grid_M": grid.M, "normalization": normalization, "sup_inverse_norm": inv}
    if not np.isfinite(inv):
        return FrameBounds(0.0, smax**2 / scale, "analytic", ctx, is_frame=False)
    return FrameBounds(1.0 / (scale * inv**2), smax**2 / scale, "analytic", ctx)


def analysis_matrix(
    kernel: Kernel, rows: Sequence[int], N: int, cols: np.ndarray
) -> np.ndarray:
    """Rows ``(s, lambda)`` (``s`` major), columns signal indices ``n``; entry ``a^(s)(lambda - n)``."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    out = np.empty((N * len(rows), len(cols)), dtype=np.complex128)
    diff = rows[:, None] - cols[None, :]
    for s in range(N):
        out[s * len(rows) : (s + 1) * len(rows)] = kernel_power(kernel, s).at(diff)
    return out


def empirical_frame_bounds(
    kernel: Kernel,
    pattern: SamplingPattern,
    N: int,
    window: tuple[int, int],
    interior_margin: int | None = None,
) -> FrameBounds:
    """Extreme squared singular values of the analysis operator on interior columns.

    Columns sit at least ``interior_margin`` (default ``(N-1) radius + 8``)
    inside ``window``, so every sample they influence is inside the window
    and the result brackets the true constants from the inside.
    """
    lo, hi = int(window[0]), int(window[1])
    if interior_margin is None:
        interior_margin = (N - 1) * kernel.radius + 8
    cols = np.arange(lo + interior_margin, hi - interior_margin + 1)
    if cols.size == 0:
        raise ValueError(f"window [{lo}, {hi}] has no columns at margin {interior_margin}")
    pts = pattern.points_in(lo, hi)
    A = analysis_matrix(kernel, pts, N, cols)
    sv = np.linalg.svd(A, compute_uv=False)
    smin = float(sv[-1]) if A.shape[0] >= A.shape[1] else 0.0
    ctx = {"N": N, "window": [lo, hi], "interior_margin": interior_margin, "columns": int(cols.size)}
    if isinstance(pattern, PeriodicPattern):
        ctx.update(m=pattern.m, offsets=list(pattern.offsets))
    return FrameBounds(smin**2, float(sv[0]) ** 2, "empirical", ctx, is_frame=smin > 0)


@dataclass(frozen=True)
class DensityCertificate:
    lower: float
    upper: float
    c_a: float
    C_a: float
    c_min: float
    c_max: float

    def to_dict(self) -> dict:
        return asdict(self)


def density_certificate(lc: LemmaConstants, fb: FrameBounds) -> DensityCertificate:
    """Bounds on lower/upper Banach density implied by the frame constants."""
    if not fb.c_min > 0:
        raise NoCertificateError("lower frame bound is zero; nothing to certify")
    c_a, C_a, cmin, cmax = lc.c_a, lc.C_a, fb.c_min, fb.c_max
    lower = max(c_a * cmin / (2 * cmax * C_a), cmin / (3 * C_a))
    upper = min(cmax / c_a, 1.5)
    return DensityCertificate(lower, upper, c_a, C_a, cmin, cmax)


@dataclass(frozen=True)
class DecayCurve:
    dims: tuple[int, ...]
    sigma_min_sq: tuple[float, ...]
    strictly_decreasing: bool
    ratio: float  # final / initial
    log_slope: float  # d log(sigma_min_sq) / d dim, least squares


def finite_set_decay(
    kernel: Kernel,
    locations: Sequence[int],
    dims: Sequence[int],
    N_rule: Callable[[int], int] | int | None = None,
    window_start: Callable[[int], int] | int | None = None,
) -> DecayCurve:
    """Smallest squared singular value of the truncated analysis operator of a finite sensor set.

    For each ``dim`` the columns are ``window_start(dim) + [0, dim)``;
    the default window is centered on the sensors.  ``N_rule`` defaults to
    ``N = dim``.
    """
    locs = sorted(int(x) for x in locations)
    if not locs:
        raise ValueError("locations must be nonempty")
    out = []
    for d in dims:
        N = d if N_rule is None else (N_rule(d) if callable(N_rule) else int(N_rule))
        if window_start is None:
            start = (locs[0] + locs[-1]) // 2 - d // 2
        else:
            start = window_start(d) if callable(window_start) else int(window_start)
        A = analysis_matrix(kernel, locs, N, np.arange(start, start + d))
        sv = np.linalg.svd(A, compute_uv=False)
        out.append(float(sv[-1]) ** 2 if A.shape[0] >= A.shape[1] else 0.0)
    y = np.asarray(out)
    dec = bool(np.all(np.diff(y) < 0))
    ratio = float(y[-1] / y[0]) if y[0] > 0 else float("nan")
    with np.errstate(divide="ignore"):
        ly = np.log(y)
    slope = float(np.polyfit(np.asarray(dims, float), ly, 1)[0]) if np.all(np.isfinite(ly)) and len(y) > 1 else float("nan")
    return DecayCurve(tuple(int(d) for d in dims), tuple(out), dec, ratio, slope)
