"""Recovery of the initial signal from sub-lattice space-time samples.

Samples on ``m Z + {0, ..., L-1}`` are embedded in a cyclic model of period
``P = m M`` large enough that no evolved state wraps onto itself.  Each of the
``M`` DFT bins then gives an ``(N L) x m`` system for the ``m`` aliased DFT
coefficients ``F[k + r M]``, solved by a truncated-SVD least-squares step.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .sampling import PeriodicPattern, SpaceTimeSamples, collect
from .signals import FrequencyGrid, Kernel, Signal
from .spectral import RANK_RTOL, node_matrix, stacked_matrices, sup_inverse_norm

__all__ = [
    "PeriodicModel",
    "ReconstructionResult",
    "NoiseSpec",
    "NoiseSweepRow",
    "ZeroReferenceWarning",
    "RankDeficientError",
    "choose_period",
    "solve_bins",
    "reconstruct",
    "add_noise",
    "noise_sweep",
    "recon_error",
    "PRNG_ALGORITHM",
]

PRNG_ALGORITHM = "numpy.PCG64/SeedSequence"


class ZeroReferenceWarning(RuntimeWarning):
    pass


class RankDeficientError(RuntimeError):
    pass


class PeriodicModel:
    """Cyclic surrogate of Z with period ``P = m M``.

    The kernel is periodized (taps summed over ``k ≡ r mod P``).
    """

    def __init__(self, kernel: Kernel, m: int, M: int):
        if m < 1 or M < 1:
            raise ValueError("m and M must be positive")
        self.kernel = kernel
        self.m = int(m)
        self.M = int(M)
        self.P = self.m * self.M
        taps = np.zeros(self.P, dtype=np.complex128)
        np.add.at(taps, np.mod(kernel.indices, self.P), kernel.values)
        taps.flags.writeable = False
        self.taps = taps
        self.taps_hat = np.fft.fft(taps)

    def evolve(self, f: np.ndarray, s: int) -> np.ndarray:
        return np.fft.ifft(self.taps_hat**s * np.fft.fft(f))

    def sample(self, f: np.ndarray, L: int, N: int) -> np.ndarray:
        """Cyclic samples, shape ``(L, N, M)``: ``out[c, s, j] = (A^s f)(m j + c)``."""
        out = np.empty((L, N, self.M), dtype=np.complex128)
        F = np.fft.fft(np.asarray(f, dtype=np.complex128))
        for s in range(N):
            h = np.fft.ifft(self.taps_hat**s * F)
            for c in range(L):
                out[c, s] = h[c :: self.m]
        return out

    def embed(self, f: Signal) -> np.ndarray:
        if len(f) > self.P:
            raise ValueError(f"signal of length {len(f)} does not fit period {self.P}")
        out = np.zeros(self.P, dtype=np.complex128)
        np.add.at(out, np.mod(f.indices, self.P), f.values)
        return out


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Recovered signal plus per-bin solve diagnostics.

    ``status`` is ``"exact"`` (square systems, all bins well conditioned),
    ``"least-squares"`` (``NL > m``) or ``"rank-deficient"`` with the offending
    bins in ``deficient_bins``.
    """

    f_rec: Signal
    periodic: np.ndarray
    residuals: np.ndarray
    sigma_min: np.ndarray
    status: str
    deficient_bins: tuple[int, ...]
    P: int

    @property
    def sigma_min_range(self) -> tuple[float, float]:
        return float(self.sigma_min.min()), float(self.sigma_min.max())

    def flags(self) -> dict:
        lo, hi = self.sigma_min_range
        return {
            "status": self.status,
            "deficient_bins": list(self.deficient_bins),
            "period": self.P,
            "sigma_min_min": lo,
            "sigma_min_max": hi,
            "max_residual": float(self.residuals.max()),
        }


def choose_period(m: int, span: int) -> int:
    """Smallest ``m M >= span`` with ``M`` a fast FFT length."""
    M = scipy.fft.next_fast_len(max(1, -(-span // m)))
    return m * M


def solve_bins(
    kernel: Kernel, m: int, L: int, N: int, cyclic: np.ndarray, rtol: float = RANK_RTOL
):
    """Per-bin least squares on cyclic samples of shape ``(L, N, M)``.

    Returns ``(f, residuals, sigma_min, deficient)`` with ``f`` of length ``m M``.
    """
    Lc, Nc, M = cyclic.shape
    if (Lc, Nc) != (L, N):
        raise ValueError(f"cyclic samples have shape {cyclic.shape}, expected ({L}, {N}, M)")
    if N * L < m:
        raise ValueError(f"NL={N * L} < m={m}: per-bin systems are under-determined")
    P = m * M
    k = np.arange(M)
    omega = k / M
    G = np.fft.fft(cyclic, axis=2)  # (L, N, M)
    shift = np.exp(-2j * np.pi * np.outer(np.arange(L), k) / P)  # (L, M)
    rhs = (m * shift[:, None, :] * G).reshape(L * N, M).T  # (M, NL)

    B = stacked_matrices(node_matrix(kernel, m, omega), L, N)  # (M, NL, m)
    U, S, Vh = np.linalg.svd(B, full_matrices=False)
    cutoff = rtol * S[:, :1]
    keep = S > cutoff
    inv_s = np.where(keep, 1.0 / np.where(keep, S, 1.0), 0.0)
    coef = np.einsum("bij,bi->bj", U.conj(), rhs) * inv_s
    X = np.einsum("bji,bj->bi", Vh.conj(), coef)  # (M, m)
    resid = np.linalg.norm(np.einsum("bij,bj->bi", B, X) - rhs, axis=1)
    smin = S[:, -1] if S.shape[1] == m else np.zeros(M)
    deficient = np.flatnonzero(~keep.all(axis=1) | (S.shape[1] < m))

    F = np.empty(P, dtype=np.complex128)
    for r in range(m):
        F[k + r * M] = X[:, r]
    return np.fft.ifft(F), resid, smin, deficient


def reconstruct(
    samples: SpaceTimeSamples,
    kernel: Kernel,
    period: int | None = None,
    rtol: float = RANK_RTOL,
) -> ReconstructionResult:
    """Recover ``f`` on ``samples.signal_window`` from sub-lattice samples.

    ``period`` defaults to the smallest fast-FFT multiple of ``m`` covering the
    signal window plus its ``N - 1`` evolution steps.  Rank-deficient bins get
    minimum-norm solutions and are listed in the result.
    """
    pat = samples.pattern
    if not isinstance(pat, PeriodicPattern) or not pat.is_sublattice:
        raise ValueError("reconstruction needs a sub-lattice pattern m Z + {0, ..., L-1}")
    m, L, N = pat.m, pat.L, samples.N
    if N * L < m:
        raise ValueError(f"NL={N * L} < m={m}: per-bin systems are under-determined")

    s_lo, s_hi = samples.signal_window
    h_lo = s_lo + min(0, (N - 1) * kernel.start)
    h_hi = s_hi + max(0, (N - 1) * kernel.end)
    span = h_hi - h_lo + 1
    if period is None:
        P = choose_period(m, span)
    else:
        P = int(period)
        if P % m or P < span:
            raise ValueError(f"period {P} must be a multiple of m={m} and >= {span}")
    M = P // m

    cyclic = np.zeros((L, N, M), dtype=np.complex128)
    pts = samples.points
    inside = (pts >= h_lo) & (pts <= h_hi)
    res = np.mod(pts[inside], P)
    c, j = res % m, res // m
    for s in range(N):
        cyclic[c, s, j] = samples.values[s, inside]

    f_per, resid, smin, deficient = solve_bins(kernel, m, L, N, cyclic, rtol)
    idx = np.arange(s_lo, s_hi + 1)
    f_rec = Signal(s_lo, f_per[np.mod(idx, P)])
    if deficient.size:
        status = "rank-deficient"
    elif N * L > m:
        status = "least-squares"
    else:
        status = "exact"
    return ReconstructionResult(f_rec, f_per, resid, smin, status, tuple(int(b) for b in deficient), P)


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float
    seed: int = 0
    mode: str = "complex"  # "real" or "complex"

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.mode not in ("real", "complex"):
            raise ValueError(f"unknown noise mode {self.mode!r}")


def add_noise(samples: SpaceTimeSamples, spec: NoiseSpec) -> SpaceTimeSamples:
    """Add i.i.d. Gaussian noise of standard deviation ``sigma`` per component.

    Row ``s`` draws from its own stream ``SeedSequence((seed, s))`` so the
    result does not depend on how rows are distributed over workers.
    """
    if spec.sigma == 0:
        return samples
    noisy = np.array(samples.values)
    for s in range(samples.N):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((spec.seed, s))))
        n = noisy.shape[1]
        if spec.mode == "real":
            noisy[s] += spec.sigma * rng.standard_normal(n)
        else:
            z = rng.standard_normal((2, n))
            noisy[s] += spec.sigma * (z[0] + 1j * z[1])
    return samples.with_values(noisy, noise_sigma=spec.sigma, noise_seed=spec.seed, prng=PRNG_ALGORITHM)


def recon_error(f_true: Signal, f_rec: Signal) -> float:
    """``||f_true - f_rec|| / ||f_true||`` over the union of both windows.

    For a zero reference the absolute error is returned and a
    :class:`ZeroReferenceWarning` is issued.
    """
    diff = (f_true - f_rec).norm()
    ref = f_true.norm()
    if ref == 0:
        warnings.warn("reference signal is zero; returning absolute error", ZeroReferenceWarning, stacklevel=2)
        return diff
    return diff / ref


@dataclass(frozen=True)
class NoiseSweepRow:
    sigma: float
    mean_rel_err: float
    std_rel_err: float
    trials: int
    sup_inverse_norm: float


def noise_sweep(
    kernel: Kernel,
    m: int,
    L: int,
    N: int,
    f: Signal,
    sigmas,
    trials: int,
    seed: int,
    grid: FrequencyGrid | None = None,
    mode: str = "complex",
) -> list[NoiseSweepRow]:
    """Mean/std relative reconstruction error versus noise level.

    Trial ``t`` at the ``i``-th noise level uses seed ``(seed, i, t)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    grid = grid or FrequencyGrid(1024)
    pat = PeriodicPattern(m, tuple(range(L)))
    lo = f.start + min(0, (N - 1) * kernel.start)
    hi = f.end + max(0, (N - 1) * kernel.end)
    clean = collect(kernel, f, pat, N, (lo, hi))
    sup_inv = sup_inverse_norm(kernel, m, max(N, m), grid) if L == 1 and N >= m else float("nan")
    rows = []
    for i, sigma in enumerate(sigmas):
        errs = np.empty(trials)
        for t in range(trials):
            sub = int(np.random.SeedSequence((seed, i, t)).generate_state(1, np.uint64)[0])
            noisy = add_noise(clean, NoiseSpec(float(sigma), sub, mode))
            errs[t] = recon_error(f, reconstruct(noisy, kernel).f_rec)
        rows.append(NoiseSweepRow(float(sigma), float(errs.mean()), float(errs.std(ddof=0)), trials, sup_inv))
    return rows
