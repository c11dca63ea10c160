"""Finite-support sequences on the integer lattice and convolution kernels.

Everything here works on explicit windows: a :class:`Signal` stores its first
index and a contiguous block of values, and convolution grows that block
instead of truncating it.  Forward transforms use the ``exp(-i 2 pi k w)``
sign convention throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

__all__ = [
    "Signal",
    "Kernel",
    "FrequencyGrid",
    "symbol",
    "symbol_derivative",
    "convolve",
    "evolve",
    "kernel_power",
    "discrete_sinc",
    "dtft",
    "delta",
]


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Signal:
    """Complex sequence on Z, zero outside ``[start, start + len(values))``."""

    start: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "values", _frozen(self.values))

    @property
    def stop(self) -> int:
        """One past the last stored index."""
        return self.start + len(self.values)

    @property
    def end(self) -> int:
        """Last stored index (inclusive)."""
        return self.stop - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start, self.stop)

    def __len__(self):
        return len(self.values)

    def at(self, n) -> np.ndarray:
        """Values at absolute indices ``n`` (zero outside the window)."""
        n = np.asarray(n, dtype=np.int64)
        rel = n - self.start
        ok = (rel >= 0) & (rel < len(self.values))
        out = np.zeros(n.shape, dtype=np.complex128)
        out[ok] = self.values[rel[ok]]
        return out

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))

    def window(self, lo: int, hi: int) -> "Signal":
        """Re-express on the inclusive window ``[lo, hi]``, zero-padding or cropping."""
        return Signal(lo, self.at(np.arange(lo, hi + 1)))

    def trim(self, tol: float = 0.0) -> "Signal":
        """Drop leading/trailing entries with modulus ``<= tol``."""
        nz = np.flatnonzero(np.abs(self.values) > tol)
        if nz.size == 0:
            return Signal(self.start, np.zeros(1))
        return Signal(self.start + nz[0], self.values[nz[0] : nz[-1] + 1])

    def __add__(self, other: "Signal") -> "Signal":
        lo = min(self.start, other.start)
        hi = max(self.end, other.end)
        idx = np.arange(lo, hi + 1)
        return Signal(lo, self.at(idx) + other.at(idx))

    def __sub__(self, other: "Signal") -> "Signal":
        return self + other.scale(-1.0)

    def scale(self, alpha: complex) -> "Signal":
        return Signal(self.start, alpha * self.values)

    def __repr__(self):
        return f"Signal(start={self.start}, len={len(self.values)})"


def delta(n: int = 0) -> Signal:
    """Unit impulse at index ``n``."""
    return Signal(n, [1.0])


class Kernel(Signal):
    """Convolution kernel with finite support.

    Build one with :meth:`from_taps` (offset -> amplitude mapping) or directly
    from a start offset and a contiguous tap array.
    """

    def __post_init__(self):
        super().__post_init__()
        if len(self.values) == 0 or not np.any(self.values != 0):
            raise ValueError("kernel needs at least one nonzero tap")

    @classmethod
    def from_taps(cls, taps: Mapping[int, complex]) -> "Kernel":
        if not taps:
            raise ValueError("kernel needs at least one tap")
        lo, hi = min(taps), max(taps)
        vals = np.zeros(hi - lo + 1, dtype=np.complex128)
        for k, v in taps.items():
            vals[int(k) - lo] = v
        return cls(lo, vals)

    @property
    def taps(self) -> dict[int, complex]:
        return {int(k): complex(v) for k, v in zip(self.indices, self.values) if v != 0}

    @property
    def radius(self) -> int:
        """Largest ``|k|`` with a nonzero tap."""
        nz = self.indices[self.values != 0]
        return int(np.max(np.abs(nz)))

    @property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.values)))

    @property
    def lipschitz(self) -> float:
        """Lipschitz constant ``2 pi sum |k a(k)|`` of the symbol."""
        return float(2 * np.pi * np.sum(np.abs(self.indices * self.values)))

    def conj(self) -> "Kernel":
        """Kernel of the adjoint operator (taps ``conj(a(-k))``)."""
        return Kernel(-self.end, np.conj(self.values[::-1]))

    def __repr__(self):
        return f"Kernel({self.taps})"


class FrequencyGrid:
    """Equispaced points ``k/M`` on [0, 1)."""

    def __init__(self, M: int):
        M = int(M)
        if M < 1:
            raise ValueError(f"grid size must be >= 1, got {M}")
        self.M = M

    def point(self, k: int) -> Fraction:
        return Fraction(k % self.M, self.M)

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.M) / self.M

    @property
    def spacing(self) -> float:
        return 1.0 / self.M

    def refine(self, factor: int = 2) -> "FrequencyGrid":
        return FrequencyGrid(self.M * factor)

    def __len__(self):
        return self.M

    def __eq__(self, other):
        return isinstance(other, FrequencyGrid) and other.M == self.M

    def __hash__(self):
        return hash(("FrequencyGrid", self.M))

    def __repr__(self):
        return f"FrequencyGrid(M={self.M})"


def _phases(k: np.ndarray, omega: np.ndarray) -> np.ndarray:
    # reduce k*w mod 1 before exponentiating to keep 1-periodicity tight
    kw = np.multiply.outer(np.asarray(omega, dtype=float), k.astype(float))
    return np.exp(-2j * np.pi * np.mod(kw, 1.0))


def symbol(kernel: Signal, omega):
    """Evaluate ``sum_k a(k) exp(-i 2 pi k omega)``; vectorized over ``omega``."""
    omega_arr = np.asarray(omega, dtype=float)
    out = _phases(kernel.indices, omega_arr) @ kernel.values
    return complex(out) if omega_arr.ndim == 0 else out


def symbol_derivative(kernel: Signal, omega):
    """Exact derivative ``d/domega`` of the symbol."""
    omega_arr = np.asarray(omega, dtype=float)
    out = _phases(kernel.indices, omega_arr) @ (-2j * np.pi * kernel.indices * kernel.values)
    return complex(out) if omega_arr.ndim == 0 else out


def convolve(kernel: Signal, f: Signal) -> Signal:
    """``(a * f)(j) = sum_k a(k) f(j - k)`` on the grown support."""
    return Signal(kernel.start + f.start, np.convolve(kernel.values, f.values))


def kernel_power(kernel: Kernel, s: int) -> Signal:
    """The ``s``-fold self-convolution ``a^(s)`` (``a^(0)`` is the unit impulse)."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    out: Signal = delta(0)
    for _ in range(s):
        out = convolve(kernel, out)
    return out


def evolve(kernel: Kernel, f: Signal, s: int) -> Signal:
    """Apply the convolution operator ``s`` times."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    for _ in range(s):
        f = convolve(kernel, f)
    return f


def discrete_sinc(radius: int) -> Signal:
    """Half-band probe ``g(0) = 1``, ``g(n) = 2 sin(n pi/2)/(n pi)``, cut at ``|n| <= radius``.

    The hard cut leaves an O(1/radius) tail; the untruncated sequence has
    transform equal to 2 on ``|omega| < 1/4`` and 0 on the rest of the circle.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    n = np.arange(-radius, radius + 1)
    safe = np.where(n == 0, 1, n)
    g = np.where(n == 0, 1.0, 2.0 * np.sin(n * np.pi / 2) / (safe * np.pi))
    # sin(n pi/2) is exactly 0 for even n; remove the 1e-16 residue
    g[(n % 2 == 0) & (n != 0)] = 0.0
    return Signal(-radius, g)


def dtft(f: Signal, grid: FrequencyGrid) -> np.ndarray:
    """Transform of ``f`` sampled at the grid points ``k/M``.

    Folds the support modulo ``M`` and runs one FFT, which is exact for any
    support width.
    """
    M = grid.M
    folded = np.zeros(M, dtype=np.complex128)
    np.add.at(folded, np.mod(f.indices, M), f.values)
    return np.fft.fft(folded)
