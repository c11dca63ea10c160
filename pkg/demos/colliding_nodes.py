"""A kernel supported on 2Z cannot be inverted from one offset, whatever N is.

Its symbol has period 1/2, so both nodes coincide at every frequency.  Adding
the odd offset (L = 2) repairs recovery even with a single time step.
"""

import numpy as np

from dynsamp import (
    FrequencyGrid,
    Kernel,
    Signal,
    collect,
    completeness_check,
    multiplicity,
    recon_error,
    reconstruct,
    sublattice,
)

kernel = Kernel.from_taps({-2: 0.25, 0: 0.5, 2: 0.25})
grid = FrequencyGrid(256)
print("max node multiplicity:", multiplicity(kernel, 2, grid).n_max)

for L, N in [(1, 1), (1, 2), (1, 6), (2, 1)]:
    v = completeness_check(kernel, 2, L, N, grid)
    print(f"L={L} N={N}: {v.verdict:8s} {v.reason}")

rng = np.random.default_rng(3)
f = Signal(-5, rng.standard_normal(30))
for L, N in [(1, 4), (2, 1)]:
    smp = collect(kernel, f, sublattice(2, L), N, (-5 - 2 * N, 24 + 2 * N))
    res = reconstruct(smp, kernel)
    print(f"L={L} N={N}: {res.status}, {len(res.deficient_bins)} deficient bins, rel err {recon_error(f, res.f_rec):.2e}")
