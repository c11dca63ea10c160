"""Recover a random signal from two time steps on the even integers.

The two-tap average has nodes 1 and 0 at omega = 0 and node gap 1 at every
frequency, so each 2 x 2 system is invertible with the same inverse norm.
"""

import numpy as np

from dynsamp import (
    FrequencyGrid,
    Kernel,
    NoiseSpec,
    Signal,
    add_noise,
    collect,
    completeness_check,
    noise_sweep,
    recon_error,
    reconstruct,
    sublattice,
    sup_inverse_norm,
)

kernel = Kernel.from_taps({0: 0.5, 1: 0.5})
grid = FrequencyGrid(1024)
rng = np.random.default_rng(0)
f = Signal(0, rng.standard_normal(64) + 1j * rng.standard_normal(64))

print(completeness_check(kernel, 2, 1, 2, grid).to_json())
print("sup inverse norm:", sup_inverse_norm(kernel, 2, 2, grid))

samples = collect(kernel, f, sublattice(2, 1), 2, (0, 64))
res = reconstruct(samples, kernel)
print(f"clean: status={res.status} period={res.P} rel err={recon_error(f, res.f_rec):.2e}")

noisy = add_noise(samples, NoiseSpec(0.01, seed=1))
print(f"sigma=0.01: rel err={recon_error(f, reconstruct(noisy, kernel).f_rec):.3e}")

# error grows linearly with the noise level, faster for worse-conditioned kernels
for taps in ({0: 0.5, 1: 0.5}, {0: 0.8, 1: 0.2}, {0: 0.9, 1: 0.1}):
    k = Kernel.from_taps(taps)
    rows = noise_sweep(k, 2, 1, 2, f, [1e-3, 1e-2, 1e-1], 50, seed=2)
    errs = ", ".join(f"{r.mean_rel_err:.2e}" for r in rows)
    print(f"taps {taps}: inverse norm {rows[0].sup_inverse_norm:.2f}; errors {errs}")
