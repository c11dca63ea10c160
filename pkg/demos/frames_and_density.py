"""Frame constants, the density certificate, and what a finite sensor set loses.

Periodic patterns give frames whose constants bracket the pattern density;
a single sensor gives a lower frame constant that vanishes as the window grows.
"""

from dynsamp import (
    FrequencyGrid,
    Kernel,
    analytic_frame_bounds,
    banach_density,
    density_certificate,
    empirical_frame_bounds,
    finite_set_decay,
    lemma_constants,
    regularity,
    sublattice,
)

grid = FrequencyGrid(1024)

half = Kernel.from_taps({0: 0.5, 1: 0.5})
ana = analytic_frame_bounds(half, 2, grid)
emp = empirical_frame_bounds(half, sublattice(2, 1), 2, (-256, 255))
print(f"two-tap, 2Z, N=2: analytic ({ana.c_min:.6f}, {ana.c_max:.6f}), empirical ({emp.c_min:.6f}, {emp.c_max:.6f})")

smooth = Kernel.from_taps({-1: 0.125, 0: 0.75, 1: 0.125})
env = regularity(smooth, grid)
print(f"smoother envelope: nu={env.nu:.6f} mu={env.mu:.6f} kappa={env.kappa:.6f}")
for m, L in [(2, 2), (3, 2), (5, 3)]:
    pat = sublattice(m, L)
    fb = empirical_frame_bounds(smooth, pat, m, (-150, 149))
    cert = density_certificate(lemma_constants(env, m), fb)
    d = banach_density(pat, [16, 64]).upper
    print(f"density {L}/{m} = {d:.4f} in [{cert.lower:.4g}, {cert.upper:.4g}]")

# one sensor downstream of a damped shift: information leaks out of the window
curve = finite_set_decay(Kernel.from_taps({1: 0.99}), [0], [64, 128, 256, 512, 1024], window_start=lambda d: 1 - d)
for d, v in zip(curve.dims, curve.sigma_min_sq):
    print(f"dim {d:5d}: sigma_min^2 = {v:.3e}")
