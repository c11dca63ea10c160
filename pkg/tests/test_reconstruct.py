
import numpy as np
import pytest
from conftest import random_signal
from oracles import lstsq_recover

from dynsamp import (
    Kernel,
    NoiseSpec,
    PeriodicModel,
    Signal,
    ZeroReferenceWarning,
    add_noise,
    collect,
    delta,
    noise_sweep,
    recon_error,
    reconstruct,
    sublattice,
)
from dynsamp.reconstruct import choose_period, solve_bins


def _samples(kernel, f, m, L, N):
    lo = f.start + min(0, (N - 1) * kernel.start)
    hi = f.end + max(0, (N - 1) * kernel.end)
    return collect(kernel, f, sublattice(m, L), N, (lo, hi))


def test_identity_trivial(ident):
    f = Signal(-2, [1.0, 2.0, -3.0j])
    res = reconstruct(_samples(ident, f, 1, 1, 1), ident)
    assert np.allclose(res.f_rec.values, f.values, atol=1e-14) and res.status == "exact"


def test_two_tap_exact_recovery(half):
    f = random_signal(np.random.default_rng(0), 64)
    res = reconstruct(_samples(half, f, 2, 1, 2), half, period=256)
    assert res.P == 256 and recon_error(f, res.f_rec) <= 1e-8
    assert res.status == "exact" and not res.deficient_bins


def test_interleaved_flags_every_bin(interleaved):
    f = random_signal(np.random.default_rng(1), 16)
    res = reconstruct(_samples(interleaved, f, 2, 1, 2), interleaved)
    M = res.P // 2
    assert res.status == "rank-deficient" and res.deficient_bins == tuple(range(M))


def test_interleaved_two_offsets_recovers(interleaved):
    f = random_signal(np.random.default_rng(2), 40, start=-7)
    res = reconstruct(_samples(interleaved, f, 2, 2, 1), interleaved)
    assert recon_error(f, res.f_rec) <= 1e-10


def test_overdetermined_is_least_squares(smooth3):
    f = random_signal(np.random.default_rng(4), 30)
    res = reconstruct(_samples(smooth3, f, 3, 2, 3), smooth3)
    assert res.status == "least-squares" and recon_error(f, res.f_rec) <= 1e-9


@pytest.mark.parametrize("m,L,N", [(2, 1, 2), (3, 1, 3), (3, 2, 2), (4, 2, 3)])
def test_solve_bins_matches_time_domain_oracle(m, L, N):
    rng = np.random.default_rng(10 + m)
    taps = {-1: 0.2 + 0.1j, 0: 0.7, 1: 0.1}
    k = Kernel.from_taps(taps)
    M = 12
    f = rng.standard_normal(m * M) + 1j * rng.standard_normal(m * M)
    model = PeriodicModel(k, m, M)
    ours = solve_bins(k, m, L, N, model.sample(f, L, N))[0]
    ref = lstsq_recover(taps, m, L, N, f)
    assert np.linalg.norm(ours - ref) <= 1e-9 * np.linalg.norm(ref)


def test_periodic_model_matches_linear_evolution(half):
    f = random_signal(np.random.default_rng(5), 10)
    model = PeriodicModel(half, 2, 16)
    cyc = model.evolve(model.embed(f), 3)
    from dynsamp import evolve

    lin = evolve(half, f, 3)
    assert np.allclose(cyc[lin.indices % 32], lin.values)


def test_choose_period():
    P = choose_period(3, 100)
    assert P % 3 == 0 and P >= 100


def test_bad_period_rejected(half):
    smp = _samples(half, delta(0), 2, 1, 2)
    with pytest.raises(ValueError):
        reconstruct(smp, half, period=3)


def test_noise_zero_sigma_identity(half):
    smp = _samples(half, delta(0), 2, 1, 2)
    assert add_noise(smp, NoiseSpec(0.0, 1)) is smp


def test_noise_deterministic(half):
    smp = _samples(half, Signal(0, np.ones(20)), 2, 1, 2)
    a = add_noise(smp, NoiseSpec(0.1, 9))
    b = add_noise(smp, NoiseSpec(0.1, 9))
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, add_noise(smp, NoiseSpec(0.1, 10)).values)


def test_noise_mean_small(ident):
    f = Signal(0, np.zeros(10_000))
    smp = collect(ident, f, sublattice(1, 1), 1, (0, 9999))
    z = add_noise(smp, NoiseSpec(0.1, 123, "real")).values[0].real
    assert abs(z.mean()) <= 3 * 0.1 / 100
    assert z.std() == pytest.approx(0.1, rel=0.05)


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(-1.0)
    with pytest.raises(ValueError):
        NoiseSpec(0.1, mode="pink")


def test_recon_error_examples():
    f = Signal(0, [1.0, 2.0])
    assert recon_error(f, f) == 0
    assert recon_error(delta(0), delta(1)) == pytest.approx(np.sqrt(2))
    assert recon_error(delta(0), delta(0).scale(0.9)) == pytest.approx(0.1)
    with pytest.warns(ZeroReferenceWarning):
        assert recon_error(Signal(0, [0.0]), delta(0)) == 1.0


def test_noise_sweep_zero_and_linearity(half):
    f = random_signal(np.random.default_rng(6), 32)
    rows = noise_sweep(half, 2, 1, 2, f, [0.0, 0.01, 0.02], 100, 7)
    assert rows[0].mean_rel_err <= 1e-8
    assert rows[2].mean_rel_err / rows[1].mean_rel_err == pytest.approx(2, rel=0.2)
    assert rows[1].sup_inverse_norm == pytest.approx((1 + 5**0.5) / 2)


def test_noise_sweep_orders_by_conditioning(half):
    # second kernel has a much larger inverse norm
    bad = Kernel.from_taps({0: 0.8, 1: 0.2})
    f = random_signal(np.random.default_rng(8), 32)
    a = noise_sweep(half, 2, 1, 2, f, [0.01], 100, 3)[0]
    b = noise_sweep(bad, 2, 1, 2, f, [0.01], 100, 3)[0]
    assert b.sup_inverse_norm / a.sup_inverse_norm > 2
    assert b.mean_rel_err >= a.mean_rel_err


def test_noise_sweep_reproducible(half):
    f = random_signal(np.random.default_rng(9), 16)
    assert noise_sweep(half, 2, 1, 2, f, [0.1], 5, 11) == noise_sweep(half, 2, 1, 2, f, [0.1], 5, 11)
