import numpy as np
import pytest
from conftest import PHI
from oracles import sinc_energy

from dynsamp import (
    FrequencyGrid,
    Kernel,
    NoCertificateError,
    RegularityEnvelope,
    RegularityError,
    analysis_matrix,
    analytic_frame_bounds,
    density_certificate,
    empirical_frame_bounds,
    explicit,
    finite_set_decay,
    lemma_constants,
    regularity,
    sublattice,
)
from dynsamp.frames import FrameBounds, LemmaConstants

SMOOTH3_TAPS = {-1: 0.125, 0: 0.75, 1: 0.125}


def test_regularity_smoother(smooth3, grid1024):
    env = regularity(smooth3, grid1024)
    assert env.nu <= 0.5 and env.nu == pytest.approx(0.5, abs=1e-5)
    assert env.mu == pytest.approx(1.0, abs=1e-12)
    assert env.kappa == pytest.approx(np.pi / 2, rel=1e-12)


def test_regularity_envelope_is_certified():
    k = Kernel.from_taps({-2: 0.05, -1: 0.1, 0: 0.6, 1: 0.1, 2: 0.05})
    env = regularity(k, FrequencyGrid(64))
    w = np.linspace(0, 1, 200_001)
    from dynsamp import symbol, symbol_derivative

    vals = symbol(k, w).real
    assert env.nu <= vals.min() and vals.max() <= env.mu + 1e-12
    assert np.abs(symbol_derivative(k, w)).max() <= env.kappa + 1e-12


def test_regularity_identity(ident, grid1024):
    env = regularity(ident, grid1024)
    assert (env.nu, env.mu, env.kappa) == (1.0, 1.0, 0.0)


def test_regularity_rejects_complex_symbol(half, grid1024):
    with pytest.raises(RegularityError) as exc:
        regularity(half, grid1024)
    assert 0 <= exc.value.omega < 1


def test_regularity_rejects_sign_change(grid1024):
    with pytest.raises(RegularityError, match="not positive"):
        regularity(Kernel.from_taps({-1: 0.5, 0: 0.2, 1: 0.5}), grid1024)


def test_lemma_constants_examples():
    env = RegularityEnvelope(0.5, 1.0, np.pi / 2)
    lc = lemma_constants(env, 1)
    assert lc.c_a == pytest.approx(4 / np.pi**2) and lc.C_a == 1.0
    assert lemma_constants(RegularityEnvelope(1, 1, 0), 2).c_a == pytest.approx(8 / np.pi**2)
    with pytest.raises(ValueError):
        lemma_constants(env, 0)


@pytest.mark.parametrize("N", [1, 2, 4])
def test_lemma_constants_bound_evolved_probe(smooth3, grid1024, N):
    lc = lemma_constants(regularity(smooth3, grid1024), N)
    lags = np.arange(-64, 65)
    e = sinc_energy(SMOOTH3_TAPS, N, 4096, lags)
    slack = 1e-3
    near = np.isin(lags, [-1, 0, 1])
    assert np.all(e[near] >= lc.c_a - slack)
    assert np.all(e <= lc.C_a / (1 + lags.astype(float) ** 2) + slack)


def test_analytic_bounds(half, ident, interleaved, grid1024):
    fb = analytic_frame_bounds(ident, 1, grid1024)
    assert (fb.c_min, fb.c_max) == pytest.approx((1, 1))
    fb = analytic_frame_bounds(half, 2, grid1024)
    assert fb.c_min == pytest.approx(1 / (2 * PHI**2)) and fb.c_max == pytest.approx(PHI**2 / 2)
    fb = analytic_frame_bounds(half, 2, grid1024, normalization="m_squared")
    assert fb.c_min == pytest.approx(0.095492, abs=1e-6) and fb.c_max == pytest.approx(0.654508, abs=1e-6)
    fb = analytic_frame_bounds(interleaved, 2, grid1024)
    assert fb.c_min == 0 and not fb.is_frame


def test_analysis_matrix_entries(half):
    A = analysis_matrix(half, [0, 2], 2, np.arange(-1, 3))
    assert np.allclose(A, [[0, 1, 0, 0], [0, 0, 0, 1], [0.5, 0.5, 0, 0], [0, 0, 0.5, 0.5]])


def test_empirical_identity(ident):
    fb = empirical_frame_bounds(ident, sublattice(1, 1), 1, (0, 63))
    assert (fb.c_min, fb.c_max) == pytest.approx((1, 1))


def test_empirical_matches_analytic(half, grid1024):
    emp = empirical_frame_bounds(half, sublattice(2, 1), 2, (-256, 255))
    ana = analytic_frame_bounds(half, 2, grid1024)
    assert emp.c_min == pytest.approx(ana.c_min, rel=0.05)
    assert emp.c_max == pytest.approx(ana.c_max, rel=0.05)
    # finite sections bracket the true constants from inside
    assert emp.c_min >= ana.c_min * (1 - 1e-9) and emp.c_max <= ana.c_max * (1 + 1e-9)


def test_empirical_finite_set_lower_bound_vanishes(smooth3):
    vals = [empirical_frame_bounds(smooth3, explicit([0], (-500, 500)), 1, (-w, w), 0).c_min for w in (0, 2, 8)]
    assert vals[0] > 0 and vals[1] == 0 and vals[2] == 0


def test_density_certificate_arithmetic():
    cert = density_certificate(LemmaConstants(0.4, 1.0, 2), FrameBounds(0.1, 0.65, "analytic"))
    assert cert.lower == pytest.approx(1 / 30) and cert.upper == 1.5
    tiny = density_certificate(LemmaConstants(0.4, 1.0, 2), FrameBounds(1e-12, 0.65, "analytic"))
    assert tiny.lower < 1e-11
    with pytest.raises(NoCertificateError):
        density_certificate(LemmaConstants(0.4, 1.0, 2), FrameBounds(0.0, 0.65, "analytic", is_frame=False))


def test_density_certificate_end_to_end_even_lattice(smooth3, grid1024):
    # a real symbol always has a node collision for m = 2, so c_min here is a finite-window value
    fb = empirical_frame_bounds(smooth3, sublattice(2, 1), 2, (-256, 255))
    cert = density_certificate(lemma_constants(regularity(smooth3, grid1024), 2), fb)
    assert cert.lower <= 0.5 <= cert.upper <= 1.5


def _upstream(d):
    return -(d - 1)


def test_decay_single_sensor():
    k = Kernel.from_taps({1: 0.99})
    curve = finite_set_decay(k, [0], [64, 128, 256, 512, 1024], window_start=_upstream)
    assert curve.strictly_decreasing and curve.ratio < 0.1 and curve.log_slope < 0


def test_decay_full_window_is_flat(smooth3):
    for d in (4, 9, 16):
        c = finite_set_decay(smooth3, list(range(d)), [d], N_rule=1, window_start=0)
        assert c.sigma_min_sq[0] == pytest.approx(1.0)


def test_decay_more_sensors_dominate():
    k = Kernel.from_taps({1: 0.99})
    dims = [8, 32, 128, 512]
    one = finite_set_decay(k, [0], dims, window_start=_upstream)
    two = finite_set_decay(k, [-5, 0], dims, window_start=_upstream)
    assert all(b >= a for a, b in zip(one.sigma_min_sq, two.sigma_min_sq))
    assert one.sigma_min_sq[-1] < 1e-3 and two.sigma_min_sq[-1] < 1e-3
