import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynsamp import (
    InvalidPatternError,
    Kernel,
    Signal,
    WindowCoverageError,
    banach_density,
    collect,
    delta,
    evolve,
    explicit,
    gap_stats,
    sublattice,
)


def test_sublattice_membership():
    assert list(sublattice(2, 1).points_in(-4, 4)) == [-4, -2, 0, 2, 4]
    assert list(sublattice(3, 2).points_in(-3, 5)) == [-3, -2, 0, 1, 3, 4]
    assert list(sublattice(5, 5).points_in(-2, 2)) == [-2, -1, 0, 1, 2]


@pytest.mark.parametrize("m,L", [(0, 1), (2, 0), (2, 3)])
def test_sublattice_rejects_bad_parameters(m, L):
    with pytest.raises(InvalidPatternError):
        sublattice(m, L)


def test_explicit_pattern_validation():
    p = explicit([5, -1, 3])
    assert p.points == (-1, 3, 5) and (p.lo, p.hi) == (-1, 5)
    with pytest.raises(InvalidPatternError):
        explicit([1, 1])
    with pytest.raises(InvalidPatternError):
        explicit([10], (0, 5))


def test_collect_identity_full_lattice(ident):
    f = Signal(-3, [1.0, 2.0j, -1.0, 0.5])
    smp = collect(ident, f, sublattice(1, 1), 1, (-3, 0))
    assert np.array_equal(smp.values[0], f.values)
    assert list(smp.points) == [-3, -2, -1, 0]


def test_collect_two_tap_on_even_sites(half):
    smp = collect(half, delta(0), sublattice(2, 1), 2, (-4, 4))
    pts = list(smp.points)
    i0 = pts.index(0)
    assert smp.values[0, i0] == 1 and np.count_nonzero(smp.values[0]) == 1
    assert smp.values[1, i0] == 0.5 and np.count_nonzero(smp.values[1]) == 1


def test_collect_shift_moves_mass_off_pattern():
    smp = collect(Kernel.from_taps({1: 1.0}), delta(0), sublattice(2, 1), 2, (-2, 2))
    assert np.all(smp.values[1] == 0)


def test_collect_window_coverage(half):
    f = Signal(0, np.ones(6))
    with pytest.raises(WindowCoverageError) as exc:
        collect(half, f, sublattice(2, 1), 3, (0, 4))
    assert exc.value.required == (0, 7)
    collect(half, f, sublattice(2, 1), 3, (0, 7))


@given(st.integers(1, 5), st.data())
@settings(max_examples=30, deadline=None)
def test_collect_matches_direct_evolution(m, data):
    L = data.draw(st.integers(1, m))
    N = data.draw(st.integers(1, 4))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**31)))
    k = Kernel(-1, rng.standard_normal(3))
    f = Signal(int(rng.integers(-5, 5)), rng.standard_normal(7))
    win = (f.start - N - 2, f.end + N + 2)
    smp = collect(k, f, sublattice(m, L), N, win)
    for s in range(N):
        assert np.allclose(smp.values[s], evolve(k, f, s).at(smp.points))


def test_samples_are_linear(half):
    pat, win = sublattice(2, 1), (-2, 10)
    f, g = Signal(0, [1.0, 2.0, 3.0]), Signal(1, [1j, -1.0])
    a = collect(half, f, pat, 2, win)
    b = collect(half, g, pat, 2, win)
    c = collect(half, f + g.scale(2.0), pat, 2, win)
    assert np.allclose((a + b.scale(2.0)).values, c.values)


def test_density_periodic_exact():
    assert banach_density(sublattice(2, 1), [4, 8]).upper == 0.5
    assert banach_density(sublattice(2, 1), [4, 8]).lower == 0.5
    rep = banach_density(sublattice(1, 1), [3])
    assert rep.exact and rep.upper == rep.lower == 1.0
    assert banach_density(sublattice(5, 3), [7, 40]).upper == pytest.approx(0.6)


def test_density_periodic_ratios_converge():
    rep = banach_density(sublattice(3, 2), [3, 30, 300])
    assert abs(rep.sup_ratio[-1] - 2 / 3) < abs(rep.sup_ratio[0] - 2 / 3) + 1e-12
    assert abs(rep.sup_ratio[-1] - 2 / 3) <= 1 / 300


def test_density_finite_set_tends_to_zero():
    rep = banach_density(explicit([0, 1, 5], (-2000, 2000)), [8, 64, 512])
    assert not rep.exact
    assert rep.sup_ratio[0] > rep.sup_ratio[1] > rep.sup_ratio[2]
    assert rep.upper == pytest.approx(3 / 1024) and rep.lower == 0


def test_density_explicit_needs_wide_window():
    with pytest.raises(ValueError):
        banach_density(explicit([0, 1], (0, 10)), [8])


@pytest.mark.parametrize("m,expected", [(2, (2, 0)), (3, (1, 1)), (1, (3, 0))])
def test_gap_stats(m, expected):
    assert gap_stats(sublattice(m, 1), (-20, 20)) == expected


def test_gap_stats_run_contract():
    # every 2R + 2 run meets the pattern, some 2R run misses it
    pat = sublattice(7, 2)
    _, R = gap_stats(pat, (0, 70))
    assert R == 2
    member = pat.contains(np.arange(0, 71))
    runs = np.lib.stride_tricks.sliding_window_view(member, 2 * R + 2)
    assert runs.any(axis=1).all()
    assert not np.lib.stride_tricks.sliding_window_view(member, 2 * R).any(axis=1).all()
