import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oamwigner import cylinder as cyl
from oamwigner.lattice import (
    DensityMatrix,
    LWindow,
    StateVector,
    angle_amplitudes,
    basis_state,
    interior_mask,
    random_density,
    random_state,
)
from oamwigner.states import CoherentLabel, coherent_state


def _embedded(window, core):
    """Place ``core`` amplitudes at the centre of ``window``."""
    amp = np.zeros(window.dim, dtype=complex)
    start = (window.dim - core.size) // 2
    amp[start : start + core.size] = core
    return StateVector(window, amp)


class TestKernel:
    def test_frozen_elements(self):
        assert cyl.kernel_element(1, 0.0, 1, 1) == pytest.approx(1 / (2 * math.pi))
        assert cyl.kernel_element(0, 0.0, 1, 0) == pytest.approx(1 / math.pi**2)
        assert cyl.kernel_element(0, 0.0, 2, 0) == 0
        # s = 1 -> -1/(2 pi^2 * 3/2)
        assert cyl.kernel_element(-1, 0.0, 1, 0) == pytest.approx(-1 / (3 * math.pi**2))
        assert cyl.kernel_element(0, 0.3, 1, -1) == pytest.approx(np.exp(-0.6j) / (2 * math.pi))

    @pytest.mark.parametrize("l,phi", [(0, 0.0), (2, 1.1), (-3, -2.9), (5, math.pi)])
    def test_hermitian_and_trace(self, win6, l, phi):
        k = cyl.kernel_matrix(win6, cyl.PhasePoint(l, phi)).mat
        assert np.abs(k - k.conj().T).max() < 1e-15
        assert np.trace(k).real == pytest.approx(1 / (2 * math.pi), abs=1e-15)

    @pytest.mark.parametrize("l,phi", [(0, 0.0), (1, 0.7), (-2, -2.2), (3, 3.0)])
    def test_oracle_agrees(self, win6, l, phi):
        p = cyl.PhasePoint(l, phi)
        k = cyl.kernel_matrix(win6, p).mat
        m = interior_mask(win6)
        assert np.abs(cyl.kernel_oracle(win6, p, 1024).mat - k)[m].max() < 1e-8
        even = np.subtract.outer(win6.ls, win6.ls) % 2 == 0
        coarse = cyl.kernel_oracle(win6, p, cyl.min_nphi(win6)).mat
        assert np.abs(coarse - k)[even].max() < 1e-12

    def test_oracle_floor(self, win6):
        with pytest.raises(ValueError):
            cyl.kernel_oracle(win6, cyl.PhasePoint(0, 0), cyl.min_nphi(win6) - 1)

    def test_displacement_covariance_of_kernel(self):
        w = LWindow(-8, 8)
        w0 = cyl.kernel_matrix(w, cyl.PhasePoint(0, 0.0)).mat
        for l, phi in [(1, 0.4), (2, -1.3), (-3, 2.0)]:
            d = cyl.displacement(w, l, phi).mat
            moved = d @ w0 @ d.conj().T
            target = cyl.kernel_matrix(w, cyl.PhasePoint(l, phi)).mat
            inside = (w.ls - l >= w.lmin) & (w.ls - l <= w.lmax)
            mask = inside[:, None] & inside[None, :]
            assert np.abs(moved - target)[mask].max() < 1e-13

    def test_odd_displacement_is_antiperiodic(self):
        w = LWindow(-4, 4)
        a = cyl.displacement(w, 1, -math.pi).mat
        b = cyl.displacement(w, 1, math.pi).mat
        assert np.allclose(a, -b)


class TestGrid:
    def test_floor(self, win6):
        assert cyl.min_nphi(win6) == 54
        with pytest.raises(ValueError):
            cyl.CylinderGrid(win6, 53)

    def test_angles(self):
        g = cyl.CylinderGrid(LWindow(0, 0), 8)
        assert g.phis[0] == -math.pi
        assert g.phis[-1] < math.pi
        assert g.dphi == pytest.approx(math.pi / 4)

    def test_phase_point_reduces(self):
        assert cyl.PhasePoint(0, 3 * math.pi).phi == pytest.approx(-math.pi)


class TestWignerMap:
    @pytest.mark.parametrize("l0", [-3, 0, 2, 6])
    def test_eigenstate(self, win6, l0):
        g = cyl.CylinderGrid(win6, 64)
        fld = cyl.wigner_map(basis_state(win6, l0), g)
        expect = np.where(win6.ls[:, None] == l0, 1 / (2 * math.pi), 0.0)
        assert np.abs(fld.values - expect).max() < 1e-12

    def test_window_mismatch(self, win6):
        with pytest.raises(ValueError):
            cyl.wigner_map(basis_state(win6, 0), cyl.CylinderGrid(LWindow(-5, 5), 64))

    def test_thread_count_does_not_change_bits(self, win6, rng):
        rho = random_density(win6, rng, rank=3)
        g = cyl.CylinderGrid(win6, 256)
        one = cyl.wigner_map(rho, g, workers=1).values
        many = cyl.wigner_map(rho, g, workers=7).values
        assert np.array_equal(one, many)

    def test_values_outside_window(self):
        w = LWindow(-1, 1)
        vals = cyl.wigner_values(StateVector(w, [0, 1, 1], normalized=False), [5, 40], [0.0])
        # odd sector leaks to every ring with a 1/s tail
        assert vals[0, 0] != 0
        assert abs(vals[1, 0]) < abs(vals[0, 0])

    def test_marginals(self, win5, rng):
        psi = random_state(win5, rng)
        fld = cyl.wigner_map(psi, cyl.CylinderGrid(win5, 96))
        p_l, p_phi = cyl.marginals(fld)
        assert np.abs(p_l - np.abs(psi.amp) ** 2).max() < 1e-13
        # angle marginal is the density at -phi
        expect = np.abs(angle_amplitudes(psi, -fld.grid.phis)) ** 2
        assert np.abs(p_phi - expect).max() < 1e-12

    def test_normalization(self, win5, rng):
        rho = random_density(win5, rng)
        fld = cyl.wigner_map(rho, cyl.CylinderGrid(win5, 64))
        assert fld.total() == pytest.approx(1.0, abs=1e-12)


class TestInverseAndOverlap:
    def test_round_trip(self, win5, rng):
        rho = random_density(win5, rng, rank=3)
        fld = cyl.wigner_map(rho, cyl.CylinderGrid(win5, 64))
        back = cyl.inverse_map(fld)
        assert np.abs(back.mat - rho.mat).max() < 1e-12
        assert back.meta["inverse_constant"] == pytest.approx(2 * math.pi)

    def test_constant_fixed_by_eigenstate(self, win5):
        # even sector alone: the window-only formula is exact and fixes c = 2 pi
        fld = cyl.wigner_map(basis_state(win5, 0), cyl.CylinderGrid(win5, 64))
        back = cyl.inverse_map(fld, method="quadrature")
        assert back.element(0, 0).real == pytest.approx(1.0, abs=1e-13)
        assert cyl.overlap(fld, fld, ladder_tail=False) == pytest.approx(1.0, abs=1e-13)

    def test_unknown_method(self, win5):
        fld = cyl.wigner_map(basis_state(win5, 0), cyl.CylinderGrid(win5, 64))
        with pytest.raises(ValueError):
            cyl.inverse_map(fld, method="magic")

    def test_window_only_sums_converge_like_one_over_size(self):
        rng = np.random.default_rng(3)
        a, b = (x / np.linalg.norm(x) for x in (rng.normal(size=5) + 1j * rng.normal(size=5) for _ in range(2)))
        exact = abs(np.vdot(a, b)) ** 2
        errs = []
        for half in (8, 16, 32):
            w = LWindow(-half, half)
            g = cyl.CylinderGrid(w, cyl.min_nphi(w))
            f1 = cyl.wigner_map(_embedded(w, a), g)
            f2 = cyl.wigner_map(_embedded(w, b), g)
            errs.append(abs(cyl.overlap(f1, f2, ladder_tail=False) - exact))
            assert cyl.overlap(f1, f2) == pytest.approx(exact, abs=1e-12)
        assert errs[0] > 1e-5
        assert 1.7 < errs[0] / errs[1] < 2.3
        assert 1.7 < errs[1] / errs[2] < 2.3

    def test_overlap_requires_same_grid(self, win5):
        f1 = cyl.wigner_map(basis_state(win5, 0), cyl.CylinderGrid(win5, 64))
        f2 = cyl.wigner_map(basis_state(win5, 0), cyl.CylinderGrid(win5, 66))
        with pytest.raises(ValueError):
            cyl.overlap(f1, f2)

    def test_mixed_state_purity(self, win5, rng):
        rho = random_density(win5, rng, rank=4)
        fld = cyl.wigner_map(rho, cyl.CylinderGrid(win5, 64))
        purity = np.trace(rho.mat @ rho.mat).real
        assert cyl.overlap(fld, fld) == pytest.approx(purity, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(-4, 4), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_round_trip_property(lmin, width, seed):
    w = LWindow(lmin, lmin + width)
    rho = random_density(w, np.random.default_rng(seed))
    fld = cyl.wigner_map(rho, cyl.CylinderGrid(w, cyl.min_nphi(w)))
    assert np.abs(cyl.inverse_map(fld).mat - rho.mat).max() < 1e-10
    assert fld.total() == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_traciality_property(seed):
    rng = np.random.default_rng(seed)
    w = LWindow(-3, 3)
    g = cyl.CylinderGrid(w, 32)
    p, q = random_state(w, rng), random_state(w, rng)
    ov = cyl.overlap(cyl.wigner_map(p, g), cyl.wigner_map(q, g))
    assert ov == pytest.approx(abs(np.vdot(p.amp, q.amp)) ** 2, abs=1e-10)


class TestCovariance:
    def test_coherent_shift(self):
        w = LWindow(-10, 10)
        g = cyl.CylinderGrid(w, 96)
        psi = coherent_state(w, CoherentLabel(0, 0.0))
        for l0, steps in [(1, 7), (-1, 30), (1, -11)]:
            assert cyl.covariance_check(psi, l0, steps * g.dphi, g) < 1e-8

    def test_rejects_offgrid_shift(self):
        w = LWindow(-10, 10)
        g = cyl.CylinderGrid(w, 96)
        with pytest.raises(ValueError):
            cyl.covariance_check(coherent_state(w, CoherentLabel(0, 0.0)), 1, 0.5 * g.dphi, g)

    def test_rejects_shift_off_window(self):
        w = LWindow(-8, 8)
        g = cyl.CylinderGrid(w, 96)
        with pytest.raises(ValueError):
            cyl.covariance_check(basis_state(w, 6), 2, 0.0, g)
