"""Acceptance criteria, one test each, at their stated tolerances.

Each test prints a single ``PASS``/``FAIL`` line with the measured error.
Run ``python3 tests/test_acceptance.py`` for the summary without pytest.
"""

import math
import sys

import numpy as np
import pytest

from oamwigner import checks
from oamwigner import cylinder as cyl
from oamwigner import qudit as qd
from oamwigner import states as S
from oamwigner.lattice import LWindow, basis_state, interior_mask, random_density, random_state
from oamwigner.theta import theta3

WIN6 = LWindow(-6, 6)
WIN5 = LWindow(-5, 5)


def _line(num, title, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title}: {detail}"


@pytest.fixture
def emit(capsys):
    def _emit(num, title, ok, detail):
        with capsys.disabled():
            print("\n" + _line(num, title, ok, detail))
        assert ok, detail

    return _emit


def criterion_1():
    grid = cyl.CylinderGrid(WIN6, 64)
    err = 0.0
    for l0 in (-3, 0, 2):
        fld = cyl.wigner_map(basis_state(WIN6, l0), grid)
        expect = np.where(WIN6.ls[:, None] == l0, 1 / (2 * math.pi), 0.0)
        err = max(err, float(np.abs(fld.values - expect).max()))
    return err < 1e-12, f"max |W - delta/2pi| = {err:.2e} (tol 1e-12)"


def criterion_2():
    rng = np.random.default_rng(2)
    points = [cyl.PhasePoint(0, 0.0), cyl.PhasePoint(3, -math.pi)]
    points += [cyl.PhasePoint(int(rng.integers(-6, 7)), rng.uniform(-math.pi, math.pi)) for _ in range(4)]
    inner = interior_mask(WIN6)
    even = np.subtract.outer(WIN6.ls, WIN6.ls) % 2 == 0
    fine = coarse = 0.0
    for p in points:
        k = cyl.kernel_matrix(WIN6, p).mat
        fine = max(fine, float(np.abs(cyl.kernel_oracle(WIN6, p, 1024).mat - k)[inner].max()))
        coarse = max(coarse, float(np.abs(cyl.kernel_oracle(WIN6, p, cyl.min_nphi(WIN6)).mat - k)[even].max()))
    ok = fine < 1e-8 and coarse < 1e-12
    return ok, f"interior @1024 {fine:.2e} (tol 1e-8), even @{cyl.min_nphi(WIN6)} {coarse:.2e} (tol 1e-12)"


def criterion_3():
    rng = np.random.default_rng(3)
    grid = cyl.CylinderGrid(WIN5, 64)
    # the constant: the window formula is exact on |l0><l0| and must return it unchanged
    probe = cyl.inverse_map(cyl.wigner_map(basis_state(WIN5, 1), grid), method="quadrature")
    c_err = abs(probe.element(1, 1) - 1)
    err = 0.0
    for _ in range(20):
        rho = random_density(WIN5, rng, rank=int(rng.integers(1, 5)))
        back = cyl.inverse_map(cyl.wigner_map(rho, grid))
        err = max(err, float(np.abs(back.mat - rho.mat).max()))
    ok = err < 1e-9 and c_err < 1e-12 and back.meta["inverse_constant"] == 2 * math.pi
    return ok, f"max entry error {err:.2e} (tol 1e-9), c = 2pi reproduces |l0><l0| to {c_err:.1e}"


def criterion_4():
    rng = np.random.default_rng(4)
    grid = cyl.CylinderGrid(WIN5, 64)
    err = 0.0
    for _ in range(20):
        p, q = random_state(WIN5, rng), random_state(WIN5, rng)
        ov = cyl.overlap(cyl.wigner_map(p, grid), cyl.wigner_map(q, grid))
        err = max(err, abs(ov - abs(np.vdot(p.amp, q.amp)) ** 2))
    return err < 1e-8, f"max |Tr(r1 r2) - 2pi sum int W1 W2| = {err:.2e} (tol 1e-8)"


def criterion_5():
    label = S.CoherentLabel(0, 0.0)
    grid = cyl.CylinderGrid(WIN6, 128)
    fld = cyl.wigner_map(S.coherent_state(WIN6, label), grid)
    field_err = float(np.abs(fld.values - S.analytic_coherent_field(label, grid)).max())
    p_l, _ = cyl.marginals(fld)
    t = float(theta3(0.0, math.exp(-1)).real)
    marg_err = float(np.abs(p_l - np.exp(-WIN6.ls.astype(float) ** 2) / t).max())
    ok = field_err < 1e-8 and marg_err < 1e-10 and abs(t - 1.7726375) < 1e-6
    return ok, f"grid {field_err:.2e} (tol 1e-8), P(l) {marg_err:.2e} (tol 1e-10), theta3(0|1/e) = {t:.8f}"


def criterion_6():
    label = S.CoherentLabel(0, 0.0)
    W = lambda l, phi: S.analytic_wigner_coherent(label, cyl.PhasePoint(l, phi))  # noqa: E731
    order = W(0, 0) > W(1, 0) > 0
    neg = W(1, math.pi) < 0 and W(-1, -math.pi) < 0
    grid = cyl.CylinderGrid(WIN6, 256)
    vals = cyl.wigner_map(S.coherent_state(WIN6, label), grid).values
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    l_min, phi_min = int(WIN6.ls[i]), float(grid.phis[j])
    where = l_min % 2 == 1 and math.pi - abs(phi_min) < 2 * grid.dphi
    detail = f"W(0,0)={W(0, 0):.4f} > W(1,0)={W(1, 0):.4f}; W(1,pi)={W(1, math.pi):.5f}; grid min at l={l_min}, phi={phi_min:.3f}"
    return order and neg and where, detail


def criterion_7():
    grid = cyl.CylinderGrid(LWindow(-4, 4), 120)
    sym_odd = sym_ring = sym_marg = 0.0
    for phi0 in (0.0, 0.7):
        label = S.SuperpositionLabel(3, -3, phi0)
        fld = cyl.wigner_map(S.superposition_state(grid.window, label), grid)
        _, odd = S.superposition_wigner_parts(label, grid.window.ls[:, None], grid.phis[None, :])
        sym_odd = max(sym_odd, float(np.abs(odd).max()))
        off = np.isin(grid.window.ls, (-3, 0, 3), invert=True)
        sym_odd = max(sym_odd, float(np.abs(fld.values[off]).max()))
        ring = fld.values[grid.window.idx(0)]
        sym_ring = max(sym_ring, float(np.abs(ring - np.cos(phi0 - 6 * grid.phis) / (2 * math.pi)).max()))
        _, p_phi = cyl.marginals(fld)
        target = (1 + np.cos(6 * grid.phis - phi0)) / (2 * math.pi)
        sym_marg = max(sym_marg, float(np.abs(p_phi - target).max()), float(-p_phi.min()))
    part_a = sym_odd == 0 and sym_ring < 1e-12 and sym_marg < 1e-12

    win = LWindow(-4, 5)
    label = S.SuperpositionLabel(4, -3, 0.0)
    g2 = cyl.CylinderGrid(win, 120)
    fld = cyl.wigner_map(S.superposition_state(win, label), g2)
    _, odd = S.superposition_wigner_parts(label, win.ls[:, None], g2.phis[None, :])
    amp = np.abs(odd).max(axis=1)
    decay = float(np.abs(amp * np.abs(1 - 2 * win.ls) - 1 / math.pi**2).max())
    var4 = float(np.var(fld.values[win.idx(4)]))
    match = float(np.abs(fld.values - S.analytic_superposition_field(label, g2)).max())
    part_b = bool(np.all(amp > 0)) and decay < 1e-12 and var4 > 0 and match < 1e-12
    detail = (
        f"(3,-3): odd part {sym_odd:.0e}, l=0 ring {sym_ring:.1e}, P(phi) {sym_marg:.1e}; "
        f"(4,-3): min odd ring {amp.min():.2e}, 1/|l1+l2-2l| law {decay:.1e}, var(l=4) {var4:.2e}"
    )
    return part_a and part_b, detail


def criterion_8():
    win = LWindow(-10, 10)
    grid = cyl.CylinderGrid(win, 96)
    psi = S.coherent_state(win, S.CoherentLabel(0, 0.0))
    err = max(cyl.covariance_check(psi, l0, k * grid.dphi, grid) for l0, k in [(1, 7), (-1, -20), (1, 48), (0, 13)])
    return err < 1e-8, f"max |W_shifted - W(l-l0, phi-phi0)| = {err:.2e} (tol 1e-8)"


def criterion_9():
    results, constants = checks.qudit_suite([3, 5, 7])
    ok = all(c.passed for c in results)
    worst = max(results, key=lambda c: c.error / c.tol if c.tol else 0.0)
    consts = ", ".join(f"d={d}: c_d={v['reconstruction_constant']:.6g}, w(0,0)={v['parity_constant']:.4g}*P" for d, v in constants.items())
    q2, _ = checks.qudit_suite([2])
    ok = ok and all(c.passed for c in q2)
    qubit = qd.measured_constants(2)
    ok = ok and qubit["overlap_offdiag_max"] < 1e-13
    return ok, f"{len(results) + len(q2)} checks, worst {worst.name} {worst.error:.1e}; {consts}; d=2 structural only"


def criterion_10():
    results, _ = checks.theta_suite()
    detail = ", ".join(f"{c.name.split('.')[1]} {c.error:.1e}" for c in results)
    return all(c.passed for c in results), detail


CRITERIA = [
    (1, "eigenstate Wigner function", criterion_1),
    (2, "kernel oracle equivalence", criterion_2),
    (3, "round-trip identity", criterion_3),
    (4, "traciality", criterion_4),
    (5, "coherent-state cross-check", criterion_5),
    (6, "negativity and peak structure", criterion_6),
    (7, "superposition structure", criterion_7),
    (8, "covariance", criterion_8),
    (9, "qudit suite", criterion_9),
    (10, "theta function", criterion_10),
]


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(num, title, fn, emit):
    ok, detail = fn()
    emit(num, title, ok, detail)


if __name__ == "__main__":
    failed = 0
    for num, title, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(_line(num, title, ok, detail))
    sys.exit(1 if failed else 0)
