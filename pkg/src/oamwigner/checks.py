"""Invariant suites run by ``oamwigner check``.

Each suite returns a list of :class:`Check` rows (measured error against a
tolerance) plus the constants it measured.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import cylinder as cyl
from . import qudit as qd
from . import states as st
from .lattice import (
    LWindow,
    angmom_op,
    basis_state,
    commutator,
    euler_ops,
    interior_mask,
    random_density,
    random_state,
    rotation,
    shift_op,
)
from .theta import theta3, theta3_partial, theta3_tail_bound

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    error: float
    tol: float
    passed: bool

    @classmethod
    def measure(cls, name: str, error: float, tol: float) -> Check:
        error = float(error)
        return cls(name, error, tol, bool(error <= tol))

    @classmethod
    def holds(cls, name: str, ok: bool) -> Check:
        return cls(name, 0.0 if ok else 1.0, 0.0, bool(ok))


def _maxabs(x) -> float:
    return float(np.max(np.abs(x), initial=0.0))


def lattice_suite(window: LWindow) -> list[Check]:
    mask = interior_mask(window)
    e, l = shift_op(window), angmom_op(window)
    c, s = euler_ops(window)
    r1, r2 = rotation(window, 0.37), rotation(window, -1.21)
    return [
        Check.measure("lattice.[E,L]=E", _maxabs((commutator(e, l) - e).mat[mask]), 1e-12),
        Check.measure("lattice.[C,L]=iS", _maxabs((commutator(c, l) - 1j * s).mat[mask]), 1e-12),
        Check.measure("lattice.[S,L]=-iC", _maxabs((commutator(s, l) + 1j * c).mat[mask]), 1e-12),
        Check.measure("lattice.[C,S]=0", _maxabs(commutator(c, s).mat[mask]), 1e-12),
        Check.measure("lattice.rotation_group", _maxabs((r1 @ r2).mat - rotation(window, 0.37 - 1.21).mat), 1e-12),
    ]


def cylinder_suite(window: LWindow, nphi: int | None = None, nquad: int = 1024, seed: int = 0) -> tuple[list[Check], dict]:
    rng = np.random.default_rng(seed)
    grid = cyl.CylinderGrid(window, nphi or max(cyl.min_nphi(window), 64))
    checks = lattice_suite(window)

    err = 0.0
    for l0 in window.interior(0):
        fld = cyl.wigner_map(basis_state(window, int(l0)), grid)
        expect = np.where(window.ls[:, None] == l0, 1 / (2 * math.pi), 0.0)
        err = max(err, _maxabs(fld.values - expect))
    checks.append(Check.measure("cylinder.eigenstate_wigner", err, 1e-12))

    points = [cyl.PhasePoint(int(rng.integers(window.lmin, window.lmax + 1)), rng.uniform(-math.pi, math.pi)) for _ in range(3)]
    mask = interior_mask(window)
    even = (np.subtract.outer(window.ls, window.ls) % 2 == 0) & mask
    herm = orc = coarse = tr = 0.0
    for p in points:
        k = cyl.kernel_matrix(window, p)
        herm = max(herm, _maxabs(k.mat - k.mat.conj().T))
        tr = max(tr, abs(np.trace(k.mat) - 1 / (2 * math.pi)))
        orc = max(orc, _maxabs((cyl.kernel_oracle(window, p, nquad).mat - k.mat)[mask]))
        coarse = max(coarse, _maxabs((cyl.kernel_oracle(window, p, cyl.min_nphi(window)).mat - k.mat)[even]))
    checks += [
        Check.measure("cylinder.kernel_hermitian", herm, 1e-14),
        Check.measure("cylinder.kernel_trace", tr, 1e-12),
        Check.measure("cylinder.kernel_oracle", orc, 1e-8),
        Check.measure("cylinder.kernel_oracle_even_coarse", coarse, 1e-12),
    ]

    rt = norm = 0.0
    for _ in range(5):
        rho = random_density(window, rng)
        fld = cyl.wigner_map(rho, grid)
        rt = max(rt, _maxabs(cyl.inverse_map(fld).mat - rho.mat))
        norm = max(norm, abs(fld.total() - rho.trace))
    checks.append(Check.measure("cylinder.round_trip", rt, 1e-9))
    checks.append(Check.measure("cylinder.normalization", norm, 1e-9))

    trc = 0.0
    for _ in range(5):
        p1, p2 = random_state(window, rng), random_state(window, rng)
        ov = cyl.overlap(cyl.wigner_map(p1, grid), cyl.wigner_map(p2, grid))
        trc = max(trc, abs(ov - abs(np.vdot(p1.amp, p2.amp)) ** 2))
    checks.append(Check.measure("cylinder.traciality", trc, 1e-8))

    # Same |l0> oracle fixes both constants.
    fld0 = cyl.wigner_map(basis_state(window, window.lmin), grid)
    inv_c = cyl.INVERSE_CONSTANT / cyl.inverse_map(fld0, method="quadrature").mat[0, 0].real
    tra_c = cyl.TRACIALITY_CONSTANT / cyl.overlap(fld0, fld0, ladder_tail=False)
    checks.append(Check.measure("cylinder.constants_agree", abs(inv_c - tra_c) + abs(inv_c - 2 * math.pi), 1e-12))

    label = st.CoherentLabel(0, 0.0)
    cwin = st.coherent_window(label, lmin=window.lmin, lmax=window.lmax)
    cgrid = cyl.CylinderGrid(cwin, max(grid.nphi, cyl.min_nphi(cwin)))
    cfld = cyl.wigner_map(st.coherent_state(cwin, label), cgrid)
    checks.append(Check.measure("cylinder.coherent_analytic", _maxabs(cfld.values - st.analytic_coherent_field(label, cgrid)), 1e-8))
    w = lambda l, phi: st.analytic_wigner_coherent(label, cyl.PhasePoint(l, phi))  # noqa: E731
    checks.append(Check.holds("cylinder.coherent_peak_order", w(0, 0) > w(1, 0) > 0))
    checks.append(Check.holds("cylinder.coherent_negativity", w(1, -math.pi) < 0 and w(-1, -math.pi) < 0))

    cov_win = LWindow(-10, 10)
    cov_grid = cyl.CylinderGrid(cov_win, 96)
    cov = cyl.covariance_check(st.coherent_state(cov_win, label), 1, 7 * cov_grid.dphi, cov_grid)
    checks.append(Check.measure("cylinder.covariance", cov, 1e-8))
    constants = {"inverse_constant": cyl.INVERSE_CONSTANT, "traciality_constant": cyl.TRACIALITY_CONSTANT}
    return checks, constants


def qudit_suite(ds) -> tuple[list[Check], dict]:
    rng = np.random.default_rng(1)
    checks: list[Check] = []
    constants = {}
    for d in ds:
        sp = qd.QuditPhaseSpace(d)
        z, x = qd.pauli_ops(sp)
        checks.append(Check.measure(f"qudit[{d}].ZX=wXZ", _maxabs(z.mat @ x.mat - sp.omega * x.mat @ z.mat), 1e-13))
        if not sp.has_kernel:
            continue
        herm = cov = 0.0
        w00 = qd.qudit_kernel(sp, 0, 0).mat
        for k in range(d):
            for l in range(d):
                w = qd.qudit_kernel(sp, k, l).mat
                dk = qd.qudit_displacement(sp, k, l).mat
                herm = max(herm, _maxabs(w - w.conj().T))
                cov = max(cov, _maxabs(w - dk @ w00 @ dk.conj().T))
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = a @ a.conj().T
        rho /= np.trace(rho)
        rt = _maxabs(qd.qudit_inverse(qd.qudit_wigner_map(rho, sp), sp).mat - rho)
        c = qd.measured_constants(sp)
        checks += [
            Check.measure(f"qudit[{d}].kernel_hermitian", herm, 1e-13),
            Check.measure(f"qudit[{d}].covariance", cov, 1e-13),
            Check.measure(f"qudit[{d}].round_trip", rt, 1e-12),
            Check.measure(f"qudit[{d}].overlap_kronecker", c["overlap_offdiag_max"] + c["overlap_diag_spread"], 1e-13),
        ]
        if d % 2:
            checks.append(Check.measure(f"qudit[{d}].parity_structure", c["parity_residual"], 1e-13))
        constants[str(d)] = c
    return checks, constants


def theta_suite() -> tuple[list[Check], dict]:
    zs = [0.3, 1.1 - 0.4j, -2.5 + 0.5j, 0.7 + 2j]
    # nomes near 1 are out of scope; their cancellation exceeds 1e-14
    nomes = [math.exp(-1), math.exp(-2), 0.3]
    per = par = conj = trunc = 0.0
    for q in nomes:
        for z in zs:
            t = theta3(z, q)
            scale = max(1.0, abs(t))
            per = max(per, abs(theta3(z + math.pi, q) - t) / scale)
            par = max(par, abs(theta3(-z, q) - t) / scale)
            conj = max(conj, abs(theta3(np.conj(z), q) - np.conj(t)) / scale)
            for n in (6, 10):
                diff = abs(theta3_partial(z, q, n) - theta3_partial(z, q, n + 4))
                bound = theta3_tail_bound(q, abs(complex(z).imag), n)
                trunc = max(trunc, diff - bound)
    zero = max(abs(theta3(z, 0.0) - 1) for z in zs)
    checks = [
        Check.measure("theta.periodicity", per, 1e-14),
        Check.measure("theta.parity", par, 1e-14),
        Check.measure("theta.conjugation", conj, 1e-14),
        Check.measure("theta.truncation_within_bound", max(trunc, 0.0), 0.0),
        Check.measure("theta.zero_nome", zero, 0.0),
    ]
    return checks, {"theta3(0|1/e)": float(theta3(0.0, math.exp(-1)).real)}


def report(suite: str, checks: list[Check], constants: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
        "constants": constants,
    }
