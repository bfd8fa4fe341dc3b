"""Wigner function on the angle / angular-momentum cylinder ``Z x S^1``.

Displacements are ``D(l, phi) = exp(-i l phi / 2) E^(-l) exp(-i phi L)`` and the
Wigner kernel is the double Fourier transform of ``D`` with the angle integral
taken over ``[-pi, pi)``. Its matrix elements have a closed form with a single
contributing term per ``(a, b)``:

* even sector (``a - b`` even): ``exp(-i(a-b)phi) / 2pi`` if ``a + b = 2l``, else 0;
* odd sector (``a - b`` odd): ``exp(-i(a-b)phi) (-1)^s / (2 pi^2 (s + 1/2))`` with
  ``s = (a + b - 1)/2 - l``.

The odd sector couples every ring ``l`` of the infinite ladder with a ``1/l``
tail, so sums over ``l`` (inverse map, overlap, angle marginal) are closed
analytically outside the window instead of being truncated.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import bernoulli

from .lattice import (
    DensityMatrix,
    LWindow,
    Operator,
    as_density,
    reduce_angle,
    rotation,
    shift_power,
)

TWO_PI = 2 * math.pi
# Reconstruction and traciality constants; both are fixed by the |l0><l0| oracle.
INVERSE_CONSTANT = TWO_PI
TRACIALITY_CONSTANT = TWO_PI
REALITY_TOL = 1e-12


def min_nphi(window: LWindow) -> int:
    return 4 * window.dim + 2


@dataclass(frozen=True)
class CylinderGrid:
    window: LWindow
    nphi: int

    def __post_init__(self):
        if self.nphi < min_nphi(self.window):
            raise ValueError(
                f"nphi={self.nphi} below the floor 4*dim+2={min_nphi(self.window)} for window {self.window}"
            )

    @property
    def phis(self) -> np.ndarray:
        return -math.pi + TWO_PI * np.arange(self.nphi) / self.nphi

    @property
    def dphi(self) -> float:
        return TWO_PI / self.nphi


@dataclass(frozen=True)
class PhasePoint:
    l: int
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "phi", reduce_angle(self.phi))


@dataclass(frozen=True, eq=False)
class WignerField:
    """Samples ``values[i, j] = W(l_i, phi_j)`` on a :class:`CylinderGrid`."""

    grid: CylinderGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.window.dim, self.grid.nphi):
            raise ValueError(f"field shape {values.shape} does not match grid")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def window(self) -> LWindow:
        return self.grid.window

    def at(self, l: int, j: int) -> float:
        return float(self.values[self.window.idx(l), j])

    def total(self) -> float:
        """``sum_l int W dphi`` over the window."""
        return float(self.values.sum() * self.grid.dphi)


def _odd_coeff(s):
    s = np.asarray(s)
    return np.where(s % 2 == 0, 1.0, -1.0) / (s + 0.5)


def kernel_coefficients(l, a, b) -> np.ndarray:
    """Real, angle-independent factor of ``<a| w(l, phi) |b>`` (broadcasting over arrays)."""
    l, a, b = np.broadcast_arrays(np.asarray(l), np.asarray(a), np.asarray(b))
    diff = a - b
    odd = diff % 2 != 0
    even_val = np.where(a + b == 2 * l, 1.0 / TWO_PI, 0.0)
    s = (a + b - 1) // 2 - l
    odd_val = _odd_coeff(s) / (2 * math.pi**2)
    return np.where(odd, odd_val, even_val)


def kernel_element(l: int, phi: float, a: int, b: int) -> complex:
    """Closed-form ``<a| w(l, phi) |b>``."""
    return complex(kernel_coefficients(l, a, b) * np.exp(-1j * (a - b) * phi))


def kernel_matrix(window: LWindow, point: PhasePoint) -> Operator:
    ls = window.ls
    a, b = ls[:, None], ls[None, :]
    mat = kernel_coefficients(point.l, a, b) * np.exp(-1j * (a - b) * point.phi)
    return Operator(window, mat)


def displacement(window: LWindow, l: int, phi: float) -> Operator:
    """``exp(-i l phi/2) E^(-l) exp(-i phi L)``.

    ``phi`` is used as given: for odd ``l`` the half-angle phase makes ``D``
    change sign under ``phi -> phi + 2 pi``.
    """
    if not np.isfinite(phi):
        raise ValueError("displacement angle must be finite")
    op = shift_power(window, -int(l)) @ rotation(window, phi)
    return op * np.exp(-0.5j * l * phi)


_EM_ORDERS = 4
_BERNOULLI = bernoulli(2 * _EM_ORDERS)


def kernel_oracle(window: LWindow, point: PhasePoint, nquad: int) -> Operator:
    """Kernel by direct quadrature of its defining Fourier integral over displacements.

    Sums ``exp(-i l' phi) int exp(i l phi') D(l', phi') dphi' / (2pi)^2`` over every
    shift ``l'`` representable in the window. The angle integral uses the
    ``nquad``-interval trapezoid rule on ``[-pi, pi]`` with Euler-Maclaurin end
    corrections through ``h^8``; for odd ``l'`` the integrand is antiperiodic and
    the plain rule would only be second order. The corrections vanish for
    periodic integrands, leaving the trapezoid rule's trigonometric exactness.
    Derivatives come from ``d/dphi' [exp(i l phi') D] = exp(i l phi') D i(l - l'/2 - L)``.
    """
    floor = min_nphi(window)
    if nquad < floor:
        raise ValueError(f"nquad={nquad} below the floor 4*dim+2={floor}")
    h = TWO_PI / nquad
    nodes = -math.pi + h * np.arange(nquad + 1)
    weights = np.full(nquad + 1, h)
    weights[[0, -1]] = h / 2
    lmat = np.diag(window.ls.astype(float))
    total = np.zeros((window.dim, window.dim), dtype=complex)
    for lp in range(-(window.dim - 1), window.dim):
        integral = np.zeros_like(total)
        for x, wt in zip(nodes, weights):
            integral += wt * np.exp(1j * point.l * x) * displacement(window, lp, x).mat
        gen = 1j * ((point.l - lp / 2) * np.eye(window.dim) - lmat)
        g_lo = np.exp(-1j * point.l * math.pi) * displacement(window, lp, -math.pi).mat
        g_hi = np.exp(1j * point.l * math.pi) * displacement(window, lp, math.pi).mat
        for p in range(1, _EM_ORDERS + 1):
            gp = np.linalg.matrix_power(gen, 2 * p - 1)
            jump = g_hi @ gp - g_lo @ gp
            integral -= _BERNOULLI[2 * p] * h ** (2 * p) / math.factorial(2 * p) * jump
        total += np.exp(-1j * lp * point.phi) * integral
    return Operator(window, total / TWO_PI**2)


def _harmonic_weights(rho: DensityMatrix, ls) -> tuple[np.ndarray, np.ndarray]:
    """``C[i, k] = sum_{a-b=k} rho_ba K(l_i, a, b)`` so that ``W(l, phi) = sum_k C[l, k] exp(-ik phi)``."""
    window = rho.window
    dim = window.dim
    ks = np.arange(-(dim - 1), dim)
    wl = window.ls
    ls = np.asarray(ls)
    coeff = kernel_coefficients(ls[:, None, None], wl[None, :, None], wl[None, None, :])
    prod = coeff * rho.mat.T[None, :, :]
    c = np.stack([np.diagonal(prod, offset=-k, axis1=1, axis2=2).sum(axis=-1) for k in ks], axis=1)
    return ks, c


def _evaluate_columns(c, ks, phis):
    phase = np.exp(-1j * np.multiply.outer(ks, phis))
    return (c[:, :, None] * phase[None, :, :]).sum(axis=1)


def wigner_values(rho, ls, phis, workers: int | None = None) -> np.ndarray:
    """``W(l, phi) = Tr[rho w(l, phi)]`` on the product of arbitrary integer ``ls`` and angles ``phis``.

    Rings outside the state's window are allowed; each value is computed
    independently so results do not depend on ``workers``.
    """
    rho = as_density(rho)
    phis = np.asarray(phis, dtype=float)
    ks, c = _harmonic_weights(rho, ls)
    if workers and workers > 1 and phis.size > 1:
        chunks = np.array_split(np.arange(phis.size), min(workers, phis.size))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda idx: _evaluate_columns(c, ks, phis[idx]), chunks))
        vals = np.concatenate(parts, axis=1)
    else:
        vals = _evaluate_columns(c, ks, phis)
    imag = float(np.max(np.abs(vals.imag), initial=0.0))
    if imag > REALITY_TOL:
        raise ValueError(f"Wigner values have imaginary residue {imag:.3e}; input not Hermitian?")
    return vals.real


def wigner_map(rho, grid: CylinderGrid, workers: int | None = None) -> WignerField:
    rho = as_density(rho)
    if rho.window != grid.window:
        raise ValueError(f"state window {rho.window} does not match grid window {grid.window}")
    vals = wigner_values(rho, grid.window.ls, grid.phis, workers=workers)
    return WignerField(grid, vals, meta={"trace": rho.trace})


def harmonics(fld: WignerField) -> tuple[np.ndarray, np.ndarray]:
    """Angular Fourier coefficients ``H[i, k]`` with ``W(l_i, phi) = sum_k H[i, k] exp(-ik phi)``.

    Exact on the grid because ``nphi`` exceeds twice the largest harmonic.
    """
    dim = fld.window.dim
    ks = np.arange(-(dim - 1), dim)
    phase = np.exp(1j * np.multiply.outer(fld.grid.phis, ks))
    return ks, fld.values @ phase / fld.grid.nphi


def _odd_design(window: LWindow, k: int):
    """Column labels and design matrix of odd harmonic ``k`` on the window rings.

    The unknowns are ``rho_ba`` with ``a - b = k``, labelled by ``s = (a+b-1)/2``.
    """
    kk = abs(k)
    s = np.arange(window.lmin + (kk - 1) // 2, window.lmax - (kk + 1) // 2 + 1)
    b = s - (k - 1) // 2
    a = b + k
    design = _odd_coeff(s[None, :] - window.ls[:, None]) / (2 * math.pi**2)
    return s, a, b, design


def _odd_coherences(fld: WignerField) -> dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
    """Solve each odd harmonic for the coherences of the window-supported state behind ``fld``."""
    ks, H = harmonics(fld)
    out = {}
    for col, k in enumerate(ks):
        if k % 2 == 0:
            continue
        s, a, b, design = _odd_design(fld.window, int(k))
        x, *_ = np.linalg.lstsq(design, H[:, col], rcond=None)
        out[int(k)] = (s, a, b, x)
    return out


def _window_gram(window: LWindow, s: np.ndarray) -> np.ndarray:
    f = _odd_coeff(s[None, :] - window.ls[:, None])
    return f.T @ f


def inverse_map(fld: WignerField, method: str = "exact") -> DensityMatrix:
    """Recover ``rho = c sum_{l in Z} int w(l, phi) W(l, phi) dphi`` with ``c = 2 pi``.

    ``method="quadrature"`` evaluates the formula with the ring sum cut at the
    window; that is exact for the even sector but misses the odd-sector tail.
    ``method="exact"`` keeps the even sector and replaces the truncated odd
    ring sum by its infinite-ladder value, obtained by solving each odd
    harmonic's linear system on the window rings.
    """
    window = fld.window
    dim = window.dim
    if method == "quadrature":
        rho = np.zeros((dim, dim), dtype=complex)
        for i, l in enumerate(window.ls):
            for j, phi in enumerate(fld.grid.phis):
                rho += kernel_matrix(window, PhasePoint(int(l), phi)).mat * fld.values[i, j]
        rho *= INVERSE_CONSTANT * fld.grid.dphi
    elif method == "exact":
        ks, H = harmonics(fld)
        rho = np.zeros((dim, dim), dtype=complex)
        for col, k in enumerate(ks):
            if k % 2:
                continue
            b = np.arange(max(window.lmin, window.lmin - k), min(window.lmax, window.lmax - k) + 1)
            a = b + k
            # H_k((a+b)/2) = rho_ba / 2pi
            rho[b - window.lmin, a - window.lmin] = INVERSE_CONSTANT * H[(a + b) // 2 - window.lmin, col]
        for k, (s, a, b, x) in _odd_coherences(fld).items():
            rho[b - window.lmin, a - window.lmin] = x
    else:
        raise ValueError(f"unknown method {method!r}")
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(window, rho, meta={"inverse_constant": INVERSE_CONSTANT, "method": method})


def marginals(fld: WignerField, ladder_tail: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Ring marginal ``P(l) = int W dphi`` and angle marginal ``P(phi_j) = sum_l W(l, phi_j)``.

    With ``ladder_tail`` the angle marginal includes the odd-sector contribution
    of every ring outside the window, using ``sum_{s in Z} (-1)^s/(s+1/2) = pi``.
    The result equals ``<-phi| rho |-phi>`` in the angle basis of
    :func:`oamwigner.lattice.angle_amplitudes`.
    """
    p_l = fld.values.sum(axis=1) * fld.grid.dphi
    p_phi = fld.values.sum(axis=0)
    if ladder_tail:
        window = fld.window
        extra = np.zeros(fld.grid.nphi, dtype=complex)
        for k, (s, a, b, x) in _odd_coherences(fld).items():
            inside = _odd_coeff(s[None, :] - window.ls[:, None]).sum(axis=0)
            amp = x @ (math.pi - inside) / (2 * math.pi**2)
            extra += amp * np.exp(-1j * k * fld.grid.phis)
        p_phi = p_phi + extra.real
    return p_l, p_phi


def _check_same_grid(f1: WignerField, f2: WignerField):
    if f1.grid != f2.grid:
        raise ValueError("fields live on different grids")


def overlap(f1: WignerField, f2: WignerField, ladder_tail: bool = True) -> float:
    """``2 pi sum_l int W1 W2 dphi``; equals ``Tr(rho1 rho2)`` for window-supported states.

    The ring sum runs over the whole ladder when ``ladder_tail`` is set: rings
    outside the window carry only odd harmonics, and their contribution is
    ``sum_{l not in window} f(s_i - l) f(s_j - l) = pi^2 delta_ij - (window Gram)``.
    """
    _check_same_grid(f1, f2)
    total = float((f1.values * f2.values).sum() * f1.grid.dphi)
    if ladder_tail:
        c1 = _odd_coherences(f1)
        c2 = _odd_coherences(f2)
        tail = 0j
        for k, (s, _a, _b, x) in c1.items():
            y = c2[-k][3]
            gram = math.pi**2 * np.eye(s.size) - _window_gram(f1.window, s)
            tail += x @ gram @ y
        # int over phi contributes 2pi, each harmonic carries 1/(2 pi^2)
        total += float((tail * TWO_PI / (4 * math.pi**4)).real)
    return TRACIALITY_CONSTANT * total


def covariance_check(rho, l0: int, phi0: float, grid: CylinderGrid, margin: int = 2, support_tol: float = 1e-12) -> float:
    """Max over the grid of ``|W_{D rho D^dag}(l, phi) - W_rho(l - l0, phi - phi0)|``."""
    rho = as_density(rho)
    window = grid.window
    if rho.window != window:
        raise ValueError("state and grid windows differ")
    steps = phi0 / grid.dphi
    if abs(steps - round(steps)) > 1e-9:
        raise ValueError(f"phi0={phi0} is not a multiple of the grid spacing {grid.dphi}")
    weight = np.max(np.abs(rho.mat), axis=1)
    support = window.ls[weight > support_tol]
    if support.size and (support.min() + l0 < window.lmin + margin or support.max() + l0 > window.lmax - margin):
        raise ValueError("displaced support comes within the margin of the window edge")
    d = displacement(window, l0, phi0)
    moved = DensityMatrix(window, d.mat @ rho.mat @ d.mat.conj().T)
    lhs = wigner_values(moved, window.ls, grid.phis)
    rhs = wigner_values(rho, window.ls - l0, grid.phis - phi0)
    return float(np.max(np.abs(lhs - rhs)))
