"""Example states on the cylinder and their closed-form Wigner functions.

These evaluators are independent of the kernel-matrix path in
:mod:`oamwigner.cylinder` and serve as its cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cylinder import CylinderGrid, PhasePoint
from .lattice import LWindow, StateVector, basis_state, reduce_angle
from .theta import theta3

NOME = math.exp(-1.0)
COHERENT_MARGIN = 6
# Gaussian weight e^{-n^2 - n} is below e^{-144} beyond this many terms.
ODD_SUM_CUTOFF = 12
REALITY_TOL = 1e-10


def coherent_norm() -> float:
    """``theta_3(0 | 1/e) = sum_n exp(-n^2)``, the coherent-state normaliser."""
    return float(theta3(0.0, NOME).real)


@dataclass(frozen=True)
class CoherentLabel:
    l0: int
    phi0: float

    def __post_init__(self):
        object.__setattr__(self, "l0", int(self.l0))
        object.__setattr__(self, "phi0", reduce_angle(self.phi0))


@dataclass(frozen=True)
class SuperpositionLabel:
    l1: int
    l2: int
    phi0: float = 0.0

    def __post_init__(self):
        if self.l1 == self.l2:
            raise ValueError("superposition needs two distinct levels")
        object.__setattr__(self, "l1", int(self.l1))
        object.__setattr__(self, "l2", int(self.l2))
        object.__setattr__(self, "phi0", reduce_angle(self.phi0))


@dataclass(frozen=True)
class AngleComb:
    """Periodic delta ``weight * delta_2pi(phi - location)``; flat in ``l``."""

    location: float
    weight: float = 1 / (2 * math.pi)
    normalizable: bool = False

    @property
    def total(self) -> float:
        # Flat in l: the phase-space integral diverges.
        return math.inf


def coherent_window(label: CoherentLabel, margin: int = COHERENT_MARGIN, lmin=None, lmax=None) -> LWindow:
    """Smallest window holding ``l0 +- margin`` and, if given, ``[lmin, lmax]``."""
    lo = label.l0 - margin if lmin is None else min(lmin, label.l0 - margin)
    hi = label.l0 + margin if lmax is None else max(lmax, label.l0 + margin)
    return LWindow(lo, hi)


def coherent_state(window: LWindow, label: CoherentLabel, margin: int = COHERENT_MARGIN) -> StateVector:
    if window.lmin > label.l0 - margin or window.lmax < label.l0 + margin:
        raise ValueError(
            f"window {window} must cover l0 +- {margin} = [{label.l0 - margin}, {label.l0 + margin}]"
        )
    ls = window.ls
    amp = np.exp(-1j * ls * label.phi0) * np.exp(-((ls - label.l0) ** 2) / 2) / math.sqrt(coherent_norm())
    return StateVector(window, amp)


def superposition_state(window: LWindow, label: SuperpositionLabel) -> StateVector:
    for l in (label.l1, label.l2):
        if not window.contains(l):
            raise ValueError(f"level {l} outside window {window}")
    amp = np.zeros(window.dim, dtype=complex)
    amp[window.idx(label.l1)] = 1 / math.sqrt(2)
    amp[window.idx(label.l2)] = np.exp(1j * label.phi0) / math.sqrt(2)
    return StateVector(window, amp)


def eigenstate(window: LWindow, l0: int) -> StateVector:
    return basis_state(window, l0)


def analytic_wigner_lstate(l0: int, point: PhasePoint) -> float:
    return 1 / (2 * math.pi) if point.l == l0 else 0.0


def analytic_wigner_anglestate(phi0: float, point: PhasePoint, tol: float = 1e-12):
    """Wigner function of the angle eigenstate: a comb on the line ``phi = phi0``.

    Returns an :class:`AngleComb` at the singular line and ``0.0`` elsewhere;
    the comb is never collapsed to a float.
    """
    gap = abs(reduce_angle(point.phi - phi0))
    if gap < tol:
        return AngleComb(reduce_angle(phi0))
    return 0.0


def coherent_wigner_parts(label: CoherentLabel, l, phi) -> tuple[np.ndarray, np.ndarray]:
    """Even and odd parts ``(W+, W-)`` of the coherent-state Wigner function, broadcast over ``l, phi``."""
    l, phi = np.broadcast_arrays(np.asarray(l), np.asarray(phi, dtype=float))
    norm = coherent_norm()
    x = phi - label.phi0
    even = np.exp(-((l - label.l0) ** 2)) * theta3(x, NOME).real / (2 * math.pi * norm)

    m = np.arange(-ODD_SUM_CUTOFF, ODD_SUM_CUTOFF + 1)
    shift = (label.l0 - l)[..., None]
    sign = np.where((m + shift) % 2 == 0, 1.0, -1.0)
    ring_sum = (sign * np.exp(-(m**2) - m) / (m + shift + 0.5)).sum(axis=-1)
    pref = np.exp(1j * x - 0.5) / (2 * math.pi**2 * norm)
    odd = pref * theta3(x + 0.5j, NOME) * ring_sum
    residue = float(np.max(np.abs(odd.imag), initial=0.0))
    if residue > REALITY_TOL:
        raise ArithmeticError(f"odd part has imaginary residue {residue:.3e}")
    return even, odd.real


def analytic_wigner_coherent(label: CoherentLabel, point: PhasePoint) -> float:
    even, odd = coherent_wigner_parts(label, point.l, point.phi)
    return float(even + odd)


def analytic_coherent_field(label: CoherentLabel, grid: CylinderGrid) -> np.ndarray:
    even, odd = coherent_wigner_parts(label, grid.window.ls[:, None], grid.phis[None, :])
    return even + odd


def coherent_ring_marginal(label: CoherentLabel, l) -> np.ndarray:
    return np.exp(-((np.asarray(l) - label.l0) ** 2)) / coherent_norm()


def coherent_angle_marginal(label: CoherentLabel, phi) -> np.ndarray:
    """``sum_l W(l, phi)`` over the whole ladder: ``theta_3((phi-phi0)/2 | e^(-1/2))^2 / (2 pi theta_3(0|1/e))``."""
    x = (np.asarray(phi, dtype=float) - label.phi0) / 2
    return theta3(x, math.exp(-0.5)).real ** 2 / (2 * math.pi * coherent_norm())


def superposition_wigner_parts(label: SuperpositionLabel, l, phi) -> tuple[np.ndarray, np.ndarray]:
    l, phi = np.broadcast_arrays(np.asarray(l), np.asarray(phi, dtype=float))
    l1, l2 = label.l1, label.l2
    wave = np.cos(label.phi0 + (l2 - l1) * phi)
    even = ((l == l1).astype(float) + (l == l2) + 2 * (l1 + l2 == 2 * l) * wave) / (4 * math.pi)
    if (l1 + l2) % 2 == 0:
        return even, np.zeros_like(even)
    sign = np.where((l + (l1 + l2 - 1) // 2) % 2 == 0, 1.0, -1.0)
    odd = wave * sign / (math.pi**2 * (l1 + l2 - 2 * l))
    return even, odd


def analytic_wigner_superposition(label: SuperpositionLabel, point: PhasePoint) -> float:
    even, odd = superposition_wigner_parts(label, point.l, point.phi)
    return float(even + odd)


def analytic_superposition_field(label: SuperpositionLabel, grid: CylinderGrid) -> np.ndarray:
    even, odd = superposition_wigner_parts(label, grid.window.ls[:, None], grid.phis[None, :])
    return even + odd
