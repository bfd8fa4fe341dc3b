"""Discrete Wigner function of a single qudit on the ``d x d`` torus.

Clock and shift: ``Z|n> = omega^n |n>``, ``X|n> = |n+1 mod d>``, so that
``ZX = omega XZ``. Displacements ``D(k, l) = exp(i phase(k, l)) Z^k X^l`` use
``phase(k, l) = -(2 pi / d) * inv2 * k l``; this sign is the one for which
``D(k, l)^dagger = D(-k, -l)``, which in turn makes the kernel Hermitian and
``w(0, 0)`` proportional to the parity ``n -> -n``.

The normalisation constants of the kernel set are measured, not assumed:
with the ``1/d^2`` kernel prefactor one finds ``Tr[w w'] = delta / d`` and a
reconstruction constant ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class QuditPhaseSpace:
    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.d!r}")

    @property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi / self.d))

    @property
    def is_prime(self) -> bool:
        return is_prime(self.d)

    @property
    def inv2(self) -> int | float:
        """Inverse of 2 used in the displacement phase: modular for odd ``d``, ``1/2`` otherwise."""
        return pow(2, -1, self.d) if self.d % 2 else 0.5

    @property
    def has_kernel(self) -> bool:
        # A half-integer phase is not periodic mod d once d > 2 is even.
        return self.d % 2 == 1 or self.d == 2


@dataclass(frozen=True, eq=False)
class QuditOperator:
    d: int
    mat: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (self.d, self.d):
            raise ValueError(f"matrix shape {mat.shape} does not match d={self.d}")
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)

    @property
    def dag(self) -> QuditOperator:
        return QuditOperator(self.d, self.mat.conj().T)


def _space(space) -> QuditPhaseSpace:
    return space if isinstance(space, QuditPhaseSpace) else QuditPhaseSpace(int(space))


def pauli_ops(space) -> tuple[QuditOperator, QuditOperator]:
    """Clock ``Z`` and shift ``X``."""
    sp = _space(space)
    d = sp.d
    n = np.arange(d)
    z = np.diag(np.exp(2j * np.pi * n / d))
    x = np.zeros((d, d), dtype=complex)
    x[(n + 1) % d, n] = 1.0
    return QuditOperator(d, z), QuditOperator(d, x)


def displacement_phase(space, k: int, l: int) -> float:
    sp = _space(space)
    k, l = k % sp.d, l % sp.d
    return float(np.mod(-2 * np.pi / sp.d * sp.inv2 * k * l, 2 * np.pi))


def qudit_displacement(space, k: int, l: int) -> QuditOperator:
    sp = _space(space)
    z, x = pauli_ops(sp)
    k, l = k % sp.d, l % sp.d
    mat = np.linalg.matrix_power(z.mat, k) @ np.linalg.matrix_power(x.mat, l)
    return QuditOperator(sp.d, np.exp(1j * displacement_phase(sp, k, l)) * mat)


@lru_cache(maxsize=None)
def _kernels(d: int) -> np.ndarray:
    sp = QuditPhaseSpace(d)
    if not sp.has_kernel:
        raise ValueError(f"no Hermitian kernel on Z_{d}: even d > 2 has no consistent displacement phase")
    disp = np.array([[qudit_displacement(sp, m, n).mat for n in range(d)] for m in range(d)])
    idx = np.arange(d)
    out = np.empty((d, d, d, d), dtype=complex)
    for k in range(d):
        for l in range(d):
            phase = np.exp(2j * np.pi * ((k * idx[None, :] - l * idx[:, None]) % d) / d)
            out[k, l] = np.einsum("mn,mnab->ab", phase, disp) / d**2
    out.flags.writeable = False
    return out


def qudit_kernel(space, k: int, l: int) -> QuditOperator:
    """``w(k, l) = d^-2 sum_{m,n} omega^(kn - lm) D(m, n)``."""
    sp = _space(space)
    return QuditOperator(sp.d, _kernels(sp.d)[k % sp.d, l % sp.d])


def parity(space) -> QuditOperator:
    sp = _space(space)
    mat = np.zeros((sp.d, sp.d), dtype=complex)
    n = np.arange(sp.d)
    mat[(-n) % sp.d, n] = 1.0
    return QuditOperator(sp.d, mat)


@lru_cache(maxsize=None)
def _constants(d: int) -> dict:
    kern = _kernels(d).reshape(d * d, d, d)
    gram = np.einsum("iab,jba->ij", kern, kern)
    gamma = float(gram[0, 0].real)
    w00 = kern[0]
    par = parity(d).mat
    kappa = complex(np.vdot(par, w00) / np.vdot(par, par))
    return {
        "overlap_constant": gamma,
        "overlap_offdiag_max": float(np.max(np.abs(gram - np.diag(np.diag(gram))))),
        "overlap_diag_spread": float(np.max(np.abs(np.diag(gram) - gamma))),
        "reconstruction_constant": 1.0 / gamma,
        "parity_constant": kappa.real,
        "parity_residual": float(np.max(np.abs(w00 - kappa * par))),
    }


def measured_constants(space) -> dict:
    """Brute-force kernel normalisation for dimension ``d``.

    ``overlap_constant`` is ``Tr[w(k,l) w(k,l)]``; ``reconstruction_constant``
    its inverse; ``parity_constant`` the best fit of ``w(0,0)`` to the
    ``n -> -n`` permutation, with the residual of that fit.
    """
    return dict(_constants(_space(space).d))


def _matrix(rho, d: int) -> np.ndarray:
    mat = rho.mat if isinstance(rho, QuditOperator) else np.asarray(rho, dtype=complex)
    if mat.shape != (d, d):
        raise ValueError(f"state shape {mat.shape} does not match d={d}")
    return mat


def qudit_wigner_map(rho, space, tol: float = 1e-12) -> np.ndarray:
    """``W[k, l] = Tr[rho w(k, l)]``, real for Hermitian ``rho``."""
    sp = _space(space)
    mat = _matrix(rho, sp.d)
    if np.max(np.abs(mat - mat.conj().T)) > tol:
        raise ValueError("qudit state is not Hermitian")
    vals = np.einsum("ba,klab->kl", mat, _kernels(sp.d))
    if np.max(np.abs(vals.imag)) > tol:
        raise ValueError("kernel produced complex Wigner values")
    return vals.real


def qudit_inverse(field_values, space) -> QuditOperator:
    """``rho = c_d sum_{k,l} W(k, l) w(k, l)`` with the measured ``c_d``."""
    sp = _space(space)
    vals = np.asarray(field_values, dtype=float)
    if vals.shape != (sp.d, sp.d):
        raise ValueError(f"field shape {vals.shape} does not match d={sp.d}")
    c = _constants(sp.d)["reconstruction_constant"]
    mat = c * np.einsum("kl,klab->ab", vals, _kernels(sp.d))
    return QuditOperator(sp.d, mat, meta={"reconstruction_constant": c})


def qudit_overlap(w1, w2, space) -> float:
    """``Tr(rho1 rho2)`` from two discrete Wigner functions."""
    sp = _space(space)
    return float(_constants(sp.d)["reconstruction_constant"] * np.sum(np.asarray(w1) * np.asarray(w2)))


def is_prime(d: int) -> bool:
    return d >= 2 and all(d % p for p in range(2, int(math.isqrt(d)) + 1))
