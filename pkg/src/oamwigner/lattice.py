"""Truncated angular-momentum ladder.

Operators on the integer ladder are represented as finite sections over an
:class:`LWindow` ``[lmin, lmax]``. The shift operator ``E`` is an isometry
only away from the window edges, so structural checks are restricted to
interior entries (see :func:`interior_mask`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_MARGIN = 2


def reduce_angle(phi):
    """Map an angle (scalar or array) into ``[-pi, pi)``."""
    out = np.mod(np.asarray(phi, dtype=float) + np.pi, 2 * np.pi) - np.pi
    if np.ndim(out) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class LWindow:
    lmin: int
    lmax: int

    def __post_init__(self):
        if int(self.lmin) != self.lmin or int(self.lmax) != self.lmax:
            raise ValueError("window bounds must be integers")
        if self.lmin > self.lmax:
            raise ValueError(f"lmin={self.lmin} exceeds lmax={self.lmax}")

    @property
    def dim(self) -> int:
        return self.lmax - self.lmin + 1

    @property
    def ls(self) -> np.ndarray:
        return np.arange(self.lmin, self.lmax + 1)

    def idx(self, l: int) -> int:
        if not self.contains(l):
            raise IndexError(f"l={l} outside window [{self.lmin}, {self.lmax}]")
        return int(l) - self.lmin

    def contains(self, l: int) -> bool:
        return self.lmin <= l <= self.lmax

    def interior(self, margin: int = DEFAULT_MARGIN) -> np.ndarray:
        """Ladder labels at distance >= ``margin`` from both edges."""
        return np.arange(self.lmin + margin, self.lmax - margin + 1)


def make_window(lmin: int, lmax: int) -> LWindow:
    return LWindow(int(lmin), int(lmax))


def interior_mask(window: LWindow, margin: int = DEFAULT_MARGIN) -> np.ndarray:
    """Boolean ``dim x dim`` mask selecting entries whose row and column are interior."""
    ls = window.ls
    inner = (ls >= window.lmin + margin) & (ls <= window.lmax - margin)
    return inner[:, None] & inner[None, :]


def _check_same_window(a: LWindow, b: LWindow):
    if a != b:
        raise ValueError(f"window mismatch: {a} vs {b}")


@dataclass(frozen=True, eq=False)
class Operator:
    """Matrix over an :class:`LWindow`, rows and columns indexed by ``l - lmin``."""

    window: LWindow
    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (self.window.dim, self.window.dim):
            raise ValueError(f"matrix shape {mat.shape} does not match window dim {self.window.dim}")
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _check_same_window(self.window, other.window)
            return Operator(self.window, self.mat @ other.mat)
        if isinstance(other, StateVector):
            _check_same_window(self.window, other.window)
            return StateVector(self.window, self.mat @ other.amp, normalized=False)
        return NotImplemented

    def __add__(self, other: Operator) -> Operator:
        _check_same_window(self.window, other.window)
        return Operator(self.window, self.mat + other.mat)

    def __sub__(self, other: Operator) -> Operator:
        _check_same_window(self.window, other.window)
        return Operator(self.window, self.mat - other.mat)

    def __mul__(self, scalar) -> Operator:
        return Operator(self.window, self.mat * scalar)

    __rmul__ = __mul__

    @property
    def dag(self) -> Operator:
        return Operator(self.window, self.mat.conj().T)

    def element(self, a: int, b: int) -> complex:
        """``<a| op |b>`` addressed by ladder labels."""
        return complex(self.mat[self.window.idx(a), self.window.idx(b)])

    def power(self, k: int) -> Operator:
        if k < 0:
            raise ValueError("negative powers are not defined for truncated operators")
        return Operator(self.window, np.linalg.matrix_power(self.mat, k))


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Ladder amplitudes ``<l|psi>`` over a window.

    ``normalized`` flags whether the amplitudes are claimed to have unit norm;
    the claim is checked on construction.
    """

    window: LWindow
    amp: np.ndarray
    normalized: bool = True
    tol: float = 1e-12

    def __post_init__(self):
        amp = np.asarray(self.amp, dtype=complex).reshape(-1)
        if amp.shape != (self.window.dim,):
            raise ValueError(f"amplitude length {amp.shape[0]} does not match window dim {self.window.dim}")
        if self.normalized and abs(np.vdot(amp, amp).real - 1.0) > self.tol:
            raise ValueError(f"state flagged normalized but norm^2 = {np.vdot(amp, amp).real!r}")
        amp.flags.writeable = False
        object.__setattr__(self, "amp", amp)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amp, self.amp).real))

    def tail(self) -> float:
        """Probability mass on the two edge levels, a proxy for truncation error."""
        return float(abs(self.amp[0]) ** 2 + abs(self.amp[-1]) ** 2) if self.window.dim > 1 else 0.0

    def amplitude(self, l: int) -> complex:
        return complex(self.amp[self.window.idx(l)]) if self.window.contains(l) else 0j

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.window, np.outer(self.amp, self.amp.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian matrix ``rho[i, j] = <l_i| rho |l_j>`` over a window.

    ``physical=True`` additionally enforces unit trace and positivity.
    ``meta`` carries provenance such as the reconstruction constant.
    """

    window: LWindow
    mat: np.ndarray
    physical: bool = False
    tol: float = 1e-10
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (self.window.dim, self.window.dim):
            raise ValueError(f"matrix shape {mat.shape} does not match window dim {self.window.dim}")
        if np.max(np.abs(mat - mat.conj().T), initial=0.0) > self.tol:
            raise ValueError("density matrix is not Hermitian")
        if self.physical:
            if abs(np.trace(mat).real - 1.0) > self.tol:
                raise ValueError(f"trace {np.trace(mat).real!r} differs from 1")
            if np.linalg.eigvalsh(mat).min() < -self.tol:
                raise ValueError("density matrix has negative eigenvalues")
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)

    @property
    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def element(self, a: int, b: int) -> complex:
        return complex(self.mat[self.window.idx(a), self.window.idx(b)])


def as_density(state) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, StateVector):
        return state.density()
    raise TypeError(f"expected StateVector or DensityMatrix, got {type(state).__name__}")


def basis_state(window: LWindow, l: int) -> StateVector:
    amp = np.zeros(window.dim, dtype=complex)
    amp[window.idx(l)] = 1.0
    return StateVector(window, amp)


def shift_op(window: LWindow) -> Operator:
    """Lowering shift ``E|l> = |l-1>``.

    The truncated section drops ``E|lmin>``, so ``E`` is sub-unitary at the
    lower edge and ``E^dagger`` at the upper one.
    """
    return Operator(window, np.eye(window.dim, k=1))


def shift_power(window: LWindow, k: int) -> Operator:
    """``E^k`` for any integer ``k``; negative powers use ``(E^dagger)^|k|``.

    Entries with both labels inside the window are exact: ``<a|E^k|b> = delta(a, b - k)``.
    """
    return Operator(window, np.eye(window.dim, k=int(k)))


def angmom_op(window: LWindow) -> Operator:
    return Operator(window, np.diag(window.ls.astype(complex)))


def euler_ops(window: LWindow) -> tuple[Operator, Operator]:
    """Cosine and sine operators ``C = (E + E^dag)/2``, ``S = (E - E^dag)/2i``."""
    e = shift_op(window).mat
    c = (e + e.conj().T) / 2
    s = (e - e.conj().T) / 2j
    return Operator(window, c), Operator(window, s)


def rotation(window: LWindow, phi: float) -> Operator:
    """``exp(-i phi L)``, diagonal in the ladder basis."""
    if not np.isfinite(phi):
        raise ValueError("rotation angle must be finite")
    return Operator(window, np.diag(np.exp(-1j * phi * window.ls)))


def angle_amplitudes(state: StateVector, phi) -> np.ndarray | complex:
    """``<phi|psi> = (2 pi)^(-1/2) sum_l exp(-i l phi) psi_l`` for scalar or array ``phi``.

    The angle basis is ``|phi> = (2 pi)^(-1/2) sum_l exp(i l phi) |l>``.
    """
    phi_arr = np.asarray(phi, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(phi_arr, state.window.ls))
    out = phases @ state.amp / np.sqrt(2 * np.pi)
    return complex(out) if out.ndim == 0 else out


def random_state(window: LWindow, rng: np.random.Generator) -> StateVector:
    """Haar-like random pure state supported on the whole window."""
    amp = rng.normal(size=window.dim) + 1j * rng.normal(size=window.dim)
    return StateVector(window, amp / np.linalg.norm(amp))


def random_density(window: LWindow, rng: np.random.Generator, rank: int = 2) -> DensityMatrix:
    """Random mixture of ``rank`` random pure states with random weights."""
    weights = rng.dirichlet(np.ones(rank))
    mat = sum(w * random_state(window, rng).density().mat for w in weights)
    return DensityMatrix(window, (mat + mat.conj().T) / 2, physical=True)
