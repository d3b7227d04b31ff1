"""Truncated-Fock-space operator algebra for squeezed light.

Everything lives on an N-dimensional number basis |0>..|N-1>.  Ladder
operators are dense complex matrices; displacement and squeeze unitaries are
built through the scaling-and-squaring exponential in :mod:`sqring.expm`.
States produced by truncated unitaries are exact only where the number
distribution has support well inside the cutoff, which is what the
truncation gate (:func:`required_dim`) polices.

Conventions:

* x = sqrt(hbar/(2 m w)) (a + a+),  p = i sqrt(m hbar w / 2) (a+ - a)
* D(alpha) = exp(alpha a+ - alpha* a)
* S(xi)    = exp((xi* a^2 - xi a+^2) / 2),  xi = r e^{i phi}; phi = 0
  squeezes x.
* Squeezed coherent state: displace after squeezing, D(alpha) S(xi) |0>.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .expm import expm

__all__ = [
    "FockSpace",
    "FockOperator",
    "QuantumState",
    "SqueezeSpec",
    "OscillatorFrame",
    "VarianceReport",
    "TruncationError",
    "WignerCoverageError",
    "required_dim",
    "annihilation",
    "creation",
    "number_operator",
    "parity_operator",
    "quadratures",
    "displacement",
    "squeeze",
    "vacuum",
    "squeezed_coherent_state",
    "variances",
    "photon_distribution",
    "wigner",
]

_TWO_PI = 2.0 * math.pi


class TruncationError(ValueError):
    """The requested state does not fit in the truncated space."""


class WignerCoverageError(ValueError):
    """The phase-space grid does not cover the state's support."""


@dataclass(frozen=True)
class FockSpace:
    """Truncated oscillator Hilbert space of dimension ``dim``."""

    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim!r}")


@dataclass(frozen=True)
class OscillatorFrame:
    """(hbar, m, omega) conventions for the quadratures; natural units by default."""

    hbar: float = 1.0
    m: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "m", "omega"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class SqueezeSpec:
    """Displacement amplitude alpha and squeeze parameter xi = r e^{i phi}.

    phi is stored normalized to [0, 2*pi).
    """

    alpha: complex = 0j
    r: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.r < 0.0:
            raise ValueError(f"squeeze magnitude r must be >= 0, got {self.r}")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "phi", float(self.phi) % _TWO_PI)

    @property
    def xi(self) -> complex:
        return self.r * complex(math.cos(self.phi), math.sin(self.phi))


@dataclass(frozen=True)
class VarianceReport:
    """Quadrature variances and their uncertainty product sqrt(var_x * var_p)."""

    var_x: float
    var_p: float
    product: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "product", math.sqrt(self.var_x * self.var_p))


def _check_same_space(a, b):
    if a.space != b.space:
        raise ValueError(f"dimension mismatch: {a.space.dim} vs {b.space.dim}")


class FockOperator:
    """Dense operator on a :class:`FockSpace`."""

    __slots__ = ("space", "matrix")

    def __init__(self, space: FockSpace, matrix):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (space.dim, space.dim):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match dim {space.dim}"
            )
        self.space = space
        self.matrix = matrix

    def dagger(self) -> "FockOperator":
        return FockOperator(self.space, self.matrix.conj().T)

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            _check_same_space(self, other)
            return FockOperator(self.space, self.matrix @ other.matrix)
        return NotImplemented

    def apply(self, state: "QuantumState") -> np.ndarray:
        """Raw amplitudes of (operator @ state); not renormalized."""
        _check_same_space(self, state)
        return self.matrix @ state.amplitudes

    def expectation(self, state: "QuantumState") -> complex:
        _check_same_space(self, state)
        return complex(np.vdot(state.amplitudes, self.matrix @ state.amplitudes))


class QuantumState:
    """Normalized amplitude vector over the number basis."""

    __slots__ = ("space", "amplitudes")

    def __init__(self, space: FockSpace, amplitudes):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (space.dim,):
            raise ValueError(
                f"amplitude vector of length {amplitudes.shape} does not match dim {space.dim}"
            )
        self.space = space
        self.amplitudes = amplitudes
        self.normalize()

    def normalize(self) -> "QuantumState":
        norm = np.linalg.norm(self.amplitudes)
        if norm == 0.0 or not np.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite state")
        self.amplitudes = self.amplitudes / norm
        return self

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def required_dim(alpha: complex, r: float) -> int:
    """Truncation gate: smallest dim considered adequate for D(alpha)S(xi)|0>."""
    a = abs(alpha)
    return math.ceil(a * a + 7.0 * a + 16.0 * math.sinh(r) ** 2 + 10.0)


def _gate(space: FockSpace, alpha: complex, r: float, force: bool, what: str):
    need = required_dim(alpha, r)
    if space.dim >= need:
        return
    if force:
        warnings.warn(
            f"{what}: dim={space.dim} below the truncation gate ({need}); "
            "proceeding on request, expect truncation error",
            stacklevel=3,
        )
        return
    raise TruncationError(
        f"{what}: dim={space.dim} too small for requested accuracy; need dim >= {need} "
        "(pass force=True to proceed anyway)"
    )


def annihilation(space: FockSpace) -> FockOperator:
    """Ladder-down operator, a|n> = sqrt(n)|n-1>."""
    return FockOperator(
        space, np.diag(np.sqrt(np.arange(1, space.dim, dtype=float)), 1)
    )


def creation(space: FockSpace) -> FockOperator:
    return annihilation(space).dagger()


def number_operator(space: FockSpace) -> FockOperator:
    return FockOperator(space, np.diag(np.arange(space.dim, dtype=float)))


def parity_operator(space: FockSpace) -> FockOperator:
    """Photon-number parity (-1)^n, diagonal."""
    signs = 1.0 - 2.0 * (np.arange(space.dim) % 2)
    return FockOperator(space, np.diag(signs))


def quadratures(space: FockSpace, frame: OscillatorFrame = OscillatorFrame()):
    """Position-like and momentum-like operators (x, p) for the given frame."""
    a = annihilation(space).matrix
    ad = a.conj().T
    cx = math.sqrt(frame.hbar / (2.0 * frame.m * frame.omega))
    cp = math.sqrt(frame.m * frame.hbar * frame.omega / 2.0)
    x = cx * (a + ad)
    p = 1j * cp * (ad - a)
    return FockOperator(space, x), FockOperator(space, p)


def displacement(space: FockSpace, alpha: complex, force: bool = False) -> FockOperator:
    """Displacement unitary D(alpha) = exp(alpha a+ - alpha* a)."""
    alpha = complex(alpha)
    if alpha == 0:
        return FockOperator(space, np.eye(space.dim, dtype=complex))
    _gate(space, alpha, 0.0, force, "displacement")
    a = annihilation(space).matrix
    gen = alpha * a.conj().T - np.conj(alpha) * a
    return FockOperator(space, expm(gen))


def squeeze(space: FockSpace, xi: complex, force: bool = False) -> FockOperator:
    """Squeeze unitary S(xi) = exp((xi* a^2 - xi a+^2)/2)."""
    xi = complex(xi)
    if xi == 0:
        return FockOperator(space, np.eye(space.dim, dtype=complex))
    _gate(space, 0.0, abs(xi), force, "squeeze")
    a = annihilation(space).matrix
    a2 = a @ a
    gen = 0.5 * (np.conj(xi) * a2 - xi * a2.conj().T)
    return FockOperator(space, expm(gen))


def vacuum(space: FockSpace) -> QuantumState:
    amps = np.zeros(space.dim, dtype=complex)
    amps[0] = 1.0
    return QuantumState(space, amps)


def squeezed_coherent_state(
    space: FockSpace, spec: SqueezeSpec, force: bool = False
) -> QuantumState:
    """Squeeze the vacuum, then displace: D(alpha) S(xi) |0>."""
    _gate(space, spec.alpha, spec.r, force, "squeezed_coherent_state")
    amps = vacuum(space).amplitudes
    if spec.r != 0.0:
        amps = squeeze(space, spec.xi, force=True).matrix @ amps
    if spec.alpha != 0:
        amps = displacement(space, spec.alpha, force=True).matrix @ amps
    return QuantumState(space, amps)


def _require_normalized(state: QuantumState):
    if abs(state.norm() - 1.0) > 1e-9:
        raise ValueError(f"state is not normalized (norm={state.norm()!r})")


def variances(
    state: QuantumState, frame: OscillatorFrame = OscillatorFrame()
) -> VarianceReport:
    """Quadrature variances var_x = <x^2>-<x>^2, var_p = <p^2>-<p>^2."""
    _require_normalized(state)
    x, p = quadratures(state.space, frame)
    psi = state.amplitudes
    xpsi = x.matrix @ psi
    ppsi = p.matrix @ psi
    ex = np.vdot(psi, xpsi).real
    ep = np.vdot(psi, ppsi).real
    ex2 = np.vdot(xpsi, xpsi).real
    ep2 = np.vdot(ppsi, ppsi).real
    return VarianceReport(var_x=ex2 - ex * ex, var_p=ep2 - ep * ep)


def photon_distribution(state: QuantumState) -> np.ndarray:
    """P_n = |c_n|^2 over the number basis."""
    _require_normalized(state)
    return np.abs(state.amplitudes) ** 2


def wigner(
    state: QuantumState,
    frame: OscillatorFrame,
    x,
    p,
    check_coverage: bool = False,
) -> np.ndarray:
    """Wigner quasi-probability W(x, p) on the rectangular grid x cross p.

    Uses the displaced-parity form: for each grid point the state is displaced
    by -beta (beta the coherent amplitude of the point) and the photon-number
    parity is averaged, W = <D(beta) Pi D+(beta)> / (pi hbar).  The heavy loop
    runs in the compiled kernel when available.

    Returns an array of shape (len(x), len(p)) with W[i, j] = W(x[i], p[j]).
    With ``check_coverage`` the grid integral of W is required to be 1 within
    2e-2, which fails loudly when the grid misses the state's support.
    """
    _require_normalized(state)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
        raise ValueError("grid coordinates must be finite")

    beta_re = np.sqrt(frame.m * frame.omega / (2.0 * frame.hbar)) * x
    beta_im = p / np.sqrt(2.0 * frame.m * frame.hbar * frame.omega)
    bre, bim = np.meshgrid(beta_re, beta_im, indexing="ij")
    t = np.hypot(bre, bim).ravel()
    theta = np.arctan2(bim, bre).ravel()

    w = _kernels.wigner_grid(
        state.amplitudes, t, theta, 1.0 / (math.pi * frame.hbar)
    )
    w = w.reshape(len(x), len(p))

    if check_coverage:
        if len(x) < 2 or len(p) < 2:
            raise WignerCoverageError(
                "coverage check needs at least a 2x2 grid in (x, p)"
            )
        total = float(np.trapezoid(np.trapezoid(w, p, axis=1), x))
        if abs(total - 1.0) > 2e-2:
            raise WignerCoverageError(
                f"grid integral of W is {total!r}, not 1 within 2e-2; "
                "the grid misses the state's support, or dim is too small "
                "for the grid's displacements"
            )
    return w
