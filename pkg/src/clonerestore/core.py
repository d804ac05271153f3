"""Single-qubit states, density matrices, and Kraus channels.

Pure states live in a fixed gauge: real amplitudes alpha, beta >= 0 with
alpha^2 + beta^2 = 1 and a relative phase phi in [0, 2*pi). Density
matrices and channel elements are plain complex ndarrays with validation
helpers that enforce the invariants.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache

import numpy as np

from .linalg import ATOL, dagger, is_hermitian, is_psd

# Amplitudes below this are treated as an exact zero when fixing the gauge.
GAUGE_ATOL = 1e-12

TWO_PI = 2.0 * np.pi

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

MAXIMALLY_MIXED = np.eye(2, dtype=complex) / 2.0


@dataclass(frozen=True)
class PureQubit:
    """Pure qubit state alpha|0> + beta e^{i phi}|1> in canonical gauge.

    alpha and beta are nonnegative; phi is reduced into [0, 2*pi) and
    forced to 0 whenever either amplitude vanishes (the phase is
    undefined at the poles).
    """

    alpha: float
    beta: float
    phi: float = 0.0

    def __post_init__(self):
        a, b, p = float(self.alpha), float(self.beta), float(self.phi)
        if not (np.isfinite(a) and np.isfinite(b) and np.isfinite(p)):
            raise ValueError("state parameters must be finite")
        if a < 0.0 or b < 0.0:
            raise ValueError("amplitudes must be nonnegative")
        if abs(a * a + b * b - 1.0) > 1e-12:
            raise ValueError("state is not normalized: alpha^2 + beta^2 != 1")
        p = p % TWO_PI
        if a == 0.0 or b == 0.0:
            p = 0.0
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "phi", p)

    @property
    def alpha2(self) -> float:
        return self.alpha * self.alpha

    @property
    def vector(self) -> np.ndarray:
        """Complex amplitude 2-vector (alpha, beta e^{i phi})."""
        return np.array([self.alpha, self.beta * np.exp(1j * self.phi)], dtype=complex)

    def density(self) -> np.ndarray:
        """Rank-one density matrix |psi><psi|."""
        v = self.vector
        return np.outer(v, v.conj())

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "PureQubit":
        """Canonicalize a complex 2-vector into the fixed gauge.

        The vector is renormalized and multiplied by the phase that makes
        its first nonzero amplitude real and nonnegative.
        """
        v = np.asarray(v, dtype=complex).reshape(2)
        n = float(np.linalg.norm(v))
        if n <= GAUGE_ATOL:
            raise ValueError("cannot canonicalize a zero vector")
        a = abs(v[0]) / n
        b = abs(v[1]) / n
        if a <= GAUGE_ATOL:
            return cls(0.0, 1.0, 0.0)
        if b <= GAUGE_ATOL:
            return cls(1.0, 0.0, 0.0)
        phi = float(np.angle(v[1]) - np.angle(v[0]))
        return cls(a, b, phi)


def make_pure(alpha2: float, phi: float) -> PureQubit:
    """Build the state with population alpha2 on |0> and relative phase phi.

    Raises ValueError when alpha2 lies outside [0, 1].
    """
    if not (0.0 <= alpha2 <= 1.0):
        raise ValueError(f"alpha2 must lie in [0, 1], got {alpha2}")
    return PureQubit(np.sqrt(alpha2), np.sqrt(1.0 - alpha2), phi)


def state_vector(alpha2, phi) -> np.ndarray:
    """Amplitude vectors for (alpha2, phi); broadcasts over array input.

    Returns an array of shape broadcast(alpha2, phi) + (2,).
    """
    alpha2 = np.asarray(alpha2, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(alpha2 < 0.0) or np.any(alpha2 > 1.0):
        raise ValueError("alpha2 must lie in [0, 1]")
    a, ph = np.broadcast_arrays(alpha2, phi)
    return np.stack([np.sqrt(a) + 0j, np.sqrt(1.0 - a) * np.exp(1j * ph)], axis=-1)


def check_density_matrix(rho: np.ndarray, herm_tol: float = ATOL,
                         trace_tol: float = ATOL, psd_tol: float = 1e-10) -> np.ndarray:
    """Validate a 2x2 density matrix; returns it as a complex ndarray."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError("density matrix must be 2x2")
    if not is_hermitian(rho, herm_tol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > trace_tol or abs(np.trace(rho).imag) > trace_tol:
        raise ValueError("density matrix does not have unit trace")
    if not is_psd(rho, psd_tol):
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def fidelity(psi: PureQubit, rho: np.ndarray) -> float:
    """Overlap <psi|rho|psi> between a pure state and a density matrix."""
    v = psi.vector
    return float(np.real(np.vdot(v, np.asarray(rho, dtype=complex) @ v)))


def reduce_qubit(state: np.ndarray, keep: int) -> np.ndarray:
    """Partial trace of a three-qubit pure state down to one qubit.

    The state is an 8-vector indexed big-endian, index = 4 q1 + 2 q2 + q3.
    ``keep`` selects the surviving qubit (1, 2, or 3).
    """
    if keep not in (1, 2, 3):
        raise ValueError(f"keep must be 1, 2, or 3, got {keep}")
    state = np.asarray(state, dtype=complex).reshape(8)
    t = state.reshape(2, 2, 2)
    others = [ax for ax in range(3) if ax != keep - 1]
    return np.tensordot(t, t.conj(), axes=(others, others))


class ErrorType(IntEnum):
    """Channel error drawn during transmission, a Pauli on the signal."""

    NO_ERROR = 0
    BIT_FLIP = 1
    PHASE_FLIP = 2
    BIT_PHASE_FLIP = 3

    @property
    def operator(self) -> np.ndarray:
        return _ERROR_OPERATORS[self]


_ERROR_OPERATORS = (
    np.eye(2, dtype=complex),
    PAULI_X,
    PAULI_Z,
    PAULI_X @ PAULI_Z,
)


def error_probabilities(p_bit: float, p_ph: float) -> np.ndarray:
    """Probabilities of the four ErrorType values; sums to 1."""
    _check_probability(p_bit, "p_bit")
    _check_probability(p_ph, "p_ph")
    return np.array([
        (1.0 - p_bit) * (1.0 - p_ph),
        p_bit * (1.0 - p_ph),
        p_ph * (1.0 - p_bit),
        p_bit * p_ph,
    ])


def _check_probability(p: float, name: str) -> None:
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class KrausChannel:
    """Trace-preserving channel given by operation elements E_i.

    ``effects`` caches the POVM effects E_i^dag E_i used for outcome
    probabilities. Completeness (sum of effects = identity) is checked
    on construction.
    """

    elements: np.ndarray

    def __post_init__(self):
        elements = np.asarray(self.elements, dtype=complex)
        if elements.ndim != 3 or elements.shape[1:] != (2, 2):
            raise ValueError("elements must have shape (k, 2, 2)")
        effects = np.einsum("aji,ajk->aik", elements.conj(), elements)
        if np.max(np.abs(effects.sum(axis=0) - np.eye(2))) > ATOL:
            raise ValueError("operation elements violate completeness")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "effects", effects)

    def __len__(self) -> int:
        return self.elements.shape[0]


def error_channel(p_bit: float, p_ph: float) -> KrausChannel:
    """Bit/phase-flip channel with independent flip probabilities.

    Elements are sqrt(P) times I, sigma_x, sigma_z, and sigma_x sigma_z
    for the four ErrorType branches.
    """
    probs = error_probabilities(p_bit, p_ph)
    elements = np.sqrt(probs)[:, None, None] * np.stack(_ERROR_OPERATORS)
    return KrausChannel(elements)


@lru_cache(maxsize=None)
def _cached_error_channel(p_bit: float, p_ph: float) -> KrausChannel:
    return error_channel(p_bit, p_ph)


def apply_channel(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Channel action sum_i E_i rho E_i^dag."""
    rho = np.asarray(rho, dtype=complex)
    return np.einsum("aij,jk,alk->il", ch.elements, rho, ch.elements.conj())


def sample_element(ch: KrausChannel, psi: PureQubit,
                   rng: np.random.Generator) -> tuple[int, PureQubit]:
    """Sample one operation element acting on a pure state.

    Element i is drawn with probability <psi|E_i^dag E_i|psi>; the
    returned state is E_i|psi> renormalized into canonical gauge.
    Deterministic for a fixed generator state.
    """
    v = psi.vector
    probs = np.einsum("i,aij,j->a", v.conj(), ch.effects, v).real
    np.clip(probs, 0.0, None, out=probs)
    total = probs.sum()
    if total <= 0.0:
        raise RuntimeError("all operation elements have zero probability")
    idx = int(np.searchsorted(np.cumsum(probs), rng.random() * total, side="right"))
    idx = min(idx, len(ch) - 1)
    w = ch.elements[idx] @ v
    return idx, PureQubit.from_vector(w)
