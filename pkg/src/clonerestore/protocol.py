"""End-to-end state restoration through a bit/phase-flip channel.

Sender side: clone, measure, reverse. Channel: one Pauli error drawn
from the bit/phase-flip distribution. Receiver side: clone, measure,
reverse, then a Pauli correction chosen by comparing the two outcome
records componentwise. The input-output fidelity is evaluated three
ways: full 64-branch enumeration, the closed-form surface, and a
maximally-mixed-input variant that bypasses the quantum channel; all
three coincide, which is exactly the protocol's error-rate independence.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cloning import (
    Outcome,
    estimation_elements,
    outcome_probability,
    post_measurement_state,
    reverse,
)
from .core import (
    MAXIMALLY_MIXED,
    ErrorType,
    PureQubit,
    _cached_error_channel,
    error_probabilities,
    sample_element,
    state_vector,
)
from .linalg import dagger

_PAULI_OPS = np.stack([e.operator for e in ErrorType])


def correction_unitary(alice: Outcome, bob: Outcome, *, swapped: bool = False) -> np.ndarray:
    """Receiver's Pauli correction from comparing the two outcomes.

    Disagreement in the third-qubit bit contributes sigma_x, in the
    second-qubit sign sigma_z, both together their product, agreement
    the identity. ``swapped`` exchanges the two assignments; it exists
    only as a self-test hook for the verification suite.
    """
    bit_differs = alice.bit != bob.bit
    sign_differs = alice.sign != bob.sign
    if swapped:
        bit_differs, sign_differs = sign_differs, bit_differs
    return _PAULI_OPS[ErrorType(int(bit_differs) + 2 * int(sign_differs))]


def branch_statistics(psi: PureQubit, alice: Outcome, error: ErrorType,
                      bob: Outcome, *, swapped: bool = False) -> tuple[float, PureQubit]:
    """One protocol branch: Bob's outcome probability and the final state.

    Conditions on Alice's outcome and the channel error: the sender
    state is measured, reversed, hit by the error, then measured and
    reversed on the receiver side with the comparison correction
    applied last. Returns (P(bob | alice, error), corrected state).
    """
    est = estimation_elements()
    after_alice = reverse(post_measurement_state(psi, alice), alice)
    w = error.operator @ after_alice.vector
    prob = float(np.real(np.vdot(w, est.effects[bob] @ w)))
    u = est.elements[bob] @ w
    final = correction_unitary(alice, bob, swapped=swapped) @ (dagger(est.reversal_unitaries[bob]) @ u)
    return prob, PureQubit.from_vector(final)


def exact_fidelity(psi: PureQubit, p_bit: float = 0.0, p_ph: float = 0.0,
                   *, swapped: bool = False) -> float:
    """Input-output fidelity by full enumeration of all 64 branches.

    Weights each (alice outcome, error, bob outcome) branch by its joint
    probability and accumulates the overlap with the input state. The
    result does not depend on the error rates.
    """
    v = psi.vector
    perr = error_probabilities(p_bit, p_ph)
    total = 0.0
    for alice in Outcome:
        p_a = outcome_probability(psi, alice)
        for error in ErrorType:
            if perr[error] == 0.0:
                continue
            for bob in Outcome:
                p_b, final = branch_statistics(psi, alice, error, bob, swapped=swapped)
                overlap = abs(np.vdot(v, final.vector)) ** 2
                total += p_a * perr[error] * p_b * overlap
    return total


@lru_cache(maxsize=2)
def _branch_bank(swapped: bool = False) -> np.ndarray:
    """Stacked branch operators M[a, e, b] = C U_b^dag E_b P_e S_a.

    S_a is the Hermitian factor left after the sender's reversal, P_e
    the channel Pauli, and C the comparison correction. For any unit
    vector v, |<v|M v>|^2 is the joint branch weight (given error e)
    times the branch overlap, which collapses the enumeration into one
    contraction.
    """
    est = estimation_elements()
    bank = np.empty((4, 4, 4, 2, 2), dtype=complex)
    for alice in Outcome:
        for error in ErrorType:
            for bob in Outcome:
                bank[alice, error, bob] = (
                    correction_unitary(alice, bob, swapped=swapped)
                    @ dagger(est.reversal_unitaries[bob])
                    @ est.elements[bob]
                    @ error.operator
                    @ est.sqrt_effects[alice]
                )
    return bank


def exact_fidelity_plane(alpha2, phi, p_bit: float = 0.0, p_ph: float = 0.0,
                         *, swapped: bool = False) -> np.ndarray:
    """Vectorized ``exact_fidelity`` over broadcast (alpha2, phi) arrays."""
    v = state_vector(alpha2, phi)
    bank = _branch_bank(swapped)
    amps = np.einsum("...i,aebij,...j->...aeb", v.conj(), bank, v)
    per_error = np.sum(np.abs(amps) ** 2, axis=(-3, -1))
    return per_error @ error_probabilities(p_bit, p_ph)


def analytic_fidelity(alpha2, phi) -> np.ndarray | float:
    """Closed-form protocol fidelity surface; broadcasts over arrays."""
    alpha2 = np.asarray(alpha2, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(alpha2 < 0.0) or np.any(alpha2 > 1.0):
        raise ValueError("alpha2 must lie in [0, 1]")
    beta2 = 1.0 - alpha2
    out = (5.0 - 2.0 * alpha2 + 2.0 * alpha2 ** 2) / 9.0 \
        + (8.0 / 9.0) * alpha2 * beta2 * np.cos(phi) ** 2
    return float(out) if out.ndim == 0 else out


def mixed_input_fidelity(psi: PureQubit, *, swapped: bool = False) -> float:
    """Fidelity when the receiver gets the maximally mixed state instead.

    The sender branch only fixes the outcome record used for the
    comparison; the receiver runs the same measurement, reversal, and
    correction on I/2. Equals ``exact_fidelity`` for every input.
    """
    est = estimation_elements()
    v = psi.vector
    total = 0.0
    for alice in Outcome:
        p_a = outcome_probability(psi, alice)
        for bob in Outcome:
            op = correction_unitary(alice, bob, swapped=swapped) @ dagger(est.reversal_unitaries[bob]) @ est.elements[bob]
            rho = op @ MAXIMALLY_MIXED @ dagger(op)
            total += p_a * float(np.real(np.vdot(v, rho @ v)))
    return total


@lru_cache(maxsize=2)
def _receiver_gram_bank(swapped: bool = False) -> np.ndarray:
    """G[a, b] = N N^dag for the receiver branch operator N = C U_b^dag E_b."""
    est = estimation_elements()
    bank = np.empty((4, 4, 2, 2), dtype=complex)
    for alice in Outcome:
        for bob in Outcome:
            n = correction_unitary(alice, bob, swapped=swapped) \
                @ dagger(est.reversal_unitaries[bob]) @ est.elements[bob]
            bank[alice, bob] = n @ dagger(n)
    return bank


def mixed_input_fidelity_plane(alpha2, phi, *, swapped: bool = False) -> np.ndarray:
    """Vectorized ``mixed_input_fidelity`` over broadcast arrays."""
    v = state_vector(alpha2, phi)
    effects = estimation_elements().effects
    p_alice = np.einsum("...i,aij,...j->...a", v.conj(), effects, v).real
    gram = _receiver_gram_bank(swapped)
    vals = np.einsum("...i,abij,...j->...ab", v.conj(), gram, v).real
    return 0.5 * np.einsum("...a,...ab->...", p_alice, vals)


def baseline_direct_fidelity(psi: PureQubit) -> float:
    """Fidelity of the measure-and-prepare baseline.

    The sender measures in the computational basis and the receiver
    prepares the observed basis state: alpha^4 + beta^4.
    """
    a2 = psi.alpha2
    return a2 * a2 + (1.0 - a2) * (1.0 - a2)


def baseline_fidelity_plane(alpha2, phi=None) -> np.ndarray | float:
    """Vectorized baseline fidelity; the phase argument is ignored."""
    alpha2 = np.asarray(alpha2, dtype=float)
    if np.any(alpha2 < 0.0) or np.any(alpha2 > 1.0):
        raise ValueError("alpha2 must lie in [0, 1]")
    out = alpha2 ** 2 + (1.0 - alpha2) ** 2
    if phi is not None:
        out = np.broadcast_arrays(out, np.asarray(phi, dtype=float))[0].copy()
    return float(out) if out.ndim == 0 else out


def alpha2_grid(n_alpha: int) -> np.ndarray:
    """Uniform grid on [0, 1] including both endpoints."""
    if n_alpha < 2:
        raise ValueError("n_alpha must be at least 2")
    return np.linspace(0.0, 1.0, n_alpha)


def phi_grid(n_phi: int) -> np.ndarray:
    """Uniform grid on [0, 2*pi) excluding the right endpoint."""
    if n_phi < 1:
        raise ValueError("n_phi must be at least 1")
    return 2.0 * np.pi * np.arange(n_phi) / n_phi


def grid_average(values: np.ndarray, n_alpha: int, n_phi: int) -> float:
    """Average grid values with trapezoid weights in alpha2, uniform in phi."""
    values = np.asarray(values, dtype=float).reshape(n_alpha, n_phi)
    w = np.ones(n_alpha)
    w[0] = w[-1] = 0.5
    return float(w @ values.mean(axis=1) / (n_alpha - 1))


def plane_average(f, n_alpha: int = 201, n_phi: int = 201) -> float:
    """Average a fidelity function f(alpha2, phi) over the state plane.

    alpha2 is integrated over [0, 1] by the trapezoid rule (endpoints
    included), phi by the uniform rule on [0, 2*pi) (endpoint excluded,
    exact for trigonometric polynomials). f is evaluated on the full
    meshgrid at once when it broadcasts, pointwise otherwise.
    """
    a = alpha2_grid(n_alpha)
    p = phi_grid(n_phi)
    aa, pp = np.meshgrid(a, p, indexing="ij")
    try:
        values = np.asarray(f(aa, pp), dtype=float)
        if values.shape != aa.shape:
            raise ValueError
    except Exception:
        values = np.array([[float(f(ai, pj)) for pj in p] for ai in a])
    return grid_average(values, n_alpha, n_phi)


@dataclass(frozen=True)
class TrajectoryRecord:
    """One sampled run of the full protocol."""

    alice: Outcome
    error: ErrorType
    bob: Outcome
    final: PureQubit
    overlap: float


@dataclass(frozen=True)
class MCResult:
    """Monte Carlo fidelity estimate over independent trajectories."""

    mean: float
    stderr: float
    trials: int


@dataclass(frozen=True)
class SweepRecord:
    """One grid point of a parameter sweep."""

    alpha2: float
    phi: float
    f_exact: float
    f_analytic: float
    f_mc: float | None = None
    mc_stderr: float | None = None


def run_trajectory(psi: PureQubit, p_bit: float, p_ph: float,
                   rng: np.random.Generator, *, swapped: bool = False) -> TrajectoryRecord:
    """Sample one protocol run: outcomes, error, correction, overlap."""
    est = estimation_elements()
    a_idx, after_meas = sample_element(est.kraus, psi, rng)
    alice = Outcome(a_idx)
    sent = reverse(after_meas, alice)
    e_idx, received = sample_element(_cached_error_channel(p_bit, p_ph), sent, rng)
    error = ErrorType(e_idx)
    b_idx, after_bob = sample_element(est.kraus, received, rng)
    bob = Outcome(b_idx)
    final = PureQubit.from_vector(
        correction_unitary(alice, bob, swapped=swapped) @ reverse(after_bob, bob).vector)
    overlap = abs(np.vdot(psi.vector, final.vector)) ** 2
    return TrajectoryRecord(alice, error, bob, final, overlap)


def mc_estimate(psi: PureQubit, p_bit: float, p_ph: float, trials: int,
                rng: np.random.Generator, *, swapped: bool = False) -> MCResult:
    """Monte Carlo mean and standard error of the trajectory overlap.

    Samples the same (alice, error, bob) chain as ``run_trajectory``,
    drawing all trials at once from the exact conditional distributions.
    Deterministic for a fixed generator state.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    v = psi.vector
    bank = _branch_bank(swapped)
    amps = np.einsum("aebij,j->aebi", bank, v)
    # joint weight (given error) and overlap per branch
    norms2 = np.sum(np.abs(amps) ** 2, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        overlaps = np.abs(np.einsum("i,aebi->aeb", v.conj(), amps)) ** 2 / norms2
    overlaps = np.nan_to_num(overlaps)

    p_alice = norms2[:, 0, :].sum(axis=-1)           # error slot 0 is the identity
    p_err = error_probabilities(p_bit, p_ph)
    cond_bob = norms2 / p_alice[:, None, None]       # rows sum to 1 over bob

    a_draw = np.searchsorted(np.cumsum(p_alice), rng.random(trials) * p_alice.sum(), side="right")
    a_draw = np.minimum(a_draw, 3)
    e_draw = np.minimum(np.searchsorted(np.cumsum(p_err), rng.random(trials), side="right"), 3)
    rows = np.cumsum(cond_bob[a_draw, e_draw, :], axis=1)
    b_draw = np.minimum(
        np.sum(rows <= (rng.random(trials) * rows[:, -1])[:, None], axis=1), 3)

    sample = overlaps[a_draw, e_draw, b_draw]
    stderr = float(sample.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return MCResult(float(sample.mean()), stderr, trials)
