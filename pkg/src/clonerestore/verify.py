"""Runtime verification suite behind the ``verify`` CLI command.

Each check re-derives one invariant of the library and reports its worst
measured deviation against a fixed tolerance. Statistical checks report
a z-score against a 4-sigma threshold instead; a user-supplied tolerance
override applies only to the deviation-based checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cloning, core, linalg, protocol

# Reference adjoints of the four reversal unitaries, each fixed only up
# to a global phase per outcome.
_REVERSAL_ADJOINTS = np.array(
    [
        [[3, -1], [1, 3]],
        [[-3, -1], [1, -3]],
        [[3, 1], [-1, 3]],
        [[-3, 1], [-1, -3]],
    ],
    dtype=complex,
) / np.sqrt(10.0)

_SPOT_STATES = ((1.0, 0.0), (0.5, 0.0), (0.5, np.pi / 2), (0.25, 1.0), (0.75, 4.0))

_EXCEPTION_POINTS = ((0.5, np.pi / 2), (0.5, 3 * np.pi / 2))


@dataclass(frozen=True)
class InvariantResult:
    name: str
    deviation: float
    tolerance: float
    passed: bool
    statistical: bool = False


@dataclass(frozen=True)
class VerifyReport:
    results: tuple[InvariantResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        width = max(len(r.name) for r in self.results)
        out = []
        for r in self.results:
            unit = "z" if r.statistical else "dev"
            out.append(
                f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  "
                f"{unit}={r.deviation:.3e}  tol={r.tolerance:.1e}"
            )
        n_pass = sum(r.passed for r in self.results)
        out.append(f"verify: {n_pass}/{len(self.results)} invariants passed")
        return out


def _phase_aligned_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Max entry deviation between a and b after optimal global phase."""
    lam = np.trace(linalg.dagger(b) @ a)
    if abs(lam) < 1e-9:
        return float(np.max(np.abs(a - b)))
    lam = lam / abs(lam)
    return float(np.max(np.abs(a - lam * b)))


def _random_states(rng: np.random.Generator, n: int) -> list[core.PureQubit]:
    return [core.make_pure(rng.random(), rng.random() * 2 * np.pi) for _ in range(n)]


def _check_reversal_set(rng, swapped):
    est = cloning.estimation_elements()
    return max(
        _phase_aligned_deviation(linalg.dagger(est.reversal_unitaries[i]), _REVERSAL_ADJOINTS[i])
        for i in range(4)
    )


def _check_minimality(rng, swapped):
    est = cloning.estimation_elements()
    worst = 0.0
    for i in range(4):
        best = linalg.hs_distance(est.reversal_unitaries[i], est.elements[i])
        trials = linalg.haar_random_unitary(rng, 1000)
        dists = np.sqrt(np.sum(np.abs(trials - est.elements[i]) ** 2, axis=(1, 2)))
        worst = max(worst, best - float(dists.min()))
    return max(worst, 0.0)


def _check_polar_roundtrip(rng, swapped):
    worst = 0.0
    for _ in range(1000):
        e = linalg.random_invertible(rng)
        u, p = linalg.polar_decompose(e)
        worst = max(
            worst,
            float(np.max(np.abs(u @ p - e))),
            float(np.max(np.abs(linalg.dagger(u) @ u - np.eye(2)))),
            float(np.max(np.abs(p - linalg.dagger(p)))),
        )
    return worst


def _check_reversal_psd(rng, swapped):
    est = cloning.estimation_elements()
    worst = 0.0
    for i in range(4):
        s = linalg.dagger(est.reversal_unitaries[i]) @ est.elements[i]
        worst = max(worst, float(np.max(np.abs(s - linalg.dagger(s)))))
        tr = (s[0, 0] + s[1, 1]).real
        det = max(linalg.det2(s).real, 0.0)
        lam_min = tr / 2 - np.sqrt(max(tr * tr / 4 - det, 0.0))
        worst = max(worst, max(-lam_min, 0.0))
    return worst


def _check_completeness(rng, swapped):
    worst = 0.0
    eye = np.eye(2)
    for _ in range(100):
        ch = core.error_channel(rng.random(), rng.random())
        worst = max(worst, float(np.max(np.abs(ch.effects.sum(axis=0) - eye))))
    est = cloning.estimation_elements()
    return max(worst, float(np.max(np.abs(est.effects.sum(axis=0) - eye))))


def _check_channel_density(rng, swapped):
    worst = 0.0
    channels = [core.error_channel(rng.random(), rng.random()) for _ in range(5)]
    channels.append(cloning.estimation_elements().kraus)
    for ch in channels:
        for _ in range(20):
            g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            rho = g @ g.conj().T
            rho /= np.trace(rho).real
            out = core.apply_channel(ch, rho)
            worst = max(
                worst,
                abs(np.trace(out) - 1.0),
                float(np.max(np.abs(out - linalg.dagger(out)))),
            )
    return worst


def _check_sampling_frequencies(rng, swapped):
    n = 100_000
    psi = core.make_pure(1.0, 0.0)
    est = cloning.estimation_elements()
    counts = np.zeros(4)
    for _ in range(n):
        idx, _ = core.sample_element(est.kraus, psi, rng)
        counts[idx] += 1
    probs = np.array([1 / 3, 1 / 6, 1 / 3, 1 / 6])
    sigma = np.sqrt(probs * (1 - probs) / n)
    return float(np.max(np.abs(counts / n - probs) / sigma))


def _check_gauge_roundtrip(rng, swapped):
    worst = 0.0
    for _ in range(500):
        alpha2 = rng.uniform(0.0, 0.999)
        phi = rng.random() * 2 * np.pi
        back = core.PureQubit.from_vector(core.make_pure(alpha2, phi).vector)
        dphi = abs(back.phi - phi) % (2 * np.pi)
        worst = max(worst, abs(back.alpha2 - alpha2), min(dphi, 2 * np.pi - dphi))
    return worst


def _check_projective_construction(rng, swapped):
    est = cloning.estimation_elements()
    return float(np.max(np.abs(cloning.elements_from_cloner() - est.elements)))


def _check_clone_symmetry(rng, swapped):
    # the two clones are the signal qubit and qubit 2; qubit 3 is the ancilla
    worst = 0.0
    for psi in _random_states(rng, 200):
        cloned = cloning.uqcm_output(psi)
        rho1 = core.reduce_qubit(cloned, 1)
        rho2 = core.reduce_qubit(cloned, 2)
        worst = max(
            worst,
            float(np.max(np.abs(rho1 - rho2))),
            abs(core.fidelity(psi, rho1) - 5 / 6),
            abs(core.fidelity(psi, rho2) - 5 / 6),
        )
    return worst


def _check_outcome_marginals(rng, swapped):
    a2 = protocol.alpha2_grid(51)
    ph = protocol.phi_grid(51)
    aa, pp = np.meshgrid(a2, ph, indexing="ij")
    v = core.state_vector(aa, pp)
    effects = cloning.estimation_elements().effects
    probs = np.einsum("...i,aij,...j->...a", v.conj(), effects, v).real
    alpha = np.sqrt(aa)
    beta = np.sqrt(1.0 - aa)
    sign_marginal = 0.5 * (1.0 + (4.0 / 3.0) * alpha * beta * np.cos(pp))
    bit_marginal = (1.0 + aa) / 3.0
    return float(
        max(
            np.max(np.abs(probs.sum(axis=-1) - 1.0)),
            np.max(np.abs(probs[..., 0] + probs[..., 1] - sign_marginal)),
            np.max(np.abs(probs[..., 0] + probs[..., 2] - bit_marginal)),
        )
    )


def _check_stored_reversals(rng, swapped):
    est = cloning.estimation_elements()
    return float(
        max(
            np.max(np.abs(linalg.nearest_unitary(est.elements[i]) - est.reversal_unitaries[i]))
            for i in range(4)
        )
    )


def _check_reversal_floor(rng, swapped):
    surface = cloning.reversed_fidelity_plane(
        protocol.alpha2_grid(101)[:, None], protocol.phi_grid(101)[None, :])
    return max(float(np.max(5 / 6 - surface)), 0.0)


def _check_quadrant_preservation(rng, swapped):
    worst = 0.0
    for a2 in protocol.alpha2_grid(41):
        if not 0.5 < a2 < 1.0:
            continue
        for phi in protocol.phi_grid(41):
            if np.cos(phi) <= 0.0:
                continue
            out = cloning.post_measurement_state(core.make_pure(a2, phi), cloning.Outcome.PLUS_0)
            worst = max(worst, out.beta - out.alpha, -np.cos(out.phi))
    return max(worst, 0.0)


def _check_error_rate_independence(rng, swapped):
    worst = 0.0
    states = [core.make_pure(a2, ph)
              for a2 in np.linspace(0.0, 1.0, 5)
              for ph in 2 * np.pi * np.arange(5) / 5]
    pairs = [(rng.random(), rng.random()) for _ in range(10)]
    for psi in states:
        ref = protocol.exact_fidelity(psi, 0.0, 0.0, swapped=swapped)
        for p_bit, p_ph in pairs:
            worst = max(worst, abs(protocol.exact_fidelity(psi, p_bit, p_ph, swapped=swapped) - ref))
    return worst


def _grid_surfaces(swapped):
    aa = protocol.alpha2_grid(101)[:, None]
    pp = protocol.phi_grid(101)[None, :]
    exact = protocol.exact_fidelity_plane(aa, pp, swapped=swapped)
    mixed = protocol.mixed_input_fidelity_plane(aa, pp, swapped=swapped)
    analytic = protocol.analytic_fidelity(aa, pp)
    return exact, mixed, analytic


def _check_triple_agreement(rng, swapped):
    exact, mixed, analytic = _grid_surfaces(swapped)
    return float(max(np.max(np.abs(exact - analytic)), np.max(np.abs(exact - mixed))))


def _check_outcome_agreement_identities(rng, swapped):
    worst = 0.0
    pairs = [(core.ErrorType(i), cloning.Outcome(i)) for i in range(4)]
    for psi in _random_states(rng, 100):
        stats = [protocol.branch_statistics(psi, cloning.Outcome.PLUS_0, err, bob, swapped=swapped)
                 for err, bob in pairs]
        p0, s0 = stats[0]
        for p, s in stats[1:]:
            worst = max(worst, abs(p - p0), float(np.max(np.abs(s.vector - s0.vector))))
    p_spot, _ = protocol.branch_statistics(
        core.make_pure(1.0, 0.0), cloning.Outcome.PLUS_0, core.ErrorType.NO_ERROR,
        cloning.Outcome.PLUS_0, swapped=swapped)
    return max(worst, abs(p_spot - 5 / 12))


def _check_fidelity_floor(rng, swapped):
    exact, _, _ = _grid_surfaces(swapped)
    worst = max(float(np.max(0.5 - exact)), 0.0)
    for a2, phi in _EXCEPTION_POINTS:
        worst = max(worst, abs(protocol.exact_fidelity(core.make_pure(a2, phi), swapped=swapped) - 0.5))
    # strictness: away from the exception points the floor is never attained
    aa = protocol.alpha2_grid(101)[:, None]
    pp = protocol.phi_grid(101)[None, :]
    at_floor = np.abs(exact - 0.5) <= 1e-12
    on_exception = np.zeros_like(at_floor)
    for a2, phi in _EXCEPTION_POINTS:
        on_exception |= (np.abs(aa - a2) <= 1e-12) & (np.abs(pp - phi) <= 1e-12)
    if np.any(at_floor & ~on_exception):
        return float("inf")
    return worst


def _check_plane_averages(rng, swapped):
    avg_protocol = protocol.plane_average(
        lambda a2, ph: protocol.exact_fidelity_plane(a2, ph, swapped=swapped), 201, 201)
    avg_baseline = protocol.plane_average(protocol.baseline_fidelity_plane, 201, 1)
    if avg_protocol >= avg_baseline:
        return float("inf")
    return max(abs(avg_protocol - 16 / 27), abs(avg_baseline - 2 / 3))


def _check_monte_carlo(rng, swapped):
    worst = 0.0
    for a2, phi in _SPOT_STATES:
        psi = core.make_pure(a2, phi)
        exact = protocol.exact_fidelity(psi, 0.1, 0.2, swapped=swapped)
        res = protocol.mc_estimate(psi, 0.1, 0.2, 100_000, rng, swapped=swapped)
        if res.stderr == 0.0:
            worst = max(worst, 0.0 if abs(res.mean - exact) <= 1e-12 else float("inf"))
        else:
            worst = max(worst, abs(res.mean - exact) / res.stderr)
    return worst


def _check_sweep_columns(rng, swapped):
    aa = protocol.alpha2_grid(21)[:, None]
    pp = protocol.phi_grid(21)[None, :]
    exact = protocol.exact_fidelity_plane(aa, pp, 0.25, 0.4, swapped=swapped)
    mixed = protocol.mixed_input_fidelity_plane(aa, pp, swapped=swapped)
    return float(np.max(np.abs(exact - mixed)))


_CHECKS = (
    ("reversal-set-matches-nearest-unitary", _check_reversal_set, 1e-12, False),
    ("nearest-unitary-minimality", _check_minimality, 1e-12, False),
    ("polar-decomposition-roundtrip", _check_polar_roundtrip, 1e-12, False),
    ("reversal-composition-psd", _check_reversal_psd, 1e-12, False),
    ("channel-completeness", _check_completeness, 1e-12, False),
    ("channel-preserves-density", _check_channel_density, 1e-12, False),
    ("measurement-sampling-frequencies", _check_sampling_frequencies, 4.0, True),
    ("gauge-roundtrip", _check_gauge_roundtrip, 1e-12, False),
    ("elements-projective-construction", _check_projective_construction, 1e-12, False),
    ("clone-symmetry-and-fidelity", _check_clone_symmetry, 1e-12, False),
    ("outcome-probability-marginals", _check_outcome_marginals, 1e-12, False),
    ("stored-reversals-recompute", _check_stored_reversals, 1e-12, False),
    ("reversal-benefit-floor", _check_reversal_floor, 1e-12, False),
    ("quadrant-preservation", _check_quadrant_preservation, 1e-12, False),
    ("error-rate-independence", _check_error_rate_independence, 1e-10, False),
    ("exact-analytic-mixed-agreement", _check_triple_agreement, 1e-10, False),
    ("outcome-agreement-identities", _check_outcome_agreement_identities, 1e-12, False),
    ("fidelity-floor-and-exceptions", _check_fidelity_floor, 1e-12, False),
    ("plane-averages", _check_plane_averages, 1e-3, False),
    ("monte-carlo-consistency", _check_monte_carlo, 4.0, True),
    ("sweep-exact-mixed-columns", _check_sweep_columns, 1e-10, False),
)


def run_checks(tol: float | None = None, seed: int = 0, swapped: bool = False) -> VerifyReport:
    """Run every invariant check and collect the report.

    ``tol`` overrides the tolerance of the deviation-based checks only;
    statistical checks always use their z-score threshold. ``swapped``
    runs the protocol checks with the exchanged Pauli correction rule,
    which a correct suite must flag.
    """
    if tol is not None and tol <= 0.0:
        raise ValueError("tol must be positive")
    results = []
    for name, fn, default_tol, statistical in _CHECKS:
        rng = np.random.default_rng(np.random.SeedSequence((seed, len(results))))
        tolerance = default_tol if (statistical or tol is None) else tol
        deviation = float(fn(rng, swapped))
        results.append(InvariantResult(name, deviation, tolerance, deviation <= tolerance, statistical))
    return VerifyReport(tuple(results))
