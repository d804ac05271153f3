import numpy as np
import pytest

from clonerestore.cloning import Outcome
from clonerestore.core import ErrorType, PureQubit, make_pure
from clonerestore.protocol import (
    MCResult,
    alpha2_grid,
    analytic_fidelity,
    baseline_direct_fidelity,
    baseline_fidelity_plane,
    branch_statistics,
    correction_unitary,
    exact_fidelity,
    exact_fidelity_plane,
    grid_average,
    mc_estimate,
    mixed_input_fidelity,
    mixed_input_fidelity_plane,
    phi_grid,
    plane_average,
    run_trajectory,
)

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

KET0 = make_pure(1.0, 0.0)

ELEMENTS = np.array(
    [[[2, 1], [0, 1]], [[1, 0], [1, 2]], [[2, -1], [0, 1]], [[-1, 0], [1, -2]]],
    dtype=complex,
) / (2 * np.sqrt(3))


def random_states(seed, n):
    rng = np.random.default_rng(seed)
    return [make_pure(rng.random(), rng.random() * 2 * np.pi) for _ in range(n)]


def eigh_sqrt(m):
    vals, vecs = np.linalg.eigh(m)
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T


def oracle_correction(a, b):
    c = I2
    if a % 2 != b % 2:
        c = SX @ c
    if (a // 2) != (b // 2):
        c = SZ @ c
    return c


def oracle_exact_fidelity(v, p_bit, p_ph):
    """Stepwise enumeration built only from numpy primitives.

    Polar factors come from an eigendecomposition square root and an
    explicit inverse; every branch renormalizes its state explicitly.
    """
    paulis = [I2, SX, SZ, SX @ SZ]
    p_err = [(1 - p_bit) * (1 - p_ph), p_bit * (1 - p_ph), p_ph * (1 - p_bit), p_bit * p_ph]
    sqrts = [eigh_sqrt(e.conj().T @ e) for e in ELEMENTS]
    unitaries = [e @ np.linalg.inv(s) for e, s in zip(ELEMENTS, sqrts)]
    total = 0.0
    for a in range(4):
        wa = ELEMENTS[a] @ v
        pa = np.vdot(wa, wa).real
        sent = unitaries[a].conj().T @ wa / np.sqrt(pa)
        for e in range(4):
            if p_err[e] == 0.0:
                continue
            received = paulis[e] @ sent
            for b in range(4):
                wb = ELEMENTS[b] @ received
                pb = np.vdot(wb, wb).real
                final = oracle_correction(a, b) @ unitaries[b].conj().T @ wb / np.sqrt(pb)
                total += pa * p_err[e] * pb * abs(np.vdot(v, final)) ** 2
    return total


class TestCorrectionUnitary:
    def test_agreement_is_identity(self):
        np.testing.assert_array_equal(
            correction_unitary(Outcome.PLUS_0, Outcome.PLUS_0), I2)
        np.testing.assert_array_equal(
            correction_unitary(Outcome.MINUS_1, Outcome.MINUS_1), I2)

    def test_bit_disagreement_is_x(self):
        np.testing.assert_array_equal(
            correction_unitary(Outcome.PLUS_0, Outcome.PLUS_1), SX)

    def test_sign_disagreement_is_z(self):
        np.testing.assert_array_equal(
            correction_unitary(Outcome.PLUS_0, Outcome.MINUS_0), SZ)

    def test_double_disagreement_is_xz(self):
        np.testing.assert_array_equal(
            correction_unitary(Outcome.PLUS_0, Outcome.MINUS_1), SX @ SZ)

    def test_swapped_rule_exchanges_assignments(self):
        np.testing.assert_array_equal(
            correction_unitary(Outcome.PLUS_0, Outcome.PLUS_1, swapped=True), SZ)
        np.testing.assert_array_equal(
            correction_unitary(Outcome.PLUS_0, Outcome.MINUS_0, swapped=True), SX)


class TestBranchStatistics:
    def test_spot_probability(self):
        p, _ = branch_statistics(KET0, Outcome.PLUS_0, ErrorType.NO_ERROR, Outcome.PLUS_0)
        assert p == pytest.approx(5 / 12, abs=1e-14)

    def test_outcome_agreement_identities(self):
        for psi in random_states(20, 100):
            stats = [branch_statistics(psi, Outcome.PLUS_0, ErrorType(i), Outcome(i))
                     for i in range(4)]
            p0, s0 = stats[0]
            for p, s in stats[1:]:
                assert p == pytest.approx(p0, abs=1e-12)
                assert np.max(np.abs(s.vector - s0.vector)) < 1e-12

    def test_swapped_rule_breaks_state_identity(self):
        psi = make_pure(0.7, 1.1)
        _, s0 = branch_statistics(psi, Outcome.PLUS_0, ErrorType.NO_ERROR, Outcome.PLUS_0,
                                  swapped=True)
        _, s1 = branch_statistics(psi, Outcome.PLUS_0, ErrorType.BIT_FLIP, Outcome.PLUS_1,
                                  swapped=True)
        assert np.max(np.abs(s0.vector - s1.vector)) > 1e-3


class TestExactFidelity:
    def test_error_rate_independence_example(self):
        for psi in random_states(1, 10):
            assert exact_fidelity(psi, 0.3, 0.7) == pytest.approx(
                exact_fidelity(psi, 0.0, 0.0), abs=1e-12)

    def test_ket0(self):
        for p_bit, p_ph in [(0.0, 0.0), (0.5, 0.5), (1.0, 0.3)]:
            assert exact_fidelity(KET0, p_bit, p_ph) == pytest.approx(5 / 9, abs=1e-13)

    def test_exception_point(self):
        psi = make_pure(0.5, np.pi / 2)
        assert exact_fidelity(psi, 0.2, 0.9) == pytest.approx(0.5, abs=1e-13)

    def test_against_stepwise_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            psi = make_pure(rng.random(), rng.random() * 2 * np.pi)
            p_bit, p_ph = rng.random(), rng.random()
            assert exact_fidelity(psi, p_bit, p_ph) == pytest.approx(
                oracle_exact_fidelity(psi.vector, p_bit, p_ph), abs=1e-12)

    def test_plane_matches_scalar(self):
        rng = np.random.default_rng(14)
        for _ in range(20):
            a2, phi = rng.random(), rng.random() * 2 * np.pi
            assert exact_fidelity_plane(a2, phi, 0.1, 0.6) == pytest.approx(
                exact_fidelity(make_pure(a2, phi), 0.1, 0.6), abs=1e-12)


class TestAnalyticFidelity:
    @pytest.mark.parametrize("alpha2,phi,expected", [
        (1.0, 0.0, 5 / 9),
        (0.5, 0.0, 13 / 18),
        (0.5, np.pi / 2, 0.5),
    ])
    def test_values(self, alpha2, phi, expected):
        assert analytic_fidelity(alpha2, phi) == pytest.approx(expected, abs=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            analytic_fidelity(1.5, 0.0)

    def test_matches_exact_on_grid(self):
        aa = alpha2_grid(41)[:, None]
        pp = phi_grid(41)[None, :]
        assert np.max(np.abs(exact_fidelity_plane(aa, pp) - analytic_fidelity(aa, pp))) < 1e-10


class TestMixedInputFidelity:
    def test_equals_exact_everywhere(self):
        for psi in random_states(2, 20):
            f = mixed_input_fidelity(psi)
            assert f == pytest.approx(exact_fidelity(psi, 0.0, 0.0), abs=1e-10)
            assert f == pytest.approx(exact_fidelity(psi, 0.4, 0.8), abs=1e-10)

    def test_ket0(self):
        assert mixed_input_fidelity(KET0) == pytest.approx(5 / 9, abs=1e-13)

    def test_equator(self):
        assert mixed_input_fidelity(make_pure(0.5, 0.0)) == pytest.approx(13 / 18, abs=1e-13)

    def test_plane_matches_scalar(self):
        rng = np.random.default_rng(15)
        for _ in range(10):
            a2, phi = rng.random(), rng.random() * 2 * np.pi
            assert mixed_input_fidelity_plane(a2, phi) == pytest.approx(
                mixed_input_fidelity(make_pure(a2, phi)), abs=1e-12)


class TestBaseline:
    def test_pole(self):
        assert baseline_direct_fidelity(KET0) == 1.0

    def test_equator(self):
        for phi in (0.0, 1.0, np.pi):
            assert baseline_direct_fidelity(make_pure(0.5, phi)) == pytest.approx(0.5, abs=1e-14)

    def test_plane_average(self):
        assert plane_average(baseline_fidelity_plane, 201, 1) == pytest.approx(2 / 3, abs=1e-3)


class TestPlaneAverage:
    def test_constant(self):
        assert plane_average(lambda a, p: np.ones_like(a), 11, 7) == 1.0

    def test_published_protocol_average(self):
        assert plane_average(analytic_fidelity, 201, 201) == pytest.approx(16 / 27, abs=1e-3)

    def test_pointwise_fallback_matches_vectorized(self):
        scalar_only = lambda a2, phi: float(analytic_fidelity(float(a2), float(phi)))
        assert plane_average(scalar_only, 21, 11) == pytest.approx(
            plane_average(analytic_fidelity, 21, 11), abs=1e-14)

    def test_grid_bounds(self):
        with pytest.raises(ValueError):
            plane_average(analytic_fidelity, 1, 5)
        with pytest.raises(ValueError):
            plane_average(analytic_fidelity, 5, 0)

    def test_grid_conventions(self):
        a = alpha2_grid(5)
        np.testing.assert_allclose(a, [0.0, 0.25, 0.5, 0.75, 1.0])
        p = phi_grid(4)
        np.testing.assert_allclose(p, [0.0, np.pi / 2, np.pi, 3 * np.pi / 2])

    def test_grid_average_weights(self):
        values = np.outer(alpha2_grid(11), np.ones(3))
        assert grid_average(values, 11, 3) == pytest.approx(0.5, abs=1e-14)


class TestRunTrajectory:
    def test_seed_determinism(self):
        psi = make_pure(0.4, 2.2)
        a = run_trajectory(psi, 0.3, 0.6, np.random.default_rng(77))
        b = run_trajectory(psi, 0.3, 0.6, np.random.default_rng(77))
        assert a == b

    def test_certain_bit_flip_always_drawn(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            rec = run_trajectory(make_pure(0.8, 0.3), 1.0, 0.0, rng)
            assert rec.error is ErrorType.BIT_FLIP

    def test_overlap_in_unit_interval(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            rec = run_trajectory(make_pure(0.6, 5.0), 0.2, 0.7, rng)
            assert 0.0 <= rec.overlap <= 1.0 + 1e-12

    def test_mean_overlap_converges_to_exact(self):
        psi = KET0
        rng = np.random.default_rng(3)
        n = 20000
        overlaps = np.array([run_trajectory(psi, 0.0, 0.0, rng).overlap for _ in range(n)])
        stderr = overlaps.std(ddof=1) / np.sqrt(n)
        assert abs(overlaps.mean() - 5 / 9) <= 4 * stderr

    def test_outcome_frequencies_match_branch_probabilities(self):
        psi = make_pure(0.3, 0.9)
        p_bit, p_ph = 0.25, 0.5
        n = 4000
        rng = np.random.default_rng(4)
        counts = np.zeros((4, 4, 4))
        for _ in range(n):
            rec = run_trajectory(psi, p_bit, p_ph, rng)
            counts[rec.alice, rec.error, rec.bob] += 1
        p_err = [(1 - p_bit) * (1 - p_ph), p_bit * (1 - p_ph),
                 p_ph * (1 - p_bit), p_bit * p_ph]
        from clonerestore.cloning import outcome_probability
        for a in range(4):
            pa = outcome_probability(psi, Outcome(a))
            for e in range(4):
                for b in range(4):
                    pb, _ = branch_statistics(psi, Outcome(a), ErrorType(e), Outcome(b))
                    expected = pa * p_err[e] * pb
                    sigma = np.sqrt(expected * (1 - expected) / n)
                    assert abs(counts[a, e, b] / n - expected) <= 5 * sigma + 1e-12


class TestMcEstimate:
    def test_determinism(self):
        psi = make_pure(0.7, 1.0)
        a = mc_estimate(psi, 0.1, 0.2, 5000, np.random.default_rng(5))
        b = mc_estimate(psi, 0.1, 0.2, 5000, np.random.default_rng(5))
        assert a == b

    def test_consistency_with_exact(self):
        rng = np.random.default_rng(6)
        for a2, phi in [(1.0, 0.0), (0.5, np.pi / 2), (0.3, 2.0)]:
            psi = make_pure(a2, phi)
            res = mc_estimate(psi, 0.2, 0.4, 50000, rng)
            exact = exact_fidelity(psi, 0.2, 0.4)
            assert abs(res.mean - exact) <= 4 * max(res.stderr, 1e-12)

    def test_result_fields(self):
        res = mc_estimate(KET0, 0.0, 0.0, 100, np.random.default_rng(7))
        assert isinstance(res, MCResult)
        assert res.trials == 100
        assert res.stderr >= 0.0

    def test_trials_domain(self):
        with pytest.raises(ValueError):
            mc_estimate(KET0, 0.0, 0.0, 0, np.random.default_rng(0))
