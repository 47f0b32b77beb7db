import math

import numpy as np
import pytest

from _support import (
    FIG2,
    FIG2_LAMBDAS,
    FIG2_TWIN,
    FROZEN_FIG2,
    GAMMA_OVER_OMEGA,
    Q_T_FIG2,
    pre_transition_probe,
    random_spectra,
    surface_states,
)
from discordfreeze.channels import Markovian, RandomTelegraph, coherence_factor, evolve_spectrum
from discordfreeze.discord import Branch, c_max_branch, discord_analytic, discord_curve, discord_rate
from discordfreeze.errors import NotApplicableError, NotFrozenError
from discordfreeze.freezing import (
    ORDERINGS,
    Condition,
    Direction,
    analyze,
    boundary_curves,
    check_condition,
    condition_mask,
    frozen_value,
    is_frozen_at,
    nonmarkovian_transitions,
    ordering,
    refreeze_threshold,
    sample_surface,
    sudden_change_rate,
    surface_spectra,
    transition_q,
)
from discordfreeze.qmath import binary_entropy
from discordfreeze.states import BellDiagonal, Spectrum, c_from_lambdas

FIG2_SPEC = Spectrum(*FIG2_LAMBDAS)
# CondB mirror of the Fig. 2 state: l2 and l4 exchanged
MIRROR = c_from_lambdas(Spectrum(3 / 4, 1 / 80, 1 / 20, 3 / 16))
ZERO_C3 = c_from_lambdas(Spectrum(0.4, 0.4, 0.1, 0.1))


class TestCheckCondition:
    def test_fig2(self):
        rep = check_condition(FIG2_SPEC)
        assert rep.condition is Condition.COND_A
        assert rep.order_class == "l1>l2>l3>l4"
        assert FIG2_SPEC.l1 * FIG2_SPEC.l4 == pytest.approx(0.009375, abs=1e-16)

    def test_uniform_is_boundary(self):
        rep = check_condition(Spectrum(0.25, 0.25, 0.25, 0.25))
        assert rep.condition is Condition.NONE and rep.boundary
        assert rep.order_class == "l1=l2=l3=l4"

    def test_mismatch(self):
        rep = check_condition(Spectrum(0.5, 0.3, 0.15, 0.05))
        assert rep.condition is Condition.NONE and not rep.boundary

    def test_mirror_is_condb(self):
        rep = check_condition(MIRROR.spectrum)
        assert rep.condition is Condition.COND_B
        assert rep.order_class == "l1>l4>l3>l2"

    def test_relative_tolerance(self):
        sp = Spectrum(0.75, 0.1875 + 1e-13, 0.05, 0.0125 - 1e-13)
        assert check_condition(sp).condition is Condition.COND_A
        assert check_condition(Spectrum(0.75, 0.1875 + 1e-6, 0.05, 0.0125 - 1e-6)).condition is Condition.NONE
        assert check_condition(Spectrum(0.75, 0.1875 + 1e-6, 0.05, 0.0125 - 1e-6), tol=1e-3).condition is Condition.COND_A
        with pytest.raises(ValueError):
            check_condition(FIG2_SPEC, tol=0)

    def test_all_eight_orderings(self):
        seen = {Condition.COND_A: set(), Condition.COND_B: set()}
        for cond in seen:
            for row in surface_spectra(cond, 65):
                rep = check_condition(Spectrum(*row))
                assert rep.condition is cond
                if ">" in rep.order_class and "=" not in rep.order_class:
                    seen[cond].add(rep.order_class)
        for cond, orders in seen.items():
            assert orders == set(ORDERINGS[cond])

    def test_ordering_string(self):
        assert ordering(Spectrum(0.4, 0.4, 0.1, 0.1)) == "l1=l2>l3=l4"
        assert ordering(Spectrum(0.1, 0.2, 0.3, 0.4)) == "l4>l3>l2>l1"

    def test_mask_matches_scalar(self):
        rng = np.random.default_rng(40)
        lams = np.vstack([random_spectra(rng, 200), surface_spectra(Condition.COND_A, 17), surface_spectra(Condition.COND_B, 17)])
        for cond in (Condition.COND_A, Condition.COND_B):
            mask = condition_mask(lams, cond)
            for row, m in zip(lams, mask):
                assert m == (check_condition(Spectrum(*row)).condition is cond)


class TestFrozenQuantities:
    def test_fig2_frozen_value(self):
        assert frozen_value(FIG2_SPEC) == pytest.approx(FROZEN_FIG2, abs=1e-16)
        assert frozen_value(FIG2_SPEC) == pytest.approx(1 - binary_entropy(0.8), abs=1e-16)
        assert frozen_value(FIG2_SPEC) == pytest.approx(discord_analytic(FIG2), abs=1e-12)

    def test_zero_plateau(self):
        assert frozen_value(ZERO_C3) == 0.0
        assert transition_q(ZERO_C3) == 1.0
        with pytest.raises(NotApplicableError):
            sudden_change_rate(ZERO_C3)
        rep = analyze(ZERO_C3)
        assert rep.q_transition == 1.0 and rep.sudden_rate is None

    def test_pure_bell_is_error(self):
        with pytest.raises(NotFrozenError):
            frozen_value(Spectrum(1, 0, 0, 0))

    def test_transition(self):
        assert transition_q(FIG2) == pytest.approx(11 / 35, abs=1e-15)
        assert transition_q(MIRROR) == pytest.approx(11 / 35, abs=1e-15)
        assert transition_q(FIG2_TWIN) == pytest.approx(11 / 35, abs=1e-15)
        with pytest.raises(NotFrozenError):
            transition_q(BellDiagonal(0.5, 0.3, 0.1))

    def test_sudden_rate(self):
        assert sudden_change_rate(FIG2) == pytest.approx(-0.875, abs=1e-14)
        assert sudden_change_rate(MIRROR) == pytest.approx(-0.875, abs=1e-14)
        assert sudden_change_rate(FIG2) == pytest.approx(-(35 / 48) * 1.2, abs=1e-14)

    def test_sudden_rate_consistency(self):
        rng = np.random.default_rng(41)
        for cond in (Condition.COND_A, Condition.COND_B):
            for s in surface_states(rng, cond, 40):
                q_t = transition_q(s)
                if q_t >= 0.99 or q_t < 1e-3:
                    continue
                rate = sudden_change_rate(s)
                assert rate < 0
                assert discord_rate(s, q_t + 1e-9).rate == pytest.approx(rate, abs=1e-6)
                h = 1e-7
                fd = (discord_analytic(s, q_t + h) - discord_analytic(s, q_t)) / h
                assert fd == pytest.approx(rate, abs=1e-5)

    def test_analyze(self):
        rep = analyze(FIG2)
        assert (rep.condition, rep.order_class, rep.boundary) == (Condition.COND_A, "l1>l2>l3>l4", False)
        assert rep.frozen_value == pytest.approx(FROZEN_FIG2, abs=1e-15)
        assert rep.q_transition == pytest.approx(Q_T_FIG2, abs=1e-15)
        assert rep.sudden_rate == pytest.approx(-0.875, abs=1e-14)
        none = analyze(BellDiagonal(0.5, 0.3, 0.1))
        assert none.frozen_value is None and none.q_transition is None


class TestTheorem:
    def test_surface_states_freeze(self):
        for cond in (Condition.COND_A, Condition.COND_B):
            for row in surface_spectra(cond, 33):
                s = c_from_lambdas(Spectrum(*row))
                q_t = transition_q(s)
                qs = np.linspace(0, q_t, 32)
                q0 = frozen_value(s)
                assert np.max(np.abs(discord_curve(s, qs) - q0)) <= 1e-12

    def test_random_states_do_not_freeze(self):
        rng = np.random.default_rng(42)
        lams = random_spectra(rng, 10_000)
        probed = 0
        for row in lams:
            sp = Spectrum(*row)
            assert check_condition(sp).condition is Condition.NONE
            res = pre_transition_probe(c_from_lambdas(sp))
            if res is None:
                continue
            _, mismatch, q_end, dev = res
            if mismatch >= 0.05 and q_end >= 0.05:
                assert dev > 1e-6
                probed += 1
        assert probed > 3000

    def test_condition_preserved_by_flow(self):
        rng = np.random.default_rng(43)
        for cond in (Condition.COND_A, Condition.COND_B):
            for s in surface_states(rng, cond, 100):
                for q in np.linspace(0, 1, 11):
                    l1, l2, l3, l4 = evolve_spectrum(s.spectrum, q).as_tuple()
                    if cond is Condition.COND_A:
                        assert abs(l1 * l4 - l2 * l3) <= 1e-14
                    else:
                        assert abs(l1 * l2 - l3 * l4) <= 1e-14

    def test_surface_closure(self):
        rng = np.random.default_rng(44)
        for cond in (Condition.COND_A, Condition.COND_B):
            for s in surface_states(rng, cond, 100):
                q_t = transition_q(s)
                for q in np.linspace(0, q_t, 6)[:-1]:
                    assert check_condition(evolve_spectrum(s.spectrum, q)).condition is cond

    def test_frozen_branch_matches_condition(self):
        rng = np.random.default_rng(45)
        for cond, branch in ((Condition.COND_A, Branch.B1), (Condition.COND_B, Branch.B2)):
            for s in surface_states(rng, cond, 100):
                if transition_q(s) > 0:
                    assert c_max_branch(s, 0).branch in (branch, Branch.B3)


class TestSurface:
    def test_fig2_point_present(self):
        pts = sample_surface(Condition.COND_A, 65)
        want = np.sqrt([0.75, 0.1875, 0.05])
        assert np.min(np.max(np.abs(pts - want), axis=1)) <= 1e-15

    def test_node_excluded_but_approached(self):
        for cond in (Condition.COND_A, Condition.COND_B):
            pts = sample_surface(cond, 129)
            dist = np.linalg.norm(pts - 0.5, axis=1)
            assert dist.min() > 0
            assert dist.min() < 0.05

    def test_products_exact(self):
        a = surface_spectra(Condition.COND_A, 65)
        assert np.max(np.abs(a[:, 0] * a[:, 3] - a[:, 1] * a[:, 2])) <= 1e-12
        b = surface_spectra(Condition.COND_B, 65)
        assert np.max(np.abs(b[:, 0] * b[:, 1] - b[:, 2] * b[:, 3])) <= 1e-12

    def test_physical(self):
        for cond in (Condition.COND_A, Condition.COND_B):
            lams = surface_spectra(cond, 65)
            assert lams.min() >= 0
            np.testing.assert_allclose(lams.sum(axis=1), 1, atol=1e-15)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            sample_surface(Condition.NONE, 10)
        with pytest.raises(ValueError):
            sample_surface(Condition.COND_A, 1)


class TestBoundary:
    def test_classification(self):
        curves = boundary_curves(101)
        assert [c.curve_id for c in curves] == [1, 2, 3, 4]
        assert [c.condition for c in curves] == [Condition.COND_B, Condition.COND_A, Condition.COND_B, Condition.COND_A]

    def test_products_and_tie(self):
        for curve in boundary_curves(101):
            l1, l2, l3, l4 = curve.spectra.T
            if curve.condition is Condition.COND_A:
                assert np.max(np.abs(l1 * l4 - l2 * l3)) <= 1e-10
            else:
                assert np.max(np.abs(l1 * l2 - l3 * l4)) <= 1e-10
            for row in curve.spectra:
                s = c_from_lambdas(Spectrum(*row))
                ca = s.c1 if curve.condition is Condition.COND_A else s.c2
                assert abs(abs(ca) - abs(s.c3)) <= 1e-10
                rep = check_condition(Spectrum(*row))
                assert rep.condition is Condition.NONE and rep.boundary

    def test_node(self):
        for curve in boundary_curves(101):
            np.testing.assert_allclose(curve.spectra[25], [0.25] * 4, atol=1e-15)
            np.testing.assert_allclose(curve.points[25], [0.5] * 3, atol=1e-15)
        for curve in boundary_curves(100_001):
            d = np.linalg.norm(curve.points - 0.5, axis=1)
            assert d.min() <= 1e-5

    def test_worked_points(self):
        c1 = boundary_curves(101)[0]
        np.testing.assert_allclose(c1.spectra[16], [0.24, 0.24, 0.16, 0.36], atol=1e-15)
        c3 = boundary_curves(101)[2]
        np.testing.assert_allclose(c3.spectra[25], [0.25] * 4, atol=1e-15)

    def test_bad_n(self):
        with pytest.raises(ValueError):
            boundary_curves(1)


class TestNonMarkovian:
    sched = RandomTelegraph.from_ratio(GAMMA_OVER_OMEGA)

    def test_threshold(self):
        thr = refreeze_threshold(FIG2, self.sched)
        assert thr.ratio == pytest.approx(35 / 24, abs=1e-14)
        assert thr.threshold == pytest.approx(1.1032, abs=5e-5)
        assert thr.satisfied

    def test_fig2_events(self):
        events = nonmarkovian_transitions(FIG2, self.sched, self.sched.period)
        assert len(events) >= 2
        assert [e.t for e in events] == sorted(e.t for e in events)
        dirs = [e.direction for e in events]
        assert dirs[0] is Direction.FREEZE_TO_DECAY
        assert all(a is not b for a, b in zip(dirs, dirs[1:]))
        assert events[0].q == pytest.approx(Q_T_FIG2, abs=1e-9)

    def test_refreeze_value(self):
        events = nonmarkovian_transitions(FIG2, self.sched, 3 * self.sched.period)
        refreezes = [e for e in events if e.direction is Direction.DECAY_TO_FREEZE]
        assert len(refreezes) >= 2
        for e in refreezes:
            assert discord_analytic(FIG2, e.q) == pytest.approx(FROZEN_FIG2, abs=1e-9)
            q_in = 1 - coherence_factor(self.sched, e.t + 1e-6)
            assert discord_analytic(FIG2, q_in) == pytest.approx(FROZEN_FIG2, abs=1e-12)

    def test_event_roots(self):
        level = abs(FIG2.c3 / FIG2.c1)
        for e in nonmarkovian_transitions(FIG2, self.sched, 2 * self.sched.period):
            assert abs(abs(coherence_factor(self.sched, e.t)) - level) <= 1e-11

    def test_finer_grid_same_events(self):
        a = nonmarkovian_transitions(FIG2, self.sched, 2 * self.sched.period)
        b = nonmarkovian_transitions(FIG2, self.sched, 2 * self.sched.period, dt=self.sched.period / 2000)
        np.testing.assert_allclose([e.t for e in a], [e.t for e in b], atol=1e-10)

    def test_below_threshold_single_event(self):
        s = BellDiagonal(0.63, -0.378, 0.6)
        assert check_condition(s.spectrum).condition is Condition.COND_A
        thr = refreeze_threshold(s, self.sched)
        assert thr.ratio == pytest.approx(1.05, abs=1e-14) and not thr.satisfied
        events = nonmarkovian_transitions(s, self.sched, 3 * self.sched.period)
        assert len(events) == 1
        assert events[0].direction is Direction.FREEZE_TO_DECAY

    def test_errors(self):
        with pytest.raises(NotFrozenError):
            nonmarkovian_transitions(BellDiagonal(0.5, 0.3, 0.1), self.sched, 1.0)
        with pytest.raises(ValueError):
            nonmarkovian_transitions(FIG2, self.sched, 0.0)
        with pytest.raises(TypeError):
            nonmarkovian_transitions(FIG2, Markovian(1.0), 1.0)

    def test_is_frozen_at(self):
        assert is_frozen_at(FIG2, 0.2)
        assert not is_frozen_at(FIG2, 0.5)
        assert is_frozen_at(FIG2, 2 - 0.2)
