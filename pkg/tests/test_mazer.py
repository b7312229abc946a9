"""Tests for the induced-emission layer: branch combination, sweeps,
convergence studies, and the zero-length shortcut."""

import math

import pytest

from mazersim.grid import ModeProfile, ModeShape
from mazersim.mazer import (
    ConvergenceStudy,
    MazerParams,
    branch_amplitudes,
    convergence_study,
    elementary_amplitudes,
    event_probabilities,
    kappaL_range,
    sweep_kappaL,
)
from mazersim.oracles import sech2_analytic

# Reference value pinned from the closed-form amplitudes at
# k_over_kappa=0.01, kappaL=10 (same combination rule as the solver).
SECH2_PEM_GOLDEN = 0.023762721955837014


def make_params(shape=ModeShape.SECH2, k=0.1, L=5.0, J=100, **kw):
    return MazerParams.for_shape(shape, k, L, J, **kw)


class TestParamsValidation:
    def test_rejects_nonpositive_momentum(self):
        with pytest.raises(ValueError):
            make_params(k=0.0)
        with pytest.raises(ValueError):
            make_params(k=-0.5)

    def test_rejects_negative_length(self):
        with pytest.raises(ValueError):
            make_params(L=-1.0)

    def test_rejects_tiny_grid(self):
        with pytest.raises(ValueError):
            make_params(J=1)

    def test_rejects_length_profile_mismatch(self):
        with pytest.raises(ValueError):
            MazerParams(
                k_over_kappa=0.1, kappaL=3.0,
                profile=ModeProfile(ModeShape.SECH2, 2.0), J=50)

    def test_with_kappaL_rebuilds_profile(self):
        p = make_params(L=5.0)
        q = p.with_kappaL(7.5)
        assert q.kappaL == 7.5
        assert q.profile.length == 7.5
        assert q.profile.shape is ModeShape.SECH2
        assert q.J == p.J and q.k_over_kappa == p.k_over_kappa

    def test_with_kappaL_refuses_tabulated(self):
        profile = ModeProfile(
            ModeShape.TABULATED, 0.0, table=((0.0, 0.0), (1.0, 0.5)))
        p = MazerParams(
            k_over_kappa=0.1, kappaL=profile.length, profile=profile, J=10)
        with pytest.raises(ValueError):
            p.with_kappaL(2.0)

    def test_elementary_rejects_bad_branch(self):
        with pytest.raises(ValueError):
            elementary_amplitudes(make_params(), 0)


class TestZeroLength:
    def test_amplitudes_are_transparent(self):
        p = make_params(L=0.0)
        for branch in (+1, -1):
            res = elementary_amplitudes(p, branch)
            assert res.t == 1.0 + 0.0j
            assert res.r == 0.0 + 0.0j
            assert res.unitarity_defect == 0.0
            assert res.t_log10_mag == 0.0

    def test_no_emission_without_interaction(self):
        ev = event_probabilities(make_params(L=0.0))
        assert ev.P_em == 0.0
        assert ev.T_a_sq == 1.0
        assert ev.T_b_sq == ev.R_a_sq == ev.R_b_sq == 0.0
        assert ev.closure_defect == 0.0


class TestCombination:
    def test_emission_is_difference_channel(self):
        p = make_params(k=0.1, L=4.0, J=120)
        plus, minus = branch_amplitudes(p)
        ev = event_probabilities(p)
        T_b = 0.5 * abs(plus.t - minus.t) ** 2
        R_b = 0.5 * abs(plus.r - minus.r) ** 2
        assert ev.T_b_sq == pytest.approx(0.5 * T_b, rel=1e-12)
        assert ev.R_b_sq == pytest.approx(0.5 * R_b, rel=1e-12)
        assert ev.P_em == ev.T_b_sq + ev.R_b_sq

    def test_closure_across_shapes(self):
        cases = [
            (ModeShape.MESA, 0.3, 6.0, 40),
            (ModeShape.SECH2, 0.1, 5.0, 100),
            (ModeShape.SIN_FUNDAMENTAL, 0.1, 3.0, 80),
            (ModeShape.SIN_FIRST_EXCITED, 0.2, 4.0, 80),
            (ModeShape.GAUSSIAN, 0.05, 2.0, 120),
        ]
        for shape, k, L, J in cases:
            ev = event_probabilities(make_params(shape, k, L, J))
            assert ev.closure_defect <= 1e-8, (shape, ev.closure_defect)
            for value in (ev.T_a_sq, ev.T_b_sq, ev.R_a_sq, ev.R_b_sq, ev.P_em):
                assert 0.0 <= value <= 1.0 + 1e-12

    def test_emission_vanishes_continuously_at_short_lengths(self):
        p3 = event_probabilities(make_params(L=1e-3, J=50)).P_em
        p4 = event_probabilities(make_params(L=1e-4, J=50)).P_em
        assert 0.0 < p4 < p3 < 1e-3

    def test_flat_zero_mode_never_emits(self):
        profile = ModeProfile(
            ModeShape.TABULATED, 0.0,
            table=((0.0, 0.0), (1.0, 0.0), (2.0, 0.0)))
        for J in (2, 5, 40):
            p = MazerParams(
                k_over_kappa=0.4, kappaL=profile.length, profile=profile, J=J)
            ev = event_probabilities(p)
            assert ev.P_em == 0.0
            assert ev.T_a_sq == pytest.approx(1.0, abs=1e-14)


class TestAgainstClosedForms:
    def test_mesa_is_grid_size_independent(self):
        values = [
            event_probabilities(make_params(ModeShape.MESA, 0.3, 4.0, J)).P_em
            for J in (2, 17, 400)
        ]
        assert max(values) - min(values) <= 1e-12

    def test_sech2_matches_analytic_probability(self):
        ev = event_probabilities(make_params(ModeShape.SECH2, 0.01, 10.0, 200))
        assert ev.P_em == pytest.approx(SECH2_PEM_GOLDEN, abs=0.005)
        assert abs(ev.P_em - SECH2_PEM_GOLDEN) <= 1e-4

    def test_mesa_matches_analytic_amplitudes(self):
        p = make_params(ModeShape.MESA, 0.25, 7.0, 2)
        for branch in (+1, -1):
            got = elementary_amplitudes(p, branch)
            want = (0.25, 7.0, branch)
            oracle_t = _mesa_oracle_t(*want)
            assert got.t == pytest.approx(oracle_t, rel=1e-10)


def _mesa_oracle_t(k, L, branch):
    from mazersim.oracles import mesa_analytic

    return mesa_analytic(k, L, branch).t


class TestSweep:
    def test_range_inclusive_endpoint(self):
        assert kappaL_range(0.0, 2.0, 0.5) == [0.0, 0.5, 1.0, 1.5, 2.0]
        assert len(kappaL_range(0.0, 20.0, 0.1)) == 201

    def test_range_endpoint_within_half_step(self):
        values = kappaL_range(0.0, 0.99, 0.1)
        assert len(values) == 11
        assert values[-1] == pytest.approx(1.0)

    def test_range_endpoint_beyond_half_step_excluded(self):
        values = kappaL_range(0.0, 1.0, 0.3)
        assert values == pytest.approx([0.0, 0.3, 0.6, 0.9])

    def test_range_validation(self):
        with pytest.raises(ValueError):
            kappaL_range(0.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            kappaL_range(2.0, 1.0, 0.5)

    def test_rows_ordered_and_complete(self):
        table = sweep_kappaL(
            make_params(ModeShape.MESA, 0.5, 1.0, 2), 0.0, 2.0, 0.25)
        assert len(table.rows) == 9
        lengths = [row.kappaL for row in table.rows]
        assert lengths == sorted(lengths)
        assert table.rows[0].P_em == 0.0
        assert not table.has_errors
        for row in table.rows:
            assert row.error is None
            assert 0.0 <= row.P_em <= 1.0
            assert row.unit_defect_plus <= 1e-10
            assert row.unit_defect_minus <= 1e-10

    def test_failed_row_is_kept_with_marker(self, monkeypatch):
        import mazersim.mazer as mz

        real = mz.solve_scattering

        def sometimes_boom(grid, **kw):
            if grid.profile.length == 1.0:
                raise RuntimeError("synthetic failure")
            return real(grid, **kw)

        monkeypatch.setattr(mz, "solve_scattering", sometimes_boom)
        table = sweep_kappaL(
            make_params(ModeShape.MESA, 0.5, 0.5, 2), 0.5, 1.5, 0.5)
        assert len(table.rows) == 3
        assert table.has_errors
        bad = table.rows[1]
        assert bad.kappaL == 1.0
        assert bad.error is not None and "synthetic failure" in bad.error
        assert math.isnan(bad.P_em)
        assert table.rows[0].error is None
        assert table.rows[2].error is None

    def test_parallel_matches_serial(self):
        p = make_params(ModeShape.MESA, 0.4, 1.0, 2)
        serial = sweep_kappaL(p, 0.0, 3.0, 0.5)
        parallel = sweep_kappaL(p, 0.0, 3.0, 0.5, workers=2)
        assert serial.rows == parallel.rows


class TestConvergence:
    def test_settles_below_tolerance(self):
        p = make_params(ModeShape.SECH2, 0.1, 5.0, 50)
        study = convergence_study(p, [50, 100, 200, 400])
        assert isinstance(study, ConvergenceStudy)
        assert [J for J, _ in study.entries] == [50, 100, 200, 400]
        assert study.settle <= 0.005

    def test_doubling_stability(self):
        p100 = event_probabilities(make_params(ModeShape.SECH2, 0.1, 5.0, 100))
        p200 = event_probabilities(make_params(ModeShape.SECH2, 0.1, 5.0, 200))
        assert abs(p100.P_em - p200.P_em) <= 1e-3

    def test_rejects_bad_lists(self):
        p = make_params()
        with pytest.raises(ValueError):
            convergence_study(p, [])
        with pytest.raises(ValueError):
            convergence_study(p, [100, 50])
        with pytest.raises(ValueError):
            convergence_study(p, [50, 50])

    def test_single_entry_settles_to_zero(self):
        p = make_params(ModeShape.MESA, 0.3, 2.0, 2)
        study = convergence_study(p, [2])
        assert len(study.entries) == 1
        assert study.settle == 0.0


class TestOracleAgreement:
    def test_branch_amplitudes_track_analytic(self):
        for k, L in ((0.1, 3.0), (0.05, 8.0)):
            p = make_params(ModeShape.SECH2, k, L, 300)
            for branch in (+1, -1):
                got = elementary_amplitudes(p, branch)
                want = sech2_analytic(k, L, branch)
                assert abs(got.t - want.t) <= 2e-3
                assert abs(got.r - want.r) <= 2e-3
