"""Otto cycle composition: regimes, stroke identities, sweeps."""

import math

import numpy as np
import pytest

from anyon_otto.errors import DegenerateCycle, DomainError
from anyon_otto.otto import (
    REGIME_DEGENERATE,
    REGIME_ENGINE,
    OttoCycleSpec,
    cycle_strokes,
    efficiency_cs_volume,
    run_cycle,
    sweep_efficiency,
)


class TestOttoCycleSpec:
    def test_beta_ordering_enforced(self):
        with pytest.raises(DomainError):
            OttoCycleSpec.ring_cycle(0.1, 0.3, beta_h=2.0, beta_l=1.0)

    def test_bad_medium(self):
        with pytest.raises(DomainError):
            OttoCycleSpec(
                medium="qubit", beta_h=1.0, beta_l=2.0, control_hot=0.1, control_cold=0.2
            )

    def test_positive_lengths_required(self):
        with pytest.raises(DomainError):
            OttoCycleSpec.cs_volume_cycle(0.0, 1.0, 0.5, 0.1, 0.2)

    def test_constructor_orientation(self):
        spec = OttoCycleSpec.cs_volume_cycle(2.0, 1.0, 0.5, 0.1, 0.2)
        assert spec.control_hot == 1.0  # compressed size takes the heat
        assert spec.control_cold == 2.0
        spec = OttoCycleSpec.cs_coupling_cycle(0.0, 1.0, 0.1, 0.2)
        assert spec.control_hot == 1.0
        assert spec.control_cold == 0.0


class TestRunCycle:
    def test_fully_identical_settings_raise(self):
        spec = OttoCycleSpec.ring_cycle(0.3, 0.3, 1.0, 1.0)
        with pytest.raises(DegenerateCycle):
            run_cycle(spec)

    def test_equal_controls_flagged_degenerate(self):
        report = run_cycle(OttoCycleSpec.ring_cycle(0.3, 0.3, 1.0, 2.0))
        assert report.w_out == 0.0
        assert report.efficiency == 0.0
        assert report.regime == REGIME_DEGENERATE

    def test_known_engine_point(self):
        report = run_cycle(OttoCycleSpec.ring_cycle(0.1, 0.3, 0.5, 25.0))
        assert report.regime == REGIME_ENGINE
        assert 0.0 < report.efficiency < 1.0
        assert report.q_in > 0.0 and report.w_out > 0.0
        assert math.isclose(report.w_out, report.q_in - report.q_out, rel_tol=1e-10)

    def test_cs_volume_efficiency_is_compression_ratio(self):
        report = run_cycle(OttoCycleSpec.cs_volume_cycle(1.0, 0.5, 0.5, 0.01, 0.02))
        assert abs(report.efficiency - 0.75) < 1e-10

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
    @pytest.mark.parametrize("betas", [(0.01, 0.02), (0.05, 0.2)])
    def test_cs_volume_independent_of_alpha_and_temps(self, alpha, betas):
        report = run_cycle(
            OttoCycleSpec.cs_volume_cycle(1.3, 0.6, alpha, betas[0], betas[1])
        )
        target = efficiency_cs_volume(1.3, 0.6)
        assert abs(report.efficiency - target) <= 1e-10 * abs(target)

    def test_populations_cover_union_and_normalize(self):
        report = run_cycle(OttoCycleSpec.ring_cycle(0.1, 0.45, 0.4, 8.0))
        assert len(report.labels) == len(report.populations_a)
        assert abs(sum(report.populations_b) - 1.0) < 1e-10
        assert abs(sum(report.populations_a) - 1.0) < 1e-10

    def test_energy_shift_invariance_of_efficiency(self):
        report = run_cycle(OttoCycleSpec.ring_cycle(0.1, 0.3, 0.5, 25.0))
        dp = np.asarray(report.populations_b) - np.asarray(report.populations_a)
        for shift in (-0.7, 0.37, 5.0):
            q_in = float((np.asarray(report.energies_hot) + shift) @ dp)
            q_out = float((np.asarray(report.energies_cold) + shift) @ dp)
            eta = 1.0 - q_out / q_in
            assert abs(eta - report.efficiency) <= 1e-10 * abs(report.efficiency)

    def test_engine_implies_bounded_efficiency_on_grid(self):
        # >= 100 parameter combinations; every engine-flagged point obeys
        # 0 < eta < 1
        n_engine = 0
        n_total = 0
        for alpha_h in (0.05, 0.15, 0.3):
            for d_alpha in (0.1, 0.25, 0.6):
                for beta_h in (0.1, 0.5, 1.5):
                    for mult in (2.0, 10.0, 40.0, 120.0):
                        n_total += 1
                        report = run_cycle(
                            OttoCycleSpec.ring_cycle(
                                alpha_h, alpha_h + d_alpha, beta_h, beta_h * mult
                            )
                        )
                        if report.regime == REGIME_ENGINE:
                            n_engine += 1
                            assert 0.0 < report.efficiency < 1.0
        assert n_total >= 100
        assert n_engine >= 5


class TestEfficiencyCsVolume:
    def test_no_compression_no_work(self):
        assert efficiency_cs_volume(1.0, 1.0) == 0.0

    def test_plain_ratio(self):
        assert efficiency_cs_volume(2.0, 1.0) == 0.75

    def test_positive_sizes_required(self):
        with pytest.raises(DomainError):
            efficiency_cs_volume(0.0, 1.0)


class TestCycleStrokes:
    @pytest.mark.parametrize(
        "spec",
        [
            OttoCycleSpec.ring_cycle(0.1, 0.3, 0.5, 25.0),
            OttoCycleSpec.cs_volume_cycle(1.0, 0.5, 0.5, 0.05, 0.3),
            OttoCycleSpec.cs_coupling_cycle(0.0, 1.0, 0.05, 0.1),
        ],
    )
    def test_stroke_identities(self, spec):
        strokes = cycle_strokes(spec, steps_per_stroke=200)
        report = run_cycle(spec)
        assert strokes.stroke("A->B").work == 0.0
        assert strokes.stroke("C->D").work == 0.0
        assert strokes.stroke("B->C").heat == 0.0
        assert strokes.stroke("D->A").heat == 0.0
        # heats along the isochores match the population-difference sums
        assert math.isclose(strokes.stroke("A->B").heat, report.q_in, rel_tol=1e-10)
        assert math.isclose(strokes.stroke("C->D").heat, -report.q_out, rel_tol=1e-10)
        # output work equals minus the work absorbed along the two adiabats
        w_adiabats = strokes.stroke("B->C").work + strokes.stroke("D->A").work
        assert abs(report.w_out + w_adiabats) <= 1e-8 * max(1.0, abs(report.w_out))

    def test_adiabats_preserve_entropy_exactly(self):
        strokes = cycle_strokes(OttoCycleSpec.ring_cycle(0.1, 0.3, 0.5, 25.0), 50)
        assert strokes.entropy_b == strokes.entropy_c
        assert strokes.entropy_d == strokes.entropy_a


class TestSweep:
    def test_single_point_matches_run_cycle(self):
        template = OttoCycleSpec.cs_coupling_cycle(0.0, 0.5, 0.05, 0.1)
        rows = sweep_efficiency(template, "alpha2", [1.0])
        direct = run_cycle(OttoCycleSpec.cs_coupling_cycle(0.0, 1.0, 0.05, 0.1))
        assert rows[0].report.efficiency == direct.efficiency

    def test_empty_grid(self):
        template = OttoCycleSpec.ring_cycle(0.1, 0.3, 0.5, 5.0)
        assert sweep_efficiency(template, "alpha_l", []) == []

    def test_order_preserved_and_degenerate_rows_flagged(self):
        template = OttoCycleSpec.cs_coupling_cycle(0.0, 0.5, 0.05, 0.1)
        values = [0.4, 0.0, 0.8]
        rows = sweep_efficiency(template, "alpha2", values)
        assert [row.value for row in rows] == values
        assert rows[1].report.regime == REGIME_DEGENERATE

    def test_invalid_value_recorded_not_raised(self):
        template = OttoCycleSpec.cs_volume_cycle(1.0, 0.5, 0.0, 0.05, 0.2)
        rows = sweep_efficiency(template, "l2", [-1.0, 0.6])
        assert rows[0].report is None
        assert "DomainError" in rows[0].error
        assert rows[1].report is not None

    def test_unknown_axis(self):
        template = OttoCycleSpec.ring_cycle(0.1, 0.3, 0.5, 5.0)
        with pytest.raises(DomainError):
            sweep_efficiency(template, "l1", [1.0])

    def test_beta_h_grid_approaches_equal_temperature_continuously(self):
        template = OttoCycleSpec.ring_cycle(0.1, 0.6, 0.2, 1.0)
        values = [1.0 - 0.5**k for k in range(1, 15)]  # -> 1.0 from below
        rows = sweep_efficiency(template, "beta_h", values)
        effs = [row.report.efficiency for row in rows]
        assert all(math.isfinite(e) for e in effs)
        diffs = [abs(b - a) for a, b in zip(effs, effs[1:])]
        # later steps (halved spacing) move the efficiency less
        assert diffs[-1] < diffs[0]
        assert diffs[-1] < 1e-3
