import json
import math

import numpy as np
import pytest

from cpai import parse
from cpai._projective import chordal_distance, distance_to_subspace
from cpai.analysis import DirectionSet, analyze
from cpai.laurent import GaussianRational, evaluate, mul_monomial
from cpai.polytope import newton_polytope, scale_to_normal
from cpai.toric import height_limit, infinity_point
from cpai.witness import (
    WitnessCurve,
    cross_check,
    curves_from_json,
    default_schedule,
    paraboloid_probe,
    sample_limits,
    verify_on_variety,
    witness_curve,
)

from conftest import VARS2, VARS3


@pytest.fixture(scope="module")
def pinch_curve():
    return witness_curve(["1+t", "t", "t+t^2"])


class TestVerifyOnVariety:
    def test_standard_curve(self, pinched_edge, pinch_curve):
        assert verify_on_variety(pinched_edge, pinch_curve) is True

    def test_parameter_family(self, pinched_edge):
        for gamma in (2, 3, -1, "5/2"):
            curve = witness_curve(
                [f"1+({gamma})*t", "t", f"t+({gamma})^2*t^2"]
            )
            assert verify_on_variety(pinched_edge, curve) is True

    def test_off_variety(self):
        H = parse("x + y - 1", VARS2)
        assert verify_on_variety(H, witness_curve(["t", "t"])) is False

    def test_exactness_with_negative_exponents(self):
        H = parse("x*y^-1 - 1", VARS2)
        assert verify_on_variety(H, witness_curve(["t", "t"])) is True
        assert verify_on_variety(H, witness_curve(["t", "2*t"])) is False

    def test_numeric_residual_small_at_samples(self, pinched_edge, pinch_curve):
        for t in default_schedule():
            z = pinch_curve(t)
            assert abs(evaluate(pinched_edge, z)) < 1e-12


class TestSampleLimits:
    def test_unexpected_direction_with_height(self, pinched_edge, pinch_curve):
        est = sample_limits(pinched_edge, pinch_curve, r=(-2, -1, 1))
        assert est.status == "converged"
        assert chordal_distance(est.projective_limit, (-2, -1, 1)) <= 1e-6
        assert est.height_status == "converged"
        assert abs(est.height_limit - 0.0) <= 1e-8

    def test_parameter_family_directions(self, pinched_edge):
        for gamma in (2, 3, -1):
            curve = witness_curve([f"1+{gamma}*t", "t", f"t+{gamma**2}*t^2"])
            est = sample_limits(pinched_edge, curve)
            assert est.status == "converged"
            assert (
                chordal_distance(est.projective_limit, (-2 * gamma, -1, 1))
                <= 1e-6
            )

    def test_face_parallel_curve(self, pinched_edge):
        curve = witness_curve(["1+t", "t^2", "2*t^2"])
        est = sample_limits(pinched_edge, curve)
        assert chordal_distance(est.projective_limit, (-2, 0, 0)) <= 1e-6

    def test_divergent_height(self, pinched_edge, pinch_curve):
        # height along a direction whose monomial collapses: h -> +inf
        est = sample_limits(pinched_edge, pinch_curve, r=(0, 1, 0))
        assert est.height_status == "divergent"
        assert est.height_limit is None

    def test_callable_curve(self, quadrilateral):
        def on_variety(t):
            x = -1 + t
            y = (-1 - x - x * x) / (x * (1 + x))
            return (x, y)

        est = sample_limits(quadrilateral, on_variety)
        assert est.status == "converged"
        assert chordal_distance(est.projective_limit, (-1, 0)) <= 1e-6

    def test_skips_zero_coordinates(self, pinched_edge):
        curve = witness_curve(["1+t", "t-1/8", "t+t^2-1/8-1/64"])
        # at t = 1/8 the second coordinate vanishes; the sampler skips it
        est = sample_limits(pinched_edge, curve, t_schedule=default_schedule())
        assert any("zero coordinate" in note for note in est.notes)


class TestScalingInvariance:
    def test_limits_stable_under_scaling_and_monomials(
        self, pinched_edge, pinch_curve
    ):
        base = sample_limits(pinched_edge, pinch_curve).projective_limit
        for variant in (
            pinched_edge * 5,
            pinched_edge * GaussianRational(0, 2),
            mul_monomial(pinched_edge, (1, -1, 2)),
        ):
            est = sample_limits(variant, pinch_curve)
            assert chordal_distance(est.projective_limit, base) <= 1e-8


class TestHeightsAgainstSymbolicLimits:
    def test_face_span_direction_matches(self, pinched_edge, pinch_curve):
        Q, _ = scale_to_normal(newton_polytope(pinched_edge))
        F = Q.face_by_vertices([(0, 0, 0), (4, 0, 0)])
        p = infinity_point(F, [GaussianRational(1)])
        for r in [(1, 0, 0), (2, 0, 0)]:
            symbolic = height_limit(F, p, r)
            est = sample_limits(pinched_edge, pinch_curve, r=r)
            assert est.height_status == "converged"
            assert abs(est.height_limit - symbolic) <= 1e-6

    def test_monomial_trichotomy_spot_checks(self, pinched_edge, pinch_curve):
        Q, _ = scale_to_normal(newton_polytope(pinched_edge))
        F = Q.face_by_vertices([(0, 0, 0), (4, 0, 0)])
        p = infinity_point(F, [GaussianRational(1)])
        from cpai.toric import monomial_limit_class

        t = default_schedule()[-1]
        z = pinch_curve(t)
        for m in [(1, 0, 0), (2, 0, 0)]:
            lc = monomial_limit_class(F, m, p)
            value = np.prod([zi**e for zi, e in zip(z, m)])
            assert lc.kind == "nonzero"
            assert abs(value - complex(lc.value)) <= 1e-6
        for m in [(0, 1, 0), (0, 0, 1), (1, 1, 0)]:
            assert monomial_limit_class(F, m, p).kind == "zero"
            value = np.prod([zi**e for zi, e in zip(z, m)])
            assert abs(value) <= 1e-6

    def test_sequence_independence(self, pinched_edge):
        # two distinct curves into the same infinity point see the same
        # monomial limits
        c1 = witness_curve(["1+t", "t", "t+t^2"])
        c2 = witness_curve(["1+2*t", "t", "t+4*t^2"])
        t = default_schedule()[-1]
        for m in [(1, 0, 0), (2, 0, 0)]:
            v1 = np.prod([zi**e for zi, e in zip(c1(t), m)])
            v2 = np.prod([zi**e for zi, e in zip(c2(t), m)])
            assert abs(v1 - v2) <= 1e-6


class TestParaboloidProbe:
    def test_axis_limits_differ(self, paraboloid):
        est_x, est_y = paraboloid_probe(paraboloid)
        assert chordal_distance(est_x.projective_limit, (0, 2, 0)) <= 1e-6
        assert chordal_distance(est_y.projective_limit, (2, 0, 0)) <= 1e-6
        assert (
            chordal_distance(est_x.projective_limit, est_y.projective_limit)
            > 0.9
        )

    def test_ratio_held_family(self, paraboloid):
        for c in (2, 5, -3):
            curve = witness_curve(
                [f"1+{c}*t", "1+t", f"{c*c}*t^2 + t^2"]
            )
            assert verify_on_variety(paraboloid, curve)
            est = sample_limits(paraboloid, curve)
            assert (
                chordal_distance(est.projective_limit, (2 * c, 2, 0)) <= 1e-6
            )

    def test_rejects_nonlinear_last_variable(self):
        H = parse("1 + x + y + z^2", VARS3)
        with pytest.raises(ValueError):
            paraboloid_probe(H)


class TestCrossCheck:
    def test_pinched_edge_curves_agree(self, pinched_edge):
        report = analyze(pinched_edge, VARS3)
        curves = [
            (witness_curve(["1+t", "t", "t+t^2"]), (-2, -1, 1)),
            (witness_curve(["1+2*t", "t", "t+4*t^2"]), None),
            (witness_curve(["1+t", "t^2", "2*t^2"]), None),
        ]
        discrepancies, estimates = cross_check(report, curves)
        assert discrepancies == []
        assert all(e is not None for e in estimates)

    def test_generic_curves_stay_face_parallel(self, quadrilateral):
        report = analyze(quadrilateral, VARS2)

        def on_variety(t):
            x = -1 + t
            y = (-1 - x - x * x) / (x * (1 + x))
            return (x, y)

        discrepancies, _ = cross_check(report, [(on_variety, None)])
        assert discrepancies == []

    def test_wrong_direction_set_is_flagged(self, pinched_edge):
        from dataclasses import replace

        report = analyze(pinched_edge, VARS3)
        bad = next(v for v in report.verdicts if not v.generic)
        wrong = replace(
            bad, directions=DirectionSet.subspace([(0, 1, 0), (0, 0, 1)])
        )
        verdicts = tuple(
            wrong if v.face_id == bad.face_id else v for v in report.verdicts
        )
        fixture = replace(report, verdicts=verdicts)
        discrepancies, _ = cross_check(
            fixture, [(witness_curve(["1+t", "t", "t+t^2"]), None)]
        )
        assert len(discrepancies) == 1
        assert discrepancies[0]["kind"] == "direction_outside_set"

    def test_off_variety_curve_reported(self, pinched_edge):
        report = analyze(pinched_edge, VARS3)
        discrepancies, estimates = cross_check(
            report, [(witness_curve(["1+t", "t", "t"]), None)]
        )
        assert discrepancies[0]["kind"] == "off_variety"
        assert estimates == [None]


def test_curves_from_json_formats():
    single = {"vars": ["x", "y", "z"], "maps": ["1+t", "t", "t+t^2"],
              "r": [-2, -1, 1]}
    curves = curves_from_json(single)
    assert len(curves) == 1 and curves[0][1] == (-2, -1, 1)
    wrapped = {"curves": [single, {"maps": ["t", "t"]}]}
    curves = curves_from_json(wrapped)
    assert len(curves) == 2 and curves[1][1] is None
    as_list = curves_from_json([single])
    assert as_list[0][0].dimension == 3
