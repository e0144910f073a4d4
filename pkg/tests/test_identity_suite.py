"""Tests for the identity catalog and its evaluator."""

import dataclasses
from unittest.mock import patch

import pytest

from src.errors import ConfigError, EvaluationError, FrameError, JetOrderError
from src.models.model_library import build_model, sample_points
from src.services.identity_catalog import CATALOG, Sample, get_identity, identity_ids
from src.services.identity_suite import (
    ERROR,
    FAIL,
    INAPPLICABLE,
    PASS,
    VACUOUS,
    Cor26Verdict,
    _quadrature_nodes,
    contact_classify,
    cor26_verdict,
    evaluate_identity,
    integral_check_136,
    run_catalog,
)

GENERIC = ["RUMMLER", "MAIN_113", "DKAPPA_LEAFDIV", "KAPPA_BRACKET", "DIV_SPLIT", "DELTA_KAPPA_REMARK"]


def _by_id(reports):
    return {r.identity: r for r in reports}


class TestCatalog:
    """Test cases for catalog entries."""

    def test_ids_are_unique(self):
        """Every id appears once and the catalog is large enough to matter."""
        ids = identity_ids()
        assert len(ids) == len(set(ids))
        assert len(ids) >= 20

    def test_anchor_tags(self):
        """The main identity carries its equation tag."""
        assert "(1.13)" in get_identity("MAIN_113").anchor
        assert all(identity.anchor for identity in CATALOG)

    def test_unknown_identity(self):
        """Unknown ids raise ConfigError."""
        with pytest.raises(ConfigError):
            get_identity("NOSUCH")


class TestPassingModels:
    """Test cases where every applicable identity holds."""

    def test_hopf_suite(self, hopf):
        """The round S³ passes; τ = 0 makes the τ-normalized checks vacuous."""
        reports = _by_id(run_catalog(hopf, count=3))
        assert all(r.verdict in (PASS, VACUOUS, INAPPLICABLE) for r in reports.values())
        assert reports["EINSTEIN_25_26"].verdict == VACUOUS
        assert reports["COR26_VERDICT"].verdict == INAPPLICABLE
        assert reports["ONEILL_V"].verdict == PASS
        assert reports["CONTACT_CLASS"].detail["classification"] == "contact"

    def test_flat_torus_suite(self, flat_torus):
        """Every applicable identity passes or is vacuous on the flat torus."""
        reports = run_catalog(flat_torus, count=3)
        assert all(r.passed or r.verdict == INAPPLICABLE for r in reports)
        assert _by_id(reports)["COR26_VERDICT"].verdict == VACUOUS

    def test_conformal_torus_suite(self, conformal_torus):
        """Basic-κ, co-closedness and O'Neill checks pass on the conformal torus."""
        ids = [
            "TILDE_DELTA", "LEMMA22_A", "DIV_SPLIT", "COCLOSED_V", "COCLOSED_MIXED", "COCLOSED_HH",
            "ONEILL_II", "ONEILL_IV", "KILLING_21",
        ]
        reports = _by_id(run_catalog(conformal_torus, count=3, ids=ids))
        for identity_id in ids:
            assert reports[identity_id].verdict == PASS, identity_id

    def test_conformal_torus_proposition_needs_constant_curvature(self, conformal_torus):
        """Without a constant c the proposition is inapplicable, though its conclusions happen to hold."""
        points = sample_points(conformal_torus, 3)
        for identity_id in ("PROP24_A", "PROP24_B", "PROP24_C"):
            report = evaluate_identity(conformal_torus, identity_id, points)
            assert report.verdict == INAPPLICABLE
            assert report.detail["reasons"] == ["no constant curvature"]
            ungated = evaluate_identity(conformal_torus, identity_id, points, enforce_gate=False)
            assert ungated.verdict == PASS, identity_id

    def test_twisted_base_bundle_like_identities(self, twisted_base):
        """The bundle-like twisted flow satisfies the co-closedness and O'Neill checks."""
        ids = ["COCLOSED_V", "TILDE_DELTA", "ONEILL_I", "ONEILL_III", "ONEILL_V", "A_SKEW", "FLOW_RICCI"]
        reports = _by_id(run_catalog(twisted_base, count=3, ids=ids))
        for identity_id in ids:
            assert reports[identity_id].verdict == PASS, identity_id

    def test_twisted_base_proposition_is_inapplicable(self, twisted_base):
        """Basic κ alone does not admit the proposition on a curved bundle-like flow."""
        report = evaluate_identity(twisted_base, "PROP24_C", sample_points(twisted_base, 2))
        assert report.verdict == INAPPLICABLE
        assert "no constant curvature" in report.detail["reasons"]

    def test_killing_identity_on_twisted_base(self, twisted_base):
        """The vertical Killing defect of A_XY is −dκ(X,Y)/p times g on a curved bundle-like flow."""
        report = evaluate_identity(twisted_base, "KILLING_21", sample_points(twisted_base, 4))
        assert report.verdict == PASS
        assert report.relative_residual is not None
        # the anchor's right side g(U,V)dκ(X,Y) has the opposite sign here
        assert report.detail["anchor_residual"] > 1e-3

    def test_oneill_equations_after_rescaling(self, twisted_base):
        """The O'Neill equations still hold for the constant multiple 4g."""
        scaled = twisted_base.with_metric(twisted_base.metric.scaled(2.0))
        ids = ["ONEILL_I", "ONEILL_II", "ONEILL_III", "ONEILL_IV", "ONEILL_V"]
        reports = _by_id(run_catalog(scaled, count=3, ids=ids))
        for identity_id in ids:
            assert reports[identity_id].verdict == PASS, identity_id


class TestTwistedFlow:
    """Test cases on the non-bundle-like twisted flow."""

    def test_generic_identities_hold(self, twisted):
        """Identities for arbitrary foliations hold without bundle-like metrics."""
        reports = _by_id(run_catalog(twisted, count=3, ids=GENERIC))
        for identity_id in GENERIC:
            assert reports[identity_id].verdict == PASS, identity_id

    def test_coclosed_gate(self, twisted):
        """COCLOSED_V is inapplicable and says why."""
        report = evaluate_identity(twisted, "COCLOSED_V", sample_points(twisted, 2))
        assert report.verdict == INAPPLICABLE
        assert report.max_residual is None
        assert any("bundle-like" in reason for reason in report.detail["reasons"])

    def test_leaf_equations_hold_off_bundle_like(self, twisted):
        """The Gauss and Codazzi equations of the leaves need no bundle-like metric."""
        ids = ["ONEILL_I", "ONEILL_II", "ONEILL_III", "ONEILL_IV"]
        reports = _by_id(run_catalog(twisted, count=3, ids=ids))
        assert reports["ONEILL_I"].verdict == PASS
        assert reports["ONEILL_II"].verdict == PASS
        assert reports["ONEILL_III"].verdict == INAPPLICABLE
        assert reports["ONEILL_IV"].verdict == INAPPLICABLE

    def test_a_skew_negative_control(self, twisted):
        """With the gate disabled, A fails to be skew on a non-bundle-like metric."""
        report = evaluate_identity(
            twisted, "A_SKEW", sample_points(twisted, 3), enforce_gate=False
        )
        assert report.verdict == FAIL
        assert report.max_residual > 1e-3


class TestUmbilicalConstant:
    """Test cases for the g(τ,τ) constant on umbilical bundle-like models."""

    def test_horosphere_matches_p_squared(self, horosphere):
        """g(τ,τ) = 4 = −p²qc, not −pqc = 2."""
        verdict = cor26_verdict(horosphere, sample_points(horosphere, 4))
        assert verdict.applicable
        assert verdict.g_tau_tau == pytest.approx(4.0)
        assert verdict.minus_pqc == pytest.approx(2.0)
        assert verdict.minus_p2qc == pytest.approx(4.0)
        assert verdict.matches == "-p^2qc"
        report = verdict.to_report()
        assert report.verdict == PASS

    def test_flow_horosphere_matches_both(self, horosphere_flow):
        """For p = 1 the two constants coincide."""
        verdict = cor26_verdict(horosphere_flow, sample_points(horosphere_flow, 3))
        assert verdict.matches == "both"

    def test_inapplicable_without_vanishing_a(self, hopf):
        """The Hopf flow has A ≠ 0."""
        assert not cor26_verdict(hopf).applicable

    def test_reported_residual_is_the_closer_constant(self, horosphere):
        """The report passes with the residual of whichever constant matches."""
        report = cor26_verdict(horosphere, sample_points(horosphere, 3)).to_report()
        assert report.max_residual <= 1e-8
        assert report.detail["matches"] == "-p^2qc"

    def test_neither_constant_fails(self):
        """g(τ,τ) away from both constants fails."""
        verdict = Cor26Verdict(
            "horosphere", True, g_tau_tau=3.0, minus_pqc=2.0, minus_p2qc=4.0, matches="neither",
            max_residual=1.0,
        )
        assert verdict.to_report().verdict == FAIL


class TestHorosphere:
    """Test cases for hyperbolic space foliated by horospheres."""

    EXPECTED_PASS = [
        "CODIM1_COCLOSED", "DIVH_24", "KILLING_21", "LEMMA22_A", "LEMMA22_B", "PROP24_A", "PROP24_B",
        "PROP24_C", "EINSTEIN_25_26", "COR26_VERDICT", "ONEILL_I", "ONEILL_II", "CONST_CURVATURE",
    ]

    @pytest.mark.parametrize("p", [2, 3])
    def test_applicable_identities_hold(self, p):
        """Constant-curvature identities pass for p = 2 and p = 3 and nothing fails."""
        model = build_model("horosphere", {"p": p})
        reports = _by_id(run_catalog(model, count=2))
        for identity_id in self.EXPECTED_PASS:
            assert reports[identity_id].verdict == PASS, identity_id
        assert all(r.verdict in (PASS, VACUOUS, INAPPLICABLE) for r in reports.values())
        assert reports["COR26_VERDICT"].detail["g_tau_tau"] == pytest.approx(p * p)

    def test_einstein_core_is_always_measured(self, horosphere):
        """The core (λ − (q−1)c) g(τ,τ) is reported from the transverse Ricci values."""
        points = sample_points(horosphere, 2)

        def unit_ricci(model, E, F, x):
            return model.metric.inner_at(E, F, x)

        with patch("src.services.identity_catalog.transverse_ricci", side_effect=unit_ricci):
            report = evaluate_identity(horosphere, "EINSTEIN_25_26", points)
        assert report.detail["einstein_defect"] == pytest.approx(0.0, abs=1e-12)
        assert report.detail["core_residual"] == pytest.approx(4.0)
        assert report.verdict == FAIL

        plain = evaluate_identity(horosphere, "EINSTEIN_25_26", points)
        assert plain.verdict == PASS
        assert plain.detail["core_residual"] == pytest.approx(0.0, abs=1e-8)


class TestIntegral:
    """Test cases for the periodic integral identity."""

    def test_conformal_torus_integral(self, conformal_torus):
        """∫ g(τ,τ) = ∫ div_H τ at the default resolution."""
        report = integral_check_136(conformal_torus)
        assert report.verdict == PASS
        assert report.detail["integral_g_tau_tau"] > 0

    def test_error_shrinks_with_resolution(self, conformal_torus):
        """The quadrature difference decreases as the grid is refined."""
        errors = [
            integral_check_136(conformal_torus, n).detail["absolute_difference"] for n in (4, 8, 16)
        ]
        assert errors[0] > errors[1] > errors[2]

    def test_fine_grids_stay_inside_the_chart(self, conformal_torus):
        """Quadrature nodes respect the chart margin even when a half step is smaller."""
        nodes = [x for x, _ in _quadrature_nodes(conformal_torus, 5000)]
        assert len(nodes) == 5000
        assert all(conformal_torus.domain.contains(x) for x in nodes)

    def test_non_periodic_is_inapplicable(self, hopf):
        """The integral check is gated on periodic charts."""
        assert evaluate_identity(hopf, "INTEGRAL_136", []).verdict == INAPPLICABLE


class TestContact:
    """Test cases for the contact classification."""

    def test_hopf_is_contact(self, hopf):
        """The Hopf horizontal distribution is a contact structure."""
        result = contact_classify(hopf, sample_points(hopf, 3))
        assert result.classification == "contact"

    def test_flat_torus_is_integrable(self, flat_torus):
        """The flat torus horizontal distribution is integrable."""
        assert contact_classify(flat_torus, sample_points(flat_torus, 3)).classification == "integrable"

    def test_wrong_dimension(self, horosphere):
        """Leaves of dimension 2 are out of scope."""
        assert contact_classify(horosphere).classification == INAPPLICABLE


class TestEvaluator:
    """Test cases for skipping, errors and determinism."""

    def test_skips_are_counted(self, hopf):
        """A single degenerate point is skipped and counted."""
        identity = get_identity("T_SYMMETRY")
        points = sample_points(hopf, 10)

        def flaky(ctx, x, rng):
            if x == points[0]:
                raise FrameError("degenerate")
            return Sample(0.0)

        with patch(
            "src.services.identity_suite.get_identity",
            return_value=dataclasses.replace(identity, residual=flaky),
        ):
            report = evaluate_identity(hopf, "T_SYMMETRY", points)
        assert report.skipped == 1
        assert report.points == 9

    def test_too_many_skips(self, hopf):
        """More than a fifth of skipped points is an evaluation error."""
        identity = get_identity("T_SYMMETRY")

        def broken(ctx, x, rng):
            raise FrameError("degenerate")

        replaced = dataclasses.replace(identity, residual=broken)
        with patch("src.services.identity_suite.get_identity", return_value=replaced):
            with pytest.raises(EvaluationError):
                evaluate_identity(hopf, "T_SYMMETRY", sample_points(hopf, 5))
            reports = run_catalog(hopf, count=3, ids=["T_SYMMETRY"])
        assert reports[0].verdict == ERROR

    def test_engine_errors_become_error_verdicts(self, hopf):
        """A jet-order failure inside a residual is reported, not raised."""
        identity = get_identity("T_SYMMETRY")

        def underived(ctx, x, rng):
            raise JetOrderError("no derivatives left")

        replaced = dataclasses.replace(identity, residual=underived)
        with patch("src.services.identity_suite.get_identity", return_value=replaced):
            reports = run_catalog(hopf, count=3, ids=["T_SYMMETRY"])
        assert reports[0].verdict == ERROR
        assert "no derivatives left" in reports[0].detail["error"]

    def test_deterministic_reports(self, twisted):
        """Same seed, same reports."""
        first = [r.as_dict() for r in run_catalog(twisted, seed=5, count=2, ids=["RUMMLER", "T_SYMMETRY"])]
        second = [r.as_dict() for r in run_catalog(twisted, seed=5, count=2, ids=["RUMMLER", "T_SYMMETRY"])]
        assert first == second
