"""Verification module: result plumbing, check verdicts, oracle wiring."""

from fractions import Fraction

import pytest

import spinsym.checks as checks
from spinsym.checks import (CheckReport, CheckResult, LIE_SUITE_SPECS,
                            MODEL_CHECK_NAMES, check_appendix_f,
                            check_conservation, check_lambda_solver,
                            check_level_relations, check_pq_identities,
                            check_serre_halfloop, check_serre_yangian,
                            oracle_crosscheck, run_lie_suite, run_model_suite,
                            solve_lambda)
from spinsym.errors import ConventionMismatchError
from spinsym.exact import RationalFunction
from spinsym.lie import AlgebraSpec
from spinsym.models import ModelSpec

F = Fraction

SP2 = AlgebraSpec(2, -1)
SO3 = AlgebraSpec(3, 1)
SO4 = AlgebraSpec(4, 1)


def make(name="demo", status="pass", witness=(), notes=(), millis=5):
    return CheckResult(name, (("algebra", "sp(2)"),), status, millis,
                       witness, notes)


class TestResultPlumbing:
    def test_status_validated(self):
        with pytest.raises(ValueError):
            make(status="maybe")

    def test_fail_requires_witness(self):
        with pytest.raises(ValueError):
            make(status="fail")
        make(status="fail", witness=("residue",))  # fine

    def test_to_dict_shapes(self):
        r = make(witness=(), notes=("checked",))
        d = r.to_dict()
        assert list(d) == ["name", "params", "status", "millis", "witness",
                           "notes"]
        assert d["params"] == {"algebra": "sp(2)"}
        assert d["millis"] == 5
        assert r.to_dict(zero_millis=True)["millis"] == 0

    def test_report_counts_and_order(self):
        rep = CheckReport.build([make("b"), make("a", status="error"),
                                 make("c", status="fail",
                                      witness=("w",))])
        assert [r.name for r in rep.results] == ["a", "b", "c"]
        assert rep.counts == {"pass": 1, "fail": 1, "skipped": 0,
                              "error": 1, "total": 3}
        assert not rep.ok

    def test_payload_schema(self):
        rep = CheckReport.build([make()])
        payload = rep.to_payload({"subcommand": "model"})
        assert list(payload) == ["spec", "checks", "summary",
                                 "engine_version"]
        assert list(payload["summary"]) == ["pass", "fail", "skipped",
                                            "error", "total", "ok"]

    def test_text_summary_line(self):
        rep = CheckReport.build([make()])
        text = rep.to_text(zero_millis=True)
        assert "[PASS   ] demo (algebra=sp(2)) 0 ms" in text
        assert text.endswith("summary: 1 pass, 0 fail, 0 skipped, "
                             "0 error (ok)")

    def test_merged(self):
        rep = CheckReport.build([make("a")]).merged(
            CheckReport.build([make("b")]))
        assert [r.name for r in rep.results] == ["a", "b"]

    def test_oracle_alarm_flag(self):
        quiet = CheckReport.build([make()])
        assert not quiet.oracle_alarm
        loud = CheckReport.build([make(
            status="fail", witness=("w",),
            notes=("ORACLE DISAGREEMENT: engine bug",))])
        assert loud.oracle_alarm

    def test_convention_mismatch_maps_to_fail(self):
        def body():
            raise ConventionMismatchError("needs multiplier 4",
                                          diagnostics=("triple (1,1)",))
        r = checks._run("demo", (), body)
        assert r.status == "fail"
        assert r.witness == ("triple (1,1)",)
        assert "multiplier 4" in r.notes[0]


class TestLieSuite:
    @pytest.mark.parametrize("n,theta0", LIE_SUITE_SPECS,
                             ids=lambda v: str(v))
    def test_all_specs_pass(self, n, theta0):
        rep = run_lie_suite(AlgebraSpec(n, theta0))
        assert rep.ok, rep.to_text()
        assert {r.name for r in rep.results} == {
            "lie-closure", "lie-jacobi", "lie-generator-symmetry",
            "metric-symmetric", "metric-invertible", "metric-ad-invariant",
            "coupling-weight-unity"}

    def test_degenerate_weight_skipped(self):
        r = check_appendix_f(SO4)
        assert r.status == "skipped"
        assert "critical coupling undefined" in r.notes[0]

    def test_jobs_do_not_change_verdicts(self):
        serial = run_lie_suite(SO3, jobs=1)
        threaded = run_lie_suite(SO3, jobs=4)
        assert serial.to_payload(zero_millis=True) == \
            threaded.to_payload(zero_millis=True)


class TestConservation:
    def test_calogero_star_passes(self):
        ms = ModelSpec(SO3, 3, "calogero", lam="star")
        level0, level1 = check_conservation(ms)
        assert level0.status == "pass"
        assert "coupling left symbolic" in level0.notes
        assert level1.status == "pass"

    def test_detuned_coupling_fails_with_witness(self):
        # star + 1 breaks level-1 conservation
        ms = ModelSpec(SO3, 3, "calogero", lam=F(-1))
        _, level1 = check_conservation(ms)
        assert level1.status == "fail"
        assert level1.witness

    def test_level_relations_hold_at_any_coupling(self):
        for lam in ("star", F(1), "symbolic"):
            ms = ModelSpec(SP2, 3, "sutherland", lam=lam)
            r0, r1 = check_level_relations(ms)
            assert r0.status == "pass" and r1.status == "pass", lam


class TestSerre:
    def test_halfloop_passes(self):
        ms = ModelSpec(SP2, 3, "calogero", lam="star")
        r = check_serre_halfloop(ms)
        assert r.status == "pass"
        assert any("nonzero cyclic pieces" in n for n in r.notes)

    def test_halfloop_needs_rational_model(self):
        ms = ModelSpec(SP2, 3, "sutherland", lam="star")
        assert check_serre_halfloop(ms).status == "error"

    def test_yangian_passes_and_reports_rank_one_degeneracy(self):
        ms = ModelSpec(SP2, 3, "sutherland", lam="star")
        r = check_serre_yangian(ms)
        assert r.status == "pass"
        assert any("degenerate for a three-dimensional algebra" in n
                   for n in r.notes)

    def test_yangian_needs_cubic_model(self):
        ms = ModelSpec(SP2, 3, "calogero", lam="star")
        assert check_serre_yangian(ms).status == "error"


class TestSolver:
    def test_requires_symbolic(self):
        with pytest.raises(ValueError):
            solve_lambda(ModelSpec(SP2, 3, "calogero", lam="star"))

    @pytest.mark.parametrize("kind", ("calogero", "sutherland"))
    def test_sp2_root(self, kind):
        ms = ModelSpec(SP2, 3, kind, lam="symbolic")
        assert solve_lambda(ms) == {F(1, 3)}

    def test_degenerate_algebra_has_no_root(self):
        ms = ModelSpec(SO4, 3, "calogero", lam="symbolic")
        assert solve_lambda(ms) == set()
        r = check_lambda_solver(ms)
        assert r.status == "pass"
        assert any("degenerate" in n for n in r.notes)

    def test_check_notes_record_exclusion(self):
        ms = ModelSpec(SP2, 3, "calogero", lam="symbolic")
        r = check_lambda_solver(ms)
        assert r.status == "pass"
        assert "trivial non-interacting root 0 excluded" in r.notes
        assert "roots: 1/3" in r.notes

    def test_weak_site_count_flagged(self):
        ms = ModelSpec(SP2, 2, "calogero", lam="symbolic")
        r = check_lambda_solver(ms)
        assert any("weak run" in n for n in r.notes)


class TestSpinIdentityChecks:
    def test_sp2_all_pass(self):
        results = check_pq_identities(SP2)
        assert {r.name for r in results} == {
            "spin-dense-bridge", "spin-exchange-square", "spin-twist-square",
            "spin-exchange-twist-product", "spin-twist-exchange-product",
            "spin-pair-difference", "spin-exchange-swap", "spin-twist-swap"}
        assert all(r.status == "pass" for r in results)


class TestOracle:
    def test_deterministic_given_seed(self):
        ms = ModelSpec(SP2, 3, "sutherland", lam="star")
        a = oracle_crosscheck(ms, trials=5, seed=7)
        b = oracle_crosscheck(ms, trials=5, seed=7)
        assert a.to_dict(zero_millis=True) == b.to_dict(zero_millis=True)

    def test_trials_recorded_in_params(self):
        ms = ModelSpec(SP2, 2, "calogero", lam="star")
        r = oracle_crosscheck(ms, trials=4, seed=3)
        params = dict(r.params)
        assert params["trials"] == "4" and params["seed"] == "3"
        assert r.status == "pass"

    def test_detuned_targets_are_excluded_not_failed(self):
        # at star+1 conservation is symbolically nonzero; the oracle must
        # replay only proven identities and note the exclusions
        ms = ModelSpec(SP2, 2, "calogero", lam=F(4, 3))
        r = oracle_crosscheck(ms, trials=3, seed=1)
        assert r.status == "pass"
        assert any("excluded" in n for n in r.notes)

    def test_needs_a_trial(self):
        ms = ModelSpec(SP2, 2, "calogero", lam="star")
        with pytest.raises(ValueError):
            oracle_crosscheck(ms, trials=0)

    def test_disagreement_raises_alarm(self, monkeypatch):
        # corrupt one target: claim a nonzero defect is symbolically zero
        one = RationalFunction.const(2, 1)

        def lying_targets(spec):
            def defect(vec):
                return {(1, 1): one}
            return [checks._OracleTarget("planted inconsistency", defect,
                                         True)]

        monkeypatch.setattr(checks, "_spin_targets", lying_targets)
        ms = ModelSpec(SP2, 2, "calogero", lam="star")
        r = oracle_crosscheck(ms, trials=2, seed=1)
        assert r.status == "fail"
        assert r.notes[0].startswith("ORACLE DISAGREEMENT")
        assert "planted inconsistency" in r.witness[0]
        assert CheckReport.build([r]).oracle_alarm


class TestModelSuite:
    def test_default_check_names(self):
        ms = ModelSpec(SP2, 2, "calogero", lam="star")
        rep = run_model_suite(ms, trials=2)
        names = {r.name for r in rep.results}
        assert names == {"conservation-level0", "conservation-level1",
                         "level-relation-0", "level-relation-1",
                         "serre-halfloop", "oracle-crosscheck"}
        assert rep.ok

    def test_serre_dispatch_by_model(self):
        ms = ModelSpec(SP2, 2, "sutherland", lam="star")
        rep = run_model_suite(ms, checks=("serre",))
        assert [r.name for r in rep.results] == ["serre-yangian"]

    def test_unknown_check_rejected(self):
        ms = ModelSpec(SP2, 2, "calogero", lam="star")
        with pytest.raises(ValueError):
            run_model_suite(ms, checks=("serre", "spectrum"))

    def test_solver_opt_in(self):
        ms = ModelSpec(SP2, 3, "calogero", lam="symbolic")
        rep = run_model_suite(ms, checks=("solve-lambda",))
        assert [r.name for r in rep.results] == ["coupling-solver"]
        assert rep.ok

    def test_parallel_matches_serial(self):
        ms = ModelSpec(SP2, 2, "sutherland", lam="star")
        serial = run_model_suite(ms, jobs=1, trials=3)
        threaded = run_model_suite(ms, jobs=3, trials=3)
        assert serial.to_payload(zero_millis=True) == \
            threaded.to_payload(zero_millis=True)
