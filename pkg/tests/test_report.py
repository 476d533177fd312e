import json

import pytest

from mirror_hodge.algebra import BiPoly
from mirror_hodge.errors import ParameterError
from mirror_hodge.report import (
    MirrorReport,
    emit,
    first_difference,
    mirror_check,
    parse_report,
    poly_from_json,
    stability_audit,
    sweep,
    torsion_audit,
)

U, V = BiPoly.u(), BiPoly.v()


class TestMirrorCheck:
    def test_r2_g2(self):
        rep = mirror_check(2, 1, 1, 2)
        assert rep.verdict == "equal" and rep.ok
        assert rep.common == BiPoly({(4, 3): -15, (3, 4): -15})
        assert rep.first_diff is None
        assert rep.scope.startswith("full")

    def test_r3(self):
        rep = mirror_check(3, 1, 2, 2)
        assert rep.ok
        assert rep.common == (-U - V + U * V - U * U * V - U * V * V).shift(8, 8) * 80

    def test_g1(self):
        for r in (2, 3, 5):
            rep = mirror_check(r, 1, r - 1, 1)
            assert rep.ok and rep.common.is_zero()
            assert rep.warnings

    def test_higher_prime_label(self):
        rep = mirror_check(5, 2, 3, 2)
        assert rep.ok and "open" in rep.scope

    def test_parameter_errors(self):
        for args in [(4, 1, 1, 2), (3, 3, 1, 2), (3, 1, 6, 2), (3, 1, 1, 0)]:
            with pytest.raises(ParameterError):
                mirror_check(*args)

    def test_mismatch_verdict(self):
        rep = mirror_check(2, 1, 1, 2)
        rep.polys["pgl_raw"] = rep.polys["pgl_raw"] + U
        # rebuild the verdict as mirror_check would
        diff = first_difference(rep.polys["sl_enum"], rep.polys["pgl_raw"])
        assert diff == ((1, 0), 0, 1)


class TestSerialization:
    def test_json_schema(self):
        rep = mirror_check(2, 1, 1, 2)
        obj = json.loads(emit(rep, "json"))
        assert obj["params"] == {"r": 2, "d": 1, "e": 1, "g": 2}
        assert set(obj["polynomials"]) == {"sl_enum", "sl_filter", "pgl_closed", "pgl_raw"}
        assert obj["polynomials"]["sl_enum"] == {
            "vars": ["u", "v"],
            "terms": [{"e": [3, 4], "c": "-15"}, {"e": [4, 3], "c": "-15"}],
        }
        assert obj["verdict"] == "equal" and obj["first_diff"] is None
        assert all(c["pass"] for c in obj["checks"])
        assert obj["timing_ms"] == {}

    def test_timing_optional(self):
        rep = mirror_check(2, 1, 1, 3)
        obj = json.loads(emit(rep, "json", include_timing=True))
        assert set(obj["timing_ms"]) >= {"sl_enum", "sl_filter", "pgl_closed", "pgl_raw"}

    def test_round_trip(self):
        rep = mirror_check(3, 1, 1, 2)
        data = emit(rep, "json")
        back = parse_report(data)
        assert back.polys == rep.polys
        assert emit(back, "json") == data

    def test_byte_identical_reruns(self):
        assert emit(mirror_check(3, 2, 1, 3)) == emit(mirror_check(3, 2, 1, 3))

    def test_text(self):
        out = emit(mirror_check(2, 1, 1, 2), "text").decode()
        assert "EQUAL" in out and "-15*u^4*v^3 - 15*u^3*v^4" in out

    def test_poly_json_validation(self):
        with pytest.raises(ParameterError):
            poly_from_json({"vars": ["x", "y"], "terms": []})
        with pytest.raises(ParameterError):
            poly_from_json({"vars": ["u", "v"], "terms": [{"e": [0, 0], "c": "0"}]})
        with pytest.raises(ParameterError):
            poly_from_json({"vars": ["u", "v"], "terms": [{"e": [0, 0], "c": "1"}, {"e": [0, 0], "c": "2"}]})


class TestSweep:
    def test_r2(self):
        res = sweep([2], range(2, 6), [1], [1])
        assert len(res.reports) == 4 and res.exit_code == 0
        assert res.summary == {"total": 4, "equal": 4, "mismatch": 0, "errors": 0}

    def test_empty(self):
        res = sweep([], range(2, 4))
        assert res.reports == [] and res.exit_code == 0
        assert sweep([3], []).reports == []

    def test_r3_dependence(self):
        res = sweep([3], range(2, 4), [1, 2], [1, 2])
        assert len(res.reports) == 8 and res.exit_code == 0
        assert all(c.passed for c in res.consistency)
        for g in (2, 3):
            polys = {rep.common for rep in res.reports if rep.g == g}
            assert len(polys) == 1

    def test_deterministic_order_under_parallelism(self):
        serial = sweep([2, 3], [2, 3], None, None, parallelism=1)
        parallel = sweep([2, 3], [2, 3], None, None, parallelism=3)
        assert [emit(r) for r in serial.reports] == [emit(r) for r in parallel.reports]
        assert [(r.r, r.g, r.d, r.e) for r in serial.reports] == [
            (2, 2, 1, 1), (2, 3, 1, 1),
            (3, 2, 1, 1), (3, 2, 1, 2), (3, 2, 2, 1), (3, 2, 2, 2),
            (3, 3, 1, 1), (3, 3, 1, 2), (3, 3, 2, 1), (3, 3, 2, 2),
        ]

    def test_errors_aggregated(self):
        res = sweep([3, 4], [2], [1, 3], [1])
        assert len(res.reports) == 1
        assert len(res.errors) == 3 and all(e.kind == "parameter" for e in res.errors)
        assert res.exit_code == 2

    def test_env_jobs(self, monkeypatch):
        monkeypatch.setenv("MIRROR_HODGE_JOBS", "2")
        assert sweep([2], [2, 3], None, None, parallelism=None).exit_code == 0
        monkeypatch.setenv("MIRROR_HODGE_JOBS", "zero")
        with pytest.raises(ParameterError):
            sweep([2], [2], parallelism=None)


class TestAudits:
    @pytest.mark.parametrize("r,g,d,n", [(2, 2, 1, 1), (2, 3, 1, 2), (3, 2, 1, 3)])
    def test_stability(self, r, g, d, n):
        audit = stability_audit(r, g, d)
        assert audit.ok and audit.total == audit.passed == n

    def test_torsion_full(self):
        audit = torsion_audit(2, 2)
        assert audit.mode == "full" and audit.ok
        assert all(h == {0: 8, 1: 8} for h in audit.histograms)
        audit = torsion_audit(3, 2)
        assert audit.ok and all(h == {0: 27, 1: 27, 2: 27} for h in audit.histograms)

    def test_torsion_reduced_only(self):
        audit = torsion_audit(2, 11)
        assert audit.mode == "reduced-only" and audit.ok
        assert audit.histograms == [] and "exceeds cap" in audit.note
