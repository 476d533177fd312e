"""Verification driver: one (r, d, e, g) mirror check, parameter sweeps,
audits, and canonical text/JSON serialization."""

from __future__ import annotations

import json
import os
import random
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .algebra import BiPoly, format_text
from .errors import InvariantViolation, MirrorError, ParameterError
from .pgl import DegenerateGenusWarning, check_params, pgl_variant_closed, pgl_variant_raw
from .sl import (
    check_stability,
    enumerate_mtuples,
    reconstruct_degrees,
    sl_variant_enum,
    sl_variant_filter,
)
from .torsion import (
    DEFAULT_CAP,
    TorsionGroup,
    character_average,
    pairing_value_counts,
    weil_pairing,
)

POLY_NAMES = ("sl_enum", "sl_filter", "pgl_closed", "pgl_raw")

SCOPE_FULL = "full mirror identity (type (1,...,1) components carry all variant cohomology at r=2,3)"
SCOPE_PARTIAL = "type-(1,...,1) vs Prym identity; full conjecture open"


# ---------------------------------------------------------------------------
# polynomial JSON encoding
# ---------------------------------------------------------------------------


def poly_to_json(p: BiPoly) -> dict:
    return {"vars": ["u", "v"], "terms": [{"e": [a, b], "c": str(c)} for (a, b), c in p.items()]}


def poly_from_json(obj: dict) -> BiPoly:
    if obj.get("vars") != ["u", "v"]:
        raise ParameterError(f"unsupported variable list {obj.get('vars')!r}")
    terms = {}
    for t in obj["terms"]:
        a, b = t["e"]
        key = (int(a), int(b))
        if key in terms:
            raise ParameterError(f"duplicate exponent {key}")
        c = int(t["c"])
        if c == 0:
            raise ParameterError(f"zero coefficient stored at {key}")
        terms[key] = c
    return BiPoly(terms)


def _dumps(obj: Any) -> bytes:
    return (json.dumps(obj, indent=2, ensure_ascii=True) + "\n").encode("ascii")


def emit_poly(p: BiPoly, fmt: str = "json") -> bytes:
    if fmt == "json":
        return _dumps(poly_to_json(p))
    return (format_text(p) + "\n").encode("ascii")


# ---------------------------------------------------------------------------
# mirror check
# ---------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool


@dataclass
class MirrorReport:
    r: int
    d: int
    e: int
    g: int
    polys: dict[str, BiPoly]
    verdict: str
    first_diff: tuple[tuple[int, int], int, int] | None
    checks: list[Check]
    scope: str
    warnings: list[str] = field(default_factory=list)
    timing_ms: dict[str, float] = field(default_factory=dict)

    @property
    def common(self) -> BiPoly | None:
        return self.polys["sl_enum"] if self.verdict == "equal" else None

    @property
    def ok(self) -> bool:
        return self.verdict == "equal" and all(c.passed for c in self.checks)

    def to_json(self, include_timing: bool = False) -> dict:
        fd = None
        if self.first_diff is not None:
            (a, b), lhs, rhs = self.first_diff
            fd = {"e": [a, b], "lhs": str(lhs), "rhs": str(rhs)}
        return {
            "params": {"r": self.r, "d": self.d, "e": self.e, "g": self.g},
            "polynomials": {k: poly_to_json(self.polys[k]) for k in POLY_NAMES},
            "verdict": self.verdict,
            "first_diff": fd,
            "checks": [{"name": c.name, "pass": c.passed} for c in self.checks],
            "timing_ms": {k: round(v, 3) for k, v in self.timing_ms.items()} if include_timing else {},
            "scope": self.scope,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_json(cls, obj: dict) -> MirrorReport:
        p = obj["params"]
        fd = obj["first_diff"]
        return cls(
            r=p["r"], d=p["d"], e=p["e"], g=p["g"],
            polys={k: poly_from_json(obj["polynomials"][k]) for k in POLY_NAMES},
            verdict=obj["verdict"],
            first_diff=None if fd is None else (tuple(fd["e"]), int(fd["lhs"]), int(fd["rhs"])),
            checks=[Check(c["name"], c["pass"]) for c in obj["checks"]],
            scope=obj.get("scope", ""),
            warnings=list(obj.get("warnings", [])),
            timing_ms=dict(obj.get("timing_ms", {})),
        )

    def to_text(self, include_timing: bool = False) -> str:
        lines = [f"mirror check r={self.r} d={self.d} e={self.e} g={self.g}: {self.verdict.upper()}"]
        lines.append(f"  scope: {self.scope}")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        if self.verdict == "equal":
            lines.append(f"  polynomial: {format_text(self.polys['sl_enum'])}")
        else:
            for k in POLY_NAMES:
                lines.append(f"  {k}: {format_text(self.polys[k])}")
            (a, b), lhs, rhs = self.first_diff
            lines.append(f"  first difference at u^{a} v^{b}: {lhs} vs {rhs}")
        for c in self.checks:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}")
        if include_timing:
            lines.append("  timing_ms: " + ", ".join(f"{k}={v:.1f}" for k, v in self.timing_ms.items()))
        return "\n".join(lines) + "\n"


def first_difference(lhs: BiPoly, rhs: BiPoly) -> tuple[tuple[int, int], int, int] | None:
    keys = sorted(set(lhs.terms) | set(rhs.terms))
    for k in keys:
        a, b = lhs.coefficient(*k), rhs.coefficient(*k)
        if a != b:
            return k, a, b
    return None


def _timed(timing: dict, name: str, fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    timing[name] = (time.perf_counter() - t0) * 1000.0
    return out


def mirror_check(r: int, d: int, e: int, g: int) -> MirrorReport:
    """Compute both sides of the variant mirror identity along all four paths."""
    notes: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateGenusWarning)
        check_params(r, g, d, e)
    notes.extend(str(w.message) for w in caught if issubclass(w.category, DegenerateGenusWarning))

    timing: dict[str, float] = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateGenusWarning)
        polys = {
            "sl_enum": _timed(timing, "sl_enum", sl_variant_enum, r, g, d),
            "sl_filter": _timed(timing, "sl_filter", sl_variant_filter, r, g, d),
            "pgl_closed": _timed(timing, "pgl_closed", pgl_variant_closed, r, g, e),
            "pgl_raw": _timed(timing, "pgl_raw", pgl_variant_raw, r, g, e),
        }
        plus = _timed(timing, "sl_enum_plus", sl_variant_enum, r, g, d, "plus")

    base = polys["sl_enum"]
    first = None
    for k in POLY_NAMES[1:]:
        first = first_difference(base, polys[k])
        if first is not None:
            break
    verdict = "equal" if first is None else "mismatch"

    count = r ** (2 * g) - 1
    top = (r * r + r - 2) * (g - 1)
    checks = [
        Check("sl_enum == sl_filter", polys["sl_enum"] == polys["sl_filter"]),
        Check("pgl_closed == pgl_raw", polys["pgl_closed"] == polys["pgl_raw"]),
        Check("sl == pgl", polys["sl_enum"] == polys["pgl_closed"]),
        Check("uv_symmetry", all(p.swap() == p for p in polys.values())),
        Check("divisible_by_nontrivial_count", all(p.content_divisible_by(count) for p in polys.values())),
        Check("top_cancellation", all(p.coefficient(top, top) == 0 for p in polys.values())),
        Check("sign_convention_invariance", plus == polys["sl_enum"]),
        # reaching this point means every exact division and rationality check held
        Check("exact_division_checks", True),
        Check("stability_guard", True),
    ]
    return MirrorReport(
        r=r, d=d, e=e, g=g, polys=polys, verdict=verdict, first_diff=first, checks=checks,
        scope=SCOPE_FULL if r in (2, 3) else SCOPE_PARTIAL, warnings=notes, timing_ms=timing,
    )


def emit(report: MirrorReport, fmt: str = "json", include_timing: bool = False) -> bytes:
    if fmt == "json":
        return _dumps(report.to_json(include_timing))
    if fmt == "text":
        return report.to_text(include_timing).encode("ascii")
    raise ParameterError(f"unknown format {fmt!r}")


def parse_report(data: bytes | str) -> MirrorReport:
    return MirrorReport.from_json(json.loads(data))


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


@dataclass
class SweepError:
    params: dict[str, int]
    kind: str  # "parameter" | "internal"
    message: str


@dataclass
class SweepResult:
    reports: list[MirrorReport]
    errors: list[SweepError]
    consistency: list[Check]

    @property
    def summary(self) -> dict[str, int]:
        return {
            "total": len(self.reports) + len(self.errors),
            "equal": sum(r.verdict == "equal" for r in self.reports),
            "mismatch": sum(r.verdict != "equal" for r in self.reports),
            "errors": len(self.errors),
        }

    @property
    def exit_code(self) -> int:
        if any(e.kind == "internal" for e in self.errors):
            return 3
        if not all(r.ok for r in self.reports) or not all(c.passed for c in self.consistency):
            return 1
        if self.errors:
            return 2
        return 0

    def to_json(self, include_timing: bool = False) -> dict:
        return {
            "reports": [r.to_json(include_timing) for r in self.reports],
            "errors": [{"params": e.params, "kind": e.kind, "message": e.message} for e in self.errors],
            "consistency": [{"name": c.name, "pass": c.passed} for c in self.consistency],
            "summary": self.summary,
        }

    def to_text(self, include_timing: bool = False) -> str:
        out = [rep.to_text(include_timing) for rep in self.reports]
        for e in self.errors:
            p = e.params
            out.append(f"mirror check r={p['r']} d={p['d']} e={p['e']} g={p['g']}: ERROR ({e.kind}) {e.message}\n")
        for c in self.consistency:
            out.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}\n")
        s = self.summary
        out.append(f"summary: {s['total']} runs, {s['equal']} equal, {s['mismatch']} mismatch, {s['errors']} errors\n")
        return "".join(out)


def _run_one(params: tuple[int, int, int, int]):
    r, d, e, g = params
    try:
        return "ok", mirror_check(r, d, e, g)
    except ParameterError as exc:
        return "parameter", str(exc)
    except InvariantViolation as exc:
        return "internal", str(exc)
    except MirrorError as exc:
        return "internal", str(exc)


def sweep_params(r_list: Iterable[int], g_range: Iterable[int], d_list: Iterable[int] | None,
                 e_list: Iterable[int] | None) -> list[tuple[int, int, int, int]]:
    """Parameter tuples in deterministic (r, g, d, e) order. ``None`` degree
    lists mean every residue 1..r-1."""
    g_vals = list(g_range)
    out = []
    for r in r_list:
        ds = list(d_list) if d_list is not None else list(range(1, r))
        es = list(e_list) if e_list is not None else list(range(1, r))
        for g in g_vals:
            for d in ds:
                for e in es:
                    out.append((r, d, e, g))
    return out


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        env = os.environ.get("MIRROR_HODGE_JOBS")
        if env:
            try:
                jobs = int(env)
            except ValueError:
                raise ParameterError(f"MIRROR_HODGE_JOBS={env!r} is not an integer") from None
        else:
            jobs = 1
    if jobs < 1:
        raise ParameterError(f"jobs must be >= 1, got {jobs}")
    return jobs


def sweep(r_list: Sequence[int], g_range: Iterable[int], d_list: Iterable[int] | None = None,
          e_list: Iterable[int] | None = None, parallelism: int | None = 1) -> SweepResult:
    params = sweep_params(r_list, g_range, d_list, e_list)
    jobs = resolve_jobs(parallelism)
    if jobs > 1 and len(params) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, params))
    else:
        results = [_run_one(p) for p in params]

    reports, errors = [], []
    for (r, d, e, g), res in zip(params, results):
        if res[0] == "ok":
            reports.append(res[1])
        else:
            errors.append(SweepError({"r": r, "d": d, "e": e, "g": g}, res[0], res[1]))

    by_rg: dict[tuple[int, int], list[MirrorReport]] = {}
    for rep in reports:
        by_rg.setdefault((rep.r, rep.g), []).append(rep)
    consistency = []
    for (r, g), reps in sorted(by_rg.items()):
        if len(reps) < 2:
            continue
        ref = reps[0].polys["sl_enum"]
        d_ok = all(rep.polys["sl_enum"] == ref and rep.polys["sl_filter"] == ref for rep in reps)
        e_ok = all(rep.polys["pgl_closed"] == ref and rep.polys["pgl_raw"] == ref for rep in reps)
        consistency.append(Check(f"d_independence r={r} g={g}", d_ok))
        consistency.append(Check(f"e_independence r={r} g={g}", e_ok))
    return SweepResult(reports, errors, consistency)


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------


@dataclass
class StabilityAudit:
    r: int
    g: int
    d: int
    total: int
    passed: int
    failures: list[tuple[tuple[int, ...], int]]

    @property
    def ok(self) -> bool:
        return self.passed == self.total and not self.failures

    def to_json(self) -> dict:
        return {
            "params": {"r": self.r, "g": self.g, "d": self.d},
            "total": self.total,
            "passed": self.passed,
            "failures": [{"m": list(m), "k": k} for m, k in self.failures],
            "pass": self.ok,
        }

    def to_text(self) -> str:
        lines = [f"stability audit r={self.r} g={self.g} d={self.d}: {self.passed}/{self.total} pass"]
        lines += [f"  FAIL m={m} at k={k}" for m, k in self.failures]
        return "\n".join(lines) + "\n"


def stability_audit(r: int, g: int, d: int) -> StabilityAudit:
    check_params(r, g, d)
    tuples = enumerate_mtuples(r, g, d)
    failures = []
    for m in tuples:
        res = check_stability(r, d, reconstruct_degrees(r, g, d, m))
        if not res:
            failures.append((m, res.failing_k))
    return StabilityAudit(r, g, d, len(tuples), len(tuples) - len(failures), failures)


@dataclass
class TorsionAudit:
    r: int
    g: int
    cap: int
    mode: str  # "full" | "reduced-only"
    gammas: list[tuple[int, ...]]
    histograms: list[dict[int, int]]
    checks: list[Check]
    note: str = ""

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "params": {"r": self.r, "g": self.g, "cap": self.cap},
            "mode": self.mode,
            "gammas": [list(x) for x in self.gammas],
            "histograms": [{str(k): v for k, v in sorted(h.items())} for h in self.histograms],
            "checks": [{"name": c.name, "pass": c.passed} for c in self.checks],
            "note": self.note,
            "pass": self.ok,
        }

    def to_text(self) -> str:
        lines = [f"torsion audit r={self.r} g={self.g} cap={self.cap}: mode {self.mode}"]
        if self.note:
            lines.append(f"  note: {self.note}")
        for gam, h in zip(self.gammas, self.histograms):
            lines.append(f"  gamma={gam} histogram={dict(sorted(h.items()))}")
        for c in self.checks:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}")
        return "\n".join(lines) + "\n"


def sample_gammas(group: TorsionGroup, n_random: int = 2, seed: int = 0) -> list:
    picks = [group.basis(1), group.basis(group.g + 1), group.basis(group.rank)]
    rng = random.Random(seed)
    while len(picks) < 3 + n_random:
        x = group.element(rng.randrange(group.r) for _ in range(group.rank))
        if not x.is_identity():
            picks.append(x)
    seen, out = set(), []
    for x in picks:
        if x.coords not in seen:
            seen.add(x.coords)
            out.append(x)
    return out


def torsion_audit(r: int, g: int, cap: int = DEFAULT_CAP, n_random: int = 2, seed: int = 0) -> TorsionAudit:
    """Equidistribution of pairing values and full-vs-reduced agreement of the
    character average, for sampled gamma and every e in 1..r-1."""
    grp = TorsionGroup(r, g)
    gammas = sample_gammas(grp, n_random, seed)
    rng = random.Random(seed + 1)
    checks: list[Check] = []

    # bilinearity / antisymmetry / nondegeneracy on random samples
    def rand():
        return grp.element(rng.randrange(r) for _ in range(grp.rank))

    bilinear = antisym = True
    for _ in range(50):
        a, b, c = rand(), rand(), rand()
        bilinear &= weil_pairing(a + b, c) == (weil_pairing(a, c) + weil_pairing(b, c)) % r
        antisym &= weil_pairing(a, b) == (-weil_pairing(b, a)) % r and weil_pairing(a, a) == 0
    nondeg = all(any(weil_pairing(x, grp.basis(i)) for i in range(1, grp.rank + 1)) for x in gammas)
    checks += [Check("pairing_bilinear", bilinear), Check("pairing_antisymmetric", antisym),
               Check("pairing_nondegenerate", nondeg)]

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateGenusWarning)
        reduced = {e: character_average(gammas[0], e, mode="reduced") for e in range(1, r)}
    checks.append(Check("character_average_e_periodic",
                        all(character_average(gammas[0], e + r) == reduced[e] for e in range(1, r))))
    checks.append(Check("character_average_gamma_independent",
                        all(character_average(x, e) == reduced[e] for x in gammas[1:] for e in range(1, r))))

    histograms: list[dict[int, int]] = []
    if grp.order > cap:
        return TorsionAudit(r, g, cap, "reduced-only", [x.coords for x in gammas], histograms, checks,
                            note=f"|Gamma| = {grp.order} exceeds cap {cap}; full enumeration skipped")

    expected = r ** (2 * g - 1)
    equi = agree = True
    for x in gammas:
        h = pairing_value_counts(x, cap)
        histograms.append(h)
        equi &= all(h.get(v, 0) == expected for v in range(r))
        for e in range(1, r):
            agree &= character_average(x, e, mode="full", cap=cap) == reduced[e]
    checks.append(Check("equidistribution", equi))
    checks.append(Check("full_reduced_agreement", agree))
    return TorsionAudit(r, g, cap, "full", [x.coords for x in gammas], histograms, checks)
