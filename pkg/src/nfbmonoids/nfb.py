"""Hypothesis verifiers for the sufficient non-finite-basis conditions.

Each ``check_*`` function runs the finite checks behind one condition on a
given monoid and bundles them into a ``ConditionReport``.  Passing reports
are desk-scale evidence: they cover the requested range of n and bounded
class windows only, which every report states in its ``scale_note``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .decide import (
    ASSIGNMENT_CAP,
    CapExceeded,
    CheckReport,
    IsotermVerdict,
    Verdict,
    class_shape,
    is_isoterm,
    l_stable_wrt,
    power_isoterm,
    satisfies,
    var_stable_wrt,
)
from .monoids import FiniteMonoid
from .schemes import generate, isoterm_words, scheme
from .words import Identity, OccRef, Word, jm_equivalent, occ, parse_identity, render

SL1_L_STABLE = ((1, 1), (1, 2), (2, 1), (2, 2))
SL1_XY = ((2, 2), (2, 3), (3, 2))
SL1_XYX = ((1, 2, 1), (1, 2, 2), (2, 2, 1))
BSNEW1_XY = ((2, 2), (2, 3), (3, 2))


@dataclass
class ConditionReport:
    condition: str
    monoid: str
    params: dict
    reports: list = field(default_factory=list)
    scale_note: str = ""

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def failures(self) -> list:
        return [r for r in self.reports if not r.passed]

    @property
    def overall(self) -> dict:
        if self.passed:
            return {"status": "all-pass"}
        first = self.failures[0]
        return {"status": "fail", "hypothesis": first.hypothesis, "witness": first.witness}

    def failed_hypotheses(self) -> list:
        return sorted({r.hypothesis for r in self.failures})

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "monoid": self.monoid,
            "params": self.params,
            "overall": self.overall,
            "reports": [r.to_json() for r in self.reports],
            "scale_note": self.scale_note,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def describe(self) -> str:
        lines = [f"{self.condition} on {self.monoid} {self.params}"]
        for r in self.reports:
            line = f"  ({r.hypothesis}) {r.status:<12} {r.name}"
            if r.witness is not None and not r.passed:
                line += f"  [witness: {r.witness}]"
            lines.append(line)
        overall = "ALL PASS" if self.passed else f"FAIL ({', '.join(self.failed_hypotheses())})"
        lines.append(f"  overall: {overall}")
        lines.append(f"  note: {self.scale_note}")
        return "\n".join(lines)


def _note(n_range, bound) -> str:
    span = f"n = {n_range[0]}..{n_range[1]}" if n_range else "the listed identities"
    window = f" and class windows up to length {bound}" if bound else ""
    return (f"Passing checks cover {span}{window}; they are finite evidence for "
            "the hypotheses, not a proof that the monoid is non-finitely based.")


def _check_range(n_range):
    lo, hi = n_range
    if lo < 2 or hi < lo:
        raise ValueError(f"n range must satisfy 2 <= min <= max, got {lo}..{hi}")
    return range(lo, hi + 1)


def _witness_text(M, v: Verdict) -> Optional[str]:
    if v.witness is None:
        return None
    return ", ".join(f"{x}->{M.names[e]}" for x, e in v.witness.items())


def _holds(M, hyp, ident: Identity, label, workers=1, jm_oracle=False) -> CheckReport:
    v = satisfies(M, ident, ASSIGNMENT_CAP, workers, jm_oracle=jm_oracle)
    status = "pass" if v.holds else "fail"
    return CheckReport(f"{label}: {ident} holds", status, f"{v.status} via {v.route}",
                       _witness_text(M, v), {"route": v.route}, hyp)


def _fails(M, hyp, ident: Identity, label, workers=1) -> CheckReport:
    v = satisfies(M, ident, ASSIGNMENT_CAP, workers)
    if v.holds:
        return CheckReport(f"{label}: {ident} fails", "fail",
                           f"{M.name} satisfies {ident}", str(ident), {"route": v.route}, hyp)
    return CheckReport(f"{label}: {ident} fails", "pass", f"refuted via {v.route}",
                       _witness_text(M, v), {"route": v.route}, hyp)


def _isoterm(hyp, iv: IsotermVerdict) -> CheckReport:
    status = {"Isoterm": "pass", "IsotermUpToBound": "bounded-pass", "NotIsoterm": "fail"}[iv.status]
    witness = None if iv.witness is None else f"{render(iv.word)} = {render(iv.witness)}"
    data = {"mode": iv.certificate.get("mode", "exact")}
    if iv.bound is not None:
        data["bound"] = iv.bound
    return CheckReport(f"{render(iv.word)} is an isoterm", status, iv.describe(), witness, data, hyp)


def _scheme_reports(M, hyp, name, n_range, workers, jm_oracle=False, **params):
    out = []
    for n in _check_range(n_range):
        ident = generate(scheme(name, n=n, **params)).identity
        try:
            out.append(_holds(M, hyp, ident, f"n={n}", workers, jm_oracle))
        except CapExceeded as exc:
            raise CapExceeded(f"{name} at n={n}: {exc}") from exc
    return out


def _tag(report: CheckReport, hyp: str) -> CheckReport:
    report.hypothesis = hyp
    return report


# ---------------------------------------------------------------- conditions

def check_sl1(M: FiniteMonoid, n_range=(2, 5), bound: int = 8, workers: int = 1) -> ConditionReport:
    rep = ConditionReport("sl1", M.name, {"n_range": list(n_range), "bound": bound},
                          scale_note=_note(n_range, bound))
    rep.reports += _scheme_reports(M, "i", "sl1", n_range, workers)
    for m, c in SL1_L_STABLE:
        u = ("x",) * m + ("t",) + ("x",) * c
        rep.reports.append(_tag(l_stable_wrt(
            M, u, [OccRef("x", 1), OccRef("t", 1)], bound, workers=workers), "ii"))
    for m, c in SL1_XY:
        u = ("x",) * m + ("y",) * c
        rep.reports.append(_tag(class_shape(M, u, "xy", bound, workers=workers), "iii"))
    for m, d, c in SL1_XYX:
        u = ("x",) * m + ("y",) * d + ("x",) * c
        rep.reports.append(_tag(class_shape(M, u, "xyx", bound, workers=workers), "iv"))
    return rep


def check_table_row(M: FiniteMonoid, row: int, params: Optional[dict] = None, n_range=(2, 5),
                    bound: Optional[int] = None, workers: int = 1) -> ConditionReport:
    if row not in range(1, 9):
        raise ValueError("row must be 1..8")
    params = dict(params or {})
    if row == 8 and "m" not in params:
        raise ValueError("row 8 needs parameter m > 2")
    name = f"row{row}"
    meta = {"n_range": list(n_range), "bound": bound, **params}
    rep = ConditionReport(name, M.name, meta, scale_note=_note(n_range, bound))
    for w in sorted(isoterm_words(scheme(name, n=2, **params)), key=lambda w: (len(w), w)):
        rep.reports.append(_isoterm("a", is_isoterm(M, w, bound, workers=workers)))
    rep.reports += _scheme_reports(M, "b", name, n_range, workers, **params)
    return rep


def check_psc(M: FiniteMonoid, n_range=(2, 4), bound: int = 7, workers: int = 1) -> ConditionReport:
    rep = ConditionReport("psc", M.name, {"n_range": list(n_range), "bound": bound},
                          scale_note=_note(n_range, bound))
    rep.reports += _scheme_reports(M, "i", "psc", n_range, workers)
    rep.reports.append(_fails(M, "ii", parse_identity("xyxy = xyyx"), "collapse", workers))
    for w in (tuple("xytyx"), tuple("xtyxy")):
        rep.reports.append(_isoterm("iii", is_isoterm(M, w, bound, workers=workers)))
    return rep


def check_el(M: FiniteMonoid, k: int = 2, n_range=(2, 5), workers: int = 1) -> ConditionReport:
    """Works on plain semigroups: no variable is ever sent to the empty word."""
    if k < 2:
        raise ValueError("k must be greater than 1")
    rep = ConditionReport("el", M.name, {"k": k, "n_range": list(n_range)},
                          scale_note=_note(n_range, None))
    rep.reports += _scheme_reports(M, "i", "el", n_range, workers, k=k)
    rep.reports.append(_fails(M, "ii", generate(scheme("el_e1", k=k)).identity, "e1", workers))
    for i, ident in enumerate(generate(scheme("el_e2", k=k)).identities, start=1):
        rep.reports.append(_holds(M, "iii", ident, f"e2.{i}", workers))
    return rep


def _jm_factors(M):
    if M.factors is not None:
        return [f for part in M.factors for f in _jm_factors(part)]
    return [M] if M.jm_level is not None else []


def _jm_cross_check(F: FiniteMonoid, name, n_range, workers, **params) -> CheckReport:
    """Brute-force the largest feasible n on a J_m factor and compare with subwords."""
    feasible = [n for n in _check_range(n_range)
                if F.order ** len(generate(scheme(name, n=n, **params)).identity.variables)
                <= ASSIGNMENT_CAP]
    if not feasible:
        return CheckReport(f"J_{F.jm_level} cross-check on {F.name}", "bounded-pass",
                           "no n in range is within the brute-force cap", hypothesis="i")
    n = feasible[-1]
    ident = generate(scheme(name, n=n, **params)).identity
    brute = satisfies(F, ident, ASSIGNMENT_CAP, workers).holds
    oracle = jm_equivalent(ident.lhs, ident.rhs, F.jm_level)
    status = "pass" if brute == oracle else "fail"
    return CheckReport(f"J_{F.jm_level} cross-check on {F.name} at n={n}", status,
                       f"brute force {'holds' if brute else 'fails'}, subwords "
                       f"{'agree' if oracle else 'differ'}", data={"n": n}, hypothesis="i")


def check_bsnew(M: FiniteMonoid, m: int = 3, n_range=(2, 5), bound: Optional[int] = None,
                workers: int = 1) -> ConditionReport:
    if m < 3:
        raise ValueError("m must be at least 3")
    rep = ConditionReport("bsnew", M.name, {"m": m, "n_range": list(n_range), "bound": bound},
                          scale_note=_note(n_range, bound))
    rep.reports += _scheme_reports(M, "i", "bsnew", n_range, workers, jm_oracle=True, m=m)
    for F in _jm_factors(M):
        rep.reports.append(_jm_cross_check(F, "bsnew", n_range, workers, m=m))
    rep.reports.append(_isoterm("ii", is_isoterm(M, tuple("xyyx"), bound, workers=workers)))
    rep.reports.append(_isoterm("ii", power_isoterm(M, m - 1)))
    u = ("x",) * (m - 2) + ("t1", "x", "t2", "x")
    rep.reports.append(_isoterm("iii", is_isoterm(M, u, bound, workers=workers)))
    u = ("x",) * (m - 2) + ("y", "x", "y", "x")
    rep.reports.append(_tag(class_shape(M, u, "fixed", bound, workers=workers), "iv"))
    return rep


def check_bsnew1(M: FiniteMonoid, m: int = 1, n_range=(2, 4), bound: Optional[int] = None,
                 workers: int = 1) -> ConditionReport:
    if m < 1:
        raise ValueError("m must be positive")
    rep = ConditionReport("bsnew1", M.name, {"m": m, "n_range": list(n_range), "bound": bound},
                          scale_note=_note(n_range, bound))
    rep.reports += _scheme_reports(M, "i", "bsnew1", n_range, workers, m=m)
    for d in range(1, m + 1):
        u = ("x",) * (m + 1 - d) + ("t",) + ("x",) * d
        rep.reports.append(_tag(var_stable_wrt(M, u, "x", bound, workers=workers), "ii"))
    for p, c in BSNEW1_XY:
        u = ("x",) * p + ("y",) * c
        rep.reports.append(_tag(class_shape(M, u, "xy", bound, workers=workers), "iii"))
    return rep


def _adjacent_ok(w: Word) -> Optional[str]:
    counts = {a: occ(w, a) for a in set(w)}
    seen = {}
    refs = []
    for a in w:
        seen[a] = seen.get(a, 0) + 1
        refs.append(OccRef(a, seen[a]))
    for c, d in zip(refs, refs[1:]):
        if c.var == d.var or counts[c.var] < 2 or counts[d.var] < 2:
            continue
        first_last = c.index == 1 and d.index == counts[d.var]
        last_first = c.index == counts[c.var] and d.index == 1
        if not (first_last or last_first):
            return f"{c} {d} in {render(w)}"
    return None


def _has_gap_factor(w: Word, m: int, d: int) -> bool:
    """Does w contain b^(m+1-d) T b^d with T nonempty and free of b?"""
    for b in set(w):
        left, right = (b,) * (m + 1 - d), (b,) * d
        for i in range(len(w) - len(left) + 1):
            if w[i:i + len(left)] != left:
                continue
            j = i + len(left)
            k = j
            while k < len(w) and w[k] != b:
                k += 1
            if k > j and w[k:k + d] == right:
                return True
    return False


def check_corollary_alg(W: Iterable[Word], m: int) -> CheckReport:
    """Syntactic test of the two conditions on W that make A_0^1 x S(W) qualify."""
    W = sorted({tuple(w) for w in W}, key=lambda w: (len(w), w))
    shown = "{" + ", ".join(render(w) for w in W) + "}"
    for w in W:
        bad = _adjacent_ok(w)
        if bad:
            return CheckReport(f"adjacent occurrences in {shown}", "fail",
                               f"adjacent pair {bad} is not first/last", bad, hypothesis="a")
    for d in range(1, m + 1):
        if not any(_has_gap_factor(w, m, d) for w in W):
            pattern = f"b^{m + 1 - d} T b^{d}"
            return CheckReport(f"gap factors in {shown}", "fail",
                               f"no word has a factor {pattern}", pattern, hypothesis="b")
    return CheckReport(f"conditions on {shown} with m={m}", "pass", "both conditions hold",
                       hypothesis="a,b")


CONDITIONS = ["sl1"] + [f"row{i}" for i in range(1, 9)] + ["psc", "el", "bsnew", "bsnew1", "alg"]


def verify(condition: str, M: FiniteMonoid, *, k: Optional[int] = None, m: Optional[int] = None,
           n_range: Sequence[int] = (2, 5), bound: Optional[int] = None,
           workers: int = 1) -> ConditionReport:
    """Dispatch a condition name to its checker (defaults per condition)."""
    n_range = tuple(n_range)
    if condition == "sl1":
        return check_sl1(M, n_range, bound or 8, workers)
    if condition.startswith("row") and condition[3:].isdigit():
        row = int(condition[3:])
        params = {"m": m if m is not None else 3} if row == 8 else {}
        return check_table_row(M, row, params, n_range, bound, workers)
    if condition == "psc":
        return check_psc(M, n_range, bound or 7, workers)
    if condition == "el":
        return check_el(M, k or 2, n_range, workers)
    if condition == "bsnew":
        return check_bsnew(M, m or 3, n_range, bound, workers)
    if condition == "bsnew1":
        return check_bsnew1(M, m or 1, n_range, bound, workers)
    raise ValueError(f"unknown condition {condition!r}; choose from {', '.join(CONDITIONS)}")
