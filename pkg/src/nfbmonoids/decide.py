"""Identity satisfaction, bounded equivalence classes and isoterm decisions.

``satisfies`` picks a route by how the monoid was built:

* direct products are decided factor by factor;
* Rees quotients S(W) are decided syntactically: an assignment is nonzero on
  a side only when the side's image is a factor of W, so it is enough to
  enumerate the matches of each side against the factors of W;
* everything else is searched exhaustively by a compiled kernel.  For
  monoids the search skips the identity (an assignment sending x to 1 is an
  assignment of the identity with x deleted, which is checked recursively)
  and, for regular identities, the zero.

Every ``Fails`` verdict carries an assignment that re-evaluates to distinct
elements with ``FiniteMonoid.evaluate``.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional

from . import _kernel
from .monoids import FiniteMonoid, exponent_data, factors_of
from .words import (
    Identity,
    OccRef,
    Word,
    erase,
    jm_equivalent,
    l_map,
    occ,
    occ_set_stable,
    project,
    render,
    var_stable,
    varset_stable,
)

log = logging.getLogger(__name__)

ASSIGNMENT_CAP = 10**9
SPACE_CAP = 10**7


class CapExceeded(RuntimeError):
    """A search space exceeds its configured cap; nothing is silently truncated."""


@dataclass
class Verdict:
    holds: bool
    identity: Identity
    witness: Optional[dict] = None
    route: str = "brute"

    @property
    def status(self) -> str:
        return "Holds" if self.holds else "Fails"

    def describe(self, M: FiniteMonoid) -> str:
        text = f"{self.status}: {self.identity} in {M.name}"
        if self.witness is not None:
            shown = ", ".join(f"{x}->{M.names[e]}" for x, e in self.witness.items())
            lhs = M.names[M.evaluate(self.identity.lhs, self.witness)]
            rhs = M.names[M.evaluate(self.identity.rhs, self.witness)]
            text += f" (witness {shown}: {lhs} != {rhs})"
        return text

    def to_json(self, M: FiniteMonoid) -> dict:
        doc = {"status": self.status, "identity": str(self.identity), "route": self.route}
        if self.witness is not None:
            doc["witness"] = {x: M.names[e] for x, e in self.witness.items()}
        return doc


def verify_witness(M: FiniteMonoid, identity: Identity, witness: dict) -> bool:
    """True iff ``witness`` separates the two sides of ``identity`` in ``M``."""
    return M.evaluate(identity.lhs, witness) != M.evaluate(identity.rhs, witness)


# ------------------------------------------------------------- brute force

def _canonical(lhs: Word, rhs: Word):
    names = {}
    for a in lhs + rhs:
        names.setdefault(a, len(names))
    return tuple(names[a] for a in lhs), tuple(names[a] for a in rhs)


def _search(M, values, lhs, rhs, workers=1):
    """First assignment over ``values`` separating the sides, as a dict, or None."""
    variables = list(dict.fromkeys(lhs + rhs))
    if not variables:
        return None
    pos = {x: i for i, x in enumerate(variables)}
    li = [pos[a] for a in lhs]
    ri = [pos[a] for a in rhs]
    empty = -1 if M.identity is None else M.identity
    table = M.table
    if workers <= 1 or len(values) < 2:
        found = _kernel.first_counterexample(table, values, li, ri, len(variables), empty)
    else:
        # split on the value of the first variable; keep the least witness
        bounds = [len(values) * k // workers for k in range(workers + 1)]
        chunks = [(a, b) for a, b in zip(bounds, bounds[1:]) if a < b]
        with ThreadPoolExecutor(len(chunks)) as pool:
            results = list(pool.map(
                lambda ab: _kernel.first_counterexample(
                    table, values, li, ri, len(variables), empty, ab[0], ab[1]),
                chunks,
            ))
        found = next((r for r in results if r is not None), None)
    return None if found is None else dict(zip(variables, found))


def _reduced_fails(M, lhs, rhs, memo, workers) -> bool:
    key = _canonical(lhs, rhs)
    if key[0] == key[1]:
        return False
    key = min(key, key[::-1])
    if key in memo:
        return memo[key]
    variables = list(dict.fromkeys(lhs + rhs))
    regular = set(lhs) == set(rhs)
    values = [
        e for e in range(M.order)
        if e != M.identity and not (regular and e == M.zero)
    ]
    failed = _search(M, values, lhs, rhs, workers) is not None
    if not failed:
        failed = any(
            _reduced_fails(M, erase(lhs, {x}), erase(rhs, {x}), memo, workers)
            for x in variables
        )
    memo[key] = failed
    return failed


def _brute(M, identity, cap, workers, reduce=True):
    lhs, rhs = tuple(identity.lhs), tuple(identity.rhs)
    nvars = len(identity.variables)
    if M.order ** nvars > cap:
        raise CapExceeded(
            f"{M.order}^{nvars} assignments exceed the cap {cap:.0e} for {identity}"
        )
    everything = list(range(M.order))
    if reduce and M.identity is not None and nvars > 1:
        if not _reduced_fails(M, lhs, rhs, {}, workers):
            return Verdict(True, identity, route="brute")
    witness = _search(M, everything, lhs, rhs, workers)
    return Verdict(witness is None, identity, witness, "brute")


# ------------------------------------------------------- Rees quotient S(W)

@lru_cache(maxsize=64)
def _factor_data(words):
    facs = sorted(factors_of(words), key=lambda f: (len(f), f))
    index = {f: i for i, f in enumerate([()] + facs)}
    return frozenset(facs), index


def _matches(side: Word, words) -> Iterable[dict]:
    """All assignments (variable -> word) whose image of ``side`` is a nonempty factor of W."""
    seen = set()
    for w in words:
        for s in range(len(w)):
            theta = {}

            def walk(i, p):
                if i == len(side):
                    if p > s:
                        yield dict(theta)
                    return
                a = side[i]
                if a in theta:
                    img = theta[a]
                    if w[p:p + len(img)] == img:
                        yield from walk(i + 1, p + len(img))
                    return
                for q in range(p, len(w) + 1):
                    theta[a] = w[p:q]
                    yield from walk(i + 1, q)
                del theta[a]

            for theta_found in walk(0, s):
                key = tuple(sorted(theta_found.items()))
                if key not in seen:
                    seen.add(key)
                    yield theta_found


def _image(theta, side):
    return tuple(b for a in side for b in theta.get(a, ()))


def _dilworth(M, identity):
    lhs, rhs = tuple(identity.lhs), tuple(identity.rhs)
    facs, index = _factor_data(M.words)
    variables = identity.variables
    one_sided = set(lhs) ^ set(rhs)
    if one_sided:
        x = min(one_sided, key=variables.index)
        witness = {y: M.identity for y in variables}
        witness[x] = M.zero
        return Verdict(False, identity, witness, "rees-quotient")
    for a, b in ((lhs, rhs), (rhs, lhs)):
        for theta in _matches(a, M.words):
            if _image(theta, b) != _image(theta, a):
                witness = {y: index[theta.get(y, ())] for y in variables}
                return Verdict(False, identity, witness, "rees-quotient")
    return Verdict(True, identity, route="rees-quotient")


# ------------------------------------------------------------- dispatcher

def satisfies(
    M: FiniteMonoid,
    identity: Identity,
    cap: int = ASSIGNMENT_CAP,
    workers: int = 1,
    method: str = "auto",
    jm_oracle: bool = False,
) -> Verdict:
    """Does ``M`` satisfy ``identity``?  ``method`` is "auto" or "brute".

    With ``jm_oracle`` a monoid whose equational theory is known to be J_m
    (``M.jm_level``) is decided by comparing scattered subwords; a failing
    verdict still comes with a searched witness.
    """
    if M.identity is None and (not identity.lhs or not identity.rhs):
        raise ValueError(f"{M.name} is not a monoid; sides must be nonempty")
    if method == "brute":
        return _brute(M, identity, cap, workers, reduce=False)
    if M.factors is not None:
        parts = [satisfies(f, identity, cap, workers, jm_oracle=jm_oracle) for f in M.factors]
        if all(p.holds for p in parts):
            return Verdict(True, identity, route="product")
        f1, f2 = M.factors
        pick = [f.identity if f.identity is not None else 0 for f in M.factors]
        witness = {}
        for x in identity.variables:
            e = [p.witness[x] if not p.holds else pick[i] for i, p in enumerate(parts)]
            witness[x] = e[0] * f2.order + e[1]
        return Verdict(False, identity, witness, "product")
    if jm_oracle and M.jm_level is not None:
        if jm_equivalent(identity.lhs, identity.rhs, M.jm_level):
            return Verdict(True, identity, route="jm-oracle")
        found = _brute(M, identity, cap, workers)
        if found.holds:
            raise RuntimeError(f"{M.name} satisfies {identity} outside J_{M.jm_level}")
        return found
    if M.words is not None:
        return _dilworth(M, identity)
    return _brute(M, identity, cap, workers)


def power_identity_holds(M: FiniteMonoid, a: int, b: int) -> bool:
    """Does ``M`` satisfy x^a = x^b (x^0 read as the identity)?"""
    return all(_power(M, s, a) == _power(M, s, b) for s in range(M.order))


def _power(M, s, k):
    if k == 0:
        return M.identity
    p = s
    for _ in range(k - 1):
        p = M.mul(p, s)
    return p


# ------------------------------------------------------- equivalence class

def _space(nletters, bound):
    return sum(nletters ** k for k in range(1, bound + 1))


def _distinct_permutations(counts: dict):
    """Distinct words with the given letter counts, in lexicographic order."""
    letters = sorted(counts)
    total = sum(counts.values())
    out = []

    def walk(prefix):
        if len(prefix) == total:
            yield tuple(prefix)
            return
        for a in letters:
            if counts[a]:
                counts[a] -= 1
                prefix.append(a)
                yield from walk(prefix)
                prefix.pop()
                counts[a] += 1

    yield from walk(out)


def _count_vectors(letters, allowed, bound):
    def walk(i, acc, used):
        if i == len(letters):
            if used:
                yield dict(acc)
            return
        for c in allowed[letters[i]]:
            if used + c <= bound:
                acc[letters[i]] = c
                yield from walk(i + 1, acc, used + c)
        acc.pop(letters[i], None)

    yield from walk(0, {}, 0)


class _PairFilter:
    """Necessary condition: every two-letter deletion of a candidate must hold."""

    def __init__(self, M, u, cap, workers):
        self.M, self.u, self.cap, self.workers = M, u, cap, workers
        self.cache = {}

    def __call__(self, v):
        letters = sorted(set(self.u) | set(v))
        for x, y in combinations(letters, 2):
            key = (project(self.u, {x, y}), project(v, {x, y}))
            if key[0] == key[1]:
                continue
            if key not in self.cache:
                self.cache[key] = satisfies(
                    self.M, Identity(*key), self.cap, self.workers).holds
            if not self.cache[key]:
                return False
        return True


def _candidates(M, u, counts_allowed, bound, cap, workers):
    keep = _PairFilter(M, u, cap, workers)
    letters = sorted(set(u))
    for counts in _count_vectors(letters, counts_allowed, bound):
        counts = {a: c for a, c in counts.items() if c}
        for v in _distinct_permutations(counts):
            if keep(v):
                yield v


def equivalence_class(
    M: FiniteMonoid,
    u: Word,
    bound: Optional[int] = None,
    cap: int = SPACE_CAP,
    workers: int = 1,
) -> list:
    """Words v over content(u) with |v| <= bound and M |= u = v, by length then letters."""
    u = tuple(u)
    bound = len(u) + 2 if bound is None else bound
    letters = sorted(set(u))
    if _space(len(letters), bound) > cap:
        raise CapExceeded(
            f"{len(letters)} letters up to length {bound} exceed the class cap {cap:.0e}"
        )
    if M.identity is None:
        raise ValueError("equivalence classes are computed for monoids")
    # deleting all letters but x is a substitution, so the count of x is constrained
    allowed = {
        x: [c for c in range(bound + 1) if power_identity_holds(M, occ(u, x), c)]
        for x in letters
    }
    members = [
        v for v in _candidates(M, u, allowed, bound, ASSIGNMENT_CAP, workers)
        if satisfies(M, Identity(u, v), workers=workers).holds
    ]
    return sorted(members, key=lambda w: (len(w), w))


# ------------------------------------------------------------------ isoterms

@dataclass
class IsotermVerdict:
    status: str  # Isoterm, NotIsoterm, IsotermUpToBound
    word: Word
    witness: Optional[Word] = None
    certificate: dict = field(default_factory=dict)
    bound: Optional[int] = None

    @property
    def isoterm(self) -> bool:
        return self.status != "NotIsoterm"

    def describe(self) -> str:
        text = f"{self.status}: {render(self.word)}"
        if self.witness is not None:
            text += f" (M satisfies {render(self.word)} = {render(self.witness)})"
        elif self.bound is not None:
            text += f" (no other word up to length {self.bound})"
        return text

    def to_json(self) -> dict:
        doc = {"status": self.status, "word": render(self.word), "certificate": self.certificate}
        if self.witness is not None:
            doc["witness"] = render(self.witness)
        if self.bound is not None:
            doc["bound"] = self.bound
        return doc


def power_isoterm(M: FiniteMonoid, c: int) -> IsotermVerdict:
    """Exact decision whether x^c is an isoterm for ``M``.

    An identity x^c = v collapses, after sending the other variables to 1
    (resp. x to 1), to x^c = x^j or to 1 = y^j.  The first is nontrivial for
    some j iff c reaches the largest index of a power cycle; the second holds
    for some j >= 1 iff every element has a power equal to the identity.
    """
    if c < 1:
        raise ValueError("c must be at least 1")
    x = ("x",)
    top, period = exponent_data(M)
    cert = {"max_index": top, "period_lcm": period, "argument": (
        "x^c = v collapses to x^c = x^j (other variables -> 1) or to 1 = y^j (x -> 1)")}
    if c >= top:
        return IsotermVerdict("NotIsoterm", x * c, x * (c + period), cert)
    if M.identity is not None and power_identity_holds(M, 0, period):
        cert["group"] = True
        return IsotermVerdict("NotIsoterm", x * c, x * c + ("y",) * period, cert)
    cert["group"] = False
    return IsotermVerdict("Isoterm", x * c, None, cert)


def is_isoterm(
    M: FiniteMonoid,
    u: Word,
    bound: Optional[int] = None,
    cap: int = SPACE_CAP,
    workers: int = 1,
    exact: bool = True,
) -> IsotermVerdict:
    """Exact when x and x^m (m the largest occurrence count) are isoterms, else bounded."""
    u = tuple(u)
    bound = len(u) + 2 if bound is None else bound
    top = max(occ(u, x) for x in set(u))
    if exact and M.identity is not None:
        single, power = power_isoterm(M, 1), power_isoterm(M, top)
        if single.isoterm and power.isoterm:
            cert = {
                "mode": "exact",
                "x_isoterm": single.certificate,
                f"x^{top}_isoterm": power.certificate,
                "candidates": "rearrangements of u",
            }
            keep = _PairFilter(M, u, ASSIGNMENT_CAP, workers)
            counts = {a: occ(u, a) for a in set(u)}
            for v in _distinct_permutations(counts):
                if v != u and keep(v) and satisfies(M, Identity(u, v), workers=workers).holds:
                    return IsotermVerdict("NotIsoterm", u, v, cert)
            return IsotermVerdict("Isoterm", u, None, cert)
    members = equivalence_class(M, u, bound, cap, workers)
    others = [v for v in members if v != u]
    cert = {"mode": "bounded", "class_size": len(members)}
    if others:
        return IsotermVerdict("NotIsoterm", u, others[0], cert, bound)
    return IsotermVerdict("IsotermUpToBound", u, None, cert, bound)


# ------------------------------------------------------------- check reports

@dataclass
class CheckReport:
    """Verdict for one hypothesis: pass, fail (with witness) or bounded-pass."""

    name: str
    status: str
    detail: str = ""
    witness: Optional[str] = None
    data: dict = field(default_factory=dict)
    hypothesis: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        doc = {"hypothesis": self.hypothesis, "name": self.name,
               "status": self.status, "detail": self.detail}
        if self.witness is not None:
            doc["witness"] = self.witness
        if self.data:
            doc["data"] = self.data
        return doc


def _window_report(name, M, u, bound, predicate, what, cap, workers):
    u = tuple(u)
    members = equivalence_class(M, u, bound, cap, workers)
    for v in members:
        if not predicate(v):
            return CheckReport(name, "fail", f"{what} fails in {render(u)} = {render(v)}",
                               f"{render(u)} = {render(v)}", {"bound": bound})
    return CheckReport(name, "bounded-pass",
                       f"{what} holds on all {len(members)} class members up to length {bound}",
                       data={"bound": bound, "class_size": len(members)})


def l_stable_wrt(M, u, X: Iterable[OccRef], bound=None, cap=SPACE_CAP, workers=1) -> CheckReport:
    X = list(X)
    u = tuple(u)
    bound = len(u) + 2 if bound is None else bound
    if not X:
        return CheckReport("l-stable", "pass", "empty occurrence set")
    shown = "{" + ", ".join(map(str, X)) + "}"
    return _window_report(
        f"l-stable {shown} in {render(u)}", M, u, bound,
        lambda v: occ_set_stable(l_map(u, v), X, u, v),
        f"l-stability of {shown}", cap, workers)


def var_stable_wrt(M, u, x: str, bound=None, cap=SPACE_CAP, workers=1) -> CheckReport:
    u = tuple(u)
    bound = len(u) + 2 if bound is None else bound
    if x not in u:
        return CheckReport(f"{x} stable in {render(u)}", "pass", f"{x} does not occur")
    return _window_report(
        f"{x} stable in {render(u)}", M, u, bound,
        lambda v: var_stable(u, v, x), f"stability of {x}", cap, workers)


def varset_stable_wrt(M, u, X: Iterable[str], bound=None, cap=SPACE_CAP, workers=1) -> CheckReport:
    u = tuple(u)
    X = set(X)
    bound = len(u) + 2 if bound is None else bound
    shown = "{" + ", ".join(sorted(X)) + "}"
    return _window_report(
        f"{shown} stable in {render(u)}", M, u, bound,
        lambda v: varset_stable(u, v, X), f"stability of {shown}", cap, workers)


def _runs(v):
    out = []
    for a in v:
        if out and out[-1][0] == a:
            out[-1][1] += 1
        else:
            out.append([a, 1])
    return out


def matches_shape(v: Word, u: Word, shape: str) -> bool:
    """Shape templates over the variables of ``u`` in order of appearance.

    ``xy``: x^i y^j with i, j > 1.  ``xyx``: x^i y^j x^k with i, k > 0, j > 1.
    ``fixed``: v equals u whenever the first letter of u occurs as often in v.
    """
    order = list(dict.fromkeys(u))
    runs = _runs(v)
    if shape == "xy":
        x, y = order
        return [a for a, _ in runs] == [x, y] and runs[0][1] > 1 and runs[1][1] > 1
    if shape == "xyx":
        x, y = order
        return [a for a, _ in runs] == [x, y, x] and runs[1][1] > 1
    if shape == "fixed":
        x = u[0]
        return occ(v, x) != occ(u, x) or tuple(v) == tuple(u)
    raise ValueError(f"unknown shape {shape!r}")


def class_shape(M, u, shape: str, bound=None, cap=SPACE_CAP, workers=1) -> CheckReport:
    u = tuple(u)
    bound = len(u) + 2 if bound is None else bound
    return _window_report(
        f"class of {render(u)} has shape {shape}", M, u, bound,
        lambda v: matches_shape(v, u, shape), f"shape {shape}", cap, workers)
