"""Word kernel: parsing, occurrences, occurrence maps and scattered subwords.

A word is a plain tuple of variable tokens, e.g. ``("x", "t1", "x")``.  The
empty tuple is the empty word (the monoid identity, written ``1``).
Occurrences are referenced as ``OccRef(var, i)`` meaning the i-th occurrence
of ``var`` from the left; positions reported by this module are 1-based.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from itertools import chain
from typing import Iterable, Mapping, NamedTuple, Sequence

Word = tuple  # tuple[str, ...]

TOKEN_RE = re.compile(r"[A-Za-z][0-9]*\Z")
_SPACED_RE = re.compile(r"([A-Za-z][0-9]*)(?:\^([0-9]+))?\Z")
_GLUED_RE = re.compile(r"([A-Za-z])(?:\^([0-9]+))?")


class WordSyntaxError(ValueError):
    """Raised for malformed word or identity text."""


class OccRef(NamedTuple):
    var: str
    index: int

    def __str__(self):
        return f"_{self.index}{self.var}"


class Identity(NamedTuple):
    lhs: Word
    rhs: Word

    @property
    def trivial(self) -> bool:
        return tuple(self.lhs) == tuple(self.rhs)

    @property
    def regular(self) -> bool:
        return set(self.lhs) == set(self.rhs)

    @property
    def variables(self) -> list:
        """Variables in order of first appearance, lhs first."""
        return list(dict.fromkeys(chain(self.lhs, self.rhs)))

    def __str__(self):
        return f"{render(self.lhs)} = {render(self.rhs)}"


# ---------------------------------------------------------------- parsing

def _expand(token, exp, text):
    if exp is None:
        return [token]
    k = int(exp)
    if k == 0:
        raise WordSyntaxError(f"zero exponent in {text!r}")
    return [token] * k


def parse_word(text: str) -> Word:
    """Parse ``"x y y x"``, ``"xyyx"`` or ``"x^3 t1 x"``; ``"1"`` is the empty word."""
    text = text.strip()
    if not text:
        raise WordSyntaxError("empty input (write the empty word as 1)")
    if text == "1":
        return ()
    letters = []
    parts = text.split()
    if len(parts) > 1 or _SPACED_RE.match(parts[0]):
        for part in parts:
            m = _SPACED_RE.match(part)
            if not m:
                raise WordSyntaxError(f"malformed token {part!r} in {text!r}")
            letters.extend(_expand(m.group(1), m.group(2), text))
        return tuple(letters)
    pos = 0
    while pos < len(text):
        m = _GLUED_RE.match(text, pos)
        if not m:
            raise WordSyntaxError(f"malformed word {text!r} at offset {pos}")
        letters.extend(_expand(m.group(1), m.group(2), text))
        pos = m.end()
    return tuple(letters)


def parse_identity(text: str) -> Identity:
    """Parse ``"LHS = RHS"`` (``≈`` is accepted in place of ``=``)."""
    sides = re.split(r"≈|=", text)
    if len(sides) != 2:
        raise WordSyntaxError(f"expected exactly one '=' in {text!r}")
    return Identity(parse_word(sides[0]), parse_word(sides[1]))


def render(u: Sequence[str]) -> str:
    return " ".join(u) if len(u) else "1"


def word(*letters: str) -> Word:
    for a in letters:
        if not TOKEN_RE.match(a):
            raise WordSyntaxError(f"malformed token {a!r}")
    return tuple(letters)


# ----------------------------------------------------- content and counts

@dataclass(frozen=True)
class Profile:
    content: frozenset
    occ: Mapping[str, int]
    linear: frozenset
    nonlinear: frozenset


def profile(u: Word) -> Profile:
    occ = Counter(u)
    return Profile(
        content=frozenset(occ),
        occ=dict(occ),
        linear=frozenset(x for x, c in occ.items() if c == 1),
        nonlinear=frozenset(x for x, c in occ.items() if c >= 2),
    )


def content(u: Word) -> frozenset:
    return frozenset(u)


def occ(u: Word, x: str) -> int:
    return sum(1 for a in u if a == x)


def ocs(u: Word) -> list:
    """All occurrences of ``u`` in position order."""
    seen = Counter()
    out = []
    for a in u:
        seen[a] += 1
        out.append(OccRef(a, seen[a]))
    return out


def positions(u: Word) -> dict:
    """Map each occurrence of ``u`` to its 1-based position."""
    return {c: p for p, c in enumerate(ocs(u), start=1)}


def position(u: Word, c: OccRef) -> int:
    pos = positions(u)
    if c not in pos:
        raise ValueError(f"{c} is not an occurrence in {render(u)}")
    return pos[c]


def last(u: Word, x: str) -> OccRef:
    k = occ(u, x)
    if k == 0:
        raise ValueError(f"{x} does not occur in {render(u)}")
    return OccRef(x, k)


def project(u: Word, X: Iterable[str]) -> Word:
    """Delete every letter of ``u`` not in ``X``."""
    keep = set(X)
    return tuple(a for a in u if a in keep)


def erase(u: Word, X: Iterable[str]) -> Word:
    """Delete every letter of ``u`` that is in ``X``."""
    drop = set(X)
    return tuple(a for a in u if a not in drop)


# -------------------------------------------------------- occurrence maps

@dataclass(frozen=True)
class OccMap:
    """Partial injection from occurrences of ``source`` to occurrences of ``target``."""

    kind: str  # "L" or "E"
    source: Word
    target: Word
    assignment: Mapping[OccRef, OccRef] = field(repr=False)

    @property
    def domain(self) -> frozenset:
        return frozenset(self.assignment)

    def __call__(self, c: OccRef) -> OccRef:
        return self.assignment[c]

    def defined_on(self, X: Iterable[OccRef]) -> bool:
        return all(c in self.assignment for c in X)


def l_map(u: Word, v: Word) -> OccMap:
    """The map sending the i-th occurrence of x in u to the i-th one in v."""
    if not set(u) & set(v):
        raise ValueError("l_map needs words with a common variable")
    ou, ov = Counter(u), Counter(v)
    assignment = {}
    for x in ou:
        for i in range(1, min(ou[x], ov[x]) + 1):
            assignment[OccRef(x, i)] = OccRef(x, i)
    return OccMap("L", tuple(u), tuple(v), assignment)


def e_map(u: Word, v: Word) -> OccMap:
    """First-to-first and last-to-last map on variables non-linear in both words."""
    ou, ov = Counter(u), Counter(v)
    shared = [x for x in ou if ou[x] >= 2 and ov[x] >= 2]
    if not shared:
        raise ValueError("e_map needs a variable non-linear in both words")
    assignment = {}
    for x in shared:
        assignment[OccRef(x, 1)] = OccRef(x, 1)
        assignment[OccRef(x, ou[x])] = OccRef(x, ov[x])
    return OccMap("E", tuple(u), tuple(v), assignment)


def compose(f: OccMap, g: OccMap) -> dict:
    """Pointwise ``g(f(c))`` wherever defined (apply f first)."""
    return {c: g.assignment[d] for c, d in f.assignment.items() if d in g.assignment}


def occ_set_stable(f: OccMap, X: Iterable[OccRef], u: Word = None, v: Word = None) -> bool:
    """True iff ``f`` is defined on ``X`` and preserves the position order of ``X``."""
    u = f.source if u is None else u
    v = f.target if v is None else v
    X = list(X)
    if not f.defined_on(X):
        return False
    pu, pv = positions(u), positions(v)
    if any(c not in pu for c in X):
        raise ValueError("X is not a set of occurrences of u")
    ordered = sorted(X, key=pu.__getitem__)
    images = [pv[f(c)] for c in ordered]
    return all(a < b for a, b in zip(images, images[1:]))


def var_stable(u: Word, v: Word, x: str) -> bool:
    return occ(u, x) == occ(v, x)


def varset_stable(u: Word, v: Word, X: Iterable[str]) -> bool:
    X = set(X)
    return project(u, X) == project(v, X)


def adjacent_pairs(u: Word, X: Iterable[OccRef]) -> list:
    pu = positions(u)
    ordered = sorted(X, key=pu.__getitem__)
    return list(zip(ordered, ordered[1:]))


def is_trivial_by_stability(u: Word, v: Word) -> bool:
    """Triviality test through l-stability of ocs(u) and stability of every variable."""
    if not u and not v:
        return True
    if not set(u) & set(v):
        return False
    if set(u) != set(v):
        return False
    return occ_set_stable(l_map(u, v), ocs(u), u, v) and all(
        var_stable(u, v, x) for x in set(u)
    )


# ---------------------------------------------------------- substitutions

def apply_substitution(theta: Mapping[str, Word], u: Word, monoid: bool = False) -> Word:
    """Concatenate the images of the letters of ``u``.

    Empty images are allowed only with ``monoid=True``.
    """
    out = []
    for a in u:
        if a not in theta:
            raise KeyError(f"substitution undefined on {a}")
        img = tuple(theta[a])
        if not img and not monoid:
            raise ValueError(f"empty image of {a} outside monoid mode")
        out.extend(img)
    return tuple(out)


def _blocks(theta, u):
    start = 1
    for c in ocs(u):
        n = len(theta[c.var])
        yield c, range(start, start + n)
        start += n


def occ_image(theta: Mapping[str, Word], u: Word, c: OccRef) -> range:
    """1-based positions of ``theta(u)`` produced by the occurrence ``c`` of ``u``."""
    for d, block in _blocks(theta, u):
        if d == c:
            return block
    raise ValueError(f"{c} is not an occurrence in {render(u)}")


def occ_preimage(theta: Mapping[str, Word], u: Word, C: OccRef) -> OccRef:
    """The occurrence of ``u`` whose image block contains occurrence ``C`` of theta(u)."""
    U = apply_substitution(theta, u, monoid=True)
    pos = positions(U)
    if C not in pos:
        raise ValueError(f"{C} is not an occurrence in {render(U)}")
    p = pos[C]
    for d, block in _blocks(theta, u):
        if p in block:
            return d
    raise AssertionError("unreachable: blocks cover theta(u)")


def var_preimage(theta: Mapping[str, Word], Y: Iterable[str]) -> frozenset:
    Y = set(Y)
    return frozenset(x for x, img in theta.items() if set(img) & Y)


# -------------------------------------------------------- scattered words

@dataclass(frozen=True)
class SubwordProfile:
    max_len: int
    subwords: tuple  # sorted by (length, letters)

    def __contains__(self, w):
        return tuple(w) in set(self.subwords)


def _subword_set(u: Word, m: int) -> set:
    found = {()}
    for a in u:
        found |= {s + (a,) for s in found if len(s) < m}
    found.discard(())
    return found


def scattered_subwords(u: Word, m: int) -> SubwordProfile:
    if m < 1:
        raise ValueError("m must be at least 1")
    return SubwordProfile(m, tuple(sorted(_subword_set(u, m), key=lambda w: (len(w), w))))


def jm_equivalent(u: Word, v: Word, m: int) -> bool:
    """Do ``u`` and ``v`` have the same scattered subwords of length at most ``m``?"""
    if m < 1:
        raise ValueError("m must be at least 1")
    return _subword_set(u, m) == _subword_set(v, m)


def is_subsequence(w: Word, u: Word) -> bool:
    it = iter(u)
    return all(a in it for a in w)
