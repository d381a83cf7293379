"""Generators for the parametric word and identity families.

Every generator returns fully expanded words: blocks, decorations and
exponents are unfolded into plain tuples of tokens.  Indexed variables are
named by base letter and index (``y1``, ``y2``); inserted linear letters are
``t1``, ``t2``, ... numbered left to right across the whole identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .words import Identity, Word

# block kind -> (base letters, reversed)
BLOCKS = {
    "Xn": ("x", False), "nX": ("x", True),
    "Yn": ("y", False), "nY": ("y", True),
    "Zn": ("z", False), "nZ": ("z", True),
    "XYn": ("xy", False), "ZYn": ("zy", False),
    "ZPn": ("zp", False), "ZQn": ("zq", False),
    "PRn": ("pr", False), "QRn": ("qr", False),
}

ROLE_BY_BASE = {"x": "x-like", "y": "y-indexed", "z": "z-indexed", "p": "p-indexed",
                "q": "q-indexed", "r": "r-indexed", "t": "linear-t"}


def block(kind: str, n: int, bases: Optional[str] = None) -> Word:
    """``block("Xn", 3)`` is x1 x2 x3; ``block("XYn", 2)`` is x1 y1 x2 y2."""
    if n < 1:
        raise ValueError("block length n must be at least 1")
    if kind not in BLOCKS:
        raise ValueError(f"unknown block kind {kind!r}")
    default, backwards = BLOCKS[kind]
    bases = default if bases is None else bases
    if len(bases) != len(default):
        raise ValueError(f"block {kind} takes {len(default)} base name(s)")
    idx = range(n, 0, -1) if backwards else range(1, n + 1)
    return tuple(f"{b}{i}" for i in idx for b in bases)


def decorate(u: Word, side: str, start: int = 1, prefix: str = "t") -> Word:
    """Insert a fresh linear letter after (or before) every letter of ``u``.

    Fresh letters are ``prefix`` + counter from ``start``; the prefix is
    lengthened with underscores if it would clash with a letter of ``u``.
    """
    if not u:
        raise ValueError("decorate needs a nonempty word")
    if side not in ("after", "before"):
        raise ValueError("side must be 'after' or 'before'")
    taken = set(u)
    while any(f"{prefix}{i}" in taken for i in range(start, start + len(u))):
        prefix += "_"
    out = []
    for i, a in enumerate(u):
        t = f"{prefix}{start + i}"
        out.extend((a, t) if side == "after" else (t, a))
    return tuple(out)


def zimin(k: int) -> Word:
    if k < 1:
        raise ValueError("zimin needs k >= 1")
    z = ("x1",)
    for i in range(2, k + 1):
        z = z + (f"x{i}",) + z
    return z


def _squares(base: str, n: int) -> Word:
    return tuple(a for i in range(1, n + 1) for a in (f"{base}{i}",) * 2)


def _powers(base: str, n: int, k: int, backwards: bool = False) -> Word:
    idx = range(n, 0, -1) if backwards else range(1, n + 1)
    return tuple(a for i in idx for a in (f"{base}{i}",) * k)


def _w(*parts) -> Word:
    out = []
    for p in parts:
        out.extend((p,) if isinstance(p, str) else p)
    return tuple(out)


def _p(letter: str, k: int) -> Word:
    return (letter,) * k


# scheme name -> (required parameters, lower bounds)
PARAMS = {
    **{f"row{i}": {"n": 2} for i in range(1, 8)},
    "row8": {"n": 2, "m": 3},
    "sl1": {"n": 2},
    "trahtman": {"n": 2},
    "jackson_alt": {"n": 2},
    "psc": {"n": 2},
    "el": {"k": 2, "n": 2},
    "el_e1": {"k": 2},
    "el_e2": {"k": 2},
    "bsnew": {"m": 3, "n": 2},
    "bsnew1": {"m": 1, "n": 2},
    "blanchet_sadri": {"m": 4, "n": 2},
    "zimin": {"k": 1},
}

CONVENTION_DEPENDENT = {"blanchet_sadri"}


@dataclass(frozen=True)
class SchemeId:
    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in PARAMS:
            raise ValueError(f"unknown scheme {self.name!r}; choose from {', '.join(PARAMS)}")
        need = PARAMS[self.name]
        extra = set(self.params) - set(need)
        if extra:
            raise ValueError(f"scheme {self.name} does not take {', '.join(sorted(extra))}")
        for key, low in need.items():
            if key not in self.params:
                raise ValueError(f"scheme {self.name} needs parameter {key}")
            val = self.params[key]
            if not isinstance(val, int) or isinstance(val, bool) or val < low:
                raise ValueError(f"scheme {self.name} needs {key} >= {low}, got {val!r}")

    def __getattr__(self, key):
        params = self.__dict__.get("params", {})
        if key in params:
            return params[key]
        raise AttributeError(key)

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.params.items()))))

    def __str__(self):
        args = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}({args})"


def scheme(name: str, **params) -> SchemeId:
    return SchemeId(name, dict(params))


@dataclass(frozen=True)
class SchemeOutput:
    scheme: SchemeId
    identities: tuple = ()
    words: tuple = ()
    variable_roles: dict = field(default_factory=dict)
    convention_dependent: bool = False

    @property
    def identity(self) -> Optional[Identity]:
        return self.identities[0] if self.identities else None


def _role(v: str) -> str:
    base = v.rstrip("0123456789").rstrip("_")
    if base == v and v != "t":
        return "x-like"
    return ROLE_BY_BASE.get(base, "x-like")


def _roles(words) -> dict:
    letters = dict.fromkeys(a for w in words for a in w)
    return {a: _role(a) for a in letters}


def _identities(s: SchemeId) -> list:
    name = s.name
    n = s.params.get("n")
    m = s.params.get("m")
    k = s.params.get("k")
    Xn, nX = block("Xn", n or 1), block("nX", n or 1)
    Yn, nY = block("Yn", n or 1), block("nY", n or 1)
    Zn, nZ = block("Zn", n or 1), block("nZ", n or 1)
    if name == "row1":
        return [(_w("x", "x", Yn, nY), _w(Yn, nY, "x", "x"))]
    if name == "row2":
        Zt = decorate(Zn, "after")
        return [(_w(Zt, "y", "x", "x", Zn, "y"), _w(Zt, "x", "x", "y", Zn, "y"))]
    if name == "row3":
        head = decorate(block("ZPn", n), "after")
        tail = decorate(block("QRn", n), "before", start=2 * n + 1)
        ZQ, PR = block("ZQn", n), block("PRn", n)
        return [(_w(head, "x", ZQ, "x", "y", PR, "y", tail),
                 _w(head, "x", ZQ, "y", "x", PR, "y", tail))]
    if name == "row4":
        Z2 = _squares("z", n)
        return [(_w("x", "y", "t", "y", Z2, "x"), _w("y", "x", "t", "y", Z2, "x"))]
    if name == "row5":
        return [(_w("x", "y", Zn, "y", "x", "t", nZ), _w("y", "x", Zn, "x", "y", "t", nZ))]
    if name == "row6":
        return [(_w("x", "y", Zn, "x", "y", "t", nZ), _w("y", "x", Zn, "y", "x", "t", nZ))]
    if name == "row7":
        return [(_w(Xn, nX, Yn, nY), _w(Yn, nY, Xn, nX))]
    if name == "row8":
        P2 = _squares("p", n)
        return [(_w("y", "t1", _p("x", m - 1), "y", P2, "z", "x", "t2", "z"),
                 _w("y", "t1", _p("x", m), "y", P2, "z", "t2", "z"))]
    if name == "sl1":
        return [(_w(Xn, Yn, nX, nY), _w(Yn, Xn, nY, nX))]
    if name == "trahtman":
        base = _w(Xn, "y", nX, "y", Xn)
        return [(base, _w(base, "y", nX, "y", Xn))]
    if name == "jackson_alt":
        return [(_w("x", Yn, "t", "x", nY), _w(Yn, "x", "t", nY, "x"))]
    if name == "psc":
        return [(_w("x", Yn, "x", nY), _w("x", nY, "x", Yn))]
    if name == "el":
        return [(_w("x", _powers("y", n, k), "x"), _w("x", _powers("y", n, k, True), "x"))]
    if name == "el_e1":
        xk, yk = _p("x", k), _p("y", k)
        return [(_w(xk, yk, xk), _w(xk, *[_w(yk, xk)] * (k + 1)))]
    if name == "el_e2":
        return [
            (_p("x", k + 2), _p("x", 2)),
            (_w(_p("x", k + 1), "y", "x"), ("x", "y", "x")),
            (_w("x", "y", _p("x", k + 1)), ("x", "y", "x")),
        ]
    if name == "bsnew":
        return [(_w(_p("x", m - 2), Yn, "x", nY, "x"), _w(_p("x", m - 1), Yn, "x", nY, "x"))]
    if name == "bsnew1":
        Y2 = _squares("y", n)
        return [(_w(_p("x", m), Y2, "x"), _w(_p("x", m + 1), Y2, "x"))]
    if name == "blanchet_sadri":
        tail = _w(block("ZYn", n), "x", Yn, Zn, "x")
        return [(_w(_p("x", m - 2), tail), _w(_p("x", m - 1), tail))]
    return []


def _isoterm_words(s: SchemeId) -> list:
    name, m = s.name, s.params.get("m")
    if name == "row1":
        return [("x", "y", "y", "x")]
    if name == "row2":
        return [tuple("yxxty"), tuple("ytxxy")]
    if name in ("row3", "row7"):
        words = [("x", "t1", "x", "y", "t2", "y")]
        return words + ([("x", "y", "y", "x")] if name == "row7" else [])
    if name == "row4":
        return [("x", "x", "y", "y"), ("x", "y", "t1", "y", "t2", "x")]
    if name in ("row5", "row6"):
        return [("x", "t1", "y", "x", "t2", "y"), tuple("xytxy"), tuple("xytyx")]
    if name == "row8":
        out = [("x", "x", "y", "y")]
        for d in range(1, m):
            out.append(_w("y", "t1", "y", _p("x", d), "t2", _p("x", m - d)))
            out.append(_w(_p("x", m - d), "t1", _p("x", d), "y", "t2", "y"))
        return out
    if name == "psc":
        return [tuple("xytyx"), tuple("xtyxy")]
    if name == "bsnew":
        return [tuple("xyyx"), _p("x", m - 1), _w(_p("x", m - 2), "t1", "x", "t2", "x")]
    if name == "zimin":
        return [zimin(s.params["k"])]
    return []


def generate(s: SchemeId) -> SchemeOutput:
    """Expand a scheme into its identities (several for ``el_e2``) or words (``zimin``)."""
    ids = tuple(Identity(l, r) for l, r in _identities(s))
    words = tuple(_isoterm_words(s)) if s.name == "zimin" else ()
    every = [w for i in ids for w in i] + list(words)
    return SchemeOutput(s, ids, words, _roles(every), s.name in CONVENTION_DEPENDENT)


def isoterm_words(s: SchemeId) -> set:
    """The set W of words that must be isoterms (empty for schemes without one)."""
    return set(_isoterm_words(s))
