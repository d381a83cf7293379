"""Property bodies shared by the unit suites and the acceptance run.

Each property is registered with its strategies so the same body can be
driven at a small example count in the unit tests and at 1000+ examples in
the acceptance suite.
"""
from dataclasses import dataclass
from functools import lru_cache

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from nfbmonoids.decide import is_isoterm, satisfies, verify_witness
from nfbmonoids.monoids import dilworth, direct_product, preset
from nfbmonoids.words import (
    Identity,
    apply_substitution,
    compose,
    content,
    e_map,
    erase,
    jm_equivalent,
    l_map,
    occ,
    occ_preimage,
    occ_set_stable,
    ocs,
    positions,
    project,
)

from strategies import substitutions, words


@dataclass
class Property:
    name: str
    body: object
    strategies: tuple
    suite: str


PROPERTIES = {}


def prop(suite, *strategies):
    def deco(fn):
        PROPERTIES[fn.__name__] = Property(fn.__name__, fn, strategies, suite)
        return fn
    return deco


def make_test(name, max_examples):
    p = PROPERTIES[name]
    test = given(*p.strategies)(p.body)
    return settings(max_examples=max_examples, deadline=None, derandomize=False,
                    suppress_health_check=list(HealthCheck))(test)


@lru_cache(maxsize=None)
def _preset(name):
    return preset(name)


@lru_cache(maxsize=None)
def _rees(ws):
    return dilworth([tuple(w) for w in ws])


@lru_cache(maxsize=None)
def _product():
    return direct_product(_preset("A01"), _rees(("ata",)))


def _overlapping(u, v, w):
    return set(u) & set(v) and set(v) & set(w) and set(u) & set(w)


# ------------------------------------------------------------------ words

@prop("good collection", words("xyz", 1, 8), words("xyz", 1, 8), words("xyz", 1, 8))
def l_map_good_collection(u, v, w):
    if not _overlapping(u, v, w):
        return
    assert all(l_map(u, u)(c) == c for c in ocs(u))
    fuv, fvw, fuw = l_map(u, v), l_map(v, w), l_map(u, w)
    for c, d in compose(fuv, fvw).items():
        assert fuw(c) == d


@prop("good collection", words("xyz", 2, 8), words("xyz", 2, 8), words("xyz", 2, 8))
def e_map_good_collection(u, v, w):
    try:
        fuv, fvw, fuw = e_map(u, v), e_map(v, w), e_map(u, w)
    except ValueError:
        return
    for c, d in compose(fuv, fvw).items():
        assert fuw(c) == d


@prop("stability transitivity", words("xyz", 1, 8), words("xyz", 1, 8), words("xyz", 1, 8),
      st.data())
def stability_transitive_l(u, v, w, data):
    if not _overlapping(u, v, w):
        return
    fuv, fvw, fuw = l_map(u, v), l_map(v, w), l_map(u, w)
    X = data.draw(st.sets(st.sampled_from(ocs(u))))
    if occ_set_stable(fuv, X, u, v) and occ_set_stable(fvw, [fuv(c) for c in X], v, w):
        assert occ_set_stable(fuw, X, u, w)


@prop("stability transitivity", words("xyz", 2, 8), words("xyz", 2, 8), words("xyz", 2, 8),
      st.data())
def stability_transitive_e(u, v, w, data):
    try:
        fuv, fvw, fuw = e_map(u, v), e_map(v, w), e_map(u, w)
    except ValueError:
        return
    X = data.draw(st.sets(st.sampled_from(sorted(fuv.domain))))
    if occ_set_stable(fuv, X, u, v) and occ_set_stable(fvw, [fuv(c) for c in X], v, w):
        assert occ_set_stable(fuw, X, u, w)


@prop("occ_preimage", words("xyz", 1, 8), substitutions("xyz", "ab", 3, allow_empty=True))
def occ_preimage_monotone(u, theta):
    U = apply_substitution(theta, u, monoid=True)
    pu = positions(u)
    pre = [pu[occ_preimage(theta, u, C)] for C in ocs(U)]
    assert pre == sorted(pre)


@prop("occ_preimage", words("xyz", 1, 8), substitutions("xyz", "ab", 3, allow_empty=True))
def preimage_counting(u, theta):
    U = apply_substitution(theta, u, monoid=True)
    for C in ocs(U):
        d = occ_preimage(theta, u, C)
        assert occ(u, d.var) <= occ(U, C.var)
        assert d.index <= C.index


@prop("project/erase", words(), words(), st.sets(st.sampled_from("xyz")))
def project_erase_duality(u, v, X):
    assert erase(u, X) == project(u, content(u) - X)
    assert project(u + v, X) == project(u, X) + project(v, X)
    assert sorted(project(u, X) + erase(u, X)) == sorted(u)


@prop("jm", words("xy", 0, 8), words("xy", 0, 8), words("xy", 0, 8), st.integers(1, 4))
def jm_equivalence_and_monotone(u, v, w, m):
    assert jm_equivalent(u, u, m)
    assert jm_equivalent(u, v, m) == jm_equivalent(v, u, m)
    if jm_equivalent(u, v, m) and jm_equivalent(v, w, m):
        assert jm_equivalent(u, w, m)
    if jm_equivalent(u, v, m + 1):
        assert jm_equivalent(u, v, m)


@prop("jm", words("xy", 0, 6), words("xy", 0, 6), words("xy", 0, 6), words("xy", 0, 6),
      st.integers(1, 3))
def jm_congruence(u, u2, v, v2, m):
    if jm_equivalent(u, u2, m) and jm_equivalent(v, v2, m):
        assert jm_equivalent(u + v, u2 + v2, m)


# ----------------------------------------------------------------- decide

_identities = st.tuples(words("xyz", 1, 6), words("xyz", 1, 6)).map(lambda p: Identity(*p))


@prop("satisfies", st.sampled_from(["L1", "A01", "brandt"]), _identities,
      substitutions("xyz", "xy", 3, allow_empty=True))
def substitution_closure(name, ident, theta):
    M = _preset(name)
    if not satisfies(M, ident).holds:
        return
    image = Identity(apply_substitution(theta, ident.lhs, True),
                     apply_substitution(theta, ident.rhs, True))
    assert satisfies(M, image).holds


@prop("satisfies", _identities)
def product_factorization(ident):
    P = _product()
    fast = satisfies(P, ident)
    assert fast.holds == all(satisfies(f, ident).holds for f in P.factors)
    assert fast.holds == satisfies(P, ident, method="brute").holds
    if not fast.holds:
        assert verify_witness(P, ident, fast.witness)


_rees_sets = st.lists(words("atb", 1, 5), min_size=1, max_size=2).map(
    lambda ws: tuple(sorted({"".join(w) for w in ws})))


@prop("isoterm", _rees_sets, words("xyt", 1, 5))
def exact_matches_bounded(ws, u):
    S = _rees(ws)
    exact = is_isoterm(S, u)
    if exact.certificate["mode"] != "exact":
        return
    bounded = is_isoterm(S, u, len(u), exact=False)
    assert exact.isoterm == bounded.isoterm
    if not exact.isoterm:
        assert satisfies(S, Identity(u, exact.witness)).holds
