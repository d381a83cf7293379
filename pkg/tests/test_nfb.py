import json

import pytest

from nfbmonoids.monoids import dilworth, direct_product, trivial_monoid
from nfbmonoids.nfb import (
    CONDITIONS,
    check_bsnew,
    check_bsnew1,
    check_corollary_alg,
    check_el,
    check_psc,
    check_sl1,
    check_table_row,
    verify,
)
from nfbmonoids.schemes import isoterm_words, scheme
from nfbmonoids.words import parse_word

W = parse_word


def rees(*ws):
    return dilworth([W(w) for w in ws])


def test_sl1_on_l1_small_range(get_preset):
    rep = check_sl1(get_preset("L1"), (2, 3), bound=6)
    assert rep.passed and rep.overall == {"status": "all-pass"}
    assert "not a proof" in rep.scale_note


def test_sl1_non_example(get_preset):
    # S(xyyx) is too rigid for the x^m t x^c windows
    rep = check_sl1(rees("xyyx"), (2, 2), bound=5)
    assert not rep.passed


def test_el_on_l(get_preset):
    rep = check_el(get_preset("L"), 2, (2, 3))
    assert rep.passed
    e1 = [r for r in rep.reports if r.hypothesis == "ii"][0]
    assert e1.witness == "x->b, y->a"
    assert len([r for r in rep.reports if r.hypothesis == "iii"]) == 3


def test_el_non_example(get_preset):
    # the trivial monoid satisfies every identity, e1 included
    rep = check_el(trivial_monoid(), 2, (2, 2))
    assert rep.failed_hypotheses() == ["ii"]
    with pytest.raises(ValueError):
        check_el(get_preset("L"), 1)


def test_psc_on_brandt(get_preset):
    rep = check_psc(get_preset("brandt"), (2, 3), 6)
    assert rep.passed


def test_psc_non_example(get_preset):
    rep = check_psc(get_preset("L1"), (2, 2), 5)
    assert not rep.passed


@pytest.mark.parametrize("row", range(1, 9))
def test_table_rows_on_their_rees_monoid(row):
    params = {"m": 3} if row == 8 else {}
    S = dilworth(sorted(isoterm_words(scheme(f"row{row}", n=2, **params))))
    rep = check_table_row(S, row, params, (2, 2))
    assert rep.passed, rep.describe()


def test_table_row_non_example():
    rep = check_table_row(trivial_monoid(), 1, None, (2, 2))
    assert rep.failed_hypotheses() == ["a"]
    with pytest.raises(ValueError):
        check_table_row(trivial_monoid(), 9)
    with pytest.raises(ValueError):
        check_table_row(trivial_monoid(), 8)


def test_bsnew_on_ut4_fails_only_iii(get_preset):
    rep = check_bsnew(get_preset("ut4"), 3, (2, 3))
    assert rep.failed_hypotheses() == ["iii"]
    assert rep.overall["witness"] == "x t1 x t2 x = x t1 x x t2 x"


def test_bsnew_product_passes(get_preset):
    P = direct_product(get_preset("ut4"), rees("a t1 a t2 a"))
    rep = check_bsnew(P, 3, (2, 3))
    assert rep.passed
    assert any("cross-check" in r.name and r.status == "pass" for r in rep.reports)


def test_bsnew1_product_and_factors(get_preset):
    A01 = get_preset("A01")
    S = rees("ata")
    assert check_bsnew1(direct_product(A01, S), 1, (2, 3)).passed
    a = check_bsnew1(A01, 1, (2, 3))
    assert a.failed_hypotheses() == ["ii"]
    assert a.overall["witness"] == "x t x = x t x x"
    assert check_bsnew1(S, 1, (2, 3)).failed_hypotheses() == ["iii"]


def test_corollary_alg():
    assert check_corollary_alg([W("aata"), W("ataa")], 2).passed
    assert check_corollary_alg([W("ata")], 1).passed
    r = check_corollary_alg([W("aa")], 2)
    assert not r.passed and r.hypothesis == "b"
    r = check_corollary_alg([W("abab")], 1)
    assert not r.passed and r.hypothesis == "a"


def test_reports_are_deterministic(get_preset):
    a = check_psc(get_preset("brandt"), (2, 2), 5, workers=1).dumps()
    b = check_psc(get_preset("brandt"), (2, 2), 5, workers=2).dumps()
    assert a == b
    doc = json.loads(a)
    assert set(doc) == {"condition", "monoid", "params", "overall", "reports", "scale_note"}


def test_n_range_validation(get_preset):
    with pytest.raises(ValueError):
        check_psc(get_preset("brandt"), (1, 3))
    with pytest.raises(ValueError):
        check_psc(get_preset("brandt"), (4, 3))


def test_verify_dispatch(get_preset):
    assert "alg" in CONDITIONS and len(CONDITIONS) == 14
    assert verify("el", get_preset("L"), n_range=(2, 2)).passed
    assert verify("row1", rees("xyyx"), n_range=(2, 2)).passed
    with pytest.raises(ValueError):
        verify("nope", get_preset("L"))


def test_describe_mentions_witness(get_preset):
    text = check_bsnew1(get_preset("A01"), 1, (2, 2)).describe()
    assert "witness: x t x = x t x x" in text and "FAIL (ii)" in text
