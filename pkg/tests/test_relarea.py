from __future__ import annotations

import pytest

from relhyplab.errors import NotTrivialInG
from relhyplab.relarea import (
    RelPresentation,
    check_linear_bound,
    fp_normal_form,
    is_trivial_in_F,
    rel_area,
)
from relhyplab.specfile import parse_word
from relhyplab.words import format_word


@pytest.fixture()
def pres237(q237):
    return RelPresentation(q237, [parse_word(q237, "( a b )^7")])


@pytest.fixture()
def pres_free(zz):
    return RelPresentation(zz, [])


class TestFpNormalForm:
    def test_syllable_merge(self, pres237, q237):
        # two peripheral letters of one factor merge into one syllable...
        word = parse_word(q237, "a 1:1 1:1")
        assert format_word(fp_normal_form(pres237, word)) == "0:1 1:2"
        # ...and vanish when the product is the factor identity
        word = parse_word(q237, "a 1:1 1:2")
        assert format_word(fp_normal_form(pres237, word)) == "0:1"

    def test_x_cancellation(self, pres_free, zz):
        assert fp_normal_form(pres_free, parse_word(zz, "a a^-1")) == ()

    def test_relator_nontrivial_in_F(self, pres237, q237):
        word = parse_word(q237, "( a b )^7")
        assert not is_trivial_in_F(pres237, word)
        assert len(fp_normal_form(pres237, word)) == 14


class TestRelArea:
    def test_empty_word(self, pres237):
        assert rel_area(pres237, ()).area == 0

    def test_single_relator_application(self, pres237, q237):
        res = rel_area(pres237, parse_word(q237, "( a b )^7"), cap_k=3)
        assert (res.area, res.status) == (1, "exact")

    def test_double_relator(self, pres237, q237):
        res = rel_area(pres237, parse_word(q237, "( a b )^14"), cap_k=3)
        assert (res.area, res.status) == (2, "exact")

    def test_not_trivial_rejected(self, pres237, q237):
        with pytest.raises(NotTrivialInG):
            rel_area(pres237, parse_word(q237, "a b"))

    def test_free_product_trivial_words_have_area_zero(self, pres_free, zz):
        assert rel_area(pres_free, parse_word(zz, "a^3 b b^-1 a^-3")).area == 0

    def test_unknown_when_out_of_relators(self, pres_free, zz):
        with pytest.raises(NotTrivialInG):
            rel_area(pres_free, parse_word(zz, "a b"))

    def test_subadditivity(self, pres237, q237):
        a1 = rel_area(pres237, parse_word(q237, "( a b )^7"), cap_k=3).area
        a2 = rel_area(pres237, parse_word(q237, "( a b )^14"), cap_k=3).area
        a3 = rel_area(pres237, parse_word(q237, "( a b )^21"), cap_k=4).area
        assert a3 is not None and a3 <= a1 + a2

    def test_conjugation_invariance(self, pres237, q237):
        base = rel_area(pres237, parse_word(q237, "( a b )^7"), cap_k=3).area
        conj = rel_area(pres237, parse_word(q237, "b ( a b )^7 b^-1"), cap_k=3).area
        assert conj == base

    def test_area_zero_iff_trivial_in_F(self, pres237, q237):
        word = parse_word(q237, "a a")
        assert is_trivial_in_F(pres237, word)
        assert rel_area(pres237, word).area == 0


class TestLinearBound:
    def test_free_product_all_zero(self, pres_free, zz):
        samples = [parse_word(zz, "a b b^-1 a^-1"), parse_word(zz, "a^2 a^-2")]
        rep = check_linear_bound(pres_free, samples, 1)
        assert rep.ok and rep.max_ratio == "0"

    def test_powers_ratio(self, pres237, q237):
        samples = [parse_word(q237, f"( a b )^{7 * j}") for j in (1, 2, 3)]
        rep = check_linear_bound(pres237, samples, "1/14", cap_k=3)
        assert [row["area"] for row in rep.samples] == [1, 2, 3]
        assert rep.max_ratio == "1/14"
        assert rep.ok

    def test_nontrivial_sample_rejected(self, pres237, q237):
        rep = check_linear_bound(pres237, [parse_word(q237, "a b")], 1)
        assert rep.samples[0]["note"] == "rejected: not trivial in G"
        assert rep.samples[0]["area"] is None

    def test_violations_reported(self, pres237, q237):
        rep = check_linear_bound(pres237, [parse_word(q237, "( a b )^7")],
                                 "1/100", cap_k=2)
        assert not rep.ok and rep.violations
