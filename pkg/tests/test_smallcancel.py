from __future__ import annotations

from fractions import Fraction

import pytest

from relhyplab.errors import OutOfRange
from relhyplab.smallcancel import RelatorFamily, check_Cprime, max_piece_fraction


class TestRelatorFamily:
    def test_first_relator_shape(self):
        fam = RelatorFamily(alphabet_size=1, n=3, i_max=4)
        # w_1 = x, so the relator is x^-1 a_1 a_2 a_3 with n+1 syllables
        assert fam.relator(1) == ((0, (-1,)), (1, 1), (2, 1), (3, 1))
        assert len(fam.relator(1)) == fam.relator_syllables() == 4

    def test_enumeration_skips_empty_word(self):
        fam = RelatorFamily(1, 2, 3)
        assert all(len(wd) >= 1 for wd in fam.base_words())
        # ShortLex over {x, x^-1}: x, x^-1, x^2, ...
        assert fam.base_words() == [(1,), (-1,), (1, 1)]

    def test_exponents_follow_index(self):
        fam = RelatorFamily(1, 2, 5)
        assert fam.relator(3)[1:] == ((1, 3), (2, 3))

    def test_out_of_range(self):
        fam = RelatorFamily(1, 2, 3)
        with pytest.raises(OutOfRange):
            fam.relator(4)
        with pytest.raises(OutOfRange):
            fam.relator(0)

    def test_relators_pairwise_distinct(self):
        fam = RelatorFamily(2, 3, 8)
        rels = fam.relators()
        assert len(set(rels)) == len(rels)


class TestPieces:
    def test_big_n_beats_one_sixth(self):
        fam = RelatorFamily(1, 60, 12)
        frac, _ = max_piece_fraction(fam)
        assert frac < Fraction(1, 6)

    def test_small_n_fails_with_witness(self):
        rep = check_Cprime(RelatorFamily(1, 1, 5), Fraction(1, 6))
        assert not rep.satisfied
        assert rep.witness is not None
        assert rep.witness.fraction >= Fraction(1, 6)

    def test_lambda_one_trivially_satisfied(self):
        rep = check_Cprime(RelatorFamily(1, 3, 4), 1)
        assert rep.satisfied

    def test_monotone_in_lambda(self):
        fam = RelatorFamily(1, 4, 4)
        frac, _ = max_piece_fraction(fam)
        assert check_Cprime(fam, frac + Fraction(1, 100)).satisfied
        assert not check_Cprime(fam, frac).satisfied  # strict inequality

    def test_fraction_non_increasing_in_n(self):
        fractions = []
        for n in (2, 4, 8, 16, 32):
            frac, _ = max_piece_fraction(RelatorFamily(1, n, 8))
            fractions.append(frac)
        assert fractions == sorted(fractions, reverse=True)

    def test_symmetrization_invariance(self):
        # the symmetrized closure is already rotation/inversion closed:
        # rebuilding it from rotated inverses changes nothing
        fam = RelatorFamily(1, 3, 4)
        sym = fam.symmetrized()
        rebuilt = set()
        for r in sym:
            rinv = tuple((fi, fam._inv(fi, p)) for fi, p in reversed(r))
            for k in range(len(rinv)):
                rebuilt.add(rinv[k:] + rinv[:k])
        assert rebuilt == set(sym)

    def test_pieces_stay_short_across_relators(self):
        # distinct indices give distinct cyclic-factor exponents, so a
        # piece never contains a full shared a-syllable run
        fam = RelatorFamily(1, 10, 6)
        frac, wit = max_piece_fraction(fam)
        assert frac <= Fraction(2, fam.relator_syllables())
