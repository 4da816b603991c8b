from __future__ import annotations

from fractions import Fraction

import pytest

from relhyplab.constants import (
    check_lemma_lc,
    check_lemma_xi,
    check_uv,
    clamp_constants,
    compute_constants,
    conjugate_pairs,
    constants_from_document,
    estimate_bcp_eps,
    estimate_omega_L,
    estimate_thinness,
    make_constants,
    omega_check_raw,
    triangle,
)
from relhyplab.errors import NotOnSides
from relhyplab.relcayley import build_window, cycle_canonical
from relhyplab.specfile import parse_word


class TestTriangles:
    def test_degenerate_triangle_has_no_proper_pairs(self, zz, w):
        window = build_window(zz, 2, 2)
        x = w(zz, "a")
        tri = triangle(window, x, x, x)
        pairs = conjugate_pairs(tri)
        assert all(u == v for u, v in pairs)

    def test_tree_conjugates_coincide(self, f2):
        window = build_window(f2, 4, 4)
        x, y, z = f2.identity(), f2.element_of_word(parse_word(f2, "a a b")), \
            f2.element_of_word(parse_word(f2, "a b^-1"))
        tri = triangle(window, x, y, z)
        for u, v in conjugate_pairs(tri):
            assert u == v

    def test_internal_points_distances(self, f2, w):
        window = build_window(f2, 4, 4)
        tri = triangle(window, f2.identity(), w(f2, "a a"), w(f2, "b b"))
        pts = tri.internal_points()
        assert pts is not None
        a, b, c = pts
        d = window.dist_rel
        assert d(tri.x, b) == d(tri.x, c)
        assert d(tri.y, a) == d(tri.y, c)
        assert d(tri.z, a) == d(tri.z, b)

    def test_check_uv_predicate_matches_pair_list(self, zz, w):
        window = build_window(zz, 3, 3)
        x, y, z = zz.identity(), w(zz, "a b"), w(zz, "b^2")
        tri = triangle(window, x, y, z)
        corner_pairs = set()
        legA, legB = tri.legs("x")
        tmax = tri.gromov2("x") // 2
        for t in range(min(tmax, len(legA) - 1, len(legB) - 1) + 1):
            corner_pairs.add((legA[t], legB[t]))
        # every equal-parameter pair passing the distance-sum test is a
        # conjugate pair at the corner
        for t in range(min(len(legA), len(legB))):
            u, v = legA[t], legB[t]
            if check_uv(tri, u, v):
                assert (u, v) in corner_pairs

    def test_check_uv_not_on_sides(self, zz, w):
        window = build_window(zz, 3, 3)
        tri = triangle(window, zz.identity(), w(zz, "a"), w(zz, "b"))
        with pytest.raises(NotOnSides):
            check_uv(tri, w(zz, "a^3"), w(zz, "b"))


class TestThinness:
    def test_tree_is_zero_thin(self, f2):
        assert estimate_thinness(build_window(f2, 3, 3), side_cap=6) == 0

    def test_single_vertex_window(self, zz):
        assert estimate_thinness(build_window(zz, 0, 0), side_cap=4) == 0

    def test_zz_thin_at_most_one(self, zz):
        xi = estimate_thinness(build_window(zz, 4, 4), side_cap=8)
        assert xi <= 1

    def test_monotone_in_window(self, zz):
        xis = [estimate_thinness(build_window(zz, n, n), side_cap=2 * n)
               for n in (1, 2, 3)]
        assert xis == sorted(xis)

    def test_z2_triangles_are_two_thin(self, z2):
        # the control is weakly hyperbolic: finite relative diameter
        # forces a small thinness constant, here exactly 2
        assert estimate_thinness(build_window(z2, 2, 4), side_cap=4) == 2


class TestOmega:
    def test_zz_ratio_zero(self, zz):
        rep = estimate_omega_L(build_window(zz, 4, 4), cycle_len_cap=8)
        assert rep.l_hat == 0
        assert rep.moved_isolated == []
        assert not rep.diverges
        assert "reduced cycle space is empty" in rep.note

    def test_no_cycles_no_ratio(self, f2):
        rep = estimate_omega_L(build_window(f2, 3, 3), cycle_len_cap=6)
        assert rep.l_hat == 0 and rep.cycles_checked == 0

    def test_z2_witnesses_and_divergence(self, z2):
        window = build_window(z2, 2, 10)
        rep = estimate_omega_L(window, cycle_len_cap=4, exp_cap=10)
        assert rep.diverges
        assert rep.verdict == "not relatively hyperbolic at window scale"
        wits = {wd: r for r, wd in rep.witnesses}
        for m in range(1, 9):
            target = cycle_canonical(z2, parse_word(z2, f"0:{m} 1:1 0:-{m} 1:-1"))
            assert wits.get(target) == Fraction(m, 2)

    def test_raw_check_matches(self, zz, z2):
        seen, bad = omega_check_raw(build_window(zz, 2, 2), zz.identity(), 5)
        assert seen > 0 and bad == []
        seen, bad = omega_check_raw(build_window(z2, 2, 3), z2.identity(), 4)
        assert seen > 0 and bad != []


class TestBcpEps:
    def test_no_components_vacuous(self, f2):
        assert estimate_bcp_eps(build_window(f2, 2, 2), 1) == 0

    def test_shared_endpoints(self, zz):
        # geodesics are unique here, so every component matches itself
        assert estimate_bcp_eps(build_window(zz, 2, 4), 0) == 0

    def test_positive_gap_gives_positive_eps(self, zz):
        # p2 may be the empty path at a^s while p1 = (single edge to a^s)
        # has an unmatched component of displacement s
        eps = estimate_bcp_eps(build_window(zz, 2, 4), 2)
        assert eps >= 3


class TestLemmaChecks:
    def test_lc_no_violations_on_free_product(self, zz):
        consts = compute_constants(build_window(zz, 3, 3), side_cap=6,
                                   cycle_len_cap=6, s_values=[0, 2])
        rep = check_lemma_lc(build_window(zz, 2, 5), s=0, L=consts.l,
                             eps=consts.eps[0])
        assert rep.instances > 0
        assert rep.violations == []

    def test_lc_vacuous_flag(self, zz):
        rep = check_lemma_lc(build_window(zz, 1, 2), s=0, L=Fraction(1), eps=99)
        assert rep.vacuous and rep.ok

    def test_lc_z2_violations_with_finite_constants(self, z2):
        rep = check_lemma_lc(build_window(z2, 2, 6), s=1, L=Fraction(1, 6), eps=1)
        assert rep.violations, "the control must violate the connectedness lemma"

    def test_xi_zero_violations_on_zz(self, zz):
        consts = compute_constants(build_window(zz, 3, 3), side_cap=6,
                                   cycle_len_cap=6, s_values=[2])
        rep = check_lemma_xi(build_window(zz, 4, 4), consts.l, consts.xi,
                             side_cap=8)
        assert rep.instances > 0
        assert rep.violations == []

    def test_xi_vacuous_when_threshold_unreachable(self, zz):
        rep = check_lemma_xi(build_window(zz, 1, 1), Fraction(1), 50, side_cap=2)
        assert rep.vacuous


class TestConstantsReport:
    def test_clamp_rules(self):
        xi, l, clamped = clamp_constants(0, Fraction(0))
        assert (xi, l, clamped) == (1, Fraction(1, 6), True)
        xi, l, clamped = clamp_constants(2, Fraction(3))
        assert (xi, l, clamped) == (2, Fraction(3), False)
        xi, l, clamped = clamp_constants(3, Fraction(0))
        assert xi == 3 and l == Fraction(1, 18) and clamped
        assert 6 * l * xi >= 1

    def test_derived_quantities(self, zz):
        consts = compute_constants(build_window(zz, 3, 3), side_cap=6,
                                   cycle_len_cap=6, s_values=[2])
        assert consts.sigma == 5 * consts.xi
        assert consts.rho == 6 * consts.l * consts.xi * consts.xi
        assert consts.mu == zz.x_ball_size(consts.rho)
        assert consts.clamped  # tree-like window estimates 0, 0

    def test_document_roundtrip(self, zz):
        consts = compute_constants(build_window(zz, 2, 2), side_cap=4,
                                   cycle_len_cap=4, s_values=[2])
        doc = consts.to_document()
        back = constants_from_document(zz, doc)
        assert back.xi == consts.xi
        assert back.l == consts.l
        assert back.mu == consts.mu
        assert back.eps == consts.eps

    def test_make_constants_t_bound(self, z2):
        consts = make_constants(z2, 1, Fraction(1, 6), {4: 3})
        assert consts.t_s_bound(4) == 3  # max(3, 2*(1/6)*5) = 3
        with pytest.raises(KeyError):
            consts.t_s_bound(6)
