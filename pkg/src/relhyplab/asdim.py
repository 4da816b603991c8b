"""Witness coverings for asymptotic-dimension bounds at window scale.

Every covering here is a concrete list of cells over a finite domain,
and every dimension-flavoured claim is *measured*: ``measure_cover``
recomputes mesh (max cell diameter) and r-multiplicity (max number of
cells meeting a metric r-ball centered in the domain) from the covering
alone, independently of how it was built.

Constructions:

* ``cover_graph_annuli`` — relative-metric covering by annular cells.
  Annuli are half-open level bands (2kr, 2(k+1)r] plus the closed core
  A0 = [0, 2r]; each element projects to the vertex at level 2kr on the
  ShortLex-least geodesic to the identity, and a cell collects the
  elements of one annulus sharing a projection.  The half-open reading
  keeps every cell inside one band above its own projection sphere,
  which is what makes the 4r mesh bound an actual inequality of the
  construction (sphere elements project to themselves).
* ``peripheral_cover`` — interval / brick / tree-annuli patterns for
  Z, Z/k, Z^m and free peripherals in their intrinsic generator metric.
* ``cover_rel_ball`` — the relative-ball covering: the finite thickening
  Y_s = B(n-1)·T_s is covered by its s-connected components (the union
  of the translated lower-ball covers agglomerated at scale s), and each
  leftover peripheral coset piece is covered by a translated peripheral
  pattern; the pieces must be pairwise s-separated, and a failed
  separation check is a *finding* (the free abelian control trips it),
  not a bug.
* ``assemble_group_cover`` — pins each graph cell at its ShortLex-least
  member and refines it by the translated relative-ball covering; the
  measured multiplicity is compared against the product of the measured
  input multiplicities.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .constants import ConstantsReport
from .errors import (
    EmptyCovering,
    IncompatibleScales,
    MetricMismatch,
    NotSeparated,
    UnsupportedPeripheral,
)
from .groups import (
    AbelianFactor,
    CyclicFactor,
    FreeAbelianFamily,
    FreeFactor,
    FreeGroupFamily,
    FreeProductFamily,
    GroupSpec,
)
from .relcayley import Window
from .words import format_word


# ---------------------------------------------------------------------------
# covering containers


@dataclass
class Cell:
    members: frozenset
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class Covering:
    spec: GroupSpec
    metric: str              # "x" | "rel"
    scale: int
    domain: Tuple
    cells: List[Cell]

    def normalize(self) -> "Covering":
        """Deterministic cell order: ShortLex of the least member."""
        key = self.spec.shortlex_key
        self.cells.sort(key=lambda c: (min(key(m) for m in c.members), -len(c)))
        return self

    def coverage_gaps(self) -> List:
        covered = set()
        for c in self.cells:
            covered |= c.members
        return [e for e in self.domain if e not in covered]

    def shuffled(self, seed: int = 0) -> "Covering":
        import random

        cells = list(self.cells)
        random.Random(seed).shuffle(cells)
        return Covering(self.spec, self.metric, self.scale, self.domain, cells)


@dataclass
class CoverReport:
    metric: str
    radius: int
    mesh: int
    multiplicity: int
    cells: int
    domain_size: int
    covers_domain: bool
    mesh_bound: Optional[object] = None
    multiplicity_bound: Optional[object] = None
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def mesh_ok(self) -> Optional[bool]:
        if self.mesh_bound is None:
            return None
        return self.mesh <= self.mesh_bound

    @property
    def multiplicity_ok(self) -> Optional[bool]:
        if self.multiplicity_bound is None:
            return None
        return self.multiplicity <= self.multiplicity_bound

    @property
    def ok(self) -> bool:
        return (self.covers_domain and self.mesh_ok is not False
                and self.multiplicity_ok is not False)

    def to_document(self) -> dict:
        return {
            "schema": "cover-report/v1",
            "metric": self.metric,
            "radius": self.radius,
            "mesh": self.mesh,
            "multiplicity": self.multiplicity,
            "cells": self.cells,
            "domain_size": self.domain_size,
            "covers_domain": self.covers_domain,
            "mesh_bound": None if self.mesh_bound is None else str(self.mesh_bound),
            "multiplicity_bound": (None if self.multiplicity_bound is None
                                   else str(self.multiplicity_bound)),
            "mesh_ok": self.mesh_ok,
            "multiplicity_ok": self.multiplicity_ok,
            "pass": self.ok,
            "notes": {k: str(v) for k, v in sorted(self.notes.items())},
        }


# ---------------------------------------------------------------------------
# exact set diameters


def _diameter_pairwise(dist, elems) -> int:
    best = 0
    elems = list(elems)
    for i, u in enumerate(elems):
        for v in elems[i + 1:]:
            d = dist(u, v)
            if d > best:
                best = d
    return best


def _trie_diameter(elems, length_of, junction_cost) -> int:
    """Exact diameter for prefix metrics d(u,v) = tail(u) + tail(v) +
    junction over the first differing step.

    ``elems`` are step tuples; ``length_of(step)`` is the cost of one
    step; ``junction_cost(s, t)`` the cost of the joint s^-1 t between
    the two first differing steps."""
    elems = sorted(set(elems))
    best = 0

    def rec(group: List, depth: int):
        nonlocal best
        # group: elements sharing a prefix of given depth
        enders = [e for e in group if len(e) == depth]
        children: Dict[object, List] = {}
        for e in group:
            if len(e) > depth:
                children.setdefault(e[depth], []).append(e)
        stats = []
        for step, sub in sorted(children.items()):
            deep = rec(sub, depth + 1)
            # max cost from the node to an element through this child
            reach = max(length_of(step) + _tail(e, depth + 1, length_of)
                        for e in sub)
            stats.append((step, reach, deep))
        for _, reach, deep in stats:
            if deep > best:
                best = deep
            if enders and reach > best:
                best = reach
        for i in range(len(stats)):
            si, ri, _ = stats[i]
            for j in range(i + 1, len(stats)):
                sj, rj, _ = stats[j]
                tail_i = ri - length_of(si)
                tail_j = rj - length_of(sj)
                d = tail_i + tail_j + junction_cost(si, sj)
                if d > best:
                    best = d
        return best

    def _tail(e, depth, length_of):
        return sum(length_of(s) for s in e[depth:])

    if len(elems) >= 2:
        rec(elems, 0)
    return best


def set_diameter(spec: GroupSpec, elems: Iterable, metric: str,
                 pairwise_cap: int = 1500) -> int:
    """Exact diameter of a finite element set in either word metric."""
    elems = list(elems)
    if len(elems) <= 1:
        return 0
    fam = spec.family
    if isinstance(fam, FreeAbelianFamily) and metric == "x":
        best = 0
        for signs in itertools.product((1, -1), repeat=fam.rank):
            vals = [sum(s * c for s, c in zip(signs, v)) for v in elems]
            best = max(best, max(vals) - min(vals))
        return best
    if isinstance(fam, FreeGroupFamily):
        return _trie_diameter(elems, lambda step: 1,
                              lambda s, t: 2 if s != -t else 1 + 1)
    if isinstance(fam, FreeProductFamily):
        factors = fam.factors
        if metric == "rel":
            def cost(step):
                fi, p = step
                return 1 if fi in spec._lam_of_factor else factors[fi].xlen(p)

            def junction(s, t):
                # first differing syllables; same factor merges to one
                if s[0] == t[0]:
                    if s[0] in spec._lam_of_factor:
                        return 1
                    return factors[s[0]].xlen(factors[s[0]].mult(
                        factors[s[0]].inv(s[1]), t[1]))
                return cost(s) + cost(t)

            return _trie_diameter(elems, cost, junction)
        def cost(step):
            fi, p = step
            return factors[fi].xlen(p)

        def junction(s, t):
            if s[0] == t[0]:
                return factors[s[0]].xlen(factors[s[0]].mult(
                    factors[s[0]].inv(s[1]), t[1]))
            return cost(s) + cost(t)

        return _trie_diameter(elems, cost, junction)
    if len(elems) > pairwise_cap:
        raise EmptyCovering(
            f"no exact diameter routine for this family on {len(elems)} elements")
    dist = spec.dist_x if metric == "x" else spec.dist_rel
    return _diameter_pairwise(dist, elems)


# ---------------------------------------------------------------------------
# metric balls over a finite domain


class DomainBalls:
    """Exact metric balls {v in domain : d(center, v) <= r} served from
    precomputed indexes of the domain."""

    def __init__(self, spec: GroupSpec, domain: Sequence, metric: str):
        self.spec = spec
        self.metric = metric
        self.domain = list(domain)
        self.domain_set = set(domain)
        self._ambient: Dict[int, List] = {}
        fam = spec.family
        self._levels: Dict[int, List] = {}
        self._prefix_buckets: Dict[Tuple[int, int, Tuple], List] = {}
        if metric == "rel" and isinstance(fam, FreeProductFamily):
            for v in self.domain:
                q = spec.length_rel(v)
                self._levels.setdefault(q, []).append(v)
                for c in range(len(v) + 1):
                    self._prefix_buckets.setdefault((q, c, v[:c]), []).append(v)

    def _ambient_ball(self, r: int) -> List:
        # all group elements with |g|_X <= r (small r only)
        if r not in self._ambient:
            self._ambient[r] = list(self.spec.enumerate_ball(r))
        return self._ambient[r]

    def ball(self, center, r: int) -> List:
        spec = self.spec
        if r == 0:
            return [center] if center in self.domain_set else []
        if self.metric == "x" or isinstance(spec.family, FreeGroupFamily):
            dist = spec.dist_x if self.metric == "x" else spec.dist_rel
            if r <= 6:
                out = []
                for h in self._ambient_ball(r):
                    v = spec.multiply(center, h)
                    if v in self.domain_set and dist(center, v) <= r:
                        out.append(v)
                return out
            return [v for v in self.domain if dist(center, v) <= r]
        if isinstance(spec.family, FreeProductFamily):
            p = spec.length_rel(center)
            out = []
            seen = set()
            for q in range(max(0, p - r), p + r + 1):
                if q not in self._levels:
                    continue
                cstar = max(0, -(-(p + q - r - 1) // 2))  # ceil
                cstar = min(cstar, len(center), q)
                for v in self._prefix_buckets.get((q, cstar, center[:cstar]), ()):
                    if v not in seen and spec.dist_rel(center, v) <= r:
                        seen.add(v)
                        out.append(v)
            return out
        # small-domain fallback (free abelian relative balls etc.)
        dist = spec.dist_rel
        return [v for v in self.domain if dist(center, v) <= r]


def measure_cover(cov: Covering, r: Optional[int] = None,
                  mesh_bound=None, multiplicity_bound=None) -> CoverReport:
    """Exact mesh and exact r-multiplicity by scanning every ball center
    in the domain; independent of how the covering was built."""
    if not cov.cells:
        raise EmptyCovering("covering has no cells")
    if r is None:
        r = cov.scale
    spec = cov.spec
    mesh = 0
    for cell in cov.cells:
        d = set_diameter(spec, cell.members, cov.metric)
        if d > mesh:
            mesh = d
    membership: Dict[object, List[int]] = {}
    for ci, cell in enumerate(cov.cells):
        for e in cell.members:
            membership.setdefault(e, []).append(ci)
    balls = DomainBalls(spec, cov.domain, cov.metric)
    mult = 0
    for center in cov.domain:
        met: Set[int] = set()
        for v in balls.ball(center, r):
            ids = membership.get(v)
            if ids:
                met.update(ids)
        if len(met) > mult:
            mult = len(met)
    gaps = cov.coverage_gaps()
    return CoverReport(
        metric=cov.metric,
        radius=r,
        mesh=mesh,
        multiplicity=mult,
        cells=len(cov.cells),
        domain_size=len(cov.domain),
        covers_domain=not gaps,
        mesh_bound=mesh_bound,
        multiplicity_bound=multiplicity_bound,
    )


# ---------------------------------------------------------------------------
# peripheral patterns


def _peripheral_cell_key(factor, payload, r: int):
    """Deterministic pattern cells at scale r in the factor's intrinsic
    metric: intervals (Z), one cell (finite cyclic), staggered bricks
    (Z^m), tree annuli (free)."""
    if isinstance(factor, CyclicFactor):
        return ("all",)
    if isinstance(factor, AbelianFactor):
        coords = (payload,) if factor.rank == 1 else payload
        key = []
        shift = 0
        for i in range(factor.rank - 1, -1, -1):
            j = (coords[i] - shift) // (4 * r)
            key.append(j)
            shift = 2 * r * (j % 2) + shift  # stagger the next coordinate
        return tuple(key)
    if isinstance(factor, FreeFactor):
        level = len(payload)
        if level <= 2 * r:
            return ("A0",)
        k = (level - 1) // (2 * r)
        return (k, payload[:2 * k * r])
    raise UnsupportedPeripheral(f"no covering pattern for factor {factor!r}")


def peripheral_cover(spec: GroupSpec, lam: int, members: Iterable, r: int,
                     base=None) -> Covering:
    """Covering of a finite piece of (a coset of) H_lam at scale r in the
    X metric; cells follow the factor's pattern, optionally left
    translated by ``base`` (left translation is an X-isometry)."""
    if r < 1:
        raise ValueError("peripheral covers need scale r >= 1")
    per = spec.peripheral(lam)
    if per.kind == "factor":
        factor = spec._factors()[per.index]
    else:
        factor = AbelianFactor(1)
    if base is None:
        base = spec.identity()
    base_inv = spec.inverse(base)
    cells: Dict[Tuple, Set] = {}
    domain = []
    for g in members:
        payload = spec.peripheral_payload(spec.multiply(base_inv, g), lam)
        if payload is None:
            raise UnsupportedPeripheral(
                f"element {format_word(spec.canonical_word(g))} not in the coset")
        if spec.payload_is_identity(lam, payload):
            payload = factor.identity()
        key = _peripheral_cell_key(factor, payload, r)
        cells.setdefault(key, set()).add(g)
        domain.append(g)
    covering = Covering(
        spec, "x", r, tuple(sorted(domain, key=spec.shortlex_key)),
        [Cell(frozenset(v), {"provenance": "peripheral", "lam": lam, "key": k})
         for k, v in sorted(cells.items(), key=lambda kv: repr(kv[0]))])
    return covering.normalize()


# ---------------------------------------------------------------------------
# Theorem-style graph covering by annuli


def _prefix_vertex(spec: GroupSpec, g, t: int):
    """Vertex at relative distance t on the ShortLex-least geodesic from
    the identity to g (the canonical-word prefix chain: every canonical
    letter advances the relative length by exactly one)."""
    word = spec.canonical_word(g)
    return spec.element_of_word(word[:t])


def cover_graph_annuli(window: Window, r: int,
                       constants: Optional[ConstantsReport] = None
                       ) -> Tuple[Covering, CoverReport]:
    """Annular covering of the window in the relative metric.

    Levels (2kr, 2(k+1)r] form annulus k >= 1 (A0 is the closed ball of
    radius 2r); an element projects to its geodesic prefix at level 2kr
    and cells collect equal projections.  Mesh is checked against 4r and
    multiplicity against 3*mu when a constants report supplies mu.
    """
    if r < 1:
        raise ValueError("annuli need r >= 1")
    spec = window.spec
    cells: Dict[Tuple, Set] = {}
    for i, g in enumerate(window.elements):
        level = window.len_rel[i]
        if level <= 2 * r:
            key = ("A0",)
        else:
            k = (level - 1) // (2 * r)
            key = (k, _prefix_vertex(spec, g, 2 * k * r))
        cells.setdefault(key, set()).add(g)
    cell_list = []
    for key, members in cells.items():
        if key[0] == "A0":
            meta = {"provenance": "annulus", "k": 0, "core": True,
                    "center_elt": spec.identity()}
        else:
            meta = {"provenance": "annulus", "k": key[0],
                    "center": format_word(spec.canonical_word(key[1])),
                    "center_elt": key[1]}
        cell_list.append(Cell(frozenset(members), meta))
    covering = Covering(spec, "rel", r, tuple(window.elements), cell_list).normalize()
    notes = {}
    if window.n < 2 * r:
        notes["window_too_small"] = f"n={window.n} < 2r: single core cell only"
    mult_bound = 3 * constants.mu if constants is not None else None
    report = measure_cover(covering, r, mesh_bound=4 * r,
                           multiplicity_bound=mult_bound)
    report.notes.update(notes)
    return covering, report


# ---------------------------------------------------------------------------
# union combinators


def finite_union_cover(cov1: Covering, cov2: Covering, r: int) -> Covering:
    """Union of two coverings over the same metric; duplicate cells are
    merged, multiplicity is whatever measurement says (never assumed)."""
    if cov2 is None or not cov2.cells:
        return cov1
    if cov1.metric != cov2.metric:
        raise MetricMismatch(f"{cov1.metric} vs {cov2.metric}")
    seen = set()
    cells = []
    for cell in cov1.cells + cov2.cells:
        if cell.members in seen:
            continue
        seen.add(cell.members)
        cells.append(cell)
    domain = tuple(sorted(set(cov1.domain) | set(cov2.domain),
                          key=cov1.spec.shortlex_key))
    return Covering(cov1.spec, cov1.metric, r, domain, cells).normalize()


def separated_check(spec: GroupSpec, pieces: Sequence[Tuple[object, Set]],
                    s: int) -> Optional[Tuple]:
    """None when all distinct pieces are pairwise >= s apart in d_X, else
    a witness (label1, point1, label2, point2)."""
    owner: Dict[object, object] = {}
    for label, points in pieces:
        for p in points:
            owner[p] = label
    near = list(spec.enumerate_ball(max(0, s - 1)))
    for label, points in pieces:
        for p in points:
            for h in near:
                q = spec.multiply(p, h)
                other = owner.get(q)
                if other is not None and other != label:
                    return (label, p, other, q)
    return None


def separated_union_cover(pieces: Sequence[Tuple[Set, Covering]],
                          ys: Tuple[Set, Covering], s: int) -> Covering:
    """Union of s-separated pieces with the thickening that absorbs their
    interaction; output at scale floor((s-1)/2).  Piece cells are clipped
    to the remainders outside Y."""
    if not pieces and ys is None:
        raise EmptyCovering("nothing to unite")
    spec = (ys[1] if ys else pieces[0][1]).spec
    yset = set(ys[0]) if ys else set()
    remainders = []
    for i, (members, cov) in enumerate(pieces):
        if cov.metric != "x":
            raise MetricMismatch("separated unions operate in the X metric")
        remainders.append((i, set(members) - yset))
    witness = separated_check(spec, remainders, s)
    if witness is not None:
        i, p, j, q = witness
        raise NotSeparated(
            f"pieces {i} and {j} are closer than s={s}: "
            f"{format_word(spec.canonical_word(p))} vs "
            f"{format_word(spec.canonical_word(q))}", witness=witness)
    out_scale = (s - 1) // 2
    cells: List[Cell] = []
    domain: Set = set(yset)
    if ys:
        cells.extend(ys[1].cells)
    for (members, cov), (_, rem) in zip(pieces, remainders):
        domain |= set(members)
        for cell in cov.cells:
            clipped = cell.members & rem
            if clipped:
                cells.append(Cell(frozenset(clipped), dict(cell.meta)))
    covering = Covering(spec, "x", out_scale,
                        tuple(sorted(domain, key=spec.shortlex_key)), cells)
    return covering.normalize()


# ---------------------------------------------------------------------------
# relative-ball covering (the induction witness)


def _s_components(spec: GroupSpec, points: Set, s: int) -> List[Set]:
    """Connected components of a point set at linking scale < s in d_X."""
    near = [h for h in spec.enumerate_ball(max(0, s - 1)) if h != spec.identity()]
    parent = {p: p for p in points}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for p in points:
        for h in near:
            q = spec.multiply(p, h)
            if q in parent:
                union(p, q)
    comps: Dict[object, Set] = {}
    for p in points:
        comps.setdefault(find(p), set()).add(p)
    return [comps[k] for k in sorted(comps, key=spec.shortlex_key)]


@dataclass
class SeparationParams:
    s: int
    t_bound: Fraction
    t_size: int
    y_size: int
    reps: Dict[int, int]  # lam -> number of coset pieces

    def to_document(self) -> dict:
        return {
            "s": self.s,
            "t_bound": str(self.t_bound),
            "t_size": self.t_size,
            "y_size": self.y_size,
            "pieces_per_lam": {str(k): v for k, v in sorted(self.reps.items())},
        }


def cover_rel_ball(window: Window, n: int, s: int,
                   constants: ConstantsReport
                   ) -> Tuple[Covering, CoverReport, SeparationParams]:
    """X-metric covering of the relative ball B(n) ∩ window.

    The thickening Y_s = B(n-1)·T_s (T_s the finite X-ball of radius
    max(eps(s), 2L(s+1))) absorbs everything reachable by generator
    steps; it is covered by its s-connected components, which is what
    the translated lower-ball covers agglomerate to at this scale.
    Every remaining element ends in a peripheral letter and lands in a
    coset piece g·H_lam \\ Y_s, covered by the translated peripheral
    pattern.  Pieces must be pairwise s-separated; the check failing is
    the expected outcome on specs that are not relatively hyperbolic.
    """
    spec = window.spec
    out_scale = (s - 1) // 2
    domain = [g for i, g in enumerate(window.elements) if window.len_rel[i] <= n]
    domain_set = set(domain)
    if n == 0 or not spec.peripherals:
        cells = [Cell(frozenset(domain), {"provenance": "rel-ball-core", "n": n})]
        cov = Covering(spec, "x", out_scale, tuple(domain), cells).normalize()
        params = SeparationParams(s, Fraction(0), 1, len(domain), {})
        return cov, measure_cover(cov), params

    t_bound = constants.t_s_bound(s)
    t_elems = sorted(spec.enumerate_ball(int(math.floor(t_bound))),
                     key=spec.length_x)
    t_invs = [spec.inverse(t) for t in t_elems]

    yset = set()
    for g in domain:
        if spec.length_rel(g) <= n - 1:
            yset.add(g)  # t = identity
            continue
        for tinv in t_invs:
            if spec.length_rel(spec.multiply(g, tinv)) <= n - 1:
                yset.add(g)
                break

    y_cells = [Cell(frozenset(comp),
                    {"provenance": "Y_s", "n": n, "s": s})
               for comp in _s_components(spec, yset, s)]

    rest = [g for g in domain if g not in yset]
    piece_map: Dict[Tuple[int, Tuple], Set] = {}
    for g in rest:
        word = spec.canonical_word(g)
        last = word[-1]
        if not hasattr(last, "lam"):
            raise IncompatibleScales(
                "an element outside Y_s ends in a non-peripheral letter; "
                "T_s must contain the generating set (is L clamped?)")
        lam = last.lam
        piece_map.setdefault((lam, spec.coset_rep(g, lam)), set()).add(g)

    piece_covs: List[Tuple[Set, Covering]] = []
    reps: Dict[int, int] = {}
    r_piece = max(1, out_scale)
    for (lam, rep), members in sorted(piece_map.items(),
                                      key=lambda kv: (kv[0][0],
                                                      spec.shortlex_key(kv[0][1]))):
        reps[lam] = reps.get(lam, 0) + 1
        pc = peripheral_cover(spec, lam, sorted(members, key=spec.shortlex_key),
                              r_piece, base=rep)
        piece_covs.append((members, pc))

    witness = separated_check(spec, [(i, set(m)) for i, (m, _) in
                                     enumerate(piece_covs)], s)
    if witness is not None:
        i, p, j, q = witness
        raise NotSeparated(
            f"pieces {i} and {j} are closer than s={s}: "
            f"{format_word(spec.canonical_word(p))} vs "
            f"{format_word(spec.canonical_word(q))}", witness=witness)

    # saturate: piece cells within 2*scale of a thickening blob join it,
    # so a ball at the Y_s boundary never sees a blob plus two pattern
    # cells split by an unluckily placed grid line
    blob_sets = [set(c.members) for c in y_cells]
    absorb_reach = list(spec.enumerate_ball(2 * out_scale))
    final_members = [set(c.members) for c in y_cells]
    final_meta = [dict(c.meta) for c in y_cells]
    for members, pc in piece_covs:
        for cell in pc.cells:
            target = None
            for e in cell.members:
                for h in absorb_reach:
                    v = spec.multiply(e, h)
                    for bi, blob in enumerate(blob_sets):
                        if v in blob and (target is None or bi < target):
                            target = bi
                if target == 0:
                    break
            if target is None:
                final_members.append(set(cell.members))
                final_meta.append(dict(cell.meta))
            else:
                final_members[target] |= cell.members
    cells = [Cell(frozenset(m), meta)
             for m, meta in zip(final_members, final_meta)]
    covering = Covering(spec, "x", out_scale,
                        tuple(sorted(domain_set, key=spec.shortlex_key)),
                        cells).normalize()
    report = measure_cover(covering)
    params = SeparationParams(s, t_bound, len(t_elems), len(yset), reps)
    return covering, report, params


# ---------------------------------------------------------------------------
# quasi-stabilizers and the final assembly


@dataclass
class QuasiStabilizer:
    radius: int
    elements: Tuple

    @classmethod
    def at_identity(cls, window: Window, radius: int) -> "QuasiStabilizer":
        # left multiplication moves the identity vertex by |g|_rel
        elems = tuple(g for i, g in enumerate(window.elements)
                      if window.len_rel[i] <= radius)
        return cls(radius, elems)


def assemble_group_cover(window: Window, r: int, graph_cover: Covering,
                         ball_cover: Covering
                         ) -> Tuple[Covering, CoverReport]:
    """Refine each graph cell by the relative-ball covering translated to
    the cell's ShortLex-least member; the result is an X-metric covering
    of the window at scale r.

    The multiplicity bound checked is the product of the input
    multiplicities, both measured at radius r in their own metrics: an
    X-ball of radius r is a relative ball of radius r, so the met cells
    inject into (met graph cells) x (met translated ball cells).

    Cells carrying a projection vertex in their metadata are pinned
    there (it is the ShortLex-least point of the cell together with its
    projection, every member being a canonical-word extension of it);
    anonymous cells fall back to their least member.
    """
    if graph_cover.metric != "rel" or ball_cover.metric != "x":
        raise IncompatibleScales(
            "assembly expects a relative-metric graph cover and an X-metric ball cover")
    spec = window.spec
    key = spec.shortlex_key
    ball_membership: Dict[object, Tuple[int, ...]] = {}
    for ci, bcell in enumerate(ball_cover.cells):
        for e in bcell.members:
            ball_membership.setdefault(e, ())
            ball_membership[e] += (ci,)
    cells: List[Cell] = []
    for gi, gcell in enumerate(graph_cover.cells):
        base = gcell.meta.get("center_elt")
        if base is None:
            base = min(gcell.members, key=key)
        base_inv = spec.inverse(base)
        translated: Dict[int, Set] = {}
        for u in gcell.members:
            rel = spec.multiply(base_inv, u)
            ids = ball_membership.get(rel)
            if not ids:
                raise IncompatibleScales(
                    "ball cover does not reach a graph cell member; build it "
                    "on B(4R + r) within a doubled X-radius")
            for ci in ids:
                translated.setdefault(ci, set()).add(u)
        for ci in sorted(translated):
            cells.append(Cell(frozenset(translated[ci]),
                              {"provenance": "assembled", "graph_cell": gi,
                               "ball_cell": ci}))
    covering = Covering(spec, "x", r, tuple(window.elements), cells).normalize()
    graph_mult = measure_cover(graph_cover, r).multiplicity
    ball_mult = measure_cover(ball_cover, r).multiplicity
    bound = graph_mult * ball_mult
    report = measure_cover(covering, r, multiplicity_bound=bound)
    report.notes["graph_multiplicity"] = graph_mult
    report.notes["ball_multiplicity"] = ball_mult
    report.notes["product_bound"] = bound
    return covering, report
