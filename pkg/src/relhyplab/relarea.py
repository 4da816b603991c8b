"""Relative area by breadth-first search over the ambient free product.

A word trivial in the group can be written as a product of conjugated
relators inside the free product F of the peripheral factors (and the
free base, if any).  The minimal number of conjugates is its relative
area.  The search works on F-normal forms: one move splices a relator
(or its inverse; the relator set is taken closed under inversion) into
the current word at any position, including splitting positions inside
a syllable, then renormalizes.  Splicing at position u|v reaches
norm(u R v) = (u R u^{-1}) (u v), i.e. exactly multiplication by a
conjugate whose conjugator is read off the split, so breadth-first
exhaustion of depth k-1 certifies minimality within the stated caps:
``cap_k`` on the depth and ``cap_len`` on intermediate normal forms
(default 2*|W| + max relator length, in syllables).  A search that runs
out of room reports Unknown; Unknown is a value, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NotTrivialInG, UnknownGenerator
from .groups import (
    FreeProductFamily,
    GroupSpec,
    OneRelatorQuotient,
    _fp_mult,
)
from .words import Word, format_word


@dataclass
class RelPresentation:
    """A relative presentation: the group spec (owning the word problem
    for G) plus the finite relator list over the alphabet X ∪ H."""

    spec: GroupSpec
    relator_words: Sequence[Word]

    def __post_init__(self):
        fam = self.spec.family
        if isinstance(fam, OneRelatorQuotient):
            self.fspec = self.spec._fp
        elif isinstance(fam, FreeProductFamily):
            self.fspec = self.spec
        else:
            raise UnknownGenerator(
                "relative presentations need a free-product or quotient family")
        self.factors = self.fspec.family.factors
        self.relators: List[Tuple] = []
        for w in self.relator_words:
            r = self.fspec.element_of_word(w)
            if not r:
                raise NotTrivialInG("relators must be nonempty in F")
            if self.spec.element_of_word(w) != self.spec.identity():
                raise NotTrivialInG("relators must represent 1 in G")
            self.relators.append(r)
        # closed under inversion for the splice moves
        self.sym_relators: List[Tuple] = []
        seen = set()
        for r in self.relators:
            for cand in (r, self.fspec.inverse(r)):
                if cand not in seen:
                    seen.add(cand)
                    self.sym_relators.append(cand)

    def max_relator_len(self) -> int:
        return max((len(r) for r in self.relators), default=0)


def fp_normal_form(pres: RelPresentation, word: Word) -> Word:
    """Normal form of a word in the ambient free product F (alternating
    syllables); empty output iff the word is trivial in F."""
    return pres.fspec.canonical_word(pres.fspec.element_of_word(word))


def is_trivial_in_F(pres: RelPresentation, word: Word) -> bool:
    return pres.fspec.element_of_word(word) == ()


def _splice_children(pres: RelPresentation, state: Tuple, cap_len: int):
    """All states reachable by splicing one (inverse-closed) relator."""
    factors = pres.factors
    out = []
    # splitting positions: every syllable boundary ...
    cuts = [(state[:i], state[i:]) for i in range(len(state) + 1)]
    # ... and every interior split of a syllable
    for i, (fi, p) in enumerate(state):
        for b, c in factors[fi].splits(p):
            cuts.append((state[:i] + ((fi, b),), ((fi, c),) + state[i + 1:]))
    for rel in pres.sym_relators:
        for u, v in cuts:
            child = _fp_mult(factors, _fp_mult(factors, u, rel), v)
            if len(child) <= cap_len:
                out.append(child)
    return out


@dataclass
class RelAreaResult:
    area: Optional[int]  # None means Unknown
    status: str          # "exact" | "unknown"
    states_explored: int
    caps: Dict[str, int]

    def __str__(self) -> str:
        return str(self.area) if self.area is not None else "Unknown"


def rel_area(pres: RelPresentation, word: Word, cap_k: int = 4,
             cap_len: Optional[int] = None) -> RelAreaResult:
    """Minimal number of conjugated relators expressing the word in F,
    exact when found within the caps (BFS exhausts smaller depths by
    construction), else Unknown."""
    if pres.spec.element_of_word(word) != pres.spec.identity():
        raise NotTrivialInG(f"word {format_word(word)!r} is not trivial in G")
    start = pres.fspec.element_of_word(word)
    if cap_len is None:
        cap_len = 2 * len(start) + pres.max_relator_len()
    caps = {"cap_k": cap_k, "cap_len": cap_len}
    if start == ():
        return RelAreaResult(0, "exact", 0, caps)
    if not pres.sym_relators:
        return RelAreaResult(None, "unknown", 0, caps)
    visited = {start}
    frontier = [start]
    explored = 0
    for depth in range(1, cap_k + 1):
        nxt = []
        for state in frontier:
            for child in _splice_children(pres, state, cap_len):
                if child == ():
                    return RelAreaResult(depth, "exact", explored, caps)
                if child not in visited:
                    visited.add(child)
                    nxt.append(child)
            explored += 1
        if not nxt:
            # every reachable state within cap_len is exhausted; the word
            # needs longer intermediates, which the caps exclude
            return RelAreaResult(None, "unknown", explored, caps)
        frontier = nxt
    return RelAreaResult(None, "unknown", explored, caps)


@dataclass
class LinearBoundReport:
    samples: List[dict]
    max_ratio: Optional[str]
    violations: List[dict]
    l_bound: str

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_document(self) -> dict:
        return {
            "schema": "relarea-linear/v1",
            "samples": self.samples,
            "max_ratio": self.max_ratio,
            "violations": self.violations,
            "l_bound": self.l_bound,
        }


def check_linear_bound(pres: RelPresentation, samples: Sequence[Word],
                       l_bound, cap_k: int = 4,
                       cap_len: Optional[int] = None) -> LinearBoundReport:
    """Per-sample relative areas against the linear bound
    Area(W) <= L * |W|; unresolved searches are reported, not counted."""
    l_bound = Fraction(l_bound)
    rows = []
    max_ratio: Optional[Fraction] = None
    violations = []
    for w in samples:
        length = len(tuple(w))
        try:
            res = rel_area(pres, w, cap_k=cap_k, cap_len=cap_len)
        except NotTrivialInG:
            rows.append({"word": format_word(w), "len": length,
                         "area": None, "note": "rejected: not trivial in G"})
            continue
        row = {"word": format_word(w), "len": length,
               "area": res.area, "note": res.status}
        rows.append(row)
        if res.area is None or length == 0:
            continue
        ratio = Fraction(res.area, length)
        if max_ratio is None or ratio > max_ratio:
            max_ratio = ratio
        if ratio > l_bound:
            violations.append(row)
    return LinearBoundReport(
        samples=rows,
        max_ratio=str(max_ratio) if max_ratio is not None else None,
        violations=violations,
        l_bound=str(l_bound),
    )
