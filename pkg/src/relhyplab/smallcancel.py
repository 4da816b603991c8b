"""Metric small cancellation over a free product, at desk scale.

The relator family lives in F(X) * <a_1> * ... * <a_n>: the i-th relator
is w_i^-1 a_1^i ... a_n^i, where w_1, w_2, ... enumerates the nonempty
reduced words over X in ShortLex order (the empty word is skipped so
every relator involves the cyclic generators nontrivially).  Each
relator has n+1 syllables.

Pieces follow the free-product convention: a piece is a common prefix of
two distinct elements of the symmetrized closure (all cyclic rotations
of the relators and their inverses), measured in syllables, where the
last syllable of the piece may be a proper left divisor of both
continuing syllables (splitting a syllable inside a semi-reduced
product).  The condition C'(lambda) demands every piece be shorter than
lambda times the relator length.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import OutOfRange
from .groups import FreeFactor

# syllables are (factor_index, payload); factor 0 is the free base F(X),
# factors 1..n the infinite cyclic a_j


@dataclass(frozen=True)
class RelatorFamily:
    alphabet_size: int  # rank of the free base
    n: int              # number of cyclic factors
    i_max: int          # relators materialized

    def __post_init__(self):
        if self.alphabet_size < 1 or self.n < 1 or self.i_max < 1:
            raise OutOfRange("alphabet_size, n and i_max must be >= 1")

    def base_factor(self) -> FreeFactor:
        return FreeFactor(self.alphabet_size)

    def base_words(self) -> List[Tuple]:
        """w_1 .. w_{i_max}: nonempty reduced words over X, ShortLex."""
        out = []
        for w in self.base_factor().elements(x_cap=self.i_max):
            out.append(w)
            if len(out) == self.i_max:
                break
        # elements() yields everything up to the length cap i_max, which
        # always suffices: there are >= 2 words per positive length
        return out

    def relator(self, i: int) -> Tuple:
        """Free-product normal form of w_i^-1 a_1^i ... a_n^i."""
        if not (1 <= i <= self.i_max):
            raise OutOfRange(f"relator index {i} outside 1..{self.i_max}")
        w = self.base_words()[i - 1]
        w_inv = tuple(-x for x in reversed(w))
        return ((0, w_inv),) + tuple((j, i) for j in range(1, self.n + 1))

    def relators(self) -> List[Tuple]:
        return [self.relator(i) for i in range(1, self.i_max + 1)]

    def relator_syllables(self) -> int:
        return self.n + 1

    def symmetrized(self) -> List[Tuple]:
        """All cyclic rotations of the relators and of their inverses."""
        out = set()
        for r in self.relators():
            rinv = tuple((fi, self._inv(fi, p)) for fi, p in reversed(r))
            for base in (r, rinv):
                for k in range(len(base)):
                    out.add(base[k:] + base[:k])
        return sorted(out)

    def _inv(self, fi: int, p):
        if fi == 0:
            return tuple(-x for x in reversed(p))
        return -p

    def _shares_left_part(self, fi: int, p, q) -> bool:
        """Whether two distinct syllables of one factor admit a common
        nontrivial left divisor (a piece may split a syllable)."""
        if fi == 0:
            return p[0] == q[0]
        return (p > 0) == (q > 0)


@dataclass
class PieceWitness:
    syllables: int
    fraction: Fraction
    relator_a: Tuple
    relator_b: Tuple

    def to_document(self) -> dict:
        return {
            "syllables": self.syllables,
            "fraction": str(self.fraction),
            "relator_a": _format_fp(self.relator_a),
            "relator_b": _format_fp(self.relator_b),
        }


def _format_fp(word: Tuple) -> str:
    parts = []
    for fi, p in word:
        if fi == 0:
            parts.append("w[" + ",".join(str(x) for x in p) + "]")
        else:
            parts.append(f"a{fi}^{p}")
    return " ".join(parts)


def max_piece_fraction(family: RelatorFamily) -> Tuple[Fraction, Optional[PieceWitness]]:
    """Largest piece length over relator length, with an argmax witness.

    Scans ordered pairs of distinct symmetrized relators bucketed by the
    factor of their first syllable (pieces need a common start)."""
    sym = family.symmetrized()
    rel_len = family.relator_syllables()
    buckets: Dict[int, List[Tuple]] = {}
    for u in sym:
        buckets.setdefault(u[0][0], []).append(u)
    best = Fraction(0)
    witness: Optional[PieceWitness] = None
    for _, group in sorted(buckets.items()):
        for ai, u in enumerate(group):
            for v in group[ai + 1:]:
                c = 0
                m = min(len(u), len(v))
                while c < m and u[c] == v[c]:
                    c += 1
                pieces = c
                if c < m and u[c][0] == v[c][0] and \
                        family._shares_left_part(u[c][0], u[c][1], v[c][1]):
                    pieces += 1
                if pieces == 0:
                    continue
                frac = Fraction(pieces, rel_len)
                if frac > best:
                    best = frac
                    witness = PieceWitness(pieces, frac, u, v)
    return best, witness


@dataclass
class CprimeReport:
    satisfied: bool
    lam: Fraction
    max_fraction: Fraction
    witness: Optional[PieceWitness]
    params: Dict[str, int]

    def to_document(self) -> dict:
        return {
            "schema": "sc-check/v1",
            "satisfied": self.satisfied,
            "lambda": str(self.lam),
            "max_piece_fraction": str(self.max_fraction),
            "witness": self.witness.to_document() if self.witness else None,
            "params": dict(self.params),
        }


def check_Cprime(family: RelatorFamily, lam) -> CprimeReport:
    """C'(lambda): every piece is strictly shorter than lambda times its
    relator; on failure the witness names an offending piece."""
    lam = Fraction(lam)
    frac, wit = max_piece_fraction(family)
    ok = frac < lam
    return CprimeReport(
        satisfied=ok,
        lam=lam,
        max_fraction=frac,
        witness=None if ok else wit,
        params={"alphabet_size": family.alphabet_size, "n": family.n,
                "i_max": family.i_max},
    )
