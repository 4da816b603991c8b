"""Concrete groups with peripheral structure.

The supported families are exactly those with closed-form normal forms:

* free groups (reduced words),
* free abelian groups (exponent vectors),
* free products whose factors are Z^m, Z/k or free groups (alternating
  syllable sequences, each syllable a nontrivial factor element),
* one-relator quotients of such free products, reduced by a greedy
  Dehn pass over the symmetrized relator.

Elements are canonical immutable tuples, so equality of elements is
equality of encodings.  The greedy Dehn pass is sound (a word it kills
is trivial) and complete only for presentations where more than half of
some symmetrized relator must appear in any nontrivial trivial word;
operations that need exactness beyond that raise ``UnsupportedFamily``.

Peripheral subgroups are either whole free-product factors or
coordinate axes of a free abelian group.  Both word lengths are exact
closed forms here: ``length_x`` sums factor-intrinsic generator lengths
and ``length_rel`` counts one letter per peripheral syllable and the
full generator length for non-peripheral ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple, Union

from .errors import UnknownGenerator, UnknownPeripheral, UnsupportedFamily
from .words import HLetter, Letter, Word, XLetter, word_key


# ---------------------------------------------------------------------------
# factors


@dataclass(frozen=True)
class FreeFactor:
    """Free group of the given rank; payloads are reduced tuples of
    signed 1-based generator indices."""

    rank: int

    def identity(self):
        return ()

    def is_identity(self, p) -> bool:
        return p == ()

    def mult(self, a, b):
        a = list(a)
        for x in b:
            if a and a[-1] == -x:
                a.pop()
            else:
                a.append(x)
        return tuple(a)

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def xlen(self, a) -> int:
        return len(a)

    def num_gens(self) -> int:
        return self.rank

    def gen_payload(self, slot: int, sign: int):
        return (sign * (slot + 1),)

    def payload_slots(self, p):
        for x in p:
            yield (abs(x) - 1, 1 if x > 0 else -1)

    def validate(self, p):
        if not isinstance(p, tuple) or not p:
            raise UnknownGenerator(f"bad free-factor payload {p!r}")
        for x in p:
            if not isinstance(x, int) or x == 0 or abs(x) > self.rank:
                raise UnknownGenerator(f"bad free-factor letter {x!r}")
        for x, y in zip(p, p[1:]):
            if x == -y:
                raise UnknownGenerator(f"unreduced free-factor payload {p!r}")
        return p

    def elements(self, x_cap: int) -> Iterator:
        """Nontrivial payloads with xlen <= x_cap, ShortLex order."""
        letters = sorted(
            (s * i for i in range(1, self.rank + 1) for s in (1, -1)),
            key=lambda x: (abs(x), 0 if x > 0 else 1),
        )
        frontier = [()]
        for _ in range(x_cap):
            nxt = []
            for w in frontier:
                for x in letters:
                    if w and w[-1] == -x:
                        continue
                    nxt.append(w + (x,))
            for w in nxt:
                yield w
            frontier = nxt

    def count_by_xlen(self, l: int) -> int:
        if l == 0:
            return 1
        return 2 * self.rank * (2 * self.rank - 1) ** (l - 1)

    def splits(self, p):
        for i in range(1, len(p)):
            yield p[:i], p[i:]

    def payload_first_steps(self, p):
        # geodesic words in a free factor consume the reduced word in order
        return [(abs(p[0]) - 1, 1 if p[0] > 0 else -1)]


@dataclass(frozen=True)
class CyclicFactor:
    """Z/k; payloads are residues 1..k-1 (identity is 0)."""

    modulus: int

    def identity(self):
        return 0

    def is_identity(self, p) -> bool:
        return p % self.modulus == 0

    def mult(self, a, b):
        return (a + b) % self.modulus

    def inv(self, a):
        return (-a) % self.modulus

    def xlen(self, a) -> int:
        a %= self.modulus
        return min(a, self.modulus - a)

    def num_gens(self) -> int:
        return 1

    def gen_payload(self, slot: int, sign: int):
        return 1 % self.modulus if sign > 0 else (-1) % self.modulus

    def payload_slots(self, p):
        # shortest spelling of the residue in the single generator
        p %= self.modulus
        if p <= self.modulus - p:
            for _ in range(p):
                yield (0, 1)
        else:
            for _ in range(self.modulus - p):
                yield (0, -1)

    def validate(self, p):
        if not isinstance(p, int):
            raise UnknownGenerator(f"bad cyclic payload {p!r}")
        p %= self.modulus
        if p == 0:
            raise UnknownGenerator("peripheral letter must be nontrivial")
        return p

    def elements(self, x_cap: int) -> Iterator:
        for p in sorted(range(1, self.modulus), key=lambda a: (self.xlen(a), -a)):
            if self.xlen(p) <= x_cap:
                yield p

    def count_by_xlen(self, l: int) -> int:
        if l == 0:
            return 1
        return sum(1 for p in range(1, self.modulus) if self.xlen(p) == l)

    def splits(self, p):
        p %= self.modulus
        for b in range(1, self.modulus):
            c = (p - b) % self.modulus
            if c != 0 and b != p:
                yield b, c

    def payload_first_steps(self, p):
        p %= self.modulus
        steps = []
        if p <= self.modulus - p:
            steps.append((0, 1))
        if self.modulus - p <= p:
            steps.append((0, -1))
        return steps


@dataclass(frozen=True)
class AbelianFactor:
    """Z^rank; payloads are bare ints for rank 1, exponent tuples above."""

    rank: int

    def identity(self):
        return 0 if self.rank == 1 else (0,) * self.rank

    def is_identity(self, p) -> bool:
        return p == self.identity()

    def mult(self, a, b):
        if self.rank == 1:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        if self.rank == 1:
            return -a
        return tuple(-x for x in a)

    def xlen(self, a) -> int:
        if self.rank == 1:
            return abs(a)
        return sum(abs(x) for x in a)

    def num_gens(self) -> int:
        return self.rank

    def gen_payload(self, slot: int, sign: int):
        if self.rank == 1:
            return sign
        return tuple(sign if i == slot else 0 for i in range(self.rank))

    def payload_slots(self, p):
        coords = (p,) if self.rank == 1 else p
        for i, v in enumerate(coords):
            s = 1 if v > 0 else -1
            for _ in range(abs(v)):
                yield (i, s)

    def validate(self, p):
        if self.rank == 1:
            if not isinstance(p, int):
                raise UnknownGenerator(f"bad abelian payload {p!r}")
            if p == 0:
                raise UnknownGenerator("peripheral letter must be nontrivial")
            return p
        if not isinstance(p, tuple) or len(p) != self.rank:
            raise UnknownGenerator(f"bad abelian payload {p!r}")
        if all(x == 0 for x in p):
            raise UnknownGenerator("peripheral letter must be nontrivial")
        return p

    def elements(self, x_cap: int) -> Iterator:
        if self.rank == 1:
            for m in range(1, x_cap + 1):
                yield m
                yield -m
            return
        rng = range(-x_cap, x_cap + 1)
        vecs = [v for v in itertools.product(rng, repeat=self.rank)
                if 0 < sum(abs(x) for x in v) <= x_cap]
        vecs.sort(key=lambda v: (sum(abs(x) for x in v), v))
        yield from vecs

    def count_by_xlen(self, l: int) -> int:
        counts = {0: 1}
        for _ in range(self.rank):
            nxt = {}
            for tot, c in counts.items():
                for v in range(-(l - tot), l - tot + 1):
                    nxt[tot + abs(v)] = nxt.get(tot + abs(v), 0) + c
            counts = nxt
        return counts.get(l, 0)

    def splits(self, p):
        # sign-monotone splits only: both halves shorter in xlen
        coords = (p,) if self.rank == 1 else p
        ranges = []
        for v in coords:
            if v >= 0:
                ranges.append(range(0, v + 1))
            else:
                ranges.append(range(v, 1))
        for combo in itertools.product(*ranges):
            b = combo[0] if self.rank == 1 else tuple(combo)
            if self.is_identity(b):
                continue
            c = self.mult(p, self.inv(b))
            if self.is_identity(c):
                continue
            yield b, c

    def payload_first_steps(self, p):
        coords = (p,) if self.rank == 1 else p
        return [(i, 1 if v > 0 else -1) for i, v in enumerate(coords) if v != 0]


Factor = Union[FreeFactor, CyclicFactor, AbelianFactor]


# ---------------------------------------------------------------------------
# families and specs


@dataclass(frozen=True)
class FreeGroupFamily:
    rank: int


@dataclass(frozen=True)
class FreeAbelianFamily:
    rank: int


@dataclass(frozen=True)
class FreeProductFamily:
    factors: Tuple[Factor, ...]


@dataclass(frozen=True)
class OneRelatorQuotient:
    """Quotient of a free product by the normal closure of one relator.

    ``relator`` is a free-product element (syllable tuple) over the
    factors; the word problem is attacked by greedy Dehn reduction over
    the symmetrized relator.
    """

    factors: Tuple[Factor, ...]
    relator: Tuple


Family = Union[FreeGroupFamily, FreeAbelianFamily, FreeProductFamily, OneRelatorQuotient]


@dataclass(frozen=True)
class Peripheral:
    """One H_lambda: a whole free-product factor or a coordinate axis."""

    lam: int
    kind: str  # "factor" | "axis"
    index: int


@dataclass(frozen=True)
class GroupElement:
    spec: "GroupSpec"
    elt: Tuple

    @property
    def word(self) -> Word:
        return self.spec.canonical_word(self.elt)

    def __str__(self) -> str:
        from .words import format_word

        return format_word(self.word)


@dataclass(frozen=True)
class CosetId:
    lam: int
    rep: Tuple


class GroupSpec:
    """A concrete group: family, symmetric generating set X (by name),
    and the peripheral collection."""

    def __init__(self, family: Family, gen_names: Tuple[str, ...],
                 peripherals: Tuple[Peripheral, ...] = ()):
        self.family = family
        self.gen_names = tuple(gen_names)
        self.peripherals = tuple(peripherals)
        self._slots = {}  # name -> (factor index or axis, slot within factor)
        self._build_slots()
        self._check_peripherals()
        if isinstance(family, OneRelatorQuotient):
            fp = FreeProductFamily(family.factors)
            self._fp = GroupSpec(fp, gen_names, peripherals)
            self._symmetrized = _symmetrize(family.factors, family.relator)
        self._lam_of_factor = {
            p.index: p.lam for p in self.peripherals if p.kind == "factor"
        }
        self._lam_of_axis = {
            p.index: p.lam for p in self.peripherals if p.kind == "axis"
        }
        self._by_lam = {p.lam: p for p in self.peripherals}

    # -- construction helpers ------------------------------------------------

    def _factors(self) -> Tuple[Factor, ...]:
        fam = self.family
        if isinstance(fam, (FreeProductFamily, OneRelatorQuotient)):
            return fam.factors
        return ()

    def _build_slots(self):
        fam = self.family
        names = self.gen_names
        if isinstance(fam, FreeGroupFamily):
            need = fam.rank
            for i, nm in enumerate(names):
                self._slots[nm] = (None, i)
        elif isinstance(fam, FreeAbelianFamily):
            need = fam.rank
            for i, nm in enumerate(names):
                self._slots[nm] = (None, i)
        else:
            need = sum(f.num_gens() for f in self._factors())
            pos = 0
            for fi, f in enumerate(self._factors()):
                for slot in range(f.num_gens()):
                    if pos < len(names):
                        self._slots[names[pos]] = (fi, slot)
                    pos += 1
        if len(names) != need or len(set(names)) != len(names):
            raise UnknownGenerator(
                f"family needs {need} distinct generator names, got {names!r}")

    def _check_peripherals(self):
        fam = self.family
        lams = [p.lam for p in self.peripherals]
        if len(set(lams)) != len(lams):
            raise UnknownPeripheral("duplicate peripheral index")
        for p in self.peripherals:
            if p.kind == "factor":
                if not isinstance(fam, (FreeProductFamily, OneRelatorQuotient)) \
                        or not (0 <= p.index < len(fam.factors)):
                    raise UnknownPeripheral(f"no factor {p.index} for peripheral {p.lam}")
            elif p.kind == "axis":
                if not isinstance(fam, FreeAbelianFamily) or not (0 <= p.index < fam.rank):
                    raise UnknownPeripheral(f"no axis {p.index} for peripheral {p.lam}")
            else:
                raise UnknownPeripheral(f"unknown peripheral kind {p.kind!r}")

    def peripheral(self, lam: int) -> Peripheral:
        try:
            return self._by_lam[lam]
        except KeyError:
            raise UnknownPeripheral(f"no peripheral {lam}") from None

    # -- element arithmetic ---------------------------------------------------

    def identity(self) -> Tuple:
        fam = self.family
        if isinstance(fam, FreeAbelianFamily):
            return (0,) * fam.rank
        return ()

    def multiply(self, u: Tuple, v: Tuple) -> Tuple:
        fam = self.family
        if isinstance(fam, FreeGroupFamily):
            out = list(u)
            for x in v:
                if out and out[-1] == -x:
                    out.pop()
                else:
                    out.append(x)
            return tuple(out)
        if isinstance(fam, FreeAbelianFamily):
            return tuple(x + y for x, y in zip(u, v))
        out = _fp_mult(self._factors(), u, v)
        if isinstance(fam, OneRelatorQuotient):
            out = self._dehn_reduce(out)
        return out

    def inverse(self, u: Tuple) -> Tuple:
        fam = self.family
        if isinstance(fam, FreeGroupFamily):
            return tuple(-x for x in reversed(u))
        if isinstance(fam, FreeAbelianFamily):
            return tuple(-x for x in u)
        factors = self._factors()
        return tuple((fi, factors[fi].inv(p)) for fi, p in reversed(u))

    def _dehn_reduce(self, w: Tuple) -> Tuple:
        factors = self.family.factors
        rels = self._symmetrized
        changed = True
        while changed:
            changed = False
            for i in range(len(w)):
                for rel in rels:
                    m = 0
                    while m < len(rel) and i + m < len(w) and w[i + m] == rel[m]:
                        m += 1
                    if 2 * m > len(rel):
                        tail = tuple((fi, factors[fi].inv(p))
                                     for fi, p in reversed(rel[m:]))
                        w = _fp_mult(factors, _fp_mult(factors, w[:i], tail), w[i + m:])
                        changed = True
                        break
                if changed:
                    break
        return w

    # -- lengths ---------------------------------------------------------------

    def length_x(self, u: Tuple) -> int:
        fam = self.family
        if isinstance(fam, FreeGroupFamily):
            return len(u)
        if isinstance(fam, FreeAbelianFamily):
            return sum(abs(x) for x in u)
        if isinstance(fam, OneRelatorQuotient):
            raise UnsupportedFamily("exact |.|_X is not decidable for quotient families")
        factors = fam.factors
        return sum(factors[fi].xlen(p) for fi, p in u)

    def length_rel(self, u: Tuple) -> int:
        fam = self.family
        if isinstance(fam, FreeGroupFamily):
            return len(u)
        if isinstance(fam, FreeAbelianFamily):
            total = 0
            for i, v in enumerate(u):
                if v == 0:
                    continue
                total += 1 if i in self._lam_of_axis else abs(v)
            return total
        if isinstance(fam, OneRelatorQuotient):
            raise UnsupportedFamily("exact |.|_{X∪H} is not decidable for quotient families")
        factors = fam.factors
        total = 0
        for fi, p in u:
            total += 1 if fi in self._lam_of_factor else factors[fi].xlen(p)
        return total

    def dist_x(self, u: Tuple, v: Tuple) -> int:
        return self.length_x(self.multiply(self.inverse(u), v))

    def dist_rel(self, u: Tuple, v: Tuple) -> int:
        return self.length_rel(self.multiply(self.inverse(u), v))

    # -- letters and words -----------------------------------------------------

    def letter_element(self, letter: Letter) -> Tuple:
        fam = self.family
        if isinstance(letter, XLetter):
            if letter.name not in self._slots:
                raise UnknownGenerator(f"unknown generator {letter.name!r}")
            fi, slot = self._slots[letter.name]
            if isinstance(fam, FreeGroupFamily):
                return (letter.sign * (slot + 1),)
            if isinstance(fam, FreeAbelianFamily):
                return tuple(letter.sign if i == slot else 0 for i in range(fam.rank))
            factor = self._factors()[fi]
            return ((fi, factor.gen_payload(slot, letter.sign)),)
        per = self.peripheral(letter.lam)
        if per.kind == "factor":
            factor = self._factors()[per.index]
            return ((per.index, factor.validate(letter.payload)),)
        if not isinstance(letter.payload, int) or letter.payload == 0:
            raise UnknownGenerator("peripheral letter must be a nonzero exponent")
        return tuple(letter.payload if i == per.index else 0
                     for i in range(self.family.rank))

    def element_of_word(self, word: Word) -> Tuple:
        out = self.identity()
        for letter in word:
            out = self.multiply(out, self.letter_element(letter))
        return out

    def canonical_word(self, u: Tuple) -> Word:
        fam = self.family
        names = self.gen_names
        if isinstance(fam, FreeGroupFamily):
            return tuple(XLetter(names[abs(x) - 1], 1 if x > 0 else -1) for x in u)
        if isinstance(fam, FreeAbelianFamily):
            letters = []
            for i, v in enumerate(u):
                if v == 0:
                    continue
                if i in self._lam_of_axis:
                    letters.append(HLetter(self._lam_of_axis[i], v))
                else:
                    s = 1 if v > 0 else -1
                    letters.extend(XLetter(names[i], s) for _ in range(abs(v)))
            return tuple(letters)
        factors = self._factors()
        base = []
        pos = 0
        for f in factors:
            base.append(pos)
            pos += f.num_gens()
        letters = []
        for fi, p in u:
            if fi in self._lam_of_factor:
                letters.append(HLetter(self._lam_of_factor[fi], p))
            else:
                for slot, sign in factors[fi].payload_slots(p):
                    letters.append(XLetter(names[base[fi] + slot], sign))
        return tuple(letters)

    def canonical_letter(self, letter: Letter) -> Letter:
        """Identify an X-letter whose element lies in some peripheral with
        the corresponding H-letter (the alphabet X ∪ H is a set union)."""
        elt = self.letter_element(letter)
        for p in self.peripherals:
            payload = self.peripheral_payload(elt, p.lam)
            if payload is not None and not self._payload_trivial(p, payload):
                return HLetter(p.lam, payload)
        if isinstance(letter, HLetter):
            return HLetter(letter.lam, self._validated_payload(letter))
        return letter

    def _validated_payload(self, letter: HLetter):
        per = self.peripheral(letter.lam)
        if per.kind == "factor":
            return self._factors()[per.index].validate(letter.payload)
        return letter.payload

    def _payload_trivial(self, per: Peripheral, payload) -> bool:
        if per.kind == "factor":
            return self._factors()[per.index].is_identity(payload)
        return payload == 0

    def shortlex_key(self, u: Tuple):
        return word_key(self.canonical_word(u))

    # -- peripherals ------------------------------------------------------------

    def peripheral_payload(self, u: Tuple, lam: int):
        """The intrinsic H_lam encoding of u, or None if u is not in H_lam."""
        per = self.peripheral(lam)
        if per.kind == "factor":
            if u == ():
                return self._factors()[per.index].identity()
            if len(u) == 1 and u[0][0] == per.index:
                return u[0][1]
            return None
        if any(v != 0 for i, v in enumerate(u) if i != per.index):
            return None
        return u[per.index]

    def in_peripheral(self, u: Tuple, lam: int) -> bool:
        return self.peripheral_payload(u, lam) is not None

    def payload_element(self, lam: int, payload) -> Tuple:
        per = self.peripheral(lam)
        if per.kind == "factor":
            factor = self._factors()[per.index]
            if factor.is_identity(payload):
                return ()
            return ((per.index, payload),)
        return tuple(payload if i == per.index else 0 for i in range(self.family.rank))

    def peripheral_elements(self, lam: int, x_cap: int) -> Iterator[Tuple]:
        """Nontrivial elements of H_lam with |.|_X <= x_cap."""
        per = self.peripheral(lam)
        if per.kind == "factor":
            factor = self._factors()[per.index]
            for p in factor.elements(x_cap):
                yield ((per.index, p),)
        else:
            for m in range(1, x_cap + 1):
                for s in (1, -1):
                    yield tuple(s * m if i == per.index else 0
                                for i in range(self.family.rank))

    def peripheral_xlen(self, lam: int, payload) -> int:
        per = self.peripheral(lam)
        if per.kind == "factor":
            return self._factors()[per.index].xlen(payload)
        return abs(payload)

    def payload_mult(self, lam: int, a, b):
        per = self.peripheral(lam)
        if per.kind == "factor":
            return self._factors()[per.index].mult(a, b)
        return a + b

    def payload_inverse(self, lam: int, a):
        per = self.peripheral(lam)
        if per.kind == "factor":
            return self._factors()[per.index].inv(a)
        return -a

    def payload_is_identity(self, lam: int, a) -> bool:
        per = self.peripheral(lam)
        if per.kind == "factor":
            return self._factors()[per.index].is_identity(a)
        return a == 0

    def coset_rep(self, u: Tuple, lam: int) -> Tuple:
        """Canonical representative of u·H_lam: the normal form with a
        trailing H_lam part removed."""
        per = self.peripheral(lam)
        if per.kind == "factor":
            if u and u[-1][0] == per.index:
                return u[:-1]
            return u
        return tuple(0 if i == per.index else v for i, v in enumerate(u))

    # -- generators as elements ---------------------------------------------------

    def x_letters(self) -> Tuple[Letter, ...]:
        """The symmetric generating set X as canonical letters."""
        out = []
        for nm in self.gen_names:
            for s in (1, -1):
                out.append(self.canonical_letter(XLetter(nm, s)))
        return tuple(out)

    def x_gen_elements(self) -> Tuple[Tuple, ...]:
        return tuple(self.letter_element(XLetter(nm, s))
                     for nm in self.gen_names for s in (1, -1))

    def gen_name_of(self, fi, slot: int) -> str:
        """Global generator name for a factor slot (fi=None for the
        free / free-abelian families)."""
        for nm, (f, s) in self._slots.items():
            if f == fi and s == slot:
                return nm
        raise UnknownGenerator(f"no generator for factor {fi} slot {slot}")

    # -- ball enumeration and counting ---------------------------------------------

    def enumerate_ball(self, x_cap: int, rel_cap: Optional[int] = None) -> Iterator[Tuple]:
        """All elements with |g|_X <= x_cap (and |g|_rel <= rel_cap if given)."""
        fam = self.family
        if isinstance(fam, FreeGroupFamily):
            cap = x_cap if rel_cap is None else min(x_cap, rel_cap)
            yield ()
            frontier = [()]
            for _ in range(cap):
                nxt = []
                for w in frontier:
                    for x in range(1, fam.rank + 1):
                        for s in (1, -1):
                            if w and w[-1] == -s * x:
                                continue
                            nxt.append(w + (s * x,))
                yield from nxt
                frontier = nxt
            return
        if isinstance(fam, FreeAbelianFamily):
            for v in itertools.product(range(-x_cap, x_cap + 1), repeat=fam.rank):
                if sum(abs(c) for c in v) <= x_cap:
                    if rel_cap is None or self.length_rel(v) <= rel_cap:
                        yield v
            return
        if isinstance(fam, OneRelatorQuotient):
            raise UnsupportedFamily("ball enumeration is not exact for quotient families")
        factors = fam.factors

        def rel_cost(fi, p):
            return 1 if fi in self._lam_of_factor else factors[fi].xlen(p)

        def rec(prefix, last_fi, x_left, rel_left):
            yield tuple(prefix)
            for fi, f in enumerate(factors):
                if fi == last_fi:
                    continue
                for p in f.elements(x_left):
                    rc = rel_cost(fi, p)
                    if rel_left is not None and rc > rel_left:
                        continue
                    prefix.append((fi, p))
                    yield from rec(prefix, fi, x_left - f.xlen(p),
                                   None if rel_left is None else rel_left - rc)
                    prefix.pop()

        yield from rec([], None, x_cap, rel_cap)

    def x_ball_size(self, radius) -> int:
        """#{g : |g|_X <= radius}, computed without enumeration."""
        import math

        radius = int(math.floor(radius))
        if radius < 0:
            return 0
        fam = self.family
        if isinstance(fam, FreeGroupFamily):
            total = 1
            for l in range(1, radius + 1):
                total += 2 * fam.rank * (2 * fam.rank - 1) ** (l - 1)
            return total
        if isinstance(fam, FreeAbelianFamily):
            counts = [1] + [0] * radius
            for _ in range(fam.rank):
                nxt = [0] * (radius + 1)
                for tot, c in enumerate(counts):
                    if not c:
                        continue
                    nxt[tot] += c
                    for v in range(1, radius - tot + 1):
                        nxt[tot + v] += 2 * c
                counts = nxt
            return sum(counts)
        if isinstance(fam, OneRelatorQuotient):
            raise UnsupportedFamily("ball counting is not exact for quotient families")
        factors = fam.factors
        per_len = [[f.count_by_xlen(l) for l in range(radius + 1)] for f in factors]
        # g[b][fi]: elements of X-length b whose last syllable is from factor fi
        g = [[0] * len(factors) for _ in range(radius + 1)]
        for b in range(1, radius + 1):
            for fi in range(len(factors)):
                acc = 0
                for l in range(1, b + 1):
                    cnt = per_len[fi][l]
                    if not cnt:
                        continue
                    rest = b - l
                    if rest == 0:
                        acc += cnt
                    else:
                        acc += cnt * sum(g[rest][fj] for fj in range(len(factors))
                                         if fj != fi)
                g[b][fi] = acc
        return 1 + sum(g[b][fi] for b in range(1, radius + 1)
                       for fi in range(len(factors)))


def _fp_mult(factors, u, v):
    out = list(u)
    for fi, p in v:
        if out and out[-1][0] == fi:
            merged = factors[fi].mult(out[-1][1], p)
            if factors[fi].is_identity(merged):
                out.pop()
            else:
                out[-1] = (fi, merged)
        else:
            out.append((fi, p))
    return tuple(out)


def _symmetrize(factors, relator):
    """All cyclic rotations of the cyclically reduced relator and its inverse."""
    w = tuple(relator)
    # cyclic reduction: merge first/last syllables while they share a factor
    while len(w) >= 2 and w[0][0] == w[-1][0]:
        fi = w[0][0]
        merged = factors[fi].mult(w[-1][1], w[0][1])
        if factors[fi].is_identity(merged):
            w = w[1:-1]
        else:
            w = ((fi, merged),) + w[1:-1]
    if not w:
        return ()
    winv = tuple((fi, factors[fi].inv(p)) for fi, p in reversed(w))
    rels = set()
    for base in (w, winv):
        for i in range(len(base)):
            rels.add(base[i:] + base[:i])
    return tuple(sorted(rels))


# ---------------------------------------------------------------------------
# module-level operations in the artifact's vocabulary


def normal_form(spec: GroupSpec, word: Word) -> GroupElement:
    """Canonical form of a word; two words map to the same element iff
    they agree in the group (exact for free / abelian / free-product
    families; for quotient families the greedy Dehn pass is the best
    built-in effort and is only guaranteed for small-cancellation
    presentations)."""
    return GroupElement(spec, spec.element_of_word(word))


def is_identity(spec: GroupSpec, word: Word) -> bool:
    return spec.element_of_word(word) == spec.identity()


def coset_id(spec: GroupSpec, g: GroupElement, lam: int) -> CosetId:
    elt = g.elt if isinstance(g, GroupElement) else g
    return CosetId(lam, spec.coset_rep(elt, lam))


def length_X(spec: GroupSpec, g: GroupElement) -> int:
    elt = g.elt if isinstance(g, GroupElement) else g
    return spec.length_x(elt)


def length_rel(spec: GroupSpec, g: GroupElement) -> int:
    elt = g.elt if isinstance(g, GroupElement) else g
    return spec.length_rel(elt)
