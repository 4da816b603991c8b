"""Finite windows of the relative Cayley graph and the component calculus.

A window materializes ``{g : |g|_rel <= n and |g|_X <= rho_x}`` with both
word lengths.  The truncation by ``rho_x`` is what makes the graph
finite: peripheral letters give every vertex infinitely many neighbours
otherwise.  For the supported families both distances are closed-form
and window-independent, so distances reported here are exact, never
truncation artifacts.

Edges carry canonical letters.  A generator whose element lies in a
peripheral subgroup is *identified* with the corresponding peripheral
letter (the alphabet is a set union), so between any two adjacent
vertices there is exactly one letter: either a peripheral letter or a
generator outside every peripheral.

Components of a path are maximal runs of peripheral letters of one
lambda, scanned linearly (a cycle's first and last runs are distinct
components; they are connected through the basepoint coset whenever
both exist).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import (
    CapExceeded,
    MixedSpecs,
    UnsupportedFamily,
    WindowTooLarge,
)
from .groups import (
    FreeAbelianFamily,
    FreeGroupFamily,
    FreeProductFamily,
    GroupSpec,
)
from .words import HLetter, Letter, Word, XLetter, format_word, word_key

WINDOW_CAP_DEFAULT = 2_000_000


class Window:
    """The vertex set {g : |g|_rel <= n, |g|_X <= rho_x} with adjacency
    served on demand."""

    def __init__(self, spec: GroupSpec, n: int, rho_x: int, elements: List[Tuple]):
        self.spec = spec
        self.n = n
        self.rho_x = rho_x
        self.elements = elements
        self.index = {e: i for i, e in enumerate(elements)}
        self.len_x = [spec.length_x(e) for e in elements]
        self.len_rel = [spec.length_rel(e) for e in elements]
        # distances are certified exact for every family that can build
        # a window at all (closed forms, independent of the truncation)
        self.distances_certified = True
        self._coset_lines: Dict[int, Dict[Tuple, List[Tuple]]] = {}
        self._x_edge_letters = None

    def __contains__(self, elt) -> bool:
        return elt in self.index

    def __len__(self) -> int:
        return len(self.elements)

    def dist_x(self, u, v) -> int:
        return self.spec.dist_x(u, v)

    def dist_rel(self, u, v) -> int:
        return self.spec.dist_rel(u, v)

    def rel_diameter(self) -> int:
        best = 0
        for i, u in enumerate(self.elements):
            for v in self.elements[i + 1:]:
                d = self.dist_rel(u, v)
                if d > best:
                    best = d
        return best

    # -- adjacency ----------------------------------------------------------

    def _pure_x_letters(self):
        # generators outside every peripheral; peripheral ones are
        # identified with H-letters and served by coset lines
        if self._x_edge_letters is None:
            out = []
            for letter in self.spec.x_letters():
                if isinstance(letter, XLetter):
                    out.append((letter, self.spec.letter_element(letter)))
            self._x_edge_letters = out
        return self._x_edge_letters

    def coset_lines(self, lam: int) -> Dict[Tuple, List[Tuple]]:
        """Window vertices grouped by their H_lam coset."""
        if lam not in self._coset_lines:
            lines: Dict[Tuple, List[Tuple]] = {}
            for e in self.elements:
                lines.setdefault(self.spec.coset_rep(e, lam), []).append(e)
            self._coset_lines[lam] = lines
        return self._coset_lines[lam]

    def rel_neighbors(self, u) -> Iterator[Tuple[Tuple, Letter]]:
        spec = self.spec
        for letter, elt in self._pure_x_letters():
            v = spec.multiply(u, elt)
            if v in self.index:
                yield v, letter
        for per in spec.peripherals:
            line = self.coset_lines(per.lam).get(spec.coset_rep(u, per.lam), ())
            for v in line:
                if v == u:
                    continue
                payload = spec.peripheral_payload(
                    spec.multiply(spec.inverse(u), v), per.lam)
                yield v, HLetter(per.lam, payload)

    def x_neighbors(self, u) -> Iterator[Tuple]:
        for _, elt in self._x_all_letters():
            v = self.spec.multiply(u, elt)
            if v in self.index:
                yield v

    def _x_all_letters(self):
        # every generator, whether or not peripheral-identified: these
        # are the edges of the *absolute* Cayley graph Gamma(G, X)
        return [(letter, self.spec.letter_element(XLetter(nm, s)))
                for nm in self.spec.gen_names for s in (1, -1)
                for letter in (XLetter(nm, s),)]

    def ball(self, center, r: int, metric: str) -> List[Tuple]:
        """All window vertices within distance r of center (exact: BFS in
        the respective graph, which computes the genuine metric because
        both metrics are geodesic on the ambient group and the window
        membership check only trims, never reroutes)."""
        if metric == "x":
            neigh = self.x_neighbors
        elif metric == "rel":
            neigh = lambda u: (v for v, _ in self.rel_neighbors(u))
        else:
            raise ValueError(f"unknown metric {metric!r}")
        if center not in self.index:
            return []
        seen = {center}
        frontier = [center]
        for _ in range(r):
            nxt = []
            for u in frontier:
                for v in neigh(u):
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        # BFS in the truncated graph can miss detour-only points; filter
        # by the exact distance instead of trusting the hop count
        return [v for v in seen if self._dist(metric, center, v) <= r]

    def _dist(self, metric, u, v):
        return self.dist_x(u, v) if metric == "x" else self.dist_rel(u, v)

    def ball_exact(self, center, r: int, metric: str) -> List[Tuple]:
        """Exact metric ball within the window, by distance filter over a
        BFS overshoot (the truncated graph may need extra hops for short
        exact distances near the boundary)."""
        if metric == "x":
            # |.|_X geodesics through the ambient group may leave the
            # window; scan the whole window when r is large, else BFS
            if r >= 3:
                return [v for v in self.elements if self.dist_x(center, v) <= r]
            out = [v for v in self.ball(center, r + 2, "x")
                   if self.dist_x(center, v) <= r]
            return out
        return [v for v in self.ball(center, r + 2, "rel")
                if self.dist_rel(center, v) <= r]

    def bfs_rel_distances(self, source) -> Dict[Tuple, int]:
        """Independent oracle: BFS over the materialized adjacency."""
        dist = {source: 0}
        frontier = [source]
        while frontier:
            nxt = []
            for u in frontier:
                for v, _ in self.rel_neighbors(u):
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        return dist

    def bfs_x_distances(self, source) -> Dict[Tuple, int]:
        dist = {source: 0}
        frontier = [source]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self.x_neighbors(u):
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        return dist

    def dump(self) -> str:
        """Golden-test format: one vertex per line, then the edge list."""
        spec = self.spec
        lines = [f"# window n={self.n} rho_x={self.rho_x} vertices={len(self)}"]
        for i, e in enumerate(self.elements):
            w = format_word(spec.canonical_word(e))
            lines.append(f"{i}\t{w}\t{self.len_x[i]}\t{self.len_rel[i]}")
        lines.append("# edges")
        for i, u in enumerate(self.elements):
            edges = []
            for v, letter in self.rel_neighbors(u):
                j = self.index[v]
                if j > i:
                    edges.append((j, str(letter)))
            for j, lab in sorted(edges):
                lines.append(f"{i}\t{j}\t{lab}")
        return "\n".join(lines) + "\n"


def build_window(spec: GroupSpec, n: int, rho_x: int,
                 cap: int = WINDOW_CAP_DEFAULT) -> Window:
    """Exact window {|g|_rel <= n, |g|_X <= rho_x}, ShortLex-ordered."""
    if n < 0 or rho_x < 0:
        raise ValueError("window radii must be nonnegative")
    elems = []
    for e in spec.enumerate_ball(rho_x, n):
        elems.append(e)
        if len(elems) > cap:
            raise WindowTooLarge(
                f"window n={n} rho_x={rho_x} exceeds vertex cap {cap}")
    elems.sort(key=spec.shortlex_key)
    return Window(spec, n, rho_x, elems)


# ---------------------------------------------------------------------------
# paths and components


@dataclass(frozen=True)
class Path:
    spec: GroupSpec
    start: Tuple
    letters: Word
    vertices: Tuple[Tuple, ...]

    @property
    def end(self):
        return self.vertices[-1]

    @property
    def is_cycle(self) -> bool:
        return self.start == self.end

    def __len__(self) -> int:
        return len(self.letters)

    def label(self) -> str:
        return format_word(self.letters)

    def reversed(self) -> "Path":
        spec = self.spec
        letters = []
        for letter in reversed(self.letters):
            if isinstance(letter, XLetter):
                letters.append(XLetter(letter.name, -letter.sign))
            else:
                letters.append(HLetter(letter.lam,
                                       spec.payload_inverse(letter.lam, letter.payload)))
        return Path(spec, self.end, tuple(letters), tuple(reversed(self.vertices)))


def path_from_labels(spec: GroupSpec, start, letters, merge: bool = True) -> Path:
    """Trace a path from its label word.

    With ``merge`` (the default), consecutive peripheral letters of one
    lambda whose product is nontrivial collapse into a single letter —
    every nontrivial peripheral element is itself one letter of the
    alphabet.  Pairs multiplying to the identity stay as two edges (the
    walk genuinely visits the intermediate vertex).
    """
    canon = [spec.canonical_letter(l) for l in letters]
    if merge:
        merged: List[Letter] = []
        for letter in canon:
            if (merged and isinstance(letter, HLetter)
                    and isinstance(merged[-1], HLetter)
                    and merged[-1].lam == letter.lam):
                prod = spec.payload_mult(letter.lam, merged[-1].payload, letter.payload)
                if not spec.payload_is_identity(letter.lam, prod):
                    merged[-1] = HLetter(letter.lam, prod)
                    continue
            merged.append(letter)
        canon = merged
    vertices = [start]
    for letter in canon:
        vertices.append(spec.multiply(vertices[-1], spec.letter_element(letter)))
    return Path(spec, start, tuple(canon), tuple(vertices))


@dataclass(frozen=True)
class Component:
    """Maximal run of H_lam letters inside a path."""

    path: Path
    lam: int
    start: int  # first letter index
    end: int    # one past the last letter index

    @property
    def start_vertex(self):
        return self.path.vertices[self.start]

    @property
    def end_vertex(self):
        return self.path.vertices[self.end]

    def coset(self):
        return self.path.spec.coset_rep(self.start_vertex, self.lam)

    def displacement_x(self) -> int:
        return self.path.spec.dist_x(self.start_vertex, self.end_vertex)

    def __len__(self) -> int:
        return self.end - self.start


def components(path: Path) -> List[Component]:
    out: List[Component] = []
    i = 0
    letters = path.letters
    while i < len(letters):
        letter = letters[i]
        if isinstance(letter, HLetter):
            j = i + 1
            while j < len(letters) and isinstance(letters[j], HLetter) \
                    and letters[j].lam == letter.lam:
                j += 1
            out.append(Component(path, letter.lam, i, j))
            i = j
        else:
            i += 1
    return out


def are_connected(c1: Component, c2: Component) -> bool:
    """Same lambda and one coset: a connecting path of peripheral letters
    exists (of length at most 1)."""
    if c1.path.spec is not c2.path.spec:
        raise MixedSpecs("components live over different specs")
    return c1.lam == c2.lam and c1.coset() == c2.coset()


def is_isolated(c: Component, siblings: Optional[List[Component]] = None) -> bool:
    """No distinct component of the ambient path is connected to c."""
    if siblings is None:
        siblings = components(c.path)
    for other in siblings:
        if other is c or (other.start, other.end) == (c.start, c.end):
            continue
        if are_connected(c, other):
            return False
    return True


# ---------------------------------------------------------------------------
# geodesics


def _geodesic_successors(spec: GroupSpec, u, target):
    """Vertices one geodesic step from u toward target, with letters."""
    fam = spec.family
    w = spec.multiply(spec.inverse(u), target)
    out = []
    if isinstance(fam, FreeGroupFamily):
        if not w:
            return out
        x = w[0]
        letter = XLetter(spec.gen_names[abs(x) - 1], 1 if x > 0 else -1)
        out.append((spec.multiply(u, (x,)), letter))
        return out
    if isinstance(fam, FreeAbelianFamily):
        for i, delta in enumerate(w):
            if delta == 0:
                continue
            if i in spec._lam_of_axis:
                lam = spec._lam_of_axis[i]
                step = tuple(delta if j == i else 0 for j in range(fam.rank))
                out.append((spec.multiply(u, step), HLetter(lam, delta)))
            else:
                s = 1 if delta > 0 else -1
                step = tuple(s if j == i else 0 for j in range(fam.rank))
                out.append((spec.multiply(u, step), XLetter(spec.gen_names[i], s)))
        return out
    if isinstance(fam, FreeProductFamily):
        if not w:
            return out
        fi, p = w[0]
        if fi in spec._lam_of_factor:
            lam = spec._lam_of_factor[fi]
            out.append((spec.multiply(u, ((fi, p),)), HLetter(lam, p)))
            return out
        factor = fam.factors[fi]
        for slot, sign in factor.payload_first_steps(p):
            elt = ((fi, factor.gen_payload(slot, sign)),)
            letter = XLetter(spec.gen_name_of(fi, slot), sign)
            out.append((spec.multiply(u, elt), letter))
        return out
    raise UnsupportedFamily("geodesics are not decidable for this family")


def rel_geodesics(window: Window, g, h, cap: int = 10000) -> List[Path]:
    """All geodesics g -> h in Gamma(G, X∪H) whose vertices stay in the
    window, deterministically ordered by label word."""
    spec = window.spec
    if g not in window.index or h not in window.index:
        raise KeyError("geodesic endpoints must lie in the window")
    results: List[Path] = []

    def rec(u, letters, vertices):
        if u == h:
            results.append(Path(spec, g, tuple(letters), tuple(vertices)))
            if len(results) > cap:
                raise CapExceeded(f"more than {cap} geodesics")
            return
        for v, letter in _geodesic_successors(spec, u, h):
            if v not in window.index:
                continue
            letters.append(letter)
            vertices.append(v)
            rec(v, letters, vertices)
            letters.pop()
            vertices.pop()

    rec(g, [], [g])
    results.sort(key=lambda p: word_key(p.letters))
    return results


def geodesic(window: Window, g, h) -> Path:
    """The ShortLex-least geodesic from g to h."""
    paths = rel_geodesics(window, g, h, cap=10000)
    return paths[0]


# ---------------------------------------------------------------------------
# cycles


def enumerate_cycles_raw(window: Window, base, len_cap: int,
                         cap: int = 2_000_000) -> Iterator[Path]:
    """Every closed walk at ``base`` of length <= len_cap with vertices in
    the window.  Exponential; meant as the independent oracle on small
    windows."""
    spec = window.spec
    count = 0

    def rec(u, letters, vertices):
        nonlocal count
        if letters and u == base:
            count += 1
            if count > cap:
                raise CapExceeded(f"more than {cap} raw cycles")
            yield Path(spec, base, tuple(letters), tuple(vertices))
        if len(letters) == len_cap:
            return
        remaining = len_cap - len(letters)
        for v, letter in window.rel_neighbors(u):
            if window.dist_rel(v, base) > remaining - 1:
                continue
            letters.append(letter)
            vertices.append(v)
            yield from rec(v, letters, vertices)
            letters.pop()
            vertices.pop()

    yield from rec(base, [], [base])


def cycle_canonical(spec: GroupSpec, letters: Word) -> Word:
    """Canonical representative of a cycle word under rotation and
    reversal (both leave the component calculus invariant)."""
    def inv(ls):
        out = []
        for letter in reversed(ls):
            if isinstance(letter, XLetter):
                out.append(XLetter(letter.name, -letter.sign))
            else:
                out.append(HLetter(letter.lam,
                                   spec.payload_inverse(letter.lam, letter.payload)))
        return tuple(out)

    candidates = []
    for base in (tuple(letters), inv(tuple(letters))):
        for i in range(len(base)):
            candidates.append(base[i:] + base[:i])
    return min(candidates, key=word_key)


def enumerate_cycle_words(spec: GroupSpec, len_cap: int, exp_cap: int,
                          prefix_cap: int) -> List[Word]:
    """Label words of reduced cycles, exhaustive up to the reductions that
    only increase the Lemma-2.2 ratio and preserve violations:

    * translation (label words are basepoint-free),
    * rotation and reversal,
    * merging adjacent same-lambda letters with nontrivial product,
    * deleting subsegments that multiply to the identity.

    After these reductions a cycle word has pairwise distinct prefix
    products and internally alternating peripheral letters.  Over a free
    product that forces the word to be its own normal form, so no
    nonempty reduced cycle exists at all; over a free abelian group the
    zero-sum condition per peripheral axis drives the search.
    """
    if not spec.peripherals:
        return []
    if isinstance(spec.family, FreeProductFamily) and \
            all(p.kind == "factor" for p in spec.peripherals) and \
            len(spec._lam_of_factor) == len(spec.family.factors):
        # an internally alternating word over the factors is its own
        # normal form, hence never trivial: the reduced cycle space is
        # empty (every cycle reduces away)
        return []

    pools = []
    for per in spec.peripherals:
        for h in spec.peripheral_elements(per.lam, exp_cap):
            payload = spec.peripheral_payload(h, per.lam)
            pools.append((HLetter(per.lam, payload), h))
    for letter, elt in [(l, spec.letter_element(l)) for l in spec.x_letters()
                        if isinstance(l, XLetter)]:
        pools.append((letter, elt))

    identity = spec.identity()
    seen_words = set()
    results: List[Word] = []

    def lam_of(letter):
        return letter.lam if isinstance(letter, HLetter) else None

    def rec(letters, products):
        u = products[-1]
        if letters and u == identity:
            canon = cycle_canonical(spec, tuple(letters))
            if canon not in seen_words:
                seen_words.add(canon)
                results.append(canon)
            return  # longer words through the identity split into smaller cycles
        if len(letters) == len_cap:
            return
        last_lam = lam_of(letters[-1]) if letters else None
        for letter, elt in pools:
            ll = lam_of(letter)
            if ll is not None and ll == last_lam:
                continue  # mergeable or deletable: covered by shorter words
            v = spec.multiply(u, elt)
            if spec.length_x(v) > prefix_cap:
                continue
            if v in products_set and v != identity:
                continue  # repeats a prefix product: deletable segment
            if v == identity and len(letters) == 0:
                continue
            products.append(v)
            products_set.add(v)
            letters.append(letter)
            rec(letters, products)
            letters.pop()
            products.pop()
            if v != identity:
                products_set.discard(v)

    products_set = {identity}
    rec([], [identity])
    results.sort(key=word_key)
    return results
