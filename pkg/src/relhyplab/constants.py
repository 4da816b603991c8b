"""Empirical estimation of the window-scale geometry constants.

Everything here is estimated *from below* by finite enumeration and the
report always carries the caps that produced it.  The estimated
quantities:

* ``xi``: geodesic triangles in the relative metric are xi-thin over the
  enumerated triangle set (conjugate vertex pairs at equal distance from
  a corner are within xi of each other);
* ``L``: the largest observed ratio (sum over isolated components of a
  cycle, one lambda at a time, of the X-displacement of the component)
  over the cycle length;
* ``eps(s)``: the smallest threshold such that every enumerated geodesic
  whose endpoints are s-close in the X-metric to those of a second
  geodesic has all its X-long components matched by a connected
  component on the second geodesic.

Derived values follow the fixed recipes ``sigma = 5*xi`` and
``rho = 6*L*xi^2`` with the degenerate case clamped so that
``6*L*xi >= 1`` (tree-like windows estimate both constants as zero,
which would make every derived radius collapse; the clamp raises xi to
1 and L to 1/(6*xi) first).  ``mu`` counts the X-ball of radius rho.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NotOnSides
from .groups import GroupSpec
from .relcayley import (
    Path,
    Window,
    are_connected,
    components,
    enumerate_cycle_words,
    is_isolated,
    path_from_labels,
    rel_geodesics,
)
from .words import Word, format_word, word_key


# ---------------------------------------------------------------------------
# geodesic triangles


@dataclass
class GeodesicTriangle:
    """A triangle with one chosen geodesic per side.

    Sides are stored as vertex tuples from the first-named corner, so
    ``side_xy[t]`` is the vertex at relative distance t from x.
    """

    window: Window
    x: Tuple
    y: Tuple
    z: Tuple
    side_xy: Tuple[Tuple, ...]
    side_xz: Tuple[Tuple, ...]
    side_yz: Tuple[Tuple, ...]

    def dist(self, u, v) -> int:
        return self.window.dist_rel(u, v)

    def gromov2(self, corner: str) -> int:
        """Twice the Gromov product at the corner (always an integer)."""
        dxy = len(self.side_xy) - 1
        dxz = len(self.side_xz) - 1
        dyz = len(self.side_yz) - 1
        if corner == "x":
            return dxy + dxz - dyz
        if corner == "y":
            return dxy + dyz - dxz
        return dxz + dyz - dxy

    def legs(self, corner: str):
        """The two sides leaving the corner, oriented away from it."""
        if corner == "x":
            return self.side_xy, self.side_xz
        if corner == "y":
            return tuple(reversed(self.side_xy)), self.side_yz
        return tuple(reversed(self.side_xz)), tuple(reversed(self.side_yz))

    def internal_points(self):
        """The three equidistance points (a on [y,z], b on [x,z], c on
        [x,y]) when the Gromov products are integral, else None."""
        if any(self.gromov2(c) % 2 for c in "xyz"):
            return None
        ax = self.gromov2("x") // 2
        ay = self.gromov2("y") // 2
        az = self.gromov2("z") // 2
        a = self.side_yz[ay]
        b = self.side_xz[ax]
        c = self.side_xy[ax]
        del az
        return a, b, c


def triangle(window: Window, x, y, z,
             sides: Optional[Tuple[Path, Path, Path]] = None) -> GeodesicTriangle:
    if sides is None:
        sides = (rel_geodesics(window, x, y)[0],
                 rel_geodesics(window, x, z)[0],
                 rel_geodesics(window, y, z)[0])
    return GeodesicTriangle(window, x, y, z,
                            sides[0].vertices, sides[1].vertices, sides[2].vertices)


def conjugate_pairs(tri: GeodesicTriangle) -> List[Tuple[Tuple, Tuple]]:
    """All equal-parameter vertex pairs on the leg pairs of the three
    corners, up to each corner's Gromov product."""
    out = []
    for corner in "xyz":
        legA, legB = tri.legs(corner)
        tmax = tri.gromov2(corner) // 2
        for t in range(0, min(tmax, len(legA) - 1, len(legB) - 1) + 1):
            out.append((legA[t], legB[t]))
    return out


def check_uv(tri: GeodesicTriangle, u, v) -> bool:
    """The distance-sum test for conjugacy: u on [x,y] and v on [x,z] at
    equal distance from x are conjugate when
    dist(u,y) + dist(v,z) >= dist(y,z)."""
    if u not in tri.side_xy:
        raise NotOnSides("u is not a vertex of side [x,y]")
    if v not in tri.side_xz:
        raise NotOnSides("v is not a vertex of side [x,z]")
    tu = tri.side_xy.index(u)
    tv = tri.side_xz.index(v)
    if tu != tv:
        return False
    dxy = len(tri.side_xy) - 1
    dxz = len(tri.side_xz) - 1
    dyz = len(tri.side_yz) - 1
    return (dxy - tu) + (dxz - tv) >= dyz


def _rel_distance_rows(window: Window) -> List[List[int]]:
    """Index-based relative distance matrix (windows here are small)."""
    elems = window.elements
    n = len(elems)
    spec = window.spec
    rows = [[0] * n for _ in range(n)]
    inverses = [spec.inverse(e) for e in elems]
    for i in range(n):
        inv_i = inverses[i]
        row = rows[i]
        for j in range(i + 1, n):
            d = spec.length_rel(spec.multiply(inv_i, elems[j]))
            row[j] = d
            rows[j][i] = d
    return rows


def _triangle_iter(window: Window, side_cap: int, geodesic_cap: int):
    """All vertex triples with pairwise relative distance <= side_cap,
    with every geodesic side choice (capped per side)."""
    elems = window.elements
    n = len(elems)
    rows = _rel_distance_rows(window)
    geo_memo: Dict[Tuple[int, int], List[Tuple[Tuple, ...]]] = {}

    def geos(i, j):
        key = (i, j)
        if key not in geo_memo:
            paths = rel_geodesics(window, elems[i], elems[j], cap=10 * geodesic_cap)
            geo_memo[key] = [p.vertices for p in paths[:geodesic_cap]]
        return geo_memo[key]

    for i in range(n):
        row_i = rows[i]
        for j in range(i + 1, n):
            if row_i[j] > side_cap:
                continue
            row_j = rows[j]
            for k in range(j + 1, n):
                if row_i[k] > side_cap or row_j[k] > side_cap:
                    continue
                for sxy in geos(i, j):
                    for sxz in geos(i, k):
                        for syz in geos(j, k):
                            yield GeodesicTriangle(window, elems[i], elems[j],
                                                   elems[k], sxy, sxz, syz)


def estimate_thinness(window: Window, side_cap: int,
                      geodesic_cap: int = 8) -> int:
    """Max over enumerated triangles and side choices of the relative
    distance between conjugate vertex pairs."""
    xi = 0
    dist = window.dist_rel
    for tri in _triangle_iter(window, side_cap, geodesic_cap):
        for corner in "xyz":
            legA, legB = tri.legs(corner)
            tmax = tri.gromov2(corner) // 2
            for t in range(1, min(tmax, len(legA) - 1, len(legB) - 1) + 1):
                if legA[t] != legB[t]:
                    d = dist(legA[t], legB[t])
                    if d > xi:
                        xi = d
    return xi


# ---------------------------------------------------------------------------
# isolated-component cycle ratios (the constant L)


@dataclass
class OmegaReport:
    l_hat: Fraction
    witnesses: List[Tuple[Fraction, Word]]
    moved_isolated: List[Tuple[Word, int]]  # isolated components with p- != p+
    cycles_checked: int
    caps: Dict[str, int]
    l_hat_half_cap: Fraction
    diverges: bool
    verdict: str
    note: str = ""

    def exceeds(self, l_candidate) -> bool:
        return self.l_hat > l_candidate


def _cycle_ratios(spec: GroupSpec, word: Word):
    """Per-lambda isolated-displacement ratios for one cycle word."""
    path = path_from_labels(spec, spec.identity(), word, merge=False)
    comps = components(path)
    per_lam: Dict[int, int] = {}
    moved = []
    for c in comps:
        if not is_isolated(c, comps):
            continue
        d = c.displacement_x()
        if d:
            per_lam[c.lam] = per_lam.get(c.lam, 0) + d
            moved.append(c.start)
    best = Fraction(0)
    for lam, total in per_lam.items():
        r = Fraction(total, len(word))
        if r > best:
            best = r
    return best, moved


def estimate_omega_L(window: Window, cycle_len_cap: int,
                     exp_cap: Optional[int] = None,
                     prefix_cap: Optional[int] = None) -> OmegaReport:
    """Largest observed isolated-component ratio over the reduced cycle
    space (see enumerate_cycle_words for why the reductions are
    exhaustive for both the maximum and the violation check)."""
    spec = window.spec
    if exp_cap is None:
        exp_cap = 2 * window.rho_x
    if prefix_cap is None:
        prefix_cap = 2 * window.rho_x

    def run(cap):
        words = enumerate_cycle_words(spec, cycle_len_cap, cap, prefix_cap)
        best = Fraction(0)
        wits = []
        viols = []
        for w in words:
            r, v = _cycle_ratios(spec, w)
            if r > 0:
                wits.append((r, w))
            if v:
                viols.extend((w, i) for i in v)
            if r > best:
                best = r
        wits.sort(key=lambda rw: (-rw[0], word_key(rw[1])))
        return best, wits, viols, len(words)

    half_best, _, _, _ = run(max(1, exp_cap // 2))
    best, wits, viols, checked = run(exp_cap)
    diverges = best > half_best and best > 0
    if not spec.peripherals:
        note = "no peripherals: cycles carry no components"
    elif checked == 0:
        note = ("reduced cycle space is empty: every cycle collapses under "
                "merge/delete reductions, so all isolated components have "
                "matching endpoints")
    else:
        note = ""
    verdict = ("not relatively hyperbolic at window scale" if diverges
               else "consistent with relative hyperbolicity at window scale")
    return OmegaReport(
        l_hat=best,
        witnesses=wits,
        moved_isolated=viols,
        cycles_checked=checked,
        caps={"cycle_len_cap": cycle_len_cap, "exp_cap": exp_cap,
              "prefix_cap": prefix_cap},
        l_hat_half_cap=half_best,
        diverges=diverges,
        verdict=verdict,
        note=note,
    )


def omega_check_raw(window: Window, base, len_cap: int,
                    cap: int = 2_000_000):
    """Oracle: walk every closed path at ``base`` inside the window and
    return (cycles seen, isolated components with moved endpoints)."""
    from .relcayley import enumerate_cycles_raw

    seen = 0
    bad = []
    for path in enumerate_cycles_raw(window, base, len_cap, cap=cap):
        seen += 1
        comps = components(path)
        for c in comps:
            if is_isolated(c, comps) and c.start_vertex != c.end_vertex:
                bad.append((path.letters, c.start))
    return seen, bad


# ---------------------------------------------------------------------------
# coset-penetration thresholds (the function eps(s))


def _geodesics_from_identity(window: Window, cap: int):
    one = window.spec.identity()
    for v in window.elements:
        yield from rel_geodesics(window, one, v, cap=cap)


def estimate_bcp_eps(window: Window, s: int, geodesic_cap: int = 64) -> int:
    """Smallest eps such that, over the enumerated geodesic pairs with
    X-endpoint gaps <= s, every component of the first geodesic whose
    X-displacement is >= eps has a connected component on the second.

    The first geodesic is based at the identity; this is exhaustive up
    to left translation, which preserves gaps, components and cosets.
    """
    spec = window.spec
    one = spec.identity()
    starts = window.ball_exact(one, s, "x")
    worst = -1
    for p1 in _geodesics_from_identity(window, geodesic_cap):
        comps1 = components(p1)
        if not comps1:
            continue
        ends = window.ball_exact(p1.end, s, "x")
        maxdisp = max(c.displacement_x() for c in comps1)
        if maxdisp <= worst:
            continue
        for u2 in starts:
            for v2 in ends:
                for p2 in rel_geodesics(window, u2, v2, cap=geodesic_cap):
                    comps2 = components(p2)
                    for c in comps1:
                        d = c.displacement_x()
                        if d <= worst:
                            continue
                        if not any(are_connected(c, c2) for c2 in comps2):
                            worst = max(worst, d)
    return worst + 1 if worst >= 0 else 0


# ---------------------------------------------------------------------------
# lemma witnesses


@dataclass
class LemmaReport:
    name: str
    instances: int
    violations: List[dict]
    vacuous: bool
    params: Dict[str, object]
    max_observed: object = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_document(self) -> dict:
        return {
            "schema": "lemma-report/v1",
            "name": self.name,
            "instances": self.instances,
            "violations": self.violations[:64],
            "violation_count": len(self.violations),
            "vacuous": self.vacuous,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
            "max_observed": self.max_observed,
            "pass": self.ok,
        }


def check_lemma_lc(window: Window, s: int, L: Fraction, eps: int,
                   geodesic_cap: int = 64) -> LemmaReport:
    """Connectedness of terminal components: for geodesic pairs with
    X-endpoint gaps <= s whose final edges are same-lambda components of
    X-displacement >= max(eps, 2L(s+1)), the two final components must be
    connected.  First geodesic based at the identity (translation
    exhaustive)."""
    spec = window.spec
    one = spec.identity()
    threshold = max(Fraction(eps), 2 * Fraction(L) * (s + 1))
    starts = window.ball_exact(one, s, "x")
    instances = 0
    violations = []
    for p1 in _geodesics_from_identity(window, geodesic_cap):
        if not p1.letters:
            continue
        comps1 = components(p1)
        if not comps1 or comps1[-1].end != len(p1.letters):
            continue
        e1 = comps1[-1]
        if e1.displacement_x() < threshold:
            continue
        ends = window.ball_exact(p1.end, s, "x")
        for u2 in starts:
            for v2 in ends:
                for p2 in rel_geodesics(window, u2, v2, cap=geodesic_cap):
                    if not p2.letters:
                        continue
                    comps2 = components(p2)
                    if not comps2 or comps2[-1].end != len(p2.letters):
                        continue
                    e2 = comps2[-1]
                    if e2.lam != e1.lam or e2.displacement_x() < threshold:
                        continue
                    instances += 1
                    if not are_connected(e1, e2):
                        violations.append({
                            "p1": format_word(p1.letters),
                            "p2": format_word(p2.letters),
                            "p2_start": format_word(spec.canonical_word(u2)),
                            "lam": e1.lam,
                        })
    return LemmaReport(
        name="terminal_components_connected",
        instances=instances,
        violations=violations,
        vacuous=instances == 0,
        params={"s": s, "L": str(L), "eps": eps, "threshold": str(threshold)},
    )


def check_lemma_xi(window: Window, L: Fraction, xi: int, side_cap: int,
                   geodesic_cap: int = 8) -> LemmaReport:
    """X-thinness of deep conjugate vertices: with sigma = 5*xi and
    rho = 6*L*xi^2, vertex pairs u,v at equal relative distance from a
    triangle corner satisfying
    d(u,y) + d(v,z) >= d(y,z) + sigma must have d_X(u,v) <= rho."""
    sigma = 5 * xi
    rho = 6 * Fraction(L) * xi * xi
    spec = window.spec
    instances = 0
    violations: List[dict] = []
    max_dx = 0
    for tri in _triangle_iter(window, side_cap, geodesic_cap):
        for corner in "xyz":
            legA, legB = tri.legs(corner)
            dA = len(legA) - 1
            dB = len(legB) - 1
            dOpp = (len(tri.side_yz) - 1 if corner == "x"
                    else len(tri.side_xz) - 1 if corner == "y"
                    else len(tri.side_xy) - 1)
            for t in range(0, min(dA, dB) + 1):
                if (dA - t) + (dB - t) < dOpp + sigma:
                    break  # decreasing in t: no deeper instance
                instances += 1
                if legA[t] == legB[t]:
                    continue  # d_X = 0, never a violation
                dx = spec.dist_x(legA[t], legB[t])
                if dx > max_dx:
                    max_dx = dx
                if dx > rho:
                    violations.append({
                        "corner": corner,
                        "u": format_word(spec.canonical_word(legA[t])),
                        "v": format_word(spec.canonical_word(legB[t])),
                        "d_x": dx,
                    })
    return LemmaReport(
        name="deep_conjugates_x_close",
        instances=instances,
        violations=violations,
        vacuous=instances == 0,
        params={"xi": xi, "L": str(L), "sigma": sigma, "rho": str(rho),
                "side_cap": side_cap},
        max_observed=max_dx,
    )


# ---------------------------------------------------------------------------
# the constants report


@dataclass
class ConstantsReport:
    xi_raw: int
    l_raw: Fraction
    xi: int
    l: Fraction
    eps: Dict[int, int]
    sigma: int
    rho: Fraction
    mu: int
    caps: Dict[str, object]
    omega: OmegaReport
    clamped: bool

    def t_s_bound(self, s: int) -> Fraction:
        """|g|_X threshold for the finite set T_s."""
        eps = self.eps.get(s)
        if eps is None:
            raise KeyError(f"eps({s}) was not estimated; available: {sorted(self.eps)}")
        return max(Fraction(eps), 2 * self.l * (s + 1))

    def to_document(self) -> dict:
        return {
            "schema": "constants/v1",
            "xi_raw": self.xi_raw,
            "l_raw": str(self.l_raw),
            "xi": self.xi,
            "l": str(self.l),
            "eps": {str(s): e for s, e in sorted(self.eps.items())},
            "sigma": self.sigma,
            "rho": str(self.rho),
            "mu": self.mu,
            "clamped": self.clamped,
            "caps": {k: str(v) for k, v in sorted(self.caps.items())},
            "omega": {
                "l_hat": str(self.omega.l_hat),
                "l_hat_half_cap": str(self.omega.l_hat_half_cap),
                "cycles_checked": self.omega.cycles_checked,
                "diverges": self.omega.diverges,
                "verdict": self.omega.verdict,
                "exceeds_l_candidates": [l for l in (1, 2, 3)
                                         if self.omega.l_hat > l],
                "note": self.omega.note,
                "witnesses": [
                    {"ratio": str(r), "cycle": format_word(w)}
                    for r, w in self.omega.witnesses[:64]
                ],
                "moved_isolated": len(self.omega.moved_isolated),
            },
        }


def clamp_constants(xi_raw: int, l_raw: Fraction) -> Tuple[int, Fraction, bool]:
    """Raise degenerate estimates so that 6*L*xi >= 1."""
    if 6 * Fraction(l_raw) * xi_raw >= 1:
        return xi_raw, Fraction(l_raw), False
    xi = max(xi_raw, 1)
    l = max(Fraction(l_raw), Fraction(1, 6 * xi))
    return xi, l, True


def constants_from_document(spec: GroupSpec, doc: dict) -> ConstantsReport:
    """Rebuild a report from its JSON document; the derived fields
    (sigma, rho, mu) are recomputed from the clamped estimates rather
    than trusted."""
    eps = {int(k): int(v) for k, v in doc.get("eps", {}).items()}
    return make_constants(spec, int(doc["xi_raw"]), Fraction(doc["l_raw"]), eps,
                          note="document")


def make_constants(spec: GroupSpec, xi_raw: int, l_raw, eps: Dict[int, int],
                   note: str = "supplied") -> ConstantsReport:
    """A constants report from supplied values (clamped the same way the
    estimator clamps); used to feed controls and CLI overrides."""
    l_raw = Fraction(l_raw)
    xi, l, clamped = clamp_constants(xi_raw, l_raw)
    sigma = 5 * xi
    rho = 6 * l * xi * xi
    omega = OmegaReport(l_hat=l_raw, witnesses=[], moved_isolated=[],
                        cycles_checked=0, caps={}, l_hat_half_cap=l_raw,
                        diverges=False, verdict="constants supplied", note=note)
    return ConstantsReport(
        xi_raw=xi_raw, l_raw=l_raw, xi=xi, l=l, eps=dict(eps),
        sigma=sigma, rho=rho, mu=spec.x_ball_size(rho),
        caps={"source": note}, omega=omega, clamped=clamped)


def compute_constants(window: Window, side_cap: int, cycle_len_cap: int,
                      s_values: Sequence[int], exp_cap: Optional[int] = None,
                      geodesic_cap: int = 8) -> ConstantsReport:
    xi_raw = estimate_thinness(window, side_cap, geodesic_cap)
    omega = estimate_omega_L(window, cycle_len_cap, exp_cap=exp_cap)
    l_raw = omega.l_hat
    eps = {s: estimate_bcp_eps(window, s) for s in s_values}
    xi, l, clamped = clamp_constants(xi_raw, l_raw)
    sigma = 5 * xi
    rho = 6 * l * xi * xi
    mu = window.spec.x_ball_size(rho)
    return ConstantsReport(
        xi_raw=xi_raw,
        l_raw=l_raw,
        xi=xi,
        l=l,
        eps=eps,
        sigma=sigma,
        rho=rho,
        mu=mu,
        caps={
            "window_n": window.n,
            "window_rho_x": window.rho_x,
            "side_cap": side_cap,
            "geodesic_cap": geodesic_cap,
            **omega.caps,
        },
        omega=omega,
        clamped=clamped,
    )
