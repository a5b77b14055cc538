"""Bi-orders from declared filtrations, convex geodesic lines, distortion.

The comparator reads the difference ``x^{-1} y`` in normal form and scans the
declared filtration blocks in order; the verdict is the sign of the first
nonzero exponent.  This is a bi-invariant total order when the blocks are
adapted to the central series, which holds for the built-in families and is
falsifiable by the sampled bi-invariance property checks.

Distortion certification never reports an uncertified distance: each value
``dist(e, g^k)`` is either read off a ball that contains ``g^k`` or pinned by
matching analytic lower and trivial upper bounds; anything else stays
unknown and the classification degrades to "inconclusive".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import cayley
from .cayley import GenSet, count_geodesics, enumerate_geodesics, generate_ball
from .reporting import Report

LESS, EQUAL, GREATER = -1, 0, 1

DEFAULT_CLASSIFY_KMAX = 64
DEFAULT_CLASSIFY_TOL = Fraction(1, 2)


class BiOrderUnavailable(ValueError):
    """The presentation does not support the filtration bi-order."""


class NotAGeneratorError(ValueError):
    pass


class NotConvexError(ValueError):
    pass


class NotCentralError(ValueError):
    pass


class BiOrder:
    """Block-lexicographic bi-order on a torsion-free nilpotent presentation."""

    def __init__(self, presentation):
        p = presentation
        if p.torsion_len:
            raise BiOrderUnavailable(
                f"{p.name}: bi-order refused, the group has declared torsion")
        if not p.nilpotent:
            raise BiOrderUnavailable(
                f"{p.name}: bi-order refused, presentation is not nilpotent-flagged")
        if not p.blocks:
            raise BiOrderUnavailable(
                f"{p.name}: bi-order refused, no filtration blocks declared")
        covered = sorted(i for b in p.blocks for i in b)
        if covered != list(range(p.n)):
            raise BiOrderUnavailable(
                f"{p.name}: filtration does not cover all generators")
        self.presentation = p

    def compare(self, x, y) -> int:
        """LESS (-1), EQUAL (0) or GREATER (1), comparing x against y."""
        p = self.presentation
        d = p.multiply(p.inverse(x), y)
        for block in p.blocks:
            for i in block:
                if d[i] > 0:
                    return LESS
                if d[i] < 0:
                    return GREATER
        return EQUAL

    def less(self, x, y) -> bool:
        return self.compare(x, y) == LESS

    def max_element(self, elements):
        best = None
        for v in elements:
            if best is None or self.compare(best, v) == LESS:
                best = v
        if best is None:
            raise ValueError("empty element collection")
        return best


def max_generator(order: BiOrder, genset: GenSet):
    """The order-maximum of a symmetric generating set; exceeds the identity."""
    genset.require_symmetric()
    s = order.max_element(genset.elements)
    assert order.compare(order.presentation.identity, s) == LESS
    return s


def convexity_check(ball, s, kmax) -> Report:
    """dist(e, s^k) = k and a unique geodesic for 1 <= k <= kmax."""
    p = ball.presentation
    if s not in set(ball.genset.elements):
        raise NotAGeneratorError(f"{s} is not in the generating set")
    if kmax > ball.radius:
        raise ValueError("kmax exceeds the ball radius")
    params = {"generator": s, "kmax": kmax, "radius": ball.radius}
    witnesses = []
    for k in range(1, kmax + 1):
        sk = p.power(s, k)
        d = ball.distance_from_identity(sk)
        if d != k:
            witnesses.append({"k": k, "dist": d})
            break
        count = count_geodesics(ball, p.identity, sk)
        if count != 1:
            other = [g.labels for g in enumerate_geodesics(ball, p.identity, sk, cap=4)]
            witnesses.append({"k": k, "count": count, "paths": other[:2]})
            break
    if witnesses:
        return Report(claim="powers of the generator form a convex geodesic segment",
                      verdict="fail", ok=False, witnesses=witnesses, parameters=params)
    return Report(claim="powers of the generator form a convex geodesic segment",
                  verdict="pass", ok=True, parameters=params,
                  notes=[f"convexity verified for the segment up to k={kmax}; "
                         "the bi-infinite line is out of checkable reach"])


def central_label_propagation(ball, geo: cayley.GeodesicPath, s) -> Report:
    """On a convex segment containing an s-labelled edge, every edge is labelled s."""
    p = ball.presentation
    if not p.is_central(s):
        raise NotCentralError(f"label {s} is not central")
    if not geo.labels:
        raise ValueError("empty segment")
    end = geo.end(p)
    d = ball.distance(geo.start, end)
    if d != len(geo.labels) or count_geodesics(ball, geo.start, end) != 1:
        raise NotConvexError("segment is not a convex geodesic inside the ball")
    if s not in geo.labels:
        raise ValueError("no edge of the segment is labelled by the given element")
    params = {"label": s, "length": len(geo.labels)}
    for i, lab in enumerate(geo.labels):
        if lab != s:
            return Report(claim="all edges of the convex segment share the central label",
                          verdict="fail", ok=False,
                          witnesses=[{"position": i, "label": lab}], parameters=params)
    return Report(claim="all edges of the convex segment share the central label",
                  verdict="pass", ok=True, parameters=params)


# -- distortion ------------------------------------------------------------


class _AbelianizedMetric:
    """Word metric of the abelianized generating set, grown on demand."""

    def __init__(self, presentation, genset):
        an = presentation.analytic
        self.available = an is not None and an.ab_rank > 0
        if not self.available:
            return
        from . import pcgroup
        self.image = an.ab_image
        self._zn = pcgroup.builtin("zn", n=an.ab_rank)
        imgs = {an.ab_image(s) for s in genset.elements}
        imgs.discard(self._zn.identity)
        self._gens = GenSet(self._zn, imgs) if imgs else None
        self._ball = None
        self._radius = 0

    def dist(self, target, upper_hint):
        if not self.available or self._gens is None:
            return None
        while True:
            if self._ball is not None:
                d = self._ball.distance_from_identity(target)
                if d is not None:
                    return d
                if self._radius >= upper_hint:
                    return None
            grow = max(4, self._radius * 2, 1)
            self._radius = min(max(grow, self._radius + 1), upper_hint)
            self._ball = generate_ball(self._zn, self._gens, self._radius)


@dataclass
class DistortionProfile:
    element: tuple
    ks: list
    dists: list        # int or None per k
    ratios: list       # Fraction or None per k
    notes: list

    def rows(self):
        return [(k, d, None if r is None else float(r))
                for k, d, r in zip(self.ks, self.dists, self.ratios)]


def _profile_ks(kmax):
    ks = []
    k = 1
    while k <= kmax:
        ks.append(k)
        k *= 2
    if ks[-1] != kmax:
        ks.append(kmax)
    return ks


def distortion_profile(presentation, genset, g, kmax,
                       max_vertices=None) -> DistortionProfile:
    """Certified ratios dist(e, g^k)/k at k = 1, 2, 4, ..., kmax."""
    p = presentation
    if g == p.identity:
        raise ValueError("distortion profile of the identity is undefined")
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    budget = cayley.vertex_budget(max_vertices)
    ks = _profile_ks(kmax)
    ab = _AbelianizedMetric(p, genset)
    notes = []
    ball = None
    radius = 0
    budget_hit = False

    def dist_of(x, upper):
        nonlocal ball, radius, budget_hit
        if ball is not None:
            d = ball.distance_from_identity(x)
            if d is not None:
                return d
        lower = ab.dist(ab.image(x), upper) if ab.available else None
        if lower is not None and lower == upper:
            return upper
        while not budget_hit and radius < upper:
            want = min(upper, max(4, radius * 2))
            try:
                ball = generate_ball(p, genset, want, max_vertices=budget)
            except cayley.BallBudgetError:
                budget_hit = True
                break
            radius = want
            d = ball.distance_from_identity(x)
            if d is not None:
                return d
        if ball is not None:
            d = ball.distance_from_identity(x)
            if d is not None:
                return d
        return None

    d1 = dist_of(g, upper=max(1, sum(abs(e) for e in g) * 4))
    if d1 is None:
        notes.append("dist(e, g) itself could not be certified within budget")
    dists = []
    for k in ks:
        gk = p.power(g, k)
        upper = d1 * k if d1 is not None else None
        d = dist_of(gk, upper) if upper is not None else None
        dists.append(d)
    if budget_hit:
        notes.append("vertex budget exhausted before certifying every power")
    ratios = [None if d is None else Fraction(d, k) for k, d in zip(ks, dists)]
    return DistortionProfile(element=g, ks=ks, dists=dists, ratios=ratios, notes=notes)


def classify_distorted(presentation, genset, g, kmax=DEFAULT_CLASSIFY_KMAX,
                       tol=DEFAULT_CLASSIFY_TOL, max_vertices=None):
    """Three-valued distortion verdict with an analytic cross-check for built-ins.

    Returns (verdict, profile, report); verdict is one of "distorted",
    "undistorted", "inconclusive".
    """
    p = presentation
    profile = distortion_profile(p, genset, g, kmax, max_vertices=max_vertices)
    ratios = profile.ratios
    verdict = "inconclusive"
    if all(r is not None for r in ratios) and ratios:
        first, last = ratios[0], ratios[-1]
        monotone = all(a >= b for a, b in zip(ratios, ratios[1:]))
        if monotone and last < tol * first:
            verdict = "distorted"
        elif all(r == first for r in ratios) and first >= 1:
            verdict = "undistorted"
    analytic = None
    if p.analytic is not None:
        analytic = "distorted" if p.analytic.in_sqrt_commutator(g) else "undistorted"
        if verdict != "inconclusive" and verdict != analytic:
            raise RuntimeError(
                f"distortion verdict {verdict!r} disagrees with the analytic "
                f"membership table ({analytic!r}) for {g}")
    report = Report(
        claim="power distortion classification of the element",
        verdict=verdict,
        ok=None if verdict == "inconclusive" else True,
        parameters={"element": g, "kmax": kmax, "tol": str(tol),
                    "ks": profile.ks, "dists": profile.dists,
                    "ratios": [None if r is None else str(r) for r in profile.ratios]},
        notes=profile.notes + ([f"analytic verdict: {analytic}"] if analytic else []))
    return verdict, profile, report
