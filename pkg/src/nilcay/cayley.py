"""Finite balls of Cayley graphs: word metrics, labelled edges, geodesics.

A ball ``B(r)`` of ``Cay(G;S)`` holds every element at distance at most ``r``
from the identity, with exact BFS distances.  Vertex order is lexicographic
on exponent vectors, so all derived artifacts are deterministic.  Distance
queries answer ``None`` ("unknown") rather than ever returning a wrong
number: ``dist(u,v)`` is certified exactly when ``u^{-1}v`` lies in the ball.

Geodesic enumeration and counting run on the translated problem from the
identity to ``u^{-1}v`` (label sequences are invariant under left
translation), which keeps every intermediate vertex inside the ball.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .reporting import Report

DEFAULT_VERTEX_BUDGET = 5 * 10**6
DEFAULT_GEODESIC_CAP = 10**6
BUDGET_ENV_VAR = "NILCAY_BUDGET_VERTICES"


class BallBudgetError(RuntimeError):
    """Vertex budget exceeded while generating a ball."""


class GeodesicCapError(RuntimeError):
    """Geodesic enumeration cap exceeded; carries the partial count."""

    def __init__(self, message, partial_count):
        super().__init__(message)
        self.partial_count = partial_count


class MapError(ValueError):
    """Vertex map violates a structural precondition (totality, bijectivity, radius)."""


class GenSet:
    """A deduplicated, identity-free generating set over one presentation."""

    def __init__(self, presentation, elements):
        self.presentation = presentation
        canon = sorted(set(tuple(v) for v in elements))
        if presentation.identity in canon:
            raise ValueError("generating set must not contain the identity")
        self.elements = tuple(canon)
        inv = {presentation.inverse(s) for s in self.elements}
        self.symmetric = inv == set(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def require_symmetric(self):
        if not self.symmetric:
            raise ValueError("generating set is not symmetric (closed under inverses)")
        return self

    def __repr__(self):
        return f"GenSet({list(self.elements)})"


def standard_genset(presentation) -> GenSet:
    if not presentation.genset:
        raise ValueError(f"presentation {presentation.name!r} has no attached generating set")
    return GenSet(presentation, presentation.genset)


def vertex_budget(explicit=None):
    if explicit is not None:
        return explicit
    env = os.environ.get(BUDGET_ENV_VAR)
    return int(env) if env else DEFAULT_VERTEX_BUDGET


@dataclass(frozen=True)
class GeodesicPath:
    """A path given by its start vertex and ordered edge labels."""

    start: tuple
    labels: tuple

    def end(self, presentation):
        x = self.start
        for s in self.labels:
            x = presentation.multiply(x, s)
        return x

    def __len__(self):
        return len(self.labels)


class Ball:
    """The radius-r metric ball with oriented labelled edges."""

    def __init__(self, presentation, genset, radius, vertices, dist_list, adjacency):
        self.presentation = presentation
        self.genset = genset
        self.radius = radius
        self.vertices = vertices          # tuple of elements, lexicographic
        self.dist_list = dist_list        # vid -> distance
        self.index = {v: i for i, v in enumerate(vertices)}
        self.adjacency = adjacency        # vid -> tuple of (sid, vid)
        self._nbr_sets = None
        self._interior_ids = None

    def __contains__(self, v):
        return v in self.index

    def __len__(self):
        return len(self.vertices)

    def distance_from_identity(self, v):
        i = self.index.get(v)
        return None if i is None else self.dist_list[i]

    def distance(self, u, v):
        """Exact dist_S(u, v), or None when not certifiable inside the ball."""
        if u not in self.index:
            raise ValueError("start vertex is not in the ball")
        p = self.presentation
        w = p.multiply(p.inverse(u), v)
        return self.distance_from_identity(w)

    def neighbor_ids(self, vid):
        return [w for _, w in self.adjacency[vid]]

    def neighbor_set(self, v):
        if self._nbr_sets is None:
            self._nbr_sets = [frozenset(self.vertices[w] for _, w in adj)
                              for adj in self.adjacency]
        return self._nbr_sets[self.index[v]]

    def vertex_set(self):
        return self.index.keys()

    def interior_ids(self):
        if self._interior_ids is None:
            cut = self.radius - 1
            self._interior_ids = tuple(i for i, d in enumerate(self.dist_list) if d <= cut)
        return self._interior_ids

    def interior_vertices(self):
        return [self.vertices[i] for i in self.interior_ids()]

    def edges(self):
        """Oriented labelled edges (u, s, u*s) in canonical order."""
        gens = self.genset.elements
        for uid, adj in enumerate(self.adjacency):
            for sid, vid in adj:
                yield (self.vertices[uid], gens[sid], self.vertices[vid])


def generate_ball(presentation, genset, radius, max_vertices=None) -> Ball:
    """BFS ball of Cay(G;S); raises BallBudgetError past the vertex budget."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    genset.require_symmetric()
    budget = vertex_budget(max_vertices)
    p = presentation
    e = p.identity
    dist = {e: 0}
    frontier = [e]
    for d in range(1, radius + 1):
        nxt = []
        for u in frontier:
            for s in genset.elements:
                w = p.multiply(u, s)
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
                    if len(dist) > budget:
                        raise BallBudgetError(
                            f"ball exceeded vertex budget {budget} at radius {d}")
        frontier = nxt
        if not frontier:
            break
    vertices = tuple(sorted(dist))
    index = {v: i for i, v in enumerate(vertices)}
    dist_list = [dist[v] for v in vertices]
    adjacency = []
    for v in vertices:
        row = []
        for sid, s in enumerate(genset.elements):
            w = p.multiply(v, s)
            wid = index.get(w)
            if wid is not None:
                row.append((sid, wid))
        adjacency.append(tuple(row))
    return Ball(presentation, genset, radius, vertices, dist_list, tuple(adjacency))


# -- geodesics -----------------------------------------------------------


def _certified_remainder(ball, u, v):
    p = ball.presentation
    w = p.multiply(p.inverse(u), v)
    d = ball.distance_from_identity(w)
    if d is None:
        raise ValueError("distance between the endpoints is not certifiable in this ball")
    return w, d


def enumerate_geodesics(ball, u, v, cap=DEFAULT_GEODESIC_CAP):
    """All geodesic segments from u to v, as label sequences in canonical order."""
    w, d = _certified_remainder(ball, u, v)
    p = ball.presentation
    gens = ball.genset.elements
    inv_gens = [p.inverse(s) for s in gens]
    dist = ball.distance_from_identity
    paths = []
    labels = []

    def walk(rem, left):
        if left == 0:
            paths.append(GeodesicPath(u, tuple(labels)))
            if len(paths) > cap:
                raise GeodesicCapError(
                    f"geodesic cap {cap} exceeded", partial_count=cap)
            return
        for sid, s in enumerate(gens):
            nxt = p.multiply(inv_gens[sid], rem)
            if dist(nxt) == left - 1:
                labels.append(s)
                walk(nxt, left - 1)
                labels.pop()

    walk(w, d)
    return paths


def count_geodesics(ball, u, v):
    """Number of geodesic segments from u to v, by dynamic programming."""
    w, d = _certified_remainder(ball, u, v)
    p = ball.presentation
    gens = ball.genset.elements
    inv_gens = [p.inverse(s) for s in gens]
    dist = ball.distance_from_identity
    memo = {p.identity: 1}

    def cnt(rem):
        got = memo.get(rem)
        if got is not None:
            return got
        left = dist(rem)
        total = 0
        for sid in range(len(gens)):
            nxt = p.multiply(inv_gens[sid], rem)
            if dist(nxt) == left - 1:
                total += cnt(nxt)
        memo[rem] = total
        return total

    return cnt(w)


# -- torsion-label checks (geodesics through a finite normal subgroup) ----


def _check_normal_under_generators(presentation, elements):
    p = presentation
    members = set(elements)
    for n in elements:
        for i in range(p.n):
            g = p.generator(i)
            if p.conjugate(n, g) not in members or p.conjugate(n, p.inverse(g)) not in members:
                return False
    return True


def torsion_label_bound(ball, subgroup_elements, cap=DEFAULT_GEODESIC_CAP) -> Report:
    """Verify that no in-ball geodesic carries two edges labelled in the subgroup."""
    p = ball.presentation
    members = set(subgroup_elements)
    if p.identity not in members:
        members.add(p.identity)
    if not _check_normal_under_generators(p, members):
        raise ValueError("subgroup is not conjugation-stable under the generators")
    labels_in = members - {p.identity}
    params = {"radius": ball.radius, "subgroup_order": len(members)}
    witness = None
    for w in ball.vertices:
        for path in enumerate_geodesics(ball, p.identity, w, cap=cap):
            hits = sum(1 for s in path.labels if s in labels_in)
            if hits > 1:
                witness = {"endpoint": w, "labels": list(path.labels)}
                break
        if witness:
            break
    if witness:
        return Report(
            claim="every geodesic in the ball has at most one subgroup-labelled edge",
            verdict="fail", ok=False, witnesses=[witness], parameters=params)
    return Report(
        claim="every geodesic in the ball has at most one subgroup-labelled edge",
        verdict="pass", ok=True, parameters=params,
        notes=["checked on geodesic segments from the identity inside the ball; "
               "statements about bi-infinite homogeneous lines are out of desk reach"])


def insert_torsion_edge(ball, geo: GeodesicPath, subgroup_elements):
    """Slide the leading subgroup-labelled edge through the path.

    For geo = (n, s_1..s_k) with n in the finite normal subgroup, returns the
    k+1 pairwise-distinct equal-length paths obtained by inserting the
    conjugated subgroup element at each position.
    """
    p = ball.presentation
    members = set(subgroup_elements)
    if not geo.labels:
        raise ValueError("path is empty")
    n0 = geo.labels[0]
    if n0 not in members:
        raise ValueError("first label of the path is not in the subgroup")
    rest = geo.labels[1:]
    k = len(rest)
    paths = []
    prefix = p.identity
    for i in range(k + 1):
        ni = p.conjugate(n0, prefix)
        if ni not in members:
            raise ValueError(
                "conjugated element left the subgroup; the subgroup is not normal")
        paths.append(GeodesicPath(geo.start, rest[:i] + (ni,) + rest[i:]))
        if i < k:
            prefix = p.multiply(prefix, rest[i])
    seen = {path.labels for path in paths}
    if len(seen) != k + 1:
        raise ValueError("inserted paths are not pairwise distinct "
                         "(a non-subgroup label coincides with a subgroup element)")
    end = geo.end(p)
    for path in paths:
        assert path.end(p) == end and len(path) == k + 1
    return paths


# -- exports ---------------------------------------------------------------


def _fmt(element):
    return ",".join(str(e) for e in element)


def export_graph(ball, path):
    """TSV edge list `src<TAB>label<TAB>dst` with a commented header."""
    lines = [
        f"# presentation: {ball.presentation.name}",
        f"# genset: {' '.join(_fmt(s) for s in ball.genset.elements)}",
        f"# radius: {ball.radius}",
    ]
    for u, s, w in ball.edges():
        lines.append(f"{_fmt(u)}\t{_fmt(s)}\t{_fmt(w)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def export_distances(ball, path):
    """TSV `vertex<TAB>dist` in canonical vertex order."""
    lines = [
        f"# presentation: {ball.presentation.name}",
        f"# radius: {ball.radius}",
    ]
    for i, v in enumerate(ball.vertices):
        lines.append(f"{_fmt(v)}\t{ball.dist_list[i]}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def export_vertex_map(mapping, path):
    lines = [f"{_fmt(u)}\t{_fmt(v)}" for u, v in sorted(mapping.items())]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_vertex_map(path):
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            src, dst = line.split("\t")
            mapping[tuple(int(x) for x in src.split(","))] = \
                tuple(int(x) for x in dst.split(","))
    return mapping


# -- vertex-map adjacency check -------------------------------------------


@dataclass
class MapVerdict:
    ok: bool
    reason: str = ""
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def check_vertex_map(ball_a, target, mapping) -> MapVerdict:
    """Adjacency preservation in both directions on interior vertices.

    ``target`` is a Ball or anything exposing ``vertex_set``/``neighbor_set``
    (e.g. a constructed labelled graph).  Interior is taken on the source
    ball: vertices at distance <= r-1, whose neighborhoods are complete.
    """
    if isinstance(target, Ball) and target.radius != ball_a.radius:
        raise MapError("radius mismatch between source and target balls")
    interior = ball_a.interior_vertices()
    dom = set(interior)
    images = {}
    for u in interior:
        if u not in mapping:
            raise MapError(f"map is not total on interior vertices (missing {u})")
        images[u] = mapping[u]
    if len(set(images.values())) != len(images):
        raise MapError("map is not injective on interior vertices")
    tverts = target.vertex_set()
    for u in interior:
        mu = images[u]
        if mu not in tverts:
            return MapVerdict(False, "image is not a vertex of the target", (u, mu))
    back = {mu: u for u, mu in images.items()}
    for u in interior:
        mu = images[u]
        tn = target.neighbor_set(mu)
        for w in ball_a.neighbor_set(u):
            if w in dom and images[w] not in tn:
                return MapVerdict(False, "edge not preserved", (u, w))
        for mw in tn:
            w = back.get(mw)
            if w is not None and w not in ball_a.neighbor_set(u):
                return MapVerdict(False, "non-edge mapped onto an edge", (u, w))
    return MapVerdict(True)
