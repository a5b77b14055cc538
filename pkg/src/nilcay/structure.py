"""Torsion subgroups, torsion quotients, isolator oracles, conjugator search.

Isolators are reported as certified lower approximations inside a ball with
an explicit power bound; built-in families carry exact analytic membership
tables instead.  Centrality is always decided exactly via collection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from . import pcgroup
from .reporting import Report


class SubgroupError(ValueError):
    pass


@dataclass
class SubgroupWitness:
    """A subgroup given by generators plus either a full element list or a
    membership predicate (for infinite subgroups of built-ins)."""

    presentation: object
    generators: tuple
    elements: tuple | None = None
    member: Optional[Callable] = None
    label: str = ""

    def contains(self, x) -> bool:
        if self.elements is not None:
            return x in self._element_set()
        if self.member is not None:
            return bool(self.member(x))
        raise SubgroupError("subgroup membership is not decidable for this witness")

    def _element_set(self):
        if not hasattr(self, "_eset"):
            self._eset = frozenset(self.elements)
        return self._eset

    def check_closed(self):
        if self.elements is None:
            raise SubgroupError("closure check needs a full element list")
        p = self.presentation
        eset = self._element_set()
        for x in self.elements:
            if p.inverse(x) not in eset:
                raise SubgroupError(f"element list is not closed under inverse at {x}")
            for y in self.elements:
                if p.multiply(x, y) not in eset:
                    raise SubgroupError(
                        f"element list is not closed under multiplication at {x}*{y}")
        return self


def trivial_subgroup(presentation) -> SubgroupWitness:
    return SubgroupWitness(presentation, generators=(),
                           elements=(presentation.identity,), label="trivial")


def torsion_subgroup(presentation) -> SubgroupWitness:
    """Full element list of the declared torsion block, with exactness checks.

    Every element supported on the torsion generators is verified to have
    finite order, and the set is verified conjugation-stable under all
    generators (exact, since the generators generate).
    """
    p = presentation
    t = p.torsion_len
    free = p.n - t
    if t == 0:
        return trivial_subgroup(p)
    ranges = [range(p.orders[i]) for i in range(free, p.n)]
    elements = []
    bound = 1
    for i in range(free, p.n):
        bound *= p.orders[i]
    for combo in itertools.product(*ranges):
        x = p.collect_word(tuple((free + i, e) for i, e in enumerate(combo) if e))
        if any(x[i] for i in range(free)):
            raise SubgroupError(
                "torsion block is not multiplicatively closed in the declared basis")
        elements.append(x)
    eset = set(elements)
    for x in elements:
        if p.order_of(x, bound) is None:
            raise SubgroupError(f"declared torsion element {x} has order > {bound}")
        for i in range(p.n):
            g = p.generator(i)
            if p.conjugate(x, g) not in eset or p.conjugate(x, p.inverse(g)) not in eset:
                raise SubgroupError(
                    "declared torsion block is not conjugation-stable; presentation rejected")
    gens = tuple(p.generator(i) for i in range(free, p.n))
    return SubgroupWitness(p, generators=gens, elements=tuple(sorted(eset)),
                           label="torsion").check_closed()


def project_to_quotient(presentation, x) -> tuple:
    """Image of an element in the quotient by the torsion block (drop torsion coords)."""
    free = presentation.n - presentation.torsion_len
    return tuple(x[:free])


def quotient_by_torsion(presentation) -> pcgroup.PcPresentation:
    """Presentation on the free generators with relations reduced mod torsion."""
    p = presentation
    t = p.torsion_len
    if t == 0:
        return p
    free = p.n - t
    names = p.gens[:free]
    lines = [f"group {p.name}/torsion", f"nilpotent {'true' if p.nilpotent else 'false'}",
             "torsion_prefix 0"]
    lines += [f"gen {s} order inf" for s in names]

    def proj_word(w):
        return tuple((i, e) for i, e in w if i < free)

    for (l, j), w in p.conj.items():
        if l < free and j < free:
            lines.append(f"conj {names[l]} by {names[j]} = "
                         f"{pcgroup._word_text(proj_word(w), names)}")
    for (l, j), w in p.conjinv.items():
        if l < free and j < free:
            lines.append(f"conjinv {names[l]} by {names[j]} = "
                         f"{pcgroup._word_text(proj_word(w), names)}")
    for b in p.blocks:
        kept = [i for i in b if i < free]
        if kept:
            lines.append("block " + " ".join(names[i] for i in kept))
    seen = []
    for v in p.genset:
        pv = project_to_quotient(p, v)
        if any(pv) and pv not in seen:
            seen.append(pv)
    if seen:
        lines.append("genset " + " ".join(
            pcgroup._vector_text(v, names) for v in seen))
    analytic = None
    if p.analytic is not None:
        an = p.analytic
        analytic = pcgroup.AnalyticTables(
            ab_rank=an.ab_rank,
            ab_image=lambda x: an.ab_image(tuple(x) + (0,) * t),
            in_sqrt_commutator=lambda x: an.in_sqrt_commutator(tuple(x) + (0,) * t))
    src = "\n".join(lines) + "\n"
    try:
        return pcgroup.parse_presentation(
            src, family_id=f"quotient({p.family_id})",
            polycyclic_certified=p.polycyclic_certified, analytic=analytic)
    except pcgroup.PresentationError as exc:
        raise SubgroupError(f"torsion quotient is not presentable: {exc}") from exc


@dataclass
class IsolatorResult:
    elements: tuple
    certificates: dict    # element -> smallest k with element^k in H
    kmax: int

    def report(self, claim="isolator lower approximation inside the ball"):
        return Report(claim=claim, verdict="computed", ok=None,
                      witnesses=[{"element": x, "k": self.certificates[x]}
                                 for x in self.elements],
                      parameters={"kmax": self.kmax, "count": len(self.elements)},
                      notes=["certified subset only; truncated at the declared kmax"])


def isolator_oracle(ball, subgroup: SubgroupWitness, kmax) -> IsolatorResult:
    """Ball elements with some power 1 <= k <= kmax inside the subgroup."""
    p = ball.presentation
    found = []
    certs = {}
    for x in ball.vertices:
        acc = x
        for k in range(1, kmax + 1):
            if subgroup.contains(acc):
                found.append(x)
                certs[x] = k
                break
            acc = p.multiply(acc, x)
    return IsolatorResult(elements=tuple(found), certificates=certs, kmax=kmax)


def commutator_subgroup_witness(presentation, ball=None) -> SubgroupWitness:
    """Witness for the derived subgroup: analytic for built-ins, a ball-closure
    lower approximation otherwise."""
    p = presentation
    if p.analytic is not None:
        return SubgroupWitness(p, generators=(), elements=None,
                               member=p.analytic.in_sqrt_commutator,
                               label="sqrt-commutator (analytic)")
    if ball is None:
        raise SubgroupError("no analytic table; a ball is required for the oracle")
    inside = set()
    frontier = [p.identity]
    basic = [p.commutator(u, v) for u in ball.vertices for v in ball.genset.elements]
    basic = [x for x in set(basic) if x in ball.index]
    inside.update(basic)
    inside.add(p.identity)
    changed = True
    while changed:
        changed = False
        for x in list(inside):
            for y in basic:
                z = p.multiply(x, y)
                if z in ball.index and z not in inside:
                    inside.add(z)
                    changed = True
    return SubgroupWitness(p, generators=tuple(basic), elements=tuple(sorted(inside)),
                           label="commutator closure in ball")


def z_dagger(presentation, ball, kmax=8) -> tuple:
    """Ball elements that are central and lie in the isolator of the derived subgroup."""
    p = presentation
    central = [x for x in ball.vertices if p.is_central(x)]
    witness = commutator_subgroup_witness(p, ball)
    if witness.member is not None:
        return tuple(x for x in central if witness.member(x))
    iso = isolator_oracle(ball, witness, kmax)
    eset = set(iso.elements)
    return tuple(x for x in central if x in eset)


@dataclass
class ConjugatorResult:
    witness: tuple | None
    distance_profile: list
    report: Report


def find_conjugator(ball, a, b, kmax=8) -> ConjugatorResult:
    """Exhaustive in-ball search for g with g^{-1} a g = b.

    Scans vertices by (distance, lexicographic) order and returns the first
    witness; also reports that dist(a^k, g b^k) is constant over k <= kmax,
    which is the bounded-distance hypothesis of the conjugacy criterion.
    """
    p = ball.presentation
    if a not in ball.index or b not in ball.index:
        raise ValueError("both elements must lie in the ball")
    order_ids = sorted(range(len(ball.vertices)),
                       key=lambda i: (ball.dist_list[i], ball.vertices[i]))
    witness = None
    for i in order_ids:
        g = ball.vertices[i]
        if p.conjugate(a, g) == b:
            witness = g
            break
    profile = []
    if witness is not None:
        for k in range(1, kmax + 1):
            x = p.multiply(p.inverse(p.power(a, k)),
                           p.multiply(witness, p.power(b, k)))
            assert x == witness, "conjugator equation failed at a power"
            profile.append({"k": k, "dist": ball.distance_from_identity(witness)})
        rep = Report(claim="conjugating element found in the ball",
                     verdict="found", ok=True,
                     witnesses=[{"conjugator": witness}],
                     parameters={"a": a, "b": b, "kmax": kmax},
                     notes=["dist(a^k, g b^k) is constant in k for the witness"])
    else:
        rep = Report(claim="conjugating element found in the ball",
                     verdict="none-within-ball", ok=None,
                     parameters={"a": a, "b": b, "radius": ball.radius},
                     notes=["exhaustive scan of the ball found no conjugator"])
    return ConjugatorResult(witness=witness, distance_profile=profile, report=rep)


def rank_report(presentation, subgroup: SubgroupWitness) -> Report:
    """Hirsch rank additivity rank(G) = rank(N) + rank(G/N) for supported N."""
    p = presentation
    total = p.hirsch_rank()
    if subgroup.elements is not None and set(subgroup.elements) == {p.identity}:
        rank_n, rank_q, shape = 0, total, "trivial"
    elif subgroup.label == "torsion" or (
            subgroup.elements is not None
            and all(not any(x[:p.n - p.torsion_len]) for x in subgroup.elements)):
        rank_n = 0
        rank_q = quotient_by_torsion(p).hirsch_rank()
        shape = "torsion"
    else:
        raise SubgroupError("rank report supports the trivial and torsion subgroups")
    ok = total == rank_n + rank_q
    return Report(claim="Hirsch rank is additive over the subgroup and quotient",
                  verdict="pass" if ok else "fail", ok=ok,
                  parameters={"rank_G": total, "rank_N": rank_n,
                              "rank_quotient": rank_q, "subgroup": shape},
                  notes=["finite-index statements about isolators are out of "
                         "desk reach and are not asserted"])
