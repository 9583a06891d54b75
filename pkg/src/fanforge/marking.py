"""Markings: ordered vertex subsets and the induced order on cone vectors.

A marking singles out some rays of a complex and ranks them; inside each
face the marked coefficients of a vector, read from the highest-ranked
vertex down, give a lexicographic key.  In a regularly marked face that key
has a unique minimum over the small vectors, which is what makes the
center choice of the resolution canonical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactlin as xl
from .complexes import ConicalComplex
from .exactlin import Vec


class NotInCone(ValueError):
    pass


class NoSmallVectors(ValueError):
    pass


class UniquenessViolated(AssertionError):
    pass


class InvariantViolated(AssertionError):
    pass


class Order(enum.Enum):
    LT = "LT"
    GT = "GT"
    INCOMPARABLE = "INCOMPARABLE"
    EQ_PROJ = "EQ_PROJ"


@dataclass
class Marking:
    """Ranked marked rays; ranks are a linear extension of the batch order.

    Vertices created by one multi-center subdivision share a rank (they
    never share a face); later batches always rank higher.
    """
    ranks: dict[int, int] = field(default_factory=dict)

    def next_rank(self) -> int:
        return max(self.ranks.values(), default=-1) + 1

    def add_batch(self, ray_ids) -> None:
        r = self.next_rank()
        for rid in ray_ids:
            assert rid not in self.ranks
            self.ranks[rid] = r

    def marked(self, ray_id) -> bool:
        return ray_id in self.ranks


@dataclass
class MarkedComplex:
    complex: ConicalComplex
    marking: Marking

    @property
    def regularly_marked(self) -> bool:
        for cid in self.complex.cones:
            rays = self.complex.rays_of(cid)
            if rays and not any(self.marking.marked(r) for r, _ in rays):
                if not self.complex.standalone(cid).is_regular:
                    return False
        return True


def barycentric_coeffs(k: ConicalComplex, cid: int, v_own) -> list[tuple[int, Fraction]]:
    """(ray_id, coefficient) pairs of a vector over the cone's vertices.

    Requires the cone to be simplicial; raises NotInCone when the vector
    has a negative coordinate or does not lie in the span.
    """
    cone = k.standalone(cid)
    rays = k.rays_of(cid)
    if len(rays) != cone.dim:
        raise NotInCone(f"no barycentric coordinates in cone {cid}")
    coeffs = cone.own_barycentric(v_own)
    if any(c < 0 for c in coeffs):
        raise NotInCone(f"{v_own} outside cone {cid}")
    order = {v: i for i, v in enumerate(cone.own_vertices)}
    return [(rid, coeffs[order[vec]]) for rid, vec in rays]


def project(mk: MarkedComplex, cid: int, v_own) -> dict[int, Fraction]:
    """Formal sum of the marked vertices carrying the vector's coefficients."""
    pairs = barycentric_coeffs(mk.complex, cid, v_own)
    return {rid: c for rid, c in pairs if mk.marking.marked(rid)}


def marked_key(mk: MarkedComplex, cid: int, v_own) -> tuple:
    """Lexicographic comparison key: marked coefficients by descending rank."""
    proj = project(mk, cid, v_own)
    return tuple(c for _, c in sorted(((mk.marking.ranks[r], c) for r, c in proj.items()),
                                      key=lambda t: -t[0]))


def order_compare(mk: MarkedComplex, cid: int, v_own, w_own) -> Order:
    """Compare two vectors of a common face in the marking order.

    The difference of the projections decides: greater means every marked
    vertex with a negative coefficient is dominated by a higher-ranked one
    with a positive coefficient.
    """
    pv = project(mk, cid, v_own)
    pw = project(mk, cid, w_own)
    diff = {r: pv.get(r, Fraction(0)) - pw.get(r, Fraction(0))
            for r in set(pv) | set(pw)}
    diff = {r: c for r, c in diff.items() if c != 0}
    if not diff:
        return Order.EQ_PROJ
    ranks = mk.marking.ranks

    def dominated(d):
        neg = [r for r, c in d.items() if c < 0]
        pos = [r for r, c in d.items() if c > 0]
        return all(any(ranks[p] > ranks[n] for p in pos) for n in neg)

    gt = dominated(diff)
    lt = dominated({r: -c for r, c in diff.items()})
    if gt and lt:
        raise InvariantViolated(f"order rule ambiguous in cone {cid}")
    if gt:
        return Order.GT
    if lt:
        return Order.LT
    return Order.INCOMPARABLE


def minimal_small_vector(mk: MarkedComplex, cid: int) -> Vec:
    """The unique order-minimal small vector of a regularly marked face."""
    k = mk.complex
    cone = k.standalone(cid)
    smalls = cone._own_small_vectors()
    if not smalls:
        raise NoSmallVectors(f"cone {cid} is regular")
    # integer keys: marked coefficients scaled by the (positive) determinant
    order = {v: i for i, v in enumerate(cone.own_vertices)}
    marked_slots = sorted(
        ((mk.marking.ranks[rid], order[vec]) for rid, vec in k.rays_of(cid)
         if mk.marking.marked(rid)), key=lambda t: -t[0])
    slots = [i for _, i in marked_slots]
    keyed = []
    for v in smalls:
        scaled = cone.own_barycentric_scaled(v)
        keyed.append((tuple(scaled[i] for i in slots), v))
    keyed.sort()
    if len(keyed) > 1 and keyed[0][0] == keyed[1][0]:
        raise UniquenessViolated(
            f"cone {cid}: small vectors {keyed[0][1]} and {keyed[1][1]} tie")
    return keyed[0][1]


def extend_marking_after_subdivision(mk: Marking, center_batches) -> Marking:
    """Marking extended by consecutive center batches.

    Vertices of one batch share a rank (their stars were disjoint, so they
    never meet in a face); later batches rank strictly higher, and
    everything new ranks above the previously marked vertices.
    """
    out = Marking(dict(mk.ranks))
    for batch in center_batches:
        out.add_batch(batch)
    return out


def validate_marking(mk: MarkedComplex) -> None:
    """Assert the two marking axioms on every face."""
    k = mk.complex
    for cid in k.cones:
        rays = k.rays_of(cid)
        marked = [vec for rid, vec in rays if mk.marking.marked(rid)]
        unmarked = [vec for rid, vec in rays if not mk.marking.marked(rid)]
        if marked:
            r_all = len(xl.saturation_basis(marked + unmarked))
            r_un = len(xl.saturation_basis(unmarked))
            if r_all != r_un + len(marked):
                raise InvariantViolated(
                    f"marked vertices of cone {cid} not independent of the rest")
        ranks = [mk.marking.ranks[rid] for rid, _ in rays if mk.marking.marked(rid)]
        if len(set(ranks)) != len(ranks):
            raise InvariantViolated(f"marking order not total on cone {cid}")
