"""The combinatorial blow-up bridge: valuations, PL functions, ideal slices.

A lattice vector v pairs monomials to integers; its valuation-ideal slices
are monoid ideals in each chart's dual monoid, and the piecewise linear
function that is 0 on the old rays and a on the ray of v, extended
linearly over the star subdivision at v, cuts out exactly those slices.
Linearity on the subdivided cones plus strict convexity across the new
interior walls is the executable form of "normalized blow-up = star
subdivision".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import exactlin as xl
from .complexes import ConicalComplex, StarCenter
from .cones import NotSimplicial
from .exactlin import Vec


class EmptySupport(ValueError):
    pass


def val(v, support) -> int:
    """Monomial valuation: min of the pairings of v against the support."""
    support = list(support)
    if not support:
        raise EmptySupport("valuation of the zero polynomial")
    return min(xl.vec_dot(v, w) for w in support)


@dataclass
class PLFunction:
    """Per-maximal-cone linear functionals on a complex, face-compatible."""
    complex: ConicalComplex
    functionals: dict[int, tuple]  # maximal cone id -> coefficients (own coords)

    def value_on(self, cid: int, x_own):
        holder = cid
        if cid not in self.functionals:
            holder = next(s for s in sorted(self.complex.coface_ids(cid))
                          if s in self.functionals)
            x_own = xl.mat_vec(self.complex.face_matrix(cid, holder), x_own)
        coeffs = self.functionals[holder]
        return sum(Fraction(c) * x for c, x in zip(coeffs, x_own))

    def ray_values(self) -> dict[int, Fraction]:
        return {rid: self.value_on(rid, (1,)) for rid in self.complex.ray_ids()}

    @property
    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1
                   for coeffs in self.functionals.values() for c in coeffs)

    def to_json_dict(self):
        return {str(cid): [str(c) for c in coeffs]
                for cid, coeffs in sorted(self.functionals.items())}


def _linear_extension(k: ConicalComplex, cid: int, ray_values: dict):
    """Functional matching the prescribed values on the cone's rays."""
    rows = []
    rhs = []
    for rid, vec in k.rays_of(cid):
        rows.append(vec)
        rhs.append(ray_values[rid])
    sol = xl.solve_rational(xl.mat(rows), rhs)
    if sol is None:
        return None
    # overdetermined systems must be consistent for a valid PL function
    for row, b in zip(rows, rhs):
        if sum(Fraction(r) * x for r, x in zip(row, sol)) != b:
            return None
    return tuple(sol)


def pl_function(center: StarCenter, a: int, k: ConicalComplex):
    """F_{v,a} on the star subdivision at the center.

    Zero on every old ray, a on the new ray, extended linearly on each
    subdivided cone.  Returns (function, subdivided complex, smallest a
    for which the function is integral) — the lcm of the denominators of
    the unit-height extensions.
    """
    sub, created = k.star_subdivide([center])
    new_ray = created[0][k.zero_id]
    unit_values = {rid: Fraction(0) for rid in sub.ray_ids()}
    unit_values[new_ray] = Fraction(1)
    unit = {}
    for cid in sub.maximal_ids():
        coeffs = _linear_extension(sub, cid, unit_values)
        assert coeffs is not None
        unit[cid] = coeffs
    min_a = 1
    for coeffs in unit.values():
        for c in coeffs:
            min_a = xl.lcm(min_a, Fraction(c).denominator)
    functionals = {cid: tuple(a * c for c in coeffs) for cid, coeffs in unit.items()}
    return PLFunction(sub, functionals), sub, min_a


def exceptional_coefficients(f: PLFunction) -> dict[int, Fraction]:
    """Divisor data: the value of the function on each ray generator."""
    return f.ray_values()


def pl_from_divisor(coeffs: dict[int, int], k: ConicalComplex) -> PLFunction | None:
    """The PL function with the given ray values, if integral Cartier data.

    The complex must be simplicial so the per-cone extension is determined;
    None when some extension fails to be an integral functional (the
    divisor is not Cartier on the complex).
    """
    values = {rid: Fraction(v) for rid, v in coeffs.items()}
    functionals = {}
    for cid in k.maximal_ids():
        cone = k.standalone(cid)
        if not cone.is_simplicial:
            raise NotSimplicial(f"maximal cone {cid}")
        sol = _linear_extension(k, cid, values)
        if sol is None or any(s.denominator != 1 for s in sol):
            return None
        functionals[cid] = tuple(int(s) for s in sol)
    return PLFunction(k, functionals)


@dataclass
class ValuationIdealSlice:
    """Truncated generator data of {m in dual monoid : <v, m> >= a}."""
    a: int
    degree_bound: int
    generators: dict[int, list[Vec]]  # per maximal cone over the carrier's star

    def to_json_dict(self):
        return {"a": self.a, "degree_bound": self.degree_bound,
                "generators": {str(cid): [[str(x) for x in g] for g in gens]
                               for cid, gens in sorted(self.generators.items())}}


def dual_monoid_points(k: ConicalComplex, cid: int, bound: int):
    """Dual-monoid lattice points with coordinate height <= bound."""
    verts = k.cones[cid].verts
    dim = k.cones[cid].dim
    out = []
    for m in itertools.product(range(-bound, bound + 1), repeat=dim):
        if all(xl.vec_dot(m, v) >= 0 for v in verts):
            out.append(tuple(m))
    return out


def ideal_slice(center: StarCenter, a: int, k: ConicalComplex,
                degree_bound: int) -> ValuationIdealSlice:
    """Per-chart generators of the valuation ideal slice at level a.

    Charts are the maximal cones containing the carrier (where the
    valuation has its center); generators are reduced to a minimal set
    within the stated bound, which is recorded rather than claimed global.
    """
    gens = {}
    for cid in k.maximal_ids():
        if not k.is_face(center.carrier, cid):
            continue
        v_here = xl.mat_vec(k.face_matrix(center.carrier, cid), center.vector)
        monoid = dual_monoid_points(k, cid, degree_bound)
        monoid_set = set(monoid)
        members = [m for m in monoid if xl.vec_dot(m, v_here) >= a and any(m)]
        member_set = set(members)
        minimal = []
        for m in members:
            reducible = False
            for g in members:
                if g == m:
                    continue
                rest = xl.vec_sub(m, g)
                if rest in monoid_set:
                    reducible = True
                    break
            if not reducible:
                minimal.append(m)
        gens[cid] = sorted(minimal)
    return ValuationIdealSlice(a=a, degree_bound=degree_bound, generators=gens)


def slice_members(k: ConicalComplex, cid: int, v_own_in_cid, a: int, bound: int):
    """All dual-monoid points of the chart at pairing >= a (for testing)."""
    return [m for m in dual_monoid_points(k, cid, bound)
            if xl.vec_dot(m, v_own_in_cid) >= a]
