"""Strictly convex rational cones over explicit lattices.

A ``Cone`` is given by ambient-coordinate generators together with a basis
of its lattice N (also in ambient coordinates; defaults to the standard
basis).  Internally everything is converted to coordinates of the saturated
lattice N cap span(cone), in which the cone is full-dimensional; public
methods return ambient vectors.

The enumerations here (small vectors, minimal vectors, minimal internal
vectors) drive the desingularization algorithm and are exact: coset
representatives modulo the vertex lattice for small vectors, and a bounded
interior search with domination pruning for minimal internal vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import exactlin as xl
from .exactlin import Mat, Vec


class NotStrictlyConvex(ValueError):
    pass


class NotSimplicial(ValueError):
    pass


class EmptyInterior(ValueError):
    pass


class Cone:
    """Strictly convex rational cone with an explicit ambient lattice.

    generators: ambient-coordinate lattice vectors spanning the cone.
    lattice_basis: list of ambient vectors forming a basis of N; defaults
        to the standard basis of Z^n.
    """

    def __init__(self, generators, lattice_basis=None, ambient_dim=None):
        gens = [xl.vec(g) for g in generators]
        if lattice_basis is not None:
            basis = [xl.vec(b) for b in lattice_basis]
            n = len(basis[0]) if basis else ambient_dim
        else:
            if gens:
                n = len(gens[0])
            elif ambient_dim is not None:
                n = ambient_dim
            else:
                raise ValueError("ambient dimension undetermined")
            basis = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
        if ambient_dim is not None and ambient_dim != n:
            raise ValueError("ambient_dim conflicts with data")
        self.ambient_dim = n
        self.lattice_basis = basis
        self.generators = tuple(g for g in gens if any(g))

        identity_basis = lattice_basis is None
        b_mat = xl.columns_matrix(basis)
        if identity_basis:
            lat_coords = list(self.generators)
        else:
            lat_coords = []
            for g in self.generators:
                x = xl.solve_integral(b_mat, g)
                if x is None:
                    raise ValueError(f"generator {g} is not a lattice point")
                lat_coords.append(x)
        if lat_coords and xl.rank(xl.mat(lat_coords)) == len(basis):
            # full-dimensional in N: keep the lattice basis as the chart
            span = None
            self.dim = len(basis)
            own = list(lat_coords)
            span_mat = xl.identity(self.dim)
        else:
            span = xl.saturation_basis(lat_coords)
            self.dim = len(span)
            span_mat = xl.columns_matrix(span) if span else ()
            own = xl.solve_columns(span_mat, lat_coords) if span else [() for _ in lat_coords]
            assert all(y is not None for y in own)
        self._own_gens = tuple(own)
        # columns of _emb give own -> ambient coordinates
        self._emb = xl.mat_mul(b_mat, span_mat) if self.dim else tuple(() for _ in range(n))

    # -- coordinate helpers -------------------------------------------------

    def to_ambient(self, x_own) -> Vec:
        return xl.mat_vec(self._emb, x_own) if self.dim else tuple([0] * self.ambient_dim)

    def to_own(self, v_ambient) -> Vec | None:
        if self.dim == 0:
            return () if not any(v_ambient) else None
        return xl.solve_integral(self._emb, v_ambient)

    def to_own_rational(self, v_ambient):
        if self.dim == 0:
            return () if not any(v_ambient) else None
        return xl.solve_rational(self._emb, v_ambient)

    # -- facial structure ---------------------------------------------------

    @cached_property
    def facet_normals(self) -> tuple[Vec, ...]:
        """Inward facet normals in own coordinates, deduplicated, sorted."""
        r = self.dim
        if r == 0:
            return ()
        gens = self._own_gens
        if len(gens) == r:
            m = xl.columns_matrix(gens)
            d = xl.det(m)
            if d != 0:
                # simplicial: normals are the primitivized dual-basis rows
                adj = xl.adjugate(m)
                sign = 1 if d > 0 else -1
                found = set()
                for row in adj:
                    n_vec = tuple(sign * x for x in row)
                    g = xl.vec_gcd(n_vec)
                    found.add(tuple(x // g for x in n_vec))
                return tuple(sorted(found))
        found = set()
        for subset in itertools.combinations(range(len(gens)), r - 1):
            rows = [gens[i] for i in subset]
            kern = _integer_kernel(rows, r)
            if len(kern) != 1:
                continue
            n_vec = kern[0]
            vals = [xl.vec_dot(n_vec, g) for g in gens]
            if all(v >= 0 for v in vals):
                found.add(n_vec)
            elif all(v <= 0 for v in vals):
                found.add(tuple(-x for x in n_vec))
        return tuple(sorted(found))

    @cached_property
    def is_strictly_convex(self) -> bool:
        if self.dim == 0:
            return True
        return xl.rank(xl.mat(self.facet_normals)) == self.dim

    def contains_own(self, x) -> bool:
        return all(xl.vec_dot(n, x) >= 0 for n in self.facet_normals)

    def interior_own(self, x) -> bool:
        if self.dim == 0:
            return False
        return all(xl.vec_dot(n, x) > 0 for n in self.facet_normals)

    def contains_ambient(self, v) -> bool:
        x = self.to_own_rational(v)
        return x is not None and all(sum(Fraction(a) * b for a, b in zip(n, x)) >= 0
                                     for n in self.facet_normals)

    @cached_property
    def own_vertices(self) -> tuple[Vec, ...]:
        """Primitive extreme-ray generators, own coordinates, lex order."""
        if not self.is_strictly_convex:
            raise NotStrictlyConvex("cone contains a line")
        if self.dim == 0:
            return ()
        gens = self._own_gens
        if len(gens) == self.dim and xl.det(xl.columns_matrix(gens)) != 0:
            # simplicial on independent generators: all are extreme
            out = set()
            for g in gens:
                gcd = xl.vec_gcd(g)
                out.add(tuple(c // gcd for c in g))
            return tuple(sorted(out))
        out = set()
        for g in gens:
            tight = [n for n in self.facet_normals if xl.vec_dot(n, g) == 0]
            if xl.rank(xl.mat(tight)) == self.dim - 1:
                gcd = xl.vec_gcd(g)
                out.add(tuple(c // gcd for c in g))
        return tuple(sorted(out))

    def vertices(self) -> list[Vec]:
        """Unique minimal set of primitive generators, ambient coordinates."""
        return sorted(self.to_ambient(v) for v in self.own_vertices)

    def faces(self) -> list["Cone"]:
        """All faces including the zero cone and the cone itself."""
        seen: dict[frozenset, Cone] = {}
        stack = [self]
        while stack:
            c = stack.pop()
            key = frozenset(c.vertices())
            if key in seen:
                continue
            seen[key] = c
            for n_vec in c.facet_normals:
                tight = [v for v in c.own_vertices if xl.vec_dot(n_vec, v) == 0]
                sub = Cone([c.to_ambient(v) for v in tight],
                           lattice_basis=self.lattice_basis,
                           ambient_dim=self.ambient_dim)
                stack.append(sub)
        if frozenset() not in seen:
            seen[frozenset()] = Cone([], lattice_basis=self.lattice_basis,
                                     ambient_dim=self.ambient_dim)
        return sorted(seen.values(), key=lambda c: (c.dim, c.vertices()))

    # -- regularity and determinants ----------------------------------------

    @cached_property
    def is_simplicial(self) -> bool:
        return len(self.own_vertices) == self.dim

    def det_simplicial(self) -> int:
        """Index of the vertex-generated sublattice in N; 1 iff regular."""
        if not self.is_simplicial:
            raise NotSimplicial(f"cone with {len(self.own_vertices)} vertices in dim {self.dim}")
        return abs(xl.det(xl.columns_matrix(self.own_vertices)))

    @cached_property
    def is_regular(self) -> bool:
        return self.is_simplicial and self.det_simplicial() == 1

    # -- lattice point enumerations ------------------------------------------

    def small_vectors(self) -> list[Vec]:
        """Nonzero lattice points of the half-open fundamental parallelepiped.

        Computed through coset representatives of N / N_Vert: the column
        Hermite form of the vertex matrix yields a residue box of exactly
        det(cone) points, each reduced into the parallelepiped.  Ambient
        coordinates, lexicographic order.
        """
        return sorted(self.to_ambient(v) for v in self._own_small_vectors())

    @cached_property
    def _own_vertex_adjugate(self):
        """(adjugate rows, positive det) of the vertex matrix (simplicial).

        adj . x / det gives the barycentric coordinates with integer
        arithmetic; the sign is folded into the adjugate so det > 0.
        """
        if not self.is_simplicial:
            raise NotSimplicial("barycentric coordinates need a simplicial cone")
        vmat = xl.columns_matrix(self.own_vertices)
        d = xl.det(vmat)
        adj = xl.adjugate(vmat)
        if d < 0:
            adj = tuple(tuple(-x for x in row) for row in adj)
            d = -d
        return adj, d

    def own_barycentric(self, x):
        adj, d = self._own_vertex_adjugate
        return [Fraction(xl.vec_dot(row, x), d) for row in adj]

    def own_barycentric_scaled(self, x):
        """det * barycentric coordinates: integer vector, same ordering."""
        adj, _ = self._own_vertex_adjugate
        return tuple(xl.vec_dot(row, x) for row in adj)

    @cached_property
    def _own_small_cache(self) -> list[Vec]:
        if not self.is_simplicial:
            raise NotSimplicial("small vectors need a simplicial cone")
        r = self.dim
        if r == 0:
            return []
        vmat = xl.columns_matrix(self.own_vertices)
        adj, d = self._own_vertex_adjugate
        h, _ = xl.hnf(xl.transpose(vmat))  # rows of h: basis of the vertex lattice
        diag = [h[i][i] for i in range(r)]
        out = []
        for mix in itertools.product(*[range(dd) for dd in diag]):
            y = [xl.vec_dot(row, mix) for row in adj]
            fl = [yi // d for yi in y]  # floor of the barycentric coordinates
            pt = tuple(m - sum(vmat[i][j] * fl[j] for j in range(r))
                       for i, m in enumerate(mix))
            if any(pt):
                out.append(pt)
        return sorted(set(out))

    def _own_small_vectors(self) -> list[Vec]:
        return self._own_small_cache

    def minimal_vectors(self) -> list[Vec]:
        """Small vectors indecomposable as a sum of two nonzero lattice points."""
        return sorted(self.to_ambient(v) for v in self._own_minimal_vectors())

    def _own_minimal_vectors(self) -> list[Vec]:
        small = self._own_small_vectors()
        out = []
        for v in small:
            decomposable = any(x != v and self.contains_own(xl.vec_sub(v, x)) for x in small)
            if not decomposable:
                out.append(v)
        return out

    def minimal_internal_vectors(self) -> list[Vec]:
        """Interior lattice points with no decomposition x + y, y interior.

        Equivalently the minimal elements of the interior lattice points
        under the cone order.  The search region is exact: for simplicial
        cones the closed-top parallelepiped (coefficients in (0,1]); in
        general a provably sufficient bound from facet-capped cells.
        """
        return sorted(self.to_ambient(v) for v in self._own_minimal_internal())

    def _own_minimal_internal(self) -> list[Vec]:
        r = self.dim
        if r == 0:
            raise EmptyInterior("zero cone has no relative interior")
        if self.is_simplicial:
            cands = self._simplicial_internal_candidates()
        else:
            cands = self._general_internal_candidates()
        total = lambda x: sum(xl.vec_dot(n, x) for n in self.facet_normals)
        cands = sorted(set(cands), key=lambda x: (total(x), x))
        minimal: list[Vec] = []
        for v in cands:
            if not any(self.contains_own(xl.vec_sub(v, m)) for m in minimal):
                minimal.append(v)
        return sorted(minimal)

    def _simplicial_internal_candidates(self) -> list[Vec]:
        # A minimal internal vector has all barycentric coefficients in (0,1]:
        # a coefficient above 1 lets a vertex be split off with the rest
        # staying interior.  Each lattice point of that region is a
        # parallelepiped residue with its zero coefficients raised to 1.
        r = self.dim
        verts = self.own_vertices
        vmat = xl.columns_matrix(verts)
        pts = [tuple([0] * r)] + self._own_small_vectors()
        out = []
        for p in pts:
            a = self.own_barycentric(p)
            v = p
            for i, f in enumerate(a):
                if f == 0:
                    v = xl.vec_add(v, verts[i])
            out.append(v)
        return out

    def _general_internal_candidates(self) -> list[Vec]:
        normals = self.facet_normals
        verts = self.own_vertices
        r = self.dim
        # Facet subsets whose common tight face is the origin give bounded
        # cells covering every point v with v - vertex never interior.
        minimal_subsets = []
        for size in range(1, len(normals) + 1):
            for s in itertools.combinations(range(len(normals)), size):
                if any(set(q) <= set(s) for q in minimal_subsets):
                    continue
                if all(any(xl.vec_dot(normals[f], g) > 0 for f in s) for g in verts):
                    minimal_subsets.append(s)
        t_vec = tuple(sum(n[i] for n in normals) for i in range(r))
        t_bound = 0
        for s in minimal_subsets:
            rows = [(tuple(-x for x in n), 0) for n in normals]
            for f in s:
                cap = max(xl.vec_dot(normals[f], v) for v in verts)
                rows.append((normals[f], cap))
            t_bound = max(t_bound, _max_linear_over_polytope(rows, t_vec, r))
        box_rows = [(tuple(-x for x in n), 0) for n in normals] + [(t_vec, t_bound)]
        lo, hi = _polytope_box(box_rows, r)
        out = []
        for pt in itertools.product(*[range(lo[i], hi[i] + 1) for i in range(r)]):
            if not self.interior_own(pt):
                continue
            if sum(xl.vec_dot(n, pt) for n in normals) > t_bound:
                continue
            if any(self.interior_own(xl.vec_sub(pt, v)) for v in verts):
                continue
            out.append(tuple(pt))
        return out

    def canonical_barycenter(self) -> Vec:
        """Primitivized sum of the minimal internal vectors; lies in int(cone)."""
        mins = self._own_minimal_internal()
        if not mins:
            raise EmptyInterior("no minimal internal vectors")
        s = mins[0]
        for m in mins[1:]:
            s = xl.vec_add(s, m)
        g = xl.vec_gcd(s)
        b = tuple(c // g for c in s)
        assert self.interior_own(b)
        return self.to_ambient(b)

    # -- product structure ----------------------------------------------------

    def sing_reg_split(self) -> "SingRegSplit":
        """Split off the maximal regular factor: cone = sing x reg.

        Searched over vertex partitions from the largest regular side; the
        lattice must split as a direct sum for a partition to qualify.
        """
        verts = self.own_vertices
        k = len(verts)
        for size in range(k, -1, -1):
            valid = []
            for reg_idx in itertools.combinations(range(k), size):
                sing_idx = tuple(i for i in range(k) if i not in reg_idx)
                if self._lattice_splits(reg_idx, sing_idx):
                    valid.append((reg_idx, sing_idx))
            if valid:
                assert len(valid) == 1, f"ambiguous regular factor: {valid}"
                reg_idx, sing_idx = valid[0]
                amb_verts = [self.to_ambient(v) for v in verts]
                reg_part = Cone([amb_verts[i] for i in reg_idx],
                                lattice_basis=self.lattice_basis, ambient_dim=self.ambient_dim)
                sing_part = Cone([amb_verts[i] for i in sing_idx],
                                 lattice_basis=self.lattice_basis, ambient_dim=self.ambient_dim)
                order = {tuple(v): i for i, v in enumerate(self.vertices())}
                return SingRegSplit(
                    sing_part=sing_part, reg_part=reg_part,
                    sing_vertex_ids=sorted(order[amb_verts[i]] for i in sing_idx),
                    reg_vertex_ids=sorted(order[amb_verts[i]] for i in reg_idx))
        raise AssertionError("unreachable: empty partition always splits")

    def _lattice_splits(self, reg_idx, sing_idx) -> bool:
        verts = self.own_vertices
        reg = [verts[i] for i in reg_idx]
        sing = [verts[i] for i in sing_idx]
        if reg and (xl.rank(xl.mat(reg)) != len(reg)
                    or xl.rank(xl.mat(reg + sing)) != len(reg) + xl.rank(xl.mat(sing))):
            return False
        # the candidate factor is regular iff its vertices span a saturated
        # sublattice on the nose (all elementary divisors 1)
        if reg and xl.saturation_index(reg) != 1:
            return False
        reg_sat = reg  # already saturated when regular
        sing_sat = xl.saturation_basis(sing)
        if len(reg_sat) + len(sing_sat) != self.dim:
            return False
        combined = xl.columns_matrix([list(v) for v in reg_sat] + list(sing_sat))
        return abs(xl.det(combined)) == 1

    @cached_property
    def is_irreducible_singular(self) -> bool:
        if self.dim == 0:
            return False
        if self.is_simplicial:
            # a regular factor always peels off one ray at a time, so only
            # single-vertex splits need to be ruled out
            if self.det_simplicial() == 1:
                return False
            verts = list(self.own_vertices)
            det = self.det_simplicial()
            for i in range(len(verts)):
                rest = verts[:i] + verts[i + 1:]
                if xl.saturation_index(rest) == det:
                    return False
            return True
        return self.sing_reg_split().reg_part.dim == 0

    def __repr__(self):
        return f"Cone(dim={self.dim}, vertices={self.vertices()})"


@dataclass(frozen=True)
class SingRegSplit:
    sing_part: Cone
    reg_part: Cone
    sing_vertex_ids: list[int]
    reg_vertex_ids: list[int]


def _integer_kernel(rows, ncols: int) -> list[Vec]:
    """Basis of the integer kernel of the row system, via Smith transforms."""
    if not rows:
        return [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    m = xl.mat(rows)
    d, s, t, sinv, tinv = xl.smith_decomposition(m)
    nr, nc = xl.mat_shape(d)
    zero_cols = [j for j in range(nc) if j >= nr or d[j][j] == 0]
    return [tuple(row[j] for row in tinv) for j in zero_cols]


def _vertex_candidates(rows, r):
    """Vertices of {x : a.x <= b for (a, b) in rows} via square subsystems."""
    out = []
    for subset in itertools.combinations(range(len(rows)), r):
        m = xl.mat([rows[i][0] for i in subset])
        if xl.det(m) == 0:
            continue
        rhs = [rows[i][1] for i in subset]
        x = xl.solve_rational(m, rhs)
        if x is None:
            continue
        if all(sum(Fraction(a) * xi for a, xi in zip(row, x)) <= b for row, b in rows):
            out.append(tuple(x))
    return out


def _max_linear_over_polytope(rows, objective, r):
    """Exact max of objective.x over a (bounded, nonempty) polytope."""
    best = Fraction(0)
    for v in _vertex_candidates(rows, r):
        val = sum(Fraction(c) * x for c, x in zip(objective, v))
        if val > best:
            best = val
    return best


def _polytope_box(rows, r):
    """Integer bounding box of a bounded polytope given by a.x <= b rows."""
    verts = _vertex_candidates(rows, r)
    if not verts:
        return [0] * r, [-1] * r
    lo = [min(v[i] for v in verts) for i in range(r)]
    hi = [max(v[i] for v in verts) for i in range(r)]
    lo = [xl.frac_floor(Fraction(x)) for x in lo]
    hi = [-xl.frac_floor(Fraction(-x)) for x in hi]
    return lo, hi
