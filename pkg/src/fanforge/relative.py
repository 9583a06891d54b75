"""Relative complexes (Sigma, Omega) and their canonical desingularization.

Omega is a subcomplex the resolution must leave untouched: centers never
meet its support, and the algorithm stops when every maximal cone is a
regular pair, i.e. its singular part sits inside its Omega-face.  The
singularity measure for a simplicial pair is the determinant of the
non-Omega vertices in the quotient lattice modulo the Omega-face lattice;
termination is driven by the two-variable histogram over (dim omega-face,
relative determinant), ordered lexicographically.

With Omega = {0} every notion degenerates to its absolute counterpart and
the driver reproduces `resolve` trace for trace.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactlin as xl
from . import marking as mkg
from . import resolve as rsv
from .complexes import ConicalComplex, StarCenter
from .cones import Cone
from .exactlin import Vec


class NotBalanced(ValueError):
    pass


class NotSimplicialPair(ValueError):
    pass


class InOmega(ValueError):
    pass


class NotRelativelyIrreducible(ValueError):
    pass


class OrderNotTotal(ValueError):
    pass


@dataclass
class RelativeComplex:
    complex: ConicalComplex
    omega_ids: frozenset
    omega_order: dict[int, int] = field(default_factory=dict)  # ray id -> rank

    def __post_init__(self):
        self.omega_ids = frozenset(self.omega_ids) | {self.complex.zero_id}
        if not self.complex.is_subcomplex(self.omega_ids):
            raise ValueError("omega is not a face-closed subcomplex")

    def check_order_total(self):
        for wid in self.omega_ids:
            rays = [r for r, _ in self.complex.rays_of(wid)]
            ranks = [self.omega_order.get(r) for r in rays]
            if any(r is None for r in ranks) or len(set(ranks)) != len(ranks):
                raise OrderNotTotal(f"vertex order not total on omega cone {wid}")

    @property
    def omega_saturated(self) -> bool:
        """Every cone whose rays all lie in Omega is in Omega (reported only)."""
        for cid in self.complex.cones:
            rays = [r for r, _ in self.complex.rays_of(cid)]
            if rays and all(r in self.omega_ids for r in rays):
                if cid not in self.omega_ids:
                    return False
        return True


@dataclass(frozen=True)
class RelPairStatus:
    balanced: bool
    max_omega_face: int | None
    simplicial_pair: bool
    regular_pair: bool
    sing_omega_face: int
    mu: tuple[int, int] | None  # (dim omega-face, relative determinant)


def _sing_face_id(k: ConicalComplex, cid: int) -> int:
    """Face id of the maximal irreducible singular face of the cone."""
    split = k.standalone(cid).sing_reg_split()
    sing_verts = frozenset(split.sing_part.vertices())
    if not sing_verts:
        return k.zero_id
    for tau in k.face_ids(cid):
        if k.cones[tau].dim != split.sing_part.dim:
            continue
        # compare via vertex vectors inside cid's coordinates
        tau_verts = frozenset(
            tuple(xl.mat_vec(k.face_matrix(tau, cid), w)) for w in k.cones[tau].verts)
        if tau_verts == sing_verts:
            return tau
    raise AssertionError(f"singular part of cone {cid} is not a poset face")


def pair_status(rk: RelativeComplex, cid: int) -> RelPairStatus:
    k = rk.complex
    omega_faces = [t for t in k.face_ids(cid) if t in rk.omega_ids]
    maximal_omega = [t for t in omega_faces
                     if not any(s != t and k.is_face(t, s) for s in omega_faces)]
    balanced = len(maximal_omega) == 1
    omega = maximal_omega[0] if balanced else None
    sing_id = _sing_face_id(k, cid)
    # minimal face containing the singular part and every maximal omega face
    holders = [t for t in k.face_ids(cid)
               if k.is_face(sing_id, t) and all(k.is_face(m, t) for m in maximal_omega)]
    sing_omega = min(holders, key=lambda t: (k.cones[t].dim, t))
    assert all(k.is_face(sing_omega, t) for t in holders)
    regular = balanced and k.is_face(sing_id, omega)
    simplicial = False
    mu = None
    if balanced:
        wmat = k.face_matrix(omega, cid)
        wcols = xl.matrix_columns(wmat)
        omega_vert_set = {tuple(xl.mat_vec(wmat, w)) for w in k.cones[omega].verts}
        others = [v for v in k.cones[cid].verts if tuple(v) not in omega_vert_set]
        full = wcols + others
        if len(full) == k.cones[cid].dim:
            d = abs(xl.det(xl.columns_matrix(full)))
            if d != 0:
                simplicial = True
                mu = (k.cones[omega].dim, d)
    return RelPairStatus(balanced=balanced, max_omega_face=omega,
                         simplicial_pair=simplicial, regular_pair=regular,
                         sing_omega_face=sing_omega, mu=mu)


def is_relatively_irreducible(rk: RelativeComplex, cid: int) -> bool:
    return pair_status(rk, cid).sing_omega_face == cid


def _omega_rays(rk: RelativeComplex, cid: int):
    k = rk.complex
    return [(rid, vec) for rid, vec in k.rays_of(cid) if rid in rk.omega_ids]


def relative_barycenter(rk: RelativeComplex, cid: int) -> Vec:
    """Primitivized sum of the Omega-vertices and minimal internal vectors."""
    if cid in rk.omega_ids:
        raise InOmega(f"cone {cid} lies in omega")
    if not is_relatively_irreducible(rk, cid):
        raise NotRelativelyIrreducible(f"cone {cid}")
    k = rk.complex
    cone = k.standalone(cid)
    total = tuple([0] * k.cones[cid].dim)
    for _, vec in _omega_rays(rk, cid):
        total = xl.vec_add(total, vec)
    for m in cone._own_minimal_internal():
        total = xl.vec_add(total, m)
    v = xl.primitivize(total)
    assert cone.interior_own(v)
    return v


def _pair_smalls(rk: RelativeComplex, cid: int):
    """(pair smalls, all smalls) of a balanced cone, own coordinates.

    A small vector splits uniquely into a [0,1) combination of the
    non-Omega vertices plus an Omega-part p with p - w never in omega; the
    pair smalls are the ones with a nonzero non-Omega component.
    """
    k = rk.complex
    st = pair_status(rk, cid)
    if not st.balanced or not st.simplicial_pair:
        raise NotSimplicialPair(f"cone {cid}")
    cone = k.standalone(cid)
    if cone.is_simplicial:
        omega_ray_ids = {rid for rid, _ in _omega_rays(rk, cid)}
        order = {v: i for i, v in enumerate(cone.own_vertices)}
        omega_slots = {order[vec] for rid, vec in k.rays_of(cid) if rid in omega_ray_ids}
        smalls = cone._own_small_vectors()
        pair = []
        for s in smalls:
            scaled = cone.own_barycentric_scaled(s)
            if any(scaled[i] for i in range(len(scaled)) if i not in omega_slots):
                pair.append(s)
        return pair, smalls
    return _pair_smalls_general(rk, cid, st)


def _pair_smalls_general(rk: RelativeComplex, cid: int, st: RelPairStatus):
    """Box-scan enumeration for simplicial pairs over a non-simplicial omega."""
    k = rk.complex
    r = k.cones[cid].dim
    cone = k.standalone(cid)
    omega = st.max_omega_face
    wmat = k.face_matrix(omega, cid)
    wverts = [tuple(xl.mat_vec(wmat, w)) for w in k.cones[omega].verts]
    omega_vert_set = set(wverts)
    vverts = [v for v in k.cones[cid].verts if tuple(v) not in omega_vert_set]
    wcone = Cone(wverts, ambient_dim=r)
    # bounding box of the half-open zonotope over all vertices
    corners = []
    for mask in itertools.product([0, 1], repeat=len(vverts) + len(wverts)):
        pt = tuple([0] * r)
        for bit, vec in zip(mask, vverts + wverts):
            if bit:
                pt = xl.vec_add(pt, vec)
        corners.append(pt)
    lo = [min(c[i] for c in corners) for i in range(r)]
    hi = [max(c[i] for c in corners) for i in range(r)]
    basis = xl.columns_matrix(vverts + [list(b) for b in _span_basis(wverts, r)])
    pair, smalls = [], []
    for x in itertools.product(*[range(l, h + 1) for l, h in zip(lo, hi)]):
        if not any(x):
            continue
        coeffs = xl.solve_rational(basis, x)
        if coeffs is None:
            continue
        c_part = coeffs[:len(vverts)]
        if not all(0 <= c < 1 for c in c_part):
            continue
        p = x
        for c, v in zip(c_part, vverts):
            p = tuple(Fraction(pi) - c * vi for pi, vi in zip(p, v))
        if not wcone.contains_ambient(p):
            continue
        if any(wcone.contains_ambient(tuple(pi - wi for pi, wi in zip(p, w)))
               for w in wverts):
            continue
        smalls.append(tuple(x))
        if any(c != 0 for c in c_part):
            pair.append(tuple(x))
    return sorted(pair), sorted(smalls)


def _span_basis(vectors, r):
    sat = xl.saturation_basis(vectors)
    return sat


def relative_minimal_vectors(rk: RelativeComplex, cid: int) -> list[Vec]:
    """Minimal vectors of the cone lying outside its Omega-face."""
    pair, smalls = _pair_smalls(rk, cid)
    cone = rk.complex.standalone(cid)
    out = []
    for v in pair:
        if not any(x != v and cone.contains_own(xl.vec_sub(v, x)) for x in smalls):
            out.append(v)
    return sorted(out)


# -- the mu invariant ----------------------------------------------------------


def mu_polynomial(rk: RelativeComplex) -> dict[tuple[int, int], int]:
    """Histogram over mu = (dim omega-face, relative det); regular pairs omitted."""
    out: dict[tuple[int, int], int] = {}
    for cid in rk.complex.maximal_ids():
        st = pair_status(rk, cid)
        if st.mu is None:
            raise NotSimplicialPair(f"maximal cone {cid}")
        if st.mu[1] > 1:
            out[st.mu] = out.get(st.mu, 0) + 1
    return out


def mu_lt(a: dict, b: dict) -> bool:
    """Lexicographic order on Pmu polynomials (monomials x^i y^j)."""
    for key in sorted(set(a) | set(b), reverse=True):
        ca, cb = a.get(key, 0), b.get(key, 0)
        if ca != cb:
            return ca < cb
    return False


def rel_det_histogram(rk: RelativeComplex):
    """Relative determinants of the maximal pairs; None when not simplicial.

    This is the histogram recorded in traces; with trivial Omega it equals
    the absolute determinant histogram, which makes the reduction law hold
    byte for byte.
    """
    out: dict[int, int] = {}
    for cid in rk.complex.maximal_ids():
        st = pair_status(rk, cid)
        if st.mu is None:
            return None
        if st.mu[1] > 1:
            out[st.mu[1]] = out.get(st.mu[1], 0) + 1
    return rsv.pdet_key(out)


# -- ordering of pair smalls ----------------------------------------------------


def _relative_key(rk: RelativeComplex, ranks: dict, cid: int, v_own):
    """Comparison key of a vector inside a cone: marked coefficients by
    descending rank; over a non-simplicial omega the omega part contributes
    its lexicographically smallest nonnegative presentation."""
    k = rk.complex
    cone = k.standalone(cid)
    if cone.is_simplicial:
        order = {vv: i for i, vv in enumerate(cone.own_vertices)}
        slots = sorted(((ranks[rid], order[vec])
                        for rid, vec in k.rays_of(cid) if rid in ranks),
                       key=lambda t: -t[0])
        scaled = cone.own_barycentric_scaled(v_own)
        _, d = cone._own_vertex_adjugate
        return tuple(Fraction(scaled[i], d) for _, i in slots)
    st = pair_status(rk, cid)
    omega = st.max_omega_face
    wmat = k.face_matrix(omega, cid)
    wpairs = [(rid, tuple(xl.mat_vec(wmat, k.vertex_vector(rid, omega))))
              for rid, _ in k.rays_of(omega)]
    omega_vert_set = {vec for _, vec in wpairs}
    new_pairs = [(rid, vec) for rid, vec in k.rays_of(cid)
                 if vec not in omega_vert_set and rid in ranks]
    vverts = [vec for _, vec in new_pairs]
    basis = xl.columns_matrix(vverts + list(_span_basis([v for _, v in wpairs],
                                                        k.cones[cid].dim)))
    coeffs = xl.solve_rational(basis, v_own)
    assert coeffs is not None
    c_part = dict(zip((rid for rid, _ in new_pairs), coeffs[:len(vverts)]))
    p = tuple(v_own)
    for c, vec in zip(coeffs[:len(vverts)], vverts):
        p = tuple(Fraction(pi) - c * vi for pi, vi in zip(p, vec))
    pres = _lexmin_presentation([vec for _, vec in wpairs],
                                sorted(range(len(wpairs)),
                                       key=lambda i: -ranks[wpairs[i][0]]), p)
    key = [c_part[rid] for rid, _ in sorted(new_pairs, key=lambda t: -ranks[t[0]])]
    return tuple(key) + tuple(pres)


def _lexmin_presentation(wverts, desc_order, p):
    """Lexicographically smallest nonnegative presentation of p over wverts.

    Coefficients are read by descending vertex rank; the optimum is a
    vertex of the presentation polytope, found by basic-solution
    enumeration (the polytope is bounded because omega is strictly convex).
    """
    n = len(p)
    s = len(wverts)
    best = None
    wmat = xl.columns_matrix(wverts)
    rk_w = xl.rank(xl.mat(wverts))
    for support in itertools.combinations(range(s), rk_w):
        sub = xl.columns_matrix([wverts[i] for i in support])
        sol = xl.solve_rational(sub, p)
        if sol is None:
            continue
        full = [Fraction(0)] * s
        ok = True
        for idx, val in zip(support, sol):
            if val < 0:
                ok = False
                break
            full[idx] = val
        if not ok:
            continue
        # verify it actually presents p (rank-deficient subsets may not)
        recon = [sum(full[j] * wverts[j][i] for j in range(s)) for i in range(n)]
        if any(a != b for a, b in zip(recon, p)):
            continue
        key = tuple(full[i] for i in desc_order)
        if best is None or key < best:
            best = key
    assert best is not None, "omega part admits no nonnegative presentation"
    return best


def minimal_pair_small(rk: RelativeComplex, ranks: dict, cid: int) -> Vec:
    """Unique order-minimal small vector of the pair at a maximal cone."""
    pair, _ = _pair_smalls(rk, cid)
    if not pair:
        raise mkg.NoSmallVectors(f"pair at cone {cid} is regular")
    keyed = sorted((_relative_key(rk, ranks, cid, v), v) for v in pair)
    if len(keyed) > 1 and keyed[0][0] == keyed[1][0]:
        raise mkg.UniquenessViolated(f"cone {cid}: pair smalls tie")
    return keyed[0][1]


# -- the driver -----------------------------------------------------------------


def relative_barycentric_phase(rk: RelativeComplex):
    k = rk.complex
    ranks = dict(rk.omega_order)
    original = set(k.cones)
    cur = rk
    steps: list[rsv.TraceStep] = []
    max_dim = max(c.dim for c in k.cones.values())
    for d in range(max_dim, 1, -1):
        targets = [c for c in sorted(cur.complex.cones)
                   if c in original and c not in cur.omega_ids
                   and cur.complex.cones[c].dim == d
                   and is_relatively_irreducible(cur, c)]
        if not targets:
            continue
        centers = [StarCenter(t, relative_barycenter(cur, t)) for t in targets]
        steps.append(rsv.TraceStep(
            phase="barycentric",
            centers=tuple(sorted((rsv.trace_center(cur.complex, c) for c in centers),
                                 key=rsv.TraceCenter.sort_key)),
            pdet=rel_det_histogram(cur)))
        zero = cur.complex.zero_id
        nxt, created = cur.complex.star_subdivide(centers)
        batch_rank = max(ranks.values(), default=-1) + 1
        for i in range(len(centers)):
            ranks[created[i][zero]] = batch_rank
        cur = RelativeComplex(nxt, rk.omega_ids, rk.omega_order)
    return cur, ranks, steps


def relative_minimal_phase(cur: RelativeComplex, ranks: dict):
    steps: list[rsv.TraceStep] = []
    p0 = mu_polynomial(cur)
    guard = _guard(p0)
    iters = 0
    while True:
        p = mu_polynomial(cur)
        if not p:
            break
        pool: dict[int, Vec] = {}
        for cid in cur.complex.maximal_ids():
            st = pair_status(cur, cid)
            if st.regular_pair:
                continue
            v = minimal_pair_small(cur, ranks, cid)
            center = rsv.locate_carrier(cur.complex, cid, v)
            assert center.carrier not in cur.omega_ids
            if center.carrier in pool:
                assert pool[center.carrier] == center.vector
            else:
                pool[center.carrier] = center.vector
        batch = _prune_relative(cur, ranks, pool)
        steps.append(rsv.TraceStep(
            phase="minimal",
            centers=tuple(sorted((rsv.trace_center(cur.complex, c) for c in batch),
                                 key=rsv.TraceCenter.sort_key)),
            pdet=rel_det_histogram(cur)))
        zero = cur.complex.zero_id
        nxt, created = cur.complex.star_subdivide(batch)
        batch_rank = max(ranks.values(), default=-1) + 1
        for i in range(len(batch)):
            ranks[created[i][zero]] = batch_rank
        cur = RelativeComplex(nxt, cur.omega_ids, cur.omega_order)
        p_new = mu_polynomial(cur)
        assert mu_lt(p_new, p), "relative invariant failed to drop"
        iters += 1
        if iters > guard:
            raise rsv.ResolutionGuardError(
                f"relative minimal phase exceeded {guard} batches")
    return cur, steps


def _prune_relative(cur: RelativeComplex, ranks: dict, pool: dict[int, Vec]):
    k = cur.complex
    items = sorted(pool.items())
    star_sets = {t: k.star(t) for t, _ in items}
    batch = []
    for t1, v1 in items:
        beaten = False
        for t2, v2 in items:
            if (t2, v2) == (t1, v1):
                continue
            shared = star_sets[t1] & star_sets[t2]
            if not shared:
                continue
            sigma = min(shared)
            a = _relative_key(cur, ranks, sigma,
                              xl.mat_vec(k.face_matrix(t1, sigma), v1))
            b = _relative_key(cur, ranks, sigma,
                              xl.mat_vec(k.face_matrix(t2, sigma), v2))
            assert a != b, "pair-small candidates must compare strictly"
            if a > b:
                beaten = True
                break
        if not beaten:
            batch.append(StarCenter(t1, v1))
    assert batch, "domination pruning emptied the relative batch"
    return batch


def _guard(p0: dict) -> int:
    env = os.environ.get(rsv.GUARD_ENV)
    if env is not None:
        return int(env)
    return sum(j * n for (_, j), n in p0.items())


def resolve_relative(rk: RelativeComplex):
    """Canonical relative desingularization; Omega survives untouched."""
    rk.check_order_total()
    cur, ranks, steps = relative_barycentric_phase(rk)
    cur, more = relative_minimal_phase(cur, ranks)
    for cid in rk.omega_ids:
        assert cur.complex.cones[cid] == rk.complex.cones[cid]
    for cid in cur.complex.maximal_ids():
        assert pair_status(cur, cid).regular_pair
    return cur, rsv.SubdivisionTrace(steps + more)
