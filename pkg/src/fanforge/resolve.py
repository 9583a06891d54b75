"""Canonical desingularization of conical complexes.

Two phases: star subdivisions at the canonical barycenters of the
irreducible singular faces (by decreasing dimension, simultaneously per
dimension), which leaves a simplicial regularly marked complex; then a loop
of multi-center subdivisions at the order-minimal small vectors of the
maximal singular faces.  The determinant histogram of the maximal faces is
the termination measure: it drops lexicographically after every
minimal-phase batch.

Candidate centers dominated by a smaller candidate inside a shared cone
are deferred; the surviving batch provably has pairwise disjoint stars and
is independent of any tie-breaking, which is what makes the whole pipeline
functorial under local isomorphisms and regular local projections.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

from . import exactlin as xl
from . import marking as mkg
from .complexes import ComplexMap, ConicalComplex, StarCenter
from .cones import NotSimplicial
from .exactlin import Vec

GUARD_ENV = "FANFORGE_SEED_GUARD"


class ResolutionGuardError(RuntimeError):
    """The iteration guard tripped: always a bug, never expected."""


class MapKindUnsupported(ValueError):
    pass


@dataclass(frozen=True)
class TraceCenter:
    carrier_dim: int
    anchor: int
    carrier_vertices: tuple[Vec, ...]  # anchor coordinates, sorted
    vector: Vec  # anchor coordinates

    def sort_key(self):
        return (-self.carrier_dim, self.anchor, self.vector, self.carrier_vertices)


@dataclass(frozen=True)
class TraceStep:
    phase: str  # "barycentric" | "minimal"
    centers: tuple[TraceCenter, ...]
    pdet: tuple[tuple[int, int], ...] | None  # invariant before the step

    def to_json(self) -> str:
        return json.dumps({
            "phase": self.phase,
            "centers": [{
                "anchor": c.anchor,
                "carrier_vertices": [[str(x) for x in v] for v in c.carrier_vertices],
                "vector": [str(x) for x in c.vector],
            } for c in self.centers],
            "pdet": None if self.pdet is None else [[d, n] for d, n in self.pdet],
        }, separators=(",", ":"))


@dataclass
class SubdivisionTrace:
    steps: list[TraceStep]

    def to_jsonl(self) -> str:
        return "\n".join(s.to_json() for s in self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)


def det_polynomial(k: ConicalComplex) -> dict[int, int]:
    """Histogram {det: count} over maximal faces, det >= 2 entries only.

    The stored generators are the minimal primitive set, so the vertex
    count against the dimension decides simpliciality directly.
    """
    out: dict[int, int] = {}
    for cid in k.maximal_ids():
        d = k.simplicial_det(cid)
        if d is None:
            raise NotSimplicial(f"maximal cone {cid} is not simplicial")
        if d > 1:
            out[d] = out.get(d, 0) + 1
    return out


def pdet_lt(a: dict[int, int], b: dict[int, int]) -> bool:
    """a < b in the lexicographic (leading coefficient) polynomial order."""
    for d in sorted(set(a) | set(b), reverse=True):
        ca, cb = a.get(d, 0), b.get(d, 0)
        if ca != cb:
            return ca < cb
    return False


def pdet_key(p: dict[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(p.items()))


def _maybe_pdet(k: ConicalComplex):
    try:
        return pdet_key(det_polynomial(k))
    except NotSimplicial:
        return None


def trace_center(k: ConicalComplex, c: StarCenter) -> TraceCenter:
    cc = k.cones[c.carrier]
    return TraceCenter(
        carrier_dim=cc.dim,
        anchor=cc.anchor,
        carrier_vertices=tuple(sorted(xl.mat_vec(cc.emb, w) for w in cc.verts)),
        vector=xl.mat_vec(cc.emb, c.vector))


def _make_step(k, phase, centers, pdet) -> TraceStep:
    tcs = sorted((trace_center(k, c) for c in centers), key=TraceCenter.sort_key)
    return TraceStep(phase=phase, centers=tuple(tcs), pdet=pdet)


def locate_carrier(k: ConicalComplex, cid: int, v_own) -> StarCenter:
    """The unique face holding the vector in its relative interior."""
    cone = k.standalone(cid)
    if cone.is_simplicial:
        # carrier = face spanned by the vertices with positive coefficient
        coeffs = dict(mkg.barycentric_coeffs(k, cid, v_own))
        wanted = frozenset(r for r, c in coeffs.items() if c > 0)
        for tau in k.face_ids(cid):
            if k.cones[tau].dim != len(wanted):
                continue
            if frozenset(r for r, _ in k.rays_of(tau)) == wanted:
                x = xl.solve_integral(k.face_matrix(tau, cid), v_own)
                assert x is not None and k.standalone(tau).interior_own(x)
                return StarCenter(tau, x)
        raise AssertionError(f"no face of cone {cid} spans rays {sorted(wanted)}")
    for tau in sorted(k.face_ids(cid), key=lambda t: (k.cones[t].dim, t)):
        if k.cones[tau].dim == 0:
            continue
        x = xl.solve_integral(k.face_matrix(tau, cid), v_own)
        if x is not None and k.standalone(tau).contains_own(x):
            assert k.standalone(tau).interior_own(x)
            return StarCenter(tau, x)
    raise AssertionError(f"vector {v_own} not carried by any face of cone {cid}")


def barycentric_phase(k: ConicalComplex):
    """Subdivide at the barycenters of all irreducible singular input faces.

    One sweep by decreasing dimension; every subdivided face is original
    (new faces are handled later by the minimal phase).  Returns the
    simplicial complex, the marking built per Lemma-style batches, and the
    trace steps.
    """
    mk = mkg.Marking()
    original = set(k.cones)
    cur = k
    steps: list[TraceStep] = []
    max_dim = max(c.dim for c in k.cones.values())
    for d in range(max_dim, 1, -1):
        targets = [c for c in sorted(cur.cones)
                   if c in original and cur.cones[c].dim == d
                   and cur.standalone(c).is_irreducible_singular]
        if not targets:
            continue
        centers = []
        for t in targets:
            b = cur.standalone(t).canonical_barycenter()
            centers.append(StarCenter(t, b))
        steps.append(_make_step(cur, "barycentric", centers, _maybe_pdet(cur)))
        zero = cur.zero_id
        cur, created = cur.star_subdivide(centers)
        mk.add_batch(created[i][zero] for i in range(len(centers)))
    return cur, mk, steps


def _candidate_pool(k: ConicalComplex, mk: mkg.Marking, singular_max,
                    selection_cache: dict):
    """Order-minimal small vector of every maximal singular face, by carrier.

    Selections are stable over a cone's lifetime (its rays and their ranks
    never change once created), so they are cached by cone id.
    """
    marked = mkg.MarkedComplex(k, mk)
    pool: dict[int, Vec] = {}
    for cid in sorted(singular_max):
        if cid in selection_cache:
            center = selection_cache[cid]
        else:
            v = mkg.minimal_small_vector(marked, cid)
            center = locate_carrier(k, cid, v)
            assert k.standalone(center.carrier).is_irreducible_singular, \
                "minimal-phase carrier must be irreducible singular"
            selection_cache[cid] = center
        if center.carrier in pool:
            assert pool[center.carrier] == center.vector, \
                "conflicting selections share a carrier face"
        else:
            pool[center.carrier] = center.vector
    return pool, marked


def _prune_dominated(k: ConicalComplex, marked: mkg.MarkedComplex, pool: dict[int, Vec]):
    """Drop candidates beaten by another candidate inside a shared cone.

    The survivors provably have pairwise disjoint stars: two of them inside
    one maximal cone would both have to be its unique order-minimal small
    vector.
    """
    items = sorted(pool.items())
    star_sets = {t: k.star(t) for t, _ in items}
    batch = []
    for t1, v1 in items:
        star1 = star_sets[t1]
        beaten = False
        for t2, v2 in items:
            if (t2, v2) == (t1, v1):
                continue
            shared = star1 & star_sets[t2]
            if not shared:
                continue
            sigma = min(shared)
            a = xl.mat_vec(k.face_matrix(t1, sigma), v1)
            b = xl.mat_vec(k.face_matrix(t2, sigma), v2)
            cmp = mkg.order_compare(marked, sigma, a, b)
            assert cmp in (mkg.Order.LT, mkg.Order.GT), \
                f"candidates in cone {sigma} must be strictly comparable"
            if cmp == mkg.Order.GT:
                beaten = True
                break
        if not beaten:
            batch.append(StarCenter(t1, v1))
    assert batch, "domination pruning emptied the candidate batch"
    return batch


def iteration_guard(p0: dict[int, int]) -> int:
    env = os.environ.get(GUARD_ENV)
    if env is not None:
        return int(env)
    return sum(d * n for d, n in p0.items())


def minimal_phase(k: ConicalComplex, mk: mkg.Marking):
    """Loop of multi-center subdivisions at order-minimal small vectors.

    The determinant histogram and the set of singular maximal cones are
    maintained incrementally: a batch only touches the stars of its
    centers.
    """
    cur = k
    steps: list[TraceStep] = []
    hist = det_polynomial(cur)
    guard = iteration_guard(hist)
    iters = 0
    selection_cache: dict[int, StarCenter] = {}
    singular_max = {cid for cid in cur.maximal_ids() if cur.simplicial_det(cid) != 1}
    while hist:
        p = dict(hist)
        pool, marked = _candidate_pool(cur, mk, singular_max, selection_cache)
        batch = _prune_dominated(cur, marked, pool)
        steps.append(_make_step(cur, "minimal", batch, pdet_key(p)))
        zero = cur.zero_id
        removed = set()
        for c in batch:
            removed |= cur.star(c.carrier)
        for rid in removed:
            if not cur._sups[rid]:
                d = cur.simplicial_det(rid)
                if d is not None and d > 1:
                    hist[d] -= 1
                    if not hist[d]:
                        del hist[d]
            singular_max.discard(rid)
            selection_cache.pop(rid, None)
        # the working complex is privately owned by the driver
        cur, created = cur.star_subdivide(batch, inplace=True)
        for i in range(len(batch)):
            for nid in created[i].values():
                if not cur._sups[nid]:
                    d = cur.simplicial_det(nid)
                    if d is None:
                        raise NotSimplicial(f"maximal cone {nid} is not simplicial")
                    if d > 1:
                        hist[d] = hist.get(d, 0) + 1
                        singular_max.add(nid)
        mk.add_batch(created[i][zero] for i in range(len(batch)))
        assert pdet_lt(hist, p), "determinant polynomial failed to drop"
        iters += 1
        if iters > guard:
            raise ResolutionGuardError(
                f"minimal phase exceeded {guard} batches; this is a bug")
    assert det_polynomial(cur) == hist == {}
    return cur, steps


def resolve(k: ConicalComplex) -> tuple[ConicalComplex, SubdivisionTrace]:
    """Canonical desingularization: output regular, trace records every batch."""
    cur, mk, steps = barycentric_phase(k)
    if cur is k:
        # give the minimal phase a private copy it may mutate
        cur, _ = k.star_subdivide([])
    cur, more = minimal_phase(cur, mk)
    assert det_polynomial(cur) == {}
    return cur, SubdivisionTrace(steps + more)


# -- functoriality -----------------------------------------------------------


def push_trace(f: ComplexMap, trace: SubdivisionTrace) -> SubdivisionTrace:
    """Transform the centers through a local isomorphism or projection.

    Centers whose carrier collapses under a projection are the trivial
    subdivisions and are removed.  The invariant histograms are left to be
    recomputed by replaying on the image complex.
    """
    kind, problems = f.check()
    if kind not in ("local_isomorphism", "regular_local_projection"):
        raise MapKindUnsupported(f"{kind}: {problems}")
    out = []
    for step in trace:
        centers = []
        for c in step.centers:
            m = f.mats[c.anchor]
            verts = [xl.mat_vec(m, v) for v in c.carrier_vertices]
            if len(xl.saturation_basis(verts)) < c.carrier_dim:
                continue  # carrier collapsed: trivial subdivision
            centers.append(TraceCenter(
                carrier_dim=c.carrier_dim,
                anchor=f.assignment[c.anchor],
                carrier_vertices=tuple(sorted(verts)),
                vector=xl.mat_vec(m, c.vector)))
        centers = sorted(set(centers), key=TraceCenter.sort_key)
        if centers:
            out.append(TraceStep(phase=step.phase, centers=tuple(centers), pdet=None))
    return SubdivisionTrace(out)


def replay_trace(k: ConicalComplex, trace: SubdivisionTrace):
    """Apply recorded centers to a complex, recomputing the invariants."""
    cur = k
    steps = []
    for step in trace:
        centers = []
        for tc in step.centers:
            carrier = _find_cone(cur, tc)
            v = xl.solve_integral(cur.cones[carrier].emb, tc.vector)
            assert v is not None
            centers.append(StarCenter(carrier, v))
        steps.append(_make_step(cur, step.phase, centers, _maybe_pdet(cur)))
        cur, _ = cur.star_subdivide(centers)
    return cur, SubdivisionTrace(steps)


def _find_cone(k: ConicalComplex, tc: TraceCenter) -> int:
    hits = []
    for cid, cc in k.cones.items():
        if cc.anchor != tc.anchor or cc.dim != tc.carrier_dim:
            continue
        verts = tuple(sorted(xl.mat_vec(cc.emb, w) for w in cc.verts))
        if verts == tc.carrier_vertices:
            hits.append(cid)
    assert len(hits) == 1, f"trace center {tc} matches cones {hits}"
    return hits[0]


def complex_signature(k: ConicalComplex):
    """Canonical value for comparing complexes up to id relabeling."""
    sig = []
    for cid in k.maximal_ids():
        cc = k.cones[cid]
        sig.append((cc.anchor, tuple(sorted(xl.mat_vec(cc.emb, v) for v in cc.verts))))
    return tuple(sorted(sig))
