"""The bundled fixture corpus: builders shared by tests, scripts and docs.

Everything returns live objects; `document` assembles the JSON-serializable
form the CLI consumes (complex plus optional omega / marking / map blocks).
"""

from __future__ import annotations

import random
from math import gcd

from . import exactlin as xl
from .complexes import (CCone, ComplexMap, ConicalComplex, complex_to_doc,
                        fan_complex, single_cone_complex)
from .relative import RelativeComplex

EVEN_SUM_BASIS = [(1, 1, 0), (0, 1, 1), (0, 0, 2)]
ABRAMOVICH_GENS = [(1, 1, 0), (1, 0, 1), (0, 1, 1), (2, 0, 0), (0, 2, 0), (0, 0, 2)]


def regular_fan():
    """Two regular 2D cones around the vertical axis."""
    return fan_complex([[(1, 0), (0, 1)], [(0, 1), (-1, 0)]])


def an_cone(n: int) -> ConicalComplex:
    """The det-n cone <(1,0),(1,n)> (the A_{n-1} surface singularity)."""
    return single_cone_complex([(1, 0), (1, n)])


def quotient_cone(r: int, a: int) -> ConicalComplex:
    """The 1/r(1,a) cyclic quotient: quadrant over Z^2 + Z*(1,a)/r.

    Modeled with ambient coordinates scaled by r, so the lattice basis is
    (1,a),(0,r) and the quadrant rays become (r,0),(0,r).
    """
    assert gcd(a, r) == 1
    return single_cone_complex([(r, 0), (0, r)], lattice_basis=[(1, a), (0, r)])


def abramovich_cone() -> ConicalComplex:
    return single_cone_complex(ABRAMOVICH_GENS, lattice_basis=EVEN_SUM_BASIS)


def amb_vertex_lookup(k: ConicalComplex) -> dict:
    out = {}
    for cid, cc in k.cones.items():
        key = tuple(sorted(xl.mat_vec(cc.amb, v) for v in cc.verts))
        out[key] = cid
    return out


def obstruction_pair() -> RelativeComplex:
    """Abramovich cone with omega = <(2,0,0),(0,2,0)>, ordered vertices."""
    k = abramovich_cone()
    lookup = amb_vertex_lookup(k)
    omega = lookup[((0, 2, 0), (2, 0, 0))]
    r200 = lookup[((2, 0, 0),)]
    r020 = lookup[((0, 2, 0),)]
    ids = frozenset({k.zero_id, r200, r020, omega})
    return RelativeComplex(k, ids, {r200: 0, r020: 1})


def glued_three_cone() -> ConicalComplex:
    """Three 2D pages glued along one shared ray with nontrivial face maps.

    The shared ray embeds as the (1,0)-ray of the first page, the (1,2)-ray
    of the second and the (2,3)-ray of the third; there is no common
    ambient space.
    """
    zero = CCone(0, 0, (), 0, ())
    spine = CCone(1, 1, ((1,),), 1, ((1,),))
    edge_a = CCone(2, 1, ((1,),), 2, ((1,),))
    edge_b = CCone(3, 1, ((1,),), 3, ((1,),))
    edge_c = CCone(4, 1, ((1,),), 4, ((1,),))
    page_a = CCone(5, 2, ((0, 1), (1, 0)), 5, xl.identity(2))
    page_b = CCone(6, 2, ((0, 1), (1, 2)), 6, xl.identity(2))
    page_c = CCone(7, 2, ((0, 1), (2, 3)), 7, xl.identity(2))
    mats = {
        (0, 1): ((),), (0, 2): ((),), (0, 3): ((),), (0, 4): ((),),
        (0, 5): ((), ()), (0, 6): ((), ()), (0, 7): ((), ()),
        (1, 5): ((1,), (0,)), (2, 5): ((0,), (1,)),
        (1, 6): ((1,), (2,)), (3, 6): ((0,), (1,)),
        (1, 7): ((2,), (3,)), (4, 7): ((0,), (1,)),
    }
    cones = {c.cid: c for c in [zero, spine, edge_a, edge_b, edge_c,
                                page_a, page_b, page_c]}
    return ConicalComplex(cones, mats)


def random_simplicial_3d(rng: random.Random):
    """Generators of a random simplicial 3D cone, entries in [0,5]."""
    while True:
        cand = [tuple(rng.randint(0, 5) for _ in range(3)) for _ in range(3)]
        if any(not any(v) for v in cand):
            continue
        if xl.det(xl.mat(cand)) == 0:
            continue
        return [tuple(col) for col in xl.matrix_columns(xl.transpose(xl.mat(cand)))]


def random_corpus(seed=20260809, count=100):
    rng = random.Random(seed)
    return [random_simplicial_3d(rng) for _ in range(count)]


def unimodular_matrix(rng: random.Random, n: int):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(8):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        q = rng.randint(-2, 2)
        for col in range(n):
            m[i][col] += q * m[j][col]
    return xl.mat(m)


def conjugated_fan_map(k: ConicalComplex, u) -> tuple[ConicalComplex, ComplexMap]:
    """The fan transformed by a unimodular map, with the matching ComplexMap."""
    tops = k.maximal_ids()
    gens = []
    for t in tops:
        cc = k.cones[t]
        gens.append([xl.mat_vec(u, xl.mat_vec(cc.amb, v)) for v in cc.verts])
    ku = fan_complex(gens)
    lookup = amb_vertex_lookup(ku)
    assignment, mats = {}, {}
    for cid, cc in k.cones.items():
        img = tuple(sorted(xl.mat_vec(u, xl.mat_vec(cc.amb, v)) for v in cc.verts))
        did = lookup[img]
        assignment[cid] = did
        dcone = ku.cones[did]
        if dcone.dim == 0:
            mats[cid] = ()
            continue
        lift = xl.mat_mul(u, cc.amb)
        cols = [xl.solve_integral(dcone.amb, col) for col in xl.matrix_columns(lift)]
        mats[cid] = xl.columns_matrix(cols) if cc.dim else tuple(() for _ in range(dcone.dim))
    return ku, ComplexMap(k, ku, assignment, mats)


def product_projection_map(sing_gens, lattice_basis=None):
    """(product-with-a-regular-ray complex, base complex, projection map)."""
    base = single_cone_complex(sing_gens, lattice_basis=lattice_basis)
    n = len(sing_gens[0])
    prod_gens = [tuple(g) + (0,) for g in sing_gens] + [tuple([0] * n) + (1,)]
    basis3 = None
    if lattice_basis is not None:
        basis3 = [tuple(b) + (0,) for b in lattice_basis] + [tuple([0] * n) + (1,)]
    prod = single_cone_complex(prod_gens, lattice_basis=basis3)
    proj = tuple(tuple(1 if i == j else 0 for j in range(n + 1)) for i in range(n))
    lookup = amb_vertex_lookup(base)
    assignment, mats = {}, {}
    for cid, cc in prod.cones.items():
        imgs = [xl.mat_vec(proj, xl.mat_vec(cc.amb, v)) for v in cc.verts]
        imgs = sorted({xl.primitivize(v) for v in imgs if any(v)})
        did = lookup[tuple(imgs)]
        assignment[cid] = did
        dcone = base.cones[did]
        if dcone.dim == 0:
            mats[cid] = ()
            continue
        lift = xl.mat_mul(proj, cc.amb)
        cols = [xl.solve_integral(dcone.amb, col) for col in xl.matrix_columns(lift)]
        mats[cid] = xl.columns_matrix(cols) if cc.dim else tuple(() for _ in range(dcone.dim))
    return prod, base, ComplexMap(prod, base, assignment, mats)


def identity_map(k: ConicalComplex) -> ComplexMap:
    return ComplexMap(k, k, {c: c for c in k.cones},
                      {c: xl.identity(k.cones[c].dim) for c in k.cones})


# -- document assembly -----------------------------------------------------------


def document(k: ConicalComplex, omega=None, omega_order=None,
             marked=None) -> dict:
    doc = complex_to_doc(k)
    if omega is not None:
        doc["omega"] = sorted(omega)
        doc["omega_order"] = [{"vertex_id": rid, "rank": rank}
                              for rid, rank in sorted((omega_order or {}).items())]
    if marked is not None:
        doc["marked"] = [{"vertex_id": rid, "rank": rank}
                         for rid, rank in sorted(marked.items())]
    return doc


def map_document(f: ComplexMap) -> dict:
    from .complexes import _str_mat_rows
    return {
        "schema_version": 1,
        "source": complex_to_doc(f.src),
        "target": complex_to_doc(f.dst),
        "map": {"assignments": [
            {"src": cid, "dst": f.assignment[cid],
             "matrix": _str_mat_rows(f.mats[cid])}
            for cid in sorted(f.assignment)]},
    }


def corpus_documents() -> dict[str, dict]:
    """Name -> document for every bundled fixture file."""
    out = {"regular_fan": document(regular_fan())}
    for n in range(2, 11):
        out[f"an_cone_{n}"] = document(an_cone(n))
    for r in range(2, 8):
        for a in range(1, r):
            if gcd(a, r) == 1:
                out[f"quotient_{r}_{a}"] = document(quotient_cone(r, a))
    out["abramovich"] = document(abramovich_cone())
    rk = obstruction_pair()
    out["obstruction"] = document(rk.complex, omega=rk.omega_ids,
                                  omega_order=rk.omega_order)
    out["glued_three"] = document(glued_three_cone())
    k3 = an_cone(3)
    out["identity_map"] = map_document(identity_map(k3))
    rng = random.Random(7)
    ku, f = conjugated_fan_map(k3, unimodular_matrix(rng, 2))
    out["relabel_map"] = map_document(f)
    prod, base, p = product_projection_map([(1, 0), (1, 2)])
    out["projection_map"] = map_document(p)
    return out
