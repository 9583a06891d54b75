import json
import random

import pytest

from fanforge import exactlin as xl
from fanforge.complexes import ComplexMap, fan_complex, single_cone_complex
from fanforge.resolve import (
    MapKindUnsupported, complex_signature, det_polynomial, pdet_lt,
    push_trace, replay_trace, resolve)

EVEN = [(1, 1, 0), (0, 1, 1), (0, 0, 2)]
ABR = [(1, 1, 0), (1, 0, 1), (0, 1, 1), (2, 0, 0), (0, 2, 0), (0, 0, 2)]


def amb_verts(k, cid):
    cc = k.cones[cid]
    return sorted(xl.mat_vec(cc.amb, v) for v in cc.verts)


def test_det_polynomial():
    assert det_polynomial(single_cone_complex([(1, 0), (0, 1)])) == {}
    assert det_polynomial(single_cone_complex([(1, 0), (1, 3)])) == {3: 1}
    two = fan_complex([[(1, 0), (1, 2)], [(1, 2), (1, 4)]])
    assert det_polynomial(two) == {2: 2}


def test_pdet_lex_order():
    assert pdet_lt({}, {2: 1})
    assert pdet_lt({2: 5}, {3: 1})
    assert pdet_lt({3: 1, 2: 7}, {3: 2})
    assert not pdet_lt({3: 1}, {3: 1})
    assert not pdet_lt({4: 1}, {3: 9})


def test_resolve_regular_identity():
    k = single_cone_complex([(1, 0), (0, 1)])
    out, trace = resolve(k)
    assert len(trace) == 0
    assert complex_signature(out) == complex_signature(k)


def test_resolve_a1_barycentric_only():
    k = single_cone_complex([(1, 0), (1, 2)])
    out, trace = resolve(k)
    phases = [s.phase for s in trace]
    assert phases == ["barycentric"]
    assert trace.steps[0].centers[0].vector == (1, 1)
    assert det_polynomial(out) == {}


def test_resolve_a3_pipeline():
    k = single_cone_complex([(1, 0), (1, 3)])
    out, trace = resolve(k)
    assert [s.phase for s in trace] == ["barycentric", "minimal"]
    assert trace.steps[0].centers[0].vector == (2, 3)
    minimal_vecs = sorted(c.vector for c in trace.steps[1].centers)
    assert minimal_vecs == [(1, 1), (1, 2)]
    assert det_polynomial(out) == {}
    assert len(out.maximal_ids()) == 4


def test_resolve_an_family_regular_output():
    for n in range(2, 11):
        k = single_cone_complex([(1, 0), (1, n)])
        out, trace = resolve(k)
        assert det_polynomial(out) == {}
        assert out.validate() == []


def test_resolve_abramovich():
    k = single_cone_complex(ABR, lattice_basis=EVEN)
    out, trace = resolve(k)
    assert det_polynomial(out) == {}
    assert trace.steps[0].phase == "barycentric"
    first = trace.steps[0].centers[0]
    amb = xl.mat_mul(k.cones[_top(k)].amb, xl.identity(3))
    assert xl.mat_vec(k.cones[_top(k)].emb, (0, 0, 0)) == (0, 0, 0)
    # ambient value of the first center is (2,2,2)
    assert xl.mat_vec(k.cones[first.anchor].amb,
                      xl.solve_integral(k.cones[first.anchor].emb, first.vector)) == (2, 2, 2)
    # the second barycentric step hits the three 2D faces
    dim2 = trace.steps[1]
    assert dim2.phase == "barycentric"
    ambient_centers = set()
    for c in dim2.centers:
        own = xl.solve_integral(k.cones[c.anchor].emb, c.vector)
        ambient_centers.add(xl.mat_vec(k.cones[c.anchor].amb, own))
    assert ambient_centers == {(1, 1, 0), (1, 0, 1), (0, 1, 1)}
    # the input vertices survive as rays
    rays = {tuple(xl.mat_vec(cc.amb, (1,))) for cc in out.cones.values() if cc.dim == 1}
    assert {(2, 0, 0), (0, 2, 0), (0, 0, 2)} <= rays


def _top(k):
    return max(k.cones, key=lambda c: (k.cones[c].dim, c))


def test_regular_faces_untouched():
    k = fan_complex([[(1, 0), (1, 2)], [(1, 2), (0, 1)]])
    regular_ids = [c for c in k.cones if k.standalone(c).is_regular]
    out, _ = resolve(k)
    for c in regular_ids:
        assert c in out.cones
        assert out.cones[c] == k.cones[c]


def test_pdet_strictly_decreases_along_trace():
    k = single_cone_complex([(1, 0), (1, 7)])
    out, trace = resolve(k)
    minimal_pdets = [dict(s.pdet) for s in trace if s.phase == "minimal"]
    for a, b in zip(minimal_pdets[1:], minimal_pdets):
        assert pdet_lt(a, b)


def test_determinism_byte_identical():
    k1 = single_cone_complex(ABR, lattice_basis=EVEN)
    k2 = single_cone_complex(ABR, lattice_basis=EVEN)
    t1 = resolve(k1)[1].to_jsonl()
    t2 = resolve(k2)[1].to_jsonl()
    assert t1 == t2


def test_support_preserved_sampling():
    rng = random.Random(3)
    for gens in [[(1, 0), (1, 4)], [(2, 1), (1, 3)]]:
        k = single_cone_complex(gens)
        top = _top(k)
        out, _ = resolve(k)
        for _ in range(300):
            pt = (rng.randint(-4, 8), rng.randint(-4, 8))
            assert k.contains_point(top, pt) == out.contains_point(top, pt, original=k)


def unimodular(rng, n):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(6):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        q = rng.randint(-2, 2)
        for col in range(n):
            m[i][col] += q * m[j][col]
    return xl.mat(m)


def conjugate_map(k, u):
    gens_by_cone = {}
    ku_gens = []
    # rebuild the fan with transformed generators
    tops = [c for c in k.maximal_ids()]
    for t in tops:
        cc = k.cones[t]
        ku_gens.append([xl.mat_vec(u, xl.mat_vec(cc.amb, v)) for v in cc.verts])
    ku = fan_complex(ku_gens)
    # match cones by transformed ambient vertex sets
    by_verts = {}
    for cid, cc in ku.cones.items():
        key = tuple(sorted(xl.mat_vec(cc.amb, v) for v in cc.verts))
        by_verts[key] = cid
    assignment, mats = {}, {}
    for cid, cc in k.cones.items():
        image_verts = tuple(sorted(xl.mat_vec(u, xl.mat_vec(cc.amb, v)) for v in cc.verts))
        did = by_verts[image_verts]
        assignment[cid] = did
        dcone = ku.cones[did]
        lift = xl.mat_mul(u, cc.amb)
        cols = [xl.solve_integral(dcone.amb, col) for col in xl.matrix_columns(lift)]
        mats[cid] = xl.columns_matrix(cols) if cc.dim else tuple(() for _ in range(dcone.dim)) if dcone.dim else ()
        if dcone.dim == 0:
            mats[cid] = ()
    return ku, ComplexMap(k, ku, assignment, mats)


@pytest.mark.parametrize("gens", [[(1, 0), (1, 3)], [(1, 0), (2, 5)],
                                  [(1, 0, 0), (0, 1, 0), (1, 1, 2)]])
def test_functoriality_unimodular(gens):
    rng = random.Random(hash(tuple(map(tuple, gens))) % 10**6)
    k = single_cone_complex(gens)
    for _ in range(5):
        u = unimodular(rng, len(gens[0]))
        ku, f = conjugate_map(k, u)
        kind, problems = f.check()
        assert kind == "local_isomorphism", problems
        out_k, trace_k = resolve(k)
        out_u, trace_u = resolve(ku)
        pushed = push_trace(f, trace_k)
        replay_out, replay_tr = replay_trace(ku, pushed)
        assert replay_tr.to_jsonl() == trace_u.to_jsonl()
        assert complex_signature(replay_out) == complex_signature(out_u)


def test_functoriality_projection():
    prod = single_cone_complex([(1, 0, 0), (1, 2, 0), (0, 0, 1)])
    base = single_cone_complex([(1, 0), (1, 2)])
    # projection onto the singular factor
    proj = ((1, 0, 0), (0, 1, 0))
    by_verts = {}
    for cid, cc in base.cones.items():
        key = tuple(sorted(xl.mat_vec(cc.amb, v) for v in cc.verts))
        by_verts[key] = cid
    assignment, mats = {}, {}
    for cid, cc in prod.cones.items():
        imgs = [xl.mat_vec(proj, xl.mat_vec(cc.amb, v)) for v in cc.verts]
        imgs = sorted({xl.primitivize(v) for v in imgs if any(v)})
        did = by_verts[tuple(imgs)]
        assignment[cid] = did
        dcone = base.cones[did]
        if dcone.dim == 0:
            mats[cid] = ()
        else:
            lift = xl.mat_mul(proj, cc.amb)
            cols = [xl.solve_integral(dcone.amb, col) for col in xl.matrix_columns(lift)]
            mats[cid] = xl.columns_matrix(cols)
    f = ComplexMap(prod, base, assignment, mats)
    kind, problems = f.check()
    assert kind == "regular_local_projection", problems
    out_p, trace_p = resolve(prod)
    out_b, trace_b = resolve(base)
    pushed = push_trace(f, trace_p)
    replay_out, replay_tr = replay_trace(base, pushed)
    assert replay_tr.to_jsonl() == trace_b.to_jsonl()
    assert complex_signature(replay_out) == complex_signature(out_b)


def test_push_trace_requires_good_map_kind():
    k = single_cone_complex([(1, 0), (1, 2)])
    _, trace = resolve(k)
    bad = ComplexMap(k, k, {}, {})
    with pytest.raises(MapKindUnsupported):
        push_trace(bad, trace)


def test_trace_json_shape():
    k = single_cone_complex([(1, 0), (1, 3)])
    _, trace = resolve(k)
    lines = trace.to_jsonl().splitlines()
    for line in lines:
        step = json.loads(line)
        assert set(step) == {"phase", "centers", "pdet"}
        for c in step["centers"]:
            assert set(c) == {"anchor", "carrier_vertices", "vector"}
            assert all(isinstance(x, str) for x in c["vector"])


def test_resolve_nonsimplicial_input():
    k = single_cone_complex([(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)])
    out, trace = resolve(k)
    assert det_polynomial(out) == {}
    assert out.validate() == []
    assert [s.phase for s in trace] == ["barycentric"]
    assert len(out.maximal_ids()) == 4


def test_resolve_random_3d_cones():
    rng = random.Random(17)
    done = 0
    while done < 15:
        cand = [tuple(rng.randint(0, 5) for _ in range(3)) for _ in range(3)]
        if xl.det(xl.mat(cand)) == 0 or any(not any(v) for v in cand):
            continue
        k = single_cone_complex([tuple(col) for col in xl.matrix_columns(xl.transpose(xl.mat(cand)))])
        out, _ = resolve(k)
        assert det_polynomial(out) == {}
        done += 1
