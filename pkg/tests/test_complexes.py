import random

import pytest

from fanforge import exactlin as xl
from fanforge.complexes import (
    CCone, ComplexMap, ConicalComplex, NotFaceClosed, NotInterior,
    NotPrimitive, StarCenter, StarsNotDisjoint, fan_complex,
    single_cone_complex)


def quadrant():
    return single_cone_complex([(1, 0), (0, 1)])


def a_cone(n):
    return single_cone_complex([(1, 0), (1, n)])


def cone3d():
    return single_cone_complex([(1, 0, 0), (0, 1, 0), (0, 0, 1)])


def top_id(k):
    return max(k.cones, key=lambda c: (k.cones[c].dim, c))


def test_fan_complex_quadrant_structure():
    k = quadrant()
    assert len(k.cones) == 4
    assert sorted(c.dim for c in k.cones.values()) == [0, 1, 1, 2]
    assert k.validate() == []


def test_star_link_examples():
    k = quadrant()
    zero = k.zero_id
    assert k.star(zero) == set(k.cones)
    ray = next(c for c, cc in k.cones.items()
               if cc.dim == 1 and k.cones[c].amb == ((1,), (0,)))
    two = top_id(k)
    assert k.star(ray) == {ray, two}
    assert k.link(ray) == set(k.cones) - {ray, two}
    assert k.star(two) == {two}
    assert len(k.link(two)) == 3


def test_validate_detects_broken_saturation():
    # ray Z -> Z glued into a 1D "super" ray by multiplication by 2
    cones = {
        0: CCone(0, 0, (), 0, ()),
        1: CCone(1, 1, ((1,),), 1, ((1,),)),
        2: CCone(2, 1, ((1,),), 2, ((1,),)),
    }
    mats = {(0, 1): ((),), (0, 2): ((),), (1, 2): ((2,),)}
    k = ConicalComplex(cones, mats)
    clauses = {v.clause for v in k.validate()}
    assert "saturation" in clauses


def test_validate_detects_composition_failure():
    k = a_cone(2)
    ray = next(c for c, cc in k.cones.items()
               if cc.dim == 1 and cc.amb == ((1,), (0,)))
    two = top_id(k)
    mats = dict(k.face_mats)
    # wrong ray image: send the (1,0) ray onto the (1,2) ray
    mats[(ray, two)] = ((1,), (2,))
    broken = ConicalComplex(dict(k.cones), mats)
    clauses = {v.clause for v in broken.validate()}
    assert clauses & {"composition", "face_coverage"}


def test_subcomplex_rays_plus_origin():
    k = quadrant()
    ids = [c for c, cc in k.cones.items() if cc.dim <= 1]
    assert k.is_subcomplex(ids)
    sub = k.subcomplex(ids)
    assert len(sub.cones) == 3
    assert not k.is_subcomplex([top_id(k)])
    with pytest.raises(NotFaceClosed):
        k.subcomplex([top_id(k)])


def test_sing_set():
    reg = quadrant()
    sing, closure, regs = reg.sing_set()
    assert sing == []
    assert set(regs) == set(reg.cones)

    k = a_cone(2)
    sing, closure, regs = k.sing_set()
    assert sing == [top_id(k)]
    assert set(closure) == set(k.cones)
    assert set(regs) == set(k.cones) - {top_id(k)}

    prod = single_cone_complex([(1, 0, 0), (1, 2, 0), (0, 0, 1)])
    sing, _, _ = prod.sing_set()
    assert len(sing) == 1
    assert prod.cones[sing[0]].dim == 2


def test_star_subdivide_3d_interior_center():
    k = cone3d()
    top = top_id(k)
    k2, created = k.star_subdivide([StarCenter(top, (1, 1, 1))])
    assert k2.validate() == []
    maximal = [c for c in k2.maximal_ids() if k2.cones[c].dim == 3]
    assert len(maximal) == 3
    # new vertices are exactly the center ray
    new_rays = [c for c in k2.cones.values() if c.dim == 1 and c.cid not in k.cones]
    assert len(new_rays) == 1


def test_star_subdivide_a2_dets():
    k = a_cone(2)
    top = top_id(k)
    k2, _ = k.star_subdivide([StarCenter(top, (1, 1))])
    assert k2.validate() == []
    tops = [c for c in k2.maximal_ids()]
    dets = sorted(k2.standalone(c).det_simplicial() for c in tops)
    assert dets == [1, 1]


def test_star_subdivide_ray_identity():
    k = a_cone(2)
    ray = next(c for c, cc in k.cones.items() if cc.dim == 1 and cc.amb == ((1,), (0,)))
    k2, _ = k.star_subdivide([StarCenter(ray, (1,))])
    assert k2.validate() == []
    assert len(k2.cones) == len(k.cones)
    tops = k2.maximal_ids()
    assert len(tops) == 1
    assert sorted(k2.standalone(tops[0]).vertices()) == [(1, 0), (1, 2)]


def test_star_subdivide_errors():
    k = a_cone(2)
    top = top_id(k)
    with pytest.raises(NotPrimitive):
        k.star_subdivide([StarCenter(top, (2, 2))])
    with pytest.raises(NotInterior):
        k.star_subdivide([StarCenter(top, (1, 0))])
    ray = next(c for c, cc in k.cones.items() if cc.dim == 1)
    with pytest.raises(StarsNotDisjoint):
        k.star_subdivide([StarCenter(top, (1, 1)), StarCenter(ray, (1,))])


def test_multi_center_order_independence():
    # two singular 2D cones glued along a ray; subdivide both at once
    k = fan_complex([[(1, 0), (1, 2)], [(1, 2), (1, 4)]])
    tops = [c for c in k.maximal_ids()]
    c1 = StarCenter(tops[0], k.standalone(tops[0]).minimal_vectors()[0])
    c2 = StarCenter(tops[1], k.standalone(tops[1]).minimal_vectors()[0])
    k12, _ = k.star_subdivide([c1, c2])
    k21, _ = k.star_subdivide([c2, c1])
    sig12 = sorted(tuple(sorted(map(tuple, k12.cones[c].amb and
                                    [xl.mat_vec(k12.cones[c].amb, v) for v in k12.cones[c].verts])))
                   for c in k12.maximal_ids())
    sig21 = sorted(tuple(sorted(map(tuple, k21.cones[c].amb and
                                    [xl.mat_vec(k21.cones[c].amb, v) for v in k21.cones[c].verts])))
                   for c in k21.maximal_ids())
    assert sig12 == sig21
    assert k12.validate() == []


def test_subdivision_preserves_support_sampling():
    rng = random.Random(7)
    k = a_cone(3)
    top = top_id(k)
    k2, _ = k.star_subdivide([StarCenter(top, (1, 1))])
    for _ in range(200):
        pt = (rng.randint(-3, 6), rng.randint(-3, 6))
        assert k.contains_point(top, pt) == k2.contains_point(top, pt, original=k)


def test_random_single_center_subdivisions_validate():
    rng = random.Random(11)
    for _ in range(20):
        verts = None
        while verts is None:
            cand = [tuple(rng.randint(0, 4) for _ in range(3)) for _ in range(3)]
            m = xl.mat(cand)
            if xl.det(m) != 0:
                verts = [tuple(c) for c in xl.matrix_columns(xl.transpose(m))]
        k = single_cone_complex(verts)
        top = top_id(k)
        cone = k.standalone(top)
        smalls = [v for v in cone._own_small_vectors() if cone.interior_own(v)]
        if not smalls:
            continue
        v = xl.primitivize(smalls[rng.randrange(len(smalls))])
        k2, _ = k.star_subdivide([StarCenter(top, v)])
        assert k2.validate() == []


def test_check_map_identity_is_local_isomorphism():
    k = a_cone(2)
    f = ComplexMap(k, k, {c: c for c in k.cones},
                   {c: xl.identity(k.cones[c].dim) for c in k.cones})
    kind, problems = f.check()
    assert kind == "local_isomorphism" and problems == []


def test_check_map_projection():
    prod = single_cone_complex([(1, 0, 0), (1, 2, 0), (0, 0, 1)])
    base = single_cone_complex([(1, 0), (1, 2)])
    proj = ((1, 0, 0), (0, 1, 0))
    assignment = {}
    mats = {}
    base_by_verts = {}
    for c, cc in base.cones.items():
        key = tuple(sorted(xl.mat_vec(cc.amb, v) for v in cc.verts)) if cc.dim else ()
        base_by_verts[key] = c
    for c, cc in prod.cones.items():
        amb_verts = [xl.mat_vec(cc.amb, v) for v in cc.verts]
        img = [xl.mat_vec(proj, v) for v in amb_verts]
        img = [v for v in img if any(v)]
        img = sorted({tuple(x // xl.vec_gcd(v) for x in v) for v in img})
        target = base_by_verts[tuple(img)]
        assignment[c] = target
        tcone = base.cones[target]
        lift = xl.mat_mul(proj, cc.amb)
        m = []
        if tcone.dim:
            sol_cols = []
            for col in xl.matrix_columns(lift):
                sol = xl.solve_integral(tcone.amb, col)
                sol_cols.append(sol)
            m = xl.columns_matrix(sol_cols)
        else:
            m = tuple(() for _ in range(0))
        mats[c] = xl.mat(m) if tcone.dim else tuple()
        if tcone.dim == 0:
            mats[c] = tuple()
    # zero-dim matrices need explicit empty-row shape
    for c, cc in prod.cones.items():
        t = base.cones[assignment[c]]
        if t.dim == 0:
            mats[c] = tuple()
        if t.dim > 0 and cc.dim == 0:
            mats[c] = tuple(() for _ in range(t.dim))
    f = ComplexMap(prod, base, assignment, mats)
    kind, problems = f.check()
    assert kind == "regular_local_projection", problems


def test_check_map_collapse_is_invalid():
    ray = single_cone_complex([(1,)])
    ray_top = next(c for c, cc in ray.cones.items() if cc.dim == 1)
    # ray squashed by the zero matrix into a positive-dimensional cone
    f = ComplexMap(ray, ray,
                   {ray.zero_id: ray.zero_id, ray_top: ray_top},
                   {ray.zero_id: tuple(), ray_top: ((0,),)})
    kind, problems = f.check()
    assert kind == "invalid"
    assert any("interior" in p for p in problems)
