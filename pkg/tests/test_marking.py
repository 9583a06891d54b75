from fractions import Fraction

import pytest

from fanforge import exactlin as xl
from fanforge.complexes import StarCenter, single_cone_complex
from fanforge.marking import (
    Marking, MarkedComplex, NoSmallVectors, Order, UniquenessViolated,
    marked_key, minimal_small_vector, order_compare, project,
    validate_marking)


def marked_cone(gens, marked_amb_rays, ranks=None):
    """Single-cone complex with the given ambient rays marked."""
    k = single_cone_complex(gens)
    mk = Marking()
    wanted = [tuple(r) for r in marked_amb_rays]
    by_vert = {}
    for cid, cc in k.cones.items():
        if cc.dim == 1:
            by_vert[tuple(xl.mat_vec(cc.amb, (1,)))] = cid
    for i, r in enumerate(wanted):
        mk.ranks[by_vert[r]] = ranks[i] if ranks else i
    return k, mk, max(k.cones, key=lambda c: k.cones[c].dim)


def test_project_unmarked_face_is_empty():
    k, mk, top = marked_cone([(1, 0), (0, 1)], [])
    assert project(MarkedComplex(k, mk), top, (2, 3)) == {}


def test_project_fully_marked():
    k, mk, top = marked_cone([(1, 0), (0, 1)], [(1, 0), (0, 1)])
    proj = project(MarkedComplex(k, mk), top, (2, 3))
    assert sorted(proj.values()) == [2, 3]


def test_project_partially_marked_drops_unmarked():
    k, mk, top = marked_cone([(1, 0), (0, 1)], [(0, 1)])
    proj = project(MarkedComplex(k, mk), top, (1, 2))
    assert list(proj.values()) == [2]


def test_order_compare_stated_rule():
    # marked w1 < w2; 2w1+3w2 vs 3w1+2w2: difference -w1+w2 with w2 > w1
    k, mk, top = marked_cone([(1, 0), (0, 1)], [(1, 0), (0, 1)])
    m = MarkedComplex(k, mk)
    assert order_compare(m, top, (2, 3), (3, 2)) == Order.GT
    assert order_compare(m, top, (3, 2), (2, 3)) == Order.LT


def test_order_compare_lexicographic_on_complete_marking():
    k, mk, top = marked_cone([(1, 0), (0, 1)], [(1, 0), (0, 1)])
    m = MarkedComplex(k, mk)
    # w2-coefficient dominates: (0,1) > (1,0)
    assert order_compare(m, top, (0, 1), (1, 0)) == Order.GT


def test_order_compare_eq_proj():
    k, mk, top = marked_cone([(1, 0), (0, 1)], [(0, 1)])
    m = MarkedComplex(k, mk)
    assert order_compare(m, top, (1, 1), (5, 1)) == Order.EQ_PROJ


def test_minimal_small_vector_examples():
    k, mk, top = marked_cone([(1, 0), (2, 3)], [(2, 3)])
    assert minimal_small_vector(MarkedComplex(k, mk), top) == (1, 1)

    k, mk, top = marked_cone([(1, 0), (1, 3)], [(1, 3)])
    assert minimal_small_vector(MarkedComplex(k, mk), top) == (1, 1)


def test_minimal_small_vector_regular_raises():
    k, mk, top = marked_cone([(1, 0), (0, 1)], [(0, 1)])
    with pytest.raises(NoSmallVectors):
        minimal_small_vector(MarkedComplex(k, mk), top)


def test_minimal_small_vector_unmarked_singular_ties():
    # det-3 cone with nothing marked: keys are empty tuples, tie detected
    k, mk, top = marked_cone([(1, 0), (1, 3)], [])
    with pytest.raises(UniquenessViolated):
        minimal_small_vector(MarkedComplex(k, mk), top)


def test_marked_key_orders_by_descending_rank():
    k, mk, top = marked_cone([(1, 0), (0, 1)], [(1, 0), (0, 1)], ranks=[5, 2])
    m = MarkedComplex(k, mk)
    # rank((1,0)) = 5 dominates: key lists its coefficient first
    assert marked_key(m, top, (1, 2)) == (Fraction(1), Fraction(2))


def test_extend_marking_batches_and_validity():
    k = single_cone_complex([(1, 0), (1, 3)])
    top = max(k.cones, key=lambda c: k.cones[c].dim)
    mk = Marking()
    zero = k.zero_id
    k2, created = k.star_subdivide([StarCenter(top, (2, 3))])
    mk.add_batch([created[0][zero]])
    validate_marking(MarkedComplex(k2, mk))
    assert mk.ranks[created[0][zero]] == 0
    tops = k2.maximal_ids()
    k3, created2 = k2.star_subdivide(
        [StarCenter(t, minimal_small_vector(MarkedComplex(k2, mk), t)) for t in tops])
    mk.add_batch(created2[i][k2.zero_id] for i in range(2))
    validate_marking(MarkedComplex(k3, mk))
    # same-batch vertices share a rank but never a face
    ranks = [mk.ranks[r] for r in mk.ranks]
    assert sorted(ranks) == [0, 1, 1]


def test_order_compare_invariant_under_relabeling():
    u = ((1, 2), (0, 1))
    gens = [(1, 0), (1, 3)]
    k, mk, top = marked_cone(gens, [(1, 3)])
    ku, mku, topu = marked_cone([xl.mat_vec(u, g) for g in gens],
                                [xl.mat_vec(u, (1, 3))])
    m, mu = MarkedComplex(k, mk), MarkedComplex(ku, mku)
    for v, w in [((1, 1), (1, 2)), ((1, 2), (1, 1))]:
        assert (order_compare(m, top, v, w)
                == order_compare(mu, topu, xl.mat_vec(u, v), xl.mat_vec(u, w)))
