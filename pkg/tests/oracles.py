"""Independent brute-force oracles.

Everything here recomputes quantities from first definitions (box scans,
exhaustive decompositions, permutation-expansion determinants) and must not
import the implementation paths it cross-checks, beyond basic container
types.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def perm_det(m):
    """Determinant by permutation expansion; small matrices only."""
    n = len(m)
    if n == 0:
        return 1
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += sign * prod
    return total


def gauss_solve(m, v):
    """Dense rational Gaussian elimination; None when inconsistent."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(m, v)]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        a[r] = [x / a[r][c] for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, rows):
        if a[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        x[c] = a[i][cols]
    return x


def barycentric(vertices, point):
    """Coefficients of point over the vertex columns, or None."""
    if not vertices:
        return [] if not any(point) else None
    n = len(vertices[0])
    m = [[v[i] for v in vertices] for i in range(n)]
    return gauss_solve(m, point)


def box_small_vectors(vertices):
    """Small vectors of a simplicial cone by integer box scan.

    Scans the integer bounding box of the closed parallelepiped and keeps
    the nonzero points whose coefficients all lie in [0, 1).
    """
    n = len(vertices[0])
    corners = []
    for mask in itertools.product([0, 1], repeat=len(vertices)):
        corners.append([sum(b * v[i] for b, v in zip(mask, vertices)) for i in range(n)])
    lo = [min(c[i] for c in corners) for i in range(n)]
    hi = [max(c[i] for c in corners) for i in range(n)]
    out = []
    for pt in itertools.product(*[range(l, h + 1) for l, h in zip(lo, hi)]):
        if not any(pt):
            continue
        coeffs = barycentric(vertices, pt)
        if coeffs is None:
            continue
        if all(0 <= c < 1 for c in coeffs):
            out.append(tuple(pt))
    return sorted(out)


def cone_member(vertices, pt):
    coeffs = barycentric(vertices, pt)
    return coeffs is not None and all(c >= 0 for c in coeffs)


def cone_interior(vertices, pt):
    coeffs = barycentric(vertices, pt)
    return coeffs is not None and all(c > 0 for c in coeffs)


def exhaustive_minimal_vectors(vertices):
    """Minimal vectors by decomposition checks over small-vector sums."""
    small = box_small_vectors(vertices)
    out = []
    for v in small:
        ok = True
        for x in small:
            if x == v:
                continue
            rest = tuple(a - b for a, b in zip(v, x))
            if cone_member(vertices, rest) and any(rest):
                ok = False
                break
        if ok:
            out.append(v)
    return sorted(out)


def exhaustive_minimal_internal(vertices):
    """Minimal internal vectors of a simplicial cone from the definition.

    Candidates are the lattice points with coefficients in (0, 1]; each is
    tested against every decomposition v = x + y with one interior part.
    """
    n = len(vertices[0])
    corners = []
    for mask in itertools.product([0, 1], repeat=len(vertices)):
        corners.append([sum(b * v[i] for b, v in zip(mask, vertices)) for i in range(n)])
    lo = [min(c[i] for c in corners) for i in range(n)]
    hi = [max(c[i] for c in corners) for i in range(n)]
    candidates = []
    for pt in itertools.product(*[range(l, h + 1) for l, h in zip(lo, hi)]):
        coeffs = barycentric(vertices, pt)
        if coeffs is not None and all(0 < c <= 1 for c in coeffs):
            candidates.append(tuple(pt))
    out = []
    for v in candidates:
        decomposable = False
        for x in candidates:
            if x == v:
                continue
            rest = tuple(a - b for a, b in zip(v, x))
            if any(rest) and cone_member(vertices, rest):
                # x interior by construction, rest a nonzero cone point
                decomposable = True
                break
        if not decomposable:
            out.append(v)
    return sorted(out)
