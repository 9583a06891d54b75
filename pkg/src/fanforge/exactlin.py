"""Exact integer/rational linear algebra on plain Python sequences.

Vectors are tuples of ints, matrices are tuples of row tuples.  Everything
runs on arbitrary-precision ints and ``fractions.Fraction``; there is no
floating point anywhere (determinant products overflow fixed width, and
rounding would break regularity checks downstream).

Lattices are handled in coordinates of a chosen basis: a lattice is given by
a matrix whose *columns* are basis (or generator) vectors.  A convenience
layer accepts lists of vectors and transposes internally.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd

Vec = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]

INFINITE = math.inf


class SpanViolation(ValueError):
    """Generators do not lie in the rational span of the ambient lattice."""


class ZeroVector(ValueError):
    """Operation undefined for the zero vector."""


def vec(entries) -> Vec:
    return tuple(int(x) for x in entries)


def mat(rows) -> Mat:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Mat) -> Mat:
    if not m:
        return ()
    return tuple(zip(*m))


def mat_shape(m: Mat) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def mat_mul(a: Mat, b: Mat) -> Mat:
    rows_a, cols_a = mat_shape(a)
    rows_b, cols_b = mat_shape(b)
    if rows_a == 0:
        return ()
    assert cols_a == rows_b, f"shape mismatch {mat_shape(a)} x {mat_shape(b)}"
    if rows_b == 0:
        # a is m x 0; () can only be read as the 0 x 0 matrix
        return tuple(() for _ in range(rows_a))
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m: Mat, v: Vec) -> Vec:
    assert (not m) or len(m[0]) == len(v)
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(k: int, a: Vec) -> Vec:
    return tuple(k * x for x in a)


def vec_dot(a, b) -> int:
    s = 0
    for x, y in zip(a, b):
        s += x * y
    return s


def columns_matrix(vectors) -> Mat:
    """Matrix whose columns are the given vectors."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return ()
    n = len(vectors[0])
    return tuple(tuple(v[i] for v in vectors) for i in range(n))


def matrix_columns(m: Mat) -> list[Vec]:
    return [tuple(row[j] for row in m) for j in range(mat_shape(m)[1])]


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def det(m: Mat) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    n, c = mat_shape(m)
    assert n == c, "determinant of a non-square matrix"
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        (a, b, c3), (d, e, f), (g, h, i) = m
        return a * (e * i - f * h) - b * (d * i - f * g) + c3 * (d * h - e * g)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf(m: Mat) -> tuple[Mat, Mat]:
    """Hermite normal form h = u*m with u unimodular.

    h is in column-style echelon: pivots move right down successive rows,
    pivot entries positive, entries above each pivot reduced into
    [0, pivot).  Pivot choice is deterministic (smallest absolute value,
    then lowest row index), so repeated runs produce identical output.
    """
    nrows, ncols = mat_shape(m)
    h = [list(row) for row in m]
    u = [list(row) for row in identity(nrows)]
    pr = 0
    for col in range(ncols):
        if pr >= nrows:
            break
        while True:
            nz = [r for r in range(pr, nrows) if h[r][col] != 0]
            if not nz:
                break
            r0 = min(nz, key=lambda r: (abs(h[r][col]), r))
            if r0 != pr:
                h[pr], h[r0] = h[r0], h[pr]
                u[pr], u[r0] = u[r0], u[pr]
            done = True
            for r in range(pr + 1, nrows):
                if h[r][col] != 0:
                    q = h[r][col] // h[pr][col]
                    h[r] = [x - q * y for x, y in zip(h[r], h[pr])]
                    u[r] = [x - q * y for x, y in zip(u[r], u[pr])]
                    if h[r][col] != 0:
                        done = False
            if done:
                break
        if h[pr][col] != 0:
            if h[pr][col] < 0:
                h[pr] = [-x for x in h[pr]]
                u[pr] = [-x for x in u[pr]]
            for r in range(pr):
                q = h[r][col] // h[pr][col]
                if q != 0:
                    h[r] = [x - q * y for x, y in zip(h[r], h[pr])]
                    u[r] = [x - q * y for x, y in zip(u[r], u[pr])]
            pr += 1
    return mat(h), mat(u)


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def smith_decomposition(m: Mat):
    """Diagonalize m over the integers: returns (d, s, t, sinv, tinv).

    m = s . d . t with s, t unimodular; sinv, tinv are their inverses.
    d is diagonal with the divisibility chain d[i] | d[i+1] (entries may be
    negative only in sign bookkeeping; we normalize them nonnegative).
    """
    nrows, ncols = mat_shape(m)
    d = [list(row) for row in m]
    s = [list(row) for row in identity(nrows)]
    sinv = [list(row) for row in identity(nrows)]
    t = [list(row) for row in identity(ncols)]
    tinv = [list(row) for row in identity(ncols)]

    # Row op on d is matched by a column op on s and a row op on sinv so
    # that s*d*t == m and s*sinv == I stay invariant; columns likewise.
    def row_sub(i, j, q):  # d[i] -= q*d[j]
        d[i] = [x - q * y for x, y in zip(d[i], d[j])]
        sinv[i] = [x - q * y for x, y in zip(sinv[i], sinv[j])]
        for r in range(nrows):
            s[r][j] += q * s[r][i]

    def col_sub(i, j, q):  # col i -= q*col j
        for r in range(nrows):
            d[r][i] -= q * d[r][j]
        for r in range(ncols):
            tinv[r][i] -= q * tinv[r][j]
        t[j] = [x + q * y for x, y in zip(t[j], t[i])]

    def row_swap(i, j):
        _swap_rows(d, i, j)
        _swap_rows(sinv, i, j)
        for r in range(nrows):
            s[r][i], s[r][j] = s[r][j], s[r][i]

    def col_swap(i, j):
        for r in range(nrows):
            d[r][i], d[r][j] = d[r][j], d[r][i]
        for r in range(ncols):
            tinv[r][i], tinv[r][j] = tinv[r][j], tinv[r][i]
        _swap_rows(t, i, j)

    def row_negate(i):
        d[i] = [-x for x in d[i]]
        sinv[i] = [-x for x in sinv[i]]
        for r in range(nrows):
            s[r][i] = -s[r][i]

    k = 0
    while k < min(nrows, ncols):
        # Move a nonzero pivot of least absolute value to (k, k).
        best = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(k, best[0])
        col_swap(k, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(k + 1, nrows):
                if d[i][k] != 0:
                    q = d[i][k] // d[k][k]
                    row_sub(i, k, q)
                    if d[i][k] != 0:
                        row_swap(k, i)
                        dirty = True
            for j in range(k + 1, ncols):
                if d[k][j] != 0:
                    q = d[k][j] // d[k][k]
                    col_sub(j, k, q)
                    if d[k][j] != 0:
                        col_swap(k, j)
                        dirty = True
        if d[k][k] < 0:
            row_negate(k)
        k += 1

    # Enforce the divisibility chain d[i] | d[i+1] by folding offending rows
    # together and re-running Euclid on the 2x2 block.
    changed = True
    while changed:
        changed = False
        for i in range(min(nrows, ncols) - 1):
            a, b = d[i][i], d[i + 1][i + 1]
            if a != 0 and b % a != 0:
                row_sub(i, i + 1, -1)
                while True:
                    if d[i + 1][i] != 0:
                        q = d[i + 1][i] // d[i][i]
                        row_sub(i + 1, i, q)
                        if d[i + 1][i] != 0:
                            row_swap(i, i + 1)
                        continue
                    if d[i][i + 1] != 0:
                        q = d[i][i + 1] // d[i][i]
                        col_sub(i + 1, i, q)
                        if d[i][i + 1] != 0:
                            col_swap(i, i + 1)
                        continue
                    break
                if d[i][i] < 0:
                    row_negate(i)
                if d[i + 1][i + 1] < 0:
                    row_negate(i + 1)
                changed = True
    return mat(d), mat(s), mat(t), mat(sinv), mat(tinv)


def elementary_divisors(m: Mat) -> list[int]:
    d, *_ = smith_decomposition(m)
    n = min(mat_shape(d))
    return [abs(d[i][i]) for i in range(n) if d[i][i] != 0]


def rank(m: Mat) -> int:
    """Rank over Q by fraction-free elimination."""
    nrows, ncols = mat_shape(m)
    a = [list(row) for row in m]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            if a[i][c] != 0:
                f = a[i][c]
                p = a[r][c]
                a[i] = [p * x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


def adjugate(m: Mat) -> Mat:
    """Integer adjugate: adj(m) . m = det(m) . I.  Small matrices only."""
    n, c = mat_shape(m)
    assert n == c
    if n == 0:
        return ()
    if n == 1:
        return ((1,),)
    if n == 2:
        (a, b), (c2, d) = m
        return ((d, -b), (-c2, a))
    if n == 3:
        (a, b, c3), (d, e, f), (g, h, i) = m
        return ((e * i - f * h, c3 * h - b * i, b * f - c3 * e),
                (f * g - d * i, a * i - c3 * g, c3 * d - a * f),
                (d * h - e * g, b * g - a * h, a * e - b * d))
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(tuple(m[a][b] for b in range(n) if b != i)
                          for a in range(n) if a != j)
            row.append((-1) ** (i + j) * det(minor))
        rows.append(tuple(row))
    return tuple(rows)


def invert_rational(m: Mat):
    """Exact inverse of a square nonsingular matrix, rows of Fractions."""
    n, c = mat_shape(m)
    assert n == c
    a = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def solve_rational(m: Mat, v) -> list[Fraction] | None:
    """Solve m*x = v over Q; None when inconsistent.

    When the system is underdetermined the free variables are set to zero
    (deterministic), which is all the callers need: in practice m has full
    column rank.
    """
    nrows, ncols = mat_shape(m)
    assert len(v) == nrows, "right-hand side length mismatch"
    a = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(m, v)]
    if nrows == 0:
        return [Fraction(0)] * ncols
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if a[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = a[i][ncols]
    return x


def solve_integral(m: Mat, v) -> Vec | None:
    """Integral solution of m*x = v, or None (inconsistent or fractional)."""
    x = solve_rational(m, v)
    if x is None or any(f.denominator != 1 for f in x):
        return None
    return tuple(int(f) for f in x)


def solve_columns(m: Mat, cols) -> list[Vec | None]:
    """Integral solutions of m*x = c for several right-hand sides.

    Entries are None when a system is inconsistent or fractional.  For
    full-column-rank systems the work is pure integer arithmetic (Cramer
    through the adjugate of a pivot row block); otherwise a shared rational
    elimination is used.
    """
    nrows, ncols = mat_shape(m)
    cols = [tuple(c) for c in cols]
    if ncols == 0:
        return [() if not any(c) else None for c in cols]
    if nrows == ncols:
        pivot_rows = tuple(range(nrows)) if det(m) != 0 else None
    else:
        head = tuple(m[i] for i in range(ncols))
        if det(head) != 0:
            pivot_rows = tuple(range(ncols))
        else:
            pivot_rows = _independent_rows(m, ncols)
    if pivot_rows is not None:
        sq = tuple(m[i] for i in pivot_rows)
        d = det(sq)
        adj = adjugate(sq)
        rest = [i for i in range(nrows) if i not in pivot_rows]
        out: list[Vec | None] = []
        for c in cols:
            b = [c[i] for i in pivot_rows]
            y = [sum(a * bb for a, bb in zip(row, b)) for row in adj]
            if any(v % d for v in y):
                out.append(None)
                continue
            x = tuple(v // d for v in y)
            if any(sum(a * xx for a, xx in zip(m[i], x)) != c[i] for i in rest):
                out.append(None)
            else:
                out.append(x)
        return out
    # rank-deficient fallback: shared rational elimination
    width = len(cols)
    a = [[Fraction(x) for x in row] + [Fraction(c[i]) for c in cols]
         for i, row in enumerate(m)]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    out = []
    for j in range(width):
        col = ncols + j
        if any(a[i][col] != 0 for i in range(r, nrows)):
            out.append(None)
            continue
        x = [Fraction(0)] * ncols
        for i, c in enumerate(pivots):
            x[c] = a[i][col]
        if any(f.denominator != 1 for f in x):
            out.append(None)
        else:
            out.append(tuple(int(f) for f in x))
    return out


def _independent_rows(m: Mat, k: int):
    """Indices of k rows of m with nonzero determinant, or None."""
    chosen = []
    rows = []
    for i in range(len(m)):
        if rank(mat(rows + [list(m[i])])) == len(rows) + 1:
            rows.append(list(m[i]))
            chosen.append(i)
            if len(chosen) == k:
                return tuple(chosen)
    return None


def saturation_index(vectors) -> int:
    """Index of the lattice spanned by the vectors inside its saturation.

    Equals the gcd of the maximal minors of the column matrix (the product
    of the elementary divisors); 0 signals dependent vectors.
    """
    vectors = [tuple(v) for v in vectors]
    k = len(vectors)
    if k == 0:
        return 1
    n = len(vectors[0])
    if k > n:
        return 0
    import itertools as _it
    m = columns_matrix(vectors)
    g = 0
    for rows in _it.combinations(range(n), k):
        sub = tuple(m[i] for i in rows)
        g = gcd(g, abs(det(sub)))
        if g == 1:
            return 1
    return g


def saturation_basis(vectors) -> list[Vec]:
    """Basis of (rational span of vectors) intersected with Z^n.

    Columns of the Smith transform s that correspond to nonzero divisors
    form such a basis, and because s is unimodular the result is saturated.
    The output is deterministic for fixed input order.  Planes in Z^3 (the
    hot case downstream) go through the cross-product kernel instead.
    """
    cols = [tuple(v) for v in vectors]
    if not cols:
        return []
    if len(cols[0]) == 3 and len(cols) == 2:
        u, w = cols
        g = (u[1] * w[2] - u[2] * w[1],
             u[2] * w[0] - u[0] * w[2],
             u[0] * w[1] - u[1] * w[0])
        if any(g):
            gg = vec_gcd(g)
            g = tuple(x // gg for x in g)
            _, uni = hnf(columns_matrix([g]))
            # rows 2,3 of the unimodular transform kill the primitive normal
            return [tuple(uni[1]), tuple(uni[2])]
    m = columns_matrix(cols)
    d, s, t, sinv, tinv = smith_decomposition(m)
    nz = [i for i in range(min(mat_shape(d))) if d[i][i] != 0]
    return [tuple(row[i] for row in s) for i in nz]


def sublattice_index(gens, ambient_gens):
    """Index [ambient : sub] of the lattice spanned by gens inside ambient.

    Returns INFINITE when the ranks differ.  Raises SpanViolation when a
    generator falls outside the rational span of the ambient lattice; the
    generators are required to be actual ambient-lattice members.
    """
    amb = columns_matrix([tuple(v) for v in ambient_gens])
    coords = []
    for g in gens:
        x = solve_rational(amb, g)
        if x is None:
            raise SpanViolation(f"generator {tuple(g)} outside ambient span")
        if any(f.denominator != 1 for f in x):
            raise SpanViolation(f"generator {tuple(g)} is not an ambient lattice point")
        coords.append(tuple(int(f) for f in x))
    amb_rank = rank(amb)
    if not coords:
        return 1 if amb_rank == 0 else INFINITE
    cm = columns_matrix(coords)
    divs = elementary_divisors(cm)
    if len(divs) < amb_rank:
        return INFINITE
    idx = 1
    for d in divs:
        idx *= d
    return idx


def is_saturated(sub_gens, ambient_gens) -> bool:
    """True iff span(sub) meets the ambient lattice exactly in the sublattice."""
    amb = columns_matrix([tuple(v) for v in ambient_gens])
    coords = []
    for g in sub_gens:
        x = solve_rational(amb, g)
        if x is None:
            raise SpanViolation(f"generator {tuple(g)} outside ambient span")
        if any(f.denominator != 1 for f in x):
            return False
        coords.append(tuple(int(f) for f in x))
    if not coords:
        return True
    return all(d == 1 for d in elementary_divisors(columns_matrix(coords)))


def primitivize(v, lattice_basis=None) -> Vec:
    """The primitive lattice vector on the ray spanned by v.

    With no basis the lattice is Z^n and this is division by the gcd.  A
    non-standard lattice is passed as a list of basis vectors in ambient
    coordinates; v must be a lattice member.
    """
    v = tuple(int(x) for x in v)
    if all(x == 0 for x in v):
        raise ZeroVector("cannot primitivize the zero vector")
    if lattice_basis is None:
        g = vec_gcd(v)
        return tuple(x // g for x in v)
    b = columns_matrix([tuple(w) for w in lattice_basis])
    x = solve_integral(b, v)
    if x is None:
        raise SpanViolation(f"{v} is not a lattice point of the given basis")
    g = vec_gcd(x)
    red = tuple(c // g for c in x)
    return mat_vec(b, red)


def frac_floor(f: Fraction) -> int:
    return f.numerator // f.denominator


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else abs(a or b)
