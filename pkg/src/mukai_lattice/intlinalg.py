"""Exact integer and rational linear algebra.

Everything here is deterministic and allocation-cheap: plain lists of ints
or Fractions, no third-party dependencies.  Determinism matters because
basis choices leak into golden CLI output.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import InternalInvariantError, PreconditionError


def gcd_all(values) -> int:
    g = 0
    for x in values:
        g = gcd(g, x)
    return g


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_vec(m, v) -> list:
    return [sum(row[j] * v[j] for j in range(len(v))) for row in m]


def mat_mul(a, b) -> list[list]:
    rows, inner, cols = len(a), len(b), len(b[0])
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def transpose(m) -> list[list]:
    return [list(col) for col in zip(*m)]


def row_hermite(rows) -> list[list[int]]:
    """Canonical row Hermite normal form.

    Pivots appear left to right, are positive, and entries above each pivot
    are reduced into [0, pivot).  Zero rows are dropped.  The result is the
    unique canonical basis of the row lattice.
    """
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        # Euclid on column c among rows >= rank.
        while True:
            nz = [i for i in range(rank, len(m)) if m[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(m[i][c]), i))
            m[rank], m[i0] = m[i0], m[rank]
            if m[rank][c] < 0:
                m[rank] = [-x for x in m[rank]]
            done = True
            for i in range(rank + 1, len(m)):
                q = m[i][c] // m[rank][c]
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[rank])]
                if m[i][c] != 0:
                    done = False
            if done:
                break
        if rank < len(m) and m[rank][c] != 0:
            for i in range(rank):
                q = m[i][c] // m[rank][c]
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[rank])]
            rank += 1
    return [r for r in m[:rank]]


def kernel_saturated(a) -> list[list[int]]:
    """Basis of the saturated integer kernel {x : a @ x = 0}.

    Column reduction by a unimodular transform; the kernel of an integer
    matrix is automatically saturated, and the returned basis is put into
    canonical row Hermite form.
    """
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    h = [list(r) for r in a]
    u = identity_matrix(ncols)

    def swap_cols(j, k):
        for r in h:
            r[j], r[k] = r[k], r[j]
        for r in u:
            r[j], r[k] = r[k], r[j]

    def negate_col(j):
        for r in h:
            r[j] = -r[j]
        for r in u:
            r[j] = -r[j]

    def addmul_col(j, k, q):
        # col_j -= q * col_k
        for r in h:
            r[j] -= q * r[k]
        for r in u:
            r[j] -= q * r[k]

    k = 0
    for i in range(nrows):
        if k >= ncols:
            break
        while True:
            nz = [j for j in range(k, ncols) if h[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(h[i][j]), j))
            if j0 != k:
                swap_cols(k, j0)
            if h[i][k] < 0:
                negate_col(k)
            done = True
            for j in range(k + 1, ncols):
                q = h[i][j] // h[i][k]
                if q:
                    addmul_col(j, k, q)
                if h[i][j] != 0:
                    done = False
            if done:
                break
        if k < ncols and h[i][k] != 0:
            k += 1
    kernel = [[u[r][j] for r in range(ncols)] for j in range(k, ncols)]
    return row_hermite(kernel)


def det_int(mat) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    n = len(mat)
    if n == 0:
        return 1
    a = [list(r) for r in mat]
    sign = 1
    prev = 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for j in range(i + 1, n):
                if a[j][i] != 0:
                    a[i], a[j] = a[j], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for j in range(i + 1, n):
            for c in range(i + 1, n):
                a[j][c] = (a[j][c] * a[i][i] - a[j][i] * a[i][c]) // prev
            a[j][i] = 0
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


def fraction_inverse(mat) -> list[list[Fraction]]:
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise PreconditionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def signature_symmetric(mat) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric rational matrix."""
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    pos = neg = zero = 0
    idx = list(range(n))
    for step in range(n):
        k = None
        for i in range(step, n):
            if a[idx[i]][idx[i]] != 0:
                k = i
                break
        if k is None:
            # all remaining diagonal entries vanish; find an off-diagonal one
            pair = None
            for i in range(step, n):
                for j in range(i + 1, n):
                    if a[idx[i]][idx[j]] != 0:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                zero += n - step
                break
            i, j = pair
            # congruence: row/col i += row/col j makes the diagonal nonzero
            ii, jj = idx[i], idx[j]
            for c in range(n):
                a[ii][c] += a[jj][c]
            for r in range(n):
                a[r][ii] += a[r][jj]
            k = i
        idx[step], idx[k] = idx[k], idx[step]
        p = idx[step]
        d = a[p][p]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(step + 1, n):
            q = idx[i]
            if a[q][p] != 0:
                f = a[q][p] / d
                for c in range(n):
                    a[q][c] -= f * a[p][c]
                for r in range(n):
                    a[r][q] -= f * a[r][p]
    return pos, neg, zero


def ldl_upper(gram):
    """gram = Uᵀ D U with U unit upper-triangular, D positive diagonal.

    Returns (d, u) as Fraction tables, or None when gram is not positive
    definite.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    u = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        if a[i][i] <= 0:
            return None
        d[i] = a[i][i]
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / a[i][i]
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] -= a[i][r] * a[i][c] / a[i][i]
    return d, u


def floor_add_sqrt(alpha: Fraction, q: Fraction) -> int:
    """floor(alpha + sqrt(q)) computed exactly; requires q >= 0."""
    if q < 0:
        raise InternalInvariantError("negative radicand")
    hi = (q.numerator + q.denominator - 1) // q.denominator  # ceil(q)
    guess = int(alpha) + isqrt(hi) + 2
    while True:
        beta = guess - alpha
        if beta <= 0 or beta * beta <= q:
            return guess
        guess -= 1


def ceil_sub_sqrt(alpha: Fraction, q: Fraction) -> int:
    """ceil(alpha - sqrt(q)) computed exactly; requires q >= 0."""
    return -floor_add_sqrt(-alpha, q)


def quadratic_int_range(a: Fraction, b: Fraction, c: Fraction):
    """Integer interval where a·t² + b·t + c <= 0, for a > 0.

    Returns (lo, hi) inclusive, or None when empty.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a <= 0:
        raise PreconditionError("leading coefficient must be positive")
    disc = b * b - 4 * a * c
    if disc < 0:
        return None
    center = -b / (2 * a)
    rad = disc / (4 * a * a)
    lo = ceil_sub_sqrt(center, rad)
    hi = floor_add_sqrt(center, rad)
    if lo > hi:
        return None
    return lo, hi


def short_vectors(gram, bound: Fraction):
    """All nonzero integer x with xᵀ·gram·x <= bound, gram positive definite.

    Fincke-Pohst with exact rational bounds.  Yields tuples; exactly one of
    x, -x is produced (the one whose last nonzero coordinate is positive).
    """
    n = len(gram)
    decomp = ldl_upper(gram)
    if decomp is None:
        raise PreconditionError("short-vector search needs a positive definite form")
    d, u = decomp
    bound = Fraction(bound)
    if bound < 0:
        return
    x = [0] * n

    def rec(i: int, remaining: Fraction):
        if i < 0:
            if any(x):
                yield tuple(x)
            return
        # offset c_i = sum_{j>i} u[i][j] x_j ; d_i (x_i + c_i)^2 <= remaining
        c = sum(u[i][j] * x[j] for j in range(i + 1, n))
        rad = remaining / d[i]
        lo = ceil_sub_sqrt(-c, rad)
        hi = floor_add_sqrt(-c, rad)
        for t in range(lo, hi + 1):
            x[i] = t
            used = d[i] * (t + c) ** 2
            yield from rec(i - 1, remaining - used)
        x[i] = 0

    for v in rec(n - 1, bound):
        # canonical sign: last nonzero coordinate positive
        for coord in reversed(v):
            if coord != 0:
                if coord > 0:
                    yield v
                break
