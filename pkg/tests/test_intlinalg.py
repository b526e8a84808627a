"""Exact integer linear algebra against sympy and brute-force oracles."""

import random
from fractions import Fraction
from itertools import product

import pytest
import sympy

from mukai_lattice.errors import PreconditionError
from mukai_lattice.intlinalg import (
    ceil_sub_sqrt,
    det_int,
    floor_add_sqrt,
    fraction_inverse,
    gcd_all,
    identity_matrix,
    kernel_saturated,
    ldl_upper,
    mat_mul,
    mat_vec,
    quadratic_int_range,
    row_hermite,
    short_vectors,
    signature_symmetric,
    transpose,
)

from conftest import rand_even_symmetric, rand_unimodular


def _rand_matrix(rng, rows, cols, bound=9):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


def test_gcd_all():
    assert gcd_all([]) == 0
    assert gcd_all([0, 0]) == 0
    assert gcd_all([4, -6]) == 2
    assert gcd_all([3]) == 3


def test_matrix_helpers():
    m = [[1, 2], [3, 4]]
    assert mat_vec(m, [1, 1]) == [3, 7]
    assert mat_mul(m, identity_matrix(2)) == m
    assert transpose(m) == [[1, 3], [2, 4]]


def test_det_matches_sympy():
    rng = random.Random(41)
    for _ in range(80):
        n = rng.randint(1, 5)
        m = _rand_matrix(rng, n, n)
        assert det_int(m) == int(sympy.Matrix(m).det())


def test_fraction_inverse_matches_sympy():
    rng = random.Random(42)
    checked = 0
    while checked < 40:
        n = rng.randint(1, 4)
        m = _rand_matrix(rng, n, n, 6)
        sm = sympy.Matrix(m)
        if sm.det() == 0:
            continue
        inv = fraction_inverse(m)
        sinv = sm.inv()
        for i in range(n):
            for j in range(n):
                q = sympy.Rational(sinv[i, j])
                assert inv[i][j] == Fraction(int(q.p), int(q.q))
        checked += 1


def test_fraction_inverse_rejects_singular():
    with pytest.raises(PreconditionError):
        fraction_inverse([[1, 2], [2, 4]])


def test_row_hermite_shape_and_canonicality():
    rng = random.Random(43)
    for _ in range(60):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = _rand_matrix(rng, rows, cols, 7)
        h = row_hermite(m)
        # no zero rows, positive pivots, reduced entries above each pivot
        pivots = []
        for r, row in enumerate(h):
            nz = [c for c, x in enumerate(row) if x != 0]
            assert nz, "zero row survived"
            p = nz[0]
            assert row[p] > 0
            if pivots:
                assert p > pivots[-1][1]
            for rr in range(r):
                assert 0 <= h[rr][p] < row[p]
            pivots.append((r, p))
        # canonical: invariant under unimodular row mixing
        u = rand_unimodular(rng, rows)
        mixed = mat_mul(u, m)
        assert row_hermite(mixed) == h


def test_kernel_saturated_matches_sympy():
    rng = random.Random(44)
    for _ in range(60):
        rows = rng.randint(1, 3)
        cols = rng.randint(1, 5)
        a = _rand_matrix(rng, rows, cols, 6)
        kern = kernel_saturated(a)
        sa = sympy.Matrix(a)
        # dimension agrees with sympy's rank-nullity
        assert len(kern) == cols - sa.rank()
        # every basis vector is an integer kernel element
        for vec in kern:
            assert all(
                sum(a[i][j] * vec[j] for j in range(cols)) == 0
                for i in range(rows)
            )
        if not kern:
            continue
        # saturation: the Hermite form of the basis has unimodular row span,
        # i.e. some maximal minor is +-1 after removing content; equivalent
        # and simpler: the gcd of all maximal minors is 1
        k = sympy.Matrix(kern)
        minors = [
            int(k[:, list(cs)].det())
            for cs in _combinations(range(cols), len(kern))
        ]
        assert gcd_all(minors) == 1
        # Q-span agrees with sympy's nullspace: adjoining any sympy basis
        # vector as a row must not raise the rank
        null = sa.nullspace()
        assert len(null) == len(kern)
        for nv in null:
            grown = sympy.Matrix(kern + [list(nv.T)])
            assert grown.rank() == len(kern)


def _combinations(seq, k):
    from itertools import combinations

    return combinations(seq, k)


def test_signature_matches_charpoly_descartes():
    # all eigenvalues of a symmetric matrix are real, so Descartes' rule on
    # the exact characteristic polynomial counts signs with multiplicity
    rng = random.Random(45)
    for _ in range(80):
        n = rng.randint(1, 4)
        m = rand_even_symmetric(rng, n, 6)
        pos, neg, zero = signature_symmetric(m)
        coeffs = [int(c) for c in sympy.Matrix(m).charpoly().all_coeffs()]
        szero = 0
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
            szero += 1
        signs = [c for c in coeffs if c != 0]
        spos = sum(
            1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0)
        )
        sneg = n - szero - spos
        assert (pos, neg, zero) == (spos, sneg, szero)


def test_ldl_roundtrip_and_posdef_gate():
    rng = random.Random(46)
    for _ in range(30):
        n = rng.randint(1, 4)
        b = _rand_matrix(rng, n, n, 3)
        gram = mat_mul(transpose(b), b)
        for i in range(n):
            gram[i][i] += 1  # force positive definite
        decomp = ldl_upper(gram)
        assert decomp is not None
        d, u = decomp
        rebuilt = mat_mul(
            transpose(u), mat_mul([[d[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)], u)
        )
        assert [[Fraction(x) for x in row] for row in gram] == rebuilt
    assert ldl_upper([[0]]) is None
    assert ldl_upper([[2, 3], [3, 2]]) is None


def test_floor_ceil_sqrt_match_sympy():
    rng = random.Random(47)
    for _ in range(150):
        alpha = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
        q = Fraction(rng.randint(0, 900), rng.randint(1, 12))
        f = floor_add_sqrt(alpha, q)
        c = ceil_sub_sqrt(alpha, q)
        sa = sympy.Rational(alpha.numerator, alpha.denominator)
        sq = sympy.Rational(q.numerator, q.denominator)
        assert f == int(sympy.floor(sa + sympy.sqrt(sq)))
        assert c == int(sympy.ceiling(sa - sympy.sqrt(sq)))


def test_quadratic_int_range_matches_scan():
    rng = random.Random(48)
    for _ in range(150):
        a = rng.randint(1, 6)
        b = rng.randint(-12, 12)
        c = rng.randint(-12, 12)
        got = quadratic_int_range(a, b, c)
        window = abs(b) + abs(c) + 4
        hits = [t for t in range(-window, window + 1) if a * t * t + b * t + c <= 0]
        if got is None:
            assert hits == []
        else:
            lo, hi = got
            assert hits == list(range(lo, hi + 1))


def test_quadratic_int_range_needs_positive_lead():
    with pytest.raises(PreconditionError):
        quadratic_int_range(0, 1, -1)
    with pytest.raises(PreconditionError):
        quadratic_int_range(-1, 0, 1)


def test_quadratic_int_range_fraction_inputs():
    assert quadratic_int_range(Fraction(1, 2), 0, -2) == (-2, 2)


def test_short_vectors_match_box_scan():
    rng = random.Random(49)
    for _ in range(25):
        n = rng.randint(1, 3)
        b = _rand_matrix(rng, n, n, 2)
        gram = mat_mul(transpose(b), b)
        for i in range(n):
            gram[i][i] += 1  # now x^T gram x >= |x|^2
        bound = rng.randint(0, 9)
        got = sorted(short_vectors(gram, bound))

        def val(x):
            return sum(gram[i][j] * x[i] * x[j] for i in range(n) for j in range(n))

        radius = int(bound ** 0.5) + 1
        brute = []
        for x in product(range(-radius, radius + 1), repeat=n):
            if all(v == 0 for v in x) or val(x) > bound:
                continue
            last = next(v for v in reversed(x) if v != 0)
            if last > 0:
                brute.append(x)
        assert got == sorted(brute)


def test_short_vectors_rejects_indefinite():
    with pytest.raises(PreconditionError):
        list(short_vectors([[2, 0], [0, -2]], 10))
