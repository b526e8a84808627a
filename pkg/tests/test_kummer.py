"""Top-intersection closed forms against an independent period oracle.

The oracle recomputes every integral from first principles: a product of
abelian surfaces has exp-generating function per factor

    int_X exp(t*a_i*l + u*b_i*x) = (a_i^2 (l,l)/2) t^2 + a_i b_i (l,x) t u
                                   + (b_i^2 (x,x)/2) u^2,

so a weighted power integral over X^k is A! B! times one coefficient of
the product of k such quadratics.  Multiplying by the class of the
albanese fiber (respectively the big diagonal) and pushing down turns the
fiber integrals into fixed integer combinations of weighted product
integrals, derived here independently term by term:

  * point class on factor i kills that factor's weight;
  * the diagonal through factors i, j fuses their weights by addition;
  * the fiber class mu = sum_i p_i*rho + sum_{i<j} (D^{ij} - p_i*rho
    - p_j*rho) therefore reduces an n-factor integral to
    (n(n-1)/2) I[2,1,...,1] - n(n-2) I[1,...,1] on n-1 factors;
  * the square of the exceptional divisor carries -sum D^{ij}, and
    restricting mu to one diagonal gives the weight combination in
    oracle_e_square below.

Everything is a Fraction; no floats anywhere.
"""

import random
from fractions import Fraction
from math import comb, factorial

import pytest

from mukai_lattice.errors import PreconditionError
from mukai_lattice.kummer import (
    BeauvilleData,
    IntegralShape,
    beauville_lattice,
    fujiki_check,
    fujiki_constant,
    kummer_q_rank1,
    top_intersection,
)
from mukai_lattice.lattices import LatticeGram
from mukai_lattice.surface import SurfaceModel
from mukai_lattice.vectors import MukaiVector


# ---------------------------------------------------------------------------
# the oracle


def product_integral(weights_l, weights_x, A, B, l2, lx, x2) -> Fraction:
    """A! B! [t^A u^B] of the product of per-factor quadratics."""
    poly = {(0, 0): Fraction(1)}
    for ai, bi in zip(weights_l, weights_x):
        factor = {
            (2, 0): Fraction(ai * ai) * Fraction(l2) / 2,
            (1, 1): Fraction(ai * bi) * Fraction(lx),
            (0, 2): Fraction(bi * bi) * Fraction(x2) / 2,
        }
        new = {}
        for (p, q), c in poly.items():
            for (dp, dq), d in factor.items():
                key = (p + dp, q + dq)
                new[key] = new.get(key, Fraction(0)) + c * d
        poly = new
    return factorial(A) * factorial(B) * poly.get((A, B), Fraction(0))


def oracle_theta_integral(n, l2, lx, x2, B) -> Fraction:
    """int over the 2(n-1)-fold fiber of theta(l)^(2n-2-B) theta(x)^B."""
    A = 2 * n - 2 - B
    w2 = (2,) + (1,) * (n - 2)
    w1 = (1,) * (n - 1)
    i_two = product_integral(w2, w2, A, B, l2, lx, x2)
    i_one = product_integral(w1, w1, A, B, l2, lx, x2)
    return (
        Fraction(n * (n - 1), 2) * i_two - n * (n - 2) * i_one
    ) / factorial(n)


def oracle_e_square(n, l2) -> Fraction:
    """int of theta(l)^(2n-4) e~^2, reducing the restricted fiber class to
    weighted integrals over n-2 factors."""
    A = 2 * n - 4

    def ii(*weights) -> Fraction:
        return product_integral(weights, weights, A, 0, l2, 0, 0)

    ones = (1,) * (n - 2)
    i_1 = ii(*ones)
    i_2 = ii(2, *ones[1:])
    i_22 = ii(2, 2, *ones[2:]) if n >= 4 else Fraction(0)
    i_3 = ii(3, *ones[1:])
    total = (
        16 * i_1
        + (n - 2) * i_2
        + comb(n - 2, 2) * i_22
        - (n - 2) * (n - 3) * i_2
        + 4 * (n - 2) * i_3
        - 4 * (n - 2) * (i_1 + i_2)
    )
    return -Fraction(n * (n - 1), 2 * factorial(n)) * total


_SAMPLES = [
    (Fraction(2), Fraction(0), Fraction(0)),
    (Fraction(2), Fraction(3), Fraction(-4)),
    (Fraction(-6), Fraction(1), Fraction(2)),
    (Fraction(5, 3), Fraction(-7, 2), Fraction(11, 6)),
    (Fraction(12), Fraction(5), Fraction(0)),
]


@pytest.mark.parametrize("n", range(3, 9))
@pytest.mark.parametrize("l2,lx,x2", _SAMPLES)
def test_closed_forms_match_oracle(n, l2, lx, x2):
    assert top_intersection(n, l2, lx, x2, IntegralShape.L_2n2) == (
        oracle_theta_integral(n, l2, lx, x2, 0)
    )
    assert top_intersection(n, l2, lx, x2, IntegralShape.L_2n3_X) == (
        oracle_theta_integral(n, l2, lx, x2, 1)
    )
    assert top_intersection(n, l2, lx, x2, IntegralShape.L_2n4_XX) == (
        oracle_theta_integral(n, l2, lx, x2, 2)
    )
    assert top_intersection(n, l2, lx, x2, IntegralShape.L_2n4_EE) == (
        oracle_e_square(n, l2)
    )


def test_frozen_small_values():
    # n = 3, (l^2) = 2: hand-checked numbers
    assert oracle_theta_integral(3, 2, 0, 0, 0) == 36
    assert top_intersection(3, 2, 0, 0, IntegralShape.L_2n2) == 36
    assert oracle_e_square(3, 2) == -36
    assert top_intersection(3, 2, 0, 0, IntegralShape.L_2n4_EE) == -36
    # mixed-power value at n = 3: 3*((l,l)(x,x) + 2(l,x)^2)
    assert oracle_theta_integral(3, 2, 3, -4, 2) == 3 * (2 * -4 + 2 * 9)
    assert top_intersection(3, 2, 3, -4, IntegralShape.L_2n4_XX) == 30
    # the constants themselves
    assert fujiki_constant(3) == 9
    assert fujiki_constant(5) == 525


def test_x_shapes_need_nonzero_l2():
    with pytest.raises(PreconditionError):
        top_intersection(4, 0, 1, 2, IntegralShape.L_2n3_X)
    with pytest.raises(PreconditionError):
        top_intersection(4, 0, 1, 2, IntegralShape.L_2n4_XX)


def test_fujiki_identity_on_random_rationals():
    rng = random.Random(20210)
    for _ in range(120):
        n = rng.randint(3, 8)
        l2 = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        lx = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        x2 = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if l2 == 0:
            continue
        assert fujiki_check(n, l2, lx, x2)


def test_fujiki_identity_is_not_vacuous():
    # the identity equates two generically nonzero sides; a wrong
    # coefficient in the quadratic combination breaks it
    n, l2, lx, x2 = 4, Fraction(2), Fraction(3), Fraction(5)
    m = n - 1
    i_l = top_intersection(n, l2, lx, x2, IntegralShape.L_2n2)
    i_x = top_intersection(n, l2, lx, x2, IntegralShape.L_2n3_X)
    i_xx = top_intersection(n, l2, lx, x2, IntegralShape.L_2n4_XX)
    lhs = i_l * i_l * kummer_q_rank1(x2, 0, n)
    rhs = kummer_q_rank1(l2, 0, n) * (
        (2 * m - 1) * i_l * i_xx - (2 * m - 2) * i_x * i_x
    )
    assert lhs == rhs != 0
    wrong = kummer_q_rank1(l2, 0, n) * (
        2 * m * i_l * i_xx - (2 * m - 2) * i_x * i_x
    )
    assert lhs != wrong


def test_q_rank1_matches_diagonal_gram():
    rng = random.Random(977)
    for _ in range(200):
        n = rng.randint(3, 9)
        x2 = 2 * rng.randint(-6, 6)
        k = rng.randint(-5, 5)
        g = LatticeGram(rank=2, gram=((x2, 0), (0, -2 * n)))
        assert kummer_q_rank1(x2, k, n) == g.value((1, k))


def test_q_rank1_rational_inputs():
    assert kummer_q_rank1(Fraction(5, 2), Fraction(1, 2), 3) == Fraction(1)
    assert isinstance(kummer_q_rank1(4, 1, 3), int)
    assert kummer_q_rank1(4, 1, 3) == -2


# ---------------------------------------------------------------------------
# the fiber lattice


def test_beauville_lattice_rank1():
    s = SurfaceModel(kind="abelian", ns_gram=((2,),))
    data = beauville_lattice(MukaiVector(1, (0,), -3), s)
    assert isinstance(data, BeauvilleData)
    assert data.n == 3
    assert data.lattice.rank == 2
    # perp of (1, 0, -3) inside (0,1,0),(1,0,... ambient: diag(2, -6) up to
    # base ordering
    vals = sorted(data.lattice.gram[i][i] for i in range(2))
    assert vals == [-6, 2]
    assert data.lattice.det == -12
    assert Fraction(data.fujiki_constant_num, data.fujiki_constant_den) == 9


def test_beauville_lattice_worked_rank2():
    s = SurfaceModel(kind="abelian", ns_gram=((2,),))
    v = MukaiVector(2, (1,), -2)
    data = beauville_lattice(v, s)
    assert data.n == 5
    assert data.lattice.gram == ((-2, -1), (-1, 2))
    assert data.lattice.det == -5
    assert Fraction(data.fujiki_constant_num, data.fujiki_constant_den) == 525


def test_beauville_lattice_preconditions():
    s = SurfaceModel(kind="abelian", ns_gram=((2,),))
    k3 = SurfaceModel(kind="K3", ns_gram=((2,),))
    with pytest.raises(PreconditionError):
        beauville_lattice(MukaiVector(1, (0,), -3), k3)
    with pytest.raises(PreconditionError):
        beauville_lattice(MukaiVector(2, (0,), -2), s)  # imprimitive
    with pytest.raises(PreconditionError, match="6"):
        beauville_lattice(MukaiVector(1, (1,), 0), s)  # square 2
    with pytest.raises(PreconditionError, match="kummer4"):
        beauville_lattice(MukaiVector(1, (1,), -1), s)  # square 4
    with pytest.raises(PreconditionError):
        beauville_lattice(MukaiVector(-1, (0,), 3), s)  # not positive


def _solve_in_basis(target, basis):
    """Integer (u, w) with u*basis[0] + w*basis[1] = target, or None."""
    b0, b1 = basis
    m = len(target)
    for i in range(m):
        for j in range(i + 1, m):
            det = b0[i] * b1[j] - b0[j] * b1[i]
            if det == 0:
                continue
            u = Fraction(target[i] * b1[j] - target[j] * b1[i], det)
            w = Fraction(b0[i] * target[j] - b0[j] * target[i], det)
            if u.denominator != 1 or w.denominator != 1:
                return None
            u, w = int(u), int(w)
            if all(u * b0[k] + w * b1[k] == target[k] for k in range(m)):
                return (u, w)
            return None
    return None


def test_beauville_lattice_value_agrees_with_q():
    # the perp of (1, 0, -n) carries (x^2) - 2 n k^2 on classes
    # x + k(1 + n*omega), here with (H^2) = 4
    s = SurfaceModel(kind="abelian", ns_gram=((4,),))
    n = 4
    data = beauville_lattice(MukaiVector(1, (0,), -n), s)
    g = data.lattice
    for x_coeff in range(-3, 4):
        for k_coeff in range(-3, 4):
            # ambient (r, c1, a) of x_coeff*H + k_coeff*(1 + n*omega)
            target = (k_coeff, x_coeff, n * k_coeff)
            coords = _solve_in_basis(target, g.basis_in_ambient)
            assert coords is not None
            assert g.value(coords) == kummer_q_rank1(
                4 * x_coeff * x_coeff, k_coeff, n
            )
