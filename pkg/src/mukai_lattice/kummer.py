"""Top intersection numbers and Beauville form data for the fibers.

For a fiber of dimension 2n - 2 (n >= 3) the degree-(2n-2) integrals
of a polarization class l and one further class x close into four
shapes, all proportional to

    C(n) = (2n-2)! * n^2 / (2^(n-1) * n!),

which is also the Fujiki constant of the fiber.  The shapes satisfy
the Fujiki-type relation

    I(l^(2n-2))^2 * q(x) =
        q(l) * ((2m-1) * I(l^(2n-2)) * I(l^(2n-4) x^2)
                - (2m-2) * I(l^(2n-3) x)^2),        m = n - 1,

with q the Beauville square; ``fujiki_check`` verifies it on exact
rational input.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial, gcd

from .errors import PreconditionError
from .lattices import LatticeGram, perp_basis
from .surface import ABELIAN, SurfaceModel
from .vectors import MukaiVector, is_positive, is_primitive, mukai_square

__all__ = [
    "IntegralShape",
    "fujiki_constant",
    "top_intersection",
    "fujiki_check",
    "kummer_q_rank1",
    "BeauvilleData",
    "beauville_lattice",
]


class IntegralShape(Enum):
    """Monomial shape of a degree-(2n-2) top intersection."""

    L_2n2 = "L_2n2"        # l^(2n-2)
    L_2n3_X = "L_2n3_X"    # l^(2n-3) * x
    L_2n4_XX = "L_2n4_XX"  # l^(2n-4) * x^2
    L_2n4_EE = "L_2n4_EE"  # l^(2n-4) * e^2


def fujiki_constant(n: int) -> Fraction:
    if n < 3:
        raise PreconditionError("closed forms hold for n >= 3")
    return Fraction(factorial(2 * n - 2) * n * n, 2 ** (n - 1) * factorial(n))


def top_intersection(n: int, l2, lx, x2, shape: IntegralShape) -> Fraction:
    """Exact value of the chosen top intersection shape.

    l2, lx, x2 are the pairings (l, l), (l, x), (x, x); for the shapes
    involving x the class l must be nonisotropic.
    """
    if n < 3:
        raise PreconditionError("closed forms hold for n >= 3")
    shape = IntegralShape(shape)
    l2 = Fraction(l2)
    lx = Fraction(lx)
    x2 = Fraction(x2)
    c = fujiki_constant(n)
    if shape is IntegralShape.L_2n2:
        return c * l2 ** (n - 1)
    if l2 == 0:
        raise PreconditionError("shapes involving x need (l, l) != 0")
    if shape is IntegralShape.L_2n3_X:
        return c * l2 ** (n - 2) * lx
    if shape is IntegralShape.L_2n4_XX:
        return c * (l2 ** (n - 2) * x2 + (2 * n - 4) * l2 ** (n - 3) * lx * lx) / (2 * n - 3)
    if shape is IntegralShape.L_2n4_EE:
        return c * Fraction(-2 * n, 2 * n - 3) * l2 ** (n - 2)
    raise PreconditionError("unknown integral shape")


def fujiki_check(n: int, l2, lx, x2) -> bool:
    """Verify the Fujiki-type relation among the closed forms, exactly.

    Both squares are taken through kummer_q_rank1 with k = 0 since l
    and x are pure degree-two classes here.
    """
    l2 = Fraction(l2)
    lx = Fraction(lx)
    x2 = Fraction(x2)
    m = n - 1
    v_l = top_intersection(n, l2, lx, x2, IntegralShape.L_2n2)
    i_x = top_intersection(n, l2, lx, x2, IntegralShape.L_2n3_X)
    i_xx = top_intersection(n, l2, lx, x2, IntegralShape.L_2n4_XX)
    lhs = v_l * v_l * kummer_q_rank1(x2, 0, n)
    rhs = kummer_q_rank1(l2, 0, n) * (
        (2 * m - 1) * v_l * i_xx - (2 * m - 2) * i_x * i_x
    )
    return lhs == rhs


def kummer_q_rank1(x2, k, n):
    """Beauville square of x + k*e on a dim 2n-2 fiber, (e, e) = -2n.

    Integer inputs give an integer back; rational input is accepted for
    the identity checks and keeps its exact value.
    """
    if n < 3:
        raise PreconditionError("closed forms hold for n >= 3")
    q = Fraction(x2) - 2 * n * Fraction(k) * Fraction(k)
    return int(q) if q.denominator == 1 else q


@dataclass(frozen=True)
class BeauvilleData:
    """Beauville lattice and Fujiki constant of a moduli fiber."""

    n: int
    lattice: LatticeGram
    fujiki_constant_num: int
    fujiki_constant_den: int

    def __post_init__(self):
        if self.n < 3:
            raise PreconditionError("fiber data defined for n >= 3")
        g = gcd(self.fujiki_constant_num, self.fujiki_constant_den)
        if g != 1 or self.fujiki_constant_den <= 0:
            raise PreconditionError("Fujiki constant must be in lowest terms")


def beauville_lattice(v: MukaiVector, surface: SurfaceModel) -> BeauvilleData:
    """Beauville form data of the fiber attached to v on an abelian surface.

    Needs v primitive and positive with <v, v> >= 6; the square-4 case
    has a four-dimensional fiber covered by the dedicated reduction
    (kummer4_reduce) instead.
    """
    if surface.kind != ABELIAN:
        raise PreconditionError("fibers of the determinant map need an abelian surface")
    if not is_primitive(v):
        raise PreconditionError("v must be primitive")
    if not is_positive(v, surface):
        raise PreconditionError("v must be positive")
    sq = mukai_square(v, surface)
    if sq < 6:
        if sq == 4:
            raise PreconditionError(
                "square 4 gives a four-dimensional fiber; use kummer4_reduce"
            )
        raise PreconditionError("fiber lattice needs <v, v> >= 6")
    n = sq // 2
    c = fujiki_constant(n)
    return BeauvilleData(
        n=n,
        lattice=perp_basis(v, surface),
        fujiki_constant_num=c.numerator,
        fujiki_constant_den=c.denominator,
    )
