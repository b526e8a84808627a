"""Mukai vectors and the core lattice operations on them.

A Mukai vector is the integer triple (r, c1, a) in H^0 + NS + H^4 with
pairing <v,w> = (c1(v),c1(w)) - r(v)a(w) - r(w)a(v).  All functions are pure
and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import InputError, PreconditionError
from .intlinalg import gcd_all
from .surface import ABELIAN, SurfaceModel, default_effectivity


@dataclass(frozen=True)
class MukaiVector:
    r: int
    c1: tuple[int, ...]
    a: int

    def __post_init__(self):
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "c1", tuple(int(x) for x in self.c1))
        object.__setattr__(self, "a", int(self.a))

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, tuple(-x for x in self.c1), -self.a)

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        self._check_len(other)
        return MukaiVector(
            self.r + other.r,
            tuple(x + y for x, y in zip(self.c1, other.c1)),
            self.a + other.a,
        )

    def __sub__(self, other: "MukaiVector") -> "MukaiVector":
        return self + (-other)

    def __rmul__(self, k: int) -> "MukaiVector":
        return MukaiVector(k * self.r, tuple(k * x for x in self.c1), k * self.a)

    def _check_len(self, other: "MukaiVector"):
        if len(self.c1) != len(other.c1):
            raise InputError("Mukai vectors live in different NS lattices")

    def coords(self) -> tuple[int, ...]:
        return (self.r, *self.c1, self.a)

    @staticmethod
    def from_coords(coords) -> "MukaiVector":
        coords = [int(x) for x in coords]
        if len(coords) < 3:
            raise InputError("a Mukai vector needs at least (r, c1, a)")
        return MukaiVector(coords[0], tuple(coords[1:-1]), coords[-1])

    def is_zero(self) -> bool:
        return self.r == 0 and self.a == 0 and all(x == 0 for x in self.c1)


def _check_surface(v: MukaiVector, S: SurfaceModel):
    if len(v.c1) != S.ns_rank:
        raise InputError(
            f"c1 has length {len(v.c1)} but the surface has ns_rank {S.ns_rank}"
        )


def mukai_pair(v: MukaiVector, w: MukaiVector, S: SurfaceModel) -> int:
    _check_surface(v, S)
    _check_surface(w, S)
    return S.ip(v.c1, w.c1) - v.r * w.a - w.r * v.a


def mukai_square(v: MukaiVector, S: SurfaceModel) -> int:
    return mukai_pair(v, v, S)


def mukai_dual(v: MukaiVector) -> MukaiVector:
    return MukaiVector(v.r, tuple(-x for x in v.c1), v.a)


def divisibility(v: MukaiVector) -> int:
    """gcd of rank and c1 entries; 0 when both vanish."""
    return gcd_all((v.r, *v.c1))


def is_primitive(v: MukaiVector) -> bool:
    return gcd_all(v.coords()) == 1


def is_isotropic(v: MukaiVector, S: SurfaceModel) -> bool:
    return mukai_square(v, S) == 0


def structure_sheaf_vector(S: SurfaceModel) -> MukaiVector:
    return MukaiVector(1, tuple(0 for _ in range(S.ns_rank)), S.euler_todd)


def euler_pairing(v: MukaiVector, w: MukaiVector, S: SurfaceModel) -> int:
    """chi(E,F) = -<v(E), v(F)>."""
    return -mukai_pair(v, w, S)


def is_positive(v: MukaiVector, S: SurfaceModel, effectivity=None) -> bool:
    """Positivity of a Mukai vector, defined for abelian kind only.

    r > 0; or r = 0 with effective nonzero c1 and a != 0; or r = 0, c1 = 0,
    a < 0.
    """
    _check_surface(v, S)
    if S.kind != ABELIAN:
        raise PreconditionError("positivity is defined for abelian surfaces only")
    if effectivity is None:
        effectivity = default_effectivity
    if v.r > 0:
        return True
    if v.r != 0:
        return False
    if any(x != 0 for x in v.c1):
        return v.a != 0 and effectivity(S, v.c1)
    return v.a < 0


def twist(v: MukaiVector, L, S: SurfaceModel) -> MukaiVector:
    """Multiplication by ch(L) = e^L for an NS class L; an isometry."""
    _check_surface(v, S)
    L = tuple(int(x) for x in L)
    l2 = S.ip(L, L)
    # even diagonal makes (L,L) even, so r*(L,L)/2 stays integral
    return MukaiVector(
        v.r,
        tuple(x + v.r * y for x, y in zip(v.c1, L)),
        v.a + S.ip(v.c1, L) + v.r * (l2 // 2),
    )


class ModuliDims(NamedTuple):
    total: int
    fiber: Optional[int]


def moduli_dim(v: MukaiVector, S: SurfaceModel) -> ModuliDims:
    """dim M_H(v) = <v,v> + 2; for abelian kind also the albanese fiber
    dimension <v,v> - 2."""
    sq = mukai_square(v, S)
    fiber = sq - 2 if S.kind == ABELIAN else None
    return ModuliDims(sq + 2, fiber)


def bogomolov_discriminant(v: MukaiVector, S: SurfaceModel) -> Fraction:
    """<v,v>/(2r) for r > 0; negative values flag emptiness."""
    if v.r <= 0:
        raise PreconditionError("Bogomolov discriminant needs positive rank")
    return Fraction(mukai_square(v, S), 2 * v.r)


def decompose_primitive(v: MukaiVector) -> tuple[int, Optional[MukaiVector], int]:
    """Write v = l*(r0 + xi) + a*omega with l = divisibility(v).

    Returns (l, primitive_part, a) where primitive_part has the omega
    coefficient zeroed; primitive_part is None when l = 0.
    """
    ell = divisibility(v)
    if ell == 0:
        return 0, None, v.a
    base = MukaiVector(v.r // ell, tuple(x // ell for x in v.c1), 0)
    return ell, base, v.a


__all__ = [
    "MukaiVector",
    "ModuliDims",
    "mukai_pair",
    "mukai_square",
    "mukai_dual",
    "divisibility",
    "is_primitive",
    "is_isotropic",
    "structure_sheaf_vector",
    "euler_pairing",
    "is_positive",
    "twist",
    "moduli_dim",
    "bogomolov_discriminant",
    "decompose_primitive",
]
