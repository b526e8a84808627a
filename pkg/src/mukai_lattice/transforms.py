"""Cohomological actions of the integral transforms, as exact matrices.

An IsometryMap sends coordinates (r, c1..., a) on the source surface
to coordinates on the target surface; construction verifies
matrix^T * Gram(target) * matrix = Gram(source) exactly.

The elliptic transform acts on (rank, c1, chi) triples of a fixed
affine shape rather than linearly on the whole lattice, so it gets its
own triple-level interface with a round-trip inverse.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple

from .errors import InputError, InternalInvariantError, PreconditionError
from .intlinalg import fraction_inverse, mat_mul, mat_vec, transpose
from .lattices import ambient_gram
from .surface import SurfaceModel
from .vectors import MukaiVector, is_primitive, mukai_dual, mukai_pair

__all__ = [
    "LABELS",
    "IsometryMap",
    "dual_map",
    "twist_map",
    "poincare_fm_map",
    "poincare_g_map",
    "poincare_fm",
    "poincare_g",
    "IsotropicFMParams",
    "isotropic_fm",
    "isotropic_g",
    "ChernChiTriple",
    "EllipticFibration",
    "EllipticImage",
    "elliptic_fm",
    "elliptic_params_of_triple",
    "elliptic_fm_inverse",
    "triple_from_vector",
    "vector_from_triple",
    "ReflectionDualResult",
    "reflection_dual",
    "twisted_degree",
]

LABELS = (
    "PoincareF",
    "PoincareG",
    "IsotropicF",
    "IsotropicG",
    "EllipticF",
    "ReflectionDual",
    "Dual",
    "Twist",
)


@dataclass(frozen=True)
class IsometryMap:
    source: SurfaceModel
    target: SurfaceModel
    matrix: Tuple[Tuple[int, ...], ...]
    label: str

    def __post_init__(self):
        if self.label not in LABELS:
            raise InputError("unknown transform label: %r" % (self.label,))
        n = self.source.ns_rank + 2
        if self.target.ns_rank != self.source.ns_rank:
            raise PreconditionError("source and target lattices must share a rank")
        matrix = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", matrix)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise PreconditionError("matrix shape disagrees with the lattice rank")
        gs = ambient_gram(self.source)
        gt = ambient_gram(self.target)
        carried = mat_mul(transpose(matrix), mat_mul(gt, matrix))
        if [list(row) for row in carried] != [list(row) for row in gs]:
            raise InternalInvariantError("transform matrix is not an isometry")

    def apply(self, v: MukaiVector) -> MukaiVector:
        if len(v.c1) != self.source.ns_rank:
            raise PreconditionError("vector length disagrees with the source surface")
        return MukaiVector.from_coords(mat_vec(self.matrix, v.coords()))

    def inverse(self) -> "IsometryMap":
        inv = fraction_inverse(self.matrix)
        rows = []
        for row in inv:
            out = []
            for x in row:
                if x.denominator != 1:
                    raise InternalInvariantError("isometry inverse left the lattice")
                out.append(x.numerator)
            rows.append(tuple(out))
        return IsometryMap(
            source=self.target, target=self.source, matrix=tuple(rows), label=self.label
        )

    def compose(self, other: "IsometryMap", label: Optional[str] = None) -> "IsometryMap":
        """self after other."""
        if other.target != self.source:
            raise PreconditionError("composition needs matching surfaces")
        return IsometryMap(
            source=other.source,
            target=self.target,
            matrix=mat_mul(self.matrix, other.matrix),
            label=label if label is not None else self.label,
        )


def dual_map(surface: SurfaceModel) -> IsometryMap:
    """(r, c1, a) -> (r, -c1, a)."""
    n = surface.ns_rank + 2
    rows = []
    for i in range(n):
        row = [0] * n
        row[i] = -1 if 1 <= i <= surface.ns_rank else 1
        rows.append(tuple(row))
    return IsometryMap(surface, surface, tuple(rows), "Dual")


def twist_map(line_class, surface: SurfaceModel) -> IsometryMap:
    """Tensoring by the line bundle with first Chern class `line_class`."""
    line = tuple(int(x) for x in line_class)
    if len(line) != surface.ns_rank:
        raise PreconditionError("twist class length disagrees with the surface")
    sq = surface.ip(line, line)
    rho = surface.ns_rank
    n = rho + 2
    rows = [[0] * n for _ in range(n)]
    rows[0][0] = 1
    for i in range(rho):
        rows[1 + i][0] = line[i]
        rows[1 + i][1 + i] = 1
    rows[n - 1][0] = sq // 2
    for j in range(rho):
        basis = tuple(1 if t == j else 0 for t in range(rho))
        rows[n - 1][1 + j] = surface.ip(basis, line)
    rows[n - 1][n - 1] = 1
    return IsometryMap(surface, surface, tuple(tuple(r) for r in rows), "Twist")


def _require_rank_one(surface: SurfaceModel, what: str):
    if surface.ns_rank != 1:
        raise PreconditionError("%s needs a rank-1 Neron-Severi lattice" % what)


def poincare_fm_map(surface: SurfaceModel) -> IsometryMap:
    """(r, d, a) -> (a, -d, r); self-inverse on the dual abelian surface."""
    if surface.kind != "abelian":
        raise PreconditionError("the Poincare kernel lives on an abelian surface")
    _require_rank_one(surface, "the Poincare transform")
    m = ((0, 0, 1), (0, -1, 0), (1, 0, 0))
    return IsometryMap(surface, surface, m, "PoincareF")


def poincare_g_map(surface: SurfaceModel) -> IsometryMap:
    """Dual composed with the Poincare transform: (r, d, a) -> (a, d, r)."""
    f = poincare_fm_map(surface)
    return dual_map(surface).compose(f, label="PoincareG")


def poincare_fm(v: MukaiVector, surface: SurfaceModel) -> MukaiVector:
    return poincare_fm_map(surface).apply(v)


def poincare_g(v: MukaiVector, surface: SurfaceModel) -> MukaiVector:
    return poincare_g_map(surface).apply(v)


@dataclass(frozen=True)
class IsotropicFMParams:
    """Numerical data of an isotropic transform on NS = Z*H, (H^2) = 2*r0*k.

    v0 = (r0, d0, d0^2 k) is the primitive isotropic vector; (d1, l) is
    a Bezout pair with d1*(k*d0) - l*r0 = 1, chosen canonically with
    0 <= d1 < r0 when not supplied.
    """

    r0: int
    d0: int
    k: int
    d1: Optional[int] = field(default=None)
    l: Optional[int] = field(default=None)

    def __post_init__(self):
        if self.r0 <= 0 or self.k <= 0:
            raise PreconditionError("need r0 > 0 and k > 0")
        if gcd(self.r0, self.k) != 1:
            raise PreconditionError("need gcd(r0, k) = 1")
        if gcd(self.r0, self.d0) != 1:
            raise PreconditionError("need gcd(r0, d0) = 1")
        if (self.d1 is None) != (self.l is None):
            raise PreconditionError("supply the Bezout pair (d1, l) together or not at all")
        if self.d1 is None:
            if self.r0 == 1:
                d1 = 0
            else:
                d1 = pow(self.k * self.d0, -1, self.r0)
            l = (d1 * self.k * self.d0 - 1) // self.r0
            object.__setattr__(self, "d1", d1)
            object.__setattr__(self, "l", l)
        if self.d1 * self.k * self.d0 - self.l * self.r0 != 1:
            raise PreconditionError("(d1, l) must satisfy d1*k*d0 - l*r0 = 1")

    @property
    def h_square(self) -> int:
        return 2 * self.r0 * self.k

    def v0(self) -> MukaiVector:
        return MukaiVector(self.r0, (self.d0,), self.d0 * self.d0 * self.k)

    def w0(self) -> MukaiVector:
        return MukaiVector(self.r0, (self.d1,), self.d1 * self.d1 * self.k)


def isotropic_fm(
    params: IsotropicFMParams, surface: Optional[SurfaceModel] = None
) -> IsometryMap:
    """Cohomological action of the transform attached to v0 = (r0, d0, d0^2 k).

    Sends the dual of v0 to the class of a point on the moduli side;
    works over either surface kind with NS = Z*H, defaulting to the
    abelian model of degree 2*r0*k.
    """
    if surface is None:
        surface = SurfaceModel(kind="abelian", ns_gram=((params.h_square,),))
    _require_rank_one(surface, "the isotropic transform")
    if surface.ns_gram[0][0] != params.h_square:
        raise PreconditionError("surface polarization degree disagrees with 2*r0*k")
    r0, d0, k, d1, l = params.r0, params.d0, params.k, params.d1, params.l
    col_1 = (d0 * d0 * k, d0 * l, l * l * r0)
    col_h = (
        2 * d0 * k * r0,
        2 * d0 * k * d1 - 1,
        2 * d0 * k * k * d1 * d1 - 2 * d1 * k,
    )
    col_w = (r0, d1, d1 * d1 * k)
    m = tuple(
        (col_1[i], col_h[i], col_w[i]) for i in range(3)
    )
    fm = IsometryMap(surface, surface, m, "IsotropicF")
    if fm.apply(mukai_dual(params.v0())) != MukaiVector(0, (0,), 1):
        raise InternalInvariantError("transform must send the dual of v0 to omega")
    if fm.apply(MukaiVector(0, (0,), 1)) != params.w0():
        raise InternalInvariantError("transform must send omega to w0")
    return fm


def isotropic_g(
    params: IsotropicFMParams, surface: Optional[SurfaceModel] = None
) -> IsometryMap:
    """Dual composed with the isotropic transform."""
    f = isotropic_fm(params, surface)
    return dual_map(f.source).compose(f, label="IsotropicG")


@dataclass(frozen=True)
class ChernChiTriple:
    """(rank, first Chern class, Euler characteristic)."""

    r: int
    c1: Tuple[int, ...]
    chi: int

    def __post_init__(self):
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "c1", tuple(int(x) for x in self.c1))
        object.__setattr__(self, "chi", int(self.chi))


@dataclass(frozen=True)
class EllipticFibration:
    """An elliptic surface with a section sigma, fiber class f, and a
    second multisection-type class tau with (tau, f) = 1, (tau^2) = (sigma^2).

    A section forces (sigma^2) = -chi(O); d_tau = (tau, sigma) - (sigma^2)
    measures how far tau sits from sigma.
    """

    surface: SurfaceModel
    sigma: Tuple[int, ...]
    f: Tuple[int, ...]
    tau: Tuple[int, ...]

    def __post_init__(self):
        for name in ("sigma", "f", "tau"):
            val = tuple(int(x) for x in getattr(self, name))
            object.__setattr__(self, name, val)
            if len(val) != self.surface.ns_rank:
                raise PreconditionError("%s length disagrees with the surface" % name)
        s = self.surface
        if s.ip(self.f, self.f) != 0 or all(x == 0 for x in self.f):
            raise PreconditionError("f must be a nonzero isotropic fiber class")
        if s.ip(self.sigma, self.f) != 1:
            raise PreconditionError("need (sigma, f) = 1")
        if s.ip(self.tau, self.f) != 1:
            raise PreconditionError("need (tau, f) = 1")
        if s.ip(self.sigma, self.sigma) != -s.chi_structure_sheaf:
            raise PreconditionError("a section satisfies (sigma^2) = -chi(O)")
        if s.ip(self.tau, self.tau) != s.ip(self.sigma, self.sigma):
            raise PreconditionError("need (tau^2) = (sigma^2)")
        if self.d_tau < 0:
            raise PreconditionError("need (tau, sigma) - (sigma^2) >= 0")

    @property
    def chi_structure(self) -> int:
        return self.surface.chi_structure_sheaf

    @property
    def d_tau(self) -> int:
        return self.surface.ip(self.tau, self.sigma) - self.surface.ip(
            self.sigma, self.sigma
        )


@dataclass(frozen=True)
class EllipticImage:
    """Source and image triples of the elliptic transform.

    sign records that the transform realizes the image with a single
    cohomological sign twist; all_stable reports gcd(r, l, n) = 1, under
    which every semistable sheaf in the family is stable.
    """

    source: ChernChiTriple
    image: ChernChiTriple
    sign: int
    r: int
    l: int
    n: int
    all_stable: bool


def _solve_multiple(delta, f):
    """m with delta = m*f, or None."""
    m = None
    for d, c in zip(delta, f):
        if c != 0:
            q, rem = divmod(d, c)
            if rem:
                return None
            if m is None:
                m = q
            elif m != q:
                return None
    if m is None:
        return None
    if tuple(m * c for c in f) != tuple(delta):
        return None
    return m


def elliptic_fm(r: int, l: int, n: int, fib: EllipticFibration) -> EllipticImage:
    """Transform (r, sigma - tau + (l + d)f, r*chi(O) - n) with r > 0 and
    r + l > 0 to (0, tau + (r-1)sigma + (n-d)f, r + l)."""
    s = fib.surface
    if r <= 0:
        raise PreconditionError("the transform needs positive rank")
    if r + l <= 0:
        raise PreconditionError(
            "hypothesis violated: image rank r + l must be positive (the"
            " r + l < 0 regime belongs to a different transform and is not"
            " computed)"
        )
    d = fib.d_tau
    c1_src = tuple(
        fib.sigma[i] - fib.tau[i] + (l + d) * fib.f[i] for i in range(s.ns_rank)
    )
    source = ChernChiTriple(r, c1_src, r * fib.chi_structure - n)
    c1_out = tuple(
        fib.tau[i] + (r - 1) * fib.sigma[i] + (n - d) * fib.f[i]
        for i in range(s.ns_rank)
    )
    image = ChernChiTriple(0, c1_out, r + l)
    return EllipticImage(
        source=source,
        image=image,
        sign=-1,
        r=r,
        l=l,
        n=n,
        all_stable=gcd(gcd(r, l), n) == 1,
    )


def elliptic_params_of_triple(triple: ChernChiTriple, fib: EllipticFibration):
    """Read (r, l, n) off a source triple of the transform's shape."""
    s = fib.surface
    if len(triple.c1) != s.ns_rank:
        raise PreconditionError("c1 length disagrees with the surface")
    if triple.r <= 0:
        raise PreconditionError("the transform needs positive rank")
    delta = tuple(
        triple.c1[i] + fib.tau[i] - fib.sigma[i] for i in range(s.ns_rank)
    )
    m = _solve_multiple(delta, fib.f)
    if m is None:
        raise PreconditionError("c1 must have the shape sigma - tau + m*f")
    l = m - fib.d_tau
    n = triple.r * fib.chi_structure - triple.chi
    return triple.r, l, n


def elliptic_fm_inverse(triple: ChernChiTriple, fib: EllipticFibration) -> EllipticImage:
    """Recover the unique preimage of a rank-0 image triple, verifying the
    round trip exactly."""
    s = fib.surface
    if triple.r != 0:
        raise PreconditionError("images of the transform have rank 0")
    r = s.ip(triple.c1, fib.f)
    if r <= 0:
        raise PreconditionError("triple is not in the image: (c1, f) must be positive")
    n = s.ip(triple.c1, fib.sigma) - r * s.ip(fib.sigma, fib.sigma)
    l = triple.chi - r
    result = elliptic_fm(r, l, n, fib)
    if result.image != triple:
        raise PreconditionError("triple is not in the image of the transform")
    return result


def triple_from_vector(v: MukaiVector, surface: SurfaceModel) -> ChernChiTriple:
    """chi = a + epsilon * r."""
    return ChernChiTriple(v.r, v.c1, v.a + surface.euler_todd * v.r)


def vector_from_triple(t: ChernChiTriple, surface: SurfaceModel) -> MukaiVector:
    return MukaiVector(t.r, t.c1, t.chi - surface.euler_todd * t.r)


@dataclass(frozen=True)
class ReflectionDualResult:
    """Image of l*v1 - a*omega under the reflection-type transform.

    l and a may be proper fractions with denominator dividing the
    divisibility of v1; the image a*w1 - l*omega is always integral.
    applicable records the hypothesis l > 0 and a > 0.
    """

    vector: MukaiVector
    l: Fraction
    a: Fraction
    applicable: bool
    sign: int


def reflection_dual(
    v: MukaiVector, v1: MukaiVector, w1: MukaiVector, surface: SurfaceModel
) -> ReflectionDualResult:
    """Send v = l*v1 - a*omega to a*w1 - l*omega.

    v1 must be a primitive isotropic vector of positive rank; w1 is the
    image of omega under the transform attached to v1 and necessarily
    has rank r(v1) and square zero.
    """
    rho = surface.ns_rank
    for x in (v, v1, w1):
        if len(x.c1) != rho:
            raise PreconditionError("vector length disagrees with the surface")
    if v1.r <= 0:
        raise PreconditionError("v1 must have positive rank")
    if not is_primitive(v1):
        raise PreconditionError("v1 must be primitive")
    if mukai_pair(v1, v1, surface) != 0:
        raise PreconditionError("v1 must be isotropic")
    if w1.r != v1.r:
        raise PreconditionError("w1 must have rank r(v1)")
    if mukai_pair(w1, w1, surface) != 0:
        raise PreconditionError("w1 must be isotropic")
    l = Fraction(v.r, v1.r)
    if tuple(l * c for c in v1.c1) != tuple(Fraction(c) for c in v.c1):
        raise PreconditionError("v is not in the span of v1 and omega")
    a = l * v1.a - v.a
    r_out = a * w1.r
    c_out = tuple(a * c for c in w1.c1)
    a_out = a * w1.a - l
    for x in (r_out, a_out) + c_out:
        if x.denominator != 1:
            raise PreconditionError("image a*w1 - l*omega is not integral")
    vector = MukaiVector(int(r_out), tuple(int(c) for c in c_out), int(a_out))
    return ReflectionDualResult(
        vector=vector,
        l=l,
        a=a,
        applicable=l > 0 and a > 0,
        sign=-1,
    )


def twisted_degree(v: MukaiVector, g: MukaiVector, surface: SurfaceModel) -> int:
    """deg_G(v) = (r(G) c1(v) - r(v) c1(G), ample ray)."""
    if g.r <= 0:
        raise PreconditionError("the twisting vector needs positive rank")
    if len(v.c1) != surface.ns_rank or len(g.c1) != surface.ns_rank:
        raise PreconditionError("vector length disagrees with the surface")
    mixed = tuple(g.r * v.c1[i] - v.r * g.c1[i] for i in range(surface.ns_rank))
    return surface.ip(mixed, surface.ample_ray)
