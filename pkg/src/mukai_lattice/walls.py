"""Walls in the positive cone for a fixed (c1, chi) pair.

A potential destabilizer with invariants (D, chiF) cuts the hyperplane
orthogonal to xi = chiF * c1E - chiE * D.  Only (xi, xi) < 0 gives a
wall meeting the positive cone; (xi, xi) = 0 walls are empty there.

Two independent enumerations are provided: ``enumerate_walls`` bounds
candidates by an auxiliary positive-definite form and a quadratic
integer range, while ``brute_force_walls`` scans a coordinate box and
filters by the defining conditions directly.  They must agree exactly;
the command line exposes the comparison.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional, Tuple

from .errors import PreconditionError
from .intlinalg import (
    fraction_inverse,
    gcd_all,
    mat_vec,
    quadratic_int_range,
    short_vectors,
)
from .surface import ABELIAN, SurfaceModel, default_effectivity

__all__ = [
    "WallDatum",
    "enumerate_walls",
    "brute_force_walls",
    "positive_cone_point",
    "SegmentChambers",
    "chambers_on_segment",
    "is_general",
]

Effectivity = Callable[[SurfaceModel, Tuple[int, ...]], bool]


@dataclass(frozen=True)
class WallDatum:
    """A wall, keyed by its primitive normal xi (up to positive scaling),
    with one witnessing destabilizer (first Chern class, Euler number)."""

    xi: Tuple[int, ...]
    witness_c1F: Tuple[int, ...]
    witness_chiF: int

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(int(x) for x in self.xi))
        object.__setattr__(self, "witness_c1F", tuple(int(x) for x in self.witness_c1F))
        object.__setattr__(self, "witness_chiF", int(self.witness_chiF))
        if gcd_all(self.xi) != 1:
            raise PreconditionError("wall normal must be primitive")


def _is_parallel(x, y) -> bool:
    n = len(x)
    for i in range(n):
        for j in range(i + 1, n):
            if x[i] * y[j] != x[j] * y[i]:
                return False
    return True


def _check_inputs(c1e, chie, surface, ample, effectivity):
    c1e = tuple(int(x) for x in c1e)
    if len(c1e) != surface.ns_rank:
        raise PreconditionError("c1 length disagrees with the surface")
    if surface.ip(c1e, c1e) <= 0:
        raise PreconditionError("need (c1E, c1E) > 0")
    if effectivity is None:
        effectivity = default_effectivity
    if not effectivity(surface, c1e):
        raise PreconditionError("c1E must be effective")
    if chie == 0:
        raise PreconditionError("need chi(E) != 0")
    if ample is None:
        ample = surface.ample_ray
    ample = tuple(int(x) for x in ample)
    if not surface.in_positive_cone(ample):
        raise PreconditionError("reference class must lie in the positive cone")
    return c1e, int(chie), ample, effectivity


def _collect(candidates, c1e, chie, surface):
    """Map candidate (D, chiF) pairs to deduplicated, sorted wall data."""
    rho = surface.ns_rank
    best = {}
    for d, chif in candidates:
        xi = tuple(chif * c1e[i] - chie * d[i] for i in range(rho))
        if all(x == 0 for x in xi):
            continue
        if surface.ip(xi, xi) >= 0:
            continue
        g = gcd_all(xi)
        key = tuple(x // g for x in xi)
        witness = (tuple(d), chif)
        if key not in best or witness < best[key]:
            best[key] = witness
    return tuple(
        WallDatum(xi=key, witness_c1F=best[key][0], witness_chiF=best[key][1])
        for key in sorted(best)
    )


def _chif_bounds_exact(a, b, c):
    """Integer chiF range of a*t^2 + b*t + c <= 0, a > 0."""
    return quadratic_int_range(a, b, c)


def enumerate_walls(
    c1e,
    chie: int,
    surface: SurfaceModel,
    ample=None,
    effectivity: Optional[Effectivity] = None,
):
    """All walls cut by candidates D with 0 < (D, L0) <= (c1E, L0).

    Candidate first Chern classes are effective, not rationally
    proportional to c1E, and are enumerated exactly through the
    positive-definite form N(x) = -(x, x) + 2 (x, L0)^2 / (L0, L0).
    Completeness of the bound uses (D, D) >= 0 on abelian surfaces and
    (D, D) >= -2 on the other kind; an effectivity oracle admitting
    smaller squares voids it.
    """
    c1e, chie, ample, effectivity = _check_inputs(c1e, chie, surface, ample, effectivity)
    rho = surface.ns_rank
    gram = surface.ns_gram
    l0sq = surface.ip(ample, ample)
    t_cap = surface.ip(c1e, ample)
    b_min = 0 if surface.kind == ABELIAN else -2
    gl0 = mat_vec(gram, ample)
    aux = tuple(
        tuple(-2 * l0sq * gram[i][j] + 4 * gl0[i] * gl0[j] for j in range(rho))
        for i in range(rho)
    )
    cap = -2 * l0sq * b_min + 4 * t_cap * t_cap

    def candidate_pairs():
        seen = set()
        for half in short_vectors(aux, cap):
            for d in (half, tuple(-x for x in half)):
                if d in seen:
                    continue
                seen.add(d)
                pair = surface.ip(d, ample)
                if pair <= 0 or pair > t_cap:
                    continue
                if _is_parallel(d, c1e):
                    continue
                if not effectivity(surface, d):
                    continue
                rng = _chif_bounds_exact(
                    surface.ip(c1e, c1e),
                    -2 * chie * surface.ip(c1e, d),
                    chie * chie * surface.ip(d, d),
                )
                if rng is None:
                    continue
                lo, hi = rng
                for chif in range(lo, hi + 1):
                    yield d, chif

    return _collect(candidate_pairs(), c1e, chie, surface)


def brute_force_walls(
    c1e,
    chie: int,
    surface: SurfaceModel,
    ample=None,
    effectivity: Optional[Effectivity] = None,
):
    """Independent reference enumeration over a coordinate box.

    The box radii come from x_i^2 <= C * (M^-1)_ii for the same
    positive-definite bound, but candidates are then filtered by the
    defining inequalities directly and chiF is scanned over a crude
    safe interval with the wall inequality tested verbatim.
    """
    c1e, chie, ample, effectivity = _check_inputs(c1e, chie, surface, ample, effectivity)
    rho = surface.ns_rank
    gram = surface.ns_gram
    l0sq = surface.ip(ample, ample)
    t_cap = surface.ip(c1e, ample)
    b_min = 0 if surface.kind == ABELIAN else -2
    gl0 = mat_vec(gram, ample)
    aux = tuple(
        tuple(-2 * l0sq * gram[i][j] + 4 * gl0[i] * gl0[j] for j in range(rho))
        for i in range(rho)
    )
    cap = -2 * l0sq * b_min + 4 * t_cap * t_cap
    inv = fraction_inverse(aux)
    radii = []
    for i in range(rho):
        q = cap * inv[i][i]
        if q < 0:
            raise PreconditionError("auxiliary form must be positive definite")
        radii.append(isqrt(q.numerator // q.denominator))

    def box(i):
        if i == rho:
            yield ()
            return
        for rest in box(i + 1):
            for x in range(-radii[i], radii[i] + 1):
                yield (x,) + rest

    def candidate_pairs():
        for d in box(0):
            if all(x == 0 for x in d):
                continue
            pair = surface.ip(d, ample)
            if pair <= 0 or pair > t_cap:
                continue
            if surface.ip(d, d) < b_min:
                continue
            if _is_parallel(d, c1e):
                continue
            if not effectivity(surface, d):
                continue
            b = -2 * chie * surface.ip(c1e, d)
            c = chie * chie * surface.ip(d, d)
            width = abs(b) + abs(c) + 1
            for chif in range(-width, width + 1):
                xi = tuple(chif * c1e[i] - chie * d[i] for i in range(rho))
                if surface.ip(xi, xi) < 0:
                    yield d, chif

    return _collect(candidate_pairs(), c1e, chie, surface)


def positive_cone_point(xi, surface: SurfaceModel, ample=None):
    """An exact integer point on the wall inside the positive cone,
    on the same side as the reference class."""
    if ample is None:
        ample = surface.ample_ray
    ample = tuple(int(x) for x in ample)
    xi = tuple(int(x) for x in xi)
    xisq = surface.ip(xi, xi)
    if xisq >= 0:
        raise PreconditionError("only (xi, xi) < 0 walls meet the positive cone")
    mixed = surface.ip(ample, xi)
    x = tuple(xisq * ample[i] - mixed * xi[i] for i in range(surface.ns_rank))
    if surface.ip(x, ample) < 0:
        x = tuple(-c for c in x)
    if surface.ip(x, x) <= 0 or surface.ip(x, xi) != 0:
        raise PreconditionError("wall certificate failed")
    return x


@dataclass(frozen=True)
class SegmentChambers:
    """Open chambers met by the segment from p0 to p1.

    crossings are the wall parameters in (0, 1); intervals are the open
    chamber pieces between them; representatives are exact rational
    points, one per piece."""

    crossings: Tuple[Fraction, ...]
    intervals: Tuple[Tuple[Fraction, Fraction], ...]
    representatives: Tuple[Tuple[Fraction, ...], ...]
    p0_on_wall: bool
    p1_on_wall: bool


def chambers_on_segment(walls, p0, p1, surface: SurfaceModel) -> SegmentChambers:
    p0 = tuple(int(x) for x in p0)
    p1 = tuple(int(x) for x in p1)
    if not surface.in_positive_cone(p0) or not surface.in_positive_cone(p1):
        raise PreconditionError("segment endpoints must lie in the positive cone")
    crossings = set()
    p0_on = False
    p1_on = False
    for wall in walls:
        a = surface.ip(p0, wall.xi)
        b = surface.ip(p1, wall.xi)
        if a == 0:
            p0_on = True
        if b == 0:
            p1_on = True
        if a == b:
            continue
        t = Fraction(a, a - b)
        if 0 < t < 1:
            crossings.add(t)
    ordered = tuple(sorted(crossings))
    cuts = (Fraction(0),) + ordered + (Fraction(1),)
    intervals = tuple((cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1))
    reps = []
    for lo, hi in intervals:
        t = (lo + hi) / 2
        reps.append(tuple((1 - t) * p0[i] + t * p1[i] for i in range(surface.ns_rank)))
    return SegmentChambers(
        crossings=ordered,
        intervals=intervals,
        representatives=tuple(reps),
        p0_on_wall=p0_on,
        p1_on_wall=p1_on,
    )


def is_general(h, walls, surface: SurfaceModel) -> bool:
    """Whether h avoids every wall; h must lie in the positive cone."""
    h = tuple(int(x) for x in h)
    if not surface.in_positive_cone(h):
        raise PreconditionError("generality is tested inside the positive cone")
    return all(surface.ip(h, wall.xi) != 0 for wall in walls)
