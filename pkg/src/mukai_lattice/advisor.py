"""Decision procedures over the Mukai pairing.

For a surface model and a Mukai vector, report which of the supported
isomorphism / birationality / deformation statements applies, each as a
Verdict carrying the checked hypotheses, the image vector with its
cohomological sign, and an abstract tag for the target side.  Also
houses the square-4 reduction to an isotropic class and the counts of
the non-fibered locus for <v, v> = 2r.

Nothing here raises on an inapplicable statement: failed hypotheses are
data, recorded condition by condition.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple

from .errors import InputError, InternalInvariantError, PreconditionError
from .surface import ABELIAN, K3, SurfaceModel
from .transforms import (
    EllipticFibration,
    IsotropicFMParams,
    elliptic_fm,
    elliptic_params_of_triple,
    isotropic_fm,
    reflection_dual,
    triple_from_vector,
    vector_from_triple,
)
from .vectors import (
    MukaiVector,
    divisibility,
    is_positive,
    is_primitive,
    mukai_dual,
    mukai_pair,
    mukai_square,
)

__all__ = [
    "VERDICT_IDS",
    "MAP_KINDS",
    "CheckedCondition",
    "Target",
    "Verdict",
    "classify",
    "thm7_7_verdicts",
    "thm8_2_verdict",
    "thm8_5_verdict",
    "thm3_15_verdict",
    "DeformationClass",
    "deformation_class",
    "KUMMER_CASE_TAGS",
    "KummerReduction",
    "kummer4_reduce",
    "special_locus",
]

VERDICT_IDS = (
    "Prop3_2",
    "Cor3_3",
    "Cor3_4",
    "Prop3_5",
    "Thm3_15",
    "Thm4_23i",
    "Thm4_23ii",
    "Thm7_7F",
    "Thm7_7G",
    "Thm8_2",
    "Thm8_5",
    "PropDeform",
    "ThmK3Deform",
    "Conjecture4_22",
)

MAP_KINDS = ("isomorphism", "birational", "open-immersion", "conjectural")


@dataclass(frozen=True)
class CheckedCondition:
    """One hypothesis with its outcome.

    required=False marks informational entries (justifying sub-cases,
    remarks); they never block applicability.
    """

    name: str
    value: bool
    required: bool = True

    @property
    def holds(self) -> bool:
        return self.value or not self.required


@dataclass(frozen=True)
class Target:
    """Where an applicable statement sends the moduli space.

    surface_label is an abstract tag ("dual surface", "FM partner Y",
    "same surface"); only the numerics transfer, no geometry is built.
    vector is None for statements that fix the deformation type or stay
    conjectural without picking an image class.
    """

    surface_label: str
    vector: Optional[MukaiVector]
    kind: str

    def __post_init__(self):
        if self.kind not in MAP_KINDS:
            raise InputError("unknown map kind %r" % (self.kind,))


@dataclass(frozen=True)
class Verdict:
    theorem_id: str
    applicable: bool
    checked_conditions: Tuple[CheckedCondition, ...]
    target: Optional[Target] = field(default=None)
    sign_of_image: int = field(default=1)

    def __post_init__(self):
        if self.theorem_id not in VERDICT_IDS:
            raise InputError("unknown theorem id %r" % (self.theorem_id,))
        if self.sign_of_image not in (1, -1):
            raise InputError("sign_of_image must be +1 or -1")
        object.__setattr__(
            self, "checked_conditions", tuple(self.checked_conditions)
        )
        if self.applicable != all(c.holds for c in self.checked_conditions):
            raise InternalInvariantError(
                "applicability must equal the conjunction of required conditions"
            )
        if self.theorem_id == "Conjecture4_22":
            if self.target is not None and self.target.kind != "conjectural":
                raise InternalInvariantError(
                    "the conjectural statement never asserts a map kind"
                )


def _verdict(theorem_id, conds, target: Optional[Target], sign: int) -> Verdict:
    """Assemble a Verdict; the target is dropped unless all conditions hold."""
    conds = tuple(conds)
    applicable = all(c.holds for c in conds)
    return Verdict(
        theorem_id=theorem_id,
        applicable=applicable,
        checked_conditions=conds,
        target=target if applicable else None,
        sign_of_image=sign,
    )


def _check_same_surface(v: MukaiVector, surface: SurfaceModel):
    if len(v.c1) != surface.ns_rank:
        raise PreconditionError("vector length disagrees with the surface")


# ---------------------------------------------------------------------------
# rank-one Poincare statements


def _rank1_poincare_verdicts(v: MukaiVector, surface: SurfaceModel):
    d = v.c1[0]
    sq = mukai_square(v, surface)
    out = []

    conds = [
        CheckedCondition("c1 = H", d == 1),
        CheckedCondition("a > 0", v.a > 0),
        CheckedCondition("r >= 0", v.r >= 0),
        CheckedCondition(
            "r > 0 (r = 0 is still an isomorphism by the rank-zero remark)",
            v.r > 0,
            required=False,
        ),
    ]
    out.append(
        _verdict(
            "Prop3_2",
            conds,
            Target("dual surface", MukaiVector(v.a, (1,), v.r), "isomorphism"),
            1,
        )
    )

    conds = [
        CheckedCondition("c1 = H", d == 1),
        CheckedCondition("2a > <v, v>", 2 * v.a > sq),
        CheckedCondition(
            "image classes are mu-stable locally free; stated on that locus",
            True,
            required=False,
        ),
    ]
    out.append(
        _verdict(
            "Cor3_3",
            conds,
            Target("dual surface", MukaiVector(v.a, (-1,), v.r), "open-immersion"),
            1,
        )
    )

    conds = [
        CheckedCondition("c1 = -H", d == -1),
        CheckedCondition("a > 0", v.a > 0),
        CheckedCondition(
            "stated for mu-stable locally free members",
            True,
            required=False,
        ),
    ]
    out.append(
        _verdict(
            "Cor3_4",
            conds,
            Target("dual surface", MukaiVector(v.a, (1,), v.r), "open-immersion"),
            1,
        )
    )

    conds = [
        CheckedCondition("c1 = H", d == 1),
        CheckedCondition("a < 0", v.a < 0),
        CheckedCondition("r > 0", v.r > 0),
    ]
    out.append(
        _verdict(
            "Prop3_5",
            conds,
            Target("dual surface", MukaiVector(-v.a, (1,), -v.r), "isomorphism"),
            -1,
        )
    )
    return out


def _thm4_23_verdicts(v: MukaiVector, surface: SurfaceModel):
    d = v.c1[0]
    standing = [
        CheckedCondition("v primitive", is_primitive(v)),
        CheckedCondition("r > 0", v.r > 0),
        CheckedCondition("d >= 0", d >= 0),
    ]

    conds_i = standing + [
        CheckedCondition("a <= 0", v.a <= 0),
        CheckedCondition("d > 0", d > 0),
    ]
    verdict_i = _verdict(
        "Thm4_23i",
        conds_i,
        Target("dual surface", MukaiVector(-v.a, (d,), -v.r), "birational"),
        -1,
    )

    conds_ii = standing + [
        CheckedCondition("d = 0 or 0 < a <= 4", d == 0 or 0 < v.a <= 4),
    ]
    if v.r > 0:
        subcases = []
        if d % v.r == 1 % v.r:
            subcases.append("justified by: d = 1 (mod r)")
        if (d + 1) % v.r == 0:
            subcases.append("justified by: d = -1 (mod r)")
        if d % v.r == 0 and gcd(v.r, v.a) == 1:
            subcases.append("justified by: r | d with gcd(r, a) = 1")
        if v.r == 4 and d % 4 == 2 and v.a % 2 == 1:
            subcases.append("justified by: (r, d, a) = (4, 2 mod 4, odd)")
        for name in subcases:
            conds_ii.append(CheckedCondition(name, True, required=False))
        if not subcases:
            conds_ii.append(
                CheckedCondition(
                    "no special sub-case matched; the general statement is used",
                    True,
                    required=False,
                )
            )
    verdict_ii = _verdict(
        "Thm4_23ii",
        conds_ii,
        Target("dual surface", MukaiVector(v.a, (d,), v.r), "birational"),
        1,
    )
    return [verdict_i, verdict_ii]


# ---------------------------------------------------------------------------
# verdicts attached to extra transform data


def thm7_7_verdicts(
    v: MukaiVector,
    params: IsotropicFMParams,
    surface: Optional[SurfaceModel] = None,
) -> Tuple[Verdict, Verdict]:
    """The two isotropic-transform statements, one per pairing sign.

    Standing hypothesis d*r0 + r*d0 = 1 with v = r + d*H + a*omega; the
    positive direction of <v, v0_dual> picks which functor applies.
    """
    fm = isotropic_fm(params, surface)
    surface = fm.source
    _check_same_surface(v, surface)
    d = v.c1[0]
    standing = [
        CheckedCondition(
            "d*r0 + r*d0 = 1", d * params.r0 + v.r * params.d0 == 1
        ),
        CheckedCondition(
            "universal-fiber stability: automatic for rank-1 NS", True
        ),
    ]
    pairing = mukai_pair(v, mukai_dual(params.v0()), surface)
    image = fm.apply(v)

    conds_f = standing + [CheckedCondition("-<v, v0_dual> > 0", -pairing > 0)]
    verdict_f = _verdict(
        "Thm7_7F",
        conds_f,
        Target("FM partner Y", mukai_dual(image), "isomorphism"),
        1,
    )
    conds_g = standing + [CheckedCondition("<v, v0_dual> > 0", pairing > 0)]
    verdict_g = _verdict(
        "Thm7_7G",
        conds_g,
        Target("FM partner Y", -image, "isomorphism"),
        -1,
    )
    return verdict_f, verdict_g


def thm8_2_verdict(v: MukaiVector, surface: SurfaceModel) -> Verdict:
    """Reflection through the induced (-2)-class on a K3 model.

    Writes v = l(r0 + xi) + a*omega with l the divisibility; when r0
    divides (xi^2)/2 + 1 the class v0 = r0 + xi + a0*omega is a
    (-2)-vector, and l < b*r0 < 2l sends v to (b*r0 - l)*v0_dual - b*omega
    on the same surface.
    """
    if surface.kind != K3:
        raise PreconditionError("this reflection statement needs a K3 model")
    _check_same_surface(v, surface)
    conds = [
        CheckedCondition("v primitive", is_primitive(v)),
        CheckedCondition("r > 0", v.r > 0),
    ]
    ell = divisibility(v)
    if v.r <= 0 or ell == 0:
        conds.append(CheckedCondition("positive divisibility", ell > 0))
        return _verdict("Thm8_2", conds, None, -1)
    r0 = v.r // ell
    xi = tuple(x // ell for x in v.c1)
    xi2 = surface.ip(xi, xi)
    divides = (xi2 // 2 + 1) % r0 == 0
    conds.append(CheckedCondition("r0 divides (xi^2)/2 + 1", divides))
    if not divides:
        return _verdict("Thm8_2", conds, None, -1)
    a0 = (xi2 // 2 + 1) // r0
    v0 = MukaiVector(r0, xi, a0)
    if mukai_square(v0, surface) != -2:
        raise InternalInvariantError("induced class must have square -2")
    b = ell * a0 - v.a
    conds.append(CheckedCondition("l < b*r0", ell < b * r0))
    conds.append(CheckedCondition("b*r0 < 2l", b * r0 < 2 * ell))
    conds.append(
        CheckedCondition("general polarization assumed", True, required=False)
    )
    m = b * r0 - ell
    w = MukaiVector(
        m * r0, tuple(-m * x for x in xi), m * a0 - b
    )
    verdict = _verdict(
        "Thm8_2", conds, Target("same surface", w, "isomorphism"), -1
    )
    if verdict.applicable and mukai_square(w, surface) != mukai_square(v, surface):
        raise InternalInvariantError("reflection image changed the square")
    return verdict


def thm8_5_verdict(
    v: MukaiVector,
    v1: MukaiVector,
    w1: MukaiVector,
    surface: SurfaceModel,
    star_asserted: bool = False,
) -> Verdict:
    """Reflection through a primitive isotropic v1, dualized.

    v1 and w1 must form a valid transform pair (checked strictly); the
    membership of v in span{v1, omega} and the signs l, a > 0 are data.
    """
    # validate the pair eagerly so bad transform data raises instead of
    # reading as an inapplicable statement
    if v1.r <= 0 or not is_primitive(v1) or mukai_pair(v1, v1, surface) != 0:
        raise PreconditionError("v1 must be primitive isotropic of positive rank")
    if w1.r != v1.r or mukai_pair(w1, w1, surface) != 0:
        raise PreconditionError("w1 must be isotropic of rank r(v1)")
    conds = []
    try:
        res = reflection_dual(v, v1, w1, surface)
    except PreconditionError:
        conds.append(
            CheckedCondition(
                "v lies in span{v1, omega} with integral image", False
            )
        )
        res = None
    if res is not None:
        conds.append(
            CheckedCondition("v lies in span{v1, omega} with integral image", True)
        )
        conds.append(CheckedCondition("l > 0", res.l > 0))
        conds.append(CheckedCondition("a > 0", res.a > 0))
    if surface.ns_rank == 1:
        conds.append(
            CheckedCondition(
                "universal-fiber stability: automatic for rank-1 NS", True
            )
        )
    elif surface.kind == ABELIAN:
        conds.append(
            CheckedCondition(
                "universal-fiber stability: holds for general H on abelian models",
                True,
            )
        )
    else:
        conds.append(
            CheckedCondition(
                "universal-fiber stability: user-asserted", bool(star_asserted)
            )
        )
    target = None
    if res is not None:
        target = Target("FM partner Y", res.vector, "isomorphism")
    return _verdict("Thm8_5", conds, target, -1)


def thm3_15_verdict(v: MukaiVector, fib: EllipticFibration) -> Verdict:
    """Fiberwise transform on an elliptic model, stated for rank > 0
    sources of the slice shape; the image has rank 0."""
    surface = fib.surface
    _check_same_surface(v, surface)
    conds = [CheckedCondition("r > 0", v.r > 0)]
    if v.r <= 0:
        return _verdict("Thm3_15", conds, None, -1)
    triple = triple_from_vector(v, surface)
    try:
        r, l, n = elliptic_params_of_triple(triple, fib)
    except PreconditionError:
        conds.append(
            CheckedCondition("c1 has the slice shape sigma - tau + m*f", False)
        )
        return _verdict("Thm3_15", conds, None, -1)
    conds.append(
        CheckedCondition("c1 has the slice shape sigma - tau + m*f", True)
    )
    conds.append(
        CheckedCondition(
            "r + l > 0 (r + l < 0 belongs to the other transform direction)",
            r + l > 0,
        )
    )
    conds.append(
        CheckedCondition(
            "gcd(r, l, n) = 1: every semistable member is stable",
            gcd(gcd(r, l), n) == 1,
            required=False,
        )
    )
    target = None
    if r + l > 0:
        image = elliptic_fm(r, l, n, fib).image
        target = Target(
            "FM partner Y", vector_from_triple(image, surface), "isomorphism"
        )
    return _verdict("Thm3_15", conds, target, -1)


# ---------------------------------------------------------------------------
# deformation-type statements


def _prop_deform_verdict(v: MukaiVector, surface: SurfaceModel) -> Verdict:
    conds = [
        CheckedCondition("v primitive", is_primitive(v)),
        CheckedCondition("v positive", is_positive(v, surface)),
        CheckedCondition("r > 0", v.r > 0),
    ]
    if all(c.holds for c in conds):
        dc = deformation_class(v, surface)
        conds.append(
            CheckedCondition("deformation model: " + dc.model, True, required=False)
        )
        conds.append(
            CheckedCondition(
                "class invariants (l, <v,v>, a mod l) = (%d, %d, %d)"
                % (dc.invariants[1], dc.invariants[2], dc.invariants[3]),
                True,
                required=False,
            )
        )
    return _verdict("PropDeform", conds, None, 1)


def _k3_deform_verdict(v: MukaiVector, surface: SurfaceModel) -> Verdict:
    conds = [
        CheckedCondition("v primitive", is_primitive(v)),
        CheckedCondition(
            "r > 0 or c1 in the positive cone",
            v.r > 0 or surface.in_positive_cone(v.c1),
        ),
    ]
    if all(c.holds for c in conds):
        idx = mukai_square(v, surface) // 2 + 1
        conds.append(
            CheckedCondition(
                "deformation model: Hilb^%d of the K3 model" % idx,
                True,
                required=False,
            )
        )
    return _verdict("ThmK3Deform", conds, None, 1)


def _conjecture_verdict() -> Verdict:
    conds = [
        CheckedCondition("NS has rank 1", True),
        CheckedCondition("no isomorphism or birationality statement applied", True),
        CheckedCondition(
            "expected image: one of +-F(v), +-G(v) on the dual side",
            True,
            required=False,
        ),
    ]
    return _verdict(
        "Conjecture4_22",
        conds,
        Target("dual surface", None, "conjectural"),
        1,
    )


def classify(
    v: MukaiVector,
    surface: SurfaceModel,
    *,
    isotropic: Optional[IsotropicFMParams] = None,
    fibration: Optional[EllipticFibration] = None,
    reflection: Optional[Tuple[MukaiVector, MukaiVector]] = None,
    star_asserted: bool = False,
) -> Tuple[Verdict, ...]:
    """All verdicts whose structural setting matches (surface, v).

    Statements tied to extra transform data (an isotropic parameter set,
    an elliptic fibration, a reflection pair) are only emitted when that
    data is passed in.  The conjectural fallback appears for rank-1
    abelian models when nothing with a map kind applied.
    """
    if v.is_zero():
        raise PreconditionError("cannot classify the zero vector")
    _check_same_surface(v, surface)
    verdicts = []
    if surface.kind == ABELIAN and surface.ns_rank == 1:
        verdicts.extend(_rank1_poincare_verdicts(v, surface))
        verdicts.extend(_thm4_23_verdicts(v, surface))
    if fibration is not None:
        if fibration.surface != surface:
            raise InputError("fibration belongs to a different surface model")
        verdicts.append(thm3_15_verdict(v, fibration))
    if isotropic is not None:
        verdicts.extend(thm7_7_verdicts(v, isotropic, surface))
    if surface.kind == K3:
        verdicts.append(thm8_2_verdict(v, surface))
    if reflection is not None:
        v1, w1 = reflection
        verdicts.append(thm8_5_verdict(v, v1, w1, surface, star_asserted))
    if surface.kind == ABELIAN:
        verdicts.append(_prop_deform_verdict(v, surface))
    if surface.kind == K3:
        verdicts.append(_k3_deform_verdict(v, surface))
    if surface.kind == ABELIAN and surface.ns_rank == 1:
        fired = any(
            w.applicable and w.target is not None and w.target.vector is not None
            for w in verdicts
        )
        if not fired:
            verdicts.append(_conjecture_verdict())
    verdicts.sort(key=lambda w: VERDICT_IDS.index(w.theorem_id))
    return tuple(verdicts)


# ---------------------------------------------------------------------------
# deformation classes


@dataclass(frozen=True)
class DeformationClass:
    """Complete deformation invariant of the moduli space.

    Two inputs on the same surface kind are deformation equivalent iff
    their invariants tuples agree.
    """

    surface_kind: str
    invariants: Tuple
    model: str
    hilb_index: int


def deformation_class(v: MukaiVector, surface: SurfaceModel) -> DeformationClass:
    """Invariant tuple deciding deformation equivalence.

    Abelian: (rank positive?, divisibility, <v,v>, a mod divisibility)
    with the dual-surface product model; the rank-0 case is covered for
    ample c1 with a != 0.  K3: the Hilbert-scheme index <v,v>/2 + 1.
    """
    _check_same_surface(v, surface)
    if not is_primitive(v):
        raise PreconditionError("deformation class needs a primitive vector")
    sq = mukai_square(v, surface)
    if surface.kind == ABELIAN:
        if not is_positive(v, surface):
            raise PreconditionError("deformation class needs a positive vector")
        ell = divisibility(v)
        # divisibility 0 means r = 0 and c1 = 0, where primitivity forces
        # a = -1; keep a itself as the residue
        a_mod = v.a % ell if ell else v.a
        idx = sq // 2
        return DeformationClass(
            surface_kind=ABELIAN,
            invariants=(v.r > 0, ell, sq, a_mod),
            model="product of the dual surface with Hilb^%d" % idx,
            hilb_index=idx,
        )
    if v.r <= 0 and not surface.in_positive_cone(v.c1):
        raise PreconditionError(
            "the K3 statement needs r > 0 or c1 in the positive cone"
        )
    idx = sq // 2 + 1
    return DeformationClass(
        surface_kind=K3,
        invariants=(idx,),
        model="Hilb^%d of the K3 model" % idx,
        hilb_index=idx,
    )


# ---------------------------------------------------------------------------
# the square-4 reduction


KUMMER_CASE_TAGS = (
    "l1_rank0",
    "l1_even_rank_even_a",
    "l1_even_rank_odd_a",
    "l1_odd_rank",
    "l2_rank_ge4",
    "l2_rank2_kummer",
)


@dataclass(frozen=True)
class KummerReduction:
    """Numerical shadow of the isotropic class attached to a square-4
    vector: its rank, (c1^2), and omega-coefficient (possibly a proper
    fraction on the quotient model)."""

    case_tag: str
    w_rank: int
    w_c1_square: int
    w_omega: Fraction
    isotropy_ok: bool

    def __post_init__(self):
        if self.case_tag not in KUMMER_CASE_TAGS:
            raise InputError("unknown reduction case %r" % (self.case_tag,))
        object.__setattr__(self, "w_omega", Fraction(self.w_omega))
        if self.isotropy_ok:
            if self.w_c1_square - 2 * self.w_rank * self.w_omega != 0:
                raise InternalInvariantError("reduction output is not isotropic")


def kummer4_reduce(v: MukaiVector, surface: SurfaceModel) -> KummerReduction:
    """Isotropic class data for the four-dimensional fiber of a square-4
    positive vector.

    The divisibility can only be 1 or 2 here; anything else flags
    inconsistent input.  Divisibility 2 with rank 2 is the quotient-model
    case with the fixed class of rank 2, (c1^2) = -8, omega-part -2.
    """
    if surface.kind != ABELIAN:
        raise PreconditionError("the square-4 reduction needs an abelian surface")
    _check_same_surface(v, surface)
    if mukai_square(v, surface) != 4:
        raise PreconditionError("the reduction applies to <v, v> = 4 only")
    if not is_positive(v, surface):
        raise PreconditionError("v must be positive")
    ell = divisibility(v)
    r, a = v.r, v.a

    def build(tag, w_rank, w_c1_square, w_omega):
        return KummerReduction(
            case_tag=tag,
            w_rank=w_rank,
            w_c1_square=w_c1_square,
            w_omega=Fraction(w_omega),
            isotropy_ok=w_c1_square - 2 * w_rank * Fraction(w_omega) == 0,
        )

    if ell == 1:
        if r == 0:
            # (c1^2) = 4; the isotropic class is a fiber-type c1 piece
            # plus omega, normalized to omega-coefficient 1
            return build("l1_rank0", 0, 0, 1)
        if r % 2 == 0:
            if a % 2 == 0:
                return build(
                    "l1_even_rank_even_a",
                    r,
                    r * (a - 2 * r + 2),
                    Fraction(a - 2 * r + 2, 2),
                )
            return build(
                "l1_even_rank_odd_a",
                r,
                r * (a - 2 * r + 1),
                Fraction(a - 2 * r + 1, 2),
            )
        return build(
            "l1_odd_rank", r, r * (a - 2 * r + 4), Fraction(a - 2 * r + 4, 2)
        )
    if ell == 2:
        if r == 2:
            return build("l2_rank2_kummer", 2, -8, -2)
        if r >= 4:
            return build(
                "l2_rank_ge4", r, r * (a + 1 - 2 * r), Fraction(a + 1 - 2 * r, 2)
            )
    raise InternalInvariantError(
        "square-4 vectors have divisibility 1 or 2 with rank divisible by it;"
        " the input is inconsistent"
    )


def special_locus(v: MukaiVector, surface: SurfaceModel):
    """Codimension, component count, and fiber dimension of the locus of
    members pulled back from the quotient side, for <v, v> = 2r.

    Returns (r - 1, r^2, r - 1).
    """
    _check_same_surface(v, surface)
    if (
        surface.kind != ABELIAN
        or divisibility(v) != 1
        or v.r < 2
        or mukai_square(v, surface) != 2 * v.r
    ):
        raise PreconditionError(
            "outside the special-locus regime: need an abelian surface,"
            " divisibility 1, r >= 2, and <v, v> = 2r"
        )
    return (v.r - 1, v.r * v.r, v.r - 1)
