"""Surface models: kind, NS intersection form, distinguished ample ray."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError, PreconditionError
from .intlinalg import det_int, signature_symmetric

ABELIAN = "abelian"
K3 = "K3"

_KINDS = {"abelian": ABELIAN, "k3": K3}


def canonical_kind(kind: str) -> str:
    try:
        return _KINDS[str(kind).lower()]
    except KeyError:
        raise InputError(f"unknown surface kind {kind!r}; expected abelian or K3")


@dataclass(frozen=True)
class SurfaceModel:
    """An abelian or K3 surface seen through its algebraic lattice data.

    ns_gram is the intersection form on NS in a fixed integral basis; it must
    be symmetric with even diagonal (trivial canonical class) and of
    signature (1, rank-1) by the Hodge index theorem.  ample_ray is an NS
    vector of positive square fixing the positive-cone component; it defaults
    to the first basis vector when that has positive square.
    """

    kind: str
    ns_gram: tuple[tuple[int, ...], ...]
    ample_ray: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "kind", canonical_kind(self.kind))
        gram = tuple(tuple(int(x) for x in row) for row in self.ns_gram)
        object.__setattr__(self, "ns_gram", gram)
        n = len(gram)
        if n == 0 or any(len(row) != n for row in gram):
            raise InputError("ns_gram must be a nonempty square matrix")
        for i in range(n):
            if gram[i][i] % 2 != 0:
                raise PreconditionError("ns_gram must have even diagonal")
            for j in range(n):
                if gram[i][j] != gram[j][i]:
                    raise PreconditionError("ns_gram must be symmetric")
        if det_int(gram) == 0:
            raise PreconditionError("ns_gram must be nondegenerate")
        pos, neg, zero = signature_symmetric(gram)
        if (pos, neg, zero) != (1, n - 1, 0):
            raise PreconditionError(
                f"ns_gram must have signature (1,{n - 1}); got ({pos},{neg})"
            )
        ray = tuple(int(x) for x in self.ample_ray)
        if not ray:
            ray = tuple(1 if i == 0 else 0 for i in range(n))
        if len(ray) != n:
            raise InputError("ample_ray length must equal ns_rank")
        object.__setattr__(self, "ample_ray", ray)
        if self.ip(ray, ray) <= 0:
            raise PreconditionError("ample_ray must have positive self-intersection")

    @property
    def ns_rank(self) -> int:
        return len(self.ns_gram)

    @property
    def euler_todd(self) -> int:
        # omega-coefficient of v(O_X): 0 abelian, 1 K3
        return 0 if self.kind == ABELIAN else 1

    @property
    def chi_structure_sheaf(self) -> int:
        return 2 * self.euler_todd

    def ip(self, x, y) -> int:
        if len(x) != self.ns_rank or len(y) != self.ns_rank:
            raise InputError("NS vector length must equal ns_rank")
        g = self.ns_gram
        return sum(x[i] * g[i][j] * y[j] for i in range(len(x)) for j in range(len(x)))

    def in_positive_cone(self, x) -> bool:
        """Same component as ample_ray inside {(x,x) > 0}."""
        return self.ip(x, x) > 0 and self.ip(x, self.ample_ray) > 0


def default_effectivity(S: SurfaceModel, D) -> bool:
    """Numeric effectivity test used when no oracle is supplied.

    Abelian: D = 0, or (D²) >= 0 and (D, ample_ray) > 0.
    K3: (D²) >= -2 and (D, ample_ray) > 0.
    """
    d2 = S.ip(D, D)
    da = S.ip(D, S.ample_ray)
    if S.kind == ABELIAN:
        return all(x == 0 for x in D) or (d2 >= 0 and da > 0)
    return d2 >= -2 and da > 0
