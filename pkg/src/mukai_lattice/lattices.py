"""Sublattices of the extended cohomology lattice.

Coordinates throughout are (r, c1..., a) with the pairing
<v, w> = (c1(v), c1(w)) - r(v) a(w) - r(w) a(v), so the ambient Gram
is [[0, 0, -1], [0, G, 0], [-1, 0, 0]] in block form, G the surface
intersection form.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .bqf import form_of_gram, represents_diagonal_split
from .errors import PreconditionError
from .intlinalg import (
    det_int,
    fraction_inverse,
    kernel_saturated,
    mat_mul,
    mat_vec,
    transpose,
)
from .surface import SurfaceModel
from .vectors import MukaiVector, mukai_pair

__all__ = [
    "ambient_gram",
    "LatticeGram",
    "gram_of_vectors",
    "perp_basis",
    "rank2_orthogonally_decomposable",
    "transport_base_change",
]


def ambient_gram(surface: SurfaceModel):
    """Gram matrix of the full lattice Z + NS + Z*omega, size rho + 2."""
    rho = surface.ns_rank
    n = rho + 2
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == 0 and j == n - 1 or i == n - 1 and j == 0:
                row.append(-1)
            elif 1 <= i <= rho and 1 <= j <= rho:
                row.append(surface.ns_gram[i - 1][j - 1])
            else:
                row.append(0)
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class LatticeGram:
    """An even lattice presented by a Gram matrix.

    basis_in_ambient, when present, records the rows as coordinate
    vectors of the ambient lattice they were cut out of.
    """

    rank: int
    gram: Tuple[Tuple[int, ...], ...]
    basis_in_ambient: Optional[Tuple[Tuple[int, ...], ...]] = field(default=None)

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        if len(gram) != self.rank or any(len(row) != self.rank for row in gram):
            raise PreconditionError("Gram matrix shape disagrees with rank")
        for i in range(self.rank):
            for j in range(self.rank):
                if gram[i][j] != gram[j][i]:
                    raise PreconditionError("Gram matrix must be symmetric")
            if gram[i][i] % 2:
                raise PreconditionError("lattice must be even")
        if self.basis_in_ambient is not None:
            basis = tuple(tuple(int(x) for x in row) for row in self.basis_in_ambient)
            object.__setattr__(self, "basis_in_ambient", basis)
            if len(basis) != self.rank:
                raise PreconditionError("ambient basis size disagrees with rank")

    @property
    def det(self) -> int:
        if self.rank == 0:
            return 1
        return det_int(self.gram)

    def value(self, x) -> int:
        if len(x) != self.rank:
            raise PreconditionError("coordinate length disagrees with rank")
        return sum(
            self.gram[i][j] * x[i] * x[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )


def gram_of_vectors(vectors, surface: SurfaceModel) -> LatticeGram:
    """Gram of a tuple of Mukai vectors under the even pairing."""
    vecs = tuple(vectors)
    gram = tuple(
        tuple(mukai_pair(v, w, surface) for w in vecs) for v in vecs
    )
    return LatticeGram(
        rank=len(vecs),
        gram=gram,
        basis_in_ambient=tuple(v.coords() for v in vecs),
    )


def perp_basis(v: MukaiVector, surface: SurfaceModel) -> LatticeGram:
    """The saturated orthogonal complement v^perp in the full lattice.

    The basis is canonical: row Hermite normal form of the kernel of
    x -> <v, x>, pivots positive, entries above each pivot reduced.
    """
    if v.is_zero():
        raise PreconditionError("orthogonal complement of the zero vector")
    if len(v.c1) != surface.ns_rank:
        raise PreconditionError("vector length disagrees with the surface")
    gc1 = mat_vec(surface.ns_gram, v.c1)
    form_row = (-v.a, *gc1, -v.r)
    basis = kernel_saturated((form_row,))
    vecs = tuple(MukaiVector.from_coords(row) for row in basis)
    for w in vecs:
        if mukai_pair(v, w, surface) != 0:
            raise PreconditionError("kernel computation produced a non-orthogonal vector")
    return gram_of_vectors(vecs, surface)


def transport_base_change(source: LatticeGram, image_rows, target: LatticeGram):
    """Unimodular base change T with T * target.basis = image_rows.

    image_rows are the ambient coordinates of source's basis pushed
    through some ambient isometry.  When source and target present the
    same sublattice in their respective ambients, T is integral with
    determinant +-1 and carries target.gram back to source.gram; all
    three facts are verified before T is returned.
    """
    if target.basis_in_ambient is None:
        raise PreconditionError("target lattice carries no ambient basis")
    rows = tuple(tuple(int(x) for x in row) for row in image_rows)
    if len(rows) != source.rank or source.rank != target.rank:
        raise PreconditionError("rank mismatch between the two presentations")
    b2 = target.basis_in_ambient
    if any(len(row) != len(b2[0]) for row in rows):
        raise PreconditionError("image rows live in a different ambient")
    b2t = transpose(b2)
    # solve T * b2 = rows in the least-squares normal form; b2 has full
    # row rank, so the solution is exact iff rows lie in its row span
    t_frac = mat_mul(mat_mul(rows, b2t), fraction_inverse(mat_mul(b2, b2t)))
    if mat_mul(t_frac, b2) != [list(r) for r in rows]:
        raise PreconditionError("image basis does not lie in the target lattice span")
    if any(x.denominator != 1 for row in t_frac for x in row):
        raise PreconditionError("base change is not integral")
    t = tuple(tuple(int(x) for x in row) for row in t_frac)
    if det_int(t) not in (1, -1):
        raise PreconditionError("bases generate different lattices")
    carried = mat_mul(mat_mul(t, target.gram), transpose(t))
    if carried != [list(row) for row in source.gram]:
        raise PreconditionError("base change does not carry the Gram matrices")
    return t


def rank2_orthogonally_decomposable(g: LatticeGram) -> bool:
    """Whether a nondegenerate even rank-2 lattice splits orthogonally.

    Equivalently, whether the associated binary quadratic form is
    GL_2(Z)-equivalent to a diagonal one.
    """
    if g.rank != 2:
        raise PreconditionError("decomposability test needs a rank-2 lattice")
    if g.det == 0:
        raise PreconditionError("lattice must be nondegenerate")
    return represents_diagonal_split(form_of_gram(g.gram))
