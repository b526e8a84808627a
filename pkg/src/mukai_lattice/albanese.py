"""Formal algebra of the symmetric homomorphisms phi_L and its use in
the quasi-section identity for the Albanese fiber.

Morphisms live between the two sides X and Xhat.  Each hom-set is one
formal generator: the identity on each side, phi_L from X to Xhat, and
phi_Ltilde back.  Compositions reduce by

    phi_Ltilde . phi_L = -chi(L) * 1_X,
    phi_L . phi_Ltilde = -chi(L) * 1_Xhat,

so every word collapses to a multiple of a generator.  Addition across
different hom-sets is a typing error.
"""

from dataclasses import dataclass
from typing import Tuple

from .errors import InputError

__all__ = [
    "X_SIDE",
    "XHAT_SIDE",
    "PhiElement",
    "identity_x",
    "identity_xhat",
    "phi_l",
    "phi_l_tilde",
    "phi_compose",
    "add",
    "AlbaneseMatrix",
    "albanese_map_matrix",
    "quasi_section_adjugate",
    "matrix_compose",
    "quasi_section_check",
]

X_SIDE = "X"
XHAT_SIDE = "Xhat"
_SIDES = (X_SIDE, XHAT_SIDE)


@dataclass(frozen=True)
class PhiElement:
    """coeff times the generator of Hom(dom, cod)."""

    dom: str
    cod: str
    coeff: int

    def __post_init__(self):
        if self.dom not in _SIDES or self.cod not in _SIDES:
            raise InputError("morphism sides must be X or Xhat")
        object.__setattr__(self, "coeff", int(self.coeff))

    def __add__(self, other: "PhiElement") -> "PhiElement":
        return add(self, other)

    def __rmul__(self, scalar: int) -> "PhiElement":
        return PhiElement(self.dom, self.cod, int(scalar) * self.coeff)

    def __neg__(self) -> "PhiElement":
        return PhiElement(self.dom, self.cod, -self.coeff)

    def is_zero(self) -> bool:
        return self.coeff == 0


def identity_x(coeff: int = 1) -> PhiElement:
    return PhiElement(X_SIDE, X_SIDE, coeff)


def identity_xhat(coeff: int = 1) -> PhiElement:
    return PhiElement(XHAT_SIDE, XHAT_SIDE, coeff)


def phi_l(coeff: int = 1) -> PhiElement:
    return PhiElement(X_SIDE, XHAT_SIDE, coeff)


def phi_l_tilde(coeff: int = 1) -> PhiElement:
    return PhiElement(XHAT_SIDE, X_SIDE, coeff)


def add(a: PhiElement, b: PhiElement) -> PhiElement:
    if a.dom != b.dom or a.cod != b.cod:
        raise InputError("cannot add morphisms with different source or target")
    return PhiElement(a.dom, a.cod, a.coeff + b.coeff)


def phi_compose(after: PhiElement, first: PhiElement, chi_l: int) -> PhiElement:
    """after . first, reducing phi words through chi(L)."""
    if first.cod != after.dom:
        raise InputError("composition needs matching middle side")
    coeff = after.coeff * first.coeff
    # generator bookkeeping: identities are neutral, two distinct phis
    # collapse to -chi(L) times an identity
    first_is_id = first.dom == first.cod
    after_is_id = after.dom == after.cod
    if first_is_id or after_is_id:
        dom, cod = first.dom, after.cod
        return PhiElement(dom, cod, coeff)
    return PhiElement(first.dom, after.cod, -int(chi_l) * coeff)


AlbaneseMatrix = Tuple[Tuple[PhiElement, PhiElement], Tuple[PhiElement, PhiElement]]

_SPACES = (X_SIDE, XHAT_SIDE)


def _check_matrix(m: AlbaneseMatrix):
    for i in range(2):
        for j in range(2):
            e = m[i][j]
            if e.dom != _SPACES[j] or e.cod != _SPACES[i]:
                raise InputError("matrix entry (%d, %d) has the wrong sides" % (i, j))


def albanese_map_matrix(r: int, a: int) -> AlbaneseMatrix:
    """[[-a, phi_Ltilde], [phi_L, r]] on X x Xhat."""
    return (
        (identity_x(-a), phi_l_tilde(1)),
        (phi_l(1), identity_xhat(r)),
    )


def quasi_section_adjugate(r: int, a: int) -> AlbaneseMatrix:
    """[[r, -phi_Ltilde], [-phi_L, -a]], the two-sided quasi-inverse."""
    return (
        (identity_x(r), phi_l_tilde(-1)),
        (phi_l(-1), identity_xhat(-a)),
    )


def matrix_compose(m1: AlbaneseMatrix, m2: AlbaneseMatrix, chi_l: int) -> AlbaneseMatrix:
    _check_matrix(m1)
    _check_matrix(m2)
    rows = []
    for i in range(2):
        row = []
        for j in range(2):
            acc = phi_compose(m1[i][0], m2[0][j], chi_l)
            acc = add(acc, phi_compose(m1[i][1], m2[1][j], chi_l))
            row.append(acc)
        rows.append(tuple(row))
    return (rows[0], rows[1])


def quasi_section_check(r: int, a: int, chi_l: int) -> bool:
    """Both products of the map matrix with its adjugate equal n * identity,
    n = chi(L) - r*a."""
    n = int(chi_l) - int(r) * int(a)
    m = albanese_map_matrix(r, a)
    adj = quasi_section_adjugate(r, a)
    expected = (
        (identity_x(n), phi_l_tilde(0)),
        (phi_l(0), identity_xhat(n)),
    )
    left = matrix_compose(adj, m, chi_l)
    right = matrix_compose(m, adj, chi_l)
    return left == expected and right == expected
