"""Integral binary quadratic forms, exactly.

A form (A, B, C) stands for A*x^2 + B*x*y + C*y^2 with integer
coefficients; its discriminant is B^2 - 4*A*C.  Even rank-2 Gram
matrices [[2A, B], [B, 2C]] halve to such forms, so GL_2(Z)
equivalence of forms decides isometry of even rank-2 lattices.

Everything here is exact: square roots only ever appear through
``math.isqrt`` guarded by integer comparisons of squares.
"""

from math import gcd, isqrt

from .errors import InternalInvariantError, PreconditionError
from .intlinalg import short_vectors

__all__ = [
    "form_of_gram",
    "discriminant",
    "content",
    "is_reduced_indefinite",
    "rho_step",
    "reduce_indefinite",
    "cycle_of",
    "gl_equivalent",
    "represents_diagonal_split",
]

_MAX_REDUCTION_STEPS = 100000


def form_of_gram(gram):
    """Halve an even symmetric 2x2 integer Gram matrix to (A, B, C)."""
    if len(gram) != 2 or len(gram[0]) != 2 or len(gram[1]) != 2:
        raise PreconditionError("expected a 2x2 Gram matrix")
    if gram[0][1] != gram[1][0]:
        raise PreconditionError("Gram matrix must be symmetric")
    if gram[0][0] % 2 or gram[1][1] % 2:
        raise PreconditionError("Gram matrix must be even on the diagonal")
    return (gram[0][0] // 2, gram[0][1], gram[1][1] // 2)


def discriminant(f):
    a, b, c = f
    return b * b - 4 * a * c


def content(f):
    a, b, c = f
    return gcd(gcd(a, b), c)


def _primitive_part(f):
    g = content(f)
    if g == 0:
        raise PreconditionError("zero form has no primitive part")
    a, b, c = f
    return (a // g, b // g, c // g), g


# --- indefinite, nonsquare discriminant: Gauss cycles ------------------

def is_reduced_indefinite(f, d):
    """Reduced means |sqrt(d) - 2|A|| < B < sqrt(d), all checked exactly."""
    a, b, _ = f
    if b <= 0 or b * b >= d:
        return False
    t = 2 * abs(a) - b
    if t >= 0 and t * t >= d:
        return False
    s = 2 * abs(a) + b
    return s * s > d


def rho_step(f, d):
    """One step along the cycle: (A,B,C) -> (C, B', C') with B' = -B mod 2C.

    B' is picked in the standard window: (|C|-2|C|, |C|] when |C| > sqrt(d),
    else (sqrt(d)-2|C|, sqrt(d)].
    """
    _, b, c = f
    if c == 0:
        raise PreconditionError("rho step undefined for C = 0 (square discriminant)")
    h = isqrt(d)
    m = 2 * abs(c)
    upper = abs(c) if abs(c) > h else h
    b1 = upper - ((upper + b) % m)
    c1 = (b1 * b1 - d) // (4 * c)
    if 4 * c * c1 != b1 * b1 - d:
        raise InternalInvariantError("rho step lost integrality")
    return (c, b1, c1)


def reduce_indefinite(f, d):
    for _ in range(_MAX_REDUCTION_STEPS):
        if is_reduced_indefinite(f, d):
            return f
        f = rho_step(f, d)
    raise InternalInvariantError("indefinite reduction did not terminate")


def cycle_of(f, d):
    """The full rho-cycle through the reduction of f, as a set."""
    f = reduce_indefinite(f, d)
    seen = {f}
    g = rho_step(f, d)
    for _ in range(_MAX_REDUCTION_STEPS):
        if g == f:
            return seen
        seen.add(g)
        g = rho_step(g, d)
    raise InternalInvariantError("rho cycle did not close")


# --- square discriminant: isotropic normal forms -----------------------

def _isotropic_lines(f, h):
    """Primitive vectors spanning the rational root lines of f (disc = h^2)."""
    a, b, c = f
    lines = []
    if a == 0:
        # disc = b^2 > 0 here, so b != 0 and the form factors as y*(bx+cy)
        lines.append((1, 0))
        g = gcd(c, b)
        lines.append((-c // g, b // g))
    else:
        for root in (-b + h, -b - h):
            g = gcd(root, 2 * a)
            if g == 0:
                raise InternalInvariantError("degenerate root line")
            lines.append((root // g, 2 * a // g))
    out = []
    for u in lines:
        if u[-1] < 0 or (u[-1] == 0 and u[0] < 0):
            u = (-u[0], -u[1])
        if u not in out:
            out.append(u)
    return out


def _bilinear(f, u, w):
    a, b, c = f
    return 2 * a * u[0] * w[0] + b * (u[0] * w[1] + u[1] * w[0]) + 2 * c * u[1] * w[1]


def _value(f, u):
    a, b, c = f
    return a * u[0] * u[0] + b * u[0] * u[1] + c * u[1] * u[1]


def _square_disc_invariants(f, h):
    """GL-invariant of a form with disc h^2 > 0: the set of C mod h over
    normal forms (0, h, C) reachable from its isotropic lines."""
    out = set()
    for u in _isotropic_lines(f, h):
        # complete u to a basis of Z^2
        g, s, t = _xgcd(u[0], u[1])
        if g != 1:
            raise InternalInvariantError("isotropic line not primitive")
        w = (-t, s)  # det(u, w) = u0*s + u1*t = 1
        b_new = _bilinear(f, u, w)
        c_new = _value(f, w)
        if abs(b_new) != h:
            raise InternalInvariantError("normal form lost its discriminant")
        out.add(c_new % h)
    return out


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# --- definite ----------------------------------------------------------

def _definite_equivalent(f1, f2):
    """GL_2(Z) equivalence of positive-definite forms by exact search."""
    a1, b1, c1 = f1
    candidates_u = _vectors_of_value(f2, a1)
    candidates_w = _vectors_of_value(f2, c1)
    for u in candidates_u:
        for w in candidates_w:
            if abs(u[0] * w[1] - u[1] * w[0]) != 1:
                continue
            if abs(_bilinear(f2, u, w)) == abs(b1):
                return True
    return False


def _vectors_of_value(f, val):
    """All integer vectors u (one per +-) with f(u) = val > 0, f posdef."""
    if val <= 0:
        return []
    a, b, c = f
    gram = ((2 * a, b), (b, 2 * c))
    out = []
    for u in short_vectors(gram, 2 * val):
        if _value(f, u) == val:
            out.append(u)
            out.append((-u[0], -u[1]))
    return out


# --- public equivalence and splitting tests ----------------------------

def gl_equivalent(f1, f2):
    """Decide GL_2(Z) equivalence of two nondegenerate integral forms."""
    d1, d2 = discriminant(f1), discriminant(f2)
    if d1 != d2:
        return False
    if d1 == 0:
        raise PreconditionError("degenerate form")
    p1, g1 = _primitive_part(f1)
    p2, g2 = _primitive_part(f2)
    if g1 != g2:
        return False
    d = discriminant(p1)
    if d < 0:
        if p1[0] * p2[0] < 0:
            return False
        if p1[0] < 0:
            p1 = (-p1[0], -p1[1], -p1[2])
            p2 = (-p2[0], -p2[1], -p2[2])
        return _definite_equivalent(p1, p2)
    h = isqrt(d)
    if h * h == d:
        return bool(_square_disc_invariants(p1, h) & _square_disc_invariants(p2, h))
    cyc = cycle_of(p1, d)
    if reduce_indefinite(p2, d) in cyc:
        return True
    mirror = (p2[0], -p2[1], p2[2])
    return reduce_indefinite(mirror, d) in cyc


def represents_diagonal_split(f):
    """Whether f is GL_2(Z)-equivalent to a diagonal form (a, 0, c).

    For the primitive part this forces disc = 0 mod 4; diagonal targets
    run over coprime factorizations a * c = -disc/4.  The definite case
    instead searches directly for a primitive vector with a unimodular
    orthogonal complement, using the bound min(|a|,|c|) <= sqrt(|disc|)/2.
    """
    d = discriminant(f)
    if d == 0:
        raise PreconditionError("degenerate form")
    p, _ = _primitive_part(f)
    dp = discriminant(p)
    if dp % 4 != 0:
        return False
    if dp < 0:
        if p[0] < 0:
            p = (-p[0], -p[1], -p[2])
        bound = isqrt(-dp) // 2
        gram = ((2 * p[0], p[1]), (p[1], 2 * p[2]))
        for u in short_vectors(gram, 2 * bound):
            if gcd(u[0], u[1]) != 1:
                continue
            a, b, c = p
            w0 = -(b * u[0] + 2 * c * u[1])
            w1 = 2 * a * u[0] + b * u[1]
            g = gcd(w0, w1)
            if g == 0:
                raise InternalInvariantError("vanishing orthogonal complement")
            w = (w0 // g, w1 // g)
            if abs(u[0] * w[1] - u[1] * w[0]) == 1:
                return True
        return False
    m = dp // 4
    for a in _divisors(m):
        c = m // a
        if gcd(a, c) != 1:
            continue
        if gl_equivalent(p, (a, 0, -c)):
            return True
    return False


def _divisors(n):
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]
