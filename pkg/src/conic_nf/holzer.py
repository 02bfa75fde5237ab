"""Size reduction of solutions of a*x^2 + b*y^2 + c*z^2 = 0.

Over the rationals a solvable equation always has a solution with
z^2 <= |ab|; over the Euclidean imaginary quadratic fields the same holds
with |z|^2 below an explicit multiple of |ab|.  Descent through a tangent
construction shrinks |z| strictly at each step, so iterating from any
starting solution reaches the bound.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .errors import BezoutFailed, PreconditionViolated, UndecidedError, UnsupportedField
from .descent import SolutionTriple, verify
from .fields import (
    FieldDescriptor,
    FieldElement,
    euclid_divmod,
    gcd_elems,
    nearest_integer,
)
from .solvability import ConicEquation

# Square of the bound constant: a minimal solution satisfies
# |z|^2 <= C * |ab|, i.e. N(z)^2 <= C^2 * |N(a)*N(b)|.
_BOUND_SQ = {
    None: Fraction(1),
    -1: Fraction(2),
    -2: Fraction(4),
    -3: Fraction(3, 2),
    -7: Fraction(7, 3),
    -11: Fraction(11, 2),
}

_MAX_ITER = 10_000


def bound_constant_sq(field: FieldDescriptor) -> Fraction:
    """C^2 in the minimality condition N(z)^2 <= C^2 * |N(a)*N(b)|."""
    try:
        return _BOUND_SQ[field.d]
    except KeyError:
        raise UnsupportedField(
            f"no size-reduction bound available for {field}"
        ) from None


def is_reduced(eq: ConicEquation, sol: SolutionTriple) -> bool:
    """Exact check of the minimality bound on |z|."""
    csq = bound_constant_sq(eq.field)
    nz = sol.z.norm()
    return nz * nz <= csq * abs(eq.a.norm() * eq.b.norm())


def xgcd(a: FieldElement, b: FieldElement):
    """(g, s, t) with s*a + t*b = g = gcd(a, b), via nearest-integer division."""
    field = a.field
    r0, r1 = a, b
    s0, s1 = field.one(), field.zero()
    t0, t1 = field.zero(), field.one()
    while not r1.is_zero:
        q, r = euclid_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    assert s0 * a + t0 * b == r0
    return r0, s0, t0


def _bezout_point(a0, b0, c):
    """Some (alpha, beta) with b0*alpha - a0*beta = c, or raise."""
    g, s, t = xgcd(b0, a0)
    q, r = euclid_divmod(c, g)
    if not r.is_zero:
        raise BezoutFailed("x-y part of the solution does not divide c")
    return s * q, -(t * q)


def _descend_once(eq: ConicEquation, sol: SolutionTriple) -> SolutionTriple:
    """One tangent-descent step; returns a solution with smaller |z|."""
    a, b, c = eq.a, eq.b, eq.c
    a0, b0, g0 = sol.x, sol.y, sol.z
    alpha0, beta0 = _bezout_point(a0, b0, c)
    field = eq.field
    # Shifting by multiples of (a0, b0) keeps the Bezout identity; try a
    # few shifts and keep the candidate with the smallest |z|.
    shifts = [field.element(0)]
    if field.is_rational:
        shifts += [field.element(k) for k in (-1, 1)]
    else:
        shifts += [
            field.element(u, v) for u in (-1, 0, 1) for v in (-1, 0, 1) if (u, v) != (0, 0)
        ]
    best: Optional[SolutionTriple] = None
    for shift in shifts:
        alpha = alpha0 + shift * a0
        beta = beta0 + shift * b0
        gamma = nearest_integer(-(a * a0 * alpha + b * b0 * beta) / (c * g0))
        q = a * alpha * alpha + b * beta * beta + c * gamma * gamma
        r = a * a0 * alpha + b * b0 * beta + c * g0 * gamma
        x = (a0 * q - 2 * alpha * r) / c
        y = (b0 * q - 2 * beta * r) / c
        z = (g0 * q - 2 * gamma * r) / c
        cand = SolutionTriple(x, y, z)
        if cand.is_trivial or not all(t.is_integral for t in (x, y, z)):
            continue
        if best is None or cand.z.norm() < best.z.norm():
            best = cand
    if best is None or best.z.norm() >= g0.norm():
        raise UndecidedError("tangent descent failed to shrink |z|")
    assert verify(eq, best)
    return best


def _primitive(sol: SolutionTriple) -> SolutionTriple:
    g = gcd_elems([sol.x, sol.y, sol.z])
    return SolutionTriple(sol.x / g, sol.y / g, sol.z / g)


def reduce_solution(eq: ConicEquation, sol: SolutionTriple) -> SolutionTriple:
    """A primitive solution meeting the minimality bound on |z|.

    Supported over the rationals and the Euclidean imaginary quadratic
    fields (d = -1, -2, -3, -7, -11).
    """
    bound_constant_sq(eq.field)
    if sol.is_trivial or not verify(eq, sol):
        raise PreconditionViolated("starting point is not a solution")
    if not all(t.is_integral for t in (sol.x, sol.y, sol.z)):
        raise PreconditionViolated("starting solution must be integral")
    cur = _primitive(sol)
    for _ in range(_MAX_ITER):
        if is_reduced(eq, cur):
            return cur
        cur = _primitive(_descend_once(eq, cur))
    raise UndecidedError("size reduction did not converge")
