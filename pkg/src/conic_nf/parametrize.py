"""Slope parameterisation of all solutions of a*x^2 + b*y^2 + c*z^2 = 0.

Lines of varying slope through a base point (a0, b0, g0) with g0 != 0 sweep
out every other solution; clearing denominators turns the slope t = m/n
into the polynomial formulas below.  Over the Euclidean fields the common
divisor D_{m,n} can be removed to reach primitive integral solutions.
"""

from __future__ import annotations

from typing import Iterator, Optional

from math import gcd as _int_gcd

from .errors import BaseDegenerate, NotEuclidean
from .descent import SolutionTriple, verify
from .fields import FieldElement, gcd_elems
from .solvability import ConicEquation


def param_solution(
    eq: ConicEquation,
    base: SolutionTriple,
    m: FieldElement,
    n: FieldElement,
    scale: Optional[FieldElement] = None,
    signs: tuple = (1, 1, 1),
) -> SolutionTriple:
    """The solution attached to slope m/n through the base point.

    Requires base.z != 0; permute the equation first if necessary.  Each
    coordinate may be flipped independently via signs, and the whole
    triple rescaled by a nonzero scale.
    """
    if base.z.is_zero:
        raise BaseDegenerate("base solution must have a nonzero z")
    a, b = eq.a, eq.b
    a0, b0, g0 = base.x, base.y, base.z
    x = ((b * m * m - a * n * n) * a0 - 2 * b * m * n * b0) * signs[0]
    y = (-(2 * a * m * n * a0) + b0 * (a * n * n - b * m * m)) * signs[1]
    z = (g0 * (a * n * n + b * m * m)) * signs[2]
    if scale is not None:
        x, y, z = x * scale, y * scale, z * scale
    return SolutionTriple(x, y, z)


def primitive_param(
    eq: ConicEquation,
    base: SolutionTriple,
    m: FieldElement,
    n: FieldElement,
) -> Optional[SolutionTriple]:
    """The slope solution divided by its coordinate gcd, or None if trivial.

    Full primitivity needs gcds, so outside the norm-Euclidean fields only
    the rational integer content is removed.
    """
    sol = param_solution(eq, base, m, n)
    if sol.is_trivial:
        return None
    try:
        g = gcd_elems([sol.x, sol.y, sol.z])
    except NotEuclidean:
        c = _int_gcd(*(int(q) for t in (sol.x, sol.y, sol.z) for q in (t.u, t.v)))
        g = sol.x.field.element(c)
    return SolutionTriple(sol.x / g, sol.y / g, sol.z / g)


def _unit_canonical(field, triple):
    """The associate-class representative: smallest coordinate tuple."""
    best = None
    for u in field.units():
        cand = tuple(t * u for t in triple)
        key = tuple((t.u, t.v) for t in cand)
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def canonical_solution(sol: SolutionTriple) -> tuple:
    """A projective invariant of a primitive solution, for deduplication."""
    field = sol.x.field
    triple = _unit_canonical(field, (sol.x, sol.y, sol.z))
    return tuple((t.u, t.v) for t in triple)


def enumerate_solutions(
    eq: ConicEquation,
    base: SolutionTriple,
    max_param: int,
    z_norm_bound: Optional[int] = None,
) -> Iterator[SolutionTriple]:
    """Distinct primitive solutions from slopes with coordinates in a box.

    Slopes m/n run over integral m, n with coordinates bounded by
    max_param; projectively equal solutions are reported once.  With
    z_norm_bound, solutions whose z has larger absolute field norm are
    skipped (the rational field uses the degree-two norm u -> u^2).
    """
    field = eq.field
    if field.is_rational:
        params = [
            (field.element(m), field.element(n))
            for m in range(0, max_param + 1)
            for n in range(-max_param, max_param + 1)
        ]
    else:
        box = range(-max_param, max_param + 1)
        params = [
            (field.element(mu, mv), field.element(nu, nv))
            for mu in box
            for mv in box
            for nu in box
            for nv in box
        ]
    seen = set()
    for m, n in params:
        if m.is_zero and n.is_zero:
            continue
        sol = primitive_param(eq, base, m, n)
        if sol is None:
            continue
        if z_norm_bound is not None and abs(sol.z.norm()) > z_norm_bound:
            continue
        key = canonical_solution(sol)
        if key in seen:
            continue
        seen.add(key)
        assert verify(eq, sol)
        yield sol


def solutions_cover(
    eq: ConicEquation, base: SolutionTriple, target: SolutionTriple, max_param: int
) -> bool:
    """True when some slope in the box reproduces the target projectively."""
    want = canonical_solution(target)
    for sol in enumerate_solutions(eq, base, max_param):
        if canonical_solution(sol) == want:
            return True
    return False
