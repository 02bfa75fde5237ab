"""Legendre-style descent for the norm form equation x^2 - A*y^2 = B*z^2.

The solver keeps shrinking B: a small square root w of A mod (B) plus
lattice reduction produce a congruence pair whose quotient t is smaller
than B; recursing on (A, squarefree part of t) and composing with the
multiplicativity of x^2 - A*y^2 yields a solution.  When no small root
exists the equation is handled as a generalised Pell equation by a
bounded search.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import NotSolvable, PellSearchExhausted
from .fields import (
    FieldDescriptor,
    FieldElement,
    elem_sqrt,
    format_element,
    is_unit,
    make_field,
    require_integral,
    size_lt_size_minus_one,
    size_sq,
)
from .ideals import principal_ideal, square_decompose
from .lattice import short_congruence_pair
from .residues import sqrt_mod_ideal
from .solvability import ConicEquation, check_solvable

DEFAULT_PELL_BOUND = 200
MAX_DEPTH = 80


def pell_bound_default() -> int:
    env = os.environ.get("CONIC_NF_PELL_BOUND")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return DEFAULT_PELL_BOUND


@dataclass(frozen=True)
class NormFormEquation:
    """x^2 - A*y^2 = B*z^2 with integral A, B."""

    A: FieldElement
    B: FieldElement


@dataclass(frozen=True)
class SolutionTriple:
    x: FieldElement
    y: FieldElement
    z: FieldElement

    @property
    def is_trivial(self) -> bool:
        return self.x.is_zero and self.y.is_zero and self.z.is_zero

    def as_tuple(self):
        return (self.x, self.y, self.z)

    def __repr__(self):
        return (
            f"({format_element(self.x)}, {format_element(self.y)}, "
            f"{format_element(self.z)})"
        )


class DescentTrace:
    """Recorded steps of a descent run, for inspection and JSON output."""

    def __init__(self):
        self.steps: list[dict] = []

    def add(self, kind: str, **info):
        entry = {"step": kind}
        entry.update(info)
        self.steps.append(entry)

    def to_list(self) -> list[dict]:
        return list(self.steps)


def to_norm_form(
    eq: ConicEquation,
) -> tuple[NormFormEquation, Callable[[FieldElement, FieldElement, FieldElement], tuple]]:
    """Rewrite a*x^2 + b*y^2 + c*z^2 = 0 as X^2 - A*Y^2 = B*Z^2.

    Multiplying by a gives (a*x)^2 = (-a*b)*y^2 + (-a*c)*z^2; principal
    square parts of the new coefficients are absorbed into Y and Z.  The
    returned map sends a solution of the norm form back to a (rational)
    solution of the original equation.
    """
    a, b, c = eq.a, eq.b, eq.c
    A0 = -(a * b)
    B0 = -(a * c)
    A1, A2 = square_decompose(A0)
    B1, B2 = square_decompose(B0)

    def back(x: FieldElement, y: FieldElement, z: FieldElement):
        return (x / a, y / A2, z / B2)

    return NormFormEquation(A1, B1), back


def _enumerate_small(field: FieldDescriptor, bound: int):
    """Nonzero-first enumeration of integral elements by weight, then size."""
    if field.is_rational:
        for n in range(0, bound + 1):
            yield field.element(n)
        return
    coords = []
    for u in range(-bound, bound + 1):
        for v in range(-bound, bound + 1):
            coords.append((u, v))
    coords.sort(key=lambda t: (abs(t[0]) + abs(t[1]), t))
    for u, v in coords:
        yield field.element(u, v)


def _enumerate_pairs(field: FieldDescriptor, bound: int, budget: int = 400_000):
    """Pairs (y, z) of integral elements ordered by max coordinate weight."""
    count = 0
    if field.is_rational:
        for W in range(0, bound + 1):
            for y in range(-W, W + 1):
                for z in range(-W, W + 1):
                    if max(abs(y), abs(z)) != W:
                        continue
                    count += 1
                    if count > budget:
                        return
                    yield field.element(y), field.element(z)
        return
    for W in range(0, bound + 1):
        box = range(-W, W + 1)
        for yu in box:
            for yv in box:
                for zu in box:
                    for zv in box:
                        if max(abs(yu), abs(yv), abs(zu), abs(zv)) != W:
                            continue
                        count += 1
                        if count > budget:
                            return
                        yield field.element(yu, yv), field.element(zu, zv)


def _norm_search(
    A: FieldElement, B: FieldElement, bound: int
) -> tuple[FieldElement, FieldElement, FieldElement]:
    """Bounded search for x^2 - A*y^2 = B*z^2 over pairs (y, z)."""
    field = A.field
    if not field.is_rational:
        bound = min(bound, 25)
    for y, z in _enumerate_pairs(field, bound):
        if y.is_zero and z.is_zero:
            continue
        x = elem_sqrt(A * y * y + B * z * z)
        if x is not None:
            return (x, y, z)
    raise PellSearchExhausted(
        f"no solution of x^2 - ({format_element(A)})*y^2 = "
        f"({format_element(B)})*z^2 within the search bound"
    )


def solve_pell(
    A: FieldElement, B: FieldElement, bound: Optional[int] = None
) -> tuple[FieldElement, FieldElement]:
    """A solution (x, y) of x^2 - A*y^2 = B by bounded exact search."""
    if bound is None:
        bound = pell_bound_default()
    field = A.field
    require_integral(A)
    require_integral(B)
    for y in _enumerate_small(field, bound):
        rhs = B + A * y * y
        x = elem_sqrt(rhs)
        if x is not None:
            return x, y
    raise PellSearchExhausted(
        f"no solution of x^2 - ({format_element(A)})*y^2 = {format_element(B)} "
        f"with coordinate bound {bound}"
    )


def compose_solution(
    A: FieldElement,
    pair: tuple[FieldElement, FieldElement],
    inner: SolutionTriple,
    t1: FieldElement,
    t2: FieldElement,
) -> SolutionTriple:
    """Combine (a0, b0) with a solution of x^2 - A*y^2 = t1*z^2.

    Uses the norm identity
    (a0^2 - A b0^2)(a1^2 - A b1^2) = (a0 a1 + A b0 b1)^2 - A (a0 b1 + a1 b0)^2.
    """
    a0, b0 = pair
    a1, b1, g1 = inner.x, inner.y, inner.z
    x = a0 * a1 + A * b0 * b1
    y = a1 * b0 + a0 * b1
    z = t1 * t2 * g1
    return SolutionTriple(x, y, z)


def _try_rational_subfield(
    A: FieldElement, B: FieldElement
) -> Optional[tuple[FieldElement, FieldElement, FieldElement]]:
    """Solve over Q when A and B are rational and the conditions hold there."""
    field = A.field
    if field.is_rational or A.v != 0 or B.v != 0:
        return None
    Qf = make_field()
    Aq, Bq = Qf.element(Fraction(A.u)), Qf.element(Fraction(B.u))
    try:
        eq = ConicEquation.from_coefficients(Qf.one(), -Aq, -Bq)
    except Exception:
        return None
    if not check_solvable(eq).solvable:
        return None
    x, y, z = legendre_descent(Aq, Bq)
    lift = lambda t: field.element(Fraction(t.u))
    return (lift(x), lift(y), lift(z))


def _fallback_solve(
    A: FieldElement,
    B: FieldElement,
    pell_bound: Optional[int],
    trace: DescentTrace,
    _depth: int,
    _allow_transform: bool,
) -> tuple[FieldElement, FieldElement, FieldElement]:
    """Solve x^2 - A*y^2 = B*z^2 when congruence descent cannot reduce.

    Tries the z = 1 Pell search, then the classical transformation to
    x^2 + A*B*y^2 = A*z^2 (which restarts the descent with a usable
    congruence), then a bounded two-parameter search.
    """
    field = A.field
    try:
        x, y = solve_pell(A, B, pell_bound)
        return (x, y, field.one())
    except PellSearchExhausted:
        pass
    if _allow_transform:
        try:
            trace.add("transform", A=format_element(A), B=format_element(B))
            xt, yt, zt = legendre_descent(
                -(A * B), A, pell_bound, trace, _depth + 1, _allow_transform=False
            )
            sol = (A * zt, xt, A * yt)
            assert sol[0] * sol[0] - A * sol[1] * sol[1] == B * sol[2] * sol[2]
            if not (sol[1].is_zero and sol[2].is_zero):
                return sol
        except (PellSearchExhausted, NotSolvable):
            pass
    trace.add("norm_search", A=format_element(A), B=format_element(B))
    return _norm_search(A, B, pell_bound or pell_bound_default())


def legendre_descent(
    A: FieldElement,
    B: FieldElement,
    pell_bound: Optional[int] = None,
    trace: Optional[DescentTrace] = None,
    _depth: int = 0,
    _allow_transform: bool = True,
) -> tuple[FieldElement, FieldElement, FieldElement]:
    """A nonzero solution (x, y, z) of x^2 - A*y^2 = B*z^2, by descent."""
    field = A.field
    require_integral(A)
    require_integral(B)
    if trace is None:
        trace = DescentTrace()
    if _depth > MAX_DEPTH:
        raise PellSearchExhausted("descent recursion exceeded its depth limit")

    if _depth == 0:
        sub = _try_rational_subfield(A, B)
        if sub is not None:
            trace.add("rational_subfield")
            return sub
        eq = ConicEquation.from_coefficients(field.one(), -A, -B)
        cert = check_solvable(eq)
        if not cert.solvable:
            raise NotSolvable(
                f"x^2 - ({format_element(A)})y^2 = ({format_element(B)})z^2 "
                f"fails the local conditions ({cert.reason})"
            )

    # A perfect square A short-circuits everything: x = sqrt(A)*y.
    sq = elem_sqrt(A)
    if sq is not None:
        trace.add("square_discriminant", sqrt=format_element(sq))
        return (sq, field.one(), field.zero())

    if size_sq(A) > size_sq(B):
        trace.add("swap", A=format_element(A), B=format_element(B))
        x, y, z = legendre_descent(
            B, A, pell_bound, trace, _depth + 1, _allow_transform
        )
        return (x, z, y)

    if is_unit(B):
        trace.add("pell_base", B=format_element(B))
        return _fallback_solve(A, B, pell_bound, trace, _depth, _allow_transform)

    if is_unit(A):
        trace.add("pell_base_swapped", A=format_element(A))
        try:
            x, z = solve_pell(B, A, pell_bound)
            return (x, field.one(), z)
        except PellSearchExhausted:
            return _fallback_solve(A, B, pell_bound, trace, _depth, _allow_transform)

    if A == B:
        trace.add("equal_coefficients", B=format_element(B))
        try:
            x, z = solve_pell(field.element(-1), B, pell_bound)
            return (B, x, z)
        except PellSearchExhausted:
            return _fallback_solve(A, B, pell_bound, trace, _depth, _allow_transform)

    w = sqrt_mod_ideal(A, principal_ideal(B))
    if w is None or not size_lt_size_minus_one(w, B):
        trace.add(
            "pell_fallback",
            w=None if w is None else format_element(w),
        )
        return _fallback_solve(A, B, pell_bound, trace, _depth, _allow_transform)

    a0, b0 = short_congruence_pair(A, B, w)
    t = (a0 * a0 - A * b0 * b0) / B
    assert t.is_integral, "congruence pair must give an integral quotient"
    trace.add(
        "reduce",
        A=format_element(A),
        B=format_element(B),
        w=format_element(w),
        pair=[format_element(a0), format_element(b0)],
        t=format_element(t),
    )
    if t.is_zero:
        # a0^2 = A b0^2: a square discriminant witnessed by the pair.
        return (a0, b0, field.zero())
    if not size_sq(t) < size_sq(B):
        trace.add("pell_fallback_large_t", t=format_element(t))
        return _fallback_solve(A, B, pell_bound, trace, _depth, _allow_transform)
    t1, t2 = square_decompose(t)
    inner = legendre_descent(
        A, t1, pell_bound, trace, _depth + 1, _allow_transform
    )
    sol = compose_solution(A, (a0, b0), SolutionTriple(*inner), t1, t2)
    lhs = sol.x * sol.x - A * sol.y * sol.y
    assert lhs == B * sol.z * sol.z, "descent composition identity failed"
    return (sol.x, sol.y, sol.z)


def verify(eq: ConicEquation, sol: SolutionTriple) -> bool:
    return (not sol.is_trivial) and eq.evaluate(sol.x, sol.y, sol.z).is_zero


def _clear_denominators(field, triple):
    m = 1
    for t in triple:
        for co in (t.u, t.v):
            d = Fraction(co).denominator
            m = m * d // _igcd(m, d)
    scaled = [t * m for t in triple]
    # Remove the rational integer content.
    g = 0
    for t in scaled:
        for co in (t.u, t.v):
            g = _igcd(g, int(co))
    if g > 1:
        scaled = [t / g for t in scaled]
    return scaled


def _igcd(a, b):
    import math

    return math.gcd(int(a), int(b))


def solve_conic(
    eq: ConicEquation,
    pell_bound: Optional[int] = None,
    trace: Optional[DescentTrace] = None,
) -> SolutionTriple:
    """A nonzero integral solution of a*x^2 + b*y^2 + c*z^2 = 0."""
    cert = check_solvable(eq)
    if not cert.solvable:
        raise NotSolvable(f"equation is not solvable: {cert.reason}")
    nf, back = to_norm_form(eq)
    if trace is not None:
        trace.add(
            "norm_form", A=format_element(nf.A), B=format_element(nf.B)
        )
    x, y, z = legendre_descent(nf.A, nf.B, pell_bound, trace)
    raw = back(x, y, z)
    xi, yi, zi = _clear_denominators(eq.field, raw)
    sol = SolutionTriple(xi, yi, zi)
    assert verify(eq, sol), "descent produced a non-solution"
    return sol
