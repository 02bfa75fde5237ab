import random

import pytest

from conic_nf.errors import NotSolvable, PellSearchExhausted
from conic_nf.fields import make_field
from conic_nf.descent import (
    DescentTrace,
    SolutionTriple,
    compose_solution,
    legendre_descent,
    solve_conic,
    solve_pell,
    to_norm_form,
    verify,
)
from conic_nf.solvability import ConicEquation

Q = make_field()
Q6 = make_field(-6)
Q7 = make_field(-7)
Q14 = make_field(14)


def eq_of(field, a, b, c):
    return ConicEquation(field.element(a), field.element(b), field.element(c))


def test_solve_pell_examples():
    x, y = solve_pell(Q.element(-1), Q.element(13))
    assert x * x + y * y == Q.element(13)
    x, y = solve_pell(Q6.element(-2), Q6.element(2))
    assert x * x + Q6.element(2) * y * y == Q6.element(2)
    with pytest.raises(PellSearchExhausted):
        solve_pell(Q.element(2), Q.element(3), 50)


def test_to_norm_form():
    nf, back = to_norm_form(eq_of(Q7, 3, 2, 13))
    assert nf.A == Q7.element(-6)
    assert nf.B == Q7.element(-39)
    # A solution of the norm form maps back to a solution of the conic.
    # x^2 + 6 y^2 = -39 z^2 has no real content over Q7?  Use the identity
    # check instead with the known conic solution (sqrt(-7), 2, 1):
    s7 = Q7.sqrt_gen()
    X, Y, Z = Q7.element(3) * s7, Q7.element(2), Q7.one()
    assert X * X - nf.A * Y * Y == nf.B * Z * Z
    x, y, z = back(X, Y, Z)
    e = eq_of(Q7, 3, 2, 13)
    assert e.evaluate(x, y, z).is_zero


def test_to_norm_form_strips_squares():
    nf, _ = to_norm_form(eq_of(Q, 2, 2, -1))
    assert nf.A == Q.element(-1)  # -4 = -1 * 2^2 absorbed
    assert nf.B == Q.element(2)


def test_compose_solution_identity():
    rng = random.Random(3)
    for _ in range(30):
        A = Q6.element(rng.randint(-9, 9), rng.randint(-3, 3))
        a0 = Q6.element(rng.randint(-9, 9), rng.randint(-3, 3))
        b0 = Q6.element(rng.randint(-9, 9), rng.randint(-3, 3))
        a1 = Q6.element(rng.randint(-9, 9), rng.randint(-3, 3))
        b1 = Q6.element(rng.randint(-9, 9), rng.randint(-3, 3))
        t1 = Q6.element(rng.randint(-5, 5), rng.randint(-2, 2))
        t2 = Q6.element(rng.randint(-5, 5), rng.randint(-2, 2))
        sol = compose_solution(A, (a0, b0), SolutionTriple(a1, b1, Q6.one()), t1, t2)
        lhs = sol.x * sol.x - A * sol.y * sol.y
        rhs = (a0 * a0 - A * b0 * b0) * (a1 * a1 - A * b1 * b1)
        assert lhs == rhs


def test_descent_norm_form_example():
    # x^2 - 823 y^2 = -1929 z^2 over Q(sqrt(-6)), class number 2.
    trace = DescentTrace()
    x, y, z = legendre_descent(Q6.element(823), Q6.element(-1929), trace=trace)
    assert x * x - Q6.element(823) * y * y == Q6.element(-1929) * z * z
    assert not (x.is_zero and y.is_zero and z.is_zero)
    steps = [s["step"] for s in trace.to_list()]
    assert "reduce" in steps


def test_descent_rejects_unsolvable():
    with pytest.raises(NotSolvable):
        legendre_descent(Q.element(823), Q.element(-1929))
    with pytest.raises(NotSolvable):
        legendre_descent(Q.element(-1), Q.element(-1))


def test_descent_rational_subfield_shortcut():
    # A = 2, B = 7 is solvable already over Q: (3, 1, 1).
    trace = DescentTrace()
    x, y, z = legendre_descent(Q6.element(2), Q6.element(7), trace=trace)
    assert x * x - Q6.element(2) * y * y == Q6.element(7) * z * z
    assert x.v == 0 and y.v == 0 and z.v == 0
    assert trace.to_list()[0]["step"] == "rational_subfield"


def test_solve_conic_over_q():
    cases = [(1, 1, -2), (2, 3, -5), (1, -5, -11), (3, 4, -7), (1, 1, -13)]
    for a, b, c in cases:
        e = eq_of(Q, a, b, c)
        sol = solve_conic(e)
        assert verify(e, sol)
        assert sol.x.is_integral and sol.y.is_integral and sol.z.is_integral


def test_solve_conic_known_field_equation():
    e = eq_of(Q7, 3, 2, 13)
    sol = solve_conic(e)
    assert verify(e, sol)


def test_solve_conic_norm_form_instance():
    e = ConicEquation(Q6.one(), Q6.element(-823), Q6.element(1929))
    sol = solve_conic(e)
    assert verify(e, sol)


def test_solve_conic_unsolvable_raises():
    with pytest.raises(NotSolvable):
        solve_conic(eq_of(Q, 1, 1, 1))
    with pytest.raises(NotSolvable):
        solve_conic(eq_of(Q, 1, 1, -3))


def test_solve_conic_random_over_imaginary_fields():
    rng = random.Random(29)
    solved = 0
    for field in (Q6, Q7, make_field(-1)):
        for _ in range(12):
            # Build guaranteed-solvable equations from a chosen solution.
            a = field.element(rng.randint(1, 6), rng.randint(-2, 2))
            b = field.element(rng.randint(1, 6), rng.randint(-2, 2))
            x = field.element(rng.randint(-4, 4), rng.randint(-2, 2))
            y = field.element(rng.randint(-4, 4), rng.randint(-2, 2))
            if a.is_zero or b.is_zero or (x.is_zero and y.is_zero):
                continue
            c = -(a * x * x + b * y * y)
            if c.is_zero:
                continue
            e = ConicEquation(a, b, c)  # (x, y, 1) is a solution
            sol = solve_conic(e)
            assert verify(e, sol)
            solved += 1
    assert solved >= 20
