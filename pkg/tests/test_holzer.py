import random

import pytest

from conic_nf.descent import SolutionTriple, solve_conic, verify
from conic_nf.errors import PreconditionViolated, UnsupportedField
from conic_nf.fields import make_field
from conic_nf.holzer import bound_constant_sq, is_reduced, reduce_solution, xgcd
from conic_nf.solvability import ConicEquation, check_solvable

Q = make_field()
QI = make_field(-1)
Q2 = make_field(-2)
Q7 = make_field(-7)
Q14 = make_field(14)


def _eq(field, a, b, c):
    return ConicEquation(field.element(a), field.element(b), field.element(c))


def test_xgcd_identity():
    rng = random.Random(3)
    for field in (Q, QI, Q7):
        for _ in range(30):
            a = field.element(
                rng.randint(-40, 40), 0 if field.is_rational else rng.randint(-40, 40)
            )
            b = field.element(
                rng.randint(-40, 40), 0 if field.is_rational else rng.randint(-40, 40)
            )
            if a.is_zero and b.is_zero:
                continue
            g, s, t = xgcd(a, b)
            assert s * a + t * b == g
            if not a.is_zero:
                assert (a / g).is_integral
            if not b.is_zero:
                assert (b / g).is_integral


def test_bound_constant_values():
    assert bound_constant_sq(Q) == 1
    assert bound_constant_sq(QI) == 2
    assert bound_constant_sq(Q2) == 4
    assert bound_constant_sq(make_field(-3)) == pytest.approx(1.5)
    assert bound_constant_sq(Q7) * 3 == 7
    assert bound_constant_sq(make_field(-11)) * 2 == 11
    with pytest.raises(UnsupportedField):
        bound_constant_sq(Q14)


def test_reduce_rational_classic():
    # x^2 + y^2 - 5z^2 = 0 with a large starting solution; the bound forces
    # z^2 <= 1, i.e. one of the fundamental points like (1, 2, 1).
    eq = _eq(Q, 1, 1, -5)
    big = SolutionTriple(Q.element(41), Q.element(38), Q.element(25))
    assert verify(eq, big)
    red = reduce_solution(eq, big)
    assert verify(eq, red)
    assert is_reduced(eq, red)
    assert red.z.norm() <= 1


def test_reduce_rational_keeps_already_reduced():
    eq = _eq(Q, 1, 1, -2)
    sol = SolutionTriple(Q.element(1), Q.element(1), Q.element(1))
    red = reduce_solution(eq, sol)
    assert is_reduced(eq, red)
    assert abs(red.z.u) == 1


def test_reduce_requires_solution():
    eq = _eq(Q, 1, 1, -2)
    with pytest.raises(PreconditionViolated):
        reduce_solution(eq, SolutionTriple(Q.element(1), Q.element(2), Q.element(3)))


def test_reduce_solver_output_rational():
    rng = random.Random(19)
    done = 0
    while done < 15:
        a = rng.randint(1, 12)
        b = rng.randint(1, 12)
        c = -rng.randint(1, 20)
        eq = _eq(Q, a, b, c)
        if not check_solvable(eq).solvable:
            continue
        sol = solve_conic(eq)
        red = reduce_solution(eq, sol)
        assert verify(eq, red)
        assert is_reduced(eq, red)
        done += 1


def test_reduce_over_gaussian_field():
    # x^2 + y^2 + (2 + i) z^2 = 0 over Q(i) from a deliberately blown-up
    # starting solution.
    eq = ConicEquation(QI.element(1), QI.element(1), QI.element(2, 1))
    base = solve_conic(eq)
    k = QI.element(3, 2)
    big = SolutionTriple(base.x * k, base.y * k, base.z * k)
    red = reduce_solution(eq, big)
    assert verify(eq, red)
    assert is_reduced(eq, red)
    # N(z)^2 <= 2 * |N(a)*N(b)| = 2 here.
    assert red.z.norm() ** 2 <= 2


def test_reduce_known_field_example():
    # 3x^2 + 2y^2 + 13z^2 = 0 over Q(sqrt(-7)): (sqrt(-7), 2, 1) is already
    # minimal, and scaled copies reduce back to a minimal one.
    eq = _eq(Q7, 3, 2, 13)
    base = SolutionTriple(Q7.sqrt_gen(), Q7.element(2), Q7.element(1))
    assert is_reduced(eq, base)
    k = Q7.element(1, 2)
    big = SolutionTriple(base.x * k, base.y * k, base.z * k)
    red = reduce_solution(eq, big)
    assert verify(eq, red)
    assert is_reduced(eq, red)


def test_reduce_random_imaginary_fields():
    rng = random.Random(41)
    done = 0
    for field in (QI, Q2, Q7):
        trials = 0
        while done < 3 * (1 + [QI, Q2, Q7].index(field)) and trials < 200:
            trials += 1
            x = field.element(rng.randint(-5, 5), rng.randint(-2, 2))
            y = field.element(rng.randint(-5, 5), rng.randint(-2, 2))
            z = field.element(rng.randint(1, 5), rng.randint(-2, 2))
            a = field.element(rng.randint(1, 6))
            b = field.element(rng.randint(1, 6))
            if x.is_zero or y.is_zero or z.is_zero:
                continue
            # Build c so the triple is a solution with integral c.
            num = -(a * x * x + b * y * y)
            den = z * z
            c = num / den
            if not c.is_integral or c.is_zero:
                continue
            eq = ConicEquation(a, b, c)
            sol = SolutionTriple(x, y, z)
            assert verify(eq, sol)
            red = reduce_solution(eq, sol)
            assert verify(eq, red)
            assert is_reduced(eq, red)
            done += 1
    assert done >= 9
