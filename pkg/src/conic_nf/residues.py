"""Square roots modulo prime ideals and their powers, CRT recombination,
and the dyadic local solvability search.

Residue rings with a rational integer modulus N are (Z/N)[omega] and are
handled with coordinate arithmetic mod N.  Split primes are handled through
the isomorphism O_K/P^e = Z/p^e; inert and ramified primes by Newton
lifting in (Z/p^m)[omega].
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import EvenPrime, UndecidedError
from .fields import FieldDescriptor, FieldElement, require_integral, size_sq
from .ideals import (
    Ideal,
    PrimeIdeal,
    element_valuation,
    factor_ideal,
    lattice_express,
    unit_ideal,
    _sqrt_mod_p,
)

_ENUM_GUARD = 10**5


@dataclass(frozen=True)
class ResidueClass:
    modulus: Ideal
    representative: FieldElement

    @staticmethod
    def of(x: FieldElement, modulus: Ideal) -> "ResidueClass":
        return ResidueClass(modulus, modulus.reduce(x))


# -- coordinate arithmetic in (Z/N)[omega] ----------------------------------


def _ring_mul(field: FieldDescriptor, N: int, x, y):
    u1, v1 = x
    u2, v2 = y
    if field.omega_kind == "sqrt_d":
        return ((u1 * u2 + field.d * v1 * v2) % N, (u1 * v2 + u2 * v1) % N)
    c = (field.d - 1) // 4
    return (
        (u1 * u2 + c * v1 * v2) % N,
        (u1 * v2 + u2 * v1 + v1 * v2) % N,
    )


def _ring_sub(N: int, x, y):
    return ((x[0] - y[0]) % N, (x[1] - y[1]) % N)


def _ring_pow(field, N, x, k):
    result = (1 % N, 0)
    while k:
        if k & 1:
            result = _ring_mul(field, N, result, x)
        x = _ring_mul(field, N, x, x)
        k >>= 1
    return result


def _ring_norm(field, N, x) -> int:
    u, v = x
    if field.omega_kind == "sqrt_d":
        return (u * u - field.d * v * v) % N
    return (u * u + u * v + v * v * ((1 - field.d) // 4)) % N


def _ring_conj(field, N, x):
    u, v = x
    if field.omega_kind == "sqrt_d":
        return (u % N, -v % N)
    return ((u + v) % N, -v % N)


def _ring_inv(field, N, x):
    n = _ring_norm(field, N, x)
    ninv = pow(n, -1, N)
    cu, cv = _ring_conj(field, N, x)
    return (cu * ninv % N, cv * ninv % N)


# -- square roots in residue fields -----------------------------------------


def _fq2_sqrt(field: FieldDescriptor, p: int, a) -> Optional[tuple[int, int]]:
    """Tonelli-Shanks in F_{p^2} = (Z/p)[omega] for inert odd p."""
    a = (a[0] % p, a[1] % p)
    if a == (0, 0):
        return (0, 0)
    q = p * p
    one = (1, 0)
    if _ring_pow(field, p, a, (q - 1) // 2) != one:
        return None
    Q, S = q - 1, 0
    while Q % 2 == 0:
        Q //= 2
        S += 1
    # Deterministic nonresidue scan.
    z = None
    for u, v in itertools.product(range(p), repeat=2):
        cand = (u, v)
        if cand == (0, 0):
            continue
        if _ring_pow(field, p, cand, (q - 1) // 2) != one:
            z = cand
            break
    assert z is not None
    m = S
    c = _ring_pow(field, p, z, Q)
    t = _ring_pow(field, p, a, Q)
    r = _ring_pow(field, p, a, (Q + 1) // 2)
    while t != one:
        t2, i = t, 0
        while t2 != one:
            t2 = _ring_mul(field, p, t2, t2)
            i += 1
        b = _ring_pow(field, p, c, 1 << (m - i - 1))
        m = i
        c = _ring_mul(field, p, b, b)
        t = _ring_mul(field, p, t, c)
        r = _ring_mul(field, p, r, b)
    return r


def sqrt_mod_prime(a: FieldElement, P: PrimeIdeal) -> Optional[FieldElement]:
    """A square root of a modulo the odd prime ideal P, or None."""
    if P.p == 2:
        raise EvenPrime("use the dyadic enumeration for primes over 2")
    require_integral(a)
    field = a.field
    p = P.p
    roots: list[FieldElement] = []
    if field.is_rational or P.f == 1:
        r = _residue_image(a, P)
        s = _sqrt_mod_p(r, p)
        if s is None:
            return None
        roots = [field.element(s), field.element(-s % p)]
    else:
        s = _fq2_sqrt(field, p, (int(a.u), int(a.v)))
        if s is None:
            return None
        roots = [field.element(*s), field.element(-s[0] % p, -s[1] % p)]
    I = P.ideal()
    reduced = sorted(
        {I.reduce(x) for x in roots}, key=lambda x: (x.u, x.v)
    )
    return reduced[0]


def _residue_image(a: FieldElement, P: PrimeIdeal) -> int:
    """Image of a in O_K/P = F_p for a degree-1 prime."""
    field = a.field
    if field.is_rational:
        return int(a.u) % P.p
    sg = P.second_gen
    if sg.v == 0:
        # Inert-style second generator cannot occur for f = 1.
        raise AssertionError("degree-1 prime needs omega in its second generator")
    # second_gen = s0 + s1*omega with omega = -s0/s1 mod p.
    s1inv = pow(int(sg.v) % P.p, -1, P.p)
    r = (-int(sg.u) * s1inv) % P.p
    return (int(a.u) + int(a.v) * r) % P.p


# -- prime power roots -------------------------------------------------------


def _int_sqrt_mod_odd_prime_power(A: int, p: int, e: int) -> Optional[list[int]]:
    """All roots of x^2 = A (mod p^e), odd p."""
    pe = p**e
    A %= pe
    if A == 0:
        step = p ** ((e + 1) // 2)
        return list(range(0, pe, step))
    s = 0
    m = A
    while m % p == 0:
        m //= p
        s += 1
    if s % 2 == 1:
        return None
    r = _sqrt_mod_p(m % p, p)
    if r is None:
        return None
    # Hensel to mod p^(e - s).
    k = 1
    target = e - s
    while k < target:
        k = min(2 * k, target)
        pk = p**k
        r = (r - (r * r - m) * pow(2 * r, -1, pk)) % pk
    h = p ** (s // 2)
    period = p ** (e - s // 2)
    roots = set()
    for base in (r, (-r) % p**target):
        x0 = h * base
        for t in range(p ** (s // 2)):
            roots.add((x0 + t * period) % pe)
    return sorted(roots)


def _split_int_params(P: PrimeIdeal, e: int) -> int:
    """Integer r_e with omega = r_e (mod P^e), for a degree-1 odd prime."""
    field = P.field
    p = P.p
    r = _residue_image(field.omega(), P)
    # Lift the root of omega's minimal polynomial when p is unramified.
    if field.omega_kind == "sqrt_d":
        g = lambda x: x * x - field.d
        gp = lambda x: 2 * x
    else:
        c = (field.d - 1) // 4
        g = lambda x: x * x - x - c
        gp = lambda x: 2 * x - 1
    if P.e == 2:
        # Ramified: omega's polynomial has a double root; the integer image
        # is only correct mod P, not mod p^k.  Callers must not use this.
        raise AssertionError("no integer model for ramified prime powers")
    k = 1
    while k < e:
        k = min(2 * k, e)
        pk = p**k
        r = (r - g(r) * pow(gp(r), -1, pk)) % pk
    return r


def _roots_mod_subgroup(P: PrimeIdeal, e: int) -> list[FieldElement]:
    """All x mod P^e with v_P(x) >= ceil(e/2) (roots when a = 0 mod P^e)."""
    Ie = P.ideal() ** e
    if Ie.norm > _ENUM_GUARD:
        return [P.field.zero()]
    Ik = P.ideal() ** ((e + 1) // 2)
    return [x for x in Ie.residues() if Ik.contains(x)]


def sqrt_mod_odd_prime_power(
    a: FieldElement, P: PrimeIdeal, e: int
) -> Optional[list[FieldElement]]:
    """All square roots of a modulo P^e for odd P, or None if there are none.

    None is decisive.  Raises UndecidedError only when a ramified stratum
    enumeration would exceed the size guard.
    """
    field = P.field
    p = P.p
    Ie = P.ideal() ** e
    if a.is_zero:
        return _roots_mod_subgroup(P, e)
    s = element_valuation(a, P)
    if s >= e:
        return _roots_mod_subgroup(P, e)

    if field.is_rational:
        roots = _int_sqrt_mod_odd_prime_power(int(a.u), p, e)
        if roots is None:
            return None
        return [field.element(r) for r in roots]

    if P.e == 1 and P.f == 1:
        # Split: work through the integer model Z/p^e.
        r_e = _split_int_params(P, e)
        pe = p**e
        A = (int(a.u) + int(a.v) * r_e) % pe
        roots = _int_sqrt_mod_odd_prime_power(A, p, e)
        if roots is None:
            return None
        return [field.element(r) for r in roots]

    if P.f == 2:
        # Inert: ring is (Z/p^e)[omega]; p^s divides a exactly.
        if s % 2 == 1:
            return None
        pe = p**e
        if s == 0:
            base = _fq2_sqrt(field, p, (int(a.u), int(a.v)))
            if base is None:
                return None
            x = base
            k = 1
            while k < e:
                k = min(2 * k, e)
                pk = p**k
                fx = _ring_sub(pk, _ring_mul(field, pk, x, x), (int(a.u) % pk, int(a.v) % pk))
                inv2x = _ring_inv(field, pk, ((2 * x[0]) % pk, (2 * x[1]) % pk))
                corr = _ring_mul(field, pk, fx, inv2x)
                x = _ring_sub(pk, x, corr)
            out = {
                Ie.reduce(field.element(*x)),
                Ie.reduce(field.element(-x[0] % pe, -x[1] % pe)),
            }
            return sorted(out, key=lambda z: (z.u, z.v))
        h = p ** (s // 2)
        inner = sqrt_mod_odd_prime_power(
            field.element(Fraction(int(a.u), h * h), Fraction(int(a.v), h * h)),
            P,
            e - s,
        )
        if inner is None:
            return None
        period = p ** (e - s // 2)
        out = set()
        for y in inner:
            for tu in range(h):
                for tv in range(h):
                    cand = field.element(
                        (h * int(y.u) + tu * period) % pe,
                        (h * int(y.v) + tv * period) % pe,
                    )
                    if Ie.contains(cand * cand - a):
                        out.add(Ie.reduce(cand))
        return sorted(out, key=lambda z: (z.u, z.v))

    # Ramified odd prime.
    if s % 2 == 1:
        return None
    if s > 0:
        # Any root has P-valuation exactly s/2; enumerate that stratum.
        if Ie.norm > _ENUM_GUARD:
            raise UndecidedError(
                f"root search mod {P}^{e} (norm {Ie.norm}) is too large "
                "for exhaustive enumeration at a ramified prime"
            )
        Ik = P.ideal() ** (s // 2)
        out = [
            x
            for x in Ie.residues()
            if Ik.contains(x) and Ie.contains(x * x - a)
        ]
        return sorted(out, key=lambda z: (z.u, z.v)) or None

    # Unit case: Newton in (Z/p^m)[omega] with (p^m) inside P^e.
    m = (e + 1) // 2
    r0 = _sqrt_mod_p(_residue_image(a, P), p)
    if r0 is None:
        return None
    pm = p**m
    x = (r0 % pm, 0)
    au, av = int(a.u) % pm, int(a.v) % pm
    for _ in range(2 * m + 4):
        fx = _ring_sub(pm, _ring_mul(field, pm, x, x), (au, av))
        if fx == (0, 0):
            break
        inv2x = _ring_inv(field, pm, ((2 * x[0]) % pm, (2 * x[1]) % pm))
        x = _ring_sub(pm, x, _ring_mul(field, pm, fx, inv2x))
    cand = field.element(*x)
    assert Ie.contains(cand * cand - a), "Newton lift failed to converge"
    out = {Ie.reduce(cand), Ie.reduce(-cand)}
    return sorted(out, key=lambda z: (z.u, z.v))


def sqrt_mod_dyadic_prime_power(
    a: FieldElement, P: PrimeIdeal, e: int
) -> Optional[list[FieldElement]]:
    """All roots of x^2 = a (mod P^e) over 2, by exhaustive enumeration."""
    Ie = P.ideal() ** e
    if Ie.norm > _ENUM_GUARD:
        return None
    roots = [x for x in Ie.residues() if Ie.contains(x * x - a)]
    return roots or None


# -- CRT and size minimisation ----------------------------------------------


def crt_coefficients(field: FieldDescriptor, ideals: list[Ideal]) -> list[FieldElement]:
    """Elements lam_i with lam_i = 1 mod I_i and lam_i = 0 mod all I_j."""
    out = []
    for i, I in enumerate(ideals):
        J = unit_ideal(field)
        for j, other in enumerate(ideals):
            if j != i:
                J = J * other
        irows = [(int(x.u), int(x.v)) for x in I.basis_elements()]
        jrows = [(int(x.u), int(x.v)) for x in J.basis_elements()]
        coeffs = lattice_express(irows + jrows, (1, 0))
        if coeffs is None:
            raise ValueError("ideals are not comaximal")
        jcoeffs = coeffs[len(irows):]
        w = field.zero()
        for cval, g in zip(jcoeffs, J.basis_elements()):
            w = w + g * cval
        out.append(w)
    return out


def _embed_dot(x: FieldElement, y: FieldElement) -> Fraction:
    """Euclidean inner product of the archimedean embedding vectors."""
    field = x.field
    if field.totally_imaginary:
        return Fraction((x * y.conj()).trace(), 2)
    return Fraction((x * y).trace())


def _lagrange_reduce(m1: FieldElement, m2: FieldElement):
    """Gauss-Lagrange reduction of a rank-2 lattice basis of field elements."""
    if _embed_dot(m1, m1) > _embed_dot(m2, m2):
        m1, m2 = m2, m1
    while True:
        n1 = _embed_dot(m1, m1)
        q = round(_embed_dot(m1, m2) / n1)
        if q:
            m2 = m2 - m1 * q
        if _embed_dot(m2, m2) >= n1:
            return m1, m2
        m1, m2 = m2, m1


def _babai_round(x: FieldElement, r1: FieldElement, r2: FieldElement) -> FieldElement:
    """The lattice point k1*r1 + k2*r2 nearest to x by coordinate rounding."""
    det = Fraction(r1.u) * Fraction(r2.v) - Fraction(r2.u) * Fraction(r1.v)
    t1 = (Fraction(x.u) * r2.v - Fraction(x.v) * r2.u) / det
    t2 = (Fraction(r1.u) * Fraction(x.v) - Fraction(r1.v) * Fraction(x.u)) / det
    return r1 * round(t1) + r2 * round(t2)


def closest_in_coset(x: FieldElement, M: Ideal) -> FieldElement:
    """Minimal-size representative of x + M, certified by enumeration.

    Ties break to the lexicographically smallest (u, v).
    """
    field = x.field
    require_integral(x)
    if field.is_rational:
        a = M.a
        r = int(x.u) % a
        cands = [field.element(r), field.element(r - a)]
        return min(cands, key=lambda z: (size_sq(z), z.u, z.v))

    x = M.reduce(x)
    a, b, c = M.a, M.b, M.c
    m1 = field.element(a)
    m2 = field.element(b, c)
    # Babai rounding in a Lagrange-reduced basis gives a near-optimal
    # starting radius; the window enumeration below certifies the minimum.
    base = x - _babai_round(x, *_lagrange_reduce(m1, m2))
    best_sq = size_sq(base)
    t2 = Fraction(int(x.v), c)
    R = math.sqrt(float(best_sq)) * (1 + 1e-9) + 1e-9
    sd = math.sqrt(abs(field.d))
    vscale = 1 if field.omega_kind == "sqrt_d" else Fraction(1, 2)
    # |v-coordinate| of a candidate is bounded by R / (sqrt(|d|) * vscale).
    vmax = R / (sd * float(vscale))
    best = base
    best_key = (best_sq, base.u, base.v)
    k2lo = math.floor(float(t2) - vmax / c) - 1
    k2hi = math.ceil(float(t2) + vmax / c) + 1
    for k2 in range(k2lo, k2hi + 1):
        rem = x - m2 * k2
        # |1-part in s-coords| <= R (+ half of the omega part if needed).
        slack = R + (0 if field.omega_kind == "sqrt_d" else abs(float(rem.v)) / 2 + 1)
        k1lo = math.floor((float(rem.u) - slack) / a) - 1
        k1hi = math.ceil((float(rem.u) + slack) / a) + 1
        for k1 in range(k1lo, k1hi + 1):
            cand = rem - m1 * k1
            key = (size_sq(cand), cand.u, cand.v)
            if _key_lt(key, best_key):
                best, best_key = cand, key
    return best


def _key_lt(a, b) -> bool:
    if a[0] != b[0]:
        return a[0] < b[0]
    return (a[1], a[2]) < (b[1], b[2])


def sqrt_mod_ideal(a: FieldElement, M: Ideal) -> Optional[FieldElement]:
    """A size-minimal w with w^2 = a (mod M), or None if no root exists."""
    require_integral(a)
    field = a.field
    if M.norm == 1:
        return field.zero()
    factors = factor_ideal(M)
    root_sets: list[list[FieldElement]] = []
    moduli: list[Ideal] = []
    for P, e in factors:
        if P.p == 2:
            roots = sqrt_mod_dyadic_prime_power(a, P, e)
        else:
            roots = sqrt_mod_odd_prime_power(a, P, e)
        if roots is None:
            return None
        root_sets.append(roots)
        moduli.append(P.ideal() ** e)
    lams = crt_coefficients(field, moduli)
    best = None
    best_key = None
    seen = set()
    combos = itertools.product(*root_sets)
    for combo in itertools.islice(combos, 4096):
        w = field.zero()
        for lam, r in zip(lams, combo):
            w = w + lam * r
        w = M.reduce(w)
        if w in seen:
            continue
        seen.add(w)
        cand = closest_in_coset(w, M)
        key = (size_sq(cand), cand.u, cand.v)
        if best_key is None or _key_lt(key, best_key):
            best, best_key = cand, key
    assert best is not None
    assert M.contains(best * best - a)
    return best


# -- dyadic local solvability ------------------------------------------------


def _uniformiser(P: PrimeIdeal) -> FieldElement:
    """An element of P-valuation exactly 1 (other primes unconstrained)."""
    field = P.field
    if field.is_rational or P.f == 2:
        return field.element(P.p)
    g = P.second_gen
    if element_valuation(g, P) == 1:
        return g
    return g + field.element(P.p)


def _residue_reps(P: PrimeIdeal) -> list[FieldElement]:
    field = P.field
    if field.is_rational or P.f == 1:
        return [field.element(r) for r in range(P.p)]
    return [
        field.element(u, v) for u in range(P.p) for v in range(P.p)
    ]


def local_solvable_at_two(
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    P: PrimeIdeal,
    v_max: int = 4,
) -> Optional[tuple[FieldElement, FieldElement, FieldElement, int]]:
    """Witness (x, y, z, v) for the dyadic condition at P, or None.

    Searches v = 1..v_max for (x, y, z) mod P^(2v+1) with
    a x^2 + b y^2 + c z^2 = 0 (mod P^(2v+1)) and at least one of
    2*a*x, 2*b*y, 2*c*z outside P^(v+1); the search over the finite
    residue ring is exhaustive (digit DFS with exact pruning).
    """
    if P.p != 2:
        raise EvenPrime("dyadic test is only defined over primes above 2")
    field = a.field
    pi = _uniformiser(P)
    reps = _residue_reps(P)
    max_depth = 2 * v_max + 1
    powers = [unit_ideal(field)]
    for _ in range(max_depth + 2):
        powers.append(powers[-1] * P.ideal())
    pi_pows = [field.one()]
    for _ in range(max_depth):
        pi_pows.append(pi_pows[-1] * pi)

    for v in range(1, v_max + 1):
        depth = 2 * v + 1
        grad_mod = powers[v + 1]
        target = powers[depth]
        # A non-primitive witness at level v scales down (locally) to a
        # witness at level v - 1, so skipping all-zero leading digits is
        # safe once v >= 2.
        require_primitive = v >= 2

        def grad_ok(x, y, z):
            return (
                not grad_mod.contains(2 * a * x)
                or not grad_mod.contains(2 * b * y)
                or not grad_mod.contains(2 * c * z)
            )

        def dfs(x, y, z, k):
            val = a * x * x + b * y * y + c * z * z
            if not powers[min(k, depth)].contains(val):
                return None
            if k >= v + 1 and not grad_ok(x, y, z):
                return None
            if k >= depth:
                if grad_ok(x, y, z):
                    return (x, y, z)
                return None
            scale = pi_pows[k]
            for rx in reps:
                for ry in reps:
                    for rz in reps:
                        if require_primitive and k == 0 and rx.is_zero and ry.is_zero and rz.is_zero:
                            continue
                        got = dfs(
                            x + scale * rx, y + scale * ry, z + scale * rz, k + 1
                        )
                        if got is not None:
                            return got
            return None

        zero = field.zero()
        got = dfs(zero, zero, zero, 0)
        if got is not None:
            return (got[0], got[1], got[2], v)
    return None
