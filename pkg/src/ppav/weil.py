"""Weil polynomials, isogeny-class validation, and Frobenius angles.

A degree-2n monic integer polynomial f is treated as the characteristic
polynomial of Frobenius for an isogeny class of n-dimensional abelian
varieties over F_q.  Validity (all complex roots of absolute value sqrt(q))
is decided exactly: f must satisfy x^2n f(q/x) = q^n f(x), and the real
companion polynomial g with x^n g(x + q/x) = f(x) must have all roots real
and inside [-2 sqrt(q), 2 sqrt(q)], checked with Sturm counts against
rational brackets of 2 sqrt(q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt

from . import arith
from .errors import DomainError, NotWeilShape, UnsupportedDegree


@dataclass(frozen=True)
class IsogenyClassSpec:
    """A validated Weil polynomial with its derived data.

    f: monic degree-2n integer polynomial, ascending coefficients.
    g: the real companion polynomial, monic of degree n.
    angles: the n Frobenius angles in [0, pi], ascending.
    """

    f: tuple
    q: int
    n: int
    g: tuple
    angles: tuple

    @property
    def middle_coefficient(self):
        return self.f[self.n]


def real_weil_polynomial(f, q):
    """The monic degree-n polynomial g with x^n g(x + q/x) = f(x).

    Existence of g is equivalent to the functional equation
    x^2n f(q/x) = q^n f(x); raises NotWeilShape otherwise.
    """
    f = arith.poly_trim(f)
    deg = len(f) - 1
    if deg < 2 or deg % 2 != 0 or f[-1] != 1:
        raise NotWeilShape("need a monic polynomial of even degree >= 2")
    n = deg // 2
    rem = list(f)
    g = [0] * (n + 1)
    for k in range(n, -1, -1):
        coeff = rem[n + k] if n + k < len(rem) else 0
        g[k] = coeff
        if coeff != 0:
            # subtract coeff * x^n (x + q/x)^k
            expansion = [0] * (n + k + 1)
            for j in range(k + 1):
                expansion[n + k - 2 * j] += comb(k, j) * q**j
            rem = arith.poly_sub(rem, arith.poly_scale(expansion, coeff))
            rem = list(rem)
    if arith.poly_trim(rem):
        raise NotWeilShape("functional equation x^2n f(q/x) = q^n f(x) fails")
    return arith.poly_trim(g)


def _sign_plus_root(a, b, q):
    """Exact sign of a + b*sqrt(q) for integers a, b and q > 0."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs - compare a^2 with b^2 q
    lhs, rhs = a * a, b * b * q
    if lhs == rhs:
        return 0
    big_is_a = lhs > rhs
    if a > 0:
        return 1 if big_is_a else -1
    return -1 if big_is_a else 1


def _rational_bracket(poly, q, negative):
    """Rational (lo, hi) with lo < +-2 sqrt(q) < hi and no root of poly inside.

    Assumes poly has no root exactly at +-2 sqrt(q).
    """
    s = isqrt(4 * q)
    lo, hi = Fraction(s), Fraction(s + 1)
    if negative:
        lo, hi = -hi, -lo
    chain = arith.sturm_chain(poly)
    while arith._sign_variations(chain, lo) - arith._sign_variations(chain, hi) > 0:
        mid = (lo + hi) / 2
        # mid > 2 sqrt(q) iff mid^2 > 4q (sign-aware for the negative bracket)
        above = mid * mid > 4 * q if not negative else mid * mid < 4 * q
        if above:
            hi = mid
        else:
            lo = mid
    return lo, hi


def is_weil(f, q):
    """True iff every complex root of f has absolute value sqrt(q)."""
    f = arith.poly_trim(f)
    if not f or f[-1] != 1 or (len(f) - 1) % 2 != 0 or len(f) < 3:
        raise DomainError("need a monic polynomial of even degree >= 2")
    if q < 2:
        raise DomainError("q must be at least 2")
    try:
        g = real_weil_polynomial(f, q)
    except NotWeilShape:
        return False
    g = arith.poly_squarefree_part(g)
    # strip roots exactly at +-2 sqrt(q); they correspond to roots +-sqrt(q) of f
    s = isqrt(4 * q)
    if s * s == 4 * q:
        for root in (s, -s):
            if arith.poly_eval(g, root) == 0:
                g, _ = arith.poly_divmod_exact(g, [-root, 1])
    else:
        quot, rem = _try_divide(g, [-4 * q, 0, 1])
        if rem is not None and not rem:
            g = quot
    if len(g) <= 1:
        return True
    bound = Fraction(arith.cauchy_root_bound(g))
    total = arith.sturm_count(g, -bound, bound)
    if total != len(g) - 1:
        return False
    _, neg_hi = _rational_bracket(g, q, negative=True)
    pos_lo, _ = _rational_bracket(g, q, negative=False)
    inside = arith.sturm_count(g, neg_hi, pos_lo)
    return inside == len(g) - 1


def _try_divide(a, b):
    try:
        quot, rem = arith.poly_divmod_exact(a, b)
    except DomainError:
        return None, None
    return quot, rem


def is_ordinary(f, q):
    """Middle coefficient coprime to q.

    This is the standard ordinarity test for abelian surfaces and elliptic
    curves; it is adopted as the operative definition for every dimension,
    which is exact for n <= 2.
    """
    f = arith.poly_trim(f)
    n = (len(f) - 1) // 2
    return gcd(f[n], q) == 1


def is_simple(f):
    """Irreducibility over Q for monic integer polynomials of degree <= 4."""
    f = arith.poly_trim(f)
    deg = len(f) - 1
    if deg > 4:
        raise UnsupportedDegree("irreducibility test implemented up to degree 4")
    if f[-1] != 1:
        raise DomainError("need a monic polynomial")
    if deg <= 1:
        return deg == 1
    if f[0] == 0:
        return False
    if _has_rational_root(f):
        return False
    if deg < 4:
        return True
    # look for f = (x^2 + u x + v)(x^2 + w x + z) over Z, and the same with
    # both factors negated (covered by v z = f0 with sign choices)
    f0, f1, f2, f3 = f[0], f[1], f[2], f[3]
    for v in _signed_divisors(f0):
        z = f0 // v
        # u + w = f3, u z + v w = f1, v + z + u w = f2
        if z != v:
            num = f1 - f3 * v
            den = z - v
            if num % den != 0:
                continue
            u = num // den
            w = f3 - u
            if v + z + u * w == f2:
                return False
        else:
            # u + w = f3 and v(u + w) = f1 force v f3 = f1
            if v * f3 != f1:
                continue
            # u w = f2 - 2v with u + w = f3
            disc = f3 * f3 - 4 * (f2 - 2 * v)
            if disc >= 0 and isqrt(disc) ** 2 == disc:
                return False
    return True


def _has_rational_root(f):
    # monic, so rational roots are integers dividing the constant term
    for r in _signed_divisors(f[0]):
        if arith.poly_eval(f, r) == 0:
            return True
    return False


def _signed_divisors(n):
    out = []
    for d in arith.divisors(abs(n)):
        out.append(d)
        out.append(-d)
    return out


def frobenius_angles(f, q, bits=None):
    """Frobenius angles arccos(r / 2 sqrt(q)) for the real roots r of g.

    Roots are isolated exactly by Sturm sequences and refined by dyadic
    bisection, so each angle is accurate to well below 1e-14.
    """
    g = real_weil_polynomial(f, q)
    n = len(g) - 1
    if bits is None:
        # the isolation bracket is as wide as the coefficient bound, so pay
        # for its bit length to keep the absolute root error near 2^-64
        bits = 64 + max(abs(c) for c in g).bit_length()
    decomposition = arith.poly_squarefree_decomposition(g)
    two_sqrt_q = 2.0 * math.sqrt(q)
    angles = []
    for factor, mult in decomposition:
        if len(factor) <= 1:
            continue
        for root in arith.real_roots(factor, bits=bits):
            x = float(root) / two_sqrt_q
            x = min(1.0, max(-1.0, x))
            angles.extend([math.acos(x)] * mult)
    if len(angles) != n:
        raise DomainError("polynomial has roots off the circle of radius sqrt(q)")
    return sorted(angles)


def isogeny_class(f, q):
    """Validate f as the Weil polynomial of an isogeny class over F_q."""
    f = tuple(arith.poly_trim(f))
    if arith.is_prime_power(q) is None:
        raise DomainError(f"q = {q} is not a prime power")
    if not f or f[-1] != 1 or (len(f) - 1) % 2 != 0 or len(f) < 3:
        raise NotWeilShape("need a monic polynomial of even degree >= 2")
    if not is_weil(f, q):
        raise NotWeilShape("roots are not all of absolute value sqrt(q)")
    n = (len(f) - 1) // 2
    g = tuple(real_weil_polynomial(f, q))
    angles = tuple(frobenius_angles(f, q))
    return IsogenyClassSpec(f=f, q=q, n=n, g=g, angles=angles)


def random_surface_spec(rng, qmax=10_000, require_ordinary=True, require_simple=True):
    """Random valid n=2 isogeny class over F_q, q prime, by rejection.

    Samples integer (a, b) uniformly over the region where the companion
    g = x^2 + a x + (b - 2q) has two distinct real roots strictly inside
    (-2 sqrt(q), 2 sqrt(q)).
    """
    while True:
        q = rng.randrange(3, qmax + 1)
        if not arith.is_prime(q):
            continue
        s = isqrt(4 * q)
        a = rng.randrange(-2 * s - 1, 2 * s + 2)
        c = rng.randrange(-6 * q, 6 * q + 1)
        if a * a - 4 * c <= 0:
            continue
        if a * a >= 16 * q:
            continue
        if _sign_plus_root(4 * q + c, 2 * a, q) <= 0:
            continue
        if _sign_plus_root(4 * q + c, -2 * a, q) <= 0:
            continue
        b = c + 2 * q
        if require_ordinary and gcd(b, q) != 1:
            continue
        f = (q * q, a * q, b, a, 1)
        if require_simple and not is_simple(f):
            continue
        return isogeny_class(f, q)
