"""Class groups and units of quadratic orders, by exact enumeration.

Imaginary class numbers count primitive reduced binary quadratic forms;
real narrow class numbers count cycles of reduced indefinite forms;
fundamental units come from continued fractions.  Everything is integer
arithmetic, no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from . import arith
from .errors import DomainError, InternalError


def check_discriminant(delta):
    if delta % 4 not in (0, 1):
        raise DomainError(f"{delta} is not 0 or 1 mod 4")


def is_fundamental(delta):
    if delta == 1 or delta == 0:
        return False
    if delta % 4 == 1:
        s, f = arith.squarefree_decompose(abs(delta))
        return f == 1
    if delta % 4 == 0:
        m = delta // 4
        s, f = arith.squarefree_decompose(abs(m))
        return f == 1 and m % 4 in (2, 3)
    return False


def fundamental_decomposition(delta):
    """delta = F^2 * delta0 with delta0 a fundamental discriminant.

    Works for positive and negative nonsquare discriminants.
    """
    check_discriminant(delta)
    if delta == 0:
        raise DomainError("discriminant must be nonzero")
    sign = 1 if delta > 0 else -1
    s, f = arith.squarefree_decompose(abs(delta))
    d = sign * s
    if d % 4 == 1:
        return d, f
    if f % 2 != 0:
        raise InternalError("discriminant decomposition lost a factor of 2")
    return 4 * d, f // 2


@dataclass(frozen=True)
class QuadDiscriminant:
    delta: int
    delta0: int
    conductor: int


def quad_discriminant(delta):
    d0, f = fundamental_decomposition(delta)
    return QuadDiscriminant(delta=delta, delta0=d0, conductor=f)


@dataclass(frozen=True)
class QuadClassData:
    """Class-group data of one quadratic order.

    Imaginary orders carry h and the Kronecker number H >= h; real orders
    carry h, the narrow number hplus in {h, 2h}, and the fundamental unit
    with its norm.
    """

    disc: QuadDiscriminant
    h: int
    hplus: int | None = None
    H: int | None = None
    fundamental_unit: "RealQuadElement | None" = None
    unit_norm: int | None = None


# ---------------------------------------------------------------------------
# imaginary quadratic class numbers


def class_number_imaginary(delta):
    """Number of primitive reduced forms (a, b, c) of discriminant delta < 0.

    Reduced: |b| <= a <= c with b >= 0 whenever |b| = a or a = c.
    Enumerates b, factors (b^2 - delta)/4, and splits it into a * c.
    """
    if delta >= 0:
        raise DomainError("need a negative discriminant")
    check_discriminant(delta)
    count = 0
    b = delta % 2
    bmax = isqrt(-delta // 3)
    while b <= bmax:
        m = (b * b - delta) // 4
        for a in arith.divisors(m):
            if a * a > m:
                break
            if a < max(b, 1):
                continue
            c = m // a
            if gcd(gcd(a, b), c) != 1:
                continue
            if b == 0 or b == a or a == c:
                count += 1
            else:
                count += 2
        b += 2
    return count


def _unit_index(delta0, f):
    if f == 1:
        return 1
    if delta0 == -3:
        return 3
    if delta0 == -4:
        return 2
    return 1


def _formula_from_h0(delta0, h0, f):
    num = h0 * f
    den = 1
    for p in arith.factorize(f):
        num *= p - arith.kronecker_symbol(delta0, p)
        den *= p
    den *= _unit_index(delta0, f)
    if num % den != 0:
        raise InternalError("class number formula did not produce an integer")
    return num // den


def class_number_by_formula(delta0, f):
    """h(f^2 delta0) from h(delta0) and the conductor Euler product.

    h(f^2 d0) = h(d0) * f * prod_{p | f} (1 - chi(p)/p) / w, where chi is
    the Kronecker character (d0 | .) and w is the unit-group index: 3 for
    d0 = -3, 2 for d0 = -4 (when f > 1), and 1 otherwise.
    """
    if delta0 >= 0:
        raise DomainError("need a negative fundamental discriminant")
    if not is_fundamental(delta0):
        raise DomainError(f"{delta0} is not a fundamental discriminant")
    if f < 1:
        raise DomainError("conductor must be positive")
    return _formula_from_h0(delta0, class_number_imaginary(delta0), f)


def stratified_class_numbers(delta):
    """[(f, h(f^2 delta0))] over all divisors f of the conductor of delta < 0."""
    if delta >= 0:
        raise DomainError("need a negative discriminant")
    disc = quad_discriminant(delta)
    h0 = class_number_imaginary(disc.delta0)
    return [(f, _formula_from_h0(disc.delta0, h0, f)) for f in arith.divisors(disc.conductor)]


def kronecker_class_number(delta):
    """H(delta): the sum of h(f^2 delta0) over all divisors f of the conductor."""
    return sum(h for _, h in stratified_class_numbers(delta))


def h_over_H_bound(delta):
    """(h(delta)/H(delta), prod_{p | F} (p+1)/(p+2)) as exact Fractions.

    The ratio is at most the bound whenever delta0 < -4.
    """
    disc = quad_discriminant(delta)
    h0 = class_number_imaginary(disc.delta0)
    h = _formula_from_h0(disc.delta0, h0, disc.conductor)
    big_h = sum(_formula_from_h0(disc.delta0, h0, f) for f in arith.divisors(disc.conductor))
    ratio = Fraction(h, big_h)
    bound = Fraction(1)
    for p in arith.factorize(disc.conductor):
        bound *= Fraction(p + 1, p + 2)
    if disc.delta0 < -4 and ratio > bound:
        raise InternalError(f"h/H bound violated at delta={delta}")
    return ratio, bound


# ---------------------------------------------------------------------------
# real quadratic orders: fundamental units


@dataclass(frozen=True)
class RealQuadElement:
    """a + b sqrt(d) with rational a, b and a squarefree radicand d > 1."""

    a: Fraction
    b: Fraction
    d: int

    def norm(self):
        return self.a * self.a - self.b * self.b * self.d

    def trace(self):
        return 2 * self.a

    def conjugate(self):
        return RealQuadElement(self.a, -self.b, self.d)

    def __mul__(self, other):
        if self.d != other.d:
            raise DomainError("mixed radicands")
        return RealQuadElement(
            self.a * other.a + self.b * other.b * self.d,
            self.a * other.b + self.b * other.a,
            self.d,
        )

    def is_integral(self):
        return self.norm().denominator == 1 and self.trace().denominator == 1


def real_quad_element(a, b, d):
    return RealQuadElement(Fraction(a), Fraction(b), d)


def _icbrt(n):
    """Floor of the cube root of n >= 0."""
    if n < 2:
        return n
    x = 1 << (n.bit_length() // 3 + 1)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x * x * x > n:
        x -= 1
    return x


def _pell_unit(n):
    """Fundamental solution of x^2 - n y^2 = +-1 via the continued fraction
    of sqrt(n); returns (x, y, norm)."""
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise DomainError("radicand is a perfect square")
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    p, q = 0, 1
    a = a0
    while True:
        p = a * q - p
        q = (n - p * p) // q
        a = (a0 + p) // q
        if q == 1:
            norm = h * h - n * k * k
            if norm not in (1, -1):
                raise InternalError("continued fraction did not close on a unit")
            return h, k, norm
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev


def _fundamental_unit_maximal(d0):
    """Fundamental unit (t + u sqrt(d0))/2 of the maximal order of fundamental
    discriminant d0 > 0; returns (t, u, norm)."""
    if d0 % 4 == 0:
        x, y, norm = _pell_unit(d0 // 4)
        return 2 * x, y, norm
    # d0 = 1 mod 4: the unit of Z[sqrt(d0)] is the full unit or its cube.
    # If eps = (t + u sqrt(d0))/2 has norm n0 and eps^3 = x + y sqrt(d0),
    # then t^3 - 3 n0 t = 2x; cubing preserves the norm sign, so n0 = norm.
    x, y, norm = _pell_unit(d0)
    target = 2 * x
    guess = _icbrt(target)
    for t in (guess - 1, guess, guess + 1, guess + 2):
        if t <= 0:
            continue
        if t * t * t - 3 * norm * t != target:
            continue
        usq_num = t * t - 4 * norm
        if usq_num <= 0 or usq_num % d0 != 0:
            continue
        usq = usq_num // d0
        u = isqrt(usq)
        if u * u == usq and u > 0:
            return t, u, norm
    return 2 * x, 2 * y, norm


def fundamental_unit(order_disc):
    """Fundamental unit > 1 of the real quadratic order of this discriminant.

    Returns (RealQuadElement, norm).  For a non-maximal order this is the
    smallest power of the maximal-order unit lying in the order.
    """
    if order_disc <= 0:
        raise DomainError("need a positive discriminant")
    check_discriminant(order_disc)
    if isqrt(order_disc) ** 2 == order_disc:
        raise DomainError("square discriminant does not define a real order")
    d0, conductor = fundamental_decomposition(order_disc)
    t, u, norm0 = _fundamental_unit_maximal(d0)
    # an element (t_k + u_k sqrt(d0))/2 lies in the order of conductor F
    # exactly when F divides u_k
    t_k, u_k, norm_k = t, u, norm0
    steps = 0
    while u_k % conductor != 0:
        t_k, u_k = (t * t_k + d0 * u * u_k) // 2, (t * u_k + u * t_k) // 2
        norm_k *= norm0
        steps += 1
        if steps > 10_000_000:
            raise InternalError("unit power search ran away")
    rad = d0 if d0 % 4 == 1 else d0 // 4
    scale = 1 if d0 % 4 == 1 else 2  # sqrt(d0) = scale * sqrt(rad)
    unit = RealQuadElement(Fraction(t_k, 2), Fraction(u_k * scale, 2), rad)
    return unit, norm_k


# ---------------------------------------------------------------------------
# cycles of reduced indefinite forms


def _is_reduced_indefinite(a, b, c, delta):
    # reduced iff 0 < b < sqrt(delta) and |sqrt(delta) - 2|a|| < b
    if b <= 0 or b * b >= delta:
        return False
    t = 2 * abs(a)
    below = (t - b) <= 0 or (t - b) ** 2 < delta
    above = delta < (t + b) ** 2
    return below and above


def _rho(a, b, c, delta):
    """Reduction step (a,b,c) -> (c, r, (r^2 - delta)/(4c)) with r the residue
    of -b mod 2|c| pushed into (sqrt(delta) - 2|c|, sqrt(delta))."""
    ac = abs(c)
    s = isqrt(delta)
    r = -b + 2 * ac * ((s + b) // (2 * ac))
    cc = (r * r - delta) // (4 * c)
    return c, r, cc


def reduced_indefinite_forms(delta):
    """All primitive reduced indefinite forms of nonsquare discriminant delta > 0."""
    s = isqrt(delta)
    forms = set()
    for b in range(2 - delta % 2, s + 1, 2):
        m = (delta - b * b) // 4  # |a c| with a c < 0
        if m <= 0:
            continue
        for a in arith.divisors(m):
            c = -(m // a)
            for aa, cc in ((a, c), (-a, -c)):
                if gcd(gcd(abs(aa), b), abs(cc)) != 1:
                    continue
                if _is_reduced_indefinite(aa, b, cc, delta):
                    forms.add((aa, b, cc))
    return forms


def class_numbers_real(order_disc):
    """(h, hplus) for the real quadratic order of the given discriminant.

    hplus counts cycles of primitive reduced indefinite forms under the
    reduction step; h equals hplus when the fundamental unit has norm -1
    and hplus/2 otherwise.
    """
    if order_disc <= 0:
        raise DomainError("need a positive discriminant")
    check_discriminant(order_disc)
    if isqrt(order_disc) ** 2 == order_disc:
        raise DomainError("square discriminant")
    delta = order_disc
    forms = reduced_indefinite_forms(delta)
    cycles = 0
    seen = set()
    for form in sorted(forms):
        if form in seen:
            continue
        cycles += 1
        cur = form
        while True:
            seen.add(cur)
            cur = _rho(*cur, delta)
            if cur == form:
                break
            if cur in seen:
                raise InternalError("reduction step walked into a foreign cycle")
    _, norm = fundamental_unit(order_disc)
    if norm == -1:
        h = cycles
    else:
        if cycles % 2 != 0:
            raise InternalError("expected an even cycle count for norm +1")
        h = cycles // 2
    return h, cycles


# ---------------------------------------------------------------------------
# principal-ideal factorization in real quadratic maximal orders


def field_discriminant(d):
    """Discriminant of the maximal order of Q(sqrt(d)), d squarefree."""
    return d if d % 4 == 1 else 4 * d


def _sqrt_mod_prime(a, p):
    a %= p
    if a == 0:
        return 0
    if arith.kronecker_symbol(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while arith.kronecker_symbol(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _hensel_sqrt(d, ell, k):
    """r with r^2 = d mod ell^k for odd ell not dividing d."""
    r = _sqrt_mod_prime(d, ell)
    if r is None or r == 0:
        return None
    mod = ell
    target = ell**k
    while mod < target:
        mod = min(mod * mod, target)
        inv = pow(2 * r % mod, -1, mod)
        r = (r - (r * r - d) * inv) % mod
    return r % target


def _sqrt_mod_2k(d, k):
    """r with r^2 = d mod 2^k, for d = 1 mod 8 and k >= 3."""
    r = 1
    for j in range(3, k):
        if (r * r - d) % (1 << (j + 1)):
            r += 1 << (j - 1)
    return r % (1 << k)


def factor_element_ideal(d, x):
    """Factor the principal ideal (x) in the maximal order of Q(sqrt(d)).

    Returns [((ell, type), valuation)] with type in {"split+", "split-",
    "inert", "ramified"}; the two primes over a split ell are told apart by
    a fixed choice of sqrt(d) modulo a prime power.
    """
    if not isinstance(x, RealQuadElement) or x.d != d:
        raise DomainError("element lives in a different field")
    if x.a == 0 and x.b == 0:
        raise DomainError("cannot factor the zero ideal")
    if not x.is_integral():
        raise DomainError("element is not integral")
    disc = field_discriminant(d)
    norm = x.norm()
    n = abs(int(norm))
    out = []
    if n == 1:
        return out
    for ell, e in sorted(arith.factorize(n).items()):
        symbol = arith.kronecker_symbol(disc, ell)
        if symbol == -1:
            if e % 2 != 0:
                raise InternalError("odd valuation at an inert prime")
            out.append(((ell, "inert"), e // 2))
        elif symbol == 0:
            out.append(((ell, "ramified"), e))
        else:
            v_plus = _split_valuation(x, ell, e)
            if v_plus:
                out.append(((ell, "split+"), v_plus))
            if e - v_plus:
                out.append(((ell, "split-"), e - v_plus))
    return out


def _split_valuation(x, ell, e):
    """Valuation of x at the split prime over ell fixed by a chosen root of
    x.d modulo ell^(e+2)."""
    # write x = (A + B sqrt(d))/2 with integers A, B
    A = int(x.a * 2)
    B = int(x.b * 2)
    if ell == 2:
        k = e + 3
        r = _sqrt_mod_2k(x.d % (1 << (k + 1)), k)
        mod = 1 << k
        shift = 1  # the /2 costs one 2-adic valuation unit
    else:
        k = e + 1
        r = _hensel_sqrt(x.d, ell, k)
        mod = ell**k
        shift = 0
    if r is None:
        raise InternalError("split prime without a square root")
    t = (A + B * r) % mod
    v = 0
    while v < e + shift and t % ell == 0:
        t //= ell
        v += 1
    return min(e, max(0, v - shift))


def quad_class_data(delta):
    """Assembled QuadClassData for the order of discriminant delta."""
    disc = quad_discriminant(delta)
    if delta < 0:
        h = class_number_by_formula(disc.delta0, disc.conductor)
        return QuadClassData(disc=disc, h=h, H=kronecker_class_number(delta))
    h, hplus = class_numbers_real(delta)
    unit, norm = fundamental_unit(delta)
    return QuadClassData(disc=disc, h=h, hplus=hplus, fundamental_unit=unit, unit_norm=norm)
