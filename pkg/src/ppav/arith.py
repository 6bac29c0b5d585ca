"""Exact integer, rational, polynomial, and matrix kernels.

Conventions used throughout the package:

* integer polynomials are lists/tuples of ``int`` coefficients in ascending
  degree, with a nonzero leading coefficient unless the polynomial is zero;
* rational matrices are lists of rows of ``fractions.Fraction``;
* the Hermite normal form is row-style: upper echelon, positive pivots,
  and entries above each pivot reduced into ``[0, pivot)``.  Two generator
  sets span the same lattice iff their HNFs are identical.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, isqrt, lcm

from .errors import DomainError, FactorError, RankError

# ---------------------------------------------------------------------------
# integer polynomials (ascending coefficients)


def poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_degree(c):
    return len(c) - 1


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_neg(a):
    return [-x for x in a]


def poly_sub(a, b):
    return poly_add(a, poly_neg(b))


def poly_scale(a, s):
    if s == 0:
        return []
    return [s * x for x in a]


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_trim(out)


def poly_eval(a, x):
    acc = 0 * x if a else 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_derivative(a):
    return poly_trim([i * c for i, c in enumerate(a)][1:])


def poly_divmod_exact(a, b):
    """Long division of integer polynomials when the quotient is integral.

    Exact for monic b, and by Gauss's lemma for any primitive b dividing a.
    Raises DomainError if an inexact coefficient division occurs.
    """
    b = poly_trim(b)
    if not b:
        raise DomainError("division by zero polynomial")
    rem = poly_trim(a)
    lead = b[-1]
    db = len(b) - 1
    quot = [0] * max(0, len(rem) - db)
    while rem and len(rem) - 1 >= db:
        c = rem[-1]
        if c % lead != 0:
            raise DomainError("inexact polynomial division")
        q = c // lead
        shift = len(rem) - 1 - db
        quot[shift] = q
        rem = poly_sub(rem, poly_scale([0] * shift + list(b), q))
    return poly_trim(quot), rem


def poly_content(a):
    g = 0
    for c in a:
        g = gcd(g, c)
    return g


def poly_primitive(a):
    """Primitive part with positive leading coefficient."""
    a = poly_trim(a)
    if not a:
        return []
    g = poly_content(a)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _pseudo_rem(a, b):
    """Remainder of a by b up to powers of lc(b); stays over the integers."""
    r = poly_trim(a)
    db = len(b) - 1
    lb = b[-1]
    while r and len(r) - 1 >= db:
        shift = len(r) - 1 - db
        lead = r[-1]
        r = poly_sub(poly_scale(r, lb), poly_scale([0] * shift + list(b), lead))
        r = poly_trim(r)
    return r


def poly_gcd(a, b):
    """Primitive gcd of integer polynomials, positive leading coefficient."""
    a, b = poly_primitive(a), poly_primitive(b)
    while b:
        if len(a) < len(b):
            a, b = b, a
            continue
        r = _pseudo_rem(a, b)
        a, b = b, poly_primitive(r)
    return a


def poly_squarefree_part(a):
    """a / gcd(a, a'), primitive with positive leading coefficient."""
    a = poly_primitive(a)
    if len(a) <= 2:
        return a
    g = poly_gcd(a, poly_derivative(a))
    if len(g) == 1:
        return a
    q, r = poly_divmod_exact(a, g)
    if r:
        raise DomainError("squarefree deflation failed")
    return poly_primitive(q)


def poly_squarefree_decomposition(a):
    """Yun decomposition [(factor, multiplicity)] with a ~ prod f_i^i."""
    a = poly_primitive(a)
    if len(a) <= 2:
        return [(a, 1)] if len(a) == 2 else []
    fa = [Fraction(c) for c in a]
    g = _fgcd(fa, _fder(fa))
    if len(g) <= 1:
        return [(a, 1)]
    out = []
    w, _ = _fdivmod(fa, g)
    y, _ = _fdivmod(_fder(fa), g)
    z = _fsub(y, _fder(w))
    i = 1
    while len(w) > 1:
        h = _fgcd(w, z)
        if len(h) > 1:
            out.append((_frac_poly_to_int(h), i))
        w, _ = _fdivmod(w, h)
        y, _ = _fdivmod(z, h)
        z = _fsub(y, _fder(w))
        i += 1
    return out


# --- small helpers over Fraction coefficient lists


def _ftrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _fadd(a, b):
    n = max(len(a), len(b))
    return _ftrim(
        [(a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0)) for i in range(n)]
    )


def _fsub(a, b):
    return _fadd(a, [-x for x in b])


def _fder(a):
    return _ftrim([i * c for i, c in enumerate(a)][1:])


def _fdivmod(a, b):
    q, r = [], list(a)
    db = len(b) - 1
    while r and len(r) - 1 >= db:
        c = r[-1] / b[-1]
        shift = len(r) - 1 - db
        q = _fadd(q, [Fraction(0)] * shift + [c])
        r = _fsub(r, [Fraction(0)] * shift + [c * x for x in b])
    return q, r


def _fgcd(a, b):
    a, b = _ftrim(list(a)), _ftrim(list(b))
    while b:
        _, r = _fdivmod(a, b)
        a, b = b, _ftrim(r)
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def _frac_poly_to_int(c):
    den = 1
    for x in c:
        den = lcm(den, x.denominator)
    return poly_primitive([int(x * den) for x in c])


# ---------------------------------------------------------------------------
# resultants via fraction-free (Bareiss) determinant of the Sylvester matrix


def _bareiss_det(m):
    """Exact determinant of a square integer matrix, fraction-free."""
    m = [row[:] for row in m]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant(a, b):
    """Resultant of two integer polynomials.

    Equals lc(a)^deg(b) * prod b(alpha) over the roots alpha of a, so for
    monic a it is the product of b over the roots of a.
    """
    a, b = poly_trim(a), poly_trim(b)
    if not a or not b:
        raise DomainError("resultant of zero polynomial")
    da, db = len(a) - 1, len(b) - 1
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    rows = []
    ar = list(reversed(a))
    br = list(reversed(b))
    for i in range(db):
        rows.append([0] * i + ar + [0] * (db - 1 - i))
    for i in range(da):
        rows.append([0] * i + br + [0] * (da - 1 - i))
    return _bareiss_det(rows)


# ---------------------------------------------------------------------------
# Kronecker symbol


def kronecker_symbol(a, n):
    """Kronecker symbol (a | n), the full extension of the Jacobi symbol."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    if n != 1:
        return 0
    return result


# ---------------------------------------------------------------------------
# primality and factorization

_SMALL_PRIMES: list[int] = []


def _prime_sieve(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def small_primes():
    if not _SMALL_PRIMES:
        _SMALL_PRIMES.extend(_prime_sieve(10_000))
    return _SMALL_PRIMES


# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10^24
# (covers everything below 2^64 and the tool's tested range).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n):
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n, rng):
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n, max_rounds=64):
    """Full prime factorization of n > 0 as a dict {prime: exponent}.

    Trial division by sieved small primes, deterministic Miller-Rabin
    certification, and Pollard-Brent rho for the remaining cofactors.
    Raises FactorError (with the partial factorization) if rho stalls.
    """
    if n <= 0:
        raise DomainError("factorize requires n > 0")
    out: dict[int, int] = {}
    for p in small_primes():
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return out
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return out
    rng = random.Random(0xFAC7)
    stack = [n]
    rounds = 0
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        rounds += 1
        if rounds > max_rounds:
            raise FactorError(f"factorization stalled at cofactor {m}", partial=out)
        d = _pollard_brent(m, rng)
        stack.append(d)
        stack.append(m // d)
    return out


def divisors_from_factorization(fac):
    divs = [1]
    for p, e in sorted(fac.items()):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def divisors(n):
    return divisors_from_factorization(factorize(n))


def squarefree_decompose(n):
    """n > 0 as s * f^2 with s squarefree; returns (s, f)."""
    s, f = 1, 1
    for p, e in factorize(n).items():
        if e % 2:
            s *= p
        f *= p ** (e // 2)
    return s, f


def is_prime_power(q):
    """Returns (p, k) with q = p^k for prime p, or None."""
    if q < 2:
        return None
    fac = factorize(q)
    if len(fac) != 1:
        return None
    ((p, k),) = fac.items()
    return p, k


# ---------------------------------------------------------------------------
# Sturm chains and exact real-root counting


def sturm_chain(a):
    chain = [[Fraction(c) for c in a]]
    chain.append(_fder(chain[0]))
    while len(chain[-1]) > 1:
        _, r = _fdivmod(chain[-2], chain[-1])
        r = _ftrim(r)
        if not r:
            break
        chain.append([-x for x in r])
    return chain


def _sign_variations(chain, x):
    signs = []
    for p in chain:
        v = poly_eval(p, x)
        if v > 0:
            signs.append(1)
        elif v < 0:
            signs.append(-1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_count(a, lo, hi):
    """Number of real roots of squarefree a in the half-open interval (lo, hi]."""
    a = poly_trim(a)
    if len(a) <= 1:
        raise DomainError("root counting needs a nonconstant polynomial")
    g = poly_gcd(a, poly_derivative(a))
    if len(g) != 1:
        raise DomainError("polynomial is not squarefree; deflate first")
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise DomainError("need lo < hi")
    chain = sturm_chain(a)
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def cauchy_root_bound(a):
    """Integer B such that all real roots lie strictly inside (-B, B)."""
    a = poly_trim(a)
    lead = abs(a[-1])
    m = max(abs(c) for c in a[:-1]) if len(a) > 1 else 0
    return 2 + m // lead


def isolate_real_roots(a, chain=None):
    """Disjoint rational intervals (lo, hi], each holding one root of squarefree a."""
    b = Fraction(cauchy_root_bound(a))
    if chain is None:
        chain = sturm_chain(a)

    def count(lo, hi):
        return _sign_variations(chain, lo) - _sign_variations(chain, hi)

    out = []
    stack = [(-b, b, count(-b, b))]
    while stack:
        lo, hi, c = stack.pop()
        if c == 0:
            continue
        if c == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        cl = count(lo, mid)
        stack.append((lo, mid, cl))
        stack.append((mid, hi, c - cl))
    return sorted(out)


def refine_root(a, lo, hi, bits=80, chain=None):
    """Dyadic bisection of an isolating interval of squarefree a.

    Returns a Fraction within 2^-bits of the initial width from the root.
    """
    fa = [Fraction(c) for c in a]
    flo = poly_eval(fa, lo)
    fhi = poly_eval(fa, hi)
    if fhi == 0:
        return hi
    while flo == 0:
        # lo is a different root of a sitting on the excluded boundary;
        # shrink with Sturm counts until the bracket has clean signs
        if chain is None:
            chain = sturm_chain(a)
        mid = (lo + hi) / 2
        fm = poly_eval(fa, mid)
        if fm == 0:
            return mid
        if _sign_variations(chain, lo) - _sign_variations(chain, mid) == 1:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    for _ in range(bits):
        mid = (lo + hi) / 2
        fm = poly_eval(fa, mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fhi > 0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return (lo + hi) / 2


def real_roots(a, bits=80):
    """Refined real roots of a squarefree integer polynomial, ascending."""
    chain = sturm_chain(a)
    return [refine_root(a, lo, hi, bits, chain) for (lo, hi) in isolate_real_roots(a, chain)]


# ---------------------------------------------------------------------------
# rational matrices and Hermite normal form


def mat_fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def hnf_int(rows, transform=False):
    """Row-style HNF of an integer matrix.

    Returns (hnf_rows, rank) or (hnf_rows, rank, U) with U unimodular and
    U @ M = H; zero rows sit at the bottom, so U rows beyond the rank
    describe the left kernel of M.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)] if transform else None
    r = 0
    for col in range(ncols):
        pivot = None
        while True:
            live = [i for i in range(r, nrows) if m[i][col] != 0]
            if not live:
                break
            if len(live) == 1:
                pivot = live[0]
                break
            live.sort(key=lambda i: abs(m[i][col]))
            base = live[0]
            for i in live[1:]:
                q = m[i][col] // m[base][col]
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[base])]
                    if transform:
                        u[i] = [a - q * b for a, b in zip(u[i], u[base])]
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        if transform:
            u[r], u[pivot] = u[pivot], u[r]
        if m[r][col] < 0:
            m[r] = [-a for a in m[r]]
            if transform:
                u[r] = [-a for a in u[r]]
        for i in range(r):
            q = m[i][col] // m[r][col]
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                if transform:
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
        r += 1
    if transform:
        return m, r, u
    return m, r


def hnf(rows):
    """Canonical HNF of a full-row-rank rational matrix, as Fractions.

    Raises RankError when the rows are dependent, so equality of outputs is
    equivalent to equality of the generated lattices.
    """
    rows = mat_fractions(rows)
    if not rows:
        raise RankError("empty matrix")
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, x.denominator)
    int_rows = [[int(x * den) for x in row] for row in rows]
    h, rank = hnf_int(int_rows)
    if rank < len(rows):
        raise RankError("rank-deficient input")
    return [[Fraction(x, den) for x in row] for row in h[:rank]]


def lattice_hnf(rows, dim):
    """Canonical (den, rows) pair for the lattice spanned by rational rows.

    The span must have full rank `dim`; redundant generators are fine.
    """
    rows = mat_fractions(rows)
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, x.denominator)
    int_rows = [[int(x * den) for x in row] for row in rows]
    h, rank = hnf_int(int_rows)
    if rank < dim:
        raise RankError(f"generators span rank {rank} < {dim}")
    h = h[:rank]
    g = den
    for row in h:
        for x in row:
            g = gcd(g, x)
    if g > 1:
        den //= g
        h = [[x // g for x in row] for row in h]
    return den, tuple(tuple(row) for row in h)


def left_kernel_int(rows):
    """Basis of {c integer row : c @ M = 0} for an integer matrix M."""
    _, rank, u = hnf_int(rows, transform=True)
    return [u[i] for i in range(rank, len(rows))]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x == 0:
                continue
            bt = b[t]
            for j in range(m):
                oi[j] += x * bt[j]
    return out


def mat_identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_inverse(a):
    """Exact inverse of a square rational matrix by Gauss-Jordan."""
    n = len(a)
    m = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(a)
    ]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise RankError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [row[n:] for row in m]


def mat_det(a):
    """Exact determinant of a square rational matrix."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return det


def mat_transpose(a):
    return [list(col) for col in zip(*a)]
