"""Fast integer-polynomial utilities for unit-circle spectral tests.

Polynomials are dense coefficient tuples in *descending* degree order,
e.g. ``(1, -3, 1)`` is x^2 - 3x + 1.  Everything here is exact integer
arithmetic; the hot path (cyclotomic divisibility scans over millions of
small matrices) deliberately avoids sympy objects.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd


def charpoly_int(rows) -> tuple:
    """Characteristic polynomial of a square integer matrix, det(xI - A).

    Hardcoded for n <= 3, Faddeev-LeVerrier (exact integer divisions) above.
    """
    n = len(rows)
    if n == 1:
        return (1, -rows[0][0])
    if n == 2:
        (a, b), (c, d) = rows
        return (1, -(a + d), a * d - b * c)
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        tr = a + e + i
        m2 = (e * i - f * h) + (a * i - c * g) + (a * e - b * d)
        det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        return (1, -tr, m2, -det)
    # Faddeev-LeVerrier: M_1 = A, c_k = -tr(M_k)/k, M_{k+1} = A(M_k + c_k I)
    coeffs = [1]
    m = [row[:] for row in rows]
    a = rows
    for k in range(1, n + 1):
        tr = sum(m[i][i] for i in range(n))
        assert tr % k == 0
        ck = -(tr // k)
        coeffs.append(ck)
        if k == n:
            break
        for i in range(n):
            m[i][i] += ck
        m = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return tuple(coeffs)


def poly_rem(p: tuple, q: tuple) -> tuple:
    """Remainder of p modulo monic q (integer exact since q is monic)."""
    assert q[0] == 1
    r = list(p)
    dq = len(q) - 1
    while len(r) - 1 >= dq:
        lead = r[0]
        if lead != 0:
            for j in range(1, len(q)):
                r[j] -= lead * q[j]
        r.pop(0)
    while r and r[0] == 0:
        r.pop(0)
    return tuple(r)


def divides(q: tuple, p: tuple) -> bool:
    return not poly_rem(p, q)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Coefficients of the n-th cyclotomic polynomial (descending)."""
    # x^n - 1 divided by the product of lower-index cyclotomics dividing n
    num = [1] + [0] * (n - 1) + [-1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div_exact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _poly_div_exact(p, q):
    out = []
    r = list(p)
    dq = len(q) - 1
    while len(r) - 1 >= dq:
        lead = r[0]
        assert lead % q[0] == 0
        f = lead // q[0]
        out.append(f)
        for j in range(len(q)):
            r[j] -= f * q[j]
        assert r[0] == 0
        r.pop(0)
    assert all(x == 0 for x in r)
    return out


@lru_cache(maxsize=None)
def cyclotomic_indices_for_degree(d: int) -> tuple:
    """All n with euler_phi(n) <= d; uses phi(n) >= sqrt(n/2) for the cutoff."""
    return tuple(n for n in range(1, 2 * d * d + 2) if euler_phi(n) <= d)


def cyclotomic_divisors(p: tuple) -> list:
    """Indices n with Phi_n | p.  Exact root-of-unity detector for integer p."""
    d = len(p) - 1
    if d <= 0:
        return []
    found = []
    for n in cyclotomic_indices_for_degree(d):
        cn = cyclotomic_poly(n)
        if len(cn) - 1 <= d and divides(cn, p):
            found.append(n)
    return found


def has_root_of_unity(p: tuple) -> bool:
    """True iff the integer polynomial p has a root of unity among its roots.

    Since each cyclotomic is irreducible over Q, p has a root of unity iff
    some Phi_n with phi(n) <= deg p divides p.
    """
    return bool(cyclotomic_divisors(p))


def content(p: tuple) -> int:
    g = 0
    for c in p:
        g = gcd(g, abs(c))
    return g or 1
