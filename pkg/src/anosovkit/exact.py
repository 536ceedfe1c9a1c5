"""Small exact-arithmetic helpers: Fraction matrices and decimal parsing."""

from __future__ import annotations

from fractions import Fraction


def parse_rational(value) -> Fraction:
    """Parse a JSON-ish number into an exact Fraction.

    Strings and ints are exact.  Floats are accepted but converted through
    their shortest decimal repr, so ``-1.386`` means -1386/1000 and not the
    nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot parse {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    assert len(a[0]) == m
    return [[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def mat_vec(a, v):
    return [sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a))]


def identity(n, one=Fraction(1)):
    return [[one if i == j else one * 0 for j in range(n)] for i in range(n)]


def mat_pow(a, k: int):
    """Integer/rational matrix power; negative k uses exact inverse."""
    n = len(a)
    if k < 0:
        a = mat_inv(a)
        k = -k
    result = identity(n, Fraction(1))
    base = [[Fraction(x) for x in row] for row in a]
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def mat_inv(a):
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv_p = Fraction(1) / aug[col][col]
        aug[col] = [x * inv_p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def solve_linear(a, rhs):
    """Solve a x = rhs exactly over Fractions.

    ``rhs`` may be a vector or a matrix (list of rows).  Raises
    ZeroDivisionError when singular, ValueError when inconsistent
    (overdetermined input is allowed: rows may exceed columns).
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    vec = not isinstance(rhs[0], (list, tuple))
    b = [[Fraction(rhs[i])] if vec else [Fraction(x) for x in rhs[i]] for i in range(rows)]
    m = [[Fraction(a[i][j]) for j in range(cols)] + b[i] for i in range(rows)]
    width = cols + len(b[0])
    pivots = []
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv_p = Fraction(1) / m[r][col]
        m[r] = [x * inv_p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if any(x != 0 for x in m[i][cols:]):
            raise ValueError("inconsistent linear system")
    if len(pivots) < cols:
        raise ZeroDivisionError("singular (underdetermined) system")
    sol = [m[pivots.index(j)][cols:] for j in range(cols)]
    return [row[0] for row in sol] if vec else sol


def lcm_denominators(vec) -> int:
    from math import lcm

    return lcm(*[Fraction(x).denominator for x in vec]) if vec else 1


def nullspace(a):
    """Basis (list of column vectors) of the rational nullspace of a."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[Fraction(x) for x in row] for row in a]
    pivots = []
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv_p = Fraction(1) / m[r][col]
        m[r] = [x * inv_p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * cols
        v[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            v[pcol] = -m[i][fcol]
        basis.append(v)
    return basis


def primitive_vector(vec):
    """Scale a rational vector to a primitive integer vector (gcd 1)."""
    from math import gcd

    scale = lcm_denominators(vec)
    ints = [int(Fraction(x) * scale) for x in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return [v // g for v in ints] if g else ints


def hnf_rows(mat):
    """Row-style Hermite normal form of an integer matrix via Euclidean steps.

    Returns (H, U) with U unimodular and U @ mat == H; zero rows of H sink
    to the bottom.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    h = [[int(x) for x in row] for row in mat]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for col in range(cols):
        piv = None
        for i in range(r, rows):
            if h[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        h[r], h[piv] = h[piv], h[r]
        u[r], u[piv] = u[piv], u[r]
        # euclidean elimination below the pivot
        while True:
            nonzero = [i for i in range(r + 1, rows) if h[i][col] != 0]
            if not nonzero:
                break
            for i in nonzero:
                q = h[i][col] // h[r][col]
                h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                u[i] = [a - q * b for a, b in zip(u[i], u[r])]
                if h[i][col] != 0:
                    h[r], h[i] = h[i], h[r]
                    u[r], u[i] = u[i], u[r]
        if h[r][col] < 0:
            h[r] = [-a for a in h[r]]
            u[r] = [-a for a in u[r]]
        for i in range(r):
            q = h[i][col] // h[r][col]
            if q:
                h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                u[i] = [a - q * b for a, b in zip(u[i], u[r])]
        r += 1
        if r == rows:
            break
    return h, u


def kernel_lattice(mat):
    """Basis of {x in Z^k : x . row == 0 for every row of mat} (may be empty).

    Works for rational input rows (cleared to integers first).  Computed by
    row-reducing [mat^T | I] over Z: rows whose mat^T-part vanishes give the
    kernel basis.
    """
    rows = [primitive_vector(row) if any(Fraction(x) != 0 for x in row) else None
            for row in mat]
    rows = [r for r in rows if r is not None]
    k = len(mat[0]) if mat else 0
    if not rows:
        return [[int(i == j) for j in range(k)] for i in range(k)]
    trans = [[rows[j][i] for j in range(len(rows))] for i in range(k)]
    h, u = hnf_rows(trans)
    basis = [u[i] for i in range(k) if all(x == 0 for x in h[i])]
    return basis


def saturate_lattice(basis, k: int):
    """Saturation of the lattice spanned by integer rows inside Z^k.

    Double integer-orthogonal-complement; the saturation is the largest
    sublattice with the same rational span.
    """
    if not basis:
        return []
    comp = kernel_lattice(basis)
    if not comp:
        return [[int(i == j) for j in range(k)] for i in range(k)]
    return kernel_lattice(comp)
