"""Truncated polynomial self-maps graded by spectral blocks, and the
sub-resonance normal form of a contraction.

A map is stored as sparse coefficients {(output coordinate, exponent
tuple): value} up to a truncation degree, over the variable grading given
by a SpectrumBands.  With rational input the whole pipeline is exact:
composition and inversion are exact truncated algebra, and the
normalization solves each homological equation as an exact linear system.

Normalization convention: non-sub-resonance terms are eliminated degree by
degree, sub-resonance terms are transported into the normal form unchanged.
Other normal forms differ from this one by a sub-resonance-generated
change of coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import mat_inv, solve_linear
from .resonance import (
    NotNarrowBand,
    SpectrumBands,
    degree_bound,
    enumerate_subresonance,
    is_narrow_band,
)


class BandMismatch(ValueError):
    """Operands disagree on bands or truncation degree."""


class SingularLinearPart(ValueError):
    """Inversion requested for a map with singular linear part."""


class ResonantDenominator(ArithmeticError):
    """A homological equation was singular on a non-sub-resonance subspace.

    Cannot occur when the linear part's moduli sit inside narrow bands;
    raised with diagnostics as a defect otherwise.
    """


class NotCommuting(ValueError):
    """Centralizer check precondition failed; carries the residual."""

    def __init__(self, residual, terms):
        self.residual = residual
        self.terms = terms
        super().__init__(f"maps do not commute: residual {residual} on {terms[:4]}")


@dataclass(frozen=True)
class BlockedPolynomialMap:
    bands: SpectrumBands
    truncation_degree: int
    coeffs: tuple  # sorted tuple of ((coord, exponents), value)

    # -- construction --------------------------------------------------------

    @staticmethod
    def make(bands: SpectrumBands, degree: int, entries) -> "BlockedPolynomialMap":
        n = bands.total_dim
        clean = {}
        for (coord, expo), val in (entries.items() if isinstance(entries, dict)
                                   else entries):
            expo = tuple(int(e) for e in expo)
            if len(expo) != n or any(e < 0 for e in expo):
                raise ValueError(f"bad exponent tuple {expo}")
            total = sum(expo)
            if total == 0:
                raise ValueError("constant terms are not allowed (origin preserved)")
            if total > degree:
                raise ValueError(f"term {expo} exceeds truncation degree {degree}")
            if not 0 <= coord < n:
                raise ValueError(f"coordinate {coord} out of range")
            val = Fraction(val) if isinstance(val, (int, str)) else val
            if val != 0:
                clean[(coord, expo)] = clean.get((coord, expo), 0) + val
        items = tuple(sorted((k, v) for k, v in clean.items() if v != 0))
        return BlockedPolynomialMap(bands=bands, truncation_degree=degree,
                                    coeffs=items)

    @staticmethod
    def identity(bands: SpectrumBands, degree: int) -> "BlockedPolynomialMap":
        n = bands.total_dim
        return BlockedPolynomialMap.make(
            bands, degree,
            {(c, tuple(int(v == c) for v in range(n))): Fraction(1) for c in range(n)})

    @staticmethod
    def from_linear(bands: SpectrumBands, degree: int, matrix) -> "BlockedPolynomialMap":
        n = bands.total_dim
        entries = {}
        for c in range(n):
            for v in range(n):
                if matrix[c][v]:
                    entries[(c, tuple(int(w == v) for w in range(n)))] = matrix[c][v]
        return BlockedPolynomialMap.make(bands, degree, entries)

    # -- views ----------------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.bands.total_dim

    def coeff_dict(self) -> dict:
        return dict(self.coeffs)

    def linear_part(self):
        n = self.nvars
        mat = [[Fraction(0)] * n for _ in range(n)]
        for (c, expo), val in self.coeffs:
            if sum(expo) == 1:
                mat[c][expo.index(1)] = val
        return mat

    def var_block(self, v: int) -> int:
        acc = 0
        for i, d in enumerate(self.bands.block_dims):
            acc += d
            if v < acc:
                return i
        raise IndexError(v)

    def block_multidegree(self, expo) -> tuple:
        s = [0] * self.bands.blocks
        for v, e in enumerate(expo):
            if e:
                s[self.var_block(v)] += e
        return tuple(s)

    def max_abs_coeff(self):
        return max((abs(v) for _, v in self.coeffs), default=Fraction(0))

    def evaluate(self, point):
        n = self.nvars
        out = [0] * n
        for (c, expo), val in self.coeffs:
            term = val
            for v, e in enumerate(expo):
                for _ in range(e):
                    term = term * point[v]
            out[c] = out[c] + term
        return out

    def to_json(self) -> dict:
        from .exact import format_rational

        terms = []
        for (c, expo), val in self.coeffs:
            sval = format_rational(val) if isinstance(val, Fraction) else float(val)
            terms.append({"coord": c, "exponents": list(expo), "value": sval})
        return {"bands": self.bands.to_json(),
                "degree": self.truncation_degree, "terms": terms}

    @staticmethod
    def from_json(obj: dict) -> "BlockedPolynomialMap":
        from .exact import parse_rational

        bands = SpectrumBands.from_json(obj["bands"])
        entries = {}
        for t in obj["terms"]:
            entries[(t["coord"], tuple(t["exponents"]))] = parse_rational(t["value"])
        return BlockedPolynomialMap.make(bands, obj["degree"], entries)


# ---------------------------------------------------------------------------
# Truncated polynomial arithmetic
# ---------------------------------------------------------------------------


def _pmul(a: dict, b: dict, degree: int, n: int) -> dict:
    out = {}
    for ea, va in a.items():
        da = sum(ea)
        for eb, vb in b.items():
            if da + sum(eb) > degree:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + va * vb
    return {e: v for e, v in out.items() if v != 0}


def _ppow(base: dict, k: int, degree: int, n: int) -> dict:
    result = {tuple([0] * n): Fraction(1)}
    for _ in range(k):
        result = _pmul(result, base, degree, n)
    return result


def compose(f: BlockedPolynomialMap, g: BlockedPolynomialMap) -> BlockedPolynomialMap:
    """Coefficients of f(g(x)) truncated at the shared degree; exact."""
    if f.bands != g.bands or f.truncation_degree != g.truncation_degree:
        raise BandMismatch("compose requires identical bands and degree")
    n, degree = f.nvars, f.truncation_degree
    g_comp = [dict() for _ in range(n)]
    for (c, expo), val in g.coeffs:
        g_comp[c][expo] = g_comp[c].get(expo, 0) + val
    power_cache: dict = {}

    def gpow(v: int, k: int) -> dict:
        key = (v, k)
        if key not in power_cache:
            power_cache[key] = _ppow(g_comp[v], k, degree, n)
        return power_cache[key]

    entries: dict = {}
    for (c, expo), val in f.coeffs:
        term = {tuple([0] * n): Fraction(1)}
        for v, e in enumerate(expo):
            if e:
                term = _pmul(term, gpow(v, e), degree, n)
                if not term:
                    break
        for e, tv in term.items():
            if sum(e) == 0:
                continue  # cannot occur: g preserves the origin
            key = (c, e)
            entries[key] = entries.get(key, 0) + val * tv
    return BlockedPolynomialMap.make(f.bands, degree, entries)


def map_sub(f: BlockedPolynomialMap, g: BlockedPolynomialMap) -> BlockedPolynomialMap:
    if f.bands != g.bands or f.truncation_degree != g.truncation_degree:
        raise BandMismatch("subtraction requires identical bands and degree")
    entries = dict(f.coeffs)
    for key, val in g.coeffs:
        entries[key] = entries.get(key, 0) - val
    return BlockedPolynomialMap.make(f.bands, f.truncation_degree, entries)


def invert(f: BlockedPolynomialMap) -> BlockedPolynomialMap:
    """g with f(g(x)) == g(f(x)) == x through the truncation degree."""
    n, degree = f.nvars, f.truncation_degree
    lin = f.linear_part()
    try:
        lin_inv = mat_inv(lin)
    except ZeroDivisionError:
        raise SingularLinearPart("linear part is singular") from None
    l_inv = BlockedPolynomialMap.from_linear(f.bands, degree, lin_inv)
    ident = BlockedPolynomialMap.identity(f.bands, degree)
    f_nl = map_sub(f, BlockedPolynomialMap.from_linear(f.bands, degree, lin))
    g = l_inv
    for _ in range(degree):
        g = compose(l_inv, map_sub(ident, compose(f_nl, g)))
    return g


# ---------------------------------------------------------------------------
# Sub-resonance structure
# ---------------------------------------------------------------------------


def allowed_support(bands: SpectrumBands) -> set:
    """Set of (1-based block, multidegree) pairs admissible for SR-type maps."""
    return {(r.target_block, r.exponents) for r in enumerate_subresonance(bands)}


def is_subresonance_type(f: BlockedPolynomialMap):
    """(verdict, violating (coord, exponents) list) against f's bands."""
    allowed = allowed_support(f.bands)
    violators = []
    for (c, expo), _val in f.coeffs:
        key = (f.var_block(c) + 1, f.block_multidegree(expo))
        if key not in allowed:
            violators.append((c, expo))
    return (not violators), violators


def sr_generated_support(bands: SpectrumBands) -> set:
    """Monomial support closure of compositions of SR-type maps.

    Composition may leave the SR class but stays inside this closure, which
    is finite because the total degree is capped by the SR degree bound.
    """
    bound = degree_bound(bands)
    l = bands.blocks
    support = allowed_support(bands)
    changed = True
    while changed:
        changed = False
        for (i, s), subs in itertools.product(list(support), list(support)):
            # substitute a block-subs[0] monomial for one factor of that block
            j, t = subs
            jz = j - 1
            if s[jz] == 0:
                continue
            new = list(s)
            new[jz] -= 1
            combined = tuple(a + b for a, b in zip(new, t))
            if sum(combined) > bound:
                continue
            key = (i, combined)
            if key not in support:
                support.add(key)
                changed = True
    return support


def is_subresonance_generated(f: BlockedPolynomialMap):
    closure = sr_generated_support(f.bands)
    violators = []
    for (c, expo), _val in f.coeffs:
        key = (f.var_block(c) + 1, f.block_multidegree(expo))
        if key not in closure:
            violators.append((c, expo))
    return (not violators), violators


# ---------------------------------------------------------------------------
# Normal form of a contraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalFormResult:
    change: BlockedPolynomialMap   # h, tangent to the identity
    normal: BlockedPolynomialMap   # N, sub-resonance type
    residual: object               # max |coeff| of h∘F - N∘h (0 when exact)

    def to_json(self) -> dict:
        res = (str(self.residual) if isinstance(self.residual, Fraction)
               else float(self.residual))
        return {"change": self.change.to_json(), "normal": self.normal.to_json(),
                "residual": res}


def _check_linear_block_diagonal(f: BlockedPolynomialMap):
    lin = f.linear_part()
    n = f.nvars
    for c in range(n):
        for v in range(n):
            if lin[c][v] != 0 and f.var_block(c) != f.var_block(v):
                raise ValueError("linear part must be block-diagonal for "
                                 "normalization")
    return lin


def _check_block_moduli(f: BlockedPolynomialMap, lin, band_tol: float):
    """Advisory gate: block eigenvalue log-moduli within [lambda_i, mu_i].

    Band endpoints are user-supplied decimals, so membership is tested with
    a tolerance; exact solvability of each homological equation is checked
    separately during the solve.
    """
    import numpy as np

    offset = 0
    for i, d in enumerate(f.bands.block_dims):
        block = [[float(lin[offset + r][offset + c]) for c in range(d)]
                 for r in range(d)]
        eig = np.linalg.eigvals(np.array(block))
        lam, mu = (float(f.bands.intervals[i][0]), float(f.bands.intervals[i][1]))
        for ev in eig:
            if abs(ev) == 0.0:
                raise SingularLinearPart("zero eigenvalue in a block")
            lg = float(np.log(abs(ev)))
            if not (lam - band_tol <= lg <= mu + band_tol):
                raise ValueError(
                    f"block {i + 1} eigenvalue log-modulus {lg:.6f} outside "
                    f"band [{lam}, {mu}] (tol {band_tol})")
        offset += d


def _check_blocks_semisimple(f: BlockedPolynomialMap, lin):
    import sympy

    offset = 0
    for d in f.bands.block_dims:
        block = sympy.Matrix([[sympy.Rational(Fraction(lin[offset + r][offset + c]))
                               for c in range(d)] for r in range(d)])
        t = sympy.Symbol("t")
        cp = sympy.Poly(block.charpoly(t).as_expr(), t)
        radical = cp.quo(sympy.gcd(cp, cp.diff(t)))
        val = block ** 0 * 0
        acc = sympy.zeros(d, d)
        for coeff in radical.all_coeffs():
            acc = acc * block + sympy.Rational(coeff) * sympy.eye(d)
        if not acc.is_zero_matrix:
            raise ValueError("linear part must be semisimple within each block")
        offset += d


def _monomials_of_shape(f: BlockedPolynomialMap, s: tuple):
    """All exponent tuples with the given per-block degrees."""
    n = f.nvars
    per_block_vars = []
    acc = 0
    for d in f.bands.block_dims:
        per_block_vars.append(list(range(acc, acc + d)))
        acc += d

    def block_expos(vars_, deg):
        if not vars_:
            return [()] if deg == 0 else []
        out = []
        for first in range(deg + 1):
            for rest in block_expos(vars_[1:], deg - first):
                out.append((first,) + rest)
        return out

    choices = [block_expos(v, sj) for v, sj in zip(per_block_vars, s)]
    results = []
    for combo in itertools.product(*choices):
        expo = [0] * n
        idx = 0
        for bvars, be in zip(per_block_vars, combo):
            for v, e in zip(bvars, be):
                expo[v] = e
        results.append(tuple(expo))
    return sorted(results)


def _substitute_linear(expo: tuple, lin, degree: int, n: int) -> dict:
    """Expansion of (L x)^expo as {exponent: coeff}; exact."""
    term = {tuple([0] * n): Fraction(1)}
    for v, e in enumerate(expo):
        if not e:
            continue
        form = {}
        for w in range(n):
            if lin[v][w] != 0:
                key = tuple(int(u == w) for u in range(n))
                form[key] = lin[v][w]
        term = _pmul(term, _ppow(form, e, degree, n), degree, n)
    return term


def _homological_solve(f_bands, lin, block_i, shape_s, rhs_map, degree, n,
                       var_block):
    """Solve g∘L - L∘g = rhs on the (block_i, shape_s) subspace; exact.

    Basis: (coordinate c in block_i) x (monomials of shape s).  Raises
    ResonantDenominator when the operator is singular.
    """
    coords = [c for c in range(n) if var_block(c) == block_i - 1]
    monos = rhs_map["monos"]
    pairs = [(c, e) for c in coords for e in monos]
    index = {p: i for i, p in enumerate(pairs)}
    size = len(pairs)
    mat = [[Fraction(0)] * size for _ in range(size)]
    subst_cache = {e: _substitute_linear(e, lin, degree, n) for e in monos}
    for col, (c, e) in enumerate(pairs):
        for e2, coeff in subst_cache[e].items():
            key = (c, e2)
            if key in index:
                mat[index[key]][col] += coeff
        for c2 in coords:
            if lin[c2][c] != 0:
                mat[index[(c2, e)]][col] -= lin[c2][c]
    rhs = [rhs_map["values"].get(p, Fraction(0)) for p in pairs]
    try:
        sol = solve_linear(mat, rhs)
    except (ZeroDivisionError, ValueError) as exc:
        raise ResonantDenominator(
            f"homological operator singular on block {block_i}, shape {shape_s}: "
            f"{exc}") from None
    return {pairs[i]: sol[i] for i in range(size) if sol[i] != 0}


def normalize_contraction(f: BlockedPolynomialMap, degree: int | None = None,
                          band_tol: float = 0.05) -> NormalFormResult:
    """Sub-resonance normal form h∘F = N∘h through the truncation degree.

    h is tangent to the identity; N keeps exactly the sub-resonance terms.
    Exact with rational coefficients: the residual is the zero fraction.
    """
    if not is_narrow_band(f.bands):
        raise NotNarrowBand("normalization requires narrow band spectrum")
    work_degree = degree if degree is not None else max(
        f.truncation_degree, degree_bound(f.bands))
    if work_degree != f.truncation_degree:
        f = BlockedPolynomialMap.make(f.bands, work_degree,
                                      {k: v for k, v in f.coeffs
                                       if sum(k[1]) <= work_degree})
    lin = _check_linear_block_diagonal(f)
    _check_blocks_semisimple(f, lin)
    _check_block_moduli(f, lin, band_tol)
    n = f.nvars
    bands = f.bands
    allowed = allowed_support(bands)
    h = BlockedPolynomialMap.identity(bands, work_degree)
    normal = BlockedPolynomialMap.from_linear(bands, work_degree, lin)
    for d in range(2, work_degree + 1):
        err = map_sub(compose(h, f), compose(normal, h))
        groups: dict = {}
        for (c, expo), val in err.coeffs:
            if sum(expo) != d:
                continue
            key = (f.var_block(c) + 1, f.block_multidegree(expo))
            groups.setdefault(key, {})[(c, expo)] = val
        if not groups:
            continue
        n_new = dict(normal.coeffs)
        h_new = dict(h.coeffs)
        for (bi, s), values in sorted(groups.items()):
            if (bi, s) in allowed:
                for key, val in values.items():
                    n_new[key] = n_new.get(key, 0) + val
            else:
                rhs_map = {"monos": _monomials_of_shape(f, s),
                           "values": {k: -v for k, v in values.items()}}
                g_part = _homological_solve(bands, lin, bi, s, rhs_map,
                                            work_degree, n, f.var_block)
                for key, val in g_part.items():
                    h_new[key] = h_new.get(key, 0) + val
        normal = BlockedPolynomialMap.make(bands, work_degree, n_new)
        h = BlockedPolynomialMap.make(bands, work_degree, h_new)
    residual = map_sub(compose(h, f), compose(normal, h)).max_abs_coeff()
    ok, viol = is_subresonance_type(normal)
    if not ok:
        raise ResonantDenominator(f"normal form retained non-SR terms {viol}")
    return NormalFormResult(change=h, normal=normal, residual=residual)


def verify_centralizer(g: BlockedPolynomialMap, normal: BlockedPolynomialMap,
                       tol=Fraction(0)):
    """Check G commutes with the normal form, then test SR-generated support.

    Returns {"commutes", "verdict", "violators", "commutation_residual"}.
    Raises NotCommuting when the commutation residual exceeds ``tol``.
    """
    if g.bands != normal.bands or g.truncation_degree != normal.truncation_degree:
        raise BandMismatch("centralizer check requires identical bands/degree")
    comm = map_sub(compose(g, normal), compose(normal, g))
    residual = comm.max_abs_coeff()
    if residual > tol:
        raise NotCommuting(residual, [k for k, _ in comm.coeffs])
    verdict, violators = is_subresonance_generated(g)
    return {"commutes": True, "commutation_residual": residual,
            "verdict": verdict, "violators": violators}


def normalize_periodic_orbit(maps, degree: int | None = None,
                             band_tol: float = 0.05):
    """Joint normal forms along a periodic orbit of fiber maps.

    maps[t] sends fiber t to fiber t+1 (mod p); returns per-fiber results
    with h_{t+1} ∘ F_t = N_t ∘ h_t and every N_t of sub-resonance type.
    Solved degree by degree as one exact linear system around the cycle.
    """
    p = len(maps)
    if p == 0:
        raise ValueError("empty orbit")
    bands = maps[0].bands
    if any(m.bands != bands for m in maps):
        raise BandMismatch("all fiber maps must share bands")
    if p == 1:
        return [normalize_contraction(maps[0], degree=degree, band_tol=band_tol)]
    work_degree = degree if degree is not None else max(
        max(m.truncation_degree for m in maps), degree_bound(bands))
    maps = [BlockedPolynomialMap.make(bands, work_degree,
                                      {k: v for k, v in m.coeffs
                                       if sum(k[1]) <= work_degree})
            for m in maps]
    lins = [_check_linear_block_diagonal(m) for m in maps]
    for m, lin in zip(maps, lins):
        _check_blocks_semisimple(m, lin)
    cycle = maps[0]
    for m in maps[1:]:
        cycle = compose(m, cycle)
    _check_block_moduli(cycle, cycle.linear_part(),
                        band_tol=band_tol * p + (p - 1) * 2.0)
    n = bands.total_dim
    allowed = allowed_support(bands)
    var_block = maps[0].var_block
    hs = [BlockedPolynomialMap.identity(bands, work_degree) for _ in range(p)]
    ns = [BlockedPolynomialMap.from_linear(bands, work_degree, lin)
          for lin in lins]
    for d in range(2, work_degree + 1):
        errs = [map_sub(compose(hs[(t + 1) % p], maps[t]), compose(ns[t], hs[t]))
                for t in range(p)]
        shapes = set()
        per_fiber_groups = []
        for err in errs:
            groups: dict = {}
            for (c, expo), val in err.coeffs:
                if sum(expo) != d:
                    continue
                key = (var_block(c) + 1, maps[0].block_multidegree(expo))
                groups.setdefault(key, {})[(c, expo)] = val
                shapes.add(key)
            per_fiber_groups.append(groups)
        n_new = [dict(ns[t].coeffs) for t in range(p)]
        h_new = [dict(hs[t].coeffs) for t in range(p)]
        for (bi, s) in sorted(shapes):
            if (bi, s) in allowed:
                for t in range(p):
                    for key, val in per_fiber_groups[t].get((bi, s), {}).items():
                        n_new[t][key] = n_new[t].get(key, 0) + val
                continue
            coords = [c for c in range(n) if var_block(c) == bi - 1]
            monos = _monomials_of_shape(maps[0], s)
            pairs = [(c, e) for c in coords for e in monos]
            index = {pr: i for i, pr in enumerate(pairs)}
            size = len(pairs)
            big = [[Fraction(0)] * (size * p) for _ in range(size * p)]
            rhs = [Fraction(0)] * (size * p)
            for t in range(p):
                lin_t = lins[t]
                subst = {e: _substitute_linear(e, lin_t, work_degree, n)
                         for e in monos}
                tn = (t + 1) % p
                for col, (c, e) in enumerate(pairs):
                    # + g_{t+1} ∘ L_t
                    for e2, coeff in subst[e].items():
                        if (c, e2) in index:
                            big[t * size + index[(c, e2)]][tn * size + col] += coeff
                    # - L_t ∘ g_t
                    for c2 in coords:
                        if lin_t[c2][c] != 0:
                            big[t * size + index[(c2, e)]][t * size + col] -= lin_t[c2][c]
                for pr, val in per_fiber_groups[t].get((bi, s), {}).items():
                    rhs[t * size + index[pr]] = -val
            try:
                sol = solve_linear(big, rhs)
            except (ZeroDivisionError, ValueError) as exc:
                raise ResonantDenominator(
                    f"cycle homological operator singular on block {bi}, "
                    f"shape {s}: {exc}") from None
            for t in range(p):
                for i, pr in enumerate(pairs):
                    val = sol[t * size + i]
                    if val != 0:
                        h_new[t][pr] = h_new[t].get(pr, 0) + val
        ns = [BlockedPolynomialMap.make(bands, work_degree, nn) for nn in n_new]
        hs = [BlockedPolynomialMap.make(bands, work_degree, hh) for hh in h_new]
    results = []
    for t in range(p):
        res = map_sub(compose(hs[(t + 1) % p], maps[t]),
                      compose(ns[t], hs[t])).max_abs_coeff()
        ok, viol = is_subresonance_type(ns[t])
        if not ok:
            raise ResonantDenominator(f"fiber {t} normal form kept non-SR terms {viol}")
        results.append(NormalFormResult(change=hs[t], normal=ns[t], residual=res))
    return results


def smoothness_metadata(bands: SpectrumBands) -> dict:
    """Which finite-differentiability regime this spectrum demands.

    Metadata only: strictly narrow spectra admit a C^2 linear normal form
    for C^4 data; the two-block 2:1 resonance case needs C^6 data for a
    C^3 sub-resonance form.
    """
    lam1 = bands.intervals[0][0]
    mu_l = bands.intervals[-1][1]
    nontrivial = [r for r in enumerate_subresonance(bands) if not r.trivial]
    if lam1 > 2 * mu_l:
        assert not nontrivial
        return {"regime": "linear (no nontrivial sub-resonance relations)",
                "finite_smoothness": "C2 normal form for C4 data"}
    if (bands.blocks == 2
            and all(r.exponents == (0, 2) and r.target_block == 1
                    for r in nontrivial)):
        return {"regime": "2:1 quadratic resonance",
                "finite_smoothness": "C3 normal form for C6 data"}
    return {"regime": "general narrow-band" if is_narrow_band(bands)
            else "not narrow-band",
            "finite_smoothness": "unspecified"}
