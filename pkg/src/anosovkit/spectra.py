"""Exact spectral analysis of commuting unimodular integer matrices.

A Z^k action on T^n is given by k commuting integer matrices with
determinant +-1.  This module computes the joint spectrum (simultaneous
eigenvalue classes with rigorous log-modulus enclosures), merges classes
into Lyapunov functionals, and decides the hypotheses that the rigidity
statements consume: semisimplicity, existence of Anosov elements, weak
mixing (no root-of-unity eigenvalues), and the kernel-sublattice criterion
for rank-two rigidity.

All yes/no answers are exact.  Enclosures only ever *separate* values;
equality and zero decisions escalate to algebraic certificates
(factorization, resultant constructions, cyclotomic divisibility).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy
from sympy import Poly, Symbol
from sympy.polys.rootoftools import rootof

from . import intpoly
from .algnum import (
    CBox,
    EnclosureTooWide,
    LogValue,
    RealAlgebraic,
    composed_product,
    eval_poly_box,
    identify_factor,
    power_poly,
    root_box,
    values_poly,
)
from .exact import (
    mat_mul,
    mat_pow,
    nullspace,
    primitive_vector,
    saturate_lattice,
    solve_linear,
)

_t = Symbol("_spectra_t")

_EPS = [Fraction(1, 10**m) for m in (12, 24, 48, 96, 192, 384)]


class ActionValidationError(ValueError):
    """Structured rejection: all violated invariants of a would-be action."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(self._format(v) for v in violations))

    @staticmethod
    def _format(v):
        kind = v[0]
        if kind == "NonCommuting":
            return f"NonCommuting({v[1]},{v[2]})"
        if kind == "NotUnimodular":
            return f"NotUnimodular({v[1]})"
        return f"ShapeMismatch({v[1:]})" if len(v) > 1 else "ShapeMismatch"


class JointSpectrumUnsupported(Exception):
    """Commuting structure outside the supported (semisimple-linkable) range."""


class UndecidedEquality(Exception):
    """An exact equality escalation ran out of budget (should not occur)."""


class UndecidedSign(Exception):
    """An exact sign escalation ran out of budget (should not occur)."""


@dataclass(frozen=True)
class ActionSpec:
    """k commuting unimodular integer matrices acting on T^dim."""

    dim: int
    generators: tuple
    labels: tuple

    @property
    def k(self) -> int:
        return len(self.generators)

    def generator(self, i: int):
        return [list(row) for row in self.generators[i]]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "generators": [[x for row in g for x in row] for g in self.generators],
            "labels": list(self.labels),
        }

    @staticmethod
    def from_json(obj: dict) -> "ActionSpec":
        dim = obj["dim"]
        mats = []
        for flat in obj["generators"]:
            if len(flat) != dim * dim:
                raise ActionValidationError([("ShapeMismatch", len(flat), dim * dim)])
            mats.append([flat[i * dim:(i + 1) * dim] for i in range(dim)])
        return validate_action(mats, labels=obj.get("labels"))


def validate_action(raw, labels=None) -> ActionSpec:
    """Check shapes, integrality, unimodularity and commutativity; all exact.

    Collects every violated invariant before rejecting.
    """
    violations = []
    if not raw:
        raise ActionValidationError([("ShapeMismatch", "empty generator list")])
    n = len(raw[0])
    mats = []
    for i, m in enumerate(raw):
        rows = [list(row) for row in m]
        if len(rows) != n or any(len(r) != len(rows) for r in rows):
            violations.append(("ShapeMismatch", i))
            continue
        if any(not isinstance(x, (int,)) and not float(x).is_integer() for r in rows for x in r):
            violations.append(("ShapeMismatch", i, "non-integer entry"))
            continue
        mats.append([[int(x) for x in r] for r in rows])
    if violations:
        raise ActionValidationError(violations)
    for i, m in enumerate(mats):
        p = intpoly.charpoly_int(m)
        det = (-1) ** n * p[-1]
        if det not in (1, -1):
            violations.append(("NotUnimodular", i))
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            ab = mat_mul(mats[i], mats[j])
            ba = mat_mul(mats[j], mats[i])
            if ab != ba:
                violations.append(("NonCommuting", i, j))
    if violations:
        raise ActionValidationError(violations)
    labels = tuple(labels) if labels else tuple(f"g{i}" for i in range(len(mats)))
    if len(labels) != len(mats):
        raise ActionValidationError([("ShapeMismatch", "labels", len(labels))])
    gens = tuple(tuple(tuple(row) for row in m) for m in mats)
    return ActionSpec(dim=n, generators=gens, labels=labels)


# ---------------------------------------------------------------------------
# Joint spectrum machinery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JointEigenvalueClass:
    index: int
    moduli_log: tuple          # one LogValue per generator
    dimension: int
    minimal_polynomial: tuple  # descending integer coeffs, first generator's eigenvalue

    def enclosures(self, tol: float = 1e-12):
        return tuple(lv.interval(tol) for lv in self.moduli_log)

    def moduli_mid(self, tol: float = 1e-12):
        return tuple((lo + hi) / 2 for lo, hi in self.enclosures(tol))


@dataclass(frozen=True)
class LyapunovFunctional:
    coeffs: tuple              # one LogValue per generator
    multiplicity: int
    classes: tuple             # merged JointEigenvalueClass indices

    def evaluate_mid(self, a) -> float:
        return sum(ai * lv.mid() for ai, lv in zip(a, self.coeffs))

    def is_zero_functional(self) -> bool:
        return all(lv.is_zero() for lv in self.coeffs)


class _Block:
    """Invariant subspace with commuting restrictions and linking data."""

    __slots__ = ("basis", "restr", "T", "fT_key", "croots", "qs", "class_dim")

    def __init__(self, basis, restr):
        self.basis = basis          # ambient-dim x d columns, Fractions
        self.restr = restr          # per generator, d x d Fraction matrices
        self.T = None
        self.fT_key = None
        self.croots = None
        self.qs = None              # per generator, descending Fraction coeffs
        self.class_dim = None

    @property
    def dim(self):
        return len(self.restr[0]) if self.restr else 0


def _frac_mat(m):
    return [[Fraction(x) for x in row] for row in m]


def _poly_of_matrix(coeffs, m):
    """Evaluate a rational-coefficient polynomial (descending) at a matrix."""
    d = len(m)
    acc = [[Fraction(0)] * d for _ in range(d)]
    for c in coeffs:
        acc = mat_mul(acc, m)
        for i in range(d):
            acc[i][i] += Fraction(c)
    return acc


def _charpoly_factors(m):
    """Irreducible factors (as descending int-coeff tuples) with exponents."""
    sm = sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator)
                        for x in row] for row in m])
    cp = sm.charpoly(_t)
    _, factors = sympy.factor_list(cp.as_expr())
    out = []
    for fac, e in factors:
        p = Poly(fac, _t)
        if p.degree() >= 1:
            coeffs = [int(c) for c in p.all_coeffs()]
            if coeffs[0] < 0:
                coeffs = [-c for c in coeffs]
            out.append((tuple(coeffs), int(e)))
    return sorted(out)


def _restrict(cols, m):
    """Restriction m' of m to the column span: m @ cols == cols @ m'."""
    rhs = mat_mul(m, cols)
    d = len(cols[0])
    cols_rows = cols
    sol = solve_linear(cols_rows, rhs)
    return sol


def _columns(basis_vectors):
    """Column-vector list -> matrix with those columns."""
    n = len(basis_vectors[0])
    return [[basis_vectors[j][i] for j in range(len(basis_vectors))] for i in range(n)]


def _try_split(block: _Block, cand):
    factors = _charpoly_factors(cand)
    if len(factors) <= 1:
        return None
    comps = []
    for fkey, e in factors:
        nf = _poly_of_matrix([Fraction(c) for c in fkey], cand)
        nfe = nf
        for _ in range(e - 1):
            nfe = mat_mul(nfe, nf)
        kern = nullspace(nfe)
        cols = _columns(kern)
        new_basis = mat_mul(block.basis, cols)
        new_restr = [_restrict(cols, r) for r in block.restr]
        comps.append(_Block(new_basis, new_restr))
    return comps


def _combo_candidates(restr, rng):
    k = len(restr)
    d = len(restr[0])
    combos = []
    seen = set()

    def add(c):
        if c not in seen and any(c):
            seen.add(c)
            m = [[Fraction(0)] * d for _ in range(d)]
            for cg, r in zip(c, restr):
                if cg:
                    for i in range(d):
                        for j in range(d):
                            m[i][j] += cg * r[i][j]
            combos.append(m)

    for i in range(k):
        add(tuple(1 if j == i else 0 for j in range(k)))
    add(tuple([1] * k))
    add(tuple(range(1, k + 1)))
    add(tuple(3**i for i in range(k)))
    add(tuple((-1) ** i for i in range(k)))
    for _ in range(30):
        add(tuple(rng.randint(-4, 4) for _ in range(k)))
    return combos


def _link_block(block: _Block, rng):
    """Choose a cyclic-ish element T and express every restriction as q_g(T).

    Solved on K = ker f_T(T), which every restriction preserves; class
    dimension is block_dim / deg(f_T).
    """
    best = []
    for cand in _combo_candidates(block.restr, rng):
        factors = _charpoly_factors(cand)
        if len(factors) != 1:
            continue  # should have been split; skip defensively
        fkey, _ = factors[0]
        best.append((len(fkey) - 1, cand, fkey))
    best.sort(key=lambda b: -b[0])
    last_err = None
    for deg, cand, fkey in best:
        try:
            fT = [Fraction(c) for c in fkey]
            kern = nullspace(_poly_of_matrix(fT, cand))
            cols = _columns(kern)
            t_k = _restrict(cols, cand)
            qs = []
            for r in block.restr:
                r_k = _restrict(cols, r)
                qs.append(_solve_poly_in(t_k, r_k, deg))
            block.T = cand
            block.fT_key = fkey
            block.qs = qs
            assert block.dim % deg == 0
            block.class_dim = block.dim // deg
            fpoly = Poly(list(fkey), _t)
            if deg == 1:
                block.croots = [sympy.Rational(-fkey[1], fkey[0])]
            else:
                block.croots = [rootof(fpoly.as_expr(), _t, j, radicals=False)
                                for j in range(deg)]
            return
        except (ValueError, ZeroDivisionError) as exc:
            last_err = exc
            continue
    raise JointSpectrumUnsupported(
        f"could not link commuting restrictions on a block: {last_err}")


def _solve_poly_in(t_k, r_k, deg):
    """Coefficients (descending) of q with q(t_k) == r_k, deg q < deg."""
    m = len(t_k)
    powers = [[[Fraction(int(i == j)) for j in range(m)] for i in range(m)]]
    for _ in range(deg - 1):
        powers.append(mat_mul(powers[-1], t_k))
    rows = []
    rhs = []
    for i in range(m):
        for j in range(m):
            rows.append([powers[p][i][j] for p in range(deg)])
            rhs.append(r_k[i][j])
    sol = solve_linear(rows, rhs)  # raises on inconsistency
    return list(reversed(sol))  # ascending -> descending


class _Analysis:
    """Joint-spectrum working data for one ActionSpec (cached)."""

    def __init__(self, action: ActionSpec):
        self.action = action
        rng = random.Random(20260301)
        n = action.dim
        gens = [_frac_mat(action.generator(i)) for i in range(action.k)]
        ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        blocks = [_Block(ident, gens)]
        changed = True
        while changed:
            changed = False
            for idx, block in enumerate(blocks):
                for cand in _combo_candidates(block.restr, rng):
                    comps = _try_split(block, cand)
                    if comps:
                        blocks[idx:idx + 1] = comps
                        changed = True
                        break
                if changed:
                    break
        for block in blocks:
            _link_block(block, rng)
        self.blocks = blocks
        self._classes = None
        self._functionals = None
        self._logcache = {}
        self._element_cache = {}

    # -- log-modulus values ------------------------------------------------

    def class_entries(self):
        """Yield (block_idx, root_idx) in deterministic order."""
        for b, block in enumerate(self.blocks):
            for j in range(len(block.croots)):
                yield (b, j)

    def logvalue(self, b: int, j: int, g: int) -> LogValue:
        key = (b, j, g)
        if key not in self._logcache:
            block = self.blocks[b]
            self._logcache[key] = _make_logvalue(block.fT_key, block.croots[j],
                                                 block.qs[g])
        return self._logcache[key]

    def element_logvalue(self, b: int, j: int, a) -> LogValue:
        """LogValue of |eigenvalue of sigma(a)| on class (b, j); exact."""
        key = (b, j, tuple(int(x) for x in a))
        if key not in self._element_cache:
            block = self.blocks[b]
            deg = len(block.fT_key) - 1
            r_a = None
            for g, ag in enumerate(a):
                if ag == 0:
                    continue
                p = mat_pow(block.restr[g], int(ag))
                r_a = p if r_a is None else mat_mul(r_a, p)
            if r_a is None:
                self._element_cache[key] = LogValue.zero()
                return self._element_cache[key]
            kern = nullspace(_poly_of_matrix([Fraction(c) for c in block.fT_key], block.T))
            cols = _columns(kern)
            t_k = _restrict(cols, block.T)
            r_k = _restrict(cols, r_a)
            q_a = _solve_poly_in(t_k, r_k, deg)
            self._element_cache[key] = _make_logvalue(block.fT_key, block.croots[j], q_a)
        return self._element_cache[key]

    # -- public products ----------------------------------------------------

    def classes(self):
        if self._classes is not None:
            return self._classes
        entries = []
        for b, j in self.class_entries():
            block = self.blocks[b]
            lvs = tuple(self.logvalue(b, j, g) for g in range(self.action.k))
            minpoly = _first_gen_minpoly(block, j)
            sort_key = (tuple(lv.interval(1e-12)[0] for lv in lvs), minpoly, j, b)
            entries.append((sort_key, b, j, lvs, block.class_dim, minpoly))
        entries.sort(key=lambda e: e[0])
        classes = []
        self._class_locator = []
        for idx, (_, b, j, lvs, dim, minpoly) in enumerate(entries):
            classes.append(JointEigenvalueClass(index=idx, moduli_log=lvs,
                                                dimension=dim,
                                                minimal_polynomial=minpoly))
            self._class_locator.append((b, j))
        self._classes = classes
        assert sum(c.dimension for c in classes) == self.action.dim
        return classes

    def locator(self, class_index: int):
        self.classes()
        return self._class_locator[class_index]

    def functionals(self):
        if self._functionals is not None:
            return self._functionals
        classes = self.classes()
        k = self.action.k
        groups = []
        for cls in classes:
            placed = False
            for grp in groups:
                rep = grp[0]
                try:
                    same = all(cls.moduli_log[g].equals(rep.moduli_log[g])
                               for g in range(k))
                except EnclosureTooWide as exc:
                    raise UndecidedEquality(
                        f"classes {rep.index} and {cls.index}: {exc}") from exc
                if same:
                    grp.append(cls)
                    placed = True
                    break
            if not placed:
                groups.append([cls])
        funcs = [LyapunovFunctional(coeffs=grp[0].moduli_log,
                                    multiplicity=sum(c.dimension for c in grp),
                                    classes=tuple(sorted(c.index for c in grp)))
                 for grp in groups]

        import functools

        def cmp(f1, f2):
            for a, b in zip(f1.coeffs, f2.coeffs):
                c = a.cmp(b)
                if c:
                    return c
            return 0

        funcs.sort(key=functools.cmp_to_key(cmp))
        self._functionals = funcs
        assert sum(f.multiplicity for f in funcs) == self.action.dim
        return funcs


def _make_logvalue(fT_key, croot, q_coeffs) -> LogValue:
    fpoly = Poly(list(fT_key), _t)
    is_real = croot.is_Rational or bool(croot.is_real)
    a_poly = values_poly(fpoly, q_coeffs)
    vanishing = power_poly(a_poly, 2) if is_real else composed_product(a_poly)

    def refiner(eps):
        for delta in _EPS:
            box = root_box(croot, delta) if not croot.is_Rational else CBox.point(
                Fraction(int(croot.p), int(croot.q)))
            val = eval_poly_box([Fraction(c) for c in q_coeffs], box)
            m = val.modsq()
            if m.width <= eps:
                return m
        raise EnclosureTooWide("modulus refinement failed")

    return LogValue(RealAlgebraic.from_vanishing(vanishing, refiner))


def _first_gen_minpoly(block: _Block, j: int) -> tuple:
    fpoly = Poly(list(block.fT_key), _t)
    q1 = block.qs[0]
    a_poly = values_poly(fpoly, q1)
    croot = block.croots[j]

    def refiner(eps):
        for delta in _EPS:
            box = root_box(croot, delta) if not croot.is_Rational else CBox.point(
                Fraction(int(croot.p), int(croot.q)))
            val = eval_poly_box([Fraction(c) for c in q1], box)
            if val.re.width <= eps and val.im.width <= eps:
                return val
        raise EnclosureTooWide("eigenvalue refinement failed")

    return identify_factor(a_poly, refiner)


_ANALYSES: dict = {}


def analyze(action: ActionSpec) -> _Analysis:
    if action not in _ANALYSES:
        _ANALYSES[action] = _Analysis(action)
    return _ANALYSES[action]


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def joint_spectrum(action: ActionSpec):
    """Simultaneous eigenvalue classes with rigorous log-modulus enclosures."""
    return analyze(action).classes()


def lyapunov_functionals(action: ActionSpec):
    """Classes merged by proven-equal log-modulus vectors, sorted lex."""
    return analyze(action).functionals()


def is_semisimple(action: ActionSpec):
    """Per-generator squarefree-minimal-polynomial verdicts plus overall.

    Exact: the squarefree part of the characteristic polynomial annihilates
    the matrix iff the minimal polynomial is squarefree.
    """
    per = []
    for i in range(action.k):
        m = _frac_mat(action.generator(i))
        sm = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row]
                           for row in m])
        cp = Poly(sm.charpoly(_t).as_expr(), _t)
        radical = cp.quo(sympy.gcd(cp, cp.diff(_t)))
        val = _poly_of_matrix([Fraction(int(c.p), int(c.q)) for c in
                               [sympy.Rational(c) for c in radical.all_coeffs()]], m)
        per.append(all(x == 0 for row in val for x in row))
    return {"per_generator": per, "overall": all(per)}


def is_anosov_element(action: ActionSpec, a) -> bool:
    """True iff no Lyapunov exponent of sigma(a) vanishes; exact.

    The zero vector is not Anosov.  Uses the exact unit-modulus test on
    each joint class (an eigenvalue modulus equals 1 iff the identified
    squared-modulus algebraic number equals 1).
    """
    a = [int(x) for x in a]
    if len(a) != action.k:
        raise ValueError("element length must equal the action rank")
    if all(x == 0 for x in a):
        return False
    an = analyze(action)
    an.classes()
    for b, j in an.class_entries():
        if an.element_logvalue(b, j, a).sign() == 0:
            return False
    return True


def is_weak_mixing(matrix) -> bool:
    """Parry criterion: no eigenvalue is a root of unity; exact.

    Decided by scanning cyclotomic polynomials Phi_n with phi(n) <= dim for
    exact divisibility of the characteristic polynomial (each Phi_n is
    irreducible over Q, so divisibility is equivalent to sharing a root).
    """
    rows = [[int(x) for x in row] for row in matrix]
    p = intpoly.charpoly_int(rows)
    det = (-1) ** (len(p) - 1) * p[-1]
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return not intpoly.has_root_of_unity(p)


def weak_mixing_report(matrix) -> dict:
    """Factored view of the Parry test, for reports."""
    rows = [[int(x) for x in row] for row in matrix]
    p = intpoly.charpoly_int(rows)
    x = Symbol("x")
    expr = sum(c * x ** (len(p) - 1 - i) for i, c in enumerate(p))
    _, factors = sympy.factor_list(expr)
    fl = []
    for fac, e in factors:
        fp = Poly(fac, x)
        coeffs = tuple(int(c) for c in fp.all_coeffs())
        fl.append({
            "coefficients": list(coeffs),
            "multiplicity": int(e),
            "cyclotomic_indices": intpoly.cyclotomic_divisors(coeffs),
        })
    return {
        "charpoly": list(p),
        "factors": fl,
        "weak_mixing": not intpoly.has_root_of_unity(p),
    }


def sigma_of(action: ActionSpec, a):
    """Integer matrix of the action element sigma(a) = prod A_g^{a_g}."""
    n = action.dim
    acc = None
    for g, ag in enumerate(a):
        if ag == 0:
            continue
        p = mat_pow(_frac_mat(action.generator(g)), int(ag))
        acc = p if acc is None else mat_mul(acc, p)
    if acc is None:
        acc = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return [[int(x) for x in row] for row in acc]


def functional_kernel_lattice(action: ActionSpec, functional: LyapunovFunctional,
                              dps_schedule=(50, 120, 250), maxcoeff=10**8):
    """Saturated basis of {n in Z^k : chi(n) = 0}, with search metadata.

    Candidate relations come from PSLQ at escalating precision; every
    candidate is verified exactly (the eigenvalue of sigma(n) on the class
    has squared modulus exactly 1) before being admitted, and the verified
    set is saturated.  An unverifiable candidate is reported, not used.
    """
    an = analyze(action)
    k = action.k
    b, j = an.locator(functional.classes[0])
    coeffs = functional.coeffs

    def chi_is_zero(n):
        return an.element_logvalue(b, j, n).sign() == 0

    zero_rels = [[int(g == h) for h in range(k)] for g in range(k)
                 if coeffs[g].is_zero()]
    live = [g for g in range(k) if not coeffs[g].is_zero()]
    meta = {"method": "pslq", "dps": 0, "maxcoeff": maxcoeff, "unverified": []}
    rels = list(zero_rels)
    if len(live) == 1:
        pass  # a single nonzero log admits no relation
    elif live:
        # rows of C express current coordinates as rational combos of originals
        c_rows = [[Fraction(int(g == h)) for h in range(k)] for g in live]
        while len(c_rows) >= 2:
            found = None
            for dps in dps_schedule:
                meta["dps"] = max(meta["dps"], dps)
                with mpmath.workdps(dps):
                    vals = [sum(mpmath.mpf(r.numerator) / r.denominator
                                * coeffs[g].mpf(dps) for g, r in enumerate(row) if r)
                            for row in c_rows]
                    rel = mpmath.pslq(vals, maxcoeff=maxcoeff, maxsteps=int(1e4))
                if rel is None:
                    continue
                cand = [sum(Fraction(m) * row[g] for m, row in zip(rel, c_rows))
                        for g in range(k)]
                cand = primitive_vector(cand)
                if chi_is_zero(cand):
                    found = (rel, cand)
                    break
                meta["unverified"].append(list(cand))
            if found is None:
                break
            rel, cand = found
            rels.append(cand)
            pivot = max(range(len(rel)), key=lambda i: abs(rel[i]))
            piv_row = c_rows[pivot]
            pv = Fraction(rel[pivot])
            c_rows = [[row[g] - Fraction(rel[i]) / pv * piv_row[g] for g in range(k)]
                      for i, row in enumerate(c_rows) if i != pivot]
    basis = saturate_lattice(rels, k) if rels else []
    for vec in basis:
        if not chi_is_zero(vec):
            raise UndecidedSign(f"saturated kernel vector {vec} failed verification")
    return basis, meta


def check_rigidity_hypotheses(action: ActionSpec, anosov_radius: int = 8,
                                combo_box: int = 2) -> dict:
    """Decide the rank-two rigidity hypotheses for a toral Z^k action.

    Checks: semisimple linear part; existence of an Anosov element (box
    search with a chamber-based fallback certificate); and, per Lyapunov
    functional, that no nonzero element of the kernel sublattice
    {n : chi(n) = 0} has a root-of-unity eigenvalue (exact cyclotomic
    divisibility of char(sigma(n))).
    """
    if action.k < 2:
        raise ValueError("the rigidity hypotheses require k >= 2")
    report: dict = {"k": action.k, "dim": action.dim}
    report["semisimple"] = is_semisimple(action)
    funcs = lyapunov_functionals(action)

    anosov = {"found": False, "vector": None, "method": None,
              "searched_radius": anosov_radius}
    if any(f.is_zero_functional() for f in funcs):
        anosov["method"] = "zero-functional"
    else:
        for radius in range(1, anosov_radius + 1):
            shell = [v for v in itertools.product(range(-radius, radius + 1),
                                                  repeat=action.k)
                     if max(abs(x) for x in v) == radius]
            shell.sort()
            hit = next((v for v in shell
                        if all(f.evaluate_mid(v) != 0 for f in funcs)
                        and is_anosov_element(action, v)), None)
            if hit is not None:
                anosov.update(found=True, vector=list(hit), method="box")
                break
        if not anosov["found"]:
            from . import chambers

            try:
                arr = chambers.weyl_chambers([f.coeffs for f in funcs
                                              if not f.is_zero_functional()])
                for ch in arr.chambers:
                    v = chambers.find_regular_element(arr, ch)
                    if is_anosov_element(action, v):
                        anosov.update(found=True, vector=list(v), method="chamber")
                        break
            except Exception as exc:  # chamber route is best-effort here
                anosov["chamber_error"] = str(exc)
    report["anosov_element"] = anosov

    per_functional = []
    violations_total = []
    inconclusive = False
    for fi, func in enumerate(funcs):
        basis, meta = functional_kernel_lattice(action, func)
        if meta["unverified"]:
            inconclusive = True
        entry = {"functional_index": fi, "kernel_rank": len(basis),
                 "kernel_basis": [list(v) for v in basis],
                 "relation_search": meta, "violations": []}
        if basis:
            tested = set()
            rank = len(basis)
            for combo in itertools.product(range(-combo_box, combo_box + 1),
                                           repeat=rank):
                if not any(combo):
                    continue
                n = [sum(c * basis[r][g] for r, c in enumerate(combo))
                     for g in range(action.k)]
                n = tuple(primitive_vector(n))
                if n in tested or tuple(-x for x in n) in tested:
                    continue
                tested.add(n)
                p = intpoly.charpoly_int(sigma_of(action, n))
                cyc = intpoly.cyclotomic_divisors(p)
                if cyc:
                    entry["violations"].append({"element": list(n),
                                                "cyclotomic_indices": cyc})
            for extra in _torsion_candidates(analyze(action), action, func, basis):
                n = tuple(extra)
                if n in tested or tuple(-x for x in n) in tested:
                    continue
                tested.add(n)
                p = intpoly.charpoly_int(sigma_of(action, n))
                cyc = intpoly.cyclotomic_divisors(p)
                if cyc:
                    entry["violations"].append({"element": list(n),
                                                "cyclotomic_indices": cyc})
        violations_total.extend(entry["violations"])
        per_functional.append(entry)
    report["roots_of_unity"] = {"per_functional": per_functional,
                                "pass": not violations_total}

    failures = []
    if not report["semisimple"]["overall"]:
        failures.append("linear part not semisimple")
    if not anosov["found"]:
        failures.append("no Anosov element found")
    if violations_total:
        failures.append("kernel-lattice element with root-of-unity eigenvalue")
    report["failures"] = failures
    if failures:
        report["verdict"] = "fail"
    elif inconclusive:
        report["verdict"] = "inconclusive"
    else:
        report["verdict"] = "pass"
    return report


def _torsion_candidates(an: _Analysis, action: ActionSpec,
                        func: LyapunovFunctional, basis):
    """Numeric candidates n in the kernel lattice with Lambda(n) possibly torsion.

    Looks at the full conjugate-modulus log vectors of the basis units; an
    integer null combination would make all conjugates unimodular (hence a
    root of unity, by Kronecker).  Candidates are verified exactly by the
    caller; this routine only proposes.
    """
    if not basis or len(basis) < 2:
        return []
    b, j = an.locator(func.classes[0])
    block = an.blocks[b]
    fpoly = Poly(list(block.fT_key), _t)
    deg = fpoly.degree()
    if deg == 0:
        return []
    with mpmath.workdps(60):
        roots = mpmath.polyroots([int(c) for c in block.fT_key], maxsteps=200,
                                 extraprec=120)
        cols = []
        for vec in basis:
            kern = nullspace(_poly_of_matrix([Fraction(c) for c in block.fT_key],
                                             block.T))
            colsm = _columns(kern)
            t_k = _restrict(colsm, block.T)
            r_a = None
            for g, ag in enumerate(vec):
                if ag == 0:
                    continue
                p = mat_pow(block.restr[g], int(ag))
                r_a = p if r_a is None else mat_mul(r_a, p)
            q_a = _solve_poly_in(t_k, _restrict(colsm, r_a), deg) if r_a is not None \
                else [Fraction(1)]
            vals = []
            for rt in roots:
                acc = mpmath.mpc(0)
                for c in q_a:
                    acc = acc * rt + mpmath.mpf(c.numerator) / c.denominator
                vals.append(mpmath.log(abs(acc)))
            cols.append(vals)
    import numpy as np

    u = np.array([[float(x) for x in col] for col in cols]).T  # deg x rank
    if u.shape[1] < 2:
        return []
    _, s, vt = np.linalg.svd(u)
    cands = []
    smin = s[-1] if len(s) == min(u.shape) else 0.0
    if smin < 1e-12 * max(1.0, s[0]):
        null = vt[-1]
        scale = null / max(abs(null))
        approx = [Fraction(float(x)).limit_denominator(1000) for x in scale]
        from math import lcm

        mult = lcm(*[f.denominator for f in approx])
        m = [int(f * mult) for f in approx]
        if any(m):
            n = [sum(mi * basis[r][g] for r, mi in enumerate(m))
                 for g in range(action.k)]
            if any(n):
                cands.append(primitive_vector(n))
    return cands
