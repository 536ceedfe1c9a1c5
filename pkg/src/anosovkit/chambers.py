"""Geometry of the Lyapunov functional arrangement.

Half-spaces and coarse Lyapunov spaces (positive-proportionality classes of
functionals), Weyl chamber enumeration with rational interior witnesses,
regular (Anosov-candidate) element extraction, and the combinatorial part
of the rank>=2 hypothesis: every coarse space is a maximal intersection of
stable sets, certified by explicit elements.

Functionals come in two flavors and both are handled exactly:

- rational coefficient vectors (Fraction entries), e.g. restricted roots;
- algebraic log-modulus vectors (LogValue entries) from the joint spectrum.

Proportionality of two functionals is never guessed: rational cases are
decided by division, algebraic cases get a rational candidate from rigorous
enclosures which is then verified by an exact multiplicative relation
(|a|^q == |b|^p).  Enclosures that refuse to separate raise
UndecidedProportionality rather than merging on noise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .algnum import (
    EnclosureTooWide,
    LogValue,
    RInt,
    combine_logvalues,
    simplest_rational_between,
)
from .exact import lcm_denominators, primitive_vector
from .ratlp import strict_sign_witness


class UndecidedProportionality(Exception):
    """Neither separation nor an exact proportionality proof was reached."""


class UndecidedSign(Exception):
    """A required sign could not be certified within the precision budget."""


class RankTooLow(Exception):
    """The rank-one case structurally fails the k >= 2 hypotheses."""


# ---------------------------------------------------------------------------
# Scalar dispatch: Fraction | LogValue
# ---------------------------------------------------------------------------


def _is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


def _sign(x) -> int:
    if _is_exact(x):
        return (x > 0) - (x < 0)
    return x.sign()


def _neg(x):
    return -x if _is_exact(x) else x.negated()


def _interval(x, tol: float):
    if _is_exact(x):
        return (Fraction(x), Fraction(x))
    lo, hi = x.interval(tol)
    return (Fraction(lo), Fraction(hi))


def _mid(x) -> float:
    return float(x) if _is_exact(x) else x.mid()


def _coeffs_of(func):
    return func.coeffs if hasattr(func, "coeffs") else tuple(func)


def _mult_of(func) -> int:
    return func.multiplicity if hasattr(func, "multiplicity") else 1


def _functional_is_zero(coeffs) -> bool:
    return all(_sign(c) == 0 for c in coeffs)


def proportionality_coefficient(u, v, budget: int = 4):
    """c with v == c*u (c != 0), or None when certified non-proportional.

    Exact for rational vectors.  For log vectors, interval minors certify
    non-proportionality; a rational candidate from the ratio enclosure is
    verified with exact power relations.  k = 1 vectors are always
    proportional with a possibly irrational (float) coefficient.
    """
    k = len(u)
    su = [_sign(x) for x in u]
    sv = [_sign(x) for x in v]
    if all(s == 0 for s in su) or all(s == 0 for s in sv):
        raise ValueError("zero functional has no proportionality class")
    if {i for i, s in enumerate(su) if s != 0} != {i for i, s in enumerate(sv) if s != 0}:
        return None
    same = all(a == b for a, b in zip(su, sv))
    flipped = all(a == -b for a, b in zip(su, sv))
    if not same and not flipped:
        return None
    if all(_is_exact(x) for x in u) and all(_is_exact(x) for x in v):
        i0 = next(i for i, s in enumerate(su) if s != 0)
        c = Fraction(v[i0]) / Fraction(u[i0])
        return c if all(Fraction(v[i]) == c * Fraction(u[i]) for i in range(k)) else None
    if k == 1:
        c_iv = _ratio_interval(v[0], u[0], 1e-12)
        cand = simplest_rational_between(c_iv[0], c_iv[1])
        if cand != 0 and v[0].verify_ratio(u[0], cand):
            return cand
        return (float(c_iv[0]) + float(c_iv[1])) / 2
    tol = 1e-9
    for _ in range(budget):
        separated = False
        for i, j in itertools.combinations(range(k), 2):
            ui, uj = _interval(u[i], tol), _interval(u[j], tol)
            vi, vj = _interval(v[i], tol), _interval(v[j], tol)
            minor = _rint(ui) * _rint(vj) - _rint(uj) * _rint(vi)
            if minor.lo > 0 or minor.hi < 0:
                return None
            if minor.width > Fraction(1, 10**6):
                separated = True
        i0 = max((i for i in range(k) if su[i] != 0),
                 key=lambda i: abs(_mid(u[i])))
        c_iv = _ratio_interval(v[i0], u[i0], tol)
        cand = simplest_rational_between(c_iv[0], c_iv[1])
        if cand != 0 and all(_verify_coord_ratio(v[i], u[i], cand) for i in range(k)):
            return cand
        tol *= 1e-6
        if not separated and tol < 1e-40:
            break
    raise UndecidedProportionality(
        "could not separate nor prove proportionality of functionals")


def _rint(pair) -> RInt:
    return RInt(pair[0], pair[1])


def _ratio_interval(num, den, tol):
    nlo, nhi = _interval(num, tol)
    dlo, dhi = _interval(den, tol)
    if dlo <= 0 <= dhi:
        raise UndecidedSign("denominator interval straddles zero")
    corners = [Fraction(a) / Fraction(b) for a in (nlo, nhi) for b in (dlo, dhi)]
    return (min(corners), max(corners))


def _verify_coord_ratio(vi, ui, c: Fraction) -> bool:
    if _sign(ui) == 0:
        return _sign(vi) == 0
    if _is_exact(vi) and _is_exact(ui):
        return Fraction(vi) == c * Fraction(ui)
    return vi.verify_ratio(ui, c)


# ---------------------------------------------------------------------------
# Coarse Lyapunov decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LyapunovHalfspace:
    normal: tuple               # ray-normalized representative (floats or Fractions)
    member_functionals: tuple   # indices into the input functional list


@dataclass(frozen=True)
class CoarseLyapunovSpace:
    halfspace: LyapunovHalfspace
    bottom: int                 # functional index of the bottom exponent
    coefficients: tuple         # 1 = c_1 < c_2 < ... (Fractions when proven)
    dimension: int

    def coefficient_set(self):
        return tuple(self.coefficients)


def _ray_normalize(coeffs):
    """Scale so the first nonzero coordinate is +1 (exact when rational)."""
    if all(_is_exact(x) for x in coeffs):
        i0 = next(i for i, x in enumerate(coeffs) if x != 0)
        scale = Fraction(1) / Fraction(coeffs[i0])
        return tuple(Fraction(x) * scale for x in coeffs)
    mids = [_mid(x) for x in coeffs]
    i0 = next(i for i, x in enumerate(mids) if abs(x) > 1e-300)
    return tuple(x / mids[i0] for x in mids)


def coarse_decomposition(functionals):
    """Group nonzero functionals into positive-proportionality classes.

    Returns CoarseLyapunovSpace records; the zero functional is rejected
    (report it separately as the neutral/orbit part).
    """
    coeffs = [_coeffs_of(f) for f in functionals]
    mults = [_mult_of(f) for f in functionals]
    for c in coeffs:
        if _functional_is_zero(c):
            raise ValueError("zero functional passed to coarse_decomposition")
    groups = []  # list of dict(rep=index, members=[(index, c_rel_to_rep)])
    for i, c in enumerate(coeffs):
        placed = False
        for grp in groups:
            rel = proportionality_coefficient(coeffs[grp[0][0]], c)
            if rel is not None and _coeff_positive(rel):
                grp.append((i, rel))
                placed = True
                break
        if not placed:
            groups.append([(i, Fraction(1))])
    spaces = []
    for grp in groups:
        ratios = {idx: rel for idx, rel in grp}
        bottom = min(ratios, key=lambda idx: _coeff_value(ratios[idx]))
        base = ratios[bottom]
        rel_coeffs = []
        for idx, rel in grp:
            if isinstance(rel, Fraction) and isinstance(base, Fraction):
                rel_coeffs.append((idx, rel / base))
            else:
                rel_coeffs.append((idx, _coeff_value(rel) / _coeff_value(base)))
        rel_coeffs.sort(key=lambda t: _coeff_value(t[1]))
        members = tuple(idx for idx, _ in rel_coeffs)
        half = LyapunovHalfspace(normal=_ray_normalize(coeffs[bottom]),
                                 member_functionals=members)
        spaces.append(CoarseLyapunovSpace(
            halfspace=half, bottom=bottom,
            coefficients=tuple(c for _, c in rel_coeffs),
            dimension=sum(mults[idx] for idx in members)))
    spaces.sort(key=lambda s: tuple(float(x) for x in s.halfspace.normal))
    return spaces


def _coeff_positive(c) -> bool:
    return (c > 0) if isinstance(c, Fraction) else (float(c) > 0)


def _coeff_value(c) -> float:
    return float(c)


def coarse_decomposition_with_neutral(functionals):
    """Split off zero functionals; returns (spaces, neutral_multiplicity)."""
    nonzero, neutral = [], 0
    for f in functionals:
        if _functional_is_zero(_coeffs_of(f)):
            neutral += _mult_of(f)
        else:
            nonzero.append(f)
    return coarse_decomposition(nonzero) if nonzero else [], neutral


# ---------------------------------------------------------------------------
# Weyl chambers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Wall:
    normal: tuple            # representative functional coefficients (exact handles)
    ray_members: tuple       # (functional index, orientation +-1) pairs


@dataclass(frozen=True)
class Chamber:
    signs: tuple             # +-1 per wall
    witness: tuple           # rational interior point


@dataclass(frozen=True)
class ChamberArrangement:
    walls: tuple
    chambers: tuple
    k: int

    def functional_sign_in_chamber(self, wall_idx: int, orientation: int,
                                   chamber: Chamber) -> int:
        return orientation * chamber.signs[wall_idx]


def _group_walls(coeffs):
    """Group functionals into kernel rays (proportional up to sign)."""
    walls = []
    for i, c in enumerate(coeffs):
        placed = False
        for wall in walls:
            rep = coeffs[wall[0][0]]
            rel = proportionality_coefficient(rep, c)
            if rel is not None:
                wall.append((i, 1 if _coeff_positive(rel) else -1))
                placed = True
                break
        if not placed:
            walls.append([(i, 1)])
    return walls


def exact_sign_at(coeffs, point) -> int:
    """Sign of <coeffs, point> at a rational point, decided exactly.

    Rational coefficients: direct.  Log coefficients: rigorous interval sum
    first, exact multiplicative combination if the interval straddles zero.
    """
    point = [Fraction(x) for x in point]
    if all(_is_exact(x) for x in coeffs):
        val = sum(Fraction(c) * p for c, p in zip(coeffs, point))
        return (val > 0) - (val < 0)
    scale = lcm_denominators(point)
    ipt = [int(p * scale) for p in point]
    for tol in (1e-9, 1e-15, 1e-30, 1e-60):
        total = RInt(Fraction(0), Fraction(0))
        for c, a in zip(coeffs, ipt):
            if a == 0:
                continue
            lo, hi = _interval(c, tol)
            total = total + RInt(lo, hi) * RInt.point(a)
        if total.lo > 0:
            return 1
        if total.hi < 0:
            return -1
    return combine_logvalues(list(coeffs), ipt).sign()


def weyl_chambers(functionals) -> ChamberArrangement:
    """Enumerate the chambers of the kernel arrangement with exact witnesses.

    Rational functionals: incremental insertion with exact rational LP.
    Algebraic (log) functionals: exact in rank 1 and 2 (ray separation is
    decidable); rank >= 3 goes through a chirotope-certified rational proxy
    and every witness is re-certified against the true normals.  A
    degeneracy that resists certification raises UndecidedSign.
    """
    coeffs = [_coeffs_of(f) for f in functionals]
    if not coeffs:
        raise ValueError("no functionals")
    k = len(coeffs[0])
    for c in coeffs:
        if _functional_is_zero(c):
            raise ValueError("zero functional passed to weyl_chambers")
    wall_groups = _group_walls(coeffs)
    wall_reps = [coeffs[grp[0][0]] for grp in wall_groups]
    walls = tuple(Wall(normal=tuple(rep), ray_members=tuple(grp))
                  for rep, grp in zip(wall_reps, wall_groups))

    if all(all(_is_exact(x) for x in rep) for rep in wall_reps):
        chambers = _enumerate_exact([list(map(Fraction, r)) for r in wall_reps], k)
    elif k == 1:
        s0 = _sign(wall_reps[0][0])
        signs = tuple(s0 if _i == 0 else _sign(wall_reps[_i][0])
                      for _i in range(len(wall_reps)))
        chambers = (Chamber(signs=signs, witness=(Fraction(1),)),
                    Chamber(signs=tuple(-s for s in signs), witness=(Fraction(-1),)))
    elif k == 2:
        chambers = _enumerate_rank2(wall_reps)
    else:
        chambers = _enumerate_proxy(wall_reps, k)
    return ChamberArrangement(walls=walls, chambers=tuple(chambers), k=k)


def _enumerate_exact(reps, k):
    m = len(reps)
    chambers = [Chamber(signs=(), witness=None)]
    inserted = []
    for w in range(m):
        inserted.append(reps[w])
        new = []
        for ch in chambers:
            for s in (1, -1):
                signs = list(ch.signs) + [s]
                witness = strict_sign_witness(
                    inserted, [signs[i] for i in range(len(inserted))])
                if witness is not None:
                    new.append(Chamber(signs=tuple(signs), witness=tuple(witness)))
        chambers = new
    return chambers


def _enumerate_rank2(reps):
    # sort kernel rays by angle; chambers are the sectors in between
    m = len(reps)
    angles = []
    for i, rep in enumerate(reps):
        tol = 1e-12
        (alo, ahi), (blo, bhi) = _interval(rep[0], tol), _interval(rep[1], tol)
        # kernel direction of (a, b) is (-b, a); fold to [0, pi)
        theta = math.atan2(float((alo + ahi) / 2), -float((blo + bhi) / 2)) % math.pi
        angles.append((theta, i))
    angles.sort()
    order = [i for _, i in angles]
    thetas = [t for t, _ in angles]
    chambers = []
    for s in range(m):
        t0 = thetas[s]
        t1 = thetas[(s + 1) % m] + (math.pi if s == m - 1 else 0.0)
        phi = (t0 + t1) / 2
        chambers.extend(_certified_sector_chambers(reps, phi))
    dedup = {}
    for ch in chambers:
        dedup.setdefault(ch.signs, ch)
    result = list(dedup.values())
    if len(result) != 2 * m:
        raise UndecidedSign(
            f"rank-2 enumeration found {len(result)} chambers, expected {2 * m}")
    return sorted(result, key=lambda c: c.signs)


def _certified_sector_chambers(reps, phi):
    out = []
    for direction in (phi, phi + math.pi):
        for denom in (64, 512, 4096, 1 << 16):
            a = (Fraction(round(math.cos(direction) * denom), denom),
                 Fraction(round(math.sin(direction) * denom), denom))
            try:
                signs = tuple(exact_sign_at(rep, a) for rep in reps)
            except EnclosureTooWide:
                continue
            if all(s != 0 for s in signs):
                out.append(Chamber(signs=signs, witness=a))
                break
    return out


def _enumerate_proxy(reps, k):
    m = len(reps)
    tol = 1e-12
    for _round, max_den in enumerate((10**3, 10**6, 10**9, 10**12)):
        proxies = []
        for rep in reps:
            proxies.append([Fraction(float(lo + hi) / 2).limit_denominator(max_den)
                            for lo, hi in (_interval(c, tol) for c in rep)])
        certified = True
        for subset in itertools.combinations(range(m), k):
            det_iv = _interval_det([reps[i] for i in subset], tol)
            det_proxy = _exact_det([proxies[i] for i in subset])
            if det_iv.lo > 0 and det_proxy > 0:
                continue
            if det_iv.hi < 0 and det_proxy < 0:
                continue
            certified = False
            break
        if certified:
            chambers = _enumerate_exact(proxies, k)
            out = []
            for ch in chambers:
                signs = tuple(exact_sign_at(rep, ch.witness) for rep in reps)
                if any(s == 0 for s in signs) or signs != ch.signs:
                    raise UndecidedSign("proxy witness failed exact certification")
                out.append(Chamber(signs=signs, witness=ch.witness))
            return out
        tol *= 1e-8
    raise UndecidedSign(
        "arrangement chirotope could not be certified (possible exact degeneracy)")


def _interval_det(rows, tol):
    k = len(rows)
    ivs = [[_rint(_interval(x, tol)) for x in row] for row in rows]

    def det(mat):
        if len(mat) == 1:
            return mat[0][0]
        acc = None
        for j in range(len(mat)):
            minor = det([r[:j] + r[j + 1:] for r in mat[1:]])
            term = mat[0][j] * minor
            if j % 2:
                term = RInt(-term.hi, -term.lo)
            acc = term if acc is None else acc + term
        return acc

    return det(ivs)


def _exact_det(rows):
    k = len(rows)
    if k == 1:
        return rows[0][0]
    acc = Fraction(0)
    for j in range(k):
        minor = _exact_det([r[:j] + r[j + 1:] for r in rows[1:]])
        acc += (-1) ** j * rows[0][j] * minor
    return acc


def find_regular_element(arrangement: ChamberArrangement, chamber: Chamber):
    """Integer vector strictly inside the chamber, certified exactly."""
    witness = chamber.witness
    scale = lcm_denominators(witness)
    a = [int(Fraction(x) * scale) for x in witness]
    a = primitive_vector(a)
    for wall, s in zip(arrangement.walls, chamber.signs):
        if exact_sign_at(wall.normal, a) != s:
            raise UndecidedSign(f"integer witness {a} lost certification")
    return a


# ---------------------------------------------------------------------------
# Maximal-intersection certificates
# ---------------------------------------------------------------------------


def check_maximal_intersections(functionals, coarse=None, arrangement=None) -> dict:
    """Certify the maximal-intersection hypothesis for each coarse space.

    For each coarse space E_H: exhibit a nonzero wall element (built from
    the bottom functional's own coefficients, hence annihilated identically),
    and integer elements b_1..b_r whose negative-sign functional sets
    intersect exactly in the members of H (verified sign by sign).  The
    ergodicity clause is explicitly NOT verified here; reports say so.
    """
    coeffs = [_coeffs_of(f) for f in functionals]
    if not coeffs:
        raise ValueError("no functionals")
    k = len(coeffs[0])
    if k < 2:
        raise RankTooLow("k = 1: Lyapunov walls contain no nonzero elements")
    nonzero_idx = [i for i, c in enumerate(coeffs) if not _functional_is_zero(c)]
    if coarse is None:
        coarse = coarse_decomposition([functionals[i] for i in nonzero_idx])
        remap = {j: nonzero_idx[j] for j in range(len(nonzero_idx))}
        coarse = [CoarseLyapunovSpace(
            halfspace=LyapunovHalfspace(
                normal=s.halfspace.normal,
                member_functionals=tuple(remap[i] for i in s.halfspace.member_functionals)),
            bottom=remap[s.bottom], coefficients=s.coefficients,
            dimension=s.dimension) for s in coarse]
    if arrangement is None:
        arrangement = weyl_chambers([functionals[i] for i in nonzero_idx])
    wall_of = {}
    for w_idx, wall in enumerate(arrangement.walls):
        for local_idx, orient in wall.ray_members:
            wall_of[nonzero_idx[local_idx]] = (w_idx, orient)

    report = {"k": k, "spaces": [], "pass": True,
              "ergodicity_clause": "NOT verified combinatorially; supply the "
                                   "weak-mixing certificate or assert it"}
    for space in coarse:
        members = set(space.halfspace.member_functionals)
        bottom_coeffs = coeffs[space.bottom]
        wall_elt, wall_exact = _wall_element(bottom_coeffs)
        b_set = []
        covered = set(members)
        w_bot, o_bot = wall_of[space.bottom]
        for phi in nonzero_idx:
            if phi in members or phi in covered:
                continue
            w_phi, o_phi = wall_of[phi]
            cand = None
            for ch in arrangement.chambers:
                if (arrangement.functional_sign_in_chamber(w_bot, o_bot, ch) == -1
                        and arrangement.functional_sign_in_chamber(w_phi, o_phi, ch) == 1):
                    cand = find_regular_element(arrangement, ch)
                    break
            if cand is None:
                report["pass"] = False
                continue
            b_set.append(cand)
            for other in nonzero_idx:
                if other not in members and exact_sign_at(coeffs[other], cand) > 0:
                    covered.add(other)
        # verify: intersection of negative sets over b_set equals members
        inter = set(nonzero_idx)
        for b in b_set:
            inter &= {i for i in nonzero_idx if exact_sign_at(coeffs[i], b) < 0}
        ok = (inter == members) if b_set else (set(nonzero_idx) == members)
        entry = {
            "bottom": space.bottom,
            "members": sorted(members),
            "wall_element": [float(x) for x in wall_elt],
            "wall_element_exact": wall_exact,
            "stable_intersection_elements": [list(b) for b in b_set],
            "intersection_equals_members": bool(ok),
        }
        if not ok:
            report["pass"] = False
        report["spaces"].append(entry)
    return report


def _wall_element(bottom_coeffs):
    """Nonzero element of ker(chi) built from chi's own coefficients.

    If some coordinate of chi vanishes (exactly), the corresponding basis
    vector works and is an exact integer certificate.  Otherwise the pair
    vector (chi_j, -chi_i) in coordinates (i, j) is annihilated identically;
    it is rational exactly when chi is.
    """
    k = len(bottom_coeffs)
    for j in range(k):
        if _sign(bottom_coeffs[j]) == 0:
            return [Fraction(int(t == j)) for t in range(k)], True
    i, j = 0, 1
    ci, cj = bottom_coeffs[i], bottom_coeffs[j]
    if _is_exact(ci) and _is_exact(cj):
        vec = [Fraction(0)] * k
        vec[i], vec[j] = Fraction(cj), -Fraction(ci)
        return vec, True
    vec = [0.0] * k
    vec[i], vec[j] = _mid(cj), -_mid(ci)
    return vec, False
