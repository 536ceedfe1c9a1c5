"""Intertwining verification and directional regularity probes."""

from __future__ import annotations

import numpy as np

from .perturbation import ToralPerturbation
from .solver import ConjugacyField, _eigendata, _permutation


def verify_intertwining(field: ConjugacyField, pert: ToralPerturbation) -> dict:
    """sup |f_i(h(x)) - h(A_i x)| per generator, exact at grid points.

    A single conjugacy solved from one generator intertwines every
    generator exactly when the perturbed family is a genuine commuting
    action; the per-generator residuals are the numerical signature.  An
    interpolation budget (spectral tail of u) bounds the extra sup-norm
    error away from grid points.
    """
    n, size = field.dim, field.resolution
    x = field.grid_points()
    u = field.u
    residuals = []
    for i in range(pert.k):
        a_int = np.array(pert.base.generator(i), dtype=np.int64)
        perm = _permutation(a_int, size)
        lhs = u @ a_int.T.astype(float) + pert.p_eval(i, x + u)
        res = float(np.max(np.abs(lhs - u[perm])))
        residuals.append(res)
    tail = field.tail_fraction()
    budget = tail * max(field.sup_u(), 1e-300)
    return {
        "residuals": residuals,
        "solving_generator": field.generator,
        "interpolation_budget": budget,
        "spectral_tail_fraction": tail,
        "max_residual": max(residuals),
    }


def _eigen_directions(base, generator: int):
    """Real unit directions spanning the base eigenspaces, with labels.

    Complex pairs contribute their real and imaginary parts (a basis of
    the corresponding invariant plane).
    """
    lam, v_mat, _ = _eigendata(base.generators[generator])
    dirs = []
    seen_conj = set()
    for e, l in enumerate(lam):
        vec = v_mat[:, e]
        if abs(l.imag) < 1e-12:
            d = vec.real
            if np.max(np.abs(d)) < 1e-12:
                d = vec.imag
            dirs.append((d / np.linalg.norm(d), float(abs(l)), "real"))
        else:
            key = round(l.real, 9), round(abs(l.imag), 9)
            if key in seen_conj:
                continue
            seen_conj.add(key)
            for part, tag in ((vec.real, "re"), (vec.imag, "im")):
                if np.linalg.norm(part) > 1e-12:
                    dirs.append((part / np.linalg.norm(part), float(abs(l)), tag))
    return dirs


def regularity_probe(field: ConjugacyField, pert: ToralPerturbation | None = None,
                     scales=None, c1_threshold: float = 0.95) -> dict:
    """Finite-difference regularity of u along base eigen-directions.

    For each direction v and dyadic scale t: first differences
    sup |u(x + t v) - u(x)| and symmetric second differences; slopes of
    log2(delta) against log2(t) estimate the Hölder exponent.  Off-grid
    values come from the trigonometric interpolant (exact when u is a
    trig polynomial; tail-limited otherwise, reported).
    """
    n, size = field.dim, field.resolution
    base = field.base
    sup_u = field.sup_u()
    if scales is None:
        # start at 1/8: coarser shifts saturate low-frequency differences
        jmax = min(8, int(np.log2(size)) - 2)
        scales = [2.0 ** (-j) for j in range(3, jmax + 1)]
    report = {"scales": [float(t) for t in scales], "directions": [],
              "spectral_tail_fraction": field.tail_fraction()}
    if sup_u < 1e-12:
        for d, mod, tag in _eigen_directions(base, field.generator):
            report["directions"].append({
                "direction": [float(x) for x in d],
                "eigen_modulus": mod, "part": tag,
                "classification": "smooth (zero displacement)",
                "holder_exponent": None, "slope_first": None,
                "slope_second": None, "delta1": [], "delta2": []})
        report["min_holder_exponent"] = None
        return report
    co = field.fourier()
    freqs = np.fft.fftfreq(size, d=1.0 / size).astype(int)
    mesh = np.meshgrid(*([freqs] * n), indexing="ij")
    min_exp = np.inf
    for d, mod, tag in _eigen_directions(base, field.generator):
        d1_list, d2_list = [], []
        for t in scales:
            phase = np.zeros((size,) * n)
            for axis in range(n):
                phase = phase + mesh[axis] * (t * d[axis])
            rot = np.exp(2j * np.pi * phase)
            up = np.fft.ifftn(co * rot[..., None] * (size ** n),
                              axes=tuple(range(n))).real
            um = np.fft.ifftn(co * np.conj(rot)[..., None] * (size ** n),
                              axes=tuple(range(n))).real
            ug = field.u_grid()
            d1_list.append(float(np.max(np.abs(up - ug))))
            d2_list.append(float(np.max(np.abs(up + um - 2 * ug))))
        slope1 = _regression_slope(scales, d1_list)
        slope2 = _regression_slope(scales, d2_list)
        if slope1 is None:
            cls = "smooth (no variation along direction)"
            exponent = None
        elif slope1 < c1_threshold:
            cls = "Holder (not C1)"
            exponent = slope1
            min_exp = min(min_exp, slope1)
        else:
            exponent = slope1
            min_exp = min(min_exp, slope1)
            cls = "C2 or better" if (slope2 is not None and slope2 >= 1.9) else "C1"
        report["directions"].append({
            "direction": [float(x) for x in d],
            "eigen_modulus": mod, "part": tag,
            "classification": cls,
            "holder_exponent": exponent,
            "slope_first": slope1, "slope_second": slope2,
            "delta1": d1_list, "delta2": d2_list})
    report["min_holder_exponent"] = None if min_exp is np.inf else float(min_exp)
    return report


def _regression_slope(scales, deltas):
    xs, ys = [], []
    for t, dv in zip(scales, deltas):
        if dv > 1e-14:
            xs.append(np.log2(t))
            ys.append(np.log2(dv))
    if len(xs) < 2:
        return None
    xs, ys = np.array(xs), np.array(ys)
    return float(np.polyfit(xs, ys, 1)[0])
