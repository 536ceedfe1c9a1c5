"""Perturbed toral actions: trig-polynomial data and the built-in
conjugation family.

A perturbed generator is f_i(x) = A_i x + p_i(x) with p_i periodic.  Two
perturbation backends:

- ``TrigPolynomial``: explicit finite Fourier data (the wire format);
- ``ConjugatedPerturbation``: the guaranteed-commuting family
  f_i = psi ∘ A_i ∘ psi^{-1} for a small diffeomorphism psi = id + eps*q,
  evaluated pointwise through a fixed-point inversion of psi (machine
  precision, no truncation).  It can export a fitted TrigPolynomial for
  the wire format; coefficients below the fit threshold are dropped and
  the threshold is recorded.

Arbitrary user perturbations are accepted without a commutativity promise;
``ToralPerturbation.commutativity_defect`` measures how far the perturbed
generators are from commuting, since the rigidity statement assumes they
do.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..spectra import ActionSpec


class TrigPolynomial:
    """p(x) = sum_t cos_t * cos(2 pi f_t . x) + sin_t * sin(2 pi f_t . x).

    ``terms``: list of (freq int tuple, cos vector, sin vector).  A zero
    frequency with a cos vector encodes a constant term.
    """

    def __init__(self, terms, dim: int):
        self.dim = dim
        norm = []
        for freq, cosv, sinv in terms:
            freq = tuple(int(f) for f in freq)
            cosv = np.asarray(cosv, dtype=float)
            sinv = np.asarray(sinv, dtype=float)
            if cosv.shape != (dim,) or sinv.shape != (dim,):
                raise ValueError("coefficient vectors must have length dim")
            if np.any(cosv) or np.any(sinv):
                norm.append((freq, cosv, sinv))
        self.terms = norm

    @staticmethod
    def from_json(obj: dict, dim: int) -> "TrigPolynomial":
        terms = []
        if "terms" in obj:
            for t in obj["terms"]:
                terms.append((t["freq"],
                              t.get("cos", [0.0] * dim),
                              t.get("sin", [0.0] * dim)))
        else:
            # flat form: sine convention, optional cosine block
            eps = float(obj.get("epsilon", 1.0))
            freqs = obj["frequencies"]
            sins = obj.get("coefficients", [[0.0] * dim] * len(freqs))
            coss = obj.get("coefficients_cos", [[0.0] * dim] * len(freqs))
            for f, s, c in zip(freqs, sins, coss):
                terms.append((f, [eps * x for x in c], [eps * x for x in s]))
        return TrigPolynomial(terms, dim)

    def to_json(self) -> dict:
        return {"terms": [{"freq": list(f), "cos": list(map(float, c)),
                           "sin": list(map(float, s))}
                          for f, c, s in self.terms]}

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        out = np.zeros_like(points)
        for freq, cosv, sinv in self.terms:
            phase = np.zeros(points.shape[0])
            for d, fd in enumerate(freq):
                if fd:
                    phase += fd * points[:, d]
            phase *= 2.0 * np.pi
            if np.any(cosv):
                out += np.cos(phase)[:, None] * cosv[None, :]
            if np.any(sinv):
                out += np.sin(phase)[:, None] * sinv[None, :]
        return out

    def sup_bound(self) -> float:
        return float(sum(np.abs(c).max() + np.abs(s).max()
                         for _, c, s in self.terms))

    def deriv_bound(self) -> float:
        return float(sum(2 * np.pi * sum(map(abs, f)) *
                         (np.abs(c).max() + np.abs(s).max())
                         for f, c, s in self.terms))

    def shifted(self, c_vec) -> "TrigPolynomial":
        """p(x + c) as a TrigPolynomial (phase rotation per term)."""
        c_vec = np.asarray(c_vec, dtype=float)
        terms = []
        for freq, cosv, sinv in self.terms:
            phi = 2.0 * np.pi * float(sum(f * c for f, c in zip(freq, c_vec)))
            # cos(th+phi) = cos th cos phi - sin th sin phi, etc.
            terms.append((freq,
                          np.cos(phi) * cosv + np.sin(phi) * sinv,
                          -np.sin(phi) * cosv + np.cos(phi) * sinv))
        return TrigPolynomial(terms, self.dim)


class ConjugatedPerturbation:
    """p_i(y) = eps*q(A_i w) - eps*A_i q(w) with w = psi^{-1}(y), psi = id + eps*q.

    Exact pointwise evaluation: w solves w = y - eps*q(w) by fixed-point
    iteration (contraction for small eps), so no Fourier truncation enters.
    """

    def __init__(self, matrix, q: TrigPolynomial, eps: float):
        self.matrix = np.asarray(matrix, dtype=float)
        self.q = q
        self.eps = float(eps)
        contraction = abs(eps) * q.deriv_bound()
        if contraction >= 0.5:
            raise ValueError(f"psi inversion not a contraction ({contraction:.3f})")
        self._contraction = contraction

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        w = self._psi_inverse(points)
        aw = w @ self.matrix.T
        qw = self.q.evaluate(w)
        return self.eps * self.q.evaluate(aw) - self.eps * (qw @ self.matrix.T)

    def _psi_inverse(self, y: np.ndarray) -> np.ndarray:
        w = y.copy()
        tol = 1e-15
        for _ in range(80):
            step = y - self.eps * self.q.evaluate(w)
            delta = float(np.max(np.abs(step - w)))
            w = step
            if delta < tol:
                break
        return w

    def sup_bound(self) -> float:
        return 2.0 * abs(self.eps) * self.q.sup_bound() * (
            1.0 + float(np.abs(self.matrix).sum(axis=1).max()))

    def deriv_bound(self) -> float:
        amp = float(np.abs(self.matrix).sum(axis=1).max())
        return 2.0 * abs(self.eps) * self.q.deriv_bound() * (1 + amp) * (
            1.0 / (1.0 - self._contraction))

    def fit_trig_polynomial(self, grid: int, threshold: float = 1e-13) -> TrigPolynomial:
        """Sample on a grid, FFT, and keep coefficients above threshold."""
        n = self.matrix.shape[0]
        axes = [np.arange(grid) / grid] * n
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        vals = self.evaluate(pts).reshape(*([grid] * n), n)
        coeffs = np.fft.fftn(vals, axes=tuple(range(n))) / (grid ** n)
        cutoff = threshold * max(1e-300, float(np.abs(coeffs).max()))
        freqs = np.fft.fftfreq(grid, d=1.0 / grid).astype(int)
        terms = []
        hit = np.argwhere(np.abs(coeffs).max(axis=-1) > cutoff)
        seen = set()
        for idx in hit:
            f = tuple(int(freqs[i]) for i in idx)
            if f in seen or tuple(-x for x in f) in seen:
                continue
            seen.add(f)
            c = coeffs[tuple(idx)]
            if all(x == 0 for x in f):
                terms.append((f, c.real, np.zeros(n)))
            else:
                terms.append((f, 2 * c.real, -2 * c.imag))
        return TrigPolynomial(terms, n)


@dataclass
class ToralPerturbation:
    """Perturbed generators f_i = A_i + p_i of a toral Z^k action."""

    base: ActionSpec
    perturbations: list          # one evaluable per generator
    meta: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def dim(self) -> int:
        return self.base.dim

    def matrix(self, i: int) -> np.ndarray:
        return np.array(self.base.generator(i), dtype=np.int64)

    def p_eval(self, i: int, points: np.ndarray) -> np.ndarray:
        return self.perturbations[i].evaluate(points)

    def f_eval(self, i: int, points: np.ndarray) -> np.ndarray:
        return points @ self.matrix(i).T.astype(float) + self.p_eval(i, points)

    def c1_norm_bound(self) -> float:
        return max(p.sup_bound() + p.deriv_bound() for p in self.perturbations)

    def commutativity_defect(self, grid: int = 32) -> float:
        """sup |f_i(f_j(x)) - f_j(f_i(x))| over a coarse grid, mod 1.

        The rigidity hypothesis is that the perturbed generators commute;
        arbitrary user data may not, so the defect is measured and reported.
        """
        n = self.dim
        axes = [np.arange(grid) / grid] * n
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        worst = 0.0
        for i in range(self.k):
            for j in range(i + 1, self.k):
                ij = self.f_eval(i, self.f_eval(j, pts) % 1.0)
                ji = self.f_eval(j, self.f_eval(i, pts) % 1.0)
                diff = ij - ji
                diff -= np.round(diff)
                worst = max(worst, float(np.max(np.abs(diff))))
        return worst

    @staticmethod
    def from_json(obj: dict) -> "ToralPerturbation":
        base = ActionSpec.from_json(obj["base"])
        perts = [TrigPolynomial.from_json(p, base.dim)
                 for p in obj["perturbations"]]
        return ToralPerturbation(base=base, perturbations=perts)

    def to_json(self) -> dict:
        perts = []
        for p in self.perturbations:
            if isinstance(p, TrigPolynomial):
                perts.append(p.to_json())
            else:
                fitted = p.fit_trig_polynomial(grid=64)
                entry = fitted.to_json()
                entry["fitted_from"] = "conjugated-family (threshold 1e-13)"
                perts.append(entry)
        return {"base": self.base.to_json(), "perturbations": perts,
                "c1_norm_bound": self.c1_norm_bound()}


def psi_conjugation(base: ActionSpec, q: TrigPolynomial,
                    eps: float) -> tuple:
    """Built-in commuting family: every generator conjugated by psi = id+eps*q.

    Returns (perturbation, ground_truth) where ground_truth(points) is the
    displacement psi - id on given points; the exact conjugacy of the
    family is h = psi.
    """
    perts = [ConjugatedPerturbation(base.generator(i), q, eps)
             for i in range(base.k)]

    def ground_truth(points: np.ndarray) -> np.ndarray:
        return eps * q.evaluate(points)

    pert = ToralPerturbation(base=base, perturbations=perts,
                             meta={"family": "psi-conjugation", "eps": eps})
    return pert, ground_truth


class _ShiftedPerturbation:
    """p_c(y) = p(y + c) + (A - I) c: the translation-conjugated data."""

    def __init__(self, inner, matrix, c_vec):
        self.inner = inner
        self.matrix = np.asarray(matrix, dtype=float)
        self.c = np.asarray(c_vec, dtype=float)
        n = self.matrix.shape[0]
        const = (self.matrix - np.eye(n)) @ self.c
        # integer parts are trivial torus translations; drop them
        self.const = const - np.round(const)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return self.inner.evaluate(points + self.c[None, :]) + self.const[None, :]

    def sup_bound(self) -> float:
        return self.inner.sup_bound() + float(np.abs(self.const).sum())

    def deriv_bound(self) -> float:
        return self.inner.deriv_bound()


def shift_perturbation(pert: ToralPerturbation, c_vec) -> ToralPerturbation:
    """Conjugate the whole perturbed action by the translation x -> x + c.

    When (A_i - I) c is integral for every generator, the translated data
    defines the same torus maps up to the coordinate shift, and h_c =
    T_{-c} ∘ h ∘ T_c solves the shifted conjugacy problem.
    """
    perts = [_ShiftedPerturbation(p, pert.base.generator(i), c_vec)
             for i, p in enumerate(pert.perturbations)]
    return ToralPerturbation(base=pert.base, perturbations=perts,
                             meta={**pert.meta, "shifted_by": list(map(float, c_vec))})
