import io
import struct

import numpy as np
import pytest

from anosovkit import spectra
from anosovkit.conjugacy import (
    ConjugatedPerturbation,
    Diverged,
    NotAnosov,
    ToralPerturbation,
    TrigPolynomial,
    psi_conjugation,
    regularity_probe,
    shift_perturbation,
    solve_conjugacy,
    verify_intertwining,
)


def small_cat_pert(eps=0.01):
    p = TrigPolynomial([((0, 1), (0.0, 0.0), (eps, 0.0))], 2)
    cat = spectra.validate_action([[[2, 1], [1, 1]]])
    return ToralPerturbation(base=cat, perturbations=[p])


def psi_cat(eps=0.01):
    cat = spectra.validate_action([[[2, 1], [1, 1]]])
    q = TrigPolynomial([((1, 0), (0.15, 0.05), (0.2, 0.1)),
                        ((1, 1), (0.1, -0.15), (0.0, 0.12))], 2)
    return psi_conjugation(cat, q, eps)


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------


def test_zero_perturbation_trivial(cat_action):
    pert = ToralPerturbation(base=cat_action,
                             perturbations=[TrigPolynomial([], 2)])
    field = solve_conjugacy(pert, resolution=32, tol=1e-12)
    assert field.iterations == 1
    assert field.residual == 0.0
    assert np.all(field.u == 0.0)


def test_cat_converges_small_grid():
    field = solve_conjugacy(small_cat_pert(), resolution=128, tol=1e-10)
    assert field.residual < 1e-10
    assert field.sup_u() < 0.05


def test_modes_agree():
    f1 = solve_conjugacy(small_cat_pert(), resolution=64, tol=1e-11)
    f2 = solve_conjugacy(small_cat_pert(), resolution=64, tol=1e-11,
                         mode="transfer")
    assert np.max(np.abs(f1.u - f2.u)) < 1e-9


def test_contraction_certificate():
    field = solve_conjugacy(small_cat_pert(), resolution=64, tol=1e-11,
                            mode="transfer")
    hist = field.residual_history
    bound = field.meta["rate_estimate"] + 0.15
    for a, b in zip(hist[1:-1], hist[2:]):
        assert b <= a * bound + 1e-14


def test_not_anosov_refused(phi3_action):
    pert = ToralPerturbation(base=phi3_action,
                             perturbations=[TrigPolynomial([], 2)])
    with pytest.raises(NotAnosov):
        solve_conjugacy(pert, resolution=16)


def test_oversized_refused(cat_action):
    p = TrigPolynomial([((0, 1), (0.0, 0.0), (0.5, 0.0))], 2)
    pert = ToralPerturbation(base=cat_action, perturbations=[p])
    with pytest.raises(Diverged):
        solve_conjugacy(pert, resolution=32)


def test_psi_recovery_and_uniqueness():
    pert, truth = psi_cat()
    field = solve_conjugacy(pert, resolution=128, tol=1e-11)
    err = np.max(np.abs(field.u - truth(field.grid_points())))
    assert err < 1e-8


def test_recovery_stable_across_resolutions():
    # grid values are exact samples, so the error stays at solver-tolerance
    # scale at every resolution instead of decaying with a scheme order
    pert, truth = psi_cat()
    for res in (64, 128, 256):
        field = solve_conjugacy(pert, resolution=res, tol=1e-11)
        err = np.max(np.abs(field.u - truth(field.grid_points())))
        assert err < 1e-9, res


def test_equivariance_generator_vs_square(cat_action):
    # the same psi conjugates A and A^2; both solves recover it
    q = TrigPolynomial([((1, 0), (0.1, 0.05), (0.12, 0.06))], 2)
    pert1, truth = psi_conjugation(cat_action, q, 0.01)
    a2 = np.array([[2, 1], [1, 1]]) @ np.array([[2, 1], [1, 1]])
    sq = spectra.validate_action([a2.tolist()])
    pert2, _ = psi_conjugation(sq, q, 0.01)
    f1 = solve_conjugacy(pert1, resolution=64, tol=1e-11)
    f2 = solve_conjugacy(pert2, resolution=64, tol=1e-11)
    assert np.max(np.abs(f1.u - f2.u)) < 1e-9


def test_translation_gauge():
    # base with |det(A - I)| = 2: the half-period c = (0, 1/2) satisfies
    # (A - I) c integral, so conjugating the data by the translation keeps
    # the equation solvable and h_c(x) = h(x + c) - c
    base = spectra.validate_action([[[3, 2], [1, 1]]])
    c = np.array([0.0, 0.5])
    a_mat = np.array([[3, 2], [1, 1]])
    assert np.allclose(((a_mat - np.eye(2)) @ c) % 1.0, 0.0)
    p = TrigPolynomial([((0, 1), (0.005, 0.0), (0.008, 0.004)),
                        ((1, 1), (0.0, 0.006), (0.004, 0.0))], 2)
    pert = ToralPerturbation(base=base, perturbations=[p])
    field = solve_conjugacy(pert, resolution=64, tol=1e-11)
    shifted = shift_perturbation(pert, c)
    field_c = solve_conjugacy(shifted, resolution=64, tol=1e-11)
    # u_c(x) = u(x + c): compare by rolling the grid half a period in x2
    u = field.u.reshape(64, 64, 2)
    u_c = field_c.u.reshape(64, 64, 2)
    assert np.max(np.abs(u_c - np.roll(u, -32, axis=1))) < 1e-9


# ---------------------------------------------------------------------------
# intertwining
# ---------------------------------------------------------------------------


def test_intertwining_k1_matches_solver_residual():
    pert = small_cat_pert()
    field = solve_conjugacy(pert, resolution=64, tol=1e-11)
    rep = verify_intertwining(field, pert)
    assert rep["residuals"][0] == pytest.approx(field.residual, rel=1e-6)


def test_intertwining_commuting_t3(t3_action):
    q = TrigPolynomial([((1, 0, 0), (0.08, 0.04, -0.05), (0.1, 0.0, 0.06))], 3)
    pert, truth = psi_conjugation(t3_action, q, 0.004)
    field = solve_conjugacy(pert, resolution=32, tol=1e-10)
    rep = verify_intertwining(field, pert)
    assert rep["residuals"][1] < 1e-8
    err = np.max(np.abs(field.u - truth(field.grid_points())))
    assert err < 1e-8


def test_intertwining_negative_control(t3_action):
    eps = 0.005
    p1 = TrigPolynomial([((0, 1, 1), (0.0, eps, 0.0), (eps, 0.0, eps))], 3)
    pert = ToralPerturbation(base=t3_action,
                             perturbations=[p1, TrigPolynomial([], 3)])
    assert pert.commutativity_defect() > 1e-4
    field = solve_conjugacy(pert, resolution=32, tol=1e-10)
    rep = verify_intertwining(field, pert)
    assert rep["residuals"][0] < 1e-9
    assert rep["residuals"][1] > 1e-3


# ---------------------------------------------------------------------------
# regularity probe
# ---------------------------------------------------------------------------


def test_probe_zero_displacement(cat_action):
    pert = ToralPerturbation(base=cat_action,
                             perturbations=[TrigPolynomial([], 2)])
    field = solve_conjugacy(pert, resolution=64)
    rep = regularity_probe(field)
    assert all("smooth" in d["classification"] for d in rep["directions"])


def test_probe_psi_case_at_least_c1():
    pert, _ = psi_cat()
    field = solve_conjugacy(pert, resolution=256, tol=1e-11)
    rep = regularity_probe(field)
    for d in rep["directions"]:
        assert d["classification"] in ("C1", "C2 or better",
                                       "smooth (zero displacement)")


def test_probe_generic_case_holder():
    eps = 0.02
    p = TrigPolynomial([((0, 1), (eps * 0.5, 0.0), (eps, 0.0)),
                        ((1, 0), (0.0, eps * 0.3), (0.0, eps * 0.6)),
                        ((1, 1), (eps * 0.2, 0.0), (0.0, eps * 0.4))], 2)
    cat = spectra.validate_action([[[2, 1], [1, 1]]])
    pert = ToralPerturbation(base=cat, perturbations=[p])
    field = solve_conjugacy(pert, resolution=256, tol=1e-11)
    rep = regularity_probe(field)
    assert rep["min_holder_exponent"] < 0.95


# ---------------------------------------------------------------------------
# perturbation plumbing and exports
# ---------------------------------------------------------------------------


def test_trig_polynomial_json_roundtrip():
    p = TrigPolynomial([((1, 2), (0.5, -0.25), (0.0, 1.0))], 2)
    q = TrigPolynomial.from_json(p.to_json(), 2)
    pts = np.random.default_rng(0).random((50, 2))
    assert np.allclose(p.evaluate(pts), q.evaluate(pts))


def test_flat_json_form_sine_convention():
    obj = {"frequencies": [[0, 1]], "coefficients": [[1.0, 0.0]],
           "epsilon": 0.01}
    p = TrigPolynomial.from_json(obj, 2)
    pts = np.array([[0.0, 0.25]])
    assert p.evaluate(pts)[0, 0] == pytest.approx(0.01)


def test_conjugated_fit_matches_evaluation(cat_action):
    q = TrigPolynomial([((1, 0), (0.1, 0.0), (0.1, 0.05))], 2)
    conj = ConjugatedPerturbation(cat_action.generator(0), q, 0.01)
    fitted = conj.fit_trig_polynomial(grid=64)
    pts = np.random.default_rng(1).random((100, 2))
    assert np.max(np.abs(conj.evaluate(pts) - fitted.evaluate(pts))) < 1e-10


def test_binary_export(tmp_path):
    pert = small_cat_pert()
    field = solve_conjugacy(pert, resolution=32, tol=1e-10)
    path = tmp_path / "field.bin"
    field.export_binary(str(path))
    raw = path.read_bytes()
    assert raw[:8] == b"AKFIELD1"
    dim, res = struct.unpack("<II", raw[8:16])
    assert (dim, res) == (2, 32)
    data = np.frombuffer(raw[16:], dtype="<f8").reshape(32 * 32, 2)
    assert np.allclose(data, field.u)


def test_fourier_table_deterministic():
    pert = small_cat_pert()
    field = solve_conjugacy(pert, resolution=64, tol=1e-10)
    t1 = field.fourier_table(top=8)
    t2 = field.fourier_table(top=8)
    assert t1 == t2
    assert all("freq" in e and "re" in e for e in t1)
