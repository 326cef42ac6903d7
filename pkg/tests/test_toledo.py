import numpy as np
import pytest

from flexcheck.config import NumericalAbort
from flexcheck.liealg import subalgebra_from_matrices
from flexcheck.roots import decompose
from flexcheck.surface import (
    adjoint_module,
    cohomology,
    cup_pairing,
    restricted_module,
    standard_module,
    standard_presentation,
    surface_representation,
)
from flexcheck.toledo import (
    lagrangian_pair_check,
    milnor_wood_check,
    root_form,
    scan_invariant_lagrangians,
    signature,
)


def test_signature_basics():
    assert signature(np.eye(4)) == 4
    assert signature(np.diag([1.0, -1.0])) == 0
    with pytest.raises(NumericalAbort):
        signature(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_signature_flip_and_direct_sum(rng):
    a = rng.standard_normal((4, 4))
    a = a + a.T + 0.5 * np.eye(4)
    b = rng.standard_normal((3, 3))
    b = b + b.T - 2.0 * np.eye(3)
    assert signature(-a) == -signature(a)
    direct = np.block([[a, np.zeros((4, 3))], [np.zeros((3, 4)), b]])
    assert signature(direct) == signature(a) + signature(b)


def test_fuchsian_standard_module_signature(fuchsian):
    ws = cohomology(fuchsian, standard_module(fuchsian))
    omega = np.array([[0.0, 1.0], [-1.0, 0.0]])
    h = ws.h1
    k = h.shape[1]
    gram = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            gram[i, j] = cup_pairing(ws, omega, h[:, i], h[:, j])
    sig = signature(0.5 * (gram + gram.T))
    assert abs(sig) == 4          # |T| = 1 = genus - 1


def test_su21_root_form(case_pipeline):
    rep, z, c, dec = case_pipeline("su21-cline")
    rr = root_form(rep, dec, dec.roots[0])
    assert rr.h1_dim == 8
    assert abs(rr.signature) == 8 and abs(rr.toledo) == 2
    assert rr.definite
    assert rr.milnor_wood_slack == 0
    assert milnor_wood_check(rr) == 0


def test_so41_root_form(case_pipeline):
    rep, z, c, dec = case_pipeline("so41-rplane")
    rr = root_form(rep, dec, dec.roots[0])
    assert rr.h1_dim == 12
    assert rr.signature == 0 and rr.toledo == 0
    assert not rr.definite
    assert rr.milnor_wood_slack == 12


def test_real_root_toledo_vanishes(models):
    # abelian representation into the diagonal torus of SL(2,R)
    m = models["sl2"]
    h = np.array([[1.0, 0.0], [0.0, -1.0]])
    from flexcheck.surface import _expm
    images = [_expm(0.7 * h), np.eye(2), np.eye(2), np.eye(2)]
    rep = surface_representation(standard_presentation(2), m, images)
    torus = subalgebra_from_matrices(m, [h])
    dec = decompose(m, torus)
    assert len(dec.roots) == 1 and dec.roots[0].classification == "real"
    rr = root_form(rep, dec, dec.roots[0])
    assert rr.toledo == 0
    assert rr.status == "ok"


def test_root_form_rejects_noncentralized_torus(fuchsian, models):
    # the Fuchsian image does not centralize the diagonal torus of sl2
    m = models["sl2"]
    h = np.array([[1.0, 0.0], [0.0, -1.0]])
    torus = subalgebra_from_matrices(m, [h])
    dec = decompose(m, torus)
    with pytest.raises(NumericalAbort):
        root_form(fuchsian, dec, dec.roots[0])


def _so41_lagrangians(case_pipeline):
    from flexcheck.catalog import splitso
    from flexcheck.scalars import Field

    rep, z, c, dec = case_pipeline("so41-rplane")
    root = dec.roots[0]
    split = splitso(4, 1, Field.REAL, 2)
    adj = adjoint_module(rep)
    mod = restricted_module(adj, root.real_basis)
    # columns of B in Hom(R^2, R^3): first column = {c2 = 0}, second = {c1 = 0}
    l1_mats, l2_mats = [], []
    for (k, l, unit), mat in zip(split.hom_index, split.hom_block):
        vec = rep.model.coords(mat)
        coef = root.real_basis.T @ vec
        resid = np.abs(root.real_basis @ coef - vec).max()
        assert resid < 1e-8
        (l1_mats if l == 0 else l2_mats).append(coef)
    return rep, root, mod, np.stack(l1_mats, axis=1), np.stack(l2_mats, axis=1)


def test_so41_lagrangian_pair(case_pipeline):
    rep, root, mod, l1, l2 = _so41_lagrangians(case_pipeline)
    omega = root.omega.imag
    assert lagrangian_pair_check(mod, omega, l1, l2)
    rr = root_form(rep, case_pipeline("so41-rplane")[3], root)
    assert rr.toledo == 0
    # mixing the two Lagrangians produces a non-isotropic subspace
    bad = l1.copy()
    bad[:, 0] = (l1[:, 0] + l2[:, 1]) / np.sqrt(2.0)
    assert np.abs(bad.T @ omega @ bad).max() > 1e-3   # genuinely non-isotropic
    assert not lagrangian_pair_check(mod, omega, bad, l2)


def test_so41_scan_finds_pair(case_pipeline, rng):
    rep, root, mod, l1, l2 = _so41_lagrangians(case_pipeline)
    found = scan_invariant_lagrangians(mod, root.omega.imag, rng)
    assert found is not None
    f1, f2 = found
    assert lagrangian_pair_check(mod, root.omega.imag, f1, f2)


def test_su21_no_lagrangian_pair(case_pipeline, rng):
    # T = 2 != 0 forbids an invariant Lagrangian pair
    rep, z, c, dec = case_pipeline("su21-cline")
    root = dec.roots[0]
    adj = adjoint_module(rep)
    mod = restricted_module(adj, root.real_basis)
    omega = root.omega.imag
    # exhaustive scan over coordinate subspace pairs
    import itertools
    m = mod.dim
    eye = np.eye(m)
    for cols in itertools.combinations(range(m), m // 2):
        rest = [j for j in range(m) if j not in cols]
        assert not lagrangian_pair_check(mod, omega, eye[:, list(cols)], eye[:, rest])
    assert scan_invariant_lagrangians(mod, omega, rng) is None


def test_sp21_second_root_is_so41_reduction(case_pipeline, rng):
    # the +-2i root of sp(2,1) carries the SO(4,1)-type structure: T = 0
    rep, z, c, dec = case_pipeline("sp21-cline")
    by_dim = {r.real_dim: r for r in dec.roots}
    assert set(by_dim) == {8, 6}
    rr6 = root_form(rep, dec, by_dim[6])
    assert rr6.signature == 0 and rr6.toledo == 0
    adj = adjoint_module(rep)
    mod = restricted_module(adj, by_dim[6].real_basis)
    found = scan_invariant_lagrangians(mod, by_dim[6].omega.imag, rng)
    assert found is not None
    # the Hom-block root is maximal: std + conj-std add up, not cancel
    rr8 = root_form(rep, dec, by_dim[8])
    assert abs(rr8.toledo) == 4 and rr8.definite


def test_gram_on_coboundaries_vanishes(case_pipeline, rng):
    rep, z, c, dec = case_pipeline("su21-cline")
    root = dec.roots[0]
    adj = adjoint_module(rep)
    mod = restricted_module(adj, root.real_basis)
    ws = cohomology(rep, mod)
    omega = root.omega.imag
    for j in range(ws.b1.shape[1]):
        for k in range(ws.z1.shape[1]):
            assert abs(cup_pairing(ws, omega, ws.b1[:, j], ws.z1[:, k])) < 1e-9


def test_root_form_rejects_invariant_vectors(models):
    # trivial representation: the root module has H^0 != 0
    m = models["su21"]
    from flexcheck.scalars import Field, realify
    z = realify(np.diag([-2j, 1j, 1j]), Field.COMPLEX).real
    torus = subalgebra_from_matrices(m, [z])
    dec = decompose(m, torus)
    rep = surface_representation(standard_presentation(2), m,
                                 [np.eye(m.realified_size)] * 4)
    with pytest.raises(NumericalAbort):
        root_form(rep, dec, dec.roots[0])


def test_classify_PN_aborts_on_degenerate_report(case_pipeline):
    from dataclasses import replace
    from flexcheck.engine import classify_PN
    rep, z, c, dec = case_pipeline("su21-cline")
    rr = root_form(rep, dec, dec.roots[0])
    degenerate = replace(rr, status="degenerate", signature=None, toledo=None)
    with pytest.raises(NumericalAbort):
        classify_PN([degenerate])


def test_root_form_invariant_under_basis_rotation(case_pipeline, rng):
    # Omega's matrix is basis dependent; signatures and T are not
    from dataclasses import replace
    rep, z, c, dec = case_pipeline("su21-cline")
    root = dec.roots[0]
    base = root_form(rep, dec, root)
    for _ in range(5):
        q, _ = np.linalg.qr(rng.standard_normal((root.real_dim, root.real_dim)))
        rotated = replace(
            root,
            real_basis=root.real_basis @ q,
            omega=q.T @ root.omega @ q,
        )
        dec_rot = replace(dec, roots=(rotated,))
        got = root_form(rep, dec_rot, rotated)
        assert got.signature == base.signature
        assert got.toledo == base.toledo
        assert got.definite == base.definite


def _tracked_circle_lift(a, period, steps=500):
    """Continuous lift of the projective/vector circle action of a matrix."""
    def raw(phi):
        v = np.array([np.cos(phi), np.sin(phi)])
        w = a @ v
        ang = np.arctan2(w[1], w[0])
        return ang % period if period < 2 * np.pi else ang

    def f(phi):
        n = max(8, int(steps * (abs(phi) / period + 1)))
        ts = np.linspace(0.0, phi, n)
        prev = raw(ts[0])
        for t in ts[1:]:
            cur = raw(t)
            while cur - prev > period / 2:
                cur -= period
            while cur - prev < -period / 2:
                cur += period
            prev = cur
        return prev

    return f


def _functional_inverse(f, period):
    def g(y):
        lo, hi = y - 3 * period, y + 3 * period
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if f(mid) < y:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)
    return g


def _circle_euler_number(rep, period):
    lifts = {}
    for idx, g in enumerate(rep.images):
        f = _tracked_circle_lift(g, period)
        lifts[(idx, 1)] = f
        lifts[(idx, -1)] = _functional_inverse(f, period)
    x0 = 0.37
    phi = x0
    for s, sign in reversed(rep.presentation.letters):
        phi = lifts[(s, sign)](phi)
    val = (phi - x0) / period
    assert abs(val - round(val)) < 1e-6
    return int(round(val))


def test_milnor_euler_number_oracle(fuchsian):
    """Rotation-number oracle, independent of the cup-product machinery.

    The projective-line Euler number must equal the surface Euler
    characteristic (the octagon group is maximal), and the vector-circle
    Euler number must equal the Toledo invariant of the standard module
    computed through Fox calculus, cup products and Meyer's formula.
    """
    e_p1 = _circle_euler_number(fuchsian, np.pi)
    assert abs(e_p1) == 2
    e_vec = _circle_euler_number(fuchsian, 2 * np.pi)
    assert 2 * e_vec == e_p1

    ws = cohomology(fuchsian, standard_module(fuchsian))
    omega = np.array([[0.0, 1.0], [-1.0, 0.0]])
    h = ws.h1
    gram = np.array([[cup_pairing(ws, omega, h[:, i], h[:, j])
                      for j in range(h.shape[1])] for i in range(h.shape[1])])
    toledo = signature(0.5 * (gram + gram.T)) // 4
    assert toledo == e_vec
