import numpy as np
import pytest

from flexcheck.config import ExcludedFamilyError, NumericalAbort
from flexcheck.liealg import (
    build_classical,
    center_of,
    centralizer,
    conjugation_limit,
    killing_restriction_nondegenerate,
    subalgebra_from_matrices,
    subspace_projection_residual,
)
from flexcheck.scalars import Field, realify


def test_dimensions(models):
    assert models["sl2"].dim == 3
    assert models["su21"].dim == 8
    assert models["so41"].dim == 10
    assert models["sp21"].dim == 21
    assert build_classical("spr", 2).dim == 10


def test_excluded_families():
    with pytest.raises(ExcludedFamilyError):
        build_classical("f4", 4)
    with pytest.raises(ExcludedFamilyError):
        build_classical("g2", 2)


def test_sl2_killing_signature(models):
    ev = np.linalg.eigvalsh(models["sl2"].killing)
    assert int(np.sum(ev > 0)) == 2 and int(np.sum(ev < 0)) == 1


def test_so3_killing_negative_definite(models):
    ev = np.linalg.eigvalsh(models["so3"].killing)
    assert np.all(ev < 0)


def test_killing_symmetry_and_invariance(models, rng):
    m = models["su21"]
    for _ in range(20):
        x, y, z = (rng.standard_normal(m.dim) for _ in range(3))
        assert abs(m.killing_form(x, y) - m.killing_form(y, x)) < 1e-10
        lhs = m.killing_form(m.bracket_coords(z, x), y)
        rhs = -m.killing_form(x, m.bracket_coords(z, y))
        assert abs(lhs - rhs) < 1e-9 * max(abs(lhs), 1.0)


def test_jacobi_residual(models):
    for m in models.values():
        c = m.structure
        jac = (np.einsum("ijm,mkl->ijkl", c, c)
               + np.einsum("jkm,mil->ijkl", c, c)
               + np.einsum("kim,mjl->ijkl", c, c))
        assert np.abs(jac).max() < 1e-10 * max(np.abs(c).max() ** 2, 1.0) * m.dim


def test_centralizer_su21_block(models, fuchsian, case_pipeline):
    rep, z, c, dec = case_pipeline("su21-cline")
    assert z.dim == 1
    zmat = realify(np.diag([-2j, 1j, 1j]), Field.COMPLEX).real
    resid = subspace_projection_residual(z, subalgebra_from_matrices(rep.model, [zmat]))
    assert resid < 1e-8


def test_centralizer_of_whole_algebra_is_zero(models):
    m = models["su21"]
    sub = centralizer(m, list(m.basis), kind="algebra")
    assert sub.dim == 0


def test_centralizer_so41_block(case_pipeline):
    rep, z, c, dec = case_pipeline("so41-rplane")
    assert z.dim == 1


def test_center_of_abelian_is_itself(models):
    m = models["su21"]
    t1 = realify(np.diag([1j, 1j, -2j]), Field.COMPLEX).real
    t2 = realify(np.diag([1j, -1j, 0j]), Field.COMPLEX).real
    sub = subalgebra_from_matrices(m, [t1, t2])
    assert sub.closed
    cen = center_of(sub)
    assert cen.dim == 2
    assert subspace_projection_residual(sub, cen) < 1e-9


def test_center_of_simple_is_zero(models):
    m = models["so3"]
    full = subalgebra_from_matrices(m, list(m.basis))
    assert center_of(full).dim == 0


def test_center_of_su31_cline_centralizer(case_pipeline):
    rep, z, c, dec = case_pipeline("su31-cline")
    assert z.dim == 4 and c.dim == 1


def test_center_of_idempotent(case_pipeline):
    rep, z, c, dec = case_pipeline("su21-cline")
    again = center_of(c)
    assert again.dim == c.dim
    assert subspace_projection_residual(c, again) < 1e-9
    assert subspace_projection_residual(again, c) < 1e-9


def test_killing_restriction_flags(models):
    m = models["sl2"]
    full = subalgebra_from_matrices(m, list(m.basis))
    ok, cond = killing_restriction_nondegenerate(m, full)
    assert ok and np.isfinite(cond)
    nilp = subalgebra_from_matrices(m, [np.array([[0.0, 1.0], [0.0, 0.0]])],
                                    check_closure=True)
    bad, _ = killing_restriction_nondegenerate(m, nilp)
    assert not bad


def test_killing_restriction_so41_centralizer(case_pipeline):
    rep, z, c, dec = case_pipeline("so41-rplane")
    ok, _ = killing_restriction_nondegenerate(rep.model, z)
    assert ok
    gram = z.coords @ rep.model.killing @ z.coords.T
    assert gram[0, 0] < 0  # compact direction


def test_conjugation_limit_zero_direction(rng):
    g = rng.standard_normal((3, 3))
    out = conjugation_limit(g, np.zeros((3, 3)))
    assert np.abs(out - g).max() < 1e-12


def test_conjugation_limit_triangular():
    g = np.array([[2.0, 5.0], [0.0, 0.5]])
    u = np.diag([1.0, -1.0])
    out = conjugation_limit(g, u)
    assert np.abs(out - np.diag([2.0, 0.5])).max() < 1e-12


def test_conjugation_limit_divergence():
    g = np.array([[2.0, 0.0], [1.0, 0.5]])
    u = np.diag([1.0, -1.0])
    with pytest.raises(NumericalAbort):
        conjugation_limit(g, u)


def test_conjugation_limit_idempotent(rng):
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    u = q @ np.diag([2.0, 1.0, 1.0, -1.0]) @ q.T
    g = np.eye(4) + 0.3 * rng.standard_normal((4, 4))
    try:
        once = conjugation_limit(g, u)
    except NumericalAbort:
        # strip the growing part first, then the limit must exist
        vals, vecs = np.linalg.eigh(u)
        h = vecs.T @ g @ vecs
        for i in range(4):
            for j in range(4):
                if vals[j] > vals[i] + 1e-9:
                    h[i, j] = 0.0
        once = conjugation_limit(vecs @ h @ vecs.T, u)
    twice = conjugation_limit(once, u)
    assert np.abs(once - twice).max() < 1e-10


def test_group_membership(models, fuchsian):
    m = models["sl2"]
    for g in fuchsian.images:
        assert m.group_membership_residual(g) < 1e-10
    assert m.group_membership_residual(2.0 * np.eye(2)) > 1e-3


def test_ambient_cap():
    from flexcheck.config import FlexcheckError
    with pytest.raises(FlexcheckError):
        build_classical("sp", 9, 8)        # realified 4 * 17 = 68 > 64


def test_killing_pairing_rejects_outside_span(models):
    m = models["sl2"]
    h = np.array([[1.0, 0.0], [0.0, -1.0]])
    val = m.killing_pairing(h, h)
    assert abs(val - 8.0) < 1e-10          # B(H,H) = 4 tr = 8 for sl(2,R)
    with pytest.raises(NumericalAbort):
        m.killing_pairing(np.eye(2), h)    # identity is not traceless
