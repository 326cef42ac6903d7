"""Rank-one catalog: block embeddings, splitso decompositions, expected tables.

Base cases: a Fuchsian genus-2 group mapped either through the adjoint
SL(2,R) -> SO(2,1) into the real-plane block of o(m,1,F), or through the
Cayley transform SL(2,R) -> SU(1,1) into the complex-line block of
o(m,1,F) for F = C, H.  Expected centralizer/center dimensions come from
the classical descriptions and are compared against computed values in
the test suite.  Octonionic rows are documentation only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, ExcludedFamilyError, FlexcheckError, NumericalAbort, Tolerances
from .liealg import build_classical
from .scalars import (
    Field,
    Quaternion,
    field_units,
    imaginary_units,
    left_block,
    realified_entry_block,
)
from .surface import (
    SurfaceRepresentation,
    fuchsian_genus2,
    standard_presentation,
    surface_representation,
)

# ---------------------------------------------------------------------------
# splitso: o(m,q,F) = o(m-p,F) + o(p,q,F) + Hom_F(F^{m-p}, F^{p+q})
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitsoDecomposition:
    field: Field
    m: int
    q: int
    p: int
    compact_block: list          # realified basis of o(m-p, F), upper-left
    indefinite_block: list       # realified basis of o(p, q, F), lower-right
    hom_block: list              # realified basis of the off-diagonal block
    hom_index: list              # (row k in F^{p+q}, col l in F^{m-p}, unit) per basis element

    @property
    def dims(self) -> tuple[int, int, int]:
        return (len(self.compact_block), len(self.indefinite_block), len(self.hom_block))

    def hom_element(self, b: np.ndarray) -> np.ndarray:
        """Realified block matrix for B in F^{(p+q) x (m-p)} (component array).

        ``b`` has shape (p+q, m-p) with entries scalars of the field
        (complex numbers or Quaternion instances).
        """
        return _hom_matrix(self.field, self.m, self.q, self.p, b)


def _anti_selfadjoint_basis(fld: Field, signs: np.ndarray, offset: int, total: int):
    """Realified basis of {A : A* e + e A = 0} placed at a diagonal offset."""
    k = len(signs)
    out = []
    units = field_units(fld)
    for a in range(k):
        for b in range(a + 1, k):
            m = realified_entry_block(fld, total, offset + a, offset + b, signs[a] * units[0]) \
                - realified_entry_block(fld, total, offset + b, offset + a, signs[b] * units[0])
            out.append(m)
            for u in imaginary_units(fld):
                m = realified_entry_block(fld, total, offset + a, offset + b, _unit_scale(u, signs[a], fld)) \
                    + realified_entry_block(fld, total, offset + b, offset + a, _unit_scale(u, signs[b], fld))
                out.append(m)
    for a in range(k):
        for u in imaginary_units(fld):
            out.append(realified_entry_block(fld, total, offset + a, offset + a, u))
    return out


def _unit_scale(u, s: float, fld: Field):
    if fld is Field.COMPLEX:
        return u * s
    if fld is Field.REAL:
        return u * s
    return Quaternion(*(np.array(u.components()) * s))


def _hom_matrix(fld: Field, m: int, q: int, p: int, b) -> np.ndarray:
    """[[0, -B* e], [B, 0]] realified, blocks (m-p) + (p+q)."""
    total = m + q
    top = m - p
    e = np.concatenate([np.ones(p), -np.ones(q)])
    out = np.zeros((fld.dim * total, fld.dim * total))
    d = fld.dim
    for k in range(p + q):
        for l in range(top):
            val = b[k][l] if not isinstance(b, np.ndarray) or b.dtype == object else b[k, l]
            if fld is Field.QUATERNION:
                val = val if isinstance(val, Quaternion) else Quaternion(*val)
                conj = val.conjugate()
                neg = Quaternion(*(-np.array(conj.components()) * e[k]))
            else:
                val = complex(val) if fld is Field.COMPLEX else float(val)
                neg = -np.conj(val) * e[k] if fld is Field.COMPLEX else -val * e[k]
            r, c = top + k, l
            out[d * r : d * r + d, d * c : d * c + d] += left_block(val, fld)
            out[d * c : d * c + d, d * r : d * r + d] += left_block(neg, fld)
    return out


def splitso(m: int, q: int, fld: Field, p: int) -> SplitsoDecomposition:
    """Three-block decomposition of o(m, q, F) along an F^p x F^{m-p} split."""
    if isinstance(fld, str):
        fld = Field.parse(fld) if fld.upper() in ("R", "C", "H") else fld
    if fld == "O" or getattr(fld, "value", None) == "O":
        raise ExcludedFamilyError("octonionic splitso is excluded")
    if not (0 < p < m):
        raise FlexcheckError("splitso needs 0 < p < m")
    total = m + q
    top = m - p
    compact = _anti_selfadjoint_basis(fld, np.ones(top), 0, total)
    lower = _anti_selfadjoint_basis(
        fld, np.concatenate([np.ones(p), -np.ones(q)]), top, total)
    hom = []
    index = []
    d = fld.dim
    units = field_units(fld)
    for k in range(p + q):
        for l in range(top):
            for u in units:
                b = np.zeros((p + q, top), dtype=object)
                for kk in range(p + q):
                    for ll in range(top):
                        b[kk, ll] = Quaternion() if fld is Field.QUATERNION else 0.0
                b[k, l] = u
                hom.append(_hom_matrix(fld, m, q, p, b))
                index.append((k, l, u))
    dims = (len(compact), len(lower), len(hom))
    formula = {
        Field.REAL: lambda n: n * (n - 1) // 2,
        Field.COMPLEX: lambda n: n * n,
        Field.QUATERNION: lambda n: n * (2 * n + 1),
    }[fld]
    if sum(dims) != formula(total):
        raise NumericalAbort(
            f"splitso dims {dims} do not sum to dim o({m},{q},{fld.value}) = {formula(total)}")
    return SplitsoDecomposition(fld, m, q, p, compact, lower, hom, index)


def hom_bracket_closed_form(dec: SplitsoDecomposition, b, c):
    """Expected bracket of two hom-block elements: diag(C*eB - B*eC, CB*e - BC*e).

    b, c are (p+q) x (m-p) component arrays over the field; the return is
    the realified block-diagonal matrix of the closed form.
    """
    fld = dec.field
    p, q, m = dec.p, dec.q, dec.m
    top = m - p
    e = np.concatenate([np.ones(p), -np.ones(q)])

    if fld is Field.QUATERNION:
        def conj_t(x):
            return np.array([[x[r][s].conjugate() for r in range(len(x))]
                             for s in range(len(x[0]))], dtype=object)

        def mul(x, y):
            rows, inner, cols = len(x), len(y), len(y[0])
            out = np.empty((rows, cols), dtype=object)
            for r in range(rows):
                for s in range(cols):
                    acc = Quaternion()
                    for t in range(inner):
                        acc = acc + x[r][t] * y[t][s]
                    out[r, s] = acc
            return out

        def scale_rows(x, signs):
            return np.array([[signs[r] * x[r][s] for s in range(len(x[0]))]
                             for r in range(len(x))], dtype=object)

        bstar, cstar = conj_t(b), conj_t(c)
        # e acts on the (p+q)-index: rows of B, C and columns of B*, C*
        upper = _obj_sub(mul(cstar, scale_rows(b, e)), mul(bstar, scale_rows(c, e)))
        lower = _obj_sub(mul(c, _scale_cols(bstar, e)), mul(b, _scale_cols(cstar, e)))
        out = np.zeros((4 * (m + q), 4 * (m + q)))
        for r in range(top):
            for s in range(top):
                out[4 * r : 4 * r + 4, 4 * s : 4 * s + 4] = left_block(upper[r, s], fld)
        for r in range(p + q):
            for s in range(p + q):
                rr, ss = top + r, top + s
                out[4 * rr : 4 * rr + 4, 4 * ss : 4 * ss + 4] = left_block(lower[r, s], fld)
        return out

    b = np.asarray(b, dtype=complex if fld is Field.COMPLEX else float)
    c = np.asarray(c, dtype=complex if fld is Field.COMPLEX else float)
    emat = np.diag(e)
    upper = c.conj().T @ emat @ b - b.conj().T @ emat @ c
    lower = c @ b.conj().T @ emat - b @ c.conj().T @ emat
    total = m + q
    d = fld.dim
    out = np.zeros((d * total, d * total))
    for r in range(top):
        for s in range(top):
            out[d * r : d * r + d, d * s : d * s + d] = left_block(upper[r, s], fld)
    for r in range(p + q):
        for s in range(p + q):
            rr, ss = top + r, top + s
            out[d * rr : d * rr + d, d * ss : d * ss + d] = left_block(lower[r, s], fld)
    return out


def _obj_sub(x, y):
    rows, cols = x.shape
    out = np.empty((rows, cols), dtype=object)
    for r in range(rows):
        for s in range(cols):
            out[r, s] = x[r, s] - y[r, s]
    return out


def _scale_cols(x, signs):
    rows, cols = x.shape
    out = np.empty((rows, cols), dtype=object)
    for r in range(rows):
        for s in range(cols):
            out[r, s] = signs[s] * x[r, s]
    return out


# ---------------------------------------------------------------------------
# Catalog cases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogCase:
    name: str
    family: str                  # "so" | "su" | "sp" | "f4"
    m: int
    stabilized: str              # "rplane" | "cline"
    computable: bool
    centralizer_name: str
    centralizer_dim: int
    center_dim: int
    expected_verdict: str
    note: str = ""


def expected_table(family: str, stabilized: str, m: int) -> CatalogCase:
    """Static expectations for the centralizer, its center, and the verdict."""
    if family == "so":
        if stabilized != "rplane":
            raise FlexcheckError("so(m,1) only has the real-plane case")
        zdim = (m - 2) * (m - 3) // 2
        cdim = 1 if m == 4 else 0
        return CatalogCase(
            f"so{m}1-rplane", "so", m, "rplane", True,
            f"O({m - 2})", zdim, cdim, "flexible")
    if family == "su" and stabilized == "rplane":
        zdim = (m - 2) ** 2
        cdim = 0 if m == 2 else 1
        return CatalogCase(
            f"su{m}1-rplane", "su", m, "rplane", True,
            f"S(U(1) x U({m - 2}))", zdim, cdim, "flexible")
    if family == "su" and stabilized == "cline":
        zdim = (m - 1) ** 2
        return CatalogCase(
            f"su{m}1-cline", "su", m, "cline", True,
            f"S(U(1) x U({m - 1}))", zdim, 1, "rigid",
            note="rigid for the Fuchsian (maximal) base representation")
    if family == "sp" and stabilized == "rplane":
        k = m - 2
        zdim = 3 + k * (2 * k + 1)
        return CatalogCase(
            f"sp{m}1-rplane", "sp", m, "rplane", True,
            f"Sp(1) x Sp({m - 2})", zdim, 0, "flexible")
    if family == "sp" and stabilized == "cline":
        k = m - 1
        zdim = 1 + k * (2 * k + 1)
        return CatalogCase(
            f"sp{m}1-cline", "sp", m, "cline", True,
            f"U(1) x Sp({m - 1})", zdim, 1, "flexible")
    if family == "f4":
        if stabilized == "rplane":
            return CatalogCase(
                "f4-rplane", "f4", m, "rplane", False, "G2", 14, 0, "flexible",
                note="octonionic case documented only; not computed")
        return CatalogCase(
            "f4-cline", "f4", m, "cline", False, "Spin(6)", 15, 0, "flexible",
            note="octonionic case documented only; not computed")
    raise FlexcheckError(f"no catalog entry for {family}/{stabilized}")


def default_cases() -> list[CatalogCase]:
    """Classical cases at desk scale plus the documented octonionic rows."""
    cases = []
    for m in (3, 4):
        cases.append(expected_table("so", "rplane", m))
    for m in (2, 3, 4):
        cases.append(expected_table("su", "rplane", m))
        cases.append(expected_table("su", "cline", m))
    for m in (2, 3):
        cases.append(expected_table("sp", "rplane", m))
        cases.append(expected_table("sp", "cline", m))
    cases.append(expected_table("f4", "rplane", 2))
    cases.append(expected_table("f4", "cline", 2))
    return cases


def find_case(name: str) -> CatalogCase:
    for case in default_cases():
        if case.name == name:
            return case
    raise FlexcheckError(f"unknown catalog case {name!r}; see `flexcheck catalog`")


# ---------------------------------------------------------------------------
# Base embeddings
# ---------------------------------------------------------------------------

_SL2_BASIS = [
    np.array([[1.0, 0.0], [0.0, -1.0]]) / np.sqrt(2.0),
    np.array([[0.0, 1.0], [1.0, 0.0]]) / np.sqrt(2.0),
    np.array([[0.0, 1.0], [-1.0, 0.0]]) / np.sqrt(2.0),
]
_SL2_GRAM_INV = np.diag([1.0, 1.0, -1.0])
_CAYLEY = np.array([[1.0, -1.0j], [1.0, 1.0j]])
_CAYLEY_INV = np.linalg.inv(_CAYLEY)


def sl2_to_so21(m: np.ndarray) -> np.ndarray:
    """Adjoint image of SL(2,R) in SO(2,1), basis with trace form diag(1,1,-1)."""
    minv = np.linalg.inv(m)
    out = np.zeros((3, 3))
    for j, x in enumerate(_SL2_BASIS):
        moved = m @ x @ minv
        out[:, j] = _SL2_GRAM_INV @ np.array([np.trace(moved @ y) for y in _SL2_BASIS])
    return out


def sl2_to_su11(m: np.ndarray) -> np.ndarray:
    """Cayley conjugation SL(2,R) -> SU(1,1)."""
    return _CAYLEY @ m.astype(complex) @ _CAYLEY_INV


def embed_base(case: CatalogCase):
    """(model, embedding) for a catalog case; embedding maps SL(2,R) matrices."""
    if not case.computable:
        raise ExcludedFamilyError(f"{case.name}: {case.note}")
    m = case.m
    fld = {"so": Field.REAL, "su": Field.COMPLEX, "sp": Field.QUATERNION}[case.family]
    model = build_classical(case.family, m, 1)
    n = m + 1
    d = fld.dim

    if case.stabilized == "rplane":
        def embedding(g: np.ndarray) -> np.ndarray:
            block = sl2_to_so21(g)
            out = np.eye(d * n)
            for r in range(3):
                for c in range(3):
                    rr, cc = m - 2 + r, m - 2 + c
                    out[d * rr : d * rr + d, d * cc : d * cc + d] = \
                        block[r, c] * np.eye(d)
            return out
    else:
        if fld is Field.REAL:
            raise FlexcheckError("the complex-line case needs F = C or H")

        def embedding(g: np.ndarray) -> np.ndarray:
            h = sl2_to_su11(g)
            out = np.eye(d * n)
            for r in range(2):
                for c in range(2):
                    rr, cc = m - 1 + r, m - 1 + c
                    val = h[r, c] if fld is Field.COMPLEX else \
                        Quaternion(h[r, c].real, h[r, c].imag, 0.0, 0.0)
                    out[d * rr : d * rr + d, d * cc : d * cc + d] = left_block(val, fld)
            return out

    return model, embedding


def check_homomorphism(embedding, rng: np.random.Generator, samples: int = 8,
                       tol: float = 1e-8) -> float:
    """Residual of the homomorphism property on random SL(2,R) words."""
    worst = 0.0
    for _ in range(samples):
        x = rng.standard_normal((2, 2)) * 0.4
        x -= np.trace(x) / 2.0 * np.eye(2)
        y = rng.standard_normal((2, 2)) * 0.4
        y -= np.trace(y) / 2.0 * np.eye(2)
        from .surface import _expm
        g, h = _expm(x), _expm(y)
        lhs = embedding(g @ h)
        rhs = embedding(g) @ embedding(h)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    if worst > tol:
        raise NumericalAbort(f"embedding is not a homomorphism (residual {worst:.3e})")
    return worst


def build_case_representation(
    case: CatalogCase | str,
    genus: int = 2,
    tol: Tolerances = DEFAULT,
) -> SurfaceRepresentation:
    """Fuchsian genus-2 group composed with the case's block embedding."""
    if isinstance(case, str):
        case = find_case(case)
    if genus != 2:
        raise FlexcheckError(
            "catalog representations are built at genus 2 (octagon construction); "
            "supply explicit generator matrices for other genera")
    model, embedding = embed_base(case)
    base = fuchsian_genus2(tol)
    images = [embedding(g) for g in base.images]
    return surface_representation(standard_presentation(2), model, images, tol=tol)
