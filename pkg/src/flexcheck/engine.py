"""P/N classification, the balanced criterion as LP feasibility, verdicts.

The center of the centralizer is balanced when 0 lies in the interior of
conv(Im P) + span(Re N, Im N) inside its dual.  Operationally: quotient
by the span of the N-vectors, then ask whether the projected P-vectors
positively span the quotient, i.e. they span it linearly and some
combination with all weights >= 1 sums to zero.  The weights certify
success; a functional that is nonnegative on every projected P-vector
certifies failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, NumericalAbort, Tolerances
from .liealg import center_of, centralizer, killing_restriction_nondegenerate
from .linalg import nullspace, orthonormal_columns, rank
from .roots import IMAGINARY, TorusRootDecomposition, decompose
from .surface import SurfaceRepresentation, adjoint_module, cohomology
from .toledo import RootFormReport, root_form


@dataclass(frozen=True)
class BalanceProblem:
    dim: int                                  # dimension of c*
    p_vectors: tuple[np.ndarray, ...]         # Im(lambda) for definite imaginary roots
    n_vectors: tuple[np.ndarray, ...]         # Re/Im parts of all other roots


@dataclass(frozen=True)
class BalanceResult:
    balanced: bool
    multipliers: np.ndarray | None            # weights >= 1 on P-vectors (success)
    separating: np.ndarray | None             # functional >= 0 on projected P (failure)
    quotient_dim: int

    def certificate(self) -> dict:
        if self.balanced:
            mult = None if self.multipliers is None else [float(x) for x in self.multipliers]
            return {"kind": "multipliers", "multipliers": mult}
        return {"kind": "separating_functional",
                "functional": [float(x) for x in self.separating]}


def _phase1(a: np.ndarray, b: np.ndarray, tol: float = 1e-11):
    """Phase-1 simplex for {x >= 0 : a x = b}.

    Returns (feasible, x, farkas_y); on infeasibility y satisfies
    y^T a <= 0 and y^T b > 0.
    """
    m, n = a.shape
    a = a.copy()
    b = b.copy()
    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0
    tab = np.hstack([a, np.eye(m)])
    cost = np.concatenate([np.zeros(n), np.ones(m)])
    basis = list(range(n, n + m))
    x_b = b.copy()

    for _ in range(2000):
        y = np.linalg.solve(tab[:, basis].T, cost[basis])
        reduced = cost - y @ tab
        enter = -1
        for j in range(n + m):                  # Bland's rule
            if j not in basis and reduced[j] < -tol:
                enter = j
                break
        if enter < 0:
            break
        d = np.linalg.solve(tab[:, basis], tab[:, enter])
        ratios = [(x_b[i] / d[i], basis[i], i) for i in range(m) if d[i] > tol]
        if not ratios:
            raise NumericalAbort("phase-1 simplex is unbounded; numerical trouble")
        _, _, leave = min(ratios, key=lambda t: (t[0], t[1]))
        basis[leave] = enter
        x_b = np.linalg.solve(tab[:, basis], b)
    else:
        raise NumericalAbort("phase-1 simplex did not terminate")

    objective = float(cost[basis] @ x_b)
    x = np.zeros(n + m)
    x[basis] = x_b
    if objective <= 1e-9 * max(1.0, float(np.abs(b).max(initial=0.0))):
        return True, x[:n], None
    y = np.linalg.solve(tab[:, basis].T, cost[basis])
    y[flip] *= -1.0
    return False, None, y


def balanced(problem: BalanceProblem, tol: Tolerances = DEFAULT) -> BalanceResult:
    """Decide the interior-point criterion with a certificate."""
    r = problem.dim
    if r == 0:
        return BalanceResult(True, None, None, 0)
    nmat = (np.stack(problem.n_vectors, axis=1)
            if problem.n_vectors else np.zeros((r, 0)))
    span_n = orthonormal_columns(nmat, tol.rank)
    k = r - span_n.shape[1]
    if k == 0:
        return BalanceResult(True, None, None, 0)
    if span_n.shape[1]:
        u = nullspace(span_n.T, tol.rank)       # orthonormal basis of the quotient model
    else:
        u = np.eye(r)
    proj = [u.T @ p for p in problem.p_vectors]
    if not proj:
        return BalanceResult(False, None, u[:, 0], k)
    pmat = np.stack(proj, axis=1)               # (k, |P|)
    if rank(pmat, tol.rank) < k:
        compl = nullspace(pmat.T, tol.rank)
        return BalanceResult(False, None, u @ compl[:, 0], k)
    feasible, nu, y = _phase1(pmat, -pmat.sum(axis=1))
    if feasible:
        mu = nu + 1.0
        resid = np.abs(pmat @ mu).max(initial=0.0)
        scale = max(float(np.abs(pmat).max(initial=0.0)), 1.0)
        if resid > 1e-7 * scale * max(float(mu.max(initial=1.0)), 1.0):
            raise NumericalAbort(f"balanced certificate fails to verify ({resid:.3e})")
        return BalanceResult(True, mu, None, k)
    f = u @ (-y)
    worst = min(float((-y) @ p) for p in proj)
    if worst < -1e-9 * max(float(np.abs(pmat).max(initial=0.0)), 1.0):
        raise NumericalAbort("separating functional fails to verify")
    return BalanceResult(False, None, f, k)


def classify_PN(
    reports: list[RootFormReport],
    tol: Tolerances = DEFAULT,
) -> tuple[list[RootFormReport], list[np.ndarray], BalanceProblem]:
    """Split roots into P (definite imaginary, T > 0 representative) and N.

    Returns the P reports (with representatives re-selected so the form is
    positive definite), the value tuples of every root in N, and the
    assembled balance problem.
    """
    for rep in reports:
        if rep.status != "ok":
            raise NumericalAbort(
                "a root form is numerically indefinite; P-membership is uncertain")
    p_reports: list[RootFormReport] = []
    n_values: list[np.ndarray] = []
    p_vectors: list[np.ndarray] = []
    n_vectors: list[np.ndarray] = []
    dim = None
    for rep in reports:
        root = rep.root
        dim = len(root.values)
        orbit = [root.values, -root.values]
        if root.classification == "mixed":
            orbit += [root.values.conj(), -root.values.conj()]
        if rep.classification == IMAGINARY and rep.definite:
            flipped = rep
            if rep.toledo < 0:
                flipped = _flip_representative(rep)
            p_reports.append(flipped)
            p_vectors.append(flipped.root.values.imag.copy())
        else:
            seen = set()
            for v in orbit:
                key = tuple(np.round(v, 9))
                if key in seen:
                    continue
                seen.add(key)
                n_values.append(v)
                for part in (v.real, v.imag):
                    if np.abs(part).max(initial=0.0) > tol.cluster:
                        n_vectors.append(part.copy())
    problem = BalanceProblem(dim or 0, tuple(p_vectors), tuple(n_vectors))
    return p_reports, n_values, problem


def _flip_representative(rep: RootFormReport) -> RootFormReport:
    """Replace lambda by -lambda: Omega and the form change sign."""
    from dataclasses import replace

    root = rep.root
    swap = {"+l": "-l", "-l": "+l", "+c": "-c", "-c": "+c"}
    flipped_root = replace(
        root,
        values=-root.values,
        t_vector=-root.t_vector,
        omega=-root.omega,
        spaces={swap[k]: v for k, v in root.spaces.items()},
    )
    return replace(
        rep,
        root=flipped_root,
        gram=None if rep.gram is None else -rep.gram,
        signature=None if rep.signature is None else -rep.signature,
        toledo=None if rep.toledo is None else -rep.toledo,
    )


def smooth_point_check(
    decomp: TorusRootDecomposition,
    components: dict,
    tol: Tolerances = DEFAULT,
) -> bool:
    """Do the roots carrying a nonzero component span c* tensor C?

    ``components`` maps representative roots to cohomology-class pieces
    (anything with a norm); zero pieces are dropped.
    """
    r = decomp.torus.dim
    if r == 0:
        return True
    rows = []
    for root, piece in components.items():
        if np.linalg.norm(np.asarray(piece)) > tol.cluster:
            rows.append(root.values)
    if not rows:
        return False
    mat = np.stack(rows, axis=0)
    return rank(mat, tol.rank) == r


def virtual_dimension(genus: int, dim_g: int, dim_radical: int = 0) -> int:
    """(1 - chi) dim(G) + dim(radical) for a genus-g surface group."""
    chi = 2 - 2 * genus
    return (1 - chi) * dim_g + dim_radical


@dataclass(frozen=True)
class SmoothnessReport:
    z1_dim: int
    vdim: int
    h0_dim: int
    h2_dim: int
    smooth: bool


def smoothness_of_rep(rep: SurfaceRepresentation, tol: Tolerances = DEFAULT) -> SmoothnessReport:
    """Compare dim Z^1 of the adjoint module with the virtual dimension."""
    ws = cohomology(rep, adjoint_module(rep), tol)
    vdim = virtual_dimension(rep.presentation.genus, rep.model.dim)
    z1 = ws.z1.shape[1]
    return SmoothnessReport(z1, vdim, ws.h0_dim, ws.h2_dim, z1 == vdim)


@dataclass(frozen=True)
class RootSummary:
    values: list                       # complex values on the torus basis
    classification: str
    real_dim: int
    h1_dim: int
    signature: int | None
    toledo: int | None
    definite: bool
    milnor_wood_slack: int | None
    in_P: bool


@dataclass(frozen=True)
class FlexibilityReport:
    verdict: str                                   # "flexible" | "rigid" | "inconclusive"
    centralizer_dim: int
    reductive: bool
    reductive_condition: float
    center_dim: int
    roots: tuple[RootSummary, ...]
    balance: BalanceResult | None
    genus: int
    genus_threshold: int
    caveats: tuple[str, ...]
    message: str
    decomposition: TorusRootDecomposition | None = field(repr=False, default=None)
    p_reports: tuple = field(repr=False, default=())


TUBE_TYPE_MESSAGE = (
    "rigid: some maximal symplectic root representation persists; the Zariski "
    "closure acts transitively on a tube type Hermitian symmetric space")


def verdict(rep: SurfaceRepresentation, tol: Tolerances = DEFAULT) -> FlexibilityReport:
    """Full pipeline: centralizer, center, roots, P/N, balanced, verdict."""
    model = rep.model
    genus = rep.presentation.genus
    threshold = 2 * model.dim ** 2
    caveats = []
    if genus < threshold:
        caveats.append(
            f"genus {genus} is below the theorem threshold 2 dim(G)^2 = {threshold}; "
            "the criterion is evaluated anyway")

    z = centralizer(model, rep.images, tol, kind="group")
    reductive, cond = killing_restriction_nondegenerate(model, z, tol)
    if not reductive:
        return FlexibilityReport(
            verdict="inconclusive",
            centralizer_dim=z.dim, reductive=False, reductive_condition=cond,
            center_dim=-1, roots=(), balance=None, genus=genus,
            genus_threshold=threshold, caveats=tuple(caveats),
            message=("inconclusive: the Killing form degenerates on the centralizer, "
                     "so the Zariski closure is likely non-reductive; apply "
                     "conjugation_limit with a suitable direction and retry"))

    c = center_of(z, tol)
    decomp = decompose(model, c, tol)
    reports = [root_form(rep, decomp, r, tol) for r in decomp.roots]
    p_reports, n_values, problem = classify_PN(reports, tol)
    result = balanced(problem, tol)

    summaries = []
    for rr in _aligned(reports, p_reports):
        summaries.append(RootSummary(
            values=[complex(v) for v in rr.root.values],
            classification=rr.classification,
            real_dim=rr.module_dim,
            h1_dim=rr.h1_dim,
            signature=rr.signature,
            toledo=rr.toledo,
            definite=rr.definite,
            milnor_wood_slack=rr.milnor_wood_slack,
            in_P=any(rr is pr for pr in p_reports),
        ))

    flexible = result.balanced
    return FlexibilityReport(
        verdict="flexible" if flexible else "rigid",
        centralizer_dim=z.dim, reductive=True, reductive_condition=cond,
        center_dim=c.dim, roots=tuple(summaries), balance=result,
        genus=genus, genus_threshold=threshold, caveats=tuple(caveats),
        message="flexible: the center of the centralizer is balanced"
        if flexible else TUBE_TYPE_MESSAGE,
        decomposition=decomp, p_reports=tuple(p_reports))


def _aligned(reports, p_reports):
    """Reports with P-members replaced by their re-selected versions."""
    by_values = {tuple(np.round(pr.root.values, 9)): pr for pr in p_reports}
    out = []
    for rr in reports:
        key_plus = tuple(np.round(rr.root.values, 9))
        key_minus = tuple(np.round(-rr.root.values, 9))
        out.append(by_values.get(key_plus) or by_values.get(key_minus) or rr)
    return out
