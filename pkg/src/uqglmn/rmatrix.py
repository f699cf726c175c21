"""The spectral R-matrix of U_q[gl(m|n)] and exact checks of its properties.

R is built in two independent spectral variables; R(z/w) means build(z, w),
and the one-variable R(z) is build(z, 1).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .graded_tensor import (
    GradedMatrix,
    ParityStructure,
    embed,
    graded_kron,
    kron,
    matrix_unit,
    perm_matrix,
    plain_perm_matrix,
    theta_matrix,
    tilde_toggle,
)
from .report import Status, VerificationOutcome, matrix_outcome
from .scalar_field import ONE, RationalFunction, var

__all__ = [
    "SpectralRMatrix",
    "YBEForm",
    "build_rtilde",
    "build_r",
    "r_terms",
    "swap_slots",
    "check_pt_symmetry",
    "check_unitarity",
    "check_ybe",
    "check_ybe_all_forms",
    "check_weight_conservation",
    "composite_name",
]


@dataclass(frozen=True)
class SpectralRMatrix:
    ps: ParityStructure
    matrix: GradedMatrix
    tilde: bool
    x: RationalFunction
    y: RationalFunction

    def at(self, x, y) -> "SpectralRMatrix":
        """Same convention, rebuilt at other spectral arguments."""
        builder = build_rtilde if self.tilde else build_r
        return builder(self.ps, x, y)


def composite_name(ps: ParityStructure, k: int = 2):
    """Formatter turning a composite index into a 1-based tuple label."""
    N = ps.dim

    def name(idx: int) -> str:
        digits = []
        for _ in range(k):
            idx, d = divmod(idx, N)
            digits.append(d + 1)
        return "(" + ",".join(str(d) for d in reversed(digits)) + ")"

    return name


def _coefficients(ps: ParityStructure, x, y) -> List[Tuple[RationalFunction, int, int, int, int]]:
    """The five sums of R-tilde as (coeff, a, b, c, d) meaning coeff * E^a_b (x) E^c_d."""
    x = RationalFunction.coerce(x)
    y = RationalFunction.coerce(y)
    q = var("q")
    den = x * q - y / q
    p = ps.parities
    N = ps.dim
    terms = []
    for i in range(N):
        if i < ps.m:
            terms.append((ONE, i, i, i, i))
        else:
            terms.append(((y * q - x / q) / den, i, i, i, i))
    diag = (x - y) / den
    for i in range(N):
        for j in range(N):
            if i != j:
                terms.append((-diag if p[i] * p[j] else diag, i, i, j, j))
    for i in range(N):
        for j in range(N):
            if i < j:
                terms.append((x * (q - 1 / q) / den, j, i, i, j))
            elif i > j:
                terms.append((y * (q - 1 / q) / den, j, i, i, j))
    return terms


def r_terms(ps: ParityStructure, x, y, tilde: bool) -> List[Tuple[RationalFunction, GradedMatrix, GradedMatrix]]:
    """R as a sum of coeff * (A (x) B) over single-slot matrix units, graded tensor product.

    For R (not tilde) every matrix-unit term is dressed with the output-pair sign
    and the Koszul sign of graded_kron is undone, so that the sum reproduces the
    stored matrix entry by entry.
    """
    out = []
    for c, a, b, cc, d in _coefficients(ps, x, y):
        A, B = matrix_unit(ps, a, b), matrix_unit(ps, cc, d)
        # graded_kron(E^a_b, E^c_d) has entry at row (b, d), col (a, c) with sign (-1)^{([d]+[c])[a]}
        sign = -1 if ((ps.parity(cc) + ps.parity(d)) * ps.parity(a)) % 2 else 1
        if not tilde and ps.parity(b) * ps.parity(d):
            sign = -sign
        out.append((c * sign, A, B))
    return out


def build_rtilde(ps: ParityStructure, x=None, y=None) -> SpectralRMatrix:
    x = var("z") if x is None else RationalFunction.coerce(x)
    y = var("w") if y is None else RationalFunction.coerce(y)
    N = ps.dim
    entries = {}
    for c, a, b, cc, d in _coefficients(ps, x, y):
        key = (b * N + d, a * N + cc)
        entries[key] = entries.get(key, RationalFunction.coerce(0)) + c
    return SpectralRMatrix(ps, GradedMatrix(ps.tensor_parities(2), entries), True, x, y)


def build_r(ps: ParityStructure, x=None, y=None) -> SpectralRMatrix:
    t = build_rtilde(ps, x, y)
    return SpectralRMatrix(ps, tilde_toggle(t.matrix, ps), False, t.x, t.y)


def swap_slots(ps: ParityStructure, terms) -> GradedMatrix:
    """R_21 from the term list: A (x) B -> (-1)^{[A][B]} B (x) A."""
    M = GradedMatrix.zeros(ps.tensor_parities(2))
    for c, A, B in terms:
        s = -1 if (A.parity() or 0) * (B.parity() or 0) else 1
        M = M + graded_kron(B, A).scale(c * s)
    return M


def _terms_sum(ps, terms) -> GradedMatrix:
    M = GradedMatrix.zeros(ps.tensor_parities(2))
    for c, A, B in terms:
        M = M + graded_kron(A, B).scale(c)
    return M


def check_pt_symmetry(R: SpectralRMatrix) -> VerificationOutcome:
    """P R_12 P = R_21, with R_21 obtained independently by swapping tensor slots termwise."""
    ps = R.ps
    terms = r_terms(ps, R.x, R.y, R.tilde)
    assembled = _terms_sum(ps, terms)
    if assembled != R.matrix:
        return matrix_outcome("pt-symmetry.term-expansion", assembled, R.matrix, composite_name(ps))
    P = perm_matrix(ps)
    return matrix_outcome("pt-symmetry", P @ R.matrix @ P, swap_slots(ps, terms), composite_name(ps))


def check_unitarity(R: SpectralRMatrix, graded: bool = True) -> VerificationOutcome:
    """R_12(z/w) R_21(w/z) = 1.

    ``graded=False`` is the negative run: the same R, but R_21 formed with the
    sign-free flip.
    """
    ps = R.ps
    if graded:
        R21 = swap_slots(ps, r_terms(ps, R.y, R.x, R.tilde))
    else:
        P = plain_perm_matrix(ps)
        R21 = P @ R.at(R.y, R.x).matrix @ P
    lhs = R.matrix @ R21
    name = "unitarity" if graded else "unitarity.ungraded-flip"
    return matrix_outcome(name, lhs, GradedMatrix.identity(lhs.parities), composite_name(ps))


class YBEForm(enum.Enum):
    THETA_OPERATOR = "theta-operator"
    COMPONENT_SIGNS = "component-signs"
    TILDE_PLAIN = "tilde-plain"
    GRADED_EMBEDDING = "graded-embedding"


def _three(R: SpectralRMatrix):
    z, w = R.x, R.y
    return R.matrix, R.at(z, ONE).matrix, R.at(w, ONE).matrix


def _plain_ybe(ps, R12m, R13m, R23m) -> Tuple[GradedMatrix, GradedMatrix]:
    I = GradedMatrix.identity(ps.parities)
    P23 = kron(I, plain_perm_matrix(ps))
    A = kron(R12m, I)
    B = P23 @ kron(R13m, I) @ P23
    C = kron(I, R23m)
    return A @ B @ C, C @ B @ A


def _theta_ybe(ps, R12m, R13m, R23m, theta_ps=None):
    I = GradedMatrix.identity(ps.parities)
    P23 = kron(I, plain_perm_matrix(ps))
    T = kron(theta_matrix(theta_ps or ps), I)
    A = kron(R12m, I)
    B = P23 @ kron(R13m, I) @ P23
    C = T @ kron(I, R23m) @ T
    return A @ B @ C, C @ B @ A


def _graded_ybe(ps, R12m, R13m, R23m):
    A = embed(R12m, ps, (1, 2), 3)
    B = embed(R13m, ps, (1, 3), 3)
    C = embed(R23m, ps, (2, 3), 3)
    return A @ B @ C, C @ B @ A


def _component_ybe(ps, R12m, R13m, R23m):
    """The summation form with explicit sign factors, on components R^{a'b'}_{ab} = M[(a,b),(a',b')]."""
    N = ps.dim
    p = ps.parities

    def rows(M):
        out: Dict[Tuple[int, int], List[Tuple[int, int, object]]] = {}
        for (r, c), v in M._e.items():
            out.setdefault(divmod(r, N), []).append((*divmod(c, N), v))
        return out

    r12, r13, r23 = rows(R12m), rows(R13m), rows(R23m)
    lhs: Dict[Tuple[int, int], object] = {}
    rhs: Dict[Tuple[int, int], object] = {}
    idx = lambda a, b, c: (a * N + b) * N + c
    for (al, be), lst in r12.items():
        for al1, be1, v1 in lst:
            for ga in range(N):
                for al2, ga1, v2 in r13.get((al1, ga), ()):
                    for be2, ga2, v3 in r23.get((be1, ga1), ()):
                        s = (p[al] * p[be] + p[ga] * p[al1] + p[ga1] * p[be1]) % 2
                        v = v1 * v2 * v3
                        key = (idx(al, be, ga), idx(al2, be2, ga2))
                        lhs[key] = lhs.get(key, 0) + (-v if s else v)
    for (be, ga), lst in r23.items():
        for be1, ga1, v1 in lst:
            for al in range(N):
                for al1, ga2, v2 in r13.get((al, ga1), ()):
                    for al2, be2, v3 in r12.get((al1, be1), ()):
                        s = (p[be] * p[ga] + p[ga1] * p[al] + p[be1] * p[al1]) % 2
                        v = v1 * v2 * v3
                        key = (idx(al, be, ga), idx(al2, be2, ga2))
                        rhs[key] = rhs.get(key, 0) + (-v if s else v)
    par3 = ps.tensor_parities(3)
    return GradedMatrix._make(par3, lhs), GradedMatrix._make(par3, rhs)


def check_ybe(R: SpectralRMatrix, form: YBEForm) -> VerificationOutcome:
    """R_12(z/w) R_13(z) R_23(w) = R_23(w) R_13(z) R_12(z/w) in the requested form.

    The matrix is used as given: handing the plain form a non-tilde R is the
    wrong-convention run and is expected to fail.
    """
    ps = R.ps
    mats = _three(R)
    if form is YBEForm.TILDE_PLAIN:
        lhs, rhs = _plain_ybe(ps, *mats)
    elif form is YBEForm.THETA_OPERATOR:
        lhs, rhs = _theta_ybe(ps, *mats)
    elif form is YBEForm.GRADED_EMBEDDING:
        lhs, rhs = _graded_ybe(ps, *mats)
    else:
        lhs, rhs = _component_ybe(ps, *mats)
    return matrix_outcome(f"ybe.{form.value}", lhs, rhs, composite_name(ps, 3))


_FORM_CONVENTION = {
    YBEForm.TILDE_PLAIN: True,
    YBEForm.THETA_OPERATOR: False,
    YBEForm.COMPONENT_SIGNS: False,
    YBEForm.GRADED_EMBEDDING: False,
}


def check_ybe_all_forms(ps: ParityStructure, x=None, y=None) -> List[VerificationOutcome]:
    """Every form with the convention it is written for."""
    out = []
    for form, tilde in _FORM_CONVENTION.items():
        R = build_rtilde(ps, x, y) if tilde else build_r(ps, x, y)
        out.append(check_ybe(R, form))
    return out


def check_weight_conservation(R: SpectralRMatrix) -> VerificationOutcome:
    N = R.ps.dim
    p = R.ps.parities
    for (r, c), v in R.matrix.nonzero():
        a, b = divmod(r, N)
        a1, b1 = divmod(c, N)
        if (p[a] + p[b] + p[a1] + p[b1]) % 2:
            name = composite_name(R.ps)
            return VerificationOutcome("weight-conservation", Status.FAIL,
                                       {"row": r, "col": c, "row_index": name(r), "col_index": name(c),
                                        "value": str(v)})
    return VerificationOutcome("weight-conservation", Status.PASS)
