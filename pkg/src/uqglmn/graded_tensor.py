"""Z2-graded spaces, sparse matrices over Q(q, z, ...) and Koszul-signed tensor products.

Storage convention: ``M[row, col]`` with row = output index and col = input
index.  For an operator on V (x) V the composite index of (alpha, beta) is
``alpha * (m + n) + beta`` (0-based, first factor most significant).  The
matrix unit E^a_b maps v_a to v_b, so it has a single 1 at ``[b, a]``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .scalar_field import _FIELD, DivisionByZero, RationalFunction

__all__ = [
    "ParityStructure",
    "GradedMatrix",
    "SingularMatrix",
    "graded_kron",
    "kron",
    "perm_matrix",
    "plain_perm_matrix",
    "theta_matrix",
    "tilde_toggle",
    "TildeDirection",
    "embed",
    "matrix_unit",
]

_ZERO = _FIELD(0)
_ONE = _FIELD(1)


class SingularMatrix(DivisionByZero):
    pass


@dataclass(frozen=True)
class ParityStructure:
    """The graded space C^{m|n}: m even basis vectors followed by n odd ones.

    ``graded=False`` keeps the dimensions but makes every parity 0; it is the
    switch behind the ungraded negative runs.
    """

    m: int
    n: int
    graded: bool = True

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"need m >= 1 and n >= 1, got ({self.m}, {self.n})")

    @property
    def dim(self) -> int:
        return self.m + self.n

    def parity(self, i: int) -> int:
        """Parity of the 0-based basis index ``i``."""
        if not 0 <= i < self.dim:
            raise IndexError(i)
        return int(self.graded and i >= self.m)

    @property
    def parities(self) -> Tuple[int, ...]:
        return tuple(self.parity(i) for i in range(self.dim))

    def tensor_parities(self, k: int) -> Tuple[int, ...]:
        out: Tuple[int, ...] = (0,)
        for _ in range(k):
            out = tuple((a + b) % 2 for a in out for b in self.parities)
        return out

    def ungraded(self) -> "ParityStructure":
        return ParityStructure(self.m, self.n, graded=False)

    def label(self) -> str:
        return f"gl({self.m}|{self.n})" + ("" if self.graded else "[ungraded]")


class GradedMatrix:
    """Square sparse matrix with a parity on each index.

    Entries are kept as raw field elements internally; ``entry`` hands out
    ``RationalFunction`` values.
    """

    __slots__ = ("dim", "parities", "_e")

    def __init__(self, parities: Sequence[int], entries=None, _raw: bool = False):
        self.parities = tuple(parities)
        self.dim = len(self.parities)
        e: Dict[Tuple[int, int], object] = {}
        if entries:
            for (r, c), x in entries.items():
                if not (0 <= r < self.dim and 0 <= c < self.dim):
                    raise IndexError((r, c))
                v = x if _raw else _raw_of(x)
                if v:
                    e[(r, c)] = v
        self._e = e

    @classmethod
    def _make(cls, parities, raw: Dict[Tuple[int, int], object]) -> "GradedMatrix":
        obj = cls.__new__(cls)
        obj.parities = tuple(parities)
        obj.dim = len(obj.parities)
        obj._e = {k: v for k, v in raw.items() if v}
        return obj

    # constructors ------------------------------------------------------
    @classmethod
    def zeros(cls, parities) -> "GradedMatrix":
        return cls._make(parities, {})

    @classmethod
    def identity(cls, parities) -> "GradedMatrix":
        return cls._make(parities, {(i, i): _ONE for i in range(len(parities))})

    @classmethod
    def from_rows(cls, rows, parities) -> "GradedMatrix":
        return cls(parities, {(r, c): x for r, row in enumerate(rows) for c, x in enumerate(row)})

    @classmethod
    def diagonal(cls, values, parities) -> "GradedMatrix":
        return cls(parities, {(i, i): v for i, v in enumerate(values)})

    # access ------------------------------------------------------------
    def entry(self, r: int, c: int) -> RationalFunction:
        return RationalFunction(self._e.get((r, c), _ZERO))

    __getitem__ = lambda self, rc: self.entry(*rc)

    def nonzero(self) -> Iterator[Tuple[Tuple[int, int], RationalFunction]]:
        for k in sorted(self._e):
            yield k, RationalFunction(self._e[k])

    def nnz(self) -> int:
        return len(self._e)

    def to_rows(self) -> List[List[RationalFunction]]:
        return [[self.entry(r, c) for c in range(self.dim)] for r in range(self.dim)]

    def entry_parity(self, r: int, c: int) -> int:
        return (self.parities[r] + self.parities[c]) % 2

    def parity(self) -> Optional[int]:
        """Common parity of all nonzero entries, None when inhomogeneous (0 for the zero matrix)."""
        ps = {self.entry_parity(r, c) for (r, c) in self._e}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    # arithmetic --------------------------------------------------------
    def _check(self, other: "GradedMatrix"):
        if self.parities != other.parities:
            raise ValueError("matrices live on different graded spaces")

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        self._check(other)
        out = dict(self._e)
        for k, v in other._e.items():
            out[k] = out.get(k, _ZERO) + v
        return GradedMatrix._make(self.parities, out)

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        return self + (-other)

    def __neg__(self) -> "GradedMatrix":
        return GradedMatrix._make(self.parities, {k: -v for k, v in self._e.items()})

    def scale(self, c) -> "GradedMatrix":
        cr = _raw_of(c)
        if not cr:
            return GradedMatrix.zeros(self.parities)
        return GradedMatrix._make(self.parities, {k: cr * v for k, v in self._e.items()})

    def __mul__(self, c) -> "GradedMatrix":
        if isinstance(c, GradedMatrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        self._check(other)
        rows: Dict[int, List[Tuple[int, object]]] = {}
        for (r, c), v in other._e.items():
            rows.setdefault(r, []).append((c, v))
        out: Dict[Tuple[int, int], object] = {}
        for (i, k), a in self._e.items():
            for j, b in rows.get(k, ()):
                key = (i, j)
                out[key] = out.get(key, _ZERO) + a * b
        return GradedMatrix._make(self.parities, out)

    def is_zero(self) -> bool:
        return not self._e

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return self.parities == other.parities and self.first_difference(other) is None

    __hash__ = None

    def first_difference(self, other: "GradedMatrix") -> Optional[Tuple[int, int, RationalFunction, RationalFunction]]:
        """(row, col, self entry, other entry) at the first mismatch in row-major order."""
        self._check(other)
        for k in sorted(set(self._e) | set(other._e)):
            a, b = self._e.get(k, _ZERO), other._e.get(k, _ZERO)
            if a != b:
                return k[0], k[1], RationalFunction(a), RationalFunction(b)
        return None

    def map(self, fn: Callable[[RationalFunction], RationalFunction]) -> "GradedMatrix":
        return GradedMatrix(self.parities, {k: fn(RationalFunction(v)) for k, v in self._e.items()})

    def specialize(self, values) -> "GradedMatrix":
        return self.map(lambda f: f.evaluate(values))

    def transpose(self) -> "GradedMatrix":
        return GradedMatrix._make(self.parities, {(c, r): v for (r, c), v in self._e.items()})

    def inverse(self) -> "GradedMatrix":
        """Gauss-Jordan inverse over the coefficient field."""
        n = self.dim
        rows: List[Dict[int, object]] = [dict() for _ in range(n)]
        for (r, c), v in self._e.items():
            rows[r][c] = v
        inv: List[Dict[int, object]] = [{i: _ONE} for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if rows[r].get(col)), None)
            if piv is None:
                raise SingularMatrix(f"matrix is singular (no pivot in column {col})")
            rows[col], rows[piv] = rows[piv], rows[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            p = rows[col][col]
            pi = 1 / p
            rows[col] = {k: v * pi for k, v in rows[col].items()}
            inv[col] = {k: v * pi for k, v in inv[col].items()}
            for r in range(n):
                if r == col:
                    continue
                f = rows[r].get(col)
                if not f:
                    continue
                for k, v in rows[col].items():
                    x = rows[r].get(k, _ZERO) - f * v
                    if x:
                        rows[r][k] = x
                    else:
                        rows[r].pop(k, None)
                for k, v in inv[col].items():
                    x = inv[r].get(k, _ZERO) - f * v
                    if x:
                        inv[r][k] = x
                    else:
                        inv[r].pop(k, None)
        return GradedMatrix._make(self.parities, {(r, c): v for r in range(n) for c, v in inv[r].items()})

    def __repr__(self):
        body = ", ".join(f"{k}: {RationalFunction(v)}" for k, v in sorted(self._e.items()))
        return f"GradedMatrix(dim={self.dim}, {{{body}}})"


def _raw_of(x):
    if isinstance(x, RationalFunction):
        return x._f
    if isinstance(x, int):
        return _FIELD(x)
    return RationalFunction.coerce(x)._f


def matrix_unit(ps: ParityStructure, a: int, b: int) -> GradedMatrix:
    """E^a_b (0-based): maps v_a to v_b."""
    return GradedMatrix._make(ps.parities, {(b, a): _ONE})


def _tensor_parities(pa, pb):
    return tuple((x + y) % 2 for x in pa for y in pb)


def graded_kron(A: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    """Tensor product obeying (A (x) B)(v_j (x) v_l) = (-1)^{[B][j]} A v_j (x) B v_l.

    Entry-level form: [(i,k),(j,l)] = A[i,j] B[k,l] (-1)^{([k]+[l])[j]}, which
    also covers B with mixed-parity entries.
    """
    nb = B.dim
    pa, pb = A.parities, B.parities
    out = {}
    for (i, j), a in A._e.items():
        for (k, l), b in B._e.items():
            v = a * b
            if (pb[k] + pb[l]) % 2 and pa[j]:
                v = -v
            out[(i * nb + k, j * nb + l)] = v
    return GradedMatrix._make(_tensor_parities(pa, pb), out)


def kron(A: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    """Ordinary Kronecker product (no Koszul signs)."""
    nb = B.dim
    out = {}
    for (i, j), a in A._e.items():
        for (k, l), b in B._e.items():
            out[(i * nb + k, j * nb + l)] = a * b
    return GradedMatrix._make(_tensor_parities(A.parities, B.parities), out)


def perm_matrix(ps: ParityStructure) -> GradedMatrix:
    """Graded flip: v_a (x) v_b -> (-1)^{[a][b]} v_b (x) v_a."""
    N = ps.dim
    p = ps.parities
    out = {}
    for a in range(N):
        for b in range(N):
            out[(b * N + a, a * N + b)] = _FIELD(-1) if p[a] * p[b] else _ONE
    return GradedMatrix._make(ps.tensor_parities(2), out)


def plain_perm_matrix(ps: ParityStructure) -> GradedMatrix:
    """Flip without signs."""
    N = ps.dim
    return GradedMatrix._make(ps.tensor_parities(2),
                              {(b * N + a, a * N + b): _ONE for a in range(N) for b in range(N)})


def theta_matrix(ps: ParityStructure) -> GradedMatrix:
    """diag((-1)^{[a][b]}) on V (x) V."""
    N = ps.dim
    p = ps.parities
    return GradedMatrix._make(ps.tensor_parities(2), {
        (a * N + b, a * N + b): (_FIELD(-1) if p[a] * p[b] else _ONE) for a in range(N) for b in range(N)
    })


class TildeDirection(enum.Enum):
    TO_TILDE = "to_tilde"
    FROM_TILDE = "from_tilde"


def tilde_toggle(R: GradedMatrix, ps: ParityStructure, direction: TildeDirection = TildeDirection.TO_TILDE) -> GradedMatrix:
    """Multiply row (a, b) by (-1)^{[a][b]}.

    The sign depends only on the lower (output) pair, so both directions are
    the same involution; ``direction`` is kept for readability at call sites.
    """
    N = ps.dim
    p = ps.parities
    out = {}
    for (r, c), v in R._e.items():
        a, b = divmod(r, N)
        out[(r, c)] = -v if p[a] * p[b] else v
    return GradedMatrix._make(R.parities, out)


def embed(A: GradedMatrix, ps: ParityStructure, slots: Tuple[int, ...], total: int) -> GradedMatrix:
    """Place A (acting on one slot, or on two slots given in increasing order) into V^{(x) total}.

    Slots are 1-based.  Non-adjacent pairs are reached by conjugating with
    graded flips of neighbouring slots.
    """
    if any(not 1 <= s <= total for s in slots) or list(slots) != sorted(set(slots)) or len(slots) not in (1, 2):
        raise ValueError(f"bad slots {slots} for {total} tensor factors")
    I1 = GradedMatrix.identity(ps.parities)

    def pad(M: GradedMatrix, first: int, width: int) -> GradedMatrix:
        out = M
        for _ in range(first - 1):
            out = graded_kron(I1, out)
        for _ in range(total - (first + width - 1)):
            out = graded_kron(out, I1)
        return out

    if len(slots) == 1:
        return pad(A, slots[0], 1)
    s, t = slots
    if t == s + 1:
        return pad(A, s, 2)
    M = pad(A, s, 2)
    # move the second leg from slot s+1 to slot t one flip at a time
    flips = [pad(perm_matrix(ps), k, 2) for k in range(s + 1, t)]
    for F in flips:
        M = F @ M @ F
    return M
