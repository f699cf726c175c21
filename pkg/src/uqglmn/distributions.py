"""Truncated multi-variable formal distributions with exact coefficients.

A distribution knows three things per variable:

* ``window``: the exponent range on which equality questions are answered;
* ``box``: the range on which coefficients can actually be produced
  (window widened by the guard band; ``None`` when every exponent is known);
* ``support``: bounds outside of which the coefficient is exactly zero.

On top of that it may carry linear constraints ``sum a_v e_v = c`` satisfied by
every nonzero exponent vector (delta functions and homogeneous kernels have
one).  Coefficients are computed lazily and cached.  Asking for an exponent
that is neither provably zero nor inside the box raises; nothing outside the
box is ever taken to be zero by default.
"""
from __future__ import annotations

import itertools
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .graded_tensor import GradedMatrix
from .report import Status, VerificationOutcome
from .scalar_field import (
    VARIABLES,
    ZERO,
    Direction,
    LaurentPoly,
    RationalFunction,
    _index,
    expand,
)

__all__ = [
    "WindowError",
    "InsufficientGuard",
    "IllDefinedProduct",
    "FormalDistribution",
    "default_window",
    "delta",
    "from_laurent",
    "from_series",
    "expansion",
    "two_sided_difference",
    "delta_sum",
    "kernel_expansion",
    "dist_mul",
    "dist_add",
    "dist_equal",
]

Coefficient = Union[RationalFunction, GradedMatrix]
Interval = Tuple[Optional[int], Optional[int]]
Constraint = Tuple[Tuple[int, ...], int]


class WindowError(LookupError):
    pass


class InsufficientGuard(WindowError):
    pass


class IllDefinedProduct(ArithmeticError):
    """A coefficient of a product would be an infinite sum."""


def default_window(N: int) -> Tuple[int, int]:
    """N consecutive exponents centred on zero."""
    return (-(N // 2), N - N // 2 - 1)


def _order(names: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(set(names), key=_index))


def _is_zero(x) -> bool:
    return x.is_zero()


def _mul(x, y):
    if isinstance(x, GradedMatrix):
        if isinstance(y, GradedMatrix):
            return x @ y
        return x.scale(y)
    if isinstance(y, GradedMatrix):
        return y.scale(x)
    return x * y


def _add(x, y):
    if _is_zero(x):
        return y
    if _is_zero(y):
        return x
    return x + y


def _in(k: int, iv: Interval) -> bool:
    lo, hi = iv
    return (lo is None or k >= lo) and (hi is None or k <= hi)


def _meet(a: Interval, b: Interval) -> Interval:
    lo = a[0] if b[0] is None else b[0] if a[0] is None else max(a[0], b[0])
    hi = a[1] if b[1] is None else b[1] if a[1] is None else min(a[1], b[1])
    return lo, hi


class FormalDistribution:
    """Lazy, windowed formal distribution in an ordered tuple of variables."""

    def __init__(self, variables: Sequence[str], window: Sequence[Interval], box: Sequence[Optional[Tuple[int, int]]],
                 support: Sequence[Interval], fn: Callable[[Tuple[int, ...]], Coefficient], zero: Coefficient,
                 constraints: Sequence[Constraint] = (), label: str = ""):
        self.variables = tuple(variables)
        if list(self.variables) != list(_order(self.variables)):
            raise ValueError(f"variables must follow the global order: {self.variables}")
        k = len(self.variables)
        if not (len(window) == len(box) == len(support) == k):
            raise ValueError("per-variable data has the wrong length")
        self.window = tuple(window)
        self.box = tuple(box)
        self.support = tuple(support)
        self.constraints = tuple(constraints)
        self.zero = zero
        self.label = label
        self._fn = fn
        self._cache: Dict[Tuple[int, ...], Coefficient] = {}

    # ------------------------------------------------------------------
    @property
    def guard(self) -> Tuple[Optional[int], ...]:
        out = []
        for w, b in zip(self.window, self.box):
            if b is None or w[0] is None:
                out.append(None)
            else:
                out.append(min(w[0] - b[0], b[1] - w[1]))
        return tuple(out)

    def known_zero(self, e: Sequence[int]) -> bool:
        if not all(_in(x, s) for x, s in zip(e, self.support)):
            return True
        for coeffs, c in self.constraints:
            if sum(a * x for a, x in zip(coeffs, e)) != c:
                return True
        return False

    def in_box(self, e: Sequence[int]) -> bool:
        return all(b is None or b[0] <= x <= b[1] for x, b in zip(e, self.box))

    def coefficient(self, e: Sequence[int]) -> Coefficient:
        e = tuple(e)
        if len(e) != len(self.variables):
            raise ValueError(f"exponent {e} does not match variables {self.variables}")
        if self.known_zero(e):
            return self.zero
        if not self.in_box(e):
            raise WindowError(f"coefficient {dict(zip(self.variables, e))} of {self.label or 'distribution'} "
                              f"lies outside window+guard {self.box}")
        got = self._cache.get(e)
        if got is None:
            got = self._fn(e)
            self._cache[e] = got
        return got

    __getitem__ = coefficient

    def window_points(self) -> Iterable[Tuple[int, ...]]:
        ranges = []
        for v, (lo, hi) in zip(self.variables, self.window):
            if lo is None or hi is None:
                raise WindowError(f"distribution has no finite window in {v}")
            ranges.append(range(lo, hi + 1))
        return itertools.product(*ranges)

    # ------------------------------------------------------------------
    def lift(self, variables: Sequence[str], window: Optional[Mapping[str, Tuple[int, int]]] = None) -> "FormalDistribution":
        """View as a distribution in more variables; new ones carry exponent 0 only."""
        variables = _order(variables)
        if not set(self.variables) <= set(variables):
            raise ValueError(f"cannot drop variables {set(self.variables) - set(variables)}")
        if variables == self.variables:
            return self
        pos = [variables.index(v) for v in self.variables]
        win, box, sup = [], [], []
        for v in variables:
            if v in self.variables:
                i = self.variables.index(v)
                win.append(self.window[i])
                box.append(self.box[i])
                sup.append(self.support[i])
            else:
                win.append((window or {}).get(v, (None, None)))
                box.append(None)
                sup.append((0, 0))
        cons = []
        for coeffs, c in self.constraints:
            full = [0] * len(variables)
            for i, a in zip(pos, coeffs):
                full[i] = a
            cons.append((tuple(full), c))
        parent = self
        fn = lambda e: parent.coefficient(tuple(e[i] for i in pos))
        return FormalDistribution(variables, win, box, sup, fn, self.zero, cons, self.label)

    def rename(self, old: str, new: str) -> "FormalDistribution":
        if new in self.variables:
            raise ValueError(f"{new} already used")
        names = [new if v == old else v for v in self.variables]
        order = _order(names)
        perm = [names.index(v) for v in order]   # new position -> old position
        inv = [order.index(v) for v in names]    # old position -> new position
        parent = self
        fn = lambda e: parent.coefficient(tuple(e[inv[i]] for i in range(len(inv))))
        cons = [(tuple(cf[perm[j]] for j in range(len(perm))), c) for cf, c in self.constraints]
        return FormalDistribution(order, [self.window[p] for p in perm], [self.box[p] for p in perm],
                                  [self.support[p] for p in perm], fn, self.zero, cons, self.label)

    def scale(self, c) -> "FormalDistribution":
        c = RationalFunction.coerce(c)
        parent = self
        return FormalDistribution(self.variables, self.window, self.box, self.support,
                                  lambda e: _mul(c, parent.coefficient(e)), self.zero, self.constraints, self.label)

    def map(self, fn: Callable[[Coefficient], Coefficient], zero=None) -> "FormalDistribution":
        parent = self
        return FormalDistribution(self.variables, self.window, self.box, self.support,
                                  lambda e: fn(parent.coefficient(e)), self.zero if zero is None else zero,
                                  self.constraints, self.label)

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other: "FormalDistribution") -> "FormalDistribution":
        return dist_add(self, other)

    def __sub__(self, other: "FormalDistribution") -> "FormalDistribution":
        return dist_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, FormalDistribution):
            return dist_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def nonzero_in_window(self) -> Dict[Tuple[int, ...], Coefficient]:
        out = {}
        for e in self.window_points():
            c = self.coefficient(e)
            if not _is_zero(c):
                out[e] = c
        return out

    def __repr__(self):
        return f"FormalDistribution({self.label or '?'}, vars={self.variables}, window={self.window})"


# ---------------------------------------------------------------------------
# constructors


def _box_of(window: Tuple[int, int], guard: int) -> Tuple[int, int]:
    return (window[0] - guard, window[1] + guard)


def from_laurent(p, zero=ZERO, coefficient: Optional[Coefficient] = None,
                 variables: Optional[Iterable[str]] = None) -> FormalDistribution:
    """A Laurent polynomial (scalar or times a fixed matrix) as an exactly known distribution.

    ``variables`` selects the formal variables; any other generator (q, say)
    stays inside the coefficients.  By default every variable that occurs is formal.
    """
    if isinstance(p, RationalFunction):
        p = p.as_laurent()
    names = _order(VARIABLES[i] for e in p.terms for i, x in enumerate(e) if x)
    if variables is not None:
        keep = set(variables)
        names = tuple(v for v in names if v in keep)
    terms: Dict[Tuple[int, ...], RationalFunction] = {}
    for e, c in p.terms.items():
        key = tuple(e[_index(v)] for v in names)
        rest = tuple(0 if VARIABLES[i] in names else x for i, x in enumerate(e))
        mono = LaurentPoly({rest: c}).to_rational()
        terms[key] = terms.get(key, ZERO) + mono
    sup = []
    for i in range(len(names)):
        xs = [k[i] for k in terms] or [0]
        sup.append((min(xs), max(xs)))
    if coefficient is not None:
        zero = GradedMatrix.zeros(coefficient.parities)
        fn = lambda e: coefficient.scale(terms.get(e, ZERO))
    else:
        fn = lambda e: terms.get(e, ZERO)
    return FormalDistribution(names, [(None, None)] * len(names), [None] * len(names), sup, fn, zero,
                              label="poly")


def delta(num: str, den: str, factor=1, window: Tuple[int, int] = (-4, 3), guard: int = 4) -> FormalDistribution:
    """delta(factor * num/den) = sum_k factor^k num^k den^{-k}; ``factor`` a monomial free of num, den."""
    factor = RationalFunction.coerce(factor)
    names = _order([num, den])
    i_num, i_den = names.index(num), names.index(den)
    cons = [0, 0]
    cons[i_num], cons[i_den] = 1, 1
    win = [window, window]
    # the num exponent is k, the den exponent is -k
    fn = lambda e: factor ** e[i_num]
    return FormalDistribution(names, win, [_box_of(window, guard)] * 2, [(None, None)] * 2, fn, ZERO,
                              [(tuple(cons), 0)], label=f"delta({num}/{den})")


def _series_coeffs(f: RationalFunction, v: str, direction: Direction, box: Tuple[int, int]):
    s = expand(f, v, direction, box)
    return s.coefficients, s.support_end


def expansion(f, v: str, direction: Direction, window: Tuple[int, int], guard: int,
              parities: Optional[Sequence[int]] = None) -> FormalDistribution:
    """One-sided expansion of a scalar or matrix rational function in a single variable."""
    box = _box_of(window, guard)
    if isinstance(f, GradedMatrix):
        per: Dict[int, Dict[Tuple[int, int], RationalFunction]] = {}
        ends = []
        for (r, c), x in f.nonzero():
            coeffs, end = _series_coeffs(x, v, direction, box)
            ends.append(end)
            for k, val in coeffs.items():
                if not val.is_zero():
                    per.setdefault(k, {})[(r, c)] = val
        mats = {k: GradedMatrix(f.parities, d) for k, d in per.items()}
        zero = GradedMatrix.zeros(f.parities)
        fn = lambda e: mats.get(e[0], zero)
    else:
        f = RationalFunction.coerce(f)
        coeffs, end = _series_coeffs(f, v, direction, box)
        ends = [end]
        zero = ZERO
        fn = lambda e: coeffs.get(e[0], ZERO)
    if direction is Direction.AROUND_ZERO:
        sup = (min(ends) if ends else box[1] + 1, None)
    else:
        sup = (None, max(ends) if ends else box[0] - 1)
    return FormalDistribution((v,), [window], [box], [sup], fn, zero, label=f"expand[{direction.value}]")


def from_series(s) -> FormalDistribution:
    """Wrap a LaurentSeries; its window is its whole stored range (no guard band)."""
    if s.direction is Direction.AROUND_ZERO:
        sup = (s.support_end, None)
    else:
        sup = (None, s.support_end)
    coeffs = dict(s.coefficients)
    return FormalDistribution((s.variable,), [s.window], [s.window], [sup], lambda e: coeffs.get(e[0], ZERO), ZERO,
                              label="series")


def two_sided_difference(f, v: str, window: Tuple[int, int], guard: int) -> FormalDistribution:
    """expand(f, AroundInfinity) - expand(f, AroundZero): a sum of delta functions at the poles of f."""
    hi = expansion(f, v, Direction.AROUND_INFINITY, window, guard)
    lo = expansion(f, v, Direction.AROUND_ZERO, window, guard)
    d = dist_add(hi, -lo)
    d.support = ((None, None),)
    d.label = "two-sided"
    return d


def delta_sum(terms: Sequence[Tuple[RationalFunction, Coefficient]], v: str, window: Tuple[int, int], guard: int,
              zero: Coefficient = ZERO) -> FormalDistribution:
    """sum_p A_p delta(v/p) for nonzero points p; the coefficient of v^e is sum_p A_p p^{-e}."""
    terms = [(RationalFunction.coerce(p), A) for p, A in terms]
    box = _box_of(window, guard)

    def fn(e):
        acc = zero
        for p, A in terms:
            acc = _add(acc, _mul(p ** (-e[0]), A))
        return acc

    return FormalDistribution((v,), [window], [box], [(None, None)], fn, zero, label="delta-sum")


def kernel_expansion(f: RationalFunction, v: str, direction: Direction, other: str,
                     window: Mapping[str, Tuple[int, int]], guard: int) -> FormalDistribution:
    """Expand a two-variable kernel f(v, other) in ``v``; each coefficient must be a Laurent polynomial in ``other``.

    Scalar coefficients may still depend on further parameters such as q.
    """
    box_v = _box_of(window[v], guard)
    s = expand(f, v, direction, box_v)
    table: Dict[Tuple[int, int], RationalFunction] = {}
    degs = set()
    for k, c in s.coefficients.items():
        if c.is_zero():
            continue
        if not c.is_laurent_polynomial_in(other):
            raise IllDefinedProduct(f"coefficient of {v}^{k} in the expansion of {f} is not a Laurent polynomial in {other}")
        lp = _split_var(c, other)
        for j, cj in lp.items():
            table[(k, j)] = cj
            degs.add(k + j)
    names = _order([v, other])
    iv, io = names.index(v), names.index(other)
    cons = []
    if len(degs) == 1 and s.coefficients:
        cf = [0, 0]
        cf[iv] = cf[io] = 1
        cons.append((tuple(cf), degs.pop()))
    sup = [None, None]
    sup[iv] = (s.support_end, None) if direction is Direction.AROUND_ZERO else (None, s.support_end)
    sup[io] = (None, None)
    if cons and s.support_end is not None:
        # homogeneity turns the one-sided bound in v into the opposite bound in other
        d = cons[0][1]
        sup[io] = (None, d - s.support_end) if direction is Direction.AROUND_ZERO else (d - s.support_end, None)
    win = [None, None]
    win[iv] = window[v]
    win[io] = window.get(other, (None, None))
    box = [None, None]
    box[iv] = box_v
    box[io] = None  # every coefficient in the other variable is produced exactly

    def fn(e):
        return table.get((e[iv], e[io]), ZERO)

    return FormalDistribution(names, win, box, sup, fn, ZERO, cons, label=f"kernel[{direction.value}]")


def _split_var(c: RationalFunction, name: str) -> Dict[int, RationalFunction]:
    """Split a rational function that is Laurent in ``name`` into {exponent: coefficient}."""
    i = _index(name)
    num, den = c.canonical()
    (dexp, dcoef), = [(e, x) for e, x in _group(den, i).items()]
    out: Dict[int, RationalFunction] = {}
    for e, part in _group(num, i).items():
        out[e - dexp] = part.to_rational() / dcoef.to_rational()
    return out


def _group(p: LaurentPoly, i: int) -> Dict[int, LaurentPoly]:
    groups: Dict[int, Dict[Tuple[int, ...], object]] = {}
    for e, c in p.terms.items():
        rest = e[:i] + (0,) + e[i + 1:]
        groups.setdefault(e[i], {})[rest] = c
    return {k: LaurentPoly(v) for k, v in groups.items()}


# ---------------------------------------------------------------------------
# arithmetic


def _common_window(a: Interval, b: Interval) -> Interval:
    return _meet(a, b)


def _common_box(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return (max(a[0], b[0]), min(a[1], b[1]))


def dist_add(d1: FormalDistribution, d2: FormalDistribution) -> FormalDistribution:
    names = _order(d1.variables + d2.variables)
    a, b = d1.lift(names), d2.lift(names)
    win = [_common_window(x, y) for x, y in zip(a.window, b.window)]
    box = [_common_box(x, y) for x, y in zip(a.box, b.box)]
    sup = []
    for (l1, h1), (l2, h2) in zip(a.support, b.support):
        lo = None if l1 is None or l2 is None else min(l1, l2)
        hi = None if h1 is None or h2 is None else max(h1, h2)
        sup.append((lo, hi))
    cons = [c for c in a.constraints if c in b.constraints]

    def fn(e):
        return _add(a.coefficient(e), b.coefficient(e))

    return FormalDistribution(names, win, box, sup, fn, a.zero if not isinstance(b.zero, GradedMatrix) else b.zero,
                              cons, label="sum")


def _candidates(a: FormalDistribution, b: FormalDistribution, e: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    """All e1 with a[e1] b[e - e1] possibly nonzero; raises if there are infinitely many."""
    k = len(e)
    ivs: List[Interval] = []
    for i in range(k):
        lo2, hi2 = b.support[i]
        shifted = (None if hi2 is None else e[i] - hi2, None if lo2 is None else e[i] - lo2)
        ivs.append(_meet(a.support[i], shifted))
    # constraints on e1: a's directly, b's via e - e1
    eqs: List[Tuple[Tuple[int, ...], int]] = list(a.constraints)
    for cf, c in b.constraints:
        eqs.append((cf, sum(x * y for x, y in zip(cf, e)) - c))
    out: List[Tuple[int, ...]] = []

    def solve(assigned: Dict[int, int]):
        if len(assigned) == k:
            for cf, c in eqs:
                if sum(cf[i] * assigned[i] for i in range(k)) != c:
                    return
            out.append(tuple(assigned[i] for i in range(k)))
            return
        free = [i for i in range(k) if i not in assigned]
        # prefer a variable pinned by a constraint
        for cf, c in eqs:
            rest = [i for i in free if cf[i]]
            if len(rest) == 1 and abs(cf[rest[0]]) == 1:
                i = rest[0]
                val = (c - sum(cf[j] * assigned[j] for j in assigned)) * cf[i]
                if _in(val, ivs[i]):
                    solve({**assigned, i: val})
                return
        for i in free:
            lo, hi = ivs[i]
            if lo is not None and hi is not None:
                for val in range(lo, hi + 1):
                    solve({**assigned, i: val})
                return
        raise IllDefinedProduct(f"coefficient at {e} is an infinite sum (unbounded in {[i for i in free]})")

    solve({})
    return out


def dist_mul(d1: FormalDistribution, d2: FormalDistribution, check_window: bool = True) -> FormalDistribution:
    """Cauchy product, d1's coefficient to the left of d2's.

    With ``check_window`` every in-window coefficient is first checked to be a
    finite sum of available operand coefficients.
    """
    names = _order(d1.variables + d2.variables)
    a, b = d1.lift(names), d2.lift(names)
    win = [_common_window(x, y) for x, y in zip(a.window, b.window)]
    box = []
    for i in range(len(names)):
        bx = _common_box(a.box[i], b.box[i])
        box.append(bx)
    sup = []
    for (l1, h1), (l2, h2) in zip(a.support, b.support):
        sup.append((None if l1 is None or l2 is None else l1 + l2, None if h1 is None or h2 is None else h1 + h2))
    # A product keeps a constraint when the other factor is pinned to exponent 0 in its variables.
    cons = []
    for x, y in ((a, b), (b, a)):
        for cf, c in x.constraints:
            if all(y.support[i] == (0, 0) for i in range(len(names)) if cf[i]):
                cons.append((cf, c))
    zero = a.zero if isinstance(a.zero, GradedMatrix) else b.zero

    def fn(e):
        acc = None
        for e1 in _candidates(a, b, e):
            e2 = tuple(x - y for x, y in zip(e, e1))
            if a.known_zero(e1) or b.known_zero(e2):
                continue
            if not a.in_box(e1) or not b.in_box(e2):
                raise InsufficientGuard(f"coefficient at {dict(zip(names, e))} needs "
                                        f"{dict(zip(names, e1))} x {dict(zip(names, e2))}, outside window+guard")
            x, y = a.coefficient(e1), b.coefficient(e2)
            if _is_zero(x) or _is_zero(y):
                continue
            t = _mul(x, y)
            acc = t if acc is None else _add(acc, t)
        return zero if acc is None else acc

    out = FormalDistribution(names, win, box, sup, fn, zero, cons, label=f"({d1.label})*({d2.label})")
    if check_window and all(w[0] is not None and w[1] is not None for w in win):
        for e in out.window_points():
            if out.known_zero(e):
                continue
            for e1 in _candidates(a, b, e):
                e2 = tuple(x - y for x, y in zip(e, e1))
                if a.known_zero(e1) or b.known_zero(e2):
                    continue
                if not a.in_box(e1) or not b.in_box(e2):
                    raise InsufficientGuard(f"in-window coefficient {dict(zip(names, e))} of the product needs "
                                            f"operand coefficients outside window+guard")
    return out


def _fmt(c) -> str:
    if isinstance(c, GradedMatrix):
        return "{" + ", ".join(f"{k}: {v}" for k, v in c.nonzero()) + "}"
    return str(c)


def dist_equal(d1: FormalDistribution, d2: FormalDistribution, relation: str = "dist-equal") -> VerificationOutcome:
    """Exact coefficient-wise comparison on the common window."""
    names = _order(d1.variables + d2.variables)
    a, b = d1.lift(names), d2.lift(names)
    win = [_common_window(x, y) for x, y in zip(a.window, b.window)]
    for v, w in zip(names, win):
        if w[0] is None or w[1] is None:
            raise WindowError(f"no finite common window in {v}")
    for e in itertools.product(*[range(lo, hi + 1) for lo, hi in win]):
        x, y = a.coefficient(e), b.coefficient(e)
        if isinstance(x, GradedMatrix) or isinstance(y, GradedMatrix):
            if not isinstance(x, GradedMatrix):
                x = GradedMatrix.zeros(y.parities) if _is_zero(x) else x
            if not isinstance(y, GradedMatrix):
                y = GradedMatrix.zeros(x.parities) if _is_zero(y) else y
            same = x.first_difference(y) is None
        else:
            same = x == y
        if not same:
            return VerificationOutcome(relation, Status.FAIL, {
                "exponents": {v: k for v, k in zip(names, e)},
                "lhs": _fmt(x),
                "rhs": _fmt(y),
            })
    return VerificationOutcome(relation, Status.PASS)
