"""Exact scalars: Laurent polynomials, rational functions and one-sided Laurent series.

Everything lives over Q with a fixed, ordered list of indeterminates.  ``q`` is
always a formal variable.  The ``qc*`` variables stand for ``q^{c/2}``,
``q^{c_1/2}``, ... so that half-integer central-charge shifts stay monomial.

Rational functions are carried by sympy's sparse fraction field, which keeps
numerator and denominator reduced by a polynomial gcd after every operation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple, Union

from sympy import QQ
from sympy.polys.fields import field as _sympy_field

__all__ = [
    "VARIABLES",
    "DivisionByZero",
    "ExpansionError",
    "LaurentPoly",
    "RationalFunction",
    "Direction",
    "LaurentSeries",
    "var",
    "const",
    "normalize",
    "substitute",
    "simple_poles",
    "expand",
]

VARIABLES: Tuple[str, ...] = (
    "q", "z", "w", "z1", "z2", "w1", "w2", "a", "b", "t",
    "qc", "qc1", "qc2", "qc3",
)
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_NV = len(VARIABLES)

_FIELD, *_GENS = _sympy_field(",".join(VARIABLES), QQ)
_RING = _FIELD.ring


class DivisionByZero(ZeroDivisionError):
    pass


class ExpansionError(ArithmeticError):
    pass


def _index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise KeyError(f"unknown variable {name!r}; known: {VARIABLES}") from None


Exponent = Tuple[int, ...]


class LaurentPoly:
    """Sparse Laurent polynomial over Q in the fixed variable list."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Exponent, Union[int, Fraction]]] = None):
        clean: Dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            if len(exp) != _NV:
                raise ValueError(f"exponent vector must have length {_NV}")
            c = Fraction(c)
            if c:
                clean[tuple(exp)] = clean.get(tuple(exp), Fraction(0)) + c
                if not clean[tuple(exp)]:
                    del clean[tuple(exp)]
        self.terms = clean

    @classmethod
    def monomial(cls, coeff=1, **powers: int) -> "LaurentPoly":
        exp = [0] * _NV
        for name, e in powers.items():
            exp[_index(name)] = e
        return cls({tuple(exp): coeff})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({(0,) * _NV: c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent-polynomial inverses")
            (e, c), = self.terms.items()
            return LaurentPoly({tuple(-x * -k for x in e): Fraction(1) / c ** -k})
        result = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self, name: str) -> Tuple[int, int]:
        """(lowest, highest) exponent of ``name``; (0, 0) for the zero polynomial."""
        i = _index(name)
        if not self.terms:
            return (0, 0)
        exps = [e[i] for e in self.terms]
        return min(exps), max(exps)

    def to_rational(self) -> "RationalFunction":
        if not self.terms:
            return RationalFunction(_FIELD(0))
        low = [min(e[i] for e in self.terms) for i in range(_NV)]
        shift = [-x if x < 0 else 0 for x in low]
        poly = _RING({
            tuple(x + s for x, s in zip(e, shift)): QQ(c.numerator, c.denominator)
            for e, c in self.terms.items()
        })
        mono = _RING({tuple(shift): QQ(1)})
        return RationalFunction(_FIELD(poly) / _FIELD(mono))

    def __repr__(self):
        return f"LaurentPoly({self.to_rational()})"


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as LaurentPoly")


def _poly_to_laurent(p) -> LaurentPoly:
    return LaurentPoly({
        tuple(m): Fraction(int(c.numerator), int(c.denominator)) for m, c in p.terms()
    })


class RationalFunction:
    """Element of Q(q, z, w, ...); immutable, always reduced."""

    __slots__ = ("_f",)

    def __init__(self, f):
        self._f = f

    # construction ------------------------------------------------------
    @classmethod
    def coerce(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, LaurentPoly):
            return x.to_rational()
        if isinstance(x, Fraction):
            return cls(_FIELD(QQ(x.numerator, x.denominator)))
        if isinstance(x, int):
            return cls(_FIELD(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalFunction")

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalFunction(self._f + o._f)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalFunction(self._f - o._f)

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalFunction(self._f * o._f)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if not o._f:
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction(self._f / o._f)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __neg__(self):
        return RationalFunction(-self._f)

    def __pow__(self, k: int):
        if k < 0 and not self._f:
            raise DivisionByZero("zero to a negative power")
        return RationalFunction(self._f ** k)

    def inverse(self) -> "RationalFunction":
        return RationalFunction(_FIELD(1)) / self

    # predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._f

    def __bool__(self):
        return bool(self._f)

    def __eq__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return not (self._f - o._f)

    def __hash__(self):
        num, den = self.canonical()
        return hash((num, den))

    # views -------------------------------------------------------------
    @property
    def num(self) -> LaurentPoly:
        return self.canonical()[0]

    @property
    def den(self) -> LaurentPoly:
        return self.canonical()[1]

    def canonical(self) -> Tuple[LaurentPoly, LaurentPoly]:
        """Reduced (num, den) with den's lex-leading coefficient equal to 1."""
        numer, denom = self._f.numer, self._f.denom
        lc = denom.LC
        return _poly_to_laurent(numer.quo_ground(lc)), _poly_to_laurent(denom.quo_ground(lc))

    def variables(self) -> Tuple[str, ...]:
        used = set()
        for p in (self._f.numer, self._f.denom):
            for mon in p.monoms():
                used.update(i for i, e in enumerate(mon) if e)
        return tuple(VARIABLES[i] for i in sorted(used))

    def degree(self, name: str) -> int:
        """Degree in ``name`` of numerator minus denominator (the order at infinity)."""
        i = _index(name)
        return _deg(self._f.numer, i) - _deg(self._f.denom, i)

    def is_laurent_polynomial_in(self, name: str) -> bool:
        """True when the denominator is a monomial in ``name`` times a ``name``-free factor."""
        i = _index(name)
        exps = {m[i] for m in self._f.denom.monoms()}
        return len(exps) == 1

    def is_laurent_polynomial(self) -> bool:
        return len(self._f.denom.terms()) == 1

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent_polynomial():
            raise ValueError(f"{self} is not a Laurent polynomial")
        (mon, c), = self._f.denom.terms()
        inv = Fraction(int(c.denominator), int(c.numerator))
        out = {}
        for m, cn in self._f.numer.terms():
            out[tuple(x - y for x, y in zip(m, mon))] = Fraction(int(cn.numerator), int(cn.denominator)) * inv
        return LaurentPoly(out)

    def as_fraction(self) -> Fraction:
        if self.variables():
            raise ValueError(f"{self} is not a constant")
        c = self._f.numer.LC / self._f.denom.LC if self._f else QQ(0)
        return Fraction(int(c.numerator), int(c.denominator))

    def evaluate(self, values: Mapping[str, Union[int, Fraction]]) -> "RationalFunction":
        """Specialize some variables to rational numbers."""
        if not values:
            return self
        pairs = []
        for name, v in values.items():
            v = Fraction(v)
            pairs.append((_RING.gens[_index(name)], QQ(v.numerator, v.denominator)))
        num = self._f.numer.subs(pairs)
        den = self._f.denom.subs(pairs)
        if not den:
            raise DivisionByZero(f"denominator of {self} vanishes at {dict(values)}")
        return RationalFunction(_FIELD(num) / _FIELD(den))

    def __str__(self):
        return str(self._f)

    def __repr__(self):
        return f"RationalFunction({self._f})"


def _deg(p, i: int) -> int:
    return max((m[i] for m in p.monoms()), default=0)


def var(name: str) -> RationalFunction:
    return RationalFunction(_GENS[_index(name)])


def const(c) -> RationalFunction:
    return RationalFunction.coerce(Fraction(c) if not isinstance(c, Fraction) else c)


ZERO = RationalFunction(_FIELD(0))
ONE = RationalFunction(_FIELD(1))


def normalize(f: RationalFunction) -> RationalFunction:
    """Return ``f`` in canonical reduced form (num/den, den lex-monic)."""
    num, den = f.canonical()
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    return num.to_rational() / den.to_rational()


def from_num_den(num, den) -> RationalFunction:
    den_r = RationalFunction.coerce(den)
    if den_r.is_zero():
        raise DivisionByZero("zero denominator")
    return RationalFunction.coerce(num) / den_r


# ---------------------------------------------------------------------------
# univariate views


def _split(p, i: int) -> Dict[int, object]:
    """Group a sympy polynomial by powers of generator ``i``; coefficients are field elements."""
    groups: Dict[int, dict] = {}
    for mon, c in p.terms():
        e = mon[i]
        rest = mon[:i] + (0,) + mon[i + 1:]
        groups.setdefault(e, {})[rest] = c
    return {e: _FIELD(_RING(d)) for e, d in groups.items()}


def substitute(f: RationalFunction, name: str, expr) -> RationalFunction:
    """Compose ``f`` with ``name -> expr``."""
    i = _index(name)
    g = RationalFunction.coerce(expr)._f

    def compose(p):
        total = _FIELD(0)
        for e, c in _split(p, i).items():
            total += c * g ** e
        return total

    num, den = compose(f._f.numer), compose(f._f.denom)
    if not den:
        raise DivisionByZero(f"substituting {name} -> {g} makes the denominator of {f} vanish")
    return RationalFunction(num / den)


def substitute_many(f: RationalFunction, mapping: Mapping[str, object]) -> RationalFunction:
    """Simultaneous substitution of several variables."""
    if not mapping:
        return f
    idx = {_index(k): RationalFunction.coerce(v)._f for k, v in mapping.items()}

    def compose(p):
        total = _FIELD(0)
        for mon, c in p.terms():
            term = _FIELD(c)
            rest = list(mon)
            for i, g in idx.items():
                if mon[i]:
                    term *= g ** mon[i]
                    rest[i] = 0
            if any(rest):
                term *= _FIELD(_RING({tuple(rest): QQ(1)}))
            total += term
        return total

    num, den = compose(f._f.numer), compose(f._f.denom)
    if not den:
        raise DivisionByZero(f"substitution {dict(mapping)} makes the denominator vanish")
    return RationalFunction(num / den)


def simple_poles(f: RationalFunction, name: str):
    """Nonzero poles of ``f`` in ``name`` with their residues, as [(p, Res_p f)].

    Every denominator factor involving ``name`` must be linear and simple; a pole
    at 0 is skipped since it is invisible to the difference of the two expansions.
    """
    i = _index(name)
    num, den = f._f.numer, f._f.denom
    _, factors = den.factor_list()
    out = []
    for g, mult in factors:
        d = _deg(g, i)
        if d == 0:
            continue
        if d > 1 or mult > 1:
            raise ExpansionError(f"{f} has a pole in {name} that is not linear and simple")
        parts = _split(g, i)
        c0, c1 = parts.get(0, _FIELD(0)), parts[1]
        if not c0:
            continue
        p = RationalFunction(-c0 / c1)
        rest = RationalFunction(_FIELD(num) / (_FIELD(den) / _FIELD(g)))
        out.append((p, substitute(rest, name, p) / RationalFunction(c1)))
    return out


# ---------------------------------------------------------------------------
# series


class Direction(enum.Enum):
    AROUND_ZERO = "around_zero"
    AROUND_INFINITY = "around_infinity"

    def flip(self) -> "Direction":
        return Direction.AROUND_INFINITY if self is Direction.AROUND_ZERO else Direction.AROUND_ZERO


@dataclass(frozen=True)
class LaurentSeries:
    """Window of a one-sided Laurent expansion.

    ``coefficients`` holds every exponent of ``window``.  Exponents beyond the
    series' own end (below ``support_end`` for AROUND_ZERO, above it for
    AROUND_INFINITY) are exactly zero; the other side of the window is unknown.
    """

    variable: str
    direction: Direction
    coefficients: Dict[int, RationalFunction]
    window: Tuple[int, int]
    support_end: int

    def __getitem__(self, k: int) -> RationalFunction:
        if self.direction is Direction.AROUND_ZERO and k < self.support_end:
            return ZERO
        if self.direction is Direction.AROUND_INFINITY and k > self.support_end:
            return ZERO
        lo, hi = self.window
        if not lo <= k <= hi:
            raise IndexError(f"coefficient of {self.variable}^{k} lies outside window {self.window}")
        return self.coefficients.get(k, ZERO)

    def nonzero(self) -> Dict[int, RationalFunction]:
        return {k: c for k, c in self.coefficients.items() if not c.is_zero()}


def _expand_around_zero(num_g: Dict[int, object], den_g: Dict[int, object], hi: int):
    """Coefficients of num/den as a power series (valuation, {k: coeff}) up to x^hi."""
    dv = min(den_g)
    nv = min(num_g) if num_g else 0
    d0 = den_g[dv]
    if not d0:
        raise ExpansionError("lowest denominator coefficient is zero")
    inv_d0 = 1 / d0
    dd = {e - dv: c for e, c in den_g.items()}
    val = nv - dv
    n_terms = hi - val + 1
    if n_terms <= 0 or not num_g:
        return val, {}
    # 1/den_shifted = sum s_k x^k
    s = [inv_d0]
    for k in range(1, n_terms):
        acc = _FIELD(0)
        for j, dj in dd.items():
            if 1 <= j <= k:
                acc += dj * s[k - j]
        s.append(-inv_d0 * acc)
    out = {}
    for k in range(val, hi + 1):
        acc = _FIELD(0)
        for e, c in num_g.items():
            idx = k + dv - e
            if 0 <= idx < len(s):
                acc += c * s[idx]
        if acc:
            out[k] = acc
    return val, out


def expand(f: RationalFunction, name: str, direction: Direction, window: Tuple[int, int]) -> LaurentSeries:
    """One-sided Laurent expansion of ``f`` in ``name`` restricted to ``window``.

    AROUND_ZERO gives a series bounded below (|name| small); AROUND_INFINITY a
    series bounded above (|name| large).
    """
    i = _index(name)
    lo, hi = window
    if lo > hi:
        raise ValueError(f"empty window {window}")
    if f.is_zero():
        end = 0
        return LaurentSeries(name, direction, {k: ZERO for k in range(lo, hi + 1)}, window,
                             hi + 1 if direction is Direction.AROUND_ZERO else lo - 1)
    num_g = _split(f._f.numer, i)
    den_g = _split(f._f.denom, i)
    if direction is Direction.AROUND_ZERO:
        val, coeffs = _expand_around_zero(num_g, den_g, hi)
        end = val
    else:
        # x -> 1/y, expand around y = 0, then exponent k -> -k
        num_r = {-e: c for e, c in num_g.items()}
        den_r = {-e: c for e, c in den_g.items()}
        val, coeffs_y = _expand_around_zero(num_r, den_r, -lo)
        coeffs = {-k: c for k, c in coeffs_y.items()}
        end = -val
    stored = {k: RationalFunction(coeffs[k]) if k in coeffs else ZERO for k in range(lo, hi + 1)}
    return LaurentSeries(name, direction, stored, window, end)


def series_times_den_check(f: RationalFunction, s: LaurentSeries) -> bool:
    """Verify s*den == num on the part of the window not polluted by truncation."""
    i = _index(s.variable)
    num_g = {e: RationalFunction(c) for e, c in _split(f._f.numer, i).items()}
    den_g = {e: RationalFunction(c) for e, c in _split(f._f.denom, i).items()}
    dlo, dhi = min(den_g), max(den_g)
    lo, hi = s.window
    # valid range of product exponents k: need s[k - e] for all e in den support
    if s.direction is Direction.AROUND_ZERO:
        ks = range(lo + dhi, hi + dlo + 1)
    else:
        ks = range(lo + dhi, hi + dlo + 1)
    for k in ks:
        acc = ZERO
        for e, d in den_g.items():
            j = k - e
            if s.direction is Direction.AROUND_ZERO and j < s.support_end:
                continue
            if s.direction is Direction.AROUND_INFINITY and j > s.support_end:
                continue
            acc = acc + d * s[j]
        if acc != num_g.get(k, ZERO):
            return False
    return True
