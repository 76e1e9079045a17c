"""Exact coefficients.

Gaussian rationals, and Laurent polynomials over them in the three formal
symbols ``a`` (deformation parameter), ``alpha`` and ``beta`` (character
parameters).  Only ``a`` and ``beta`` may carry negative exponents.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from typing import Iterable, Mapping, Union

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    Rational = Fraction

SYMBOLS = ("a", "alpha", "beta")
SYMBOL_INDEX = {name: i for i, name in enumerate(SYMBOLS)}
LAURENT_SYMBOLS = frozenset({"a", "beta"})

# exponents live in a native signed machine integer
EXP_MAX = sys.maxsize
EXP_MIN = -sys.maxsize - 1

Exp = tuple[int, int, int]


class PoleError(ZeroDivisionError):
    """A symbol with a negative power was evaluated at zero."""


class NotInvertible(ArithmeticError):
    pass


RATIONAL_TYPES = (int, Fraction, Rational)


def _frac(value):
    if type(value) is Rational:
        return value
    if isinstance(value, (int, Fraction, str)) and not isinstance(value, bool):
        return Rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class GaussRational:
    """``re + im*i`` with both parts exact rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRational):
            if im != 0:
                raise TypeError("GaussRational real part given twice")
            self.re, self.im = re.re, re.im
            return
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def _make(cls, re, im) -> "GaussRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussRational":
        if isinstance(value, GaussRational):
            return value
        return cls(value)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, RATIONAL_TYPES):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __add__(self, other):
        other = GaussRational.coerce(other)
        return GaussRational._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussRational.coerce(other)
        return GaussRational._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussRational.coerce(other) - self

    def __neg__(self):
        return GaussRational._make(-self.re, -self.im)

    def __mul__(self, other):
        other = GaussRational.coerce(other)
        if not self.im and not other.im:
            return GaussRational._make(self.re * other.re, self.im)
        return GaussRational._make(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * GaussRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE_Q
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "GaussRational":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("GaussRational division by zero")
        return GaussRational._make(self.re / norm, -self.im / norm)

    def conjugate(self) -> "GaussRational":
        return GaussRational._make(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self) -> str:
        return format_number(self)


ZERO_Q = GaussRational._make(Rational(0), Rational(0))
ONE_Q = GaussRational._make(Rational(1), Rational(0))
I_UNIT = GaussRational._make(Rational(0), Rational(1))


def _check_exp(exp: Exp) -> Exp:
    for e in exp:
        if e > EXP_MAX or e < EXP_MIN:
            raise OverflowError(f"exponent {e} exceeds the native integer range")
    if exp[1] < 0:
        raise ValueError("alpha cannot carry a negative exponent")
    return exp


ScalarLike = Union["Scalar", GaussRational, int, Fraction]


class Scalar:
    """Laurent polynomial in (a, alpha, beta) with Gaussian-rational coefficients.

    Immutable.  ``terms`` maps exponent triples to nonzero coefficients, so two
    scalars are equal exactly when their term maps are.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, value: ScalarLike | Mapping[Exp, object] = 0):
        if isinstance(value, Scalar):
            self._terms = value._terms
        elif isinstance(value, Mapping):
            terms = {}
            for exp, coeff in value.items():
                coeff = GaussRational.coerce(coeff)
                if coeff:
                    exp = _check_exp(tuple(int(e) for e in exp))
                    terms[exp] = terms.get(exp, ZERO_Q) + coeff
            self._terms = {e: c for e, c in terms.items() if c}
        else:
            coeff = GaussRational.coerce(value)
            self._terms = {(0, 0, 0): coeff} if coeff else {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Scalar":
        obj = object.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value: ScalarLike) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return cls(value)

    @classmethod
    def symbol(cls, name: str, exp: int = 1) -> "Scalar":
        exps = [0, 0, 0]
        exps[SYMBOL_INDEX[name]] = exp
        return cls._raw({_check_exp(tuple(exps)): ONE_Q})

    @classmethod
    def monomial(cls, coeff, exp: Exp) -> "Scalar":
        return cls({tuple(exp): coeff})

    # -- inspection ----------------------------------------------------

    @property
    def terms(self) -> dict[Exp, GaussRational]:
        return dict(self._terms)

    def items(self):
        """Terms in canonical (descending graded-lex) order."""
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0, 0, 0) in self._terms)

    def constant_value(self) -> GaussRational | None:
        if not self._terms:
            return ZERO_Q
        if self.is_constant():
            return self._terms[(0, 0, 0)]
        return None

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def min_exponent(self, name: str) -> int:
        idx = SYMBOL_INDEX[name]
        return min((e[idx] for e in self._terms), default=0)

    # -- arithmetic ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self._terms == other._terms
        if isinstance(other, RATIONAL_TYPES + (GaussRational,)):
            return self._terms == Scalar(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, Scalar):
            if not isinstance(other, RATIONAL_TYPES + (GaussRational,)):
                return NotImplemented
            other = Scalar(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        terms = dict(self._terms)
        for exp, c in other._terms.items():
            s = terms.get(exp)
            if s is None:
                terms[exp] = c
            else:
                s = s + c
                if s:
                    terms[exp] = s
                else:
                    del terms[exp]
        return Scalar._raw(terms)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if not isinstance(other, RATIONAL_TYPES + (GaussRational,)):
                return NotImplemented
            other = Scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, RATIONAL_TYPES + (GaussRational,)):
                c = GaussRational.coerce(other)
                if not c:
                    return ZERO
                return Scalar._raw({e: v * c for e, v in self._terms.items()})
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        terms: dict[Exp, GaussRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                prod = c1 * c2
                s = terms.get(exp)
                terms[exp] = prod if s is None else s + prod
        for exp in terms:
            _check_exp(exp)
        return Scalar._raw({e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "Scalar":
        """Inverse of a single-term scalar."""
        if len(self._terms) != 1:
            raise NotInvertible(f"{self} is not a single term")
        (exp, c), = self._terms.items()
        return Scalar._raw({_check_exp(tuple(-e for e in exp)): c.inverse()})

    def div_monomial(self, m: "Scalar") -> "Scalar":
        if not isinstance(m, Scalar):
            m = Scalar(m)
        if len(m._terms) != 1:
            raise NotInvertible(f"divisor {m} must have exactly one term")
        return self * m.inverse()

    def __truediv__(self, other):
        if isinstance(other, RATIONAL_TYPES + (GaussRational,)):
            return self * GaussRational.coerce(other).inverse()
        if isinstance(other, Scalar):
            return self.div_monomial(other)
        return NotImplemented

    def conjugate(self) -> "Scalar":
        """Complex conjugation of the coefficients; the symbols are treated as real."""
        return Scalar._raw({e: c.conjugate() for e, c in self._terms.items()})

    def eval(self, bindings: Mapping[str, ScalarLike]) -> "Scalar":
        """Substitute symbols; unbound symbols stay formal."""
        values = {}
        for name, val in bindings.items():
            if name not in SYMBOL_INDEX:
                raise KeyError(f"unknown scalar symbol {name!r}")
            values[SYMBOL_INDEX[name]] = Scalar.coerce(val)
        result = ZERO
        for exp, c in self._terms.items():
            term = Scalar._raw({tuple(0 if i in values else e for i, e in enumerate(exp)): c})
            for idx, val in values.items():
                e = exp[idx]
                if e < 0:
                    if not val:
                        raise PoleError(
                            f"{SYMBOLS[idx]}=0 hits a pole in term {format_scalar(Scalar._raw({exp: c}))}"
                        )
                    if not val.is_monomial():
                        raise NotInvertible(f"cannot invert {val} substituted for {SYMBOLS[idx]}")
                if e:
                    term = term * (val ** e)
            result = result + term
        return result

    def to_complex(self) -> complex:
        c = self.constant_value()
        if c is None:
            raise ValueError(f"{self} still contains symbols")
        return complex(c)

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


SCALAR_TYPES = RATIONAL_TYPES + (GaussRational, Scalar)

ZERO = Scalar._raw({})
ONE = Scalar._raw({(0, 0, 0): ONE_Q})
A = Scalar.symbol("a")
ALPHA = Scalar.symbol("alpha")
BETA = Scalar.symbol("beta")
I = Scalar(I_UNIT)


# -- operation-style entry points --------------------------------------------


def scalar_arith(kind: str, s1: ScalarLike, s2: ScalarLike | None = None) -> Scalar:
    s1 = Scalar.coerce(s1)
    if kind == "neg":
        return -s1
    s2 = Scalar.coerce(s2)
    if kind == "add":
        return s1 + s2
    if kind == "sub":
        return s1 - s2
    if kind == "mul":
        return s1 * s2
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def scalar_div_monomial(s: ScalarLike, m: ScalarLike) -> Scalar:
    return Scalar.coerce(s).div_monomial(Scalar.coerce(m))


def scalar_eval(s: ScalarLike, bindings: Mapping[str, ScalarLike]) -> Scalar:
    return Scalar.coerce(s).eval(bindings)


# -- text rendering ----------------------------------------------------------


def format_number(c: GaussRational) -> str:
    return format_term(c, [])


def format_term(c: GaussRational, factors: Iterable[tuple[str, int]], first: bool = True) -> str:
    """Render one signed term ``c * f1^e1 * f2^e2 ...``.

    ``first`` controls whether the sign is glued on (``-x``) or spaced
    (`` - x``) as inside a sum.
    """
    fac = "*".join(name if e == 1 else f"{name}^{e}" for name, e in factors)
    negative = False
    if not c.im:
        negative = c.re < 0
        mag = abs(c.re)
        if fac:
            body = fac if mag == 1 else f"{mag}*{fac}"
        else:
            body = str(mag)
    elif not c.re:
        negative = c.im < 0
        mag = abs(c.im)
        body = "i" if mag == 1 else f"{mag}*i"
        if fac:
            body = f"{body}*{fac}"
    else:
        im_mag = abs(c.im)
        im_txt = "i" if im_mag == 1 else f"{im_mag}*i"
        body = f"({c.re} {'-' if c.im < 0 else '+'} {im_txt})"
        if fac:
            body = f"{body}*{fac}"
    if first:
        return f"-{body}" if negative else body
    return f" - {body}" if negative else f" + {body}"


def scalar_factors(exp: Exp) -> list[tuple[str, int]]:
    return [(SYMBOLS[i], e) for i, e in enumerate(exp) if e]


def format_sum(terms: Iterable[tuple[GaussRational, list[tuple[str, int]]]]) -> str:
    parts = []
    for c, factors in terms:
        parts.append(format_term(c, factors, first=not parts))
    return "".join(parts) if parts else "0"


def format_scalar(s: Scalar) -> str:
    return format_sum((c, scalar_factors(e)) for e, c in s.items())
