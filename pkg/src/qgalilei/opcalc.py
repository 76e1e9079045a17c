"""Exact operator calculus on commutative polynomials in (v, mu, x, t).

Wavefunctions are polynomials with Scalar coefficients.  Operators are finite
sums of compositions of three primitives: multiplication by a variable, the
formal derivative, and the substitution ``var -> var + c*a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

from .freealg import NCPolynomial, Presentation, normal_order, preset
from .report import Tally, VerificationReport
from .scalar import A, ONE, ZERO, Scalar, ScalarLike, format_sum, scalar_eval, scalar_factors

VARIABLES = ("v", "mu", "x", "t")
VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}
Exps = tuple[int, int, int, int]


class UnknownVariable(KeyError):
    pass


class UnknownGenerator(KeyError):
    pass


def _var(name: str) -> int:
    try:
        return VAR_INDEX[name]
    except KeyError:
        raise UnknownVariable(f"unknown variable {name!r}; expected one of {VARIABLES}") from None


def _var_tuple(names: Iterable[str]) -> tuple[str, ...]:
    wanted = set(names)
    for n in wanted:
        _var(n)
    return tuple(v for v in VARIABLES if v in wanted)


class WaveFunction:
    """Commutative polynomial over a subset of (v, mu, x, t)."""

    __slots__ = ("variables", "_terms")

    def __init__(self, terms: Mapping[Exps, ScalarLike] | None = None, variables: Iterable[str] = VARIABLES):
        self.variables = _var_tuple(variables)
        clean: dict[Exps, Scalar] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != 4 or min(e) < 0:
                raise ValueError(f"bad exponent vector {e}")
            for i, k in enumerate(e):
                if k and VARIABLES[i] not in self.variables:
                    raise UnknownVariable(f"{VARIABLES[i]} is not among {self.variables}")
            c = Scalar.coerce(c)
            if c:
                s = clean.get(e, ZERO) + c
                if s:
                    clean[e] = s
                else:
                    clean.pop(e, None)
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict[Exps, Scalar], variables: tuple[str, ...]) -> "WaveFunction":
        obj = object.__new__(cls)
        obj.variables = variables
        obj._terms = {e: c for e, c in terms.items() if c}
        return obj

    @classmethod
    def monomial(cls, coeff: ScalarLike = ONE, variables: Iterable[str] = VARIABLES, **exps: int) -> "WaveFunction":
        e = [0, 0, 0, 0]
        for name, k in exps.items():
            e[_var(name)] = k
        return cls({tuple(e): coeff}, variables)

    @classmethod
    def constant(cls, c: ScalarLike, variables: Iterable[str] = VARIABLES) -> "WaveFunction":
        return cls({(0, 0, 0, 0): c}, variables)

    @property
    def terms(self) -> dict[Exps, Scalar]:
        return dict(self._terms)

    def items(self) -> list[tuple[Exps, Scalar]]:
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def coefficient(self, e: Exps) -> Scalar:
        return self._terms.get(tuple(e), ZERO)

    def degree(self, var: str | None = None) -> int:
        if not self._terms:
            return 0
        if var is None:
            return max(sum(e) for e in self._terms)
        i = _var(var)
        return max(e[i] for e in self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, WaveFunction):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def _union(self, other: "WaveFunction") -> tuple[str, ...]:
        if other.variables == self.variables:
            return self.variables
        return _var_tuple(self.variables + other.variables)

    def __add__(self, other):
        if not isinstance(other, WaveFunction):
            if isinstance(other, (int, Scalar)) or hasattr(other, "numerator"):
                other = WaveFunction.constant(other, self.variables)
            else:
                return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e)
            terms[e] = c if s is None else s + c
        return WaveFunction._raw(terms, self._union(other))

    __radd__ = __add__

    def __neg__(self):
        return WaveFunction._raw({e: -c for e, c in self._terms.items()}, self.variables)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: ScalarLike) -> "WaveFunction":
        c = Scalar.coerce(c)
        if not c:
            return WaveFunction._raw({}, self.variables)
        return WaveFunction._raw({e: v * c for e, v in self._terms.items()}, self.variables)

    def __mul__(self, other):
        if isinstance(other, WaveFunction):
            terms: dict[Exps, Scalar] = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                    s = terms.get(e)
                    terms[e] = c1 * c2 if s is None else s + c1 * c2
            return WaveFunction._raw(terms, self._union(other))
        try:
            return self.scale(other)
        except (TypeError, ValueError):
            return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a wavefunction")
        out = WaveFunction.constant(ONE, self.variables)
        for _ in range(n):
            out = out * self
        return out

    def map_coefficients(self, fn: Callable[[Scalar], Scalar]) -> "WaveFunction":
        return WaveFunction._raw({e: fn(c) for e, c in self._terms.items()}, self.variables)

    def with_variables(self, variables: Iterable[str]) -> "WaveFunction":
        return WaveFunction(self._terms, variables)

    # -- primitives --------------------------------------------------------------

    def _need(self, var: str) -> int:
        i = _var(var)
        if var not in self.variables:
            raise UnknownVariable(f"{var} is not among the variables {self.variables}")
        return i

    def deriv(self, var: str, n: int = 1) -> "WaveFunction":
        i = self._need(var)
        terms: dict[Exps, Scalar] = {}
        for e, c in self._terms.items():
            k = e[i]
            if k < n:
                continue
            ne = list(e)
            ne[i] = k - n
            terms[tuple(ne)] = c * (math.factorial(k) // math.factorial(k - n))
        return WaveFunction._raw(terms, self.variables)

    def mult(self, var: str, n: int = 1) -> "WaveFunction":
        i = self._need(var)
        terms = {}
        for e, c in self._terms.items():
            ne = list(e)
            ne[i] += n
            terms[tuple(ne)] = c
        return WaveFunction._raw(terms, self.variables)

    def shift(self, var: str, c: int) -> "WaveFunction":
        """Substitute ``var -> var + c*a``."""
        i = self._need(var)
        if c == 0:
            return self
        step = A * c
        terms: dict[Exps, Scalar] = {}
        for e, coeff in self._terms.items():
            k = e[i]
            for j in range(k + 1):
                ne = list(e)
                ne[i] = j
                ne = tuple(ne)
                add = coeff * (step ** (k - j)) * math.comb(k, j)
                s = terms.get(ne)
                terms[ne] = add if s is None else s + add
        return WaveFunction._raw(terms, self.variables)

    def __str__(self) -> str:
        return format_wavefunction(self)

    def __repr__(self) -> str:
        return f"WaveFunction({format_wavefunction(self)!r})"


def format_wavefunction(f: WaveFunction) -> str:
    rows = []
    for e, c in f.items():
        factors = [(VARIABLES[i], k) for i, k in enumerate(e) if k]
        for exp, q in c.items():
            rows.append((q, scalar_factors(exp) + factors))
    return format_sum(rows)


# -- linear operators ---------------------------------------------------------------


@dataclass(frozen=True)
class Primitive:
    kind: str  # "mult", "deriv" or "shift"
    var: str
    step: int = 0

    def __post_init__(self):
        if self.kind not in ("mult", "deriv", "shift"):
            raise ValueError(f"unknown primitive {self.kind!r}")
        _var(self.var)

    def __call__(self, f: WaveFunction) -> WaveFunction:
        if self.kind == "mult":
            return f.mult(self.var)
        if self.kind == "deriv":
            return f.deriv(self.var)
        return f.shift(self.var, self.step)

    def __str__(self) -> str:
        if self.kind == "shift":
            return f"shift({self.var},{self.step:+d})"
        return f"{self.kind}({self.var})"


class LinearOperator:
    """Finite sum ``sum c * (p1 o p2 o ... o pk)``; the rightmost primitive acts first."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[Primitive, ...], ScalarLike] | None = None):
        clean: dict[tuple[Primitive, ...], Scalar] = {}
        for chain, c in (terms or {}).items():
            c = Scalar.coerce(c)
            if c:
                s = clean.get(tuple(chain), ZERO) + c
                clean[tuple(chain)] = s
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def identity(cls) -> "LinearOperator":
        return cls({(): ONE})

    @classmethod
    def scalar(cls, c: ScalarLike) -> "LinearOperator":
        return cls({(): c})

    @property
    def terms(self) -> dict[tuple[Primitive, ...], Scalar]:
        return dict(self._terms)

    def variables(self) -> set[str]:
        return {p.var for chain in self._terms for p in chain}

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, ZERO) + c
        return LinearOperator(terms)

    def __neg__(self):
        return LinearOperator({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Composition for operators, scaling for scalars."""
        if isinstance(other, LinearOperator):
            terms: dict = {}
            for k1, c1 in self._terms.items():
                for k2, c2 in other._terms.items():
                    k = k1 + k2
                    terms[k] = terms.get(k, ZERO) + c1 * c2
            return LinearOperator(terms)
        c = Scalar.coerce(other)
        return LinearOperator({k: v * c for k, v in self._terms.items()})

    def __rmul__(self, other):
        c = Scalar.coerce(other)
        return LinearOperator({k: c * v for k, v in self._terms.items()})

    def __call__(self, f: WaveFunction) -> WaveFunction:
        return apply(self, f)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for chain, c in self._terms.items():
            body = " o ".join(str(p) for p in chain) or "id"
            parts.append(f"({c})*{body}")
        return " + ".join(parts)


def mult(var: str) -> LinearOperator:
    return LinearOperator({(Primitive("mult", var),): ONE})


def deriv(var: str) -> LinearOperator:
    return LinearOperator({(Primitive("deriv", var),): ONE})


def shift(var: str, c: int) -> LinearOperator:
    return LinearOperator({(Primitive("shift", var, int(c)),): ONE})


def apply(opr: LinearOperator, f: WaveFunction) -> WaveFunction:
    missing = opr.variables() - set(f.variables)
    if missing:
        raise UnknownVariable(f"operator uses {sorted(missing)} outside {f.variables}")
    out = WaveFunction._raw({}, f.variables)
    for chain, c in opr.terms.items():
        g = f
        for p in reversed(chain):
            g = p(g)
            if not g:
                break
        out = out + g.scale(c)
    return out


def _check_no_a_pole(f: WaveFunction, what: str) -> WaveFunction:
    for c in f.terms.values():
        assert c.min_exponent("a") >= 0, f"{what} left a negative power of a: {c}"
    return f


def sinh_shift_over_a(var: str, f: WaveFunction) -> WaveFunction:
    """``(f(var+a) - f(var-a)) / (2a)``, exact."""
    diff = f.shift(var, 1) - f.shift(var, -1)
    return _check_no_a_pole(diff.map_coefficients(lambda c: c.div_monomial(2 * A)), "sinh_shift_over_a")


def one_minus_cosh_over_a2(var: str, f: WaveFunction) -> WaveFunction:
    """``(2 f - f(var+a) - f(var-a)) / (2a^2)``, exact."""
    diff = f.scale(2) - f.shift(var, 1) - f.shift(var, -1)
    return _check_no_a_pole(diff.map_coefficients(lambda c: c.div_monomial(2 * A * A)), "one_minus_cosh_over_a2")


def sinh_shift_operator(var: str) -> LinearOperator:
    return (shift(var, 1) - shift(var, -1)) * Scalar.coerce(A * 2).inverse()


def one_minus_cosh_operator(var: str) -> LinearOperator:
    return (LinearOperator.scalar(2) - shift(var, 1) - shift(var, -1)) * Scalar.coerce(A * A * 2).inverse()


def cosh_diff_over_a2_dmu(f: WaveFunction) -> WaveFunction:
    """``[cosh(a(dx - v dmu)) - cosh(a dx)] / (a^2 dmu)`` as its finite expansion.

    Each term of the binomial expansion of the first cosh that is not in the
    second carries at least one ``v dmu``; the quotient strips one ``dmu``.
    """
    for var in ("v", "mu", "x"):
        f._need(var)
    top = f.degree("x") + f.degree("mu") + 1
    out = WaveFunction._raw({}, f.variables)
    for m in range(2, top + 1, 2):
        pref = A ** (m - 2) * Scalar(_fraction(1, math.factorial(m)))
        for n in range(1, m + 1):
            g = f.deriv("x", m - n).deriv("mu", n - 1)
            if not g:
                continue
            g = g.mult("v", n)
            out = out + g.scale(pref * (math.comb(m, n) * (-1) ** n))
    return out


def _fraction(p: int, q: int):
    from fractions import Fraction

    return Fraction(p, q)


# -- the two coregular actions of uq_kmph on the commutative algebra ---------------------

GEN_VAR = {"K": "v", "M": "mu", "P": "x", "H": "t"}
ALGEBRA = "uq_kmph"


def _kmph() -> Presentation:
    return preset(ALGEBRA)


def _exp_mu_series(f: WaveFunction, z: int) -> WaveFunction:
    """``sum_n (-z a v)^n dmu^n / n!`` applied to f (finite)."""
    out = f
    term = f
    n = 0
    while True:
        n += 1
        term = term.deriv("mu").mult("v").scale(Scalar(-z) * A * Scalar(_fraction(1, n)))
        if not term:
            return out
        out = out + term


def _right_letter(g: str, e: int, f: WaveFunction) -> WaveFunction:
    if g == "E":
        return f.shift("x", e)
    if e != 1:
        for _ in range(e):
            f = _right_letter(g, 1, f)
        return f
    if g == "K":
        return f.deriv("v") - f.deriv("mu").mult("x") - sinh_shift_over_a("x", f).mult("t")
    if g == "M":
        return f.deriv("mu")
    if g == "P":
        return f.deriv("x")
    if g == "H":
        return f.deriv("t")
    raise UnknownGenerator(f"unknown generator {g!r} of {ALGEBRA}")


def _left_letter(g: str, e: int, f: WaveFunction) -> WaveFunction:
    if g == "E":
        return _exp_mu_series(f, e).shift("x", e)
    if e != 1:
        for _ in range(e):
            f = _left_letter(g, 1, f)
        return f
    if g == "K":
        return f.deriv("v")
    if g == "M":
        return f.deriv("mu")
    if g == "P":
        return f.deriv("x") - f.deriv("mu").mult("v")
    if g == "H":
        return f.deriv("t") + cosh_diff_over_a2_dmu(f)
    raise UnknownGenerator(f"unknown generator {g!r} of {ALGEBRA}")


GenLike = Union[str, NCPolynomial]


def _as_poly(g: GenLike, exp: int) -> NCPolynomial:
    pres = _kmph()
    if isinstance(g, NCPolynomial):
        if g.pres is not pres:
            raise ValueError(f"actions are defined for {ALGEBRA} elements, not {g.pres.name}")
        return g if exp == 1 else g ** exp
    if g not in pres.index:
        raise UnknownGenerator(f"unknown generator {g!r} of {ALGEBRA}")
    if exp < 0 and g != "E":
        raise ValueError(f"negative power of {g}")
    return pres.gen(g, exp)


def _act(u: NCPolynomial, f: WaveFunction, letter_fn, reverse: bool) -> WaveFunction:
    pres = u.pres
    out = WaveFunction._raw({}, f.variables)
    for m, c in u.terms.items():
        g = f
        word = pres.mono_word(m)
        for i, e in (reversed(word) if reverse else word):
            g = letter_fn(pres.generators[i], e, g)
            if not g:
                break
        out = out + g.scale(c)
    return out


def act_triangleright(g: GenLike, f: WaveFunction, exp: int = 1) -> WaveFunction:
    """``g |> f``: the action dual to right multiplication, ``<h |> f, u> = <f, u h>``.

    Products act rightmost factor first.
    """
    return _act(_as_poly(g, exp), f.with_variables(VARIABLES), _right_letter, reverse=True)


def act_triangleleft(g: GenLike, f: WaveFunction, exp: int = 1) -> WaveFunction:
    """``f <| g``: the action dual to left multiplication, ``<f <| h, u> = <f, h u>``.

    Products act leftmost factor first.
    """
    return _act(_as_poly(g, exp), f.with_variables(VARIABLES), _left_letter, reverse=False)


def pairing_A(u: NCPolynomial, f: WaveFunction) -> Scalar:
    """Diagonal form <K^k M^m P^p H^h, v^k mu^m x^p t^h> = k! m! p! h!.

    E^z is expanded as sum (z a P)^j / j!, which terminates against f.
    """
    pres = _kmph()
    if u.pres is not pres:
        raise ValueError(f"pairing_A takes {ALGEBRA} elements")
    ik, im, ip, ie, ih = (pres.index[g] for g in ("K", "M", "P", "E", "H"))
    out = ZERO
    for m, c in u.terms.items():
        k, mm, p, z, h = m[ik], m[im], m[ip], m[ie], m[ih]
        for e, d in f.terms.items():
            if e[0] != k or e[1] != mm or e[3] != h or e[2] < p:
                continue
            X = e[2]
            if z == 0 and X != p:
                continue
            val = math.factorial(k) * math.factorial(mm) * math.factorial(h) * math.factorial(X)
            val = Scalar(_fraction(val, math.factorial(X - p))) * (A * z) ** (X - p)
            out = out + c * d * val
    return out


def basis_monomials(degree_cap: int) -> list[Exps]:
    out = []
    for total in range(degree_cap + 1):
        for k in range(total + 1):
            for m in range(total - k + 1):
                for p in range(total - k - m + 1):
                    out.append((k, m, p, total - k - m - p))
    return out


def duality_generators() -> list[tuple[str, int]]:
    return [("K", 1), ("M", 1), ("P", 1), ("H", 1), ("E", 1), ("E", -1)]


def check_duality(degree_cap: int = 4) -> VerificationReport:
    """Both actions against the diagonal form, over all E-free monomials up to the cap."""
    if degree_cap < 1:
        raise ValueError("degree_cap must be at least 1")
    pres = _kmph()
    exps = basis_monomials(degree_cap)
    us = [(e, pres.poly({pres.mono(K=e[0], M=e[1], P=e[2], H=e[3]): ONE})) for e in exps]
    fs = [(e, WaveFunction({e: ONE})) for e in exps]
    report = VerificationReport("duality")
    for g, z in duality_generators():
        h = pres.gen(g, z)
        name = g if z == 1 else f"{g}^{z}"
        right = Tally(f"duality |> {name}")
        left = Tally(f"duality <| {name}")
        uh = [(eu, u, u * h, h * u) for eu, u in us]
        for ef, f in fs:
            rf = act_triangleright(h, f)
            lf = act_triangleleft(h, f)
            for eu, u, u_h, h_u in uh:
                label = f"u={u} f={f}"
                right.compare(label, pairing_A(u, rf) - pairing_A(u_h, f))
                left.compare(label, pairing_A(u, lf) - pairing_A(h_u, f))
        report.add(right.record())
        report.add(left.record())
    return report


def classical_limit_wf(f: WaveFunction) -> WaveFunction:
    return f.map_coefficients(lambda c: scalar_eval(c, {"a": 0}))
