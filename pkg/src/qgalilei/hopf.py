"""Coproduct, counit and antipode for the bundled presentations.

Also the recursive evaluation of the pairing between ``uq_iphn`` and ``fq``,
which peels one function-algebra generator at a time off the left.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .freealg import (
    Mono,
    NCPolynomial,
    Presentation,
    TensorElement,
    normal_order,
    preset,
    tensor,
    tensor_multiply,
)
from .report import CheckRecord, Tally, VerificationReport
from .scalar import A, ONE, ZERO, Scalar


class HopfData:
    """Generator-level Hopf structure, extended (anti)multiplicatively."""

    def __init__(self, pres: Presentation, delta: dict[str, TensorElement], epsilon: dict[str, Scalar],
                 antipode_map: dict[str, NCPolynomial], label: str | None = None):
        self.pres = pres
        self.delta = delta
        self.epsilon = epsilon
        self.antipode_map = antipode_map
        self.label = label or pres.name
        missing = [g for g in pres.generators if g != pres.grouplike and g not in delta]
        if missing:
            raise ValueError(f"no coproduct given for {missing}")
        self._delta_cache: dict[Mono, TensorElement] = {}
        self._s_cache: dict[Mono, NCPolynomial] = {}

    def __repr__(self) -> str:
        return f"HopfData({self.label!r})"

    def _letter_mono(self, i: int, e: int) -> Mono:
        m = [0] * len(self.pres.generators)
        m[i] = e
        return tuple(m)

    def delta_letter(self, i: int, e: int) -> TensorElement:
        if i == self.pres.e:
            m = self._letter_mono(i, e)
            return TensorElement(self.pres, {(m, m): ONE})
        return self.delta[self.pres.generators[i]]

    def epsilon_letter(self, i: int, e: int) -> Scalar:
        if i == self.pres.e:
            return ONE
        return self.epsilon[self.pres.generators[i]]

    def antipode_letter(self, i: int, e: int) -> NCPolynomial:
        if i == self.pres.e:
            return self.pres.poly({self._letter_mono(i, -e): ONE})
        return self.antipode_map[self.pres.generators[i]]

    def delta_mono(self, m: Mono) -> TensorElement:
        hit = self._delta_cache.get(m)
        if hit is None:
            one = self.pres.zero_mono()
            hit = TensorElement(self.pres, {(one, one): ONE})
            for i, e in self.pres.mono_word(m):
                hit = tensor_multiply(hit, self.delta_letter(i, e))
            self._delta_cache[m] = hit
        return hit

    def epsilon_mono(self, m: Mono) -> Scalar:
        out = ONE
        for i, e in self.pres.mono_word(m):
            out = out * self.epsilon_letter(i, e)
            if not out:
                break
        return out

    def antipode_mono(self, m: Mono) -> NCPolynomial:
        hit = self._s_cache.get(m)
        if hit is None:
            hit = self.pres.one()
            for i, e in self.pres.mono_word(m):
                hit = self.antipode_letter(i, e) * hit
            self._s_cache[m] = hit
        return hit


def coproduct(hd: HopfData, u: NCPolynomial) -> TensorElement:
    _same(hd, u)
    out = TensorElement(hd.pres, {})
    for m, c in u.terms.items():
        out = out + hd.delta_mono(m).scale(c)
    return out


def counit(hd: HopfData, u: NCPolynomial) -> Scalar:
    _same(hd, u)
    out = ZERO
    for m, c in u.terms.items():
        out = out + c * hd.epsilon_mono(m)
    return out


def antipode(hd: HopfData, u: NCPolynomial) -> NCPolynomial:
    _same(hd, u)
    out = hd.pres.zero()
    for m, c in u.terms.items():
        out = out + hd.antipode_mono(m).scale(c)
    return out


def _same(hd: HopfData, u: NCPolynomial) -> None:
    if u.pres is not hd.pres:
        raise ValueError(f"element of {u.pres.name} given to Hopf data of {hd.pres.name}")


# -- bundled Hopf structures ---------------------------------------------------------

_HOPF: dict[str, HopfData] = {}


def _uq_kmph() -> HopfData:
    p = preset("uq_kmph")
    one, E, Ei = p.one(), p.gen("E"), p.gen("E", -1)
    K, M, P, H = (p.gen(g) for g in "KMPH")
    delta = {
        "K": tensor(K, Ei) + tensor(E, K),
        "M": tensor(M, Ei) + tensor(E, M),
        "P": tensor(P, one) + tensor(one, P),
        "H": tensor(H, one) + tensor(one, H),
    }
    eps = {g: ZERO for g in "KMPH"}
    s = {"K": -K - M.scale(A), "M": -M, "P": -P, "H": -H}
    return HopfData(p, delta, eps, s)


def _uq_iphn() -> HopfData:
    # obtained from uq_kmph through I = E M, N = E^-1 K
    p = preset("uq_iphn")
    one, E2, Em2 = p.one(), p.gen("E", 2), p.gen("E", -2)
    I, P, H, N = (p.gen(g) for g in "IPHN")
    delta = {
        "I": tensor(I, one) + tensor(E2, I),
        "P": tensor(P, one) + tensor(one, P),
        "H": tensor(H, one) + tensor(one, H),
        "N": tensor(N, Em2) + tensor(one, N),
    }
    eps = {g: ZERO for g in "IPHN"}
    s = {
        "I": -(Em2 * I),
        "P": -P,
        "H": -H,
        "N": -(E2 * N) - I.scale(2 * A),
    }
    return HopfData(p, delta, eps, s)


def _fq(antipode_mu: str) -> HopfData:
    p = preset("fq")
    one = p.one()
    v, mu, x, t = (p.gen(g) for g in ("v", "mu", "x", "t"))
    half = Fraction(1, 2)
    delta = {
        "mu": tensor(mu, one) + tensor(one, mu) + tensor(v, x) + tensor(v * v, t).scale(half),
        "x": tensor(x, one) + tensor(one, x) + tensor(v, t),
        "t": tensor(t, one) + tensor(one, t),
        "v": tensor(v, one) + tensor(one, v),
    }
    eps = {g: ZERO for g in ("v", "mu", "x", "t")}
    if antipode_mu == "corrected":
        s_mu = -mu + v * x - (v * v * t).scale(half)
    elif antipode_mu == "printed":
        # as printed: fails m(S (x) id) Delta(mu) = 0 by x - v*x
        s_mu = -mu + x - (v * v * t).scale(half)
    else:
        raise ValueError(f"antipode_mu must be 'corrected' or 'printed', not {antipode_mu!r}")
    s = {"mu": s_mu, "x": -x + t * v, "t": -t, "v": -v}
    label = "fq" if antipode_mu == "corrected" else "fq[printed S(mu)]"
    return HopfData(p, delta, eps, s, label=label)


def hopf_data(name: str, antipode_mu: str = "corrected") -> HopfData:
    key = name if name != "fq" else f"fq:{antipode_mu}"
    if key not in _HOPF:
        if name == "uq_kmph":
            _HOPF[key] = _uq_kmph()
        elif name == "uq_iphn":
            _HOPF[key] = _uq_iphn()
        elif name == "fq":
            _HOPF[key] = _fq(antipode_mu)
        else:
            raise KeyError(f"no Hopf structure for {name!r}")
    return _HOPF[key]


# -- tensor plumbing for the axioms ------------------------------------------------------


def _delta_on_leg(hd: HopfData, t: TensorElement, leg: int) -> TensorElement:
    terms: dict = {}
    for key, c in t.terms.items():
        for k2, d in hd.delta_mono(key[leg]).terms.items():
            nk = key[:leg] + k2 + key[leg + 1:]
            terms[nk] = terms.get(nk, ZERO) + c * d
    return TensorElement(hd.pres, terms)


def _eps_on_leg(hd: HopfData, t: TensorElement, leg: int) -> NCPolynomial:
    """Apply the counit to one leg of a two-leg tensor."""
    terms: dict = {}
    for key, c in t.terms.items():
        e = hd.epsilon_mono(key[leg])
        if e:
            m = key[1 - leg]
            terms[m] = terms.get(m, ZERO) + c * e
    return hd.pres.poly(terms)


def _multiply_with_antipode(hd: HopfData, t: TensorElement, leg: int) -> NCPolynomial:
    out = hd.pres.zero()
    for (m1, m2), c in t.terms.items():
        left = hd.antipode_mono(m1) if leg == 0 else hd.pres.poly({m1: ONE})
        right = hd.antipode_mono(m2) if leg == 1 else hd.pres.poly({m2: ONE})
        out = out + (left * right).scale(c)
    return out


def axiom_elements(pres: Presentation, degree_cap: int) -> list[Mono]:
    """All normal monomials up to ``degree_cap`` (times E^-1, 1, E where present)."""
    gens = [i for i in range(len(pres.generators)) if i != pres.e]
    monos = []
    for deg in range(degree_cap + 1):
        for combo in itertools.combinations_with_replacement(gens, deg):
            m = [0] * len(pres.generators)
            for i in combo:
                m[i] += 1
            zs = (-1, 0, 1) if pres.e is not None else (0,)
            for z in zs:
                mm = list(m)
                if pres.e is not None:
                    mm[pres.e] = z
                monos.append(tuple(mm))
    return monos


def _rules(pres: Presentation, zs=(-2, -1, 1, 2)):
    """Every defining relation as (left word, right word, tail)."""
    out = []
    n = len(pres.generators)
    for gi in range(n):
        for hi in range(gi):
            if pres.e in (gi, hi):
                other = hi if gi == pres.e else gi
                for z in zs:
                    left = (gi, z if gi == pres.e else 1)
                    right = (hi, z if hi == pres.e else 1)
                    tail = pres._tail(left, right)
                    out.append((left, right, tail if tail is not None else pres.zero()))
            else:
                tail = pres._tail((gi, 1), (hi, 1))
                out.append(((gi, 1), (hi, 1), tail if tail is not None else pres.zero()))
    return out


def _letter_poly(pres: Presentation, letter) -> NCPolynomial:
    return pres.gen(pres.generators[letter[0]], letter[1])


def check_hopf_axioms(hd: HopfData, degree_cap: int = 3) -> VerificationReport:
    if degree_cap < 1:
        raise ValueError("degree_cap must be at least 1")
    pres = hd.pres
    report = VerificationReport(f"hopf[{hd.label}]")
    elems = axiom_elements(pres, degree_cap)
    coassoc = Tally(f"coassociativity[{hd.label}]")
    counit_ax = Tally(f"counit[{hd.label}]")
    anti_l = Tally(f"antipode m(S*id)D[{hd.label}]")
    anti_r = Tally(f"antipode m(id*S)D[{hd.label}]")
    for m in elems:
        label = str(pres.poly({m: ONE}))
        d = hd.delta_mono(m)
        coassoc.compare(label, _delta_on_leg(hd, d, 0) - _delta_on_leg(hd, d, 1))
        u = pres.poly({m: ONE})
        counit_ax.compare(label + " left", _eps_on_leg(hd, d, 0) - u)
        counit_ax.compare(label + " right", _eps_on_leg(hd, d, 1) - u)
        unit = pres.scalar(hd.epsilon_mono(m))
        anti_l.compare(label, _multiply_with_antipode(hd, d, 0) - unit)
        anti_r.compare(label, _multiply_with_antipode(hd, d, 1) - unit)
    for t in (coassoc, counit_ax, anti_l, anti_r):
        report.add(t.record())

    # Delta, epsilon multiplicative and S anti-multiplicative on every relation g*h = h*g + tail
    d_rel = Tally(f"coproduct respects relations[{hd.label}]")
    e_rel = Tally(f"counit respects relations[{hd.label}]")
    s_rel = Tally(f"antipode respects relations[{hd.label}]")
    for left, right, tail in _rules(pres):
        label = f"{pres.format_word((left,))}*{pres.format_word((right,))}"
        dl, dr = hd.delta_letter(*left), hd.delta_letter(*right)
        d_rel.compare(label, dl * dr - dr * dl - coproduct(hd, tail))
        el, er = hd.epsilon_letter(*left), hd.epsilon_letter(*right)
        e_rel.compare(label, el * er - er * el - counit(hd, tail))
        sl, sr = hd.antipode_letter(*left), hd.antipode_letter(*right)
        s_rel.compare(label, sr * sl - sl * sr - antipode(hd, tail))
    for t in (d_rel, e_rel, s_rel):
        report.add(t.record())
    return report


def check_printed_antipode() -> CheckRecord:
    """Record the known failure of the printed S(mu); ``xfail`` while it still fails."""
    hd = hopf_data("fq", antipode_mu="printed")
    mu = hd.pres.gen("mu")
    residual = _multiply_with_antipode(hd, coproduct(hd, mu), 0) - hd.pres.scalar(counit(hd, mu))
    note = "printed S(mu)=-mu+x-1/2*v^2*t; shipped S(mu)=-mu+v*x-1/2*v^2*t"
    if residual:
        return CheckRecord("antipode printed S(mu)[fq]", "xfail", 1, str(residual), note)
    return CheckRecord("antipode printed S(mu)[fq]", "fail", 1, "unexpectedly passes", note)


def hopf_report(degree_cap: int = 3) -> VerificationReport:
    report = VerificationReport("hopf")
    for name in ("uq_kmph", "uq_iphn", "fq"):
        report.extend(check_hopf_axioms(hopf_data(name), degree_cap))
    report.add(check_printed_antipode())
    report.add(check_coproduct_conversion(degree_cap))
    return report


def check_coproduct_conversion(degree_cap: int = 3) -> CheckRecord:
    """The uq_iphn coproducts agree with uq_kmph's under the change of basis."""
    from .freealg import convert_basis

    src, dst = hopf_data("uq_kmph"), hopf_data("uq_iphn")
    tally = Tally("coproduct vs change of basis[uq_kmph->uq_iphn]")
    for m in axiom_elements(src.pres, min(degree_cap, 2)):
        u = src.pres.poly({m: ONE})
        lhs = coproduct(dst, convert_basis(u, src.pres, dst.pres))
        rhs = TensorElement(dst.pres, {})
        for (m1, m2), c in src.delta_mono(m).terms.items():
            a = convert_basis(src.pres.poly({m1: ONE}), src.pres, dst.pres)
            b = convert_basis(src.pres.poly({m2: ONE}), src.pres, dst.pres)
            rhs = rhs + tensor(a, b).scale(c)
        tally.compare(str(u), lhs - rhs)
    return tally.record()


# -- the pairing between uq_iphn and fq ----------------------------------------------------


@dataclass(frozen=True)
class PairingTable:
    """Generator pairings; everything not listed pairs to zero.

    The group-like E^z = exp(z a P) pairs as <E^z, x^q> = (z a)^q and to zero
    with any word containing v, mu or t.
    """

    base: dict = field(default_factory=lambda: {("I", "mu"): 1, ("P", "x"): 1, ("H", "t"): 1, ("N", "v"): 1})

    def generator(self, g: str, f: str) -> Scalar:
        return Scalar(self.base.get((g, f), 0))

    def grouplike(self, z: int, f_word: tuple[str, ...]) -> Scalar:
        if any(f != "x" for f in f_word):
            return ZERO
        return (A * z) ** len(f_word)


class DegreeCapExceeded(ValueError):
    pass


class HopfPairing:
    def __init__(self, uq: HopfData, fq: HopfData, table: PairingTable | None = None, degree_cap: int = 6):
        self.uq, self.fq = uq, fq
        self.table = table or PairingTable()
        self.degree_cap = degree_cap
        self._cache: dict = {}

    def _f_word(self, m: Mono) -> tuple[int, ...]:
        return tuple(i for i, _ in self.fq.pres.mono_word(m))

    def pair_word(self, m: Mono, fw: tuple[int, ...]) -> Scalar:
        """<U monomial m, F word fw>, fw being any (not necessarily ordered) word."""
        key = (m, fw)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        uq, fq = self.uq, self.fq
        letters = uq.pres.mono_word(m)
        if not fw:
            val = uq.epsilon_mono(m)
        elif not letters:
            val = ZERO  # every F generator has zero counit
        elif len(letters) == 1 and letters[0][0] == uq.pres.e:
            val = self.table.grouplike(letters[0][1], tuple(fq.pres.generators[i] for i in fw))
        elif len(fw) == 1:
            g = fq.pres.generators[fw[0]]
            if len(letters) == 1:
                val = self.table.generator(uq.pres.generators[letters[0][0]], g)
            else:
                # <u1 u2, g> = sum <u1, g(1)> <u2, g(2)>
                first = uq.pres._word_mono(letters[:1])
                rest = uq.pres._word_mono(letters[1:])
                val = ZERO
                for (k1, k2), c in fq.delta[g].terms.items():
                    left = self.pair_word(first, self._f_word(k1))
                    if left:
                        right = self.pair_word(rest, self._f_word(k2))
                        if right:
                            val = val + c * left * right
        else:
            # <u, g rest> = sum <u(1), g> <u(2), rest>
            val = ZERO
            head, tail = fw[:1], fw[1:]
            for (m1, m2), c in uq.delta_mono(m).terms.items():
                left = self.pair_word(m1, head)
                if left:
                    right = self.pair_word(m2, tail)
                    if right:
                        val = val + c * left * right
        self._cache[key] = val
        return val

    def __call__(self, u: NCPolynomial, f: NCPolynomial) -> Scalar:
        if u.pres is not self.uq.pres or f.pres is not self.fq.pres:
            raise ValueError(f"pairing expects ({self.uq.pres.name}, {self.fq.pres.name}) elements")
        if u.degree() > self.degree_cap or f.degree() > self.degree_cap:
            raise DegreeCapExceeded(f"degrees {u.degree()}, {f.degree()} exceed cap {self.degree_cap}")
        out = ZERO
        for m, c in u.terms.items():
            for k, d in f.terms.items():
                val = self.pair_word(m, self._f_word(k))
                if val:
                    out = out + c * d * val
        return out

    def pair_tensor(self, t: TensorElement, s: TensorElement) -> Scalar:
        """<u1 (x) u2, f1 (x) f2> = <u1, f1> <u2, f2>."""
        out = ZERO
        for (m1, m2), c in t.terms.items():
            for (k1, k2), d in s.terms.items():
                left = self.pair_word(m1, self._f_word(k1))
                if left:
                    out = out + c * d * left * self.pair_word(m2, self._f_word(k2))
        return out


_PAIRING: dict[int, HopfPairing] = {}


def default_pairing(degree_cap: int = 6) -> HopfPairing:
    if degree_cap not in _PAIRING:
        _PAIRING[degree_cap] = HopfPairing(hopf_data("uq_iphn"), hopf_data("fq"), degree_cap=degree_cap)
    return _PAIRING[degree_cap]


def hopf_pairing(u: NCPolynomial, f: NCPolynomial, degree_cap: int = 6) -> Scalar:
    return default_pairing(degree_cap)(u, f)


def _multi_indices(n: int, cap: int):
    for deg in range(cap + 1):
        for combo in itertools.combinations_with_replacement(range(n), deg):
            idx = [0] * n
            for i in combo:
                idx[i] += 1
            yield tuple(idx)


def check_pairing_diagonal(degree_cap: int = 4) -> VerificationReport:
    """<I^p P^q H^r N^s, mu^p' x^q' t^r' v^s'> = p! q! r! s! delta, by recursion."""
    if degree_cap < 1:
        raise ValueError("degree_cap must be at least 1")
    pairing = default_pairing(max(6, degree_cap))
    up, fp = pairing.uq.pres, pairing.fq.pres
    tally = Tally("pairing diagonal[uq_iphn x fq]")
    f_elems = {}
    for idx in _multi_indices(4, degree_cap):
        p, q, r, s = idx
        f_elems[idx] = normal_order(fp, (("mu", p), ("x", q), ("t", r), ("v", s)))
    for idx in _multi_indices(4, degree_cap):
        p, q, r, s = idx
        u = up.poly({up.mono(I=p, P=q, H=r, N=s): ONE})
        for fidx, f in f_elems.items():
            expected = Scalar(math.prod(math.factorial(k) for k in idx)) if idx == fidx else ZERO
            got = pairing(u, f)
            tally.compare(f"{idx}|{fidx} got {got} expected {expected}", got - expected)
    report = VerificationReport("pairing")
    report.add(tally.record())
    return report
