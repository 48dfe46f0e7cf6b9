"""Truncated Puiseux series over F_{p^n} in t^{-1/e}: the working model of C_infinity.

A TailElement is sum c_a t^{a/e} + O(t^{-P}). Precision is absolute and stored as an
integer in units of 1/e; every stored exponent a satisfies a > -P. P = None marks an
exact element. |t| = q, so |x| = q^{lead}.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from math import ceil, gcd
from typing import Dict, Iterable, List, Optional, Tuple, Union

from src.dmf.base_arith import (
    FiniteField,
    RatF,
    embed,
    get_field,
    join_fields,
    MAX_FIELD_ORDER,
    prime_power,
)
from src.dmf.errors import DmfError, FieldError, NoRootError, PrecisionExhausted

logger = logging.getLogger("dmf.cinfty_model")

Number = Union[int, Fraction]
_MAX_NEWTON_STEPS = 64


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _min_prec(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _units(value: Number, e: int) -> int:
    """Smallest integer count of 1/e steps covering an absolute exponent."""
    return ceil(Fraction(value) * e)


class TailElement:
    __slots__ = ("q", "field", "e", "terms", "_prec")

    def __init__(
        self,
        q: int,
        field: FiniteField,
        e: int,
        terms: Dict[int, int],
        prec: Optional[int] = None,
        normalize: bool = True,
    ):
        self.q = q
        self.field = field
        self.e = e
        self._prec = prec
        self.terms = {a: c for a, c in terms.items() if c and (prec is None or a > -prec)}
        if normalize:
            self._reduce_index()

    def _reduce_index(self) -> None:
        g = self.e
        for a in self.terms:
            g = gcd(g, a)
            if g == 1:
                return
        if self._prec is not None:
            g = gcd(g, self._prec)
        if g > 1:
            self.e //= g
            self.terms = {a // g: c for a, c in self.terms.items()}
            if self._prec is not None:
                self._prec //= g

    # constructors

    @classmethod
    def base_field(cls, q: int) -> FiniteField:
        p, k = prime_power(q)
        return get_field(p, k)

    @classmethod
    def zero(cls, q: int, prec: Optional[Number] = None) -> "TailElement":
        return cls(q, cls.base_field(q), 1, {}, None if prec is None else _units(prec, 1))

    @classmethod
    def one(cls, q: int) -> "TailElement":
        return cls(q, cls.base_field(q), 1, {0: 1})

    @classmethod
    def monomial(cls, q: int, exponent: Number, c: int = 1, field: Optional[FiniteField] = None) -> "TailElement":
        exponent = Fraction(exponent)
        return cls(q, field or cls.base_field(q), exponent.denominator, {exponent.numerator: c})

    @classmethod
    def t(cls, q: int) -> "TailElement":
        return cls.monomial(q, 1)

    @classmethod
    def from_int(cls, q: int, n: int) -> "TailElement":
        F = cls.base_field(q)
        return cls(q, F, 1, {0: F.from_int(n)})

    @classmethod
    def from_ff(cls, q: int, c: int, field: Optional[FiniteField] = None) -> "TailElement":
        return cls(q, field or cls.base_field(q), 1, {0: c})

    @classmethod
    def from_poly(cls, q: int, poly) -> "TailElement":
        return cls(q, poly.field, 1, dict(enumerate(poly.coeffs)))

    @classmethod
    def from_ratf(cls, q: int, x: RatF, prec: Optional[Number] = None) -> "TailElement":
        """Expansion of x at infinity; exact for polynomials, else known to O(t^{-prec})."""
        num = cls.from_poly(q, x.num)
        if x.is_poly():
            return num
        den = cls.from_poly(q, x.den)
        if len(den.terms) == 1:
            return num * den.inverse()
        if prec is None:
            raise PrecisionExhausted(f"expanding {x.to_text()} at infinity needs a target precision")
        target = Fraction(prec) + max(x.num.degree, 0) if x.num else Fraction(prec)
        return (num * den.inverse(target)).truncate(prec)

    # structure

    @property
    def prec(self) -> Optional[Fraction]:
        return None if self._prec is None else Fraction(self._prec, self.e)

    @property
    def prec_units(self) -> Optional[int]:
        return self._prec

    def is_exact(self) -> bool:
        return self._prec is None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def lead_units(self) -> int:
        if not self.terms:
            raise PrecisionExhausted("element is indistinguishable from 0")
        return max(self.terms)

    @property
    def lead(self) -> Fraction:
        return Fraction(self.lead_units, self.e)

    def lc(self) -> int:
        return self.terms[self.lead_units]

    def log_norm(self) -> Fraction:
        """log_q |x|; raises PrecisionExhausted for an element with no known terms."""
        return self.lead

    def upper_log_norm(self) -> Optional[Fraction]:
        """log_q of a bound on |x| that also covers the unknown tail."""
        if self.terms:
            return self.lead
        return None if self._prec is None else -self.prec

    def coeff(self, exponent: Number) -> int:
        a = Fraction(exponent) * self.e
        if a.denominator != 1:
            return 0
        return self.terms.get(int(a), 0)

    def _recast(self, e: int, field: FiniteField) -> "TailElement":
        if e == self.e and field == self.field:
            return self
        k = e // self.e
        terms = {a * k: embed(c, self.field, field) for a, c in self.terms.items()}
        prec = None if self._prec is None else self._prec * k
        return TailElement(self.q, field, e, terms, prec, normalize=False)

    def _align(self, other: "TailElement") -> Tuple["TailElement", "TailElement"]:
        if self.q != other.q:
            raise FieldError(f"elements over q={self.q} and q={other.q} do not mix")
        e = _lcm(self.e, other.e)
        F = join_fields(self.field, other.field)
        return self._recast(e, F), other._recast(e, F)

    def _coerce(self, other) -> "TailElement":
        if isinstance(other, TailElement):
            return other
        if isinstance(other, int):
            return TailElement(self.q, self.field, 1, {0: self.field.from_int(other)})
        if isinstance(other, RatF):
            if not other.is_poly():
                raise PrecisionExhausted("mixing with a non-polynomial rational function needs from_ratf")
            return TailElement.from_poly(self.q, other.num)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        x, y = self._align(other)
        F = x.field
        terms = dict(x.terms)
        for a, c in y.terms.items():
            terms[a] = F.add(terms.get(a, 0), c)
        return TailElement(x.q, F, x.e, terms, _min_prec(x._prec, y._prec))

    __radd__ = __add__

    def __neg__(self) -> "TailElement":
        F = self.field
        return TailElement(self.q, F, self.e, {a: F.neg(c) for a, c in self.terms.items()}, self._prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        x, y = self._align(other)
        F = x.field
        prec = _product_prec(x, y)
        terms: Dict[int, int] = {}
        ya = sorted(y.terms.items(), reverse=True)
        for a, c in x.terms.items():
            for b, d in ya:
                s = a + b
                if prec is not None and s <= -prec:
                    break
                terms[s] = F.add(terms.get(s, 0), F.mul(c, d))
        return TailElement(x.q, F, x.e, terms, prec)

    __rmul__ = __mul__

    def scale(self, c: int, field: Optional[FiniteField] = None) -> "TailElement":
        """Multiply by a constant c of the given field (default: the element's field)."""
        if field is not None and field != self.field:
            return self * TailElement.from_ff(self.q, c, field)
        F = self.field
        return TailElement(self.q, F, self.e, {a: F.mul(c, v) for a, v in self.terms.items()}, self._prec)

    def inverse(self, target: Optional[Number] = None) -> "TailElement":
        """1/x, known to O(t^{-target}) at most; the input precision may cap it lower."""
        if not self.terms:
            raise PrecisionExhausted("cannot invert an element indistinguishable from 0")
        F = self.field
        lead = self.lead_units
        c_inv = F.inv(self.lc())
        if len(self.terms) == 1 and self._prec is None:
            return TailElement(self.q, F, self.e, {-lead: c_inv})
        cap = None if target is None else _units(target, self.e)
        prec = None if self._prec is None else self._prec + 2 * lead
        prec = _min_prec(prec, cap)
        if prec is None:
            raise PrecisionExhausted("inverting an exact non-monomial needs a target precision")
        lower = sorted(((a, c) for a, c in self.terms.items() if a < lead), reverse=True)
        y: Dict[int, int] = {}
        m = -lead
        while m > -prec:
            acc = 1 if m == -lead else 0
            for a, c in lower:
                b = m + lead - a
                yb = y.get(b)
                if yb:
                    acc = F.sub(acc, F.mul(c, yb))
            if acc:
                y[m] = F.mul(c_inv, acc)
            m -= 1
        return TailElement(self.q, F, self.e, y, prec)

    def div(self, other: "TailElement", target: Optional[Number] = None) -> "TailElement":
        if target is not None and self.terms:
            target = Fraction(target) + self.lead
        return self * other.inverse(target)

    def frob(self) -> "TailElement":
        """x^p."""
        F, p = self.field, self.field.p
        terms = {a * p: F.frob(c) for a, c in self.terms.items()}
        prec = None if self._prec is None else self._prec * p
        return TailElement(self.q, F, self.e, terms, prec)

    def qpow(self) -> "TailElement":
        """The q-power Frobenius x^q."""
        y = self
        for _ in range(prime_power(self.q)[1]):
            y = y.frob()
        return y

    def __pow__(self, n: int) -> "TailElement":
        if n < 0:
            return self.inverse() ** (-n)
        p = self.field.p
        frobs = 0
        while n and n % p == 0:
            n //= p
            frobs += 1
        result = TailElement(self.q, self.field, 1, {0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        for _ in range(frobs):
            result = result.frob()
        return result

    # truncation and comparison

    def truncate(self, prec: Number) -> "TailElement":
        cap = _units(prec, self.e)
        return TailElement(self.q, self.field, self.e, self.terms, _min_prec(self._prec, cap))

    def exact(self) -> "TailElement":
        """Drop the error term, treating the known terms as exact."""
        return TailElement(self.q, self.field, self.e, self.terms, None)

    def with_relative(self, rel: Number) -> "TailElement":
        """Keep only exponents within rel of the leading one."""
        if not self.terms:
            return self
        cut = _units(rel, self.e) - self.lead_units
        return TailElement(self.q, self.field, self.e, self.terms, _min_prec(self._prec, cut))

    def agrees(self, other, prec: Optional[Number] = None) -> bool:
        """True when the difference has no known terms (above O(t^{-prec}) if given)."""
        diff = self - other
        if prec is not None:
            diff = diff.truncate(prec)
        return diff.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, TailElement):
            return NotImplemented
        x, y = self._align(other)
        return x.terms == y.terms and x._prec == y._prec

    def __hash__(self) -> int:
        return hash((self.q, self.e, frozenset(self.terms.items()), self._prec))

    # roots

    def nth_root(self, n: int, target: Optional[Number] = None) -> "TailElement":
        """Some y with y^n = x; the leading coefficient is the least root in the smallest field."""
        if n < 1:
            raise DmfError("root index must be positive")
        if not self.terms:
            if self._prec is None:
                return self
            raise PrecisionExhausted("root of an element indistinguishable from 0")
        p = self.field.p
        x = self
        while n % p == 0:
            x = x._inverse_frob()
            n //= p
        if n == 1:
            return x
        return x._coprime_root(n, target)

    def _inverse_frob(self) -> "TailElement":
        F = self.field
        back = F.order // F.p
        terms = {a: F.pow(c, back) for a, c in self.terms.items()}
        return TailElement(self.q, F, self.e * F.p, terms, self._prec)

    def _coprime_root(self, m: int, target: Optional[Number]) -> "TailElement":
        lead = self.lead_units
        g = gcd(lead, m)
        E = self.e * m // g
        x = self._recast(E, self.field)
        L = x.lead_units
        ly = L // m
        root, F = _least_root(x.lc(), m, x.field)
        x = x._recast(E, F)
        start = TailElement(self.q, F, E, {ly: root}, normalize=False)
        if len(x.terms) == 1 and x._prec is None:
            return TailElement(self.q, F, E, {ly: root})
        if x._prec is None:
            if target is None:
                raise PrecisionExhausted("root of an exact non-monomial needs a target precision")
            prec = _units(target, E)
        else:
            prec = x._prec + (m - 1) * ly
            if target is not None:
                prec = min(prec, _units(target, E))
        inv_m = F.inv(F.from_int(m))
        y = start
        for _ in range(_MAX_NEWTON_STEPS):
            correction = x * (y ** (m - 1)).inverse(Fraction(prec + L, E))
            nxt = ((y.scale(F.from_int(m - 1)) + correction).scale(inv_m)).truncate(Fraction(prec, E)).exact()
            if nxt == y:
                break
            y = nxt
        else:
            raise PrecisionExhausted(f"Newton iteration for an {m}-th root did not settle")
        result = TailElement(self.q, F, y.e, y.terms, None).truncate(Fraction(prec, E))
        residual = result**m - x
        if not residual.is_zero():
            raise PrecisionExhausted(f"{m}-th root residual {residual.to_text()} is not O(t^{{-{residual.prec}}})")
        return result

    # rendering

    def to_text(self) -> str:
        parts = []
        for a in sorted(self.terms, reverse=True):
            parts.append(_format_term(self.field, self.terms[a], Fraction(a, self.e)))
        if self._prec is not None:
            parts.append(f"O(t^{{{-self.prec}}})")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "field": [self.field.p, self.field.n],
            "terms": [[str(Fraction(a, self.e)), self.terms[a]] for a in sorted(self.terms, reverse=True)],
            "prec": None if self._prec is None else str(self.prec),
        }

    def __repr__(self) -> str:
        return f"TailElement({self.to_text()})"


def _product_prec(x: TailElement, y: TailElement) -> Optional[int]:
    if x.terms and y.terms:
        cands = []
        if y._prec is not None:
            cands.append(y._prec - x.lead_units)
        if x._prec is not None:
            cands.append(x._prec - y.lead_units)
        return min(cands) if cands else None
    if x.terms:
        return None if y._prec is None else y._prec - x.lead_units
    if y.terms:
        return None if x._prec is None else x._prec - y.lead_units
    if x._prec is None or y._prec is None:
        # an exact zero annihilates the other factor
        return None
    return x._prec + y._prec


def _least_root(c: int, m: int, field: FiniteField) -> Tuple[int, FiniteField]:
    for j in range(1, m + 1):
        if field.p ** (field.n * j) > MAX_FIELD_ORDER:
            break
        F = get_field(field.p, field.n * j)
        roots = F.nth_roots(embed(c, field, F), m)
        if roots:
            if j > 1:
                logger.debug("extended coefficients to F_%d^%d for an %d-th root", F.p, F.n, m)
            return roots[0], F
    raise NoRootError(f"{field.format(c)} has no {m}-th root in any supported extension of {field}")


def _format_term(field: FiniteField, c: int, exponent: Fraction) -> str:
    cs = field.format(c)
    if field.n > 1 and "+" in cs:
        cs = f"({cs})"
    if exponent == 0:
        return cs
    mono = "t" if exponent == 1 else f"t^{{{exponent}}}"
    return mono if c == 1 else f"{cs}*{mono}"


class TailRing:
    """Domain-protocol adapter so MPoly and AdditivePolynomial can run over TailElements."""

    def __init__(self, q: int, prec: Optional[Number] = None):
        self.q = q
        self.prec = None if prec is None else Fraction(prec)
        self.zero = TailElement.zero(q)
        self.one = TailElement.one(q)

    def add(self, a: TailElement, b: TailElement) -> TailElement:
        return a + b

    def sub(self, a: TailElement, b: TailElement) -> TailElement:
        return a - b

    def neg(self, a: TailElement) -> TailElement:
        return -a

    def mul(self, a: TailElement, b: TailElement) -> TailElement:
        return a * b

    def pow(self, a: TailElement, n: int) -> TailElement:
        return a**n

    def inv(self, a: TailElement) -> TailElement:
        return a.inverse()

    def is_zero(self, a: TailElement) -> bool:
        return a.is_exact() and a.is_zero()

    def from_int(self, n: int) -> TailElement:
        return TailElement.from_int(self.q, n)

    def from_ff(self, c: int) -> TailElement:
        return TailElement.from_ff(self.q, c)

    def from_ratf(self, x: RatF) -> TailElement:
        return TailElement.from_ratf(self.q, x, self.prec)

    def div_poly(self, x: TailElement, a) -> TailElement:
        """x / a for a nonzero polynomial a in F_q[t]."""
        if not a:
            raise FieldError("division by the zero polynomial")
        d = TailElement.from_poly(self.q, a)
        if x.is_exact():
            if not x.terms:
                return x
            if self.prec is None:
                raise PrecisionExhausted("dividing an exact element needs a ring precision")
            result_prec = self.prec
        else:
            result_prec = x.prec + a.degree
        if not x.terms:
            return TailElement.zero(self.q, result_prec)
        return (x * d.inverse(result_prec + x.lead)).truncate(result_prec)

    def negligible(self, a: TailElement) -> bool:
        """No known terms: zero at the precision a carries."""
        return a.is_zero()


def sum_tails(q: int, values: Iterable[TailElement]) -> TailElement:
    total = TailElement.zero(q)
    for v in values:
        total = total + v
    return total
