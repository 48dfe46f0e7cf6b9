"""Exact arithmetic over F_{p^n}, A = F_q[t], F = F_q(t) and k0 = F_q(lambda).

Finite-field elements are plain ints: sum d_i g^i in F_{p^n} is stored as sum d_i p^i,
which is also the integer representation galois uses, so values pass to galois as-is.
"""
from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, List, Optional, Protocol, Sequence, Tuple

import galois
import numpy as np
import sympy

from src.dmf.errors import FieldError, ModeError

logger = logging.getLogger("dmf.base_arith")

NEG_INF = float("-inf")
MAX_FIELD_ORDER = 1 << 16
_ADD_TABLE_LIMIT = 243


class Domain(Protocol):
    """The ring interface shared by FiniteField and CoeffField."""

    zero: object
    one: object

    def add(self, a, b): ...

    def sub(self, a, b): ...

    def neg(self, a): ...

    def mul(self, a, b): ...

    def pow(self, a, n: int): ...

    def is_zero(self, a) -> bool: ...

    def from_int(self, n: int): ...


@functools.lru_cache(maxsize=None)
def prime_power(q: int) -> Tuple[int, int]:
    """Return (p, e) with q = p^e, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise FieldError(f"{q} is not a prime power")
    ((p, e),) = factors.items()
    return int(p), int(e)


def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


class FiniteField:
    """F_{p^n} over the lexicographically least irreducible modulus.

    Scalar arithmetic goes through log/exp tables read off the matching galois field class.
    """

    def __init__(self, p: int, n: int = 1):
        if not sympy.isprime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if n < 1:
            raise FieldError(f"extension degree {n} must be positive")
        order = p**n
        if order > MAX_FIELD_ORDER:
            raise FieldError(f"F_{p}^{n} exceeds the supported field size {MAX_FIELD_ORDER}")
        self.p = p
        self.n = n
        self.order = order
        self.zero = 0
        self.one = 1
        self.modulus = self._defining_poly()
        self.gf = self._galois_class()
        self.gen = self._primitive_element()
        self._exp, self._log = self._tables()
        self._add = self._add_table() if p != 2 and n > 1 and order <= _ADD_TABLE_LIMIT else None
        logger.debug("built F_%d^%d with modulus %s and generator %d", p, n, self.modulus, self.gen)

    def __repr__(self) -> str:
        return f"FiniteField({self.p}, {self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.n) == (other.p, other.n)

    def __hash__(self) -> int:
        return hash((self.p, self.n))

    # construction

    def _defining_poly(self) -> Tuple[int, ...]:
        if self.n == 1:
            return (0, 1)
        poly = galois.irreducible_poly(self.p, self.n, method="min")
        if not poly.is_irreducible():
            raise FieldError(f"defining polynomial {poly} of F_{self.p}^{self.n} is reducible")
        return tuple(int(c) for c in reversed(poly.coeffs))

    def digits(self, a: int) -> List[int]:
        out = []
        for _ in range(self.n):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def from_digits(self, ds: Sequence[int]) -> int:
        v = 0
        for d in reversed(ds):
            v = v * self.p + d % self.p
        return v

    def _galois_class(self):
        """The galois field class on the same modulus, so integer encodings agree."""
        if self.n == 1:
            return galois.GF(self.p)
        poly = galois.Poly(list(reversed(self.modulus)), field=galois.GF(self.p))
        return galois.GF(self.order, irreducible_poly=poly)

    def _primitive_element(self) -> int:
        """The least integer whose multiplicative order is order - 1."""
        group = self.order - 1
        if group == 1:
            return 1
        for c in range(2, self.order):
            if int(self.gf(c).multiplicative_order()) == group:
                return c
        raise FieldError(f"no primitive element found in F_{self.p}^{self.n}")

    def _tables(self) -> Tuple[List[int], List[int]]:
        group = self.order - 1
        exp = [int(x) for x in self.gf(self.gen) ** np.arange(group)]
        log = [-1] * self.order
        for i, v in enumerate(exp):
            log[v] = i
        return exp, log

    def _add_table(self) -> List[int]:
        elems = self.gf(np.arange(self.order))
        table = elems[:, np.newaxis] + elems[np.newaxis, :]
        return [int(x) for x in table.ravel()]

    # ring interface

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a * self.order + b]
        return int(self.gf(a) + self.gf(b))

    def neg(self, a: int) -> int:
        if self.p == 2 or not a:
            return a
        if self.n == 1:
            return (-a) % self.p
        return int(-self.gf(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if not a:
            raise FieldError(f"division by zero in F_{self.p}^{self.n}")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if not a:
            if k > 0:
                return 0
            if k == 0:
                return 1
            raise FieldError(f"division by zero in F_{self.p}^{self.n}")
        return self._exp[(self._log[a] * k) % (self.order - 1)]

    def frob(self, a: int) -> int:
        return self.pow(a, self.p)

    def is_zero(self, a: int) -> bool:
        return a == 0

    def from_int(self, k: int) -> int:
        return k % self.p

    def log(self, a: int) -> int:
        if not a:
            raise FieldError("log of zero")
        return self._log[a]

    def exp(self, i: int) -> int:
        return self._exp[i % (self.order - 1)]

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> range:
        return range(1, self.order)

    def in_subfield(self, a: int, d: int) -> bool:
        return self.pow(a, self.p**d) == a

    def nth_roots(self, a: int, n: int) -> List[int]:
        """All y with y^n = a, sorted by integer representation."""
        if n <= 0:
            raise FieldError("root index must be positive")
        if not a:
            return [0]
        group = self.order - 1
        la = self._log[a]
        g = gcd(n, group)
        if la % g:
            return []
        m = group // g
        j0 = (la // g) * pow(n // g, -1, m) % m if m > 1 else 0
        return sorted(self._exp[(j0 + i * m) % group] for i in range(g))

    def format(self, a: int) -> str:
        if self.n == 1:
            return str(a)
        if not a:
            return "0"
        parts = []
        for i, d in reversed(list(enumerate(self.digits(a)))):
            if not d:
                continue
            if i == 0:
                parts.append(str(d))
            else:
                mono = "g" if i == 1 else f"g^{i}"
                parts.append(mono if d == 1 else f"{d}*{mono}")
        return "+".join(parts)

    def parse(self, text: str) -> int:
        text = text.replace(" ", "")
        if not text:
            raise FieldError("empty field element")
        if "g" not in text:
            v = int(text)
            if not 0 <= v < self.order:
                raise FieldError(f"{v} is not an element of F_{self.p}^{self.n}")
            return v
        ds = [0] * self.n
        for term in text.split("+"):
            coeff, _, mono = term.rpartition("*") if "*" in term else ("1", "", term)
            if "g" not in mono:
                ds[0] += int(term)
                continue
            power = int(mono.split("^")[1]) if "^" in mono else 1
            if power >= self.n:
                raise FieldError(f"g^{power} is not reduced in F_{self.p}^{self.n}")
            ds[power] += int(coeff)
        return self.from_digits(ds)


@functools.lru_cache(maxsize=None)
def get_field(p: int, n: int = 1) -> FiniteField:
    return FiniteField(p, n)


def join_fields(a: FiniteField, b: FiniteField) -> FiniteField:
    if a.p != b.p:
        raise FieldError(f"fields of characteristic {a.p} and {b.p} do not mix")
    if a.n == b.n:
        return a
    return get_field(a.p, a.n * b.n // gcd(a.n, b.n))


@functools.lru_cache(maxsize=None)
def _embedding_table(p: int, a: int, c: int) -> Tuple[int, ...]:
    """Images of F_{p^a} in F_{p^c}, compatible with every intermediate subfield."""
    if a == 1:
        return tuple(range(p))
    src, dst = get_field(p, a), get_field(p, c)
    if a == c:
        return tuple(range(src.order))
    step = (dst.order - 1) // (src.order - 1)
    candidates = sorted(dst.exp(j * step) for j in range(src.order - 1))
    checks = [d for d in _divisors(a) if 1 < d < a]
    for rho in candidates:
        value = 0
        for coeff in reversed(src.modulus):
            value = dst.add(dst.mul(value, rho), coeff)
        if value:
            continue
        powers = [1]
        for _ in range(1, a):
            powers.append(dst.mul(powers[-1], rho))
        table = []
        for y in range(src.order):
            acc = 0
            for d, pw in zip(src.digits(y), powers):
                if d:
                    acc = dst.add(acc, dst.mul(d, pw))
            table.append(acc)
        if all(table[_embedding_table(p, d, a)[p]] == _embedding_table(p, d, c)[p] for d in checks):
            return tuple(table)
    raise FieldError(f"no compatible embedding of F_{p}^{a} into F_{p}^{c}")


def embed(x: int, src: FiniteField, dst: FiniteField) -> int:
    if src.n == dst.n:
        return x
    if dst.n % src.n:
        raise FieldError(f"{src} is not a subfield of {dst}")
    return _embedding_table(src.p, src.n, dst.n)[x]


def galois_field(p: int, n: int = 1):
    """The galois field class whose integer representation matches get_field(p, n)."""
    return get_field(p, n).gf


@dataclass(frozen=True)
class FFElement:
    """Operator wrapper around an int element of a FiniteField."""

    field: FiniteField
    value: int

    def _pair(self, other) -> Tuple[FiniteField, int, int]:
        if isinstance(other, int):
            return self.field, self.value, self.field.from_int(other)
        if not isinstance(other, FFElement):
            return NotImplemented
        f = join_fields(self.field, other.field)
        return f, embed(self.value, self.field, f), embed(other.value, other.field, f)

    def __add__(self, other):
        f, a, b = self._pair(other)
        return FFElement(f, f.add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        f, a, b = self._pair(other)
        return FFElement(f, f.sub(a, b))

    def __neg__(self):
        return FFElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        f, a, b = self._pair(other)
        return FFElement(f, f.mul(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        f, a, b = self._pair(other)
        return FFElement(f, f.div(a, b))

    def __pow__(self, k: int):
        return FFElement(self.field, self.field.pow(self.value, k))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FFElement)):
            f, a, b = self._pair(other)
            return a == b
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def inverse(self) -> "FFElement":
        return FFElement(self.field, self.field.inv(self.value))

    def frob(self) -> "FFElement":
        return FFElement(self.field, self.field.frob(self.value))

    def __str__(self) -> str:
        return self.field.format(self.value)


class PolyA:
    """An element of A = F_q[t]: dense ascending coefficients, no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def t(cls, field: FiniteField) -> "PolyA":
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field: FiniteField, c: int) -> "PolyA":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: FiniteField, degree: int, c: int = 1) -> "PolyA":
        return cls(field, [0] * degree + [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_monic(self) -> bool:
        return self.lc() == 1

    def monic(self) -> "PolyA":
        if not self.coeffs or self.lc() == 1:
            return self
        return self.scale(self.field.inv(self.lc()))

    def scale(self, c: int) -> "PolyA":
        F = self.field
        return PolyA(F, [F.mul(c, a) for a in self.coeffs])

    def shift(self, k: int) -> "PolyA":
        if not self.coeffs:
            return self
        return PolyA(self.field, [0] * k + list(self.coeffs))

    def _coerce(self, other) -> "PolyA":
        if isinstance(other, PolyA):
            if other.field != self.field:
                raise FieldError(f"polynomials over {self.field} and {other.field} do not mix")
            return other
        if isinstance(other, int):
            return PolyA(self.field, (self.field.from_int(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return PolyA(F, out)

    __radd__ = __add__

    def __neg__(self) -> "PolyA":
        F = self.field
        return PolyA(F, [F.neg(c) for c in self.coeffs])

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
        if not self.coeffs or not other.coeffs:
            return PolyA(self.field)
        F = self.field
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return PolyA(F, out)

    __rmul__ = __mul__

    def __divmod__(self, other) -> Tuple["PolyA", "PolyA"]:
        other = self._coerce(other)
        if not other.coeffs:
            raise FieldError("division by the zero polynomial")
        F = self.field
        rem = list(self.coeffs)
        dg = len(other.coeffs) - 1
        inv_lc = F.inv(other.lc())
        quot = [0] * max(len(rem) - dg, 0)
        for i in range(len(rem) - 1, dg - 1, -1):
            c = rem[i]
            if not c:
                continue
            c = F.mul(c, inv_lc)
            quot[i - dg] = c
            for j, b in enumerate(other.coeffs):
                rem[i - dg + j] = F.sub(rem[i - dg + j], F.mul(c, b))
        return PolyA(F, quot), PolyA(F, rem[:dg])

    def __floordiv__(self, other) -> "PolyA":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "PolyA":
        return divmod(self, other)[1]

    def __pow__(self, n: int) -> "PolyA":
        if n < 0:
            raise FieldError("negative power of a polynomial")
        result, base = PolyA(self.field, (1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def compose(self, other):
        """self(other) for other a PolyA or RatF."""
        acc = other * 0
        for c in reversed(self.coeffs):
            acc = acc * other + PolyA(self.field, (c,))
        return acc

    def derivative(self) -> "PolyA":
        F = self.field
        return PolyA(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = PolyA(self.field, (self.field.from_int(other),))
        if not isinstance(other, PolyA):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.n, self.coeffs))

    def __repr__(self) -> str:
        return f"PolyA({self.to_text()})"

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    @classmethod
    def from_text(cls, field: FiniteField, text: str) -> "PolyA":
        """Either a coefficient list 'c0,c1,...' or an expression in t such as 't^2 + 1'."""
        text = text.replace(" ", "")
        if "t" in text:
            return cls._from_expression(field, text)
        try:
            coeffs = [int(c) for c in text.split(",") if c != ""]
        except ValueError:
            raise FieldError(f"malformed polynomial {text!r}; expected coefficients 'c0,c1,...'")
        if any(not 0 <= c < field.order for c in coeffs):
            raise FieldError(f"coefficient out of range in {text!r}")
        return cls(field, coeffs)

    @classmethod
    def _from_expression(cls, field: FiniteField, text: str) -> "PolyA":
        t = sympy.Symbol("t")
        try:
            expr = sympy.sympify(text.replace("^", "**"), locals={"t": t})
            poly = sympy.Poly(expr, t)
        except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
            raise FieldError(f"malformed polynomial {text!r}: {exc}")
        coeffs = []
        for c in reversed(poly.all_coeffs()):
            if not c.is_Integer:
                raise FieldError(f"non-integer coefficient {c} in {text!r}")
            c = int(c)
            if field.n == 1:
                c %= field.p
            elif not 0 <= c < field.order:
                raise FieldError(f"coefficient {c} in {text!r} is not an element code of F_{field.order}")
            coeffs.append(c)
        return cls(field, coeffs)

    def to_galois(self):
        GF = galois_field(self.field.p, self.field.n)
        return galois.Poly(list(reversed(self.coeffs)) or [0], field=GF)

    @classmethod
    def from_galois(cls, field: FiniteField, poly) -> "PolyA":
        return cls(field, [int(c) for c in reversed(poly.coeffs)])

    def factor(self) -> Tuple[int, List[Tuple["PolyA", int]]]:
        """(unit, [(monic irreducible, multiplicity), ...]) sorted by degree then coefficients."""
        if not self.coeffs:
            raise FieldError("cannot factor the zero polynomial")
        if self.degree == 0:
            return self.lc(), []
        factors, mults = self.monic().to_galois().factors()
        out = [(PolyA.from_galois(self.field, f), int(k)) for f, k in zip(factors, mults)]
        out.sort(key=lambda fk: (fk[0].degree, fk[0].coeffs))
        return self.lc(), out

    def is_irreducible(self) -> bool:
        if not self.coeffs or self.degree < 1:
            return False
        return bool(self.monic().to_galois().is_irreducible())

    def valuation(self, pi: "PolyA") -> int:
        if not self.coeffs:
            raise FieldError("valuation of zero")
        v, f = 0, self
        while True:
            quot, rem = divmod(f, pi)
            if rem:
                return v
            v, f = v + 1, quot


def poly_gcd(a: PolyA, b: PolyA) -> PolyA:
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: PolyA, b: PolyA) -> Tuple[PolyA, PolyA, PolyA]:
    """(g, s, u) with s*a + u*b = g and g monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = PolyA(F, (1,)), PolyA(F)
    u0, u1 = PolyA(F), PolyA(F, (1,))
    while r1:
        quot, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quot * s1
        u0, u1 = u1, u0 - quot * u1
    if not r0:
        return r0, s0, u0
    c = F.inv(r0.lc())
    return r0.scale(c), s0.scale(c), u0.scale(c)


def inverse_mod(a: PolyA, m: PolyA) -> PolyA:
    g, s, _ = poly_xgcd(a % m, m)
    if not g.is_one():
        raise FieldError(f"{a.to_text()} is not invertible modulo {m.to_text()}")
    return s % m


def monic_polys(field: FiniteField, degree: int) -> Iterator[PolyA]:
    for tail in itertools.product(range(field.order), repeat=degree):
        yield PolyA(field, tail + (1,))


def polys_below(field: FiniteField, degree: int) -> Iterator[PolyA]:
    """All polynomials of degree < degree, zero first, in lexicographic coefficient order."""
    for cs in itertools.product(range(field.order), repeat=max(degree, 0)):
        yield PolyA(field, cs)


def monic_irreducibles(field: FiniteField, degree: int) -> Iterator[PolyA]:
    for f in monic_polys(field, degree):
        if f.is_irreducible():
            yield f


class RatF:
    """An element of F = F_q(t): num/den in lowest terms with den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: PolyA, den: Optional[PolyA] = None):
        if den is None:
            den = PolyA(num.field, (1,))
        if not den:
            raise FieldError("zero denominator")
        if not num:
            self.num, self.den = num, PolyA(num.field, (1,))
            return
        if not den.is_one():
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num // g, den // g
            if not den.is_monic():
                c = num.field.inv(den.lc())
                num, den = num.scale(c), den.scale(c)
        self.num, self.den = num, den

    @classmethod
    def from_int(cls, field: FiniteField, k: int) -> "RatF":
        return cls(PolyA(field, (field.from_int(k),)))

    @classmethod
    def from_ff(cls, field: FiniteField, c: int) -> "RatF":
        return cls(PolyA(field, (c,)))

    @classmethod
    def t(cls, field: FiniteField) -> "RatF":
        return cls(PolyA.t(field))

    @property
    def field(self) -> FiniteField:
        return self.num.field

    @property
    def degree(self):
        if not self.num:
            return NEG_INF
        return self.num.degree - self.den.degree

    def lc(self) -> int:
        return self.num.lc()

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_poly(self) -> bool:
        return self.den.is_one()

    def _coerce(self, other) -> "RatF":
        if isinstance(other, RatF):
            return other
        if isinstance(other, PolyA):
            return RatF(other)
        if isinstance(other, int):
            return RatF.from_int(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatF(self.num + other.num, self.den)
        return RatF(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatF":
        return RatF(-self.num, self.den)

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
        return RatF(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatF":
        if not self.num:
            raise FieldError("division by zero in F_q(t)")
        return RatF(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "RatF":
        if n < 0:
            return self.inverse() ** (-n)
        return RatF(self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatF({self.to_text()})"

    def poly_part(self) -> Tuple[PolyA, "RatF"]:
        """Split into polynomial part and a part of negative degree."""
        quot, rem = divmod(self.num, self.den)
        return quot, RatF(rem, self.den)

    def substitute(self, x: "RatF") -> "RatF":
        return self.num.compose(x) / self.den.compose(x)

    def valuation(self, pi: PolyA) -> int:
        return self.num.valuation(pi) - self.den.valuation(pi)

    def to_text(self) -> str:
        if self.den.is_one():
            return self.num.to_text()
        return f"{self.num.to_text()}/{self.den.to_text()}"

    @classmethod
    def from_text(cls, field: FiniteField, text: str) -> "RatF":
        num, _, den = str(text).partition("/")
        d = PolyA.from_text(field, den) if den else None
        return cls(PolyA.from_text(field, num), d)


def ratf_gcd(a: RatF, b: RatF) -> RatF:
    """Monic generator of the fractional ideal aA + bA."""
    if not a:
        return b * RatF.from_ff(b.field, b.field.inv(b.lc())) if b else b
    if not b:
        return a * RatF.from_ff(a.field, a.field.inv(a.lc()))
    den = a.den * b.den // poly_gcd(a.den, b.den)
    na = (a * RatF(den)).num
    nb = (b * RatF(den)).num
    return RatF(poly_gcd(na, nb), den)


class CoeffField:
    """k0: plain F_q(t), or extended F_q(lambda) with t = -lambda^(q-1)."""

    def __init__(self, q: int, extended: bool = False):
        self.q = q
        self.p, self.e = prime_power(q)
        self.base = get_field(self.p, self.e)
        self.extended = extended
        self.zero = RatF.from_int(self.base, 0)
        self.one = RatF.from_int(self.base, 1)

    def __repr__(self) -> str:
        return f"CoeffField(q={self.q}, extended={self.extended})"

    def __eq__(self, other) -> bool:
        return isinstance(other, CoeffField) and (self.q, self.extended) == (other.q, other.extended)

    def __hash__(self) -> int:
        return hash((self.q, self.extended))

    @property
    def var(self) -> str:
        return "lambda" if self.extended else "t"

    def t(self) -> RatF:
        x = RatF.t(self.base)
        if not self.extended:
            return x
        return -(x ** (self.q - 1))

    def lam(self) -> RatF:
        if not self.extended:
            raise ModeError("lambda with lambda^(q-1) = -t needs the extended coefficient field")
        return RatF.t(self.base)

    def embed(self, x: RatF) -> RatF:
        """Map an element of F_q(t) into this field."""
        if not self.extended:
            return x
        return x.substitute(self.t())

    def add(self, a: RatF, b: RatF) -> RatF:
        return a + b

    def sub(self, a: RatF, b: RatF) -> RatF:
        return a - b

    def neg(self, a: RatF) -> RatF:
        return -a

    def mul(self, a: RatF, b: RatF) -> RatF:
        return a * b

    def inv(self, a: RatF) -> RatF:
        return a.inverse()

    def div(self, a: RatF, b: RatF) -> RatF:
        return a / b

    def pow(self, a: RatF, n: int) -> RatF:
        return a**n

    def is_zero(self, a: RatF) -> bool:
        return a.is_zero()

    def from_int(self, n: int) -> RatF:
        return RatF.from_int(self.base, n)

    def from_ff(self, c: int) -> RatF:
        return RatF.from_ff(self.base, c)

    def div_poly(self, a: RatF, poly: PolyA) -> RatF:
        return a / self.embed(RatF(poly))

    def root_in_field(self, c: RatF, n: int) -> Optional[RatF]:
        """Some y with y^n = c, or None when c is not an n-th power in this field."""
        if c.is_zero():
            return c
        units = self.base.nth_roots(c.lc(), n)
        if not units:
            return None
        parts = []
        for poly in (c.num.monic(), c.den):
            root = PolyA(self.base, (1,))
            for f, k in poly.factor()[1]:
                if k % n:
                    return None
                root = root * f ** (k // n)
            parts.append(root)
        return RatF(parts[0].scale(units[0]), parts[1])

    def format(self, a: RatF) -> str:
        return a.to_text()
