"""Sparse multivariate polynomials over a base_arith domain."""
from __future__ import annotations

from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

Exps = Tuple[int, ...]


class MPoly:
    """sum c * prod x_i^{e_i}, keyed by exponent tuples of a fixed length."""

    __slots__ = ("domain", "nvars", "terms")

    def __init__(self, domain, nvars: int, terms: Optional[Dict[Exps, object]] = None):
        self.domain = domain
        self.nvars = nvars
        self.terms: Dict[Exps, object] = {}
        for exps, c in (terms or {}).items():
            if not domain.is_zero(c):
                self.terms[tuple(exps)] = c

    @classmethod
    def zero(cls, domain, nvars: int) -> "MPoly":
        return cls(domain, nvars)

    @classmethod
    def constant(cls, domain, nvars: int, c) -> "MPoly":
        return cls(domain, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, domain, nvars: int, i: int, power: int = 1) -> "MPoly":
        exps = [0] * nvars
        exps[i] = power
        return cls(domain, nvars, {tuple(exps): domain.one})

    @classmethod
    def monomial(cls, domain, exps: Sequence[int], c=None) -> "MPoly":
        return cls(domain, len(exps), {tuple(exps): domain.one if c is None else c})

    def _like(self, terms: Dict[Exps, object]) -> "MPoly":
        out = MPoly.__new__(MPoly)
        out.domain, out.nvars, out.terms = self.domain, self.nvars, terms
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.domain.zero)

    def __add__(self, other: "MPoly") -> "MPoly":
        D = self.domain
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            if exps in terms:
                s = D.add(terms[exps], c)
                if D.is_zero(s):
                    del terms[exps]
                else:
                    terms[exps] = s
            else:
                terms[exps] = c
        return self._like(terms)

    def __neg__(self) -> "MPoly":
        D = self.domain
        return self._like({e: D.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def scale(self, c) -> "MPoly":
        D = self.domain
        if D.is_zero(c):
            return self._like({})
        return self._like({e: D.mul(c, a) for e, a in self.terms.items()})

    def __mul__(self, other: "MPoly") -> "MPoly":
        D = self.domain
        terms: Dict[Exps, object] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                prod = D.mul(ca, cb)
                if exps in terms:
                    terms[exps] = D.add(terms[exps], prod)
                else:
                    terms[exps] = prod
        return self._like({e: c for e, c in terms.items() if not D.is_zero(c)})

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.constant(self.domain, self.nvars, self.domain.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms))

    def derivative(self, i: int) -> "MPoly":
        D = self.domain
        terms = {}
        for exps, c in self.terms.items():
            if exps[i]:
                d = D.mul(D.from_int(exps[i]), c)
                if not D.is_zero(d):
                    lowered = list(exps)
                    lowered[i] -= 1
                    terms[tuple(lowered)] = d
        return self._like(terms)

    def ord_in(self, i: int) -> float:
        if not self.terms:
            return float("inf")
        return min(exps[i] for exps in self.terms)

    def degree_in(self, i: int) -> float:
        if not self.terms:
            return float("-inf")
        return max(exps[i] for exps in self.terms)

    def total_degree(self) -> float:
        if not self.terms:
            return float("-inf")
        return max(sum(exps) for exps in self.terms)

    def variables_used(self) -> List[int]:
        return [i for i in range(self.nvars) if any(exps[i] for exps in self.terms)]

    def coefficient_in(self, i: int, power: int) -> "MPoly":
        """The coefficient of x_i^power, as a polynomial in the other variables."""
        terms = {}
        for exps, c in self.terms.items():
            if exps[i] == power:
                lowered = list(exps)
                lowered[i] = 0
                terms[tuple(lowered)] = c
        return self._like(terms)

    def map_coeffs(self, fn: Callable, domain=None) -> "MPoly":
        return MPoly(domain or self.domain, self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def evaluate(self, values: Sequence, ring, coerce: Callable = lambda c: c):
        """Substitute values[i] for x_i; ring supplies zero, one, add, mul and pow."""
        cache: Dict[Tuple[int, int], object] = {}

        def power(i: int, e: int):
            key = (i, e)
            if key not in cache:
                cache[key] = ring.pow(values[i], e)
            return cache[key]

        total = ring.zero
        for exps, c in sorted(self.terms.items()):
            term = coerce(c)
            for i, e in enumerate(exps):
                if e:
                    term = ring.mul(term, power(i, e))
            total = ring.add(total, term)
        return total

    def sorted_terms(self) -> List[Tuple[Exps, object]]:
        """Terms in descending lexicographic exponent order."""
        return sorted(self.terms.items(), key=lambda item: item[0], reverse=True)

    def format(self, names: Optional[Iterable[str]] = None, fmt: Callable = str) -> str:
        names = list(names) if names is not None else [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
            cs = fmt(c)
            if not factors:
                parts.append(cs)
            elif c == self.domain.one:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([f"({cs})" if "+" in cs or "/" in cs else cs] + factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MPoly({self.format()})"


class PolyRing:
    """domain[x_0, ..., x_{n-1}] behind the add/mul/pow interface used by the ring-agnostic checks."""

    def __init__(self, domain, nvars: int):
        self.domain = domain
        self.nvars = nvars
        self.zero = MPoly.zero(domain, nvars)
        self.one = MPoly.constant(domain, nvars, domain.one)

    def __repr__(self) -> str:
        return f"PolyRing({self.domain!r}, nvars={self.nvars})"

    def var(self, i: int) -> MPoly:
        return MPoly.var(self.domain, self.nvars, i)

    def gens(self) -> List[MPoly]:
        return [self.var(i) for i in range(self.nvars)]

    def add(self, a: MPoly, b: MPoly) -> MPoly:
        return a + b

    def sub(self, a: MPoly, b: MPoly) -> MPoly:
        return a - b

    def neg(self, a: MPoly) -> MPoly:
        return -a

    def mul(self, a: MPoly, b: MPoly) -> MPoly:
        return a * b

    def pow(self, a: MPoly, n: int) -> MPoly:
        return a**n

    def is_zero(self, a: MPoly) -> bool:
        return a.is_zero()

    def from_int(self, n: int) -> MPoly:
        return MPoly.constant(self.domain, self.nvars, self.domain.from_int(n))

    def from_ff(self, c: int) -> MPoly:
        lift = getattr(self.domain, "from_ff", None)
        return MPoly.constant(self.domain, self.nvars, c if lift is None else lift(c))

    def constant(self, c) -> MPoly:
        return MPoly.constant(self.domain, self.nvars, c)

    def div_poly(self, a: MPoly, poly) -> MPoly:
        """a / poly for a domain that divides by elements of F_q[t]."""
        return a.map_coeffs(lambda c: self.domain.div_poly(c, poly))
