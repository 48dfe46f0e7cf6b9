"""The graded ring R_V of level (t): weight-one symbols Y_v, v in F_q^r - 0, modulo

    Y_{alpha v} = alpha^{-1} Y_v    and    Y_v Y_w = Y_{v+w} (Y_v + Y_w)   (v, w independent).

Only the projective representatives (first nonzero entry 1) are variables. Each degree
is handled separately: the degree-k slice of the relation ideal is spanned by the
quadratic relations times degree k-2 monomials, and its echelon form gives a basis of
the quotient together with a normal form for every other monomial.

Elements are kept in normal form with coefficients in k0 (F_q(t), or F_q(lambda) with
t = -lambda^(q-1) when delta_t is needed). Degrees past the slice budget go through
FunctionModel, which sends Y_v to 1/(v . x) at random points x.
"""
from __future__ import annotations

import itertools
import json
import logging
import os
import random
import threading
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.dmf.base_arith import (
    MAX_FIELD_ORDER,
    CoeffField,
    FiniteField,
    PolyA,
    RatF,
    embed,
    galois_field,
    get_field,
    prime_power,
)
from src.dmf.claims import CheckReport
from src.dmf.dim_formulas import (
    dim_cusp_gl,
    dim_gamma1_t,
    dim_gamma_t,
    dim_sl,
    dim_type_m,
    partitions_ps,
    type_shift,
)
from src.dmf.drinfeld_forms import (
    AdditivePolynomial,
    CoefficientForms,
    coefficient_recursion,
    compositional_inverse_check,
    delta_from_values,
    delta_sign,
    discriminant_relations_symbolic,
    ff_det,
    moore_product_check,
    moore_transform_check,
    psi_a,
    psi_from_values,
)
from src.dmf.errors import BudgetExceeded, DmfError, SpecError

logger = logging.getLogger("dmf.level_t_ring")

Exps = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]

GROUPS = ("GL", "SL", "U1")
DEFAULT_SLICE_BUDGET = 5_000
DEFAULT_POINTS = 3
EXHAUSTIVE_CANDIDATES = 4096


# projective frame

class ProjectiveFrame:
    """The (q^r-1)/(q-1) projective representatives of F_q^r, in lexicographic order."""

    def __init__(self, q: int, r: int):
        p, e = prime_power(q)
        self.q, self.r = q, r
        self.field = get_field(p, e)
        F = self.field
        self.reps: List[Tuple[int, ...]] = [
            v for v in itertools.product(F.elements(), repeat=r) if next((c for c in v if c), None) == 1
        ]
        self.index = {v: i for i, v in enumerate(self.reps)}
        self.n = len(self.reps)

    def normalize(self, w: Sequence[int]) -> Tuple[int, int]:
        """(i, c) with w = c * reps[i]."""
        F = self.field
        c = next((x for x in w if x), None)
        if c is None:
            raise DmfError("the zero vector has no projective class")
        inv = F.inv(c)
        return self.index[tuple(F.mul(inv, x) for x in w)], c

    def add(self, v: Sequence[int], w: Sequence[int]) -> Tuple[int, ...]:
        return tuple(self.field.add(a, b) for a, b in zip(v, w))

    def scale(self, c: int, v: Sequence[int]) -> Tuple[int, ...]:
        return tuple(self.field.mul(c, a) for a in v)

    def apply(self, v: Sequence[int], gamma: Matrix) -> Tuple[int, ...]:
        """The row vector v gamma."""
        F = self.field
        out = []
        for j in range(self.r):
            acc = 0
            for i in range(self.r):
                if v[i] and gamma[i][j]:
                    acc = F.add(acc, F.mul(v[i], gamma[i][j]))
            out.append(acc)
        return tuple(out)

    def leading_position(self, i: int) -> int:
        return next(j for j, c in enumerate(self.reps[i]) if c)


def monomials(n: int, k: int) -> Iterator[Exps]:
    """Exponent tuples of degree k in n variables, lexicographically descending."""
    if n == 1:
        yield (k,)
        return
    for a in range(k, -1, -1):
        for rest in monomials(n - 1, k - a):
            yield (a,) + rest


def monomial_count(n: int, k: int) -> int:
    return comb(k + n - 1, n - 1) if k >= 0 else 0


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


def _unit(n: int, i: int, power: int = 1) -> Exps:
    e = [0] * n
    e[i] = power
    return tuple(e)


def quadratic_relations(frame: ProjectiveFrame) -> List[Dict[Exps, int]]:
    """Y_i Y_{alpha w} - Y_{v+alpha w} (Y_i + Y_{alpha w}) over ordered pairs of representatives."""
    F, n = frame.field, frame.n
    out = []
    for i, j in itertools.permutations(range(n), 2):
        v = frame.reps[i]
        for alpha in F.units():
            w = frame.scale(alpha, frame.reps[j])
            ks, cs = frame.normalize(frame.add(v, w))
            a_inv, s_inv = F.inv(alpha), F.inv(cs)
            rel: Dict[Exps, int] = {}

            def put(exps: Exps, c: int) -> None:
                val = F.add(rel.get(exps, 0), c)
                if val:
                    rel[exps] = val
                else:
                    rel.pop(exps, None)

            put(_add_exps(_unit(n, i), _unit(n, j)), a_inv)
            put(_add_exps(_unit(n, ks), _unit(n, i)), F.neg(s_inv))
            put(_add_exps(_unit(n, ks), _unit(n, j)), F.neg(F.mul(s_inv, a_inv)))
            if rel:
                out.append(rel)
    return out


# degree slices

@dataclass
class DegreeSlice:
    """Basis monomials of the quotient in degree k and the normal form of every other monomial."""

    q: int
    r: int
    k: int
    basis: List[Exps]
    reduction: Dict[Exps, Dict[Exps, int]]
    position: Dict[Exps, int] = field(default_factory=dict)

    def __post_init__(self):
        self.position = {m: i for i, m in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce_ff(self, terms: Dict[Exps, int], F: FiniteField) -> Dict[Exps, int]:
        out: Dict[Exps, int] = {}
        for exps, c in terms.items():
            if not c:
                continue
            red = self.reduction.get(exps)
            for b, x in ((exps, 1),) if red is None else red.items():
                val = F.add(out.get(b, 0), F.mul(c, x))
                if val:
                    out[b] = val
                else:
                    out.pop(b, None)
        return out

    def vector(self, terms: Dict[Exps, int]) -> List[int]:
        row = [0] * self.dim
        for exps, c in terms.items():
            row[self.position[exps]] = c
        return row

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "r": self.r,
            "k": self.k,
            "basis": [list(m) for m in self.basis],
            "reduction": [[list(m), [[list(b), c] for b, c in red.items()]] for m, red in self.reduction.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DegreeSlice":
        return cls(
            data["q"],
            data["r"],
            data["k"],
            [tuple(m) for m in data["basis"]],
            {tuple(m): {tuple(b): c for b, c in red} for m, red in data["reduction"]},
        )


def _echelon_insert(vec: Dict[int, int], pivots: Dict[int, Dict[int, int]], F: FiniteField) -> None:
    """Reduce vec against rows whose pivot is their largest index; keep the remainder as a row."""
    while vec:
        top = max(vec)
        row = pivots.get(top)
        if row is None:
            inv = F.inv(vec[top])
            pivots[top] = {i: F.mul(inv, c) for i, c in vec.items()}
            return
        c = vec[top]
        for i, x in row.items():
            val = F.sub(vec.get(i, 0), F.mul(c, x))
            if val:
                vec[i] = val
            else:
                vec.pop(i, None)


def compute_slice(q: int, r: int, k: int, budget: int = DEFAULT_SLICE_BUDGET) -> DegreeSlice:
    if k < 0:
        raise SpecError(f"degree {k} is negative")
    frame = ProjectiveFrame(q, r)
    F, n = frame.field, frame.n
    size = monomial_count(n, k)
    if size > budget:
        raise BudgetExceeded(f"degree-{k} slice for q={q}, r={r} has too many monomials", estimate=size)
    monos = sorted(monomials(n, k))
    if k < 2:
        return DegreeSlice(q, r, k, monos, {})
    pos = {m: i for i, m in enumerate(monos)}
    pivots: Dict[int, Dict[int, int]] = {}
    relations = quadratic_relations(frame)
    for m in monomials(n, k - 2):
        for rel in relations:
            vec: Dict[int, int] = {}
            for e, c in rel.items():
                idx = pos[_add_exps(m, e)]
                val = F.add(vec.get(idx, 0), c)
                if val:
                    vec[idx] = val
                else:
                    vec.pop(idx, None)
            _echelon_insert(vec, pivots, F)
    normal: Dict[int, Dict[int, int]] = {}
    for top in sorted(pivots):
        acc: Dict[int, int] = {}
        for i, c in pivots[top].items():
            if i == top:
                continue
            for b, x in normal.get(i, {i: 1}).items():
                val = F.sub(acc.get(b, 0), F.mul(c, x))
                if val:
                    acc[b] = val
                else:
                    acc.pop(b, None)
        normal[top] = acc
    basis = [m for i, m in enumerate(monos) if i not in pivots]
    reduction = {monos[top]: {monos[b]: c for b, c in red.items()} for top, red in normal.items()}
    logger.debug("slice q=%d r=%d k=%d: %d monomials, dimension %d", q, r, k, size, len(basis))
    return DegreeSlice(q, r, k, basis, reduction)


_SLICES: Dict[Tuple[int, int, int], DegreeSlice] = {}
_SLICE_LOCK = threading.Lock()


def _cache_path(cache_dir: str, q: int, r: int, k: int) -> str:
    return os.path.join(cache_dir, f"slice-q{q}-r{r}-k{k}.json")


def get_slice(q: int, r: int, k: int, budget: int = DEFAULT_SLICE_BUDGET, cache_dir: Optional[str] = None) -> DegreeSlice:
    """degree_slice with an in-process cache and optional JSON files under cache_dir."""
    key = (q, r, k)
    with _SLICE_LOCK:
        found = _SLICES.get(key)
        if found is not None:
            return found
        if cache_dir:
            path = _cache_path(cache_dir, q, r, k)
            if os.path.exists(path):
                try:
                    with open(path) as fh:
                        found = DegreeSlice.from_json(json.load(fh))
                except (OSError, ValueError, KeyError) as exc:
                    logger.warning("ignoring unreadable slice cache %s: %s", path, exc)
                    found = None
                if found is not None:
                    _SLICES[key] = found
                    return found
        found = compute_slice(q, r, k, budget)
        _SLICES[key] = found
        if cache_dir:
            os.makedirs(cache_dir, exist_ok=True)
            with open(_cache_path(cache_dir, q, r, k), "w") as fh:
                json.dump(found.to_json(), fh)
        return found


def degree_slice(q: int, r: int, k: int, budget: int = DEFAULT_SLICE_BUDGET, cache_dir: Optional[str] = None) -> DegreeSlice:
    return get_slice(q, r, k, budget, cache_dir)


# ring elements

class RingElement:
    """sum c_m m over basis monomials of the slices, c_m in k0."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "LevelTRing", terms: Dict[Exps, RatF]):
        self.ring = ring
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degrees(self) -> List[int]:
        return sorted({sum(e) for e in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def __add__(self, other: "RingElement") -> "RingElement":
        return self.ring.add(self, other)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self.ring.sub(self, other)

    def __neg__(self) -> "RingElement":
        return self.ring.neg(self)

    def __mul__(self, other: "RingElement") -> "RingElement":
        return self.ring.mul(self, other)

    def __pow__(self, n: int) -> "RingElement":
        return self.ring.pow(self, n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms))

    def coordinates(self, k: int) -> List[RatF]:
        sl = self.ring.slice(k)
        zero = self.ring.coeff.zero
        row = [zero] * sl.dim
        for exps, c in self.terms.items():
            if sum(exps) == k:
                row[sl.position[exps]] = c
        return row

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = [f"Y{i}" for i in range(self.ring.frame.n)]
        parts = []
        for exps, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e)
            cs = c.to_text()
            if not mono:
                parts.append(cs)
            elif c == self.ring.coeff.one:
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "variable": self.ring.coeff.var,
            "terms": [[list(e), c.to_text()] for e, c in sorted(self.terms.items(), reverse=True)],
        }

    def __repr__(self) -> str:
        return f"RingElement({self.to_text()})"


class LevelTRing:
    """R_V tensored with k0, elements in normal form."""

    def __init__(
        self,
        q: int,
        r: int,
        coeff: Optional[CoeffField] = None,
        budget: int = DEFAULT_SLICE_BUDGET,
        cache_dir: Optional[str] = None,
    ):
        self.q, self.r = q, r
        self.p = prime_power(q)[0]
        self.frame = ProjectiveFrame(q, r)
        self.coeff = coeff or CoeffField(q)
        self.budget = budget
        self.cache_dir = cache_dir
        n = self.frame.n
        self.zero = RingElement(self, {})
        self.one = RingElement(self, {(0,) * n: self.coeff.one})

    def __repr__(self) -> str:
        return f"LevelTRing(q={self.q}, r={self.r}, k0={self.coeff.var})"

    def slice(self, k: int) -> DegreeSlice:
        return get_slice(self.q, self.r, k, self.budget, self.cache_dir)

    def fits(self, k: int) -> bool:
        return monomial_count(self.frame.n, k) <= self.budget

    def normalize(self, terms: Dict[Exps, RatF]) -> RingElement:
        C = self.coeff
        out: Dict[Exps, RatF] = {}
        for exps, c in terms.items():
            if not c:
                continue
            red = self.slice(sum(exps)).reduction.get(exps)
            if red is None:
                out[exps] = out[exps] + c if exps in out else c
                continue
            for b, x in red.items():
                term = c * C.from_ff(x)
                out[b] = out[b] + term if b in out else term
        return RingElement(self, {e: c for e, c in out.items() if c})

    # generators

    def var(self, i: int) -> RingElement:
        return RingElement(self, {_unit(self.frame.n, i): self.coeff.one})

    def gen(self, v: Sequence[int]) -> RingElement:
        """Y_v for any nonzero v in F_q^r."""
        i, c = self.frame.normalize(v)
        return self.scale(self.var(i), self.coeff.from_ff(self.frame.field.inv(c)))

    def gens(self) -> List[RingElement]:
        return [self.var(i) for i in range(self.frame.n)]

    def scalar(self, c: RatF) -> RingElement:
        if not c:
            return self.zero
        return RingElement(self, {(0,) * self.frame.n: c})

    def t(self) -> RingElement:
        return self.scalar(self.coeff.t())

    def lam(self) -> RingElement:
        return self.scalar(self.coeff.lam())

    # domain protocol

    def add(self, a: RingElement, b: RingElement) -> RingElement:
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out[e] + c if e in out else c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return RingElement(self, out)

    def neg(self, a: RingElement) -> RingElement:
        return RingElement(self, {e: -c for e, c in a.terms.items()})

    def sub(self, a: RingElement, b: RingElement) -> RingElement:
        return self.add(a, self.neg(b))

    def mul(self, a: RingElement, b: RingElement) -> RingElement:
        if not a.terms or not b.terms:
            return self.zero
        raw: Dict[Exps, RatF] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = _add_exps(e1, e2)
                c = c1 * c2
                raw[e] = raw[e] + c if e in raw else c
        return self.normalize(raw)

    def scale(self, a: RingElement, c: RatF) -> RingElement:
        if not c:
            return self.zero
        return RingElement(self, {e: x * c for e, x in a.terms.items()})

    def frob(self, a: RingElement) -> RingElement:
        """a^p."""
        p = self.p
        return self.normalize({tuple(x * p for x in e): c**p for e, c in a.terms.items()})

    def pow(self, a: RingElement, n: int) -> RingElement:
        if n < 0:
            raise DmfError("negative powers are not defined in R_V")
        frobs = 0
        while n and n % self.p == 0:
            n //= self.p
            frobs += 1
        result, base = self.one, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        for _ in range(frobs):
            result = self.frob(result)
        return result

    def is_zero(self, a: RingElement) -> bool:
        return not a.terms

    def from_int(self, n: int) -> RingElement:
        return self.scalar(self.coeff.from_int(n))

    def from_ff(self, c: int) -> RingElement:
        return self.scalar(self.coeff.from_ff(c))

    def from_ratf(self, x: RatF) -> RingElement:
        """An element of F_q(t) as a constant."""
        return self.scalar(self.coeff.embed(x))

    def div_poly(self, a: RingElement, poly: PolyA) -> RingElement:
        return self.scale(a, self.coeff.embed(RatF(poly)).inverse())

    # group action

    def act_monomial(self, gamma: Matrix, exps: Exps) -> Tuple[int, Exps]:
        """(c, m') with gamma . m = c m' before normal form; Y_v -> Y_{v gamma}."""
        F = self.frame.field
        scalar = 1
        out = [0] * self.frame.n
        for i, e in enumerate(exps):
            if not e:
                continue
            j, c = self.frame.normalize(self.frame.apply(self.frame.reps[i], gamma))
            scalar = F.mul(scalar, F.pow(F.inv(c), e))
            out[j] += e
        return scalar, tuple(out)

    def act(self, gamma: Matrix, a: RingElement) -> RingElement:
        C = self.coeff
        raw: Dict[Exps, RatF] = {}
        for exps, c in a.terms.items():
            s, image = self.act_monomial(gamma, exps)
            term = c * C.from_ff(s)
            raw[image] = raw[image] + term if image in raw else term
        return self.normalize(raw)

    def from_vector(self, k: int, row: Sequence[int]) -> RingElement:
        """The element sum row_i b_i of the degree-k slice with F_q coordinates."""
        sl = self.slice(k)
        C = self.coeff
        return RingElement(self, {m: C.from_ff(int(c)) for m, c in zip(sl.basis, row) if int(c)})


# function model

def _largest_extension(p: int, e: int) -> int:
    m = e
    while p ** (m + e) <= MAX_FIELD_ORDER:
        m += e
    return m


def _proper_divisors(m: int) -> List[int]:
    return [d for d in range(1, m) if m % d == 0]


class FunctionModel:
    """Y_v -> 1/(v . x) at a fixed set of random points x of F_{p^m}^r.

    Elements are tuples of values, one per point. The map is a ring homomorphism on
    R_V tensored with k0 once t (or lambda) is specialised to a generic value, so equal
    elements give equal tuples; distinct elements agree at all points only with
    probability about (degree / p^m) per point.
    """

    def __init__(self, q: int, r: int, coeff: Optional[CoeffField] = None, points: int = DEFAULT_POINTS, seed: int = 0):
        p, e = prime_power(q)
        self.q, self.r, self.p = q, r, p
        self.frame = ProjectiveFrame(q, r)
        self.coeff = coeff or CoeffField(q)
        self.base = get_field(p, e)
        self.big = get_field(p, _largest_extension(p, e))
        B = self.big
        rng = random.Random(seed)
        self.param = self._generic(rng)
        if self.coeff.extended:
            self.t_value = B.neg(B.pow(self.param, q - 1))
        else:
            self.t_value = self.param
        self.points: List[Tuple[int, ...]] = []
        while len(self.points) < points:
            x = tuple(rng.randrange(B.order) for _ in range(r))
            if all(self._linear(v, x) for v in self.frame.reps):
                self.points.append(x)
        self.values = [tuple(B.inv(self._linear(v, x)) for x in self.points) for v in self.frame.reps]
        self.zero = tuple(0 for _ in self.points)
        self.one = tuple(1 for _ in self.points)

    def _generic(self, rng: random.Random) -> int:
        B = self.big
        while True:
            s = rng.randrange(2, B.order)
            if not any(B.in_subfield(s, d) for d in _proper_divisors(B.n)):
                t = B.neg(B.pow(s, self.q - 1))
                if not self.coeff.extended or not any(B.in_subfield(t, d) for d in _proper_divisors(B.n)):
                    return s

    def _linear(self, v: Sequence[int], x: Sequence[int]) -> int:
        B = self.big
        acc = 0
        for c, xi in zip(v, x):
            if c:
                acc = B.add(acc, B.mul(embed(c, self.base, B), xi))
        return acc

    def __repr__(self) -> str:
        return f"FunctionModel(q={self.q}, r={self.r}, points={len(self.points)}, field={self.big})"

    def var(self, i: int) -> Tuple[int, ...]:
        return self.values[i]

    def gens(self) -> List[Tuple[int, ...]]:
        return list(self.values)

    def gen(self, v: Sequence[int]) -> Tuple[int, ...]:
        i, c = self.frame.normalize(v)
        return self.mul(self.from_ff(self.frame.field.inv(c)), self.var(i))

    def _poly_at(self, poly: PolyA, x: int) -> int:
        B = self.big
        acc = 0
        for c in reversed(poly.coeffs):
            acc = B.add(B.mul(acc, x), embed(c, self.base, B))
        return acc

    def scalar(self, c: RatF) -> Tuple[int, ...]:
        """c in k0, evaluated at the generic parameter."""
        B = self.big
        value = B.div(self._poly_at(c.num, self.param), self._poly_at(c.den, self.param))
        return tuple(value for _ in self.points)

    def t(self) -> Tuple[int, ...]:
        return self.scalar(self.coeff.t())

    def lam(self) -> Tuple[int, ...]:
        return self.scalar(self.coeff.lam())

    def add(self, a, b):
        return tuple(self.big.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.big.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.big.neg(x) for x in a)

    def mul(self, a, b):
        return tuple(self.big.mul(x, y) for x, y in zip(a, b))

    def pow(self, a, n: int):
        return tuple(self.big.pow(x, n) for x in a)

    def is_zero(self, a) -> bool:
        return not any(a)

    def from_int(self, n: int):
        value = self.big.from_int(n)
        return tuple(value for _ in self.points)

    def from_ff(self, c: int):
        value = embed(c, self.base, self.big)
        return tuple(value for _ in self.points)

    def from_ratf(self, x: RatF):
        return self.scalar(self.coeff.embed(x))

    def div_poly(self, a, poly: PolyA):
        B = self.big
        d = self._poly_at(poly, self.t_value)
        if not d:
            raise DmfError("specialised divisor vanishes; choose another seed")
        inv = B.inv(d)
        return tuple(B.mul(x, inv) for x in a)


def symbolic_ring(q: int, r: int, weight: int, extended: bool = False, budget: int = DEFAULT_SLICE_BUDGET, cache_dir: Optional[str] = None, seed: int = 0):
    """LevelTRing when every slice up to weight fits the budget, else FunctionModel."""
    coeff = CoeffField(q, extended)
    ring = LevelTRing(q, r, coeff, budget, cache_dir)
    if ring.fits(weight):
        return ring
    logger.info("weight %d exceeds the slice budget for q=%d r=%d; using the function model", weight, q, r)
    return FunctionModel(q, r, coeff, seed=seed)


def model_name(ring) -> str:
    return "normal_form" if isinstance(ring, LevelTRing) else "function_model"


# Dickson-type generators

@dataclass
class DicksonData:
    psi: AdditivePolynomial
    g: List
    forms: CoefficientForms
    delta: Optional[object]


def dickson_psi(ring) -> AdditivePolynomial:
    """phi_t(X) = t X prod over V - 0 of (1 - Y_v X), folded onto projective representatives."""
    return psi_from_values(ring, ring.q, ring.t(), ring.gens())


def delta_t(ring):
    """lambda * prod of the projective Y_v; needs the extended coefficient field."""
    return delta_from_values(ring, ring.lam(), ring.gens())


def dickson_generators(ring) -> DicksonData:
    psi = dickson_psi(ring)
    t = PolyA.t(ring.frame.field)
    forms = coefficient_recursion(psi, t, ring.r)
    delta = delta_t(ring) if ring.coeff.extended else None
    return DicksonData(psi, [psi.coeff(i) for i in range(1, ring.r + 1)], forms, delta)


# groups

def _elementary(field: FiniteField, r: int, i: int, j: int, beta: int) -> Matrix:
    rows = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
    rows[i][j] = beta
    return tuple(tuple(row) for row in rows)


def _diagonal(field: FiniteField, r: int, zeta: int) -> Matrix:
    rows = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
    rows[0][0] = zeta
    return tuple(tuple(row) for row in rows)


def group_generators(q: int, r: int, group: str) -> List[Matrix]:
    """Elementary matrices over an F_p-basis of F_q, plus diag(zeta, 1, ...) for GL."""
    group = group.upper()
    if group not in GROUPS:
        raise SpecError(f"unknown group {group!r}; expected one of {', '.join(GROUPS)}")
    p, e = prime_power(q)
    F = get_field(p, e)
    betas = [p**i for i in range(e)]
    gens = []
    for i, j in itertools.permutations(range(r), 2):
        if group == "U1" and i > j:
            continue
        gens.extend(_elementary(F, r, i, j, b) for b in betas)
    if group == "GL" and q > 2:
        gens.append(_diagonal(F, r, F.gen))
    return gens


def group_elements(q: int, r: int, group: str = "GL") -> List[Matrix]:
    """Every element of the group, by filtering all q^{r^2} matrices."""
    group = group.upper()
    if q ** (r * r) > EXHAUSTIVE_CANDIDATES:
        raise BudgetExceeded(f"enumerating {group}_{r}(F_{q})", estimate=q ** (r * r))
    p, e = prime_power(q)
    F = get_field(p, e)
    out = []
    for entries in itertools.product(F.elements(), repeat=r * r):
        gamma = tuple(tuple(entries[i * r : (i + 1) * r]) for i in range(r))
        d = ff_det(F, gamma)
        if not d:
            continue
        if group == "SL" and d != 1:
            continue
        if group == "U1" and any(gamma[i][j] != (1 if i == j else 0) for i in range(r) for j in range(i + 1)):
            continue
        out.append(gamma)
    return out


def sample_elements(q: int, r: int, group: str = "GL") -> Tuple[List[Matrix], bool]:
    """(elements, exhaustive): the whole group when small, else its generators."""
    try:
        return group_elements(q, r, group), True
    except BudgetExceeded:
        return group_generators(q, r, group), False


def character(field: FiniteField, gamma: Matrix, m: int) -> int:
    """det(gamma)^{-m}: gamma . f = det(gamma)^{-m} f defines type m."""
    return field.pow(field.inv(ff_det(field, gamma)), m)


# invariants

@dataclass
class InvariantSpace:
    k: int
    group: str
    m: int
    vectors: List[List[int]]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def elements(self, ring: LevelTRing) -> List[RingElement]:
        return [ring.from_vector(self.k, row) for row in self.vectors]


def _action_matrix(ring: LevelTRing, sl: DegreeSlice, gamma: Matrix) -> List[List[int]]:
    """M with gamma . b_i = sum_j M[i][j] b_j."""
    F = ring.frame.field
    rows = []
    for b in sl.basis:
        c, image = ring.act_monomial(gamma, b)
        rows.append(sl.vector(sl.reduce_ff({image: c}, F)))
    return rows


def _gf(q: int):
    p, e = prime_power(q)
    return galois_field(p, e)


def invariants(ring: LevelTRing, k: int, group: str = "GL", m: int = 0) -> InvariantSpace:
    """Fixed space of the degree-k slice under gamma . f = chi(gamma) f, chi = det^{-m}."""
    group = group.upper()
    q = ring.q
    if not 0 <= m < max(q - 1, 1):
        raise SpecError(f"type {m} is outside 0 <= m < q-1")
    sl = ring.slice(k)
    d = sl.dim
    F = ring.frame.field
    if d == 0:
        return InvariantSpace(k, group, m, [])
    GF = _gf(q)
    blocks = []
    for gamma in group_generators(q, ring.r, group):
        M = _action_matrix(ring, sl, gamma)
        chi = character(F, gamma, m) if group == "GL" else 1
        for j in range(d):
            blocks.append([F.sub(M[i][j], chi if i == j else 0) for i in range(d)])
    if not blocks:
        vectors = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
        return InvariantSpace(k, group, m, vectors)
    A = GF(np.array(blocks, dtype=int))
    ns = A.null_space()
    vectors = [[int(x) for x in row] for row in ns]
    logger.debug("invariants %s type %d in degree %d: %d of %d", group, m, k, len(vectors), d)
    return InvariantSpace(k, group, m, vectors)


def _ff_value(c: RatF) -> Optional[int]:
    if not c:
        return 0
    if c.is_poly() and c.num.degree == 0:
        return c.num.coeffs[0]
    return None


def _specialize(ring, c: RatF, big: FiniteField, base: FiniteField, s: int) -> int:
    def at(poly: PolyA) -> int:
        acc = 0
        for x in reversed(poly.coeffs):
            acc = big.add(big.mul(acc, s), embed(x, base, big))
        return acc

    return big.div(at(c.num), at(c.den))


def rank_k0(ring: LevelTRing, vectors: Sequence[Sequence[RatF]]) -> int:
    """Rank over k0; exact over F_q when each row is a k0-multiple of an F_q row.

    Otherwise t (or lambda) is specialised to a generic element of a large extension;
    a full rank there proves full rank over k0.
    """
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return 0
    rows: List[List[int]] = []
    constant = True
    for vec in vectors:
        lead = next(c for c in vec if c)
        row = [_ff_value(c / lead) for c in vec]
        if None in row:
            constant = False
            break
        rows.append(row)
    if constant:
        A = _gf(ring.q)(np.array(rows, dtype=int))
    else:
        model = FunctionModel(ring.q, ring.r, ring.coeff, points=1)
        big = model.big
        rows = [[_specialize(ring, c, big, model.base, model.param) for c in vec] for vec in vectors]
        A = galois_field(big.p, big.n)(np.array(rows, dtype=int))
    reduced = A.row_reduce()
    return int(np.count_nonzero(np.any(reduced != 0, axis=1)))


# checks

def hilbert_check(q: int, r: int, kmax: int, budget: int = DEFAULT_SLICE_BUDGET, cache_dir: Optional[str] = None) -> CheckReport:
    """Slice dimensions against the closed formula."""
    rows = []
    for k in range(kmax + 1):
        sl = get_slice(q, r, k, budget, cache_dir)
        formula = dim_gamma_t(q, r, k)
        rows.append({"k": k, "dim_formula": formula, "dim_linear_algebra": sl.dim, "match": formula == sl.dim})
    return CheckReport("hilbert_function", all(row["match"] for row in rows), {"q": q, "r": r, "rows": rows})


def rewriting_check(ring: LevelTRing, seed: int = 0, samples: int = 3) -> CheckReport:
    """Both relations reduce to 0; products associate; Frobenius is additive."""
    frame, F = ring.frame, ring.frame.field
    failures = []
    for i, j in itertools.permutations(range(frame.n), 2):
        v, w = frame.reps[i], frame.reps[j]
        for alpha in F.units():
            aw = frame.scale(alpha, w)
            rel = ring.gen(v) * ring.gen(aw) - ring.gen(frame.add(v, aw)) * (ring.gen(v) + ring.gen(aw))
            if rel:
                failures.append({"v": list(v), "w": list(aw)})
            scaled = ring.gen(frame.scale(alpha, v)) - ring.scale(ring.gen(v), ring.coeff.from_ff(F.inv(alpha)))
            if scaled:
                failures.append({"v": list(v), "alpha": alpha})
    rng = random.Random(seed)

    def sample(degree: int) -> RingElement:
        total = ring.zero
        for exps in monomials(frame.n, degree):
            c = rng.randrange(F.order)
            if c:
                total = total + ring.normalize({exps: ring.coeff.from_ff(c)})
        return total

    associative = True
    frobenius = True
    for _ in range(samples):
        x, y, z = sample(1), sample(1), sample(2)
        associative = associative and (x * y) * z == x * (y * z)
        frobenius = frobenius and ring.pow(x + y, ring.q) == ring.pow(x, ring.q) + ring.pow(y, ring.q)
    ok = not failures and associative and frobenius
    return CheckReport(
        "rewriting",
        ok,
        {"relation_failures": failures, "associative": associative, "frobenius": frobenius},
    )


def invariance_check(ring: LevelTRing, data: DicksonData) -> CheckReport:
    """gamma . g_{t,i} = g_{t,i} for all gamma; gamma . delta_t = det(gamma)^{-1} delta_t."""
    F = ring.frame.field
    elements, exhaustive = sample_elements(ring.q, ring.r, "GL")
    g_ok = all(ring.act(gamma, g) == g for gamma in elements for g in data.g)
    delta_ok = None
    if data.delta is not None:
        delta_ok = all(
            ring.act(gamma, data.delta) == ring.scale(data.delta, ring.coeff.from_ff(character(F, gamma, 1)))
            for gamma in elements
        )
    ok = g_ok and delta_ok is not False
    return CheckReport(
        "dickson_invariance",
        ok,
        {"elements": len(elements), "exhaustive": exhaustive, "g_invariant": g_ok, "delta_type_one": delta_ok},
    )


def delta_power_symbolic_check(ring) -> CheckReport:
    """delta_t^{q-1} = (-1)^{n+1} Delta_t, n the number of projective representatives."""
    q = ring.q
    psi = dickson_psi(ring)
    delta = delta_t(ring)
    sign = delta_sign(q, ring.frame.n)
    target = psi.top() if sign == 1 else ring.neg(psi.top())
    ok = ring.is_zero(ring.sub(ring.pow(delta, q - 1), target))
    return CheckReport("delta_power_symbolic", ok, {"sign": sign, "representatives": ring.frame.n, "model": model_name(ring)})


def weighted_exponents(weights: Sequence[int], k: int) -> Iterator[Tuple[int, ...]]:
    """Tuples a with sum a_i w_i = k."""
    if not weights:
        if k == 0:
            yield ()
        return
    w = weights[0]
    for a in range(k // w + 1):
        for rest in weighted_exponents(weights[1:], k - a * w):
            yield (a,) + rest


def _monomial_products(ring: LevelTRing, gens: Sequence[RingElement], weights: Sequence[int], k: int) -> List[RingElement]:
    out = []
    for exps in weighted_exponents(weights, k):
        x = ring.one
        for g, a in zip(gens, exps):
            if a:
                x = x * ring.pow(g, a)
        out.append(x)
    return out


def dickson_independence_check(ring: LevelTRing, data: DicksonData, k: int) -> CheckReport:
    """Monomials in g_{t,1..r} of weight k: as many as P_S(k), and linearly independent."""
    q = ring.q
    weights = [q**i - 1 for i in range(1, ring.r + 1)]
    products = _monomial_products(ring, data.g, weights, k)
    expected = partitions_ps(q, ring.r, k)
    rank = rank_k0(ring, [x.coordinates(k) for x in products])
    gl_dim = invariants(ring, k, "GL", 0).dim
    ok = len(products) == expected and rank == len(products) and gl_dim == expected
    return CheckReport(
        "dickson_independence",
        ok,
        {"k": k, "monomials": len(products), "partitions": expected, "rank": rank, "gl_invariants": gl_dim},
    )


def u1_generators(ring: LevelTRing) -> List[RingElement]:
    """f_i = sum of Y_v over representatives whose first nonzero entry sits at position i."""
    out = []
    for pos in range(ring.r):
        total = ring.zero
        for i in range(ring.frame.n):
            if ring.frame.leading_position(i) == pos:
                total = total + ring.var(i)
        out.append(total)
    return out


def u1_check(ring: LevelTRing, k: int) -> CheckReport:
    gens = u1_generators(ring)
    elements, exhaustive = sample_elements(ring.q, ring.r, "U1")
    invariant = all(ring.act(gamma, f) == f for gamma in elements for f in gens)
    products = _monomial_products(ring, gens, [1] * ring.r, k)
    rank = rank_k0(ring, [x.coordinates(k) for x in products])
    fixed = invariants(ring, k, "U1").dim
    expected = dim_gamma1_t(ring.r, k)
    ok = invariant and rank == len(products) == expected == fixed
    return CheckReport(
        "u1_invariants",
        ok,
        {"k": k, "formula": expected, "fixed_space": fixed, "monomials": len(products), "rank": rank, "exhaustive": exhaustive},
    )


def invariant_dims_check(ring: LevelTRing, kmax: int) -> CheckReport:
    """GL type 0, SL and U1 fixed-space dimensions against the formulas."""
    q, r = ring.q, ring.r
    rows = []
    for k in range(kmax + 1):
        gl = invariants(ring, k, "GL", 0).dim
        sl = invariants(ring, k, "SL").dim
        u1 = invariants(ring, k, "U1").dim
        row = {
            "k": k,
            "gl": gl,
            "gl_formula": dim_type_m(q, r, k, 0),
            "sl": sl,
            "sl_formula": dim_sl(q, r, k),
            "u1": u1,
            "u1_formula": dim_gamma1_t(r, k),
        }
        row["match"] = gl == row["gl_formula"] and sl == row["sl_formula"] and u1 == row["u1_formula"]
        rows.append(row)
    return CheckReport("invariant_dims", all(row["match"] for row in rows), {"q": q, "r": r, "rows": rows})


def _in_span(ring: LevelTRing, k: int, space: Sequence[RingElement], extra: Sequence[RingElement]) -> bool:
    base = [x.coordinates(k) for x in space]
    return rank_k0(ring, base + [x.coordinates(k) for x in extra]) == rank_k0(ring, base)


def type_decomposition(ring: LevelTRing, k: int) -> CheckReport:
    """SL-invariants split by det-character; delta_t^m carries type 0 in weight k - m n onto type m."""
    q, r = ring.q, ring.r
    shift = type_shift(q, r)
    sl_dim = invariants(ring, k, "SL").dim
    rows = []
    total = 0
    ok = True
    delta = None
    for m in range(q - 1):
        space = invariants(ring, k, "GL", m)
        formula = dim_type_m(q, r, k, m)
        total += space.dim
        row = {"m": m, "dim": space.dim, "formula": formula}
        lower = k - m * shift
        if m and lower >= 0:
            if delta is None:
                delta = delta_t(ring)
            base = invariants(ring, lower, "GL", 0).elements(ring)
            images = [ring.pow(delta, m) * b for b in base]
            row["shift_rank"] = rank_k0(ring, [x.coordinates(k) for x in images])
            row["shift_lands"] = _in_span(ring, k, space.elements(ring), images)
            row["shift_ok"] = row["shift_rank"] == len(base) == space.dim and row["shift_lands"]
            ok = ok and row["shift_ok"]
        ok = ok and space.dim == formula
        rows.append(row)
    ok = ok and total == sl_dim
    return CheckReport("type_decomposition", ok, {"k": k, "sl_dim": sl_dim, "rows": rows})


def cusp_injectivity_check(ring: LevelTRing, data: DicksonData, k: int) -> CheckReport:
    """Multiplication by Delta_t embeds GL-invariants of weight k - q^r + 1 into weight k."""
    q, r = ring.q, ring.r
    lower = k - (q**r - 1)
    expected = dim_cusp_gl(q, r, k)
    if lower < 0:
        return CheckReport("cusp_injectivity", expected == 0, {"k": k, "image_dim": 0, "formula": expected})
    big_delta = data.g[-1]
    base = invariants(ring, lower, "GL", 0).elements(ring)
    images = [big_delta * b for b in base]
    rank = rank_k0(ring, [x.coordinates(k) for x in images])
    lands = _in_span(ring, k, invariants(ring, k, "GL", 0).elements(ring), images)
    ok = rank == len(base) == expected and lands
    return CheckReport("cusp_injectivity", ok, {"k": k, "image_dim": rank, "formula": expected, "invariant": lands})


def compositional_inverse_symbolic(ring: LevelTRing, data: DicksonData, K: int = 2) -> CheckReport:
    return compositional_inverse_check(data.forms, ring.q, ring, K)


def symbolic_discriminant_check(
    q: int,
    r: int,
    budget: int = DEFAULT_SLICE_BUDGET,
    cache_dir: Optional[str] = None,
    seed: int = 0,
) -> CheckReport:
    """Delta_{t^2} = Delta_t^{1+q^r}; full composition in normal form when the slices fit."""
    weight = q ** (2 * r) - 1
    ring = symbolic_ring(q, r, weight, False, budget, cache_dir, seed)
    psi = dickson_psi(ring)
    t = PolyA.t(ring.frame.field)
    report = discriminant_relations_symbolic(psi, r, t, t, top_only=not isinstance(ring, LevelTRing))
    report.details["model"] = model_name(ring)
    return report


def delta_symbolic_check(q: int, r: int, budget: int = DEFAULT_SLICE_BUDGET, cache_dir: Optional[str] = None, seed: int = 0) -> CheckReport:
    ring = symbolic_ring(q, r, q**r - 1, True, budget, cache_dir, seed)
    return delta_power_symbolic_check(ring)


def psi_json(ring, a: Optional[PolyA] = None) -> dict:
    """The symbolic psi_a (default a = t), coefficient by coefficient."""
    psi = dickson_psi(ring)
    if a is not None and a != PolyA.t(ring.frame.field):
        psi = psi_a(psi, a)
    if isinstance(ring, LevelTRing):
        coeffs = [c.to_json() for c in psi.coeffs]
    else:
        coeffs = [list(c) for c in psi.coeffs]
    return {
        "q": ring.q,
        "r": ring.r,
        "a": (a or PolyA.t(ring.frame.field)).to_text(),
        "model": model_name(ring),
        "coefficients": coeffs,
    }


def random_element(ring: LevelTRing, degree: int, rng: random.Random) -> RingElement:
    """A random F_q-combination of the degree-slice basis."""
    sl = ring.slice(degree)
    return ring.from_vector(degree, [rng.randrange(ring.frame.field.order) for _ in range(sl.dim)])


def random_invertible(field: FiniteField, n: int, rng: random.Random) -> Matrix:
    while True:
        B = tuple(tuple(rng.randrange(field.order) for _ in range(n)) for _ in range(n))
        if ff_det(field, B):
            return B


def moore_ring_checks(ring: LevelTRing, n: int = 3, degree: int = 1, seed: int = 0) -> List[CheckReport]:
    """Moore product formula and M(xB) = det(B) M(x) for random elements of one slice."""
    rng = random.Random(seed)
    weight = degree * sum(ring.q**i for i in range(n))
    if not ring.fits(weight):
        raise BudgetExceeded(f"Moore determinant of {n} degree-{degree} elements", estimate=monomial_count(ring.frame.n, weight))
    xs = [random_element(ring, degree, rng) for _ in range(n)]
    B = random_invertible(ring.frame.field, n, rng)
    product = moore_product_check(ring, xs, ring.q)
    transform = moore_transform_check(ring, xs, B, ring.q)
    for report in (product, transform):
        report.details.update({"degree": degree, "model": model_name(ring)})
    return [product, transform]
