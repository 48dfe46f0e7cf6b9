"""Lattices L in F^r, cosets v+L, period points and the u-expansion frame.

Vectors are rows (tuples of RatF); a lattice is the A-span of the rows of its basis.
"""
from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Iterator, List, Optional, Sequence, Tuple

from src.dmf.base_arith import (
    FiniteField,
    PolyA,
    RatF,
    embed,
    poly_gcd,
    polys_below,
    ratf_gcd,
)
from src.dmf.cinfty_model import Number, TailElement
from src.dmf.errors import FieldError, LatticeError, SpecError

logger = logging.getLogger("dmf.lattice_geom")

Vector = Tuple[RatF, ...]
Matrix = Tuple[Vector, ...]


# matrices over F

def identity(field: FiniteField, r: int) -> Matrix:
    one, zero = RatF.from_int(field, 1), RatF.from_int(field, 0)
    return tuple(tuple(one if i == j else zero for j in range(r)) for i in range(r))


def to_matrix(field: FiniteField, rows) -> Matrix:
    def conv(x):
        if isinstance(x, RatF):
            return x
        if isinstance(x, PolyA):
            return RatF(x)
        if isinstance(x, int):
            return RatF.from_ff(field, x)
        return RatF.from_text(field, str(x))

    return tuple(tuple(conv(x) for x in row) for row in rows)


def vec_add(x: Sequence[RatF], y: Sequence[RatF]) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Sequence[RatF], y: Sequence[RatF]) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c, x: Sequence[RatF]) -> Vector:
    return tuple(c * a for a in x)


def vec_mat(x: Sequence[RatF], M: Matrix) -> Vector:
    zero = x[0] * 0
    out = []
    for j in range(len(M[0])):
        acc = zero
        for i, xi in enumerate(x):
            if xi and M[i][j]:
                acc = acc + xi * M[i][j]
        out.append(acc)
    return tuple(out)


def mat_mul(M: Matrix, N: Matrix) -> Matrix:
    return tuple(vec_mat(row, N) for row in M)


def mat_inverse(M: Matrix) -> Matrix:
    r = len(M)
    field = M[0][0].field
    work = [list(row) + list(e) for row, e in zip(M, identity(field, r))]
    for col in range(r):
        piv = next((i for i in range(col, r) if work[i][col]), None)
        if piv is None:
            raise LatticeError("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = work[col][col].inverse()
        work[col] = [a * inv for a in work[col]]
        for i in range(r):
            if i != col and work[i][col]:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[col])]
    return tuple(tuple(row[r:]) for row in work)


def mat_det(M: Matrix) -> RatF:
    r = len(M)
    work = [list(row) for row in M]
    det = RatF.from_int(M[0][0].field, 1)
    for col in range(r):
        piv = next((i for i in range(col, r) if work[i][col]), None)
        if piv is None:
            return det * 0
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = -det
        det = det * work[col][col]
        inv = work[col][col].inverse()
        for i in range(col + 1, r):
            if work[i][col]:
                f = work[i][col] * inv
                work[i] = [a - f * b for a, b in zip(work[i], work[col])]
    return det


def mat_norm_log(M: Matrix) -> int:
    """max deg of the entries, i.e. log_q of the sup-norm."""
    return max(x.degree for row in M for x in row if x)


def common_denominator(rows: Sequence[Sequence[RatF]]) -> PolyA:
    den = None
    for row in rows:
        for x in row:
            if den is None:
                den = x.den
            elif not x.den.is_one():
                den = den * x.den // poly_gcd(den, x.den)
    return den


# normal forms over A

def hermite_form(rows: Sequence[Sequence[PolyA]]) -> List[List[PolyA]]:
    """Upper triangular, monic diagonal, entries above the diagonal reduced."""
    M = [list(row) for row in rows]
    n = len(M)
    for j in range(n):
        while True:
            nz = [i for i in range(j, n) if M[i][j]]
            if not nz:
                raise LatticeError("basis is singular")
            piv = min(nz, key=lambda i: (M[i][j].degree, i))
            M[j], M[piv] = M[piv], M[j]
            settled = True
            for i in range(j + 1, n):
                if M[i][j]:
                    quot = M[i][j] // M[j][j]
                    M[i] = [a - quot * b for a, b in zip(M[i], M[j])]
                    if M[i][j]:
                        settled = False
            if settled:
                break
        c = M[j][j].field.inv(M[j][j].lc())
        M[j] = [a.scale(c) for a in M[j]]
    for j in range(n):
        for i in range(j):
            quot = M[i][j] // M[j][j]
            if quot:
                M[i] = [a - quot * b for a, b in zip(M[i], M[j])]
    return M


@dataclass(frozen=True)
class SmithForm:
    diagonal: Tuple[RatF, ...]
    P: Matrix
    Q: Matrix


def smith_form(M: Matrix) -> SmithForm:
    """P, Q in GL_r(A) and d_1 | d_2 | ... (monic) with P M Q = diag(d_i)."""
    r = len(M)
    field = M[0][0].field
    d = common_denominator(M)
    D = [[(x * RatF(d)).num for x in row] for row in M]
    one, zero = PolyA(field, (1,)), PolyA(field)
    P = [[one if i == j else zero for j in range(r)] for i in range(r)]
    Q = [[one if i == j else zero for j in range(r)] for i in range(r)]

    def swap_rows(a, b):
        D[a], D[b] = D[b], D[a]
        P[a], P[b] = P[b], P[a]

    def swap_cols(a, b):
        for row in D:
            row[a], row[b] = row[b], row[a]
        for row in Q:
            row[a], row[b] = row[b], row[a]

    def add_row(dst, src, f):
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        P[dst] = [a + f * b for a, b in zip(P[dst], P[src])]

    def add_col(dst, src, f):
        for row in D:
            row[dst] = row[dst] + f * row[src]
        for row in Q:
            row[dst] = row[dst] + f * row[src]

    for s in range(r):
        while True:
            cells = [(D[i][j].degree, i, j) for i in range(s, r) for j in range(s, r) if D[i][j]]
            if not cells:
                raise LatticeError("matrix is singular")
            _, i, j = min(cells)
            swap_rows(s, i)
            swap_cols(s, j)
            for i in range(s + 1, r):
                if D[i][s]:
                    add_row(i, s, -(D[i][s] // D[s][s]))
            for j in range(s + 1, r):
                if D[s][j]:
                    add_col(j, s, -(D[s][j] // D[s][s]))
            if any(D[i][s] for i in range(s + 1, r)) or any(D[s][j] for j in range(s + 1, r)):
                continue
            bad = next(
                (i for i in range(s + 1, r) for j in range(s + 1, r) if D[i][j] % D[s][s]),
                None,
            )
            if bad is not None:
                add_row(s, bad, one)
                continue
            break
        c = field.inv(D[s][s].lc())
        D[s] = [a.scale(c) for a in D[s]]
        P[s] = [a.scale(c) for a in P[s]]
    den = RatF(d)
    diag = tuple(RatF(D[i][i]) / den for i in range(r))
    as_mat = lambda rows: tuple(tuple(RatF(x) for x in row) for row in rows)
    return SmithForm(diag, as_mat(P), as_mat(Q))


# lattices and cosets

class LatticeCoset:
    """v + L with L the A-span of the rows of an invertible basis over F."""

    def __init__(self, basis, v=None, field: Optional[FiniteField] = None):
        field = field or _guess_field(basis)
        self.basis: Matrix = to_matrix(field, basis)
        self.r = len(self.basis)
        if any(len(row) != self.r for row in self.basis):
            raise LatticeError("basis must be square")
        if not mat_det(self.basis):
            raise LatticeError("basis is singular")
        self.field = field
        zero = RatF.from_int(field, 0)
        self.v: Vector = to_matrix(field, [v])[0] if v is not None else (zero,) * self.r
        if len(self.v) != self.r:
            raise LatticeError(f"translation has length {len(self.v)}, expected {self.r}")
        self._inv = mat_inverse(self.basis)
        self._hnf = None

    @classmethod
    def standard(cls, field: FiniteField, r: int, v=None) -> "LatticeCoset":
        return cls(identity(field, r), v, field)

    @classmethod
    def diagonal(cls, field: FiniteField, entries: Sequence[RatF], v=None) -> "LatticeCoset":
        zero = RatF.from_int(field, 0)
        r = len(entries)
        rows = [[entries[i] if i == j else zero for j in range(r)] for i in range(r)]
        return cls(to_matrix(field, rows), v, field)

    @property
    def q(self) -> int:
        return self.field.order

    def __repr__(self) -> str:
        rows = ";".join(" ".join(x.to_text() for x in row) for row in self.basis)
        return f"LatticeCoset(basis=[{rows}], v=({' '.join(x.to_text() for x in self.v)}))"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeCoset):
            return NotImplemented
        return self.same_lattice(other) and other.contains(self.v)

    def __hash__(self) -> int:
        return hash(self.r)

    def lattice(self) -> "LatticeCoset":
        return LatticeCoset(self.basis, None, self.field)

    def with_v(self, v) -> "LatticeCoset":
        return LatticeCoset(self.basis, v, self.field)

    def coordinates(self, x: Sequence[RatF]) -> Vector:
        return vec_mat(tuple(x), self._inv)

    def in_lattice(self, x: Sequence[RatF]) -> bool:
        return all(c.is_poly() for c in self.coordinates(x))

    def contains(self, x: Sequence[RatF]) -> bool:
        return self.in_lattice(vec_sub(x, self.v))

    def v_in_lattice(self) -> bool:
        return self.in_lattice(self.v)

    def same_lattice(self, other: "LatticeCoset") -> bool:
        return all(self.in_lattice(b) for b in other.basis) and all(other.in_lattice(b) for b in self.basis)

    def contains_lattice(self, other: "LatticeCoset") -> bool:
        return all(self.in_lattice(b) for b in other.basis)

    def index_in(self, other: "LatticeCoset") -> int:
        """log_q [other : self] for self a sublattice of other."""
        if not other.contains_lattice(self):
            raise LatticeError("not a sublattice")
        return (mat_det(self.basis) / mat_det(other.basis)).degree

    def transform(self, gamma: Matrix) -> "LatticeCoset":
        """v gamma + L gamma."""
        return LatticeCoset(mat_mul(self.basis, gamma), vec_mat(self.v, gamma), self.field)

    def scaled(self, a: RatF) -> "LatticeCoset":
        return LatticeCoset(
            tuple(vec_scale(a, row) for row in self.basis), vec_scale(a, self.v), self.field
        )

    def reduced_v(self) -> Vector:
        """The representative of v + L whose coordinates have negative degree."""
        coords = self.coordinates(self.v)
        fracs = tuple(c.poly_part()[1] for c in coords)
        return vec_mat(fracs, self.basis)

    def hnf(self) -> Tuple[PolyA, List[List[PolyA]]]:
        """(d, H) with the rows of H/d a Hermite basis of L."""
        if self._hnf is None:
            d = common_denominator(self.basis)
            D = RatF(d)
            rows = [[(x * D).num for x in row] for row in self.basis]
            self._hnf = (d, hermite_form(rows))
        return self._hnf

    def hnf_basis(self) -> Matrix:
        d, H = self.hnf()
        D = RatF(d)
        return tuple(tuple(RatF(x) / D for x in row) for row in H)

    def to_json(self) -> dict:
        return {
            "basis": [[x.to_text() for x in row] for row in self.basis],
            "v": [x.to_text() for x in self.v],
        }

    @classmethod
    def from_json(cls, field: FiniteField, data, source: str = "coset") -> "LatticeCoset":
        if not isinstance(data, dict) or "basis" not in data:
            raise SpecError("expected an object with a 'basis' matrix", location=source)
        rows = []
        for i, row in enumerate(data["basis"]):
            parsed = []
            for j, entry in enumerate(row):
                parsed.append(_parse_entry(field, entry, f"{source}: basis[{i}][{j}]"))
            rows.append(parsed)
        v = data.get("v")
        if v is not None:
            v = [_parse_entry(field, entry, f"{source}: v[{i}]") for i, entry in enumerate(v)]
        try:
            return cls(rows, v, field)
        except LatticeError as exc:
            raise SpecError(str(exc), location=source)


def _parse_entry(field: FiniteField, entry, location: str) -> RatF:
    try:
        return RatF.from_text(field, str(entry))
    except FieldError as exc:
        raise SpecError(str(exc), location=location)


def load_coset(field: FiniteField, path: str) -> LatticeCoset:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(exc.msg, location=f"{path}:{exc.lineno}:{exc.colno}")
    return LatticeCoset.from_json(field, data, source=path)


def _guess_field(basis) -> FiniteField:
    for row in basis:
        for x in row:
            if isinstance(x, (RatF, PolyA)):
                return x.field
    raise LatticeError("cannot infer the constant field; pass field=")


def enumerate_coset(coset: LatticeCoset, D: int) -> Iterator[Vector]:
    """Nonzero x in v + L with every coordinate of degree <= D, lexicographically."""
    d, H = coset.hnf()
    r = coset.r
    field = coset.field
    dR = RatF(d)
    w = tuple(x * dR for x in coset.v)
    bound = D + d.degree
    found = False

    def rec(j: int, partial: Tuple[RatF, ...], s: List[PolyA]):
        nonlocal found
        if j == r:
            x = tuple(c / dR for c in partial)
            if any(x):
                found = True
                yield x
            return
        c = w[j]
        for i in range(j):
            if s[i] and H[i][j]:
                c = c + RatF(s[i] * H[i][j])
        hjj = H[j][j]
        poly, frac = (c / RatF(hjj)).poly_part()
        room = bound - hjj.degree
        if room < 0:
            sigmas = [PolyA(field)] if frac.degree <= room else []
        else:
            sigmas = polys_below(field, room + 1)
        for sigma in sigmas:
            sj = sigma - poly
            row_j = c + RatF(sj * hjj)
            yield from rec(j + 1, partial + (row_j,), s + [sj])

    yield from rec(0, (), [])
    if not found:
        logger.warning("no nonzero element of the coset has all coordinate degrees <= %d", D)


# period points

class OmegaPoint:
    """A column (omega_1, ..., omega_r) of TailElements; xi is the last entry."""

    def __init__(self, entries: Sequence[TailElement], frame: Optional[Tuple["OmegaPoint", Matrix]] = None):
        if not entries:
            raise LatticeError("a period point needs at least one entry")
        self.entries: Tuple[TailElement, ...] = tuple(entries)
        self.r = len(self.entries)
        self.q = self.entries[0].q
        self.frame = frame
        leads = [x.lead if x.terms else None for x in self.entries]
        self.certificate: Tuple[Optional[Fraction], ...] = tuple(
            None if a is None else a - floor(a) for a in leads
        )
        self.certified = None not in self.certificate and len(set(self.certificate)) == self.r

    @property
    def xi(self) -> TailElement:
        return self.entries[-1]

    def shifts(self) -> Tuple[Fraction, ...]:
        return tuple(x.lead for x in self.entries)

    def min_log_norm(self) -> Fraction:
        return min(self.shifts())

    def exact(self) -> bool:
        return all(x.is_exact() for x in self.entries)

    @classmethod
    def standard(cls, q: int, r: int, variant: str = "standard") -> "OmegaPoint":
        if r < 1:
            raise LatticeError("rank must be positive")
        entries = [TailElement.monomial(q, Fraction(r - i, r)) for i in range(1, r + 1)]
        if variant == "perturbed":
            entries = [x + 1 if i < r - 1 else x for i, x in enumerate(entries)]
        elif variant != "standard":
            raise LatticeError(f"unknown point variant {variant!r}")
        return cls(entries)

    def boundary_point(self, s: int) -> "OmegaPoint":
        """((1 + t^s) omega_1, omega_2, ..., omega_r)."""
        w1 = self.entries[0] * (TailElement.monomial(self.q, s) + 1)
        return OmegaPoint((w1,) + self.entries[1:])

    def tail(self) -> "OmegaPoint":
        return OmegaPoint(self.entries[1:])

    def transform(self, gamma: Matrix, prec: Optional[Number] = None) -> "OmegaPoint":
        """gamma * omega as a column, remembering gamma for tail bounds."""
        entries = tuple(pairing(row, self, prec) for row in gamma)
        if self.frame is None:
            frame = (self, gamma)
        else:
            root, g0 = self.frame
            frame = (root, mat_mul(gamma, g0))
        return OmegaPoint(entries, frame)

    def to_text(self) -> str:
        return "(" + ", ".join(x.to_text() for x in self.entries) + ")"

    def to_json(self) -> dict:
        return {
            "entries": [x.to_json() for x in self.entries],
            "certificate": [None if c is None else str(c) for c in self.certificate],
            "certified": self.certified,
        }


def standard_point(q: int, r: int, variant: str = "standard") -> OmegaPoint:
    return OmegaPoint.standard(q, r, variant)


def pairing(x: Sequence[RatF], omega: OmegaPoint, prec: Optional[Number] = None) -> TailElement:
    """x . omega."""
    total = TailElement.zero(omega.q)
    for xi, wi in zip(x, omega.entries):
        if xi:
            total = total + TailElement.from_ratf(omega.q, xi, prec) * wi
    return total


def row_log_norm(x: Sequence[RatF], shifts: Sequence[Fraction]) -> Fraction:
    """log_q |x omega| at a certified point with the given leading exponents."""
    return max(xi.degree + s for xi, s in zip(x, shifts) if xi)


def tail_log_bound(omega: OmegaPoint, D: int) -> Fraction:
    """Lower bound for log_q |x omega| over x with some coordinate of degree > D."""
    if omega.frame is not None:
        root, gamma = omega.frame
        spread = mat_norm_log(mat_inverse(gamma))
        return D + 1 - spread + root.min_log_norm()
    return D + 1 + omega.min_log_norm()


# reduced bases and norm balls

@dataclass(frozen=True)
class ReducedBasis:
    """Basis rows whose periods b_j omega have leading exponents distinct mod 1.

    Then |sum a_j b_j omega| = max_j |a_j| |b_j omega| for a_j in A.
    """

    rows: Matrix
    rdeg: Tuple[Fraction, ...]
    omega: OmegaPoint
    periods: Tuple[TailElement, ...]

    def values(self) -> Tuple[TailElement, ...]:
        return self.periods


_MAX_REDUCTION_STEPS = 10_000


def _constant_ratio(a: TailElement, b: TailElement, field: FiniteField) -> int:
    """c in F_q with lc(a) = c lc(b)."""
    a, b = a._align(b)
    F = a.field
    ratio = F.div(a.lc(), b.lc())
    if F == field:
        return ratio
    for c in field.elements():
        if embed(c, field, F) == ratio:
            return c
    raise LatticeError("leading coefficients of two periods differ by a scalar outside F_q")


def reduced_basis(lattice: LatticeCoset, omega: OmegaPoint, prec: Optional[Number] = None) -> ReducedBasis:
    """Reduce the basis against its periods until their leading exponents are distinct mod 1."""
    if omega.r != lattice.r:
        raise LatticeError(f"rank {lattice.r} lattice paired with a rank {omega.r} point")
    field = lattice.field
    q = omega.q
    rows = [tuple(row) for row in lattice.basis]
    vals = [pairing(row, omega, prec) for row in rows]
    for _ in range(_MAX_REDUCTION_STEPS):
        if any(not v.terms for v in vals):
            raise LatticeError("a period is indistinguishable from 0 at this precision")
        classes = [v.lead - floor(v.lead) for v in vals]
        clash = next(
            ((a, b) for a, b in itertools.combinations(range(len(rows)), 2) if classes[a] == classes[b]),
            None,
        )
        if clash is None:
            break
        a, b = clash
        hi, lo = (a, b) if vals[a].lead >= vals[b].lead else (b, a)
        shift = int(vals[hi].lead - vals[lo].lead)
        factor = PolyA.monomial(field, shift, _constant_ratio(vals[hi], vals[lo], field))
        rows[hi] = vec_sub(rows[hi], vec_scale(RatF(factor), rows[lo]))
        vals[hi] = vals[hi] - TailElement.from_poly(q, factor) * vals[lo]
    else:
        raise LatticeError("period reduction did not terminate")
    order = sorted(range(len(rows)), key=lambda i: (vals[i].lead, i))
    return ReducedBasis(
        tuple(rows[i] for i in order),
        tuple(vals[i].lead for i in order),
        omega,
        tuple(vals[i] for i in order),
    )


@dataclass(frozen=True)
class NormBall:
    """The F_q-space of lattice points with log_q |l omega| <= rho, and the next norm up."""

    generators: Tuple[Tuple[int, int], ...]
    log_norms: Tuple[Fraction, ...]
    log_radius: Fraction


def norm_ball(reduced: ReducedBasis, rho: Fraction, strict: bool = False) -> NormBall:
    """Generators t^d b_j with log_q |t^d b_j omega| <= rho (< rho when strict)."""
    gens = []
    radius = None
    for j, nu in enumerate(reduced.rdeg):
        top = ceil(rho - nu) - 1 if strict else floor(rho - nu)
        top = max(top, -1)
        gens.extend((d, j) for d in range(top + 1))
        nxt = top + 1 + nu
        radius = nxt if radius is None else min(radius, nxt)
    gens.sort(key=lambda dj: (dj[0] + reduced.rdeg[dj[1]], dj[1], dj[0]))
    return NormBall(
        tuple(gens),
        tuple(d + reduced.rdeg[j] for d, j in gens),
        radius,
    )


# u-expansion frame

@dataclass(frozen=True)
class UExpansionFrame:
    coset: LatticeCoset
    g: RatF
    lifted: Vector
    l_prime: LatticeCoset
    j: RatF
    lam: LatticeCoset
    x1: RatF
    v1_in_l1: bool
    x_prime: Optional[Vector]

    def fiber_point(self, a: PolyA) -> Tuple[RatF, Vector]:
        """(x_1, x') for the fiber x_1 = x1 + a g, with x' taken mod L'."""
        v = self.coset.v
        quot, _ = (v[0] / self.g).poly_part()
        shift = RatF(a) - RatF(quot)
        x = vec_add(v, vec_scale(shift, self.lifted))
        return x[0], x[1:]

    def index_log(self, x1: RatF) -> int:
        """log_q [L' : x_1 Lambda']."""
        return (self.coset.r - 1) * (x1 / self.j).degree


def u_frame(coset: LatticeCoset) -> UExpansionFrame:
    if coset.r < 2:
        raise LatticeError("the u-expansion frame needs rank at least 2")
    H = coset.hnf_basis()
    field = coset.field
    g = H[0][0]
    lifted = H[0]
    l_prime = LatticeCoset([row[1:] for row in H[1:]], None, field)
    v = coset.v
    v1 = v[0]
    j = ratf_gcd(v1, g)
    lam = l_prime.scaled(j.inverse())
    _, frac = (v1 / g).poly_part()
    x1 = g * frac
    inside = not frac
    x_prime = None
    if inside:
        shifted = vec_sub(v, vec_scale(v1 / g, lifted))
        x_prime = shifted[1:]
    return UExpansionFrame(coset, g, lifted, l_prime.with_v(x_prime) if inside else l_prime, j, lam, x1, inside, x_prime)


# torsion representatives

def _check_level(N: PolyA) -> None:
    if not N or N.degree < 1:
        raise LatticeError("the level must be a proper nonzero ideal of A")


def coset_reps(N: PolyA, lattice: LatticeCoset) -> List[Vector]:
    """sum c_i b_i / N with deg c_i < deg N, not all zero: representatives of (N^-1 L - L)/L."""
    _check_level(N)
    field = lattice.field
    inv = RatF(PolyA(field, (1,)), N)
    polys = list(polys_below(field, N.degree))
    out = []
    for cs in itertools.product(polys, repeat=lattice.r):
        if not any(cs):
            continue
        acc = tuple(RatF.from_int(field, 0) for _ in range(lattice.r))
        for c, b in zip(cs, lattice.basis):
            if c:
                acc = vec_add(acc, vec_scale(RatF(c) * inv, b))
        out.append(acc)
    return out


def projective_reps(N: PolyA, lattice: LatticeCoset) -> List[Vector]:
    """coset_reps modulo F_q^x: the first nonzero c_i is monic."""
    _check_level(N)
    field = lattice.field
    inv = RatF(PolyA(field, (1,)), N)
    polys = list(polys_below(field, N.degree))
    out = []
    for cs in itertools.product(polys, repeat=lattice.r):
        first = next((c for c in cs if c), None)
        if first is None or not first.is_monic():
            continue
        acc = tuple(RatF.from_int(field, 0) for _ in range(lattice.r))
        for c, b in zip(cs, lattice.basis):
            if c:
                acc = vec_add(acc, vec_scale(RatF(c) * inv, b))
        out.append(acc)
    return out


def quotient_reps(lattice: LatticeCoset, sub: LatticeCoset) -> List[Vector]:
    """Representatives of L/L' for a sublattice L' of finite index, 0 first."""
    if not lattice.contains_lattice(sub):
        raise LatticeError("not a sublattice")
    M = mat_mul(sub.basis, lattice._inv)
    snf = smith_form(M)
    adapted = mat_mul(mat_inverse(snf.Q), lattice.basis)
    field = lattice.field
    ranges = [list(polys_below(field, d.num.degree)) for d in snf.diagonal]
    zero = tuple(RatF.from_int(field, 0) for _ in range(lattice.r))
    out = []
    for cs in itertools.product(*ranges):
        acc = zero
        for c, b in zip(cs, adapted):
            if c:
                acc = vec_add(acc, vec_scale(RatF(c), b))
        out.append(acc)
    return out
