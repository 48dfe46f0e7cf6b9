"""Additive polynomials, coefficient forms, discriminants and Moore determinants.

Everything here is written against a duck-typed coefficient ring: TailRing for values at
a point omega, LevelTRing for the graded ring of level (t), or the function model of
level_t_ring. The ring supplies zero, one, add, sub, neg, mul, pow, is_zero, from_int,
from_ff and div_poly; rings whose elements carry an error term add negligible().
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import List, Optional, Sequence

from src.dmf.base_arith import FiniteField, PolyA, RatF, get_field, prime_power
from src.dmf.cinfty_model import TailElement, TailRing
from src.dmf.claims import CheckReport
from src.dmf.errors import BudgetExceeded, FieldError, NormalFormError, SpecError
from src.dmf.eisenstein_eval import (
    EisensteinSpec,
    eval_eisenstein,
    eval_exp,
    exp_coefficients,
    fibered,
    u_parameter,
)
from src.dmf.lattice_geom import (
    LatticeCoset,
    OmegaPoint,
    projective_reps,
    u_frame,
)

logger = logging.getLogger("dmf.drinfeld_forms")

MAX_MOORE_SIZE = 6


def vanishes(ring, x) -> bool:
    test = getattr(ring, "negligible", None)
    return test(x) if test is not None else ring.is_zero(x)


class AdditivePolynomial:
    """sum_i c_i X^{q^i} with coefficients in ring."""

    __slots__ = ("ring", "q", "coeffs")

    def __init__(self, ring, q: int, coeffs: Sequence):
        self.ring = ring
        self.q = q
        coeffs = list(coeffs)
        while len(coeffs) > 1 and vanishes(ring, coeffs[-1]):
            coeffs.pop()
        self.coeffs = coeffs or [ring.zero]

    @classmethod
    def identity(cls, ring, q: int) -> "AdditivePolynomial":
        return cls(ring, q, [ring.one])

    @classmethod
    def scalar(cls, ring, q: int, c) -> "AdditivePolynomial":
        return cls(ring, q, [c])

    @property
    def degree(self) -> int:
        """q-degree; -1 for the zero polynomial."""
        if len(self.coeffs) == 1 and vanishes(self.ring, self.coeffs[0]):
            return -1
        return len(self.coeffs) - 1

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def top(self):
        return self.coeffs[-1]

    def __add__(self, other: "AdditivePolynomial") -> "AdditivePolynomial":
        R = self.ring
        n = max(len(self.coeffs), len(other.coeffs))
        return AdditivePolynomial(R, self.q, [R.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def scale(self, c) -> "AdditivePolynomial":
        """c * f for c in the ring."""
        R = self.ring
        return AdditivePolynomial(R, self.q, [R.mul(c, x) for x in self.coeffs])

    def compose(self, other: "AdditivePolynomial", top_only: bool = False) -> "AdditivePolynomial":
        """(self o other)(X) = self(other(X)); with top_only just the leading coefficient."""
        R, q = self.ring, self.q
        if top_only:
            i, j = self.degree, other.degree
            if i < 0 or j < 0:
                return AdditivePolynomial(R, q, [R.zero])
            lead = R.mul(self.coeffs[i], R.pow(other.coeffs[j], q**i))
            return AdditivePolynomial(R, q, [R.zero] * (i + j) + [lead])
        out = [R.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, fi in enumerate(self.coeffs):
            if vanishes(R, fi):
                continue
            for j, gj in enumerate(other.coeffs):
                if vanishes(R, gj):
                    continue
                out[i + j] = R.add(out[i + j], R.mul(fi, R.pow(gj, q**i)))
        return AdditivePolynomial(R, q, out)

    def evaluate(self, x):
        R = self.ring
        total = R.zero
        power = x
        for i, c in enumerate(self.coeffs):
            if i:
                power = R.pow(power, self.q)
            total = R.add(total, R.mul(c, power))
        return total

    __call__ = evaluate

    def to_json(self) -> dict:
        def show(c):
            if hasattr(c, "to_json"):
                return c.to_json()
            if hasattr(c, "to_text"):
                return c.to_text()
            return repr(c)

        return {"q": self.q, "degree": self.degree, "coefficients": [show(c) for c in self.coeffs]}


# the Drinfeld module from torsion data

def q_power_index(n: int, q: int) -> Optional[int]:
    """i with n = q^i, else None."""
    i, power = 0, 1
    while power < n:
        power *= q
        i += 1
    return i if power == n else None


def torsion_product(ring, q: int, nstar, values: Sequence) -> List:
    """Coefficients of N* X prod_v (1 - c_v^{q-1} X^{q-1}) by X-degree 1 + j(q-1)."""
    R = ring
    poly = [R.one]
    for c in values:
        cq = R.pow(c, q - 1)
        nxt = list(poly) + [R.zero]
        for j, a in enumerate(poly):
            nxt[j + 1] = R.sub(nxt[j + 1], R.mul(cq, a))
        poly = nxt
    return [R.mul(nstar, a) for a in poly]


def psi_from_values(ring, q: int, nstar, values: Sequence) -> AdditivePolynomial:
    """psi_N from the weight-one values at the projective torsion representatives.

    Raises NormalFormError when a coefficient at an X-degree that is not a power of q
    survives.
    """
    coeffs = torsion_product(ring, q, nstar, values)
    kept = []
    for j, c in enumerate(coeffs):
        i = q_power_index(1 + j * (q - 1), q)
        if i is None:
            if not vanishes(ring, c):
                raise NormalFormError(f"coefficient of X^{1 + j * (q - 1)} in psi does not vanish")
            continue
        kept.append(c)
    return AdditivePolynomial(ring, q, kept)


def torsion_values(N: PolyA, lattice: LatticeCoset, omega: OmegaPoint, prec, method: str = "auto") -> List[TailElement]:
    """E_{1,v+L}(omega) over the projective representatives of N^-1 L / L."""
    return [
        eval_eisenstein(EisensteinSpec(1, lattice.with_v(v), prec), omega, method).value
        for v in projective_reps(N, lattice)
    ]


def _slack(values: Sequence[TailElement], q: int, N: PolyA) -> int:
    grow = Fraction(N.degree)
    for x in values:
        if x.terms and x.lead > 0:
            grow += (q - 1) * x.lead
    return ceil(grow)


def psi_from_torsion(
    N: PolyA,
    lattice: LatticeCoset,
    omega: OmegaPoint,
    prec,
    method: str = "auto",
) -> AdditivePolynomial:
    """psi^{L omega}_N over TailElements, every coefficient to O(t^{-prec})."""
    q = omega.q
    prec = Fraction(prec)
    values = torsion_values(N, lattice, omega, prec, method)
    slack = _slack(values, q, N)
    if slack > 0:
        values = torsion_values(N, lattice, omega, prec + slack, method)
    ring = TailRing(q, prec)
    nstar = TailElement.from_poly(q, N.monic())
    psi = psi_from_values(ring, q, nstar, values)
    logger.debug("psi_N from %d torsion values, degree %d, slack %d", len(values), psi.degree, slack)
    return AdditivePolynomial(ring, q, [c.truncate(prec) for c in psi.coeffs])


def discriminant(N: PolyA, lattice: LatticeCoset, omega: OmegaPoint, prec, method: str = "auto") -> TailElement:
    """Delta^L_N(omega), the top coefficient of psi_N."""
    return psi_from_torsion(N, lattice, omega, prec, method).top()


def psi_a(psi_t: AdditivePolynomial, a: PolyA) -> AdditivePolynomial:
    """psi_a = sum a_i psi_t^i by Horner composition."""
    if not a:
        raise SpecError("psi_a needs a nonzero a")
    R, q = psi_t.ring, psi_t.q
    coeffs = a.coeffs
    result = AdditivePolynomial.scalar(R, q, R.from_ff(coeffs[-1]))
    for c in reversed(coeffs[:-1]):
        result = result.compose(psi_t) + AdditivePolynomial.scalar(R, q, R.from_ff(c))
    return result


def psi_power(psi_t: AdditivePolynomial, n: int, top_only: bool = False) -> AdditivePolynomial:
    """psi_{t^n} = psi_t o ... o psi_t."""
    result = AdditivePolynomial.identity(psi_t.ring, psi_t.q)
    for _ in range(n):
        result = result.compose(psi_t, top_only)
    return result


# coefficient recursions

@dataclass
class CoefficientForms:
    """e[k] is the q^k-coefficient of e_L; E[k] is E_{q^k-1,L}, with E[0] = -1."""

    e: List
    E: List


def coefficient_recursion(psi: AdditivePolynomial, a: PolyA, count: int) -> CoefficientForms:
    """Solve psi_a(e_L(z)) = e_L(a z) for e_1..e_count, then E_{q^k-1} from e_L o log_L = id."""
    R, q = psi.ring, psi.q
    e = [R.one]
    for k in range(1, count + 1):
        acc = R.zero
        for i in range(1, k + 1):
            gi = psi.coeff(i)
            if vanishes(R, gi):
                continue
            acc = R.add(acc, R.mul(gi, R.pow(e[k - i], q**i)))
        pivot = a ** (q**k) - a
        if not pivot:
            raise FieldError(f"a^(q^{k}) - a vanishes; a must be nonconstant")
        e.append(R.div_poly(acc, pivot))
    E = [R.neg(R.one)]
    for k in range(1, count + 1):
        acc = e[k]
        for j in range(1, k):
            acc = R.sub(acc, R.mul(e[j], R.pow(E[k - j], q**j)))
        E.append(acc)
    return CoefficientForms(e, E)


def compositional_inverse_check(forms: CoefficientForms, q: int, ring, K: int) -> CheckReport:
    """e_L(z - sum_{i<=K} E_{q^i-1} z^{q^i}) = z + O(z^{q^{K+1}})."""
    if K >= len(forms.e):
        raise SpecError(f"only {len(forms.e) - 1} coefficients available, K = {K} requested")
    R = ring
    e_poly = AdditivePolynomial(R, q, forms.e[: K + 1])
    log_poly = AdditivePolynomial(R, q, [R.one] + [R.neg(x) for x in forms.E[1 : K + 1]])
    comp = e_poly.compose(log_poly)
    residual = [i for i in range(1, K + 1) if not vanishes(R, comp.coeff(i))]
    ok = not residual and vanishes(R, R.sub(comp.coeff(0), R.one))
    return CheckReport("compositional_inverse", ok, {"K": K, "nonvanishing": residual})


def recursion_numeric_check(lattice: LatticeCoset, omega: OmegaPoint, prec, count: int = 2) -> CheckReport:
    """e_k from psi_t against the exponential's own coefficients, and E_{q^k-1} against the series."""
    q = omega.q
    field = lattice.field
    t = PolyA.t(field)
    psi = psi_from_torsion(t, lattice, omega, prec)
    forms = coefficient_recursion(psi, t, count)
    direct = exp_coefficients(lattice, omega, count, prec)
    rows = []
    ok = True
    for k in range(1, count + 1):
        e_ok = forms.e[k].agrees(direct[k], min(_precs(forms.e[k], direct[k]), Fraction(prec)))
        weight = q**k - 1
        series = eval_eisenstein(EisensteinSpec(weight, lattice.lattice(), prec), omega).value
        E_ok = forms.E[k].agrees(series, min(_precs(forms.E[k], series), Fraction(prec)))
        ok = ok and e_ok and E_ok
        rows.append({"k": k, "e_matches": e_ok, "E_matches": E_ok, "e": forms.e[k].to_text()})
    inverse = compositional_inverse_check(forms, q, psi.ring, count)
    ok = ok and inverse.passed
    return CheckReport("coefficient_recursion", ok, {"rows": rows, "inverse": inverse.to_json()})


def _precs(*xs: TailElement) -> Fraction:
    known = [x.prec for x in xs if not x.is_exact()]
    return min(known) if known else Fraction(10**9)


def ideal_recursion_check(N: PolyA, lattice: LatticeCoset, omega: OmegaPoint, prec, count: int = 2) -> CheckReport:
    """sum_{i<=k} g_{N,i} e_{k-i,L}^{q^i} = N* e_{k,N^-1 L} for k <= count."""
    q = omega.q
    psi = psi_from_torsion(N, lattice, omega, prec)
    inner = lattice.lattice()
    outer = inner.scaled(RatF(PolyA(lattice.field, (1,)), N))
    e_l = exp_coefficients(inner, omega, count, prec)
    e_n = exp_coefficients(outer, omega, count, prec)
    nstar = TailElement.from_poly(q, N.monic())
    rows = []
    ok = True
    for k in range(count + 1):
        lhs = TailElement.zero(q)
        for i in range(k + 1):
            lhs = lhs + psi.coeff(i) * (e_l[k - i] ** (q**i))
        rhs = nstar * e_n[k]
        at = min(_precs(lhs, rhs), Fraction(prec))
        same = lhs.agrees(rhs, at)
        ok = ok and same
        rows.append({"k": k, "agrees": same, "precision": at})
    return CheckReport("ideal_recursion", ok, {"N": N.to_text(), "rows": rows})


def isogeny_functional_check(N: PolyA, lattice: LatticeCoset, omega: OmegaPoint, z: TailElement, prec) -> CheckReport:
    """psi_N(e_{L omega}(z)) = N* e_{N^-1 L omega}(z)."""
    q = omega.q
    prec = Fraction(prec)
    psi = psi_from_torsion(N, lattice, omega, prec + q ** (lattice.r * N.degree))
    inner = lattice.lattice()
    ez = eval_exp(inner, omega, z, prec + q ** (lattice.r * N.degree))
    lhs = psi.evaluate(ez)
    outer = inner.scaled(RatF(PolyA(lattice.field, (1,)), N))
    rhs = TailElement.from_poly(q, N.monic()) * eval_exp(outer, omega, z, prec)
    at = min(_precs(lhs, rhs), prec)
    ok = lhs.agrees(rhs, at)
    return CheckReport("isogeny_functional", ok, {"z": z.to_text(), "lhs": lhs.truncate(at).to_text(), "precision": at})


def torsion_linearity_check(
    N: PolyA,
    lattice: LatticeCoset,
    omega: OmegaPoint,
    prec,
    x: TailElement,
    y: TailElement,
    alpha: int,
) -> CheckReport:
    """The product form N* X prod(1 - E^{q-1} X^{q-1}) is additive and F_q-linear as a function."""
    q = omega.q
    values = torsion_values(N, lattice, omega, prec)
    ring = TailRing(q, prec)
    coeffs = torsion_product(ring, q, TailElement.from_poly(q, N.monic()), values)

    def full(z: TailElement) -> TailElement:
        total = TailElement.zero(q)
        power = z
        step = z ** (q - 1)
        for j, c in enumerate(coeffs):
            if j:
                power = power * step
            total = total + c * power
        return total

    additive = full(x + y) - full(x) - full(y)
    scaled = full(x.scale(alpha)) - full(x).scale(alpha)
    ok = additive.is_zero() and scaled.is_zero()
    return CheckReport(
        "psi_linearity",
        ok,
        {"additive_residual": additive.to_text(), "scaling_residual": scaled.to_text(), "alpha": alpha},
    )


# discriminant relations

def fq_scalar(ring, x, y, field: FiniteField) -> Optional[int]:
    """c in F_q^x with x = c y, or None."""
    for c in field.units():
        if vanishes(ring, ring.sub(x, ring.mul(ring.from_ff(c), y))):
            return c
    return None


def _units_field(q: int) -> FiniteField:
    p, e = prime_power(q)
    return get_field(p, e)


def discriminant_relations_numeric(
    a: PolyA,
    b: PolyA,
    lattice: LatticeCoset,
    omega: OmegaPoint,
    prec,
) -> CheckReport:
    """Delta_ab = Delta_a Delta_b^{q^{r deg a}}, the fundamental relation and Delta_a against Delta_t."""
    q, r = omega.q, lattice.r
    field = _units_field(q)
    ring = TailRing(q, prec)
    t = PolyA.t(lattice.field)
    d_a = discriminant(a, lattice, omega, prec)
    d_b = discriminant(b, lattice, omega, prec)
    d_ab = discriminant(a * b, lattice, omega, prec)
    d_t = d_a if a == t else discriminant(t, lattice, omega, prec)

    product = fq_scalar(ring, d_ab, d_a * d_b ** (q ** (r * a.degree)), field)
    fundamental = fq_scalar(
        ring,
        d_a ** (q ** (r * b.degree) - 1),
        d_b ** (q ** (r * a.degree) - 1),
        field,
    )
    exponent = (q ** (r * a.degree) - 1) // (q**r - 1)
    power = fq_scalar(ring, d_a, d_t**exponent, field)
    ok = None not in (product, fundamental, power)
    return CheckReport(
        "discriminant_relations",
        ok,
        {
            "a": a.to_text(),
            "b": b.to_text(),
            "product_scalar": product,
            "fundamental_scalar": fundamental,
            "power_scalar": power,
            "exponent": exponent,
        },
    )


def discriminant_relations_symbolic(psi_t: AdditivePolynomial, r: int, a: PolyA, b: PolyA, top_only: bool = False) -> CheckReport:
    """The same relations with psi_a, psi_b and psi_ab built from psi_t by composition."""
    R, q = psi_t.ring, psi_t.q
    field = _units_field(q)
    if top_only:
        if not (a.is_monic() and b.is_monic() and a == PolyA.monomial(a.field, a.degree) and b == PolyA.monomial(b.field, b.degree)):
            raise SpecError("leading-coefficient composition needs a and b to be powers of t")
        d_a = psi_power(psi_t, a.degree, True).top()
        d_b = psi_power(psi_t, b.degree, True).top()
        d_ab = psi_power(psi_t, a.degree + b.degree, True).top()
        composed = d_ab
    else:
        f_a, f_b = psi_a(psi_t, a), psi_a(psi_t, b)
        d_a, d_b = f_a.top(), f_b.top()
        d_ab = psi_a(psi_t, a * b).top()
        composed = f_a.compose(f_b).top()
    d_t = psi_t.top()
    product = fq_scalar(R, d_ab, R.mul(d_a, R.pow(d_b, q ** (r * a.degree))), field)
    exponent = (q ** (r * a.degree) - 1) // (q**r - 1)
    power = fq_scalar(R, d_a, R.pow(d_t, exponent), field)
    commutes = vanishes(R, R.sub(composed, d_ab))
    ok = product is not None and power is not None and commutes
    return CheckReport(
        "discriminant_relations_symbolic",
        ok,
        {"a": a.to_text(), "b": b.to_text(), "product_scalar": product, "power_scalar": power, "exponent": exponent},
    )


def scaling_law_check(a: RatF, N: PolyA, lattice: LatticeCoset, omega: OmegaPoint, prec) -> CheckReport:
    """Delta^{aL}_N = a^{1 - q^{r deg N}} Delta^L_N."""
    q, r = omega.q, lattice.r
    prec = Fraction(prec)
    exponent = q ** (r * N.degree) - 1
    factor = (a**exponent).inverse()
    base = discriminant(N, lattice, omega, prec + max(0, factor.degree))
    scaled = discriminant(N, lattice.scaled(a), omega, prec)
    rhs = TailElement.from_ratf(q, factor, prec + max(0, base.lead)) * base
    at = min(_precs(scaled, rhs), prec)
    ok = scaled.agrees(rhs, at)
    return CheckReport("scaling_law", ok, {"a": a.to_text(), "N": N.to_text(), "precision": at})


def isogeny_relation_check(lattice: LatticeCoset, points: Sequence[OmegaPoint], prec) -> CheckReport:
    """Delta^{t^-1 L} (Delta^L_t)^{q^r-1} = c (Delta^L_t)^{q^r} with c = t^{q^r-1} at every point."""
    field = lattice.field
    t = PolyA.t(field)
    rows = []
    ok = True
    for omega in points:
        q, r = omega.q, lattice.r
        d = discriminant(t, lattice, omega, prec)
        d_inv = discriminant(t, lattice.scaled(RatF(PolyA(field, (1,)), t)), omega, prec)
        lhs = d_inv * d ** (q**r - 1)
        rhs = d ** (q**r)
        c = lhs.div(rhs, Fraction(prec))
        expected = TailElement.monomial(q, q**r - 1)
        at = min(_precs(c), Fraction(prec))
        same = c.agrees(expected, at)
        ok = ok and same
        rows.append({"point": omega.to_text(), "constant": c.truncate(at).to_text(), "matches": same})
    return CheckReport("isogeny_relation", ok, {"expected": f"t^{{{lattice.q ** lattice.r - 1}}}", "rows": rows})


# Moore determinants

def moore_det(ring, xs: Sequence, q: int):
    """det of the n x n matrix with rows x_j^{q^i}, i = 0..n-1."""
    n = len(xs)
    if n < 1:
        raise SpecError("a Moore determinant needs at least one entry")
    if n > MAX_MOORE_SIZE:
        raise BudgetExceeded("Moore determinant by permutation expansion", estimate=n)
    R = ring
    rows = [list(xs)]
    for _ in range(1, n):
        rows.append([R.pow(x, q) for x in rows[-1]])
    total = R.zero
    for perm in itertools.permutations(range(n)):
        term = R.one
        for i, j in enumerate(perm):
            term = R.mul(term, rows[i][j])
        total = R.add(total, term) if _even(perm) else R.sub(total, term)
    return total


def _even(perm: Sequence[int]) -> bool:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return inversions % 2 == 0


def moore_product(ring, xs: Sequence, q: int):
    """prod over i of prod over c in F_q^{i-1} of (c_1 x_1 + ... + c_{i-1} x_{i-1} + x_i)."""
    R = ring
    field = _units_field(q)
    total = R.one
    for i, xi in enumerate(xs):
        for cs in itertools.product(field.elements(), repeat=i):
            form = xi
            for c, xj in zip(cs, xs):
                if c:
                    form = R.add(form, R.mul(R.from_ff(c), xj))
            total = R.mul(total, form)
    return total


def ff_det(field: FiniteField, B: Sequence[Sequence[int]]) -> int:
    n = len(B)
    total = 0
    for perm in itertools.permutations(range(n)):
        term = 1
        for i, j in enumerate(perm):
            term = field.mul(term, B[i][j])
        total = field.add(total, term) if _even(perm) else field.sub(total, term)
    return total


def moore_product_check(ring, xs: Sequence, q: int) -> CheckReport:
    det = moore_det(ring, xs, q)
    prod = moore_product(ring, xs, q)
    ok = vanishes(ring, ring.sub(det, prod))
    return CheckReport("moore_product", ok, {"n": len(xs)})


def moore_transform_check(ring, xs: Sequence, B: Sequence[Sequence[int]], q: int) -> CheckReport:
    """M(x B) = det(B) M(x) for B in M_n(F_q)."""
    field = _units_field(q)
    R = ring
    n = len(xs)
    ys = []
    for j in range(n):
        y = R.zero
        for i in range(n):
            if B[i][j]:
                y = R.add(y, R.mul(R.from_ff(B[i][j]), xs[i]))
        ys.append(y)
    d = ff_det(field, B)
    lhs = moore_det(R, ys, q)
    rhs = R.mul(R.from_ff(d), moore_det(R, xs, q))
    ok = vanishes(R, R.sub(lhs, rhs))
    return CheckReport("moore_transform", ok, {"n": n, "det": d})


# delta

def delta_from_values(ring, lam, values: Sequence):
    """lambda_N * prod over the projective representatives."""
    total = lam
    for v in values:
        total = ring.mul(total, v)
    return total


def delta_sign(q: int, count: int) -> int:
    """delta^{q-1} = sign * Delta for count projective representatives."""
    return 1 if (count + 1) % 2 == 0 or q % 2 == 0 else -1


def delta_root(N: PolyA, lattice: LatticeCoset, omega: OmegaPoint, prec):
    """(delta^L_N(omega), Delta^L_N(omega), number of projective representatives)."""
    q = omega.q
    prec = Fraction(prec)
    values = torsion_values(N, lattice, omega, prec)
    slack = _slack(values, q, N)
    if slack > 0:
        values = torsion_values(N, lattice, omega, prec + slack)
    minus_n = TailElement.from_poly(q, N.monic()).scale(field_minus_one(q))
    lam = minus_n.nth_root(q - 1, prec + slack + N.degree)
    delta = delta_from_values(TailRing(q, prec), lam, values)
    big_delta = psi_from_values(TailRing(q, prec), q, TailElement.from_poly(q, N.monic()), values).top()
    return delta, big_delta, len(values)


def field_minus_one(q: int) -> int:
    field = _units_field(q)
    return field.neg(1)


def delta_power_check(N: PolyA, lattice: LatticeCoset, omega: OmegaPoint, prec) -> CheckReport:
    q = omega.q
    delta, big_delta, count = delta_root(N, lattice, omega, prec)
    sign = delta_sign(q, count)
    target = big_delta if sign == 1 else -big_delta
    power = delta ** (q - 1)
    at = min(_precs(power, target), Fraction(prec))
    ok = power.agrees(target, at)
    return CheckReport("delta_power", ok, {"N": N.to_text(), "sign": sign, "representatives": count, "precision": at})


def delta_order_check(lattice: LatticeCoset, base: OmegaPoint, schedule: Sequence[int], rel) -> CheckReport:
    """Order of delta_t at the boundary: q^{r-1} in the level-(t) parameter, 1 in the full-level one."""
    q, r = base.q, lattice.r
    field = lattice.field
    t = PolyA.t(field)
    reps = projective_reps(t, lattice)
    outside = [v for v in reps if not u_frame(lattice.with_v(v)).v1_in_l1]
    level_frame = u_frame(lattice.with_v(outside[0]))
    full_frame = u_frame(lattice.lattice())
    lam_log = Fraction(1, q - 1)
    rel = Fraction(rel)
    rows = []
    for s in schedule:
        omega = base.boundary_point(s)
        log_delta = lam_log
        for v in reps:
            spec = EisensteinSpec(1, lattice.with_v(v), rel)
            log_delta += fibered(spec, omega, rel).value.lead
        rows.append(
            {
                "s": s,
                "log_delta": log_delta,
                "log_u_level": u_parameter(level_frame, omega, rel).lead,
                "log_u": u_parameter(full_frame, omega, rel).lead,
            }
        )
    a, b = rows[-2], rows[-1]
    order_level = (b["log_delta"] - a["log_delta"]) / (b["log_u_level"] - a["log_u_level"])
    order_full = (b["log_delta"] - a["log_delta"]) / (b["log_u"] - a["log_u"])
    predicted = q ** (r - 1)
    ok = order_level == predicted and order_full == 1
    return CheckReport(
        "delta_order",
        ok,
        {"predicted_level": predicted, "observed_level": order_level, "observed_full": order_full, "rows": rows},
    )


def boundary_limit_check(
    N: PolyA,
    k: int,
    lattice: LatticeCoset,
    base: OmegaPoint,
    schedule: Sequence[int],
    prec,
) -> CheckReport:
    """g_{N,k}(omega^(s)) -> g^{L'}_{N,k}(omega'), which is 0 exactly when k > (r-1) deg N."""
    r = lattice.r
    frame = u_frame(lattice.lattice())
    limit_psi = psi_from_torsion(N, frame.l_prime.lattice(), base.tail(), prec)
    limit = limit_psi.coeff(k)
    predicted_zero = k > (r - 1) * N.degree
    rows = []
    for s in schedule:
        value = psi_from_torsion(N, lattice, base.boundary_point(s), prec).coeff(k)
        diff = value - limit
        rows.append({"s": s, "log_gap": diff.lead if diff.terms else None})
    gaps = [float("-inf") if row["log_gap"] is None else row["log_gap"] for row in rows]
    converging = all(b <= a for a, b in zip(gaps, gaps[1:])) and (gaps[-1] < gaps[0] or gaps[-1] == float("-inf"))
    zero_ok = limit.is_zero() == predicted_zero
    return CheckReport(
        "boundary_limit",
        converging and zero_ok,
        {
            "k": k,
            "N": N.to_text(),
            "limit": limit.to_text(),
            "limit_is_zero": limit.is_zero(),
            "predicted_zero": predicted_zero,
            "rows": rows,
        },
    )
