"""Goss polynomials G_k(X, Y_1, Y_2, ...) over F_p and the partial-fraction identity.

G_1 = X and G_k = X (G_{k-1} + sum_{i>=1, q^i<k} Y_i G_{k-q^i}); for a finite F_q-space H
with e_H(z) = sum_i a_i z^{q^i} one has sum_{h in H} (z-h)^{-k} = G_k(1/e_H(z), a_1, a_2, ...).
"""
from __future__ import annotations

import functools
import logging
import threading
from typing import Dict, List, Optional, Sequence

from src.dmf.base_arith import embed, get_field, prime_power
from src.dmf.claims import CheckReport
from src.dmf.errors import SpecError
from src.dmf.mpoly import MPoly

logger = logging.getLogger("dmf.goss_poly")


def y_count(k: int, q: int) -> int:
    """Number of i >= 1 with q^i < k."""
    m, power = 0, q
    while power < k:
        m += 1
        power *= q
    return m


def pad(poly: MPoly, nvars: int) -> MPoly:
    if nvars == poly.nvars:
        return poly
    extra = (0,) * (nvars - poly.nvars)
    return MPoly(poly.domain, nvars, {e + extra: c for e, c in poly.terms.items()})


def _trim(poly: MPoly, nvars: int) -> MPoly:
    return MPoly(poly.domain, nvars, {e[:nvars]: c for e, c in poly.terms.items()})


class _GossFamily:
    def __init__(self, q: int):
        self.q = q
        self.p, _ = prime_power(q)
        self.field = get_field(self.p)
        self.nvars = 1
        self.polys: List[MPoly] = [MPoly.zero(self.field, 1), MPoly.var(self.field, 1, 0)]
        self._lock = threading.Lock()

    def _widen(self, nvars: int) -> None:
        self.polys = [pad(g, nvars) for g in self.polys]
        self.nvars = nvars

    def _extend(self) -> None:
        n = len(self.polys)
        m = y_count(n, self.q)
        if 1 + m > self.nvars:
            self._widen(1 + m)
        acc = self.polys[n - 1]
        power = self.q
        for i in range(1, m + 1):
            acc = acc + MPoly.var(self.field, self.nvars, i) * self.polys[n - power]
            power *= self.q
        self.polys.append(MPoly.var(self.field, self.nvars, 0) * acc)

    def get(self, k: int) -> MPoly:
        with self._lock:
            while len(self.polys) <= k:
                self._extend()
            return _trim(self.polys[k], 1 + y_count(k, self.q))


@functools.lru_cache(maxsize=None)
def _family(q: int) -> _GossFamily:
    return _GossFamily(q)


def goss(k: int, q: int) -> MPoly:
    """G_k in the variables (X, Y_1, ..., Y_m), m = #{i >= 1 : q^i < k}."""
    if k < 1:
        raise ValueError("Goss polynomials are indexed by k >= 1")
    return _family(q).get(k)


def ord_x(k: int, q: int) -> int:
    return int(goss(k, q).ord_in(0))


def variable_names(nvars: int) -> List[str]:
    return ["X"] + [f"Y{i}" for i in range(1, nvars)]


def goss_text(k: int, q: int) -> str:
    g = goss(k, q)
    return g.format(variable_names(g.nvars))


def goss_json(k: int, q: int) -> dict:
    g = goss(k, q)
    return {
        "k": k,
        "q": q,
        "variables": variable_names(g.nvars),
        "terms": [[list(e), c] for e, c in g.sorted_terms()],
        "text": g.format(variable_names(g.nvars)),
    }


def goss_value(k: int, q: int, x, alphas: Sequence, ring):
    """G_k(x, alphas) by running the recursion over ring (alphas[i-1] is Y_i)."""
    values = [ring.zero, x]
    for n in range(2, k + 1):
        acc = values[n - 1]
        power, i = q, 1
        while power < n:
            if i <= len(alphas):
                acc = ring.add(acc, ring.mul(alphas[i - 1], values[n - power]))
            power *= q
            i += 1
        values.append(ring.mul(x, acc))
    return values[k]


# dense polynomials in z over a domain, ascending coefficients

def _padd(a: List, b: List, D) -> List:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = D.add(out[i], c)
    return out


def _pmul(a: List, b: List, D) -> List:
    if not a or not b:
        return []
    out = [D.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if D.is_zero(x):
            continue
        for j, y in enumerate(b):
            if not D.is_zero(y):
                out[i + j] = D.add(out[i + j], D.mul(x, y))
    return out


def _ppow(a: List, n: int, D) -> List:
    result, base = [D.one], a
    while n:
        if n & 1:
            result = _pmul(result, base, D)
        base = _pmul(base, base, D)
        n >>= 1
    return result


def _div_linear(P: List, h, D) -> List:
    """P / (z - h) for a root h of P."""
    n = len(P) - 1
    out = [D.zero] * n
    carry = D.zero
    for i in range(n, 0, -1):
        carry = D.add(P[i], D.mul(carry, h))
        out[i - 1] = carry
    return out


def _strip(a: List, D) -> List:
    a = list(a)
    while a and D.is_zero(a[-1]):
        a.pop()
    return a


def span(basis: Sequence, q: int, domain) -> List:
    """All F_q-combinations of basis inside domain (a FiniteField or CoeffField)."""
    scalars = _scalars(q, domain)
    elements = [domain.zero]
    seen = {domain.zero}
    for b in basis:
        new = []
        for h in elements:
            for c in scalars[1:]:
                x = domain.add(h, domain.mul(c, b))
                if x not in seen:
                    seen.add(x)
                    new.append(x)
        elements.extend(new)
    return elements


def _scalars(q: int, domain) -> List:
    p, e = prime_power(q)
    Fq = get_field(p, e)
    if hasattr(domain, "from_ff"):
        return [domain.from_ff(c) for c in Fq.elements()]
    return [embed(c, Fq, domain) for c in Fq.elements()]


def check_fq_stable(elements: Sequence, q: int, domain) -> None:
    members = set(elements)
    if domain.zero not in members:
        raise SpecError("H does not contain 0")
    scalars = _scalars(q, domain)
    for h in elements:
        for c in scalars:
            if domain.mul(c, h) not in members:
                raise SpecError("H is not stable under F_q-scaling")
        for g in elements:
            if domain.add(h, g) not in members:
                raise SpecError("H is not closed under addition")


def exponential_coefficients(elements: Sequence, q: int, domain) -> Dict[int, object]:
    """{i: a_i} with e_H(z) = sum a_i z^{q^i}; raises when e_H is not F_q-linear."""
    D = domain
    P = [D.one]
    kappa = D.one
    for h in elements:
        P = _pmul(P, [D.neg(h), D.one], D)
        if not D.is_zero(h):
            kappa = D.mul(kappa, D.neg(D.inv(h)))
    e_h = [D.mul(kappa, c) for c in P]
    coeffs = {}
    for n, c in enumerate(e_h):
        if D.is_zero(c):
            continue
        i, power = 0, 1
        while power < n:
            power *= q
            i += 1
        if power != n:
            raise SpecError(f"e_H has a nonzero coefficient at z^{n}, which is not a power of q")
        coeffs[i] = c
    return coeffs


def verify_partial_fraction(elements: Sequence, k: int, q: int, domain) -> bool:
    """Exact check of sum_{h in H} (z-h)^{-k} = G_k(1/e_H(z), a_1, ...) with denominators cleared."""
    check_fq_stable(elements, q, domain)
    D = domain
    P = [D.one]
    kappa = D.one
    for h in elements:
        P = _pmul(P, [D.neg(h), D.one], D)
        if not D.is_zero(h):
            kappa = D.mul(kappa, D.neg(D.inv(h)))
    alphas = exponential_coefficients(elements, q, domain)

    lhs: List = []
    for h in elements:
        lhs = _padd(lhs, _ppow(_div_linear(P, h, D), k, D), D)

    g = goss(k, q)
    p_field = get_field(prime_power(q)[0])
    powers: Dict[int, List] = {}
    rhs: List = []
    kappa_inv = D.inv(kappa)
    for exps, c in g.terms.items():
        a = exps[0]
        coeff = D.mul(_lift(c, p_field, D), D.pow(kappa_inv, a))
        for i, b in enumerate(exps[1:], start=1):
            if b:
                coeff = D.mul(coeff, D.pow(alphas.get(i, D.zero), b))
        if D.is_zero(coeff):
            continue
        if k - a not in powers:
            powers[k - a] = _ppow(P, k - a, D)
        rhs = _padd(rhs, [D.mul(coeff, x) for x in powers[k - a]], D)
    ok = _strip(lhs, D) == _strip(rhs, D)
    if not ok:
        logger.warning("partial-fraction identity failed for |H|=%d, k=%d, q=%d", len(elements), k, q)
    return ok


def _lift(c: int, p_field, D):
    if hasattr(D, "from_ff"):
        return D.from_int(c)
    return embed(c, p_field, D)


# identity checks

def frobenius_check(q: int, kmax: int = 12) -> CheckReport:
    """G_{pk} = G_k^p for k <= kmax."""
    p = prime_power(q)[0]
    bad = []
    for k in range(1, kmax + 1):
        big = goss(p * k, q)
        small = pad(goss(k, q) ** p, big.nvars)
        if big != small:
            bad.append(k)
    return CheckReport("goss_frobenius", not bad, {"q": q, "kmax": kmax, "failures": bad})


def derivative_check(q: int, kmax: int = 30) -> CheckReport:
    """X^2 dG_k/dX = k G_{k+1} for k <= kmax."""
    field = get_field(prime_power(q)[0])
    bad = []
    for k in range(1, kmax + 1):
        nxt = goss(k + 1, q)
        g = pad(goss(k, q), nxt.nvars)
        lhs = MPoly.var(field, nxt.nvars, 0, 2) * g.derivative(0)
        if lhs != nxt.scale(field.from_int(k)):
            bad.append(k)
    return CheckReport("goss_derivative", not bad, {"q": q, "kmax": kmax, "failures": bad})


def shape_check(q: int, kmax: int = 30) -> CheckReport:
    """G_k is monic of degree k in X, divisible by X, uses only Y_i with q^i < k; ord_X G_k = k for k <= q."""
    bad = []
    for k in range(1, kmax + 1):
        g = goss(k, q)
        top = g.coefficient_in(0, k)
        monic = g.degree_in(0) == k and top == MPoly.constant(g.domain, g.nvars, 1)
        used = max(g.variables_used(), default=0)
        order = ord_x(k, q)
        ok = monic and order >= 1 and used <= y_count(k, q) and (k > q or order == k)
        if not ok:
            bad.append({"k": k, "monic": monic, "ord_x": order, "last_variable": used})
    return CheckReport("goss_shape", not bad, {"q": q, "kmax": kmax, "failures": bad})


def subspace_grid(q: int) -> List[List[int]]:
    """{0}, F_q, every line of F_{q^2} and F_{q^2} itself, as element lists of F_{q^2}."""
    p, e = prime_power(q)
    big = get_field(p, 2 * e)
    small = get_field(p, e)
    one = embed(1, small, big)
    spaces = [[big.zero], span([one], q, big)]
    seen = {frozenset(spaces[1])}
    for g in big.units():
        line = span([g], q, big)
        if frozenset(line) not in seen:
            seen.add(frozenset(line))
            spaces.append(line)
    spaces.append(span([one, big.gen], q, big))
    return spaces


def partial_fraction_check(q: int, kmax: Optional[int] = None) -> CheckReport:
    """The partial-fraction identity for every space of subspace_grid(q) and k <= kmax (default q^2)."""
    p, e = prime_power(q)
    big = get_field(p, 2 * e)
    kmax = kmax or q * q
    rows = []
    for H in subspace_grid(q):
        failures = [k for k in range(1, kmax + 1) if not verify_partial_fraction(H, k, q, big)]
        rows.append({"size": len(H), "failures": failures})
    ok = all(not row["failures"] for row in rows)
    return CheckReport("goss_partial_fraction", ok, {"q": q, "kmax": kmax, "spaces": rows})
