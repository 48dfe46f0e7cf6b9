"""Eisenstein series E_{k,v+L}(omega) = sum over nonzero x in v+L of (x omega)^{-k}.

Evaluation routes:

* direct: sum over a box of coordinates; every omitted term is bounded by the
  smallest period outside the box.
* ball: H = the F_q-space of periods of norm below R. The sum over v+L is
  G_k(1/e_H(z), a_1(H), ...) up to R^{-k}, where e_H is built one generator at a time.
* fibered: at boundary points, one lattice exponential of L' per first coordinate x_1.

The consistency checks at the end of the module return CheckReport objects.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Dict, List, Optional, Sequence, Tuple

from src.dmf.base_arith import PolyA, RatF, polys_below
from src.dmf.cinfty_model import TailElement, TailRing, sum_tails
from src.dmf.claims import CheckReport
from src.dmf.errors import BudgetExceeded, LatticeError, PrecisionExhausted, SpecError
from src.dmf.goss_poly import goss_value, y_count
from src.dmf.lattice_geom import (
    LatticeCoset,
    Matrix,
    NormBall,
    OmegaPoint,
    ReducedBasis,
    UExpansionFrame,
    coset_reps,
    enumerate_coset,
    mat_det,
    mat_inverse,
    norm_ball,
    pairing,
    projective_reps,
    quotient_reps,
    reduced_basis,
    tail_log_bound,
    u_frame,
    vec_add,
    vec_mat,
    vec_scale,
)

logger = logging.getLogger("dmf.eisenstein_eval")

METHODS = ("auto", "direct", "ball", "fibered")
DEFAULT_BUDGET = 200_000
MAX_BALL_DIM = 256
_REL_START = 8
_REL_DOUBLINGS = 6


@dataclass(frozen=True)
class EisensteinSpec:
    k: int
    coset: LatticeCoset
    prec: Fraction = Fraction(8)

    def __post_init__(self):
        if self.k < 1:
            raise SpecError(f"weight must be at least 1, got {self.k}")
        prec = Fraction(self.prec)
        if prec <= 0:
            raise SpecError(f"target precision must be positive, got {self.prec}")
        object.__setattr__(self, "prec", prec)

    @property
    def q(self) -> int:
        return self.coset.q

    def with_coset(self, coset: LatticeCoset) -> "EisensteinSpec":
        return EisensteinSpec(self.k, coset, self.prec)

    def with_prec(self, prec) -> "EisensteinSpec":
        return EisensteinSpec(self.k, self.coset, prec)

    def to_json(self) -> dict:
        return {"k": self.k, "coset": self.coset.to_json(), "prec": str(self.prec)}


@dataclass
class EisensteinValue:
    value: TailElement
    method: str
    certified: bool
    terms: int

    def to_json(self) -> dict:
        return {
            "value": self.value.to_text(),
            "expansion": self.value.to_json(),
            "method": self.method,
            "certified": self.certified,
            "terms": self.terms,
        }


@dataclass(frozen=True)
class SlashContext:
    """gamma in GL_r(F) acting on weight-k functions of the period point."""

    gamma: Matrix
    k: int

    def __post_init__(self):
        if not mat_det(self.gamma):
            raise LatticeError("gamma is singular")

    def coset(self, coset: LatticeCoset) -> LatticeCoset:
        return coset.transform(self.gamma)

    def point(self, omega: OmegaPoint, prec=None) -> OmegaPoint:
        return omega.transform(self.gamma, prec)


# one generator at a time

def _subspace_exp(
    q: int,
    gens: Sequence[TailElement],
    points: Sequence[TailElement],
    ncoeffs: int,
    rel: Fraction,
) -> Tuple[List[TailElement], List[TailElement]]:
    """e_H at the given points and [a_0, ..., a_ncoeffs] for H the F_q-span of gens.

    Adding h to H replaces e(z) by e(z) - w^{1-q} e(z)^q with w = e(h).
    """
    pending = [h.with_relative(rel) for h in gens]
    values = [z.with_relative(rel) for z in points]
    zero = TailElement.zero(q)
    coeffs = [TailElement.one(q)]
    for i, w in enumerate(pending):
        if not w.terms:
            raise PrecisionExhausted("a period image vanished at the working precision")
        f = w.inverse() ** (q - 1)

        def step(y: TailElement) -> TailElement:
            return (y - f * y.qpow()).with_relative(rel)

        for j in range(i + 1, len(pending)):
            pending[j] = step(pending[j])
        values = [step(y) for y in values]
        nxt = [coeffs[0]]
        for n in range(1, min(len(coeffs), ncoeffs) + 1):
            cur = coeffs[n] if n < len(coeffs) else zero
            nxt.append((cur - f * coeffs[n - 1].qpow()).with_relative(rel))
        coeffs = nxt
    while len(coeffs) <= ncoeffs:
        coeffs.append(zero)
    return values, coeffs


def _generator_values(reduced: ReducedBasis, ball: NormBall) -> List[TailElement]:
    q = reduced.omega.q
    base = reduced.values()
    return [TailElement.monomial(q, d) * base[j] for d, j in ball.generators]


def _power_sum_depth(k: int, q: int) -> int:
    i, power = 0, q
    while power - 1 <= k:
        i += 1
        power *= q
    return i


def _power_sum(k: int, q: int, coeffs: Sequence[TailElement]) -> TailElement:
    """sum over nonzero h in H of h^{-k}: minus the z^k coefficient of 1/(1 + sum a_i z^{q^i-1})."""
    series = [TailElement.one(q)]
    for n in range(1, k + 1):
        acc = TailElement.zero(q)
        i, power = 1, q
        while power - 1 <= n:
            if i < len(coeffs):
                acc = acc + coeffs[i] * series[n - power + 1]
            i += 1
            power *= q
        series.append(-acc)
    return -series[k]


def _ball_work_prec(prec: Fraction, rel: Fraction) -> Fraction:
    return prec + 2 * rel


def _check_point(spec: EisensteinSpec, omega: OmegaPoint) -> None:
    if omega.r != spec.coset.r:
        raise LatticeError(f"rank {spec.coset.r} coset paired with a rank {omega.r} point")
    if omega.q != spec.q:
        raise LatticeError(f"coset over q={spec.q} paired with a point over q={omega.q}")


def _certified(omega: OmegaPoint) -> bool:
    """The tail bounds hold when the untransformed point has distinct leading classes."""
    root = omega if omega.frame is None else omega.frame[0]
    return root.certified


# evaluation routes

def _box_size(coset: LatticeCoset, D: int) -> int:
    d, H = coset.hnf()
    bound = D + d.degree
    size = 1
    for j, row in enumerate(H):
        size *= coset.q ** max(bound - row[j].degree + 1, 0)
    return size


def _direct(spec: EisensteinSpec, omega: OmegaPoint, budget: int) -> EisensteinValue:
    q, k, P = omega.q, spec.k, spec.prec
    D = 0
    while k * tail_log_bound(omega, D) < P:
        D += 1
    estimate = _box_size(spec.coset, D)
    if estimate > budget:
        raise BudgetExceeded(f"direct summation over coordinates of degree <= {D}", estimate=estimate)
    work = 2 * P + _REL_START
    total = TailElement.zero(q)
    count = 0
    for x in enumerate_coset(spec.coset, D):
        y = pairing(x, omega, work)
        total = total + (y**k).inverse(P)
        count += 1
    logger.debug("direct sum: k=%d D=%d terms=%d", k, D, count)
    return EisensteinValue(total.truncate(P), "direct", _certified(omega), count)


def _ball(spec: EisensteinSpec, omega: OmegaPoint, max_dim: int = MAX_BALL_DIM) -> EisensteinValue:
    q, k, P = omega.q, spec.k, spec.prec
    rel = P + _REL_START
    for _ in range(_REL_DOUBLINGS):
        work = _ball_work_prec(P, rel)
        reduced = reduced_basis(spec.coset.lattice(), omega, work)
        coords = vec_mat(spec.coset.v, mat_inverse(reduced.rows))
        fracs = [c.poly_part()[1] for c in coords]
        ball = norm_ball(reduced, P / k, strict=True)
        if len(ball.generators) > max_dim:
            raise BudgetExceeded(f"norm ball for weight {k} at precision {P}", estimate=len(ball.generators))
        gens = _generator_values(reduced, ball)
        try:
            if any(fracs):
                z = sum_tails(
                    q,
                    (TailElement.from_ratf(q, c, work) * b for c, b in zip(fracs, reduced.values()) if c),
                )
                (ez,), coeffs = _subspace_exp(q, gens, [z], y_count(k, q), rel)
                value = goss_value(k, q, ez.inverse(), coeffs[1:], TailRing(q))
            else:
                _, coeffs = _subspace_exp(q, gens, [], _power_sum_depth(k, q), rel)
                value = _power_sum(k, q, coeffs)
        except PrecisionExhausted as exc:
            logger.debug("ball evaluation lost precision at rel=%s: %s", rel, exc)
        else:
            value = value.truncate(P)
            if value.prec >= P:
                return EisensteinValue(value, "ball", _certified(omega), len(gens))
        rel *= 2
    raise PrecisionExhausted(f"ball evaluation of weight {k} did not reach O(t^{{-{P}}})")


def eval_eisenstein(
    spec: EisensteinSpec,
    omega: OmegaPoint,
    method: str = "auto",
    budget: int = DEFAULT_BUDGET,
) -> EisensteinValue:
    """E_{k,v+L}(omega) to O(t^{-prec})."""
    _check_point(spec, omega)
    if method not in METHODS:
        raise SpecError(f"unknown evaluation method {method!r}; expected one of {', '.join(METHODS)}")
    if method == "auto":
        try:
            return _ball(spec, omega)
        except LatticeError as exc:
            logger.info("falling back to direct summation: %s", exc)
            return _direct(spec, omega, budget)
    if method == "direct":
        return _direct(spec, omega, budget)
    if method == "ball":
        return _ball(spec, omega)
    fv = fibered(spec, omega)
    return EisensteinValue(fv.value.truncate(spec.prec), "fibered", _certified(omega), fv.fiber_count)


# lattice exponentials

def log_phi(reduced: ReducedBasis, log_delta: Fraction) -> Fraction:
    """log_q of delta * prod over periods 0 < |l| < delta of delta/|l|.

    This is log_q |e(z)| for every z with |z| = delta whose leading exponent is in
    no class of the periods.
    """
    q = reduced.omega.q
    ball = norm_ball(reduced, log_delta, strict=True)
    total = Fraction(log_delta)
    dim = 0
    for level in sorted(set(ball.log_norms)):
        count = ball.log_norms.count(level)
        total += (q ** (dim + count) - q**dim) * (log_delta - level)
        dim += count
    return total


def _exp_relative(
    reduced: ReducedBasis,
    z: TailElement,
    rel: Fraction,
    vanish: Optional[Fraction] = None,
) -> TailElement:
    """e_{L omega}(z) known to relative precision rel.

    With vanish set, a value with no known terms down to O(t^{-vanish}) is returned
    as that zero; this is what happens when z is a period.
    """
    q = reduced.omega.q
    rel = Fraction(rel)
    ball = norm_ball(reduced, z.lead + rel / (q - 1))
    if len(ball.generators) > MAX_BALL_DIM:
        raise BudgetExceeded("norm ball for a lattice exponential", estimate=len(ball.generators))
    gens = _generator_values(reduced, ball)
    work = rel + _REL_START
    for _ in range(_REL_DOUBLINGS):
        try:
            (ez,), _ = _subspace_exp(q, gens, [z], 0, work)
        except PrecisionExhausted:
            ez = None
        if ez is not None and ez.terms:
            out = ez.with_relative(rel)
            if out.prec + out.lead >= rel:
                return out
        elif ez is not None and vanish is not None and ez.prec is not None and ez.prec >= vanish:
            logger.debug("lattice exponential vanishes to O(t^-%s)", ez.prec)
            return ez
        work *= 2
    raise PrecisionExhausted(f"lattice exponential did not reach relative precision {rel}")


def eval_exp(lattice: LatticeCoset, omega: OmegaPoint, z: TailElement, prec) -> TailElement:
    """e_{L omega}(z) to O(t^{-prec})."""
    prec = Fraction(prec)
    if not z.terms:
        return z if z.is_exact() else z.truncate(prec)
    reduced = reduced_basis(lattice, omega, prec + _REL_START)
    rel = max(prec + z.lead, Fraction(1))
    for _ in range(_REL_DOUBLINGS):
        ez = _exp_relative(reduced, z, rel, vanish=prec)
        if not ez.terms:
            return ez.truncate(prec)
        need = prec + ez.lead
        if need <= rel:
            return ez.truncate(prec)
        rel = need
    raise PrecisionExhausted(f"lattice exponential did not reach O(t^{{-{prec}}})")


def _coefficient_tail(q: int, coeffs: Sequence[TailElement], log_radius: Fraction) -> Optional[Fraction]:
    """log_q bound on a_i(L) - a_i(H) over i <= len(coeffs)-1."""
    worst = None
    for i in range(1, len(coeffs)):
        for j in range(1, i + 1):
            size = coeffs[i - j].upper_log_norm()
            if size is None:
                continue
            bound = q**j * size - (q**j - 1) * log_radius
            worst = bound if worst is None else max(worst, bound)
    return worst


def exp_coefficients(lattice: LatticeCoset, omega: OmegaPoint, count: int, prec) -> List[TailElement]:
    """[1, a_1, ..., a_count] with e_{L omega}(z) = sum a_i z^{q^i}, each to O(t^{-prec})."""
    q = omega.q
    prec = Fraction(prec)
    reduced = reduced_basis(lattice, omega, prec + _REL_START)
    rho = prec / (q - 1)
    for _ in range(64):
        ball = norm_ball(reduced, rho)
        if len(ball.generators) > MAX_BALL_DIM:
            raise BudgetExceeded("norm ball for exponential coefficients", estimate=len(ball.generators))
        coeffs = _ball_coefficients(reduced, ball, count, prec)
        worst = _coefficient_tail(q, coeffs, ball.log_radius)
        if worst is None or worst <= -prec:
            return [c.truncate(prec) for c in coeffs]
        rho += 1
    raise PrecisionExhausted(f"exponential coefficients did not reach O(t^{{-{prec}}})")


def _ball_coefficients(reduced: ReducedBasis, ball: NormBall, count: int, prec: Fraction) -> List[TailElement]:
    q = reduced.omega.q
    gens = _generator_values(reduced, ball)
    rel = prec + _REL_START
    for _ in range(_REL_DOUBLINGS):
        try:
            _, coeffs = _subspace_exp(q, gens, [], count, rel)
        except PrecisionExhausted:
            coeffs = None
        if coeffs is not None and all(c.is_exact() or c.prec >= prec for c in coeffs):
            return coeffs
        rel *= 2
    raise PrecisionExhausted("exponential coefficients lost precision")


# boundary points

@dataclass
class FiberedValue:
    value: TailElement
    constant: Optional[TailElement]
    fibers: TailElement
    target: Fraction
    fiber_count: int


def _generic(reduced: ReducedBasis, log_norm: Fraction) -> bool:
    """True when no period has a leading exponent in the class of log_norm mod 1."""
    return log_norm - floor(log_norm) not in {d - floor(d) for d in reduced.rdeg}


def _fiber_bound(reduced: ReducedBasis, k: int, log_delta: Fraction) -> Fraction:
    """-log_q of a bound on one fiber whose first coordinate has |x_1 omega_1| >= delta."""
    if k == 1:
        return log_phi(reduced, log_delta)
    return k * log_delta


def _fiber_argument(
    q: int,
    x1: RatF,
    xprime,
    omega: OmegaPoint,
    l_prime: LatticeCoset,
    rel: Fraction,
) -> TailElement:
    inner = omega.tail()
    w1 = omega.entries[0]
    log_z = x1.degree + w1.lead
    reduced_x = l_prime.lattice().with_v(xprime).reduced_v()
    y_prec = rel - log_z + max(x.lead for x in inner.entries)
    y = pairing(reduced_x, inner, y_prec)
    return TailElement.from_ratf(q, x1, rel - x1.degree) * w1 + y


def _fiber(
    k: int,
    q: int,
    z: TailElement,
    reduced: ReducedBasis,
    alphas: Sequence[TailElement],
    target: Fraction,
) -> TailElement:
    """sum over l in L' of (z + l omega')^{-k} = G_k(1/e_{L' omega'}(z)) to O(t^{-target})."""
    if _generic(reduced, z.lead):
        log_x = -log_phi(reduced, z.lead)
        bound = log_x if k == 1 else -k * z.lead
        if bound <= -target:
            return TailElement.zero(q, target)
        rel = max(target + log_x, Fraction(1)) + _REL_START
    else:
        rel = target + _REL_START
    for _ in range(_REL_DOUBLINGS):
        ez = _exp_relative(reduced, z, rel)
        x = ez.inverse()
        value = x if k == 1 else goss_value(k, q, x, alphas, TailRing(q))
        if value.prec is not None and value.prec >= target:
            return value.truncate(target)
        rel *= 2
    raise PrecisionExhausted(f"fiber sum did not reach O(t^{{-{target}}})")


def fibered(spec: EisensteinSpec, omega: OmegaPoint, rel=None) -> FiberedValue:
    """E_{k,v+L} at a boundary point, one first coordinate x_1 at a time.

    The x_1 = 0 fiber (present when v_1 is in L_1) is the rank r-1 series at omega' and
    is computed to O(t^{-prec}). The other fibers are summed to rel digits below the
    largest of them.
    """
    _check_point(spec, omega)
    if omega.r < 2:
        raise LatticeError("fiberwise evaluation needs rank at least 2")
    q, k = omega.q, spec.k
    rel = Fraction(spec.prec if rel is None else rel)
    frame = u_frame(spec.coset)
    inner = omega.tail()
    w1 = omega.entries[0]
    nu1 = w1.lead
    reduced = reduced_basis(frame.l_prime.lattice(), inner)
    if not _generic(reduced, nu1):
        raise LatticeError("omega_1 shares a leading class with the periods of L'")

    constant = None
    if frame.v1_in_l1:
        constant = eval_eisenstein(spec.with_coset(frame.l_prime), inner).value
        smallest = frame.g.degree
    else:
        smallest = frame.x1.degree
    target = _fiber_bound(reduced, k, smallest + nu1) + rel
    top = smallest
    while _fiber_bound(reduced, k, top + 1 + nu1) < target:
        top += 1

    alphas: List[TailElement] = []
    if k > 1:
        alphas = exp_coefficients(frame.l_prime.lattice(), inner, y_count(k, q), target + _REL_START)[1:]

    fibers = TailElement.zero(q, target)
    count = 0
    for a in polys_below(spec.coset.field, top - frame.g.degree + 1):
        x1, xprime = frame.fiber_point(a)
        if not x1:
            continue
        z = _fiber_argument(q, x1, xprime, omega, frame.l_prime, target + _REL_START + max(nu1, 0))
        fibers = fibers + _fiber(k, q, z, reduced, alphas, target)
        count += 1
    logger.debug("fibered sum: k=%d fibers=%d top degree=%d target=%s", k, count, top, target)
    value = fibers if constant is None else constant + fibers
    return FiberedValue(value, constant, fibers, target, count)


def u_parameter(frame: UExpansionFrame, omega: OmegaPoint, rel) -> TailElement:
    """u = 1/e_{Lambda' omega'}(omega_1) to relative precision rel."""
    reduced = reduced_basis(frame.lam.lattice(), omega.tail())
    return _exp_relative(reduced, omega.entries[0], Fraction(rel)).inverse()


# checks

def tail_gap(a: TailElement, b: TailElement) -> Tuple[bool, Optional[Fraction], Fraction]:
    """(agree, log_q |a-b| if known, precision compared at)."""
    precs = [x.prec for x in (a, b) if not x.is_exact()]
    prec = min(precs) if precs else None
    diff = a - b
    if prec is not None:
        diff = diff.truncate(prec)
    return diff.is_zero(), (diff.lead if diff.terms else None), prec


def doubling_check(spec: EisensteinSpec, omega: OmegaPoint, method: str = "auto") -> CheckReport:
    """Doubling the target precision never changes the digits already certified."""
    low = eval_eisenstein(spec, omega, method)
    high = eval_eisenstein(spec.with_prec(2 * spec.prec), omega, method)
    ok = high.value.agrees(low.value, spec.prec)
    return CheckReport(
        "doubling",
        ok,
        {"low": low.value.to_text(), "high": high.value.to_text(), "method": low.method},
    )


def weight1_inversion_check(coset: LatticeCoset, omega: OmegaPoint, prec) -> CheckReport:
    """E_{1,v+L}(omega) e_{L omega}(v omega) = 1 for v outside L."""
    if coset.v_in_lattice():
        raise SpecError("weight-1 inversion needs v outside L")
    prec = Fraction(prec)
    q = omega.q
    lattice = coset.lattice()
    reduced = reduced_basis(lattice, omega, 2 * prec + _REL_START)
    z = pairing(coset.reduced_v(), omega, 2 * prec + _REL_START)
    ez = _exp_relative(reduced, z, prec)
    E = eval_eisenstein(EisensteinSpec(1, coset, max(prec + ez.lead, Fraction(1))), omega)
    product = E.value * ez
    ok, gap, at = tail_gap(product, TailElement.one(q))
    return CheckReport(
        "weight1_inversion",
        ok and at is not None and at >= prec,
        {"product": product.to_text(), "log_gap": gap, "precision": at, "exp": ez.to_text()},
    )


def alpha_equivariance_check(spec: EisensteinSpec, alpha: int, omega: OmegaPoint, method: str = "auto") -> CheckReport:
    """E_{k,alpha v+L} = alpha^{-k} E_{k,v+L} for alpha in F_q^x."""
    field = spec.coset.field
    if not alpha or alpha >= field.order:
        raise SpecError(f"{alpha} is not a unit of F_{field.order}")
    scaled = spec.coset.with_v(vec_scale(RatF.from_ff(field, alpha), spec.coset.v))
    lhs = eval_eisenstein(spec.with_coset(scaled), omega, method).value
    base = eval_eisenstein(spec, omega, method).value
    rhs = base.scale(field.pow(field.inv(alpha), spec.k), TailElement.base_field(omega.q))
    ok, gap, at = tail_gap(lhs, rhs)
    return CheckReport(
        "alpha_equivariance",
        ok,
        {"alpha": field.format(alpha), "exact": lhs == rhs, "log_gap": gap, "precision": at},
    )


def slash_transform_check(spec: EisensteinSpec, gamma: Matrix, omega: OmegaPoint, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """E_{k,v gamma + L gamma}(omega) against E_{k,v+L}(gamma omega)."""
    ctx = SlashContext(gamma, spec.k)
    lhs = eval_eisenstein(spec.with_coset(ctx.coset(spec.coset)), omega, budget=budget)
    rhs = eval_eisenstein(spec, ctx.point(omega, 2 * spec.prec + _REL_START), budget=budget)
    ok, gap, at = tail_gap(lhs.value, rhs.value)
    return CheckReport(
        "slash_transform",
        ok,
        {
            "gamma": [[x.to_text() for x in row] for row in gamma],
            "lhs": lhs.value.to_text(),
            "rhs": rhs.value.to_text(),
            "methods": [lhs.method, rhs.method],
            "log_gap": gap,
            "precision": at,
        },
    )


def splitting_check(spec: EisensteinSpec, sub: LatticeCoset, omega: OmegaPoint) -> CheckReport:
    """E_{k,v+L} = sum over v' + L' inside v + L of E_{k,v'+L'}, for L' of finite index."""
    lattice = spec.coset.lattice()
    reps = quotient_reps(lattice, sub.lattice())
    q = omega.q
    parts = []
    for rep in reps:
        piece = sub.lattice().with_v(vec_add(spec.coset.v, rep))
        parts.append(eval_eisenstein(spec.with_coset(piece), omega).value)
    total = sum_tails(q, parts)
    whole = eval_eisenstein(spec, omega).value
    ok, gap, at = tail_gap(total, whole)
    return CheckReport(
        "splitting",
        ok,
        {"pieces": len(reps), "whole": whole.to_text(), "sum": total.to_text(), "log_gap": gap, "precision": at},
    )


def goss_consistency_check(
    lattice: LatticeCoset,
    omega: OmegaPoint,
    v: Sequence[RatF],
    k: int,
    dim: int,
    prec,
) -> CheckReport:
    """sum over h in H of (z-h)^{-k} against G_k(1/e_H(z)) for H spanned by dim short periods."""
    q = omega.q
    prec = Fraction(prec)
    reduced = reduced_basis(lattice, omega)
    rho = max(reduced.rdeg)
    ball = norm_ball(reduced, rho)
    while len(ball.generators) < dim:
        rho += 1
        ball = norm_ball(reduced, rho)
    gens = _generator_values(reduced, ball)[:dim]
    z = pairing(v, omega, prec + _REL_START)

    points = [TailElement.zero(q)]
    for g in gens:
        points = [h + g.scale(c) for h in points for c in range(q)]
    direct = sum_tails(q, (((z - h) ** k).inverse(prec) for h in points))

    rel = prec + _REL_START
    for _ in range(_REL_DOUBLINGS):
        (ez,), coeffs = _subspace_exp(q, gens, [z], y_count(k, q), rel)
        via_goss = goss_value(k, q, ez.inverse(), coeffs[1:], TailRing(q))
        if via_goss.prec is not None and via_goss.prec >= prec:
            break
        rel *= 2
    ok, gap, at = tail_gap(direct, via_goss.truncate(prec))
    return CheckReport(
        "goss_consistency",
        ok,
        {"dim": dim, "k": k, "direct": direct.to_text(), "goss": via_goss.truncate(prec).to_text(), "log_gap": gap},
    )


def _boundary_series(base: OmegaPoint, schedule: Sequence[int]) -> List[Tuple[int, OmegaPoint]]:
    return [(s, base.boundary_point(s)) for s in schedule]


def leading_term_check(coset: LatticeCoset, base: OmegaPoint, schedule: Sequence[int], rel) -> CheckReport:
    """E_{1,v+L}(omega^(s)) x_1 / u -> 1 when v_1 is outside L_1 and x_1 generates j A."""
    frame = u_frame(coset)
    if frame.v1_in_l1:
        raise SpecError("the leading-term check needs v_1 outside L_1")
    if frame.index_log(frame.x1):
        raise SpecError("the leading-term check needs x_1 A = j A")
    q = base.q
    rel = Fraction(rel)
    spec = EisensteinSpec(1, coset, rel)
    rows = []
    for s, omega in _boundary_series(base, schedule):
        E = fibered(spec, omega, rel).value
        u = u_parameter(frame, omega, rel)
        x1 = TailElement.from_ratf(q, frame.x1, rel - frame.x1.degree)
        ratio = E * x1 * u.inverse()
        rows.append({"s": s, "log_u": u.lead, "log_gap": (ratio - 1).upper_log_norm()})
    gaps = [row["log_gap"] for row in rows]
    ok = all(g is not None and g < 0 for g in gaps) and all(b <= a for a, b in zip(gaps, gaps[1:]))
    return CheckReport("leading_term", ok, {"x1": frame.x1.to_text(), "rows": rows})


def constant_term_check(spec: EisensteinSpec, base: OmegaPoint, schedule: Sequence[int], rel) -> CheckReport:
    """E_{k,v+L}(omega^(s)) -> E_{k,x'+L'}(omega') when v_1 is in L_1."""
    frame = u_frame(spec.coset)
    if not frame.v1_in_l1:
        raise SpecError("the constant-term check needs v_1 in L_1")
    rows = []
    constant = None
    consistent = True
    for s, omega in _boundary_series(base, schedule):
        fv = fibered(spec, omega, rel)
        constant = fv.constant
        whole = eval_eisenstein(spec, omega).value
        same, _, _ = tail_gap(whole, fv.value.truncate(spec.prec))
        consistent = consistent and same
        rows.append({"s": s, "log_gap": fv.fibers.upper_log_norm(), "agrees_with_ball": same})
    gaps = [row["log_gap"] for row in rows]
    decreasing = all(g is not None for g in gaps) and all(b < a for a, b in zip(gaps, gaps[1:]))
    return CheckReport(
        "constant_term",
        consistent and decreasing,
        {"constant": constant.to_text() if constant is not None else None, "rows": rows},
    )


def u_product_check(frame: UExpansionFrame, omega: OmegaPoint, x1: RatF, rel) -> CheckReport:
    """e_{L' omega'}(x_1 omega_1) = x_1 e(omega_1) prod over mu of (1 - e(omega_1)/e(mu omega')).

    Here e = e_{Lambda' omega'} and mu runs over the nonzero classes of (x_1/j)^{-1} Lambda' / Lambda'.
    """
    q = omega.q
    rel = Fraction(rel)
    a = x1 / frame.j
    if not a.is_poly():
        raise SpecError("x_1 must lie in j A")
    inner = omega.tail()
    w1 = omega.entries[0]
    lam = frame.lam.lattice()
    red_lam = reduced_basis(lam, inner)
    red_l = reduced_basis(frame.l_prime.lattice(), inner)
    lhs = _exp_relative(red_l, TailElement.from_ratf(q, x1, rel + _REL_START - x1.degree) * w1, rel)
    e1 = _exp_relative(red_lam, w1, rel + _REL_START)
    rhs = TailElement.from_ratf(q, x1, rel + _REL_START - x1.degree) * e1
    count = 0
    if a.degree > 0:
        for mu in coset_reps(a.num, lam):
            e_mu = _exp_relative(red_lam, pairing(mu, inner, rel + 2 * _REL_START), rel + _REL_START)
            rhs = rhs * (1 - e1 * e_mu.inverse())
            count += 1
    lhs, rhs = lhs.with_relative(rel), rhs.with_relative(rel)
    ok, gap, at = tail_gap(lhs, rhs)
    return CheckReport(
        "u_product",
        ok,
        {"x1": x1.to_text(), "factors": count, "log_lhs": lhs.lead, "log_gap": gap, "precision": at},
    )


def u_order(coset: LatticeCoset, base: OmegaPoint, schedule: Sequence[int], rel) -> Tuple[Fraction, List[dict]]:
    """Finite-difference order of E_{1,v+L} in u along the boundary schedule."""
    if len(schedule) < 2:
        raise SpecError("an order estimate needs at least two boundary points")
    frame = u_frame(coset)
    spec = EisensteinSpec(1, coset, rel)
    rows = []
    for s, omega in _boundary_series(base, schedule):
        E = fibered(spec, omega, rel).value
        u = u_parameter(frame, omega, rel)
        rows.append({"s": s, "log_E": E.lead, "log_u": u.lead})
    a, b = rows[-2], rows[-1]
    return (b["log_E"] - a["log_E"]) / (b["log_u"] - a["log_u"]), rows


def u_order_sweep(
    lattice: LatticeCoset,
    base: OmegaPoint,
    schedule: Sequence[int],
    rel,
    level: Optional[PolyA] = None,
) -> CheckReport:
    """Order in u is 1 exactly when v_1 is outside L_1, over the N-torsion classes of L."""
    field = lattice.field
    level = level or PolyA.t(field)
    results: Dict[str, dict] = {}
    ok = True
    for v in projective_reps(level, lattice):
        coset = lattice.with_v(v)
        predicted = 0 if u_frame(coset).v1_in_l1 else 1
        order, rows = u_order(coset, base, schedule, rel)
        ok = ok and order == predicted
        key = "(" + ", ".join(x.to_text() for x in v) + ")"
        results[key] = {"predicted": predicted, "observed": order, "rows": rows}
    return CheckReport("u_order_sweep", ok, results)

