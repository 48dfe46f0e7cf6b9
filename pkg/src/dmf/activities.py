"""Temporal activities, one per suite group.

Every activity takes a RunConfig as a plain dict and returns claim records. A failed
check is a record with status "fail"; an exception inside a check becomes a record with
status "error". Only an invalid config raises.
"""
import asyncio
import functools
import logging
import random
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Tuple

from temporalio import activity

from src.dmf import dim_formulas, drinfeld_forms, eisenstein_eval, goss_poly, hecke_engine, level_t_ring
from src.dmf.base_arith import CoeffField, PolyA, RatF, get_field, prime_power
from src.dmf.cinfty_model import TailElement
from src.dmf.claims import CheckReport, claim, claim_error
from src.dmf.config import RunConfig
from src.dmf.lattice_geom import LatticeCoset, projective_reps, standard_point, to_matrix, u_frame
from src.dmf.mpoly import PolyRing

logger = logging.getLogger("dmf.activities")

Item = Tuple[str, str, Dict[str, Any], Callable[[], CheckReport]]

GOSS_GRID = (2, 3, 4)
HECKE_LOCAL_GRID = (
    (2, (1, 0)),
    (2, (2, 0)),
    (3, (1, 0)),
    (3, (2, 0)),
    (2, (1, 0, 0)),
    (2, (1, 1, 0)),
    (2, (2, 0, 0)),
    (2, (2, 1, 0)),
)
RING_GRID = ((2, 2, 6), (2, 3, 6), (3, 2, 6), (3, 3, 4))


def _log():
    try:
        activity.info()
    except RuntimeError:
        return logger
    return activity.logger


def _collect(items: Iterable[Item]) -> List[dict]:
    records = []
    for claim_id, label, params, check in items:
        try:
            report = check()
        except Exception as exc:
            _log().exception("check %s raised", claim_id)
            records.append(claim_error(claim_id, label, params, exc))
            continue
        if not report.passed:
            _log().warning("check %s failed: %s", claim_id, report.name)
        records.append(claim(claim_id, label, params, report))
    return records


def _many(name: str, reports: Callable[[], List[CheckReport]]) -> Callable[[], CheckReport]:
    """Fold several reports into one."""

    def run() -> CheckReport:
        parts = reports()
        return CheckReport(name, all(r.passed for r in parts), {"parts": [r.to_json() for r in parts]})

    return run


def _field(q: int):
    return get_field(*prime_power(q))


def _inverse_t(field) -> RatF:
    return RatF(PolyA(field, (1,)), PolyA.t(field))


def _unit(v: int, r: int) -> List[str]:
    return ["0"] * v + ["1/t"] + ["0"] * (r - v - 1)


def _tag(q: int, r: int) -> str:
    return f"q{q}r{r}"


# goss

def goss_claims(cfg: RunConfig) -> List[dict]:
    items: List[Item] = []
    for q in GOSS_GRID:
        if q > cfg.max_q:
            continue
        kmax = min(30, cfg.goss_k_cap - 1)
        params = {"q": q, "kmax": kmax}
        items += [
            (f"goss.frobenius.q{q}", "G_pk = G_k^p", {"q": q, "kmax": 12},
             functools.partial(goss_poly.frobenius_check, q, 12)),
            (f"goss.derivative.q{q}", "X^2 dG_k/dX = k G_(k+1)", params,
             functools.partial(goss_poly.derivative_check, q, kmax)),
            (f"goss.shape.q{q}", "G_k monic in X, divisible by X, ord_X G_k = k for k <= q", params,
             functools.partial(goss_poly.shape_check, q, kmax)),
            (f"goss.partial_fraction.q{q}", "sum (z-h)^-k = G_k(1/e_H(z), a_1, ...)", {"q": q, "kmax": q * q},
             functools.partial(goss_poly.partial_fraction_check, q)),
        ]
    return _collect(items)


# eisenstein

def _gammas(field, r: int):
    """Three non-scalar elements of GL_r(F)."""
    def matrix(entry: Tuple[int, int], value: str):
        rows = [["1" if i == j else "0" for j in range(r)] for i in range(r)]
        rows[entry[0]][entry[1]] = value
        return to_matrix(field, rows)

    return [matrix((0, 1), "1"), matrix((1, 0), "t"), matrix((0, 0), "t")]


def _weight1_all(cosets, omega, prec) -> List[CheckReport]:
    return [eisenstein_eval.weight1_inversion_check(c, omega, prec) for c in cosets]


def eisenstein_claims(cfg: RunConfig) -> List[dict]:
    q, r, prec = cfg.q, cfg.r, cfg.precision
    F = _field(q)
    tag = _tag(q, r)
    L = LatticeCoset.standard(F, r)
    coset = L.with_v(to_matrix(F, [_unit(0, r)])[0])
    omega = standard_point(q, r)
    alpha = F.gen if q > 2 else 1
    base = {"q": q, "r": r, "prec": prec}
    torsion = [L.with_v(v) for v in projective_reps(PolyA.t(F), L)]
    items: List[Item] = [
        (f"eisenstein.weight1_inversion.{tag}", "E_1 e_L(v omega) = 1", dict(base, N="t", cosets=len(torsion)),
         _many("weight1_inversion", functools.partial(_weight1_all, torsion, omega, prec))),
        (f"eisenstein.doubling.{tag}", "tail certificate stable under doubling", dict(base, k=2),
         functools.partial(eisenstein_eval.doubling_check, eisenstein_eval.EisensteinSpec(2, L, prec), omega)),
        (f"eisenstein.goss_consistency.{tag}", "inner Goss sums", dict(base, k=2, dim=2),
         functools.partial(eisenstein_eval.goss_consistency_check, L, omega, coset.v, 2, 2, prec)),
    ]
    for k in (1, 2, 3):
        spec = eisenstein_eval.EisensteinSpec(k, coset, prec)
        items.append(
            (f"eisenstein.alpha.{tag}.k{k}", "E_(k,alpha v+L) = alpha^-k E_(k,v+L)", dict(base, k=k, alpha=alpha),
             functools.partial(eisenstein_eval.alpha_equivariance_check, spec, alpha, omega))
        )
    t = RatF(PolyA.t(F))
    one = RatF.from_int(F, 1)
    subs = [LatticeCoset.diagonal(F, [t] * depth + [one] * (r - depth)) for depth in (1, 2)]
    for name, target in (("lattice", L), ("coset", coset)):
        for k in (1, 2, 3):
            spec = eisenstein_eval.EisensteinSpec(k, target, prec)
            params = dict(base, k=k, v=[x.to_text() for x in target.v])
            for i, gamma in enumerate(_gammas(F, r)):
                items.append(
                    (f"eisenstein.slash.{tag}.{name}.k{k}.g{i}", "E_(k,v+L)|gamma = E_(k,v gamma+L gamma)", dict(params, gamma=i),
                     functools.partial(eisenstein_eval.slash_transform_check, spec, gamma, omega, cfg.enumeration_budget))
                )
            for depth, sub in enumerate(subs, start=1):
                items.append(
                    (f"eisenstein.splitting.{tag}.{name}.k{k}.index{depth}", "E over v+L = sum over cosets of L'",
                     dict(params, index_log=depth),
                     functools.partial(eisenstein_eval.splitting_check, spec, sub, omega))
                )
    return _collect(items)


# u-expansion

def uexpansion_claims(cfg: RunConfig) -> List[dict]:
    q, r, rel = cfg.q, cfg.r, cfg.precision
    F = _field(q)
    tag = _tag(q, r)
    L = LatticeCoset.standard(F, r)
    base = standard_point(q, r)
    schedule = list(cfg.schedule)
    outside = L.with_v(to_matrix(F, [_unit(0, r)])[0])
    inside = L.with_v(to_matrix(F, [_unit(1, r)])[0])
    params = {"q": q, "r": r, "rel": rel, "schedule": schedule}

    def u_product() -> CheckReport:
        frame = u_frame(outside)
        return eisenstein_eval.u_product_check(frame, base, frame.j * RatF(PolyA.t(F)), rel)

    items: List[Item] = [
        (f"uexpansion.leading_term.{tag}", "E_(1,v+L) = u/x_1 + O(u^2)", params,
         functools.partial(eisenstein_eval.leading_term_check, outside, base, schedule, rel)),
        (f"uexpansion.constant_term.{tag}.k1", "constant term E_(k,x'+L')(omega')", dict(params, k=1),
         functools.partial(eisenstein_eval.constant_term_check, eisenstein_eval.EisensteinSpec(1, inside, rel), base, schedule, rel)),
        (f"uexpansion.constant_term.{tag}.k2", "constant term E_(k,L')(omega')", dict(params, k=2),
         functools.partial(eisenstein_eval.constant_term_check, eisenstein_eval.EisensteinSpec(2, L, rel), base, schedule, rel)),
        (f"uexpansion.u_product.{tag}", "e_L'(x_1 omega_1) through x_1^-1 Lambda'/Lambda'", params, u_product),
        (f"uexpansion.order_sweep.{tag}", "u-order 1 iff v_1 outside L_1", params,
         functools.partial(eisenstein_eval.u_order_sweep, L, base, schedule, rel)),
        (f"uexpansion.delta_order.{tag}", "boundary order of delta_t", params,
         functools.partial(drinfeld_forms.delta_order_check, L, base, schedule, rel)),
    ]
    return _collect(items)


# coefficient forms

def inverse_weight(q: int, r: int, K: int) -> int:
    """Top weight reached by the recursion to e_r and by composing e_L with log_L to q-degree K.

    e_i E_j^{q^i} has weight q^{i+j} - 1 with i, j <= K.
    """
    return max(q**r, q ** (2 * K)) - 1


def _symbolic_inverse(cfg: RunConfig) -> CheckReport:
    q, r = cfg.q, cfg.r
    K = min(2, r)
    ring = level_t_ring.symbolic_ring(q, r, inverse_weight(q, r, K), False, cfg.slice_budget, cfg.cache_dir, cfg.seed)
    data = level_t_ring.dickson_generators(ring)
    report = drinfeld_forms.compositional_inverse_check(data.forms, q, ring, K)
    report.details["model"] = level_t_ring.model_name(ring)
    return report


def coefficient_claims(cfg: RunConfig) -> List[dict]:
    q, r, prec = cfg.q, cfg.r, cfg.precision
    F = _field(q)
    tag = _tag(q, r)
    t = PolyA.t(F)
    L = LatticeCoset.standard(F, r)
    omega = standard_point(q, r)
    base = standard_point(q, r)
    params = {"q": q, "r": r, "prec": prec}
    x = TailElement.monomial(q, Fraction(-1, 3))
    y = TailElement.monomial(q, Fraction(-1, 2)) + TailElement.monomial(q, -1)
    z = TailElement.monomial(q, Fraction(-1, 2))
    alpha = F.gen if q > 2 else 1
    items: List[Item] = [
        (f"coefficients.inverse_symbolic.{tag}", "e_L compositional inverse", dict(params, K=min(2, r)),
         functools.partial(_symbolic_inverse, cfg)),
        (f"coefficients.recursion_numeric.{tag}", "e_k and E_(q^k-1) from g_(t,i)", dict(params, count=2),
         functools.partial(drinfeld_forms.recursion_numeric_check, L, omega, prec, 2)),
        (f"coefficients.ideal_recursion.{tag}", "g_(N,k) recursion at N = (t)", dict(params, N="t"),
         functools.partial(drinfeld_forms.ideal_recursion_check, t, L, omega, prec)),
        (f"coefficients.isogeny_functional.{tag}", "psi_N(e_L(z)) = N* e_(N^-1 L)(z)", dict(params, N="t", z=[z.to_text(), x.to_text()]),
         _many("isogeny_functional", lambda: [drinfeld_forms.isogeny_functional_check(t, L, omega, w, prec) for w in (z, x)])),
        (f"coefficients.psi_linearity.{tag}", "psi_N is F_q-linear", dict(params, N="t", alpha=alpha),
         functools.partial(drinfeld_forms.torsion_linearity_check, t, L, omega, prec, x, y, alpha)),
    ]
    for k in range(1, r + 1):
        items.append(
            (f"coefficients.boundary_limit.{tag}.k{k}", "g_(N,k) boundary limit, 0 iff k > (r-1) deg N",
             dict(params, N="t", k=k, schedule=list(cfg.schedule)),
             functools.partial(drinfeld_forms.boundary_limit_check, t, k, L, base, list(cfg.schedule), prec))
        )
    return _collect(items)


# discriminants

def discriminant_claims(cfg: RunConfig) -> List[dict]:
    q, r, prec = cfg.q, cfg.r, cfg.precision
    F = _field(q)
    tag = _tag(q, r)
    t = PolyA.t(F)
    L = LatticeCoset.standard(F, r)
    omega = standard_point(q, r)
    points = [omega, standard_point(q, r, "perturbed")]
    params = {"q": q, "r": r, "prec": prec}
    budget = (cfg.slice_budget, cfg.cache_dir, cfg.seed)
    items: List[Item] = [
        (f"discriminants.symbolic.{tag}", "Delta_(t^2) = Delta_t^(1+q^r)", {"q": q, "r": r},
         functools.partial(level_t_ring.symbolic_discriminant_check, q, r, *budget)),
        (f"discriminants.delta_symbolic.{tag}", "delta_t^(q-1) = +-Delta_t", {"q": q, "r": r},
         functools.partial(level_t_ring.delta_symbolic_check, q, r, *budget)),
        (f"discriminants.relations_numeric.{tag}", "Delta_ab = Delta_a Delta_b^(q^(r deg a))", dict(params, a="t", b="t"),
         functools.partial(drinfeld_forms.discriminant_relations_numeric, t, t, L, omega, prec)),
        (f"discriminants.delta_numeric.{tag}", "delta_N^(q-1) = +-Delta_N", dict(params, N="t"),
         functools.partial(drinfeld_forms.delta_power_check, t, L, omega, prec)),
        (f"discriminants.scaling.{tag}", "Delta^(aL)_N = a^(1-q^(r deg N)) Delta^L_N", dict(params, a="t", N="t"),
         functools.partial(drinfeld_forms.scaling_law_check, RatF(t), t, L, omega, prec)),
        (f"discriminants.isogeny.{tag}", "Delta^(t^-1 L) (Delta_t)^(q^r-1) = t^(q^r-1) Delta_t^(q^r)", dict(params, points=2),
         functools.partial(drinfeld_forms.isogeny_relation_check, L, points, prec)),
    ]
    return _collect(items)


# Moore determinants

def _moore_free(q: int, n: int, seed: int) -> List[CheckReport]:
    R = PolyRing(_field(q), n)
    xs = R.gens()
    B = level_t_ring.random_invertible(R.domain, n, random.Random(seed))
    return [drinfeld_forms.moore_product_check(R, xs, q), drinfeld_forms.moore_transform_check(R, xs, B, q)]


def moore_claims(cfg: RunConfig) -> List[dict]:
    q, r = cfg.q, cfg.r
    items: List[Item] = []
    for n in (1, 2, 3):
        items.append(
            (f"moore.free.q{q}.n{n}", "Moore determinant product and det(B) law", {"q": q, "n": n},
             _many("moore_free", functools.partial(_moore_free, q, n, cfg.seed)))
        )
    ring = level_t_ring.LevelTRing(q, r, budget=cfg.slice_budget, cache_dir=cfg.cache_dir)
    for n in (2, 3):
        for degree in (1, 2):
            weight = degree * sum(q**i for i in range(n))
            if not ring.fits(weight):
                logger.info("skipping Moore check n=%d degree=%d: weight %d exceeds the slice budget", n, degree, weight)
                continue
            items.append(
                (f"moore.ring.{_tag(q, r)}.n{n}.d{degree}", "Moore identities over ring slices",
                 {"q": q, "r": r, "n": n, "degree": degree},
                 _many("moore_ring", functools.partial(level_t_ring.moore_ring_checks, ring, n, degree, cfg.seed)))
            )
    return _collect(items)


# dimensions

def dims_grid(cfg: RunConfig) -> List[Tuple[int, int, int]]:
    """RING_GRID up to max_q, plus the configured (q, r) when the grid lacks it."""
    grid = [(q, r, min(kmax, cfg.kmax)) for q, r, kmax in RING_GRID if q <= cfg.max_q]
    if all((q, r) != (cfg.q, cfg.r) for q, r, _ in grid):
        grid.append((cfg.q, cfg.r, cfg.kmax))
    return grid


def dims_claims(cfg: RunConfig) -> List[dict]:
    items: List[Item] = []
    for q, r, kmax in dims_grid(cfg):
        items += [
            (f"dims.hilbert.{_tag(q, r)}", "slice dimension = sum q^(sum nu i_nu) C(k, sum i_nu)", {"q": q, "r": r, "kmax": kmax},
             functools.partial(level_t_ring.hilbert_check, q, r, kmax, cfg.slice_budget, cfg.cache_dir)),
            (f"dims.cusp.{_tag(q, r)}", "S_k = 0 below q^r - 1, one-dimensional at q^r - 1", {"q": q, "r": r, "kmax": kmax},
             functools.partial(dim_formulas.cusp_formula_check, q, r, kmax)),
        ]
    return _collect(items)


# ring structure

def ring_claims(cfg: RunConfig) -> List[dict]:
    q, r = cfg.q, cfg.r
    ring = level_t_ring.LevelTRing(q, r, budget=cfg.slice_budget, cache_dir=cfg.cache_dir)
    params = {"q": q, "r": r, "seed": cfg.seed}
    items: List[Item] = [
        (f"ring.rewriting.{_tag(q, r)}", "both relations reduce to 0; products associate", params,
         functools.partial(level_t_ring.rewriting_check, ring, cfg.seed)),
        (f"ring.hilbert.{_tag(q, r)}", "slice dimension formula", dict(params, kmax=cfg.kmax),
         functools.partial(level_t_ring.hilbert_check, q, r, cfg.kmax, cfg.slice_budget, cfg.cache_dir)),
    ]
    return _collect(items)


# invariants

def invariant_claims(cfg: RunConfig) -> List[dict]:
    q, r, kmax = cfg.q, cfg.r, cfg.kmax
    tag = _tag(q, r)
    ring = level_t_ring.LevelTRing(q, r, CoeffField(q, extended=True), cfg.slice_budget, cfg.cache_dir)
    data = level_t_ring.dickson_generators(ring)
    params = {"q": q, "r": r}
    items: List[Item] = [
        (f"invariants.dickson_invariance.{tag}", "g_(t,i) GL-invariant, delta_t of type 1", params,
         functools.partial(level_t_ring.invariance_check, ring, data)),
        (f"invariants.delta_power.{tag}", "delta_t^(q-1) = +-g_(t,r)", params,
         functools.partial(level_t_ring.delta_power_symbolic_check, ring)),
        (f"invariants.dims.{tag}", "GL, SL and U1 fixed-space dimensions", dict(params, kmax=kmax),
         functools.partial(level_t_ring.invariant_dims_check, ring, kmax)),
    ]
    for k in range(kmax + 1):
        kp = dict(params, k=k)
        items += [
            (f"invariants.dickson_independence.{tag}.k{k:02d}", "g_(t,1..r) algebraically independent", kp,
             functools.partial(level_t_ring.dickson_independence_check, ring, data, k)),
            (f"invariants.u1.{tag}.k{k:02d}", "U1 generators, C(k+r-1, r-1)", kp,
             functools.partial(level_t_ring.u1_check, ring, k)),
            (f"invariants.types.{tag}.k{k:02d}", "SL = sum over types; delta_t^m shift", kp,
             functools.partial(level_t_ring.type_decomposition, ring, k)),
        ]
    for k in range(max(kmax, q**r - 1) + 1):
        items.append(
            (f"invariants.cusp.{tag}.k{k:02d}", "multiplication by Delta_t is injective", dict(params, k=k),
             functools.partial(level_t_ring.cusp_injectivity_check, ring, data, k))
        )
    return _collect(items)


# Hecke

def hecke_claims(cfg: RunConfig) -> List[dict]:
    items: List[Item] = []
    for q, mu in HECKE_LOCAL_GRID:
        if q > cfg.max_q:
            continue
        datum = hecke_engine.LocalDatum(PolyA.t(_field(q)), mu)
        mu_tag = "".join(str(m) for m in mu)
        items.append(
            (f"hecke.local.q{q}.mu{mu_tag}", "C_p(x) mod q_p classification and det K = det K'", {"q": q, "pi": "t", "mu": list(mu)},
             functools.partial(hecke_engine.local_check, datum, cfg.group_budget))
        )

    def two_primes() -> CheckReport:
        return hecke_engine.global_identity_check(hecke_engine.two_prime_example(2), cfg.group_budget, cfg.enumeration_budget)

    items.append(
        ("hecke.global.q2.two_primes", "C(x) = prod C_p(x) = inclusion-exclusion mod p", {"q": 2, "delta": "diag(t^2(t+1), 1)"}, two_primes)
    )
    q = cfg.q
    pi = PolyA.t(_field(q))
    items.append(
        (f"hecke.membership.q{q}", "index-pi sublattices of A^2", {"q": q, "pi": "t"},
         functools.partial(hecke_engine.membership_check, pi))
    )
    for k in sorted({q - 1, 2}):
        items.append(
            (f"hecke.rank2.q{q}.k{k}", "T_delta E_(k,L) = pi^k E_(k,L)", {"q": q, "pi": "t", "k": k, "prec": cfg.precision},
             functools.partial(hecke_engine.rank2_eigenvalue_check, pi, k, cfg.precision))
        )
    return _collect(items)


SUITE_RUNNERS: Dict[str, Callable[[RunConfig], List[dict]]] = {
    "goss": goss_claims,
    "eisenstein": eisenstein_claims,
    "uexpansion": uexpansion_claims,
    "coefficients": coefficient_claims,
    "discriminants": discriminant_claims,
    "moore": moore_claims,
    "dims": dims_claims,
    "ring": ring_claims,
    "invariants": invariant_claims,
    "hecke": hecke_claims,
}


async def _run(suite: str, config: dict) -> List[dict]:
    cfg = RunConfig(**config)
    _log().info("running suite %s for q=%d r=%d", suite, cfg.q, cfg.r)
    return await asyncio.to_thread(SUITE_RUNNERS[suite], cfg)


@activity.defn
async def goss_suite_activity(config: dict) -> List[dict]:
    return await _run("goss", config)


@activity.defn
async def eisenstein_suite_activity(config: dict) -> List[dict]:
    return await _run("eisenstein", config)


@activity.defn
async def uexpansion_suite_activity(config: dict) -> List[dict]:
    return await _run("uexpansion", config)


@activity.defn
async def coefficients_suite_activity(config: dict) -> List[dict]:
    return await _run("coefficients", config)


@activity.defn
async def discriminants_suite_activity(config: dict) -> List[dict]:
    return await _run("discriminants", config)


@activity.defn
async def moore_suite_activity(config: dict) -> List[dict]:
    return await _run("moore", config)


@activity.defn
async def dims_suite_activity(config: dict) -> List[dict]:
    return await _run("dims", config)


@activity.defn
async def ring_suite_activity(config: dict) -> List[dict]:
    return await _run("ring", config)


@activity.defn
async def invariants_suite_activity(config: dict) -> List[dict]:
    return await _run("invariants", config)


@activity.defn
async def hecke_suite_activity(config: dict) -> List[dict]:
    return await _run("hecke", config)


ACTIVITIES = [
    goss_suite_activity,
    eisenstein_suite_activity,
    uexpansion_suite_activity,
    coefficients_suite_activity,
    discriminants_suite_activity,
    moore_suite_activity,
    dims_suite_activity,
    ring_suite_activity,
    invariants_suite_activity,
    hecke_suite_activity,
]
