"""Hecke operators on Eisenstein series, checked by brute force at small primes.

Locally everything happens in R = A/pi^mu_1 with L' = R^r and L = sum_j pi^mu_j R e_j.
Right cosets K\\K' correspond to the translates L k, so C_p(x) counts translates that
contain x. Globally the elementary divisors of L delta inside L' come from a Smith form,
which also gives the coordinates in which every local datum is diagonal.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from src.dmf.base_arith import PolyA, RatF, get_field, inverse_mod, poly_gcd, polys_below, prime_power
from src.dmf.cinfty_model import sum_tails
from src.dmf.claims import CheckReport
from src.dmf.eisenstein_eval import EisensteinSpec, eval_eisenstein, tail_gap
from src.dmf.errors import BudgetExceeded, LatticeError, SpecError
from src.dmf.lattice_geom import (
    LatticeCoset,
    Matrix,
    Vector,
    mat_mul,
    smith_form,
    standard_point,
    to_matrix,
    vec_mat,
    vec_scale,
    vec_sub,
)

logger = logging.getLogger("dmf.hecke_engine")

DEFAULT_GROUP_BUDGET = 1_000_000
DEFAULT_BOX_BUDGET = 200_000

Residue = Tuple[int, ...]
LocalMatrix = Tuple[int, ...]


class LocalRing:
    """A/pi^e with elements encoded as integers (base-q digits of the reduced polynomial)."""

    def __init__(self, pi: PolyA, e: int):
        if e < 1:
            raise SpecError(f"exponent {e} must be positive")
        self.pi = pi
        self.e = e
        self.field = pi.field
        self.q = self.field.order
        self.width = e * pi.degree
        self.size = self.q**self.width
        self.modulus = pi**e
        polys = [self.decode(i) for i in range(self.size)]
        self.add_table = [[self.encode(a + b) for b in polys] for a in polys]
        self.mul_table = [[self.encode(a * b) for b in polys] for a in polys]
        self.neg_table = [self.encode(-a) for a in polys]
        self.val_table = [self._valuation(a) for a in polys]
        self.pi_powers = [self.encode(pi**j) for j in range(e + 1)]

    def __repr__(self) -> str:
        return f"LocalRing(pi={self.pi.to_text()}, e={self.e})"

    def encode(self, poly: PolyA) -> int:
        reduced = poly % self.modulus
        out = 0
        for c in reversed(reduced.coeffs):
            out = out * self.q + c
        return out

    def decode(self, x: int) -> PolyA:
        digits = []
        for _ in range(self.width):
            x, c = divmod(x, self.q)
            digits.append(c)
        return PolyA(self.field, digits)

    def _valuation(self, a: PolyA) -> int:
        if not a:
            return self.e
        return min(a.valuation(self.pi), self.e)

    def from_ratf(self, x: RatF) -> int:
        """The image of x, which must be pi-integral."""
        if not x:
            return 0
        if x.valuation(self.pi) < 0:
            raise SpecError(f"{x.to_text()} is not integral at {self.pi.to_text()}")
        return self.encode(x.num * inverse_mod(x.den % self.modulus, self.modulus))

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def is_unit(self, a: int) -> bool:
        return self.val_table[a] == 0

    def units(self) -> List[int]:
        return [a for a in range(self.size) if self.is_unit(a)]

    def det(self, m: LocalMatrix, r: int) -> int:
        total = 0
        for perm in itertools.permutations(range(r)):
            term = 1
            for i, j in enumerate(perm):
                term = self.mul_table[term][m[i * r + j]]
                if not term:
                    break
            if term:
                inversions = sum(1 for a in range(r) for b in range(a + 1, r) if perm[a] > perm[b])
                total = self.add_table[total][term if inversions % 2 == 0 else self.neg_table[term]]
        return total

    def mat_mul(self, a: LocalMatrix, b: LocalMatrix, r: int) -> LocalMatrix:
        out = []
        for i in range(r):
            for j in range(r):
                acc = 0
                for k in range(r):
                    x, y = a[i * r + k], b[k * r + j]
                    if x and y:
                        acc = self.add_table[acc][self.mul_table[x][y]]
                out.append(acc)
        return tuple(out)

    def vec_mat(self, v: Residue, m: LocalMatrix, r: int) -> Residue:
        out = []
        for j in range(r):
            acc = 0
            for i in range(r):
                if v[i] and m[i * r + j]:
                    acc = self.add_table[acc][self.mul_table[v[i]][m[i * r + j]]]
            out.append(acc)
        return tuple(out)

    def span(self, gens: Sequence[Residue]) -> frozenset:
        """The R-submodule generated by gens, as a set of residue vectors."""
        r = len(gens[0])
        out = {tuple([0] * r)}
        for g in gens:
            new = set()
            for c in range(self.size):
                cg = tuple(self.mul_table[c][x] for x in g)
                for w in out:
                    new.add(tuple(self.add_table[a][b] for a, b in zip(w, cg)))
            out = new
        return frozenset(out)

    def level(self, x: Residue) -> int:
        """nu with x in pi^nu R^r but not pi^(nu+1) R^r; e for x = 0."""
        return min(self.val_table[c] for c in x)


def _check_mu(mu: Sequence[int]) -> Tuple[int, ...]:
    mu = tuple(int(m) for m in mu)
    if len(mu) < 2:
        raise SpecError("mu needs at least two entries")
    if any(m < 0 for m in mu) or any(a < b for a, b in zip(mu, mu[1:])):
        raise SpecError(f"mu {mu} must be non-increasing and nonnegative")
    if mu[-1] != 0:
        raise SpecError(f"mu {mu} must end in 0 (L delta is not inside p L')")
    return mu


@dataclass(frozen=True)
class LocalDatum:
    """L'_p / L_p delta = sum_j A/pi^mu_j, in coordinates where both are diagonal."""

    pi: PolyA
    mu: Tuple[int, ...]

    def __post_init__(self):
        if not self.pi.is_monic() or not self.pi.is_irreducible():
            raise SpecError(f"{self.pi.to_text()} is not a monic irreducible")
        object.__setattr__(self, "mu", _check_mu(self.mu))

    @property
    def r(self) -> int:
        return len(self.mu)

    @property
    def q_p(self) -> int:
        return self.pi.field.order**self.pi.degree

    def case(self) -> str:
        mu = self.mu
        if mu[0] <= 1:
            return "small"
        if mu[0] <= mu[-2] + 1:
            return "primitive"
        return "degenerate"

    def to_json(self) -> dict:
        return {"pi": self.pi.to_text(), "mu": list(self.mu), "case": self.case()}


@dataclass
class LocalCosets:
    datum: LocalDatum
    ring: Optional[LocalRing]
    group_order: int
    stabilizer_order: int
    images: List[frozenset]
    counts: Dict[Residue, int] = field(default_factory=dict)
    det_group: frozenset = frozenset()
    det_stabilizer: frozenset = frozenset()

    @property
    def index(self) -> int:
        return len(self.images)


def group_size_estimate(datum: LocalDatum) -> int:
    """Number of candidate matrices over A/pi^mu_1."""
    return (datum.q_p ** datum.mu[0]) ** (datum.r * datum.r)


def local_cosets(datum: LocalDatum, budget: int = DEFAULT_GROUP_BUDGET) -> LocalCosets:
    """GL_r(R) by invertibility filtering, K as the stabiliser of L, and the translates L k."""
    mu, r = datum.mu, datum.r
    if mu[0] == 0:
        return LocalCosets(datum, None, 1, 1, [frozenset()], {})
    estimate = group_size_estimate(datum)
    if estimate > budget:
        raise BudgetExceeded(f"GL_{r} over A/({datum.pi.to_text()})^{mu[0]}", estimate=estimate)
    R = LocalRing(datum.pi, mu[0])
    group = []
    dets = set()
    for entries in itertools.product(range(R.size), repeat=r * r):
        d = R.det(entries, r)
        if R.is_unit(d):
            group.append(entries)
            dets.add(d)
    # k stabilises L iff pi^mu_j k_ji lies in pi^mu_i R for all i, j
    stabilizer = [
        k for k in group
        if all(R.val_table[k[j * r + i]] >= mu[i] - mu[j] for i in range(r) for j in range(r) if mu[i] > mu[j])
    ]
    det_stab = frozenset(R.det(k, r) for k in stabilizer)
    gens = [tuple(R.pi_powers[mu[j]] if i == j else 0 for i in range(r)) for j in range(r)]
    assigned = set()
    images = []
    for k in group:
        if k in assigned:
            continue
        assigned.update(R.mat_mul(h, k, r) for h in stabilizer)
        images.append(R.span([R.vec_mat(g, k, r) for g in gens]))
    counts: Counter = Counter()
    for image in images:
        counts.update(image)
    logger.debug(
        "local cosets pi=%s mu=%s: |K'|=%d |K|=%d index=%d",
        datum.pi.to_text(), mu, len(group), len(stabilizer), len(images),
    )
    return LocalCosets(datum, R, len(group), len(stabilizer), images, dict(counts), frozenset(dets), det_stab)


def count_cp(cosets: LocalCosets, x: Sequence) -> int:
    """C_p(x) for x a residue vector, or a vector over F in the diagonal coordinates."""
    R = cosets.ring
    if x and isinstance(x[0], RatF):
        if any(c and c.valuation(cosets.datum.pi) < 0 for c in x):
            return 0
        if R is None:
            return 1
        x = tuple(R.from_ratf(c) for c in x)
    if R is None:
        return 1
    return cosets.counts.get(tuple(x), 0)


def index_valuation(mu: Sequence[int]) -> int:
    """The exponent of q_p in [K':K]."""
    r = len(mu)
    return sum(max(0, mu[j] - mu[i] - 1) for i in range(r) for j in range(i + 1))


def count_valuation(mu: Sequence[int], nu: int) -> int:
    """c(nu): C_p(x) lies in q_p^c(nu) (1 + q_p Z) for x at pi-level nu."""
    r = len(mu)
    first = sum(max(0, mu[j] - mu[i] - 1) for i in range(r - 1) for j in range(i + 1))
    return first + sum(max(0, min(m - 1, nu)) for m in mu)


def predicted_residue(datum: LocalDatum, nu: int) -> int:
    """C_p(x) mod q_p for x in L'_p at level nu."""
    case = datum.case()
    if case == "small":
        return 1
    if case == "primitive":
        return 1 if nu == 0 else 0
    return 0


def _has_form(n: int, base: int, exponent: int) -> bool:
    """n in base^exponent (1 + base Z)."""
    power = base**exponent
    return n % power == 0 and (n // power) % base == 1 % base


def local_check(datum: LocalDatum, budget: int = DEFAULT_GROUP_BUDGET) -> CheckReport:
    """Exhaustive over every residue x: the classification mod q_p, c(nu), the index and det equality."""
    cosets = local_cosets(datum, budget)
    qp = datum.q_p
    R = cosets.ring
    if R is None:
        return CheckReport("hecke_local", cosets.index == 1, {"datum": datum.to_json(), "index": 1})
    r = datum.r
    mismatches = []
    valuation_misses = []
    by_level: Dict[int, Counter] = {}
    for x in itertools.product(range(R.size), repeat=r):
        c = cosets.counts.get(x, 0)
        nu = R.level(x)
        by_level.setdefault(nu, Counter())[c] += 1
        if c % qp != predicted_residue(datum, nu):
            mismatches.append({"x": list(x), "count": c, "level": nu})
        if not _has_form(c, qp, count_valuation(datum.mu, nu)):
            valuation_misses.append({"x": list(x), "count": c, "level": nu})
    index_ok = _has_form(cosets.index, qp, index_valuation(datum.mu))
    index_ok = index_ok and cosets.index * cosets.stabilizer_order == cosets.group_order
    det_ok = cosets.det_group == cosets.det_stabilizer == frozenset(R.units())
    outside = [RatF(PolyA(R.field, (1,)), datum.pi)] + [RatF.from_int(R.field, 0)] * (r - 1)
    outside_ok = count_cp(cosets, outside) == 0
    ok = not mismatches and not valuation_misses and index_ok and det_ok and outside_ok
    if not ok:
        logger.warning("local Hecke check failed for %s", datum.to_json())
    return CheckReport(
        "hecke_local",
        ok,
        {
            "datum": datum.to_json(),
            "group_order": cosets.group_order,
            "stabilizer_order": cosets.stabilizer_order,
            "index": cosets.index,
            "index_valuation": index_valuation(datum.mu),
            "det_equal": det_ok,
            "outside_zero": outside_ok,
            "counts_by_level": {str(nu): dict(sorted(cs.items())) for nu, cs in sorted(by_level.items())},
            "mismatches": mismatches[:10],
            "valuation_misses": valuation_misses[:10],
        },
    )


# global data

def _denominator_lcm(xs: Sequence[RatF]) -> PolyA:
    out = PolyA(xs[0].field, (1,))
    for x in xs:
        if x:
            out = (out * x.den) // poly_gcd(out, x.den)
    return out.monic()


@dataclass
class HeckeSpec:
    """delta with v delta + L delta inside v' + L', plus the local data at the primes that matter."""

    delta: Matrix
    source: LatticeCoset
    target: LatticeCoset
    divisors: Tuple[RatF, ...] = ()
    Q: Matrix = ()
    local: List[LocalDatum] = field(default_factory=list)

    @property
    def r(self) -> int:
        return self.source.r

    @property
    def base(self):
        return self.source.field

    def standard_coordinates(self, x: Sequence[RatF]) -> Vector:
        """Coordinates of x in which L' is A^r and L delta is diagonal with mu decreasing."""
        return tuple(reversed(vec_mat(self.target.coordinates(x), self.Q)))

    def degenerate(self) -> bool:
        return any(d.case() == "degenerate" for d in self.local)

    def primitive_primes(self) -> List[PolyA]:
        return [d.pi for d in self.local if d.case() == "primitive"]

    def annihilator(self) -> PolyA:
        """N with (A v' + L')/L' = A/N."""
        return _denominator_lcm(self.target.coordinates(self.target.v))

    def v_double_prime(self) -> Vector:
        """a v' with a in every primitive prime and a = 1 mod N."""
        field = self.base
        P = PolyA(field, (1,))
        for pi in self.primitive_primes():
            P = P * pi
        N = self.annihilator()
        a = P if N.degree < 1 else P * inverse_mod(P % N, N)
        return vec_scale(RatF(a), self.target.v)

    def to_json(self) -> dict:
        return {
            "delta": [[x.to_text() for x in row] for row in self.delta],
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "elementary_divisors": [d.to_text() for d in self.divisors],
            "local": [d.to_json() for d in self.local],
        }


def hecke_spec(delta, source: LatticeCoset, target: LatticeCoset) -> HeckeSpec:
    """Validate the assumptions on (delta, v + L, v' + L') and compute the local data."""
    field = source.field
    delta = to_matrix(field, delta)
    if len(delta) != source.r or target.r != source.r:
        raise SpecError("delta, L and L' must have the same rank", location="delta")
    moved = mat_mul(mat_mul(source.basis, delta), target._inv)
    if not all(x.is_poly() for row in moved for x in row):
        raise SpecError("L delta is not contained in L'", location="assumption (a)")
    if not target.in_lattice(vec_sub(vec_mat(source.v, delta), target.v)):
        raise SpecError("v delta is not in v' + L'", location="assumption (a)")
    try:
        snf = smith_form(moved)
    except LatticeError as exc:
        raise SpecError(str(exc), location="delta")
    divisors = snf.diagonal
    if divisors[0].num.degree != 0:
        raise SpecError(f"L delta lies in {divisors[0].to_text()} L'", location="assumption (c)")
    top = divisors[-1].num
    primes = [f for f, _ in top.factor()[1]] if top.degree > 0 else []
    v_den = _denominator_lcm(source.coordinates(source.v))
    for pi in primes:
        if (v_den % pi).is_zero():
            raise SpecError(f"v is not in L at {pi.to_text()} but L delta differs from L' there", location="assumption (b)")
    local = []
    for pi in sorted(primes, key=lambda f: (f.degree, f.coeffs)):
        mu = tuple(reversed([d.num.valuation(pi) for d in divisors]))
        local.append(LocalDatum(pi, mu))
    return HeckeSpec(delta, source, target, divisors, snf.Q, local)


def hecke_spec_from_json(data: dict, q: int, source: str = "spec") -> HeckeSpec:
    """{"delta": [[...]], "source": {"basis", "v"}, "target": {"basis", "v"}} with entries as text."""
    p, e = prime_power(q)
    field = get_field(p, e)
    if not isinstance(data, dict) or "delta" not in data:
        raise SpecError("expected an object with a 'delta' matrix", location=source)
    try:
        delta = [[RatF.from_text(field, str(x)) for x in row] for row in data["delta"]]
    except ValueError as exc:
        raise SpecError(f"unreadable delta entry: {exc}", location=f"{source}: delta")
    r = len(delta)
    default = {"basis": [["1" if i == j else "0" for j in range(r)] for i in range(r)]}
    src = LatticeCoset.from_json(field, data.get("source", default), f"{source}: source")
    tgt = LatticeCoset.from_json(field, data.get("target", default), f"{source}: target")
    return hecke_spec(delta, src, tgt)


def two_prime_example(q: int = 2) -> HeckeSpec:
    """delta = diag(t^2 (t+1), 1) on A^2: mu = (2,0) at t and (1,0) at t+1."""
    field = get_field(*prime_power(q))
    t = PolyA.t(field)
    one = PolyA(field, (1,))
    d = RatF(t * t * (t + one))
    zero, unit = RatF.from_int(field, 0), RatF.from_int(field, 1)
    L = LatticeCoset.standard(field, 2)
    return hecke_spec(((d, zero), (zero, unit)), L, L)


def box_size(spec: HeckeSpec) -> Tuple[PolyA, int]:
    M = PolyA(spec.base, (1,))
    for d in spec.local:
        M = M * d.pi ** (d.mu[0] + 1)
    return M, spec.base.order ** (spec.r * M.degree)


def global_identity_check(
    spec: HeckeSpec,
    group_budget: int = DEFAULT_GROUP_BUDGET,
    box_budget: int = DEFAULT_BOX_BUDGET,
) -> CheckReport:
    """C(x) = prod_p C_p(x) against the inclusion-exclusion over primitive primes, mod p, on a full box."""
    field = spec.base
    p = field.p
    cosets = {d.pi: local_cosets(d, group_budget) for d in spec.local}
    M, size = box_size(spec)
    if size > box_budget:
        raise BudgetExceeded("global Hecke test box", estimate=size)
    S = spec.primitive_primes()
    degenerate = spec.degenerate()
    v2 = spec.v_double_prime()
    target = spec.target
    in_coset = target.contains(v2)
    in_primes = all(not c or c.valuation(pi) >= 1 for pi in S for c in target.coordinates(v2))
    subsets = [I for n in range(len(S) + 1) for I in itertools.combinations(S, n)]
    mismatches = []
    nonzero = 0
    residues: Counter = Counter()
    polys = list(polys_below(field, M.degree))
    for cs in itertools.product(polys, repeat=spec.r):
        offset = tuple(RatF(c) for c in cs)
        x = tuple(a + b for a, b in zip(v2, vec_mat(offset, target.basis)))
        std = spec.standard_coordinates(x)
        total = 1
        for d in spec.local:
            total *= count_cp(cosets[d.pi], std)
        if degenerate:
            expected = 0
        else:
            expected = 0
            for I in subsets:
                modulus = PolyA(field, (1,))
                for pi in I:
                    modulus = modulus * pi
                if all((c % modulus).is_zero() for c in cs):
                    expected += (-1) ** len(I)
        residues[total % p] += 1
        if total:
            nonzero += 1
        if (total - expected) % p:
            mismatches.append({"offset": [c.to_text() for c in cs], "C": total, "expected": expected})
    ok = not mismatches and in_coset and in_primes
    if not ok:
        logger.warning("global Hecke identity failed: %d mismatches", len(mismatches))
    return CheckReport(
        "hecke_global",
        ok,
        {
            "spec": spec.to_json(),
            "primitive_primes": [pi.to_text() for pi in S],
            "degenerate": degenerate,
            "v_double_prime": [c.to_text() for c in v2],
            "v_double_prime_ok": in_coset and in_primes,
            "box": size,
            "nonzero": nonzero,
            "residues": dict(sorted(residues.items())),
            "mismatches": mismatches[:10],
        },
    )


# rank 2

def index_sublattices(pi: PolyA) -> List[Matrix]:
    """Row bases of the q^deg(pi) + 1 sublattices of A^2 of index |pi|."""
    field = pi.field
    zero, one = RatF.from_int(field, 0), RatF.from_int(field, 1)
    P = RatF(pi)
    out = [((P, zero), (RatF(b), one)) for b in polys_below(field, pi.degree)]
    out.append(((one, zero), (zero, P)))
    return out


def membership_check(pi: PolyA) -> CheckReport:
    """x outside pi A^2 lies in exactly one index-pi sublattice; x in pi A^2 lies in all."""
    field = pi.field
    subs = [LatticeCoset(basis, None, field) for basis in index_sublattices(pi)]
    bad = []
    tested = 0
    for cs in itertools.product(list(polys_below(field, pi.degree + 1)), repeat=2):
        if not any(cs):
            continue
        x = tuple(RatF(c) for c in cs)
        hits = sum(1 for L in subs if L.in_lattice(x))
        inside = all((c % pi).is_zero() for c in cs)
        expected = len(subs) if inside else 1
        tested += 1
        if hits != expected:
            bad.append({"x": [c.to_text() for c in cs], "hits": hits, "expected": expected})
    return CheckReport("index_sublattices", not bad, {"pi": pi.to_text(), "sublattices": len(subs), "tested": tested, "bad": bad[:10]})


def rank2_eigenvalue_check(pi: PolyA, k: int, prec=8, variant: str = "standard") -> CheckReport:
    """sum of E_{k,L_i} over the index-pi sublattices equals E_{k,A^2}; T for diag(1, pi^-1) is pi^k."""
    field = pi.field
    q = field.order
    omega = standard_point(q, 2, variant)
    whole = eval_eisenstein(EisensteinSpec(k, LatticeCoset.standard(field, 2), prec), omega).value
    parts = [
        eval_eisenstein(EisensteinSpec(k, LatticeCoset(basis, None, field), prec), omega).value
        for basis in index_sublattices(pi)
    ]
    total = sum_tails(q, parts)
    ok, gap, at = tail_gap(total, whole)
    members = membership_check(pi)
    return CheckReport(
        "hecke_rank2",
        ok and members.passed,
        {
            "pi": pi.to_text(),
            "k": k,
            "representatives": len(parts),
            "sum": total.to_text(),
            "E": whole.to_text(),
            "log_gap": gap,
            "precision": at,
            "certified_point": omega.certified,
            "eigenvalue": (pi**k).to_text(),
            "operator": f"diag(1, ({pi.to_text()})^-1)",
            "membership": members.passed,
        },
    )
