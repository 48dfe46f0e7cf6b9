"""Dimension formulas for modular forms of level (t) and full level over F_q[t]."""
import functools
import itertools
from math import comb

from src.dmf.claims import CheckReport
from src.dmf.errors import DmfError


def dim_gamma_t(q: int, r: int, k: int) -> int:
    """sum over i in {0,1}^{r-1} of q^{sum_nu nu*i_nu} * C(k, sum i_nu)."""
    if k < 0:
        return 0
    total = 0
    for bits in itertools.product((0, 1), repeat=r - 1):
        weight = sum(nu * b for nu, b in enumerate(bits, start=1))
        total += q**weight * comb(k, sum(bits))
    return total


def parts(q: int, r: int):
    return tuple(q**i - 1 for i in range(1, r + 1))


@functools.lru_cache(maxsize=None)
def partitions_ps(q: int, r: int, k: int) -> int:
    """Partitions of k with parts in {q-1, q^2-1, ..., q^r-1}."""
    if k < 0:
        return 0
    if k % (q - 1):
        return 0
    counts = [1] + [0] * k
    for part in parts(q, r):
        for n in range(part, k + 1):
            counts[n] += counts[n - part]
    return counts[k]


def type_shift(q: int, r: int) -> int:
    return (q**r - 1) // (q - 1)


def dim_type_m(q: int, r: int, k: int, m: int) -> int:
    """Weight k, type m forms for GL_r(A): P_S(k - m (q^r-1)/(q-1)), 0 below the threshold."""
    if not 0 <= m < q - 1:
        raise DmfError(f"type {m} is outside 0 <= m < q-1")
    rest = k - m * type_shift(q, r)
    if rest < 0:
        return 0
    return partitions_ps(q, r, rest)


def dim_sl(q: int, r: int, k: int) -> int:
    return sum(dim_type_m(q, r, k, m) for m in range(q - 1))


def dim_gamma1_t(r: int, k: int) -> int:
    """Monomials of degree k in r weight-1 generators: C(k+r-1, r-1)."""
    if k < 0:
        return 0
    return comb(k + r - 1, r - 1)


def dim_cusp_gl(q: int, r: int, k: int) -> int:
    """Cusp forms of weight k, type 0: multiples of the discriminant, P_S(k - q^r + 1)."""
    return partitions_ps(q, r, k - (q**r - 1))


def dim_table(q: int, r: int, kmax: int, group: str = "GAMMA_T", m: int = 0):
    """Rows (k, formula value) for the named group."""
    group = group.upper()
    rows = []
    for k in range(kmax + 1):
        if group == "GAMMA_T":
            value = dim_gamma_t(q, r, k)
        elif group == "GL":
            value = dim_type_m(q, r, k, m)
        elif group == "SL":
            value = dim_sl(q, r, k)
        elif group == "U1":
            value = dim_gamma1_t(r, k)
        elif group == "CUSP":
            value = dim_cusp_gl(q, r, k)
        else:
            raise DmfError(f"unknown group {group!r}")
        rows.append((k, value))
    return rows


def cusp_formula_check(q: int, r: int, kmax: int) -> CheckReport:
    """No type-0 cusp forms below weight q^r - 1, a single line at q^r - 1, and
    dim M_k - dim S_k = partitions of k without the part q^r - 1."""
    top = q**r - 1
    rows = []
    for k in range(max(kmax, top) + 1):
        cusp = dim_cusp_gl(q, r, k)
        quotient = partitions_ps(q, r, k) - cusp
        ok = quotient == partitions_ps(q, r - 1, k) and (k >= top or cusp == 0) and (k != top or cusp == 1)
        rows.append({"k": k, "cusp": cusp, "non_cusp": quotient, "match": ok})
    return CheckReport("cusp_dimensions", all(row["match"] for row in rows), {"q": q, "r": r, "rows": rows})
