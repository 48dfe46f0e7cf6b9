import pytest

from src.dmf import dim_formulas as dims
from src.dmf.errors import DmfError


@pytest.mark.parametrize(
    "q, r, k, expected",
    [
        (2, 2, 6, 3),
        (3, 2, 5, 0),
        (2, 3, 7, 4),
        (3, 2, 0, 1),
        (2, 2, -1, 0),
    ],
)
def test_partitions_ps(q, r, k, expected):
    assert dims.partitions_ps(q, r, k) == expected


def test_dim_gamma_t_small_values():
    assert dims.dim_gamma_t(2, 3, 1) == 7
    assert dims.dim_gamma_t(3, 2, 2) == 7
    # rank 2: 1 + q k
    assert [dims.dim_gamma_t(2, 2, k) for k in range(4)] == [1, 3, 5, 7]


def test_weight_zero_is_constants_for_every_group():
    for group in ("GAMMA_T", "GL", "SL", "U1"):
        assert dims.dim_table(3, 2, 0, group) == [(0, 1)]


def test_type_shift_and_dim_type_m():
    assert dims.type_shift(3, 2) == 4
    assert dims.dim_type_m(3, 2, 4, 1) == 1
    assert dims.dim_type_m(3, 2, 3, 1) == 0
    # SL sums the types
    assert dims.dim_sl(3, 2, 4) == dims.dim_type_m(3, 2, 4, 0) + dims.dim_type_m(3, 2, 4, 1)


def test_dim_type_m_rejects_type_out_of_range():
    with pytest.raises(DmfError):
        dims.dim_type_m(3, 2, 4, 2)
    with pytest.raises(DmfError):
        dims.dim_type_m(3, 2, 4, -1)


def test_dim_gamma1_t_is_binomial():
    assert dims.dim_gamma1_t(3, 5) == 21
    assert dims.dim_gamma1_t(2, 4) == 5
    assert dims.dim_gamma1_t(2, -1) == 0


def test_cusp_dimensions_start_at_top_weight():
    assert dims.dim_cusp_gl(2, 2, 2) == 0
    assert dims.dim_cusp_gl(2, 2, 3) == 1
    assert dims.dim_cusp_gl(3, 2, 8) == 1


def test_dim_table_rows():
    assert dims.dim_table(2, 2, 3, "U1") == [(0, 1), (1, 2), (2, 3), (3, 4)]
    assert dims.dim_table(2, 2, 3, "cusp") == [(0, 0), (1, 0), (2, 0), (3, 1)]


def test_dim_table_unknown_group():
    with pytest.raises(DmfError):
        dims.dim_table(2, 2, 3, "BOREL")


@pytest.mark.parametrize("q, r", [(2, 2), (2, 3), (3, 2), (4, 2)])
def test_cusp_formula_check_passes(q, r):
    report = dims.cusp_formula_check(q, r, 6)
    assert report.passed
    assert len(report.details["rows"]) == max(6, q**r - 1) + 1
