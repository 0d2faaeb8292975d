import pytest

from soluble_tower import sizes


def test_small_orders():
    assert sizes.group_order((2, 3), 2) == 54
    assert sizes.group_order((3, 2), 2) == 96
    assert sizes.d_dimension((3, 2), 2) == 5
    assert sizes.d_dimension((2, 3, 2), 3) == 73


def test_dimension_formula_by_hand():
    # dim D_i = 1 + (2 p_{i-1} - 2) |G_{i-1}| / p_{i-1}
    primes = (2, 3, 2)
    dims = sizes.level_dimensions(primes)
    assert dims == [(2, 1), (3, 1 + 2 * 2 // 2), (2, 1 + 4 * 54 // 3)]


def test_order_formula_symbolic():
    assert sizes.order_formula((2, 3, 2), 3) == "2^74 * 3^3"
    far = sizes.order_formula((2, 3, 2, 3, 2), 5)
    assert far.startswith("2^(1 + 4*|G_4|/3) * |G_4|")
    assert sizes.group_order((2, 3, 2, 3, 2), 5) is None
    assert sizes.d_dimension((2, 3, 2, 3, 2), 5) is None


def test_d_dimension_level_one():
    with pytest.raises(ValueError):
        sizes.d_dimension((2, 3), 1)
