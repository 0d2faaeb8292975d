import pytest
from hypothesis import given
from hypothesis import strategies as st

from soluble_tower.config import TowerConfig
from soluble_tower.encoding import DecodeError, decode, encode, format_element, from_hex, to_hex
from soluble_tower.tower import Tower

TOWER = Tower(TowerConfig((2, 3, 2)))


def test_identity_token():
    assert encode(TOWER.identity(1)) == b"\x01\x00"
    assert encode(TOWER.identity(3)) == b"\x01\x00"


def test_ambient_level_on_decode():
    a = decode(TOWER, b"\x01\x00", level=3)
    assert a.level == 3 and a.is_identity()


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_round_trip(seed, level):
    a = TOWER.random_element(level, 4, seed)
    assert decode(TOWER, encode(a)) == a
    assert from_hex(TOWER, to_hex(a)) == a


@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_injective(s1, s2):
    a, b = TOWER.random_element(3, 4, s1), TOWER.random_element(3, 4, s2)
    assert (encode(a) == encode(b)) == (a == b)


@pytest.mark.parametrize(
    "data",
    [
        b"",  # truncated
        b"\x01\x02",  # exponent not reduced mod 2
        b"\x04\x00",  # depth beyond the tower
        b"\x02\x00\x00\x00",  # trailing trivial level not trimmed
        b"\x01\x00\x00",  # trailing bytes
        b"\x02\x00\x00\x01\x02\x01\x00\x01\x00",  # single key violates orbit sums
    ],
)
def test_non_canonical_rejected(data):
    with pytest.raises(DecodeError):
        decode(TOWER, data)


def test_bad_hex():
    with pytest.raises(DecodeError):
        from_hex(TOWER, "zz")


def test_text_form():
    y = TOWER.construct_noncentral(2)
    text = format_element(y)
    assert text.startswith("e1=0; L2: {")
    assert "->" in text
