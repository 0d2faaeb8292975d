import pytest

from soluble_tower.algebra import AlgebraElement, Certificate
from soluble_tower.config import TowerConfig
from soluble_tower.encoding import to_hex
from soluble_tower.fields import Field
from soluble_tower.io import FormatError, format_algebra, format_certificate, parse_algebra, parse_certificate
from soluble_tower.tower import Tower

TOWER = Tower(TowerConfig((2, 3, 2, 3, 2)))


def test_algebra_round_trip():
    x = TOWER.element(e1=1)
    y = TOWER.construct_noncentral(3)
    alpha = AlgebraElement(Field(0), TOWER, [(x, "1/2"), (y, -3)])
    text = format_algebra(alpha)
    assert parse_algebra(text, TOWER) == alpha
    assert format_algebra(parse_algebra(text, TOWER)) == text


def test_bundled_example():
    from pathlib import Path

    path = Path(__file__).resolve().parent.parent / "data" / "alpha_1_plus_x.alg"
    alpha = parse_algebra(path.read_text(), TOWER)
    assert alpha.field == Field(3)
    assert alpha == AlgebraElement(Field(3), TOWER, [(TOWER.identity(1), 1), (TOWER.element(e1=1), 1)])


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "empty algebra file"),
        ("# only a comment\n", "empty algebra file"),
        ("field 3\n", "no terms"),
        ("0100 1\n", "'field' must come before"),
        ("field 4\n0100 1\n", "bad field"),
        ("field 3\nprimes 2 3\n0100 1\n", "do not match"),
        ("field 3\n0100\n", "expected '<hex> <scalar>'"),
        ("field 3\nzz 1\n", "bad element encoding"),
        ("field 3\n0100 1/3\n", "bad scalar"),
    ],
)
def test_algebra_parse_errors(text, message):
    with pytest.raises(FormatError, match=message):
        parse_algebra(text, TOWER)


def test_certificate_round_trip():
    fld = Field(5)
    z = TOWER.center_generator(4)
    cert = Certificate(z, [(2, TOWER.element(e1=1), z), (4, z, TOWER.identity(1))])
    text = format_certificate(cert, fld, TOWER)
    back, f2 = parse_certificate(text, TOWER)
    assert f2 == fld and back.target == z
    assert back.triples == cert.triples


@pytest.mark.parametrize(
    "text, message",
    [
        ("field 3\n", "no target"),
        ("target 0100\ntarget 0100\n", "duplicate target"),
        ("target 0100\ntriple 1 0100\n", "expected 'target"),
    ],
)
def test_certificate_parse_errors(text, message):
    with pytest.raises(FormatError, match=message):
        parse_certificate(text, TOWER)


def test_deterministic_output():
    z = TOWER.center_generator(2)
    alpha = AlgebraElement(Field(3), TOWER, [(z, 1), (TOWER.identity(1), 2)])
    assert format_algebra(alpha) == f"field 3\nprimes 2 3 2 3 2\n{to_hex(TOWER.identity(1))} 2\n{to_hex(z)} 1\n"
