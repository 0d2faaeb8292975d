from soluble_tower.config import TowerConfig
from soluble_tower.selftest import run_property_suite, run_selftest, run_size_accounting
from soluble_tower.tower import Tower


def test_property_suite_passes_small():
    rep = run_property_suite(Tower(TowerConfig((3, 2, 3))), seed=4, samples=60)
    assert rep.passed, rep.failures
    assert rep.counts()["PASS"] > 30


def test_faulty_tower_fails_named_invariant(faulty_tower):
    rep = run_property_suite(faulty_tower, seed=0, samples=60)
    assert not rep.passed
    assert any("associativity" in claim for claim in rep.failures)


def test_size_accounting():
    rep = run_size_accounting((2, 3, 2))
    assert rep.passed and rep.counts()["PASS"] == 2
    rep = run_size_accounting((2, 3, 2, 3, 2))
    assert rep.counts()["N/A"] == 1


def test_selftest_includes_stage_checks():
    rep = run_selftest(TowerConfig((2, 3, 2)), seed=1, samples=40)
    assert rep.passed, rep.failures
    claims = [claim for _, claim, _, _ in rep.entries]
    assert any(c.startswith("stage 2: all 54x54 products") for c in claims)
    assert any(c.startswith("stage 2: [T_22, R_1]") for c in claims)


def test_selftest_deterministic_text():
    a = run_selftest(TowerConfig((3, 2)), seed=2, samples=30).render(timing=False)
    b = run_selftest(TowerConfig((3, 2)), seed=2, samples=30).render(timing=False)
    assert a == b
