import json
from fractions import Fraction

import pytest

from f2quartics import census
from f2quartics.census import (
    FAMILY_COUNTS, FAMILY_COUNTS_CORRECTED, QUARTIC_STRATA, QUARTIC_STRATA_CORRECTED,
    QUARTIC_TOTAL, QUARTIC_TOTAL_CORRECTED, STRATA, STRATUM_FAMILIES, F,
)
from f2quartics.families import FAMILY_IDS, ORDINARY_FAMILIES

from conftest import context

POWERS = [2 ** m for m in range(1, 7)]


def test_formula_values_at_small_q():
    assert sum(FAMILY_COUNTS[f](2) for f in ORDINARY_FAMILIES) == 39
    assert QUARTIC_TOTAL(2) == 78
    assert FAMILY_COUNTS["N4_1"](2) == 2
    assert FAMILY_COUNTS["S"](2) == 6
    assert FAMILY_COUNTS["O_7_0"](2) == 10
    # q = 4: delta = 2, eps = 0
    assert FAMILY_COUNTS["S"](4) == (4 + 2) * 7


def test_formula_rejects_bad_input():
    with pytest.raises(ValueError):
        QUARTIC_TOTAL(6)
    with pytest.raises(ArithmeticError):
        F("half", (1, 1), 2)(2)


def test_formula_text():
    assert F("x", (1, -3, 0, 2)).text() == "q^3 - 3q^2 + 2"
    assert "mod 3" in FAMILY_COUNTS["S"].text()


@pytest.mark.parametrize("q", POWERS)
def test_family_counts_sum_to_strata(q):
    for s in STRATA:
        fam = sum(FAMILY_COUNTS_CORRECTED[f](q) for f in STRATUM_FAMILIES[s])
        assert fam == QUARTIC_STRATA_CORRECTED[s](q)
    assert sum(QUARTIC_STRATA[s](q) for s in STRATA) == QUARTIC_TOTAL(q)
    assert sum(QUARTIC_STRATA_CORRECTED[s](q) for s in STRATA) == QUARTIC_TOTAL_CORRECTED(q)


@pytest.mark.parametrize("q", POWERS)
def test_corrections_only_when_q_is_1_mod_3(q):
    diff = QUARTIC_TOTAL_CORRECTED(q) - QUARTIC_TOTAL(q)
    assert diff == (2 * q * q - 2 * q if q % 3 == 1 else 0)


@pytest.mark.parametrize("q", POWERS)
def test_strata_table_invariants(q):
    table = census.strata_table(q)
    assert sum(t["nh"] for t in table.values()) == q ** 6 + 1
    assert sum(t["all"] for t in table.values()) == q ** 6 + q ** 5 + 1
    for t in table.values():
        assert t["nh"] + t["h"] == t["all"]
    hyp = census.hyperelliptic_class_counts(q)
    assert all(v >= 0 for v in hyp.values())


def test_strata_table_q2():
    table = census.strata_table(2)
    assert [table[s]["nh"] for s in STRATA] == [33, 16, 8, 4, 4]
    assert [table[s]["h"] for s in STRATA] == [16, 4, 8, 4, 0]
    assert list(census.hyperelliptic_class_counts(2).values()) == [36, 10, 22, 8, 0]


def test_masses_q2(ctx2):
    total = Fraction(0)
    for s in STRATA:
        by_sizes = census.mass_by_sizes(ctx2, STRATUM_FAMILIES[s])
        assert by_sizes == census.mass_by_orbits(ctx2, STRATUM_FAMILIES[s])
        assert by_sizes == census.MASS_NONHYPERELLIPTIC[s](2)
        total += by_sizes
    assert total == 65


def test_fixed_point_counts_q2_q4():
    for q in (2, 4):
        counts = census.fixed_point_counts(context(q).tower)
        for key, formula in census.FIXED_POINT_FORMULAS.items():
            assert counts[key] == formula(q), key


def test_verify_q2_is_clean():
    rep = census.verify(2)
    assert rep.ok, [c.name for c in rep.failures]
    assert len(rep.checks) > 100
    data = json.loads(rep.to_json())
    assert data["ok"] and data["q"] == 2
    assert rep.to_markdown().startswith("# verify q=2")


def test_verify_q4_fails_only_on_the_printed_four_bitangent_counts():
    rep = census.verify(4)
    names = sorted(c.name for c in rep.failures)
    assert names == sorted(["N4_1 vs closed form", "N4_3 vs closed form",
                            "Rank2 classes", "smooth quartic classes"])
    assert all(c.ok for c in rep.checks if c.note == census.CORRECTED)


def test_verify_formulas_depth_needs_no_field():
    rep = census.verify(1024, depth="formulas")
    assert rep.ok


def test_sweep_only_at_q2():
    with pytest.raises(ValueError):
        census.verify(4, depth="sweep")


def test_sweep_q2(ctx2):
    res = census.sweep_q2(ctx2)
    assert res.quartics == 2 ** 15 - 1
    assert res.smooth_orbits == 78
    assert res.bitangents == {7: 39, 4: 19, 2: 10, 1: 10}
    assert res.ok, {k: v for k, v in res.checks.items() if v[0] != v[1]}
