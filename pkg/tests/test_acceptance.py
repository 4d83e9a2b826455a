"""The twelve acceptance criteria, one test per criterion.

Each criterion test records a single "criterion N: PASS|FAIL" line, shown in
the terminal summary. Criteria 4, 5 and 11 compare against printed closed
forms and case tables that miss the order-3 automorphisms (rho, t) of the
four-bitangent families when q = 1 mod 3, so they fail at q = 4; they are
strict xfails and each has a companion test against the corrected forms.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from f2quartics import census
from f2quartics.census import (
    DESCENT_SIZES, FAMILY_COUNTS, FAMILY_COUNTS_CORRECTED, FIXED_POINT_FORMULAS,
    MASS_NONHYPERELLIPTIC, QUARTIC_TOTAL, QUARTIC_TOTAL_CORRECTED, STRATA, STRATUM_FAMILIES,
)
from f2quartics.descent import CLASS_LABELS, cocycle_H, descent_set, right_act, twisted_act
from f2quartics.families import (
    DECLARED_STRATUM, FAMILY_IDS, ORDINARY_FAMILIES,
    group_structure, quotient_identity_holds,
)
from f2quartics.gf2tower import GF2m
from f2quartics.plane import fano_closure, gamma_group, mat_det, mat_inv, mat_vec, normalize_vector
from f2quartics.quartic import (
    BITANGENTS_TO_RANK, SUPERSINGULAR, TYPE13, find_bitangents, is_smooth,
    l_polynomial_of, newton_slopes, two_rank,
)

from conftest import context, tower

RESULTS = []
NON_ORDINARY_FAMILIES = [f for f in FAMILY_IDS if f not in ORDINARY_FAMILIES]
BOTH = (2, 4, 8)
slow = pytest.mark.slow
PRINTED_FORMS_MISS_ORDER3 = (
    "the printed four-bitangent counts and Aut tables omit the automorphisms (rho, t) "
    "with t a primitive cube root of unity, present when q = 1 mod 3 (q = 4: "
    "N4_1 99 vs 91, N4_3 354 vs 338, total 4348 vs 4324)")


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def mismatches(pairs):
    return [(name, exp, got) for name, exp, got in pairs if exp != got]


# 1 -------------------------------------------------------------------------

@slow
def test_criterion_01_descent_set_sizes():
    pairs, longest = [], 0.0
    for q in BOTH:
        for label in CLASS_LABELS:
            start = time.time()
            n = sum(1 for _ in descent_set(tower(q), label))
            longest = max(longest, time.time() - start)
            pairs.append((f"q={q} |D_{label}|", DESCENT_SIZES[label](q), n))
    bad = mismatches(pairs)
    assert record(1, not bad, f"{len(pairs)} descent sets, {bad or 'all exact'}")


# 2 -------------------------------------------------------------------------

@slow
def test_criterion_02_ordinary_class_counts():
    pairs = []
    for q in BOTH:
        ctx = context(q)
        for fid in ORDINARY_FAMILIES:
            pairs.append((f"q={q} {fid}", FAMILY_COUNTS[fid](q), len(ctx.orbits(fid))))
    q2 = [got for name, _, got in pairs if name.startswith("q=2 ")]
    bad = mismatches(pairs)
    ok = not bad and q2 == [1, 2, 9, 7, 10, 10]
    assert record(2, ok, f"q=2 values {q2} (sum {sum(q2)}), {bad or 'all exact'}")


# 3 -------------------------------------------------------------------------

@slow
def test_criterion_03_fixed_point_counts():
    pairs = []
    for q in BOTH:
        counts = census.fixed_point_counts(tower(q))
        pairs += [(f"q={q} {f.name}", f(q), counts[key]) for key, f in FIXED_POINT_FORMULAS.items()]
        ctx = context(q)
        formulas = census.family_fixed_point_formulas(ctx)
        for fid in NON_ORDINARY_FAMILIES:
            A = ctx.action(fid)
            fixed = A.fixed_counts()
            pairs += [(f"q={q} {fid} {g}", val, fixed[A.elements.index(g)])
                      for (f, g), val in formulas.items() if f == fid]
    bad = mismatches(pairs)
    assert record(3, not bad, f"{len(pairs)} fixed-point counts, {bad[:3] or 'all exact'}")


# 4 -------------------------------------------------------------------------

def _nonordinary_pairs(table):
    pairs = []
    for q in BOTH:
        ctx = context(q)
        for fid in NON_ORDINARY_FAMILIES:
            pairs.append((f"q={q} {fid}", table[fid](q), ctx.action(fid).burnside_count()))
    return pairs


@slow
@pytest.mark.xfail(strict=True, reason=PRINTED_FORMS_MISS_ORDER3)
def test_criterion_04_nonordinary_class_counts():
    bad = mismatches(_nonordinary_pairs(FAMILY_COUNTS))
    assert record(4, not bad, f"Burnside vs printed closed forms, mismatches {bad or 'none'}")


@slow
def test_criterion_04_corrected_forms():
    bad = mismatches(_nonordinary_pairs(FAMILY_COUNTS_CORRECTED))
    print(f"criterion  4 (corrected forms): {'PASS' if not bad else 'FAIL'}")
    assert not bad


# 5 -------------------------------------------------------------------------

def _table_mismatches(published):
    bad, checked = [], 0
    for q in (2, 4):
        ctx = context(q)
        for fid in FAMILY_IDS:
            A = ctx.action(fid)
            for Q in A.points:
                table = ctx.aut_table(fid, Q, published=published)
                if table is None:
                    continue
                checked += 1
                stab = A.stabilizer(Q)
                if (len(table.elements) != len(stab) or set(table.elements) != set(stab)
                        or table.structure != group_structure(stab, A.compose, A.identity)):
                    bad.append((q, fid, Q))
    return bad, checked


def _klein_classes():
    out = []
    for q in (2, 4):
        ctx = context(q)
        for fid in ("O_7_0", "O_7_1"):
            out.append(sum(1 for o in ctx.orbits(fid) if len(o.stabilizer) == 7))
    return out


@pytest.mark.xfail(strict=True, reason=PRINTED_FORMS_MISS_ORDER3)
def test_criterion_05_aut_tables():
    bad, checked = _table_mismatches(published=True)
    sevens = _klein_classes()
    ok = not bad and sevens == [1, 1, 1, 1]
    by_family = {}
    for q, fid, _ in bad:
        by_family[f"q={q} {fid}"] = by_family.get(f"q={q} {fid}", 0) + 1
    assert record(5, ok, f"{checked} models vs printed tables, mismatches {by_family or 'none'}; "
                         f"order-7 classes per O_7 family {sevens}")


def test_criterion_05_corrected_tables():
    bad, checked = _table_mismatches(published=False)
    sevens = _klein_classes()
    ok = not bad and sevens == [1, 1, 1, 1]
    print(f"criterion  5 (corrected tables): {'PASS' if ok else 'FAIL'}  {checked} models")
    assert ok


# 6 -------------------------------------------------------------------------

def test_criterion_06_burnside_equals_orbits():
    pairs = []
    for q in (2, 4):
        ctx = context(q)
        for label in CLASS_LABELS:
            from f2quartics.descent import centralizer_action
            A = centralizer_action(tower(q), label)
            pairs.append((f"q={q} D_{label}", len(A.orbits()), A.burnside_count()))
        for fid in NON_ORDINARY_FAMILIES:
            A = ctx.action(fid)
            pairs.append((f"q={q} {fid}", len(A.orbits()), A.burnside_count()))
    bad = mismatches(pairs)
    assert record(6, not bad, f"{len(pairs)} actions, {bad or 'all equal'}")


# 7 -------------------------------------------------------------------------

def test_criterion_07_cocycle_and_left_action():
    G = gamma_group()
    H = [cocycle_H(i) for i in range(len(G))]
    cocycle_bad = sum(1 for g in range(len(G)) for r in range(len(G))
                      if H[G.mul[g][r]] != tuple(a ^ b for a, b in zip(right_act(r, H[g]), H[r])))
    rng = random.Random(7)
    action_bad = 0
    for _ in range(3):
        Q = tuple(rng.randrange(4) for _ in range(6))
        images = [twisted_act(b, Q) for b in range(len(G))]
        action_bad += twisted_act(G.identity, Q) != Q
        action_bad += sum(1 for a in range(len(G)) for b in range(len(G))
                          if twisted_act(G.mul[a][b], Q) != twisted_act(a, images[b]))
    ok = cocycle_bad == 0 and action_bad == 0
    assert record(7, ok, f"cocycle failures {cocycle_bad}/{len(G) ** 2}, left-action failures {action_bad}")


# 8 -------------------------------------------------------------------------

@slow
def test_criterion_08_newton_polygons():
    wrong, seen = [], 0
    for q, count in ((2, None), (4, 1000), (8, 1000)):
        ctx = context(q)
        for fid in FAMILY_IDS:
            for Q, stratum in census.stratum_samples(ctx, fid, count, seed=q):
                seen += 1
                if stratum != DECLARED_STRATUM[fid]:
                    wrong.append((q, fid, Q))
                if fid in ("S", "N1_1"):
                    slopes = set(newton_slopes(l_polynomial_of(ctx.tower, ctx.model(fid, Q))))
                    want = {Fraction(1, 2)} if fid == "S" else {Fraction(1, 3), Fraction(2, 3)}
                    if slopes != want:
                        wrong.append((q, fid, Q, slopes))
    assert DECLARED_STRATUM["S"] == SUPERSINGULAR and DECLARED_STRATUM["N1_1"] == TYPE13
    assert record(8, not wrong, f"{seen} models, wrong strata {wrong[:3] or 'none'}")


# 9 -------------------------------------------------------------------------

def _is_fano(tower_, lines):
    """Seven bitangents form a Fano plane for suitable scalings of the forms."""
    level = 1
    for b in lines:
        level = math.lcm(level, b.level)
    F = tower_.field(level)
    vecs = [normalize_vector(F, tuple(tower_.embed(c, b.level, level) for c in b.line)) for b in lines]
    for i in range(7):
        for j in range(i + 1, 7):
            for m in range(j + 1, 7):
                M = (vecs[i], vecs[j], vecs[m])
                if not mat_det(F, M):
                    continue
                inv = mat_inv(F, tuple(zip(*M)))
                for n in range(7):
                    coords = mat_vec(F, inv, vecs[n])
                    if n in (i, j, m) or 0 in coords:
                        continue
                    scaled = [tuple(F.mul(coords[t], x) for x in M[t]) for t in range(3)]
                    return fano_closure(F, *scaled) == frozenset(vecs)
    return False


@slow
def test_criterion_09_bitangent_counts():
    ctx2 = context(2)
    sweep = census.sweep_q2(ctx2)
    rank_exp, rank_got = sweep.checks["bitangent count matches 2-rank"]
    problems = []
    if rank_exp != rank_got:
        problems.append(f"q=2: {rank_got} orbits with bitangents not matching the 2-rank")
    T4 = tower(4)
    rng = random.Random(9)
    smooth = 0
    while smooth < 300:
        qt = tuple(rng.randrange(4) for _ in range(15))
        if not is_smooth(T4, qt):
            continue
        smooth += 1
        found = find_bitangents(T4, qt)
        if BITANGENTS_TO_RANK.get(len(found)) != two_rank(l_polynomial_of(T4, qt)):
            problems.append(("q=4", qt))
    fano_checked = 0
    for q in (2, 4):
        ctx = context(q)
        for fid in ORDINARY_FAMILIES:
            for o in ctx.orbits(fid)[:20]:
                found = find_bitangents(ctx.tower, ctx.model(fid, o.representative))
                fano_checked += 1
                if len(found) != 7 or not _is_fano(ctx.tower, found):
                    problems.append(("fano", q, fid, o.representative))
    assert record(9, not problems,
                  f"q=2 all {sweep.smooth_orbits} smooth orbits {sweep.bitangents}, q=4 {smooth} random "
                  f"smooth quartics, {fano_checked} Fano checks; problems {problems[:3] or 'none'}")


# 10 ------------------------------------------------------------------------

@slow
def test_criterion_10_mass_formulas():
    pairs = []
    for q in BOTH:
        ctx = context(q)
        column = Fraction(0)
        for s in STRATA:
            mass = census.mass_by_orbits(ctx, STRATUM_FAMILIES[s])
            column += mass
            pairs.append((f"q={q} {s}", Fraction(MASS_NONHYPERELLIPTIC[s](q)), mass))
        pairs.append((f"q={q} column", Fraction(q ** 6 + 1), column))
        table = census.strata_table(q)
        pairs.append((f"q={q} |M3|", q ** 6 + q ** 5 + 1, sum(t["nh"] + t["h"] for t in table.values())))
    bad = mismatches(pairs)
    assert record(10, not bad, f"{len(pairs)} exact rational comparisons, {bad or 'all exact'}")


# 11 ------------------------------------------------------------------------

def _grand_totals():
    return [(f"q={q}", q, sum(context(q).class_count(f) for f in FAMILY_IDS)) for q in BOTH]


@slow
@pytest.mark.xfail(strict=True, reason=PRINTED_FORMS_MISS_ORDER3)
def test_criterion_11_grand_totals():
    sweep = census.sweep_q2(context(2))
    pairs = [(name, QUARTIC_TOTAL(q), n) for name, q, n in _grand_totals()]
    pairs.append(("q=2 sweep", QUARTIC_TOTAL(2), sweep.smooth_orbits))
    bad = mismatches(pairs)
    ok = not bad and sweep.ok
    assert record(11, ok, f"totals {[p[2] for p in pairs]}, printed {[p[1] for p in pairs]}, "
                          f"sweep partition exact: {sweep.ok}")


@slow
def test_criterion_11_corrected_total():
    sweep = census.sweep_q2(context(2))
    pairs = [(name, QUARTIC_TOTAL_CORRECTED(q), n) for name, q, n in _grand_totals()]
    ok = not mismatches(pairs) and sweep.ok and sweep.smooth_orbits == 78
    print(f"criterion 11 (corrected total): {'PASS' if ok else 'FAIL'}  {[p[2] for p in pairs]}")
    assert ok


# 12 ------------------------------------------------------------------------

def test_criterion_12_supersingular_quotient():
    rng = random.Random(12)
    fields = {m: GF2m(m) for m in (1, 2, 3, 4, 6, 8)}
    failures = 0
    for _ in range(1000):
        F = fields[rng.choice(list(fields))]
        c, v = rng.randrange(1, F.order), rng.randrange(1, F.order)
        # admissible: v is a nonzero root of c z^3 + f z + 1
        f = F.mul(F.mul(c, F.pow(v, 3)) ^ 1, F.inv(v))
        ok = quotient_identity_holds(F, c, f, v)
        for z in rng.sample(range(F.order), min(8, F.order)):
            u = F.mul(z, z ^ v)
            lhs = F.mul(c, F.sq(u)) ^ F.mul(F.inv(v), u)
            rhs = F.mul(c, F.pow(z, 4)) ^ F.mul(f, F.sq(z)) ^ z
            ok = ok and lhs == rhs
        failures += not ok
    assert record(12, failures == 0, f"1000 random admissible triples, {failures} failures")
