import random

import pytest

from f2quartics.families import (
    BITANGENT_COUNT,
    FAMILY_IDS,
    ORDINARY_FAMILIES,
    enumerate_family,
    family_action,
    group_structure,
    parse_family,
    quotient_identity_holds,
)
from f2quartics.plane import mat_det, mat_inv
from f2quartics.quartic import find_bitangents, is_smooth, proportional, transform

from conftest import context


def test_parse_family():
    assert parse_family("o2") == "O_2"
    assert parse_family("O_7,0") == "O_7_0"
    assert parse_family("n4-1") == "N4_1"
    assert parse_family("s") == "S"
    with pytest.raises(ValueError):
        parse_family("O_5")


def test_member_counts_q2(ctx2):
    sizes = {fid: len(ctx2.members(fid)) for fid in FAMILY_IDS}
    assert sizes["O_1"] == 1
    assert sizes["S"] == 8
    assert sizes["N2_1"] == 8


def test_member_counts_q4(ctx4):
    q, N = 4, 3
    sizes = {fid: len(ctx4.members(fid)) for fid in FAMILY_IDS}
    assert sizes["N4_1"] == N * (q - 1) ** 3 * q ** 2
    assert sizes["N4_2"] == N * (q - 1) * (q * q - 1) * q ** 2
    assert sizes["N4_3"] == N * (q ** 3 - 1) * q ** 2
    assert sizes["N2_1"] == 2 * N * (q - 1) ** 2 * q ** 2
    assert sizes["S"] == N * q ** 3


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_models_are_smooth_with_expected_bitangents_q2(ctx2, fid):
    for model in enumerate_family(ctx2, fid):
        assert is_smooth(ctx2.tower, model.quartic)
        assert len(find_bitangents(ctx2.tower, model.quartic)) == BITANGENT_COUNT[fid]


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_models_are_smooth_sampled_q4(ctx4, fid):
    rng = random.Random(fid)
    pts = ctx4.members(fid)
    for Q in rng.sample(pts, min(60, len(pts))):
        qt = ctx4.model(fid, Q)
        assert is_smooth(ctx4.tower, qt)
        assert len(find_bitangents(ctx4.tower, qt)) == BITANGENT_COUNT[fid]


def test_o2_and_n4_actions_match_displayed_rows(ctx4):
    rng = random.Random(0)
    for _ in range(50):
        a, b, c, d, e, f = (rng.randrange(4) for _ in range(6))
        assert ctx4.act("O_2", "t", (a, b, c, d, e, f)) == (a ^ c ^ f, b ^ c ^ e, c, d ^ e ^ f, e, f)
        assert ctx4.act("N4_1", ("tau", 1), (a, b, c, d, e, f)) == (a, b ^ c ^ e, c, d ^ f, e, f)


def test_s_action_matches_displayed_formula(ctx4):
    k = ctx4.k
    rng = random.Random(1)
    for _ in range(50):
        a, c, d, f = (rng.randrange(4) for _ in range(4))
        t, v = rng.choice(ctx4.mu9), rng.randrange(4)
        t3 = k.pow(t, 3)
        expected = (k.mul(a ^ k.mul(c, k.sq(v)) ^ k.mul(f, v) ^ k.sqrt(v), t3), 0, c,
                    k.mul(d, k.inv(k.sq(t))), 0, k.mul(f, k.inv(t3)))
        assert ctx4.act("S", (t, v), (a, 0, c, d, 0, f)) == expected


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_actions_are_group_actions(ctx4, fid):
    A = family_action(ctx4, fid)
    rng = random.Random(fid)
    A.check_action(rng.sample(A.points, min(4, len(A.points))))


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_group_elements_are_isomorphisms(ctx4, fid):
    k = ctx4.k
    rng = random.Random(fid)
    pts = ctx4.members(fid)
    for Q in rng.sample(pts, min(10, len(pts))):
        for g in ctx4.elements(fid):
            level, M = ctx4.element_matrix(fid, g, Q)
            assert level == 1 and mat_det(k, M)
            src, dst = ctx4.model(fid, Q), ctx4.model(fid, ctx4.act(fid, g, Q))
            assert (proportional(k, transform(k, src, M), dst) is not None
                    or proportional(k, transform(k, src, mat_inv(k, M)), dst) is not None)


def test_o2_d8_example(ctx4):
    k = ctx4.k
    for a in range(1, 4):
        for c in range(1, 4):
            Q = (a, a, c, 1, c, c)
            if ctx4.is_member("O_2", Q):
                info = ctx4.aut_k("O_2", Q)
                assert (info.order, info.structure) == (8, "D8")
                assert ctx4.aut_table("O_2", Q).structure == "D8"


def test_s_aut_with_nonzero_d(ctx4):
    T = ctx4.tower
    for Q in ctx4.members("S"):
        a, b, c, d, e, f = Q
        if d:
            assert ctx4.aut_k("S", Q).order == len(T.additive_kernel(c, f))


def test_type13_family_has_trivial_automorphisms(ctx4):
    assert all(ctx4.aut_k("N1_1", Q).order == 1 for Q in ctx4.members("N1_1"))
    assert all(ctx4.aut_k("N2_0", Q).order == 1 for Q in ctx4.members("N2_0"))


@pytest.mark.parametrize("fid", FAMILY_IDS)
@pytest.mark.parametrize("q", [2, 4])
def test_aut_tables_match_stabilizers(fid, q):
    ctx = context(q)
    A = ctx.action(fid)
    for Q in A.points:
        stab = A.stabilizer(Q)
        table = ctx.aut_table(fid, Q)
        if table is None:
            continue
        assert set(table.elements) == set(stab)
        assert table.structure == group_structure(stab, A.compose, A.identity)


def test_o1_stabilizers_are_subgroups_of_gamma(ctx4):
    from f2quartics.plane import gamma_group
    G = gamma_group()
    for o in ctx4.orbits("O_1"):
        s = set(o.stabilizer)
        assert all(G.mul[a][b] in s for a in s for b in s)


@pytest.mark.parametrize("fid", ["O_7_0", "O_7_1"])
@pytest.mark.parametrize("q", [2, 4])
def test_klein_twist_unique_order_seven(fid, q):
    ctx = context(q)
    special = [o for o in ctx.orbits(fid) if o.size != 7]
    assert len(special) == 1
    assert special[0].representative == ctx.klein_form(fid)
    assert len(special[0].stabilizer) == 7


def test_group_structure_names(ctx4):
    A = ctx4.action("N4_1")
    assert len(A.elements) == 18
    assert group_structure(A.elements, A.compose, A.identity) == "nonabelian order 18"
    O2 = ctx4.action("O_2")
    assert group_structure(O2.elements, O2.compose, O2.identity) == "D8"


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_class_counts_q2(ctx2, fid):
    expected = {"O_1": 1, "O_2": 2, "O_3": 9, "O_4": 7, "O_7_0": 10, "O_7_1": 10,
                "N4_1": 2, "N4_2": 7, "N4_3": 10, "N2_1": 6, "N2_0": 4, "N1_1": 4, "S": 6}
    assert ctx2.class_count(fid) == expected[fid] == len(ctx2.orbits(fid))


def _random_conjugate(ctx, fid, rng):
    k, q = ctx.k, ctx.q
    Q = rng.choice(ctx.members(fid))
    while True:
        M = tuple(tuple(rng.randrange(q) for _ in range(3)) for _ in range(3))
        if mat_det(k, M):
            break
    return Q, transform(k, ctx.model(fid, Q), M)


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_reduce_to_family_q2(ctx2, fid):
    rng = random.Random(fid)
    k = ctx2.k
    A = ctx2.action(fid)
    for _ in range(10):
        Q, qt = _random_conjugate(ctx2, fid, rng)
        got_fid, R, W = ctx2.reduce_to_family(qt)
        assert got_fid == fid
        assert R == min(A.act(g, Q) for g in A.elements)
        assert proportional(k, transform(k, qt, W.rows), ctx2.model(fid, R)) is not None


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_reduce_to_family_q4(ctx4, fid):
    rng = random.Random(fid)
    k = ctx4.k
    A = ctx4.action(fid)
    for _ in range(2):
        Q, qt = _random_conjugate(ctx4, fid, rng)
        got_fid, R, W = ctx4.reduce_to_family(qt)
        assert got_fid == fid
        assert R == min(A.act(g, Q) for g in A.elements)
        assert proportional(k, transform(k, qt, W.rows), ctx4.model(fid, R)) is not None


def test_reduce_normal_model_gives_identity(ctx2):
    for fid in FAMILY_IDS:
        for o in ctx2.orbits(fid):
            got_fid, R, W = ctx2.reduce_to_family(ctx2.model(fid, o.representative))
            assert (got_fid, R) == (fid, o.representative)
            assert proportional(ctx2.k, transform(ctx2.k, ctx2.model(fid, R), W.rows),
                                ctx2.model(fid, R)) is not None


def test_reduce_rejects_singular(ctx2):
    from f2quartics.quartic import rhs
    with pytest.raises(ValueError):
        ctx2.reduce_to_family(rhs(7))


@pytest.mark.parametrize("q", [2, 4, 8])
def test_supersingular_quotient(q):
    ctx = context(q)
    for Q in ctx.members("S")[:50]:
        E = ctx.supersingular_quotient(Q)
        F = ctx.tower.field(E.level)
        assert quotient_identity_holds(F, E.c, E.f, E.v)
        assert F.mul(E.v, E.v_inv) == 1
        # v is a nonzero root of c z^4 + f z^2 + z
        assert F.mul(E.c, F.pow(E.v, 4)) ^ F.mul(E.f, F.sq(E.v)) ^ E.v == 0

