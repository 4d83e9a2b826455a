import random
from itertools import product

import pytest

from f2quartics.gf2tower import GF2m
from f2quartics.quartic import proportional
from f2quartics.plane import (
    F2,
    GAMMA_REPS,
    GEN_A,
    GEN_B,
    RHO,
    TAU,
    ProjMap,
    act_on_form,
    fano_closure,
    map_from_correspondence,
    mat_det,
    normalize_vector,
    dict_to_quartic,
    quartic_to_dict,
    gamma_group,
)

KLEIN_TWIST = {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1, (2, 2, 0): 1, (0, 2, 2): 1, (2, 0, 2): 1,
               (2, 1, 1): 1, (1, 2, 1): 1, (1, 1, 2): 1}


def random_map(F, rng):
    while True:
        rows = tuple(tuple(rng.randrange(F.order) for _ in range(3)) for _ in range(3))
        if mat_det(F, rows):
            return ProjMap(F, rows)


def random_quartic(F, rng):
    return quartic_to_dict([rng.randrange(F.order) for _ in range(15)])


def test_gamma_order_and_classes():
    G = gamma_group()
    assert len(G) == 168
    classes = G.conjugacy_classes()
    sizes = {lab: len(v) for lab, v in classes.items()}
    assert sizes == {"1": 1, "2": 21, "3": 56, "4": 42, "7_0": 24, "7_1": 24}
    assert sum(sizes.values()) == 168
    for lab, members in classes.items():
        rep = G.element(GAMMA_REPS[lab])
        assert len(G.centralizer(rep)) * len(members) == 168
        assert {G.labels[i] for i in members} == {lab}
    assert sorted(set(G.orders)) == [1, 2, 3, 4, 7]


def test_centralizer_of_involution_is_dihedral():
    G = gamma_group()
    g = G.element(GAMMA_REPS["2"])
    t, r = G.element(TAU), G.element(RHO)
    listed = {G.identity, g, t, G.mul[g][t], r, G.mul[G.mul[r][r]][r], G.mul[r][t], G.mul[t][r]}
    assert set(G.centralizer(g)) == listed
    assert G.orders[r] == 4 and G.orders[t] == 2
    assert G.mul[G.mul[t][r]][t] == G.inv[r]


def test_klein_twist_is_gamma_invariant():
    G = gamma_group()
    for i in range(len(G)):
        assert act_on_form(G.projmap(i), KLEIN_TWIST) == KLEIN_TWIST
    for gen in (GEN_A, GEN_B):
        assert act_on_form(ProjMap(F2, gen), KLEIN_TWIST) == KLEIN_TWIST


def test_rotation_on_linear_form():
    assert act_on_form(ProjMap(F2, GEN_B), {(1, 0, 0): 1}) == {(0, 1, 0): 1}
    f = {(3, 1, 0): 1, (0, 0, 4): 1}
    assert act_on_form(ProjMap.identity(), f) == f


@pytest.mark.parametrize("m", [1, 2, 3])
def test_right_action_axiom(m):
    F = GF2m(m)
    rng = random.Random(m)
    for _ in range(25):
        g, h = random_map(F, rng), random_map(F, rng)
        f = random_quartic(F, rng)
        # maps are stored up to scalars, so the forms agree up to a scalar
        lhs = dict_to_quartic(act_on_form(h, act_on_form(g, f)))
        rhs = dict_to_quartic(act_on_form(g @ h, f))
        assert proportional(F, lhs, rhs) is not None


@pytest.mark.parametrize("m", [2, 3])
def test_projmap_group_axioms(m):
    F = GF2m(m)
    rng = random.Random(m)
    ident = ProjMap.identity(F)
    for _ in range(50):
        a, b, c = (random_map(F, rng) for _ in range(3))
        assert (a @ b) @ c == a @ (b @ c)
        assert a @ a.inverse() == ident == a.inverse() @ a
        flat = [v for r in a.rows for v in r]
        assert next(v for v in flat if v) == 1


def test_zero_sets_transport():
    F = GF2m(2)
    rng = random.Random(5)
    pts = [normalize_vector(F, p) for p in product(range(4), repeat=3) if any(p)]
    pts = sorted(set(pts))
    from f2quartics.plane import form_eval
    for _ in range(10):
        g = random_map(F, rng)
        f = random_quartic(F, rng)
        zeros = {p for p in pts if form_eval(F, f, p) == 0}
        moved = act_on_form(g.inverse(), f)
        assert {g.on_point(p) for p in zeros} == {p for p in pts if form_eval(F, moved, p) == 0}


def test_fano_closure():
    b0 = fano_closure(F2, (1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert b0 == {(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 1, 0), (0, 1, 1), (1, 0, 1)}
    assert fano_closure(F2, (0, 0, 1), (1, 0, 0), (0, 1, 0)) == b0
    assert fano_closure(F2, (1, 1, 0), (0, 1, 1), (1, 1, 1)) == b0
    with pytest.raises(ValueError):
        fano_closure(F2, (1, 0, 0), (0, 1, 0), (1, 1, 0))
    G = gamma_group()
    for i in range(len(G)):
        assert {normalize_vector(F2, G.projmap(i).on_line(l)) for l in b0} == b0


def test_fano_closure_of_quadratic_lines():
    # lines u x + u' y, u' x + u y, z over GF(4) with u^2 + u = 1
    F = GF2m(2)
    u = next(x for x in range(4) if F.sq(x) ^ x == 1)
    up = F.sq(u)
    plane = fano_closure(F, (u, up, 0), (up, u, 0), (0, 0, 1))
    listed = {(u, up, 0), (up, u, 0), (0, 0, 1), (1, 1, 1), (1, 1, 0), (up, u, 1), (u, up, 1)}
    assert plane == {normalize_vector(F, l) for l in listed}


def test_map_from_correspondence():
    frame = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
    assert map_from_correspondence(F2, frame, frame) == ProjMap.identity()
    swapped = [frame[1], frame[0], frame[2], frame[3]]
    M = map_from_correspondence(F2, frame, swapped)
    assert M.order() == 2
    F = GF2m(3)
    rng = random.Random(8)
    for _ in range(20):
        while True:
            src = [tuple(rng.randrange(8) for _ in range(3)) for _ in range(4)]
            dst = [tuple(rng.randrange(8) for _ in range(3)) for _ in range(4)]
            try:
                M = map_from_correspondence(F, src, dst)
                break
            except ValueError:
                continue
        for s, d in zip(src, dst):
            assert M.on_point(s) == normalize_vector(F, d)
    with pytest.raises(ValueError):
        map_from_correspondence(F2, [(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)], frame)
