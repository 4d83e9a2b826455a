"""The thirteen families of rational normal models of smooth quartics.

Family ids:

    O_1 O_2 O_3 O_4 O_7_0 O_7_1    seven bitangents (ordinary)
    N4_1 N4_2 N4_3                 four bitangents
    N2_1 N2_0                      two bitangents
    N1_1 S                         one bitangent

Each family is a set of quadratic forms Q together with a quartic model
N_Q and a finite group acting on the Q's whose orbits are the
k-isomorphism classes inside the family.  For the ordinary families the
model is Q^2 = l1 l2 l3 (l1 + l2 + l3) for three lines of a Fano plane
over k_d; Q lives in k^6 except for O_7_*, where it lives in (k_7)^6.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from math import gcd

import numpy as np

from . import upoly
from .descent import (
    AffineKeyMap,
    AffineSpace,
    GroupAction,
    class_representative,
    descent_set,
    four_line_product,
    pack,
    twisted_act,
)
from .gf2tower import FieldTower, GF2m, f2_kernel, solve_f2
from .plane import (
    F2,
    ProjMap,
    cross,
    dict_to_quad,
    fano_closure,
    form_add,
    form_mul,
    form_eval,
    gamma_group,
    linear,
    map_from_correspondence,
    mat_det,
    mat_inv,
    mat_mul,
    normalize_vector,
    quad_to_dict,
    transpose,
)
from .quartic import (
    ORDINARY,
    RANK1,
    RANK2,
    SUPERSINGULAR,
    TYPE13,
    dict_to_quartic,
    find_bitangents,
    is_smooth,
    nonsquare_part,
    proportional,
    quartic_add,
    quartic_scale,
    quartic_sqrt,
    quartic_to_dict,
    square_of_quad,
    transform,
    _lift_to_common,
)

FAMILY_IDS = ("O_1", "O_2", "O_3", "O_4", "O_7_0", "O_7_1",
              "N4_1", "N4_2", "N4_3", "N2_1", "N2_0", "N1_1", "S")

ORDINARY_FAMILIES = FAMILY_IDS[:6]

BITANGENT_COUNT = {fid: 7 for fid in ORDINARY_FAMILIES}
BITANGENT_COUNT.update({"N4_1": 4, "N4_2": 4, "N4_3": 4, "N2_1": 2, "N2_0": 2, "N1_1": 1, "S": 1})

DECLARED_STRATUM = {fid: ORDINARY for fid in ORDINARY_FAMILIES}
DECLARED_STRATUM.update({"N4_1": RANK2, "N4_2": RANK2, "N4_3": RANK2,
                         "N2_1": RANK1, "N2_0": RANK1, "N1_1": TYPE13, "S": SUPERSINGULAR})

# level of the coefficients of Q in each family
Q_LEVEL = {fid: 1 for fid in FAMILY_IDS}
Q_LEVEL.update({"O_7_0": 7, "O_7_1": 7})

# degree of the field of definition of the bitangents (ordinary families)
BITANGENT_LEVEL = {"O_1": 1, "O_2": 2, "O_3": 3, "O_4": 4, "O_7_0": 7, "O_7_1": 7}


def parse_family(name: str) -> str:
    """Accept loose spellings such as 'O2', 'O_7,0', 'n4-1', 's'."""
    key = "".join(ch for ch in name.upper() if ch.isalnum())
    for fid in FAMILY_IDS:
        if key == "".join(ch for ch in fid.upper() if ch.isalnum()):
            return fid
    raise ValueError(f"unknown family {name!r}; expected one of {', '.join(FAMILY_IDS)}")


# ------------------------------------------------------------ small groups

def group_structure(elements, compose, identity) -> str:
    """A name for a small finite group given by its elements and product."""
    elements = list(elements)
    n = len(elements)
    if n == 1:
        return "1"

    def order_of(g):
        cur, o = g, 1
        while cur != identity:
            cur = compose(cur, g)
            o += 1
        return o

    orders = {g: order_of(g) for g in elements}
    abelian = all(compose(g, h) == compose(h, g) for g in elements for h in elements)
    if abelian:
        return "x".join(f"C{m}" for m in _invariant_factors(n, orders))
    counts = {}
    for o in orders.values():
        counts[o] = counts.get(o, 0) + 1
    if n == 6:
        return "S3"
    if n == 8:
        return "D8" if counts.get(4, 0) == 2 else "Q8"
    if n == 21:
        return "C7:C3"
    if n == 24 and counts.get(4, 0) == 6:
        return "S4"
    if n == 168:
        return "GL(3,2)"
    return f"nonabelian order {n}"


def _invariant_factors(n: int, orders: dict) -> list[int]:
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % r for r in range(2, p))]
    parts: list[list[int]] = []
    for p in primes:
        # c_i = #{g : g^(p^i) = 1} = p^(sum_j min(i, e_j))
        logs = [0]
        i = 1
        while True:
            c = sum(1 for o in orders.values() if (p ** i) % o == 0 and _is_p_power(o, p))
            e = round(np.log(c) / np.log(p))
            logs.append(e)
            if e == logs[-2]:
                break
            i += 1
        # number of cyclic factors of order >= p^i is logs[i] - logs[i-1]
        ge = [logs[i] - logs[i - 1] for i in range(1, len(logs))]
        exps = []
        for i in range(len(ge)):
            nxt = ge[i + 1] if i + 1 < len(ge) else 0
            exps.extend([i + 1] * (ge[i] - nxt))
        parts.append(sorted((p ** e for e in exps), reverse=True))
    width = max(len(x) for x in parts)
    factors = []
    for i in range(width):
        m = 1
        for x in parts:
            if i < len(x):
                m *= x[i]
        factors.append(m)
    return sorted(factors)


def _is_p_power(o: int, p: int) -> bool:
    while o % p == 0:
        o //= p
    return o == 1


@dataclass(frozen=True)
class AutInfo:
    order: int
    structure: str
    elements: tuple


# ------------------------------------------------------------ family data

@dataclass(frozen=True)
class NormalModel:
    family: str
    Q: tuple
    quartic: tuple


_S3_ROWS = {
    "1": ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    "tau": ((1, 0, 0), (0, 1, 0), (0, 1, 1)),
    "tau2": ((1, 0, 0), (0, 0, 1), (0, 1, 0)),
    "tau3": ((1, 0, 0), (0, 1, 1), (0, 0, 1)),
    "rho": ((1, 0, 0), (0, 0, 1), (0, 1, 1)),
    "rho2": ((1, 0, 0), (0, 1, 1), (0, 1, 0)),
}
_S3_BY_ROWS = {rows: name for name, rows in _S3_ROWS.items()}


def _s3_act(beta: str, Q):
    a, b, c, d, e, f = Q
    B = b ^ c ^ e
    if beta == "1":
        return Q
    if beta == "tau":
        return (a, B, c, d ^ f, e, f)
    if beta == "tau2":
        return (a, c, b, f, e, d)
    if beta == "tau3":
        return (a, b, B, d, e, d ^ f)
    if beta == "rho":
        return (a, B, b, d ^ f, e, d)
    if beta == "rho2":
        return (a, c, B, f, e, d ^ f)
    raise ValueError(beta)


def _s3_compose(g: str, h: str) -> str:
    return _S3_BY_ROWS[mat_mul(F2, _S3_ROWS[g], _S3_ROWS[h])]


class FamilyContext:
    """All thirteen families over one field k = GF(q)."""

    def __init__(self, tower: FieldTower):
        self.tower = tower
        self.k = tower.k
        self.q = tower.q
        self.gens = tower.find_family_generators()
        self.cube_reps, self.mu3 = tower.power_class_data(3)
        self.ninth_reps, self.mu9 = tower.power_class_data(9)
        self._members: dict[str, list[tuple]] = {}
        self._member_sets: dict[str, set] = {}
        self._actions: dict[str, GroupAction] = {}

    # lines of the ordinary models -----------------------------------------
    @cached_property
    def ordinary_lines(self) -> dict[str, tuple[int, tuple]]:
        """fid -> (level, (l1, l2, l3)) for the ordinary families."""
        T, g = self.tower, self.gens
        out = {"O_1": (1, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))}
        u2 = T.frobenius(g.u, 2)
        out["O_2"] = (2, ((g.u, u2, 0), (u2, g.u, 0), (0, 0, 1)))
        v = T.conjugates(g.o3_v, 3)
        out["O_3"] = (3, (tuple(v), tuple(v[1:] + v[:1]), tuple(v[2:] + v[:2])))
        w = T.conjugates(g.w, 4)
        out["O_4"] = (4, (tuple(w[:3]), tuple(w[1:4]), (w[2], w[3], w[0])))
        for fid, zeta in (("O_7_0", g.zeta0), ("O_7_1", g.zeta1)):
            z = T.conjugates(zeta, 7)
            out[fid] = (7, tuple(tuple(z[(i + j) % 7] for j in range(3)) for i in range(3)))
        return out

    def line_product(self, fid: str) -> tuple:
        """The quartic whose square-class the family's models share (not over k for O_7_*)."""
        if fid in ORDINARY_FAMILIES:
            d, rows = self.ordinary_lines[fid]
            P = four_line_product(self.tower.field(d), rows)
            return tuple(self.tower.descend(c, d, 1) for c in P)
        if fid == "N4_1":
            f = {(1, 2, 1): 1, (1, 1, 2): 1}
        elif fid == "N4_2":
            f = {(1, 3, 0): self.gens.r, (1, 2, 1): 1, (1, 1, 2): 1}
        elif fid == "N4_3":
            t = self.gens.n3_t
            f = {(1, 3, 0): 1, (1, 2, 1): t, (1, 1, 2): t ^ 1, (1, 0, 3): 1}
        elif fid in ("N2_1", "N2_0"):
            f = {(1, 3, 0): 1, (2, 1, 1): 1}
        elif fid in ("N1_1", "S"):
            f = {(1, 3, 0): 1, (3, 0, 1): 1}
        else:
            raise ValueError(fid)
        return dict_to_quartic({m: c for m, c in f.items() if c})

    def four_bitangent_lines(self, fid: str) -> tuple[int, tuple, tuple]:
        """(level, special line x, the three concurrent lines) for N4_*."""
        T, g = self.tower, self.gens
        if fid == "N4_1":
            return 1, (1, 0, 0), ((0, 1, 0), (0, 0, 1), (0, 1, 1))
        if fid == "N4_2":
            u2 = T.frobenius(g.u, 2)
            return 2, (1, 0, 0), ((0, 1, 0), (0, g.u, 1), (0, u2, 1))
        if fid == "N4_3":
            # y^3 + t y^2 z + (t+1) y z^2 + z^3 = prod (y + rho z)
            t = g.n3_t
            roots = T.roots_in_level([1, t ^ 1, t, 1], 3)
            return 3, (1, 0, 0), tuple((0, 1, r) for r in roots)
        raise ValueError(fid)

    # models -----------------------------------------------------------
    def model(self, fid: str, Q) -> tuple:
        """The quartic N_Q over k."""
        d = Q_LEVEL[fid]
        if d == 1:
            return quartic_add(square_of_quad(self.k, Q), self.line_product(fid))
        lvl, rows = self.ordinary_lines[fid]
        F = self.tower.field(lvl)
        full = quartic_add(square_of_quad(F, Q), four_line_product(F, rows))
        return tuple(self.tower.descend(c, lvl, 1) for c in full)

    def normal_model(self, fid: str, Q) -> NormalModel:
        return NormalModel(fid, tuple(Q), self.model(fid, Q))

    # members -----------------------------------------------------------
    def members(self, fid: str) -> list[tuple]:
        if fid not in self._members:
            pts = sorted(set(self._enumerate(fid)))
            self._members[fid] = pts
            self._member_sets[fid] = set(pts)
        return self._members[fid]

    def is_member(self, fid: str, Q) -> bool:
        self.members(fid)
        return tuple(Q) in self._member_sets[fid]

    def _all_k6(self):
        """Coordinate arrays a..f of all of k^6, in lexicographic order."""
        q = self.q
        idx = np.arange(q ** 6, dtype=np.int64)
        n = self.tower.n
        return [(idx >> (n * (5 - j))) & (q - 1) for j in range(6)]

    def _eval_all(self, cols, d: int, point) -> np.ndarray:
        """Q(point) in k_d for every Q given by coordinate arrays over k."""
        T = self.tower
        F = T.field(d)
        x, y, z = point
        monos = (F.sq(x), F.sq(y), F.sq(z), F.mul(x, y), F.mul(y, z), F.mul(z, x))
        out = np.zeros(cols[0].shape, dtype=np.int64)
        for col, mval in zip(cols, monos):
            table = np.array([F.mul(T.embed(c, 1, d), mval) for c in range(self.q)], dtype=np.int64)
            out ^= table[col]
        return out

    def _from_mask(self, cols, mask):
        stacked = np.stack([c[mask] for c in cols], axis=1)
        return [tuple(int(v) for v in row) for row in stacked]

    def _enumerate(self, fid: str):
        T, g, k, q = self.tower, self.gens, self.k, self.q
        if fid == "O_1":
            return list(descent_set(T, "1"))
        if fid in ("O_2", "O_3", "O_4"):
            cols = self._all_k6()
            a, b, c, d, e, f = cols
            if fid == "O_2":
                u2 = T.frobenius(g.u, 2)
                mask = (c != 0) & ((a ^ b ^ d) != 0) & ((a ^ b ^ c ^ d ^ e ^ f) != 1)
                mask &= self._eval_all(cols, 2, (g.u, u2, 0)) != 0
                mask &= self._eval_all(cols, 2, (g.u, u2, 1)) != 0
            elif fid == "O_3":
                v = T.conjugates(g.o3_v, 3)
                mask = self._eval_all(cols, 3, tuple(v)) != 0
                mask &= self._eval_all(cols, 3, tuple(x ^ 1 for x in v)) != 0
                mask &= (a ^ b ^ c ^ d ^ e ^ f) != 1
            else:
                F4 = T.field(4)
                t4 = T.embed(g.o4_t, 1, 4)
                w, al = g.w, g.alpha_k4
                p1 = (w ^ t4 ^ 1, al, w ^ al ^ 1)
                al2 = T.frobenius(g.alpha, 2)
                mask = self._eval_all(cols, 4, p1) != 0
                mask &= self._eval_all(cols, 2, (g.alpha, T.embed(g.o4_t, 1, 2), al2)) != 0
                mask &= (a ^ c ^ f) != k.sq(g.o4_t)
                del F4
            return self._from_mask(cols, mask)
        if fid in ("O_7_0", "O_7_1"):
            space = self.o7_space(fid)
            _, rows = self.ordinary_lines[fid]
            F7 = T.field(7)
            P = cross(F7, rows[0], rows[1])
            # Q -> Q(P) is F2-linear, so evaluate it on the basis only
            at_p = lambda Q: form_eval(F7, quad_to_dict(Q), P)
            const = at_p(space.point(0))
            cols = [at_p(space.point(1 << (space.dim - 1 - i))) ^ const for i in range(space.dim)]
            keys = np.arange(1 << space.dim, dtype=np.int64)
            good = keys[AffineKeyMap(const, cols)(keys) != 0]
            return [space.point(int(key)) for key in good]
        units = range(1, q)
        allk = range(q)
        if fid == "N4_1":
            return [(a, b, c, d, e, f) for a in self.cube_reps for b in units for c in units
                    for e in allk if b ^ c ^ e for d in allk for f in allk]
        if fid == "N4_2":
            r = g.r
            return [(a, b, c, d, e, f) for a in self.cube_reps for c in units for b in allk
                    for e in allk if (b, e) != (k.mul(c, r), c) for d in allk for f in allk]
        if fid == "N4_3":
            return [(a, b, c, d, e, f) for a in self.cube_reps for b in allk for c in allk
                    for e in allk if (b, c, e) != (0, 0, 0) for d in allk for f in allk]
        if fid == "N2_1":
            r0 = g.r
            return [(a, b, c, d0, e, f) for a in self.cube_reps for c in units for f in units
                    for d0 in (0, k.div(r0, f)) for b in allk for e in allk]
        if fid == "N2_0":
            return [(a, b, c, 0, e, 0) for a in self.cube_reps for c in units
                    for b in allk for e in allk]
        if fid == "N1_1":
            return [(a, b, c, 0, e, 0) for c in self.ninth_reps for e in units
                    for a in allk for b in allk]
        if fid == "S":
            return [(a, 0, c, d, 0, f) for c in self.ninth_reps for a in allk
                    for d in allk for f in allk]
        raise ValueError(fid)

    def o7_space(self, fid: str) -> AffineSpace:
        """Solutions Q in (k_7)^6 of Q + Q' = l' l''."""
        T = self.tower
        F7 = T.field(7)
        m = F7.m
        _, rows = self.ordinary_lines[fid]
        target = dict_to_quad(form_mul(F7, linear(*rows[1]), linear(*rows[2])))
        images = []
        for j in range(6):
            for bit in range(m):
                Q = tuple((1 << bit) if t == j else 0 for t in range(6))
                images.append(pack(tuple(c ^ T.frobenius(c, 7) for c in Q), m))
        order = [m * (5 - j) + bit for j in range(6) for bit in range(m)]

        def to_vector(x):
            v = 0
            for i, pos in enumerate(order):
                if (x >> i) & 1:
                    v |= 1 << pos
            return v

        sol = solve_f2(images, pack(target, m))
        if sol is None:
            raise AssertionError("Q + Q' = l'l'' has no solution")
        return AffineSpace(m, to_vector(sol), [to_vector(x) for x in f2_kernel(images)])

    def klein_form(self, fid: str) -> tuple:
        """l^2 + l'^2 + l''^2 + l l' + l' l'' + l l'' for the O_7 families."""
        _, rows = self.ordinary_lines[fid]
        F7 = self.tower.field(7)
        ls = [linear(*r) for r in rows]
        f = form_add(*(form_mul(F7, x, x) for x in ls),
                     form_mul(F7, ls[0], ls[1]), form_mul(F7, ls[1], ls[2]), form_mul(F7, ls[0], ls[2]))
        return dict_to_quad(f)

    # actions -----------------------------------------------------------
    def elements(self, fid: str) -> list:
        T = self.tower
        if fid == "O_1":
            return list(range(168))
        if fid == "O_2":
            return ["1", "g", "t", "gt", "r", "r3", "rt", "tr"]
        if fid == "O_3":
            return [0, 1, 2]
        if fid == "O_4":
            return [0, 1, 2, 3]
        if fid in ("O_7_0", "O_7_1"):
            return list(range(7))
        if fid == "N4_1":
            return [(b, t) for b in _S3_ROWS for t in self.mu3]
        if fid == "N4_2":
            return [(b, t) for b in ("1", "tau") for t in self.mu3]
        if fid == "N4_3":
            return [(b, t) for b in ("1", "rho", "rho2") for t in self.mu3]
        if fid == "N2_1":
            return [(t, flip) for t in self.mu3 for flip in (0, 1)]
        if fid == "N2_0":
            return list(self.mu3)
        if fid == "N1_1":
            return list(self.mu9)
        if fid == "S":
            return [(t, v) for t in self.mu9 for v in range(T.q)]
        raise ValueError(fid)

    def identity(self, fid: str):
        return {"O_1": gamma_group().identity, "O_2": "1", "O_3": 0, "O_4": 0,
                "O_7_0": 0, "O_7_1": 0, "N4_1": ("1", 1), "N4_2": ("1", 1),
                "N4_3": ("1", 1), "N2_1": (1, 0), "N2_0": 1, "N1_1": 1, "S": (1, 0)}[fid]

    def compose(self, fid: str, g, h):
        """The element acting as g after h."""
        k = self.k
        if fid == "O_1":
            return gamma_group().mul[g][h]
        if fid == "O_2":
            G = gamma_group()
            idx = {lab: G.element(rows) for lab, rows in _o2_matrices().items()}
            back = {v: lab for lab, v in idx.items()}
            return back[G.mul[idx[g]][idx[h]]]
        if fid == "O_3":
            return (g + h) % 3
        if fid == "O_4":
            return (g + h) % 4
        if fid in ("O_7_0", "O_7_1"):
            return (g + h) % 7
        if fid.startswith("N4"):
            return (_s3_compose(g[0], h[0]), k.mul(g[1], h[1]))
        if fid == "N2_1":
            return (k.mul(g[0], h[0]), g[1] ^ h[1])
        if fid in ("N2_0", "N1_1"):
            return k.mul(g, h)
        if fid == "S":
            # gamma_{t',0,v'} gamma_{t,0,v} = gamma_{t't, 0, v + v' t^12}
            (t2, v2), (t1, v1) = g, h
            return (k.mul(t2, t1), v1 ^ k.mul(v2, k.pow(t1, 12)))
        raise ValueError(fid)

    def act(self, fid: str, g, Q) -> tuple:
        T, k = self.tower, self.k
        if fid == "O_1":
            return twisted_act(g, Q)
        if fid == "O_2":
            return _o2_act(g, Q)
        if fid == "O_3":
            for _ in range(g):
                a, b, c, d, e, f = Q
                Q = (b, c, a, e, f, d)
            return tuple(Q)
        if fid == "O_4":
            for _ in range(g):
                a, b, c, d, e, f = Q
                Q = (a ^ b ^ c ^ d ^ e ^ f, a, b, d ^ f, d, d ^ e)
            return tuple(Q)
        if fid in ("O_7_0", "O_7_1"):
            for _ in range(g):
                a, b, c, d, e, f = (T.frobenius(x, 7) for x in Q)
                if fid == "O_7_0":
                    Q = (a ^ c ^ f, a, b, f, d, d ^ e)
                else:
                    Q = (b ^ c ^ e, a, b, d ^ f, d, e)
            return tuple(Q)
        if fid.startswith("N4"):
            beta, t = g
            a, b, c, d, e, f = _s3_act(beta, Q)
            t2 = k.sq(t)
            return (a, k.mul(t2, b), k.mul(t2, c), k.mul(t, d), k.mul(t2, e), k.mul(t, f))
        if fid == "N2_1":
            t, flip = g
            a, b, c, d0, e, f = Q
            u = k.inv(k.sq(f)) if flip else 0
            t2 = k.sq(t)
            bb = b ^ k.mul(e, u) ^ k.mul(c, k.sq(u))
            return (a, k.mul(bb, t2), k.mul(c, t), k.div(d0, t2), e, k.mul(f, t2))
        if fid == "N2_0":
            t = g
            a, b, c, d, e, f = Q
            return (a, k.mul(b, k.sq(t)), k.mul(c, t), 0, e, 0)
        if fid == "N1_1":
            t = g
            a, b, c, d, e, f = Q
            return (k.mul(a, k.pow(t, 3)), k.mul(b, k.sq(t)), c, 0, k.mul(e, t), 0)
        if fid == "S":
            t, v = g
            a, b, c, d, e, f = Q
            t3 = k.pow(t, 3)
            aa = a ^ k.mul(c, k.sq(v)) ^ k.mul(f, v) ^ k.sqrt(v)
            return (k.mul(aa, t3), 0, c, k.div(d, k.sq(t)), 0, k.div(f, t3))
        raise ValueError(fid)

    def action(self, fid: str) -> GroupAction:
        if fid not in self._actions:
            pts = self.members(fid)
            if fid in ("O_7_0", "O_7_1"):
                space = self.o7_space(fid)
            elif fid == "N2_1":
                space = None        # the acting element depends on f
            else:
                space = AffineSpace.full(self.tower.n)
            self._actions[fid] = GroupAction(
                self.elements(fid), lambda g, Q, fid=fid: self.act(fid, g, Q), pts,
                space=space, compose=lambda g, h, fid=fid: self.compose(fid, g, h),
                identity=self.identity(fid), name=fid)
        return self._actions[fid]

    # projectivities realising the group elements --------------------------
    def element_matrix(self, fid: str, g, Q=None) -> tuple[int, tuple]:
        """(level, rows) of the projectivity by which g moves the models.

        For N2_1 the matrix depends on the model Q the element acts on.
        """
        k = self.k
        if fid == "N2_1":
            t, flip = g
            return 1, self.n2_matrix(t, k.inv(k.sq(Q[5])) if flip else 0)
        if fid == "N2_0":
            return 1, self.n2_matrix(g, 0)
        if fid == "N1_1":
            return 1, self.n1_matrix(g, 0, 0)
        if fid == "S":
            return 1, self.n1_matrix(g[0], 0, g[1])
        if fid == "O_1":
            return 1, gamma_group().mats[g]
        if fid == "O_2":
            return 1, _o2_matrices()[g]
        if fid in ("O_3", "O_4", "O_7_0", "O_7_1"):
            base = {"O_3": "3", "O_4": "4", "O_7_0": "7_0", "O_7_1": "7_1"}[fid]
            G = gamma_group()
            gen = class_representative(base)
            if fid != "O_3":
                gen = G.element(transpose(G.mats[gen]))
            cur = G.identity
            for _ in range(g):
                cur = G.mul[cur][gen]
            return 1, G.mats[cur]
        if fid.startswith("N4"):
            beta, t = g
            ti = k.inv(t)
            diag = ((k.pow(t, 3), 0, 0), (0, ti, 0), (0, 0, ti))
            return 1, mat_mul(k, diag, _S3_ROWS[beta])
        raise ValueError(f"no fixed matrix for elements of {fid}")

    def n2_matrix(self, t: int, u: int) -> tuple:
        k = self.k
        t5 = k.inv(k.pow(t, 5))
        return ((k.pow(t, 3), 0, 0), (0, k.inv(t), 0), (0, k.mul(u, t5), t5))

    def n1_matrix(self, t: int, u: int, v: int) -> tuple:
        k = self.k
        ti, t9 = k.inv(t), k.inv(k.pow(t, 9))
        return ((k.pow(t, 3), 0, 0), (k.mul(ti, u), ti, 0),
                (k.mul(t9, v), k.mul(t9, k.sq(u)), t9))

    # automorphism tables ---------------------------------------------------
    def aut_table(self, fid: str, Q, published: bool = False) -> AutInfo | None:
        """Aut_k(N_Q) read off the closed case tables (None for O_1).

        With ``published=True`` the four-bitangent tables are taken
        literally; by default they also list the order-3 automorphisms
        (rho, t), t a primitive cube root of unity, that exist when
        q = 1 mod 3 (see ``twisted_rotation``).
        """
        k = self.k
        a, b, c, d, e, f = Q
        if fid == "O_1":
            return None
        if fid in ("N4_1", "N4_3") and not published:
            t = self.twisted_rotation(Q)
            if t is not None:
                return AutInfo(3, "C3", (("1", 1), ("rho", t), ("rho2", k.sq(t))))
        if fid == "O_2":
            S = a ^ b ^ c ^ d ^ e ^ f
            if a == b and d == 1 and c == e == f:
                return AutInfo(8, "D8", ("1", "g", "t", "gt", "r", "r3", "rt", "tr"))
            if a == b and d == 1 and e == f != c:
                return AutInfo(4, "C2xC2", ("1", "g", "tr", "rt"))
            if a == b and d != 1 and c == e == f:
                return AutInfo(4, "C2xC2", ("1", "g", "t", "gt"))
            if a == b ^ e ^ f and d == 1 and e != f:
                return AutInfo(2, "C2", ("1", "tr"))
            if a == b and (d ^ e ^ f) == 1 and e != f:
                return AutInfo(2, "C2", ("1", "rt"))
            if c == e == f and a != b:
                return AutInfo(2, "C2", ("1", "t"))
            if e == f == a ^ b ^ c and a != b:
                return AutInfo(2, "C2", ("1", "gt"))
            if a == b and e == f != c and d != 1:
                return AutInfo(2, "C2", ("1", "g"))
            del S
            return AutInfo(1, "1", ("1",))
        if fid == "O_3":
            if a == b == c and d == e == f:
                return AutInfo(3, "C3", (0, 1, 2))
            return AutInfo(1, "1", (0,))
        if fid == "O_4":
            if a == b == c and f == 0 and d == e:
                return AutInfo(4, "C4", (0, 1, 2, 3))
            if a == c and (d ^ e ^ f) == 0 and (f != 0 or b != c):
                return AutInfo(2, "C2", (0, 2))
            return AutInfo(1, "1", (0,))
        if fid in ("O_7_0", "O_7_1"):
            if tuple(Q) == self.klein_form(fid):
                return AutInfo(7, "C7", tuple(range(7)))
            return AutInfo(1, "1", (0,))
        if fid == "N4_1":
            if b == c == e and d == 0 and f == 0:
                return AutInfo(6, "S3", tuple((x, 1) for x in _S3_ROWS))
            # the literal table asks d != 0 (resp. d = f != 0, f != 0); the
            # involution is present without that restriction
            lax = not published
            if c == e and f == 0 and (d != 0 or lax):
                return AutInfo(2, "C2", (("1", 1), ("tau", 1)))
            if b == c and d == f and (d != 0 or lax):
                return AutInfo(2, "C2", (("1", 1), ("tau2", 1)))
            if b == e and d == 0 and (f != 0 or lax):
                return AutInfo(2, "C2", (("1", 1), ("tau3", 1)))
            return AutInfo(1, "1", (("1", 1),))
        if fid == "N4_2":
            if c == e and f == 0:
                return AutInfo(2, "C2", (("1", 1), ("tau", 1)))
            return AutInfo(1, "1", (("1", 1),))
        if fid == "N4_3":
            if b == c == e and d == 0 and f == 0:
                return AutInfo(3, "C3", (("1", 1), ("rho", 1), ("rho2", 1)))
            return AutInfo(1, "1", (("1", 1),))
        if fid == "N2_1":
            if e == k.div(c, k.sq(f)):
                return AutInfo(2, "C2", ((1, 0), (1, 1)))
            return AutInfo(1, "1", ((1, 0),))
        if fid == "N2_0":
            return AutInfo(1, "1", (1,))
        if fid == "N1_1":
            return AutInfo(1, "1", (1,))
        if fid == "S":
            T = self.tower
            if d != 0:
                els = tuple((1, v) for v in T.additive_kernel(c, f))
            elif f != 0:
                els = tuple((t, v) for t in self.mu3 for v in T.additive_kernel(c, f))
            else:
                ker = T.additive_kernel(c, 0)
                els = [(t, v) for t in self.mu3 for v in ker]
                for t in self.mu9:
                    t3 = k.pow(t, 3)
                    if t3 == 1:
                        continue
                    target = k.mul(t3, a)
                    els.extend((t, v) for v in range(self.q) if _E(k, c, 0, v) == target)
                els = tuple(els)
            structure = group_structure(els, lambda g, h: self.compose("S", g, h), (1, 0))
            return AutInfo(len(els), structure, els)
        raise ValueError(fid)

    def twisted_rotation(self, Q):
        """t in mu_3(k), t != 1, with (rho, t) fixing Q, if there is one.

        (rho, t) fixes Q exactly when e = 0, c = t^2 b and f = t d.
        """
        k = self.k
        a, b, c, d, e, f = Q
        if e:
            return None
        for t in self.mu3:
            if t != 1 and c == k.mul(k.sq(t), b) and f == k.mul(t, d):
                return t
        return None

    def aut_k(self, fid: str, Q) -> AutInfo:
        """Aut_k(N_Q) as the stabilizer of Q under the family action."""
        A = self.action(fid)
        stab = A.stabilizer(Q)
        return AutInfo(len(stab), group_structure(stab, A.compose, A.identity), tuple(stab))

    # counting -----------------------------------------------------------
    def class_count(self, fid: str, threads: int = 1) -> int:
        return self.action(fid).burnside_count(threads)

    def orbits(self, fid: str):
        return self.action(fid).orbits()

    # classification of arbitrary quartics ----------------------------------
    def reduce_to_family(self, qt) -> tuple[str, tuple, ProjMap]:
        """(family, orbit representative Q, W) with act_on_form(W, qt) proportional to N_Q."""
        T = self.tower
        if not is_smooth(T, qt):
            raise ValueError("the quartic is singular")
        bts = find_bitangents(T, qt)
        n = len(bts)
        if n == 7:
            found = self._search_ordinary(qt, bts)
        elif n == 4:
            found = self._search_four(qt, bts)
        elif n == 2:
            found = self._search_two(qt, bts)
        elif n == 1:
            found = self._search_one(qt, bts)
        else:
            raise ValueError(f"anomalous bitangent count {n}")
        if not found:
            raise AssertionError("no normal model found for a smooth quartic")
        fids = {fid for fid, _, _ in found}
        if len(fids) != 1:
            raise AssertionError(f"quartic reduces to several families {sorted(fids)}")
        fid, Q, W = min(found, key=lambda item: item[1])
        return self._canonicalize(fid, Q, W, qt)

    def _canonicalize(self, fid, Q, W, qt):
        """Move (Q, W) to the orbit minimum, adjusting the witness."""
        k = self.k
        best = min((self.act(fid, g, Q), g) for g in self.elements(fid))
        R, g = best
        if R == Q:
            return fid, Q, W
        target = self.model(fid, R)
        level, M = self.element_matrix(fid, g, Q)
        for cand in (M, mat_inv(k, M)):
            rows = mat_mul(k, W.rows, cand)
            if proportional(k, transform(k, qt, rows), target):
                return fid, R, ProjMap(k, rows)
        raise AssertionError(f"no witness for the move {Q} -> {R} in {fid}")

    def _accept(self, fid, qt, rows, level, out):
        """If qt composed with rows is a model of fid, record (fid, Q, W)."""
        T = self.tower
        F = T.field(level)
        lead = next(c for r in rows for c in r if c)
        rows = tuple(tuple(F.div(c, lead) for c in r) for r in rows)
        try:
            rows_k = tuple(tuple(T.descend(c, level, 1) for c in r) for r in rows)
        except ValueError:
            return
        k = self.k
        if mat_det(k, rows_k) == 0:
            return
        G = transform(k, qt, rows_k)
        lam = proportional(k, nonsquare_part(G), self.nonsquare_target(fid))
        if not lam:
            return
        scaled = quartic_scale(k, G, k.inv(lam))
        if Q_LEVEL[fid] == 1:
            Q = quartic_sqrt(k, quartic_add(scaled, self.line_product(fid)))
        else:
            lvl, lines = self.ordinary_lines[fid]
            Fd = T.field(lvl)
            lifted = tuple(T.embed(c, 1, lvl) for c in scaled)
            Q = quartic_sqrt(Fd, quartic_add(lifted, four_line_product(Fd, lines)))
        if Q is not None and self.is_member(fid, Q):
            out.append((fid, tuple(Q), ProjMap(k, rows_k)))

    def nonsquare_target(self, fid: str) -> tuple:
        """The non-square monomials shared by every model of the family, over k."""
        if Q_LEVEL[fid] == 1:
            return nonsquare_part(self.line_product(fid))
        lvl, rows = self.ordinary_lines[fid]
        P = nonsquare_part(four_line_product(self.tower.field(lvl), rows))
        return tuple(self.tower.descend(c, lvl, 1) for c in P)

    def _search_ordinary(self, qt, bts):
        T = self.tower
        lines, lvl = _lift_lines(T, bts)
        fids = [f for f in ORDINARY_FAMILIES if BITANGENT_LEVEL[f] == lvl]
        out = []
        for fid in fids:
            d, brows = self.ordinary_lines[fid]
            F = T.field(d)
            src_lines = [tuple(T.embed(c, lvl, d) for c in ln) for ln in lines]
            b4 = tuple(x ^ y ^ z for x, y, z in zip(*brows))
            dst = [brows[0], brows[1], brows[2], b4]
            for i, j, l in permutations(range(7), 3):
                m1, m2, m3 = src_lines[i], src_lines[j], src_lines[l]
                if mat_det(F, (m1, m2, m3)) == 0:
                    continue
                for s in range(7):
                    if s in (i, j, l):
                        continue
                    m4 = src_lines[s]
                    if any(mat_det(F, trip) == 0 for trip in ((m1, m2, m4), (m1, m3, m4), (m2, m3, m4))):
                        continue
                    Wt = map_from_correspondence(F, [m1, m2, m3, m4], dst)
                    self._accept(fid, qt, transpose(Wt.rows), d, out)
        return out

    def _search_four(self, qt, bts):
        T = self.tower
        lines, lvl = _lift_lines(T, bts)
        F = T.field(lvl)
        # the special bitangent is the one off the common point of the other three
        special = None
        for i in range(4):
            rest = [lines[j] for j in range(4) if j != i]
            if mat_det(F, tuple(rest)) == 0:
                special = i
                break
        if special is None:
            raise AssertionError("four bitangents without a concurrent triple")
        m0 = lines[special]
        triple = [lines[j] for j in range(4) if j != special]
        out = []
        k = self.k
        for fid in ("N4_1", "N4_2", "N4_3"):
            d, x_line, blines = self.four_bitangent_lines(fid)
            e = _common_level(T, lvl, d)
            Fe = T.field(e)
            up = lambda v, src: tuple(T.embed(c, src, e) for c in v)
            M0 = up(m0, lvl)
            B = [up(b, d) for b in blines]
            X = up(x_line, d)
            for perm in permutations(range(3)):
                ma, mb, mc = (up(triple[p], lvl) for p in perm)
                # mc = alpha ma + beta mb; B3 = alpha' B1 + beta' B2
                al, be = _pencil_coords(Fe, ma, mb, mc)
                al2, be2 = _pencil_coords(Fe, B[0], B[1], B[2])
                if None in (al, be, al2, be2) or 0 in (al, be, al2, be2):
                    continue
                lam1 = Fe.div(Fe.mul(al2, be), Fe.mul(al, be2))
                # the scale of the special line is only determined up to k_e*
                for s_e in range(1, Fe.order):
                    src = (M0, ma, mb)
                    dst = (tuple(Fe.mul(s_e, c) for c in X), tuple(Fe.mul(lam1, c) for c in B[0]), B[1])
                    try:
                        S_inv = mat_inv(Fe, transpose(src))
                    except ValueError:
                        continue
                    A = mat_mul(Fe, transpose(dst), S_inv)     # A m_i = target_i
                    self._accept(fid, qt, transpose(A), e, out)
        del k
        return out

    def _search_two(self, qt, bts):
        T, k, q = self.tower, self.k, self.q
        if any(b.level != 1 for b in bts):
            raise AssertionError("two bitangents not both rational")
        out = []
        vectors = [v for v in product(range(q), repeat=3) if any(v)]
        for mx, my in ((bts[0].line, bts[1].line), (bts[1].line, bts[0].line)):
            for s in range(1, q):
                L2 = tuple(k.mul(s, c) for c in my)
                for L3 in vectors:
                    L = (mx, L2, L3)
                    if mat_det(k, L) == 0:
                        continue
                    W = mat_inv(k, L)
                    for fid in ("N2_1", "N2_0"):
                        self._accept(fid, qt, W, 1, out)
        return out

    def _search_one(self, qt, bts):
        T, k, q = self.tower, self.k, self.q
        (b,) = bts
        if b.level != 1:
            raise AssertionError("a single bitangent must be rational")
        out = []
        vectors = [v for v in product(range(q), repeat=3) if any(v)]
        mx = b.line
        for L2 in vectors:
            if mat_det(k, (mx, L2, (0, 0, 1))) == 0 and mat_det(k, (mx, L2, (0, 1, 0))) == 0 \
                    and mat_det(k, (mx, L2, (1, 0, 0))) == 0:
                continue
            for L3 in vectors:
                L = (mx, L2, L3)
                if mat_det(k, L) == 0:
                    continue
                W = mat_inv(k, L)
                for fid in ("N1_1", "S"):
                    self._accept(fid, qt, W, 1, out)
        return out

    # supersingular quotient -------------------------------------------------
    def supersingular_quotient(self, Q) -> "EllipticQuotient":
        """The genus-one quotient c u^2 + v^-1 u = y^3 + d y^2 + a of an S-model."""
        a, b, c, d, e, f = Q
        if b or e or not c:
            raise ValueError("not a model of the family S")
        T = self.tower
        # nonzero roots of c z^4 + f z^2 + z, i.e. roots of c v^3 + f v + 1
        for lvl in (1, 2, 3):
            roots = T.roots_in_level([1, f, 0, c], lvl)
            if roots:
                v = roots[0]
                F = T.field(lvl)
                return EllipticQuotient(lvl, T.embed(c, 1, lvl), F.inv(v), T.embed(d, 1, lvl),
                                        T.embed(a, 1, lvl), v, T.embed(f, 1, lvl))
        raise AssertionError("the cubic c v^3 + f v + 1 has no root in k_3")


@dataclass(frozen=True)
class EllipticQuotient:
    level: int
    c: int
    v_inv: int
    d: int
    a: int
    v: int
    f: int


def quotient_identity_holds(F: GF2m, c: int, f: int, v: int) -> bool:
    """c u^2 + v^-1 u == c z^4 + f z^2 + z as polynomials in z, for u = z (z + v)."""
    u = [0, v, 1]                                   # z^2 + v z
    lhs = upoly.add(F, upoly.scale(F, upoly.mul(F, u, u), c), upoly.scale(F, u, F.inv(v)))
    rhs = upoly.trim([0, 1, f, 0, c])
    return lhs == rhs


def _E(k: GF2m, c: int, f: int, x: int) -> int:
    return k.mul(c, k.sq(x)) ^ k.mul(f, x) ^ k.sqrt(x)


def _o2_matrices() -> dict:
    G = gamma_group()
    from .plane import GAMMA_REPS, RHO, TAU
    g = G.element(GAMMA_REPS["2"])
    t = G.element(TAU)
    r = G.element(RHO)
    mul = G.mul
    els = {"1": G.identity, "g": g, "t": t, "gt": mul[g][t], "r": r,
           "r3": mul[mul[r][r]][r], "rt": mul[r][t], "tr": mul[t][r]}
    return {lab: G.mats[i] for lab, i in els.items()}


def _o2_act(g: str, Q):
    a, b, c, d, e, f = Q
    S1 = a ^ b ^ c ^ d ^ e ^ f ^ 1
    if g == "1":
        return tuple(Q)
    if g == "g":
        return (b, a, c, d, f, e)
    if g == "t":
        return (a ^ c ^ f, b ^ c ^ e, c, d ^ e ^ f, e, f)
    if g == "gt":
        return (b ^ c ^ e, a ^ c ^ f, c, d ^ e ^ f, f, e)
    if g == "r":
        return (b ^ c ^ e, a ^ c ^ f, S1, d ^ e ^ f, d ^ e ^ 1, d ^ f ^ 1)
    if g == "r3":
        return (a ^ c ^ f, b ^ c ^ e, S1, d ^ e ^ f, d ^ f ^ 1, d ^ e ^ 1)
    if g == "rt":
        return (b, a, S1, d, d ^ f ^ 1, d ^ e ^ 1)
    if g == "tr":
        return (a, b, S1, d, d ^ e ^ 1, d ^ f ^ 1)
    raise ValueError(g)


def _lift_lines(T: FieldTower, bts):
    levels = {b.level for b in bts}
    target = next(d for d in T.levels if all(d % lv == 0 for lv in levels))
    lines = [tuple(T.embed(c, b.level, target) for c in b.line) for b in bts]
    return lines, target


def _common_level(T: FieldTower, a: int, b: int) -> int:
    return next(d for d in T.levels if d % a == 0 and d % b == 0)


def _pencil_coords(F: GF2m, p, r, s):
    """(alpha, beta) with s = alpha p + beta r, or (None, None)."""
    # pick two coordinates where p and r are independent
    for i in range(3):
        for j in range(i + 1, 3):
            det = F.mul(p[i], r[j]) ^ F.mul(p[j], r[i])
            if det:
                al = F.div(F.mul(s[i], r[j]) ^ F.mul(s[j], r[i]), det)
                be = F.div(F.mul(p[i], s[j]) ^ F.mul(p[j], s[i]), det)
                if all((F.mul(al, p[t]) ^ F.mul(be, r[t])) == s[t] for t in range(3)):
                    return al, be
                return None, None
    return None, None


def enumerate_family(ctx: FamilyContext, fid: str):
    """Stream the normal models of a family."""
    for Q in ctx.members(fid):
        yield ctx.normal_model(fid, Q)


def family_action(ctx: FamilyContext, fid: str) -> GroupAction:
    return ctx.action(fid)
