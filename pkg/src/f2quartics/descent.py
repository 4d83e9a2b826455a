"""Twisted GL(3, F2)-action on quadratic forms, descent data and orbit counting.

Quadratic forms are sextuples (a, b, c, d, e, f) of ints of some tower
level.  The group Gamma = GL(3, F2) acts on the left by

    rho(Q) = Q^(rho^-1) + H_(rho^-1),

where H_g is the quadratic form with l1 l2 l3 (l1 + l2 + l3) =
xyz(x + y + z) + H_g^2 for the rows l1, l2, l3 of g.  Since every
coefficient of g lies in F2, Q -> Q^g is F2-linear on the coefficients,
so each group element is stored as six xor masks plus a constant.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .gf2tower import FieldTower, GF2m, f2_echelon, f2_kernel, f2_span, solve_f2
from .plane import (
    F2,
    GAMMA_REPS,
    ProjMap,
    dict_to_quad,
    form_add,
    form_mul,
    gamma_group,
    linear,
    quad_to_dict,
    substitute,
)
from .quartic import dict_to_quartic, is_admissible, quartic_add, quartic_sqrt, rhs

CLASS_LABELS = tuple(GAMMA_REPS)            # "1", "2", "3", "4", "7_0", "7_1"
CLASS_ORDER = {"1": 1, "2": 2, "3": 3, "4": 4, "7_0": 7, "7_1": 7}


# ------------------------------------------------------------ cocycle and action

def _rows_of(gamma) -> tuple:
    if isinstance(gamma, ProjMap):
        return gamma.rows
    if isinstance(gamma, int):
        return gamma_group().mats[gamma]
    return tuple(tuple(r) for r in gamma)


def _index_of(gamma) -> int:
    if isinstance(gamma, int):
        return gamma
    return gamma_group().element(_rows_of(gamma))


def four_line_product(F: GF2m, rows) -> tuple:
    """The quartic l1 l2 l3 (l1 + l2 + l3) for the rows of a 3x3 matrix."""
    ls = [linear(*r) for r in rows]
    total = form_add(*ls)
    prod = form_mul(F, form_mul(F, ls[0], ls[1]), form_mul(F, ls[2], total))
    return dict_to_quartic(prod)


def cocycle_H(gamma, field: GF2m = F2, base: tuple | None = None) -> tuple:
    """H with l1 l2 l3 (l1+l2+l3) = base + H^2 (base defaults to xyz(x+y+z))."""
    rows = _rows_of(gamma)
    if base is None:
        base = rhs(7)
    diff = quartic_add(four_line_product(field, rows), base)
    H = quartic_sqrt(field, diff)
    if H is None:
        raise AssertionError("line product differs from the base by a non-square")
    return H


def _right_action_masks(rows) -> tuple[int, ...]:
    """Masks m_i with (Q^g)_i = xor of Q_j over the bits j of m_i."""
    masks = [0] * 6
    for j in range(6):
        unit = tuple(1 if t == j else 0 for t in range(6))
        img = dict_to_quad(substitute(F2, quad_to_dict(unit), rows))
        for i in range(6):
            if img[i]:
                masks[i] |= 1 << j
    return tuple(masks)


@lru_cache(maxsize=None)
def twist_table() -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Per Gamma index: (masks, constant) of the twisted action Q -> rho(Q)."""
    G = gamma_group()
    right = [_right_action_masks(G.mats[i]) for i in range(len(G))]
    H = [cocycle_H(i) for i in range(len(G))]
    return tuple((right[G.inv[i]], H[G.inv[i]]) for i in range(len(G)))


def _apply_masks(masks, const, Q) -> tuple:
    out = []
    for m, h in zip(masks, const):
        acc = h
        j = 0
        while m:
            if m & 1:
                acc ^= Q[j]
            m >>= 1
            j += 1
        out.append(acc)
    return tuple(out)


def right_act(gamma, Q) -> tuple:
    """Q^gamma = Q(l1, l2, l3), for gamma with F2 entries."""
    return _apply_masks(_right_action_masks(_rows_of(gamma)), (0,) * 6, Q)


def twisted_act(rho, Q) -> tuple:
    masks, const = twist_table()[_index_of(rho)]
    return _apply_masks(masks, const, Q)


# ------------------------------------------------------------ descent data

@dataclass(frozen=True)
class DescentDatum:
    Q: tuple
    gamma: int      # index into gamma_group()
    level: int

    def is_valid(self, tower: FieldTower) -> bool:
        F = tower.field(self.level)
        if not is_admissible(F, 7, self.Q):
            return False
        frob = tuple(tower.frobenius(c, self.level) for c in self.Q)
        return twisted_act(self.gamma, self.Q) == frob


def class_representative(label: str) -> int:
    return gamma_group().element(GAMMA_REPS[label])


def satisfies_descent(tower: FieldTower, label: str, Q) -> bool:
    return DescentDatum(tuple(Q), class_representative(label), CLASS_ORDER[label]).is_valid(tower)


def descent_set(tower: FieldTower, label: str) -> Iterable[tuple]:
    """Stream D_gamma for a class representative, from its explicit parametrization.

    Elements are sextuples of the level d = order of gamma.
    """
    d = CLASS_ORDER[label]
    if label == "1":
        yield from _stream_rational(tower)
    elif label == "2":
        yield from _stream_order2(tower)
    elif label == "3":
        yield from _stream_order3(tower)
    elif label == "4":
        yield from _stream_order4(tower)
    elif label in ("7_0", "7_1"):
        yield from _stream_order7(tower, label)
    else:
        raise ValueError(f"unknown class label {label!r} (level {d})")


def _stream_rational(tower: FieldTower):
    q = tower.q
    units = range(1, q)
    for a, b, c in product(units, repeat=3):
        for d in range(q):
            if a ^ b ^ d == 0:
                continue
            for e in range(q):
                if b ^ c ^ e == 0:
                    continue
                for f in range(q):
                    if a ^ c ^ f and (a ^ b ^ c ^ d ^ e ^ f) != 1:
                        yield (a, b, c, d, e, f)


def _stream_order2(tower: FieldTower):
    q, K2 = tower.q, tower.field(2)
    up = [tower.embed(x, 1, 2) for x in range(q)]
    frob = [tower.frobenius(x, 2) for x in range(K2.order)]
    trace = [tower.rel_trace(x, 2, 1) for x in range(K2.order)]
    for a in range(1, K2.order):
        ta = trace[a]
        for c in range(1, q):
            cc = up[c]
            for d in range(q):
                if d == ta:
                    continue
                for e in range(K2.order):
                    if a ^ cc ^ e and (c ^ d ^ ta ^ trace[e]) != 1:
                        yield (a, frob[a], cc, up[d], frob[e], e)


def _stream_order3(tower: FieldTower):
    K3 = tower.field(3)
    conj = [tower.conjugates(x, 3) for x in range(K3.order)]
    trace = [tower.rel_trace(x, 3, 1) for x in range(K3.order)]
    for a in range(1, K3.order):
        a0, a1, a2 = conj[a]
        for dd in range(K3.order):
            if a0 ^ a1 ^ dd and (trace[a] ^ trace[dd]) != 1:
                d0, d1, d2 = conj[dd]
                yield (a0, a1, a2, d0, d1, d2)


def _stream_order4(tower: FieldTower):
    K4 = tower.field(4)
    K2 = tower.field(2)
    b_vals = []
    for b in range(1, K2.order):
        b4 = tower.embed(b, 2, 4)
        b_vals.append((b4, tower.frobenius(b4, 4), tower.rel_trace(b, 2, 1)))
    for c in range(1, K4.order):
        c0, c1, c2, c3 = tower.conjugates(c, 4)
        tc = tower.rel_trace(c, 4, 1)
        for b0, b1, tb in b_vals:
            if (tc ^ tb) != 1:
                yield (c1, b0, c0, b0 ^ c1 ^ c2, b0 ^ c0 ^ c3, b1 ^ c0 ^ c1)


# each entry is the sum of the conjugates b^(q^i) over the listed exponents i
_ORDER7_SHAPES = {
    "7_0": ((2,), (0,), (1,), (0, 2, 3), (0, 1, 5), (1, 2, 6)),
    "7_1": ((6,), (0,), (5,), (0, 2, 6), (0, 4, 5), (1, 5, 6)),
}


def _stream_order7(tower: FieldTower, label: str):
    K7 = tower.field(7)
    shape = _ORDER7_SHAPES[label]
    # Tr_{k7/k}(b) = 1 is an affine condition: b runs over base + kernel
    images = [tower.rel_trace(1 << i, 7, 1) for i in range(K7.m)]
    base = solve_f2(images, 1)
    for off in f2_span(f2_kernel(images)):
        conj = tower.conjugates(base ^ off, 7)
        yield tuple(_xor_all(conj[i] for i in idx) for idx in shape)


def _xor_all(vals) -> int:
    acc = 0
    for v in vals:
        acc ^= v
    return acc


def descent_equivalent(tower: FieldTower, d1: DescentDatum, d2: DescentDatum) -> bool:
    """Is there rho in Gamma with rho(Q1) = Q2 and gamma2 = rho gamma1 rho^-1?"""
    if d1.level != d2.level:
        return False
    G = gamma_group()
    for rho in range(len(G)):
        if G.conjugate(d1.gamma, rho) == d2.gamma and twisted_act(rho, d1.Q) == d2.Q:
            return True
    return False


# ------------------------------------------------------------ oracles

def pack(Q, m: int) -> int:
    """Sextuple -> int with the first coordinate most significant."""
    out = 0
    for c in Q:
        out = (out << m) | c
    return out


def unpack(v: int, m: int) -> tuple:
    mask = (1 << m) - 1
    return tuple((v >> (m * (5 - j))) & mask for j in range(6))


def descent_affine_space(tower: FieldTower, label: str) -> "AffineSpace":
    """All Q in (k_d)^6 with gamma(Q) = sigma Q, found by F2 linear algebra.

    This ignores admissibility; it is an affine space of q^6 points.
    """
    d = CLASS_ORDER[label]
    F = tower.field(d)
    m = F.m
    g = class_representative(label)
    masks, const = twist_table()[g]
    zero = (0,) * 6
    images = []
    for j in range(6):
        for bit in range(m):
            Q = tuple((1 << bit) if t == j else 0 for t in range(6))
            lin = _apply_masks(masks, zero, Q)
            frob = tuple(tower.frobenius(c, d) for c in Q)
            images.append(pack(tuple(x ^ y for x, y in zip(lin, frob)), m))
    # the variable index (j, bit) sits at packed position m*(5-j)+bit
    order = [m * (5 - j) + bit for j in range(6) for bit in range(m)]
    sol = solve_f2(images, pack(const, m))
    if sol is None:
        raise AssertionError("descent equation has no solution")

    def to_vector(x):
        v = 0
        for i, pos in enumerate(order):
            if (x >> i) & 1:
                v |= 1 << pos
        return v

    basis = [to_vector(k) for k in f2_kernel(images)]
    return AffineSpace(m, to_vector(sol), basis)


def descent_set_oracle(tower: FieldTower, label: str) -> list[tuple]:
    """D_gamma by filtering the solution space of the linear descent equation."""
    space = descent_affine_space(tower, label)
    F = tower.field(CLASS_ORDER[label])
    return [Q for Q in space.points() if is_admissible(F, 7, Q)]


def descent_set_filter(tower: FieldTower, label: str) -> list[tuple]:
    """D_gamma by testing every sextuple of (k_d)^6; only for tiny fields."""
    d = CLASS_ORDER[label]
    F = tower.field(d)
    if 6 * F.m > 24:
        raise ValueError("exhaustive filter is limited to (k_d)^6 with at most 2^24 points")
    out = []
    for v in range(1 << (6 * F.m)):
        Q = unpack(v, F.m)
        if satisfies_descent(tower, label, Q):
            out.append(Q)
    return out


# ------------------------------------------------------------ affine spaces

class AffineSpace:
    """An affine F2-subspace of packed sextuples over GF(2^m).

    The basis is kept in reduced echelon form and the origin is reduced
    against it, so the key of a point (its bits at the pivot positions,
    highest pivot first) orders points exactly as the packed ints, i.e.
    lexicographically as sextuples.
    """

    def __init__(self, m: int, origin: int, basis: Sequence[int]):
        rows = sorted(((p, v) for p, v, _ in f2_echelon(list(basis))), reverse=True)
        for p, v in rows:
            if (origin >> p) & 1:
                origin ^= v
        self.m = m
        self.origin = origin
        self.pivots = [p for p, _ in rows]
        self.vectors = [v for _, v in rows]
        self.dim = len(rows)

    @classmethod
    def full(cls, m: int) -> "AffineSpace":
        return cls(m, 0, [1 << i for i in range(6 * m)])

    def key(self, Q) -> int:
        v = pack(Q, self.m) ^ self.origin
        key = 0
        for i, (p, vec) in enumerate(zip(self.pivots, self.vectors)):
            if (v >> p) & 1:
                v ^= vec
                key |= 1 << (self.dim - 1 - i)
        if v:
            raise ValueError("point is not in the affine space")
        return key

    def point(self, key: int) -> tuple:
        v = self.origin
        for i, vec in enumerate(self.vectors):
            if (key >> (self.dim - 1 - i)) & 1:
                v ^= vec
        return unpack(v, self.m)

    def points(self):
        for key in range(1 << self.dim):
            yield self.point(key)


class AffineKeyMap:
    """An F2-affine map on keys, applied to numpy arrays through byte tables."""

    def __init__(self, const: int, columns: Sequence[int]):
        self.const = const
        dim = len(columns)
        # columns[i] is the image of the key bit of weight 2^(dim-1-i)
        by_weight = list(reversed(columns))
        self.tables = []
        for start in range(0, dim, 8):
            chunk = by_weight[start:start + 8]
            tab = np.zeros(1 << len(chunk), dtype=np.int64)
            for v in range(1, len(tab)):
                low = v & -v
                tab[v] = tab[v ^ low] ^ chunk[low.bit_length() - 1]
            self.tables.append(tab)

    def __call__(self, keys: np.ndarray) -> np.ndarray:
        out = np.full(keys.shape, self.const, dtype=np.int64)
        for i, tab in enumerate(self.tables):
            idx = (keys >> (8 * i)) & (len(tab) - 1)
            out ^= tab[idx]
        return out

    def apply_int(self, key: int) -> int:
        out = self.const
        for i, tab in enumerate(self.tables):
            out ^= int(tab[(key >> (8 * i)) & (len(tab) - 1)])
        return out


# ------------------------------------------------------------ group actions

@dataclass
class Orbit:
    representative: tuple
    size: int
    stabilizer: list


class GroupAction:
    """A finite group acting on an explicit finite set of sextuples.

    ``act(g, Q)`` gives the image of Q under the element g.  When ``space``
    is given, every ``act(g, .)`` must be F2-affine on that space; the
    orbit machinery then runs vectorized on integer keys (this is checked
    on sample points).  ``compose(g, h)`` (the element acting as g after h)
    is optional and only used for subgroup checks.
    """

    def __init__(self, elements: Sequence[Hashable], act: Callable, points: Iterable[tuple],
                 space: AffineSpace | None = None, compose: Callable | None = None,
                 identity: Hashable | None = None, name: str = ""):
        self.elements = list(elements)
        self.act = act
        self.points = sorted(set(tuple(p) for p in points))
        self.space = space
        self.compose = compose
        self.identity = identity
        self.name = name
        self._maps: list[AffineKeyMap] | None = None
        self._keys: np.ndarray | None = None

    def __len__(self):
        return len(self.points)

    @property
    def order(self) -> int:
        return len(self.elements)

    # vectorized helpers ------------------------------------------------
    def _key_maps(self) -> list[AffineKeyMap]:
        if self._maps is None:
            sp = self.space
            origin_pt = sp.point(0)
            maps = []
            for g in self.elements:
                c0 = sp.key(self.act(g, origin_pt))
                cols = [sp.key(self.act(g, sp.point(1 << (sp.dim - 1 - i)))) ^ c0
                        for i in range(sp.dim)]
                kmap = AffineKeyMap(c0, cols)
                for Q in self.points[:: max(1, len(self.points) // 8)][:8]:
                    if sp.key(self.act(g, Q)) != kmap.apply_int(sp.key(Q)):
                        raise ValueError(f"action of {g!r} is not affine on the key space")
                maps.append(kmap)
            self._maps = maps
        return self._maps

    def _point_keys(self) -> np.ndarray:
        if self._keys is None:
            self._keys = np.array([self.space.key(Q) for Q in self.points], dtype=np.int64)
        return self._keys

    def _images(self, i: int) -> np.ndarray:
        return self._key_maps()[i](self._point_keys())

    # counting -----------------------------------------------------------
    def fixed_counts(self, threads: int = 1) -> list[int]:
        """|X(g)| for every element g, in element order."""
        if self.space is not None and self.space.dim <= 62:
            keys = self._point_keys()
            self._key_maps()

            def count(i):
                return int(np.count_nonzero(self._images(i) == keys))
        else:
            def count(i):
                g = self.elements[i]
                return sum(1 for Q in self.points if self.act(g, Q) == Q)
        idx = range(self.order)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                return list(ex.map(count, idx))
        return [count(i) for i in idx]

    def burnside_count(self, threads: int = 1) -> int:
        total = sum(self.fixed_counts(threads))
        if total % self.order:
            raise AssertionError(f"Burnside sum {total} not divisible by |G| = {self.order}")
        return total // self.order

    def orbits(self) -> list[Orbit]:
        """Orbits by canonical minimum; representatives are the lex-least members."""
        if self.space is not None and self.space.dim <= 62:
            return self._orbits_vectorized()
        return self._orbits_python()

    def _orbits_vectorized(self) -> list[Orbit]:
        keys = self._point_keys()
        if not len(keys):
            return []
        canon = keys.copy()
        stab = np.zeros(len(keys), dtype=np.int64)
        for i in range(self.order):
            img = self._images(i)
            pos = np.searchsorted(keys, img)
            pos[pos >= len(keys)] = 0
            if not np.array_equal(keys[pos], img):
                raise AssertionError(f"{self.elements[i]!r} moves a point out of the set")
            np.minimum(canon, img, out=canon)
            stab += img == keys
        reps, counts = np.unique(canon, return_counts=True)
        out = []
        for rep, cnt in zip(reps.tolist(), counts.tolist()):
            j = int(np.searchsorted(keys, rep))
            s = int(stab[j])
            if s * cnt != self.order:
                raise AssertionError("orbit-stabilizer mismatch")
            Q = self.points[j]
            out.append(Orbit(Q, cnt, self.stabilizer(Q)))
        return out

    def _orbits_python(self) -> list[Orbit]:
        pts = set(self.points)
        seen: set = set()
        out = []
        for Q in self.points:          # sorted, so the first unseen point is the orbit minimum
            if Q in seen:
                continue
            orbit = {self.act(g, Q) for g in self.elements}
            if not orbit <= pts:
                raise AssertionError("the action leaves the point set")
            if min(orbit) != Q:
                raise AssertionError("orbit minimum was not reached first")
            seen |= orbit
            stab = self.stabilizer(Q)
            if len(stab) * len(orbit) != self.order:
                raise AssertionError("orbit-stabilizer mismatch")
            out.append(Orbit(Q, len(orbit), stab))
        return out

    def stabilizer(self, Q) -> list:
        Q = tuple(Q)
        return [g for g in self.elements if self.act(g, Q) == Q]

    def check_action(self, samples: Sequence[tuple] | None = None) -> None:
        """Identity acts trivially and g(h(Q)) = (g h)(Q) on sample points."""
        pts = list(samples) if samples is not None else self.points[:: max(1, len(self.points) // 16)]
        if self.identity is not None:
            for Q in pts:
                if self.act(self.identity, Q) != Q:
                    raise AssertionError("identity does not act trivially")
        if self.compose is not None:
            for Q in pts[:4]:
                for g in self.elements:
                    for h in self.elements:
                        if self.act(g, self.act(h, Q)) != self.act(self.compose(g, h), Q):
                            raise AssertionError(f"action incompatible with composition at {g!r}, {h!r}")


def centralizer_action(tower: FieldTower, label: str, points: Iterable[tuple] | None = None,
                       space: AffineSpace | None = None) -> GroupAction:
    """Gamma_gamma acting on D_gamma by the twisted action."""
    G = gamma_group()
    g = class_representative(label)
    if points is None:
        points = list(descent_set(tower, label))
    if space is None:
        space = descent_affine_space(tower, label)
    return GroupAction(G.centralizer(g), twisted_act, points, space=space,
                       compose=lambda a, b: G.mul[a][b], identity=G.identity,
                       name=f"D_{label}")


def orbit_report_lines(label: str, orbits: Sequence[Orbit], group_order: int) -> list[str]:
    """JSON lines {gamma, representative, orbit_size, stabilizer_order}."""
    lines = []
    for o in orbits:
        lines.append(json.dumps({
            "gamma": label,
            "representative": [format(c, "x") for c in o.representative],
            "orbit_size": o.size,
            "stabilizer_order": group_order // o.size,
        }, sort_keys=True))
    return lines
