"""Ternary quartics in characteristic 2.

A quartic is a tuple of 15 field elements indexed by ``QUARTIC_MONOMIALS``
(descending lexicographic exponent order); a quadratic form is the sextuple
(a, b, c, d, e, f) of a x^2 + b y^2 + c z^2 + d xy + e yz + f zx.

Bitangents.  Write F = Q^2 + N with N supported on the nine monomials
having an odd exponent.  A line is a bitangent iff F restricted to it is a
nonzero square, and only N contributes odd-degree terms to the
restriction.  For the lines z = ux + vy the two odd coefficients are

    c3 = n1 + n2 v + n5 u^2 v + n6 u^3 + n7 u + n9 u^2
    c1 = n3 + n4 u + n5 v^3 + n6 u v^2 + n8 v + n9 v^2

with N = n1 x^3y + n2 x^3z + n3 xy^3 + n4 y^3z + n5 xz^3 + n6 yz^3
+ n7 x^2yz + n8 xy^2z + n9 xyz^2.  Since c3 is linear in v we eliminate v
and solve a univariate equation of degree <= 9 in u.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import upoly
from .gf2tower import FieldTower, GF2m
from .plane import (
    QUAD_MONOMIALS,
    QUARTIC_INDEX,
    QUARTIC_MONOMIALS,
    form_eval,
    normalize_vector,
    quartic_to_dict,
    dict_to_quartic,
    substitute,
)

STRATA = (7, 4, 2, 1)

ORDINARY, RANK2, RANK1, TYPE13, SUPERSINGULAR = (
    "Ordinary", "Rank2", "Rank1", "Type1/3", "Supersingular")

# bitangent count of a smooth quartic <-> 2-rank of its Jacobian
BITANGENTS_TO_RANK = {7: 3, 4: 2, 2: 1, 1: 0}


def _q(i, j, k):
    return QUARTIC_INDEX[(i, j, k)]


# right-hand sides Q^2 = RHS of the four normal forms, as quartic tuples
_RHS_DICTS = {
    7: {(2, 1, 1): 1, (1, 2, 1): 1, (1, 1, 2): 1},     # xyz(x+y+z)
    4: {(1, 2, 1): 1, (1, 1, 2): 1},                   # xyz(y+z)
    2: {(1, 3, 0): 1, (2, 1, 1): 1},                   # xy(y^2+xz)
    1: {(1, 3, 0): 1, (3, 0, 1): 1},                   # x(y^3+x^2z)
}

_SQUARE_SLOTS = [_q(2 * i, 2 * j, 2 * k) for (i, j, k) in QUAD_MONOMIALS]
_NONSQUARE_MONOMIALS = ((3, 1, 0), (3, 0, 1), (1, 3, 0), (0, 3, 1), (1, 0, 3),
                        (0, 1, 3), (2, 1, 1), (1, 2, 1), (1, 1, 2))
_NONSQUARE_SLOTS = [_q(*m) for m in _NONSQUARE_MONOMIALS]


def rhs(stratum: int) -> tuple:
    return dict_to_quartic(_RHS_DICTS[stratum])


def square_of_quad(F: GF2m, Q) -> tuple:
    out = [0] * 15
    for slot, c in zip(_SQUARE_SLOTS, Q):
        out[slot] = F.sq(c)
    return tuple(out)


def quartic_add(*quartics) -> tuple:
    out = [0] * 15
    for qt in quartics:
        for i, c in enumerate(qt):
            out[i] ^= c
    return tuple(out)


def quartic_scale(F: GF2m, qt, c: int) -> tuple:
    return tuple(F.mul(v, c) for v in qt)


def wall_model(F: GF2m, stratum: int, Q) -> tuple:
    """The quartic Q^2 + RHS for the given bitangent count."""
    return quartic_add(square_of_quad(F, Q), rhs(stratum))


def is_admissible(F: GF2m, stratum: int, Q) -> bool:
    a, b, c, d, e, f = Q
    if stratum == 7:
        return bool(a and b and c and a ^ b ^ d and b ^ c ^ e and a ^ c ^ f
                    and (a ^ b ^ c ^ d ^ e ^ f) != 1)
    if stratum == 4:
        return bool(a and b and c and b ^ c ^ e)
    if stratum == 2:
        return bool(a and c)
    if stratum == 1:
        return bool(c)
    raise ValueError(f"unknown stratum {stratum}")


def quartic_sqrt(F: GF2m, qt):
    """Q with Q^2 = qt, or None when qt has an odd exponent."""
    if any(qt[s] for s in _NONSQUARE_SLOTS):
        return None
    return tuple(F.sqrt(qt[s]) for s in _SQUARE_SLOTS)


def nonsquare_part(qt) -> tuple:
    """(n1, ..., n9) in the order of the module docstring."""
    return tuple(qt[s] for s in _NONSQUARE_SLOTS)


def to_hex(qt) -> list[str]:
    return [format(c, "x") for c in qt]


def from_hex(items) -> tuple:
    vals = tuple(int(h, 16) for h in items)
    if len(vals) != 15:
        raise ValueError("a quartic needs 15 coefficients")
    return vals


def embed_quartic(tower: FieldTower, qt, d: int, e: int) -> tuple:
    return tuple(tower.embed(c, d, e) for c in qt)


def transform(F: GF2m, qt, rows) -> tuple:
    """qt composed with the linear forms in ``rows`` (the right action)."""
    return dict_to_quartic(substitute(F, quartic_to_dict(qt), rows))


def proportional(F: GF2m, f1, f2) -> int | None:
    """lambda with f1 = lambda f2, or None."""
    lam = None
    for a, b in zip(f1, f2):
        if b == 0:
            if a:
                return None
            continue
        r = F.div(a, b)
        if lam is None:
            lam = r
        elif r != lam:
            return None
    return lam


# ---------------------------------------------------------------- smoothness

def partials(qt) -> tuple[dict, dict, dict]:
    """The three partial derivatives as form dicts (char 2: odd exponents only)."""
    fx, fy, fz = {}, {}, {}
    for (i, j, k), c in zip(QUARTIC_MONOMIALS, qt):
        if not c:
            continue
        if i % 2:
            fx[(i - 1, j, k)] = c
        if j % 2:
            fy[(i, j - 1, k)] = c
        if k % 2:
            fz[(i, j, k - 1)] = c
    return fx, fy, fz


def _smoothness_field(tower: FieldTower, level: int) -> int:
    """Smallest multiple of ``level`` whose field has at least 16 elements."""
    e = level
    while (1 << (tower.n * e)) < 16:
        e *= 2
    return e


def _z_poly_over_x(F: GF2m, form: dict, y_val: int | None):
    """form(x, y_val, z) as a list (by z power) of polynomials in x.

    With y_val None the form is dehomogenized at y = 1."""
    deg_z = max((m[2] for m in form), default=0)
    out = [[] for _ in range(deg_z + 1)]
    for (i, j, k), c in form.items():
        coef = c if y_val is None else F.mul(c, F.pow(y_val, j))
        if coef:
            poly = [0] * (i + 1)
            poly[i] = coef
            out[k] = upoly.add(F, out[k], poly)
    while out and not out[-1]:
        out.pop()
    return out


def _eval_z_poly(F: GF2m, zp, x0: int) -> list[int]:
    return upoly.trim([upoly.evaluate(F, c, x0) for c in zp])


class _Split(Exception):
    def __init__(self, parts):
        self.parts = parts


def _dyn_gcd_positive(F: GF2m, h, polys) -> bool:
    """Does some root x0 of h give polys(x0, z) a common root in z?

    ``polys`` are polynomials in z with coefficients in F[x]; arithmetic is
    done in (F[x]/h)[z], splitting h whenever a leading coefficient turns
    out to be a zero divisor.
    """
    stack = [upoly.monic(F, h)]
    while stack:
        hh = stack.pop()
        if upoly.deg(hh) <= 0:
            continue
        try:
            g = _gcd_mod(F, hh, polys)
        except _Split as s:
            stack.extend(s.parts)
            continue
        if g is None or len(g) > 1:
            # all polynomials vanish identically here, or a common factor exists
            return True
    return False


def _reduce_zp(F, hh, zp):
    out = [upoly.mod(F, c, hh) for c in zp]
    while out and not out[-1]:
        out.pop()
    return out


def _unit_or_split(F, hh, c):
    g = upoly.gcd(F, c, hh)
    if upoly.deg(g) > 0:
        raise _Split([g, upoly.divmod_(F, hh, g)[0]])
    return upoly.inverse_mod(F, c, hh)


def _zp_rem(F, hh, a, b):
    a = list(a)
    inv = _unit_or_split(F, hh, b[-1])
    db = len(b) - 1
    while a and len(a) - 1 >= db:
        c = upoly.mod(F, upoly.mul(F, a[-1], inv), hh)
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = upoly.add(F, a[shift + i], upoly.mod(F, upoly.mul(F, c, bc), hh))
        while a and not a[-1]:
            a.pop()
    return a


def _gcd_mod(F, hh, polys):
    reduced = [p for p in (_reduce_zp(F, hh, p) for p in polys) if p]
    if not reduced:
        return None
    g = reduced[0]
    for p in reduced[1:]:
        a, b = g, p
        while b:
            a, b = b, _zp_rem(F, hh, a, b)
        g = a
    # every divisor used had a unit leading coefficient; check the survivor too
    _unit_or_split(F, hh, g[-1])
    return g


def _prod_over_roots(F: GF2m, f, g) -> int:
    """Product of g over the roots of f (with multiplicity)."""
    if not g:
        return 0
    res = upoly.resultant(F, f, g)
    return F.div(res, F.pow(f[-1], upoly.deg(g)))


def is_smooth(tower: FieldTower, qt, level: int = 1) -> bool:
    """True iff F, Fx, Fy, Fz have no common zero over the algebraic closure."""
    if not any(qt):
        raise ValueError("zero quartic")
    fx, fy, fz = partials(qt)
    if not fx and not fy and not fz:
        return False  # a square
    e = _smoothness_field(tower, level)
    W = tower.field(e)
    qt = embed_quartic(tower, qt, level, e)
    fdict = quartic_to_dict(qt)

    # move a point off the curve to (0:0:1)
    point = None
    for P in _points(W):
        if form_eval(W, fdict, P):
            point = P
            break
    if point is None:
        return False
    p0, p1, p2 = point
    if p2:
        cols = ((1, 0, 0), (0, 1, 0), point)
    elif p1:
        cols = ((1, 0, 0), (0, 0, 1), point)
    else:
        cols = ((0, 1, 0), (0, 0, 1), point)
    rows = tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))
    fdict = substitute(W, fdict, rows)
    qt2 = dict_to_quartic(fdict)
    fx, fy, fz = partials(qt2)
    forms = [fdict, fx, fy, fz]

    # points with y = 0: (1 : 0 : z)
    at_inf = [upoly.trim([upoly.evaluate(W, c, 1) for c in _z_poly_over_x(W, f, 0)]) for f in forms]
    g = []
    for p in at_inf:
        g = upoly.gcd(W, g, p) if (g or p) else []
    if not g or upoly.deg(g) > 0:
        return False

    zf = [_z_poly_over_x(W, f, None) for f in forms]
    xs = list(range(W.order))[:16]
    r = None
    tries = 0
    limit = 5 * W.order + 1
    for lam in range(W.order):
        for mu in range(W.order):
            tries += 1
            if tries > limit:
                break
            comb = {}
            for f, c in ((fx, 1), (fy, lam), (fz, mu)):
                for mono, v in f.items():
                    val = comb.get(mono, 0) ^ W.mul(v, c)
                    if val:
                        comb[mono] = val
                    else:
                        comb.pop(mono, None)
            if not comb:
                continue
            zc = _z_poly_over_x(W, comb, None)
            ys = []
            for x0 in xs:
                f0 = _eval_z_poly(W, zf[0], x0)
                g0 = _eval_z_poly(W, zc, x0)
                ys.append(_prod_over_roots(W, f0, g0))
            cand = upoly.interpolate(W, xs, ys)
            if cand:
                r = cand
                break
        if r is not None or tries > limit:
            break
    if r is None:
        # every combination of the partials shares a component with F
        return False
    if upoly.deg(r) <= 0:
        return True
    h = upoly.squarefree_part(W, r)
    return not _dyn_gcd_positive(W, h, zf)


def _points(F: GF2m):
    n = F.order
    yield (0, 0, 1)
    for z in range(n):
        yield (0, 1, z)
    for y in range(n):
        for z in range(n):
            yield (1, y, z)


def singular_point(tower: FieldTower, qt, max_points: int = 1 << 22):
    """Search small levels for a singular point; returns (point, level) or None."""
    fx, fy, fz = partials(qt)
    forms = [quartic_to_dict(qt), fx, fy, fz]
    for d in tower.levels:
        if d > 6:
            break
        W = tower.field(d)
        if W.order ** 2 > max_points or not W.use_tables:
            break
        lifted = [{m: tower.embed(c, 1, d) for m, c in f.items()} for f in forms]
        zero = _common_zeros(W, lifted)
        if zero is not None:
            return zero, d
    return None


# ---------------------------------------------------------------- bitangents

@dataclass(frozen=True)
class Bitangent:
    line: tuple      # normalized coefficients (a, b, c) of a x + b y + c z, in level `level`
    level: int       # smallest tower level containing the coefficients


def restrict_to_line(F: GF2m, qt, line) -> tuple:
    """Binary quartic (c4, c3, c2, c1, c0) of F on the line, in parameters (s, t)."""
    a, b, c = line
    if c:
        p1, p2 = (c, 0, a), (0, c, b)
    elif b:
        p1, p2 = (b, a, 0), (0, 0, 1)
    elif a:
        p1, p2 = (0, 1, 0), (0, 0, 1)
    else:
        raise ValueError("zero line")
    rows = ((p1[0], p2[0], 0), (p1[1], p2[1], 0), (p1[2], p2[2], 0))
    sub = substitute(F, quartic_to_dict(qt), rows)
    return tuple(sub.get((4 - i, i, 0), 0) for i in range(5))


def is_bitangent(F: GF2m, qt, line) -> bool:
    b = restrict_to_line(F, qt, line)
    if not any(b):
        raise ValueError("the line is a component of the curve")
    return b[1] == 0 and b[3] == 0


def _minimal_level(tower: FieldTower, coords, level: int) -> tuple[tuple, int]:
    for d in tower.levels:
        if d > level or level % d:
            continue
        try:
            return tuple(tower.descend(c, level, d) for c in coords), d
        except ValueError:
            continue
    return tuple(coords), level


def roots_over_closure(tower: FieldTower, poly, level: int) -> list[tuple[int, int]]:
    """All roots of poly (coefficients in level ``level``) as (root, minimal level)."""
    W = tower.field(level)
    p = upoly.trim(list(poly))
    if not p:
        raise ValueError("zero polynomial")
    if upoly.deg(p) <= 0:
        return []
    p = upoly.squarefree_part(W, p)
    out = []
    for dd, factor in upoly.distinct_degree(W, p).items():
        big = level * dd
        if big not in tower.levels:
            raise ValueError(f"roots need level {big}, which is not in the tower")
        lifted = [tower.embed(c, level, big) for c in factor]
        for r in upoly.roots(tower.field(big), lifted):
            (r2,), lvl = _minimal_level(tower, (r,), big)
            out.append((r2, lvl))
    return out


def _lift_to_common(tower: FieldTower, items):
    """Embed (value, level) pairs into one common level (the least available)."""
    levels = {lvl for _, lvl in items}
    target = None
    for d in tower.levels:
        if all(d % lvl == 0 for lvl in levels):
            target = d
            break
    if target is None:
        raise ValueError(f"no common level for {sorted(levels)}")
    return [tower.embed(v, lvl, target) for v, lvl in items], target


def find_bitangents(tower: FieldTower, qt, max_degree: int = 7, level: int = 1) -> list[Bitangent]:
    """All bitangent lines with field of definition of degree <= max_degree."""
    k = tower.field(level)
    n1, n2, n3, n4, n5, n6, n7, n8, n9 = nonsquare_part(qt)
    found: set[Bitangent] = set()

    def add_line(coords, lvl):
        coords, lvl = _minimal_level(tower, coords, lvl)
        W = tower.field(lvl)
        coords = normalize_vector(W, coords)
        lifted = embed_quartic(tower, qt, level, lvl)
        if not any(restrict_to_line(W, lifted, coords)):
            raise ValueError("a line is a component of the quartic; it is not smooth")
        found.add(Bitangent(coords, lvl))

    # lines z = u x + v y, i.e. u x + v y + z = 0
    D = upoly.trim([n2, 0, n5])
    P = upoly.trim([n1, n7, n9, n6])
    # c1 * D^3 with v = P / D
    D2 = upoly.mul(k, D, D)
    D3 = upoly.mul(k, D2, D)
    P2 = upoly.mul(k, P, P)
    E = upoly.add(k, upoly.scale(k, D3, n3), upoly.scale(k, upoly.mul(k, [0, 1], D3), n4))
    E = upoly.add(k, E, upoly.scale(k, upoly.mul(k, P2, P), n5))
    E = upoly.add(k, E, upoly.scale(k, upoly.mul(k, [0, 1], upoly.mul(k, P2, D)), n6))
    E = upoly.add(k, E, upoly.scale(k, upoly.mul(k, P, D2), n8))
    E = upoly.add(k, E, upoly.scale(k, upoly.mul(k, P2, D), n9))
    if D:
        if not E:
            raise ValueError("infinitely many bitangent candidates; the quartic is not smooth")
        for u, lvl in roots_over_closure(tower, E, level):
            W = tower.field(lvl)
            uu = u
            Pu = upoly.evaluate(W, [tower.embed(c, level, lvl) for c in P], uu)
            Du = upoly.evaluate(W, [tower.embed(c, level, lvl) for c in D], uu)
            if Du:
                add_line((uu, W.div(Pu, Du), 1), lvl)
    # u with D(u) = P(u) = 0: c3 vanishes for every v, solve c1 = 0 in v
    if D:
        common = upoly.gcd(k, D, P) if P else upoly.monic(k, D)
        u_roots = roots_over_closure(tower, common, level) if upoly.deg(common) > 0 else []
    else:
        if not P:
            raise ValueError("infinitely many bitangent candidates; the quartic is not smooth")
        u_roots = roots_over_closure(tower, P, level)
    for u, lvl in u_roots:
        W = tower.field(lvl)
        e = [tower.embed(c, level, lvl) for c in (n3, n4, n5, n6, n8, n9)]
        m3, m4, m5, m6, m8, m9 = e
        cubic = upoly.trim([m3 ^ W.mul(m4, u), m8, m9 ^ W.mul(m6, u), m5])
        if not cubic:
            raise ValueError("infinitely many bitangent candidates; the quartic is not smooth")
        for v, lv in roots_over_closure(tower, cubic, lvl):
            (uu, vv), common_lvl = _lift_to_common(tower, [(u, lvl), (v, lv)])
            add_line((uu, vv, 1), common_lvl)

    # lines x = w y, i.e. x + w y = 0
    cy3z = upoly.trim([n4, n8, n7, n2])
    cyz3 = upoly.trim([n6, n5])
    if not cy3z and not cyz3:
        raise ValueError("infinitely many bitangent candidates; the quartic is not smooth")
    g = upoly.gcd(k, cy3z, cyz3)
    if upoly.deg(g) > 0:
        for w, lvl in roots_over_closure(tower, g, level):
            add_line((1, w, 0), lvl)
    # the line y = 0
    if n2 == 0 and n5 == 0:
        add_line((0, 1, 0), level)

    out = [b for b in found if b.level // level <= max_degree]
    return sorted(out, key=lambda b: (b.level, b.line))


def bitangent_degree(tower: FieldTower, b: Bitangent, level: int = 1) -> int:
    return b.level // level


# ---------------------------------------------------------------- point counts

@lru_cache(maxsize=None)
def _np_tables(m: int, modulus: int):
    W = GF2m(m, modulus)
    return np.array(W.exp, dtype=np.int64), np.array(W.log, dtype=np.int64)


def _eval_form_at(W: GF2m, f: dict, X, Y, Z) -> np.ndarray:
    """Values of a form at the points (X[i], Y[i], Z[i]) (numpy int arrays)."""
    exp, log = _np_tables(W.m, W.modulus)
    order1 = W.order - 1
    X, Y, Z = np.broadcast_arrays(X, Y, Z)
    out = np.zeros(X.shape, dtype=np.int64)
    lx, ly, lz = log[X], log[Y], log[Z]
    zx, zy, zz = X == 0, Y == 0, Z == 0
    for (i, j, k), c in f.items():
        if not c:
            continue
        val = exp[(int(log[c]) + i * lx + j * ly + k * lz) % order1]
        dead = np.zeros(X.shape, dtype=bool)
        if i:
            dead |= zx
        if j:
            dead |= zy
        if k:
            dead |= zz
        val[dead] = 0
        out ^= val
    return out


def _plane_chunks(W: GF2m, chunk: int = 1 << 20):
    """P^2(W) as coordinate arrays, in pieces of about ``chunk`` points."""
    n = W.order
    zs = np.arange(n, dtype=np.int64)
    yield (np.zeros(n + 1, dtype=np.int64),
           np.concatenate([[0], np.ones(n, dtype=np.int64)]),
           np.concatenate([[1], zs]))
    rows = max(1, chunk // n)
    for y0 in range(0, n, rows):
        ys = np.arange(y0, min(n, y0 + rows), dtype=np.int64)
        Y = np.repeat(ys, n)
        Z = np.tile(zs, len(ys))
        yield np.ones_like(Y), Y, Z


def _common_zeros(W: GF2m, forms):
    for X, Y, Z in _plane_chunks(W):
        ok = np.ones(X.shape, dtype=bool)
        for f in forms:
            ok &= _eval_form_at(W, f, X, Y, Z) == 0
        idx = np.flatnonzero(ok)
        if idx.size:
            i = idx[0]
            return (int(X[i]), int(Y[i]), int(Z[i]))
    return None


class _OrbitGrid:
    """Frobenius-orbit representatives of P^2(k_i) with their orbit sizes.

    Caches the discrete logs of monomial values, so evaluating a form with
    coefficients in k costs one table lookup per coefficient.
    """

    def __init__(self, tower: FieldTower, d: int):
        W = tower.field(d)
        exp, log = _np_tables(W.m, W.modulus)
        self.order1 = W.order - 1
        self.exp2 = np.concatenate([exp[: self.order1], exp[: self.order1]])
        frob = np.array([tower.frobenius(x, d) for x in range(W.order)], dtype=np.int64)
        X, Y, Z = (np.concatenate(parts) for parts in zip(*_plane_chunks(W)))
        key = (X << (2 * W.m)) | (Y << W.m) | Z
        keep = np.ones(X.shape, dtype=bool)
        fx, fy, fz = X, Y, Z
        for _ in range(d - 1):
            fx, fy, fz = frob[fx], frob[fy], frob[fz]
            keep &= key <= ((fx << (2 * W.m)) | (fy << W.m) | fz)
        # orbit size = least power of Frobenius fixing the point
        sizes = np.zeros(X.shape, dtype=np.int64)
        fx, fy, fz = X, Y, Z
        for step in range(1, d + 1):
            fx, fy, fz = frob[fx], frob[fy], frob[fz]
            back = (fx == X) & (fy == Y) & (fz == Z) & (sizes == 0)
            sizes[back] = step
        self.X, self.Y, self.Z = X[keep], Y[keep], Z[keep]
        self.weight = sizes[keep]
        self.lx, self.ly, self.lz = log[self.X], log[self.Y], log[self.Z]
        self.zx, self.zy, self.zz = self.X == 0, self.Y == 0, self.Z == 0
        self._mono: dict = {}
        self.log = log

    def monomial(self, i, j, k):
        key = (i, j, k)
        if key not in self._mono:
            lg = (i * self.lx + j * self.ly + k * self.lz) % self.order1
            dead = np.zeros(lg.shape, dtype=bool)
            if i:
                dead |= self.zx
            if j:
                dead |= self.zy
            if k:
                dead |= self.zz
            self._mono[key] = (lg, dead)
        return self._mono[key]

    def count(self, f: dict) -> int:
        out = np.zeros(self.X.shape, dtype=np.int64)
        for mono, c in f.items():
            if not c:
                continue
            lg, dead = self.monomial(*mono)
            val = self.exp2[lg + int(self.log[c])]
            val[dead] = 0
            out ^= val
        return int(self.weight[out == 0].sum())


_GRID_LIMIT = 1 << 20


def _orbit_grid(tower: FieldTower, d: int) -> _OrbitGrid | None:
    W = tower.field(d)
    if W.order * W.order > _GRID_LIMIT:
        return None
    cache = tower.__dict__.setdefault("_orbit_grids", {})
    if d not in cache:
        cache[d] = _OrbitGrid(tower, d)
    return cache[d]


def count_points(tower: FieldTower, qt, i: int, level: int = 1) -> int:
    """Number of points of V(F) in P^2(k_i)."""
    d = level * i
    W = tower.field(d)
    if not W.use_tables:
        raise ValueError("point counting needs a field with at most 2^16 elements")
    lifted = {m: tower.embed(c, level, d) for m, c in quartic_to_dict(qt).items()}
    if level == 1:
        grid = _orbit_grid(tower, d)
        if grid is not None:
            return grid.count(lifted)
    total = 0
    for X, Y, Z in _plane_chunks(W):
        total += int(np.count_nonzero(_eval_form_at(W, lifted, X, Y, Z) == 0))
    return total


def count_points_direct(tower: FieldTower, qt, i: int, level: int = 1) -> int:
    """Point count by evaluating at every point of P^2(k_i) (reference path)."""
    d = level * i
    W = tower.field(d)
    lifted = {m: tower.embed(c, level, d) for m, c in quartic_to_dict(qt).items()}
    total = 0
    for X, Y, Z in _plane_chunks(W):
        total += int(np.count_nonzero(_eval_form_at(W, lifted, X, Y, Z) == 0))
    return total


# ---------------------------------------------------------------- zeta data

@dataclass(frozen=True)
class LPoly:
    q: int
    coeffs: tuple  # (1, a1, ..., a6)

    def as_list(self) -> list[int]:
        return list(self.coeffs)


def l_polynomial(N1: int, N2: int, N3: int, q: int) -> LPoly:
    s1 = q + 1 - N1
    s2 = q * q + 1 - N2
    s3 = q ** 3 + 1 - N3
    a1 = -s1
    num2 = -(s2 + a1 * s1)
    if num2 % 2:
        raise ValueError("point counts do not give an integral L-polynomial")
    a2 = num2 // 2
    num3 = -(s3 + a1 * s2 + a2 * s1)
    if num3 % 3:
        raise ValueError("point counts do not give an integral L-polynomial")
    a3 = num3 // 3
    return LPoly(q, (1, a1, a2, a3, q * a2, q * q * a1, q ** 3))


def l_polynomial_of(tower: FieldTower, qt) -> LPoly:
    counts = [count_points(tower, qt, i) for i in (1, 2, 3)]
    return l_polynomial(*counts, tower.q)


def _v2(x: int) -> int:
    return (x & -x).bit_length() - 1


def newton_slopes(L: LPoly) -> list[Fraction]:
    """Slopes of the 2-adic Newton polygon of L, normalized so that v(q) = 1."""
    n = L.q.bit_length() - 1
    pts = [(i, _v2(c)) for i, c in enumerate(L.coeffs) if c != 0]
    # lower convex hull
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1, (x2 - x1) * n)
        slopes.extend([s] * (x2 - x1))
    return slopes


def two_rank(L: LPoly) -> int:
    return sum(1 for s in newton_slopes(L) if s == 0)


def stratum_of(L: LPoly) -> str:
    rank = two_rank(L)
    if rank == 3:
        return ORDINARY
    if rank == 2:
        return RANK2
    if rank == 1:
        return RANK1
    if all(s == Fraction(1, 2) for s in newton_slopes(L)):
        return SUPERSINGULAR
    return TYPE13


STRATUM_OF_BITANGENTS = {7: ORDINARY, 4: RANK2, 2: RANK1}
