"""Projective plane geometry over binary fields.

Conventions.  A ProjMap is a 3x3 matrix whose rows are linear forms
l1, l2, l3.  It acts on forms on the right, F^M = F(l1, l2, l3), so that
(F^M)^N = F^(MN).  On points it acts by P -> M P and on lines by
r -> r M^-1, which gives M(V(F)) = V(F^(M^-1)).

Forms are dicts {(i, j, k): coeff} for the monomial x^i y^j z^k, or
fixed-order tuples (see QUAD_MONOMIALS and QUARTIC_MONOMIALS).
"""

from __future__ import annotations

from itertools import product

from .gf2tower import GF2m


def monomials(degree: int) -> tuple[tuple[int, int, int], ...]:
    """Exponent triples of the given degree in descending lexicographic order."""
    return tuple((i, j, degree - i - j)
                 for i in range(degree, -1, -1)
                 for j in range(degree - i, -1, -1))


# (a, b, c, d, e, f) stands for a x^2 + b y^2 + c z^2 + d xy + e yz + f zx
QUAD_MONOMIALS = ((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (0, 1, 1), (1, 0, 1))
QUARTIC_MONOMIALS = monomials(4)
QUARTIC_INDEX = {mono: i for i, mono in enumerate(QUARTIC_MONOMIALS)}

F2 = GF2m(1)


# ------------------------------------------------------------------ forms

def form_add(*forms: dict) -> dict:
    out: dict = {}
    for f in forms:
        for mono, c in f.items():
            v = out.get(mono, 0) ^ c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return out


def form_mul(F: GF2m, f: dict, g: dict) -> dict:
    out: dict = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            mono = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            v = out.get(mono, 0) ^ F.mul(c1, c2)
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return out


def form_scale(F: GF2m, f: dict, c: int) -> dict:
    if c == 0:
        return {}
    return {m: F.mul(v, c) for m, v in f.items()}


def form_eval(F: GF2m, f: dict, point) -> int:
    x, y, z = point
    acc = 0
    for (i, j, k), c in f.items():
        acc ^= F.mul(c, F.mul(F.pow(x, i), F.mul(F.pow(y, j), F.pow(z, k))))
    return acc


def linear(a: int, b: int, c: int) -> dict:
    return {m: v for m, v in (((1, 0, 0), a), ((0, 1, 0), b), ((0, 0, 1), c)) if v}


def quad_to_dict(Q) -> dict:
    return {m: v for m, v in zip(QUAD_MONOMIALS, Q) if v}


def dict_to_quad(f: dict) -> tuple:
    extra = set(f) - set(QUAD_MONOMIALS)
    if extra:
        raise ValueError(f"not a quadratic form: {sorted(extra)}")
    return tuple(f.get(m, 0) for m in QUAD_MONOMIALS)


def quartic_to_dict(coeffs) -> dict:
    return {m: v for m, v in zip(QUARTIC_MONOMIALS, coeffs) if v}


def dict_to_quartic(f: dict) -> tuple:
    extra = set(f) - set(QUARTIC_MONOMIALS)
    if extra:
        raise ValueError(f"not a quartic form: {sorted(extra)}")
    return tuple(f.get(m, 0) for m in QUARTIC_MONOMIALS)


def form_square(F: GF2m, f: dict) -> dict:
    return {(2 * i, 2 * j, 2 * k): F.sq(c) for (i, j, k), c in f.items()}


def substitute(F: GF2m, f: dict, rows) -> dict:
    """f(l1, l2, l3) where row i of ``rows`` holds the coefficients of l_i."""
    lins = [linear(*r) for r in rows]
    deg = max((sum(m) for m in f), default=0)
    powers = []
    for lin in lins:
        p = [{(0, 0, 0): 1}]
        for _ in range(deg):
            p.append(form_mul(F, p[-1], lin))
        powers.append(p)
    out: dict = {}
    for (i, j, k), c in f.items():
        term = form_mul(F, form_mul(F, powers[0][i], powers[1][j]), powers[2][k])
        out = form_add(out, form_scale(F, term, c))
    return out


# ---------------------------------------------------------------- matrices

def mat_mul(F: GF2m, A, B):
    return tuple(
        tuple(F.mul(A[i][0], B[0][j]) ^ F.mul(A[i][1], B[1][j]) ^ F.mul(A[i][2], B[2][j])
              for j in range(3))
        for i in range(3))


def mat_det(F: GF2m, A) -> int:
    m = F.mul
    return (m(A[0][0], m(A[1][1], A[2][2]) ^ m(A[1][2], A[2][1]))
            ^ m(A[0][1], m(A[1][0], A[2][2]) ^ m(A[1][2], A[2][0]))
            ^ m(A[0][2], m(A[1][0], A[2][1]) ^ m(A[1][1], A[2][0])))


def mat_adj(F: GF2m, A):
    """Adjugate (in characteristic 2 the cofactor signs disappear)."""
    m = F.mul

    def minor(r, c):
        rs = [i for i in range(3) if i != r]
        cs = [j for j in range(3) if j != c]
        return m(A[rs[0]][cs[0]], A[rs[1]][cs[1]]) ^ m(A[rs[0]][cs[1]], A[rs[1]][cs[0]])

    return tuple(tuple(minor(j, i) for j in range(3)) for i in range(3))


def mat_inv(F: GF2m, A):
    det = mat_det(F, A)
    if det == 0:
        raise ValueError("singular matrix")
    dinv = F.inv(det)
    return tuple(tuple(F.mul(v, dinv) for v in row) for row in mat_adj(F, A))


def mat_vec(F: GF2m, A, v):
    return tuple(F.mul(A[i][0], v[0]) ^ F.mul(A[i][1], v[1]) ^ F.mul(A[i][2], v[2])
                 for i in range(3))


def vec_mat(F: GF2m, v, A):
    return tuple(F.mul(v[0], A[0][j]) ^ F.mul(v[1], A[1][j]) ^ F.mul(v[2], A[2][j])
                 for j in range(3))


def transpose(A):
    return tuple(tuple(A[j][i] for j in range(3)) for i in range(3))


def normalize_vector(F: GF2m, v) -> tuple:
    """Scale so the first nonzero coordinate is 1."""
    for c in v:
        if c:
            inv = F.inv(c)
            return tuple(F.mul(x, inv) for x in v)
    raise ValueError("zero vector is not a projective point")


def cross(F: GF2m, u, v) -> tuple:
    m = F.mul
    return (m(u[1], v[2]) ^ m(u[2], v[1]),
            m(u[2], v[0]) ^ m(u[0], v[2]),
            m(u[0], v[1]) ^ m(u[1], v[0]))


def dot(F: GF2m, u, v) -> int:
    return F.mul(u[0], v[0]) ^ F.mul(u[1], v[1]) ^ F.mul(u[2], v[2])


class ProjMap:
    """An element of PGL(3) over one field, stored scaled so its first nonzero entry is 1."""

    __slots__ = ("field", "rows")

    def __init__(self, field: GF2m, rows):
        rows = tuple(tuple(r) for r in rows)
        if mat_det(field, rows) == 0:
            raise ValueError("singular matrix")
        flat = [v for r in rows for v in r]
        lead = next(v for v in flat if v)
        if lead != 1:
            inv = field.inv(lead)
            rows = tuple(tuple(field.mul(v, inv) for v in r) for r in rows)
        self.field = field
        self.rows = rows

    @classmethod
    def identity(cls, field: GF2m = F2) -> "ProjMap":
        return cls(field, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def __eq__(self, other):
        return isinstance(other, ProjMap) and self.rows == other.rows and self.field.m == other.field.m

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"ProjMap({self.rows})"

    def __matmul__(self, other: "ProjMap") -> "ProjMap":
        return ProjMap(self.field, mat_mul(self.field, self.rows, other.rows))

    def inverse(self) -> "ProjMap":
        return ProjMap(self.field, mat_inv(self.field, self.rows))

    def transpose(self) -> "ProjMap":
        return ProjMap(self.field, transpose(self.rows))

    def lift(self, embed) -> "ProjMap":
        """Same map over a bigger field; ``embed`` is (element -> element, field)."""
        fn, big = embed
        return ProjMap(big, tuple(tuple(fn(v) for v in r) for r in self.rows))

    def on_point(self, p) -> tuple:
        return normalize_vector(self.field, mat_vec(self.field, self.rows, p))

    def on_line(self, line) -> tuple:
        inv = mat_inv(self.field, self.rows)
        return normalize_vector(self.field, vec_mat(self.field, line, inv))

    def hex(self) -> list[str]:
        return [format(v, "x") for r in self.rows for v in r]

    def order(self) -> int:
        ident = ProjMap.identity(self.field)
        cur, n = self, 1
        while cur != ident:
            cur = cur @ self
            n += 1
            if n > 10 ** 6:
                raise RuntimeError("order too large")
        return n


def act_on_form(gamma: ProjMap, f: dict) -> dict:
    """The right action f -> f^gamma = f(l1, l2, l3)."""
    return substitute(gamma.field, f, gamma.rows)


# ------------------------------------------------------------ Gamma = GL(3, F2)

GAMMA_REPS = {
    "1": ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    "2": ((0, 1, 0), (1, 0, 0), (0, 0, 1)),
    "3": ((0, 1, 0), (0, 0, 1), (1, 0, 0)),
    "4": ((0, 1, 0), (0, 0, 1), (1, 1, 1)),
    "7_0": ((0, 1, 0), (0, 0, 1), (1, 1, 0)),
    "7_1": ((0, 1, 0), (0, 0, 1), (1, 0, 1)),
}

# generators of the dihedral centralizer of the class-2 representative
TAU = ((1, 0, 0), (0, 1, 0), (1, 1, 1))
RHO = ((1, 0, 1), (0, 1, 1), (1, 1, 1))

GEN_A = ((1, 0, 0), (0, 1, 0), (1, 0, 1))   # (x, y, z) -> (x, y, x + z)
GEN_B = ((0, 1, 0), (0, 0, 1), (1, 0, 0))   # (x, y, z) -> (y, z, x)


class GammaGroup:
    """GL(3, F2) as an indexed table with composition, inverses and classes."""

    def __init__(self):
        mats = []
        for bits in product((0, 1), repeat=9):
            rows = (bits[0:3], bits[3:6], bits[6:9])
            if mat_det(F2, rows):
                mats.append(rows)
        self.mats: list[tuple] = mats
        self.index = {m: i for i, m in enumerate(mats)}
        n = len(mats)
        self.mul = [[self.index[mat_mul(F2, mats[i], mats[j])] for j in range(n)] for i in range(n)]
        self.identity = self.index[GAMMA_REPS["1"]]
        self.inv = [row.index(self.identity) for row in self.mul]
        self.orders = []
        for i in range(n):
            cur, o = i, 1
            while cur != self.identity:
                cur = self.mul[cur][i]
                o += 1
            self.orders.append(o)
        self.labels = [self._label(i) for i in range(n)]

    def __len__(self):
        return len(self.mats)

    def _label(self, i: int) -> str:
        o = self.orders[i]
        if o != 7:
            return str(o)
        m = self.mats[i]
        return f"7_{(m[0][0] + m[1][1] + m[2][2]) % 2}"

    def element(self, rows) -> int:
        return self.index[tuple(tuple(r) for r in rows)]

    def projmap(self, i: int) -> ProjMap:
        return ProjMap(F2, self.mats[i])

    def conjugate(self, g: int, h: int) -> int:
        """h g h^-1."""
        return self.mul[self.mul[h][g]][self.inv[h]]

    def centralizer(self, g: int) -> list[int]:
        return [h for h in range(len(self)) if self.mul[h][g] == self.mul[g][h]]

    def conjugacy_classes(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {}
        for label, rows in GAMMA_REPS.items():
            rep = self.element(rows)
            out[label] = sorted({self.conjugate(rep, h) for h in range(len(self))})
        return out

    def word(self, *rows_list) -> int:
        out = self.identity
        for rows in rows_list:
            out = self.mul[out][self.element(rows)]
        return out


_GAMMA: GammaGroup | None = None


def gamma_group() -> GammaGroup:
    global _GAMMA
    if _GAMMA is None:
        _GAMMA = GammaGroup()
    return _GAMMA


# ------------------------------------------------------------ lines and frames

def fano_closure(F: GF2m, l1, l2, l3) -> frozenset:
    """The seven lines spanned over F2 by three independent linear forms."""
    if mat_det(F, (tuple(l1), tuple(l2), tuple(l3))) == 0:
        raise ValueError("the three linear forms are dependent")
    out = set()
    for a, b, c in product((0, 1), repeat=3):
        if a or b or c:
            v = tuple((l1[i] if a else 0) ^ (l2[i] if b else 0) ^ (l3[i] if c else 0) for i in range(3))
            out.add(normalize_vector(F, v))
    return frozenset(out)


def _frame_matrix(F: GF2m, pts):
    """Matrix with columns scaled so that e1, e2, e3, e1+e2+e3 go to pts."""
    cols = transpose(tuple(tuple(p) for p in pts[:3]))
    try:
        inv = mat_inv(F, cols)
    except ValueError:
        raise ValueError("degenerate quadruple: first three points collinear") from None
    lam = mat_vec(F, inv, pts[3])
    if 0 in lam:
        raise ValueError("degenerate quadruple: three points collinear")
    return tuple(tuple(F.mul(cols[i][j], lam[j]) for j in range(3)) for i in range(3))


def map_from_correspondence(F: GF2m, src, dst) -> ProjMap:
    """The projectivity sending src[i] to dst[i] for four points in general position."""
    Ms = _frame_matrix(F, src)
    Md = _frame_matrix(F, dst)
    return ProjMap(F, mat_mul(F, Md, mat_inv(F, Ms)))


def line_through(F: GF2m, p, q) -> tuple:
    return normalize_vector(F, cross(F, p, q))


def meet(F: GF2m, l1, l2) -> tuple:
    return normalize_vector(F, cross(F, l1, l2))


def points_of_plane(F: GF2m):
    """All points of P^2(F), normalized."""
    n = F.order
    for y in range(n):
        for z in range(n):
            yield (1, y, z)
    for z in range(n):
        yield (0, 1, z)
    yield (0, 0, 1)
