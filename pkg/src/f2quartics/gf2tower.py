"""Binary finite fields GF(2^m) and the tower F2 < k = GF(q) < k_d.

Elements are plain Python ints holding the bit-packed polynomial-basis
representative; which field an int belongs to is carried by the caller
(a ``GF2m`` object, or a level index ``d`` into a ``FieldTower``).

Each GF(2^m) is defined by the lexicographically least primitive
polynomial of degree m, so ``x`` (the int 2) generates the multiplicative
group.  Embeddings k_d -> k_e are chosen once, deterministically, so that
they commute along every chain of levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

from . import upoly

# least primitive polynomial over F2 of each degree, as an int bitmask
PRIMITIVE_MODULI: dict[int, int] = {
    1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x83, 8: 0x11D,
    9: 0x211, 10: 0x409, 11: 0x805, 12: 0x1053, 13: 0x201B, 14: 0x402B,
    15: 0x8003, 16: 0x1002D, 17: 0x20009, 18: 0x40027, 19: 0x80027,
    20: 0x100009, 21: 0x200005, 22: 0x400003, 23: 0x800021, 24: 0x100001B,
    25: 0x2000009, 26: 0x4000047, 27: 0x8000027, 28: 0x10000009,
    29: 0x20000005, 30: 0x40000053, 31: 0x80000009, 32: 0x1000000AF,
    33: 0x200000053, 34: 0x4000000E7, 35: 0x800000005, 36: 0x1000000077,
    37: 0x200000003F, 38: 0x4000000063, 39: 0x8000000011, 40: 0x10000000039,
    41: 0x20000000009, 42: 0x4000000003F, 43: 0x80000000059,
    44: 0x100000000065, 45: 0x20000000001B, 46: 0x40000000012F,
    47: 0x800000000021, 48: 0x10000000000B7,
}

DEFAULT_LEVELS = (1, 2, 3, 4, 5, 6, 7, 9, 12)

TABLE_LIMIT = 16  # use log/exp tables up to GF(2^16)


# ---------------------------------------------------------------- F2 algebra

class BitLinearMap:
    """An F2-linear map between bit vectors, applied through byte tables."""

    __slots__ = ("src_bits", "_tables")

    def __init__(self, images: list[int]):
        self.src_bits = len(images)
        tables = []
        for start in range(0, len(images), 8):
            chunk = images[start:start + 8]
            tab = [0] * (1 << len(chunk))
            for v in range(1, len(tab)):
                low = v & -v
                tab[v] = tab[v ^ low] ^ chunk[low.bit_length() - 1]
            tables.append(tab)
        self._tables = tables

    def __call__(self, x: int) -> int:
        out = 0
        for tab in self._tables:
            if x:
                out ^= tab[x & 0xFF]
                x >>= 8
            else:
                break
        return out


def f2_echelon(vectors: list[int]) -> list[tuple[int, int, int]]:
    """Reduce vectors to echelon form, tracking combinations.

    Returns triples (pivot_bit, reduced_vector, combination_mask) where the
    combination mask records which input vectors were summed.
    """
    rows: list[tuple[int, int, int]] = []
    for i, v in enumerate(vectors):
        combo = 1 << i
        for piv, rv, rc in rows:
            if (v >> piv) & 1:
                v ^= rv
                combo ^= rc
        if v:
            piv = v.bit_length() - 1
            # keep the basis fully reduced on pivot columns
            new_rows = []
            for p2, rv, rc in rows:
                if (rv >> piv) & 1:
                    rv ^= v
                    rc ^= combo
                new_rows.append((p2, rv, rc))
            rows = new_rows
            rows.append((piv, v, combo))
    return rows


def f2_kernel(images: list[int]) -> list[int]:
    """Basis of the kernel of the F2-linear map sending e_i to images[i]."""
    kernel = []
    rows: list[tuple[int, int, int]] = []
    for i, v in enumerate(images):
        combo = 1 << i
        for piv, rv, rc in rows:
            if (v >> piv) & 1:
                v ^= rv
                combo ^= rc
        if v:
            rows.append((v.bit_length() - 1, v, combo))
        else:
            kernel.append(combo)
    return kernel


def f2_span(basis: list[int]) -> list[int]:
    """All elements of the F2-span of the given (independent) vectors, Gray-code order."""
    out = [0]
    cur = 0
    for i in range(1, 1 << len(basis)):
        cur ^= basis[(i & -i).bit_length() - 1]
        out.append(cur)
    return out


def solve_f2(images: list[int], target: int) -> int | None:
    """Some x with sum of images[i] over bits i of x equal to target, else None."""
    rows = f2_echelon(images)
    x = 0
    for piv, rv, rc in sorted(rows, key=lambda r: -r[0]):
        if (target >> piv) & 1:
            target ^= rv
            x ^= rc
    return x if target == 0 else None


# ---------------------------------------------------------------- one field

class GF2m:
    """The field GF(2^m) with elements as ints below 2^m."""

    def __init__(self, m: int, modulus: int | None = None):
        if modulus is None:
            modulus = PRIMITIVE_MODULI[m]
        if modulus.bit_length() != m + 1:
            raise ValueError("modulus degree does not match m")
        self.m = m
        self.modulus = modulus
        self.order = 1 << m
        self.mask = self.order - 1
        self.use_tables = m <= TABLE_LIMIT
        if self.use_tables:
            self._build_tables()

    def __repr__(self):
        return f"GF2m(m={self.m}, modulus={self.modulus:#x})"

    def _build_tables(self):
        n1 = self.order - 1
        exp = [0] * (2 * n1 + 1)
        log = [0] * self.order
        x = 1
        g = self.reduce(2)
        for i in range(n1):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        if x != 1:
            raise ValueError("modulus is not primitive")
        for i in range(n1, 2 * n1 + 1):
            exp[i] = exp[i - n1]
        self.exp = exp
        self.log = log

    def reduce(self, a: int) -> int:
        m, mod = self.m, self.modulus
        while a.bit_length() > m:
            a ^= mod << (a.bit_length() - 1 - m)
        return a

    def _slow_mul(self, a: int, b: int) -> int:
        m, mod = self.m, self.modulus
        top = 1 << m
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    # arithmetic -------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self.use_tables:
            return self.exp[self.log[a] + self.log[b]]
        return self._slow_mul(a, b)

    def sq(self, a: int) -> int:
        return self.sq_map(a)

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.use_tables:
            return self.exp[(self.order - 1 - self.log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.use_tables:
            return self.exp[(self.log[a] * e) % (self.order - 1)]
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def sqrt(self, a: int) -> int:
        return self.sqrt_map(a)

    def generator(self) -> int:
        return self.reduce(2)

    def elements(self) -> range:
        return range(self.order)

    def abs_trace(self, a: int) -> int:
        return (a & self.trace_mask).bit_count() & 1

    # linear maps ------------------------------------------------------
    @cached_property
    def sq_map(self) -> BitLinearMap:
        return BitLinearMap([self._slow_mul(1 << i, 1 << i) for i in range(self.m)])

    @cached_property
    def sqrt_map(self) -> BitLinearMap:
        imgs = []
        for i in range(self.m):
            x = 1 << i
            for _ in range(self.m - 1):
                x = self._slow_mul(x, x)
            imgs.append(x)
        return BitLinearMap(imgs)

    def frobenius_map(self, squarings: int) -> BitLinearMap:
        """x -> x^(2^squarings) as a linear map (cached)."""
        squarings %= self.m
        cache = self.__dict__.setdefault("_frob_cache", {})
        if squarings not in cache:
            imgs = []
            for i in range(self.m):
                x = 1 << i
                for _ in range(squarings):
                    x = self._slow_mul(x, x)
                imgs.append(x)
            cache[squarings] = BitLinearMap(imgs)
        return cache[squarings]

    @cached_property
    def trace_mask(self) -> int:
        mask = 0
        for i in range(self.m):
            x, t = 1 << i, 0
            for _ in range(self.m):
                t ^= x
                x = self._slow_mul(x, x)
            if t == 1:
                mask |= 1 << i
            elif t != 0:
                raise AssertionError("absolute trace outside F2")
        return mask

    def mul_map(self, c: int) -> BitLinearMap:
        return BitLinearMap([self.mul(c, 1 << i) for i in range(self.m)])


# ---------------------------------------------------------------- generators

@dataclass(frozen=True)
class GeneratorSet:
    """Fixed special elements used to write down the normal models.

    Field elements are ints; ``*_level`` says where they live.
    """

    q: int
    r: int                 # k, not in AS(k)
    u: int                 # k2, u^2 + u = r
    o3_s: int              # k, v^3 + v^2 = s irreducible
    o3_t: int              # k, t^2 + t + 1 = 1/s
    o3_v: int              # k3
    n3_s: int              # k, v^3 + v = s irreducible
    n3_t: int              # k, t^2 + t + 1 = 1/s
    n3_v: int              # k3
    o4_t: int              # k, 1/t not in AS(k)
    w: int                 # k4
    alpha: int             # k2 (as element of level 4 too: see alpha_k4)
    alpha_k4: int
    zeta0: int             # k7, root of the first polynomial of S0
    zeta1: int             # k7, root of the first polynomial of S1
    septic0: tuple = field(default=())
    septic1: tuple = field(default=())

    def as_dict(self) -> dict:
        return {
            "q": self.q, "r": self.r, "u": self.u,
            "o3_s": self.o3_s, "o3_t": self.o3_t, "o3_v": self.o3_v,
            "n3_s": self.n3_s, "n3_t": self.n3_t, "n3_v": self.n3_v,
            "o4_t": self.o4_t, "w": self.w, "alpha": self.alpha,
            "zeta0": self.zeta0, "zeta1": self.zeta1,
            "septic0": list(self.septic0), "septic1": list(self.septic1),
        }


# ---------------------------------------------------------------- the tower

class FieldTower:
    """k = GF(2^n) together with the extensions k_d = GF(2^(n d)).

    Levels are built lazily.  Elements of level d are ints of the field
    ``self.field(d)``; ``embed``/``descend`` move them between levels.
    """

    def __init__(self, n: int, levels=DEFAULT_LEVELS, moduli: dict[int, int] | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.q = 1 << n
        self.levels = tuple(sorted(set(levels) | {1}))
        self.moduli = dict(PRIMITIVE_MODULI)
        if moduli:
            self.moduli.update(moduli)
        self._fields: dict[int, GF2m] = {}
        self._embed_images: dict[tuple[int, int], int] = {}
        self._embed_maps: dict[tuple[int, int], BitLinearMap] = {}
        self._descend_maps: dict[tuple[int, int], BitLinearMap] = {}

    @classmethod
    def for_q(cls, q: int, **kw) -> "FieldTower":
        if q < 2 or q & (q - 1):
            raise ValueError(f"q={q} is not a power of 2")
        return cls(q.bit_length() - 1, **kw)

    def __repr__(self):
        return f"FieldTower(q={self.q}, levels={self.levels})"

    # fields -------------------------------------------------------------
    def field(self, d: int) -> GF2m:
        if d not in self._fields:
            if d not in self.levels:
                raise ValueError(f"level {d} is not part of this tower")
            m = self.n * d
            self._fields[d] = GF2m(m, self.moduli[m])
        return self._fields[d]

    @property
    def k(self) -> GF2m:
        return self.field(1)

    # embeddings ---------------------------------------------------------
    def _generator_image(self, d: int, e: int) -> int:
        """Image in k_e of the generator of k_d under the chosen embedding."""
        key = (d, e)
        if key in self._embed_images:
            return self._embed_images[key]
        if e % d:
            raise ValueError(f"level {d} does not divide level {e}")
        Fe = self.field(e)
        if d == e:
            img = Fe.generator()
        else:
            Fd = self.field(d)
            poly = [(Fd.modulus >> i) & 1 for i in range(Fd.m + 1)]
            lower = [c for c in self.levels if d % c == 0 and c < d]
            img = None
            for cand in self._subfield_roots(poly, Fe, Fd.m):
                ok = True
                for c in lower:
                    # phi_{d,e}(phi_{c,d}(g_c)) must equal phi_{c,e}(g_c)
                    via_d = self._apply_poly_basis(self._generator_image(c, d), Fd, cand, Fe)
                    if via_d != self._generator_image(c, e):
                        ok = False
                        break
                if ok:
                    img = cand
                    break
            if img is None:
                raise AssertionError(f"no compatible embedding of level {d} into {e}")
        self._embed_images[key] = img
        return img

    @staticmethod
    def _apply_poly_basis(x: int, Fd: GF2m, gen_image: int, Fe: GF2m) -> int:
        # evaluate the polynomial with bit-coefficients x at gen_image
        out, power = 0, 1
        while x:
            if x & 1:
                out ^= power
            power = Fe.mul(power, gen_image)
            x >>= 1
        return out

    @staticmethod
    def _subfield_roots(poly: list[int], Fe: GF2m, sub_m: int) -> list[int]:
        """Roots in Fe of an F2-polynomial irreducible of degree sub_m, ascending."""
        # one root by splitting, the rest by repeated squaring
        rts = upoly.roots(Fe, poly) if Fe.m <= 24 else _one_root_orbit(Fe, poly)
        return sorted(rts)

    def embed_map(self, d: int, e: int) -> BitLinearMap:
        key = (d, e)
        if key not in self._embed_maps:
            Fd, Fe = self.field(d), self.field(e)
            g = self._generator_image(d, e)
            imgs, p = [], 1
            for _ in range(Fd.m):
                imgs.append(p)
                p = Fe.mul(p, g)
            self._embed_maps[key] = BitLinearMap(imgs)
        return self._embed_maps[key]

    def embed(self, x: int, d: int, e: int) -> int:
        if d == e:
            return x
        return self.embed_map(d, e)(x)

    def descend(self, x: int, e: int, d: int) -> int:
        """Inverse of embed: the element of k_d whose image in k_e is x."""
        if d == e:
            return x
        key = (e, d)
        if key not in self._descend_maps:
            Fd, Fe = self.field(d), self.field(e)
            emb = self.embed_map(d, e)
            images = [emb(1 << i) for i in range(Fd.m)]
            # rows are fully reduced, so a pivot bit of y says whether that row is in y
            rows = f2_echelon(images)
            inv_imgs = [0] * Fe.m
            for piv, rv, rc in rows:
                inv_imgs[piv] = rc
            self._descend_maps[key] = (BitLinearMap(inv_imgs), emb)
        inv, emb = self._descend_maps[key]
        y = inv(x)
        if emb(y) != x:
            raise ValueError(f"element does not lie in level {d}")
        return y

    def in_level(self, x: int, e: int, d: int) -> bool:
        try:
            self.descend(x, e, d)
            return True
        except ValueError:
            return False

    # Frobenius and traces ---------------------------------------------
    def frobenius(self, x: int, d: int, power: int = 1) -> int:
        """x -> x^(q^power) in k_d."""
        F = self.field(d)
        return F.frobenius_map((self.n * power) % F.m)(x)

    def conjugates(self, x: int, d: int) -> list[int]:
        out = [x]
        for _ in range(d - 1):
            out.append(self.frobenius(out[-1], d))
        return out

    def rel_trace(self, x: int, from_level: int, to_level: int) -> int:
        """Trace from k_from to k_to, returned as an element of k_to."""
        if from_level % to_level:
            raise ValueError("level mismatch: target level must divide source level")
        acc, y = 0, x
        for _ in range(from_level // to_level):
            acc ^= y
            y = self.frobenius(y, from_level, to_level)
        return self.descend(acc, from_level, to_level)

    def rel_norm(self, x: int, from_level: int, to_level: int) -> int:
        if from_level % to_level:
            raise ValueError("level mismatch: target level must divide source level")
        F = self.field(from_level)
        acc, y = 1, x
        for _ in range(from_level // to_level):
            acc = F.mul(acc, y)
            y = self.frobenius(y, from_level, to_level)
        return self.descend(acc, from_level, to_level)

    def in_artin_schreier(self, r: int) -> bool:
        """True iff x^2 + x = r has a solution in k."""
        return self.k.abs_trace(r) == 0

    # special elements ---------------------------------------------------
    def roots_of_unity(self, e: int) -> list[int]:
        k = self.k
        g = gcd(e, self.q - 1)
        step = (self.q - 1) // g
        return sorted(k.pow(k.generator(), step * i) for i in range(g))

    def power_class_data(self, e: int) -> tuple[list[int], list[int]]:
        """(coset representatives of k*/(k*)^e, mu_e(k))."""
        k = self.k
        g = gcd(e, self.q - 1)
        reps = [k.pow(k.generator(), i) for i in range(g)]
        return reps, self.roots_of_unity(e)

    def hilbert90_solve(self, t: int, d: int) -> int:
        """Some s in k_d* with s / s^q = t (requires N_{k_d/k}(t) = 1)."""
        if self.rel_norm(t, d, 1) != 1:
            raise ValueError("no solution: norm of t is not 1")
        F = self.field(d)
        # kernel of s -> s + t * s^q
        images = []
        for i in range(F.m):
            s = 1 << i
            images.append(s ^ F.mul(t, self.frobenius(s, d)))
        ker = f2_kernel(images)
        if not ker:
            raise AssertionError("Hilbert 90 kernel unexpectedly trivial")
        return min(f2_span(ker)[1:])

    def additive_kernel(self, c: int, f: int) -> list[int]:
        """Sorted kernel of x -> c x^2 + f x + sqrt(x) on k."""
        if c == 0:
            raise ValueError("c must be nonzero")
        k = self.k
        images = [k.mul(c, k.sq(1 << i)) ^ k.mul(f, 1 << i) ^ k.sqrt(1 << i)
                  for i in range(k.m)]
        return sorted(f2_span(f2_kernel(images)))

    def roots_in_level(self, poly_k: list[int], d: int) -> list[int]:
        """Roots in k_d of a polynomial with coefficients in k."""
        F = self.field(d)
        lifted = upoly.trim([self.embed(c, 1, d) for c in poly_k])
        return upoly.roots(F, lifted)

    def septic_sets(self) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
        """Monic septics x^7 + a x^3 + b x + c over k in S0 and S1.

        Each polynomial is returned as its 8 coefficients (low to high).
        S0 collects the factors of x^(q^3) + x^q + x, S1 those of
        x^(q^3) + x^(q^2) + x.
        """
        if "_septics" in self.__dict__:
            return self._septics
        F7 = self.field(7)
        out = []
        for shifts in ((3, 1, 0), (3, 2, 0)):
            # kernel of the k-linear map x -> sum x^(q^i) on k7
            images = []
            for i in range(F7.m):
                x = 1 << i
                images.append(self.frobenius(x, 7, shifts[0]) ^ self.frobenius(x, 7, shifts[1]) ^ x)
            ker = sorted(f2_span(f2_kernel(images))[1:])
            seen: set[int] = set()
            polys = []
            for z in ker:
                if z in seen:
                    continue
                conj = self.conjugates(z, 7)
                seen.update(conj)
                p = [1]
                for c in conj:
                    p = upoly.mul(F7, p, [c, 1])
                polys.append(tuple(self.descend(c, 7, 1) for c in p))
            out.append(sorted(polys))
        self._septics = (out[0], out[1])
        return self._septics

    def find_family_generators(self) -> GeneratorSet:
        if "_generators" in self.__dict__:
            return self._generators
        k = self.k
        elems = list(range(1, self.q))
        r = next(x for x in elems if not self.in_artin_schreier(x))
        u = min(self.roots_in_level([r, 1, 1], 2))

        F3 = self.field(3)

        def conj_formula_holds(v, s, t, shape):
            # the closed conjugate formula for each cubic, checked against Frobenius
            vq = self.frobenius(v, 3)
            t3 = self.embed(t, 1, 3)
            if shape == "o3":
                den = F3.mul(t3, v) ^ 1
                return den != 0 and F3.div(F3.sq(v), den) == vq
            si = self.embed(k.inv(s), 1, 3)
            return F3.mul(si, F3.sq(v)) ^ F3.mul(t3, v) == vq

        def cubic_generator(poly_of_s, shape):
            for s in elems:
                poly = poly_of_s(s)
                if self.roots_in_level(poly, 1):
                    continue
                v = min(self.roots_in_level(poly, 3))
                if shape == "o3":
                    cands = self.roots_in_level([k.inv(s) ^ 1, 1, 1], 1)
                else:
                    cands = range(self.q)
                for t in cands:
                    if conj_formula_holds(v, s, t, shape):
                        return s, t, v
            raise AssertionError("no cubic generator found")

        o3_s, o3_t, o3_v = cubic_generator(lambda s: [s, 0, 1, 1], "o3")
        n3_s, n3_t, n3_v = cubic_generator(lambda s: [s, 1, 0, 1], "n3")

        if self.n % 2:
            o4_t = 1
        else:
            o4_t = next(t for t in elems if not self.in_artin_schreier(k.inv(t)))
        tt = k.mul(o4_t, o4_t)
        w_poly = [1, tt, o4_t ^ tt, 0, 1]
        F4 = self.field(4)
        w = min(x for x in self.roots_in_level(w_poly, 4) if not self.in_level(x, 4, 2))
        alpha_k4 = w ^ self.frobenius(w, 4)
        alpha = self.descend(alpha_k4, 4, 2)

        s0, s1 = self.septic_sets()
        zeta0 = min(self.roots_in_level(list(s0[0]), 7))
        zeta1 = min(self.roots_in_level(list(s1[0]), 7))
        self._generators = GeneratorSet(
            q=self.q, r=r, u=u, o3_s=o3_s, o3_t=o3_t, o3_v=o3_v,
            n3_s=n3_s, n3_t=n3_t, n3_v=n3_v, o4_t=o4_t, w=w, alpha=alpha,
            alpha_k4=alpha_k4, zeta0=zeta0, zeta1=zeta1,
            septic0=s0[0], septic1=s1[0],
        )
        return self._generators

    # serialization -----------------------------------------------------
    def dump(self) -> str:
        """Defining polynomials of all levels, one ``deg:hex`` line each."""
        lines = []
        for d in self.levels:
            m = self.n * d
            lines.append(f"{m}:{self.moduli[m]:x}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str, n: int, levels=DEFAULT_LEVELS) -> "FieldTower":
        moduli = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            deg_s, hex_s = line.split(":")
            m, poly = int(deg_s), int(hex_s, 16)
            if poly.bit_length() != m + 1:
                raise ValueError(f"bad defining polynomial for degree {m}")
            moduli[m] = poly
        return cls(n, levels=levels, moduli=moduli)


def _one_root_orbit(F: GF2m, poly: list[int]) -> list[int]:
    """Roots of an irreducible F2-polynomial in F: split once, then square."""
    p = upoly.trim(list(poly))
    # equal-degree split down to a linear factor
    found: list[int] = []
    _find_one_root(F, upoly.monic(F, p), found)
    root = found[0]
    out = {root}
    x = root
    for _ in range(len(p) - 2):
        x = F.sq(x)
        out.add(x)
    return sorted(out)


def _find_one_root(F: GF2m, g, out):
    if upoly.deg(g) == 1:
        out.append(F.mul(g[0], F.inv(g[1])))
        return
    beta = 1
    gen = F.generator()
    while True:
        t = upoly.mod(F, [0, beta], g)
        acc = t
        for _ in range(F.m - 1):
            t = upoly.mod(F, upoly.square(F, t), g)
            acc = upoly.add(F, acc, t)
        h = upoly.gcd(F, g, acc)
        if 0 < upoly.deg(h) < upoly.deg(g):
            other = upoly.divmod_(F, g, h)[0]
            _find_one_root(F, h if upoly.deg(h) <= upoly.deg(other) else other, out)
            return
        beta = F.mul(beta, gen)


def is_irreducible_f2(poly: int) -> bool:
    """Irreducibility over F2 of a bitmask polynomial (Rabin-style gcd test)."""
    m = poly.bit_length() - 1
    if m < 1:
        return False
    F2 = GF2m(1)

    def to_list(p):
        return [(p >> i) & 1 for i in range(p.bit_length())]

    p = to_list(poly)
    x = [0, 1]
    cur = x
    for i in range(1, m // 2 + 1):
        cur = upoly.mod(F2, upoly.square(F2, cur), p)
        if upoly.deg(upoly.gcd(F2, p, upoly.add(F2, cur, x))) > 0:
            return False
    return True
