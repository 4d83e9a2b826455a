"""Dense univariate polynomials over a binary field.

A polynomial is a list of field elements (ints), lowest degree first, with
no trailing zeros; the zero polynomial is ``[]``.  Every function takes the
coefficient field as its first argument.
"""

from __future__ import annotations

Poly = list[int]


def trim(p: Poly) -> Poly:
    while p and p[-1] == 0:
        p.pop()
    return p


def deg(p: Poly) -> int:
    return len(p) - 1


def add(F, p: Poly, r: Poly) -> Poly:
    if len(p) < len(r):
        p, r = r, p
    out = list(p)
    for i, c in enumerate(r):
        out[i] ^= c
    return trim(out)


def scale(F, p: Poly, c: int) -> Poly:
    if c == 0:
        return []
    mul = F.mul
    return [mul(a, c) for a in p]


def mul(F, p: Poly, r: Poly) -> Poly:
    if not p or not r:
        return []
    fm = F.mul
    out = [0] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                if b:
                    out[i + j] ^= fm(a, b)
    return trim(out)


def square(F, p: Poly) -> Poly:
    if not p:
        return []
    out = [0] * (2 * len(p) - 1)
    sq = F.sq
    for i, a in enumerate(p):
        out[2 * i] = sq(a)
    return out


def divmod_(F, p: Poly, r: Poly) -> tuple[Poly, Poly]:
    if not r:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dr = len(r) - 1
    if len(rem) <= dr:
        return [], trim(rem)
    inv_lead = F.inv(r[-1])
    fm = F.mul
    quo = [0] * (len(rem) - dr)
    for i in range(len(rem) - 1, dr - 1, -1):
        c = rem[i]
        if c:
            c = fm(c, inv_lead)
            quo[i - dr] = c
            for j in range(dr + 1):
                if r[j]:
                    rem[i - dr + j] ^= fm(c, r[j])
    return trim(quo), trim(rem[:dr])


def mod(F, p: Poly, r: Poly) -> Poly:
    return divmod_(F, p, r)[1]


def monic(F, p: Poly) -> Poly:
    if not p:
        return []
    return scale(F, p, F.inv(p[-1]))


def gcd(F, p: Poly, r: Poly) -> Poly:
    p, r = trim(list(p)), trim(list(r))
    while r:
        p, r = r, mod(F, p, r)
    return monic(F, p)


def evaluate(F, p: Poly, x: int) -> int:
    acc = 0
    fm = F.mul
    for c in reversed(p):
        acc = fm(acc, x) ^ c
    return acc


def derivative(F, p: Poly) -> Poly:
    # characteristic 2: only odd-degree terms survive
    return trim([p[i] if i % 2 else 0 for i in range(1, len(p))])


def powmod_x(F, e_squarings: int, m: Poly) -> Poly:
    """Return X^(2^e_squarings) mod m."""
    cur = mod(F, [0, 1], m)
    for _ in range(e_squarings):
        cur = mod(F, square(F, cur), m)
    return cur


def frob_power_mod(F, cur: Poly, squarings: int, m: Poly) -> Poly:
    for _ in range(squarings):
        cur = mod(F, square(F, cur), m)
    return cur


def distinct_degree(F, p: Poly, max_degree: int | None = None) -> dict[int, Poly]:
    """Split a squarefree monic p into products of irreducible factors by degree.

    Degrees are measured over the field F itself (X -> X^|F|).
    """
    p = monic(F, p)
    out: dict[int, Poly] = {}
    m = F.m
    d = 0
    xq = mod(F, [0, 1], p)
    while deg(p) > 0:
        d += 1
        if max_degree is not None and d > max_degree:
            break
        if 2 * d > deg(p):
            out[deg(p)] = p
            break
        xq = frob_power_mod(F, xq, m, p)
        g = gcd(F, p, add(F, xq, [0, 1]))
        if deg(g) > 0:
            out[d] = g
            p = divmod_(F, p, g)[0]
            xq = mod(F, xq, p)
    return out


def squarefree_part(F, p: Poly) -> Poly:
    """Product of the distinct irreducible factors of p (char 2 aware)."""
    p = monic(F, p)
    if deg(p) <= 0:
        return p
    dp = derivative(F, p)
    if not dp:
        # p is a square: take the coefficientwise square root
        return squarefree_part(F, [F.sqrt(c) for c in p[::2]])
    g = gcd(F, p, dp)
    core = divmod_(F, p, g)[0]
    if deg(g) > 0:
        rest = squarefree_part(F, g)
        core = monic(F, mul(F, core, divmod_(F, rest, gcd(F, rest, core))[0]))
    return core


def roots(F, p: Poly) -> list[int]:
    """All roots of p lying in the field F, sorted."""
    p = trim(list(p))
    if not p:
        raise ValueError("zero polynomial has every element as a root")
    if deg(p) <= 0:
        return []
    p = monic(F, p)
    found: list[int] = []
    if p[0] == 0:
        found.append(0)
        while p and p[0] == 0:
            p = p[1:]
    # restrict to the product of linear factors
    xq = powmod_x(F, F.m, p) if deg(p) > 0 else []
    g = gcd(F, p, add(F, xq, [0, 1])) if deg(p) > 0 else [1]
    _split_linear(F, g, found)
    return sorted(set(found))


def _split_linear(F, g: Poly, out: list[int]) -> None:
    if deg(g) <= 0:
        return
    if deg(g) == 1:
        out.append(F.mul(g[0], F.inv(g[1])))
        return
    # trace splitting: Tr(beta X) mod g separates roots for a suitable beta
    beta = 1
    gen = F.generator()
    for _ in range(F.m * 4 + 8):
        t = mod(F, [0, beta], g)
        acc = t
        for _ in range(F.m - 1):
            t = mod(F, square(F, t), g)
            acc = add(F, acc, t)
        h = gcd(F, g, acc)
        if 0 < deg(h) < deg(g):
            _split_linear(F, h, out)
            _split_linear(F, divmod_(F, g, h)[0], out)
            return
        beta = F.mul(beta, gen)
    raise RuntimeError("root splitting failed")


def inverse_mod(F, a: Poly, m: Poly) -> Poly | None:
    """Inverse of a modulo m, or None when gcd(a, m) is not 1."""
    r0, r1 = trim(list(m)), mod(F, a, m)
    s0, s1 = [], [1]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, add(F, s0, mul(F, q, s1))
    if deg(r0) != 0:
        return None
    return mod(F, scale(F, s0, F.inv(r0[0])), m)


def interpolate(F, xs: list[int], ys: list[int]) -> Poly:
    """The polynomial of degree < len(xs) through the points (xs[i], ys[i])."""
    n = len(xs)
    coef = list(ys)
    # Newton divided differences (char 2: subtraction is xor)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = F.div(coef[i] ^ coef[i - 1], xs[i] ^ xs[i - j])
    out: Poly = []
    for i in range(n - 1, -1, -1):
        out = add(F, mul(F, out, [xs[i], 1]), [coef[i]])
    return out


def resultant(F, f: Poly, g: Poly) -> int:
    """Res(f, g) for the actual degrees of f and g (signs vanish in char 2)."""
    f, g = trim(list(f)), trim(list(g))
    if not f or not g:
        return 0
    acc = 1
    while True:
        if deg(g) == 0:
            return F.mul(acc, F.pow(g[0], deg(f)))
        if deg(f) == 0:
            return F.mul(acc, F.pow(f[0], deg(g)))
        r = mod(F, f, g)
        if not r:
            return 0
        # Res(f, g) = lc(g)^(deg f - deg r) Res(g, r)
        acc = F.mul(acc, F.pow(g[-1], deg(f) - deg(r)))
        f, g = g, r
