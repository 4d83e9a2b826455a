"""Closed counting formulas, masses, strata tables and the verification engine."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .descent import (
    CLASS_LABELS,
    centralizer_action,
    class_representative,
    descent_set,
)
from .families import (
    DECLARED_STRATUM,
    FAMILY_IDS,
    ORDINARY_FAMILIES,
    FamilyContext,
)
from .gf2tower import FieldTower
from .plane import QUARTIC_MONOMIALS, RHO, TAU, dict_to_quartic, gamma_group, quartic_to_dict, substitute
from .quartic import (
    BITANGENTS_TO_RANK,
    ORDINARY,
    RANK1,
    RANK2,
    SUPERSINGULAR,
    TYPE13,
    find_bitangents,
    is_smooth,
    l_polynomial_of,
    stratum_of,
    two_rank,
)

STRATA = (ORDINARY, RANK2, RANK1, TYPE13, SUPERSINGULAR)

STRATUM_FAMILIES = {
    ORDINARY: ORDINARY_FAMILIES,
    RANK2: ("N4_1", "N4_2", "N4_3"),
    RANK1: ("N2_1", "N2_0"),
    TYPE13: ("N1_1",),
    SUPERSINGULAR: ("S",),
}

CLOSED_FORM = "closed form"
LITERATURE = "literature constant"
CORRECTED = "corrected"


# ------------------------------------------------------------ formulas

@dataclass(frozen=True)
class Bracket:
    """A term added only when q = residue (mod modulus)."""
    coeffs: tuple
    modulus: int
    residue: int

    def active(self, q: int) -> bool:
        return q % self.modulus == self.residue % self.modulus


@dataclass(frozen=True)
class CountFormula:
    """(polynomial in q + active brackets) / denominator, as an exact integer."""
    name: str
    coeffs: tuple                   # highest degree first
    denominator: int = 1
    brackets: tuple = ()
    provenance: str = CLOSED_FORM

    def numerator(self, q: int) -> int:
        total = _horner(self.coeffs, q)
        for b in self.brackets:
            if b.active(q):
                total += _horner(b.coeffs, q)
        return total

    def __call__(self, q: int) -> int:
        if q < 2 or q & (q - 1):
            raise ValueError(f"q = {q} is not a power of 2")
        num = self.numerator(q)
        if num % self.denominator:
            raise ArithmeticError(f"{self.name}: {num}/{self.denominator} is not an integer at q = {q}")
        return num // self.denominator

    def text(self) -> str:
        s = _poly_text(self.coeffs)
        for b in self.brackets:
            s += f" + [{_poly_text(b.coeffs)}]_(q={b.residue} mod {b.modulus})"
        if self.denominator != 1:
            s = f"({s})/{self.denominator}"
        return s


def _horner(coeffs, q: int) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * q + c
    return acc


def _poly_text(coeffs) -> str:
    deg = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        e = deg - i
        mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
        mag = abs(c)
        body = (str(mag) if mag != 1 or not mono else "") + mono
        parts.append(("-" if c < 0 else "+") + body)
    if not parts:
        return "0"
    s = " ".join(p[0] + " " + p[1:] for p in parts)
    return s[2:] if s.startswith("+") else "-" + s[2:]


def F(name, coeffs, denominator=1, brackets=(), provenance=CLOSED_FORM) -> CountFormula:
    return CountFormula(name, tuple(coeffs), denominator,
                        tuple(Bracket(tuple(c), m, r) for c, m, r in brackets), provenance)


# |D_gamma| for the six class representatives
DESCENT_SIZES = {
    "1": F("|D_1|", (1, -7, 21, -35, 35, -21, 7)),
    "2": F("|D_2|", (1, -3, 1, 5, -5, -1, 3)),
    "3": F("|D_3|", (1, -1, 0, -2, 2, 0, 1)),
    "4": F("|D_4|", (1, -1, -1, 1, -1, 1, 1)),
    "7_0": F("|D_7_0|", (1, 0, 0, 0, 0, 0, 0)),
    "7_1": F("|D_7_1|", (1, 0, 0, 0, 0, 0, 0)),
}

# classes with all bitangents defined over k_d, per family
FAMILY_COUNTS = {
    "O_1": F("O_1", (1, -7, 42, -140, 343, -462, 328), 168),
    "O_2": F("O_2", (1, -3, 6, -12, 15, -6, 0), 8),
    "O_3": F("O_3", (1, -1, 0, -2, 4, -6, 7), 3),
    "O_4": F("O_4", (1, -1, 0, 0, -1, -2, 4), 4),
    "O_7_0": F("O_7_0", (1, 0, 0, 0, 0, 0, 6), 7),
    "O_7_1": F("O_7_1", (1, 0, 0, 0, 0, 0, 6), 7),
    "N4_1": F("N4_1", (1, -3, 6, -7, 5, -2), 6),
    "N4_2": F("N4_2", (1, -1, 0, -1, 1, 0), 2),
    "N4_3": F("N4_3", (1, 0, 0, -1, 2, -2), 3),
    "N2_1": F("N2_1", (1, -1, -1, 1, 0)),            # (q-1)^2 q (q+1)
    "N2_0": F("N2_0", (1, -1, 0, 0)),
    "N1_1": F("N1_1", (1, -1, 0, 0)),
    # (q + delta)(2q - 1) + eps, delta = [2]_{q=1 (3)}, eps = [6]_{q=1 (9)}
    "S": F("S", (2, -1, 0), brackets=(((4, -2), 3, 1), ((6,), 9, 1))),
}

# The four-bitangent counts above omit the fixed points of (rho, t), t a
# primitive cube root of unity, which exist exactly when q = 1 mod 3.
FAMILY_COUNTS_CORRECTED = dict(FAMILY_COUNTS)
FAMILY_COUNTS_CORRECTED["N4_1"] = F("N4_1", (1, -3, 6, -7, 5, -2), 6,
                                    brackets=(((4, -4, 0), 3, 1),), provenance=CORRECTED)
FAMILY_COUNTS_CORRECTED["N4_3"] = F("N4_3", (1, 0, 0, -1, 2, -2), 3,
                                    brackets=(((4, -4, 0), 3, 1),), provenance=CORRECTED)

# classes of smooth plane quartics, by stratum
QUARTIC_STRATA = {
    ORDINARY: F("ordinary", (1, -1, 1, -3, 5, -6, 7)),
    RANK2: F("2-rank two", (1, -1, 1, -2, 2, -1)),
    RANK1: F("2-rank one", (1, 0, -2, 1, 0)),
    TYPE13: F("type 1/3", (1, -1, 0, 0)),
    SUPERSINGULAR: F("supersingular", (2, -1, 0), brackets=(((4, -2), 3, 1), ((6,), 9, 1))),
}
QUARTIC_TOTAL = F("smooth plane quartics", (1, 0, 1, -1, 2, 0, 4),
                  brackets=(((-4, 2), 3, 2), ((6,), 9, 1)))

QUARTIC_STRATA_CORRECTED = dict(QUARTIC_STRATA)
QUARTIC_STRATA_CORRECTED[RANK2] = F("2-rank two", (1, -1, 1, -2, 2, -1),
                                    brackets=(((2, -2, 0), 3, 1),), provenance=CORRECTED)
QUARTIC_TOTAL_CORRECTED = F("smooth plane quartics", (1, 0, 1, -1, 2, 0, 4),
                            brackets=(((-4, 2), 3, 2), ((6,), 9, 1), ((2, -2, 0), 3, 1)),
                            provenance=CORRECTED)

# classes of all genus-3 curves (plane quartics plus hyperelliptic curves)
GENUS3_STRATA = {
    ORDINARY: F("ordinary", (1, 1, -1, -1, 1, -4, 7), provenance=LITERATURE),
    RANK2: F("2-rank two", (1, 1, -3, 1, 1, -1), provenance=LITERATURE),
    RANK1: F("2-rank one", (1, 4, -4, 1, -2), provenance=LITERATURE),
    TYPE13: F("type 1/3", (1, 1, 0, 0), brackets=(((12,), 7, 1),), provenance=LITERATURE),
    SUPERSINGULAR: F("supersingular", (2, -1, 0), brackets=(((4, -2), 3, 1), ((6,), 9, 1)),
                     provenance=LITERATURE),
}
GENUS3_TOTAL = F("genus-3 curves", (1, 2, 1, 1, 1, 1, 2),
                 brackets=(((-4, 2), 3, 2), ((6,), 9, 1), ((12,), 7, 1)), provenance=LITERATURE)

# F_q-points of the moduli strata: non-hyperelliptic, hyperelliptic, all
MASS_NONHYPERELLIPTIC = {
    ORDINARY: F("M3nh ordinary", (1, -1, 0, 0, 0, 0, 1)),
    RANK2: F("M3nh 2-rank two", (1, -1, 0, 0, 0, 0)),
    RANK1: F("M3nh 2-rank one", (1, -1, 0, 0, 0)),
    TYPE13: F("M3nh type 1/3", (1, -1, 0, 0)),
    SUPERSINGULAR: F("M3nh supersingular", (1, 0, 0)),
}
MASS_HYPERELLIPTIC = {
    ORDINARY: F("M3h ordinary", (1, -1, 0, 0, 0, 0), provenance=LITERATURE),
    RANK2: F("M3h 2-rank two", (1, -2, 1, 0, 0), provenance=LITERATURE),
    RANK1: F("M3h 2-rank one", (2, -2, 0, 0), provenance=LITERATURE),
    TYPE13: F("M3h type 1/3", (1, 0, 0), provenance=LITERATURE),
    SUPERSINGULAR: F("M3h supersingular", (0,), provenance=LITERATURE),
}
MASS_ALL = {
    ORDINARY: F("M3 ordinary", (1, 0, -1, 0, 0, 0, 1)),
    RANK2: F("M3 2-rank two", (1, 0, -2, 1, 0, 0)),
    RANK1: F("M3 2-rank one", (1, 1, -2, 0, 0)),
    TYPE13: F("M3 type 1/3", (1, 0, 0, 0)),
    SUPERSINGULAR: F("M3 supersingular", (1, 0, 0)),
}
MODULI_TOTAL = F("|M3(F_q)|", (1, 1, 0, 0, 0, 0, 1))


def strata_table(q: int) -> dict:
    """{stratum: {'nh', 'h', 'all'}} point counts of the moduli strata."""
    return {s: {"nh": MASS_NONHYPERELLIPTIC[s](q), "h": MASS_HYPERELLIPTIC[s](q), "all": MASS_ALL[s](q)}
            for s in STRATA}


def hyperelliptic_class_counts(q: int) -> dict:
    """Classes of hyperelliptic curves per stratum: genus-3 rows minus quartic rows."""
    return {s: GENUS3_STRATA[s](q) - QUARTIC_STRATA[s](q) for s in STRATA}


# fixed points of the centralizer elements on D_gamma ------------------------

# (q^2-3q+3)(q-1)^2 = q^4 - 5q^3 + 10q^2 - 9q + 3
_AB_QM1SQ = (1, -5, 10, -9, 3)
# (q^2-1)(q^2-3q+3) = q^4 - 3q^3 + 2q^2 + 3q - 3
_TAU_FIX = (1, -3, 2, 3, -3)
# (q^2-q-1)(q-1)^2 = q^4 - 3q^3 + 2q^2 + q - 1
_RHOTAU_FIX = (1, -3, 2, 1, -1)


FIXED_POINT_FORMULAS = {
    ("1", "2"): F("|Q_k(g2)|", _AB_QM1SQ),
    ("1", "3"): F("|Q_k(g3)|", (1, -3, 3)),
    ("1", "4"): F("|Q_k(g4)|", (1, -2, 1)),
    ("1", "7_0"): F("|Q_k(g7_0)|", (1,)),
    ("1", "7_1"): F("|Q_k(g7_1)|", (1,)),
    ("2", "g"): F("|D_2(g)|", _AB_QM1SQ),
    ("2", "t"): F("|D_2(tau)|", _TAU_FIX),
    ("2", "gt"): F("|D_2(g tau)|", _TAU_FIX),
    ("2", "r"): F("|D_2(rho)|", (1, -2, 1)),
    ("2", "r3"): F("|D_2(rho^3)|", (1, -2, 1)),
    ("2", "rt"): F("|D_2(rho tau)|", _RHOTAU_FIX),
    ("2", "tr"): F("|D_2(tau rho)|", _RHOTAU_FIX),
    ("3", "g"): F("|D_3(g)|", (1, -3, 3)),
    ("3", "g2"): F("|D_3(g^2)|", (1, -3, 3)),
    ("4", "g"): F("|D_4(g)|", (1, -2, 1)),
    ("4", "g2"): F("|D_4(g^2)|", (1, -1, -2, 1, 1)),
    ("4", "g3"): F("|D_4(g^3)|", (1, -2, 1)),
}
for _lab in ("7_0", "7_1"):
    for _i in range(1, 7):
        FIXED_POINT_FORMULAS[(_lab, f"g{_i}")] = F(f"|D_{_lab}(g^{_i})|", (1,))


def centralizer_element(label: str, name: str) -> int:
    """Index in Gamma of a named element of the centralizer of a class representative."""
    G = gamma_group()
    if label == "1":
        return class_representative(name)
    g = class_representative(label)
    if name.startswith("g") and name[1:].isdigit():
        cur = G.identity
        for _ in range(int(name[1:])):
            cur = G.mul[cur][g]
        return cur
    if name == "g":
        return g
    t, r = G.element(TAU), G.element(RHO)
    return {"t": t, "gt": G.mul[g][t], "r": r, "r3": G.mul[G.mul[r][r]][r],
            "rt": G.mul[r][t], "tr": G.mul[t][r]}[name]


def fixed_point_counts(tower: FieldTower) -> dict:
    """{(label, element name): |D_label(element)|} by enumeration."""
    out = {}
    cache = {}
    fixed = {}
    for (label, name) in FIXED_POINT_FORMULAS:
        if label not in cache:
            cache[label] = centralizer_action(tower, label)
        A = cache[label]
        g = centralizer_element(label, name)
        if label not in fixed:
            fixed[label] = A.fixed_counts()
        out[(label, name)] = fixed[label][A.elements.index(g)]
    return out


# non-ordinary fixed-point formulas: (family, element) -> formula in q and N
def family_fixed_point_formulas(ctx: FamilyContext) -> dict:
    """{(family, element): expected |X(element)|} for the displayed cases."""
    q, k = ctx.q, ctx.k
    N3, N9 = len(ctx.mu3), len(ctx.mu9)
    out = {
        ("N4_1", ("tau", 1)): N3 * (q - 1) ** 2 * q,
        ("N4_1", ("rho", 1)): N3 * (q - 1),
        ("N4_2", ("tau", 1)): N3 * (q - 1) ** 2 * q,
        ("N4_3", ("rho", 1)): N3 * (q - 1),
        ("N2_1", (1, 1)): 2 * N3 * (q - 1) ** 2 * q,
    }
    for t in ctx.mu3:
        if t != 1:
            out[("N4_1", ("1", t))] = 0
            out[("N2_1", (t, 0))] = 0
    for t in ctx.mu9:
        for v in range(q):
            Nv = q if v == 0 else 1
            if t == 1:
                val = N9 * q * q * Nv
            elif k.pow(t, 3) == 1:
                val = N9 * q * Nv
            else:
                val = N9
            out[("S", (t, v))] = val
    return out


# ------------------------------------------------------------ masses

def mass_by_sizes(ctx: FamilyContext, fids) -> Fraction:
    """Sum of |family| / |group| over the given families."""
    return sum((Fraction(len(ctx.members(f)), len(ctx.elements(f))) for f in fids), Fraction(0))


def mass_by_orbits(ctx: FamilyContext, fids) -> Fraction:
    """Sum of 1 / |Aut_k| over class representatives."""
    total = Fraction(0)
    for f in fids:
        order = len(ctx.elements(f))
        for o in ctx.orbits(f):
            total += Fraction(o.size, order)
    return total


# ------------------------------------------------------------ reports

@dataclass
class Check:
    section: str
    name: str
    expected: object
    got: object
    ok: bool
    note: str = ""

    def as_dict(self) -> dict:
        return {"section": self.section, "name": self.name, "expected": _jsonable(self.expected),
                "got": _jsonable(self.got), "ok": self.ok, "note": self.note}


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass
class Report:
    q: int
    depth: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0
    generators: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def add(self, section, name, expected, got, note="", ok=None):
        if ok is None:
            ok = expected == got
        self.checks.append(Check(section, name, expected, got, bool(ok), note))

    def to_json(self) -> str:
        return json.dumps({"q": self.q, "depth": self.depth, "ok": self.ok,
                           "seconds": round(self.seconds, 3), "generators": self.generators,
                           "checks": [c.as_dict() for c in self.checks]}, indent=1, sort_keys=True)

    def to_markdown(self) -> str:
        lines = [f"# verify q={self.q} depth={self.depth}", "",
                 f"{len(self.checks) - len(self.failures)}/{len(self.checks)} checks passed "
                 f"in {self.seconds:.1f}s", "",
                 "| section | check | expected | got | ok | note |", "|---|---|---|---|---|---|"]
        for c in self.checks:
            lines.append(f"| {c.section} | {c.name} | {_short(c.expected)} | {_short(c.got)} | "
                         f"{'yes' if c.ok else 'NO'} | {c.note} |")
        return "\n".join(lines)


def _short(x) -> str:
    s = str(_jsonable(x))
    return s if len(s) <= 60 else s[:57] + "..."


DEPTHS = ("formulas", "enumerate", "sweep")


def verify(q: int, depth: str = "enumerate", threads: int = 1, seed: int = 0,
           families=None, samples: int = 200, newton_samples: int = 1000,
           tower: FieldTower | None = None) -> Report:
    """Cross-check the closed formulas against enumeration at one q."""
    if depth not in DEPTHS:
        raise ValueError(f"depth must be one of {DEPTHS}")
    if depth == "sweep" and q != 2:
        raise ValueError("the exhaustive sweep is only available at q = 2")
    start = time.time()
    rep = Report(q, depth)
    check_formulas(rep, q)
    if depth != "formulas":
        tower = tower or FieldTower.for_q(q)
        ctx = FamilyContext(tower)
        rep.generators = {k: (list(v) if isinstance(v, tuple) else v) for k, v in ctx.gens.as_dict().items()}
        fids = list(families) if families else list(FAMILY_IDS)
        check_descent(rep, tower)
        check_families(rep, ctx, fids, threads, seed, samples, newton_samples)
        if set(fids) == set(FAMILY_IDS):
            check_strata(rep, ctx)
    if depth == "sweep":
        result = sweep_q2(ctx)
        for name, (exp, got) in result.checks.items():
            rep.add("sweep", name, exp, got)
    rep.seconds = time.time() - start
    return rep


def check_formulas(rep: Report, q: int) -> None:
    """Formula-level consistency: strata rows and columns, totals."""
    S = "formulas"
    rows = [QUARTIC_STRATA[s](q) for s in STRATA]
    rep.add(S, "quartic strata sum to the total", QUARTIC_TOTAL(q), sum(rows))
    rows_c = [QUARTIC_STRATA_CORRECTED[s](q) for s in STRATA]
    rep.add(S, "corrected strata sum to the corrected total", QUARTIC_TOTAL_CORRECTED(q), sum(rows_c))
    ordinary = sum(FAMILY_COUNTS[f](q) for f in ORDINARY_FAMILIES)
    rep.add(S, "ordinary family counts sum to the ordinary row", QUARTIC_STRATA[ORDINARY](q), ordinary)
    for s in STRATA[1:]:
        rep.add(S, f"{s} family counts sum to the row", QUARTIC_STRATA[s](q),
                sum(FAMILY_COUNTS[f](q) for f in STRATUM_FAMILIES[s]))
        rep.add(S, f"{s} corrected family counts sum to the corrected row",
                QUARTIC_STRATA_CORRECTED[s](q),
                sum(FAMILY_COUNTS_CORRECTED[f](q) for f in STRATUM_FAMILIES[s]))
    g3 = [GENUS3_STRATA[s](q) for s in STRATA]
    rep.add(S, "genus-3 strata sum to the genus-3 total", GENUS3_TOTAL(q), sum(g3), note=LITERATURE)
    hyp = hyperelliptic_class_counts(q)
    rep.add(S, "hyperelliptic class counts are non-negative", True, all(v >= 0 for v in hyp.values()),
            note=LITERATURE)
    rep.add(S, "no supersingular hyperelliptic classes", 0, hyp[SUPERSINGULAR], note=LITERATURE)
    table = strata_table(q)
    for s in STRATA:
        rep.add(S, f"moduli {s}: nh + h = all", table[s]["all"], table[s]["nh"] + table[s]["h"])
    rep.add(S, "non-hyperelliptic column sums to q^6 + 1", q ** 6 + 1, sum(t["nh"] for t in table.values()))
    rep.add(S, "moduli column sums to q^6 + q^5 + 1", MODULI_TOTAL(q), sum(t["all"] for t in table.values()))


def check_descent(rep: Report, tower: FieldTower) -> None:
    q = tower.q
    for label in CLASS_LABELS:
        rep.add("descent sets", f"|D_{label}|", DESCENT_SIZES[label](q),
                sum(1 for _ in descent_set(tower, label)))
    counts = fixed_point_counts(tower)
    for key, formula in FIXED_POINT_FORMULAS.items():
        rep.add("fixed points", formula.name, formula(q), counts[key])


def check_families(rep: Report, ctx: FamilyContext, fids, threads: int, seed: int, samples: int,
                   newton_samples: int = 0) -> None:
    q = ctx.q
    rng = random.Random(seed)
    fixed_formulas = family_fixed_point_formulas(ctx)
    for fid in fids:
        A = ctx.action(fid)
        b = A.burnside_count(threads)
        orbits = A.orbits()
        rep.add("burnside", f"{fid}: Burnside = orbits", b, len(orbits))
        printed = FAMILY_COUNTS[fid](q)
        corrected = FAMILY_COUNTS_CORRECTED[fid](q)
        rep.add("class counts", f"{fid} vs closed form", printed, b)
        if corrected != printed:
            rep.add("class counts", f"{fid} vs corrected form", corrected, b, note=CORRECTED)
        if q <= 4:
            pts = A.points
        else:
            pts = rng.sample(A.points, min(samples, len(A.points)))
        bad = _aut_mismatches(ctx, fid, pts)
        rep.add("aut tables", f"{fid}: table = stabilizer", [], bad[:3],
                note=f"{len(pts)} models" + ("" if q <= 4 else " sampled"))
        if newton_samples:
            count = None if q <= 4 and newton_samples >= len(ctx.members(fid)) else newton_samples
            wrong = [Q for Q, st in stratum_samples(ctx, fid, count, seed) if st != DECLARED_STRATUM[fid]]
            n = len(ctx.members(fid)) if count is None else count
            rep.add("newton polygons", f"{fid}: strata of models = {DECLARED_STRATUM[fid]}", [], wrong[:3],
                    note=f"{n} models" + ("" if count is None else " sampled"))
        if fid == "O_1":
            continue
        fixed = A.fixed_counts(threads)
        for (f, g), val in fixed_formulas.items():
            if f == fid:
                i = A.elements.index(g)
                rep.add("fixed points", f"{fid}: |X({g})|", val, fixed[i])
        if fid in ("O_7_0", "O_7_1"):
            sevens = [o.representative for o in orbits if len(o.stabilizer) == 7]
            rep.add("aut tables", f"{fid}: classes with Aut of order 7", [ctx.klein_form(fid)], sevens)


def _aut_mismatches(ctx: FamilyContext, fid: str, pts) -> list:
    A = ctx.action(fid)
    bad = []
    for Q in pts:
        stab = A.stabilizer(Q)
        tab = ctx.aut_table(fid, Q)
        if tab is None:
            continue
        if set(tab.elements) != set(stab):
            bad.append((Q, tab.structure, len(stab)))
    return bad


def check_strata(rep: Report, ctx: FamilyContext) -> None:
    q = ctx.q
    total = 0
    for s in STRATA:
        n = sum(ctx.class_count(f) for f in STRATUM_FAMILIES[s])
        total += n
        rep.add("strata", f"{s} classes", QUARTIC_STRATA[s](q), n)
        if QUARTIC_STRATA_CORRECTED[s](q) != QUARTIC_STRATA[s](q):
            rep.add("strata", f"{s} classes (corrected)", QUARTIC_STRATA_CORRECTED[s](q), n, note=CORRECTED)
        by_size = mass_by_sizes(ctx, STRATUM_FAMILIES[s])
        by_orbit = mass_by_orbits(ctx, STRATUM_FAMILIES[s])
        rep.add("mass", f"{s} mass by sizes", MASS_NONHYPERELLIPTIC[s](q), by_size)
        rep.add("mass", f"{s} mass by orbits", by_size, by_orbit)
    rep.add("strata", "smooth quartic classes", QUARTIC_TOTAL(q), total)
    if QUARTIC_TOTAL_CORRECTED(q) != QUARTIC_TOTAL(q):
        rep.add("strata", "smooth quartic classes (corrected)", QUARTIC_TOTAL_CORRECTED(q), total, note=CORRECTED)


# ------------------------------------------------------------ newton polygon / bitangent samples

def stratum_samples(ctx: FamilyContext, fid: str, count: int | None, seed: int = 0):
    """(Q, stratum of N_Q) for all members (count=None) or a random sample."""
    pts = ctx.members(fid)
    if count is not None and count < len(pts):
        pts = random.Random(seed).sample(pts, count)
    for Q in pts:
        yield Q, stratum_of(l_polynomial_of(ctx.tower, ctx.model(fid, Q)))


# ------------------------------------------------------------ the q = 2 sweep

@dataclass
class SweepResult:
    quartics: int
    orbits: int
    smooth_orbits: int
    classes: dict                   # (fid, representative) -> orbit size
    bitangents: dict                # bitangent count -> number of smooth orbits
    checks: dict                    # name -> (expected, got)

    @property
    def ok(self) -> bool:
        return all(e == g for e, g in self.checks.values())


def _expected_bitangent_histogram(q: int) -> dict:
    rows = {s: QUARTIC_STRATA_CORRECTED[s](q) for s in STRATA}
    return {7: rows[ORDINARY], 4: rows[RANK2], 2: rows[RANK1], 1: rows[TYPE13] + rows[SUPERSINGULAR]}


def _quartic_maps_f2():
    """The 168 F2-linear maps on 15-bit quartic coefficient vectors."""
    G = gamma_group()
    n = len(QUARTIC_MONOMIALS)
    from .gf2tower import GF2m
    F2 = GF2m(1)
    maps = []
    for rows in G.mats:
        cols = []
        for j in range(n):
            unit = tuple(1 if i == j else 0 for i in range(n))
            img = dict_to_quartic(substitute(F2, quartic_to_dict(unit), rows))
            cols.append(sum(1 << (n - 1 - i) for i, c in enumerate(img) if c))
        maps.append(cols)
    return maps


def _apply_f2(cols, keys: np.ndarray) -> np.ndarray:
    n = len(cols)
    out = np.zeros_like(keys)
    for j, c in enumerate(cols):
        bit = (keys >> (n - 1 - j)) & 1
        out ^= bit * c
    return out


def sweep_q2(ctx: FamilyContext, on_progress: Callable | None = None) -> SweepResult:
    """Classify every nonzero quartic over F2 up to PGL(3, 2)."""
    if ctx.q != 2:
        raise ValueError("the sweep runs over F2 only")
    n = len(QUARTIC_MONOMIALS)
    keys = np.arange(1, 1 << n, dtype=np.int64)
    maps = _quartic_maps_f2()
    canon = keys.copy()
    for cols in maps:
        np.minimum(canon, _apply_f2(cols, keys), out=canon)
    reps, sizes = np.unique(canon, return_counts=True)
    tower = ctx.tower
    classes = {}
    bitangents = {}
    rank_mismatch = 0
    for key, size in zip(reps.tolist(), sizes.tolist()):
        qt = tuple((key >> (n - 1 - i)) & 1 for i in range(n))
        if not is_smooth(tower, qt):
            continue
        nb = len(find_bitangents(tower, qt))
        bitangents[nb] = bitangents.get(nb, 0) + 1
        if BITANGENTS_TO_RANK.get(nb) != two_rank(l_polynomial_of(tower, qt)):
            rank_mismatch += 1
        fid, R, _ = ctx.reduce_to_family(qt)
        if (fid, R) in classes:
            raise AssertionError(f"two PGL(3,2)-orbits reduce to the same model {fid} {R}")
        classes[(fid, R)] = size
        if on_progress:
            on_progress(len(classes))
    expected = {(fid, o.representative): len(ctx.elements(fid)) // o.size
                for fid in FAMILY_IDS for o in ctx.orbits(fid)}
    aut_ok = all(168 // size == expected.get(key) for key, size in classes.items())
    checks = {
        "smooth classes": (QUARTIC_TOTAL(2), len(classes)),
        "classes match family orbits": (sorted(expected), sorted(classes)),
        "168 / orbit size = |Aut_k|": (True, aut_ok),
        "bitangent count matches 2-rank": (0, rank_mismatch),
        "bitangent counts": (_expected_bitangent_histogram(2), dict(sorted(bitangents.items(), reverse=True))),
    }
    return SweepResult(len(keys), len(reps), len(classes), classes, bitangents, checks)
