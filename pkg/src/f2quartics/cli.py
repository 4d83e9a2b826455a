"""Command-line entry point: ``f2quartics {count,verify,enumerate,identify,strata}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from . import census
from .families import FAMILY_IDS, FamilyContext, parse_family
from .gf2tower import FieldTower
from .quartic import from_hex, is_smooth, l_polynomial_of, singular_point, stratum_of, to_hex, transform, proportional

THREADS_ENV = "F2QUARTICS_THREADS"
FORMATS = ("markdown", "json", "csv")
ENUMERATION_LIMIT = 16
IDENTIFY_LIMIT = 4


@dataclass
class RunConfig:
    q: int
    depth: str = "formulas"
    families: tuple = ()
    threads: int = 1
    fmt: str = "markdown"
    out: str | None = None
    seed: int = 0
    generators: str | None = None

    def __post_init__(self):
        if self.q < 2 or self.q & (self.q - 1):
            raise ValueError(f"q = {self.q} is not a power of 2")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.depth != "formulas" and self.q > ENUMERATION_LIMIT:
            raise ValueError(f"enumeration is limited to q <= {ENUMERATION_LIMIT}")

    def tower(self) -> FieldTower:
        if self.generators:
            with open(self.generators) as fh:
                return FieldTower.load(fh.read(), self.q.bit_length() - 1)
        return FieldTower.for_q(self.q)


# ------------------------------------------------------------ records

def class_record(ctx: FamilyContext, fid: str, Q) -> dict:
    """The exported unit: one k-isomorphism class."""
    qt = ctx.model(fid, Q)
    aut = ctx.aut_k(fid, Q)
    L = l_polynomial_of(ctx.tower, qt)
    return {"q": ctx.q, "family": fid, "Q": to_hex(Q), "quartic": to_hex(qt),
            "aut_order": aut.order, "aut_structure": aut.structure,
            "stratum": stratum_of(L), "lpoly": L.as_list()}


def enumerate_records(ctx: FamilyContext, families=None):
    for fid in families or FAMILY_IDS:
        for orbit in ctx.orbits(fid):
            yield class_record(ctx, fid, orbit.representative)


# ------------------------------------------------------------ tables

def _render(rows: list[dict], fmt: str, title: str = "") -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1)
    cols = list(rows[0]) if rows else []
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    lines = [f"## {title}", ""] if title else []
    lines.append("| " + " | ".join(cols) + " |")
    lines.append("|" + "---|" * len(cols))
    for r in rows:
        lines.append("| " + " | ".join("" if r[c] is None else str(r[c]) for c in cols) + " |")
    return "\n".join(lines) + "\n"


def count_rows(cfg: RunConfig) -> list[dict]:
    q = cfg.q
    ctx = FamilyContext(cfg.tower()) if cfg.depth != "formulas" else None
    fids = cfg.families or FAMILY_IDS
    rows = []
    for fid in fids:
        printed = census.FAMILY_COUNTS[fid](q)
        corrected = census.FAMILY_COUNTS_CORRECTED[fid](q)
        rows.append({"kind": "family", "name": fid, "formula": printed,
                     "corrected": corrected if corrected != printed else None,
                     "enumerated": ctx.class_count(fid, cfg.threads) if ctx else None})
    if cfg.families:
        return rows
    for s in census.STRATA:
        printed = census.QUARTIC_STRATA[s](q)
        corrected = census.QUARTIC_STRATA_CORRECTED[s](q)
        enum = None
        if ctx:
            enum = sum(r["enumerated"] for r in rows if r["name"] in census.STRATUM_FAMILIES[s])
        rows.append({"kind": "stratum", "name": s, "formula": printed,
                     "corrected": corrected if corrected != printed else None, "enumerated": enum})
    printed, corrected = census.QUARTIC_TOTAL(q), census.QUARTIC_TOTAL_CORRECTED(q)
    rows.append({"kind": "total", "name": "smooth quartics", "formula": printed,
                 "corrected": corrected if corrected != printed else None,
                 "enumerated": sum(r["enumerated"] for r in rows if r["kind"] == "family") if ctx else None})
    return rows


def strata_rows(q: int) -> list[dict]:
    table = census.strata_table(q)
    hyp = census.hyperelliptic_class_counts(q)
    rows = [{"stratum": s, "M3nh": table[s]["nh"], "M3h": table[s]["h"], "M3": table[s]["all"],
             "quartic classes": census.QUARTIC_STRATA[s](q),
             "hyperelliptic classes": hyp[s], "genus-3 classes": census.GENUS3_STRATA[s](q)}
            for s in census.STRATA]
    rows.append({"stratum": "total", "M3nh": sum(r["M3nh"] for r in rows),
                 "M3h": sum(r["M3h"] for r in rows), "M3": census.MODULI_TOTAL(q),
                 "quartic classes": census.QUARTIC_TOTAL(q),
                 "hyperelliptic classes": sum(hyp.values()), "genus-3 classes": census.GENUS3_TOTAL(q)})
    return rows


# ------------------------------------------------------------ identify

def identify(tower: FieldTower, qt) -> dict:
    """Classify one quartic; raises ValueError with a witness point if singular."""
    if not is_smooth(tower, qt):
        pt = singular_point(tower, qt)
        raise SingularInput(pt)
    L = l_polynomial_of(tower, qt)
    out = {"q": tower.q, "stratum": stratum_of(L), "lpoly": L.as_list()}
    if tower.q > IDENTIFY_LIMIT:
        out["note"] = f"stratum only: family identification is limited to q <= {IDENTIFY_LIMIT}"
        return out
    ctx = FamilyContext(tower)
    fid, Q, W = ctx.reduce_to_family(qt)
    rec = class_record(ctx, fid, Q)
    image = transform(tower.k, qt, W.rows)
    rec["witness"] = W.hex()
    rec["round_trip"] = proportional(tower.k, image, ctx.model(fid, Q)) is not None
    return rec


class SingularInput(ValueError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"the quartic is singular at {point}")


# ------------------------------------------------------------ main

def _parser() -> argparse.ArgumentParser:
    default_threads = int(os.environ.get(THREADS_ENV, "1"))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, required=True, help="field size, a power of 2")
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="markdown")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--threads", type=int, default=default_threads,
                        help=f"worker threads (default from ${THREADS_ENV}, else 1)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--generators", help="file of defining polynomials ('degree:hex' per line)")

    p = argparse.ArgumentParser(prog="f2quartics", description="Smooth plane quartics over binary fields.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="per-family and per-stratum class counts")
    c.add_argument("--depth", choices=("formulas", "enumerate"), default="formulas")
    c.add_argument("--family", action="append", default=[])
    c.add_argument("--strata", action="store_true", help="show the moduli strata table instead")

    v = sub.add_parser("verify", parents=[common], help="cross-check formulas against enumeration")
    v.add_argument("--depth", choices=census.DEPTHS, default="enumerate")
    v.add_argument("--family", action="append", default=[])

    e = sub.add_parser("enumerate", parents=[common], help="JSON lines, one record per class")
    e.add_argument("--family", action="append", default=[])

    i = sub.add_parser("identify", parents=[common], help="classify one quartic")
    i.add_argument("coeffs", nargs=15, help="15 hex coefficients, monomials in descending lex order")

    sub.add_parser("strata", parents=[common], help="moduli strata point counts and class counts")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        families = tuple(parse_family(f) for f in getattr(args, "family", []) or [])
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    depth = getattr(args, "depth", "formulas")
    if args.command == "enumerate":
        depth = "enumerate"
    if args.command == "verify" and depth == "sweep":
        depth_cfg = "enumerate"
    else:
        depth_cfg = depth
    try:
        cfg = RunConfig(args.q, depth_cfg if args.command != "identify" else "formulas", families,
                        args.threads, args.fmt, args.out, args.seed, args.generators)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "count":
        if args.strata:
            _emit(_render(strata_rows(cfg.q), cfg.fmt, f"moduli strata, q = {cfg.q}"), cfg.out)
        else:
            _emit(_render(count_rows(cfg), cfg.fmt, f"class counts, q = {cfg.q}"), cfg.out)
        return 0

    if args.command == "strata":
        _emit(_render(strata_rows(cfg.q), cfg.fmt, f"moduli strata, q = {cfg.q}"), cfg.out)
        return 0

    if args.command == "verify":
        try:
            rep = census.verify(cfg.q, depth, cfg.threads, cfg.seed, families or None,
                                 tower=cfg.tower() if depth != "formulas" else None)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        if cfg.fmt == "json":
            text = rep.to_json() + "\n"
        elif cfg.fmt == "csv":
            text = _render([c.as_dict() for c in rep.checks], "csv")
        else:
            gens = json.dumps(rep.generators, sort_keys=True)
            text = f"generators: {gens}\n\n" + rep.to_markdown() + "\n"
        _emit(text, cfg.out)
        return 0 if rep.ok else 1

    if args.command == "enumerate":
        ctx = FamilyContext(cfg.tower())
        # records only on the output stream; the generator header goes to stderr
        print("generators: " + json.dumps(ctx.gens.as_dict(), sort_keys=True), file=sys.stderr)
        lines = [json.dumps(r, sort_keys=True) for r in enumerate_records(ctx, families or None)]
        _emit("\n".join(lines) + "\n", cfg.out)
        return 0

    if args.command == "identify":
        tower = cfg.tower()
        try:
            qt = from_hex(args.coeffs)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        if any(c >= cfg.q for c in qt):
            print(f"error: coefficient outside GF({cfg.q})", file=sys.stderr)
            return 2
        try:
            rec = identify(tower, qt)
        except SingularInput as exc:
            if exc.point is None:
                print("error: singular quartic (no singular point found on the searched levels)", file=sys.stderr)
            else:
                pt, level = exc.point
                print(f"error: singular quartic; singular point {[format(c, 'x') for c in pt]} "
                      f"over GF({cfg.q}^{level})", file=sys.stderr)
            return 1
        if cfg.fmt == "json":
            text = json.dumps(rec, sort_keys=True) + "\n"
        else:
            flat = [{"field": k, "value": " ".join(map(str, v)) if isinstance(v, list) else v}
                    for k, v in sorted(rec.items())]
            text = _render(flat, cfg.fmt, f"identify, q = {cfg.q}" if cfg.fmt == "markdown" else "")
        _emit(text, cfg.out)
        return 0
    return 2


if __name__ == "__main__":
    sys.exit(main())
