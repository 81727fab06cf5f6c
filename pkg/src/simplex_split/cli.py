"""Command-line interface: ``simplex-split <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import certificates as cert
from .ifs import (
    Ifs,
    SplitPair,
    example5,
    farey_variants,
    pair_from_perms,
    partial_quotients_from_digits,
    unit_interval_embed,
    word_str,
)
from .linalg import IntMatrix, SimplexPoint, char_poly
from .symmetry import MAX_ENUMERATION_N, enumerate_orbits

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def parse_variant(text: str, n: int):
    """mono | op | or | example5 | perms=P0:P1 with comma-separated one-line forms."""
    if text in ("mono", "op", "or"):
        return farey_variants(n)[text]
    if text == "example5":
        if n != 2:
            raise UsageError("example5 lives in dimension n=2")
        return example5()
    if text.startswith("perms="):
        try:
            a, b = text[len("perms="):].split(":")
            p0 = tuple(int(v) for v in a.split(","))
            p1 = tuple(int(v) for v in b.split(","))
            return pair_from_perms(n, p0, p1)
        except ValueError as exc:
            raise UsageError(f"bad --variant {text!r}: {exc}") from exc
    raise UsageError(f"unknown variant {text!r}")


def _ifs(obj) -> Ifs:
    return obj.ifs if isinstance(obj, SplitPair) else obj


def _parse_point(text: str, n: int) -> SimplexPoint:
    try:
        if n == 1 and "," not in text:
            return unit_interval_embed(Fraction(text))
        p = SimplexPoint.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed point {text!r}: {exc}") from exc
    if len(p) != n + 1:
        raise UsageError(f"point has {len(p)} coordinates, expected {n + 1}")
    return p


def _parse_matrix(text: str) -> IntMatrix:
    try:
        return IntMatrix(tuple(tuple(int(v) for v in r.split(",")) for r in text.split(";")))
    except ValueError as exc:
        raise UsageError(f"malformed matrix {text!r}: {exc}") from exc


def _check_n(n: int, cap: int | None = None):
    if n < 1:
        raise UsageError(f"--n must be >= 1, got {n}")
    if cap is not None and n > cap:
        raise UsageError(f"--n={n} exceeds the cap {cap}")


def _epsilon(args) -> Fraction:
    try:
        eps = Fraction(args.epsilon)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --epsilon {args.epsilon!r}") from exc
    if eps <= 0:
        raise UsageError("--epsilon must be positive")
    return eps


def _max_len(args) -> int:
    b = args.max_word_len or cert.default_max_word_len(args.n)
    if b < 1:
        raise UsageError("--max-word-len must be >= 1")
    return b


def cmd_count_orbits(args) -> tuple[dict, int]:
    _check_n(args.n, args.max_n)
    report = enumerate_orbits(args.n, args.max_n)
    doc = {"schema_version": SCHEMA_VERSION, "n": args.n, "count": report.count}
    if args.list:
        doc["orbits"] = report.to_json()["orbits"]
    return doc, 0


def cmd_verify(args) -> tuple[dict, int]:
    _check_n(args.n, MAX_ENUMERATION_N)
    if args.depth < 1:
        raise UsageError("--depth must be >= 1")
    doc = cert.verify_theorem(args.n, _max_len(args), args.depth, _epsilon(args))
    if args.figure:
        from .plots import plot_diameter_profiles

        profiles = {
            f"{s['canonical_pair']['p0']} {s['canonical_pair']['p1']}": s["diameter_profile"]
            for s in doc["survivors"]
        }
        plot_diameter_profiles(profiles, args.figure, _epsilon(args))
        doc["figure"] = args.figure
    ok = doc["survivors_match_farey"] and doc["all_certificates_reverified"]
    return doc, 0 if ok else 1


def cmd_expand(args) -> tuple[dict, int]:
    _check_n(args.n)
    ifs = _ifs(parse_variant(args.variant, args.n))
    x = _parse_point(args.point, args.n)
    if args.steps < 0:
        raise UsageError("--steps must be >= 0")
    w = ifs.expand(x, args.steps)
    verts, diam = ifs.pi_approx(w)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "n": args.n,
        "variant": args.variant,
        "point": [str(c) for c in x],
        "digits": word_str(w),
        "bracket": {"vertices": [[str(c) for c in v] for v in verts], "diameter": str(diam)},
    }
    if args.n == 1 and ifs.m == 2:
        doc["partial_quotients"] = partial_quotients_from_digits(w)
    return doc, 0


def cmd_render(args) -> tuple[str, int]:
    from . import render

    ifs = _ifs(parse_variant(args.variant, args.n))
    if ifs.n != 2:
        raise UsageError("render needs --n 2")
    palette = tuple(args.palette.split(",")) if args.palette else render.DEFAULT_PALETTE
    try:
        if args.mode == "partition":
            scene = render.partition_scene(ifs, args.depth, palette, args.stroke_width)
        else:
            scene = render.fixed_point_cloud_scene(ifs, args.max_word_len or 10, args.margin)
            scene.stroke_width = args.stroke_width
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return scene.to_svg(), 0


def cmd_charpoly(args) -> tuple[dict, int]:
    if args.matrix:
        m = _parse_matrix(args.matrix)
        return {"schema_version": SCHEMA_VERSION, "matrix": m.tolist(), "polynomials": [str(char_poly(m))]}, 0
    _check_n(args.n)
    ifs = _ifs(parse_variant(args.variant, args.n))
    return {
        "schema_version": SCHEMA_VERSION,
        "n": args.n,
        "variant": args.variant,
        "polynomials": [str(char_poly(b)) for b in ifs.branches],
    }, 0


def _require_pair(obj) -> SplitPair:
    if not isinstance(obj, SplitPair):
        raise UsageError("this subcommand needs a two-branch split pair")
    return obj


def cmd_classify(args) -> tuple[dict, int]:
    _check_n(args.n)
    pair = _require_pair(parse_variant(args.variant, args.n))
    verdict = cert.classify(pair, _max_len(args), args.depth, _epsilon(args))
    doc = {
        "schema_version": SCHEMA_VERSION,
        "n": args.n,
        "pair": {"p0": list(pair.p0), "p1": list(pair.p1)},
        "verdict": verdict.to_json(),
        "shape": cert.shape(pair).to_json() if pair.n >= 2 else None,
    }
    if verdict.certificate is not None:
        doc["reverified"] = cert.verify_certificate(pair, verdict.certificate)
    return doc, 0


def cmd_diameters(args) -> tuple[dict, int]:
    _check_n(args.n)
    ifs = _ifs(parse_variant(args.variant, args.n))
    try:
        prof = cert.diameter_profile(ifs, args.depth)
    except (ValueError, MemoryError) as exc:
        raise UsageError(str(exc)) from exc
    doc = {
        "schema_version": SCHEMA_VERSION,
        "n": args.n,
        "variant": args.variant,
        "depth": args.depth,
        "diameter_profile": [str(x) for x in prof],
        "non_increasing": cert.is_non_increasing(prof),
    }
    if args.figure:
        from .plots import plot_diameter_profiles

        plot_diameter_profiles({args.variant: prof}, args.figure)
        doc["figure"] = args.figure
    return doc, 0


def _text(doc) -> str:
    if isinstance(doc, str):
        return doc
    lines = []
    for k, v in doc.items():
        lines.append(f"{k}\t{json.dumps(v) if isinstance(v, (dict, list)) else v}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="simplex-split",
        description="Two-map simplex-splitting continued fraction algorithms.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, variant=True, search=False):
        sp.add_argument("--n", type=int, default=2, help="simplex dimension")
        if variant:
            sp.add_argument("--variant", default="mono", help="mono|op|or|example5|perms=P0:P1")
        if search:
            sp.add_argument("--max-word-len", type=int, default=None, help="certificate word bound B")
            sp.add_argument("--depth", type=int, default=cert.DEFAULT_DEPTH, help="evidence depth T")
            sp.add_argument("--epsilon", default=str(cert.DEFAULT_EPSILON), help="evidence threshold")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("json", "text", "svg"), default=None)

    sp = sub.add_parser("count-orbits", help="count orbits of split pairs")
    common(sp, variant=False)
    sp.add_argument("--max-n", type=int, default=MAX_ENUMERATION_N)
    sp.add_argument("--list", action="store_true", help="include representatives")
    sp.set_defaults(func=cmd_count_orbits)

    sp = sub.add_parser("verify", help="certify all orbits, compare survivors with Farey")
    common(sp, variant=False, search=True)
    sp.add_argument("--figure", default=None, help="write survivor diameter plot here")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("expand", help="digit expansion of an exact rational point")
    common(sp)
    sp.add_argument("--point", required=True, help='e.g. "1/3,1/3,1/3", or "3/5" for n=1')
    sp.add_argument("--steps", type=int, default=20)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("render", help="SVG of a partition or fixed-point cloud (n=2)")
    common(sp)
    sp.add_argument("--mode", choices=("partition", "cloud"), default="partition")
    sp.add_argument("--depth", type=int, default=5)
    sp.add_argument("--max-word-len", type=int, default=None)
    sp.add_argument("--margin", type=float, default=1e-6)
    sp.add_argument("--stroke-width", type=float, default=0.002)
    sp.add_argument("--palette", default=None, help="comma-separated fill colours")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("charpoly", help="characteristic polynomials of the branches")
    common(sp)
    sp.add_argument("--matrix", default=None, help='explicit matrix "1,0;0,1"')
    sp.set_defaults(func=cmd_charpoly)

    sp = sub.add_parser("classify", help="three-valued verdict for one pair")
    common(sp, search=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("diameters", help="max cylinder diameter per depth")
    common(sp)
    sp.add_argument("--depth", type=int, default=12)
    sp.add_argument("--figure", default=None, help="write a plot of the profile here")
    sp.set_defaults(func=cmd_diameters)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = args.func(args)
    except UsageError as exc:
        parser.error(f"{args.command}: {exc}")
    fmt = args.format or ("svg" if args.command == "render" else "json")
    if isinstance(doc, str):
        text = doc
    elif fmt == "text":
        text = _text(doc)
    else:
        text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
