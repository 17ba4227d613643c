"""Command-line front end: ``info``, ``cd`` and ``scan``.

Exit codes: 0 success, 1 counterexample found, 2 unparseable group spec
or arguments, 3 group construction failed, 4 element or subgroup cap
exceeded.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass

from .catalog import MAX_CATALOG_ORDER
from .cd import cd_report
from .classify import recognize
from .errors import CapExceeded, CDKitError, DegreeMismatch, InvalidParameters, NotAGroup, ParseError
from .files import load_group_file, report_json, write_atomic
from .groups import (
    Group,
    alternating,
    center,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    exponent,
    heisenberg,
    is_abelian,
    is_nilpotent,
    is_prime,
    metacyclic,
    modular_M,
    order_histogram,
    prime_power_base,
    symmetric,
)
from .lattice import all_subgroups, to_dot
from .scan import CHECK_CHOICES, run_scan

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_PARSE = 2
EXIT_CONSTRUCTION = 3
EXIT_CAP = 4

_FACTOR = re.compile(r"(C|D|Q|Dic|M|S|A|Heis)(\d+)$")
_METACYCLIC = re.compile(r"metacyclic\((\d+),(\d+),(\d+)\)$")


@dataclass(frozen=True)
class GroupSpec:
    """A parsed group descriptor: a product of named factors, or a file."""

    text: str
    factors: tuple[tuple[str, tuple[int, ...]], ...] = ()
    path: str | None = None

    def build(self) -> Group:
        if self.path is not None:
            return load_group_file(self.path)
        groups = [_build_factor(name, args) for name, args in self.factors]
        G = groups[0]
        for H in groups[1:]:
            G = direct_product(G, H)
        G.label = self.text
        return G


def _split_product(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parenthesis in {text!r}")
        if ch == "x" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced parenthesis in {text!r}")
    parts.append("".join(cur))
    return parts


def _parse_factor(tok: str) -> tuple[str, tuple[int, ...]]:
    m = _METACYCLIC.match(tok)
    if m:
        return "metacyclic", tuple(int(g) for g in m.groups())
    m = _FACTOR.match(tok)
    if not m:
        raise ParseError(f"unrecognized group name {tok!r}")
    name, n = m.group(1), int(m.group(2))
    if name == "Q":
        if n < 8 or n & (n - 1):
            raise ParseError(f"Q<n> needs a power of two n >= 8, got {n}")
    if name == "M":
        p = prime_power_base(n)
        if p is None or n < p ** 3:
            raise ParseError(f"M<n> needs n = p^k with p prime and k >= 3, got {n}")
    return name, (n,)


def parse_spec(text: str) -> GroupSpec:
    """Parse ``C6``, ``Q16``, ``M27``, ``C2xD4``, ``metacyclic(7,3,2)``, ``@file`` ..."""
    text = text.strip()
    if text.startswith("@"):
        if len(text) == 1:
            raise ParseError("empty file path")
        return GroupSpec(text, path=text[1:])
    compact = re.sub(r"\s+", "", text)
    tokens = _split_product(compact)
    if any(not t for t in tokens):
        raise ParseError(f"empty factor in {text!r}")
    return GroupSpec(compact, factors=tuple(_parse_factor(t) for t in tokens))


def _build_factor(name: str, args: tuple[int, ...]) -> Group:
    if name == "metacyclic":
        return metacyclic(*args)
    (n,) = args
    if name == "C":
        return cyclic(n)
    if name == "D":
        return dihedral(n)
    if name == "Q":
        return dicyclic(n // 4)
    if name == "Dic":
        return dicyclic(n)
    if name == "M":
        p = prime_power_base(n)
        k = 0
        while p ** k < n:
            k += 1
        return modular_M(p, k)
    if name == "S":
        return symmetric(n)
    if name == "A":
        return alternating(n)
    if name == "Heis":
        if not is_prime(n):
            raise InvalidParameters(f"Heis<p> needs a prime, got {n}")
        return heisenberg(n)
    raise ParseError(f"unknown constructor {name!r}")


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def load_spec(text: str) -> Group:
    """Parse and build, translating failures into CLI exit codes."""
    try:
        spec = parse_spec(text)
    except ParseError as exc:
        raise _Failure(EXIT_PARSE, f"cannot parse group spec: {exc}") from None
    try:
        return spec.build()
    except ParseError as exc:
        raise _Failure(EXIT_PARSE, f"cannot parse group file: {exc}") from None
    except OSError as exc:
        raise _Failure(EXIT_PARSE, f"cannot read group file: {exc}") from None
    except CapExceeded as exc:
        raise _Failure(EXIT_CAP, str(exc)) from None
    except (InvalidParameters, DegreeMismatch, NotAGroup) as exc:
        raise _Failure(EXIT_CONSTRUCTION, f"cannot construct {text}: {exc}") from None


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_info(args, out) -> int:
    G = load_spec(args.spec)
    hist = " ".join(f"{o}:{c}" for o, c in order_histogram(G))
    out.write(f"group: {G.label}\n")
    out.write(f"construction: {G.construction}\n")
    out.write(f"order: {G.order}\n")
    out.write(f"abelian: {_yes(is_abelian(G))}\n")
    out.write(f"nilpotent: {_yes(is_nilpotent(G))}\n")
    out.write(f"center order: {center(G).order}\n")
    out.write(f"exponent: {exponent(G)}\n")
    out.write(f"element orders: {hist}\n")
    out.write(f"tag: {recognize(G)}\n")
    return EXIT_OK


def _cd_table(lattice, report) -> str:
    cd = set(report.cd_members)
    rows = [f"{'idx':>5} {'order':>6} {'measure':>10} {'CD':>3} {'class':>6}"]
    for i, H in enumerate(lattice.subgroups):
        cid = lattice.class_of[i]
        rep = "*" if lattice.classes[cid][0] == i else " "
        rows.append(f"{i:>5} {H.order:>6} {report.measures[i]:>10} {'yes' if i in cd else 'no':>3} {cid:>5}{rep}")
    return "\n".join(rows) + "\n"


def cmd_cd(args, out) -> int:
    G = load_spec(args.spec)
    try:
        lattice = all_subgroups(G)
    except CapExceeded as exc:
        raise _Failure(EXIT_CAP, str(exc)) from None
    report = cd_report(G, lattice, properties=not args.no_checks)
    if args.dot:
        write_atomic(args.dot, to_dot(lattice, report.measures, set(report.cd_members)))
    if args.json:
        out.write(report_json(report))
    else:
        out.write(f"{G.label}: order {G.order}, {len(lattice)} subgroups, "
                  f"{len(lattice.classes)} conjugacy classes of subgroups\n")
        out.write(_cd_table(lattice, report))
        out.write(f"m* = {report.m_star}, δ = {report.delta}, v = {report.v}\n")
        for c in report.failures:
            out.write(f"FAIL {c.name}: {c.detail} witness={list(c.witness)}\n")
    return EXIT_COUNTEREXAMPLE if report.failures else EXIT_OK


def cmd_scan(args, out) -> int:
    if not 1 <= args.max_order <= MAX_CATALOG_ORDER:
        raise _Failure(EXIT_PARSE, f"--max-order must lie in 1..{MAX_CATALOG_ORDER}")
    if args.jobs < 1:
        raise _Failure(EXIT_PARSE, "--jobs must be positive")
    try:
        result = run_scan(args.max_order, check=args.check, jobs=args.jobs)
    except CapExceeded as exc:
        raise _Failure(EXIT_CAP, str(exc)) from None
    if args.out:
        write_atomic(args.out, report_json(result))
    s = result["summary"]
    out.write(f"scanned {s['groups_scanned']} groups up to order {args.max_order} (check: {args.check})\n")
    out.write(f"exhaustive orders: {' '.join(map(str, s['orders_exhaustive'])) or '-'}\n")
    out.write(f"partial orders: {' '.join(map(str, s['orders_partial'])) or '-'}\n")
    if "nilpotent_v3" in s:
        out.write(f"nilpotent groups with v = 3 (informational): {' '.join(s['nilpotent_v3']) or '-'}\n")
    out.write(f"skipped checks: {s['skipped_checks']}\n")
    for rec in result["groups"]:
        if "error" in rec:
            out.write(f"BUDGET {rec['label']}: {rec['error']}\n")
    for c in result["counterexample_list"]:
        out.write(f"COUNTEREXAMPLE {c['label']} {c['check']}: {c['detail']} witness={c['witness']}\n")
    out.write(f"counterexamples: {s['counterexamples']}\n")
    if s["counterexamples"]:
        return EXIT_COUNTEREXAMPLE
    if s["budget_errors"]:
        return EXIT_CAP
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdkit", description="Chermak-Delgado lattice computations on finite groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="basic invariants of a group")
    p.add_argument("spec", help="group spec, e.g. Q16, M27, C2xD4, metacyclic(7,3,2), @file.grp")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("cd", help="Chermak-Delgado measures, lattice and property checks")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--dot", metavar="PATH", help="write the Hasse diagram in Graphviz format")
    p.add_argument("--no-checks", action="store_true", help="skip the structural property checks")
    p.set_defaults(func=cmd_cd)

    p = sub.add_parser("scan", help="run checks over the built-in catalog")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--check", choices=CHECK_CHOICES, default="all")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", metavar="PATH", help="write the full JSON report here")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    if hasattr(out, "reconfigure"):
        out.reconfigure(encoding="utf-8")
    try:
        return args.func(args, out)
    except _Failure as exc:
        print(f"cdkit: {exc}", file=sys.stderr)
        return exc.code
    except CapExceeded as exc:
        print(f"cdkit: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CDKitError as exc:
        print(f"cdkit: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
