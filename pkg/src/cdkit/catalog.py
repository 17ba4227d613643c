"""Deterministic catalog of small test groups, with fingerprints and dedup."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field

from .groups import (
    Group,
    abelian_from_invariants,
    alternating,
    center,
    conjugacy_classes,
    dicyclic,
    dihedral,
    direct_product,
    heisenberg,
    is_abelian,
    is_prime,
    metacyclic,
    modular_M,
    order_histogram,
    prime_factors,
    symmetric,
)
from .errors import InvalidParameters
from .morphisms import is_isomorphic

log = logging.getLogger(__name__)

MAX_CATALOG_ORDER = 200


@dataclass(frozen=True)
class Fingerprint:
    order: int
    abelian: bool
    center_order: int
    order_histogram: tuple[tuple[int, int], ...]
    class_sizes: tuple[int, ...]
    subgroup_count: int | None = field(default=None, compare=False)

    def summary(self) -> dict:
        return {
            "order": self.order,
            "abelian": self.abelian,
            "center_order": self.center_order,
            "order_histogram": [list(p) for p in self.order_histogram],
            "class_sizes": list(self.class_sizes),
        }


def fingerprint(G: Group) -> Fingerprint:
    return Fingerprint(
        order=G.order,
        abelian=is_abelian(G),
        center_order=center(G).order,
        order_histogram=order_histogram(G),
        class_sizes=tuple(sorted(len(c) for c in conjugacy_classes(G))),
    )


@dataclass
class CatalogEntry:
    spec: str
    group: Group
    fingerprint: Fingerprint


@dataclass
class Catalog:
    entries: list[CatalogEntry]
    coverage: dict[int, bool]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def of_order(self, n: int) -> list[CatalogEntry]:
        return [e for e in self.entries if e.group.order == n]

    def exhaustive_orders(self) -> list[int]:
        return sorted(n for n, ok in self.coverage.items() if ok)

    def manifest(self) -> dict:
        return {
            "entries": [
                {
                    "label": e.group.label,
                    "spec": e.spec,
                    "order": e.group.order,
                    "construction": e.group.construction,
                    "fingerprint": e.fingerprint.summary(),
                }
                for e in self.entries
            ],
            "coverage": {str(n): ("exhaustive" if ok else "partial") for n, ok in sorted(self.coverage.items())},
        }


def is_exhaustive_order(n: int) -> bool:
    """Orders whose complete isomorphism list the constructors realize: 1, p, p^2, p^3, pq."""
    if n == 1:
        return True
    exps = sorted(prime_factors(n).values())
    return exps in ([1], [2], [3], [1, 1])


def _partitions(k: int, largest: int | None = None):
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def _abelian_invariant_lists(n: int) -> list[tuple[int, ...]]:
    """Invariant factor lists (ascending, d1 | d2 | ...) of every abelian group of order n."""
    per_prime = []
    for p, a in sorted(prime_factors(n).items()):
        per_prime.append([(p, part) for part in _partitions(a)])
    out = []

    def combine(i, chosen):
        if i == len(per_prime):
            width = max((len(part) for _, part in chosen), default=0)
            factors = []
            for j in range(width):
                d = 1
                for p, part in chosen:
                    if j < len(part):
                        d *= p ** part[j]
                factors.append(d)
            out.append(tuple(sorted(factors)) or (1,))
            return
        for choice in per_prime[i]:
            combine(i + 1, chosen + [choice])

    combine(0, [])
    return out


def _abelian_spec(inv: tuple[int, ...]) -> str:
    return "x".join(f"C{d}" for d in inv)


def _metacyclic_params(m: int, k: int) -> list[int]:
    """One t per cyclic subgroup <t> of (Z/m)* of order dividing k (t != 1)."""
    seen = set()
    out = []
    for t in range(2, m):
        if math.gcd(t, m) != 1 or pow(t, k, m) != 1:
            continue
        key = frozenset(pow(t, j, m) for j in range(k))
        if key not in seen:
            seen.add(key)
            out.append(t)
    return out


def _base_candidates(max_order: int):
    """(order, spec, builder) for every non-product constructor call."""
    out = []
    for n in range(1, max_order + 1):
        for inv in _abelian_invariant_lists(n):
            out.append((n, _abelian_spec(inv), lambda inv=inv: _abelian(inv)))
    for n in range(3, max_order // 2 + 1):
        out.append((2 * n, f"D{n}", lambda n=n: dihedral(n)))
    for m in range(2, max_order // 4 + 1):
        spec = f"Q{4 * m}" if m & (m - 1) == 0 else f"Dic{m}"
        out.append((4 * m, spec, lambda m=m: dicyclic(m)))
    for p in range(2, max_order + 1):
        if not is_prime(p) or p ** 3 > max_order:
            continue
        out.append((p ** 3, f"Heis{p}", lambda p=p: heisenberg(p)))
        for n in range(3, 64):
            if p ** n > max_order:
                break
            if p == 2 and n < 4:
                continue
            out.append((p ** n, f"M{p ** n}", lambda p=p, n=n: modular_M(p, n)))
    for m in range(3, max_order + 1):
        for k in range(2, max_order // m + 1):
            for t in _metacyclic_params(m, k):
                out.append((m * k, f"metacyclic({m},{k},{t})", lambda m=m, k=k, t=t: metacyclic(m, k, t)))
    for n in (3, 4):
        if math.factorial(n) <= max_order:
            out.append((math.factorial(n), f"S{n}", lambda n=n: symmetric(n)))
    if 12 <= max_order:
        out.append((12, "A4", lambda: alternating(4)))
    out.sort(key=lambda c: c[0])
    return out


def _abelian(inv):
    G = abelian_from_invariants(inv)
    if len(inv) == 1:
        G.label = f"C{inv[0]}"
    return G


class _Deduper:
    def __init__(self, iso_budget: int):
        self.iso_budget = iso_budget
        self.by_fp: dict[Fingerprint, list[CatalogEntry]] = {}

    def add(self, spec: str, G: Group) -> CatalogEntry | None:
        fp = fingerprint(G)
        bucket = self.by_fp.setdefault(fp, [])
        for other in bucket:
            verdict = is_isomorphic(G, other.group, self.iso_budget)
            if verdict:
                return None
            if verdict is None:
                log.warning("isomorphism undecided between %s and %s; keeping both", spec, other.spec)
        entry = CatalogEntry(spec, G, fp)
        bucket.append(entry)
        return entry


def builtin_catalog(max_order: int, iso_budget: int = 500_000) -> Catalog:
    """All constructor outputs up to ``max_order``, deduplicated up to isomorphism.

    Entries are ordered by group order; within an order, non-product
    constructors come first, in a fixed sequence, followed by direct products.
    """
    if max_order > MAX_CATALOG_ORDER:
        raise InvalidParameters(f"catalog max_order is limited to {MAX_CATALOG_ORDER}")
    if max_order < 1:
        raise InvalidParameters("catalog max_order must be positive")
    dedup = _Deduper(iso_budget)
    base: list[CatalogEntry] = []
    for _, spec, build in _base_candidates(max_order):
        G = build()
        G.label = spec
        entry = dedup.add(spec, G)
        if entry is not None:
            base.append(entry)

    # Products with a nonabelian left factor; abelian x abelian is already a
    # base entry.  Later rounds multiply the previous round's products by base
    # entries so that e.g. S3 x S3 x C2 appears.
    factors = [e for e in base if e.group.order > 1]
    products: list[CatalogEntry] = []
    frontier: list[CatalogEntry] = []
    for i, a in enumerate(factors):
        if is_abelian(a.group):
            continue
        for j, b in enumerate(factors):
            if a.group.order * b.group.order > max_order:
                continue
            if not is_abelian(b.group) and j < i:
                continue
            spec = f"{a.spec}x{b.spec}"
            entry = dedup.add(spec, direct_product(a.group, b.group, label=spec))
            if entry is not None:
                frontier.append(entry)
    while frontier:
        products += frontier
        nxt = []
        for a in frontier:
            for b in factors:
                if a.group.order * b.group.order > max_order:
                    continue
                spec = f"{a.spec}x{b.spec}"
                entry = dedup.add(spec, direct_product(a.group, b.group, label=spec))
                if entry is not None:
                    nxt.append(entry)
        frontier = nxt

    entries = sorted(base + products, key=lambda e: e.group.order)
    orders = sorted({e.group.order for e in entries})
    coverage = {n: is_exhaustive_order(n) for n in orders}
    return Catalog(entries, coverage)


def expected_count(n: int) -> int | None:
    """Number of isomorphism classes for the exhaustive order classes."""
    if n == 1:
        return 1
    f = prime_factors(n)
    exps = sorted(f.values())
    if exps == [1]:
        return 1
    if exps == [2]:
        return 2
    if exps == [3]:
        return 5
    if exps == [1, 1]:
        p, q = sorted(f)
        return 2 if (q - 1) % p == 0 else 1
    return None


def order_counts(catalog: Catalog) -> Counter:
    return Counter(e.group.order for e in catalog)

