"""Backtracking search for isomorphisms and automorphisms.

Maps are searched by assigning images to a fixed generating sequence of the
source group.  Each partial assignment is extended to the subgroup the
assigned generators span, checking the homomorphism property against every
generator and injectivity as it goes.  Every mapped element must keep its
invariant label (see ``element_invariants``), which isomorphisms preserve.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from .groups import Group, SubgroupSet, center, closure_mask, derived_subgroup, order_histogram, prime_factors


class SearchBudgetExceeded(Exception):
    pass


def element_invariants(G: Group) -> list[tuple]:
    """Isomorphism-invariant label of every element.

    Order, centralizer order, membership in the derived subgroup and the
    number of p-th roots for each prime p dividing |G|, refined once by the
    labels of the element's p-th powers.
    """

    def compute():
        cm = G.centralizer_masks
        dmask = derived_subgroup(G).mask
        primes = sorted(prime_factors(G.order))
        powers = {p: [G.power(x, p) for x in range(G.order)] for p in primes}
        roots = {p: Counter(powers[p]) for p in primes}
        base = [
            (o, cm[x].bit_count(), (dmask >> x) & 1, tuple(roots[p][x] for p in primes))
            for x, o in enumerate(G.orders)
        ]
        return [(base[x], tuple(base[powers[p][x]] for p in primes)) for x in range(G.order)]

    return G._cached("elt_invariants", compute)


def _extend(G: Group, H: Group, gens: Sequence[int], images: Sequence[int]) -> list[int] | None:
    """Extend gens -> images to the generated subgroup, or None if impossible.

    Fails on any inconsistency, any collision, or any element whose image
    carries a different invariant label.
    """
    rows_g, rows_h = G.rows, H.rows
    lab_g, lab_h = element_invariants(G), element_invariants(H)
    img = [-1] * G.order
    used = bytearray(H.order)
    img[0] = 0
    used[0] = 1
    queue = [0]
    pairs = list(zip(gens, images))
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        rx, ry = rows_g[x], rows_h[img[x]]
        for s, t in pairs:
            z, w = rx[s], ry[t]
            cur = img[z]
            if cur == -1:
                if used[w] or lab_g[z] != lab_h[w]:
                    return None
                img[z] = w
                used[w] = 1
                queue.append(z)
            elif cur != w:
                return None
    return img


def _spanning_sequence(G: Group, prefix: Sequence[int] = ()) -> list[int]:
    """``prefix`` followed by greedy extra generators until G is spanned.

    Extra generators are drawn from the rarest invariant classes first, which
    keeps the candidate lists short.
    """
    gens = list(prefix)
    span = closure_mask(G, gens)
    labels = element_invariants(G)
    freq = Counter(labels)
    orders = G.orders
    for a in sorted(range(1, G.order), key=lambda a: (freq[labels[a]], -orders[a], a)):
        if span == G.full_mask:
            break
        if not (span >> a) & 1:
            gens.append(a)
            span = closure_mask(G, gens)
    return gens


def find_isomorphism(
    G: Group,
    H: Group,
    budget: int = 200_000,
    gens: Sequence[int] | None = None,
    allowed: Sequence[int | None] | None = None,
) -> list[int] | None:
    """Return an isomorphism G -> H as an index list, or None if none exists.

    ``allowed[i]``, when given and not None, is a bit-mask restricting the
    image of ``gens[i]``.  Raises SearchBudgetExceeded after ``budget``
    candidate extensions.
    """
    if G.order != H.order:
        return None
    gens = list(gens) if gens is not None else _spanning_sequence(G)
    if not gens:
        return [0] * G.order if G.order == 1 else None
    inv_g, inv_h = element_invariants(G), element_invariants(H)
    by_inv: dict[tuple, list[int]] = {}
    for y, key in enumerate(inv_h):
        by_inv.setdefault(key, []).append(y)
    cands = []
    for i, g in enumerate(gens):
        options = by_inv.get(inv_g[g], [])
        if allowed is not None and allowed[i] is not None:
            options = [y for y in options if (allowed[i] >> y) & 1]
        if not options:
            return None
        cands.append(options)

    nodes = 0
    images: list[int] = []

    def search(depth: int) -> list[int] | None:
        nonlocal nodes
        for y in cands[depth]:
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded
            images.append(y)
            img = _extend(G, H, gens[: depth + 1], images)
            if img is not None:
                if depth + 1 == len(gens):
                    if -1 not in img:
                        return img
                else:
                    found = search(depth + 1)
                    if found is not None:
                        return found
            images.pop()
        return None

    return search(0)


def is_isomorphic(G: Group, H: Group, budget: int = 200_000) -> bool | None:
    """True/False when decided within ``budget`` search nodes, else None."""
    if G is H:
        return True
    if G.order != H.order:
        return False
    if order_histogram(G) != order_histogram(H):
        return False
    if center(G).order != center(H).order:
        return False
    if Counter(element_invariants(G)) != Counter(element_invariants(H)):
        return False
    try:
        return find_isomorphism(G, H, budget) is not None
    except SearchBudgetExceeded:
        return None


def find_automorphism_moving(
    G: Group, M: SubgroupSet, K: SubgroupSet, budget: int = 200_000
) -> list[int] | None:
    """An automorphism of G carrying M onto K, or None if there is none.

    M's generators come first in the generating sequence and their images
    are confined to K; an injective homomorphism maps M onto a subgroup of
    K of the same order, hence onto K.
    """
    if M.order != K.order:
        return None
    prefix = list(M.gens)
    gens = _spanning_sequence(G, prefix)
    allowed: list[int | None] = [K.mask] * len(prefix) + [None] * (len(gens) - len(prefix))
    return find_isomorphism(G, G, budget, gens=gens, allowed=allowed)


def is_automorphism(G: Group, phi: Sequence[int]) -> bool:
    if sorted(phi) != list(range(G.order)):
        return False
    rows = G.rows
    return all(phi[rows[a][b]] == rows[phi[a]][phi[b]] for a in range(G.order) for b in range(G.order))


def is_isomorphism(G: Group, H: Group, phi: Sequence[int]) -> bool:
    if G.order != H.order or sorted(phi) != list(range(H.order)):
        return False
    rg, rh = G.rows, H.rows
    return all(phi[rg[a][b]] == rh[phi[a]][phi[b]] for a in range(G.order) for b in range(G.order))
