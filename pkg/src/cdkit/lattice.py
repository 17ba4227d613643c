"""Subgroup lattices: enumeration, conjugacy classes, Sylow subgroups, Hasse diagram."""

from __future__ import annotations

from functools import cached_property
from typing import Sequence

from .errors import CapExceeded, NoSuchPrime, ParentMismatch
from .groups import (
    Group,
    SubgroupSet,
    closure_mask,
    is_abelian,
    is_solvable,
    iter_bits,
    prime_factors,
    prime_power_base,
)

SUBGROUP_BUDGET = 100_000


def _zuppos(G: Group) -> list[tuple[int, int, int]]:
    """(element, prime, element**prime) for every element of prime-power order."""
    out = []
    for z, o in enumerate(G.orders):
        if o > 1:
            p = prime_power_base(o)
            if p is not None:
                out.append((z, p, G.power(z, p)))
    return out


def _by_extension(G: Group, budget: int) -> dict[int, tuple[int, ...]]:
    """Every subgroup reachable by prime-index normal extensions from 1.

    K = <H, z> with z normalizing H and z**p in H, for z of p-power order.
    This reaches every subgroup of a solvable group: each nontrivial
    solvable K has a normal subgroup H of prime index p, and K \\ H holds an
    element of p-power order.
    """
    rows, conj = G.rows, G.conj
    zuppos = _zuppos(G)
    found: dict[int, tuple[int, ...]] = {1: ()}
    queue = [(1, (), [0])]
    qi = 0
    while qi < len(queue):
        mask, gens, elems = queue[qi]
        qi += 1
        covered = mask
        for z, p, zp in zuppos:
            if (covered >> z) & 1 or not (mask >> zp) & 1:
                continue
            cz = conj[z]
            if not all((mask >> cz[h]) & 1 for h in gens):
                continue
            kel = list(elems)
            coset = elems
            for _ in range(p - 1):
                coset = [rows[h][z] for h in coset]
                kel.extend(coset)
            kmask = mask
            for x in kel[len(elems):]:
                kmask |= 1 << x
            covered |= kmask
            if kmask not in found:
                kgens = gens + (z,)
                found[kmask] = kgens
                if len(found) > budget:
                    raise CapExceeded("subgroup count", budget)
                queue.append((kmask, kgens, kel))
    return found


def _by_join_closure(G: Group, budget: int) -> dict[int, tuple[int, ...]]:
    """Cyclic subgroups of prime-power order, closed under joins with them.

    Every subgroup is the join of its prime-power cyclic subgroups, so this
    needs no solvability assumption.
    """
    cyclic: dict[int, int] = {}
    for z, _, _ in _zuppos(G):
        m = closure_mask(G, [z])
        cyclic.setdefault(m, z)
    found: dict[int, tuple[int, ...]] = {1: ()}
    queue = [1]
    for m, z in cyclic.items():
        if m not in found:
            found[m] = (z,)
            queue.append(m)
    qi = 0
    while qi < len(queue):
        mask = queue[qi]
        qi += 1
        gens = found[mask]
        elems = list(iter_bits(mask))
        for cmask, z in cyclic.items():
            if cmask & ~mask == 0:
                continue
            kgens = gens + (z,)
            kmask = closure_mask(G, kgens, elems)
            if kmask not in found:
                found[kmask] = kgens
                if len(found) > budget:
                    raise CapExceeded("subgroup count", budget)
                queue.append(kmask)
    return found


class SubgroupLattice:
    """All subgroups of a group, in deterministic order, with conjugacy classes.

    Subgroups are sorted by (order, membership bit-string); index 0 is the
    trivial subgroup and the last index is the whole group.
    """

    def __init__(self, parent: Group, found: dict[int, tuple[int, ...]]):
        self.parent = parent
        n = parent.order
        keyed = sorted(found, key=lambda m: (m.bit_count(), format(m, f"0{n}b")[::-1]))
        self.subgroups: list[SubgroupSet] = [SubgroupSet(parent, m, found[m]) for m in keyed]
        self._index = {m: i for i, m in enumerate(keyed)}
        self.classes, self.class_of = self._conjugacy_classes()
        self.normal_flags = [len(self.classes[c]) == 1 for c in self.class_of]

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def __getitem__(self, i: int) -> SubgroupSet:
        return self.subgroups[i]

    def index_of(self, H: SubgroupSet | int) -> int:
        mask = H if isinstance(H, int) else H.mask
        if not isinstance(H, int) and H.parent is not self.parent:
            raise ParentMismatch("subgroup does not belong to this lattice's group")
        return self._index[mask]

    def find(self, mask: int) -> int | None:
        return self._index.get(mask)

    def is_normal_index(self, i: int) -> bool:
        return self.normal_flags[i]

    def _conjugacy_classes(self) -> tuple[list[list[int]], list[int]]:
        G = self.parent
        count = len(self.subgroups)
        if is_abelian(G):
            return [[i] for i in range(count)], list(range(count))
        conj = [G.conj[g] for g in G.generators]
        class_of = [-1] * count
        classes: list[list[int]] = []
        for i, H in enumerate(self.subgroups):
            if class_of[i] != -1:
                continue
            cid = len(classes)
            members = [i]
            class_of[i] = cid
            frontier = [H.elements]
            while frontier:
                nxt = []
                for elems in frontier:
                    for cg in conj:
                        m = 0
                        for h in elems:
                            m |= 1 << cg[h]
                        j = self._index[m]
                        if class_of[j] == -1:
                            class_of[j] = cid
                            members.append(j)
                            nxt.append(self.subgroups[j].elements)
                frontier = nxt
            classes.append(sorted(members))
        return classes, class_of

    @cached_property
    def supersets(self) -> list[int]:
        """For each subgroup, a bit-mask over lattice indices of the subgroups containing it."""
        n = self.parent.order
        containing = [0] * n
        for j, K in enumerate(self.subgroups):
            bit = 1 << j
            for x in K.elements:
                containing[x] |= bit
        out = []
        everything = (1 << len(self.subgroups)) - 1
        for H in self.subgroups:
            m = everything
            for h in H.gens:
                m &= containing[h]
            out.append(m)
        return out

    @cached_property
    def hasse(self) -> list[tuple[int, int]]:
        return hasse_diagram(self)


def all_subgroups(G: Group, budget: int = SUBGROUP_BUDGET, method: str = "auto") -> SubgroupLattice:
    """Enumerate every subgroup of G.

    ``method`` is "join" (cyclic subgroups closed under joins), "extension"
    (prime-index normal extensions, complete for solvable groups) or "auto",
    which uses extension exactly when G is solvable.
    """
    if method == "auto":
        method = "extension" if is_solvable(G) else "join"
    if method == "extension":
        found = _by_extension(G, budget)
    elif method == "join":
        found = _by_join_closure(G, budget)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SubgroupLattice(G, found)


def meet(H: SubgroupSet, K: SubgroupSet) -> SubgroupSet:
    if H.parent is not K.parent:
        raise ParentMismatch("meet of subgroups of different groups")
    return SubgroupSet(H.parent, H.mask & K.mask)


def join(G: Group, H: SubgroupSet, K: SubgroupSet) -> SubgroupSet:
    if H.parent is not G or K.parent is not G:
        raise ParentMismatch("join of subgroups of different groups")
    if K.mask & ~H.mask == 0:
        return H
    if H.mask & ~K.mask == 0:
        return K
    gens = H.gens + K.gens
    return SubgroupSet(G, closure_mask(G, gens, H.elements), gens)


def conjugacy_classes_of_subgroups(lattice: SubgroupLattice) -> list[list[int]]:
    return lattice.classes


def is_normal(G: Group, H: SubgroupSet) -> bool:
    from .groups import is_normal as _is_normal

    if H.parent is not G:
        raise ParentMismatch("subgroup does not belong to this group")
    return _is_normal(G, H)


def sylow_subgroup(lattice: SubgroupLattice, p: int) -> SubgroupSet:
    """The least-ordered subgroup of order p^a, where p^a exactly divides |G|."""
    a = prime_factors(lattice.parent.order).get(p)
    if not a:
        raise NoSuchPrime(f"{p} does not divide |G| = {lattice.parent.order}")
    target = p ** a
    for H in lattice.subgroups:
        if H.order == target:
            return H
    raise AssertionError("Sylow subgroup missing from a complete lattice")


def sylow_subgroups(lattice: SubgroupLattice, p: int) -> list[SubgroupSet]:
    P = sylow_subgroup(lattice, p)
    return [lattice.subgroups[i] for i in lattice.classes[lattice.class_of[lattice.index_of(P)]]]


def hasse_diagram(lattice: SubgroupLattice) -> list[tuple[int, int]]:
    """Covering pairs (i, j): subgroup i < subgroup j with nothing in between."""
    sup = lattice.supersets
    edges = []
    for i, above in enumerate(sup):
        strict = above & ~(1 << i)
        blocked = 0
        for k in iter_bits(strict):
            blocked |= sup[k] & ~(1 << k)
        for j in iter_bits(strict & ~blocked):
            edges.append((i, j))
    edges.sort()
    return edges


def to_dot(lattice: SubgroupLattice, measures: Sequence[int] | None = None, cd_members: set[int] | None = None) -> str:
    """Graphviz rendering of the Hasse diagram; CD members are double circles."""
    cd_members = cd_members or set()
    lines = [f'graph "{lattice.parent.label}" {{', "  rankdir=BT;", "  node [shape=circle];"]
    for i, H in enumerate(lattice.subgroups):
        text = f"H{i} |H|={H.order}"
        if measures is not None:
            text += f" m={measures[i]}"
        shape = "doublecircle" if i in cd_members else "circle"
        lines.append(f'  H{i} [label="{text}", shape={shape}];')
    for i, j in lattice.hasse:
        lines.append(f"  H{i} -- H{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
