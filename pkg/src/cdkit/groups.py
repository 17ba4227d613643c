"""Concrete finite groups on indexed elements.

Every group stores its elements as indices ``0..order-1`` with index 0 the
identity.  Groups of order at most ``TABLE_LIMIT`` carry a full
multiplication table; larger ones compute products on demand from their
element objects.  Subgroups are bit-vectors over those indices, held as
Python ints.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapExceeded, DegreeMismatch, InvalidParameters, NotAGroup, ParentMismatch

ELEMENT_CAP = 2000
TABLE_LIMIT = 512
ASSOC_EXHAUSTIVE_LIMIT = 256


def element_cap() -> int:
    """The element cap, overridable through ``CDKIT_ELEMENT_CAP``."""
    raw = os.environ.get("CDKIT_ELEMENT_CAP")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise InvalidParameters(f"CDKIT_ELEMENT_CAP must be an integer, got {raw!r}") from None
        if value < 1:
            raise InvalidParameters("CDKIT_ELEMENT_CAP must be positive")
        return value
    return ELEMENT_CAP


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def prime_power_base(n: int) -> int | None:
    """Return p if ``n = p**k`` with k >= 1, else None."""
    f = prime_factors(n)
    if len(f) == 1:
        return next(iter(f))
    return None


# --------------------------------------------------------------------------
# Permutations


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0..degree-1}``; ``p * q`` applies p first, then q."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise InvalidParameters(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Permutation:
        images = list(range(degree))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                images[x] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> Permutation:
        out = [0] * self.degree
        for i, x in enumerate(self.images):
            out[x] = i
        return Permutation(tuple(out))


def _compose(p: tuple, q: tuple) -> tuple:
    return tuple(q[i] for i in p)


# --------------------------------------------------------------------------
# Groups


class _LazyRows:
    """Row view for groups without a stored table; rows are cached on first use."""

    def __init__(self, group: Group):
        self._group = group
        self._cache: dict[int, list[int]] = {}

    def __getitem__(self, a: int) -> list[int]:
        row = self._cache.get(a)
        if row is None:
            g = self._group
            ea = g._elements[a]
            row = [g._index[g._op(ea, eb)] for eb in g._elements]
            self._cache[a] = row
        return row

    def __len__(self) -> int:
        return self._group.order


class Group:
    """A finite group on indices ``0..order-1`` (0 is the identity).

    Instances are treated as immutable; derived data (inverses, element
    orders, centralizer masks, ...) is computed lazily and cached.
    """

    def __init__(
        self,
        table: list[list[int]] | None,
        *,
        label: str,
        construction: str,
        elements: list | None = None,
        op: Callable | None = None,
        partially_verified: bool = False,
    ):
        self.label = label
        self.construction = construction
        self.partially_verified = partially_verified
        self._table = table
        self._elements = elements
        self._op = op
        if table is not None:
            self.order = len(table)
        else:
            if elements is None or op is None:
                raise ValueError("either a table or elements with an operation is required")
            self.order = len(elements)
        self._index = {e: i for i, e in enumerate(elements)} if elements is not None else None
        self._cache: dict[str, object] = {}

    @classmethod
    def from_operation(cls, elements: Sequence, op: Callable, *, label: str, construction: str) -> Group:
        """Build from element objects (identity first) and a binary operation."""
        elements = list(elements)
        n = len(elements)
        if n <= TABLE_LIMIT:
            index = {e: i for i, e in enumerate(elements)}
            table = [[index[op(a, b)] for b in elements] for a in elements]
            return cls(table, label=label, construction=construction, elements=elements, op=op)
        return cls(None, label=label, construction=construction, elements=elements, op=op)

    def __repr__(self) -> str:
        return f"<Group {self.label} order={self.order}>"

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state

    def _cached(self, key: str, fn: Callable):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def has_table(self) -> bool:
        return self._table is not None

    @property
    def rows(self):
        """``rows[a][b]`` is the index of ``a*b``."""
        if self._table is not None:
            return self._table
        return self._cached("rows", lambda: _LazyRows(self))

    @property
    def elements(self) -> list | None:
        return self._elements

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return self._table[a][b]
        return self._index[self._op(self._elements[a], self._elements[b])]

    @property
    def inv(self) -> list[int]:
        return self._cached("inv", self._compute_inverses)

    def _compute_inverses(self) -> list[int]:
        n = self.order
        if self._table is not None:
            out = [0] * n
            for a, row in enumerate(self._table):
                out[a] = row.index(0)
            return out
        out = [0] * n
        for a in range(n):
            # a^(ord-1) is the inverse
            prev, cur = 0, a
            while cur != 0:
                prev, cur = cur, self.mul(cur, a)
            out[a] = prev
        return out

    def power(self, a: int, k: int) -> int:
        o = self.orders[a]
        k %= o
        result, base = 0, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    @property
    def orders(self) -> list[int]:
        """Order of every element, by index."""
        return self._cached("orders", self._compute_orders)

    def _compute_orders(self) -> list[int]:
        rows = self.rows
        out = [0] * self.order
        for a in range(self.order):
            if out[a]:
                continue
            cyc = [a]
            cur = a
            while cur != 0:
                cur = rows[cur][a]
                cyc.append(cur)
            k = len(cyc)
            # cyc[i] = a^(i+1); its order is k / gcd(i+1, k)
            for i, x in enumerate(cyc):
                if not out[x]:
                    out[x] = k // math.gcd(i + 1, k)
        return out

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @property
    def conj(self):
        """``conj[g][h]`` is the index of ``g h g^-1``."""
        return self._cached("conj", self._compute_conj)

    def _compute_conj(self):
        rows, inv = self.rows, self.inv
        return [[rows[rows[g][h]][inv[g]] for h in range(self.order)] for g in range(self.order)]

    @property
    def centralizer_masks(self) -> list[int]:
        """Bit-mask of C_G(x) for every element x."""
        return self._cached("cmasks", self._compute_centralizer_masks)

    def _compute_centralizer_masks(self) -> list[int]:
        n, rows = self.order, self.rows
        masks = [0] * n
        for a in range(n):
            ra = rows[a]
            m = 0
            for b in range(n):
                if ra[b] == rows[b][a]:
                    m |= 1 << b
            masks[a] = m
        return masks

    @property
    def generators(self) -> tuple[int, ...]:
        """A small deterministic generating set (greedy, largest orders first)."""
        return self._cached("gens", self._compute_generators)

    def _compute_generators(self) -> tuple[int, ...]:
        orders = self.orders
        candidates = sorted(range(1, self.order), key=lambda a: (-orders[a], a))
        gens: list[int] = []
        span = 1
        for a in candidates:
            if span == self.full_mask:
                break
            if not (span >> a) & 1:
                gens.append(a)
                span = closure_mask(self, gens)
        return tuple(gens)

    def whole(self) -> SubgroupSet:
        return SubgroupSet(self, self.full_mask, self.generators)

    def trivial(self) -> SubgroupSet:
        return SubgroupSet(self, 1, ())


def closure_mask(G: Group, gens: Iterable[int], start: Sequence[int] = (0,)) -> int:
    """Bit-mask of the subgroup generated by ``gens`` together with ``start``.

    ``start`` must already be closed (a subgroup's element list) or just the
    identity; every listed element is multiplied by every generator.
    """
    gens = list(gens)
    rows = G.rows
    elems = list(start)
    mask = 0
    for x in elems:
        mask |= 1 << x
    for g in gens:
        if not (mask >> g) & 1:
            mask |= 1 << g
            elems.append(g)
    i = 0
    while i < len(elems):
        rx = rows[elems[i]]
        for s in gens:
            y = rx[s]
            if not (mask >> y) & 1:
                mask |= 1 << y
                elems.append(y)
        i += 1
    return mask


class SubgroupSet:
    """A subgroup of ``parent`` stored as a membership bit-vector."""

    __slots__ = ("parent", "mask", "_gens", "_elements")

    def __init__(self, parent: Group, mask: int, gens: Sequence[int] | None = None):
        self.parent = parent
        self.mask = mask
        self._gens = tuple(gens) if gens is not None else None
        self._elements: list[int] | None = None

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    @property
    def elements(self) -> list[int]:
        if self._elements is None:
            self._elements = list(iter_bits(self.mask))
        return self._elements

    @property
    def gens(self) -> tuple[int, ...]:
        if self._gens is None:
            gens: list[int] = []
            span = 1
            orders = self.parent.orders
            for a in sorted(self.elements, key=lambda a: (-orders[a], a)):
                if span == self.mask:
                    break
                if not (span >> a) & 1:
                    gens.append(a)
                    span = closure_mask(self.parent, gens)
            self._gens = tuple(gens)
        return self._gens

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)

    def __len__(self) -> int:
        return self.order

    def __le__(self, other: SubgroupSet) -> bool:
        _same_parent(self, other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: SubgroupSet) -> bool:
        return self <= other and self.mask != other.mask

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubgroupSet):
            return NotImplemented
        return self.parent is other.parent and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((id(self.parent), self.mask))

    def __repr__(self) -> str:
        return f"<Subgroup of {self.parent.label} order={self.order}>"

    def bitstring(self) -> str:
        """Membership bits in index order (bit 0 first)."""
        return format(self.mask, f"0{self.parent.order}b")[::-1]

    def is_closed(self) -> bool:
        """Exhaustive subgroup test (identity, products, inverses)."""
        if not self.mask & 1:
            return False
        rows, inv = self.parent.rows, self.parent.inv
        els = self.elements
        for a in els:
            if not (self.mask >> inv[a]) & 1:
                return False
            ra = rows[a]
            for b in els:
                if not (self.mask >> ra[b]) & 1:
                    return False
        return True

    def is_abelian(self) -> bool:
        cm = self.parent.centralizer_masks
        return all(cm[g] & self.mask == self.mask for g in self.gens)


def _same_parent(H: SubgroupSet, K: SubgroupSet) -> None:
    if H.parent is not K.parent:
        raise ParentMismatch(f"{H!r} and {K!r} live in different groups")


def subgroup_generated(G: Group, elems: Iterable[int]) -> SubgroupSet:
    gens = tuple(dict.fromkeys(e for e in elems if e != 0))
    return SubgroupSet(G, closure_mask(G, gens), gens)


def subgroup_from_elements(G: Group, elems: Iterable[int]) -> SubgroupSet:
    """Wrap an element set that is already known to be a subgroup."""
    mask = 0
    for e in elems:
        mask |= 1 << e
    return SubgroupSet(G, mask)


# --------------------------------------------------------------------------
# Construction


def group_from_generators(
    gens: Sequence[Permutation],
    cap: int | None = None,
    degree: int | None = None,
    label: str | None = None,
) -> Group:
    """Close a list of permutations under composition (BFS, identity first)."""
    cap = element_cap() if cap is None else cap
    if cap < 1:
        raise InvalidParameters("cap must be at least 1")
    degrees = {g.degree for g in gens}
    if degree is not None:
        degrees.add(degree)
    if len(degrees) > 1:
        raise DegreeMismatch(f"generators have degrees {sorted(degrees)}")
    deg = degrees.pop() if degrees else 1
    ident = tuple(range(deg))
    gimgs = list(dict.fromkeys(g.images for g in gens if g.images != ident))
    elements = [ident]
    seen = {ident}
    i = 0
    while i < len(elements):
        x = elements[i]
        for g in gimgs:
            y = _compose(x, g)
            if y not in seen:
                if len(elements) >= cap:
                    raise CapExceeded("group order", cap)
                seen.add(y)
                elements.append(y)
        i += 1
    construction = f"generators(degree={deg}, count={len(gens)})"
    return Group.from_operation(elements, _compose, label=label or construction, construction=construction)


def group_from_cayley_table(
    table: Sequence[Sequence[int]],
    label: str = "cayley",
    construction: str = "cayley_table",
    seed: int = 0,
) -> Group:
    """Validate a Cayley table (identity at index 0) and wrap it as a Group.

    Associativity is checked on all n**3 triples when n <= 256; above that,
    10*n**2 random triples are checked and the group is flagged
    ``partially_verified``.
    """
    n = len(table)
    if n < 1:
        raise NotAGroup("nonempty", ())
    for i, row in enumerate(table):
        if len(row) != n:
            raise NotAGroup("square table", (i,))
    t = np.asarray(table, dtype=np.int64)
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        i, j = (int(v) for v in bad[0])
        raise NotAGroup("closure", (i, j))
    for i in range(n):
        if t[0, i] != i:
            raise NotAGroup("identity", (0, i))
        if t[i, 0] != i:
            raise NotAGroup("identity", (i, 0))
    for i in range(n):
        right = np.flatnonzero(t[i] == 0)
        if not len(right) or t[right[0], i] != 0:
            raise NotAGroup("inverse", (i,))
    partially = False
    if n <= ASSOC_EXHAUSTIVE_LIMIT:
        for x in range(n):
            lhs = t[t[x]]        # (x*y)*z over (y, z)
            rhs = t[x][t]        # x*(y*z) over (y, z)
            diff = np.argwhere(lhs != rhs)
            if len(diff):
                y, z = (int(v) for v in diff[0])
                raise NotAGroup("associativity", (x, y, z))
    else:
        rng = np.random.default_rng(seed)
        count = 10 * n * n
        for start in range(0, count, 1 << 20):
            size = min(1 << 20, count - start)
            x, y, z = (rng.integers(0, n, size) for _ in range(3))
            diff = np.flatnonzero(t[t[x, y], z] != t[x, t[y, z]])
            if len(diff):
                k = diff[0]
                raise NotAGroup("associativity", (int(x[k]), int(y[k]), int(z[k])))
        partially = True
    rows = t.tolist()
    return Group(rows, label=label, construction=construction, partially_verified=partially)


def _check_cap(order: int) -> None:
    cap = element_cap()
    if order > cap:
        raise CapExceeded("group order", cap)


def _mod_add(n, a, b):
    return (a + b) % n


def cyclic(n: int) -> Group:
    if n < 1:
        raise InvalidParameters(f"cyclic(n) needs n >= 1, got {n}")
    _check_cap(n)
    if n <= TABLE_LIMIT:
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return Group(table, label=f"C{n}", construction=f"cyclic({n})", elements=list(range(n)),
                     op=functools.partial(_mod_add, n))
    return Group(None, label=f"C{n}", construction=f"cyclic({n})", elements=list(range(n)),
                 op=functools.partial(_mod_add, n))


def _tuple_add(ns, a, b):
    return tuple((x + y) % m for x, y, m in zip(a, b, ns))


def abelian_from_invariants(ns: Sequence[int]) -> Group:
    """Direct product of cyclic groups of the given orders."""
    ns = tuple(int(m) for m in ns)
    if any(m < 1 for m in ns):
        raise InvalidParameters(f"invariants must be positive, got {ns}")
    ns = tuple(m for m in ns if m > 1) or (1,)
    order = math.prod(ns)
    _check_cap(order)
    elements = list(itertools.product(*(range(m) for m in ns)))
    label = "x".join(f"C{m}" for m in ns)
    return Group.from_operation(elements, functools.partial(_tuple_add, ns), label=label,
                                construction=f"abelian({','.join(map(str, ns))})")


def _dihedral_op(n, a, b):
    (i, s), (j, t) = a, b
    return ((i + (j if s == 0 else -j)) % n, (s + t) % 2)


def dihedral(n: int) -> Group:
    """Symmetries of the n-gon, order 2n: rotation r and reflection s."""
    if n < 1:
        raise InvalidParameters(f"dihedral(n) needs n >= 1, got {n}")
    _check_cap(2 * n)
    elements = [(i, s) for s in range(2) for i in range(n)]
    return Group.from_operation(elements, functools.partial(_dihedral_op, n), label=f"D{n}",
                                construction=f"dihedral({n})")


def _dicyclic_op(m, a, b):
    (i, s), (j, t) = a, b
    k = i + (j if s == 0 else -j)
    if s and t:
        k += m  # b^2 = a^m
    return (k % (2 * m), (s + t) % 2)


def dicyclic(m: int) -> Group:
    """Order 4m: a^(2m) = 1, b^2 = a^m, b^-1 a b = a^-1.

    ``dicyclic(2**(n-2))`` is the generalized quaternion group of order 2**n.
    Element ``(i, s)`` stands for ``a^i b^s``.
    """
    if m < 2:
        raise InvalidParameters(f"dicyclic(m) needs m >= 2, got {m}")
    _check_cap(4 * m)
    elements = [(i, s) for s in range(2) for i in range(2 * m)]
    label = f"Q{4 * m}" if m & (m - 1) == 0 else f"Dic{m}"
    return Group.from_operation(elements, functools.partial(_dicyclic_op, m), label=label,
                                construction=f"dicyclic({m})")


def symmetric(n: int) -> Group:
    if n < 1:
        raise InvalidParameters(f"symmetric(n) needs n >= 1, got {n}")
    _check_cap(math.factorial(n))
    elements = list(itertools.permutations(range(n)))
    return Group.from_operation(elements, _compose, label=f"S{n}", construction=f"symmetric({n})")


def _parity(p: tuple) -> int:
    seen, parity = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def alternating(n: int) -> Group:
    if n < 1:
        raise InvalidParameters(f"alternating(n) needs n >= 1, got {n}")
    _check_cap(max(1, math.factorial(n) // 2))
    elements = [p for p in itertools.permutations(range(n)) if _parity(p) == 0]
    return Group.from_operation(elements, _compose, label=f"A{n}", construction=f"alternating({n})")


def _heis_op(p, a, b):
    (x, y, z), (u, v, w) = a, b
    return ((x + u) % p, (y + v) % p, (z + w + x * v) % p)


def heisenberg(p: int) -> Group:
    """Upper unitriangular 3x3 matrices over F_p; (x, y, z) has x, y above the
    diagonal and z in the corner."""
    if not is_prime(p):
        raise InvalidParameters(f"heisenberg(p) needs p prime, got {p}")
    _check_cap(p ** 3)
    elements = list(itertools.product(range(p), repeat=3))
    return Group.from_operation(elements, functools.partial(_heis_op, p), label=f"Heis{p}",
                                construction=f"heisenberg({p})")


def _metacyclic_op(m, k, tpow, a, b):
    (i, j), (u, v) = a, b
    return ((i + u * tpow[j]) % m, (j + v) % k)


def metacyclic(m: int, k: int, t: int, label: str | None = None, construction: str | None = None) -> Group:
    """Z_m semidirect Z_k with (i,j)(i',j') = (i + i' t^j mod m, j + j' mod k).

    Element ``(i, j)`` is ``a^i b^j`` with ``b a b^-1 = a^t``.
    """
    if m < 1 or k < 1:
        raise InvalidParameters(f"metacyclic needs m, k >= 1, got m={m}, k={k}")
    if pow(t, k, m) != 1 % m:
        raise InvalidParameters(f"metacyclic needs t^k = 1 mod m, got t={t}, k={k}, m={m}")
    _check_cap(m * k)
    tpow = tuple(pow(t, j, m) for j in range(k))
    elements = [(i, j) for j in range(k) for i in range(m)]
    return Group.from_operation(
        elements,
        functools.partial(_metacyclic_op, m, k, tpow),
        label=label or f"metacyclic({m},{k},{t % m})",
        construction=construction or f"metacyclic({m},{k},{t % m})",
    )


def modular_M(p: int, n: int) -> Group:
    """M_{p^n}: a^(p^(n-1)) = b^p = 1, b^-1 a b = a^(p^(n-2)+1).

    Realized as ``metacyclic(p^(n-1), p, t)`` with t the inverse of
    p^(n-2)+1, so that a = (1, 0) and b = (0, 1) satisfy the relation exactly.
    """
    if not is_prime(p):
        raise InvalidParameters(f"modular_M needs p prime, got {p}")
    if n < 3:
        raise InvalidParameters(f"modular_M needs n >= 3, got {n}")
    if p == 2 and n < 4:
        raise InvalidParameters("modular_M(2, n) needs n >= 4 (M_8 would be dihedral)")
    m = p ** (n - 1)
    s = p ** (n - 2) + 1
    t = pow(s, -1, m)
    return metacyclic(m, p, t, label=f"M{p ** n}", construction=f"modular_M({p},{n})")


def _product_op(G, H, a, b):
    m = H.order
    (a1, a2), (b1, b2) = divmod(a, m), divmod(b, m)
    return G.mul(a1, b1) * m + H.mul(a2, b2)


def direct_product(G: Group, H: Group, label: str | None = None) -> Group:
    """G x H with (g, h) stored at index ``g * |H| + h``."""
    n, m = G.order, H.order
    _check_cap(n * m)
    label = label or f"{G.label}x{H.label}"
    construction = f"direct_product({G.construction}, {H.construction})"
    if n * m <= TABLE_LIMIT:
        gr, hr = G.rows, H.rows
        table = []
        for a1 in range(n):
            ga = gr[a1]
            for a2 in range(m):
                ha = hr[a2]
                table.append([ga[b1] * m + ha[b2] for b1 in range(n) for b2 in range(m)])
        return Group(table, label=label, construction=construction)
    return Group(None, label=label, construction=construction, elements=list(range(n * m)),
                 op=functools.partial(_product_op, G, H))


# --------------------------------------------------------------------------
# Elementary operations


def centralizer(G: Group, S) -> SubgroupSet:
    """C_G(S) for a SubgroupSet or an iterable of element indices."""
    if isinstance(S, SubgroupSet):
        if S.parent is not G:
            raise ParentMismatch("subgroup does not belong to this group")
        elems = S.gens
    else:
        elems = list(S)
    cm = G.centralizer_masks
    mask = G.full_mask
    for s in elems:
        mask &= cm[s]
    return SubgroupSet(G, mask)


def center(G: Group) -> SubgroupSet:
    return G._cached("center", lambda: centralizer(G, G.whole()))


def is_abelian(G: Group) -> bool:
    return center(G).order == G.order


def element_orders(G: Group) -> list[int]:
    """Sorted multiset of element orders."""
    return sorted(G.orders)


def exponent(G: Group) -> int:
    return math.lcm(*G.orders)


def order_histogram(G: Group) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(Counter(G.orders).items()))


def is_normal(G: Group, H: SubgroupSet) -> bool:
    conj = G.conj
    mask = H.mask
    for g in G.generators:
        cg = conj[g]
        for h in H.gens:
            if not (mask >> cg[h]) & 1:
                return False
    return True


def conjugacy_classes(G: Group) -> list[list[int]]:
    """Conjugacy classes of elements, ordered by least member."""
    conj, n = G.conj, G.order
    seen = [False] * n
    classes = []
    for x in range(n):
        if seen[x]:
            continue
        cls = sorted({conj[g][x] for g in range(n)})
        for y in cls:
            seen[y] = True
        classes.append(cls)
    return classes


def derived_subgroup(G: Group, H: SubgroupSet | None = None) -> SubgroupSet:
    """[H, H], as the normal closure in H of commutators of H's generators."""
    H = H or G.whole()
    rows, inv = G.rows, G.inv
    gens = H.gens

    def comm(x, y):
        return rows[rows[inv[x]][inv[y]]][rows[x][y]]

    seeds = {comm(x, y) for x in gens for y in gens} - {0}
    mask = closure_mask(G, seeds)
    conj = G.conj
    while True:
        elems = list(iter_bits(mask))
        extra = {conj[g][e] for g in gens for e in elems} - set(elems)
        if not extra:
            return SubgroupSet(G, mask)
        seeds |= extra
        mask = closure_mask(G, seeds)


def is_solvable(G: Group) -> bool:
    def compute():
        if G.order < 60 or prime_power_base(G.order) or G.order % 2:
            return True
        H = G.whole()
        while H.order > 1:
            D = derived_subgroup(G, H)
            if D.order == H.order:
                return False
            H = D
        return True

    return G._cached("solvable", compute)


def p_elements(G: Group, p: int) -> int:
    """Bit-mask of elements whose order is a power of p."""
    mask = 0
    for x, o in enumerate(G.orders):
        if o == 1 or prime_power_base(o) == p:
            mask |= 1 << x
    return mask


def is_nilpotent(G: Group, lattice=None) -> bool:
    """True iff every Sylow subgroup is normal.

    With a lattice, Sylow subgroups and normality come from it; otherwise a
    Sylow p-subgroup is normal exactly when the p-elements number |G|_p.
    """
    primes = prime_factors(G.order)
    if lattice is not None:
        from .lattice import sylow_subgroup

        return all(lattice.is_normal_index(lattice.index_of(sylow_subgroup(lattice, p))) for p in primes)
    return all(p_elements(G, p).bit_count() == p ** a for p, a in primes.items())


def is_isomorphic(G: Group, H: Group, budget: int = 200_000) -> bool | None:
    """True/False when the search finishes within ``budget`` nodes, else None."""
    from .morphisms import is_isomorphic as _iso

    return _iso(G, H, budget)
