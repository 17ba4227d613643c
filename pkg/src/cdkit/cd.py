"""Chermak-Delgado measures, lattices and the structural checks on them.

All measures are exact Python ints.  Check functions take a group and its
complete subgroup lattice and return ``CheckResult`` records; a failing
record carries lattice indices of the offending subgroups as its witness.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .errors import ParentMismatch
from .groups import Group, SubgroupSet, center, closure_mask, is_nilpotent, prime_factors
from .lattice import SubgroupLattice, sylow_subgroups
from .morphisms import SearchBudgetExceeded, find_automorphism_moving

CHARACTERISTIC_ORDER_LIMIT = 64
MODULAR_TRIPLE_BUDGET = 1_000_000
AUTOMORPHISM_BUDGET = 200_000


@dataclass
class CheckResult:
    name: str
    passed: bool | None  # None means skipped
    witness: tuple[int, ...] = ()
    detail: str = ""

    def to_dict(self) -> dict:
        status = "skipped" if self.passed is None else ("pass" if self.passed else "fail")
        return {"name": self.name, "status": status, "witness": list(self.witness), "detail": self.detail}


@dataclass
class CDReport:
    label: str
    order: int
    m_star: int
    measures: list[int]
    cd_members: tuple[int, ...]
    image: tuple[int, ...]
    delta: int
    v: int
    min_member: int | None
    flags: dict[str, bool | None]
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.passed is False]

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "order": self.order,
            "m_star": str(self.m_star),
            "image": [str(m) for m in self.image],
            "delta": self.delta,
            "v": self.v,
            "cd_member_count": len(self.cd_members),
            "cd_members": list(self.cd_members),
            "min_member": self.min_member,
            "flags": dict(self.flags),
            "checks": [c.to_dict() for c in self.checks],
        }


# --------------------------------------------------------------------------
# Measures


def measure(G: Group, H: SubgroupSet) -> int:
    """|H| * |C_G(H)|."""
    if H.parent is not G:
        raise ParentMismatch("subgroup does not belong to this group")
    cm = G.centralizer_masks
    mask = G.full_mask
    for h in H.gens:
        mask &= cm[h]
    return H.order * mask.bit_count()


class _Data:
    """Per-lattice measure data, cached on the lattice."""

    def __init__(self, lattice: SubgroupLattice):
        G = lattice.parent
        cm = G.centralizer_masks
        full = G.full_mask
        self.cent: list[int] = []
        self.measures: list[int] = []
        for H in lattice.subgroups:
            mask = full
            for h in H.gens:
                mask &= cm[h]
            self.cent.append(lattice.index_of(mask))
            self.measures.append(H.order * mask.bit_count())
        self.m_star = max(self.measures)
        self.cd = [i for i, m in enumerate(self.measures) if m == self.m_star]
        self.cd_set = set(self.cd)
        self.cd_bits = 0
        for i in self.cd:
            self.cd_bits |= 1 << i
        self.image = tuple(sorted(set(self.measures)))
        self.center = lattice.index_of(center(G).mask)


def _data(lattice: SubgroupLattice) -> _Data:
    d = lattice.__dict__.get("_cd_data")
    if d is None:
        d = _Data(lattice)
        lattice.__dict__["_cd_data"] = d
    return d


def measures(lattice: SubgroupLattice) -> list[int]:
    return _data(lattice).measures


def cd_members(lattice: SubgroupLattice) -> list[int]:
    return _data(lattice).cd


def m_star(lattice: SubgroupLattice) -> int:
    return _data(lattice).m_star


def centralizer_index(lattice: SubgroupLattice, i: int) -> int:
    return _data(lattice).cent[i]


def delta(lattice: SubgroupLattice) -> int:
    return len(lattice) - len(_data(lattice).cd)


def v_count(lattice: SubgroupLattice) -> int:
    cd = _data(lattice).cd_set
    return sum(1 for cls in lattice.classes if not any(i in cd for i in cls))


# --------------------------------------------------------------------------
# Lattice-structure checks on CD


class _Joins:
    def __init__(self, lattice: SubgroupLattice):
        self.lattice = lattice
        self.cache: dict[tuple[int, int], int] = {}

    def __call__(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        key = (i, j)
        out = self.cache.get(key)
        if out is None:
            L = self.lattice
            H, K = L[i], L[j]
            if H.mask & ~K.mask == 0:
                out = j
            elif K.mask & ~H.mask == 0:
                out = i
            else:
                out = L.index_of(closure_mask(L.parent, H.gens + K.gens, H.elements))
            self.cache[key] = out
        return out


def _meet(L: SubgroupLattice, i: int, j: int) -> int:
    return L.index_of(L[i].mask & L[j].mask)


def _leq(L: SubgroupLattice, i: int, j: int) -> bool:
    return L[i].mask & ~L[j].mask == 0


def check_sublattice(G: Group, lattice: SubgroupLattice, joins: _Joins | None = None) -> CheckResult:
    d = _data(lattice)
    joins = joins or _Joins(lattice)
    for i, j in itertools.combinations(d.cd, 2):
        if _meet(lattice, i, j) not in d.cd_set:
            return CheckResult("cd_sublattice", False, (i, j), "meet leaves CD")
        if joins(i, j) not in d.cd_set:
            return CheckResult("cd_sublattice", False, (i, j), "join leaves CD")
    return CheckResult("cd_sublattice", True)


def check_modular(G: Group, lattice: SubgroupLattice, joins: _Joins | None = None,
                  budget: int = MODULAR_TRIPLE_BUDGET) -> CheckResult:
    """x <= z implies x v (y ^ z) = (x v y) ^ z over all CD triples."""
    d = _data(lattice)
    if len(d.cd) ** 3 > budget:
        return CheckResult("cd_modular", None, detail=f"{len(d.cd)}^3 triples exceed budget {budget}")
    joins = joins or _Joins(lattice)
    for x, z in itertools.product(d.cd, repeat=2):
        if not _leq(lattice, x, z):
            continue
        for y in d.cd:
            left = joins(x, _meet(lattice, y, z))
            right = _meet(lattice, joins(x, y), z)
            if left != right:
                return CheckResult("cd_modular", False, (x, y, z))
    return CheckResult("cd_modular", True)


def check_self_dual(G: Group, lattice: SubgroupLattice) -> CheckResult:
    """H -> C_G(H) is an order-reversing involution of CD."""
    d = _data(lattice)
    for i in d.cd:
        c = d.cent[i]
        if c not in d.cd_set or d.cent[c] != i:
            return CheckResult("cd_self_dual", False, (i,), "centralizer map is not an involution on CD")
    for i, j in itertools.permutations(d.cd, 2):
        if _leq(lattice, i, j) and not _leq(lattice, d.cent[j], d.cent[i]):
            return CheckResult("cd_self_dual", False, (i, j), "centralizer map is not order-reversing")
    return CheckResult("cd_self_dual", True)


def minimal_members(lattice: SubgroupLattice) -> list[int]:
    d = _data(lattice)
    return [i for i in d.cd if not any(j != i and _leq(lattice, j, i) for j in d.cd)]


def is_characteristic(G: Group, lattice: SubgroupLattice, i: int,
                      budget: int = AUTOMORPHISM_BUDGET) -> tuple[bool | None, tuple[int, ...], str]:
    """Search for an automorphism moving subgroup i.

    Candidate targets are the other normal subgroups of the same order and
    element-order profile.  Returns (verdict, witness, detail); the verdict is
    None when the search budget runs out.
    """
    M = lattice[i]
    orders = G.orders

    def profile(H: SubgroupSet):
        return (H.is_abelian(), tuple(sorted(Counter(orders[x] for x in H.elements).items())))

    target = profile(M)
    candidates = [
        j for j, K in enumerate(lattice.subgroups)
        if j != i and K.order == M.order and lattice.normal_flags[j] and profile(K) == target
    ]
    if not lattice.normal_flags[i]:
        return False, (i,), "not even normal"
    for j in candidates:
        try:
            phi = find_automorphism_moving(G, M, lattice[j], budget)
        except SearchBudgetExceeded:
            return None, (j,), f"automorphism search budget {budget} exhausted"
        if phi is not None:
            return False, (i, j), "automorphism maps it to another subgroup"
    return True, (), f"{len(candidates)} candidate images excluded"


def _min_member_checks(G: Group, lattice: SubgroupLattice) -> tuple[int | None, list[CheckResult]]:
    d = _data(lattice)
    mins = minimal_members(lattice)
    if len(mins) != 1:
        return (mins[0] if mins else None), [
            CheckResult("min_member_unique", False, tuple(mins), f"{len(mins)} minimal CD members")
        ]
    m = mins[0]
    M = lattice[m]
    out = [CheckResult("min_member_unique", True, (m,))]
    out.append(CheckResult("min_member_abelian", M.is_abelian(), () if M.is_abelian() else (m,)))
    normal = lattice.normal_flags[m]
    out.append(CheckResult("min_member_normal", normal, () if normal else (m,)))
    zmask = lattice[d.center].mask
    contains = zmask & ~M.mask == 0
    out.append(CheckResult("min_member_contains_center", contains, () if contains else (m, d.center)))
    if G.order > CHARACTERISTIC_ORDER_LIMIT:
        out.append(CheckResult("min_member_characteristic", None,
                               detail=f"|G| > {CHARACTERISTIC_ORDER_LIMIT}, automorphism search skipped"))
    else:
        verdict, witness, detail = is_characteristic(G, lattice, m)
        out.append(CheckResult("min_member_characteristic", verdict, witness, detail))
    return m, out


# --------------------------------------------------------------------------
# Measure and centralizer properties


def check_centralizer_measure(G: Group, lattice: SubgroupLattice) -> list[CheckResult]:
    """m(H) <= m(C(H)) with equality forcing C(C(H)) = H; CD closed under C with C(C(H)) = H."""
    d = _data(lattice)
    first = CheckResult("measure_le_centralizer_measure", True)
    for i, m in enumerate(d.measures):
        c = d.cent[i]
        if m > d.measures[c]:
            first = CheckResult(first.name, False, (i, c), "m(H) > m(C(H))")
            break
        if m == d.measures[c] and d.cent[c] != i:
            first = CheckResult(first.name, False, (i, c), "equal measures but C(C(H)) != H")
            break
    second = CheckResult("cd_closed_under_centralizer", True)
    for i in d.cd:
        c = d.cent[i]
        if c not in d.cd_set or d.cent[c] != i:
            second = CheckResult(second.name, False, (i, c))
            break
    return [first, second]


def check_divisibility_props(G: Group, lattice: SubgroupLattice) -> list[CheckResult]:
    """Only the trivial group has every measure dividing |G| or CD(G) = L(G);
    |G| dividing every measure forces nilpotency."""
    d = _data(lattice)
    n = G.order
    out = []
    offenders = [i for i, m in enumerate(d.measures) if n % m]
    divides_all = not offenders
    if n == 1 or not divides_all:
        out.append(CheckResult("divides_order_only_trivial", True, tuple(offenders[:1]),
                               "hypothesis holds" if divides_all else "hypothesis fails"))
    else:
        out.append(CheckResult("divides_order_only_trivial", False, (), "every measure divides |G|"))
    all_cd = len(d.cd) == len(lattice)
    out.append(CheckResult("cd_equals_lattice_only_trivial", (not all_cd) or n == 1))
    multiples = all(m % n == 0 for m in d.measures)
    if multiples:
        nil = is_nilpotent(G)
        out.append(CheckResult("order_divides_all_implies_nilpotent", nil, (),
                               "hypothesis holds" + ("" if nil else ", group not nilpotent")))
    else:
        out.append(CheckResult("order_divides_all_implies_nilpotent", True, (), "hypothesis fails"))
    return out


def divisibility_hypotheses(lattice: SubgroupLattice) -> tuple[bool, bool]:
    """(every measure divides |G|, |G| divides every measure)."""
    d = _data(lattice)
    n = lattice.parent.order
    return all(n % m == 0 for m in d.measures), all(m % n == 0 for m in d.measures)


def check_consecutive_image(G: Group, lattice: SubgroupLattice) -> CheckResult:
    image = _data(lattice).image
    consecutive = image[-1] - image[0] == len(image) - 1
    ok = (not consecutive) or G.order == 1
    return CheckResult("consecutive_image_only_trivial", ok, (), f"image size {len(image)}")


def center_conditions(G: Group, lattice: SubgroupLattice) -> tuple[bool, bool, bool]:
    """The three conditions: measures divide along inclusions; m(H) = m(H meet Z);
    CD is exactly the subgroups containing Z."""
    d = _data(lattice)
    sup = lattice.supersets
    not_multiple: dict[int, int] = {}
    for a in d.image:
        bits = 0
        for j, m in enumerate(d.measures):
            if m % a:
                bits |= 1 << j
        not_multiple[a] = bits
    c1 = all(sup[i] & not_multiple[m] == 0 for i, m in enumerate(d.measures))
    zmask = lattice[d.center].mask
    c2 = all(d.measures[lattice.index_of(H.mask & zmask)] == d.measures[i] for i, H in enumerate(lattice))
    c3 = sup[d.center] == d.cd_bits
    return c1, c2, c3


def check_center_equivalence(G: Group, lattice: SubgroupLattice) -> CheckResult:
    c1, c2, c3 = center_conditions(G, lattice)
    return CheckResult("center_conditions_equivalent", c1 == c2 == c3, (), f"conditions={[c1, c2, c3]}")


def sylow_center_exponents(lattice: SubgroupLattice) -> dict[int, list[int]]:
    """For each prime p, log_p |Z(P)| over every Sylow p-subgroup P."""
    G = lattice.parent
    cm = G.centralizer_masks
    out = {}
    for p in prime_factors(G.order):
        exps = []
        for P in sylow_subgroups(lattice, p):
            mask = P.mask
            for h in P.gens:
                mask &= cm[h]
            z = mask.bit_count()
            k = 0
            while z > 1:
                z //= p
                k += 1
            exps.append(k)
        out[p] = exps
    return out


def check_image_lower_bound(G: Group, lattice: SubgroupLattice) -> list[CheckResult]:
    """|Im(m_G)| >= 1 + sum over p of n_p, where |Z(P)| = p^(n_p)."""
    exps = sylow_center_exponents(lattice)
    consistent = all(len(set(v)) == 1 for v in exps.values())
    bound = 1 + sum(v[0] for v in exps.values())
    size = len(_data(lattice).image)
    return [
        CheckResult("sylow_center_orders_agree", consistent, (), str(exps) if not consistent else ""),
        CheckResult("image_size_lower_bound", size >= bound, (), f"|Im| = {size}, bound = {bound}"),
    ]


def check_conjugation_invariance(G: Group, lattice: SubgroupLattice) -> CheckResult:
    d = _data(lattice)
    for cls in lattice.classes:
        values = {d.measures[i] for i in cls}
        orders = {lattice[i].order for i in cls}
        if len(values) > 1 or len(orders) > 1:
            return CheckResult("conjugation_invariant_measure", False, tuple(cls))
    return CheckResult("conjugation_invariant_measure", True)


def check_trivial_counts(G: Group, lattice: SubgroupLattice) -> list[CheckResult]:
    d = _data(lattice)
    trivial = G.order == 1
    return [
        CheckResult("image_size_at_least_two", trivial or len(d.image) >= 2),
        CheckResult("delta_zero_iff_trivial", (delta(lattice) == 0) == trivial),
        CheckResult("v_zero_iff_trivial", (v_count(lattice) == 0) == trivial),
    ]


# --------------------------------------------------------------------------


def cd_report(G: Group, lattice: SubgroupLattice, properties: bool = True) -> CDReport:
    """Measures, CD(G), delta, v and (optionally) every structural check."""
    if lattice.parent is not G:
        raise ParentMismatch("lattice belongs to a different group")
    d = _data(lattice)
    checks: list[CheckResult] = []
    flags: dict[str, bool | None] = {}
    min_member = None
    if properties:
        joins = _Joins(lattice)
        sub = check_sublattice(G, lattice, joins)
        mod = check_modular(G, lattice, joins)
        dual = check_self_dual(G, lattice)
        min_member, min_checks = _min_member_checks(G, lattice)
        checks += [sub, mod, dual, *min_checks]
        byname = {c.name: c.passed for c in min_checks}
        flags = {
            "is_sublattice": sub.passed,
            "is_modular": mod.passed,
            "is_self_dual": dual.passed,
            "min_abelian": byname.get("min_member_abelian"),
            "min_normal": byname.get("min_member_normal"),
            "min_contains_center": byname.get("min_member_contains_center"),
            "min_characteristic": byname.get("min_member_characteristic"),
        }
        checks += check_centralizer_measure(G, lattice)
        checks += check_divisibility_props(G, lattice)
        checks.append(check_consecutive_image(G, lattice))
        checks.append(check_center_equivalence(G, lattice))
        checks += check_image_lower_bound(G, lattice)
        checks.append(check_conjugation_invariance(G, lattice))
        checks += check_trivial_counts(G, lattice)
    else:
        mins = minimal_members(lattice)
        min_member = mins[0] if len(mins) == 1 else None
    return CDReport(
        label=G.label,
        order=G.order,
        m_star=d.m_star,
        measures=list(d.measures),
        cd_members=tuple(d.cd),
        image=d.image,
        delta=delta(lattice),
        v=v_count(lattice),
        min_member=min_member,
        flags=flags,
        checks=checks,
    )
