"""Acceptance criteria 1-8, one PASS/FAIL line each (also listed in the pytest summary)."""

from __future__ import annotations

import json
import subprocess
import sys
import time

import pytest

from cdkit.catalog import builtin_catalog
from cdkit.cd import cd_report
from cdkit.groups import (
    abelian_from_invariants,
    cyclic,
    dicyclic,
    metacyclic,
    modular_M,
    prime_factors,
    subgroup_generated,
)
from cdkit.lattice import all_subgroups
from cdkit.scan import run_scan

from oracles import subgroups_by_subsets

PER_GROUP_SECONDS = 1.0
PROPERTY_SCAN_SECONDS = 60.0


def timed_report(build):
    start = time.perf_counter()
    G = build()
    L = all_subgroups(G)
    r = cd_report(G, L, properties=False)
    return G, L, r, time.perf_counter() - start


def run_cli_scan(tmp_path, jobs: int):
    out = tmp_path / f"scan-jobs{jobs}.json"
    proc = subprocess.run(
        [sys.executable, "-m", "cdkit", "scan", "--max-order", "60", "--check", "all", "--jobs", str(jobs),
         "--out", str(out)],
        capture_output=True,
    )
    return proc, out.read_bytes() if out.exists() else b""


@pytest.fixture(scope="module")
def scan_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("scan")


@pytest.fixture(scope="module")
def scan_jobs1(scan_dir):
    return run_cli_scan(scan_dir, 1)


def test_criterion_1_delta_values(criterion):
    cases = [(f"C{p}", lambda p=p: cyclic(p), 1) for p in (2, 3, 5, 7)]
    cases.append(("Q8", lambda: dicyclic(2), 1))
    cases += [(f"C{p * p}", lambda p=p: cyclic(p * p), 2) for p in (2, 3, 5)]
    cases += [(f"C{p * q}", lambda n=p * q: cyclic(n), 3) for p, q in ((2, 3), (3, 5))]
    cases += [(f"C{p ** 3}", lambda p=p: cyclic(p ** 3), 3) for p in (2, 3)]
    cases += [(f"C{p ** 4}", lambda p=p: cyclic(p ** 4), 4) for p in (2, 3)]
    cases.append(("C2xC2", lambda: abelian_from_invariants([2, 2]), 4))
    cases.append(("M27", lambda: modular_M(3, 3), 4))
    bad = []
    for name, build, want in cases:
        _, _, r, secs = timed_report(build)
        if r.delta != want or secs >= PER_GROUP_SECONDS:
            bad.append(f"{name}: delta={r.delta} want {want}, {secs:.3f}s")
    assert criterion(1, "delta values exact, under 1 s each", not bad, "; ".join(bad) or f"{len(cases)} groups")


def test_criterion_2_v_values(criterion):
    cases = [(f"C{p}", lambda p=p: cyclic(p), 1) for p in (2, 3, 5, 7)]
    cases.append(("Q8", lambda: dicyclic(2), 1))
    cases += [(f"C{q * q}", lambda q=q: cyclic(q * q), 2) for q in (2, 3, 5, 7)]
    cases += [(f"M{p ** 3}", lambda p=p: modular_M(p, 3), 2) for p in (3, 5, 7)]
    cases += [
        ("nonabelian 6", lambda: metacyclic(3, 2, 2), 3),
        ("nonabelian 10", lambda: metacyclic(5, 2, 4), 3),
        ("nonabelian 21", lambda: metacyclic(7, 3, 2), 3),
    ]
    bad = []
    for name, build, want in cases:
        G, _, r, secs = timed_report(build)
        if r.v != want or secs >= PER_GROUP_SECONDS:
            bad.append(f"{name}: v={r.v} want {want}, {secs:.3f}s")
    assert criterion(2, "v values exact, under 1 s each", not bad, "; ".join(bad) or f"{len(cases)} groups")


def test_criterion_3_quaternion_cd_sets(criterion):
    bad = []
    for n in (3, 4, 5):
        m = 2 ** (n - 2)
        Q = dicyclic(m)
        L = all_subgroups(Q)
        r = cd_report(Q, L, properties=False)
        a, b = 1, 2 * m  # a = (1, 0), b = (0, 1)
        ab = Q.mul(a, b)
        if n == 3:
            named = [Q.full_mask, *(subgroup_generated(Q, [g]).mask for g in (a, b, ab, Q.mul(a, a)))]
        else:
            named = [subgroup_generated(Q, [a]).mask]
        got = {L[i].mask for i in r.cd_members}
        if got != set(named) or len(got) != len(named):
            bad.append(f"Q{2 ** n}: CD has {len(got)} members, expected {len(named)}")
        if r.m_star != 2 ** (2 * n - 2):
            bad.append(f"Q{2 ** n}: m*={r.m_star}")
    assert criterion(3, "CD(Q_2^n) exact sets and m* = 2^(2n-2)", not bad, "; ".join(bad) or "n = 3, 4, 5")


def test_criterion_4_modular_suite(criterion):
    bad = []
    for p, n in ((3, 3), (5, 3), (3, 4), (7, 3)):
        M = modular_M(p, n)
        L = all_subgroups(M)
        r = cd_report(M, L, properties=False)
        a = L.index_of(subgroup_generated(M, [1]))
        if r.m_star != p ** (2 * n - 2):
            bad.append(f"M{p ** n}: m*={r.m_star}")
        if a not in r.cd_members:
            bad.append(f"M{p ** n}: <a> not in CD")
        non_normal = [cls for cls in L.classes if not L.normal_flags[cls[0]]]
        if len(non_normal) != 1 or L[non_normal[0][0]].order != p:
            bad.append(f"M{p ** n}: non-normal classes {[[L[i].order for i in c] for c in non_normal]}")
    assert criterion(4, "M_p^n: m*, <a> in CD, one non-normal class of order p", not bad,
                     "; ".join(bad) or "(3,3) (5,3) (3,4) (7,3)")


def test_criterion_5_property_scan(criterion):
    required = {
        "measure_le_centralizer_measure", "cd_closed_under_centralizer", "min_member_unique",
        "min_member_abelian", "min_member_normal", "min_member_contains_center", "min_member_characteristic",
        "cd_sublattice", "cd_modular", "cd_self_dual", "image_size_lower_bound", "center_conditions_equivalent",
        "consecutive_image_only_trivial", "divides_order_only_trivial", "cd_equals_lattice_only_trivial",
        "order_divides_all_implies_nilpotent",
    }
    start = time.perf_counter()
    catalog = builtin_catalog(100)
    result = run_scan(100, check="props", jobs=1, catalog=catalog)
    secs = time.perf_counter() - start
    problems = []
    if result["summary"]["counterexamples"]:
        problems.append(f"{result['summary']['counterexamples']} counterexamples: {result['counterexample_list'][:3]}")
    if result["summary"]["budget_errors"]:
        problems.append(f"{result['summary']['budget_errors']} budget errors")
    for rec in result["groups"]:
        names = {c["name"] for c in rec["checks"]}
        if not required <= names:
            problems.append(f"{rec['label']} missing {sorted(required - names)}")
        for c in rec["checks"]:
            if c["status"] == "skipped" and not (c["name"] == "min_member_characteristic" and rec["order"] > 64):
                problems.append(f"{rec['label']} skipped {c['name']}")
    if secs >= PROPERTY_SCAN_SECONDS:
        problems.append(f"took {secs:.1f}s")
    detail = "; ".join(problems[:5]) or f"{len(result['groups'])} groups, {secs:.1f}s, 0 counterexamples"
    assert criterion(5, "property suite over catalog to order 100", not problems, detail)


def test_criterion_6_subset_oracle(criterion):
    bad = []
    groups = [e.group for e in builtin_catalog(16)]
    for G in groups:
        expected = {sum(1 << x for x in S) for S in subgroups_by_subsets(G)}
        got = [H.mask for H in all_subgroups(G)]
        if len(got) != len(expected) or set(got) != expected:
            bad.append(f"{G.label}: {len(got)} vs oracle {len(expected)}")
    assert criterion(6, "all_subgroups equals subset-closure oracle for |G| <= 16", not bad,
                     "; ".join(bad) or f"{len(groups)} groups")


def _small_order_classes(limit: int) -> set[int]:
    out = set()
    for n in range(2, limit + 1):
        exps = sorted(prime_factors(n).values())
        if exps in ([1], [2], [3], [1, 1]):
            out.add(n)
    return out


def test_criterion_7_classification_scan(criterion, scan_jobs1):
    proc, raw = scan_jobs1
    problems = []
    if proc.returncode != 0:
        problems.append(f"exit {proc.returncode}: {proc.stderr.decode(errors='replace')[-300:]}")
    data = json.loads(raw) if raw else {"summary": {}, "groups": []}
    exhaustive = set(data["summary"].get("orders_exhaustive", []))
    expected = _small_order_classes(60)
    if not expected <= exhaustive or exhaustive - expected - {1}:
        problems.append(f"exhaustive orders {sorted(exhaustive)}")
    for rec in data["groups"]:
        if rec["order"] in expected:
            for c in rec["checks"]:
                if c["status"] == "fail":
                    problems.append(f"{rec['label']} {c['name']}")
    if data["summary"].get("counterexamples"):
        problems.append(f"{data['summary']['counterexamples']} counterexamples")
    assert criterion(7, "scan --max-order 60 --check all", not problems,
                     "; ".join(problems[:5]) or f"exit 0, {len(expected)} exhaustive orders")


def test_criterion_8_jobs_determinism(criterion, scan_dir, scan_jobs1):
    proc1, raw1 = scan_jobs1
    proc8, raw8 = run_cli_scan(scan_dir, 8)
    same = raw1 == raw8 and proc1.stdout == proc8.stdout and bool(raw1)
    detail = f"{len(raw1)} bytes" if same else "reports differ"
    assert criterion(8, "--jobs 1 and --jobs 8 give byte-identical reports", same, detail)
