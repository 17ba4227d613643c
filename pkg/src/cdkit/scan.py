"""Catalog scans: per-group analysis fanned out over a worker pool."""

from __future__ import annotations

import multiprocessing

from .catalog import Catalog, builtin_catalog
from .cd import cd_report
from .classify import GroupFacts, target_checks, delta_checks, recognize, v_checks
from .errors import CapExceeded
from .groups import Group, is_nilpotent
from .lattice import all_subgroups

CHECK_CHOICES = ("delta", "v", "props", "all")


def _selected(check: str) -> set[str]:
    return {"delta", "v", "props"} if check == "all" else {check}


def analyze(spec: str, G: Group, checks: set[str]) -> dict:
    """Everything a scan records about one group, as a JSON-ready dict."""
    try:
        lattice = all_subgroups(G)
    except CapExceeded as exc:
        return {"label": G.label, "spec": spec, "order": G.order, "error": str(exc), "checks": []}
    report = cd_report(G, lattice, properties="props" in checks)
    facts = GroupFacts(G.label, G.order, report.delta, report.v, recognize(G), is_nilpotent(G), report)
    results = []
    informational = False
    if "delta" in checks:
        results += delta_checks(facts)
    if "v" in checks:
        v_results, informational = v_checks(facts)
        results += v_results
    if "props" in checks:
        results += report.checks
    return {
        "label": G.label,
        "spec": spec,
        "order": G.order,
        "subgroups": len(lattice),
        "m_star": str(report.m_star),
        "cd_member_count": len(report.cd_members),
        "delta": report.delta,
        "v": report.v,
        "tag": str(facts.tag),
        "nilpotent": facts.nilpotent,
        "nilpotent_v3": informational,
        "checks": [c.to_dict() for c in results],
    }


def _work(args):
    spec, G, checks = args
    return analyze(spec, G, checks)


def run_scan(max_order: int, check: str = "all", jobs: int = 1, catalog: Catalog | None = None) -> dict:
    """Run the selected checks over the built-in catalog; results stay in catalog order."""
    checks = _selected(check)
    catalog = catalog or builtin_catalog(max_order)
    tasks = [(e.spec, e.group, checks) for e in catalog]
    if jobs > 1 and len(tasks) > 1:
        with multiprocessing.get_context("spawn").Pool(jobs) as pool:
            records = list(pool.imap(_work, tasks, chunksize=1))
    else:
        records = [_work(t) for t in tasks]

    targets: dict[str, list[dict]] = {}
    for kind in ("delta", "v"):
        if kind in checks:
            targets[kind] = target_checks(kind)

    counterexamples = []
    for r in records:
        for c in r["checks"]:
            if c["status"] == "fail":
                counterexamples.append({"label": r["label"], "check": c["name"], "witness": c["witness"],
                                        "detail": c["detail"]})
    for kind, rows in targets.items():
        for row in rows:
            if row["status"] == "fail":
                counterexamples.append({"label": row["label"], "check": f"{kind}_target",
                                        "witness": [], "detail": f"expected {row['expected']}, got {row['computed']}"})
    skipped = sum(1 for r in records for c in r["checks"] if c["status"] == "skipped")
    summary = {
        "groups_scanned": len(records),
        "counterexamples": len(counterexamples),
        "budget_errors": sum(1 for r in records if "error" in r),
        "skipped_checks": skipped,
        "orders_exhaustive": catalog.exhaustive_orders(),
        "orders_partial": sorted(n for n, ok in catalog.coverage.items() if not ok),
    }
    if "v" in checks:
        summary["nilpotent_v3"] = [r["label"] for r in records if r.get("nilpotent_v3")]
    return {
        "max_order": max_order,
        "check": check,
        "summary": summary,
        "counterexample_list": counterexamples,
        "targets": targets,
        "groups": records,
    }
