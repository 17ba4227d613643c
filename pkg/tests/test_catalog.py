from __future__ import annotations

import json

import pytest

from cdkit.catalog import builtin_catalog, expected_count, fingerprint, is_exhaustive_order, order_counts
from cdkit.errors import CapExceeded, InvalidParameters, NotAGroup, ParseError
from cdkit.files import group_file_text, load_group_file, parse_group_text, save_group_file, save_report
from cdkit.groups import dicyclic, direct_product, heisenberg, modular_M, symmetric
from cdkit.morphisms import is_isomorphic

# Number of groups of order n up to isomorphism, for n <= 64 (OEIS A000001).
# The catalog realizes only some of them at the partial orders, never more.
KNOWN_GROUP_COUNTS = [
    1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15, 2, 2, 5, 4, 1, 4, 1, 51,
    1, 2, 1, 14, 1, 2, 2, 14, 1, 6, 1, 4, 2, 2, 1, 52, 2, 5, 1, 5, 1, 15, 2, 13, 2, 2, 1, 13, 1, 2, 4, 267,
]


@pytest.fixture(scope="module")
def cat64():
    return builtin_catalog(64)


def labels(entries):
    return [e.group.label for e in entries]


def test_order_eight_slice():
    cat = builtin_catalog(8)
    assert labels(cat.of_order(8)) == ["C8", "C2xC4", "C2xC2xC2", "D4", "Q8"]
    assert cat.coverage[8] is True


def test_order_27_slice(cat64):
    assert sorted(labels(cat64.of_order(27))) == sorted(["C27", "C3xC9", "C3xC3xC3", "Heis3", "M27"])
    assert cat64.coverage[27] is True


def test_order_six_slice(cat64):
    assert sorted(labels(cat64.of_order(6))) == ["C6", "D3"]
    assert cat64.coverage[6] is True


def test_exhaustive_orders_have_known_counts(cat64):
    counts = order_counts(cat64)
    for n in range(1, 65):
        if is_exhaustive_order(n):
            assert counts[n] == expected_count(n) == KNOWN_GROUP_COUNTS[n - 1], n


def test_catalog_never_exceeds_known_counts(cat64):
    counts = order_counts(cat64)
    for n in range(1, 65):
        assert 1 <= counts[n] <= KNOWN_GROUP_COUNTS[n - 1], n


def test_exhaustive_order_classes():
    assert [n for n in range(1, 30) if is_exhaustive_order(n)] == [
        1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 25, 26, 27, 29,
    ]


def test_no_duplicates(cat64):
    for n in range(1, 65):
        entries = cat64.of_order(n)
        for i, a in enumerate(entries):
            for b in entries[i + 1:]:
                if fingerprint(a.group) == fingerprint(b.group):
                    assert is_isomorphic(a.group, b.group) is False, (a.spec, b.spec)


def test_deterministic():
    a, b = builtin_catalog(48), builtin_catalog(48)
    assert [(e.spec, e.group.label) for e in a] == [(e.spec, e.group.label) for e in b]
    assert json.dumps(a.manifest()) == json.dumps(b.manifest())


def test_sorted_by_order(cat64):
    orders = [e.group.order for e in cat64]
    assert orders == sorted(orders)


def test_manifest_shape():
    m = builtin_catalog(6).manifest()
    assert m["coverage"] == {str(n): "exhaustive" for n in range(1, 7)}
    first = m["entries"][0]
    assert list(first) == ["label", "spec", "order", "construction", "fingerprint"]


def test_max_order_bounds():
    with pytest.raises(InvalidParameters):
        builtin_catalog(201)
    with pytest.raises(InvalidParameters):
        builtin_catalog(0)


def test_fingerprint_differs_for_d4_and_q8():
    cat = builtin_catalog(8)
    d4, q8 = cat.of_order(8)[3].group, cat.of_order(8)[4].group
    assert fingerprint(d4) != fingerprint(q8)


# -- group files ------------------------------------------------------------


def test_perm_file_gives_s3(tmp_path):
    path = tmp_path / "s3.grp"
    path.write_text("# S3 on three points\nperm 3\n1 0 2\n\n1 2 0  # 3-cycle\n", encoding="utf-8")
    G = load_group_file(path)
    assert G.order == 6 and is_isomorphic(G, symmetric(3)) is True
    assert G.construction == str(path)


def test_cayley_file_trivial():
    assert parse_group_text("cayley 1\n0\n").order == 1


@pytest.mark.parametrize(
    "text, line",
    [
        ("perm 3\n1 0\n", 2),
        ("perm 3\n1 0 x\n", 2),
        ("perm 3\n0 0 1\n", 2),
        ("cayley 2\n0 1\n1\n", 3),
        ("cayley 2\n0 1\n", 3),
        ("matrix 2\n", 1),
        ("\n# nothing\nperm\n", 3),
        ("", 1),
    ],
)
def test_malformed_files(text, line):
    with pytest.raises(ParseError) as info:
        parse_group_text(text)
    assert info.value.line == line


def test_cayley_file_that_is_not_a_group():
    with pytest.raises(NotAGroup):
        parse_group_text("cayley 2\n0 1\n1 1\n")


def test_cayley_file_respects_cap(monkeypatch):
    monkeypatch.setenv("CDKIT_ELEMENT_CAP", "4")
    with pytest.raises(CapExceeded):
        parse_group_text("cayley 5\n")


@pytest.mark.parametrize(
    "G", [dicyclic(4), modular_M(3, 3), heisenberg(3), direct_product(symmetric(3), dicyclic(2))],
    ids=lambda G: G.label,
)
def test_round_trip(tmp_path, G):
    path = tmp_path / "g.grp"
    save_group_file(path, G)
    H = load_group_file(path)
    assert is_isomorphic(G, H) is True
    assert group_file_text(H).splitlines()[1:] == group_file_text(G).splitlines()[1:]


def test_save_report_is_atomic_and_ordered(tmp_path):
    path = tmp_path / "r.json"
    save_report(path, {"b": 1, "a": "δ"})
    text = path.read_text(encoding="utf-8")
    assert text.index('"b"') < text.index('"a"')
    assert "δ" in text
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]
