"""Plain-text group files and atomic JSON/text output.

Group file format::

    perm <degree>
    <images of generator 1, space separated, 0-based>
    ...

or::

    cayley <n>
    <row 0: n entries>
    ...

Blank lines and anything after '#' are ignored.  Index 0 of a Cayley table
is the identity.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .errors import CapExceeded, InvalidParameters, ParseError
from .groups import Group, Permutation, element_cap, group_from_cayley_table, group_from_generators


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {line!r}", lineno) from None


def parse_group_text(text: str, source: str = "<text>") -> Group:
    """Parse the group file format; ``source`` becomes the provenance tag."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty group file", 1)
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] not in ("perm", "cayley"):
        raise ParseError(f"expected 'perm <degree>' or 'cayley <n>', got {header!r}", lineno)
    kind = parts[0]
    try:
        size = int(parts[1])
    except ValueError:
        raise ParseError(f"bad size {parts[1]!r}", lineno) from None
    if size < 1:
        raise ParseError("size must be positive", lineno)
    if kind == "cayley" and size > element_cap():
        raise CapExceeded("group order", element_cap())
    label = Path(source).stem or source
    body = lines[1:]

    if kind == "perm":
        gens = []
        for lineno, line in body:
            images = _ints(line, lineno)
            if len(images) != size:
                raise ParseError(f"expected {size} images, got {len(images)}", lineno)
            try:
                gens.append(Permutation(tuple(images)))
            except InvalidParameters:
                raise ParseError("images do not form a permutation", lineno) from None
        G = group_from_generators(gens, degree=size, label=label)
    else:
        if len(body) != size:
            where = body[size][0] if len(body) > size else (body[-1][0] + 1 if body else lineno + 1)
            raise ParseError(f"expected {size} table rows, got {len(body)}", where)
        table = []
        for lineno, line in body:
            row = _ints(line, lineno)
            if len(row) != size:
                raise ParseError(f"expected {size} entries, got {len(row)}", lineno)
            table.append(row)
        G = group_from_cayley_table(table, label=label, construction=source)
    G.construction = source + (" (partially verified)" if G.partially_verified else "")
    return G


def load_group_file(path: str | os.PathLike) -> Group:
    """Read and validate a group file; its path is recorded as the provenance."""
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_group_text(text, source=path)


def group_file_text(G: Group) -> str:
    """Cayley-table serialization of G."""
    rows = G.rows
    lines = [f"# {G.label}", f"cayley {G.order}"]
    lines += [" ".join(map(str, rows[a][: G.order])) for a in range(G.order)]
    return "\n".join(lines) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write UTF-8 text through a temporary file in the same directory."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_group_file(path: str | os.PathLike, G: Group) -> None:
    write_atomic(path, group_file_text(G))


def report_json(report) -> str:
    """JSON text for a report dict or any object with ``to_dict``; key order is kept."""
    data = report.to_dict() if hasattr(report, "to_dict") else report
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def save_report(path: str | os.PathLike, report) -> None:
    write_atomic(path, report_json(report))
