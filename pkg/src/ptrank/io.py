"""JSON matrix documents.

A document mirrors the block layout of a bipartite matrix::

    {"schema": 1, "m1": 2, "n1": 2, "m2": 2, "n2": 2,
     "blocks": [[B00, B01], [B10, B11]]}

where each block is a list of rows of rational strings (``"3"``, ``"-1/2"``).
Strings keep the format exact; canonical rationals round-trip bit-exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

from ptrank.bipartite import BipartiteMatrix, BipartiteShape, from_blocks
from ptrank.errors import ParseError, ShapeMismatchError
from ptrank.matrix import ExactMatrix, parse_rational

SCHEMA_VERSION = 1
_DIMS = ("m1", "n1", "m2", "n2")


def to_document(m: BipartiteMatrix) -> dict:
    s = m.shape
    doc: dict = {"schema": SCHEMA_VERSION}
    doc.update(zip(_DIMS, s.astuple()))
    doc["blocks"] = [
        [[[str(x) for x in row] for row in m.block(i, j).iter_rows()] for j in range(s.n1)]
        for i in range(s.m1)
    ]
    return doc


def _parse_entry(value: object, where: str) -> object:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError(f"{where}: expected a rational string, got {value!r}")
    try:
        return parse_rational(str(value))
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def from_document(doc: object) -> BipartiteMatrix:
    """Validate a decoded document and build the matrix.

    Errors name the offending block and entry, e.g.
    ``block (0,1) entry (1,0): invalid rational '1/0': zero denominator``.
    """
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    schema = doc.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema version {schema!r}")
    dims = []
    for key in _DIMS:
        v = doc.get(key)
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ParseError(f"field {key!r} must be a positive integer, got {v!r}")
        dims.append(v)
    m1, n1, m2, n2 = dims
    blocks = doc.get("blocks")
    if not isinstance(blocks, list) or len(blocks) != m1:
        raise ParseError(f"'blocks' must be a list of {m1} block rows")
    grid = []
    for i, block_row in enumerate(blocks):
        if not isinstance(block_row, list) or len(block_row) != n1:
            raise ParseError(f"block row {i} must hold {n1} blocks")
        out_row = []
        for j, block in enumerate(block_row):
            if not isinstance(block, list) or len(block) != m2:
                raise ParseError(f"block ({i},{j}) must have {m2} rows")
            entries = []
            for a, row in enumerate(block):
                if not isinstance(row, list) or len(row) != n2:
                    raise ParseError(f"block ({i},{j}) row {a} must have {n2} entries")
                for b, value in enumerate(row):
                    entries.append(_parse_entry(value, f"block ({i},{j}) entry ({a},{b})"))
            out_row.append(ExactMatrix._raw(m2, n2, tuple(entries)))
        grid.append(out_row)
    try:
        return from_blocks(BipartiteShape(m1, n1, m2, n2), grid)
    except ShapeMismatchError as exc:  # pragma: no cover - guarded above
        raise ParseError(str(exc)) from None


def dumps(m: BipartiteMatrix) -> str:
    return json.dumps(to_document(m), indent=1) + "\n"


def loads(text: str) -> BipartiteMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_document(doc)


def dump(m: BipartiteMatrix, path: str | Path) -> None:
    Path(path).write_text(dumps(m), encoding="utf-8")


def load(path: str | Path) -> BipartiteMatrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)
