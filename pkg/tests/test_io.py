from __future__ import annotations

import json
from importlib import resources

import jsonschema
import pytest
from hypothesis import given

from ptrank import io
from ptrank.canonical import gen_full_schmidt_canonical
from ptrank.errors import ParseError

from conftest import bipartite


def _schema(name: str) -> dict:
    return json.loads(resources.files("ptrank").joinpath("schemas", name).read_text())


@given(bipartite())
def test_round_trip_bit_exact(m):
    text = io.dumps(m)
    back = io.loads(text)
    assert back == m
    assert io.dumps(back) == text


@given(bipartite())
def test_documents_match_schema(m):
    jsonschema.validate(io.to_document(m), _schema("matrix_document.schema.json"))


def test_file_round_trip(tmp_path):
    m = gen_full_schmidt_canonical(2, 3, 1)
    path = tmp_path / "m.json"
    io.dump(m, path)
    assert io.load(path) == m


def test_accepts_integers_and_missing_schema():
    doc = {"m1": 1, "n1": 1, "m2": 1, "n2": 2, "blocks": [[[[3, "-1/2"]]]]}
    m = io.from_document(doc)
    assert io.to_document(m)["blocks"] == [[[["3", "-1/2"]]]]


def _doc(**over):
    doc = {"schema": 1, "m1": 1, "n1": 1, "m2": 1, "n2": 1, "blocks": [[[["1"]]]]}
    doc.update(over)
    return doc


@pytest.mark.parametrize(
    "doc, message",
    [
        (_doc(blocks=[[[["1/0"]]]]), "block (0,0) entry (0,0): invalid rational '1/0': zero denominator"),
        (_doc(blocks=[[[[1.5]]]]), "expected a rational string"),
        (_doc(blocks=[[[[True]]]]), "expected a rational string"),
        (_doc(m1=0), "field 'm1' must be a positive integer"),
        (_doc(schema=2), "unsupported schema version"),
        (_doc(m1=2), "'blocks' must be a list of 2 block rows"),
        (_doc(n2=2), "row 0 must have 2 entries"),
        ([1, 2], "must be a JSON object"),
    ],
)
def test_parse_errors_name_the_problem(doc, message):
    with pytest.raises(ParseError, match=message.replace("(", r"\(").replace(")", r"\)")):
        io.from_document(doc)


def test_invalid_json_and_missing_file(tmp_path):
    with pytest.raises(ParseError, match="invalid JSON"):
        io.loads("{")
    with pytest.raises(ParseError, match="cannot read"):
        io.load(tmp_path / "missing.json")
