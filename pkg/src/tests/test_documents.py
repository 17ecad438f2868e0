"""
Tests for JSON documents and the fixture corpus
"""

import pytest

from decompspace.axioms import convex_hull
from decompspace.corpus import NEGATIVES, corpus_document, corpus_space, names
from decompspace.documents import (
    MapDocument,
    PosetDocument,
    SSetDocument,
    SubSSetDocument,
    dumps,
    load,
    load_map,
    load_space,
    load_vertices,
    parse,
    save,
    sset_document,
    space_from_document,
)
from decompspace.exceptions import DocumentError
from decompspace.sset import Provenance


@pytest.mark.parametrize(
    "filename",
    [
        "b2.poset.json",
        "chain3.poset.json",
        "delta2.poset.json",
        "delta02.poset.json",
        "incl.map.json",
        "k_a.vertices.json",
    ],
)
def test_golden_files_round_trip(data_path, filename):
    """Test that loading and dumping a golden document reproduces it byte for byte"""
    path = data_path / filename
    assert dumps(load(path)) == path.read_text(encoding="utf-8")


def test_poset_document_defaults():
    document = parse('{"type": "poset", "elements": ["x"]}')
    assert isinstance(document, PosetDocument)
    assert document.kind == "covers"
    assert document.relations == []
    assert space_from_document(document).cap == 2


def test_unknown_field_rejected():
    with pytest.raises(DocumentError) as exc:
        parse('{"type": "poset", "elements": ["x"], "colour": "red"}', "inline")
    assert exc.value.location.startswith("inline")


def test_unknown_type_and_bad_json():
    with pytest.raises(DocumentError):
        parse('{"type": "graph"}')
    with pytest.raises(DocumentError) as exc:
        parse("{", "broken.json")
    assert exc.value.location.startswith("broken.json:1")


def test_missing_file(tmp_path):
    with pytest.raises(DocumentError):
        load(tmp_path / "absent.json")


def test_face_table_errors():
    """Test that bad face tables name their level and index"""
    document = sset_document(corpus_space("chain2"))
    document.faces[0].table.pop("(0,1)")
    with pytest.raises(DocumentError) as exc:
        document.to_sset()
    assert "level 1 index 0" in exc.value.location

    document = sset_document(corpus_space("chain2"))
    document.faces[0].level = 5
    with pytest.raises(DocumentError, match="within the cap"):
        document.to_sset()

    document = sset_document(corpus_space("chain2"))
    document.cells.pop()
    with pytest.raises(DocumentError, match="levels of cells"):
        document.to_sset()


def test_identity_violation_becomes_document_error():
    document = sset_document(corpus_space("chain3"))
    table = next(entry.table for entry in document.faces if (entry.level, entry.index) == (2, 0))
    table["(0,1,2)"] = "(0,2)"
    with pytest.raises(DocumentError) as exc:
        space_from_document(document)
    assert exc.value.location == "level 2"


def test_sset_document_round_trip(tmp_path):
    X = corpus_space("hollow")
    path = tmp_path / "hollow.json"
    save(sset_document(X), path)
    Y = load_space(path)
    assert Y.cells == X.cells
    assert Y.faces == X.faces
    assert Y.provenance is Provenance.RAW


def test_load_space_names_from_file(tmp_path):
    path = tmp_path / "anon.json"
    save(PosetDocument(elements=["x", "y"], relations=[("x", "y")]), path)
    assert load_space(path).name == "anon.json"


def test_map_documents(data_path):
    """Test vertex-given and levelwise maps"""
    Y = load_space(data_path / "delta02.poset.json")
    X = load_space(data_path / "delta2.poset.json")
    f = load_map(data_path / "incl.map.json", Y, X)
    assert f(1, "(0,2)") == "(0,2)"
    assert f(2, "(0,0,2)") == "(0,0,2)"

    with pytest.raises(DocumentError, match="exactly one"):
        MapDocument().to_map(Y, X)
    with pytest.raises(DocumentError):
        load_map(data_path / "b2.poset.json", Y, X)


def test_map_document_bad_vertex(tmp_path, data_path):
    Y = load_space(data_path / "delta02.poset.json")
    X = load_space(data_path / "delta2.poset.json")
    path = tmp_path / "bad.map.json"
    save(MapDocument(vertices={"0": "2", "2": "0"}), path)
    with pytest.raises(DocumentError):
        load_map(path, Y, X)


def test_vertices_document(data_path):
    assert load_vertices(data_path / "k_a.vertices.json") == ["a"]
    with pytest.raises(DocumentError):
        load_vertices(data_path / "b2.poset.json")


def test_subsset_document(b2):
    document = SubSSetDocument.from_subsset(convex_hull(b2, ["(a)"]), "convex")
    assert document.vertices == ["(a)"]
    assert document.cells[1] == ["(a,a)"]
    assert parse(dumps(document)) == document


def test_corpus_documents():
    assert "b2" in names()
    for name in NEGATIVES:
        document = corpus_document(name)
        assert isinstance(document, SSetDocument)
        assert space_from_document(document).provenance is Provenance.RAW
    with pytest.raises(DocumentError):
        corpus_document("nothing")


def test_sset_document_cannot_declare_nerve_provenance():
    """Test that a table document claiming a chain bound is rejected"""
    text = dumps(sset_document(corpus_space("chain3")))
    claimed = text.replace('"cells"', '"provenance": "nerve",\n  "chain_bound": 0,\n  "cells"', 1)
    with pytest.raises(DocumentError) as exc:
        parse(claimed, "claimed.json")
    assert exc.value.location.startswith("claimed.json")
