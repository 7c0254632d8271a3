from __future__ import annotations

import shutil
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from encap.ingest import (
    ManifestError,
    function_graph_scan,
    parse_java_source,
    parse_manifest,
    scan_java_tree,
    serialize_manifest,
    strip_java,
)
from encap.model import FlatSystem, HierTree, LayeredSystem, RegionCounts
from encap.psc import system_psc

THIRD_GRAPH = {
    "": (1, 1),
    "com.rail": (3, 1),
    "com.road": (2, 1),
    "org.util": (2, 2),
}

SECOND_GRAPH = {
    "Main": (1, 1),
    "com.rail.Signal": (1, 1),
    "com.rail.Train": (1, 1),
    "com.rail.Wagon": (0, 0),
    "com.road.Car": (3, 2),
    "com.road.Route": (3, 2),
    "org.util.Helpers": (3, 2),
    "org.util.Marker": (0, 0),
}


def _counts(code):
    return {k: (v.size, v.violating) for k, v in code.region_counts().items()}


# -- manifests ------------------------------------------------------------------


def test_flat_manifest():
    sys = parse_manifest("context flat\nregion a private=2 public=1\nregion b private=0 public=1")
    assert isinstance(sys, FlatSystem)
    assert system_psc(sys).total == 10


def test_empty_flat_manifest():
    sys = parse_manifest("context flat\n")
    assert isinstance(sys, FlatSystem) and sys.n == 0


def test_hier_manifest():
    tree = parse_manifest(
        "context hier\nsubsystem root parent=- private=0 public=1\nsubsystem c1 parent=root private=0 public=1"
    )
    assert isinstance(tree, HierTree) and tree.r == 2 and tree.names == ("root", "c1")


def test_layered_manifest_orders_layers_numerically(fixtures):
    sys = parse_manifest((fixtures / "manifests" / "layered.manifest").read_text())
    assert isinstance(sys, LayeredSystem)
    assert sys.L == 3 and sys.penetration == 1
    assert [len(layer) for layer in sys.layers] == [1, 2, 1]
    shuffled = "context layered\nlayer 5\nregion top private=0 public=1\nlayer 2\nregion bottom private=1 public=1\n"
    assert parse_manifest(shuffled).layers[0] == (RegionCounts(1, 1),)


def test_comments_and_blank_lines_are_ignored():
    text = "# header\n\ncontext flat\n  # indented comment\nregion a private=1 public=1\n\n"
    assert parse_manifest(text).n == 2


@pytest.mark.parametrize(
    "text, line, message",
    [
        ("", None, "context"),
        ("context round\n", 1, "first line"),
        ("context flat\nregion a private=1\n", 2, "expected"),
        ("context flat\nregion a private=x public=1\n", 2, "decimal"),
        ("context flat\nregion a private=1 public=1\nregion a private=1 public=1\n", 3, "duplicate"),
        ("context flat\nlayer 1\n", 2, "unexpected"),
        ("context layered\nregion a private=1 public=1\n", 2, "before any layer"),
        ("context layered\nlayer 1\nlayer 1\n", 3, "duplicate layer"),
        ("context layered\nlayer 0\npenetration 1\n", 3, "penetration"),
        ("context hier\nsubsystem a parent=- private=0 public=1\nsubsystem b parent=zz private=0 public=1\n", 3, "unknown parent"),
        ("context hier\nsubsystem a parent=- private=0 public=1\nsubsystem a parent=a private=0 public=1\n", 3, "duplicate"),
        ("context hier\n", None, "root"),
    ],
)
def test_manifest_errors_carry_line_numbers(text, line, message):
    with pytest.raises(ManifestError, match=message) as info:
        parse_manifest(text)
    assert info.value.line == line


def test_hier_cycle_is_rejected():
    text = (
        "context hier\nsubsystem a parent=- private=0 public=1\n"
        "subsystem b parent=c private=0 public=1\nsubsystem c parent=b private=0 public=1\n"
    )
    with pytest.raises(ManifestError, match="not reachable"):
        parse_manifest(text)


counts = st.builds(RegionCounts, st.integers(0, 50), st.integers(0, 50))


@given(st.lists(counts, max_size=8))
def test_flat_roundtrip(regions):
    sys = FlatSystem(tuple(regions))
    text = serialize_manifest(sys)
    assert parse_manifest(text) == sys
    assert serialize_manifest(parse_manifest(text)) == text


@given(st.lists(st.lists(counts, max_size=4), max_size=4), st.none() | st.integers(0, 5))
def test_layered_roundtrip(layers, penetration):
    sys = LayeredSystem(tuple(tuple(x) for x in layers), penetration)
    text = serialize_manifest(sys)
    assert parse_manifest(text) == sys
    assert serialize_manifest(parse_manifest(text)) == text


@given(st.lists(st.tuples(st.integers(0, 100), counts), min_size=1, max_size=10))
def test_hier_roundtrip(rows):
    from encap.model import tree_from_parents

    entries = [(f"n{i}", None if i == 0 else f"n{seed % i}", c) for i, (seed, c) in enumerate(rows)]
    tree = tree_from_parents(entries)
    text = serialize_manifest(tree)
    again = parse_manifest(text)
    assert serialize_manifest(again) == text
    assert again.names == tree.names and again.counts == tree.counts and again.parent == tree.parent


# -- Java scanning -----------------------------------------------------------------


def test_strip_java_blanks_decoys_and_keeps_lines():
    src = 'a // public class X\nb /* c\nd */ "public class Y" \'{\' e'
    out = strip_java(src)
    assert out.count("\n") == src.count("\n")
    assert "public" not in out and "{" not in out
    assert out.split() == ["a", "b", "e"]


def test_single_file_examples():
    pkg, types = parse_java_source("package com.rail; public class Train {}")
    assert pkg == "com.rail" and [(t.name, t.public) for t in types] == [("Train", True)]
    pkg, types = parse_java_source("package p; class Car { public void go(){} void stop(){} private void alarm(){} }")
    assert types[0].public is False
    assert dict(types[0].methods) == {"go": True, "stop": True, "alarm": False}


def test_third_graph_counts(fixtures):
    code = scan_java_tree(fixtures / "java")
    assert _counts(code) == THIRD_GRAPH
    assert code.skipped == ()


def test_second_graph_counts(fixtures):
    code = function_graph_scan(fixtures / "java")
    assert _counts(code) == SECOND_GRAPH


def test_scanner_is_idempotent_and_layout_independent(fixtures, tmp_path):
    first = scan_java_tree(fixtures / "java").collapse()
    again = scan_java_tree(fixtures / "java").collapse()
    # same files, flattened into one directory under permuted names
    files = sorted((fixtures / "java").rglob("*.java"))
    for i, path in enumerate(reversed(files)):
        shutil.copy(path, tmp_path / f"{i:02d}_{path.name}")
    moved = scan_java_tree(tmp_path).collapse()
    assert first == again == moved


def test_empty_directory(tmp_path):
    assert scan_java_tree(tmp_path).collapse().n == 0
    assert function_graph_scan(tmp_path).collapse().n == 0


def test_unreadable_files_are_skipped(fixtures, tmp_path, monkeypatch):
    shutil.copytree(fixtures / "java", tmp_path / "src")
    bad = tmp_path / "src" / "com" / "road" / "Car.java"
    real = Path.read_text

    def flaky(self, *a, **kw):
        if self == bad:
            raise PermissionError("denied")
        return real(self, *a, **kw)

    monkeypatch.setattr(Path, "read_text", flaky)
    code = scan_java_tree(tmp_path / "src")
    assert code.skipped == (str(bad),)
    assert _counts(code)["com.road"] == (1, 1)


def test_missing_directory():
    from encap.model import ValidationError

    with pytest.raises(ValidationError):
        scan_java_tree("/no/such/dir")
