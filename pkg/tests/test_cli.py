from __future__ import annotations

import csv
import io
import subprocess
import sys

import pytest

from encap.cli import fmt, main
from encap.psc import psc_unencapsulated, r_min, s_min, system_psc
from encap.ingest import scan_java_tree


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_analyze_small_manifest(capsys, fixtures):
    code, out, _ = run(capsys, "analyze", "--input", str(fixtures / "manifests" / "two_regions.manifest"), "--format", "csv")
    assert code == 0
    row = rows(out)[0]
    assert row["psc"] == "10" and row["ihv_percent"] == "50"


def test_analyze_anomalous_manifest(capsys, fixtures):
    _, out, _ = run(capsys, "analyze", "--input", str(fixtures / "manifests" / "anomalous.manifest"), "--format", "csv")
    row = rows(out)[0]
    assert row["psc"] == "7860" and row["amc"] == "yes"


def test_analyze_empty_manifest(capsys, fixtures):
    _, out, _ = run(capsys, "analyze", "--input", str(fixtures / "manifests" / "empty.manifest"), "--format", "csv")
    row = rows(out)[0]
    assert row["nodes"] == "0" and row["c_e"] == "undefined"


@pytest.mark.parametrize("name, psc", [("layered.manifest", "75"), ("hier.manifest", "1")])
def test_analyze_context_manifests(capsys, fixtures, name, psc):
    _, out, _ = run(capsys, "analyze", "--input", str(fixtures / "manifests" / name), "--format", "csv")
    row = rows(out)[0]
    assert row["psc"] == psc and row["c_e"] == "undefined"


def test_analyze_scan_java(capsys, fixtures):
    code, out, err = run(capsys, "analyze", "--scan-java", str(fixtures / "java"), "--format", "csv", "--regions")
    assert code == 0
    row = rows(out)[0]
    flat = scan_java_tree(fixtures / "java").collapse()
    assert int(row["psc"]) == system_psc(flat).total
    assert row["nodes"] == "8" and row["public"] == "5"
    assert "(default)" in err and "lexical" in err


def test_analyze_errors(capsys, tmp_path):
    bad = tmp_path / "bad.manifest"
    bad.write_text("context flat\nregion a private=1\n")
    code, out, err = run(capsys, "analyze", "--input", str(bad))
    assert code == 1 and out == "" and "line 2" in err
    code, _, err = run(capsys, "analyze", "--input", str(tmp_path / "missing"))
    assert code == 1 and "error" in err
    with pytest.raises(SystemExit):
        main(["analyze"])


def test_laws(capsys):
    _, out, _ = run(capsys, "laws", "--nodes", "20", "--violations", "1", "--format", "csv")
    values = {r["quantity"]: r["value"] for r in rows(out)}
    assert values == {
        "s_max": "380", "r_min": "4.4721", "r_min_recommended": "4", "r_h": "20",
        "s_min": f"{s_min(20, 1):.4f}",
    }
    _, out, _ = run(capsys, "laws", "--nodes", "1", "--violations", "1", "--format", "csv")
    values = {r["quantity"]: r["value"] for r in rows(out)}
    assert values["r_min"] == "1" and values["s_min"] == "0"
    code, _, err = run(capsys, "laws", "--nodes", "20", "--violations", "0")
    assert code == 1 and "undefined" in err


def test_figure_tables(capsys):
    _, out, _ = run(capsys, "figure", "15")
    assert {r["regions"]: r["psc"] for r in rows(out)} == {"1": "132", "2": "72", "3": "60", "4": "60", "6": "72", "12": "132"}
    _, out, _ = run(capsys, "figure", "3")
    data = rows(out)
    assert len(data) == 100 and all(int(r["psc"]) == psc_unencapsulated(int(r["nodes"])) for r in data)
    _, out, _ = run(capsys, "figure", "18")
    minima = {}
    for r in rows(out):
        p = int(r["violations"])
        minima[p] = min(minima.get(p, 1e18), float(r["psc"]))
    assert sorted(minima) == [1, 2, 3, 4]
    assert [minima[p] for p in range(1, 5)] == sorted(minima.values())


def test_unknown_figure():
    with pytest.raises(SystemExit):
        main(["figure", "99"])


def test_sweep_growth_amc(capsys):
    _, out, _ = run(capsys, "sweep", "--kind", "fixed", "--nodes", "4", "--regions", "2", "--format", "csv")
    assert [r["psc"] for r in rows(out)] == ["12", "10", "8"]
    _, out, _ = run(capsys, "growth", "--context", "flat", "--max", "100", "--format", "csv")
    assert rows(out)[-1] == {"nodes": "100", "psc": "1800"}
    _, out, _ = run(capsys, "amc", "--nodes", "20", "--regions", "2", "--exhaustive", "--format", "csv")
    assert rows(out)[0]["mode"] == "exhaustive"
    code, _, err = run(capsys, "amc", "--nodes", "100", "--regions", "6", "--exhaustive")
    assert code == 1 and "cap" in err


def test_random_and_evolve_are_seeded(capsys, monkeypatch):
    a = run(capsys, "random", "--count", "30", "--seed", "7", "--format", "csv")[1]
    b = run(capsys, "random", "--count", "30", "--seed", "7", "--format", "csv", "--jobs", "3")[1]
    assert a == b
    monkeypatch.setenv("ENCAP_SEED", "7")
    c = run(capsys, "random", "--count", "30", "--format", "csv")[1]
    assert c == a
    _, out, err = run(capsys, "evolve", "--systems", "2", "--steps", "20", "--seed", "3", "--format", "csv")
    assert len(rows(out)) == 2 * 21 and "share" in err
    monkeypatch.setenv("ENCAP_SEED", "seven")
    code, _, err = run(capsys, "random", "--count", "3")
    assert code == 1 and "ENCAP_SEED" in err


def test_table_format_aligns(capsys):
    _, out, _ = run(capsys, "laws", "--nodes", "100", "--violations", "2")
    lines = out.splitlines()
    assert lines[0].split() == ["law", "quantity", "value"]
    assert set(lines[1]) <= {"-", " "}
    assert "7.0711" in out


def test_fmt():
    assert fmt(0.5) == "0.5000"
    assert fmt(2.0) == "2"
    assert fmt(float("nan")) == "undefined"
    assert fmt(True) == "yes"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "encap", "laws", "--nodes", "100", "--violations", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "1800" in proc.stdout
    assert r_min(100, 1) == 10
