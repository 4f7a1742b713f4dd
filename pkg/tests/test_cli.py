import csv
import json

import pytest

from arithwaves import cli


def test_lattice_json(tmp_path):
    out = tmp_path / "lattice.json"
    rc = cli.main(["lattice", "--n", "5", "--json", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["results"]["multiplicity"] == 8
    assert doc["results"]["tau_hat"] == pytest.approx(-0.28)
    assert doc["config"]["command"] == "lattice"
    assert doc["version"]
    assert doc["warnings"] == []


def test_lattice_json_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["lattice", "--n", "65", "--json", str(a)])
    cli.main(["lattice", "--n", "65", "--json", str(b)])
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    assert da["results"] == db["results"]


def test_correlate_and_csv(tmp_path):
    out = tmp_path / "corr.csv"
    rc = cli.main(["correlate", "--n", "5", "--l", "4", "--K", "1", "--csv", str(out)])
    assert rc == 0
    rows = list(csv.reader(out.open()))
    assert any("count_S" in r and "168" in r for r in rows)


def test_scan_command(tmp_path):
    out = tmp_path / "scan.json"
    rc = cli.main(["scan", "--l", "2", "--delta", "0.1", "--range", "64:128",
                   "--json", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["results"]["range"] == [64, 128]
    assert 0.0 <= doc["results"]["fraction"] <= 1.0


def test_nus_command(tmp_path):
    out = tmp_path / "nus.json"
    rc = cli.main(["nus", "--s", "0.5", "--k", "2", "--R", "1e6", "--json", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["results"]["n"] == 9169


def test_kernel_command(tmp_path):
    out = tmp_path / "kernel.json"
    rc = cli.main(["kernel", "--n", "65", "--x", "0.21,0.13", "--json", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert not doc["results"]["singular"]
    assert len(doc["results"]["Omega"]) == 4


def test_simulate_command(tmp_path):
    out_j = tmp_path / "sim.json"
    out_c = tmp_path / "sim.csv"
    rc = cli.main(["simulate", "--n", "17", "--s", "0.2", "--trials", "20",
                   "--gpw", "12", "--seed", "3", "--json", str(out_j),
                   "--csv", str(out_c)])
    assert rc == 0
    doc = json.loads(out_j.read_text())
    assert doc["results"]["trials"] == 20
    assert doc["config"]["seed"] == 3
    rows = list(csv.reader(out_c.open()))
    assert len(rows) == 20 and len(rows[0]) == 3


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("ARITHWAVES_SEED", "99")
    out = tmp_path / "sim.json"
    rc = cli.main(["simulate", "--n", "17", "--s", "0.2", "--trials", "5",
                   "--gpw", "12", "--json", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["seed"] == 99  # env default is echoed into the report
    assert doc["results"]["seed"] == 99


def test_kacrice_command(tmp_path):
    out = tmp_path / "kr.json"
    rc = cli.main(["kacrice", "--n", "1", "--s", "0.3", "--mc-samples", "500",
                   "--json", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["results"]["lower"] < doc["results"]["upper"]


def test_compare_command(tmp_path):
    out = tmp_path / "cmp.json"
    rc = cli.main(["compare", "--n", "17", "--s", "0.2", "--trials", "500",
                   "--gpw", "8", "--json", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["results"]["w1"] >= 0.0


def test_fig_rendering(tmp_path):
    fig = tmp_path / "angles.png"
    rc = cli.main(["lattice", "--n", "65", "--fig", str(fig)])
    assert rc == 0
    assert fig.stat().st_size > 0


def test_exit_code_schema():
    with pytest.raises(SystemExit) as exc:
        cli.main(["lattice", "--n", "5", "--bogus-flag"])
    assert exc.value.code == 2
    # bad range format is a schema error too
    assert cli.main(["scan", "--l", "2", "--delta", "0.1", "--range", "64:100"]) == 2


def test_exit_code_work_limit():
    rc = cli.main(["correlate", "--n", "325", "--l", "6", "--work-limit", "10"])
    assert rc == 3


def test_exit_code_numeric():
    rc = cli.main(["lattice", "--n", "3"])  # empty circle
    assert rc == 4
