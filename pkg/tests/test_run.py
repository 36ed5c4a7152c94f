import csv
import io
import json

import pytest

from src import __version__
from src.main import main
from src.models.run_config import RunConfig
from src.services.run import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, OutputService, RunService, ValidationService, parse_depths

validation = ValidationService()


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def read_rows(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


# Configuration checks

def test_parse_depths():
    assert parse_depths(8) == [8]
    assert parse_depths("8") == [8]
    assert parse_depths([2, 5]) == [2, 5]
    assert parse_depths("6..9") == [6, 7, 8, 9]
    with pytest.raises(ValueError):
        parse_depths("9..6")
    with pytest.raises(ValueError):
        parse_depths(True)


def test_missing_command():
    assert validation.validate(RunConfig()) == ["missing command"]


def test_configuration_problems():
    unknown = validation.validate(RunConfig(command="box-count"))
    diagnostics = validation.validate(RunConfig(command="diagnostics", inputs=["cantor3"], parameters={"n": 4, "q": 1}))
    verdict = validation.validate(RunConfig(command="inverse-verdict", inputs=["a.json"],
                                            parameters={"n": 4, "eps": 0.1, "m": 6}))

    assert unknown[0].startswith("unknown command 'box-count'")
    assert "q must exceed 1" in diagnostics
    assert "inverse-verdict takes 2 input(s), got 1" in verdict
    assert "m must not exceed n" in verdict


def test_valid_configuration():
    config = RunConfig(command="delta", inputs=["cantor3"], parameters={"n": "1..6"})

    assert validation.validate(config) == []


# Runs

def test_invalid_input_exit_code(tmp_path):
    missing_parameter = RunConfig(command="delta", inputs=["cantor3"], output=str(tmp_path / "a.csv"))
    unknown_system = RunConfig(command="delta", inputs=["koch"], parameters={"n": 3}, output=str(tmp_path / "b.csv"))

    assert RunService().run(missing_parameter) == EXIT_INVALID
    assert RunService().run(unknown_system) == EXIT_INVALID
    assert not (tmp_path / "a.csv").exists()


def test_budget_exit_code(tmp_path):
    config = RunConfig(command="delta", inputs=["garsia"], parameters={"n": 12}, budget=1000,
                       output=str(tmp_path / "delta.csv"))

    assert RunService().run(config) == EXIT_BUDGET
    assert not (tmp_path / "delta.csv").exists()


def test_delta_table(tmp_path):
    out = tmp_path / "delta.csv"

    code = RunService().run(RunConfig(command="delta", inputs=["cantor3"], parameters={"n": "1..6"}, output=str(out)))
    rows = read_rows(out)

    assert code == EXIT_OK
    assert out.read_text(encoding="utf-8").splitlines()[0] == "system,n,delta,log2_delta_over_n,word_i,word_j,error"
    assert [int(row["n"]) for row in rows] == list(range(1, 7))
    for row in rows:
        assert float(row["delta"]) == pytest.approx((2 / 3) * 3.0 ** -(int(row["n"]) - 1))
        assert row["error"] == ""
    assert (rows[0]["word_i"], rows[0]["word_j"]) == ("1", "2")


def test_overlaps_from_a_definition_file(tmp_path, overlap_definition):
    system = write_json(tmp_path / "three.json", overlap_definition)
    out = tmp_path / "overlaps.json"

    code = RunService().run(RunConfig(command="overlaps", inputs=[system], parameters={"n_max": 4},
                                      output=str(out), format="json"))

    assert code == EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8")) == {"n": 2, "words": [[1, 3], [2, 1]], "exact": True}


def test_manifest_sidecar(tmp_path):
    out = tmp_path / "sdim.csv"

    RunService().run(RunConfig(command="analyze-ifs", inputs=["fat-sierpinski(0.5)"], output=str(out), budget=5000))
    manifest = OutputService.read_manifest(str(out))

    assert manifest == {
        "library_version": __version__,
        "command": "analyze-ifs",
        "inputs": ["fat-sierpinski(0.5)"],
        "parameters": {},
        "format": "csv",
        "budget": 5000,
    }
    assert OutputService.read_manifest(str(tmp_path / "missing.csv")) is None


def test_stdout_output_has_no_manifest(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)

    code = RunService().run(RunConfig(command="analyze-ifs", inputs=["cantor3"]))
    table = capsys.readouterr().out

    assert code == EXIT_OK
    assert table.splitlines()[0].startswith("system,d,maps,exact,sdim")
    assert list(tmp_path.iterdir()) == []


def test_entropy_table_of_a_measure_file(tmp_path, lattice):
    uniform = write_json(tmp_path / "mu.json", lattice.from_cells([[0], [1], [2], [3]], None, 2).to_json())
    out = tmp_path / "entropy.csv"

    code = RunService().run(RunConfig(command="entropy", inputs=[uniform], parameters={"n": "0..2", "m": 1},
                                      output=str(out)))
    rows = read_rows(out)

    assert code == EXIT_OK
    assert list(rows[0]) == ["n", "H", "H_n", "H_cond"]
    assert [float(row["H"]) for row in rows] == pytest.approx([0.0, 1.0, 2.0])
    assert [float(row["H_n"]) for row in rows] == pytest.approx([0.0, 1.0, 1.0])
    assert [row["H_cond"] for row in rows] == ["", "0.0", "1.0"]


def test_kv_check_on_measure_files(tmp_path, lattice):
    coin = lattice.from_cells([[0], [1]], None, 8).to_json()
    first = write_json(tmp_path / "mu.json", coin)
    second = write_json(tmp_path / "nu.json", coin)
    out = tmp_path / "kv.json"

    code = RunService().run(RunConfig(command="kv-check", inputs=[first, second], parameters={"k": 2, "n": 8},
                                      output=str(out), format="json"))
    reports = json.loads(out.read_text(encoding="utf-8"))

    assert code == EXIT_OK
    assert len(reports) == 1
    assert reports[0]["deltas"] == pytest.approx([0.5, 1.811278124459133 - 1.5])


def test_scan_output_is_thread_independent(tmp_path):
    parameters = {
        "family": "fat-sierpinski",
        "counts": [4],
        "diagnostics": [{"name": "sdim"}, {"name": "delta_n", "n": 3}],
    }
    serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"

    RunService().run(RunConfig(command="scan", parameters=parameters, threads=1, output=str(serial)))
    RunService().run(RunConfig(command="scan", parameters=parameters, threads=2, output=str(parallel)))

    assert serial.read_bytes() == parallel.read_bytes()
    assert len(read_rows(serial)) == 4
    assert list(read_rows(serial)[0]) == ["index", "t1", "sdim", "delta_n", "log2_delta_over_n", "error"]


def test_csv_cells():
    text = OutputService.render_csv([{"a": 0.1, "b": True, "c": None}, {"a": 2, "d": [1, 2]}])

    assert text == "a,b,c,d\n0.1,true,,\n2,,,1 2\n"
    assert list(csv.reader(io.StringIO(text)))[0] == ["a", "b", "c", "d"]


# Command line

def test_main_with_flags(tmp_path):
    out = tmp_path / "delta.csv"

    code = main(["--command", "delta", "--input", "cantor3", "--n", "1..3", "--out", str(out)])

    assert code == EXIT_OK
    assert len(read_rows(out)) == 3


def test_main_with_a_configuration_file(tmp_path):
    config = write_json(tmp_path / "run.json", {"command": "dim-estimate", "inputs": ["cantor3"],
                                                "parameters": {"n": 6}})
    out = tmp_path / "dim.csv"

    code = main(["--config", config, "--n", "8", "--out", str(out)])
    rows = read_rows(out)

    assert code == EXIT_OK
    assert [int(row["n"]) for row in rows] == [8]
    assert OutputService.read_manifest(str(out))["parameters"] == {"n": "8"}


def test_main_rejects_invalid_input(tmp_path):
    assert main(["--command", "delta", "--input", "cantor3"]) == EXIT_INVALID
    assert main(["--config", str(tmp_path / "absent.json")]) == EXIT_INVALID
