import csv
import io
import json

import pytest

from minorcoh.cli import emit_report, read_config, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def test_compute_json():
    code, text = call("compute", "--weight", "-3,-3,-2,-2,-2", "--level", "1", "--coeff", "q", "--json")
    assert code == 0
    rec = json.loads(text)
    assert rec["result"]["dims"] == [0, 0, 0, 1]
    assert rec["result"]["h"][3] == 1
    assert set(rec) == {"config", "result", "duration_ms", "version"}
    assert isinstance(rec["duration_ms"], int)


def test_compute_over_z():
    code, text = call("compute", "--weight=-3,-3,-2,-2,-2", "--coeff", "z")
    assert code == 0
    assert json.loads(text)["result"]["h_integer"][3] == {"free": 1, "torsion": []}


def test_class_level_one_fp():
    code, text = call("class", "--level", "1", "--coeff", "fp", "--p", "2")
    assert code == 0
    assert json.loads(text)["result"]["in_image"] is False


def test_residue_quad():
    code, text = call("residue", "--phi", "inv_f123", "--grid", "8", "--method", "quad")
    assert code == 0
    r = json.loads(text)["result"]
    assert r["abs"] > 1.0
    assert r["error"] >= 0.0
    assert set(r["value"]) == {"re", "im"}


def test_residue_homotopy_list():
    code, text = call("residue", "--phi", "inv_f23", "--lambda", "0,1", "--grid", "4")
    assert code == 0
    assert json.loads(text)["result"]["passed"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ("compute", "--weight", "1,2,3"),
        ("compute", "--weight", "a,b,c,d,e"),
        ("class", "--coeff", "fp", "--p", "4"),
        ("sweep", "--levels", "3..1"),
        ("colim", "--levels", "2..2"),
        ("death", "--p", "9"),
        ("ucheck", "--p", "1"),
        ("residue", "--lambda", "2"),
        ("nonsense",),
        (),
    ],
)
def test_usage_errors(argv):
    code, _ = call(*argv)
    assert code == 2


def test_computation_error_exit_code(monkeypatch):
    import minorcoh.cli as cli

    def boom(args):
        raise ArithmeticError("pole")

    monkeypatch.setitem(cli.HANDLERS, "class", boom)
    code, _ = call("class", "--level", "2")
    assert code == 3


def test_sweep_csv_rows():
    code, text = call("sweep", "--levels", "1..6", "--coeff", "f2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 6
    assert rows[0]["dim3"] == "1"


def test_text_echoes_weight():
    code, text = call("compute", "--weight", "0,0,0,0,0", "--format", "text")
    assert code == 0
    assert "0,0,0,0,0" in text


def test_json_round_trip():
    code, text = call("death", "--p", "2", "--n-max", "4")
    rec = json.loads(text)
    assert json.loads(emit_report(rec, "json")) == rec
    assert emit_report(rec, "json") == text


def test_byte_identical_reruns():
    argv = ("residue", "--method", "mc", "--samples", "20000", "--seed", "5", "--no-timing")
    assert call(*argv) == call(*argv)
    a = json.loads(call("colim", "--levels", "1..4")[1])
    b = json.loads(call("colim", "--levels", "1..4")[1])
    a.pop("duration_ms"), b.pop("duration_ms")
    assert a == b


def test_report_reruns_from_config(tmp_path):
    code, text = call("compute", "--weight", "-4,-3,-3,-2,-2", "--level", "3", "--coeff", "f3", "--no-timing")
    rec = json.loads(text)
    cfg = rec["config"]
    argv = [cfg["command"], "--weight", cfg["weight"], "--level", str(cfg["level"]), "--coeff", cfg["coeff"], "--no-timing"]
    if cfg["p"] is not None:
        argv += ["--p", str(cfg["p"])]
    assert call(*argv)[1] == text


def test_config_file_overridden_by_flags(tmp_path, monkeypatch):
    path = tmp_path / "run.cfg"
    path.write_text("# defaults\nlevel = 2\ncoeff = fp\np = 3\n")
    assert read_config(path)["coeff"] == "fp"
    code, text = call("class", "--config", str(path))
    rec = json.loads(text)
    assert rec["result"] == {"level": 2, "domain": "F3", "in_image": False}
    code, text = call("class", "--config", str(path), "--level", "3")
    assert json.loads(text)["result"]["in_image"] is True
    path.write_text("bogus = 1\n")
    assert call("class", "--config", str(path))[0] == 2


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("MINORCOH_THREADS", "3")
    code, text = call("class", "--level", "1")
    assert json.loads(text)["config"]["threads"] == 3


def test_death_ucheck_h6j_trace_commands():
    assert json.loads(call("death", "--primes", "2,3", "--n-max", "4")[1])["result"]["rows"][1]["death_level"] == 3
    assert json.loads(call("ucheck", "--level", "3", "--p", "3")[1])["result"]["passed"] is True
    rows = json.loads(call("h6j", "--weights", "-3,-3,-2,-2,-2;-4,-3,-3,-2,-2", "--n-hi", "4")[1])["result"]["rows"]
    assert [r["h6j"] for r in rows] == [1, 1]
    trace = json.loads(call("trace", "--levels", "2..3")[1])["result"]
    assert [r["index"] for r in trace["rows"]] == [None, None]
