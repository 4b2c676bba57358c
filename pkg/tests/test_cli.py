import json
import subprocess
import sys
from pathlib import Path

import pytest

from cstar_graph.cli import EXIT_ERROR, EXIT_INAPPLICABLE, EXIT_OK, main

from conftest import ROTATION_TEXT, W_TEXT

GRAPHS = Path(__file__).resolve().parents[1] / "graphs"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    return code, (json.loads(out) if out else None), err


def leaves(doc):
    if isinstance(doc, dict):
        for v in doc.values():
            yield from leaves(v)
    elif isinstance(doc, list):
        for v in doc:
            yield from leaves(v)
    else:
        yield doc


def test_masa_check_rotation(capsys):
    code, doc, _ = run_json(capsys, "masa-check", "-g", "cuntz2", "-u", ROTATION_TEXT)
    assert code == EXIT_OK
    assert doc["result"]["verdict"] == "NOT_INNER_CONJUGATE"
    assert doc["result"]["moved_generators"][0][0] == "1"
    assert doc["exact_arithmetic"] is True
    assert "u S_e" in doc["convention"]


def test_masa_check_w_inapplicable(capsys):
    code, doc, _ = run_json(capsys, "masa-check", "-g", "cuntz2", "-u", W_TEXT)
    assert code == EXIT_INAPPLICABLE
    assert doc["result"]["verdict"] == "INAPPLICABLE"


def test_family_w(capsys):
    code, doc, _ = run_json(capsys, "family", "-g", "cuntz2", "-u", W_TEXT, "--seed", "", "--period", "2", "-K", "12")
    assert code == EXIT_OK
    res = doc["result"]
    assert res["detected_law"] == ["1", "1/2"]
    assert res["direction"] == "TO_ZERO"
    assert res["ratios"][-1] == "1/2048"


def test_family_rejects_empty_period(capsys):
    code, _, err = run(capsys, "family", "-g", "cuntz2", "-u", W_TEXT, "--period", "", "-K", "3")
    assert code == EXIT_ERROR and "period" in err


def test_check_graph(capsys):
    code, doc, _ = run_json(capsys, "check-graph", str(GRAPHS / "two_vertex.graph"))
    assert code == EXIT_OK and doc["result"]["transitive"]
    code, doc, _ = run_json(capsys, "check-graph", str(GRAPHS / "sink.graph"))
    assert code == EXIT_INAPPLICABLE
    assert doc["result"]["sinks"] == ["s"]
    code, doc, _ = run_json(capsys, "check-graph", str(GRAPHS / "single_loop.graph"))
    assert code == EXIT_INAPPLICABLE and not doc["result"]["cycles_have_exits"]


def test_eval(capsys):
    code, doc, _ = run_json(capsys, "eval", "-g", "cuntz2", "S1 S1' + S2 S2'")
    assert code == EXIT_OK
    assert doc["result"]["element"] == "1"
    assert doc["result"]["unitary"] and doc["result"]["in_B"]
    code, doc, _ = run_json(capsys, "eval", "-g", str(GRAPHS / "two_vertex.graph"), "S(e1) S(e2)'")
    assert doc["result"]["element"] == "S(e1) S(e2)'"
    assert doc["graph"]["vertices"] == ["v", "w"]


def test_endo_apply(capsys):
    code, doc, _ = run_json(capsys, "endo-apply", "-g", "cuntz2", "-u", W_TEXT, "-x", "P222")
    assert code == EXIT_OK
    assert doc["result"]["image"] == "P21212"


def test_trace_scan(capsys):
    code, doc, _ = run_json(capsys, "trace-scan", "-g", "cuntz2", "-u", W_TEXT, "-L", "4")
    assert code == EXIT_OK
    rows = doc["result"]["lengths"]
    assert rows["4"]["min_ratio"] == "1/8" and rows["4"]["argmin"] == "2222"
    _, par, _ = run_json(capsys, "trace-scan", "-g", "cuntz2", "-u", W_TEXT, "-L", "4", "--workers", "2")
    assert par["result"] == doc["result"]


def test_inverse(capsys):
    code, doc, _ = run_json(capsys, "inverse", "-g", "cuntz2", "-u", W_TEXT, "-K", "3")
    assert code == EXIT_OK
    assert doc["result"]["found"] and doc["result"]["involution"]
    code, doc, _ = run_json(capsys, "inverse", "-g", "cuntz2", "-u", W_TEXT, "-K", "1")
    assert not doc["result"]["found"] and doc["result"]["inverse"] is None


def test_fourier(capsys):
    code, doc, _ = run_json(capsys, "fourier", "-g", "cuntz2", "-u", W_TEXT, "--dk")
    assert code == EXIT_OK
    res = doc["result"]
    assert res["components"]["1"] == "S212 S22'"
    assert res["dk"] == {"-1": "P212", "0": "P1 + P211", "1": "P22"}


def test_fourier_dk_refused(capsys):
    bad = "(S11 S1' + S12 S21' + S2 S22')(" + ROTATION_TEXT + ")"
    code, doc, _ = run_json(capsys, "fourier", "-g", "cuntz2", "-u", bad, "--dk")
    assert code == EXIT_INAPPLICABLE
    assert doc["result"]["dk"] is None and "core" in doc["result"]["dk_refused"]


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["eval", "-g", "cuntz2", "S3"], "edge '3' undeclared"),
        (["eval", "-g", "no/such/file", "S1"], "No such file"),
        (["endo-apply", "-g", "cuntz2", "-u", "S1", "-x", "S1"], "not unitary"),
    ],
)
def test_errors_exit_one(capsys, argv, fragment):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_ERROR
    assert fragment in err and out == ""


def test_unknown_subcommand(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == EXIT_ERROR


def test_global_flags_either_side(capsys):
    _, before, _ = run(capsys, "--format", "json", "eval", "-g", "cuntz2", "P1")
    _, after, _ = run(capsys, "eval", "-g", "cuntz2", "P1", "--format", "json")
    assert before == after


@pytest.mark.parametrize(
    "argv",
    [
        ["family", "-g", "cuntz2", "-u", W_TEXT, "--period", "2", "-K", "6"],
        ["masa-check", "-g", "cuntz2", "-u", ROTATION_TEXT],
        ["trace-scan", "-g", "cuntz2", "-u", W_TEXT, "-L", "3"],
        ["fourier", "-g", "cuntz2", "-u", W_TEXT, "--dk"],
    ],
)
def test_text_and_json_carry_same_payload(capsys, argv):
    _, doc, _ = run_json(capsys, *argv)
    _, text, _ = run(capsys, *argv)
    for leaf in leaves(doc["result"]):
        if isinstance(leaf, str):
            assert leaf in text
    assert doc["result"] != {}


def test_byte_stable_across_processes():
    argv = [sys.executable, "-m", "cstar_graph", "--format", "json", "trace-scan", "-g", "cuntz2", "-u", W_TEXT, "-L", "4"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first
