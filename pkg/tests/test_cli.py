"""Unit tests for the command line tool."""

import io
import json
import contextlib

import pytest

from tqftrec import cli


def run_cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(list(argv))
    return code, buf.getvalue()


def test_catalan_text_output():
    code, out = run_cli("catalan", "--g", "0", "--n", "1", "--mu", "6")
    assert code == 0
    assert out.strip() == "5"


def test_omega_both_methods_agree():
    code, out = run_cli(
        "--format", "json",
        "omega", "--group", "builtin:Z2", "--g", "1", "--n", "1",
        "--decor", "[1]", "--method", "both",
    )
    assert code == 0
    data = json.loads(out)
    assert data["formula"] == "2"
    assert data["brute"] == "2"
    assert data["match"] is True


def test_group_info_json():
    code, out = run_cli("--format", "json", "group-info", "--group", "builtin:S3")
    assert code == 0
    data = json.loads(out)
    assert data["order"] == 6
    assert len(data["classes"]) == 3


def test_byte_determinism():
    args = ("--format", "json", "frobenius", "--group", "builtin:Z3")
    _, first = run_cli(*args)
    _, second = run_cli(*args)
    assert first == second


def test_csv_has_header():
    code, out = run_cli("--format", "csv", "catalan", "--g", "0", "--n", "1", "--mu", "6")
    assert code == 0
    assert out.splitlines()[0].count(",") >= 1


def test_unknown_group_is_usage_error():
    code, _ = run_cli("group-info", "--group", "builtin:nosuch")
    assert code == cli.EXIT_USAGE


def test_bad_decoration_is_usage_error():
    code, _ = run_cli(
        "omega", "--group", "builtin:Z2", "--g", "0", "--n", "1",
        "--decor", "[nope]",
    )
    assert code == cli.EXIT_USAGE


def test_missing_argument_is_usage_error():
    code, _ = run_cli("catalan", "--g", "0", "--n", "1")
    assert code == cli.EXIT_USAGE


def test_budget_exceeded_exit_code():
    # brute-force amplitude beyond the iteration budget
    import os

    old = os.environ.get("TQFT_BUDGET")
    os.environ["TQFT_BUDGET"] = "10"
    try:
        code, _ = run_cli(
            "omega", "--group", "builtin:Q8", "--g", "2", "--n", "3",
            "--decor", "[1]", "--method", "brute",
        )
    finally:
        if old is None:
            os.environ.pop("TQFT_BUDGET", None)
        else:
            os.environ["TQFT_BUDGET"] = old
    assert code == cli.EXIT_BUDGET


def test_decoration_vector_parsing():
    code, out = run_cli(
        "omega", "--group", "builtin:Z2", "--g", "1", "--n", "1",
        "--decor", "1/2,1/2",
    )
    assert code == 0
    # Omega_{1,1}(v) = (1/2) Omega(e_0) + (1/2) Omega(e_1) = 1
    assert "formula: 1" in out


def test_wgn_text_renders_rational_function():
    code, out = run_cli("wgn", "--g", "1", "--n", "1")
    assert code == 0
    assert "t1" in out


def test_correlator_value():
    code, out = run_cli("correlator", "--g", "1", "--n", "1", "--k", "1")
    assert code == 0
    assert out.strip() == "1/24"


def test_twisted_correlator_value():
    code, out = run_cli(
        "correlator", "--g", "1", "--n", "1", "--k", "1",
        "--group", "builtin:Z2", "--decor", "[1]",
    )
    assert code == 0
    assert out.strip() == "1/12"


def test_verify_quick_passes():
    code, out = run_cli("--format", "json", "verify", "--level", "quick")
    assert code == 0
    data = json.loads(out)
    assert data["all_passed"] is True


def test_cache_round_trip(tmp_path):
    cache = tmp_path / "catalan.json"
    code1, out1 = run_cli(
        "catalan", "--g", "1", "--n", "1", "--mu", "4", "--cache", str(cache)
    )
    assert code1 == 0 and cache.exists()
    code2, out2 = run_cli(
        "catalan", "--g", "1", "--n", "1", "--mu", "4", "--cache", str(cache)
    )
    assert code2 == 0
    assert out1 == out2
