import io
import json
import subprocess
import sys

import pytest

from cftpoly.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_delta_at_point():
    code, out, _ = call("delta", "--a", "6", "--b", "4", "--at", "2", "--format", "csv")
    assert code == 0 and out.strip() == "-4"


def test_delta_polynomial_json():
    code, out, _ = call("delta", "--a", "3", "--b", "1")
    data = json.loads(out)
    assert code == 0 and data["text"] == "1/12*x^4 + 11/12*x^2"


def test_scan_cft_expected_exception_is_a_pass():
    code, out, _ = call("scan-cft", "--n-max", "50", "--k-max", "10")
    data = json.loads(out)
    assert code == 0 and data["exceptions"] == [[2, 6, 4]] and data["verdict"] == "pass"


def test_tables_only_t7():
    code, out, _ = call("tables", "--only", "T7", "--format", "csv")
    assert code == 0 and "4/4 cells match" in out


def test_failed_check_exits_1():
    code, out, _ = call("assumptions", "--b", "5", "--x0", "2", "--format", "csv")
    assert code == 1 and "[FAIL] assumption2" in out


def test_scan_delta_failure_exit():
    code, _, _ = call("scan-delta", "--b", "4", "--a-max", "7", "--x", "2")
    assert code == 1
    code, _, _ = call("scan-delta", "--b", "2", "--a-max", "20", "--x", "2,9/4,2.5")
    assert code == 0


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["delta", "--a", "x", "--b", "1"], "--a"),
        (["eval", "--x", "1/0", "--n-max", "3"], "--x"),
        (["eval", "--x", "2", "--n-max", "three"], "--n-max"),
        (["smallest-x0", "--b", "4", "--bits", "8"], "--bits"),
        (["delta", "--a", "3"], "--b"),
        (["tables", "--only", "T9"], "--only"),
        (["main-term", "--a", "5", "--b", "1", "--x", "two"], "--x"),
    ],
)
def test_usage_errors_name_the_flag(argv, flag):
    code, _, err = call(*argv)
    assert code == 2 and flag in err


def test_no_command_is_usage_error():
    assert call()[0] == 2
    assert call("frobnicate")[0] == 2


def test_eval_csv_exact_decimal():
    code, out, _ = call("eval", "--x", "2.0554", "--n-max", "2", "--format", "csv")
    assert out.splitlines()[:3] == ["n,num,den", "0,1,1", "1,10277,5000"]
    assert call("eval", "--x", "2", "--n-max", "1")[0] == 2


def test_gen_json_round_trip():
    from cftpoly.etapoly import gen_table
    from cftpoly.polycore import Poly

    code, out, _ = call("gen", "--n-max", "6")
    data = json.loads(out)
    assert [Poly.from_dict(d) for d in data["polys"]] == list(gen_table(6).polys)


def test_output_dir_and_determinism(tmp_path):
    for d in ("a", "b"):
        call("scan-cft", "--n-max", "20", "--k-max", "4", "--output-dir", str(tmp_path / d))
    first = (tmp_path / "a" / "scan-cft.json").read_bytes()
    assert first == (tmp_path / "b" / "scan-cft.json").read_bytes()


def test_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("CFTPOLY_OUTPUT_DIR", str(tmp_path))
    call("delta", "--a", "4", "--b", "1")
    assert (tmp_path / "delta.json").exists()


def test_config_file_overridden_by_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nformat = csv\nprecision_bits = 40\n")
    code, out, _ = call("smallest-x0", "--b", "4", "--config", str(cfg))
    assert code == 0 and out.startswith("b,lo,hi,approx")
    code, out, _ = call("smallest-x0", "--b", "4", "--config", str(cfg), "--format", "json")
    assert json.loads(out)["bits"] == 40


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = call("delta", "--a", "4", "--b", "1", "--config", str(cfg))
    assert code == 2 and "colour" in err


def test_roots_real_and_complex():
    code, out, _ = call("roots", "--a", "4", "--b", "0")
    lows = [r["lo"] for r in json.loads(out)["real_roots"]]
    assert code == 0 and lows == ["-7", "-1", "0", "2"]
    code, out, _ = call("roots", "--a", "5", "--b", "0", "--complex", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 1 + 5


def test_figures_command(tmp_path):
    code, out, _ = call("figures", "--which", "fig1", "--a-max", "6", "--output-dir", str(tmp_path))
    assert code == 0 and out.strip().endswith("fig1_roots.csv")


def test_main_term_outside_hypothesis_still_reports():
    with pytest.warns(RuntimeWarning):
        code, out, _ = call("main-term", "--a", "60", "--b", "40", "--x", "2")
    data = json.loads(out)
    assert data["hypothesis_holds"] is False and data["warning"]
    assert code in (0, 1)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cftpoly", "delta", "--a", "2", "--b", "0", "--at", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == "0"
