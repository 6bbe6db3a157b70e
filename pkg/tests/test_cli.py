import shutil
import subprocess
import sys

import pytest

from theta16.cli import EXIT_FAIL, EXIT_INTEGRITY, EXIT_OK, EXIT_USAGE, run


def out(capsys, argv):
    code = run(argv)
    return code, capsys.readouterr().out


def test_lattices_list(capsys):
    code, text = out(capsys, ["lattices", "list"])
    rows = [r.split("\t") for r in text.strip().splitlines()]
    assert code == EXIT_OK and rows[0][0] == "id" and len(rows) == 9
    assert rows[6][2:] == ["odd", "1", "32", "480"]


def test_rep(capsys):
    assert out(capsys, ["rep", "--lattice", "L5", "--gram", "1"]) == (EXIT_OK, "32\n")
    assert out(capsys, ["rep", "--lattice", "L6", "--gram", "2,1;1,2"])[1] == f"{480 * 56}\n"  # 56 roots meet a given E8 root with product 1


def test_expand(capsys):
    code, text = out(capsys, ["expand", "--lattice", "L6", "--genus", "1", "--max-trace", "4"])
    assert code == EXIT_OK and text.splitlines()[1:] == ["0\t1", "1\t0", "2\t480", "3\t0", "4\t61920"]


def test_dyadic_and_minimum(capsys):
    code, text = out(capsys, ["dyadic", "--gram", "1,1/2;1/2,1"])
    assert code == EXIT_OK and text.startswith("w\t3/2\n")
    assert out(capsys, ["minimum", "--gram", "2,-1;-1,2"]) == (EXIT_OK, "2\n")


def test_symplectic(capsys):
    code, text = out(capsys, ["symplectic", "--genus", "5"])
    assert code == EXIT_OK and "trace_constants\t272,256" in text
    code, text = out(capsys, ["symplectic", "--genus", "3", "--verify"])
    assert code == EXIT_OK and "FAIL" not in text


def test_harmonic(capsys):
    code, text = out(capsys, ["harmonic", "--base", "I8", "--genus", "1", "--max-trace", "2"])
    assert code == EXIT_OK and text.splitlines()[2] == "1\t4"


def test_verify_pass_and_fail(capsys):
    code, text = out(capsys, ["verify", "slopes"])
    assert code == EXIT_OK and text.startswith("# suite\tslopes\tPASS")
    code, text = out(capsys, ["verify", "dims", "--genus", "2"])
    assert code == EXIT_FAIL and "g=2 coefficient rank vs stated dimension\tFAIL\t4\t5" in text


@pytest.mark.parametrize("argv", [
    [], ["rep", "--lattice", "L9", "--gram", "1"], ["rep", "--lattice", "L1", "--gram", "1,2;2,1"],
    ["minimum", "--gram", "1,1;1,1"], ["dyadic", "--gram", "1,2;3"], ["verify", "nothing"],
])
def test_usage_errors(capsys, argv):
    assert run(argv) == EXIT_USAGE


def test_cache_roundtrip_and_integrity(tmp_path, capsys):
    f = tmp_path / "dump.txt"
    assert run(["rep", "--lattice", "L3", "--gram", "2"]) == EXIT_OK
    assert run(["cache", "export", "--file", str(f)]) == EXIT_OK
    assert "v1|L3|1|2|288" in f.read_text()
    assert run(["cache", "import", "--file", str(f)]) == EXIT_OK
    bad = tmp_path / "bad.txt"
    bad.write_text("v1|L3|1|2|289\n")
    assert run(["cache", "import", "--file", str(bad)]) == EXIT_INTEGRITY
    bad.write_text("garbage\n")
    assert run(["cache", "import", "--file", str(bad)]) == EXIT_INTEGRITY


def test_console_script():
    exe = shutil.which("theta")
    cmd = [exe] if exe else [sys.executable, "-m", "theta16.cli"]
    p = subprocess.run(cmd + ["xi", "--bound", "4"], capture_output=True, text=True, check=True)
    assert "Xi^1\t0,2,4,8,16,32" in p.stdout and "elapsed" in p.stderr
