import json

from daycalc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_report(capsys):
    code, out, _ = run(capsys, "eval", "--bundled", "--model", "HXY", "--valuation", "Cells", "--formula", "x_in * y_in")
    assert code == 0
    assert out.startswith("command: daycalc eval")
    assert "[PASS] agrees with direct semantics" in out
    assert out.rstrip().endswith("result: PASS")


def test_failing_check_exit_1(capsys):
    code, out, _ = run(capsys, "check", "algebra", "--bundled", "--name", "EdgeMonoid")
    assert code == 1
    assert "[FAIL]" in out


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "check", "algebra", "--bundled", "--name", "Nope")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    code, _, err = run(capsys, "eval", "--bundled", "--model", "HXY", "--formula", "x_in * (")
    assert code == 2 and "error:" in err


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "parse", str(tmp_path / "absent.day"))[0] == 2


def test_bad_file_reports_location(capsys, tmp_path):
    f = tmp_path / "bad.day"
    f.write_text("poset P { a <= b }\nframe F on Q\n")
    code, _, err = run(capsys, "parse", str(f))
    assert code == 2
    assert "bad.day:2:" in err


def test_guard_exit_3(capsys):
    code, _, err = run(capsys, "compose", "--bundled", "--prof", "T,S,R", "--guard-carrier", "1")
    assert code == 3
    assert "error:" in err


def test_tree_format_and_sidecar(capsys, tmp_path):
    side = tmp_path / "out.json"
    code, out, _ = run(capsys, "check", "route-equivalence", "--bundled", "--op", "max", "--format", "tree", "--out", str(side))
    assert code == 0
    tree = json.loads(out)
    assert tree["report"]["passed"] is True
    assert json.loads(side.read_text()) == tree


def test_output_is_stable(capsys):
    argv = ("check", "pseudomorphism", "--bundled", "--op", "max", "--args", "max,id(C3)", "--seed", "5")
    assert run(capsys, *argv) == run(capsys, *argv)


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "check", "lax-witness", "--timing")
    assert "elapsed" in out
    _, out, _ = run(capsys, "check", "lax-witness")
    assert "elapsed" not in out


def test_parse_emit(capsys):
    code, out, _ = run(capsys, "parse", "--bundled", "--emit")
    assert code == 0
    assert "heapmodel HXY" in out
