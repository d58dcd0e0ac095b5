import io
import json
import subprocess
import sys

import pytest

from sadic.cli import main
from sadic.formats import dumps_automaton, loads_automaton
from sadic import library


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def inf1(tmp_path):
    path = tmp_path / "inf1s.json"
    path.write_text(dumps_automaton(library.infinitely_many()))
    return str(path)


def test_decide_fibonacci(inf1):
    assert run("decide", "--automaton", inf1, "--directive", "; sigma_fib", "--letters", "; 0") == (0, "ACCEPTED\n")
    assert run("decide", "--automaton", inf1, "--directive", "; sigma_fib", "--letters", "; 1") == \
        (1, "NOT-CONGENIAL\n")
    assert run("decide", "--automaton", "eventually-0s", "--directive", "; sigma_fib") == (1, "REJECTED\n")
    assert run("decide", "--automaton", "no-11", "--directive", "rho0; lambda0 lambda1")[0] == 0


def test_decide_with_substitution_file(tmp_path, inf1):
    subs = tmp_path / "s.sub"
    subs.write_text("[grow]\n0 -> 01\n1 -> 1\n")
    assert run("decide", "--automaton", inf1, "--subst-set", str(subs), "--directive", "; grow",
               "--letters", "; 0") == (0, "ACCEPTED\n")


@pytest.mark.parametrize("argv", [
    ["decide", "--automaton", "missing.json", "--directive", "; sigma_fib"],
    ["decide", "--automaton", "inf-1s", "--directive", "; bogus"],
    ["decide", "--automaton", "inf-1s", "--directive", "sigma_fib"],
    ["sturmian", "decode", "--cf", "; 1", "--ostrowski", "1"],
    ["member-morphic", "--automaton", "inf-1s", "--subst", "sigma_fib", "--word", "2"],
])
def test_errors_exit_with_two(argv, capsys):
    assert run(*argv)[0] == 2
    assert capsys.readouterr().err.startswith("error:")


def test_bad_file_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.sub"
    bad.write_text("[s]\n0 -> 01\n1 => 0\n")
    assert run("decide", "--automaton", "inf-1s", "--subst-set", str(bad), "--directive", "; s")[0] == 2
    assert "line 3" in capsys.readouterr().err


def test_usage_errors_exit_with_two():
    with pytest.raises(SystemExit) as e:
        main(["decide"], io.StringIO())
    assert e.value.code == 2


def test_morphic_commands(tmp_path):
    code, out = run("member-morphic", "--automaton", "inf-1s", "--subst", "sigma_fib", "--word", "0")
    assert (code, out) == (0, "ACCEPTED\n")
    code, out = run("member-morphic", "--automaton", "inf-1s", "--subst", "swap", "--word", "0")
    assert code == 1 and out.startswith("UNDEFINED")
    dfa_path = tmp_path / "lang.json"
    code, out = run("morphic-lang", "--automaton", "inf-1s", "--subst", "sigma_fib", "--list", "1",
                    "--emit", str(dfa_path))
    assert code == 0 and "shortest seed: 0" in out
    assert loads_automaton(dfa_path.read_text()).accepts((1, 0))
    code, out = run("fixed-points", "--automaton", "inf-1s", "--subst", "sigma_fib")
    assert out.splitlines()[0] == "images of fixed points: 1" and "accepted" in out


def test_classes_command():
    code, out = run("classes", "--automaton", "no-11", "--subst-set", "id,swap")
    assert code == 0 and out.splitlines()[-2:] == ["  0 1", "  1 0"]
    code, out = run("classes", "--automaton", "all", "--limit", "2")
    assert code == 0 and "more" in out
    code, out = run("classes", "--automaton", "inf-1s", "--subst-set", "sigma_fib,swap")
    assert "classes among 2 substitutions: 2" in out


def test_trace_and_ar_automata_round_trip(tmp_path):
    path = tmp_path / "trace.json"
    code, out = run("trace-automaton", "--automaton", "no-11", "--subst-set", "lambda0,lambda1",
                    "--mode", "directed", "--emit", str(path))
    assert code == 0
    aut = loads_automaton(path.read_text())
    assert dumps_automaton(aut) == path.read_text()
    dot = tmp_path / "trace.dot"
    run("trace-automaton", "--automaton", "no-11", "--subst-set", "lambda0,lambda1", "--emit", str(dot))
    assert dot.read_text().startswith("digraph")
    code, out = run("ar-automaton", "--automaton", "no-11", "--check", "; lambda0 lambda1")
    assert code == 0 and out.splitlines()[-1] == "; lambda0 lambda1: ACCEPTED"
    assert run("ar-automaton", "--automaton", "no-11", "--check", "; lambda0")[0] == 1


def test_sturmian_commands():
    assert run("sturmian", "directive", "--cf", "2,1,1,...", "--len", "8") == \
        (0, "directive: lambda0 lambda1; lambda0 lambda1\nword: 01001010\n")
    assert run("sturmian", "prefix", "--cf", "2; 1", "--len", "8")[1] == "01001010\n"
    code, out = run("sturmian", "encode", "--cf", "; 1", "--chi", "0.1", "--digits", "30")
    assert code == 0 and len(out.strip().split(",")) == 30
    code, out = run("sturmian", "decode", "--cf", "; 1", "--ostrowski", out.strip())
    assert abs(float(out) - 0.1) < 1e-5


def test_experiments_are_deterministic():
    args = ("pq-experiment", "--automaton", "first-0", "--N", "1", "--trials", "6", "--seed", "7", "--sweep",
            "--json")
    first = run(*args)
    assert first == run(*args)
    report = json.loads(first[1])
    assert [r["N"] for r in report["reports"]] == [0, 1]
    code, out = run("selfcheck", "--cases", "6", "--seed", "3")
    assert code == 0 and out.startswith("cases=6 passed=6")
    assert run("selfcheck", "--cases", "6", "--seed", "3")[1] == out


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "sadic.cli", "decide", "--automaton", "inf-1s", "--directive",
                        "; sigma_fib", "--letters", "; 0"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "ACCEPTED\n"


def test_config_file_guards(tmp_path, capsys):
    cfg = tmp_path / "tight.json"
    cfg.write_text('{"max_semigroup": 2}')
    assert run("--config", str(cfg), "classes", "--automaton", "no-11")[0] == 2
    assert "error:" in capsys.readouterr().err
    # the guard does not outlive the invocation
    assert run("classes", "--automaton", "no-11", "--limit", "1")[0] == 0
    cfg.write_text('{"max_semigroup": 0}')
    assert run("--config", str(cfg), "classes", "--automaton", "no-11")[0] == 2
    cfg.write_text('{"colour": 1}')
    assert run("--config", str(cfg), "classes", "--automaton", "no-11")[0] == 2


def test_config_defaults_and_override():
    from sadic.config import Config, get_config, override

    assert all(v > 0 for k, v in vars(Config()).items() if k != "seed")
    with override(precision=64):
        assert get_config().precision == 64
    assert get_config().precision == Config().precision
    with pytest.raises(ValueError):
        Config(prefix_budget=-1)
