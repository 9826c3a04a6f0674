import json
import subprocess
import sys
from pathlib import Path

import pytest

from odotseries.cli import main, parse_point
from odotseries.seriesfile import (
    SeriesFileError,
    parse_series,
    parse_series_file,
    serialize_series,
    write_series_file,
)

DATA = Path(__file__).resolve().parent.parent / "data"
GEO2 = str(DATA / "geo2.json")


def doc(**over):
    d = {"n": 2, "n_prime": 1, "q_prime": 0, "field": "real",
         "terms": [{"alpha": [2, 0], "alpha_prime": [0], "re": 5}]}
    d.update(over)
    return d


def test_parse_example():
    c = parse_series(doc())
    assert c.terms == {((2, 0), (0,)): 5.0}
    assert (c.n, c.n_prime, c.q_prime, c.field) == (2, 1, 0, "real")


@pytest.mark.parametrize("bad, needle", [
    (doc(terms=[{"alpha": [2, 0], "alpha_prime": [0], "re": 5}] * 2), "terms[1]: duplicate"),
    (doc(q_prime=1, n_prime=1), "terms[0].alpha_prime has degree 0"),
    (doc(terms=[{"alpha": [2], "alpha_prime": [0], "re": 5}]), "terms[0].alpha has length 1"),
    (doc(terms=[{"alpha": [2, 0], "alpha_prime": [0], "re": 5, "im": 1}]), "terms[0]: nonzero imaginary"),
    (doc(terms=[{"alpha": [2, -1], "alpha_prime": [0], "re": 5}]), "negative"),
    (doc(terms=[{"alpha": [2, 0], "alpha_prime": [0]}]), "missing 're'"),
    (doc(terms=[{"alpha": [2, 0], "alpha_prime": [0], "re": "x"}]), "expected a number"),
    (doc(field="quaternion"), "'field'"),
    (doc(n=0), "'n'"),
    ({"n": 1}, "missing field"),
    ([], "top level"),
])
def test_parse_errors(bad, needle):
    with pytest.raises(SeriesFileError) as exc:
        parse_series(bad)
    assert needle in str(exc.value)


def test_malformed_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2,\n "n_prime": }\n')
    with pytest.raises(SeriesFileError, match="line 2"):
        parse_series_file(p)


def test_round_trip_corpus(corpus, tmp_path):
    assert len(corpus) == 50
    seen = set()
    for path in corpus:
        c = parse_series_file(path)
        seen.add((len(c.terms) == 0, c.q_prime == 0, c.n == 1))
        out = tmp_path / path.name
        write_series_file(c, out)
        back = parse_series_file(out)
        assert (back.n, back.n_prime, back.q_prime, back.field) == (c.n, c.n_prime, c.q_prime, c.field)
        assert back.terms == c.terms
        assert serialize_series(back) == serialize_series(c)
    assert any(s[0] for s in seen) and any(s[1] for s in seen) and any(s[2] for s in seen)


def test_parse_point():
    assert parse_point("0.3,0.1").tolist() == [0.3, 0.1]
    assert parse_point("1+2j, 3").tolist() == [1 + 2j, 3]
    assert parse_point("0.5i").tolist() == [0.5j]


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_radius_cli(capsys):
    code, cap = run(["radius", "--input", GEO2, "--rho", "1", "--max-degree", "20"], capsys)
    assert code == 0
    assert "R_hat = 0.5\n" in cap.out
    code, cap = run(["radius", "--input", GEO2, "--rho", "inf"], capsys)
    assert "R_hat = 1\n" in cap.out


def test_layer_cli(capsys):
    code, cap = run(["layer", "--input", GEO2, "--rho", "2"], capsys)
    assert code == 0 and "layer = [0.707106781, 1]" in cap.out


def test_lambda_cli(capsys):
    argv = ["lambda", "--n", "1", "--n-prime", "1", "--p", "0", "--p-prime", "1", "--q", "0",
            "--q-prime", "1", "--rho", "2", "--seed", "42", "--restarts", "4", "--iters", "200"]
    code, cap = run(argv, capsys)
    assert code == 0 and "~ 0.707106781" in cap.out


def test_eval_converges_witness_opnorm(capsys):
    code, cap = run(["eval", "--input", GEO2, "--point", "0.1,0.2", "--max-degree", "2"], capsys)
    assert code == 2  # file degree 20 exceeds the requested truncation
    code, cap = run(["eval", "--input", GEO2, "--point", "0.1,0.2"], capsys)
    assert code == 0 and "value = [1.42857" in cap.out
    code, cap = run(["converges", "--input", GEO2, "--point", "0.3,0.3"], capsys)
    assert "status = converged_certified" in cap.out
    code, cap = run(["witness", "--input", GEO2, "--R1", "1.05", "--samples", "4"], capsys)
    assert "(beyond layer)" in cap.out and "diverged_certified" in cap.out
    code, cap = run(["opnorm", "--input", GEO2, "--degree", "3", "--restarts", "2", "--iters", "200"], capsys)
    assert code == 0 and cap.out.splitlines()[1].split() == ["3", "1.41421356", "1.41421356"]


@pytest.mark.parametrize("argv", [
    ["radius", "--input", "/nonexistent/series.json"],
    ["radius"],
    ["eval", "--input", GEO2, "--point", "1,2,3"],
    ["eval", "--input", GEO2, "--point", "abc"],
    ["converges", "--input", GEO2],
    ["lambda", "--restarts", "0"],
    ["opnorm", "--input", GEO2, "--degree", "99"],
])
def test_input_errors_exit_2(argv, capsys):
    code, cap = run(argv, capsys)
    assert code == 2 and cap.err.startswith("error:")


def test_invalid_file_exit_2(tmp_path, capsys):
    p = tmp_path / "dup.json"
    p.write_text(json.dumps(doc(terms=[{"alpha": [2, 0], "alpha_prime": [0], "re": 5}] * 2)))
    code, cap = run(["radius", "--input", str(p)], capsys)
    assert code == 2 and "terms[1]" in cap.err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["radius", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["radius", "--rho", "0.5"])
    assert exc.value.code == 2


def test_report_and_reproducibility(tmp_path, capsys):
    argv = ["lambda", "--n", "2", "--n-prime", "2", "--p", "1", "--q", "1", "--restarts", "3",
            "--iters", "200", "--seed", "5", "--full"]
    reports = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        assert main(argv + ["--report", str(path)]) == 0
        reports.append(json.loads(path.read_text()))
    a, b = reports
    assert a["results"] == b["results"]
    assert a["seed"] == 5 and a["version"] and a["exit_code"] == 0
    assert a["command"][1:] == argv + ["--report", str(tmp_path / "r0.json")]
    assert a["parameters"]["restarts"] == 3
    out = capsys.readouterr().out.splitlines()
    assert out[: len(out) // 2] == out[len(out) // 2:]


def test_witness_seed_reproducible(tmp_path):
    out = []
    for i in range(2):
        path = tmp_path / f"w{i}.json"
        main(["witness", "--input", GEO2, "--R1", "0.8", "--samples", "5", "--seed", "9", "--report", str(path)])
        out.append(json.loads(path.read_text())["results"])
    assert out[0] == out[1]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "odotseries", "layer", "--input", GEO2, "--rho", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "layer = [0.5, 0.5]" in res.stdout


def test_verify_small_run(capsys):
    code, cap = run(["verify", "--count", "20", "--algebra-count", "10"], capsys)
    lines = cap.out.splitlines()
    assert lines[-1].endswith("checks passed")
    assert all(line.startswith(("[PASS]", "[FAIL]")) for line in lines[:-1])
    assert code == (0 if all(line.startswith("[PASS]") for line in lines[:-1]) else 1)
