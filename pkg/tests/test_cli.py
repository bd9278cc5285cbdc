import io
import json
from pathlib import Path

import pytest

from cohnsieve.cli import EXIT_INVARIANT, EXIT_OK, EXIT_USAGE, main
from cohnsieve.errors import InvariantViolation
from cohnsieve.lemmas import AuditTrail, ConstraintSet
from cohnsieve.sieve import SearchReport

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize(
    "argv,golden",
    [
        ("search --a 2 --b 3 --kmax 40 --nmin 2 --nmax 20 --mode brute --out json", "search_brute_2_3_k40.jsonl"),
        ("constraints --q 5 --out table", "constraints_q5.txt"),
        ("constraints --q 11 --full --out json", "constraints_q11_full.json"),
        ("search --a 3 --b 5 --kmax 12 --mode pruned --q 3,5 --out table", "search_pruned_3_5_k12.txt"),
        ("audit --q 13 --out json", "audit_q13.json"),
    ],
)
def test_golden_outputs(argv, golden):
    code, out, err = run(*argv.split())
    assert code == EXIT_OK
    assert out == (GOLDEN / golden).read_text()
    assert err == ""


def test_search_json_has_no_solutions():
    code, out, _ = run("search", "--a", "2", "--b", "3", "--kmax", "40", "--nmin", "2", "--nmax", "20", "--mode", "brute", "--out", "json")
    report = SearchReport.from_jsonl(out)
    assert code == 0 and report.solutions == []
    assert [o.k for o in report.outcomes] == list(range(1, 41))


def test_nu_plain_and_json():
    assert run("nu", "--p", "3", "--n", "63") == (0, "2\n", "")
    code, out, _ = run("nu", "--p", "2", "--n", "96", "--out", "json")
    assert json.loads(out) == {"schema": 1, "prime": 2, "n": 96, "valuation": 5, "derivation": "direct"}


def test_lte_command():
    assert run("lte", "--a", "7", "--b", "1", "--k", "4", "--p", "2")[1] == "5\tlte-2-even-k\n"
    code, _, err = run("lte", "--a", "2", "--b", "1", "--k", "5", "--p", "2")
    assert code == EXIT_USAGE and "p does not divide a-b" in err


def test_endgame_command():
    code, out, _ = run("endgame", "--k", "9", "--q", "3", "--out", "json")
    assert code == 0 and json.loads(out)["contradiction"] is True
    assert run("endgame", "--k", "2", "--q", "3")[0] == EXIT_USAGE


def test_round_trips_from_cli():
    _, out, _ = run("constraints", "--q", "7", "--out", "json")
    assert ConstraintSet.from_dict(json.loads(out)).bounds == {2: 5, 3: 6, 5: 6, 7: 6}
    _, out, _ = run("audit", "--q", "29", "--out", "json")
    trail = AuditTrail.from_dict(json.loads(out))
    assert trail.passed and trail.to_json() + "\n" == out


@pytest.mark.parametrize(
    "argv,needle",
    [
        ("nu --p 3 --n 5 --bogus", "--bogus"),
        ("nu --p 3 --n 0", "valuation undefined for zero"),
        ("search --kmax 0", "--kmax"),
        ("search --kmax 5 --nmin 1", "--nmin"),
        ("search --kmax 5 --nmin 4 --nmax 3", "--nmax"),
        ("search --kmax 5 --a 3 --b 2", "--a/--b"),
        ("search --kmax 5 --mode pruned", "--q"),
        ("search --kmax 5 --mode pruned --q 2,3", "--q"),
        ("search --kmax 5 --mode pruned --q 9", "not prime"),
        ("search --kmax 5 --workers 0", "--workers"),
        ("constraints --q 2", "q must be odd"),
        ("frobnicate", "frobnicate"),
    ],
)
def test_usage_errors(argv, needle):
    code, out, err = run(*argv.split())
    assert code == EXIT_USAGE
    assert out == ""
    assert needle in err


def test_invariant_failure_exit_code(monkeypatch):
    def broken(q):
        raise InvariantViolation("forced")

    monkeypatch.setattr("cohnsieve.cli.induction_audit", broken)
    code, _, err = run("audit", "--q", "11")
    assert code == EXIT_INVARIANT and "forced" in err


def test_worker_count_does_not_change_output(monkeypatch):
    argv = "search --kmax 150 --nmin 2 --nmax 8 --out json".split()
    base = run(*argv)[1]
    assert run(*argv, "--workers", "3")[1] == base
    monkeypatch.setenv("COHNSIEVE_WORKERS", "2")
    assert run(*argv)[1] == base


def test_progress_goes_to_stderr_only():
    code, out, err = run("search", "--kmax", "1000", "--mode", "pruned", "--q", "3", "--out", "json")
    assert code == 0
    assert "done" in err
    assert all(json.loads(line) for line in out.splitlines())
    assert run("search", "--kmax", "1000", "--mode", "pruned", "--q", "3", "--quiet")[2] == ""
