import shlex
import sys
import xml.etree.ElementTree as ET

import pytest

from ordramsey.cli import EXIT_BUDGET, EXIT_FOUND, EXIT_OK, EXIT_USAGE, run
from ordramsey.colorings import block_coloring, parse, serialize
from ordramsey.graphs import join, monotone_path, nested_matching, ordered_star
from ordramsey.ledger import (
    ARROWS,
    AVOIDS,
    HEADER,
    LedgerFormatError,
    LedgerRecord,
    ResultsLedger,
)
from ordramsey.patterns import PatternSyntaxError, parse_pattern


def cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- pattern notation -------------------------------------------------------


def test_pattern_kinds(tmp_path):
    assert parse_pattern("nm:3") == nested_matching(3)
    assert parse_pattern(" path:4 ") == monotone_path(4)
    assert parse_pattern("join(star:1,3+star:2,1)") == join(ordered_star(1, 3), ordered_star(2, 1))
    f = tmp_path / "g.txt"
    f.write_text(monotone_path(3).to_text())
    assert parse_pattern(f"join(file:{f}+path:2)") == monotone_path(4)
    assert parse_pattern(f"file:{f}") == monotone_path(3)


@pytest.mark.parametrize(
    "text, pos",
    [("k:0", 2), ("nm:", 3), ("star:2", 6), ("join(nm:1", 9), ("cube:3", 0), ("nm:2x", 4), ("", 0)],
)
def test_pattern_errors_report_position(text, pos):
    with pytest.raises(PatternSyntaxError) as exc:
        parse_pattern(text)
    assert exc.value.pos == pos
    assert f"position {pos}" in str(exc.value)


# -- ledger -------------------------------------------------------------------


def record(N=7, verdict=ARROWS, witness="-"):
    return LedgerRecord("2026-01-01T00:00:00Z", "nm:2", "k:3", N, verdict, 0.5, witness, "0.1.0", "builtin", 0)


def test_ledger_round_trip(tmp_path):
    ledger = ResultsLedger(tmp_path / "sub" / "l.tsv")
    ledger.append(record())
    ledger.append(record(6, AVOIDS, str(tmp_path / "w.txt")))
    assert (tmp_path / "sub" / "l.tsv").read_text().splitlines()[0] == HEADER
    recs = list(ledger.records())
    assert recs == [record(), record(6, AVOIDS, str(tmp_path / "w.txt"))]
    assert recs[0].witness_path is None and recs[1].witness_path.name == "w.txt"


def test_ledger_rejects_bad_rows(tmp_path):
    path = tmp_path / "l.tsv"
    path.write_text(HEADER + "\nonly\tthree\tfields\n")
    with pytest.raises(LedgerFormatError) as exc:
        list(ResultsLedger(path).records())
    assert exc.value.line == 2


def test_missing_ledger_is_empty(tmp_path):
    assert list(ResultsLedger(tmp_path / "none.tsv").records()) == []


# -- subcommands --------------------------------------------------------------


def test_bounds(capsys):
    assert cli(capsys, "bounds", "--family", "nm-k3", "--params", "n=6")[:2] == (EXIT_OK, "25 ≤ r ≤ 30\n")
    assert cli(capsys, "bounds", "--family", "nm-kn", "--params", "m=2,n=2")[1] == "4 ≤ r ≤ 9\n"
    assert cli(capsys, "bounds", "--family", "nm-k3", "--params", "m=2")[0] == EXIT_USAGE
    assert cli(capsys, "bounds", "--family", "nm-k3", "--params", "n=x")[0] == EXIT_USAGE


def test_bad_pattern_is_a_usage_error(capsys):
    code, _, err = cli(capsys, "ramsey", "--red", "k:0", "--blue", "k:3", "--no-ledger")
    assert code == EXIT_USAGE and "position 2" in err


def test_ramsey_writes_ledger_and_replays(capsys, tmp_path):
    ledger = tmp_path / "ledger.tsv"
    code, out, _ = cli(capsys, "ramsey", "--red", "nm:2", "--blue", "k:3", "--ledger", str(ledger))
    assert code == EXIT_OK and out == "7\n"
    recs = list(ResultsLedger(ledger).records())
    assert {(r.N, r.verdict) for r in recs} >= {(6, AVOIDS), (7, ARROWS)}
    witnesses = [r.witness_path for r in recs if r.verdict == AVOIDS]
    assert witnesses and all(p.parent == tmp_path / "witnesses" for p in witnesses)
    code, out, _ = cli(capsys, "replay", str(ledger))
    assert code == EXIT_OK and out.strip() == f"{len(witnesses)}/{len(witnesses)} witnesses re-verified"


def test_replay_flags_tampered_witness(capsys, tmp_path):
    ledger = tmp_path / "ledger.tsv"
    cli(capsys, "ramsey", "--red", "nm:2", "--blue", "k:3", "--ledger", str(ledger))
    # on 6 vertices an all-blue coloring has a blue triangle
    bad = max((r for r in ResultsLedger(ledger).records() if r.verdict == AVOIDS), key=lambda r: r.N).witness_path
    c = parse(bad.read_text())
    bad.write_text(serialize(type(c).from_red_edges(c.N, [])))
    code, out, _ = cli(capsys, "replay", str(ledger))
    assert code == EXIT_FOUND and "FAILED" in out


def test_ramsey_is_deterministic(capsys, tmp_path):
    outs = []
    for i in range(2):
        ledger = tmp_path / f"l{i}.tsv"
        cli(capsys, "ramsey", "--red", "path:3", "--blue", "k:3", "--ledger", str(ledger), "--seed", "3")
        outs.append([(r.N, r.verdict) for r in ResultsLedger(ledger).records()])
        outs.append(sorted(p.read_text() for p in (tmp_path / "witnesses").iterdir()))
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_ramsey_with_parallel_probes(capsys):
    code, out, _ = cli(capsys, "ramsey", "--red", "nm:2", "--blue", "k:3", "--lo", "7", "--hi", "7",
                       "--jobs", "2", "--no-ledger")
    assert code == EXIT_OK and out == "7\n"


def test_budget_exhaustion_exit_code(capsys):
    code, out, _ = cli(capsys, "ramsey", "--red", "nm:3", "--blue", "k:3", "--no-ledger",
                       "--solver", "sh -c 'sleep 5' {cnf}", "--budget", "0.5")
    assert code == EXIT_BUDGET and "≤ r ≤" in out


def test_external_runner_from_cli(capsys):
    runner = f"{shlex.quote(sys.executable)} -m ordramsey.sat.dimacs_runner {{cnf}}"
    code, out, _ = cli(capsys, "ramsey", "--red", "nm:2", "--blue", "k:3", "--no-ledger", "--solver", runner)
    assert code == EXIT_OK and out == "7\n"


def test_enumerate(capsys, tmp_path):
    code, out, _ = cli(capsys, "enumerate", "--red", "nm:2", "--blue", "k:3", "--n", "5", "--out", str(tmp_path / "m"))
    count = int(out)
    assert code == EXIT_OK and count == len(list((tmp_path / "m").iterdir()))
    code, out, _ = cli(capsys, "enumerate", "--red", "nm:2", "--blue", "k:3", "--n", "5", "--limit", "2")
    assert out == "2\n"


def test_verify_exit_codes(capsys, tmp_path):
    good = tmp_path / "good.txt"
    cli(capsys, "gen", "block-coloring", "2", "2", "-o", str(good))
    code, out, _ = cli(capsys, "verify", str(good), "--red", "nm:2", "--blue", "k:3")
    assert code == EXIT_OK and out.startswith("avoiding")
    code, out, _ = cli(capsys, "verify", str(good), "--red", "path:2", "--blue", "k:3")
    assert code == EXIT_FOUND and "red copy" in out
    broken = tmp_path / "broken.txt"
    broken.write_text("ordered-coloring v1\nN=3\nRX\nR\n")
    code, _, err = cli(capsys, "verify", str(broken), "--red", "nm:2", "--blue", "k:3")
    assert code == EXIT_USAGE and "line 3" in err
    assert cli(capsys, "verify", str(tmp_path / "nope.txt"), "--red", "nm:2", "--blue", "k:3")[0] == EXIT_USAGE


@pytest.mark.parametrize("n", [4, 5, 6])
def test_gen_chi_verifies_with_routes(capsys, tmp_path, n):
    path = tmp_path / f"chi{n}.txt"
    assert cli(capsys, "gen", "chi", str(n), "-o", str(path))[0] == EXIT_OK
    code, out, _ = cli(capsys, "verify", str(path), "--red", f"nm:{n}", "--blue", "k:3")
    assert code == EXIT_OK and "cover the red edges" in out


def test_gen_graphs(capsys):
    assert cli(capsys, "gen", "star", "2", "3")[1] == ordered_star(2, 3).to_text()
    assert cli(capsys, "gen", "join-expr", "join(path:2+path:3)")[1] == monotone_path(4).to_text()
    assert cli(capsys, "gen", "star", "2")[0] == EXIT_USAGE
    assert cli(capsys, "gen", "chi", "3")[0] == EXIT_USAGE


def test_caterpillar(capsys):
    code, out, _ = cli(capsys, "caterpillar", "star:2,3")
    assert code == EXIT_OK and out.startswith("monotone caterpillar: join(")
    assert parse_pattern(out.split(": ", 1)[1]) == ordered_star(2, 3)
    code, out, _ = cli(capsys, "caterpillar", "k:3")
    assert code == EXIT_FOUND and "pattern D at vertices 1,2,3" in out
    assert cli(capsys, "caterpillar", "nm:2")[0] == EXIT_FOUND


def test_routes_report(capsys):
    code, out, _ = cli(capsys, "routes", "nm:3")
    assert code == EXIT_OK
    assert "max nested matching: 3 1,6 2,5 3,4" in out and "queue classes: 3" in out


def test_render(capsys, tmp_path):
    path = tmp_path / "c.txt"
    path.write_text(serialize(block_coloring(2, 2)))
    code, out, _ = cli(capsys, "render", str(path))
    assert code == EXIT_OK and out.splitlines()[0].strip() == "1234"
    svg = tmp_path / "c.svg"
    assert cli(capsys, "render", str(path), "--svg", "-o", str(svg))[0] == EXIT_OK
    ET.fromstring(svg.read_text())


def test_chromatic_bound(capsys, tmp_path):
    path = tmp_path / "chi1.txt"
    cli(capsys, "gen", "chi", "4", "-o", str(path))
    assert cli(capsys, "chromatic-bound", str(path), "--k", "3")[:2] == (EXIT_OK, "8\n")
    # the witness does not avoid NM_3
    code, out, _ = cli(capsys, "chromatic-bound", str(path), "--k", "2")
    assert code == EXIT_FOUND and out.startswith("not a witness")


def test_scan_good_small(capsys):
    code, out, _ = cli(capsys, "scan-good", "--max-v", "3", "--n", "3")
    assert code == EXIT_OK
    assert out.splitlines()[2:] == ["2\t1\t0\t0\t0\t0", "3\t3\t0\t0\t1\t0"]
    assert cli(capsys, "scan-good", "--max-v", "7", "--n", "3")[0] == EXIT_USAGE


def test_bad_jobs(capsys):
    assert cli(capsys, "scan-good", "--max-v", "3", "--n", "3", "--jobs", "0")[0] == EXIT_USAGE


def test_version(capsys):
    assert cli(capsys, "--version")[0] == EXIT_OK


def test_join_example_is_a_five_vertex_caterpillar(capsys):
    g = parse_pattern("join(star:1,3+star:3,1)")
    assert g.n == 5
    assert cli(capsys, "caterpillar", "join(star:1,3+star:3,1)")[0] == EXIT_OK


def test_nm4_value_and_census_from_cli(capsys, tmp_path):
    ledger = tmp_path / "l.tsv"
    code, out, _ = cli(capsys, "ramsey", "--red", "nm:4", "--blue", "k:3", "--ledger", str(ledger))
    assert code == EXIT_OK and out == "16\n"
    assert any(r.N == 16 and r.verdict == ARROWS for r in ResultsLedger(ledger).records())
    code, out, _ = cli(capsys, "enumerate", "--red", "nm:4", "--blue", "k:3", "--n", "15")
    assert code == EXIT_OK and out == "326\n"
