import io
import subprocess
import sys

import pytest

from conftest import left_chain
from islp.cli import main
from islp.grammar import format_grammar, parse_grammar
from islp.oracles import s_k_grammar


@pytest.fixture
def sk5(tmp_path):
    path = tmp_path / "s5.islp"
    path.write_text(format_grammar(s_k_grammar(5)))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pipeline_subprocess():
    gen = subprocess.run([sys.executable, "-m", "islp", "gen", "s_k", "5"], capture_output=True, check=True)
    acc = subprocess.run([sys.executable, "-m", "islp", "access", "14"], input=gen.stdout, capture_output=True)
    assert acc.returncode == 0 and acc.stdout == b"b\n"


def test_access_trace(capsys, sk5):
    code, out, _ = run(capsys, "access", "-g", sk5, "--trace", "14")
    assert code == 0 and out == "4 2 1\nb\n"


def test_extract_and_queries(capsys, sk5):
    assert run(capsys, "extract", "-g", sk5, "5", "6")[1] == "baaaba\n"
    assert run(capsys, "rmq", "-g", sk5, "2", "2")[1] == "2 98\n"
    assert run(capsys, "nsv", "-g", sk5, "2", "98")[1] == "3\n"
    assert run(capsys, "psv", "-g", sk5, "20", "98")[1] == "19\n"
    assert run(capsys, "kr", "-g", sk5, "1", "1", "--mu", "101", "--c", "7")[1] == f"{97 % 101}\n"


def test_validate(capsys, tmp_path):
    bad = tmp_path / "bad.islp"
    bad.write_text("islp 2 0 2\n0 -> bin 0 1\n1 -> term 1\n")
    code, _, err = run(capsys, "validate", "-g", str(bad))
    assert code == 2 and "cycle" in err
    garbled = tmp_path / "garbled.islp"
    garbled.write_text("islp 1 0 1\n0 -> what\n")
    assert run(capsys, "validate", "-g", str(garbled))[0] == 2


def test_usage_errors(capsys, sk5):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    assert run(capsys, "access", "-g", sk5, "21")[0] == 1
    assert run(capsys, "kr", "-g", sk5, "1", "2", "--mu", "100")[0] == 1
    assert run(capsys, "edit", "-g", sk5, "substitute", "3")[0] == 1


def test_balance_and_stats(capsys, tmp_path):
    chain = tmp_path / "chain.islp"
    chain.write_text(format_grammar(left_chain(300)))
    code, out, _ = run(capsys, "stats", "-g", str(chain))
    size_in, size_out, h_in, h_out, n = map(int, out.split())
    assert code == 0 and n == 300 and h_out <= h_in and h_in == 300
    code, out, err = run(capsys, "balance", "-g", str(chain), "--stats")
    assert parse_grammar(out).expand() == left_chain(300).expand()
    assert err.split() == [str(size_in), str(size_out), str(h_in), str(h_out), "300"]


def test_queries_identical_on_balanced(capsys, tmp_path):
    g = s_k_grammar(12)
    plain = tmp_path / "plain.islp"
    plain.write_text(format_grammar(g))
    bal = tmp_path / "bal.islp"
    main(["balance", "-g", str(plain), "-o", str(bal)])
    for argv in (["access", "7", "40", "90"], ["extract", "3", "30"], ["rmq", "5", "60"],
                 ["nsv", "4", "98"], ["psv", "88", "98"], ["kr", "10", "50"]):
        a = run(capsys, argv[0], "-g", str(plain), *argv[1:])
        b = run(capsys, argv[0], "-g", str(bal), *argv[1:])
        assert a == b


def test_round_trip_is_byte_identical(capsys, sk5, tmp_path):
    text = open(sk5).read()
    assert format_grammar(parse_grammar(text)) == text
    out = tmp_path / "rev.islp"
    main(["reverse", "-g", sk5, "-o", str(out)])
    main(["reverse", "-g", str(out), "-o", str(out)])
    assert out.read_text() == text


def test_transforms(capsys, sk5, tmp_path):
    code, out, _ = run(capsys, "edit", "-g", sk5, "substitute", "14", "c")
    assert code == 0 and bytes(parse_grammar(out).expand()) == b"abaabaaabaaaacaaaaab"
    code, out, _ = run(capsys, "edit", "-g", sk5, "delete", "1")
    assert bytes(parse_grammar(out).expand()) == b"baabaaabaaaabaaaaab"
    mapfile = tmp_path / "map.txt"
    mapfile.write_text("a xy\n# comment\nb z\n")
    code, out, _ = run(capsys, "morph", "-g", sk5, str(mapfile))
    assert bytes(parse_grammar(out).expand()) == b"xyz" + b"xyxyz" + b"xy" * 3 + b"z" + b"xy" * 4 + b"z" + b"xy" * 5 + b"z"
    mapfile.write_text("a\n")
    assert run(capsys, "morph", "-g", sk5, str(mapfile))[0] == 2


def test_gen_build_measures(capsys, tmp_path):
    txt = tmp_path / "tm.txt"
    code, out, _ = run(capsys, "gen", "thue_morse_prefix", "8", "--text-out", str(txt))
    assert txt.read_bytes() == b"abbabaab" and bytes(parse_grammar(out).expand()) == b"abbabaab"
    code, out, _ = run(capsys, "measures", str(txt))
    assert code == 0 and out.split()[0] == "8"
    code, out, _ = run(capsys, "build-naive", str(txt), "--seed", "4")
    assert bytes(parse_grammar(out).expand()) == b"abbabaab"


def test_report(capsys, tmp_path, monkeypatch):
    import islp.report as report

    full = report.delta_rows
    monkeypatch.setattr(report, "delta_rows", lambda: full(12))
    code, out, err = run(capsys, "report", "--out", str(tmp_path / "rep"))
    assert code == 0
    names = {line.split("\t")[0] for line in out.splitlines()}
    assert {"chain_height_out", "fibonacci_r", "s_k_delta_over_sqrt_n"} <= names
    for png in ("balanced_height.png", "s_k_delta.png", "fibonacci_bwt_runs.png"):
        assert (tmp_path / "rep" / png).stat().st_size > 1000
