import csv
import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from fsrkit.cli import Config, build_parser, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sem_realise_on_empty_pole(capsys):
    code, out, _ = call(capsys, "sem", "realise", "--pole", "empty", "--n", "0", "--formula", "0=0")
    assert code == 0 and out.strip() == "True"


def test_transform_fs(capsys):
    code, out, _ = call(capsys, "transform", "fs", "--formula", "Tr(⌜0=0⌝)")
    assert code == 0 and out.strip() == "T(0, ⌜0=0⌝)"


def test_transform_trace(capsys):
    code, out, _ = call(capsys, "transform", "explicit", "--formula", "0=0", "--term", "0", "--trace")
    lines = out.splitlines()
    assert lines[0] == "forall a. ((0=0 -> Pole(a)) -> Pole(pair(0,a)))"
    assert any(line.startswith("# ") for line in lines[1:])


def test_parse_and_encode_agree(capsys):
    _, out, _ = call(capsys, "parse", "--formula", "forall x. x=x")
    code_line = [line for line in out.splitlines() if line.startswith("code: ")][0]
    c = code_line.split()[1]
    _, out, _ = call(capsys, "encode", "--decode", c)
    assert out.strip() == "forall x. x=x"


def test_eval(capsys):
    _, out, _ = call(capsys, "eval", "--lambda", "λa. a", "--arg", "7")
    assert out.strip() == "Value(7)"
    _, out, _ = call(capsys, "eval", "--code", "5", "--fuel", "10")
    assert out.strip() == "OutOfFuel(10)"


def test_pole_member_and_check(capsys):
    _, out, _ = call(capsys, "pole", "member", "--seed", "5", "--n", "5")
    assert out.strip() == "seed:5: True"
    _, out, _ = call(capsys, "pole", "check", "--seed", "5", "--code-bound", "50", "--arg-bound", "10",
                     "--fuel", "200")
    assert out.strip().endswith("violations 0")


def test_revise_csv_and_figures(capsys, tmp_path):
    report = tmp_path / "rev.csv"
    code, out, err = call(capsys, "revise", "--pole", "empty", "--stages", "2", "--bound", "6",
                          "--watch", "T(0, ⌜0=0⌝)", "--watch", "F(0, ⌜0=S(0)⌝)",
                          "--csv", str(report), "--plot-dir", str(tmp_path / "plots"))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(report.read_text())))
    assert [r["stage"] for r in rows] == ["0", "0", "1", "1", "2", "2"]
    assert rows[3] == {"stage": "1", "sentence": "F(0, ⌜0=S(0)⌝)", "verdict": "True"}
    for name in ("revision_heatmap.png", "pole_table.png"):
        png = tmp_path / "plots" / name
        assert png.read_bytes()[:4] == b"\x89PNG"
    assert "figure" in err


def test_pole_table_figure(capsys, tmp_path):
    fig = tmp_path / "poles.png"
    code, out, _ = call(capsys, "pole", "--upto", "5", "--figure", str(fig))
    assert code == 0 and fig.read_bytes()[:4] == b"\x89PNG"
    assert out.splitlines()[0] == "pole,n,verdict"


def test_output_is_deterministic(capsys):
    argv = ["revise", "--pole", "seed:5", "--stages", "1", "--bound", "4", "--watch", "Pole(5)"]
    assert call(capsys, *argv)[1] == call(capsys, *argv)[1]


def test_proof_export_check_and_extract(capsys, tmp_path):
    code, out, _ = call(capsys, "proof", "export", "--dir", str(tmp_path))
    assert code == 0
    code, out, _ = call(capsys, "proof", "check", "--file", str(tmp_path / "symmetry.json"))
    assert code == 0 and out.strip() == "valid in PA"
    cert_path = tmp_path / "cert.json"
    code, out, _ = call(capsys, "proof", "extract", "--file", str(tmp_path / "symmetry.json"),
                        "--output", str(cert_path))
    cert = json.loads(cert_path.read_text())
    assert code == 0 and set(cert) == {"conclusion", "realiser-code", "trace"}


def test_mcgee_table(capsys):
    code, out, _ = call(capsys, "mcgee", "table", "--poles", "empty,full")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["matches"] for r in rows] == ["True", "True"]


def test_usage_errors_are_nonzero(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code != 0
    with pytest.raises(SystemExit) as exc:
        run(["sem", "realise"])
    assert exc.value.code != 0
    code, _, err = call(capsys, "sem", "realise", "--formula", "0=")
    assert code == 2 and "fsrkit sem" in err
    code, _, _ = call(capsys, "pole", "--pole", "half")
    assert code == 2


def test_suite_subset(capsys, tmp_path):
    code, out, _ = call(capsys, "suite", "--only", "1,7", "--csv", str(tmp_path / "s.csv"))
    assert code == 0
    assert "hard failures: 0" in out
    assert out.count("[PASS]") == 2


def test_flags_before_and_after_the_subcommand(capsys):
    args = build_parser().parse_args(["--bound", "5", "sem", "truth", "--formula", "0=0"])
    assert args.bound == 5
    args = build_parser().parse_args(["sem", "truth", "--formula", "0=0", "--bound", "7"])
    assert args.bound == 7


# ---------------------------------------------------------------- config


def test_config_defaults_and_file(tmp_path):
    assert Config.load("default") == Config()
    path = tmp_path / "c.cfg"
    path.write_text("# bounds\nbound = 12\nstages=2\ncorpus=a.txt, b.txt\n")
    cfg = Config.load(str(path))
    assert (cfg.bound, cfg.stages, cfg.corpus) == (12, 2, ("a.txt", "b.txt"))
    with pytest.raises(ValueError):
        Config.from_text("bound=0\n")
    with pytest.raises(ValueError):
        Config.from_text("colour=blue\n")


def test_config_file_drives_a_run(capsys, tmp_path):
    corpus = tmp_path / "watch.txt"
    corpus.write_text("T(0, ⌜0=0⌝)  # trivially true\n")
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"bound=4\nstages=1\ncorpus={corpus}\n")
    code, out, _ = call(capsys, "revise", "--config", str(cfg))
    assert code == 0 and len(out.splitlines()) == 3


names = st.text(alphabet="abcxyz_.", min_size=1, max_size=6)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10**6), st.integers(1, 10**6), st.integers(1, 500), st.integers(1, 50),
       st.lists(names, max_size=3).map(tuple), st.booleans())
def test_config_round_trip(bound, fuel, depth, stages, corpus, strict):
    cfg = Config(bound, fuel, depth, stages, corpus, strict)
    assert Config.from_text(cfg.to_text()) == cfg
