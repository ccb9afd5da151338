from pathlib import Path

import pytest

from histree.cli import main
from histree.fixtures import e1, spawn_die_respawn
from histree.formats import emit_nbw_hoa, emit_nbw_native, parse_rabin


@pytest.fixture()
def e1_file(tmp_path):
    path = tmp_path / "e1.native"
    path.write_text(emit_nbw_native(e1()), encoding="utf-8")
    return str(path)


def test_determinize_writes_hoa(e1_file, capsys):
    assert main(["determinize", "--in", e1_file]) == 0
    out = capsys.readouterr().out
    assert out.startswith("HOA: v1")
    d = parse_rabin(out)
    assert len(d.payloads) == 2


def test_determinize_modes_and_outputs(e1_file, capsys):
    for mode in ("baseline", "canonical"):
        for out_kind in ("drtw", "drw"):
            rc = main(["determinize", "--in", e1_file, "--mode", mode, "--out", out_kind])
            assert rc == 0
            text = capsys.readouterr().out
            expected = "state-acc" if out_kind == "drw" else "trans-acc"
            assert expected in text


def test_determinize_reads_hoa_input(tmp_path, capsys):
    path = tmp_path / "e1.hoa"
    path.write_text(emit_nbw_hoa(e1()), encoding="utf-8")
    assert main(["determinize", "--in", str(path)]) == 0
    assert "Rabin" in capsys.readouterr().out


def test_verify_equivalent(e1_file, capsys):
    assert main(["verify", "--in", e1_file, "--max-u", "3", "--max-v", "3"]) == 0
    out = capsys.readouterr().out
    assert out.count("counterexample=none") == 3
    assert "target=canonical-drtw" in out


def test_verify_strict_marks_finds_counterexample(tmp_path, capsys):
    path = tmp_path / "sdr.native"
    path.write_text(emit_nbw_native(spawn_die_respawn()), encoding="utf-8")
    rc = main(["verify", "--in", str(path), "--max-u", "4", "--max-v", "4", "--strict-paper-marks"])
    assert rc == 1
    out = capsys.readouterr().out
    assert "counterexample=u:-;v:a,a,b" in out


def test_gen_table_golden(capsys):
    assert main(["gen-table", "--n", "4"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "ε\t0\t1"
    assert "1.1.1\t3\t1" in out


def test_stats_lists_all_targets(e1_file, capsys):
    assert main(["stats", "--in", e1_file]) == 0
    out = capsys.readouterr().out
    assert "target=canonical-drtw" in out
    assert "target=baseline-drtw" in out
    assert "pairs=1" in out
    assert "states=3" in out  # the enriched build


def test_render_writes_dot(e1_file, tmp_path, capsys):
    out_path = tmp_path / "e1.dot"
    assert main(["render", "--in", e1_file, "--dot", str(out_path)]) == 0
    assert out_path.read_text(encoding="utf-8").startswith("digraph")


def test_missing_file_is_input_error(tmp_path, capsys):
    rc = main(["determinize", "--in", str(tmp_path / "absent.hoa")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_bad_document_is_input_error(tmp_path, capsys):
    path = tmp_path / "junk.hoa"
    path.write_text("HOA: v1\nStates: $$$\n", encoding="utf-8")
    assert main(["determinize", "--in", str(path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_unsupported_acceptance_is_input_error(tmp_path, capsys):
    path = tmp_path / "parity.hoa"
    text = emit_nbw_hoa(e1()).replace("acc-name: Buchi", "acc-name: parity min even 2")
    path.write_text(text, encoding="utf-8")
    assert main(["determinize", "--in", str(path)]) == 2
    err = capsys.readouterr().err
    assert "acceptance" in err
