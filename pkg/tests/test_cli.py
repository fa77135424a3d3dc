import json

import pytest

from tensorsym import cli


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_and_sequence_json(tmp_path, capsys):
    path = tmp_path / "ghz.t"
    code, out, err = run_cli(capsys, "gen", "ghz", "--field", "gf:101", "-o", str(path))
    assert code == 0 and path.exists()
    code, out, err = run_cli(capsys, "sequence", str(path), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["der_dim"] == 4 and doc["coker_dim"] == 0
    assert all(j["exact"] for j in doc["junctions"])


def test_sequence_text(tmp_path, capsys):
    path = tmp_path / "w.t"
    run_cli(capsys, "gen", "w", "--field", "gf:101", "-o", str(path))
    code, out, err = run_cli(capsys, "sequence", str(path))
    assert code == 0
    assert "Der: 5" in out and "cokernel at Der: 1" in out


def test_validate(tmp_path, capsys):
    path = tmp_path / "t.t"
    run_cli(capsys, "gen", "matmul", "2", "3", "4", "--field", "rational", "-o", str(path))
    code, out, err = run_cli(capsys, "validate", str(path))
    assert code == 0
    assert "fully nondegenerate: yes" in out


def test_validate_bad_file_names_line(tmp_path, capsys):
    path = tmp_path / "bad.t"
    path.write_text("tensor v1\nfield gf 7\nvalence 2\ndims 2 2 2\nentry 0 0 0 1\nentry 0 0 0 1\n")
    code, out, err = run_cli(capsys, "validate", str(path))
    assert code == 1
    assert ":6:" in err and "duplicate" in err


def test_validate_missing_file(capsys):
    code, out, err = run_cli(capsys, "validate", "/nonexistent/x.t")
    assert code == 1


def test_compare_text(tmp_path, capsys):
    g = tmp_path / "g.t"
    w = tmp_path / "w.t"
    run_cli(capsys, "gen", "ghz", "--field", "gf:101", "-o", str(g))
    run_cli(capsys, "gen", "w", "--field", "gf:101", "-o", str(w))
    code, out, err = run_cli(capsys, "compare", str(g), str(w))
    assert code == 0
    assert "distinguished" in out and "not distinguished" not in out
    code, out, err = run_cli(capsys, "compare", str(g), str(g), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["distinguished"] is False


def test_compare_field_mismatch(tmp_path, capsys):
    g = tmp_path / "g.t"
    h = tmp_path / "h.t"
    run_cli(capsys, "gen", "ghz", "--field", "gf:101", "-o", str(g))
    run_cli(capsys, "gen", "ghz", "--field", "rational", "-o", str(h))
    code, out, err = run_cli(capsys, "compare", str(g), str(h))
    assert code == 1


def test_sigma_verify_and_dump(capsys):
    code, out, err = run_cli(capsys, "sigma", "--valence", "3", "--verify")
    assert code == 0 and "sigma OK" in out
    code, out, err = run_cli(capsys, "sigma", "--valence", "2", "--dump")
    assert code == 0
    assert "{1} -> {1,2} : -1" in out
    code, out, err = run_cli(capsys, "sigma", "--valence", "2")
    assert code == 0 and "covering pairs" in out


def test_sigma_invalid_valence(capsys):
    code, out, err = run_cli(capsys, "sigma", "--valence", "0")
    assert code == 1


def test_gen_kron(tmp_path, capsys):
    a = tmp_path / "a.t"
    b = tmp_path / "b.t"
    k = tmp_path / "k.t"
    run_cli(capsys, "gen", "galois-dot", "5", "2", "3", "--field", "gf:5", "-o", str(a))
    run_cli(capsys, "gen", "galois-dot", "5", "3", "1", "--field", "gf:5", "-o", str(b))
    code, out, err = run_cli(capsys, "gen", "kron", str(a), str(b), "-o", str(k))
    assert code == 0
    code, out, err = run_cli(capsys, "validate", str(k))
    assert code == 0 and "dims [6, 24, 4, 6]" in out


def test_gen_to_stdout(capsys):
    code, out, err = run_cli(capsys, "gen", "ghz", "--field", "gf:7")
    assert code == 0
    assert out.startswith("tensor v1\nfield gf 7\n")


def test_gen_bad_builtin(capsys):
    code, out, err = run_cli(capsys, "gen", "mystery", "--field", "gf:7")
    assert code == 1


def test_gen_bad_field(capsys):
    code, out, err = run_cli(capsys, "gen", "ghz", "--field", "gf:6")
    assert code == 1
    code, out, err = run_cli(capsys, "gen", "ghz", "--field", "reals")
    assert code == 1


def test_invariants_json_and_strict(tmp_path, capsys):
    path = tmp_path / "m.t"
    run_cli(capsys, "gen", "matmul", "2", "3", "4", "--field", "gf:101", "-o", str(path))
    code, out, err = run_cli(capsys, "invariants", str(path), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["der_dim"] == 28
    kinds = {(f["kind"], tuple(f["subset"])): f for f in doc["fingerprints"]}
    assert kinds[("centroid", (0, 1, 2))]["dim"] == 1
    assert kinds[("nucleus", (0, 1))]["dim"] == 16
    # over gf:5 the dim-16 nucleus radical is unknown -> strict exits 3
    small = tmp_path / "m5.t"
    run_cli(capsys, "gen", "matmul", "2", "3", "4", "--field", "gf:5", "-o", str(small))
    code, out, err = run_cli(capsys, "invariants", str(small), "--strict")
    assert code == 3
    code, out, err = run_cli(capsys, "invariants", str(small))
    assert code == 0


def test_aut_check(tmp_path, capsys):
    path = tmp_path / "m.t"
    run_cli(capsys, "gen", "matmul", "2", "2", "2", "--field", "gf:101", "-o", str(path))
    code, out, err = run_cli(capsys, "aut-check", str(path), "--samples", "10", "--seed", "4")
    assert code == 0
    assert "seed 4" in out and "FAIL" not in out


def test_internal_error_maps_to_exit_2(tmp_path, capsys, monkeypatch):
    from tensorsym.errors import InternalInvariantError

    def boom(*a, **k):
        raise InternalInvariantError("synthetic")

    monkeypatch.setattr(cli, "build_chain", boom)
    path = tmp_path / "g.t"
    run_cli(capsys, "gen", "ghz", "--field", "gf:101", "-o", str(path))
    code, out, err = run_cli(capsys, "sequence", str(path))
    assert code == 2 and "synthetic" in err


def test_json_output_is_byte_deterministic(tmp_path, capsys):
    path = tmp_path / "g.t"
    run_cli(capsys, "gen", "ghz", "--field", "gf:101", "-o", str(path))
    _, out1, _ = run_cli(capsys, "sequence", str(path), "--json")
    _, out2, _ = run_cli(capsys, "sequence", str(path), "--json")
    assert out1 == out2
    _, inv1, _ = run_cli(capsys, "invariants", str(path), "--json", "--seed", "9")
    _, inv2, _ = run_cli(capsys, "invariants", str(path), "--json", "--seed", "9")
    assert inv1 == inv2
