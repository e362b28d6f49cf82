import json

import pytest

from ovalg.cli import main
from ovalg.macaulay import max_entries, read_macaulay_csv, set_max_entries


@pytest.fixture
def system(tmp_path):
    path = tmp_path / "ov.txt"
    assert main(["gen", "--kind", "ov", "--n", "6", "--v", "2", "--m", "6", "--char0", "--seed", "3",
                 "--out", str(path)]) == 0
    return path


def run(capsys, argv):
    capsys.readouterr()
    code = main(argv)
    return code, capsys.readouterr()


def test_gen_is_deterministic(capsys, monkeypatch):
    args = ["gen", "--kind", "mixed", "--n", "6", "--v", "2", "--e", "3", "--u", "2", "--q", "2",
            "--field-equations"]
    monkeypatch.setenv("OVALG_SEED", "17")
    _, first = run(capsys, args)
    _, second = run(capsys, args)
    assert first.out == second.out and "# seed 17" in first.out
    assert "mixed 2 3 2" in first.err


def test_hilbert_and_predict_agree(capsys, system):
    code, out = run(capsys, ["--format", "json", "hilbert", "--in", str(system), "--max-degree", "6"])
    assert code == 0
    h = json.loads(out.out)["hilbert"]
    code, out = run(capsys, ["predict", "ov", "--n", "6", "--v", "2", "--m", "6", "--max-degree", "6",
                             "--format", "json"])
    assert json.loads(out.out)["ov"] == h


def test_predict_csv(capsys):
    code, out = run(capsys, ["predict", "semiregular", "--n", "8", "--m", "1", "--q", "2", "--max-degree", "3",
                             "--format", "csv"])
    assert code == 0
    assert out.out.splitlines() == ["d,value", "0,1", "1,8", "2,27", "3,48"]


def test_invariants_report(capsys, system, tmp_path):
    report = tmp_path / "r.json"
    code, out = run(capsys, ["invariants", "--in", str(system), "--max-degree", "7", "--check", "ov",
                             "--check", "chain", "--report", str(report)])
    assert code == 0
    data = json.loads(report.read_text())
    assert data["flags"]["ov_identity"] and data["d_reg"] == 3
    assert "d_reg" in out.out


def test_macaulay_dump(capsys, system, tmp_path):
    dump = tmp_path / "m.csv"
    code, out = run(capsys, ["macaulay", "--in", str(system), "--degree", "3", "--dump-matrix", str(dump),
                             "--format", "json"])
    assert code == 0
    info = json.loads(out.out)
    cols, rows, A = read_macaulay_csv(str(dump))
    assert A.shape == (info["rows"], info["columns"]) == (36, 56)


def test_solve_degree(capsys, tmp_path):
    path = tmp_path / "nh.txt"
    main(["gen", "--kind", "full", "--n", "4", "--m", "5", "--q", "2", "--field-equations", "--affine",
          "--seed", "1", "--out", str(path)])
    capsys.readouterr()
    code, out = run(capsys, ["--format", "json", "solve-degree", "--in", str(path), "--fall"])
    data = json.loads(out.out)
    assert code == 0 and data["solving_degree"] >= 2 and data["first_fall_degree"] >= 2


def test_exit_codes(capsys, system):
    assert run(capsys, ["gen", "--kind", "ov"])[0] == 1
    assert run(capsys, ["hilbert", "--in", "/nonexistent"])[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1
    old = max_entries()
    try:
        assert run(capsys, ["--max-entries", "10", "macaulay", "--in", str(system), "--degree", "4"])[0] == 3
    finally:
        set_max_entries(old)


def test_reproduce_subset(capsys):
    code, out = run(capsys, ["reproduce-paper", "--only", "1,3"])
    assert code == 0
    assert out.out.count("[PASS]") == 8
    code, out = run(capsys, ["reproduce-paper", "--only", "2", "--format", "json"])
    assert code == 2 and not json.loads(out.out)["passed"]
