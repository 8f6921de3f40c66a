import json
import os

import pytest

from ptsusy.cli import main


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def test_even_grid_size_rejected(capsys):
    assert main(["spectrum", "--grid-size", "200"]) == 2
    assert "grid-size" in capsys.readouterr().err


def test_invalid_strategy_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["gram", "--strategy", "bogus"])
    assert exc.value.code == 2


def test_missing_out_parent_rejected(tmp_path):
    missing = tmp_path / "no" / "such" / "dir" / "r.json"
    assert main(["hierarchy", "--out", str(missing)]) == 2


def test_figures_spot_values_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        out.mkdir()
        assert main(["figures", "--out", str(out)]) == 0

    def rows(path):
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        assert lines[0] == "x,re,im,clipped"
        return {ln.split(",")[0]: ln for ln in lines[1:]}

    w1t = rows(out1 / "fig1_w1t.csv")
    assert w1t["0.0"] == "0.0,0.0,2.0,0"
    v1t = rows(out1 / "fig2_v1t.csv")
    assert v1t["0.0"] == "0.0,-5.0,0.0,0"
    v2t = rows(out1 / "fig3_v2t.csv")
    assert v2t["0.0"] == "0.0,-3.0,0.0,0"
    # 2001 data rows, byte-identical across runs, no stray temp files
    assert len(w1t) == 2001
    for name in sorted(os.listdir(out1)):
        assert not name.endswith(".tmp")
        with open(out1 / name, "rb") as f1, open(out2 / name, "rb") as f2:
            assert f1.read() == f2.read()


def test_figures_clipping(tmp_path):
    assert main(["figures", "--out", str(tmp_path), "--plot-ceiling", "10"]) == 0
    with open(tmp_path / "fig2_v1t.csv", encoding="utf-8") as fh:
        lines = fh.read().splitlines()[1:]
    first = lines[0].split(",")
    assert first[3] == "1"
    assert abs(float(first[1])) <= 10.0 and abs(float(first[2])) <= 10.0


def test_spectrum_q0_report(tmp_path):
    out = tmp_path / "spec.json"
    code = main(["spectrum", "--q", "0", "--grid-size", "1001", "--out", str(out)])
    assert code == 0
    doc = _load(out)
    assert doc["version"]
    assert doc["config"]["command"] == "spectrum"
    assert doc["config"]["q"] == 0.0
    rep = doc["report"]
    assert rep["stability"] == "stable"
    assert rep["targets"] == [0.0, 3.0, 8.0, 15.0]
    assert max(rep["abs_errors"]) <= 1e-3
    assert all(a["passed"] for a in doc["assertions"])


def test_spectrum_q2_unstable_exits_zero(tmp_path):
    out = tmp_path / "spec2.json"
    code = main(["spectrum", "--q", "2", "--grid-size", "1001", "--out", str(out)])
    assert code == 0
    doc = _load(out)
    assert doc["report"]["stability"] == "unstable"
    assert doc["assertions_skipped_unstable"]
    assert doc["assertions"] == []


def test_verify_symmetry(tmp_path):
    out = tmp_path / "sym.json"
    assert main(["verify-symmetry", "--out", str(out)]) == 0
    doc = _load(out)
    names = {c["name"]: c for c in doc["checks"]}
    assert names["w_apt_symmetric"]["passed"]
    assert names["v1_pt_symmetric"]["measured"] <= 1e-10
    # the superpotential's PT defect is reported, not asserted
    assert doc["reported"][0]["name"] == "w_pt_defect"
    assert doc["reported"][0]["measured"] > 1.0


def test_verify_shape_invariance(tmp_path):
    out = tmp_path / "shape.json"
    assert main(["verify-shape-invariance", "--out", str(out)]) == 0
    doc = _load(out)
    assert all(c["passed"] for c in doc["checks"])


def test_verify_factorization(tmp_path):
    out = tmp_path / "fact.json"
    assert main(["verify-factorization", "--grid-size", "4001",
                 "--out", str(out)]) == 0
    doc = _load(out)
    names = {c["name"]: c for c in doc["checks"]}
    assert names["apt_factorization_h1"]["measured"] <= 1e-5
    assert names["hermitian_adjoint_breaks"]["measured"] >= 0.1


def test_gram_q0_assertive(tmp_path):
    out = tmp_path / "gram.json"
    assert main(["gram", "--q", "0", "--grid-size", "1001", "--out", str(out)]) == 0
    doc = _load(out)
    assert doc["mode"] == "assertive"
    assert doc["gram"]["hermitian"]["max_offdiag"] <= 1e-6
    assert all(c["passed"] for c in doc["checks"])


def test_gram_q2_exploratory(tmp_path):
    out = tmp_path / "gram2.json"
    assert main(["gram", "--q", "2", "--grid-size", "1001", "--out", str(out)]) == 0
    doc = _load(out)
    assert doc["mode"] == "exploratory"
    assert doc["checks"] == []
    assert set(doc["gram"]) == {"hermitian", "pt", "apt"}


def test_hierarchy_paper_k_flags(tmp_path):
    out = tmp_path / "hier.json"
    assert main(["hierarchy", "--mode", "paper-k", "--depth", "3",
                 "--out", str(out)]) == 0
    doc = _load(out)
    assert [lv["k"] for lv in doc["levels"]] == [2.0, 3.0, 4.0]
    assert all(lv["poles_inside_domain"] for lv in doc["levels"])


def test_json_is_deterministic(tmp_path):
    outs = []
    for name in ("x.json", "y.json"):
        out = tmp_path / name
        main(["verify-shape-invariance", "--out", str(out)])
        with open(out, "rb") as fh:
            outs.append(fh.read())
    # byte-identical apart from nothing: configs differ only in out path
    a = json.loads(outs[0])
    b = json.loads(outs[1])
    a["config"].pop("out")
    b["config"].pop("out")
    assert a == b
