import json
import shutil

import pytest

from diffcech.cli import main


@pytest.fixture(scope="module")
def fx(tmp_path_factory):
    d = tmp_path_factory.mktemp("fixtures")
    assert main(["fixtures", "--out", str(d)]) == 0
    # the names used in the usage examples
    shutil.copy(d / "CIRC2.json", d / "circ2.json")
    shutil.copy(d / "group-S3.json", d / "s3.json")
    return d


def test_fixtures_written(fx):
    names = sorted(p.name for p in fx.iterdir())
    assert "SPH-OCT.json" in names and "group-Z3.json" in names


def test_cohomology_by_kww(fx, capsys):
    code = main(["cohomology", str(fx / "circ2.json"), "--coeff", "Z", "--degree", "1", "--theory", "kww"])
    assert code == 0
    assert capsys.readouterr().out == "H^1 = Z\n"


def test_cohomology_json(fx, capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["cohomology", "CIRC2", "-k", "2", "--format", "json", "--output", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert (data["theory"], data["free_rank"], data["torsion"]) == ("TOT", 0, [])
    assert "agrees with PIZ-QX" in data["caveats"]
    assert "note:" in capsys.readouterr().err


def test_torsion_coefficients(capsys):
    assert main(["cohomology", "DISC2", "--coeff", "Z/2", "-k", "0", "--theory", "piz-qx"]) == 0
    assert capsys.readouterr().out.strip() == "H^0 = (Z/2)^2"


def test_classify(fx, capsys):
    assert main(["classify", str(fx / "circ2.json"), "--group", str(fx / "s3.json"), "--brute-force"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("3 classes")
    orders = sorted(int(line.split("order ")[1].split()[0]) for line in out[1:])
    assert orders == [2, 3, 6]


def test_classify_json(capsys):
    assert main(["classify", "DISC2", "--group", "Z3", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["classes"] == 1 and data["details"][0]["gauge_group"] == "(Z/3)^2"


def test_compare(capsys):
    assert main(["compare", "CIRC2", "--max-degree", "1", "--no-bm"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].split() == ["0", "Z", "Z", "Z", "yes"]
    assert lines[2].split() == ["1", "Z", "Z", "Z", "yes"]


def test_validate(fx, capsys):
    assert main(["validate", str(fx / "CIRC4.json")]) == 0
    assert "valid" in capsys.readouterr().out


def test_validate_corrupt(fx, tmp_path, capsys):
    data = json.loads((fx / "CIRC2.json").read_text(encoding="utf-8"))
    data["maps"][0]["vertex_map"] = {"0": "1"}
    bad = tmp_path / "circ2_corrupt.json"
    bad.write_text(json.dumps(data), encoding="utf-8")
    assert main(["validate", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "i0U" in err and "labels do not commute" in err


def test_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": [', encoding="utf-8")
    assert main(["validate", str(bad)]) == 3
    assert main(["validate", str(tmp_path / "missing.json")]) == 3
    assert main(["classify", "PT", "--group", "Q8"]) == 3
    assert main(["cohomology", "PT", "-k", "1", "--n-max", "2"]) == 3
    assert "error:" in capsys.readouterr().err


def test_resource_cap(capsys):
    assert main(["classify", "CIRC4", "--group", "S3"]) == 2
    assert "exceeds cap" in capsys.readouterr().err
