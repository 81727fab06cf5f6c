import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from importlib import resources

import jsonschema
import pytest

from simplex_split.cli import main


def schema(name):
    text = resources.files("simplex_split").joinpath("schemas", f"{name}.json").read_text()
    return json.loads(text)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, name, *argv):
    code, out = run(capsys, *argv)
    doc = json.loads(out)
    jsonschema.validate(doc, schema(name))
    return code, doc


class TestCountOrbits:
    @pytest.mark.parametrize("n,count", [(1, 3), (2, 21), (3, 160), (4, 1283)])
    def test_counts(self, capsys, n, count):
        code, doc = run_json(capsys, "count_orbits", "count-orbits", "--n", str(n))
        assert code == 0 and doc["count"] == count

    def test_list(self, capsys):
        _, doc = run_json(capsys, "count_orbits", "count-orbits", "--n", "2", "--list")
        assert len(doc["orbits"]) == 21
        assert sum(o["size"] for o in doc["orbits"]) == 36

    def test_text_format(self, capsys):
        code, out = run(capsys, "count-orbits", "--n", "3", "--format", "text")
        assert code == 0 and "count\t160" in out.splitlines()

    @pytest.mark.parametrize("argv", [["--n", "0"], ["--n", "6"], ["--n", "5", "--max-n", "4"]])
    def test_bad_n(self, capsys, argv):
        with pytest.raises(SystemExit) as exc:
            main(["count-orbits", *argv])
        assert exc.value.code == 2


class TestVerify:
    def test_n2(self, capsys, tmp_path):
        fig = tmp_path / "survivors.png"
        code, doc = run_json(capsys, "verify", "verify", "--n", "2", "--depth", "8", "--figure", str(fig))
        assert code == 0
        assert doc["orbit_count"] == 21 and len(doc["survivors"]) == 3
        assert doc["survivors_match_farey"] and doc["all_certificates_reverified"]
        assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_too_short_words_fail(self, capsys):
        # with one-letter words most pairs escape certification
        code, doc = run_json(capsys, "verify", "verify", "--n", "2", "--max-word-len", "1", "--depth", "4")
        assert code == 1 and not doc["survivors_match_farey"]

    @pytest.mark.parametrize("argv", [["--epsilon", "0"], ["--epsilon", "abc"], ["--depth", "0"], ["--n", "7"]])
    def test_bad_args(self, argv):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--n", "2", *argv])
        assert exc.value.code == 2


class TestExpand:
    def test_one_dimensional(self, capsys):
        code, doc = run_json(capsys, "expand", "expand", "--n", "1", "--point", "3/5", "--steps", "8")
        assert code == 0
        assert doc["digits"] == "11010000"
        assert doc["partial_quotients"] == [1, 1, 2]

    def test_bracket_contains_point(self, capsys, tmp_path):
        out = tmp_path / "e.json"
        main(["expand", "--n", "2", "--point", "1/2,1/3,1/6", "--steps", "6", "--out", str(out)])
        doc = json.loads(out.read_text())
        jsonschema.validate(doc, schema("expand"))
        assert len(doc["digits"]) == 6 and len(doc["bracket"]["vertices"]) == 3

    def test_example5(self, capsys):
        _, doc = run_json(capsys, "expand", "expand", "--variant", "example5", "--point", "1/2,1/3,1/6", "--steps", "1")
        assert doc["digits"] == "2"

    @pytest.mark.parametrize(
        "argv",
        [
            ["--point", "1/2,1/2"],
            ["--point", "0.5,0.25,0.25"],
            ["--point", "1/2,1/3,1/3"],
            ["--point", "1/3,1/3,1/3", "--variant", "bogus"],
            ["--point", "1/3,1/3,1/3", "--variant", "perms=0,1:0,1,2"],
            ["--point", "1/3,1/3,1/3", "--steps", "-1"],
            ["--point", "1/3,1/3,1/3,0", "--n", "3", "--variant", "example5"],
        ],
    )
    def test_malformed(self, argv):
        with pytest.raises(SystemExit) as exc:
            main(["expand", *argv])
        assert exc.value.code == 2


class TestRender:
    def test_partition(self, capsys):
        code, out = run(capsys, "render", "--variant", "example5", "--depth", "5")
        assert code == 0
        root = ET.fromstring(out)
        assert len(list(root.iter("{http://www.w3.org/2000/svg}polygon"))) == 243

    def test_cloud(self, capsys, tmp_path):
        path = tmp_path / "cloud.svg"
        main(["render", "--variant", "example5", "--mode", "cloud", "--max-word-len", "3", "--out", str(path)])
        root = ET.fromstring(path.read_text())
        assert len(list(root.iter("{http://www.w3.org/2000/svg}circle"))) > 0

    def test_wrong_dimension(self):
        with pytest.raises(SystemExit) as exc:
            main(["render", "--n", "3"])
        assert exc.value.code == 2

    def test_bad_depth(self):
        with pytest.raises(SystemExit) as exc:
            main(["render", "--depth", "99"])
        assert exc.value.code == 2


class TestCharpoly:
    def test_n5(self, capsys):
        code, doc = run_json(capsys, "charpoly", "charpoly", "--n", "5")
        assert code == 0
        assert doc["polynomials"] == ["x^6 - x^5 - x + 1", "x^6 - x - 1"]

    def test_matrix(self, capsys):
        _, doc = run_json(capsys, "charpoly", "charpoly", "--matrix", "1,1;0,1")
        assert doc["polynomials"] == ["x^2 - 2*x + 1"]

    def test_bad_matrix(self):
        with pytest.raises(SystemExit):
            main(["charpoly", "--matrix", "1,a;0,1"])


class TestClassify:
    def test_counterexample(self, capsys):
        code, doc = run_json(capsys, "classify", "classify", "--variant", "perms=1,2,0:2,1,0")
        assert code == 0
        assert doc["verdict"]["tag"] == "NonContractive"
        assert doc["verdict"]["certificate"]["kind"] == "C3"
        assert doc["reverified"] is True
        assert doc["shape"]["labels"] == ["0h", "1p"]

    def test_monkemeyer(self, capsys):
        _, doc = run_json(capsys, "classify", "classify", "--depth", "10")
        assert doc["verdict"]["tag"] == "Unknown"
        assert len(doc["verdict"]["diameter_profile"]) == 11

    def test_dimension_one(self, capsys):
        _, doc = run_json(capsys, "classify", "classify", "--n", "1", "--depth", "6")
        assert doc["shape"] is None

    def test_needs_pair(self):
        with pytest.raises(SystemExit) as exc:
            main(["classify", "--variant", "example5"])
        assert exc.value.code == 2


class TestDiameters:
    def test_profile(self, capsys, tmp_path):
        fig = tmp_path / "d.svg"
        code, doc = run_json(capsys, "diameters", "diameters", "--depth", "6", "--figure", str(fig))
        assert code == 0 and doc["non_increasing"]
        assert doc["diameter_profile"][0] == "2"
        assert "<svg" in fig.read_text()

    def test_cap(self):
        with pytest.raises(SystemExit) as exc:
            main(["diameters", "--depth", "40"])
        assert exc.value.code == 2


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "simplex_split", "count-orbits", "--n", "2"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(out.stdout)["count"] == 21


def test_help():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
