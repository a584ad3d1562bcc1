import json

import pytest

from src.cli import main
from src.core.instance import builtin_instance, dump_instance, instance_digest, parse_instance

PAIR_MINUS_ONE = """
rank: 2
name: bad-self-pairing
roots:
  - {E: [1, 0], ell: [-1, 0], label: r1}
"""

SHEAR_ACTION = """
rank: 2
name: shear
roots:
  - {E: [1, 0], ell: [-2, 0]}
cones:
  quadrant:
    facets: [[1, 0], [0, 1]]
actions:
  shear:
    generators: [[[1, 1], [0, 1]]]
    cone: quadrant
    labels: [u]
"""


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _json(capsys, *argv):
    code, out, err = _run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def _write(tmp_path, text, name="instance.yaml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestCommands:
    def test_validate_builtin(self, capsys):
        report = _json(capsys, "validate", "--builtin", "co2222")
        assert report["command"] == "validate"
        assert report["instance"] == "co2222"
        assert report["result"]["valid"] is True
        assert len(report["digest"]) == 64

    def test_validate_reports_violation(self, capsys, tmp_path):
        report = _json(capsys, "validate", "--file", _write(tmp_path, PAIR_MINUS_ONE))
        assert report["result"]["valid"] is False
        assert report["result"]["axiom"] == 1
        assert report["result"]["indices"] == [1]
        assert report["result"]["values"] == ["-1"]

    def test_coxeter(self, capsys):
        report = _json(capsys, "coxeter", "--builtin", "co2222")
        matrix = report["result"]["matrix"]
        assert matrix[0] == [1, "inf", "inf", "inf"]
        assert _json(capsys, "coxeter", "--builtin", "dynkin:G2")["result"]["matrix"] == [[1, 6], [6, 1]]

    def test_relations(self, capsys):
        report = _json(capsys, "relations", "--builtin", "dynkin:B2", "--power-bound", "20")
        assert report["result"]["passed"] is True
        assert report["result"]["checks"][0] == {"pair": [1, 2], "expected": 4, "order": 4, "passed": True}

    def test_growth(self, capsys):
        report = _json(capsys, "growth", "--builtin", "co2222", "--depth", "5")
        assert report["result"]["counts"] == [4, 12, 36, 108, 324]
        assert report["result"]["total"] == 485

    def test_orbit(self, capsys):
        report = _json(capsys, "orbit", "--builtin", "dynkin:A2", "--point", "-1,-1", "--depth", "6")
        assert report["result"]["size"] == 6
        assert report["result"]["points"][0] == "-1,-1"

    def test_dominant(self, capsys):
        report = _json(capsys, "dominant", "--builtin", "co2222", "--point", "-1,3,3,3")
        assert report["result"] == {"status": "dominant", "point": "1,1,1,1", "word": [1], "steps": 1}

    def test_dominant_undecided(self, capsys):
        report = _json(capsys, "dominant", "--builtin", "co2222", "--point", "-1,-1,-1,-1",
                       "--cap", "20", "--xi", "1,1,1,1")
        assert report["result"]["status"] == "undecided"
        assert report["result"]["steps"] == 20
        assert report["result"]["word"] is None

    def test_tile(self, capsys):
        report = _json(capsys, "tile", "--builtin", "dynkin:A2", "--depth", "4", "--samples", "40", "--seed", "3")
        result = report["result"]
        assert result["translate_count"] == 6
        assert result["overlap_count"] == 0
        assert result["covered"] == 40
        assert result["uncovered"] == []
        assert report["seed"] == 3

    def test_pixi_weyl(self, capsys):
        report = _json(capsys, "pixi", "--builtin", "co2222", "--xi", "1,1,1,1", "--depth", "2")
        result = report["result"]
        assert result["stabilized"] is True
        assert result["stabilizer_trivial"] is True
        assert result["dimension"] == 4
        assert sorted(result["rays"]) == ["0,0,0,1", "0,0,1,0", "0,1,0,0", "1,0,0,0"]
        assert result["polyhedral_check"] is None

    def test_pixi_weyl_covers_tits_region(self, capsys):
        report = _json(capsys, "pixi", "--builtin", "co2222", "--xi", "1,1,1,1", "--depth", "4",
                       "--samples", "200")
        check = report["result"]["polyhedral_check"]
        assert check["passed"] is True
        assert check["failures"] == []
        assert report["seed"] == 0

    def test_pixi_sample_depth(self, capsys):
        report = _json(capsys, "pixi", "--builtin", "co2222", "--xi", "1,2,2,3", "--depth", "3",
                       "--samples", "50", "--sample-depth", "2", "--seed", "5")
        assert report["result"]["polyhedral_check"]["passed"] is True

    def test_pixi_with_sampled_check(self, capsys):
        report = _json(capsys, "pixi", "--builtin", "dynkin:A2", "--xi", "1,1", "--depth", "3",
                       "--samples", "30", "--seed", "1")
        assert report["result"]["polyhedral_check"]["passed"] is True
        assert report["seed"] == 1

    def test_pixi_declared_action(self, capsys, tmp_path):
        report = _json(capsys, "pixi", "--file", _write(tmp_path, SHEAR_ACTION), "--action", "shear",
                       "--xi", "1,1", "--depth", "3")
        # xi o u^-1 - xi = -y cuts the quadrant down to the x-axis
        assert report["result"]["rays"] == ["1,0"]
        assert report["result"]["dimension"] == 1

    def test_builtin_list(self, capsys):
        report = _json(capsys, "builtin")
        names = [entry["name"] for entry in report["result"]["builtins"]]
        assert "co2222" in names
        assert report["digest"] is None
        sections = {entry["name"]: entry["section"] for entry in report["result"]["builtins"]}
        assert sections["co2222"] == "6.2"
        assert sections["dynkin:A2"] == "6.1"
        assert sections["affine:A1"] == "6.1"

    def test_seed_echoed_without_sampling(self, capsys):
        assert _json(capsys, "growth", "--builtin", "dynkin:A2", "--depth", "2")["seed"] == 0
        assert _json(capsys, "builtin")["seed"] == 0

    def test_negative_fractional_point(self, capsys):
        report = _json(capsys, "orbit", "--builtin", "dynkin:A2", "--point", "-1/2,-1/2", "--depth", "6")
        assert report["result"]["size"] == 6
        assert report["result"]["points"][0] == "-1/2,-1/2"


class TestOutput:
    def test_table_format(self, capsys):
        code, out, _ = _run(capsys, "growth", "--builtin", "dynkin:A2", "--depth", "3", "--format", "table")
        assert code == 0
        assert "counts" in out
        assert "2, 2, 1" in out

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = _run(capsys, "validate", "--builtin", "dynkin:A2", "--out", str(target))
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["result"]["valid"] is True

    def test_deterministic(self, capsys):
        argv = ["tile", "--builtin", "dynkin:B2", "--depth", "3", "--samples", "25", "--seed", "9"]
        _, first, _ = _run(capsys, *argv)
        _, second, _ = _run(capsys, *argv)
        assert first == second


class TestErrors:
    def test_wrong_vector_length(self, capsys, tmp_path):
        path = _write(tmp_path, "rank: 2\nroots:\n  - {E: [1, 0, 0], ell: [-2, 0]}\n")
        code, _, err = _run(capsys, "validate", "--file", path)
        assert code == 2
        assert "length 2" in err

    def test_bad_yaml(self, capsys, tmp_path):
        code, _, _ = _run(capsys, "validate", "--file", _write(tmp_path, "rank: [1\n"))
        assert code == 2

    def test_float_entries_rejected(self, capsys, tmp_path):
        path = _write(tmp_path, "rank: 1\nroots:\n  - {E: [1.0], ell: [-2]}\n")
        assert _run(capsys, "validate", "--file", path)[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert _run(capsys, "validate", "--file", str(tmp_path / "absent.yaml"))[0] == 2

    def test_needs_instance(self, capsys):
        assert _run(capsys, "validate")[0] == 2

    def test_unknown_builtin(self, capsys):
        code, _, err = _run(capsys, "validate", "--builtin", "nope")
        assert code == 3
        assert "nope" in err

    def test_invalid_system_for_coxeter(self, capsys, tmp_path):
        assert _run(capsys, "coxeter", "--file", _write(tmp_path, PAIR_MINUS_ONE))[0] == 3

    def test_unknown_cone(self, capsys):
        assert _run(capsys, "tile", "--builtin", "dynkin:A2", "--cone", "nowhere", "--depth", "1")[0] == 3

    def test_limit(self, capsys, monkeypatch):
        from backend.infra.config import Config
        monkeypatch.setattr(Config, "MAX_ELEMENTS", 50)
        assert _run(capsys, "growth", "--builtin", "co2222", "--depth", "6")[0] == 4


class TestInstances:
    def test_dump_is_normal_form(self):
        instance = builtin_instance("co2222")
        text = dump_instance(instance)
        assert dump_instance(parse_instance(text)) == text

    def test_digest_ignores_layout(self):
        a = parse_instance(PAIR_MINUS_ONE)
        b = parse_instance(json.dumps({"roots": [{"label": "r1", "ell": [-1, 0], "E": [1, 0]}],
                                       "name": "bad-self-pairing", "rank": 2}))
        assert instance_digest(a) == instance_digest(b)

    def test_builtin_digest_stable(self):
        assert instance_digest(builtin_instance("dynkin:A2")) == instance_digest(builtin_instance("dynkin:A2"))

    @pytest.mark.parametrize("name", ["co2222", "affine:A1", "folded:D4:3,2,4,1"])
    def test_builtins_convert(self, name):
        instance = builtin_instance(name)
        assert len(instance.roots) > 0
        assert all(len(root.E) == instance.rank for root in instance.roots)
