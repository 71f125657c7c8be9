import json
import subprocess
import sys
from pathlib import Path

import pytest

from premetrics import io
from premetrics.cli import main
from premetrics.instances import CHAIN3, counterexample_space, sierpinski, suite_spaces
from premetrics.omega import OmegaLattice, normalize
from premetrics.space import flagg, generate_topology

DATA = Path(__file__).resolve().parent.parent / "data"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


# -- formats ----------------------------------------------------------------


def test_space_json_round_trip():
    for S in suite_spaces() + [counterexample_space(), flagg(sierpinski())]:
        obj = io.space_to_json(S)
        assert io.space_from_json(json.loads(io.dumps(obj))) == S
        assert io.dumps(io.space_to_json(io.space_from_json(obj))) == io.dumps(obj)


def test_diagonal_is_optional_and_rejected_if_wrong():
    obj = {"points": ["a", "b"], "lattice": CHAIN3.to_json(), "d": [["a", "b", "m"], ["b", "a", "0"]]}
    S = io.space_from_json(obj)
    assert S.d["a", "a"] == "0"
    obj["d"].append(["a", "a", "1"])
    with pytest.raises(Exception):
        io.space_from_json(obj)


def test_omega_values_are_canonical():
    L = OmegaLattice(["u", "v", "w"])
    p = normalize(L.ground, [["w"], ["v", "u"], ["u"]])
    assert L.value_to_json(p) == [["u", "v"], ["w"]]


def test_input_errors_name_the_field():
    with pytest.raises(io.InputError) as info:
        io.space_from_json({"points": ["a"], "lattice": {"kind": "finite", "elements": ["0"], "leq": []}, "d": [["a"]]})
    assert info.value.field == "space.d[0]"
    with pytest.raises(io.InputError) as info:
        io.space_from_json({"points": ["a"]})
    assert info.value.field == "space.lattice"


def test_dot_output():
    dot = io.topology_to_dot(sierpinski())
    assert dot.startswith("digraph") and '"y" -> "x"' in dot
    assert '"0" -> "m"' in io.lattice_to_dot(CHAIN3)


# -- commands ---------------------------------------------------------------


def test_space_topology_counterexample(capsys):
    code, out, _ = run(["space", "topology", DATA / "counterexample.json"], capsys)
    assert code == 0
    T = io.topology_from_json(json.loads(out))
    assert T.interior(["a", "b", "d"]) == {"d"}


def test_enum_count(capsys):
    code, out, _ = run(["enum", "topologies", "-n", "3", "--count"], capsys)
    assert code == 0 and json.loads(out) == 29
    code, out, _ = run(["enum", "topologies", "-n", "2"], capsys)
    assert len(json.loads(out)) == 4


def test_verify_round_trip(capsys):
    code, out, _ = run(["verify", "round-trip", "-n", "1"], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_lattice_check_exit_codes(capsys):
    code, out, _ = run(["lattice", "check", DATA / "chain3.json"], capsys)
    assert code == 0 and json.loads(out)["value_distributive"]
    code, out, _ = run(["lattice", "check", DATA / "square.json"], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["witness"]["pair"] == ["(0,1)", "(1,0)"]
    code, out, _ = run(["lattice", "check", DATA / "chain3.json", "--format", "dot"], capsys)
    assert out.startswith("digraph lattice")


def test_flagg_and_premetrize(capsys):
    code, out, _ = run(["space", "flagg", DATA / "sierpinski.json"], capsys)
    assert code == 0
    assert generate_topology(io.space_from_json(json.loads(out))) == sierpinski()
    code, out, _ = run(["space", "premetrize", DATA / "sierpinski.json"], capsys)
    assert generate_topology(io.space_from_json(json.loads(out))) == sierpinski()


def test_limits_and_colimits(capsys, tmp_path):
    code, out, _ = run(["limit", "product", DATA / "two_point.json", DATA / "two_point_chain3.json"], capsys)
    assert code == 0 and len(json.loads(out)["points"]) == 4
    code, out, _ = run(["limit", "equalise", DATA / "f.json", DATA / "g.json"], capsys)
    assert code == 0 and json.loads(out)["points"] == ["a", "b"]
    code, out, _ = run(["limit", "initial", DATA / "cone.json"], capsys)
    assert code == 0 and json.loads(out)["lattice"]["kind"] == "omega"
    code, out, _ = run(["colimit", "coproduct", DATA / "two_point.json", DATA / "two_point.json"], capsys)
    assert code == 0 and json.loads(out)["points"] == ["0:p", "0:q", "1:p", "1:q"]
    code, out, _ = run(["colimit", "coequalise", DATA / "counterexample.json", DATA / "relation_abc.json"], capsys)
    assert code == 0 and json.loads(out)["points"] == ["{a,b,c}", "{d}"]
    target = tmp_path / "final.json"
    code, out, _ = run(["colimit", "final", DATA / "cocone.json", "-o", target], capsys)
    assert code == 0 and out == ""
    S = io.space_from_json(json.loads(target.read_text()))
    assert S.points == ("x", "y", "z")


@pytest.mark.parametrize("kind,name", [
    ("limit", "product_instance.json"),
    ("limit", "equaliser_instance.json"),
    ("colimit", "coproduct_instance.json"),
    ("colimit", "coequaliser_instance.json"),
])
def test_verify_instances(capsys, kind, name):
    code, out, _ = run(["verify", kind, DATA / name], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_verify_adjunction_and_gap(capsys):
    code, out, _ = run(["verify", "adjunction", DATA / "sierpinski.json"], capsys)
    assert code == 0
    code, out, _ = run(["verify", "gap", DATA / "two_point.json", DATA / "counterexample.json"], capsys)
    assert code == 0 and "gaps" in json.loads(out)["details"]


def test_map_check(capsys, tmp_path):
    code, out, _ = run(["map", "check", DATA / "map_pa_qc.json"], capsys)
    assert code == 0 and json.loads(out)["eps_delta_continuous"]
    C = counterexample_space()
    bad = {"source": io.space_to_json(C), "target": io.space_to_json(C), "assignment": {"a": "a", "b": "c", "c": "c", "d": "d"}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run(["map", "check", path], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["witness"]["point"] == "a"


def test_input_errors_exit_2(capsys, tmp_path):
    code, _, err = run(["space", "topology", tmp_path / "missing.json"], capsys)
    assert code == 2 and json.loads(err)["file"].endswith("missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text('{"points": ["a", "b"], "lattice": {"kind": "finite", "elements": ["0","1"], "leq": [["0","1"]]}, "d": [["a","b","1"]]}')
    code, _, err = run(["space", "topology", broken], capsys)
    diag = json.loads(err)
    assert code == 2 and diag["file"] == str(broken) and diag["error"]
    bad_kind = tmp_path / "kind.json"
    bad_kind.write_text('{"kind": "pushout"}')
    code, _, err = run(["verify", "limit", bad_kind], capsys)
    assert code == 2 and json.loads(err)["field"] == "kind"
    notjson = tmp_path / "x.json"
    notjson.write_text("{")
    code, _, err = run(["space", "flagg", notjson], capsys)
    assert code == 2


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as info:
        main(["enum", "topologies", "-n", "2", "--bogus"])
    assert info.value.code == 2


def test_byte_identical_output(tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"o{k}.json"
        main(["colimit", "coequalise", str(DATA / "counterexample.json"), str(DATA / "relation_abc.json"), "-o", str(target)])
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "premetrics", "enum", "topologies", "-n", "3", "--count"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "29"
