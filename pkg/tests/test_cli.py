import json
import subprocess
import sys

import pytest

from fmtoric.cli import main
from fmtoric.constructions.plm import fan_plm
from fmtoric.constructions.standard import p1, twisted_prism
from fmtoric.fan import Fan


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_json(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_example_d2n5(capsys):
    code, out, _ = run(capsys, "example", "d2n5")
    assert code == 0
    for label in ("H_{3,4} = ([0:1],[0:1])", "H_{3,5} = ([1:0],[1:0])", "H_{4,5} = ([1:1],[1:1])"):
        assert label in out
    assert 'G_A2: ["H_{3,4} = ([0:1],[0:1])","H_{3,5} = ([1:0],[1:0])"]' in out


def test_check_chain(capsys):
    code, out, _ = run(capsys, "check", "chain", "-d", "4", "-n", "13")
    assert code == 0
    assert "terminal_stage: [1,10]" in out


def test_budget_exit(capsys):
    code, _, err = run(capsys, "fan", "plm", "-d", "2", "-n", "9")
    assert code == 3
    assert "1639213" in err


def test_rays_only(capsys):
    code, out, _ = run(capsys, "--json", "fan", "plm", "-d", "2", "-n", "9", "--rays-only")
    assert code == 0
    assert len(json.loads(out)["rays"]) == 74


def test_max_cones_override(capsys):
    assert run(capsys, "fan", "plm", "-d", "2", "-n", "6", "--max-cones", "100")[0] == 3
    assert run(capsys, "fan", "plm", "-d", "2", "-n", "6", "--max-cones", "200")[0] == 0


def test_json_round_trip(capsys, tmp_path):
    code, out, err = run(capsys, "--json", "fan", "plm", "-d", "2", "-n", "5")
    assert code == 0
    assert "overall: PASS" in err
    obj = json.loads(out)
    assert {"command", "checks", "elapsed_ms", "fan"} <= obj.keys()
    assert Fan.from_json_obj(obj["fan"]).to_json_obj() == fan_plm(2, 5).to_json_obj()
    # the whole report is accepted back by fan verify
    path = write_json(tmp_path, "report.json", obj)
    assert run(capsys, "fan", "verify", path)[0] == 0


def test_out_file(capsys, tmp_path):
    path = tmp_path / "fan.json"
    assert run(capsys, "fan", "plm", "-d", "1", "-n", "5", "--out", str(path))[0] == 0
    assert json.loads(path.read_text()) == fan_plm(1, 5).to_json_obj()


def test_byte_identical_output(capsys):
    first = run(capsys, "--json", "--no-timing", "fan", "plm", "-d", "2", "-n", "6")
    second = run(capsys, "--json", "--no-timing", "fan", "plm", "-d", "2", "-n", "6")
    assert first == second
    assert json.loads(first[1])["elapsed_ms"] == 0


def test_verify_non_projective_fails(capsys, tmp_path):
    path = write_json(tmp_path, "prism.json", twisted_prism().to_json_obj())
    code, out, _ = run(capsys, "fan", "verify", path)
    assert code == 1
    assert "[FAIL] an ample divisor exists" in out


@pytest.mark.parametrize("content", ["{not json", json.dumps({"rank": 1, "rays": [[1]]})])
def test_verify_invalid_input(capsys, tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    assert run(capsys, "fan", "verify", str(path))[0] == 2


def test_missing_file(capsys):
    assert run(capsys, "fan", "verify", "/no/such/file.json")[0] == 2


def test_sqm_and_identify(capsys):
    assert run(capsys, "check", "sqm", "-m", "3", "-n", "2")[0] == 0
    assert run(capsys, "check", "identify", "-d", "3", "-n", "7")[0] == 0
    assert run(capsys, "check", "sqm", "-m", "1", "-n", "1")[0] == 2


def test_weights_gsets(capsys):
    code, out, _ = run(capsys, "--json", "weights", "gsets", "-d", "2", "-n", "5", "--weights", "1,1,1,1/2,1/2")
    assert code == 0
    assert [c["index_subset"] for c in json.loads(out)["centers"]] == [[3, 4], [3, 5]]


def test_weights_outside_domain(capsys):
    code, out, _ = run(capsys, "weights", "gsets", "-d", "2", "-n", "5", "--weights", "1,1,1,1/10,1")
    assert code == 1
    assert "[FAIL] weights lie in the P domain" in out


def test_weights_bad_list(capsys):
    assert run(capsys, "weights", "gsets", "-d", "2", "-n", "5", "--weights", "1,x")[0] == 2
    assert run(capsys, "weights", "gsets", "-d", "2", "-n", "5", "--weights", "1,1")[0] == 2


def test_lift(capsys, tmp_path):
    files = {
        "--target": write_json(tmp_path, "t.json", p1().to_json_obj()),
        "--proj": write_json(tmp_path, "m.json", {"domain_rank": 2, "codomain_rank": 1, "matrix": [[1, 0]]}),
        "--gamma": write_json(tmp_path, "g.json", [[1, 0], [-1, 0], [1, 1]]),
        "--gammak": write_json(tmp_path, "k.json", [[0, 1], [0, -1]]),
    }
    argv = ["--json", "lift"] + [x for kv in files.items() for x in kv]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert json.loads(out)["fan"]["max_cones"] == [[0, 1], [0, 2], [1, 3], [2, 4], [3, 4]]
    files["--gammak"] = write_json(tmp_path, "k2.json", [[0, 2], [0, -2]])
    argv = ["lift"] + [x for kv in files.items() for x in kv]
    assert run(capsys, *argv)[0] == 2


def test_argparse_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["fan", "plm", "-d", "two"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fmtoric", "check", "identify", "-d", "2", "-n", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "overall: PASS" in proc.stdout
