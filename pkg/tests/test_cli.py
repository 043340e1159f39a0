import pytest
from click.testing import CliRunner

from opbar import fixtures as fx
from opbar.blob import standard_models
from opbar.chain import ChainComplex
from opbar.cli import main


def run(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env)


def machine(result) -> dict:
    return dict(line.split("=", 1) for line in result.output.splitlines() if "=" in line)


def test_validate_point():
    r = run("validate", "point")
    assert r.exit_code == 0
    assert "[PASS] axioms" in r.output and "status: pass" in r.output


def test_validate_mutated_file_names_witness(tmp_path):
    path = tmp_path / "bad.json"
    fx.save(fx.a2().with_comp((2, 0), 1), path)
    r = run("validate", str(path), "--format", "machine")
    assert r.exit_code == 1
    out = machine(r)
    assert out["status"] == "fail"
    assert any(k.startswith("witness.") and "right-identity" in v for k, v in out.items())


def test_validate_with_mutations():
    r = run("validate", "O_M2", "--mutations", "5", "--format", "machine")
    assert r.exit_code == 0, r.output


def test_usage_errors():
    assert run("construct", "nonsense", "point").exit_code == 2
    assert run("validate", "no-such-fixture").exit_code == 2
    assert run("bar", "point", "--format", "xml").exit_code == 2


def test_classical_bar_is_acyclic():
    out = machine(run("bar", "Lambda-module", "--depth", "3", "--format", "machine"))
    assert out["dims"] == "2,4,8,16"
    assert [out[f"h{k}"] for k in ("-1", "0", "1", "2")] == ["0"] * 4
    assert out["status"] == "pass"


def test_bar_of_blob_model_gives_skein():
    r = run("bar", "loop-x2-N3", "--format", "machine")
    out = machine(r)
    assert r.exit_code == 0
    assert out["h-1"] == out["skein"] == "0"


def test_depth_zero():
    out = machine(run("bar", "Lambda-module", "--depth", "0", "--format", "machine"))
    assert out["dims"] == "2" and out["status"] == "pass"


@pytest.mark.parametrize("cmd", ["blob", "compare"])
def test_blob_and_compare(cmd):
    r = run(cmd, "loop-x2-N3" if cmd == "blob" else "loop-x2-N2", "--format", "machine")
    assert r.exit_code == 0, r.output
    assert machine(r)["status"] == "pass"


def test_oversize_depth_is_refused():
    r = run("bar", "Lambda-module", "--depth", "20", "--format", "machine")
    assert r.exit_code == 3
    out = machine(r)
    assert out["status"] == "refused"
    assert any("estimate" in k for k in out)


def test_construct_writes_loadable_fixture(tmp_path):
    path = tmp_path / "d.json"
    r = run("construct", "decollage", "A2", "-o", str(path))
    assert r.exit_code == 0, r.output
    assert fx.validate(fx.load(path)).ok


def test_machine_output_is_deterministic():
    args = ("compare", "loop-x2-N2", "--format", "machine")
    a = run(*args, env={"OPBAR_WORKERS": "1"}).output
    b = run(*args, env={"OPBAR_WORKERS": "4"}).output
    assert a == b == run(*args).output


def test_bar_export_file(tmp_path):
    path = tmp_path / "cx.txt"
    r = run("bar", "Lambda-module", "--depth", "2", "--export", str(path))
    assert r.exit_code == 0
    cx = ChainComplex.from_text(path.read_text())
    assert cx.dims == [2, 4, 8] and cx.check_d2().ok and cx.betti() == {-1: 0, 0: 0, 1: 0}


def test_blob_accepts_model_file(tmp_path):
    path = tmp_path / "model.json"
    fx.save(standard_models()["two-vertex-fe-N2"], path)
    r = run("blob", str(path), "--format", "machine")
    assert r.exit_code == 0, r.output
    assert machine(r)["skein"] == "0"
