import hashlib
import json

import pytest

from mallowsim.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_no_command_is_usage_error(capsys):
    assert run(capsys, )[0] == 2


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_exact_json(capsys):
    code, out, _ = run(capsys, "exact", "--q", "2", "--n", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["total_mass"] == pytest.approx(1.0, abs=1e-12)
    assert len(payload["entries"]) == 6


def test_exact_expectation_stat(capsys):
    code, out, _ = run(capsys, "exact", "--q", "0.5", "--n", "5", "--stat", "C1")
    assert code == 0
    payload = json.loads(out)
    assert payload["expectation"] == pytest.approx(311.0 / 155.0, abs=1e-12)


def test_sample_csv(capsys):
    code, out, _ = run(
        capsys, "sample", "--q", "0.5", "--n", "6", "--reps", "3",
        "--seed", "1", "--format", "csv",
    )
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()]
    assert len(rows) == 3
    for row in rows:
        assert sorted(int(v) for v in row) == [1, 2, 3, 4, 5, 6]


def test_sample_missing_required_flag(capsys):
    code, _, err = run(capsys, "sample", "--n", "5")
    assert code == 2
    assert "--q" in err


def test_exact_over_cap_is_parameter_error(capsys):
    code, _, err = run(capsys, "exact", "--q", "0.5", "--n", "12")
    assert code == 2
    # the default cap is overridable
    code, out, _ = run(capsys, "exact", "--q", "0.5", "--n", "5",
                       "--stat", "C1", "--cap", "5")
    assert code == 0


def test_alpha1(capsys):
    code, out, _ = run(capsys, "alpha1", "--q", "0.5")
    assert code == 0
    payload = json.loads(out)
    assert payload["alpha1"] == pytest.approx(0.22064303609653285, abs=1e-12)


def test_decompose_explicit_perm(capsys):
    code, out, _ = run(capsys, "decompose", "--perm", "2,1,4,3")
    assert code == 0
    payload = json.loads(out)
    assert payload["additive"]["cut_points"] == [2, 4]


def test_stdout_reruns_are_byte_identical(capsys):
    args = ("constants", "--q", "0.5", "--count", "3000", "--seed", "9")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"q": 0.5, "n": 4, "seed": 3}))
    code, out, _ = run(capsys, "exact", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["n"] == 4
    # explicit flag wins over the file value
    code, out, _ = run(capsys, "exact", "--config", str(cfg), "--n", "3")
    assert json.loads(out)["n"] == 3


def test_config_key_value_format(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("q = 2.0\nn = 3  # small table\n")
    code, out, _ = run(capsys, "exact", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["q"] == 2.0


def test_config_unknown_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"q": 0.5, "n": 4, "bogus_knob": 7}))
    code, _, err = run(capsys, "exact", "--config", str(cfg))
    assert code == 2
    assert "bogus_knob" in err


def test_cap_exceeded_exits_3(capsys):
    code, _, err = run(
        capsys, "excursions", "--q", "0.95", "--count", "1000",
        "--seed", "0", "--max-steps", "20",
    )
    assert code == 3


def test_mu_check_pass_and_fail(capsys):
    base = ("mu-check", "--q", "0.5", "--steps", "150000", "--seed", "2")
    code, out, _ = run(capsys, *base)
    assert code == 0
    assert json.loads(out)["passed"] is True
    code, out, _ = run(capsys, *base, "--tv-threshold", "1e-9")
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_out_directory_manifest(tmp_path, capsys):
    outdir = tmp_path / "artifacts"
    args = (
        "excursions", "--q", "0.5", "--count", "100", "--seed", "4",
        "--format", "csv", "--out", str(outdir),
    )
    code, out, _ = run(capsys, *args)
    assert code == 0
    produced = (outdir / "excursions.csv").read_bytes()
    manifest = json.loads((outdir / "manifest.json").read_text())
    assert manifest["outputs"]["excursions.csv"] == hashlib.sha256(produced).hexdigest()
    assert manifest["command"] == "excursions"
    first_created = manifest["created_unix"]

    # rerun: artifact bytes identical, only the manifest timestamp moves
    code, out2, _ = run(capsys, *args)
    assert out2 == out
    assert (outdir / "excursions.csv").read_bytes() == produced
    manifest2 = json.loads((outdir / "manifest.json").read_text())
    assert manifest2["outputs"] == manifest["outputs"]
    assert manifest2["created_unix"] >= first_created
    assert manifest2["wall_seconds"] > 0


def test_manifest_records_default_seed(tmp_path, capsys):
    # seed omitted on the command line still lands in the manifest echo
    outdir = tmp_path / "arts"
    code, _, _ = run(
        capsys, "sample", "--q", "0.5", "--n", "6", "--out", str(outdir),
    )
    assert code == 0
    manifest = json.loads((outdir / "manifest.json").read_text())
    assert manifest["options"]["seed"] == 0


def test_scaling_csv_exit_zero(capsys):
    code, out, _ = run(
        capsys, "scaling", "--q", "0.5", "--sizes", "50,100,200",
        "--reps", "600", "--stat", "C1", "--seed", "5", "--format", "csv",
    )
    assert code == 0
    header = out.splitlines()[0].split(",")
    assert header[:3] == ["n", "reps", "mean"]


def test_clt_underpowered_run_exits_1(capsys):
    # reps below the validity floor can never claim a pass
    code, out, _ = run(
        capsys, "clt", "--q", "0.5", "--n", "50", "--reps", "500", "--seed", "6",
    )
    assert code == 1
    assert json.loads(out)["reports"]["C"]["valid"] is False
