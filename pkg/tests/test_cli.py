"""CLI surface: parsing, output formats, exit codes."""

import json
from fractions import Fraction as F

import pytest

import walshnorlund.cli as cli
from walshnorlund.means import DualPathMismatch
from walshnorlund.stepfunc import StepFunction


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["kernel", "--type", "fejer", "--no-such-flag", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        cli.main(["nosuchcommand"])


def test_kernel_dump_csv(capsys):
    code, out, _ = run(capsys, "kernel", "--type", "dirichlet", "--n", "8",
                       "--resolution", "3", "--format", "csv")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "index,value"
    assert rows[1] == "0,8"
    assert all(r.endswith(",0") for r in rows[2:])


def test_kernel_norlund_with_rational_alpha(capsys):
    code, out, _ = run(capsys, "kernel", "--type", "norlund", "--weights", "cesaro",
                       "--alpha", "1/2", "--n", "2", "--resolution", "1",
                       "--format", "csv")
    assert code == 0
    assert out.strip().splitlines()[1:] == ["0,4/3", "1,2/3"]


def test_criterion_json_exact_sup(capsys):
    code, out, _ = run(capsys, "criterion", "--weights", "fejer", "--p", "1",
                       "--nmax", "30")
    assert code == 0
    doc = json.loads(out)
    assert doc["running_sup"] == "1073741823/536870912"  # 2 - 2^-29
    assert doc["verdict"] == "bounded-evidence"
    assert doc["provenance"]["config"]["command"] == "criterion"


def test_expect_pass_and_fail(capsys):
    code, *_ = run(capsys, "criterion", "--weights", "fejer", "--p", "1",
                   "--nmax", "20", "--expect", "pass")
    assert code == 0
    code, *_ = run(capsys, "criterion", "--weights", "fejer", "--p", "1",
                   "--nmax", "20", "--expect", "fail")
    assert code == 1
    # reporting-only default: a divergent verdict still exits 0
    code, *_ = run(capsys, "criterion", "--weights", "cesaro", "--alpha", "1/2",
                   "--p", "3/5", "--nmax", "40")
    assert code == 0
    code, *_ = run(capsys, "criterion", "--weights", "cesaro", "--alpha", "1/2",
                   "--p", "3/5", "--nmax", "40", "--expect", "pass")
    assert code == 1


def test_mean_and_norm_roundtrip(tmp_path, capsys):
    f = StepFunction.from_values([F(4), F(0), F(0), F(0)])
    path = tmp_path / "f.txt"
    f.save_text(path)
    code, out, _ = run(capsys, "mean", "--weights", "fejer", "--n", "3",
                       "--input", str(path), "--format", "csv")
    assert code == 0
    rows = dict(r.split(",") for r in out.strip().splitlines()[1:])
    assert rows["0"] == "2"  # sigma_3(D_4)(0) = (1+2+3)/3
    code, out, _ = run(capsys, "norm", "--kind", "hardy", "--p", "1",
                       "--input", str(path))
    assert code == 0
    assert json.loads(out)["value"] == "1"


def test_decompose_json(capsys):
    code, out, _ = run(capsys, "decompose", "--weights", "fejer", "--n", "13",
                       "--resolution", "5")
    assert code == 0
    doc = json.loads(out)
    assert doc["closed"] is True
    assert doc["l1_norms"]["whole"] == doc["l1_norms"]["whole"]


def test_experiment_json_and_output_file(tmp_path, capsys):
    out_path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "experiment", "fejer-norm-scan", "--nmax", "32",
                       "--output", str(out_path))
    assert code == 0 and out == ""
    doc = json.loads(out_path.read_text())
    assert doc["experiment"] == "fejer-norm-scan"
    assert doc["provenance"]["cli_config"]["command"] == "experiment"


def test_experiment_reruns_are_byte_identical(capsys):
    argv = ["experiment", "atom-quasilocality", "--weights", "fejer",
            "--levels", "2-3", "--atoms", "2", "--delta", "3", "--seed", "9"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_experiment_refusal_exits_2(capsys):
    code, _, err = run(capsys, "experiment", "atom-quasilocality", "--weights",
                       "logarithmic", "--levels", "2-3", "--atoms", "2")
    assert code == 2
    assert "error" in err


def test_list_catalog(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    for eid in cli.EXPERIMENTS:
        assert eid in out


def test_internal_breach_exits_3(capsys, monkeypatch):
    def boom(*a, **k):
        raise DualPathMismatch("forced")
    monkeypatch.setattr(cli, "norlund_mean", boom)
    f = StepFunction.constant(1, 2)
    import tempfile, os
    fd, path = tempfile.mkstemp()
    os.close(fd)
    f.save_text(path)
    code, _, err = run(capsys, "mean", "--weights", "fejer", "--n", "2",
                       "--input", path)
    os.unlink(path)
    assert code == 3
    assert "invariant" in err


def test_custom_weights_file(tmp_path, capsys):
    wf = tmp_path / "w.txt"
    wf.write_text("0 1\n1 1/2\n2 1/4\n3 1/8\n")
    code, out, _ = run(capsys, "kernel", "--type", "norlund", "--weights", "custom",
                       "--weights-file", str(wf), "--monotone", "--n", "2",
                       "--resolution", "1", "--format", "csv")
    assert code == 0
    assert out.strip().splitlines()[1:] == ["0,5/3", "1,1/3"]
