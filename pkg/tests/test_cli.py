import csv
import io
import json
import math

import pytest

from prescribed_zeros.cli import EXIT_COMPUTATION, EXIT_OK, EXIT_REFUSAL, main
from prescribed_zeros.report import RunConfig
from prescribed_zeros.sequences import PointSequence, write_sequence


@pytest.fixture
def seq_file(tmp_path):
    def make(points):
        path = tmp_path / "seq.json"
        write_sequence(PointSequence(points), path)
        return str(path)

    return make


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def values(doc, name):
    return [r["value"] for r in doc["records"] if r["name"] == name]


def test_sequence_statistics(capsys, seq_file):
    code, doc = run_json(capsys, ["sequence", "--sequence", seq_file([0.0, 0.5])])
    assert code == EXIT_OK
    assert values(doc, "separation") == [pytest.approx(0.5)]
    assert values(doc, "blaschke_sum") == [pytest.approx(1.5)]
    assert all(len(r["config_hash"]) == 16 for r in doc["records"])


def test_sequence_csv_output(capsys, seq_file):
    assert main(["sequence", "--sequence", seq_file([0.2, -0.3j]), "--format", "csv"]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows[0]["command"] == "sequence"
    assert {"name", "value", "source"} <= set(rows[0])


def test_build_origin_passes(capsys, seq_file, tmp_path):
    out = tmp_path / "out"
    code = main(["build", "--sequence", seq_file([0.0]), "--out", str(out), "--p", "0.5", "--p", "1"])
    assert code == EXIT_OK
    doc = json.loads((out / "build.json").read_text())
    assert doc["ok"] is True
    assert values(doc, "verify_passed") == [True]
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["zeros"] == [[0.0, 0.0]]
    assert len(values(doc, "carleson_constant")) == 2


def test_normal_from_manifest(capsys, seq_file, tmp_path):
    out = tmp_path / "out"
    assert main(["build", "--sequence", seq_file([0.5, -0.5, 0.3j]), "--out", str(out)]) == EXIT_OK
    code, doc = run_json(capsys, ["normal", "--manifest", str(out / "manifest.json"), "--grid-radial", "4",
                                  "--grid-angular", "16"])
    assert code == EXIT_OK
    assert values(doc, "schwarzian_identity_error")[0] < 1e-6
    assert len(values(doc, "value_at_zero")) == 3
    assert math.isfinite(values(doc, "sup_sampled")[0])


def test_corollary_guard_refuses(capsys):
    # 2 pi / (b log a) = 2 pi / log 2 > 1
    assert main(["corollary1", "--lattice", "2,1"]) == EXIT_REFUSAL
    assert "not below 1" in capsys.readouterr().err


def test_build_refuses_poorly_separated(capsys, seq_file):
    path = seq_file([0.5, 0.5001])
    assert main(["build", "--sequence", path]) == EXIT_REFUSAL
    assert "--force" in capsys.readouterr().err


@pytest.mark.parametrize("text", ["", "{", '{"points": [{"re": 2, "im": 0}]}'])
def test_malformed_sequence_files_refused(capsys, tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    assert main(["sequence", "--sequence", str(path)]) == EXIT_REFUSAL
    assert "refused" in capsys.readouterr().err


def test_invalid_configuration(capsys, seq_file):
    assert main(["sequence", "--sequence", seq_file([0.1]), "--rmax", "1.5"]) == EXIT_REFUSAL
    with pytest.raises(SystemExit):
        main(["nonsense"])


def test_config_digest_depends_on_options():
    a = RunConfig("build", sequence_file="x.json")
    b = RunConfig("build", sequence_file="x.json", seed=1)
    assert a.digest() == RunConfig("build", sequence_file="x.json").digest()
    assert a.digest() != b.digest()


def test_failed_verification_exits_with_computation_code(capsys, seq_file):
    # the kernel-basis coefficient for {1 - 2^-n} has grid growth norm near 1e4,
    # and the contour count cannot be resolved; the run still completes, records
    # the failure and exits with code 1
    code, doc = run_json(capsys, ["build", "--sequence", seq_file(PointSequence.exponential(3).points),
                                  "--verify-radius", "0.9"])
    assert code == EXIT_COMPUTATION
    assert doc["ok"] is False
    assert any("argument principle" in m for m in values(doc, "verify_message"))


def test_sequence_reports_beta_and_carleson_ratio(capsys, seq_file):
    code, doc = run_json(capsys, ["sequence", "--sequence", seq_file([0.5]), "--p", "1"])
    assert code == EXIT_OK
    assert values(doc, "point_carleson_invariant") == [pytest.approx(2 / 3)]
    assert values(doc, "point_carleson_box_over_invariant")[0] > 0
    up = [r for r in doc["records"] if r["name"] == "density_upper"][-1]["value"]
    assert values(doc, "beta") == [pytest.approx((up + 1) / 2)]
