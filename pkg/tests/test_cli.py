"""Command-line surface: payloads, schemas, exit codes, determinism.

Every JSON payload the tool can emit is validated against the schema files
shipped in the package, and the deterministic-output promise is checked by
comparing repeated runs byte for byte.
"""

import json
import math
from importlib import resources

import jsonschema
import pytest

from specdet.cli import main
from specdet.gy import pulse_det_closed_form
from specdet.potential import (Constant, ExtremalLq, PiecewiseConstant,
                               Pulse, Sampled, Zero, serialize_potential)
from specdet.verify import CheckResult


def _schema(name):
    path = resources.files("specdet") / "schemas" / f"{name}.schema.json"
    return json.loads(path.read_text())


def _run(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def _write_potential(tmp_path, V, name="potential.json"):
    path = tmp_path / name
    path.write_text(serialize_potential(V))
    return str(path)


class TestDet:
    def test_json_payload(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Pulse(0.25, 0.75, 6.0))
        rc, out, _ = _run(capsys, ["det", "--potential", path])
        assert rc == 0
        payload = json.loads(out)
        jsonschema.validate(payload, _schema("det"))
        exact = pulse_det_closed_form(0.25, 0.75, 6.0)
        assert abs(payload["det"] - exact) <= 1e-12 * exact
        assert payload["method"] == "exact-piecewise"

    def test_repeated_runs_identical(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Constant(2.5))
        _, first, _ = _run(capsys, ["det", "--potential", path])
        _, second, _ = _run(capsys, ["det", "--potential", path])
        assert first == second

    def test_csv_round_trip(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Constant(2.5))
        rc, out_json, _ = _run(capsys, ["det", "--potential", path])
        payload = json.loads(out_json)
        rc, out_csv, _ = _run(capsys, ["det", "--potential", path,
                                       "--format", "csv"])
        assert rc == 0
        rows = dict(line.split(",", 1) for line in out_csv.splitlines())
        assert sorted(rows) == sorted(payload)
        for key in ("y1", "det", "est_error", "min_y"):
            assert float(rows[key]) == payload[key]

    def test_out_samples(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Pulse(0.25, 0.75, 6.0))
        out_file = tmp_path / "samples.csv"
        rc, _, _ = _run(capsys, ["det", "--potential", path,
                                 "--out", str(out_file)])
        assert rc == 0
        lines = out_file.read_text().splitlines()
        assert lines[0] == "t,v"
        assert len(lines) == 1026
        t_mid, v_mid = map(float, lines[513].split(","))
        assert t_mid == 0.5 and v_mid == 6.0

    def test_missing_file(self, capsys, tmp_path):
        rc, _, err = _run(capsys, ["det", "--potential",
                                   str(tmp_path / "nope.json")])
        assert rc == 2
        assert err.startswith("error:")

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        rc, _, err = _run(capsys, ["det", "--potential", str(path)])
        assert rc == 2
        assert err.startswith("error:")

    def test_unknown_variant(self, capsys, tmp_path):
        path = tmp_path / "odd.json"
        path.write_text('{"type":"mystery"}')
        rc, _, _ = _run(capsys, ["det", "--potential", str(path)])
        assert rc == 2

    def test_overflow_is_range_error(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Constant(800.0))
        rc, _, err = _run(capsys, ["det", "--potential", path])
        assert rc == 3
        assert err.startswith("error:")


class TestOptimize:
    def test_closed_form_q1(self, capsys):
        rc, out, _ = _run(capsys, ["optimize", "--q", "1", "--A", "3"])
        assert rc == 0
        payload = json.loads(out)
        jsonschema.validate(payload, _schema("optimize"))
        exact = (4.0 / 3.0) * math.exp(1.0)
        assert abs(payload["det"] - exact) <= 1e-12 * exact
        assert payload["s"] == 0.5

    def test_q2_cross_check(self, capsys):
        rc, out, _ = _run(capsys, ["optimize", "--q", "2", "--A", "1",
                                   "--verify-cross"])
        assert rc == 0
        payload = json.loads(out)
        jsonschema.validate(payload, _schema("optimize"))
        assert payload["cross_h_gap"] <= 1e-9
        assert payload["cross_v_gap"] <= 1e-8
        assert abs(payload["endpoint_slope"] - 1.0) <= 0.05

    def test_shooting_q3(self, capsys, tmp_path):
        out_file = tmp_path / "profile.csv"
        rc, out, _ = _run(capsys, ["optimize", "--q", "3", "--A", "1",
                                   "--out", str(out_file)])
        assert rc == 0
        payload = json.loads(out)
        jsonschema.validate(payload, _schema("optimize"))
        assert abs(payload["miss"]) <= 1e-9
        assert payload["norm_residual"] <= 1e-6
        lines = out_file.read_text().splitlines()
        assert lines[0] == "t,v"
        assert len(lines) == 4098

    def test_rejects_bad_domain(self, capsys):
        rc, _, _ = _run(capsys, ["optimize", "--q", "0.5", "--A", "1"])
        assert rc == 2
        rc, _, _ = _run(capsys, ["optimize", "--q", "2", "--A", "-1"])
        assert rc == 2


class TestSpectrum:
    def test_json_payload(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Pulse(0.25, 0.75, 6.0))
        rc, out, _ = _run(capsys, ["spectrum", "--potential", path,
                                   "--n", "12"])
        assert rc == 0
        payload = json.loads(out)
        jsonschema.validate(payload, _schema("spectrum"))
        lams = payload["lambdas"]
        assert len(lams) == 12
        assert all(a < b for a, b in zip(lams, lams[1:]))
        exact = pulse_det_closed_form(0.25, 0.75, 6.0)
        assert abs(payload["product_corrected"] - exact) <= 0.02 * exact

    def test_negative_well_reports_product_error(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Constant(-30.0, signed=True))
        rc, out, _ = _run(capsys, ["spectrum", "--potential", path,
                                   "--n", "5"])
        assert rc == 0
        payload = json.loads(out)
        jsonschema.validate(payload, _schema("spectrum"))
        assert payload["product_corrected"] is None
        assert "product_error" in payload
        assert payload["lambdas"][0] < 0.0

    def test_csv_table(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Constant(1.0))
        rc, out, _ = _run(capsys, ["spectrum", "--potential", path,
                                   "--n", "4", "--format", "csv"])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "n,lambda,est_error"
        assert len(lines) == 7
        assert lines[5].startswith("# product_raw=")
        first = lines[1].split(",")
        assert first[0] == "1"
        assert abs(float(first[1]) - (math.pi ** 2 + 1.0)) < 1e-6

    def test_out_table(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Constant(1.0))
        out_file = tmp_path / "spec.csv"
        rc, _, _ = _run(capsys, ["spectrum", "--potential", path,
                                 "--n", "3", "--out", str(out_file)])
        assert rc == 0
        lines = out_file.read_text().splitlines()
        assert lines[0] == "n,lambda,est_error"
        assert len(lines) == 4

    def test_fd_matrix_route(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Pulse(0.25, 0.75, 6.0))
        rc, out, _ = _run(capsys, ["spectrum", "--potential", path,
                                   "--n", "5", "--method", "fd-matrix",
                                   "--mesh", "512"])
        assert rc == 0
        fd = json.loads(out)
        jsonschema.validate(fd, _schema("spectrum"))
        assert fd["method"] == "fd-matrix"
        rc, out, _ = _run(capsys, ["spectrum", "--potential", path,
                                   "--n", "5"])
        shoot = json.loads(out)
        for a, b in zip(fd["lambdas"], shoot["lambdas"]):
            assert abs(a - b) <= 1e-3 * abs(b)

    def test_rejects_bad_counts(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Constant(1.0))
        rc, _, _ = _run(capsys, ["spectrum", "--potential", path,
                                 "--n", "0"])
        assert rc == 2
        rc, _, _ = _run(capsys, ["spectrum", "--potential", path,
                                 "--mesh", "32"])
        assert rc == 2

    def test_unknown_method_is_usage_error(self, capsys, tmp_path):
        path = _write_potential(tmp_path, Constant(1.0))
        with pytest.raises(SystemExit) as info:
            main(["spectrum", "--potential", path, "--method", "bogus"])
        assert info.value.code == 2


class TestSweep:
    def test_rows_ordered_and_deterministic(self, capsys, monkeypatch):
        argv = ["sweep", "--A", "1", "--q-list", "2,1,1.5",
                "--format", "csv"]
        monkeypatch.setenv("SPECDET_THREADS", "1")
        rc, serial, _ = _run(capsys, argv)
        assert rc == 0
        monkeypatch.setenv("SPECDET_THREADS", "3")
        rc, threaded, _ = _run(capsys, argv)
        assert serial == threaded
        lines = serial.splitlines()
        assert lines[0] == "q,det,H,norm_residual"
        qs = [float(line.split(",")[0]) for line in lines[1:]]
        assert qs == [1.0, 1.5, 2.0]
        dets = [float(line.split(",")[1]) for line in lines[1:]]
        assert dets[0] > dets[1] > dets[2]
        assert lines[1].split(",")[2] == ""

    def test_json_payload(self, capsys):
        rc, out, _ = _run(capsys, ["sweep", "--A", "0.5",
                                   "--q-list", "1,3"])
        assert rc == 0
        payload = json.loads(out)
        jsonschema.validate(payload, _schema("sweep"))
        assert payload["rows"][0]["H"] is None
        assert payload["rows"][1]["H"] is not None

    def test_rejects_bad_lists(self, capsys):
        rc, _, _ = _run(capsys, ["sweep", "--A", "1", "--q-list", "1,abc"])
        assert rc == 2
        rc, _, _ = _run(capsys, ["sweep", "--A", "1", "--q-list", ","])
        assert rc == 2
        rc, _, _ = _run(capsys, ["sweep", "--A", "1", "--q-list", "0.5,2"])
        assert rc == 2
        rc, _, _ = _run(capsys, ["sweep", "--A", "0", "--q-list", "2"])
        assert rc == 2


class TestVerify:
    def test_text_lines_and_exit_zero(self, capsys, monkeypatch):
        fake = [CheckResult("alpha", True, "fine"),
                CheckResult("beta", True, "also fine")]
        monkeypatch.setattr("specdet.verify.run_checks",
                            lambda names=None: fake)
        rc, out, _ = _run(capsys, ["verify"])
        assert rc == 0
        assert out.splitlines() == ["PASS alpha: fine",
                                    "PASS beta: also fine"]

    def test_failure_sets_exit_one(self, capsys, monkeypatch):
        fake = [CheckResult("alpha", True, "fine"),
                CheckResult("beta", False, "broken")]
        monkeypatch.setattr("specdet.verify.run_checks",
                            lambda names=None: fake)
        rc, out, _ = _run(capsys, ["verify"])
        assert rc == 1
        assert "FAIL beta: broken" in out.splitlines()

    def test_json_schema(self, capsys, monkeypatch):
        fake = [CheckResult("alpha", False, "broken")]
        monkeypatch.setattr("specdet.verify.run_checks",
                            lambda names=None: fake)
        rc, out, _ = _run(capsys, ["verify", "--format", "json"])
        assert rc == 1
        payload = json.loads(out)
        jsonschema.validate(payload, _schema("verify"))
        assert payload["passed"] is False

    def test_real_subset_runs(self, capsys):
        rc, out, _ = _run(capsys, ["verify", "--only", "gy-exactness",
                                   "--format", "json"])
        assert rc == 0
        payload = json.loads(out)
        jsonschema.validate(payload, _schema("verify"))
        assert payload["checks"][0]["name"] == "gy-exactness"

    def test_unknown_name_is_input_error(self, capsys):
        rc, _, err = _run(capsys, ["verify", "--only", "no-such-check"])
        assert rc == 2
        assert err.startswith("error:")


class TestPotentialSchema:
    def test_serialized_variants_validate(self):
        schema = _schema("potential")
        variants = (
            Zero(),
            Constant(2.0),
            Constant(-3.0, signed=True),
            Pulse(0.2, 0.6, 4.0),
            PiecewiseConstant((0.3, 0.7), (1.0, -2.0, 0.5), signed=True),
            Sampled((0.0, 1.0, 0.5), interp="linear"),
            ExtremalLq(q=2.0, A=1.0, H=10.0, psi=(0.0, 0.5, 0.0)),
        )
        for V in variants:
            jsonschema.validate(json.loads(serialize_potential(V)), schema)

    def test_incomplete_object_rejected(self):
        schema = _schema("potential")
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate({"type": "pulse", "x1": 0.2}, schema)
