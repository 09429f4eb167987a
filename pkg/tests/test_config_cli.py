from pathlib import Path

import numpy as np
import pytest

from blidext.cli import main
from blidext.config import (
    ConfigError,
    ValueSpec,
    build_operator,
    emit_config,
    parse_config,
    reduce_to_1d,
    scenario_is_1d,
)

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

SMALL_BAND = """
space = c01
n = 21
mode = literal
safety = 0.5
target = point_eval
t0 = 0.5
seed = 42
samples = 200

[segment]
kind = band
phi = const:-1
psi = const:1
z = const:0
delta = 0.5

[path]
from = const:0
to = const:3
points = 101
"""


class TestValueSpec:
    def test_forms(self):
        assert ValueSpec.parse("const:-1").form == "const"
        assert ValueSpec.parse("affine:1,-1.5").params == (1.0, -1.5)
        assert ValueSpec.parse("samples:1,2,3").params == (1.0, 2.0, 3.0)
        assert ValueSpec.parse("inf").infinite
        assert ValueSpec.parse("-inf").infinite
        assert ValueSpec.parse("0.5,-0.5").form == "coords"

    def test_bad_value_has_line_number(self):
        with pytest.raises(ConfigError, match="line 7"):
            ValueSpec.parse("const:xyz", line_no=7)


class TestParse:
    def test_round_trip_small(self):
        sc = parse_config(SMALL_BAND)
        assert parse_config(emit_config(sc)) == sc

    @pytest.mark.parametrize("name", sorted(p.name for p in SCENARIOS.glob("*.cfg")))
    def test_round_trip_shipped(self, name):
        sc = parse_config((SCENARIOS / name).read_text())
        assert parse_config(emit_config(sc)) == sc

    def test_parse_errors(self):
        with pytest.raises(ConfigError, match="space"):
            parse_config("target = point_eval\n[segment]\nkind = band\n"
                         "phi = const:0\npsi = const:1\n")
        with pytest.raises(ConfigError, match="segment"):
            parse_config("space = c01\nn = 5\ntarget = point_eval\n")
        with pytest.raises(ConfigError, match="key = value"):
            parse_config("space = c01\nn = 5\nnonsense line\n")
        with pytest.raises(ConfigError, match="theta"):
            parse_config("space = c01\nn = 5\nmode = clamp\ntarget = point_eval\n"
                         "[segment]\nkind = band\nphi = const:-1\npsi = const:1\n")

    def test_mask_parsing(self):
        sc = parse_config(
            "space = c01\nn = 11\ntarget = point_eval\n"
            "[segment]\nkind = half\nmask = 0-3,7,9-10\nanchor = const:-1\n"
        )
        assert sc.segments[0].mask == (0, 1, 2, 3, 7, 9, 10)

    def test_one_d_detection(self):
        sc = parse_config(SMALL_BAND)
        assert scenario_is_1d(sc)
        assert reduce_to_1d(sc).space == ("c01", 1)
        affine = (SCENARIOS / "band_affine.cfg").read_text()
        assert not scenario_is_1d(parse_config(affine))


class TestBuild:
    def test_theta_above_margin_names_margin(self):
        text = SMALL_BAND.replace("mode = literal\nsafety = 0.5",
                                  "mode = clamp\ntheta = 1.5")
        with pytest.raises(ValueError, match="margin"):
            build_operator(parse_config(text))

    def test_hilbert_dimension_mismatch(self):
        with pytest.raises(ConfigError, match="dimension"):
            build_operator(parse_config(
                "space = hilbert\nn = 3\ntarget = quad_norm\n"
                "[segment]\nkind = ball\ncenter = 0,0\nradius = 1\n"
            ))


def write(tmp_path, text, name="scenario.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestCli:
    def test_validate_exit_codes(self, tmp_path):
        out = str(tmp_path / "out")
        ok = main(["validate", "--config", str(SCENARIOS / "band_two_sin.cfg"), "--out", out])
        overlap = main(["validate", "--config", str(SCENARIOS / "bands_overlap.cfg"),
                        "--out", out])
        crossing = main(["validate", "--config", str(SCENARIOS / "bands_crossing.cfg"),
                         "--out", out])
        assert (ok, overlap, crossing) == (0, 1, 1)
        text = (tmp_path / "out" / "violations.csv").read_text()
        assert text.splitlines()[0] == "pair_i,pair_j,witness_t,psi_i,phi_j"
        assert ",1," in text.splitlines()[1]  # crossing witness t = 1

    def test_parse_error_is_exit_2(self, tmp_path):
        cfg = write(tmp_path, "space = nowhere\n")
        assert main(["validate", "--config", cfg]) == 2

    def test_theta_config_error_is_exit_2(self, tmp_path):
        cfg = write(tmp_path, SMALL_BAND.replace(
            "mode = literal\nsafety = 0.5", "mode = clamp\ntheta = 1.5"))
        assert main(["check", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_extend_writes_csv(self, tmp_path):
        cfg = write(tmp_path, SMALL_BAND)
        out = tmp_path / "out"
        assert main(["extend", "--config", cfg, "--out", str(out), "--samples", "50"]) == 0
        lines = (out / "evaluation.csv").read_text().strip().splitlines()
        assert lines[0] == "sample_id,weight_1,out_1"
        assert len(lines) == 51
        for line in lines[1:]:
            w = float(line.split(",")[1])
            assert 0.0 <= w <= 1.0

    def test_extend_samples_file_identity_and_far_field(self, tmp_path):
        cfg = write(tmp_path, SMALL_BAND)
        rows = ["0.1," * 20 + "0.1", "9.0," * 20 + "9.0"]  # core and far field
        sfile = tmp_path / "samples.csv"
        sfile.write_text("\n".join(rows) + "\n")
        out = tmp_path / "out"
        assert main(["extend", "--config", cfg, "--out", str(out),
                     "--samples-file", str(sfile)]) == 0
        lines = (out / "evaluation.csv").read_text().strip().splitlines()
        w0, f0 = (float(v) for v in lines[1].split(",")[1:])
        w1, f1 = (float(v) for v in lines[2].split(",")[1:])
        assert (w0, f0) == (1.0, 0.1)  # identity core: F = f(x) = x(t0)
        assert (w1, f1) == (0.0, 0.0)  # far field: zero weight, zero element

    def test_check_passes_and_is_deterministic(self, tmp_path):
        cfg = write(tmp_path, SMALL_BAND.replace("samples = 200", "samples = 100"))
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["check", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["check", "--config", cfg, "--out", str(out2)]) == 0
        assert (out1 / "reports.csv").read_bytes() == (out2 / "reports.csv").read_bytes()
        assert (out1 / "summary.txt").read_bytes() == (out2 / "summary.txt").read_bytes()

    def test_check_oversized_epsilon_exit_1(self, tmp_path):
        cfg = write(tmp_path, SMALL_BAND.replace(
            "safety = 0.5", "safety = 0.5\nepsilon = 2.0").replace(
            "samples = 200", "samples = 100"))
        assert main(["check", "--config", cfg, "--out", str(tmp_path / "o")]) == 1

    def test_plotdata(self, tmp_path):
        cfg = write(tmp_path, SMALL_BAND)
        out = tmp_path / "out"
        assert main(["plotdata", "--config", cfg, "--out", str(out)]) == 0
        lines = (out / "plotdata.csv").read_text().strip().splitlines()
        assert lines[0] == "s,weight_1,F_1"
        rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        w = rows[:, 1]
        # weight decays monotonically from 1 to 0 across the support edge
        assert w[0] == 1.0 and w[-1] == 0.0
        assert np.all(np.diff(w) <= 1e-12)

    def test_plotdata_without_path_is_exit_2(self, tmp_path):
        cfg = write(tmp_path, SMALL_BAND.split("[path]")[0])
        assert main(["plotdata", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_mode_override(self, tmp_path):
        clamp_cfg = write(tmp_path, SMALL_BAND.replace(
            "mode = literal\nsafety = 0.5", "mode = clamp\ntheta = 0.2"))
        out = tmp_path / "out"
        assert main(["extend", "--config", clamp_cfg, "--out", str(out),
                     "--samples", "10", "--mode", "literal"]) == 0
        # switching a literal scenario to clamp lacks theta: config error
        lit_cfg = write(tmp_path, SMALL_BAND, "lit.cfg")
        assert main(["extend", "--config", lit_cfg, "--out", str(out),
                     "--mode", "clamp"]) == 2
