"""End-to-end CLI behavior: subcommands, formats, exit codes."""

import json

import numpy as np
import pytest

from helpers import make_separable_dataset, ring_rgb, save_image, solid_rgb

from thir import load_index
from thir.cli import main


@pytest.fixture
def tiny_dataset(tmp_path):
    root = tmp_path / "data"
    save_image(solid_rgb(24, (10, 20, 30)), root / "benign" / "a.png")
    save_image(solid_rgb(24, (90, 90, 90)), root / "benign" / "b.png")
    save_image(ring_rgb(32, 3), root / "malignant" / "c.png")
    return root


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExtract:
    def test_creates_loadable_index(self, tiny_dataset, tmp_path, capsys):
        out = tmp_path / "ix.thir"
        code, stdout, _ = run(
            ["extract", "--data", str(tiny_dataset), "--out", str(out),
             "--resolution", "10", "--width", "24", "--height", "24"],
            capsys,
        )
        assert code == 0
        assert "3" in stdout
        ix = load_index(out)
        assert len(ix) == 3
        assert ix.spec.resolution == 10
        assert ix.resize_dims == (24, 24)

    def test_deterministic_bytes(self, tiny_dataset, tmp_path, capsys):
        a, b = tmp_path / "a.thir", tmp_path / "b.thir"
        base = ["--data", str(tiny_dataset), "--resolution", "8", "--width", "16", "--height", "16"]
        assert main(["extract", *base, "--out", str(a)]) == 0
        assert main(["extract", *base, "--out", str(b), "--jobs", "4"]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_empty_dir_is_runtime_error(self, tmp_path, capsys):
        (tmp_path / "none").mkdir()
        code, _, stderr = run(
            ["extract", "--data", str(tmp_path / "none"), "--out", str(tmp_path / "x.thir")],
            capsys,
        )
        assert code == 2
        assert stderr.strip()


class TestQuery:
    @pytest.fixture
    def index_path(self, tiny_dataset, tmp_path, capsys):
        out = tmp_path / "ix.thir"
        assert main(
            ["extract", "--data", str(tiny_dataset), "--out", str(out),
             "--resolution", "10", "--width", "24", "--height", "24"]
        ) == 0
        capsys.readouterr()
        return out

    def test_indexed_image_comes_back_first(self, index_path, tiny_dataset, capsys):
        img = tiny_dataset / "malignant" / "c.png"
        code, stdout, _ = run(
            ["query", "--index", str(index_path), "--image", str(img), "--k", "3"], capsys
        )
        assert code == 0
        rows = [line for line in stdout.splitlines() if line.strip() and not line.startswith("rank")]
        assert len(rows) == 3
        first = rows[0].split()
        assert float(first[4]) == 0.0
        assert "c.png" in rows[0]
        dists = [float(r.split()[4]) for r in rows]
        assert dists == sorted(dists)

    def test_json_format(self, index_path, tiny_dataset, capsys):
        img = tiny_dataset / "benign" / "a.png"
        code, stdout, _ = run(
            ["query", "--index", str(index_path), "--image", str(img), "--k", "2",
             "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(stdout)
        assert payload["k"] == 2
        assert len(payload["results"]) == 2
        assert payload["results"][0]["distance"] <= payload["results"][1]["distance"]
        assert len(payload["query_curves"]["values"]) == 30
        assert len(payload["query_curves"]["samples"]["r"]) == 10

    def test_normalize_flag_runs(self, index_path, tiny_dataset, capsys):
        img = tiny_dataset / "malignant" / "c.png"
        code, stdout, _ = run(
            ["query", "--index", str(index_path), "--image", str(img), "--k", "1",
             "--normalize", "--format", "json"],
            capsys,
        )
        assert code == 0
        assert json.loads(stdout)["results"][0]["id"] is not None

    def test_missing_index_is_runtime_error(self, tiny_dataset, tmp_path, capsys):
        code, _, stderr = run(
            ["query", "--index", str(tmp_path / "missing.thir"),
             "--image", str(tiny_dataset / "benign" / "a.png")],
            capsys,
        )
        assert code == 2
        assert stderr.strip()


class TestEvaluate:
    def test_separable_fixture_scores_perfectly(self, tmp_path, capsys):
        root = make_separable_dataset(tmp_path / "data", n_per_class=5, size=240)
        report_path = tmp_path / "report.csv"
        code, _, _ = run(
            ["evaluate", "--data", str(root), "--k", "1,3", "--split", "0.8",
             "--seed", "42", "--resolution", "20", "--report", str(report_path)],
            capsys,
        )
        assert code == 0
        lines = report_path.read_text().strip().splitlines()
        assert lines[0].startswith("magnification,K,accuracy")
        assert len(lines) == 3
        for line in lines[1:]:
            cells = line.split(",")
            assert cells[2] == "1.0000"  # accuracy
            assert cells[6] == "1.0000"  # mean precision@K

    def test_json_report_to_stdout(self, tmp_path, capsys):
        root = make_separable_dataset(tmp_path / "data", n_per_class=3, size=64)
        # small images go through the default 240x240 upscale; separability holds
        code, stdout, _ = run(
            ["evaluate", "--data", str(root), "--k", "1", "--resolution", "10",
             "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(stdout)
        assert payload["metadata"]["positive_class"] == "malignant"
        assert payload["rows"][0]["accuracy"] == 1.0

    def test_magnification_filter(self, tmp_path, capsys):
        root = tmp_path / "data"
        for i in range(2):
            save_image(solid_rgb(48, (20 + i, 30, 40)), root / "benign" / "40X" / f"s{i}.png")
            save_image(ring_rgb(48, 3 + i), root / "malignant" / "40X" / f"r{i}.png")
        code, stdout, _ = run(
            ["evaluate", "--data", str(root), "--k", "1", "--split", "0.5",
             "--resolution", "8", "--magnification", "40"],
            capsys,
        )
        assert code == 0
        assert stdout.splitlines()[1].startswith("40,1,")

        code, _, stderr = run(
            ["evaluate", "--data", str(root), "--k", "1", "--magnification", "200"], capsys
        )
        assert code == 2
        assert "magnification 200" in stderr

    def test_bad_k_list(self, tmp_path, capsys):
        root = make_separable_dataset(tmp_path / "data", n_per_class=2, size=64)
        code, _, _ = run(["evaluate", "--data", str(root), "--k", "1,x"], capsys)
        assert code == 2


class TestCurves:
    def test_stdout_csv(self, tmp_path, capsys):
        img = save_image(ring_rgb(32, 2), tmp_path / "rings.png")
        code, stdout, _ = run(["curves", "--image", str(img), "--resolution", "6"], capsys)
        assert code == 0
        lines = stdout.strip().splitlines()
        assert lines[0] == "channel,sample_index,filtration_value,count"
        assert len(lines) == 1 + 3 * 6
        # ring image keeps both loops alive across the whole sampled range
        r_counts = [int(line.split(",")[3]) for line in lines[1:7]]
        assert r_counts == [2] * 6

    def test_files_and_diagram(self, tmp_path, capsys):
        img = save_image(ring_rgb(32, 1), tmp_path / "ring.png")
        out = tmp_path / "curves.csv"
        dgm = tmp_path / "diagram.csv"
        code, _, _ = run(
            ["curves", "--image", str(img), "--resolution", "4",
             "--out", str(out), "--diagram", str(dgm)],
            capsys,
        )
        assert code == 0
        assert out.read_text().startswith("channel,sample_index,filtration_value,count")
        dlines = dgm.read_text().strip().splitlines()
        assert dlines[0] == "channel,dim,birth,death"
        assert any(line.endswith(",inf") for line in dlines[1:])


class TestExitCodes:
    def test_no_arguments_is_usage_error(self, capsys):
        assert main([]) == 1

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["extract", "--bogus"]) == 1

    def test_unknown_subcommand_is_usage_error(self, capsys):
        assert main(["transmogrify"]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
