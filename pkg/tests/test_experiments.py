"""Tests for file formats, the CLI, the sweep harness, and verify."""

import json
import time

import numpy as np
import pytest

from hrg.cli import main
from hrg.experiments import (
    CSV_COLUMNS,
    SweepConfig,
    default_jobs,
    run_sweep,
    write_sweep_csv,
)
from hrg.files import (
    DataFormatError,
    build_report,
    read_coords,
    read_edges,
    write_coords,
    write_edges,
)
from hrg.geometry import ModelParams, theta_exact
from hrg.graphgen import build_banded
from hrg.sampling import sample_fixed


def run_cli(args):
    try:
        return main(list(args))
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code)


class TestGenerate:
    def test_round_trip_rebuild(self, tmp_path):
        coords = tmp_path / "points.tsv"
        edges = tmp_path / "edges.tsv"
        code = run_cli(
            [
                "generate", "--n", "10", "--alpha", "0.75", "--c-param", "0",
                "--seed", "7", "--out-coords", str(coords), "--out-edges", str(edges),
            ]
        )
        assert code == 0
        lines = coords.read_text().splitlines()
        assert len(lines) == 11  # header + 10 points
        with open(coords) as fh:
            ps = read_coords(fh)
        with open(edges) as fh:
            file_edges = read_edges(fh, len(ps))
        rebuilt = build_banded(ps)
        assert np.array_equal(rebuilt.edges, file_edges)
        assert np.array_equal(ps.r, sample_fixed(ModelParams(10, 0.75, 0.0), 7).r)

    def test_single_node(self, tmp_path):
        coords = tmp_path / "c.tsv"
        edges = tmp_path / "e.tsv"
        code = run_cli(
            ["generate", "--n", "1", "--out-coords", str(coords), "--out-edges", str(edges)]
        )
        assert code == 0
        assert len(coords.read_text().splitlines()) == 2
        assert edges.read_text() == ""

    def test_poisson_count_reproducible(self, tmp_path):
        out = []
        for name in ("a", "b"):
            coords = tmp_path / f"{name}.tsv"
            edges = tmp_path / f"{name}-e.tsv"
            code = run_cli(
                [
                    "generate", "--poisson", "--n", "100", "--seed", "1",
                    "--out-coords", str(coords), "--out-edges", str(edges),
                ]
            )
            assert code == 0
            out.append(coords.read_text())
        assert out[0] == out[1]
        header = out[0].splitlines()[0]
        assert "mode=poisson" in header

    def test_io_failure_exit_code(self, tmp_path):
        code = run_cli(
            [
                "generate", "--n", "5",
                "--out-coords", str(tmp_path / "missing" / "c.tsv"),
                "--out-edges", str(tmp_path / "e.tsv"),
            ]
        )
        assert code == 3

    def test_usage_error_exit_code(self):
        assert run_cli(["generate", "--n"]) == 2
        assert run_cli(["generate", "--n", "0", "--out-coords", "x", "--out-edges", "y"]) == 2


def write_fixture(tmp_path, params, radii, angles, edge_rows, seed=0):
    from hrg.sampling import MODE_FIXED, PointSet

    ps = PointSet(params, np.asarray(radii, float), np.asarray(angles, float), MODE_FIXED, seed)
    coords = tmp_path / "coords.tsv"
    edges = tmp_path / "edges.tsv"
    with open(coords, "w") as fh:
        write_coords(fh, ps)
    with open(edges, "w") as fh:
        for a, b in edge_rows:
            fh.write(f"{a}\t{b}\n")
    return coords, edges


class TestAnalyze:
    def test_triangle_fixture(self, tmp_path, capsys):
        params = ModelParams(3, 0.75, 0.0)
        coords, edges = write_fixture(
            tmp_path, params, [0.1, 0.1, 0.1], [0.0, 2.0, 4.0], [(0, 1), (0, 2), (1, 2)]
        )
        assert run_cli(["analyze", "--coords", str(coords), "--edges", str(edges)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["schema"] == 1
        assert report["components"]["giant_size"] == 3
        assert report["components"]["giant_diameter"] == 1

    def test_path_fixture_diameter(self, tmp_path, capsys):
        params = ModelParams(4, 0.75, 0.0)
        R = params.R
        step = 0.9 * theta_exact(R, R, R)
        coords, edges = write_fixture(
            tmp_path,
            params,
            [R, R, R, R],
            [0.0, step, 2.0 * step, 3.0 * step],
            [(0, 1), (1, 2), (2, 3)],
        )
        assert run_cli(["analyze", "--coords", str(coords), "--edges", str(edges)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["components"]["giant_diameter"] == 3

    def test_missing_id_exit_code_and_line(self, tmp_path, capsys):
        params = ModelParams(3, 0.75, 0.0)
        coords, edges = write_fixture(
            tmp_path, params, [0.1, 0.1, 0.1], [0.0, 2.0, 4.0], [(0, 1), (0, 99)]
        )
        assert run_cli(["analyze", "--coords", str(coords), "--edges", str(edges)]) == 4
        err = capsys.readouterr().err
        assert "line 2" in err and "99" in err

    def test_matches_in_memory_pipeline(self, tmp_path):
        params = ModelParams(10_000, 0.75, 0.0)
        ps = sample_fixed(params, 5)
        g = build_banded(ps)
        coords = tmp_path / "c.tsv"
        edges = tmp_path / "e.tsv"
        with open(coords, "w") as fh:
            write_coords(fh, ps)
        with open(edges, "w") as fh:
            write_edges(fh, g)
        report_path = tmp_path / "report.json"
        code = run_cli(
            [
                "analyze", "--coords", str(coords), "--edges", str(edges),
                "--report", str(report_path),
            ]
        )
        assert code == 0
        from_files = json.loads(report_path.read_text())
        in_memory = json.loads(json.dumps(build_report(g)))
        assert from_files == in_memory

    def test_file_round_trip_graph_identity(self, tmp_path):
        ps = sample_fixed(ModelParams(2000, 0.75, 0.0), 6)
        g = build_banded(ps)
        coords = tmp_path / "c.tsv"
        with open(coords, "w") as fh:
            write_coords(fh, ps)
        with open(coords) as fh:
            ps_back = read_coords(fh)
        assert np.array_equal(ps.r, ps_back.r)
        assert np.array_equal(ps.phi, ps_back.phi)
        assert np.array_equal(build_banded(ps_back).edges, g.edges)


class TestEdgeFileValidation:
    def test_self_loop_and_duplicate(self, tmp_path):
        import io

        with pytest.raises(DataFormatError) as err:
            read_edges(io.StringIO("1\t1\n"), 5)
        assert err.value.line_number == 1
        with pytest.raises(DataFormatError) as err:
            read_edges(io.StringIO("0\t1\n1\t0\n"), 5)
        assert err.value.line_number == 2

    def test_header_mismatch_detected(self):
        import io

        bad = "# hrg v1 n=10 alpha=0.75 C=0.0 R=1.0 seed=0 mode=fixed\n"
        with pytest.raises(DataFormatError):
            read_coords(io.StringIO(bad))


class TestSweep:
    def make_config(self, tmp_path, **overrides):
        payload = {
            "n_values": [1024, 2048],
            "alpha": 0.75,
            "C": 0.0,
            "seeds": 3,
            "out_csv": str(tmp_path / "sweep.csv"),
        }
        payload.update(overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(payload))
        return path

    def test_row_count_and_header(self, tmp_path):
        config = self.make_config(tmp_path)
        assert run_cli(["sweep", "--config", str(config)]) == 0
        lines = (tmp_path / "sweep.csv").read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 1 + 6

    def test_deterministic_modulo_timings(self, tmp_path):
        config = self.make_config(tmp_path)
        tables = []
        for name in ("one", "two"):
            out = tmp_path / f"{name}.csv"
            assert run_cli(["sweep", "--config", str(config), "--out", str(out)]) == 0
            tables.append(out.read_text())

        def strip_timings(text):
            rows = [line.split(",") for line in text.splitlines()]
            return [row[:-2] for row in rows]

        assert strip_timings(tables[0]) == strip_timings(tables[1])

    def test_jobs_do_not_change_results(self, tmp_path):
        cfg = SweepConfig(n_values=(256, 512), alpha=0.75, C=0.0, seeds=2)
        serial = run_sweep(cfg)
        import dataclasses

        parallel = run_sweep(dataclasses.replace(cfg, jobs=2))
        for a, b in zip(serial, parallel):
            assert (a.n, a.seed, a.m, a.giant_size, a.giant_diameter) == (
                b.n, b.seed, b.m, b.giant_size, b.giant_diameter
            )

    def test_doubling_n_doubles_edges(self, tmp_path):
        cfg = SweepConfig(n_values=(4096, 8192), alpha=0.75, C=0.0, seeds=3)
        records = run_sweep(cfg)
        small = np.mean([r.m for r in records if r.n == 4096])
        large = np.mean([r.m for r in records if r.n == 8192])
        assert abs(large / small - 2.0) <= 0.15 * 2.0

    def test_failed_cell_marks_row_and_exit(self, tmp_path, capsys):
        # alpha outside (0, 1) breaks the inner-band analyses per cell
        config = self.make_config(
            tmp_path, n_values=[64, 128], alpha=1.5, seeds=1
        )
        assert run_cli(["sweep", "--config", str(config)]) == 1
        lines = (tmp_path / "sweep.csv").read_text().splitlines()
        assert len(lines) == 3
        assert "nan" in lines[1]
        assert "failed" in capsys.readouterr().err

    def test_bad_config_exit_code(self, tmp_path):
        config = self.make_config(tmp_path, n_values=[2048, 1024])
        assert run_cli(["sweep", "--config", str(config)]) == 2
        config = self.make_config(tmp_path, bogus_key=1)
        assert run_cli(["sweep", "--config", str(config)]) == 2

    def test_jobs_env_fallback(self, monkeypatch):
        monkeypatch.setenv("HRG_JOBS", "3")
        assert default_jobs() == 3
        monkeypatch.setenv("HRG_JOBS", "junk")
        assert default_jobs() == 1
        monkeypatch.delenv("HRG_JOBS")
        assert default_jobs() == 1

    def test_csv_written_via_api(self, tmp_path):
        import io

        cfg = SweepConfig(n_values=(128,), alpha=0.75, C=0.0, seeds=1)
        records = run_sweep(cfg)
        buf = io.StringIO()
        write_sweep_csv(records, buf)
        rows = buf.getvalue().splitlines()
        assert rows[0].split(",")[:2] == ["n", "seed"]
        assert rows[1].split(",")[0] == "128"


class TestVerify:
    def test_quick_passes_under_a_minute(self, capsys):
        start = time.perf_counter()
        code = run_cli(["verify", "--quick", "--seed", "123"])
        elapsed = time.perf_counter() - start
        out = capsys.readouterr().out
        assert code == 0, out
        assert elapsed < 60.0
        assert "checks passed" in out

    def test_injected_fault_detected(self, tmp_path, capsys):
        coords = tmp_path / "c.tsv"
        edges = tmp_path / "e.tsv"
        assert run_cli(
            [
                "generate", "--n", "500", "--seed", "9",
                "--out-coords", str(coords), "--out-edges", str(edges),
            ]
        ) == 0
        rows = edges.read_text().splitlines()
        edges.write_text("\n".join(rows[1:]) + "\n")  # drop one edge
        code = run_cli(
            ["verify", "--quick", "--seed", "123", "--coords", str(coords), "--edges", str(edges)]
        )
        out = capsys.readouterr().out
        assert code == 1
        assert "FAIL" in out and "input-consistency" in out

    def test_mismatched_flags_usage_error(self):
        assert run_cli(["verify", "--coords", "only"]) == 2
