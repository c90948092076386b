"""End-to-end tests for the command-line interface."""

import csv
import http.server
import json
import threading
from urllib.parse import parse_qs, urlparse

import numpy as np
import pytest
import yaml

from panelmetrics.data import read_panel_csv
from panelmetrics.report.cli import main


def write_panel(path, n=12, width=9):
    rng = np.random.default_rng(6021)
    x1 = np.cumsum(0.1 * rng.standard_normal((n, width)), axis=1) + 5.0
    x2 = np.cumsum(0.1 * rng.standard_normal((n, width)), axis=1) + 3.0
    c = 0.2 * rng.standard_normal(n)
    y = np.empty((n, width))
    y[:, 0] = 2.0 + c
    for t in range(1, width):
        y[:, t] = c + 0.5 * y[:, t - 1] + 0.05 * x1[:, t - 1] + 0.01 * rng.standard_normal(n)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["entity", "year", "y", "x1", "x2"])
        for i in range(n):
            for j in range(width):
                writer.writerow(
                    [f"E{i:02d}", 2013 + j]
                    + [repr(float(v[i, j])) for v in (y, x1, x2)]
                )


def file_doc(**overrides):
    doc = {
        "config_version": 1,
        "seed": 99,
        "data": {"source": "file", "path": "panel.csv", "schema": "wide"},
        "variables": [{"name": "y"}, {"name": "x1"}, {"name": "x2"}],
        "models": [
            {
                "label": "1",
                "dependent": "y",
                "regressors": [{"var": "x1", "lag": 1}],
                "lagged_dependent": True,
            },
            {
                "label": "2",
                "dependent": "y",
                "regressors": [{"var": "x2", "lag": 1}],
                "lagged_dependent": True,
            },
        ],
        "output": {"directory": "out", "formats": ["json"]},
    }
    doc.update(overrides)
    return doc


@pytest.fixture()
def workspace(tmp_path):
    """Config directory with the test panel and a ready config file."""

    def prepare(doc=None):
        write_panel(tmp_path / "panel.csv")
        with open(tmp_path / "cfg.yaml", "w", encoding="utf-8") as fh:
            yaml.safe_dump(doc or file_doc(), fh)
        return str(tmp_path / "cfg.yaml")

    prepare.dir = tmp_path
    return prepare


def artifacts_in(out_dir):
    return sorted(p.name for p in out_dir.iterdir())


class TestAnalysisCommands:
    def test_run_emits_all_tables(self, workspace, capsys):
        assert main(["run", "--config", workspace()]) == 0
        names = artifacts_in(workspace.dir / "out")
        assert names == [
            "comparison.json", "correlation.json", "describe.json", "fmols.json",
            "gmm.json", "hausman.json", "manifest.json", "timings.json",
            "unitroot.json",
        ]
        assert "wrote" in capsys.readouterr().out

    def test_report_equals_run_for_file_source(self, workspace, capsys):
        assert main(["report", "--config", workspace()]) == 0
        assert "comparison.json" in artifacts_in(workspace.dir / "out")

    def test_describe_writes_its_tables_only(self, workspace, capsys):
        assert main(["describe", "--config", workspace()]) == 0
        assert artifacts_in(workspace.dir / "out") == [
            "correlation.json", "describe.json", "manifest.json", "timings.json",
        ]

    def test_unitroot_and_hausman_single_stage(self, workspace, capsys):
        config = workspace()
        assert main(["unitroot", "--config", config, "--out", "ur"]) == 0
        assert artifacts_in(workspace.dir / "ur") == [
            "manifest.json", "timings.json", "unitroot.json",
        ]
        assert main(["hausman", "--config", config, "--out", "hz"]) == 0
        assert artifacts_in(workspace.dir / "hz") == [
            "hausman.json", "manifest.json", "timings.json",
        ]

    @pytest.mark.parametrize("method", ["fmols", "gmm"])
    def test_estimate_writes_one_method(self, workspace, capsys, method):
        assert main(
            ["estimate", "--config", workspace(), "--method", method]
        ) == 0
        assert artifacts_in(workspace.dir / "out") == [
            f"{method}.json", "manifest.json", "timings.json",
        ]

    def test_seed_and_format_overrides(self, workspace, capsys):
        assert main(
            ["run", "--config", workspace(), "--seed", "7", "--format", "md"]
        ) == 0
        out = workspace.dir / "out"
        with open(out / "manifest.json", encoding="utf-8") as fh:
            manifest = json.load(fh)
        assert manifest["seed"] == 7
        assert not [n for n in artifacts_in(out) if n.endswith(".csv")]
        assert "describe.md" in artifacts_in(out)


class TestExitCodes:
    def test_config_error_is_1(self, workspace, capsys):
        config = workspace(file_doc(config_version=99))
        assert main(["run", "--config", config]) == 1
        assert "configuration error" in capsys.readouterr().err

    def test_missing_data_file_is_3(self, workspace, capsys):
        config = workspace(
            file_doc(data={"source": "file", "path": "absent.csv"})
        )
        assert main(["run", "--config", config]) == 3
        assert "I/O error" in capsys.readouterr().err

    def test_stage_failure_is_2(self, workspace, capsys):
        doc = file_doc()
        for model in doc["models"]:
            model["lagged_dependent"] = False
        assert main(["run", "--config", workspace(doc)]) == 2
        err = capsys.readouterr().err
        assert "stage gmm failed" in err
        # independent stages still produced their artifacts
        assert "fmols.json" in artifacts_in(workspace.dir / "out")


FETCH_ENTITIES = {"VARY": ("AAA", "BBB", "CCC"), "VARX": ("AAA", "BBB")}


class _IndicatorHandler(http.server.BaseHTTPRequestHandler):
    def do_GET(self):
        url = urlparse(self.path)
        code = url.path.rsplit("/", 1)[-1]
        if code == "DOWN":
            body = b"backend down"
            self.send_response(500)
        else:
            years = parse_qs(url.query)["date"][0].split(":")
            records = [
                {"entity": e, "date": str(year), "value": float(len(e) + year % 7 + i)}
                for i, e in enumerate(FETCH_ENTITIES[code])
                for year in range(int(years[0]), int(years[1]) + 1)
            ]
            body = json.dumps([{"page": 1, "pages": 1}, records]).encode()
            self.send_response(200)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture()
def indicator_server():
    srv = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _IndicatorHandler)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{srv.server_address[1]}"
    finally:
        srv.shutdown()
        thread.join()


def fetch_doc(base_url, codes=("VARY", "VARX")):
    return {
        "config_version": 1,
        "seed": 5,
        "data": {
            "source": "fetch",
            "base_url": base_url,
            "provider": "prov",
            "years": "2013:2016",
            "cache_dir": "cache",
        },
        "variables": [
            {"name": name.lower(), "source": name} for name in codes
        ],
        "models": [
            {
                "label": "1",
                "dependent": codes[0].lower(),
                "regressors": [{"var": codes[-1].lower(), "lag": 1}],
                "lagged_dependent": True,
            }
        ],
        "output": {"directory": "out", "formats": ["json"]},
    }


class TestFetchCommands:
    def write_config(self, tmp_path, doc):
        with open(tmp_path / "cfg.yaml", "w", encoding="utf-8") as fh:
            yaml.safe_dump(doc, fh)
        return str(tmp_path / "cfg.yaml")

    def test_fetch_then_cache(self, indicator_server, tmp_path, capsys):
        config = self.write_config(tmp_path, fetch_doc(indicator_server))
        assert main(["fetch", "--config", config]) == 0
        first = capsys.readouterr().out
        assert "1 page(s)" in first
        assert len(list((tmp_path / "cache").iterdir())) == 2
        assert main(["fetch", "--config", config]) == 0
        assert "(cache)" in capsys.readouterr().out

    def test_fetch_on_file_source_is_config_error(self, workspace, capsys):
        assert main(["fetch", "--config", workspace()]) == 1
        assert "nothing to fetch" in capsys.readouterr().err

    def test_fetch_failure_is_3(self, indicator_server, tmp_path, capsys):
        doc = fetch_doc(indicator_server, codes=("VARY", "DOWN"))
        config = self.write_config(tmp_path, doc)
        assert main(["fetch", "--config", config]) == 3
        assert "FAILED" in capsys.readouterr().err

    def test_ingest_merges_indicators(self, indicator_server, tmp_path, capsys):
        config = self.write_config(tmp_path, fetch_doc(indicator_server))
        with pytest.warns(UserWarning, match="no rows for entities"):
            assert main(["ingest", "--config", config]) == 0
        out = capsys.readouterr().out
        assert out.startswith("wrote")
        dataset = read_panel_csv(tmp_path / "out" / "panel.csv", schema="long")
        assert dataset.entities == ("AAA", "BBB", "CCC")
        assert dataset.periods == (2013, 2014, 2015, 2016)
        assert {"vary", "varx"} <= set(dataset.variables)
        # VARX has no CCC rows; the merged grid leaves them missing
        assert np.isnan(dataset["varx"].values[2]).all()
        assert np.isfinite(dataset["vary"].values).all()


class TestIngestFileSource:
    def test_ingest_writes_long_panel(self, workspace, capsys):
        assert main(["ingest", "--config", workspace()]) == 0
        dataset = read_panel_csv(workspace.dir / "out" / "panel.csv", schema="long")
        assert len(dataset.entities) == 12
        assert set(dataset.variables) == {"y", "x1", "x2"}
