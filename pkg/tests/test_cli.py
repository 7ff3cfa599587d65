"""CLI tests: subcommand wiring, exit codes, and cross-interface equality
between offline reports and API payloads."""

import csv
import io
import json
from datetime import date

import pytest
from fastapi.testclient import TestClient

from hexcab.api import create_app
from hexcab.cli import main
from hexcab.store import Store

START = "2019-09-02"


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "data"
    rc = main([
        "synth", "--out", str(out), "--seed", "3", "--days", "2",
        "--taxis", "25", "--trips-per-day", "120", "--pois", "100",
    ])
    assert rc == 0
    store_path = out / "store"
    rc = main([
        "ingest",
        "--gps-dir", str(out / "gps"),
        "--poi", str(out / "poi.csv"),
        "--category-map", str(out / "category_map.txt"),
        "--config", str(out / "config.json"),
        "--store", str(store_path),
        "--out", str(out / "report.json"),
    ])
    assert rc == 0
    return out, store_path


def run(argv, capsys):
    rc = main(argv)
    return rc, capsys.readouterr()


class TestExitCodes:
    def test_missing_required_flag_is_usage_error(self, capsys):
        rc, cap = run(["ingest", "--gps-dir", "/nowhere"], capsys)
        assert rc == 1
        assert "usage" in cap.err.lower()

    def test_unknown_command_is_usage_error(self, capsys):
        rc, _ = run(["frobnicate"], capsys)
        assert rc == 1

    def test_missing_store_is_data_error(self, capsys):
        rc, cap = run(["aggregate", "heatmap", "--store", "/no/such/store",
                       "--date", START], capsys)
        assert rc == 2
        assert cap.err

    def test_success_is_zero(self, dataset, capsys):
        out, store_path = dataset
        rc, _ = run(["aggregate", "calendar", "--store", str(store_path),
                     "--from", START, "--to", "2019-09-03"], capsys)
        assert rc == 0


class TestIngestReport:
    def test_report_written_with_counters(self, dataset):
        out, store_path = dataset
        report = json.loads((out / "report.json").read_text())
        assert report["counters"]["trips_extracted"] > 0
        assert report["counters"]["short_trip"] >= 1  # planted exclusions
        assert (store_path / "manifest.json").exists()

    def test_extraction_matches_truth_file(self, dataset):
        import pandas as pd

        out, store_path = dataset
        truth = pd.read_csv(out / "truth.csv")
        planted = int((truth["excluded"] == 0).sum())
        store = Store.open(store_path)
        assert store.manifest["totals"]["trips"] == planted


class TestCrossInterface:
    def test_aggregate_calendar_equals_api_payload(self, dataset, capsys):
        out, store_path = dataset
        rc, cap = run(["aggregate", "calendar", "--store", str(store_path),
                       "--from", START, "--to", "2019-09-03"], capsys)
        assert rc == 0
        cli_payload = json.loads(cap.out)
        store = Store.open(store_path)
        client = TestClient(create_app(store))
        api_payload = client.get(f"/api/calendar?from={START}&to=2019-09-03").json()
        assert cli_payload == api_payload

    def test_score_csv_equals_rank_payload(self, dataset, tmp_path, capsys):
        out, store_path = dataset
        store = Store.open(store_path)
        arr = store.day_array(date(2019, 9, 2), "pickup")
        cells = sorted({(int(q), int(r)) for q, r in zip(arr["o_q"], arr["o_r"])})[:12]
        region = ",".join(f"{q}:{r}" for q, r in cells)

        csv_path = tmp_path / "scores.csv"
        rc, _ = run(["score", "--store", str(store_path), f"--region={region}",
                     "--date", START, "--radius", "500", "--by", "PR",
                     "--out", str(csv_path)], capsys)
        assert rc == 0
        with open(csv_path) as f:
            rows = list(csv.DictReader(f))

        client = TestClient(create_app(store))
        api = client.get(f"/api/rank?region={region}&date={START}&D=500&by=PR").json()
        assert len(rows) == len(api["candidates"])
        for row, cand in zip(rows, api["candidates"]):
            assert int(row["id"]) == cand["id"]
            assert float(row["raw_PR"]) == cand["raw"]["PR"]
            assert float(row["norm_PR"]) == cand["normalized"]["PR"]
            assert float(row["raw_AD"]) == cand["raw"]["AD"]
            assert int(row["n_coverage"]) == cand["n_coverage"]
