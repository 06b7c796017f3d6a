import pytest

from milnorkit.core.models import JobConfig
from milnorkit.services import ReportService, SelfCheckService


def test_family_table_agrees(milnor):
    table = SelfCheckService(milnor).family_table(degrees=range(2, 5))
    assert table["mu"].tolist() == [1, 2, 3]
    assert table["agree"].all()


@pytest.mark.slow
def test_corpus_passes(milnor):
    service = SelfCheckService(milnor)
    results = service.run()
    frame = service.to_frame(results)
    assert (frame["status"] == "PASS").all(), frame[frame["status"] != "PASS"].to_string()


def test_report_envelope_and_fallback_summary():
    reports = ReportService("1.0.0")
    job = JobConfig(command="milnor", inputs=["g.json"])
    report = reports.build(job, {"answer": 42})
    assert set(report) == {"tool", "version", "command", "config", "precision", "provenance", "result"}
    assert reports.to_json(report).endswith("\n")

    report["command"] = "unlisted"
    assert "answer: 42" in reports.summary(report)
