"""Tests for the stage observers."""

import logging

import pytest

from loopbank.observability.logging import (
    LoggingObserver,
    NullObserver,
    configure_logging,
    observed,
)


class TestLoggingObserver:
    """Records and timing."""

    def test_records_stage(self):
        observer = LoggingObserver()
        start = observer.on_stage_start("spectrum")
        observer.on_stage_end("spectrum", start, detail="9 eigenvalues")
        (record,) = observer.records
        assert record.component == "spectrum"
        assert record.detail == "9 eigenvalues"
        assert record.error is None
        assert record.latency_ms >= 0.0
        assert observer.total_ms() == record.latency_ms

    def test_logs_stage(self, caplog):
        observer = LoggingObserver()
        with caplog.at_level(logging.INFO, logger="loopbank.observability.logging"):
            observer.on_stage_end("corner", observer.on_stage_start("corner"), error="leak")
        assert "component=corner" in caplog.text
        assert "error=leak" in caplog.text


class TestObserved:
    """Context manager wrapper."""

    def test_detail(self):
        observer = LoggingObserver()
        with observed(observer, "fixed_points") as outcome:
            outcome["detail"] = "dim=3"
        assert observer.records[0].detail == "dim=3"

    def test_error_recorded_and_reraised(self):
        observer = LoggingObserver()
        with pytest.raises(ValueError):
            with observed(observer, "cascade"):
                raise ValueError("boom")
        assert observer.records[0].error == "boom"

    def test_null_observer(self):
        with observed(NullObserver(), "sigma") as outcome:
            outcome["detail"] = "ignored"


class TestConfigureLogging:
    """Root logger setup."""

    def test_levels(self):
        configure_logging(verbose=True)
        assert logging.getLogger().level == logging.DEBUG
        configure_logging()
        assert logging.getLogger().level == logging.INFO
