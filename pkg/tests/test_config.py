"""Tests for LOOPBANK_* settings."""

import pytest
from pydantic import ValidationError

from loopbank.config import LoopbankSettings


class TestLoopbankSettings:
    """Defaults and environment overrides."""

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("LOOPBANK_TOL", raising=False)
        settings = LoopbankSettings()
        assert settings.tol is None
        assert settings.seed == 0
        assert settings.cascade.iterations == 10
        assert settings.analysis.cluster_tol == 1e-7

    def test_tolerance_from_environment(self, monkeypatch):
        monkeypatch.setenv("LOOPBANK_TOL", "1e-6")
        assert LoopbankSettings().tol == 1e-6

    def test_nested_override(self, monkeypatch):
        monkeypatch.setenv("LOOPBANK_CASCADE__ITERATIONS", "4")
        assert LoopbankSettings().cascade.iterations == 4

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ValidationError):
            LoopbankSettings(tol=0.0)

    def test_iteration_cap(self, monkeypatch):
        monkeypatch.setenv("LOOPBANK_CASCADE__ITERATIONS", "17")
        with pytest.raises(ValidationError):
            LoopbankSettings()
