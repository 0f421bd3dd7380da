"""Configuration for loopbank, populated from LOOPBANK_* environment variables."""

from typing import Optional

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings


class CascadeSettings(BaseModel):
    iterations: int = Field(default=10, ge=0, le=16)
    support_rel_tol: float = 1e-9


class AnalysisSettings(BaseModel):
    cluster_tol: float = 1e-7
    fixed_tol: float = 1e-8
    algebra_tol: float = 1e-8
    reduce_tol: float = 1e-9


class LoopbankSettings(BaseSettings):
    """Top-level configuration.

    ``tol`` overrides every certification tolerance (loop unitarity, QMF,
    low-pass, row relations). Leave it unset to keep the per-module defaults.
    """

    tol: Optional[float] = Field(default=None, gt=0)
    seed: int = 0
    cascade: CascadeSettings = CascadeSettings()
    analysis: AnalysisSettings = AnalysisSettings()

    model_config = {"env_prefix": "LOOPBANK_", "env_nested_delimiter": "__"}
