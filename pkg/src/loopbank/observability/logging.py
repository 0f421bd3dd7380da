"""Stage observer for logging and timing of long computations.

The analysis and cascade entry points report each stage (corner model,
sigma matrix, spectrum, fixed points, ...) to an observer. LoggingObserver
keeps the records in memory for the CLI summary; NullObserver discards them.
"""

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Optional, Protocol

from rich.console import Console
from rich.logging import RichHandler

logger = logging.getLogger(__name__)


@dataclass
class StageRecord:
    """A single completed stage."""

    component: str = ""  # 'corner', 'sigma', 'spectrum', 'fixed_points', 'cascade', ...
    latency_ms: float = 0.0
    detail: Optional[str] = None
    error: Optional[str] = None


class StageObserver(Protocol):
    """Protocol for observing computation stages."""

    def on_stage_start(self, component: str) -> float:
        """Called before a stage runs. Returns start_time."""
        ...

    def on_stage_end(
        self,
        component: str,
        start_time: float,
        detail: Optional[str] = None,
        error: Optional[str] = None,
    ) -> None:
        """Called after a stage completes (success or failure)."""
        ...


class LoggingObserver:
    """Observer that logs each stage and keeps the records."""

    def __init__(self) -> None:
        self.records: list[StageRecord] = []

    def on_stage_start(self, component: str) -> float:
        logger.debug("Stage starting: component=%s", component)
        return time.monotonic()

    def on_stage_end(
        self,
        component: str,
        start_time: float,
        detail: Optional[str] = None,
        error: Optional[str] = None,
    ) -> None:
        latency_ms = (time.monotonic() - start_time) * 1000
        record = StageRecord(
            component=component,
            latency_ms=latency_ms,
            detail=detail,
            error=error,
        )
        self.records.append(record)
        logger.info(
            "Stage: component=%s latency=%.1fms%s%s",
            component,
            latency_ms,
            f" {detail}" if detail else "",
            f" error={error}" if error else "",
        )

    def total_ms(self) -> float:
        return sum(r.latency_ms for r in self.records)


class NullObserver:
    """No-op observer for use when stage logging is not needed (e.g., tests)."""

    def on_stage_start(self, component: str) -> float:
        return time.monotonic()

    def on_stage_end(
        self,
        component: str,
        start_time: float,
        detail: Optional[str] = None,
        error: Optional[str] = None,
    ) -> None:
        pass


def configure_logging(verbose: bool = False) -> None:
    """Install a rich handler on stderr for the loopbank CLI.

    stdout is reserved for documents, so the console is bound to stderr.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(name)s: %(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


@contextmanager
def observed(observer: StageObserver, component: str) -> Iterator[dict]:
    """Report a stage to ``observer``; set ``outcome["detail"]`` inside the block."""
    start = observer.on_stage_start(component)
    outcome: dict = {"detail": None}
    try:
        yield outcome
    except Exception as e:
        observer.on_stage_end(component, start, detail=outcome["detail"], error=str(e))
        raise
    observer.on_stage_end(component, start, detail=outcome["detail"])
