"""
Logging and metrics for the decomposition-space engine
Structured JSON logs on stderr and Prometheus counters for checked squares
"""

import logging
import sys
import time
from contextlib import contextmanager
from typing import Iterator, Optional

import structlog
from prometheus_client import CollectorRegistry, Counter, Histogram, Info, write_to_textfile

logger = structlog.get_logger()


def configure_logging(level: str = "WARNING") -> None:
    """Route structlog through stdlib logging to stderr as JSON lines"""
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level.upper(), logging.WARNING),
        force=True,
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer(),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


class MetricsCollector:
    """Collects and manages Prometheus metrics on a private registry"""

    def __init__(self, registry: Optional[CollectorRegistry] = None):
        self.registry = registry or CollectorRegistry()

        self.squares_checked_total = Counter(
            "decomp_squares_checked_total",
            "Pullback squares evaluated",
            ["family"],
            registry=self.registry,
        )

        self.checks_total = Counter(
            "decomp_checks_total",
            "Checks run, by outcome",
            ["check", "verdict"],
            registry=self.registry,
        )

        self.check_duration_seconds = Histogram(
            "decomp_check_duration_seconds",
            "Time spent in a single check",
            ["check"],
            buckets=[0.001, 0.01, 0.1, 0.5, 1.0, 5.0, 30.0],
            registry=self.registry,
        )

        self.app_info = Info("decomp_app", "Application information", registry=self.registry)

    def record_square(self, family: str):
        self.squares_checked_total.labels(family=family).inc()

    def record_check(self, check: str, passed: bool, duration: float):
        """Record one check outcome and its duration"""
        verdict = "pass" if passed else "fail"
        self.checks_total.labels(check=check, verdict=verdict).inc()
        self.check_duration_seconds.labels(check=check).observe(duration)

    def set_app_info(self, version: str, app_name: str):
        self.app_info.info({"version": version, "app_name": app_name})

    def write(self, path: str):
        write_to_textfile(path, self.registry)
        logger.info("Metrics written", path=path)


# Global metrics instance
metrics = MetricsCollector()


@contextmanager
def timed_check(check: str) -> Iterator[dict]:
    """Time a check; the caller sets outcome["passed"]"""
    outcome = {"passed": True}
    start = time.perf_counter()
    try:
        yield outcome
    finally:
        duration = time.perf_counter() - start
        metrics.record_check(check, outcome["passed"], duration)
        logger.debug("Check finished", check=check, passed=outcome["passed"], duration=duration)


def setup_monitoring(version: str, app_name: str, level: str = "WARNING"):
    """Setup logging and metrics collection"""
    configure_logging(level)
    metrics.set_app_info(version, app_name)
    logger.info("Monitoring setup completed", version=version)
