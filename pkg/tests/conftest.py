"""Shared, session-scoped fixtures: one pipeline over a temporary cache."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from k3sextic.cli.pipeline import Pipeline, PipelineConfig

settings.register_profile(
    "k3", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
    derandomize=True, print_blob=True)
settings.load_profile("k3")

ACCEPTANCE: list[tuple[str, str, str]] = []


def record_criterion(number, ok, detail: str) -> None:
    """``ok`` is True, False or None (not run)."""
    status = {True: "PASS", False: "FAIL", None: "NOT RUN"}[ok]
    ACCEPTANCE.append((str(number), status, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("k3cache")


@pytest.fixture(scope="session")
def pipeline(cache_dir) -> Pipeline:
    return Pipeline(PipelineConfig(cache_dir), log=lambda msg: None)


@pytest.fixture(scope="session")
def conf(pipeline):
    return pipeline.conf


@pytest.fixture(scope="session")
def group(pipeline):
    return pipeline.group


@pytest.fixture(scope="session")
def gamma(pipeline):
    return pipeline.gamma


@pytest.fixture(scope="session")
def ns(pipeline):
    return pipeline.ns


@pytest.fixture(scope="session")
def orbits4(pipeline):
    return pipeline.orbits(4)


@pytest.fixture(scope="session")
def classified(pipeline):
    """Runs the degree <= 4 classification once; returns its summary."""
    return pipeline.classify()


@pytest.fixture(scope="session")
def models4(pipeline, classified, orbits4):
    return {i: pipeline.model(4, i) for i, o in enumerate(orbits4) if o.is_polarization}


@pytest.fixture(scope="session")
def hp(orbits4):
    """h_F': representative of the degree-4 orbit with stabilizer 720."""
    return next(o.representative for o in orbits4 if o.stabilizer_order == 720)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
