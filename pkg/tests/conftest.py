"""Shared fixtures: small learned operators reused across test modules."""

import pytest

import helmlearn as hl


@pytest.fixture(scope="session")
def disk_problem():
    """Small well-behaved configuration: unit disk, k=5, sources at R=2."""
    return hl.WaveProblem(
        k=5.0,
        curve=hl.circle_curve(1.0),
        n_collocation=64,
        m_sources=64,
        source_radius=2.0,
        alpha=1e-12,
    )


@pytest.fixture(scope="session")
def disk_operator(disk_problem):
    return hl.learn(disk_problem)


@pytest.fixture(scope="session")
def disk_field():
    return hl.PointSource((3.0, 0.0), 5.0)


def rel_or_abs_ok(value: float, reference, rel=1e-12, abs_near_zero=1e-14) -> bool:
    """Contract check: relative error within `rel`, or absolute within
    `abs_near_zero` close to zeros of the reference."""
    err = abs(value - float(reference))
    if err <= abs_near_zero:
        return True
    return err <= rel * abs(float(reference))
