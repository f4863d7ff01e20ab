import os

# keep test runs from writing the rotating log file
os.environ.setdefault("LOG_FILE", "")

import pytest

from models import DimensionlessParams, PhysicalParams
from stability import critical_params

# (beta, alpha, rho, kappa) -> l1 from the projection engine
L1_REFERENCE = {
    (0.5, 1.0, 0.0, 0.0): -0.2685511468466169,
    (0.3, 2.0, 0.5, 0.4): -0.16336061785752895,
    (0.8, 0.7, 1.3, 0.2): -0.5053815909744654,
    (0.6, 0.2, 0.0, 0.5): -0.03822436233284491,
    (0.4, 3.0, 2.0, 0.0): -0.4861893401417949,
}


@pytest.fixture
def watt_point() -> DimensionlessParams:
    """Classic Watt governor at beta = 0.5, alpha = 1 on its Hopf point."""
    return critical_params(0.5, 1.0)


@pytest.fixture
def hexagonal_point() -> DimensionlessParams:
    return critical_params(0.3, 2.0, 0.5, 0.4)


@pytest.fixture
def physical_set() -> PhysicalParams:
    return PhysicalParams(
        mass=1.2,
        arm_length=0.4,
        half_edge=0.1,
        spring=6.0,
        friction=0.8,
        gear_ratio=1.5,
        torque_gain=4.0,
        inertia=2.0,
        load=1.5,
    )


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("HGS_OUTPUT_DIR", str(tmp_path))
    return tmp_path


def random_points(rng, count: int) -> list:
    """(beta, alpha, rho, kappa) drawn away from the edges of the parameter box."""
    return [
        (rng.uniform(0.15, 0.85), rng.uniform(0.2, 3.0), rng.uniform(0.0, 1.5), rng.uniform(0.0, 0.8))
        for _ in range(count)
    ]
