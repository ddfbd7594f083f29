import json
import math
from unittest.mock import Mock

import numpy as np
import pytest
from click.testing import CliRunner

from app.boundary.models.boundary_spec import BoundarySpec
from app.landscape.models.interaction_matrix import InteractionMatrix
from app.landscape.services.landscape_service import LandscapeService
from app.quadrature.models.integral_result import IntegralResult
from app.quadrature.models.quadrature_spec import QuadratureSpec
from app.quadrature.services.quadrature_service import QuadratureService
from app.so3.services.so3_service import So3Service

# F(0) for the unit ball
F_ORIGIN = 12.0 * math.pi**2


def model_F(p) -> float:
    """Smooth radial stand-in for F with F(0) = 12 pi^2, increasing towards the sphere"""
    r2 = float(np.sum(np.asarray(p, dtype=float) ** 2))
    return F_ORIGIN / (1.0 - r2) ** 2


@pytest.fixture
def rng():
    """Seeded generator for test data"""
    return np.random.default_rng(1234)


@pytest.fixture
def quadrature():
    """Quadrature service at the default orders"""
    return QuadratureService(QuadratureSpec())


@pytest.fixture
def landscape(quadrature):
    return LandscapeService(quadrature)


@pytest.fixture
def so3_service():
    return So3Service()


@pytest.fixture
def diag_spec():
    """Flat boundary data whose interaction matrix at p = 0 is diag(5, 2, 1)"""
    return BoundarySpec.flat(np.diag([5.0, 2.0, 1.0]) / (2.0 * math.pi**2))


def make_model_landscape(m) -> Mock:
    """Landscape double with F = model_F and a constant interaction matrix m"""
    fake = Mock(spec=LandscapeService)
    fake.spec = QuadratureSpec()
    fake.F_result.side_effect = lambda p, spec=None: IntegralResult(
        value=model_F(p), est_rel_error=0.0, nodes_used=0
    )
    fake.interaction_matrix.side_effect = lambda bspec, p, spec=None: InteractionMatrix.build(
        np.asarray(m, dtype=float), np.asarray(p, dtype=float), route="closed"
    )
    return fake


@pytest.fixture
def model_landscape():
    """Landscape double for M = diag(5, 2, 1)"""
    return make_model_landscape(np.diag([5.0, 2.0, 1.0]))


@pytest.fixture
def spec_file(tmp_path):
    """Write boundary data to a temporary file and return its path"""

    def write(synth, base=None, name="spec.json"):
        document = {"A": np.asarray(synth, dtype=float).tolist()}
        if base is not None:
            document["base"] = base
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def runner():
    """Click test runner with stdout and stderr kept apart"""
    return CliRunner()
