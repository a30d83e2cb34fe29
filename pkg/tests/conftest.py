import numpy as np
import pytest

from stokeslab.mesh import make_mesh


@pytest.fixture(scope="session")
def meshes():
    """Experiment meshes through level 3, keyed by (domain, level)."""
    return {(d, l): make_mesh(d, l) for d in ("square", "lshape", "rhombus") for l in range(4)}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
