import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from riplb.field import FieldParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def f2_4():
    return FieldParams(2, 4)
