"""Makes the repository root importable so tests can use `src.*`."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# NumPy >= 2 reprs scalars as "np.float64(x)"; tests pass repr() of values
# as CLI text, so keep the pre-2.0 scalar repr during the test session.
import numpy as np

if np.lib.NumpyVersion(np.__version__) >= "2.0.0":
    np.set_printoptions(legacy="1.25")
