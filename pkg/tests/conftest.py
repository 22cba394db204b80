import os
from pathlib import Path

import hypothesis
import numpy as np
import pytest

from artin_scattering.zeros import ZeroFinder

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=15, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=200, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))

PROJECT_ROOT = Path(__file__).parent.parent

# First ten ordinates to 12 digits, for checks that should not depend on the finder
KNOWN_ZEROS = (
    14.134725141735,
    21.022039638772,
    25.010857580146,
    30.424876125860,
    32.935061587739,
    37.586178158826,
    40.918719012147,
    43.327073280915,
    48.005150881167,
    49.773832477672,
)


@pytest.fixture(scope="session")
def first_ten_zeros():
    return ZeroFinder().first_n_zeros(10)


@pytest.fixture(scope="session")
def project_root():
    return PROJECT_ROOT
