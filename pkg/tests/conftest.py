import os

import pytest

from mallowsim.battery import run_battery, LAST_RUN_TIMINGS
from mallowsim.parallel import default_workers


def pytest_addoption(parser):
    parser.addoption(
        "--battery-profile",
        default=os.environ.get("MALLOWSIM_BATTERY_PROFILE", "desk"),
        help="profile for the acceptance battery (smoke/desk/deep)",
    )


@pytest.fixture(scope="session")
def battery_run(request):
    """One full battery run shared by all acceptance tests: (report, timings)."""
    profile = request.config.getoption("--battery-profile")
    report = run_battery(profile=profile, seed=42, workers=default_workers())
    return report, dict(LAST_RUN_TIMINGS)
