"""Shared campaign fixtures at the default desk scale (500 drops).

Session-scoped: the estimated-CSI campaign takes about a minute on one
core, so every test that needs it shares one run.
"""

import pytest

from qmimo.campaign import CampaignConfig, run_campaign

DEFAULT_DROPS = 500
DEFAULT_SEED = 0


@pytest.fixture(scope="session")
def default_config():
    return CampaignConfig()


@pytest.fixture(scope="session")
def default_perfect_campaign(default_config):
    return run_campaign(
        default_config,
        "ptp-perfect",
        n_drops=DEFAULT_DROPS,
        master_seed=DEFAULT_SEED,
        workers=1,
    )


@pytest.fixture(scope="session")
def default_estimated_campaign(default_config):
    return run_campaign(
        default_config,
        "ptp-estimated",
        n_drops=DEFAULT_DROPS,
        master_seed=DEFAULT_SEED,
        workers=1,
    )
