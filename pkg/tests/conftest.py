from __future__ import annotations

import pytest

from gridroute import build_default_scenario


@pytest.fixture(scope="session")
def default_cfg():
    """The bundled ten-region scenario at its full 168-hour horizon."""
    return build_default_scenario()


@pytest.fixture(scope="session")
def short_cfg():
    """Same scenario cut to six hours for tests that run full horizons."""
    return build_default_scenario(horizon_hours=6)
