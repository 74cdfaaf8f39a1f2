# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
import os
from typing import Callable

import pytest

from harvest.cavity_model import CavityConfig
from harvest.evolution import PropagatorGenerator, build_generator


@pytest.fixture(scope="module", autouse=True)
def test_environment():
    os.environ["POWERTOOLS_SERVICE_NAME"] = "harvest-test"
    os.environ.pop("HARVEST_CACHE_DIR", None)


@pytest.fixture
def small_config() -> CavityConfig:
    return CavityConfig(cutoff=10).at_separation(4.0)


@pytest.fixture
def reference_config() -> CavityConfig:
    return CavityConfig.reference()


_GENERATORS: dict[CavityConfig, PropagatorGenerator] = {}


@pytest.fixture(scope="session")
def generator_for() -> Callable[[CavityConfig], PropagatorGenerator]:
    """Builds each generator once per test session."""

    def build(cfg: CavityConfig) -> PropagatorGenerator:
        if cfg not in _GENERATORS:
            _GENERATORS[cfg] = build_generator(cfg)
        return _GENERATORS[cfg]

    return build
