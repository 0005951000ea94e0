#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest

from distinction.config import RunConfig, Setting, build_setting

# name -> (p, ext, ell)
ACCEPTANCE_CONFIGS = {
    "A": (3, "unram", 5),
    "B": (5, "ram", 3),
    "C": (7, "unram", 3),
    "D": (3, "unram", 7),
}


def make_config(name: str, **overrides) -> RunConfig:
    p, ext, ell = ACCEPTANCE_CONFIGS[name]
    return RunConfig(p=p, ell=ell, ext=ext, workers=2).merged(overrides)


@pytest.fixture(scope="session")
def settings():
    """The four acceptance settings, built once per session."""
    return {name: build_setting(make_config(name)) for name in ACCEPTANCE_CONFIGS}


@pytest.fixture(scope="session")
def setting_A(settings) -> Setting:
    return settings["A"]


@pytest.fixture(scope="session")
def setting_B(settings) -> Setting:
    return settings["B"]


@pytest.fixture(scope="session")
def setting_C(settings) -> Setting:
    return settings["C"]


@pytest.fixture(scope="session")
def setting_D(settings) -> Setting:
    return settings["D"]


@pytest.fixture(params=sorted(ACCEPTANCE_CONFIGS))
def any_setting(request, settings) -> Setting:
    return settings[request.param]
