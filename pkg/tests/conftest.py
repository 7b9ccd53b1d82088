"""Shared fixtures.  The observable families are immutable, so each is
built once per session."""

import pytest

from ctxkit.observables import build_ks18, build_mermin_star, build_peres_mermin


@pytest.fixture(scope="session")
def ks18():
    return build_ks18()


@pytest.fixture(scope="session")
def ks18_rayset(ks18):
    return ks18[0]


@pytest.fixture(scope="session")
def ks18_obs(ks18):
    return ks18[1]


@pytest.fixture(scope="session")
def pm_obs():
    return build_peres_mermin()


@pytest.fixture(scope="session")
def star3_obs():
    return build_mermin_star(3)


@pytest.fixture(scope="session")
def star5_obs():
    return build_mermin_star(5)
