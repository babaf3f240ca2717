"""Tests for the seeded property suites."""

import pytest

from drep.properties import PROPERTY_SUITES, run_property_suites


@pytest.mark.parametrize("name", sorted(PROPERTY_SUITES))
def test_suite_passes(name):
    """Every suite holds on a small seeded sample."""
    report = PROPERTY_SUITES[name](seed=1, instances=25)
    assert report.ok, report.violations[:1]
    assert report.checked > 0


def test_suites_are_reproducible():
    """The same seed checks the same number of instances."""
    first = [r.checked for r in run_property_suites(seed=3, instances=10)]
    second = [r.checked for r in run_property_suites(seed=3, instances=10)]
    assert first == second
    assert len(first) == len(PROPERTY_SUITES)
