import random

import pytest

from torustab.maps import LabelledMap


@pytest.fixture
def rng():
    return random.Random(987123)


@pytest.fixture
def knot2():
    """The 2-crossing knot candidate (one straight-ahead component)."""
    return LabelledMap.from_alpha_pairs(2, [(1, 5), (2, 7), (3, 6), (4, 8)])


@pytest.fixture
def link2():
    """The 2-crossing link candidate (two components, no bigons)."""
    return LabelledMap.from_alpha_pairs(2, [(1, 5), (2, 6), (3, 7), (4, 8)])


@pytest.fixture
def sphere2():
    """A connected 2-vertex map of genus 0 (fails the torus condition)."""
    return LabelledMap.from_alpha_pairs(2, [(1, 5), (2, 8), (3, 7), (4, 6)])
