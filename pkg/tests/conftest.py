import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from ffgeom import GenSpec, PointSet, generate, make_field  # noqa: E402

# (p, e) for every q the oracle sweeps visit
FIELDS = {3: (3, 1), 5: (5, 1), 7: (7, 1), 9: (3, 2), 11: (11, 1), 13: (13, 1), 25: (5, 2)}


def random_set(ctx, n, seed) -> PointSet:
    return generate(ctx, GenSpec("random", {"size": min(n, ctx.q * ctx.q)}, seed))


@pytest.fixture
def f3():
    return make_field(3)


@pytest.fixture
def f5():
    return make_field(5)
