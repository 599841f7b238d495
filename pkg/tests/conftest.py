import numpy as np

from kreinkit import Signature

# Small-signature grid used by most seeded sweeps.
DIMS_GRID = [(a, b) for a in (1, 2, 3) for b in (1, 2, 3)]

# Domain/codomain pairs for rectangular isometries (codomain adds positive
# directions only; dim H <= 4, dim K <= 6).
RECT_PAIRS = [
    ((1, 1), (2, 1)),
    ((1, 1), (3, 1)),
    ((2, 1), (3, 1)),
    ((2, 1), (4, 1)),
    ((1, 2), (2, 2)),
    ((1, 2), (3, 2)),
    ((2, 2), (3, 2)),
    ((2, 2), (4, 2)),
    ((3, 1), (4, 1)),
    ((3, 1), (5, 1)),
    ((1, 3), (2, 3)),
    ((1, 3), (3, 3)),
    ((2, 0), (4, 0)),
    ((3, 0), (5, 0)),
    ((2, 2), (4, 2)),
]


def rng_for(seed):
    return np.random.default_rng(seed)


def sig(pair):
    return Signature(pair[0], pair[1])
