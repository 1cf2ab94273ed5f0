import numpy as np

from src.qmbvp.paths import PathPair, VecPath


def coupled_supersolution(grid, rng, dim, y_bar):
    """
    A random supersolution of the bounded_coupled system:
    x = X + a t with X in [1.5, 3], a in [0, 1], and
    y = (y_bar + r + 1 + d) e^(T - t) - 1 - d with r, d in [0, 1].
    """
    t = grid.nodes[:, np.newaxis]
    x = rng.uniform(1.5, 3.0, dim) + rng.uniform(0.0, 1.0, dim) * t
    r, d = rng.uniform(0.0, 1.0, dim), rng.uniform(0.0, 1.0, dim)
    y = (y_bar + r + 1.0 + d) * np.exp(grid.horizon - t) - 1.0 - d
    return PathPair(VecPath(grid, x), VecPath(grid, y))
