from pathlib import Path

import numpy as np
import pytest

from ultracloud.storage import read_matrix_csv

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def dist8_dim10() -> np.ndarray:
    """8-point sample distance matrix observed at ambient dimension 10.

    Carries small transcription asymmetries on purpose (worst 0.29)."""
    return read_matrix_csv(DATA / "dist8_dim10.csv")


@pytest.fixture(scope="session")
def dist8_dim100() -> np.ndarray:
    return read_matrix_csv(DATA / "dist8_dim100.csv")


@pytest.fixture(scope="session")
def dist8_dim1000() -> np.ndarray:
    """Same family at dimension 1000; worst transcription asymmetry is 1.00."""
    return read_matrix_csv(DATA / "dist8_dim1000.csv")


def brute_minimax(entries: np.ndarray) -> np.ndarray:
    """Exhaustive minimax path cost over all simple paths (use only for P <= 7)."""
    from itertools import permutations

    n = entries.shape[0]
    out = np.zeros_like(entries)
    for a in range(n):
        for b in range(a + 1, n):
            rest = [v for v in range(n) if v not in (a, b)]
            best = entries[a, b]
            for size in range(1, len(rest) + 1):
                for mid in permutations(rest, size):
                    path = (a, *mid, b)
                    cost = max(entries[i, j] for i, j in zip(path, path[1:]))
                    best = min(best, cost)
            out[a, b] = out[b, a] = best
    return out
