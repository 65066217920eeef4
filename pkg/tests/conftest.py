"""Shared fixtures and the acceptance-report terminal hook."""

from __future__ import annotations

import numpy as np
import pytest

from endperiodic import IntMatrix, run_pipeline

RUNNING_ROWS = [[0, 0, 1, 0], [1, 0, 0, 1], [0, 0, 0, 1], [1, 2, 0, 0]]


@pytest.fixture(scope="session")
def running_matrix() -> IntMatrix:
    return IntMatrix.from_rows(RUNNING_ROWS)


@pytest.fixture(scope="session")
def running_result(running_matrix):
    return run_pipeline(running_matrix)


@pytest.fixture(scope="session")
def d_results():
    return {d: run_pipeline(IntMatrix.from_rows([[d]])) for d in (2, 3, 5)}


def random_irreducible_matrices(count: int, seed: int = 20260826):
    """Seeded irreducible matrices, n <= 4, entries <= 2, no permutations.

    Permutation matrices are excluded because their spectral radius is 1
    and the construction requires a strictly expanding map.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(1, 5))
        entries = rng.integers(0, 3, size=(n, n))
        M = IntMatrix.from_rows(entries.tolist())
        from endperiodic import is_irreducible

        if not is_irreducible(M):
            continue
        if all(sum(row) == 1 for row in M.entries) and all(
            sum(col) == 1 for col in zip(*M.entries)
        ):
            continue  # permutation matrix
        out.append(M)
    return out


# --- acceptance criterion reporting ---------------------------------------

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        line = f"{status} {name}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
