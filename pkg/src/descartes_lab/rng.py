"""Counter-based, chunk-keyed random streams and a deterministic chunk executor.

Every Monte Carlo stream is cut into fixed-size chunks.  Chunk ``c`` of a
stream keyed by ``key`` draws from Philox seeded with
``SeedSequence(seed, spawn_key=(*key, c))``, so a chunk's draws never depend on
which worker ran it or how many workers there were.  Chunk results are
merged in chunk order.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

CHUNK = 10_000
RNG_ID = f"numpy-{np.__version__}/Philox4x64/SeedSequence-spawn-key"

_MASK64 = (1 << 64) - 1


def chunk_rng(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & _MASK64, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def chunk_sizes(trials: int, chunk: int = CHUNK) -> list[int]:
    full, rest = divmod(int(trials), chunk)
    return [chunk] * full + ([rest] if rest else [])


def sample_law(rng: np.random.Generator, law: str, size) -> np.ndarray:
    """Draw from a named continuous law."""
    if law == "gaussian":
        return rng.standard_normal(size)
    if law == "uniform":
        return rng.uniform(-1.0, 1.0, size)
    if law == "cauchy":
        return rng.standard_cauchy(size)
    raise ValueError(f"unknown law {law!r}")


def run_tasks(fn: Callable, tasks: Sequence, workers: int = 1) -> list:
    """Apply ``fn`` to every task; results come back in task order.

    With more than one worker the tasks go to a process pool; ``fn`` and the
    task tuples must then be picklable.
    """
    workers = max(1, int(workers))
    if workers == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    workers = min(workers, len(tasks), max(1, (os.cpu_count() or 1) * 4))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks))
