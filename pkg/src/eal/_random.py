"""Chunked, counter-based random streams.

Every Monte Carlo estimator splits its work into a fixed number of chunks.
Chunk ``k`` draws from a Philox generator keyed by ``(seed, k)``, so results
depend on ``(seed, chunk_count)`` only and never on how many threads run
the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

DEFAULT_SEED = 20260114
DEFAULT_CHUNKS = 16


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) % 2**64, spawn_key=(int(chunk),))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, *key: int) -> int:
    """Independent child seed for sub-experiment `key` of `seed`."""
    ss = np.random.SeedSequence([int(seed) % 2**64, *map(int, key)])
    return int(ss.generate_state(1, np.uint64)[0])


def chunk_sizes(total: int, chunk_count: int) -> list[int]:
    if chunk_count < 1:
        raise ValueError("chunk_count must be >= 1")
    q, r = divmod(int(total), int(chunk_count))
    return [q + (1 if k < r else 0) for k in range(chunk_count)]


def complex_normal(rng: np.random.Generator, size, var: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex normal samples via the polar transform.

    ``r = sqrt(-var ln U1)`` and a uniform phase give ``E|z|^2 = var``.
    """
    u1 = 1.0 - rng.random(size)  # in (0, 1]
    u2 = rng.random(size)
    r = np.sqrt(-var * np.log(u1))
    return r * np.exp(2j * math.pi * u2)


def run_chunks(fn, seed: int, sizes, threads: int = 1) -> list:
    """Evaluate ``fn(rng, size)`` per chunk, returning results in chunk order."""
    jobs = [(chunk_rng(seed, k), n) for k, n in enumerate(sizes)]
    if threads <= 1 or len(jobs) <= 1:
        return [fn(rng, n) for rng, n in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def batches(total: int, batch: int):
    start = 0
    while start < total:
        n = min(batch, total - start)
        yield n
        start += n
