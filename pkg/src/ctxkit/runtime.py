"""Deterministic randomness and worker-count policy.

All randomness in the package flows through counter-based Philox
substreams so results are reproducible bit for bit no matter how work is
chunked or parallelized.  The substream for (seed, lane, index, subindex)
is::

    Generator(Philox(key=(seed, lane), counter=(0, subindex, index, 0)))

Lane assignments (changing them is a breaking change):

* lane 0: state sampling (index = position in a sweep),
* lane 1: protocol estimation (index = term index, subindex = shot),
* lane 2: marginal-consistency checks (index = 64-bit digest of the
  measured context's labels, subindex = shot),
* lane 3: internal deterministic starting vectors (power iteration,
  product-state search).

Thread counts come from the ``CTXKIT_THREADS`` environment variable:
unset or ``0`` picks the automatic policy (currently single-threaded,
which is fastest for the problem sizes in the catalog), any other value
caps the worker pool at that many threads.
"""

from __future__ import annotations

import os

import numpy as np

_U64_MAX = 2**64 - 1


def substream(seed: int, lane: int, index: int = 0, subindex: int = 0) -> np.random.Generator:
    """Independent random stream for one unit of work.

    Streams with distinct (seed, lane, index, subindex) never overlap, so
    units of work can run in any order, or concurrently, without changing
    the numbers each one draws.
    """
    for name, value in (("seed", seed), ("lane", lane), ("index", index), ("subindex", subindex)):
        if not 0 <= int(value) <= _U64_MAX:
            raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {value!r}")
    # Explicit uint64 arrays: a plain int list goes through float64 inside
    # numpy and mangles coordinates above 2**53.
    key = np.array([seed, lane], dtype=np.uint64)
    counter = np.array([0, subindex, index, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def worker_count() -> int:
    """Number of worker threads to use, from CTXKIT_THREADS (0 = auto)."""
    raw = os.environ.get("CTXKIT_THREADS", "0")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"CTXKIT_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise ValueError(f"CTXKIT_THREADS must be >= 0, got {n}")
    if n == 0:
        return 1
    return n
