"""Named, reproducible random streams.

Exact rational sampling needs ``randrange`` on arbitrarily large integers,
so streams are :class:`random.Random` instances seeded through numpy's
``SeedSequence`` (which handles the splitting).
"""

from __future__ import annotations

import random
import zlib

import numpy as np


def _key(part) -> int:
    if isinstance(part, int):
        return part
    return zlib.crc32(str(part).encode())


def stream(seed: int, *names) -> random.Random:
    """Independent generator for ``(seed, *names)``; same inputs, same draws."""
    if seed is None:
        raise ValueError("a seed is required")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(_key(n) for n in names))
    state = ss.generate_state(4, dtype=np.uint64)
    return random.Random(int.from_bytes(state.tobytes(), "little"))
