"""Shared generated corpora (built once per session)."""

from functools import lru_cache

from spatialpaths.dataset import generate_one

PS_NAMES = ("PS1", "PS2", "PS3", "PS4")


@lru_cache(maxsize=None)
def corpus(ps: str, n: int, seed: int = 2024, max_entities: int = 6) -> tuple:
    """``n`` instances cycling through 1..5 hops, never more than ``max_entities`` entities."""
    out = []
    for i in range(n):
        hops = 1 + i % (max_entities - 1)
        out.append(generate_one(ps, hops, seed, i, max_extra=min(2, max_entities - 1 - hops)))
    return tuple(out)
