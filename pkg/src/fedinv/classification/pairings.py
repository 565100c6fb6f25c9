"""Perfect matchings of index slots (the spanning maps of the symplectic FFT)."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

from ..errors import CapExceededError

DEFAULT_MAX_SLOTS = 14
DEFAULT_MAX_DIM = 8


def max_slots_from_env(default: int = DEFAULT_MAX_SLOTS) -> int:
    raw = os.environ.get("FEDINV_MAX_SLOTS")
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"FEDINV_MAX_SLOTS must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ValueError("FEDINV_MAX_SLOTS must be non-negative")
    return value


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@dataclass(frozen=True, order=True)
class Pairing:
    """A perfect matching of ``range(slot_count)``; pairs sorted, each pair sorted."""

    slot_count: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = sorted(s for pair in self.pairs for s in pair)
        if seen != list(range(self.slot_count)):
            raise ValueError(f"{self.pairs} is not a perfect matching of {self.slot_count} slots")
        if any(a >= b for a, b in self.pairs) or list(self.pairs) != sorted(self.pairs):
            raise ValueError("pairing is not in canonical form")

    @classmethod
    def from_pairs(cls, slot_count: int, pairs) -> "Pairing":
        return cls(slot_count, tuple(sorted(tuple(sorted(p)) for p in pairs)))

    def partner(self, slot: int) -> int:
        for a, b in self.pairs:
            if a == slot:
                return b
            if b == slot:
                return a
        raise KeyError(slot)


def _matchings(slots: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not slots:
        yield []
        return
    first, rest = slots[0], slots[1:]
    for i, other in enumerate(rest):
        for tail in _matchings(rest[:i] + rest[i + 1 :]):
            yield [(first, other)] + tail


def enumerate_pairings(slot_count: int, max_slots: int | None = None) -> list[Pairing]:
    """All (slot_count - 1)!! perfect matchings, in lexicographic order."""
    if slot_count < 0:
        raise ValueError("slot count must be non-negative")
    cap = max_slots_from_env() if max_slots is None else max_slots
    if slot_count > cap:
        raise CapExceededError(
            f"{slot_count} slots exceed the pairing cap of {cap}", slot_count=slot_count, cap=cap
        )
    if slot_count % 2:
        return []
    return [Pairing(slot_count, tuple(m)) for m in _matchings(list(range(slot_count)))]
