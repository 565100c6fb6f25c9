"""Non-negative integer solutions of 2*d_1 + 3*d_2 + ... + (m+1)*d_m = p - delta."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class DegreeSolution:
    """Degrees ``d_m`` as sorted ``(m, d_m)`` pairs with ``d_m > 0``."""

    degrees: tuple[tuple[int, int], ...]
    p: int
    delta: int

    def __post_init__(self):
        total = sum((m + 1) * d for m, d in self.degrees)
        if total != self.p - self.delta:
            raise ValueError(f"degrees {self.degrees} do not solve the weight equation for p={self.p}, delta={self.delta}")
        if any(m < 1 or d <= 0 for m, d in self.degrees):
            raise ValueError("orders must be >= 1 and stored degrees > 0")
        if list(self.degrees) != sorted(self.degrees):
            raise ValueError("degrees must be sorted by order")

    def degree(self, m: int) -> int:
        return dict(self.degrees).get(m, 0)

    @property
    def factors(self) -> tuple[int, ...]:
        """The order m of each N_m factor, ascending, repeated d_m times."""
        return tuple(m for m, d in self.degrees for _ in range(d))

    @property
    def input_slot_count(self) -> int:
        return sum(d * (m + 3) for m, d in self.degrees)

    @property
    def is_constant(self) -> bool:
        return not self.degrees

    def label(self) -> str:
        if not self.degrees:
            return "constant"
        return " ".join(f"d{m}={d}" for m, d in self.degrees)

    def to_dict(self) -> dict:
        return {"degrees": {str(m): d for m, d in self.degrees}, "p": self.p, "delta": self.delta}

    @classmethod
    def from_dict(cls, data: dict) -> "DegreeSolution":
        degrees = tuple(sorted((int(m), int(d)) for m, d in data["degrees"].items() if int(d)))
        return cls(degrees, int(data["p"]), int(data["delta"]))


def enumerate_degree_solutions(p: int, delta: int, m_max: int) -> list[DegreeSolution]:
    """All solutions with support in ``1..m_max``, in lexicographic order of
    the degree vector (d_1, d_2, ...)."""
    if p < 0:
        raise ValueError("valence must be non-negative")
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    target = p - delta
    if target < 0:
        return []
    top = min(m_max, max(target - 1, 0))
    out: list[tuple[int, ...]] = []

    def rec(m: int, remaining: int, acc: list[int]):
        if m > top:
            if remaining == 0:
                out.append(tuple(acc))
            return
        for d in range(remaining // (m + 1) + 1):
            acc.append(d)
            rec(m + 1, remaining - d * (m + 1), acc)
            acc.pop()

    rec(1, target, [])
    solutions = []
    for vec in sorted(out):
        degrees = tuple((m, d) for m, d in enumerate(vec, start=1) if d)
        solutions.append(DegreeSolution(degrees, p, delta))
    return solutions
