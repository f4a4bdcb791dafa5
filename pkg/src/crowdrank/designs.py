"""Partition schedules over prime fields.

The scheduling problem: split q^2 slots into groups of size q, round after
round, so that every unordered pair of slots shares a group exactly once.
Identifying slots with cells of the grid GF(q) x GF(q), the q-1 "slope"
classes (cells grouped by the value of k*i + j for k = 1..q-1), together with
the row classes and the column classes, give q+1 rounds with exactly-once
pair coverage. A seeded uniform bijection between cells and slot indices
randomises the layout; slots below n are real items, the remaining q^2 - n
slots are padding and never reach an agent.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PartitionSchedule",
    "ScheduleReport",
    "find_prime",
    "is_prime",
    "sgp_schedule",
    "verify_schedule",
]


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def find_prime(x: float) -> int:
    """Smallest prime q with q >= x. Plain trial division; terminates for any
    x >= 1 because there is always a prime between m and 2m."""
    if x < 1:
        raise ValueError(f"expected x >= 1, got {x}")
    q = max(2, math.ceil(x))
    while not is_prime(q):
        q += 1
    return q


@dataclass(frozen=True)
class PartitionSchedule:
    """q+1 rounds, each splitting the q^2 slots into q groups of q.

    Immutable after construction and safe to share read-only across threads.
    Slot indices below ``n`` are real items; the rest are padding.
    """

    q: int
    n: int
    partitions: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def n_slots(self) -> int:
        return self.q * self.q

    def is_real(self, slot: int) -> bool:
        return 0 <= slot < self.n

    @property
    def real(self) -> tuple[bool, ...]:
        return tuple(slot < self.n for slot in range(self.n_slots))

    def iter_groups(self):
        for partition in self.partitions:
            yield from partition

    def to_json(self) -> str:
        payload = {
            "q": self.q,
            "n": self.n,
            "partitions": [[list(group) for group in part] for part in self.partitions],
            "real": list(self.real),
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> PartitionSchedule:
        payload = json.loads(text)
        schedule = cls(
            q=int(payload["q"]),
            n=int(payload["n"]),
            partitions=tuple(
                tuple(tuple(int(i) for i in group) for group in part)
                for part in payload["partitions"]
            ),
        )
        if "real" in payload and list(payload["real"]) != list(schedule.real):
            raise ValueError("real-item flags disagree with the slot convention")
        return schedule


def sgp_schedule(n: int, seed=None) -> PartitionSchedule:
    """Build the q+1 round schedule for n items, q = smallest prime >= sqrt(n).

    The seeded bijection between grid cells and slot indices makes the set of
    cells holding real items uniformly random, so padding does not cluster in
    any particular group.
    """
    if n < 2:
        raise ValueError(f"need at least 2 items, got {n}")
    rng = np.random.default_rng(seed)
    q = find_prime(math.isqrt(n - 1) + 1)
    slot_of_cell = rng.permutation(q * q)

    def cell(i: int, j: int) -> int:
        return int(slot_of_cell[i * q + j])

    partitions = []
    for k in range(1, q):
        # slope class k: cells with equal k*i + j (mod q) share a group
        part = tuple(
            tuple(cell(i, (level - k * i) % q) for i in range(q))
            for level in range(q)
        )
        partitions.append(part)
    partitions.append(
        tuple(tuple(cell(level, j) for j in range(q)) for level in range(q))
    )
    partitions.append(
        tuple(tuple(cell(i, level) for i in range(q)) for level in range(q))
    )
    return PartitionSchedule(q=q, n=n, partitions=tuple(partitions))


@dataclass(frozen=True)
class ScheduleReport:
    """Exhaustive pair-coverage report for a schedule."""

    q: int
    rounds: int
    exact_partitions: bool
    pairs_once: int
    pairs_missing: int
    pairs_repeated: int

    @property
    def all_pairs_once(self) -> bool:
        return self.pairs_missing == 0 and self.pairs_repeated == 0

    @property
    def valid(self) -> bool:
        return self.exact_partitions and self.all_pairs_once and self.rounds == self.q + 1


def verify_schedule(schedule: PartitionSchedule) -> ScheduleReport:
    """Count how often each of the C(q^2, 2) slot pairs co-occurs in a group.

    O(q^4) work but vectorised; also checks that every round is an exact
    partition into groups of size q.
    """
    m = schedule.n_slots
    exact = True
    keys = []
    for partition in schedule.partitions:
        members = sorted(slot for group in partition for slot in group)
        if members != list(range(m)) or any(len(g) != schedule.q for g in partition):
            exact = False
        for group in partition:
            arr = np.sort(np.asarray(group, dtype=np.int64))
            if arr.size < 2:
                continue
            ia, ib = np.triu_indices(arr.size, k=1)
            keys.append(arr[ia] * m + arr[ib])
    counts = np.bincount(
        np.concatenate(keys) if keys else np.empty(0, dtype=np.int64),
        minlength=m * m,
    )
    lo, hi = np.triu_indices(m, k=1)
    per_pair = counts[lo * m + hi]
    return ScheduleReport(
        q=schedule.q,
        rounds=len(schedule.partitions),
        exact_partitions=exact,
        pairs_once=int((per_pair == 1).sum()),
        pairs_missing=int((per_pair == 0).sum()),
        pairs_repeated=int((per_pair > 1).sum()),
    )
