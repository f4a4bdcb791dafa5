"""Comparison assignment: verified pairs and per-agent group lists.

The verified set is a handful of disjoint item pairs the principal checks
herself. The unverified work is dealt out group by group from a partition
schedule: each group goes to exactly r distinct agents, so every unordered
pair of real items ends up in exactly r agents' worksheets.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .designs import PartitionSchedule

__all__ = [
    "AssignmentPlan",
    "agent_workload",
    "find_vset",
    "find_wset",
    "make_plan",
]


def find_vset(n: int, v: int, seed=None) -> tuple[tuple[int, int], ...]:
    """Draw 2v distinct items uniformly from [0, n) and pair them disjointly.

    Disjointness is what keeps every verified answer a fair coin for an agent
    answering from a random permutation: no verified pair leaks information
    about another.
    """
    if v < 0:
        raise ValueError(f"pair count must be nonnegative, got {v}")
    if 2 * v > n:
        raise ValueError(f"cannot form {v} disjoint pairs over {n} items (need 2*v <= n)")
    rng = np.random.default_rng(seed)
    picks = rng.choice(n, size=2 * v, replace=False)
    return tuple(
        (int(min(a, b)), int(max(a, b)))
        for a, b in zip(picks[0::2], picks[1::2])
    )


def find_wset(
    schedule: PartitionSchedule, s: int, r: int, seed=None
) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Assign each schedule group (padding stripped) to exactly r distinct agents.

    Groups are dealt round-robin over a seeded random agent order: consecutive
    r positions in the cycle are distinct whenever r <= s, loads differ by at
    most one group across agents, and no agent receives the same group twice.
    Groups that contain zero real items are dropped; single-item groups are
    kept (they cost workload but contribute no pairs).
    """
    if not 1 <= r <= s:
        raise ValueError(f"replication r={r} must satisfy 1 <= r <= s={s}")
    rng = np.random.default_rng(seed)
    groups = []
    for group in schedule.iter_groups():
        real = tuple(sorted(item for item in group if item < schedule.n))
        if real:
            groups.append(real)
    order = rng.permutation(s)
    assigned: list[list[tuple[int, ...]]] = [[] for _ in range(s)]
    slot = 0
    for group in groups:
        for t in range(r):
            assigned[int(order[(slot + t) % s])].append(group)
        slot += r
    return tuple(tuple(agent_groups) for agent_groups in assigned)


@dataclass(frozen=True)
class AssignmentPlan:
    """Verified pairs plus the per-agent group lists (real items only)."""

    n: int
    r: int
    verified: tuple[tuple[int, int], ...]
    groups_per_agent: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def s(self) -> int:
        return len(self.groups_per_agent)

    @property
    def v(self) -> int:
        return len(self.verified)

    def w_pairs(self, agent: int) -> set[tuple[int, int]]:
        """All unordered real-item pairs inside the agent's assigned groups."""
        pairs: set[tuple[int, int]] = set()
        for group in self.groups_per_agent[agent]:
            pairs.update(combinations(group, 2))
        return pairs

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "r": self.r,
            "verified": [list(p) for p in self.verified],
            "groups_per_agent": [
                [list(g) for g in agent_groups] for agent_groups in self.groups_per_agent
            ],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> AssignmentPlan:
        payload = json.loads(text)
        return cls(
            n=int(payload["n"]),
            r=int(payload["r"]),
            verified=tuple((int(a), int(b)) for a, b in payload["verified"]),
            groups_per_agent=tuple(
                tuple(tuple(int(i) for i in g) for g in agent_groups)
                for agent_groups in payload["groups_per_agent"]
            ),
        )


def make_plan(
    schedule: PartitionSchedule, s: int, v: int, r: int, seed=None
) -> AssignmentPlan:
    """Compose the verified set and the group assignment into one plan."""
    rng = np.random.default_rng(seed)
    verified = find_vset(schedule.n, v, rng)
    groups = find_wset(schedule, s, r, rng)
    return AssignmentPlan(n=schedule.n, r=r, verified=verified, groups_per_agent=groups)


def agent_workload(plan: AssignmentPlan, agent: int) -> tuple[int, float]:
    """Items assigned and the expected comparison count for one agent.

    Fully ordering a group of g items costs 2*g*ln(g) comparisons in
    expectation with an adaptive sort; every verified pair costs one more.
    """
    groups = plan.groups_per_agent[agent]
    items = sum(len(g) for g in groups)
    comparisons = float(plan.v) + sum(2.0 * len(g) * math.log(len(g)) for g in groups)
    return items, comparisons
