"""Simulated rational agents.

An agent decides upfront whether to exert effort (exactly when their
per-comparison cost is at or below the contract's effort threshold), then
draws a type: effort makes them reliable with probability pi, no effort makes
them unreliable with certainty. Reliable agents answer every comparison from
the ground-truth order; unreliable ones answer consistently with a single
uniformly random permutation drawn once and reused everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contracts import ContractParams, effort_threshold

__all__ = [
    "Agent",
    "AgentProfile",
    "AnswerSource",
    "GroundTruth",
    "answer",
    "decide_effort",
    "draw_agents",
    "draw_type",
    "make_source",
]


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Hidden total order: rank[item] is its position, 0 = lowest score."""

    rank: np.ndarray

    def __post_init__(self):
        if sorted(self.rank.tolist()) != list(range(self.rank.size)):
            raise ValueError("rank must be a permutation of 0..n-1")

    @property
    def n(self) -> int:
        return int(self.rank.size)

    def precedes(self, a: int, b: int) -> bool:
        return bool(self.rank[a] < self.rank[b])

    @classmethod
    def identity(cls, n: int) -> GroundTruth:
        return cls(rank=np.arange(n))

    @classmethod
    def random(cls, n: int, seed=None) -> GroundTruth:
        rng = np.random.default_rng(seed)
        return cls(rank=rng.permutation(n))


@dataclass(frozen=True)
class AgentProfile:
    psi: float
    pi: float
    effort: bool
    good: bool


@dataclass(frozen=True, eq=False)
class AnswerSource:
    """The order an agent answers from: ground truth if reliable, otherwise a
    private random permutation fixed for the whole trial."""

    rank: np.ndarray


@dataclass(frozen=True, eq=False)
class Agent:
    profile: AgentProfile
    source: AnswerSource


def decide_effort(psi_i: float, params: ContractParams) -> bool:
    """Effort is rational iff psi_i <= payment * pi_hat * pi / d; ties exert."""
    return psi_i <= effort_threshold(params)


def draw_type(effort: bool, pi_i: float, rng) -> bool:
    """True = reliable. Bernoulli(pi_i) given effort, certainly False without."""
    if not effort:
        return False
    return bool(np.random.default_rng(rng).random() < pi_i)


def make_source(good: bool, truth: GroundTruth, rng) -> AnswerSource:
    if good:
        return AnswerSource(rank=truth.rank)
    return AnswerSource(rank=np.random.default_rng(rng).permutation(truth.n))


def answer(source: AnswerSource, pair: tuple[int, int]) -> bool:
    """Whether the first item of the pair precedes the second, according to
    the agent's order. Deterministic given the source; padding items are
    never compared and are rejected."""
    a, b = pair
    n = source.rank.size
    if not (0 <= a < n and 0 <= b < n):
        raise ValueError(f"pair {pair} contains a padding item (real items are 0..{n - 1})")
    if a == b:
        raise ValueError(f"cannot compare item {a} with itself")
    return bool(source.rank[a] < source.rank[b])


def draw_agents(
    psi: np.ndarray,
    pi: np.ndarray,
    params: ContractParams,
    truth: GroundTruth,
    rng,
) -> list[Agent]:
    """Vectorised effort decisions and type draws for a whole agent pool.

    One uniform draw is consumed per agent regardless of effort, and
    unreliable agents' permutations are drawn in agent order, so the stream
    of random numbers (and hence the trial) is reproducible.
    """
    rng = np.random.default_rng(rng)
    threshold = effort_threshold(params)
    effort = np.asarray(psi) <= threshold
    good = (rng.random(effort.size) < np.asarray(pi)) & effort
    agents = []
    for i in range(effort.size):
        source = (
            AnswerSource(rank=truth.rank)
            if good[i]
            else AnswerSource(rank=rng.permutation(truth.n))
        )
        profile = AgentProfile(
            psi=float(psi[i]), pi=float(pi[i]), effort=bool(effort[i]), good=bool(good[i])
        )
        agents.append(Agent(profile=profile, source=source))
    return agents
