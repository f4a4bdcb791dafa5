"""Contract parameters: payments, verification budgets, replication counts.

Two information regimes. In the known-cost regime every agent shares one
per-comparison cost psi and the smallest effort-inducing payment is

    payment = d * psi / (pi_hat * pi)

where d bounds the expected comparisons per agent, pi is the chance that
effort produces a reliable agent, and pi_hat = 1 - 2^-v is the chance that a
careless agent trips a verified pair. In the sampled-cost regime the
principal only holds i.i.d. draws from the cost distribution; she prices
effort for a target count g of agents through the empirical quantile at g/s,
and every budget is widened by the sup-norm sampling allowance eps of the
empirical CDF.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .designs import find_prime

__all__ = [
    "ContractParams",
    "DisutilityModel",
    "InfeasibleParameters",
    "MechanismConfig",
    "comparison_bound",
    "dkw_epsilon",
    "effort_threshold",
    "params_known",
    "params_unknown",
    "quantile",
    "replication_known",
    "replication_unknown",
    "verification_budget",
    "verification_budget_unknown",
]


class InfeasibleParameters(ValueError):
    """Raised when no parameter choice can meet the failure budget."""


@dataclass(frozen=True)
class MechanismConfig:
    """Problem-level constants shared by both regimes.

    n, s         items and agents
    pi           P[agent is reliable | effort], in (0, 1)
    delta        total failure budget for the recovery guarantee, in (0, 1)
    psi          per-comparison agent cost (known-cost regime; None otherwise)
    psi_bar      principal's cost per verified comparison
    lam          principal's value per recovered comparison
    """

    n: int
    s: int
    pi: float = 0.8
    delta: float = 0.01
    psi: float | None = 0.01
    psi_bar: float = 2.0
    lam: float = 2.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1 items, got {self.n}")
        if self.s < 1:
            raise ValueError(f"need s >= 1 agents, got {self.s}")
        if not 0.0 < self.pi < 1.0:
            raise ValueError(f"pi must lie in (0, 1), got {self.pi}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.psi is not None and self.psi < 0.0:
            raise ValueError(f"psi must be nonnegative, got {self.psi}")
        if self.psi_bar < 0.0 or self.lam < 0.0:
            raise ValueError("psi_bar and lam must be nonnegative")


@dataclass(frozen=True)
class ContractParams:
    """Everything an experiment row needs to be self-describing."""

    v: int
    r: int
    d: float
    pi_hat: float
    payment: float
    pi: float
    g: int | None = None
    epsilon: float | None = None


def _ceil_log2(x: float) -> int:
    """Smallest integer k with 2^k >= x, robust to float rounding of log2."""
    k = math.ceil(math.log2(x))
    while k > 0 and 2.0 ** (k - 1) >= x:
        k -= 1
    while 2.0 ** k < x:
        k += 1
    return k


def _min_power_count(base: float, target: float) -> int:
    """Smallest integer k with base^k <= target, for base in (0, 1)."""
    k = max(1, math.ceil(math.log2(target) / math.log2(base)))
    while k > 1 and base ** (k - 1) <= target:
        k -= 1
    while base ** k > target:
        k += 1
    return k


def verification_budget(s: int, pi: float, delta: float) -> int:
    """Verified pairs needed so that, with probability 1 - delta/2, every
    careless agent among s effort-exerting ones trips at least one of them:
    the smallest v with 2^v >= 2*(1-pi)*s/delta."""
    x = 2.0 * (1.0 - pi) * s / delta
    if x <= 1.0:
        raise InfeasibleParameters(
            f"verification budget undefined: 2*(1-pi)*s/delta = {x:.4g} <= 1"
        )
    return _ceil_log2(x)


def replication_known(n: int, pi: float, delta: float) -> int:
    """Agents per comparison so that, with probability 1 - delta/2, every
    pair reaches at least one reliable agent: smallest r with
    (1-pi)^r <= delta/(3*n^2)."""
    return _min_power_count(1.0 - pi, delta / (3.0 * n * n))


def comparison_bound(v: int, r: int, n: int, s: int) -> float:
    """Upper bound d on the expected comparisons per agent: v verified pairs
    plus r*q*(q+1)/s groups of q items at 2*q*ln(q) adaptive-sort comparisons
    each, which simplifies to v + 2*r*n*q*ln(q)/s for q = smallest prime >=
    sqrt(n)."""
    q = find_prime(math.isqrt(max(n - 1, 0)) + 1) if n >= 2 else 2
    return v + 2.0 * r * n * q * math.log(q) / s


def params_known(config: MechanismConfig, strict: bool = False) -> ContractParams:
    """Contract parameters for the known-cost regime.

    Raises InfeasibleParameters when the required replication exceeds the
    agent pool and strict is set; otherwise clamps to s with a warning so
    exploratory runs still execute.
    """
    if config.psi is None:
        raise ValueError("known-cost parameters need config.psi")
    v = verification_budget(config.s, config.pi, config.delta)
    r = replication_known(config.n, config.pi, config.delta)
    if r > config.s:
        if strict:
            raise InfeasibleParameters(
                f"replication r={r} exceeds agent count s={config.s}; "
                f"the delta={config.delta} recovery budget is unattainable"
            )
        warnings.warn(
            f"replication r={r} clamped to s={config.s}; recovery budget "
            f"delta={config.delta} is not guaranteed",
            stacklevel=2,
        )
        r = config.s
    d = comparison_bound(v, r, config.n, config.s)
    pi_hat = 1.0 - 2.0 ** -v
    payment = d * config.psi / (pi_hat * config.pi)
    return ContractParams(v=v, r=r, d=d, pi_hat=pi_hat, payment=payment, pi=config.pi)


def effort_threshold(params: ContractParams) -> float:
    """Largest per-comparison cost at which effort is still rational:
    payment * pi_hat * pi / d. Agents at exactly the threshold exert effort."""
    if params.d <= 0:
        raise ValueError("comparison bound d must be positive")
    return params.payment * params.pi_hat * params.pi / params.d


def dkw_epsilon(m: int, confidence_delta: float = 0.05) -> float:
    """Sup-norm half-width for an m-sample empirical CDF:
    P[sup |F_hat - F| > eps] <= confidence_delta."""
    if m < 1:
        raise ValueError("need at least one sample")
    if not 0.0 < confidence_delta < 1.0:
        raise ValueError("confidence_delta must lie in (0, 1)")
    return math.sqrt(math.log(2.0 / confidence_delta) / (2.0 * m))


@dataclass(frozen=True, eq=False)
class DisutilityModel:
    """Sorted cost samples plus the sup-norm allowance of their empirical CDF."""

    samples: np.ndarray
    epsilon: float

    def __post_init__(self):
        if self.samples.size == 0:
            raise ValueError("need at least one cost sample")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be nonnegative")

    @classmethod
    def from_samples(cls, samples, cdf_confidence: float = 0.05) -> DisutilityModel:
        arr = np.sort(np.asarray(samples, dtype=float))
        return cls(samples=arr, epsilon=dkw_epsilon(arr.size, cdf_confidence))

    @property
    def m(self) -> int:
        return int(self.samples.size)


def quantile(model: DisutilityModel, u: float) -> float:
    """Generalised inverse of the empirical CDF: the smallest sample x with
    F_hat(x) >= u. u = 0 returns the minimum sample."""
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"quantile level must lie in [0, 1], got {u}")
    m = model.m
    j = math.ceil(u * m)
    if j > 0 and (j - 1) / m >= u:
        j -= 1
    return float(model.samples[max(j, 1) - 1])


def verification_budget_unknown(
    s: int, pi: float, delta: float, epsilon: float, g: int
) -> int:
    """Verified pairs for the sampled-cost regime: smallest v with
    2^v >= 2*(s - pi*g + pi*s*epsilon)/delta."""
    x = 2.0 * (s - pi * g + pi * s * epsilon) / delta
    if x <= 1.0:
        raise InfeasibleParameters(
            f"verification budget undefined: 2*(s - pi*g + pi*s*eps)/delta = {x:.4g} <= 1"
        )
    return _ceil_log2(x)


def replication_unknown(
    n: int, s: int, pi: float, delta: float, epsilon: float, g: int
) -> int:
    """Replication for the sampled-cost regime: smallest r with
    (1 - pi*g/s + pi*epsilon)^r <= delta/(2*n^2).

    Infeasible when the base reaches 1, i.e. when g <= s*epsilon: the
    incentive target is too small for the sampling error, and no replication
    makes a fully careless pool improbable.
    """
    base = 1.0 - pi * g / s + pi * epsilon
    if base >= 1.0:
        raise InfeasibleParameters(
            f"replication undefined at g={g}: 1 - pi*g/s + pi*eps = {base:.4g} >= 1 "
            f"(need g > s*eps = {s * epsilon:.4g})"
        )
    return _min_power_count(base, delta / (2.0 * n * n))


def params_unknown(
    config: MechanismConfig,
    model: DisutilityModel,
    g: int,
    strict: bool = False,
) -> ContractParams:
    """Contract parameters when costs are only known through samples.

    The payment targets g incentivised agents via the empirical quantile at
    g/s; v and r carry the model's epsilon so the guarantees survive the
    estimation error. Raises InfeasibleParameters for g <= s*epsilon.
    """
    if not 0 <= g <= config.s:
        raise ValueError(f"target count g={g} must lie in [0, s={config.s}]")
    eps = model.epsilon
    v = verification_budget_unknown(config.s, config.pi, config.delta, eps, g)
    r = replication_unknown(config.n, config.s, config.pi, config.delta, eps, g)
    if r > config.s:
        if strict:
            raise InfeasibleParameters(
                f"replication r={r} exceeds agent count s={config.s} at g={g}"
            )
        warnings.warn(
            f"replication r={r} clamped to s={config.s} at g={g}",
            stacklevel=2,
        )
        r = config.s
    d = comparison_bound(v, r, config.n, config.s)
    pi_hat = 1.0 - 2.0 ** -v
    payment = d / (pi_hat * config.pi) * quantile(model, g / config.s)
    return ContractParams(
        v=v, r=r, d=d, pi_hat=pi_hat, payment=payment, pi=config.pi, g=g, epsilon=eps
    )
