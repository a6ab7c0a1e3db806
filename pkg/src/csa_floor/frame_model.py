"""Random contention frames as bipartite user/slot graphs.

One frame is n slots; each of m users draws a repetition degree, picks that
many distinct slots uniformly at random, and each placed copy then survives
the erasure channel independently. The surviving copies define a bipartite
graph between users and slots; all decoding and stopping-set analysis happens
on that graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .distributions import ChannelModel, DegreeDistribution, induce


class SlotCountTooSmall(ValueError):
    """Frame has fewer slots than the largest drawable degree needs."""


class SamplingMode(Enum):
    PHYSICAL = "physical"
    INDUCED = "induced"


@dataclass(frozen=True)
class UserRecord:
    """One user: drawn degree plus the slots whose copies survived."""

    original_degree: int
    slots: frozenset[int]

    @property
    def received_degree(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class FrameGraph:
    """Post-erasure bipartite graph of one contention frame."""

    n: int
    users: tuple[UserRecord, ...]

    @property
    def m(self) -> int:
        return len(self.users)


@dataclass(frozen=True)
class FrameConfig:
    m: int
    n: int
    dist: DegreeDistribution
    channel: ChannelModel = field(default_factory=lambda: ChannelModel(0.0))
    sampling_mode: SamplingMode = SamplingMode.PHYSICAL

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"user count must be non-negative, got {self.m}")
        if self.n < 1:
            raise ValueError(f"slot count must be positive, got {self.n}")
        need = self.dist.max_support_degree()
        if self.n < need:
            raise SlotCountTooSmall(
                f"n = {self.n} slots cannot host degree-{need} users"
            )


def sample_frame(config: FrameConfig, rng: np.random.Generator) -> FrameGraph:
    """Draw one random frame; deterministic given the generator state.

    Physical mode draws each user's degree from the original distribution,
    places the copies in a uniform subset of slots, then erases each copy
    independently. Induced mode draws the post-erasure degree directly from
    the induced distribution and skips the erasure step; the two modes yield
    identically distributed graphs (the survivors of a uniform l-subset form
    a uniform k-subset).
    """
    if config.sampling_mode is SamplingMode.PHYSICAL:
        draw = config.dist
        eps = config.channel.epsilon
    else:
        draw = induce(config.dist, config.channel)
        eps = 0.0
    cdf = np.cumsum(draw.probs)
    q = draw.q
    users = []
    for _ in range(config.m):
        deg = int(np.searchsorted(cdf, rng.random(), side="right"))
        if deg > q:  # guard against cdf[-1] rounding just below 1
            deg = q
        if deg == 0:
            slots = frozenset()
        else:
            chosen = rng.choice(config.n, size=deg, replace=False)
            if eps > 0.0:
                chosen = chosen[rng.random(deg) >= eps]
            slots = frozenset(int(s) for s in chosen)
        users.append(UserRecord(original_degree=deg, slots=slots))
    return FrameGraph(n=config.n, users=tuple(users))


def profile(graph: FrameGraph, q: int | None = None) -> tuple[int, ...]:
    """Graph profile: entry l counts users with l surviving copies."""
    degrees = [u.received_degree for u in graph.users]
    if q is None:
        q = max(degrees, default=0)
    counts = [0] * (q + 1)
    for d in degrees:
        counts[d] += 1
    return tuple(counts)


def multinomial_pmf(u, dist: DegreeDistribution, m: int) -> float:
    """Probability that m users drawn from dist have profile u.

    Returns 0 when the profile total differs from m or when it puts users on
    degrees beyond the distribution's range.
    """
    counts = [int(c) for c in u]
    if any(c < 0 for c in counts):
        raise ValueError(f"profile entries must be non-negative, got {u}")
    if sum(counts) != m:
        return 0.0
    if len(counts) > dist.q + 1 and any(c > 0 for c in counts[dist.q + 1 :]):
        return 0.0
    value = float(math.factorial(m))
    for l, c in enumerate(counts):
        if c == 0:
            continue
        value *= dist.probs[l] ** c / math.factorial(c)
    return value


def dump_frame(graph: FrameGraph) -> str:
    """Debug text dump: header line, then one ``degree<TAB>slot,slot`` per user."""
    lines = [f"n={graph.n}"]
    for user in graph.users:
        slots = ",".join(str(s) for s in sorted(user.slots))
        lines.append(f"{user.original_degree}\t{slots}")
    return "\n".join(lines)
