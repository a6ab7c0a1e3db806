"""Catalog of dominant stopping sets and residual-graph classification.

A non-empty set of users (all with at least one surviving copy) is a stopping
set when every slot it occupies holds at least two of its copies; the peeling
decoder can never resolve any member. The eight catalog entries below are the
small structures that dominate the error floor for distributions that are
heavy on degrees 2 and 3. Each entry carries its abstract topology (users as
sets of slot labels), its profile (user counts by degree), and the closed-form
placement probability ``beta(n)``.

Classification matches a residual component against the catalog by degree
profile first, then by exhaustive slot-relabeling (catalog structures use at
most 4 slots, so at most 4! bijections are tried); anything else is "Other".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Sequence

from .distributions import DegreeDistribution
from .frame_model import FrameGraph, SlotCountTooSmall, UserRecord, multinomial_pmf

DEGREE0_LABEL = "Degree0"
OTHER_LABEL = "Other"


class TooFewUsers(ValueError):
    """Graph has fewer users than the stopping-set class needs."""


@dataclass(frozen=True)
class StoppingSetClass:
    """One catalog entry: id, degree profile, abstract topology, beta formula."""

    id: str
    profile: tuple[int, ...]
    topology: tuple[frozenset[str], ...]
    beta_fn: Callable[[Fraction], Fraction]

    @property
    def size(self) -> int:
        """Number of users in the structure."""
        return sum(self.profile)

    @property
    def max_degree(self) -> int:
        return len(self.profile) - 1

    def profile_padded(self, q: int) -> tuple[int, ...]:
        return tuple(self.profile) + (0,) * (q + 1 - len(self.profile))


def _users(*slot_groups: str) -> tuple[frozenset[str], ...]:
    return tuple(frozenset(group) for group in slot_groups)


CATALOG: tuple[StoppingSetClass, ...] = (
    # Two degree-1 users colliding in one slot.
    StoppingSetClass("S1", (0, 2), _users("a", "a"), lambda n: 1 / n),
    # Degree-2 user covered by a degree-1 user in each of its slots.
    StoppingSetClass("S2", (0, 2, 1), _users("ab", "a", "b"), lambda n: 2 / n**2),
    # Degree-3 user covered by three degree-1 users.
    StoppingSetClass(
        "S3", (0, 3, 0, 1), _users("abc", "a", "b", "c"), lambda n: 6 / n**3
    ),
    # Degree-3 user, degree-2 user on two of its slots, degree-1 on the third.
    StoppingSetClass(
        "S4", (0, 1, 1, 1), _users("abc", "ab", "c"), lambda n: 6 / ((n - 1) * n**2)
    ),
    # Two degree-2 users on the same slot pair (shortest cycle).
    StoppingSetClass("S5", (0, 0, 2), _users("ab", "ab"), lambda n: 2 / ((n - 1) * n)),
    # Three degree-2 users forming a triangle.
    StoppingSetClass(
        "S6",
        (0, 0, 3),
        _users("ab", "bc", "ac"),
        lambda n: 4 * (n - 3) / ((n - 2) * n**3),
    ),
    # Two degree-3 users sharing two slots, closed by a degree-2 user.
    StoppingSetClass(
        "S7",
        (0, 0, 1, 2),
        _users("acd", "bcd", "ab"),
        lambda n: 36 * (n - 3) / ((n - 2) * (n - 1) * n**3),
    ),
    # Two degree-3 users on the same slot triple.
    StoppingSetClass(
        "S8",
        (0, 0, 0, 2),
        _users("abc", "abc"),
        lambda n: 6 / ((n - 2) * (n - 1) * n),
    ),
)

CATALOG_BY_ID: dict[str, StoppingSetClass] = {c.id: c for c in CATALOG}


def beta(sclass: StoppingSetClass, n: int) -> float:
    """Placement probability of the class in a frame with n slots."""
    if n < 4:
        raise SlotCountTooSmall(f"catalog beta formulas need n >= 4, got {n}")
    return float(sclass.beta_fn(n))


def beta_exact(sclass: StoppingSetClass, n: int) -> Fraction:
    """Same formula as beta() evaluated in exact rational arithmetic."""
    if n < 4:
        raise SlotCountTooSmall(f"catalog beta formulas need n >= 4, got {n}")
    return sclass.beta_fn(Fraction(n))


def alpha(sclass: StoppingSetClass, m: int, induced: DegreeDistribution) -> float:
    """Expected number of ways to pick the class's user multiset from a frame.

    Equals C(m, s) times the multinomial probability that s users drawn from
    the induced distribution realize the class profile, where s is the class
    size.
    """
    s = sclass.size
    if m < s:
        raise TooFewUsers(f"class {sclass.id} needs {s} users, frame has {m}")
    if sclass.max_degree > induced.q:
        return 0.0
    prof = sclass.profile_padded(induced.q)
    return math.comb(m, s) * multinomial_pmf(prof, induced, s)


def rho(sclass: StoppingSetClass, m: int, n: int, induced: DegreeDistribution) -> float:
    """Expected occurrence count alpha * beta; 0 when m is too small."""
    if m < sclass.size:
        return 0.0
    return alpha(sclass, m, induced) * beta(sclass, n)


def is_stopping_set(fragment: FrameGraph) -> bool:
    """True iff non-empty, no degree-0 users, and every occupied slot has >= 2 copies."""
    if not fragment.users:
        return False
    occupancy: dict[int, int] = {}
    for user in fragment.users:
        if not user.slots:
            return False
        for s in user.slots:
            occupancy[s] = occupancy.get(s, 0) + 1
    return all(count >= 2 for count in occupancy.values())


def components(residual: FrameGraph) -> tuple[FrameGraph, ...]:
    """Connected components of the user/slot incidence graph.

    Users sharing a slot land in one component; users with no surviving
    copies come back as isolated single-user fragments.
    """
    slot_users: dict[int, list[int]] = {}
    for idx, user in enumerate(residual.users):
        for s in user.slots:
            slot_users.setdefault(s, []).append(idx)

    seen = [False] * len(residual.users)
    out = []
    for start in range(len(residual.users)):
        if seen[start]:
            continue
        seen[start] = True
        member_idx = [start]
        stack = [start]
        while stack:
            idx = stack.pop()
            for s in residual.users[idx].slots:
                for other in slot_users[s]:
                    if not seen[other]:
                        seen[other] = True
                        member_idx.append(other)
                        stack.append(other)
        members = tuple(residual.users[i] for i in sorted(member_idx))
        out.append(FrameGraph(n=residual.n, users=members))
    return tuple(out)


def classify_slot_sets(slot_sets: Sequence[frozenset[int]]) -> str:
    """Classify one connected component given as the users' slot sets."""
    if len(slot_sets) == 1 and not slot_sets[0]:
        return DEGREE0_LABEL
    if any(not ss for ss in slot_sets):
        return OTHER_LABEL

    degrees = sorted(len(ss) for ss in slot_sets)
    slots = sorted({s for ss in slot_sets for s in ss})
    target = sorted(tuple(sorted(ss)) for ss in slot_sets)

    for sclass in CATALOG:
        tpl_degrees = sorted(len(u) for u in sclass.topology)
        if degrees != tpl_degrees:
            continue
        labels = sorted({l for u in sclass.topology for l in u})
        if len(labels) != len(slots):
            continue
        for perm in permutations(slots):
            relabel = dict(zip(labels, perm))
            inst = sorted(tuple(sorted(relabel[l] for l in u)) for u in sclass.topology)
            if inst == target:
                return sclass.id
    return OTHER_LABEL


def classify(fragment: FrameGraph) -> str:
    """Catalog id of a residual component, Degree0, or Other."""
    return classify_slot_sets([user.slots for user in fragment.users])


def instantiate(
    sclass: StoppingSetClass, slot_map: dict[str, int], n: int
) -> FrameGraph:
    """Concrete FrameGraph for a catalog topology under a slot-label mapping."""
    users = tuple(
        UserRecord(
            original_degree=len(u), slots=frozenset(slot_map[l] for l in u)
        )
        for u in sclass.topology
    )
    return FrameGraph(n=n, users=users)
