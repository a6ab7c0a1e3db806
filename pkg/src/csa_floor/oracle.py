"""Exact brute-force ground truth for small stopping-set instances.

Everything here enumerates complete joint slot assignments and counts in
exact rational arithmetic, so catalog formulas can be checked by equality
rather than tolerance. It exists for tests and manual exploration; the
predictor never calls it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product

from .stopping_sets import CATALOG_BY_ID, StoppingSetClass, classify_slot_sets

MAX_ENUMERATION = 10**8


class EnumerationTooLarge(ValueError):
    """Joint assignment space exceeds MAX_ENUMERATION."""


def _assignment_space(degrees: tuple[int, ...], n: int) -> int:
    size = 1
    for l in degrees:
        size *= math.comb(n, l)
    return size


def _check_size(degrees: tuple[int, ...], n: int):
    size = _assignment_space(degrees, n)
    if size > MAX_ENUMERATION:
        raise EnumerationTooLarge(
            f"{size} joint assignments for degrees {degrees} at n = {n} "
            f"exceed the {MAX_ENUMERATION} cap"
        )


def _matching_assignments(sclass: StoppingSetClass, n: int) -> frozenset:
    """Every ordered joint assignment realizing the class topology.

    Assignments are tuples of per-user sorted slot tuples, users in topology
    order. Ranging over all injective label-to-slot maps covers every
    permutation among equal-degree users automatically.
    """
    labels = sorted({l for u in sclass.topology for l in u})
    out = set()
    for slots in permutations(range(n), len(labels)):
        relabel = dict(zip(labels, slots))
        out.add(
            tuple(tuple(sorted(relabel[l] for l in u)) for u in sclass.topology)
        )
    return frozenset(out)


@lru_cache(maxsize=None)
def _exact_beta(class_id: str, n: int) -> Fraction:
    sclass = CATALOG_BY_ID[class_id]
    degrees = tuple(len(u) for u in sclass.topology)
    _check_size(degrees, n)
    matching = _matching_assignments(sclass, n)
    count = 0
    spaces = [tuple(combinations(range(n), l)) for l in degrees]
    for assignment in product(*spaces):
        if assignment in matching:
            count += 1
    return Fraction(count, _assignment_space(degrees, n))


def exact_beta(sclass: StoppingSetClass, n: int) -> Fraction:
    """Exact probability that the class's users land exactly on its topology."""
    return _exact_beta(sclass.id, n)


@dataclass(frozen=True)
class ExactEventTally:
    """Exact outcome probabilities for one fixed user-degree multiset."""

    degrees: tuple[int, ...]
    n: int
    total: int
    unresolved: dict[int, Fraction]
    labels: dict[str, Fraction]


def _peel_slot_tuples(slot_sets: tuple[tuple[int, ...], ...]) -> tuple[int, ...]:
    """Indices of unresolved users for one concrete assignment."""
    occupants: dict[int, set[int]] = {}
    for idx, slots in enumerate(slot_sets):
        for s in slots:
            occupants.setdefault(s, set()).add(idx)
    stack = [s for s, occ in occupants.items() if len(occ) == 1]
    resolved = [False] * len(slot_sets)
    while stack:
        s = stack.pop()
        occ = occupants.get(s)
        if occ is None or len(occ) != 1:
            continue
        idx = next(iter(occ))
        resolved[idx] = True
        for t in slot_sets[idx]:
            o = occupants[t]
            o.discard(idx)
            if len(o) == 1:
                stack.append(t)
            elif not o:
                del occupants[t]
    return tuple(i for i, r in enumerate(resolved) if not r)


def _component_labels(slot_sets: tuple[tuple[int, ...], ...], unresolved: tuple[int, ...]):
    """Classifier labels of the residual's connected components."""
    labels = []
    remaining = set(unresolved)
    slot_to_users: dict[int, list[int]] = {}
    for idx in unresolved:
        for s in slot_sets[idx]:
            slot_to_users.setdefault(s, []).append(idx)
    while remaining:
        start = remaining.pop()
        members = {start}
        stack = [start]
        while stack:
            idx = stack.pop()
            for s in slot_sets[idx]:
                for other in slot_to_users[s]:
                    if other in remaining:
                        remaining.discard(other)
                        members.add(other)
                        stack.append(other)
        sets = [frozenset(slot_sets[i]) for i in sorted(members)]
        labels.append(classify_slot_sets(sets))
    return labels


def exact_event_probabilities(degrees, n: int) -> ExactEventTally:
    """Peel every joint assignment of the given user degrees exhaustively.

    Returns the exact distribution of the unresolved-user count and, for each
    classifier label, the exact probability that at least one residual
    component carries it.
    """
    degrees = tuple(int(d) for d in degrees)
    if any(d < 0 for d in degrees):
        raise ValueError(f"degrees must be non-negative, got {degrees}")
    if any(d > n for d in degrees):
        raise ValueError(f"degree larger than slot count {n}: {degrees}")
    _check_size(degrees, n)
    total = _assignment_space(degrees, n)

    unresolved_counts: dict[int, int] = {}
    label_counts: dict[str, int] = {}
    spaces = [tuple(combinations(range(n), l)) for l in degrees]
    for assignment in product(*spaces):
        unresolved = _peel_slot_tuples(assignment)
        k = len(unresolved)
        unresolved_counts[k] = unresolved_counts.get(k, 0) + 1
        if unresolved:
            for label in set(_component_labels(assignment, unresolved)):
                label_counts[label] = label_counts.get(label, 0) + 1

    return ExactEventTally(
        degrees=degrees,
        n=n,
        total=total,
        unresolved={k: Fraction(c, total) for k, c in sorted(unresolved_counts.items())},
        labels={lab: Fraction(c, total) for lab, c in sorted(label_counts.items())},
    )
