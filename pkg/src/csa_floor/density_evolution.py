"""Asymptotic (n -> infinity) peeling analysis and load threshold.

With m = g*n users and n -> infinity, slot occupancies become Poisson with
mean g times the mean degree, and the decoder admits the standard two-message
fixed-point recursion: starting from q = p = 1,

    p <- 1 - exp(-g * dbar * q)        (slot fails to reveal the user)
    q <- lambda_e(p)                   (user unrevealed through other slots)

where lambda_e is the edge-perspective degree polynomial and dbar the mean
degree. The unresolved user fraction at the fixed point is
sum_l lambda_l p^l. The threshold is the largest load whose fixed point
leaves a vanishing unresolved fraction.

The recursion assumes every user has degree >= 2: with mass on degree 0 or 1
it stops describing the actual decoder (a degree-1 user occupies one slot
and has no "other slots"), so such distributions are rejected. In particular
any erasure-induced distribution with eps > 0 is rejected, reflecting that
the asymptotic threshold over an erasure channel is zero and the floor is
governed by the induced degree-0 mass instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import DegreeDistribution

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000
BISECTION_WIDTH = 1e-4


class DegreeOneUnsupported(ValueError):
    """Recursion undefined for distributions with mass on degree 0 or 1."""


@dataclass(frozen=True)
class DeResult:
    fixed_point_q: float
    unresolved_fraction: float
    converged: bool
    iterations: int


def _check_min_degree(dist: DegreeDistribution):
    if dist.probs[0] > 0.0 or dist.probs[1] > 0.0:
        raise DegreeOneUnsupported(
            "density evolution needs all mass on degrees >= 2; "
            f"got lambda_0 = {dist.probs[0]}, lambda_1 = {dist.probs[1]}"
        )


def _unresolved(probs: tuple[float, ...], p: float) -> float:
    acc = 0.0
    for lam in reversed(probs):
        acc = acc * p + lam
    return acc


def de_fixed_point(
    dist: DegreeDistribution,
    g: float,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    trace: list | None = None,
) -> DeResult:
    """Iterate the recursion at load g until q moves less than tol.

    ``trace``, when given, collects the q value of every iteration (the
    sequence is monotone non-increasing).
    """
    _check_min_degree(dist)
    if g <= 0.0:
        raise ValueError(f"load must be positive, got {g}")
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    edge = dist.edge_perspective()  # coefficient for p^(l-1) at index l-1
    dbar = dist.mean_degree()
    rate = g * dbar

    q = 1.0
    p = 1.0
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        p = 1.0 - math.exp(-rate * q)
        acc = 0.0
        for c in reversed(edge):
            acc = acc * p + c
        if trace is not None:
            trace.append(acc)
        if abs(acc - q) < tol:
            q = acc
            converged = True
            break
        q = acc
    return DeResult(
        fixed_point_q=q,
        unresolved_fraction=_unresolved(dist.probs, p),
        converged=converged,
        iterations=iterations,
    )


def _below_threshold(
    dist: DegreeDistribution, g: float, tol: float, max_iter: int
) -> bool:
    """Classify one load without always running to full convergence.

    Early exit on the way down: q is non-increasing, and the unresolved
    fraction is at most (g*dbar*q)^2 for min degree 2, so once that bound
    drops under tol the limit is certainly below it.
    """
    edge = dist.edge_perspective()
    dbar = dist.mean_degree()
    rate = g * dbar
    q = 1.0
    p = 1.0
    for _ in range(max_iter):
        p = 1.0 - math.exp(-rate * q)
        acc = 0.0
        for c in reversed(edge):
            acc = acc * p + c
        if (rate * acc) ** 2 < tol:
            return True
        if abs(acc - q) < 1e-13 * max(acc, 1e-300):
            break
        q = acc
    return _unresolved(dist.probs, p) < tol


def threshold(dist: DegreeDistribution, tol: float = 1e-8) -> float:
    """Largest load with unresolved fraction below tol, by bisection on [0, 1].

    Bisection runs to width BISECTION_WIDTH and returns the certified-below
    endpoint of the final bracket.
    """
    _check_min_degree(dist)
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    lo, hi = 0.0, 1.0
    if not _below_threshold(dist, hi, tol, DEFAULT_MAX_ITER):
        while hi - lo > BISECTION_WIDTH:
            mid = 0.5 * (lo + hi)
            if _below_threshold(dist, mid, tol, DEFAULT_MAX_ITER):
                lo = mid
            else:
                hi = mid
        return lo
    return hi
