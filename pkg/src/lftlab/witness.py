"""Post-selection diagnostics: the sharing parameter W, the slope ratio nu,
and the acceptance set pairing (index, copy) slots with dual indices.

W is the maximum number of dual points sharing one optimizer. It is
computed by direct multiplicity count, which is authoritative; the floor
of (largest gradient jump)/gamma_s is reported alongside as a cross-check
because alignment of gradients with the dual lattice can shift the true
count by one in either direction (see the package notes in README).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional

from .errors import IndexOutOfRange, ZeroSpacing
from .grids import DualGrid, GradientVector
from .transform import optimizer_map


@dataclass(frozen=True)
class WitnessReport:
    w: int
    nu: Fraction
    success_probability: Fraction
    w_floor: Optional[int] = None
    kappa_bound: Optional[Fraction] = None


def assignment_counts(g: GradientVector, dual: DualGrid) -> tuple[int, ...]:
    """How many dual points each primal index optimizes (clamped rule)."""
    counts = [0] * g.n
    for i in optimizer_map(g, dual, clamp=True):
        counts[i] += 1
    return tuple(counts)


def _first_dual_indices(g: GradientVector, dual: DualGrid) -> dict[int, int]:
    first: dict[int, int] = {}
    for j, i in enumerate(optimizer_map(g, dual, clamp=True)):
        first.setdefault(i, j)
    return first


def witness_params(
    g: GradientVector,
    dual: DualGrid,
    lipschitz: Optional[Fraction] = None,
    strong_convexity: Optional[Fraction] = None,
) -> WitnessReport:
    """Sharing parameter, slope ratio, and exact success probability K/(N W)."""
    if dual.kind == "regular" and dual.gamma_s == 0:
        raise ZeroSpacing("witness parameters need a positive dual spacing")
    counts = assignment_counts(g, dual)
    w = max(counts)
    assert w >= 1
    w_floor = None
    if dual.kind == "regular":
        jump = max(g.c[i] - g.c[i - 1] for i in range(1, len(g.c)))
        w_floor = floor(jump / dual.gamma_s)
    if g.grid is None:
        raise ValueError("gradient vector lacks its primal grid")
    span = g.grid.hi - g.grid.x0
    nu = (g.hi - g.lo) / span
    success = Fraction(dual.k, g.n * w)
    kappa = None
    if lipschitz is not None and strong_convexity is not None:
        kappa = Fraction(lipschitz) / Fraction(strong_convexity)
    return WitnessReport(
        w=w, nu=nu, success_probability=success, w_floor=w_floor, kappa_bound=kappa
    )


def in_acceptance_set(i: int, m: int, g: GradientVector, dual: DualGrid) -> bool:
    """True when copy m of index i corresponds to some dual point.

    Membership is the exact statement "at least m+1 dual points are
    assigned to x_i"; the total count of member pairs therefore equals K
    and the map to dual indices below is a bijection. On grids whose
    points sit at gradient values this reduces to the floor condition
    floor((c_i - c_{i-1})/gamma_s) >= m+1 for interior i with the two
    boundary (m = 0) slots added.
    """
    if not 0 <= i < g.n:
        raise IndexOutOfRange(f"index {i} outside [0, {g.n})")
    if m < 0:
        raise IndexOutOfRange(f"copy slot m must be nonnegative, got {m}")
    return m < assignment_counts(g, dual)[i]


def dual_index(i: int, m: int, g: GradientVector, dual: DualGrid) -> Optional[int]:
    """Dual index j owning copy m of primal index i; None outside the set.

    Restricted to member pairs this enumerates [K] bijectively: the first
    copy of index i lands on the first dual point assigned to i, further
    copies on the following dual indices.
    """
    if not 0 <= i < g.n:
        raise IndexOutOfRange(f"index {i} outside [0, {g.n})")
    if m < 0:
        raise IndexOutOfRange(f"copy slot m must be nonnegative, got {m}")
    counts = assignment_counts(g, dual)
    if m >= counts[i]:
        return None
    first = _first_dual_indices(g, dual)
    return first[i] + m
