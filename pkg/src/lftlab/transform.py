"""One-dimensional discrete Legendre-Fenchel transforms.

The fast path assigns each dual point its optimizer through the gradient
rule: x*_j is the grid point x_i whose gradient interval (c_{i-1}, c_i]
contains s_j, with dual points at or below c_0 pinned to x_0 and points
at or above c_{n-2} pinned to x_{n-1}. The brute-force evaluation of the
defining maximum is kept alongside as the independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import DegenerateGrid, InvalidK, OutOfRangeDual
from .grids import DualGrid, FunctionSpec, GradientVector, RegularGrid
from .rational import Number, frac

ADAPTIVE_VARIANTS = ("centered", "right", "left")


@dataclass(frozen=True)
class ConjugateResult:
    """Dual points paired with conjugate values and optimizer indices."""

    dual: DualGrid
    values: tuple
    optimizer_index: tuple[int, ...]

    def pairs(self):
        return tuple(zip(self.dual.points(), self.values))


def discrete_gradients(f: FunctionSpec, epsilon: Number = 1) -> GradientVector:
    """Forward differences (f(x_{i+1}) - f(x_i)) / gamma_x for all i."""
    if f.n < 3:
        raise DegenerateGrid(f"need n >= 3 primal points, got {f.n}")
    f.require_convex()
    gamma = f.grid.gamma
    c = tuple((f.samples[i + 1] - f.samples[i]) / gamma for i in range(f.n - 1))
    return GradientVector(c=c, epsilon=frac(epsilon), grid=f.grid)


def nontrivial_dual_range(g: GradientVector) -> tuple[Fraction, Fraction]:
    """The closed interval [c_0, c_{n-2}]; outside it optimizers are pinned."""
    return (g.lo, g.hi)


def regular_dual_grid(rng: tuple[Number, Number], k: int) -> DualGrid:
    """Regular grid with s_0 = lo and s_{k-1} = hi.

    A degenerate range (lo == hi) yields k coincident points with zero
    spacing rather than an error, so constant functions stay usable.
    """
    if k < 2:
        raise InvalidK(f"need k >= 2 dual points, got {k}")
    lo, hi = frac(rng[0]), frac(rng[1])
    if lo > hi:
        raise ValueError("dual range is reversed")
    gamma_s = (hi - lo) / (k - 1)
    return DualGrid(s0=lo, gamma_s=gamma_s, k=k, kind="regular")


def assign_optimizer(g: GradientVector, s: Fraction) -> int:
    """Optimizer index for a single dual point inside [c_0, c_{n-2}]."""
    if s <= g.lo:
        return 0
    if s >= g.hi:
        return g.n - 1
    # smallest i with s <= c_i; then c_{i-1} < s holds by minimality
    lo, hi = 0, len(g.c) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if g.c[mid] >= s:
            hi = mid
        else:
            lo = mid + 1
    return lo


def optimizer_map(
    g: GradientVector, dual: DualGrid, clamp: bool = False
) -> tuple[int, ...]:
    """Optimizer indices for every dual point, nondecreasing in j.

    Raises OutOfRangeDual for points outside the closed nontrivial range
    unless ``clamp`` is set, in which case they pin to the boundary
    optimizers (the trivial dual region).
    """
    points = dual.points()
    if not clamp:
        for s in points:
            if s < g.lo or s > g.hi:
                raise OutOfRangeDual(
                    f"dual point {s} outside [{g.lo}, {g.hi}]; clamp to proceed"
                )
    out = []
    i = 0
    top = len(g.c) - 1
    for s in points:
        if s <= g.lo:
            out.append(0)
            continue
        if s >= g.hi:
            out.append(g.n - 1)
            continue
        while i < top and g.c[i] < s:
            i += 1
        out.append(i)
    return tuple(out)


def _conjugate_from_assignment(
    f: FunctionSpec, dual: DualGrid, idx: Sequence[int]
) -> ConjugateResult:
    xs = f.grid
    values = tuple(
        dual.point(j) * xs.point(i) - f.samples[i] for j, i in enumerate(idx)
    )
    return ConjugateResult(dual=dual, values=values, optimizer_index=tuple(idx))


def lft_regular(
    f: FunctionSpec,
    dual: DualGrid,
    epsilon: Optional[Number] = None,
    clamp: bool = False,
) -> ConjugateResult:
    """Linear-time transform on a sorted regular dual grid."""
    eps = epsilon if epsilon is not None else (dual.gamma_s if dual.gamma_s > 0 else 1)
    g = discrete_gradients(f, eps)
    idx = optimizer_map(g, dual, clamp=clamp)
    return _conjugate_from_assignment(f, dual, idx)


def adaptive_dual_points(g: GradientVector, variant: str = "centered") -> tuple:
    """Adaptive dual points with one point per primal index (k = n).

    The boundary midpoints collapse onto c_0 and c_{n-2}; this keeps every
    output independent of the sentinel offset.
    """
    if variant not in ADAPTIVE_VARIANTS:
        raise ValueError(f"unknown adaptive variant {variant!r}")
    c = g.c
    n = g.n
    if variant == "centered":
        pts = [c[0]]
        pts += [(c[i - 1] + c[i]) / 2 for i in range(1, n - 1)]
        pts.append(c[-1])
    elif variant == "right":
        pts = list(c) + [c[-1]]
    else:  # left
        pts = [c[0]] + list(c)
    return tuple(pts)


def lft_adaptive(
    f: FunctionSpec, variant: str = "centered", epsilon: Number = 1
) -> ConjugateResult:
    """Adaptive-dual transform; each dual point's optimizer is its own index."""
    g = discrete_gradients(f, epsilon)
    pts = adaptive_dual_points(g, variant)
    dual = DualGrid.from_points(pts, kind="adaptive")
    idx = tuple(range(f.n))
    return _conjugate_from_assignment(f, dual, idx)


def lft_brute(f: FunctionSpec, dual: DualGrid) -> ConjugateResult:
    """Exhaustive max over all primal points; the oracle for everything else.

    Accepts nonconvex samples. Ties resolve to the smallest maximizing
    index, matching the half-open gradient rule.
    """
    xs = f.grid.points()
    values = []
    idx = []
    for j in range(dual.k):
        s = dual.point(j)
        best = s * xs[0] - f.samples[0]
        best_i = 0
        for i in range(1, f.n):
            cand = s * xs[i] - f.samples[i]
            if cand > best:
                best = cand
                best_i = i
        values.append(best)
        idx.append(best_i)
    return ConjugateResult(dual=dual, values=tuple(values), optimizer_index=tuple(idx))


def double_transform(f: FunctionSpec, k: Optional[int] = None) -> ConjugateResult:
    """Transform twice over canonical dual grids; values never exceed f."""
    g = discrete_gradients(f)
    dual = regular_dual_grid(nontrivial_dual_range(g), k or f.n)
    if dual.gamma_s == 0:
        raise DegenerateGrid("double transform needs a nondegenerate dual range")
    first = lft_regular(f, dual)
    fstar = FunctionSpec(
        grid=RegularGrid(x0=dual.s0, gamma=dual.gamma_s, n=dual.k),
        samples=first.values,
    )
    g2 = discrete_gradients(fstar)
    dual2 = regular_dual_grid(nontrivial_dual_range(g2), k or f.n)
    return lft_regular(fstar, dual2)


def convergence_gap(
    f: FunctionSpec,
    continuous_conjugate: Callable[[Fraction], Fraction],
    dual: DualGrid,
) -> Fraction:
    """max_j |cc(s_j) - f*(s_j)| against a known closed-form conjugate."""
    discrete = lft_regular(f, dual)
    gap = Fraction(0)
    for j in range(dual.k):
        diff = continuous_conjugate(dual.point(j)) - discrete.values[j]
        gap = max(gap, abs(diff))
    return gap
