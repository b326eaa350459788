"""d-dimensional discrete transforms via nested one-dimensional passes.

The d-dimensional conjugate factorizes into d nested one-dimensional
transforms: each pass replaces one primal axis by a dual axis, carrying
the negated partial transform g = -(max over that axis), and the final
negation restores f*. Row-major layout with axis 0 slowest; the brute
evaluation over all primal points is the oracle for everything here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Sequence

from .errors import NonConvexSlice
from .grids import DualGrid, RegularGrid
from .rational import frac
from .transform import regular_dual_grid

MAX_BRUTE_POINTS = 1 << 20


@dataclass(frozen=True)
class RatTensor:
    """Immutable row-major tensor of exact rationals (axis 0 slowest)."""

    shape: tuple[int, ...]
    flat: tuple

    def __post_init__(self):
        size = 1
        for s in self.shape:
            size *= s
        if size != len(self.flat):
            raise ValueError(f"shape {self.shape} needs {size} values, got {len(self.flat)}")

    @classmethod
    def build(cls, shape: Sequence[int], fn: Callable[[tuple[int, ...]], Fraction]) -> "RatTensor":
        shape = tuple(shape)
        flat = tuple(fn(idx) for idx in product(*(range(s) for s in shape)))
        return cls(shape=shape, flat=flat)

    def offset(self, idx: tuple[int, ...]) -> int:
        pos = 0
        for axis, i in enumerate(idx):
            if not 0 <= i < self.shape[axis]:
                raise IndexError(f"index {idx} out of bounds for shape {self.shape}")
            pos = pos * self.shape[axis] + i
        return pos

    def get(self, idx: tuple[int, ...]) -> Fraction:
        return self.flat[self.offset(idx)]

    def indices(self):
        return product(*(range(s) for s in self.shape))

    def line(self, axis: int, complement: tuple[int, ...]) -> tuple:
        """Values along ``axis`` with the remaining coordinates fixed.

        ``complement`` lists the fixed coordinates in axis order, skipping
        the varying axis.
        """
        idx = list(complement[:axis]) + [0] + list(complement[axis:])
        out = []
        for i in range(self.shape[axis]):
            idx[axis] = i
            out.append(self.get(tuple(idx)))
        return tuple(out)

    def complements(self, axis: int):
        ranges = [range(s) for a, s in enumerate(self.shape) if a != axis]
        return product(*ranges)


@dataclass(frozen=True)
class TensorGrid:
    """Per-axis regular grids with one shared spacing."""

    axes: tuple[RegularGrid, ...]

    def __post_init__(self):
        if not self.axes:
            raise ValueError("need at least one axis")
        gammas = {g.gamma for g in self.axes}
        if len(gammas) != 1:
            raise ValueError(f"axes must share one spacing, got {sorted(gammas)}")

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def gamma(self) -> Fraction:
        return self.axes[0].gamma

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(g.n for g in self.axes)

    @property
    def total(self) -> int:
        size = 1
        for g in self.axes:
            size *= g.n
        return size

    def point(self, idx: tuple[int, ...]) -> tuple[Fraction, ...]:
        return tuple(g.point(i) for g, i in zip(self.axes, idx))


@dataclass(frozen=True)
class TensorSamples:
    grid: TensorGrid
    values: RatTensor

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"value shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    @classmethod
    def from_function(cls, grid: TensorGrid, fn: Callable[..., Fraction]) -> "TensorSamples":
        values = RatTensor.build(grid.shape, lambda idx: frac(fn(*grid.point(idx))))
        return cls(grid=grid, values=values)

    @property
    def d(self) -> int:
        return self.grid.d

    def require_convex_axes(self) -> None:
        """Second differences nonnegative along every axis-aligned line."""
        for axis in range(self.d):
            if self.grid.shape[axis] < 3:
                continue
            for comp in self.values.complements(axis):
                line = self.values.line(axis, comp)
                for i in range(1, len(line) - 1):
                    if line[i + 1] - 2 * line[i] + line[i - 1] < 0:
                        raise NonConvexSlice(
                            f"axis {axis} line at {comp} is not discretely convex"
                        )


@dataclass(frozen=True)
class TensorConjugate:
    """Conjugate values on dual multi-points, with optimizer multi-indices.

    Regular results carry one DualGrid per axis (a product set); adaptive
    results carry explicit per-label dual multi-points instead.
    """

    values: RatTensor
    optimizer: tuple[tuple[int, ...], ...]
    duals: Optional[tuple[DualGrid, ...]] = None
    dual_points: Optional[tuple[tuple[Fraction, ...], ...]] = None

    def dual_point(self, idx: tuple[int, ...]) -> tuple[Fraction, ...]:
        if self.duals is not None:
            return tuple(gq.point(j) for gq, j in zip(self.duals, idx))
        return self.dual_points[self.values.offset(idx)]


def _line_gradients(line: Sequence[Fraction], gamma: Fraction) -> list[Fraction]:
    return [(line[i + 1] - line[i]) / gamma for i in range(len(line) - 1)]


def _require_line_convex(line, axis, comp) -> None:
    for i in range(1, len(line) - 1):
        if line[i + 1] - 2 * line[i] + line[i - 1] < 0:
            raise NonConvexSlice(f"axis {axis} line at {comp} is not discretely convex")


def _assign_line(c: Sequence[Fraction], s: Fraction) -> int:
    """Clamped half-open gradient rule for one line."""
    if s <= c[0]:
        return 0
    if s >= c[-1]:
        return len(c)
    lo, hi = 0, len(c) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if c[mid] >= s:
            hi = mid
        else:
            lo = mid + 1
    return lo


def axis_transform(
    values: RatTensor,
    axis: int,
    x_axis: RegularGrid,
    dual: DualGrid,
    negate: bool = True,
    assignments: Optional[dict] = None,
    check_convex: bool = True,
) -> RatTensor:
    """One-axis transform of a tensor; dual points clamp to each line's range.

    With ``negate`` the output holds g = -(max over the axis), the form
    carried between nested passes. ``assignments`` (if given) records the
    chosen optimizer index per (complement, j) for later reconstruction.
    ``check_convex=False`` skips the per-line convexity guard; the gradient
    rule then still runs but its result is only meaningful for callers that
    verify the outcome independently.
    """
    new_shape = list(values.shape)
    new_shape[axis] = dual.k
    duals = dual.points()
    xs = [x_axis.point(i) for i in range(x_axis.n)]
    flat = [None] * _size(new_shape)
    for comp in values.complements(axis):
        line = values.line(axis, comp)
        if check_convex:
            _require_line_convex(line, axis, comp)
        c = _line_gradients(line, x_axis.gamma)
        for j, s in enumerate(duals):
            i = _assign_line(c, s)
            val = s * xs[i] - line[i]
            if negate:
                val = -val
            idx = list(comp[:axis]) + [j] + list(comp[axis:])
            flat[_offset(new_shape, tuple(idx))] = val
            if assignments is not None:
                assignments[(comp, j)] = i
    return RatTensor(tuple(new_shape), tuple(flat))


def _shrink(v):
    """Integral Fractions as plain ints; exact and cheaper to combine."""
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def _size(shape) -> int:
    size = 1
    for s in shape:
        size *= s
    return size


def _offset(shape, idx) -> int:
    pos = 0
    for axis, i in enumerate(idx):
        pos = pos * shape[axis] + i
    return pos


@dataclass(frozen=True)
class PartialTransform:
    """Result of transforming a single axis: g samples plus the dual used."""

    values: RatTensor
    axis: int
    dual: DualGrid


def partial_transform_g(
    f: TensorSamples, axis: int, dual_axis: DualGrid
) -> PartialTransform:
    """Negated one-axis transform g(..., s, ...) = -max_x {s x - f(..., x, ...)}."""
    if not 0 <= axis < f.d:
        raise IndexError(f"axis {axis} out of range for d={f.d}")
    values = axis_transform(f.values, axis, f.grid.axes[axis], dual_axis, negate=True)
    return PartialTransform(values=values, axis=axis, dual=dual_axis)


def axis_bracket(values: RatTensor, axis: int, gamma: Fraction) -> tuple[Fraction, Fraction]:
    """Shared dual range for one axis: the minimum first gradient over all
    lines up to the maximum last gradient, read off the boundary faces."""
    lo = None
    hi = None
    n = values.shape[axis]
    for comp in values.complements(axis):
        line = values.line(axis, comp)
        first = (line[1] - line[0]) / gamma
        last = (line[n - 1] - line[n - 2]) / gamma
        lo = first if lo is None else min(lo, first)
        hi = last if hi is None else max(hi, last)
    return lo, hi


def canonical_nd_dual_grids(f: TensorSamples, ks: Sequence[int]) -> tuple[DualGrid, ...]:
    """Per-axis regular dual grids spanning each pass's shared range.

    Pass order is the last axis first; each later bracket is computed from
    the exactly transformed intermediate tensor.
    """
    if len(ks) != f.d:
        raise ValueError("need one dual size per axis")
    t = f.values
    grids: list[Optional[DualGrid]] = [None] * f.d
    for axis in range(f.d - 1, -1, -1):
        lo, hi = axis_bracket(t, axis, f.grid.gamma)
        grids[axis] = regular_dual_grid((lo, hi), ks[axis])
        t = axis_transform(t, axis, f.grid.axes[axis], grids[axis], negate=True)
    return tuple(grids)


def lft_nd_regular(f: TensorSamples, duals: Sequence[DualGrid]) -> TensorConjugate:
    """Nested one-axis transforms over given per-axis dual grids.

    Exact for inputs whose axis lines (including those of the intermediate
    partial transforms) are discretely convex; equals the brute force
    enumeration elementwise there.
    """
    if len(duals) != f.d:
        raise ValueError("need one dual grid per axis")
    t = f.values
    assign: list[dict] = [dict() for _ in range(f.d)]
    for axis in range(f.d - 1, -1, -1):
        t = axis_transform(
            t, axis, f.grid.axes[axis], duals[axis], negate=True, assignments=assign[axis]
        )
    values = RatTensor(t.shape, tuple(-v for v in t.flat))
    optimizer = _reconstruct_optimizers(t.shape, assign)
    return TensorConjugate(values=values, optimizer=optimizer, duals=tuple(duals))


def _reconstruct_optimizers(shape, assign) -> tuple[tuple[int, ...], ...]:
    """Walk passes back to front to recover the optimizer multi-index.

    During the pass over axis a the untransformed axes 0..a-1 still hold
    primal coordinates, so resolving axis 0 first makes every lookup key
    available.
    """
    d = len(shape)
    out = []
    for jidx in product(*(range(s) for s in shape)):
        resolved: list[Optional[int]] = [None] * d
        for axis in range(d):
            comp = tuple(
                (resolved[a] if a < axis else jidx[a])
                for a in range(d)
                if a != axis
            )
            resolved[axis] = assign[axis][(comp, jidx[axis])]
        out.append(tuple(resolved))
    return tuple(out)


def lft_nd_adaptive(f: TensorSamples) -> TensorConjugate:
    """Nested per-slice centered adaptive passes; K = N and the optimizer of
    each dual multi-point is the identically indexed primal point."""
    t = f.values
    d = f.d
    s_parts: list[dict[tuple[int, ...], Fraction]] = [dict() for _ in range(d)]
    for axis in range(d - 1, -1, -1):
        gamma = f.grid.gamma
        n = t.shape[axis]
        flat: list = [None] * _size(t.shape)
        for comp in t.complements(axis):
            line = t.line(axis, comp)
            _require_line_convex(line, axis, comp)
            c = _line_gradients(line, gamma)
            pts = [c[0]]
            pts += [(c[i - 1] + c[i]) / 2 for i in range(1, n - 1)]
            pts.append(c[-1])
            for i in range(n):
                s = pts[i]
                val = -(s * f.grid.axes[axis].point(i) - line[i])
                idx = tuple(list(comp[:axis]) + [i] + list(comp[axis:]))
                flat[_offset(t.shape, idx)] = val
                s_parts[axis][idx] = s
        t = RatTensor(t.shape, tuple(flat))
    values = RatTensor(t.shape, tuple(-v for v in t.flat))
    dual_points = []
    optimizer = []
    for idx in values.indices():
        dual_points.append(tuple(_adaptive_component(s_parts, axis, idx) for axis in range(d)))
        optimizer.append(idx)
    return TensorConjugate(
        values=values,
        optimizer=tuple(optimizer),
        dual_points=tuple(dual_points),
    )


def _adaptive_component(s_parts, axis, idx):
    # The axis-a dual component was fixed during the axis-a pass, when axes
    # > a were already transformed and axes < a still primal; the recorded
    # key coincides with the final multi-index in both regimes.
    return s_parts[axis][idx]


def lft_nd_brute(
    f: TensorSamples, dual_points: Sequence[tuple]
) -> TensorConjugate:
    """Exhaustive max over all primal points for each dual multi-point.

    Ties resolve to the lexicographically smallest primal multi-index.
    Accepts arbitrary (also nonconvex) samples.
    """
    if f.grid.total > MAX_BRUTE_POINTS:
        raise ValueError(f"brute force capped at {MAX_BRUTE_POINTS} primal points")
    pts = [tuple(_shrink(frac(c)) for c in p) for p in dual_points]
    values = []
    optimizer = []
    # plain ints where values allow: exact and much faster on 0/1 grids
    axis_pts = [[_shrink(p) for p in g.points()] for g in f.grid.axes]
    flat_vals = [_shrink(v) for v in f.values.flat]
    primal = [
        (idx, tuple(axis_pts[a][i] for a, i in enumerate(idx)), flat_vals[pos])
        for pos, idx in enumerate(f.values.indices())
    ]
    for s in pts:
        best = None
        best_idx = None
        for idx, x, fv in primal:
            cand = sum(si * xi for si, xi in zip(s, x)) - fv
            if best is None or cand > best:
                best = cand
                best_idx = idx
        values.append(frac(best))
        optimizer.append(best_idx)
    shape = (len(pts),)
    return TensorConjugate(
        values=RatTensor(shape, tuple(values)),
        optimizer=tuple(optimizer),
        dual_points=tuple(pts),
    )


def product_dual_points(duals: Sequence[DualGrid]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(product(*(g.points() for g in duals)))
