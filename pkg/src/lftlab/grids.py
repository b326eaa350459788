"""Primal and dual grid types plus sampled-function containers.

Grids are sorted and, in the regular case, equispaced. A dual grid is
either regular (``s0 + j*gamma_s``) or adaptive (an explicit sorted point
list chosen from the gradient structure of the transformed function).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DegenerateGrid, InvalidK, NonConvexInput
from .rational import FLOAT_ABS_TOL, Number, frac, is_exact


@dataclass(frozen=True)
class RegularGrid:
    """Equispaced sorted primal points x_i = x0 + i*gamma."""

    x0: Fraction
    gamma: Fraction
    n: int

    def __post_init__(self):
        object.__setattr__(self, "x0", frac(self.x0))
        object.__setattr__(self, "gamma", frac(self.gamma))
        if self.n < 2:
            raise DegenerateGrid(f"need at least 2 grid points, got {self.n}")
        if self.gamma <= 0:
            raise DegenerateGrid(f"grid spacing must be positive, got {self.gamma}")

    def point(self, i: int) -> Fraction:
        return self.x0 + i * self.gamma

    def points(self) -> tuple[Fraction, ...]:
        return tuple(self.point(i) for i in range(self.n))

    @property
    def hi(self) -> Fraction:
        return self.point(self.n - 1)


@dataclass(frozen=True)
class DualGrid:
    """Sorted dual points; regular kind is equispaced, adaptive is explicit.

    ``k >= 1``; operations that require a genuine range enforce ``k >= 2``
    themselves. A degenerate regular grid (``gamma_s == 0``) is allowed and
    represents the single-point dual range of a constant function.
    """

    s0: Fraction
    gamma_s: Fraction
    k: int
    kind: str = "regular"
    explicit: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "s0", frac(self.s0))
        object.__setattr__(self, "gamma_s", frac(self.gamma_s))
        if self.k < 1:
            raise InvalidK(f"dual grid needs at least one point, got k={self.k}")
        if self.kind not in ("regular", "adaptive"):
            raise ValueError(f"unknown dual grid kind {self.kind!r}")
        if self.kind == "regular":
            if self.gamma_s < 0:
                raise InvalidK("regular dual spacing must be nonnegative")
            if self.explicit is not None:
                raise ValueError("regular dual grids are procedural, not explicit")
        else:
            if self.explicit is None or len(self.explicit) != self.k:
                raise ValueError("adaptive dual grid needs an explicit point list of length k")
            pts = tuple(frac(p) for p in self.explicit)
            if any(pts[j] > pts[j + 1] for j in range(len(pts) - 1)):
                raise ValueError("dual points must be sorted")
            object.__setattr__(self, "explicit", pts)

    @classmethod
    def from_points(cls, points: Sequence[Number], kind: str = "adaptive") -> "DualGrid":
        pts = tuple(frac(p) for p in points)
        return cls(s0=pts[0], gamma_s=Fraction(0), k=len(pts), kind=kind, explicit=pts)

    def point(self, j: int) -> Fraction:
        if self.kind == "adaptive":
            return self.explicit[j]
        return self.s0 + j * self.gamma_s

    def points(self) -> tuple[Fraction, ...]:
        return tuple(self.point(j) for j in range(self.k))

    @property
    def lo(self) -> Fraction:
        return self.point(0)

    @property
    def hi(self) -> Fraction:
        return self.point(self.k - 1)


def _second_differences(samples: Sequence) -> list:
    return [
        samples[i + 1] - 2 * samples[i] + samples[i - 1]
        for i in range(1, len(samples) - 1)
    ]


@dataclass(frozen=True)
class FunctionSpec:
    """A function known through samples f(x_i) on a regular grid.

    Construction only checks shapes. Discrete convexity is a precondition
    of the gradient-based transforms and is validated there (the brute
    transform accepts nonconvex samples).
    """

    grid: RegularGrid
    samples: tuple
    closed_form: Optional[str] = None

    def __post_init__(self):
        vals = tuple(
            frac(v) if not isinstance(v, float) else v for v in self.samples
        )
        object.__setattr__(self, "samples", vals)
        if len(vals) != self.grid.n:
            raise ValueError(
                f"sample count {len(vals)} does not match grid size {self.grid.n}"
            )

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.samples)

    def value(self, i: int) -> Fraction:
        return self.samples[i]

    def is_convex(self, tol: float = FLOAT_ABS_TOL) -> bool:
        threshold = 0 if self.exact else -tol
        return all(d >= threshold for d in _second_differences(self.samples))

    def require_convex(self, tol: float = FLOAT_ABS_TOL) -> None:
        if not self.is_convex(tol):
            bad = min(_second_differences(self.samples))
            raise NonConvexInput(f"second differences go negative (min {bad})")


@dataclass(frozen=True)
class GradientVector:
    """Forward-difference gradients c_0..c_{n-2} with sentinel offsets.

    The sentinels c_{-1} = c_0 - epsilon and c_{n-1} = c_{n-2} + epsilon
    exist only as tie-break guards; every exported result is independent
    of the chosen epsilon > 0.
    """

    c: tuple
    epsilon: Fraction = field(default=Fraction(1))
    grid: Optional[RegularGrid] = None

    def __post_init__(self):
        vals = tuple(frac(v) if not isinstance(v, float) else v for v in self.c)
        object.__setattr__(self, "c", vals)
        object.__setattr__(self, "epsilon", frac(self.epsilon))
        if self.epsilon <= 0:
            raise ValueError("sentinel offset epsilon must be positive")
        if len(vals) < 2:
            raise DegenerateGrid("need at least two discrete gradients")
        if any(vals[i] > vals[i + 1] for i in range(len(vals) - 1)):
            raise NonConvexInput("gradients must be nondecreasing")

    @property
    def n(self) -> int:
        """Number of primal points of the underlying function."""
        return len(self.c) + 1

    @property
    def below(self) -> Fraction:
        """Sentinel c_{-1}."""
        return self.c[0] - self.epsilon

    @property
    def above(self) -> Fraction:
        """Sentinel c_{n-1}."""
        return self.c[-1] + self.epsilon

    @property
    def lo(self) -> Fraction:
        return self.c[0]

    @property
    def hi(self) -> Fraction:
        return self.c[-1]
