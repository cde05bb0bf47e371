"""Uniform grids, tabulated functions and cumulative Simpson integration.

Everything downstream (recursive integral families, characteristic
functions, eigenvalue scans) runs on functions tabulated on a fixed
uniform grid.  The only nontrivial operation here is the cumulative
(indefinite) integral, computed by composite Simpson with a cubic
half-panel rule on the odd nodes so that every node value is exact for
polynomials up to degree 3 and O(h^4) accurate in general.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DIVISION_GUARD = 1e-14


class GridMismatchError(ValueError):
    """Binary pointwise operation on functions living on different grids."""


class DivisionByNearZeroError(ZeroDivisionError):
    """Divisor modulus below the guard threshold at some node.

    In the recursive-integral constructions this signals a particular
    solution vanishing on the interval, which breaks the hypothesis the
    whole series machinery rests on.
    """


@dataclass(frozen=True)
class UniformGrid:
    """Uniform grid of an odd number of nodes on [a, b] (default [0, 1])."""

    n_points: int
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if self.n_points < 5:
            raise ValueError(f"grid too small: n_points={self.n_points} < 5")
        if self.n_points % 2 == 0:
            raise ValueError(
                f"n_points must be odd for the cumulative Simpson rule, got {self.n_points}"
            )
        if not self.b > self.a:
            raise ValueError(f"degenerate interval [{self.a}, {self.b}]")

    @property
    def spacing(self) -> float:
        return (self.b - self.a) / (self.n_points - 1)

    @property
    def nodes(self) -> np.ndarray:
        # node i is a + i*spacing by definition; keep that representation
        return self.a + self.spacing * np.arange(self.n_points)


@dataclass(frozen=True)
class SampledFunction:
    """Complex-valued function tabulated on a uniform grid."""

    grid: UniformGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.n_points,):
            raise ValueError(
                f"values shape {vals.shape} does not match grid ({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("non-finite sample values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, grid: UniformGrid, fn) -> "SampledFunction":
        return cls(grid, np.asarray(fn(grid.nodes), dtype=np.complex128))

    @classmethod
    def constant(cls, grid: UniformGrid, value: complex) -> "SampledFunction":
        return cls(grid, np.full(grid.n_points, value, dtype=np.complex128))

    def __call__(self, i: int) -> complex:
        return complex(self.values[i])

    @property
    def at_start(self) -> complex:
        return complex(self.values[0])

    @property
    def at_end(self) -> complex:
        return complex(self.values[-1])

    # -- pointwise arithmetic (same-grid checked) ------------------------
    def _binary(self, other, op):
        if isinstance(other, SampledFunction):
            if other.grid != self.grid:
                raise GridMismatchError("operands tabulated on different grids")
            return SampledFunction(self.grid, op(self.values, other.values))
        return SampledFunction(self.grid, op(self.values, complex(other)))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SampledFunction):
            if other.grid != self.grid:
                raise GridMismatchError("operands tabulated on different grids")
            divisor = other.values
        else:
            divisor = np.full(self.grid.n_points, complex(other))
        small = np.abs(divisor) < DIVISION_GUARD
        if np.any(small):
            i = int(np.argmax(small))
            raise DivisionByNearZeroError(
                f"divisor modulus {abs(divisor[i]):.3e} < {DIVISION_GUARD:g} "
                f"at node {i} (vanishing function)"
            )
        return SampledFunction(self.grid, self.values / divisor)


def pointwise(op: str, f: SampledFunction, g) -> SampledFunction:
    """Elementwise combination of sampled functions.

    ``op`` is one of ``multiply``, ``divide``, ``add``, ``scale``; ``g``
    is another function on the same grid, or a scalar for ``scale``.
    """
    if op == "multiply":
        return f * g
    if op == "divide":
        return f / g
    if op == "add":
        return f + g
    if op == "scale":
        return f * complex(g)
    raise ValueError(f"unknown pointwise op {op!r}")


def cumulative_simpson_values(values: np.ndarray, spacing) -> np.ndarray:
    """Cumulative integral of tabulated values on a uniform grid.

    Even nodes get the classic composite Simpson pair sums; odd nodes get
    the cubic (four-point) half-panel rule, so the result is node-exact
    for polynomials of degree <= 3 and O(h^4) otherwise.  Works on any
    real or complex dtype and preserves it, which lets the series
    machinery run the same code in extended precision.
    """
    y = np.asarray(values)
    n = y.shape[0]
    if n < 5 or n % 2 == 0:
        raise ValueError(f"cumulative Simpson needs an odd node count >= 5, got {n}")
    h = y.real.dtype.type(spacing)  # keep the spacing in the working precision
    out = np.zeros_like(y)

    pair = (h / 3.0) * (y[0 : n - 2 : 2] + 4.0 * y[1 : n - 1 : 2] + y[2:n:2])
    out[2::2] = np.cumsum(pair)

    odd = np.arange(1, n - 1, 2)
    fwd = odd[:-1]  # forward stencil {i-1, i, i+1, i+2}
    out[fwd] = out[fwd - 1] + (h / 24.0) * (
        9.0 * y[fwd - 1] + 19.0 * y[fwd] - 5.0 * y[fwd + 1] + y[fwd + 2]
    )
    i = odd[-1]  # last odd node: backward stencil {i-3, i-2, i-1, i}
    out[i] = out[i - 1] + (h / 24.0) * (
        y[i - 3] - 5.0 * y[i - 2] + 19.0 * y[i - 1] + 9.0 * y[i]
    )
    return out


def cumulative_integral(f: SampledFunction) -> SampledFunction:
    """g with g(x_0) = 0 and g(x_i) ~ integral of f from x_0 to x_i."""
    return SampledFunction(
        f.grid, cumulative_simpson_values(f.values, f.grid.spacing)
    )
