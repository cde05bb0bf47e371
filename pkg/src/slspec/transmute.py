"""Images of Chebyshev polynomials under the transmutation operator.

The operator taking the free equation into u'' - q u acts on monomials
by x^k -> phi_k, so the image of any polynomial is the same linear
combination of the phi_k.  Pushing the Chebyshev expansion of sin(b*x)
through it and evaluating at x = 1 yields the characteristic function

    Phi(b) = 2 * sum_{m=0}^{N} (-1)^m J_{2m+1}(b) * [T(T_{2m+1})](1)

whose positive zeros give the Dirichlet eigenvalues b^2.  The kernel of
the operator is never constructed.

Chebyshev coefficients are kept as exact Python integers: rows up to
n = 60 carry entries ~2^59 whose cancellations must not be polluted by
storage rounding.  The dot products against the endpoint values
phi_k(1) run in extended precision with compensated summation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bessel import bessel_j_sequence
from .grid import SampledFunction
from .spps import CLD, LD, PhiBasis

MAX_TABLE_ORDER = 60
MAX_BETA = 200.0


@dataclass(frozen=True)
class ChebyshevTable:
    """Monomial coefficients of T_0..T_n as exact integers.

    ``coeffs[n][j]`` is the coefficient of x^j in T_n(x).
    """

    n_max: int
    coeffs: tuple = field(repr=False)

    def evaluate(self, n: int, x: float) -> float:
        # Horner on the exact coefficients
        acc = 0.0
        for c in reversed(self.coeffs[n]):
            acc = acc * x + c
        return acc


def chebyshev_table(n_max: int) -> ChebyshevTable:
    """Integer coefficient rows via T_{n+1} = 2x T_n - T_{n-1}."""
    if not 0 <= n_max <= MAX_TABLE_ORDER:
        raise ValueError(f"n_max must be in [0, {MAX_TABLE_ORDER}], got {n_max}")
    rows = [(1,), (0, 1)]
    for _ in range(2, n_max + 1):
        prev, last = rows[-2], rows[-1]
        new = [0] + [2 * c for c in last]
        for j, c in enumerate(prev):
            new[j] -= c
        rows.append(tuple(new))
    return ChebyshevTable(n_max=n_max, coeffs=tuple(rows[: n_max + 1]))


def _compensated_dot(ints, values):
    """sum_j ints[j] * values[j] with Neumaier compensation, extended precision.

    ``values`` is a clongdouble array; real and imaginary parts are
    accumulated separately.
    """
    out = []
    for part in (values.real, values.imag):
        s = LD(0.0)
        comp = LD(0.0)
        for c, v in zip(ints, part):
            if c == 0:
                continue
            t = LD(c) * v
            new = s + t
            if abs(s) >= abs(t):
                comp += (s - new) + t
            else:
                comp += (t - new) + s
            s = new
        out.append(s + comp)
    return CLD(out[0] + 1j * out[1])


@dataclass(frozen=True)
class TransmutedImages:
    """Endpoint (and optionally whole-grid) images of T_0..T_n.

    ``G[n]`` is the image of T_n evaluated at x = 1, i.e. the Chebyshev
    coefficient combination of the phi_k(1).
    """

    basis: PhiBasis
    table: ChebyshevTable
    G: np.ndarray = field(repr=False)
    G_fn: tuple | None = field(repr=False, default=None)
    _G_ld: np.ndarray = field(repr=False, default=None)

    @property
    def n_max(self) -> int:
        return self.table.n_max

    def G_extended(self) -> np.ndarray:
        return self._G_ld


def transmuted_images(
    basis: PhiBasis, table: ChebyshevTable, with_grid: bool = False
) -> TransmutedImages:
    """Images G[n] = sum_j coeffs[n][j] * phi_j(1) (and on the grid if asked)."""
    if table.n_max > basis.K_max:
        raise ValueError(
            f"basis too short: table needs K_max >= {table.n_max}, "
            f"basis has {basis.K_max}"
        )
    phi1 = basis.phi_at_1_extended()
    G_ld = np.array(
        [_compensated_dot(row, phi1[: len(row)]) for row in table.coeffs], dtype=CLD
    )

    G_fn = None
    if with_grid:
        npts = basis.grid.n_points
        phi_mat = np.stack([p.values for p in basis.phi[: table.n_max + 1]])
        G_fn = []
        for row in table.coeffs:
            c = np.asarray(row, dtype=np.float64)
            G_fn.append(SampledFunction(basis.grid, c @ phi_mat[: len(row)]))
        G_fn = tuple(G_fn)

    return TransmutedImages(
        basis=basis,
        table=table,
        G=G_ld.astype(np.complex128),
        G_fn=G_fn,
        _G_ld=G_ld,
    )


@dataclass(frozen=True)
class TransmutationChar:
    """Truncated characteristic function of the transmutation method."""

    images: TransmutedImages
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if 2 * self.N + 1 > self.images.n_max:
            raise ValueError(
                f"images only reach order {self.images.n_max}, "
                f"need 2N+1 = {2 * self.N + 1}"
            )


def _check_beta(beta: float) -> None:
    if not np.isfinite(beta) or abs(beta) > MAX_BETA:
        raise ValueError(f"beta must be real with |beta| <= {MAX_BETA:g}, got {beta!r}")


def phi_char(char: TransmutationChar, beta: float) -> complex:
    """Phi(beta) = 2 sum_{m<=N} (-1)^m J_{2m+1}(beta) G[2m+1].

    Approximates, at x = 1, the solution of u'' - q u = -beta^2 u with
    u(0) = 0 and u'(0) = beta; Phi(0) = 0 is a structural zero, not an
    eigenvalue.
    """
    _check_beta(beta)
    G = char.images.G_extended()
    J = bessel_j_sequence(2 * char.N + 1, beta)
    acc = CLD(0.0)
    sign = 1.0
    for m in range(char.N + 1):
        acc = acc + sign * LD(J[2 * m + 1]) * G[2 * m + 1]
        sign = -sign
    return complex(2.0 * acc)


def _grid_images_required(char: TransmutationChar):
    if char.images.G_fn is None:
        raise ValueError(
            "whole-grid images not computed; build transmuted_images(..., with_grid=True)"
        )
    return char.images.G_fn


def transmute_sin(char: TransmutationChar, beta: float) -> SampledFunction:
    """Image of sin(beta*x) on the whole grid: u(0) = 0, u'(0) ~ beta."""
    _check_beta(beta)
    G_fn = _grid_images_required(char)
    grid = char.images.basis.grid
    J = bessel_j_sequence(2 * char.N + 1, beta)
    acc = np.zeros(grid.n_points, dtype=np.complex128)
    sign = 1.0
    for m in range(char.N + 1):
        acc += sign * J[2 * m + 1] * G_fn[2 * m + 1].values
        sign = -sign
    return SampledFunction(grid, 2.0 * acc)


def transmute_cos(char: TransmutationChar, beta: float) -> SampledFunction:
    """Image of cos(beta*x): J_0(beta) G_0 + 2 sum_{m>=1} (-1)^m J_2m(beta) G_2m.

    Satisfies u(0) = 1, u'(0) ~ h; useful for conditions involving u'(0)
    at the left endpoint, not wired into the Dirichlet pipeline.
    """
    _check_beta(beta)
    G_fn = _grid_images_required(char)
    grid = char.images.basis.grid
    J = bessel_j_sequence(2 * char.N, beta)
    acc = J[0] * G_fn[0].values.astype(np.complex128)
    sign = -1.0
    for m in range(1, char.N + 1):
        acc += 2.0 * sign * J[2 * m] * G_fn[2 * m].values
        sign = -sign
    return SampledFunction(grid, acc)
