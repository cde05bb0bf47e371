"""Spectral parameter power series machinery.

Builds, for a potential q on the unit grid:

* a non-vanishing particular solution f of f'' - q f = 0 with f(0) = 1,
  as f = v1 + i*v2 where v1, v2 are the real solutions with initial
  values (1, 0) and (0, 1), each obtained by Picard iteration realized
  through nested cumulative integrals;
* the recursive integral families X^(n), Xt^(n) and the derived
  function systems phi_k, psi_k;
* the two power-series solutions u1, u2 of u'' - q u = lam*u together
  with their first derivatives, and the characteristic value
  S(lam) = u2(1; lam) whose zeros are the Dirichlet eigenvalues.

The recursions are carried out in extended precision (long double) and
the endpoint values phi_k(1) are kept in that precision: they feed dot
products against very large alternating Chebyshev coefficients, where
every spare digit pays off directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import (
    SampledFunction,
    UniformGrid,
    cumulative_simpson_values,
)

LD = np.longdouble
CLD = np.clongdouble

MIN_PARTICULAR_MODULUS = 1e-10
DEFAULT_SERIES_TOL = 1e-16


class ConvergenceError(RuntimeError):
    """Picard iteration failed to reach the requested tolerance."""


class VanishingSolutionError(ArithmeticError):
    """|f| dipped below the guard; the series hypotheses are violated."""


class SeriesTruncationError(RuntimeError):
    """Series term budget exhausted before the tolerance was met."""

    def __init__(self, message: str, lam: complex):
        super().__init__(message)
        self.lam = complex(lam)


@dataclass(frozen=True)
class Potential:
    """Potential q tabulated on the unit grid (complex values allowed)."""

    q: SampledFunction

    @property
    def grid(self) -> UniformGrid:
        return self.q.grid

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.q.values.imag == 0.0))

    @classmethod
    def from_callable(cls, grid: UniformGrid, fn) -> "Potential":
        return cls(SampledFunction.from_callable(grid, fn))

    @classmethod
    def constant(cls, grid: UniformGrid, value: complex) -> "Potential":
        return cls(SampledFunction.constant(grid, value))


def _picard_ivp(q, y0, dy0, spacing, max_iter, tol):
    """Solve y'' = q*y, y(0)=y0, y'(0)=dy0 on the unit grid.

    Successive approximation y <- y_init + II(q*y) where II is the twice
    iterated cumulative integral; returns (y, y') in the dtype of q.
    """
    n = q.shape[0]
    x = np.asarray(spacing, dtype=np.longdouble) * np.arange(n, dtype=np.longdouble)
    y_init = y0 + dy0 * x.astype(q.real.dtype)
    y_init = y_init.astype(q.dtype)
    y = y_init.copy()
    for _ in range(max_iter):
        inner = cumulative_simpson_values(q * y, spacing)
        y_new = y_init + cumulative_simpson_values(inner, spacing)
        delta = float(np.max(np.abs(y_new - y)))
        y = y_new
        if delta < tol * (1.0 + float(np.max(np.abs(y)))):
            dy = dy0 + cumulative_simpson_values(q * y, spacing)
            return y, dy
    raise ConvergenceError(
        f"Picard iteration did not converge in {max_iter} sweeps "
        f"(last update {delta:.3e}); potential too large for the interval?"
    )


def _build_f(potential: Potential, max_iter: int, tol: float):
    """Internal: extended-precision f = v1 + i*v2, f', h = f'(0)."""
    q_vals = potential.q.values
    spacing = potential.grid.spacing
    if potential.is_real:
        q_work = q_vals.real.astype(LD)
    else:
        q_work = q_vals.astype(CLD)
    one = q_work.dtype.type(1.0)
    zero = q_work.dtype.type(0.0)
    v1, v1p = _picard_ivp(q_work, one, zero, spacing, max_iter, tol)
    v2, v2p = _picard_ivp(q_work, zero, one, spacing, max_iter, tol)
    f = v1.astype(CLD) + 1j * v2.astype(CLD)
    fp = v1p.astype(CLD) + 1j * v2p.astype(CLD)
    h = complex(fp[0])
    low = float(np.min(np.abs(f)))
    if low < MIN_PARTICULAR_MODULUS:
        raise VanishingSolutionError(
            f"|f| reaches {low:.3e} on the grid; a non-vanishing particular "
            "solution is required"
        )
    return f, fp, h


def build_particular_solution(
    potential: Potential, max_iter: int = 150, tol: float = 1e-15
):
    """Non-vanishing f with f(0) = 1, its derivative, and h = f'(0).

    For real q this is f = v1 + i*v2, which cannot vanish because the
    zeros of independent real solutions alternate; h comes out exactly i.
    """
    f, fp, h = _build_f(potential, max_iter, tol)
    grid = potential.grid
    f_sf = SampledFunction(grid, f.astype(np.complex128))
    fp_sf = SampledFunction(grid, fp.astype(np.complex128))
    return f_sf, fp_sf, h


@dataclass(frozen=True)
class PhiBasis:
    """The function systems phi_k, psi_k built from a particular solution.

    ``phi_at_1`` holds the endpoint values phi_k(1) that the
    characteristic functions consume; an extended-precision copy is kept
    internally for the Chebyshev image dot products.
    """

    potential: Potential
    f: SampledFunction
    f_prime: SampledFunction
    h: complex
    K_max: int
    phi: tuple = field(repr=False)
    psi: tuple = field(repr=False)
    X: tuple = field(repr=False)
    X_tilde: tuple = field(repr=False)
    phi_at_1: np.ndarray = field(repr=False)
    real_q: bool = True
    _phi_at_1_ld: np.ndarray = field(repr=False, default=None)
    _phi_ld: tuple = field(repr=False, default=None)
    _psi_ld: tuple = field(repr=False, default=None)
    _f_ld: np.ndarray = field(repr=False, default=None)
    _fp_ld: np.ndarray = field(repr=False, default=None)

    @property
    def grid(self) -> UniformGrid:
        return self.f.grid

    def phi_at_1_extended(self) -> np.ndarray:
        return self._phi_at_1_ld


def build_phi_basis(
    potential: Potential,
    K_max: int = 100,
    particular_solution=None,
    max_iter: int = 150,
    tol: float = 1e-15,
) -> PhiBasis:
    """Recursive integral families and phi_k/psi_k up to index K_max.

    ``particular_solution`` may supply a precomputed (f, f', h) triple,
    e.g. f = 1 for the free problem, in which case the Picard stage is
    skipped.
    """
    if K_max < 1:
        raise ValueError("K_max must be >= 1")
    grid = potential.grid
    spacing = grid.spacing
    if particular_solution is not None:
        f_sf, fp_sf, h = particular_solution
        if f_sf.grid != grid:
            raise ValueError("particular solution tabulated on a different grid")
        f = f_sf.values.astype(CLD)
        fp = fp_sf.values.astype(CLD)
        h = complex(h)
        low = float(np.min(np.abs(f)))
        if low < MIN_PARTICULAR_MODULUS:
            raise VanishingSolutionError(
                f"|f| reaches {low:.3e} on the grid; a non-vanishing particular "
                "solution is required"
            )
    else:
        f, fp, h = _build_f(potential, max_iter, tol)
    if abs(complex(f[0]) - 1.0) > 1e-12:
        raise ValueError("particular solution must be normalized with f(0) = 1")

    real_q = potential.is_real
    w_plus = f * f  # f^2
    w_minus = 1.0 / w_plus

    n = grid.n_points
    ones = np.ones(n, dtype=CLD)
    X = [ones]
    Xt = [ones]
    for k in range(1, K_max + 1):
        # X^(n) uses weight (f^2)^(+-1): 1/f^2 for n odd, f^2 for n even;
        # the Xt family starts on the opposite weight.
        wx = w_minus if k % 2 == 1 else w_plus
        wt = w_plus if k % 2 == 1 else w_minus
        X.append(k * cumulative_simpson_values(X[k - 1] * wx, spacing))
        Xt.append(k * cumulative_simpson_values(Xt[k - 1] * wt, spacing))

    phi_ld = []
    psi_ld = []
    for k in range(K_max + 1):
        if k % 2 == 1:
            pk = f * X[k]
            sk = Xt[k] / f
        else:
            pk = f * Xt[k]
            sk = X[k] / f
        if real_q and k % 2 == 1:
            # for real q the odd-index phi's are exactly real: they are the
            # lam-power coefficients of u2, which solves a real initial
            # value problem for every real lam
            pk = pk.real.astype(CLD)
        phi_ld.append(pk)
        psi_ld.append(sk)

    phi_at_1_ld = np.array([p[-1] for p in phi_ld], dtype=CLD)

    as_sf = lambda arr: SampledFunction(grid, arr.astype(np.complex128))
    return PhiBasis(
        potential=potential,
        f=as_sf(f),
        f_prime=as_sf(fp),
        h=h,
        K_max=K_max,
        phi=tuple(as_sf(p) for p in phi_ld),
        psi=tuple(as_sf(s) for s in psi_ld),
        X=tuple(as_sf(a) for a in X),
        X_tilde=tuple(as_sf(a) for a in Xt),
        phi_at_1=phi_at_1_ld.astype(np.complex128),
        real_q=real_q,
        _phi_at_1_ld=phi_at_1_ld,
        _phi_ld=tuple(phi_ld),
        _psi_ld=tuple(psi_ld),
        _f_ld=f,
        _fp_ld=fp,
    )


@dataclass(frozen=True)
class SppsSolution:
    """One of the series solutions u1/u2 with its derivative."""

    basis: PhiBasis
    lam: complex
    u: SampledFunction
    u_prime: SampledFunction
    which: str
    terms_used: int


def spps_solution(
    basis: PhiBasis, lam: complex, which: str = "u2", tol: float = DEFAULT_SERIES_TOL
) -> SppsSolution:
    """Power-series solution u1 or u2 of u'' - q u = lam*u with derivative.

    u1 = sum_k lam^k phi_2k / (2k)!          u1(0) = 1, u1'(0) = h
    u2 = sum_k lam^k phi_2k+1 / (2k+1)!      u2(0) = 0, u2'(0) = 1

    Truncation stops once the sup norm of the current term drops below
    ``tol`` times the sup norm of the partial sum.
    """
    if which not in ("u1", "u2"):
        raise ValueError(f"which must be 'u1' or 'u2', got {which!r}")
    lam = complex(lam)
    grid = basis.grid
    # assemble in extended precision: the alternating series cancels down
    # from term magnitudes ~e^|beta|, and the residual invariants probe
    # the result with 1/h^2-amplifying stencils
    fof = basis._fp_ld / basis._f_ld  # f'/f
    phi = basis._phi_ld
    psi = basis._psi_ld
    lam_ld = CLD(lam)

    if which == "u2":
        u = phi[1].copy()
        du = fof * phi[1] + psi[0]
        index = lambda k: 2 * k + 1
        step = lambda k: lam_ld / ((2 * k) * (2 * k + 1))
        dterm = lambda k, c: c * (fof * phi[2 * k + 1] + (2 * k + 1) * psi[2 * k])
    else:
        u = phi[0].copy()
        du = basis._fp_ld.copy()
        index = lambda k: 2 * k
        step = lambda k: lam_ld / ((2 * k - 1) * (2 * k))
        dterm = lambda k, c: c * (fof * phi[2 * k] + (2 * k) * psi[2 * k - 1])

    coeff = CLD(1.0)
    terms = 1
    sum_scale = float(np.max(np.abs(u)))
    k = 1
    while True:
        if index(k) > basis.K_max:
            raise SeriesTruncationError(
                f"series for {which} not converged within K_max={basis.K_max} "
                f"at lam={lam:g}; |lam| too large for this basis",
                lam,
            )
        coeff = coeff * step(k)
        term = coeff * phi[index(k)]
        u = u + term
        du = du + dterm(k, coeff)
        terms += 1
        sum_scale = max(sum_scale, float(np.max(np.abs(u))))
        if float(np.max(np.abs(term))) < tol * sum_scale:
            break
        k += 1

    return SppsSolution(
        basis=basis,
        lam=lam,
        u=SampledFunction(grid, u.astype(np.complex128)),
        u_prime=SampledFunction(grid, du.astype(np.complex128)),
        which=which,
        terms_used=terms,
    )


def _characteristic_info(basis: PhiBasis, lam: complex, tol: float):
    """S(lam) = u2(1; lam) in extended precision.

    Returns (value, terms_used, peak) where peak is the largest term
    magnitude encountered: eps*peak is the cancellation noise floor the
    eigenvalue scan uses to judge sign changes.
    """
    phi1 = basis.phi_at_1_extended()[1::2]  # phi_{2k+1}(1), k = 0..
    lam_ld = CLD(lam)
    coeff = CLD(1.0)
    total = phi1[0]
    peak = float(np.abs(total))
    scale = peak
    k_available = phi1.shape[0] - 1
    for k in range(1, k_available + 1):
        coeff = coeff * lam_ld / ((2 * k) * (2 * k + 1))
        term = coeff * phi1[k]
        total = total + term
        mag = float(np.abs(term))
        peak = max(peak, mag)
        scale = max(scale, float(np.abs(total)))
        if mag < tol * scale:
            return complex(total), k + 1, peak
    raise SeriesTruncationError(
        f"characteristic series not converged within K_max={basis.K_max} "
        f"at lam={complex(lam):g}",
        lam,
    )


def spps_characteristic(
    basis: PhiBasis, lam: complex, tol: float = DEFAULT_SERIES_TOL
) -> complex:
    """Characteristic value S(lam) = u2(1; lam).

    Zeros of S over lam are the Dirichlet-Dirichlet eigenvalues in the
    convention u'' - q u = lam*u (so lam = -beta^2).
    """
    value, _, _ = _characteristic_info(basis, lam, tol)
    return value
