"""Problem setup, eigenvalue scans and the finite-difference oracle.

A problem on an arbitrary interval (a, b) is normalized to the unit
interval by t = (x - a)/(b - a), which multiplies the potential and the
eigenvalues by scale = (b - a)^2.  Eigenvalues are reported in the
convention u'' - q u = -Lambda u, i.e. Lambda = beta^2 mapped back to
the original interval, matching the usual tabulations.

Both characteristic functions are scanned for sign changes on a fixed
step grid, bracketed, bisected to near machine width and polished with
a few secant steps.  An independent second-order finite-difference
discretization with Richardson extrapolation serves as a cross-check
oracle, its tridiagonal eigenvalues found by Sturm-count bisection.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .grid import SampledFunction, UniformGrid
from .spps import (
    Potential,
    SeriesTruncationError,
    _characteristic_info,
    build_phi_basis,
)
from .transmute import TransmutationChar, chebyshev_table, phi_char, transmuted_images

EPS_EXTENDED = float(np.finfo(np.longdouble).eps)


@dataclass(frozen=True)
class ProblemSpec:
    """A Dirichlet-Dirichlet spectral problem plus solver knobs.

    ``potential`` is either a builtin spec string (``zero``, ``const:C``,
    ``exp``, ``poly:c0,c1,...``) or a pair of sample arrays (x, q(x))
    covering the interval.
    """

    potential: object
    interval: tuple = (0.0, 1.0)
    n_points: int = 5001
    K_max: int = 100
    N: int = 18
    beta_max: float = 55.0
    scan_step: float = 0.25

    def __post_init__(self):
        a, b = self.interval
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ValueError(f"interval must be finite with a < b, got {self.interval}")
        if self.beta_max <= 0 or self.scan_step <= 0:
            raise ValueError("beta_max and scan_step must be positive")


@dataclass(frozen=True)
class NormalizedProblem:
    """Potential pulled back to [0, 1]; lam_orig = lam_unit / scale."""

    q_unit: Potential
    scale: float


@dataclass(frozen=True)
class EigenRecord:
    index: int
    beta: float | None
    lam: float
    residual: float
    method: str


@dataclass(frozen=True)
class Spectrum:
    problem: ProblemSpec
    records: tuple
    diagnostics: dict = field(default_factory=dict)


def _builtin_callable(spec: str):
    if spec == "zero":
        return lambda x: np.zeros_like(x)
    if spec == "exp":
        return np.exp
    if spec.startswith("const:"):
        c = float(spec.split(":", 1)[1])
        return lambda x: np.full_like(x, c)
    if spec.startswith("poly:"):
        coeffs = [float(t) for t in spec.split(":", 1)[1].split(",")]
        if not coeffs:
            raise ValueError("poly potential needs at least one coefficient")
        return lambda x: np.polynomial.polynomial.polyval(x, coeffs)
    raise ValueError(
        f"unknown potential spec {spec!r}; expected zero | const:C | exp | "
        "poly:c0,c1,... | sample arrays"
    )


def _tabulated_callable(xs, ys, a: float, b: float):
    from scipy.interpolate import PchipInterpolator

    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=complex)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 4:
        raise ValueError("tabulated potential needs matching 1-d arrays, >= 4 samples")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise ValueError("tabulated potential contains non-finite samples")
    order = np.argsort(xs)
    xs, ys = xs[order], ys[order]
    span = xs[-1] - xs[0]
    if xs[0] > a + 1e-12 * max(1.0, abs(span)) or xs[-1] < b - 1e-12 * max(1.0, abs(span)):
        raise ValueError(
            f"tabulated samples cover [{xs[0]:g}, {xs[-1]:g}], "
            f"which does not contain [{a:g}, {b:g}]"
        )
    re = PchipInterpolator(xs, ys.real)
    if np.any(ys.imag != 0.0):
        im = PchipInterpolator(xs, ys.imag)
        return lambda x: re(x) + 1j * im(x)
    return lambda x: re(x)


def normalize(problem: ProblemSpec) -> NormalizedProblem:
    """Pull the potential back to [0, 1] with the (b-a)^2 scaling."""
    a, b = problem.interval
    width = b - a
    scale = width * width
    if isinstance(problem.potential, str):
        q_orig = _builtin_callable(problem.potential)
    else:
        xs, ys = problem.potential
        q_orig = _tabulated_callable(xs, ys, a, b)
    grid = UniformGrid(problem.n_points)
    x = a + width * grid.nodes
    q_vals = scale * np.asarray(q_orig(x), dtype=np.complex128)
    if not np.all(np.isfinite(q_vals)):
        raise ValueError("potential evaluates to non-finite values on the interval")
    return NormalizedProblem(q_unit=Potential(SampledFunction(grid, q_vals)), scale=scale)


# ---------------------------------------------------------------------------
# root scanning


def _bisect(fn, lo, hi, flo, fhi, width_tol):
    for _ in range(200):
        if hi - lo <= width_tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval exhausted in floating point
            break
        fmid = fn(mid)
        if fmid == 0.0:
            return mid, mid, 0.0, 0.0
        if (flo < 0.0) != (fmid < 0.0):
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return lo, hi, flo, fhi


def _secant_polish(fn, x0, x1, f0, f1, steps=3):
    for _ in range(steps):
        denom = f1 - f0
        if denom == 0.0:
            break
        x2 = x1 - f1 * (x1 - x0) / denom
        if not math.isfinite(x2):
            break
        try:
            f2 = fn(x2)
        except Exception:
            # secant extrapolated past the evaluable range; the bisected
            # value is already within tolerance
            break
        x0, f0, x1, f1 = x1, f1, x2, f2
        if f1 == 0.0:
            break
    return x1


def _scan_roots(fn, points, accept=None):
    """Sign-change scan of a real function over ascending sample points.

    ``accept(i, fa, fb)`` may veto a bracket (used to reject sign flips
    that sit inside the series noise floor).  Returns refined root
    abscissas.
    """
    values = [fn(p) for p in points]
    roots = []
    for i in range(len(points) - 1):
        a, b = points[i], points[i + 1]
        fa, fb = values[i], values[i + 1]
        if fa == 0.0:
            roots.append(a)
            continue
        if (fa < 0.0) == (fb < 0.0):
            continue
        if accept is not None and not accept(i, fa, fb):
            continue
        width_tol = 1e-12 * (1.0 + abs(0.5 * (a + b)))
        lo, hi, flo, fhi = _bisect(fn, a, b, fa, fb, width_tol)
        if lo == hi:
            roots.append(lo)
        else:
            roots.append(_secant_polish(fn, lo, hi, flo, fhi))
    if values and values[-1] == 0.0:
        roots.append(points[-1])
    return roots


def _beta_grid(beta_max: float, step: float):
    start = 0.5 * step  # excludes the structural zero at beta = 0
    count = int(math.floor((beta_max - start) / step)) + 1
    if count < 2:
        raise ValueError("scan range too small for the given step")
    return start + step * np.arange(count)


def _require_real(norm: NormalizedProblem, what: str):
    if not norm.q_unit.is_real:
        raise ValueError(f"{what} eigenvalue search requires a real potential")


def find_eigenvalues_transmutation(
    norm: NormalizedProblem, spec: ProblemSpec
) -> Spectrum:
    """Dirichlet spectrum from zeros of the transmuted-sine characteristic."""
    _require_real(norm, "transmutation")
    t0 = time.perf_counter()
    basis = build_phi_basis(norm.q_unit, spec.K_max)
    table = chebyshev_table(2 * spec.N + 1)
    char = TransmutationChar(transmuted_images(basis, table), spec.N)

    max_im_rel = 0.0

    def g(beta: float) -> float:
        nonlocal max_im_rel
        z = phi_char(char, beta)
        rel = abs(z.imag) / (1.0 + abs(z))
        if rel > max_im_rel:
            max_im_rel = rel
        return z.real

    betas = _beta_grid(spec.beta_max, spec.scan_step)
    roots = _scan_roots(g, betas)
    records = tuple(
        EigenRecord(
            index=i + 1,
            beta=float(r),
            lam=float(r * r / norm.scale),
            residual=abs(phi_char(char, r)),
            method="transmutation",
        )
        for i, r in enumerate(roots)
    )
    diagnostics = {
        "terms_used": spec.N + 1,
        "max_im_residual": max_im_rel,
        "wall_ms": 1e3 * (time.perf_counter() - t0),
    }
    return Spectrum(problem=spec, records=records, diagnostics=diagnostics)


def find_eigenvalues_spps(norm: NormalizedProblem, spec: ProblemSpec) -> Spectrum:
    """Dirichlet spectrum from zeros of the series characteristic S(lam).

    Scans lam = -beta^2 on the same beta grid as the transmutation
    method, plus lam > 0 (no real beta) when the potential dips below
    the first free eigenvalue, which only happens for potentials with
    sufficiently negative parts.  A sign change is only trusted when the
    characteristic emerges from the cancellation noise floor of its own
    series; if the term budget runs out at large |lam| the scan stops
    there and reports the boundary.
    """
    _require_real(norm, "series")
    t0 = time.perf_counter()
    basis = build_phi_basis(norm.q_unit, spec.K_max)

    max_terms = 0
    max_im_rel = 0.0
    cache: dict = {}

    def s_info(lam: float):
        nonlocal max_terms, max_im_rel
        if lam not in cache:
            value, terms, peak = _characteristic_info(basis, lam, 1e-16)
            max_terms = max(max_terms, terms)
            rel = abs(value.imag) / (1.0 + abs(value))
            if rel > max_im_rel:
                max_im_rel = rel
            cache[lam] = (value, peak)
        return cache[lam]

    def s_real(lam: float) -> float:
        return s_info(lam)[0].real

    truncated_at = None

    def scan_lams(lams):
        # evaluate outward from small |lam| and stop at the first series
        # budget failure; root-scan the surviving points in ascending order
        nonlocal truncated_at
        usable = []
        for lam in lams:
            try:
                s_info(lam)
            except SeriesTruncationError as exc:
                truncated_at = float(exc.lam.real)
                break
            usable.append(lam)
        if len(usable) < 2:
            return []
        pts = sorted(usable)

        def accept(i, fa, fb):
            # trust the bracket only if the values rise above the series
            # cancellation noise on at least one side
            noise = max(
                EPS_EXTENDED * s_info(pts[i])[1],
                EPS_EXTENDED * s_info(pts[i + 1])[1],
            )
            return max(abs(fa), abs(fb)) > 100.0 * noise

        return _scan_roots(s_real, pts, accept=accept)

    betas = _beta_grid(spec.beta_max, spec.scan_step)
    neg_roots = scan_lams([-b * b for b in betas])

    pos_roots = []
    q_min = float(np.min(norm.q_unit.q.values.real))
    pos_limit = -q_min - math.pi**2
    if pos_limit > 0.0:
        gammas = _beta_grid(math.sqrt(pos_limit) + 1.0, spec.scan_step)
        pos_roots = scan_lams([g * g for g in gammas])

    records = []
    for lam_unit in list(pos_roots) + list(neg_roots):
        big_lam = -lam_unit  # Lambda = beta^2 convention
        records.append(
            (
                big_lam / norm.scale,
                math.sqrt(big_lam) if big_lam >= 0.0 else None,
                abs(s_info(lam_unit)[0]),
            )
        )
    records.sort(key=lambda r: r[0])
    out = tuple(
        EigenRecord(index=i + 1, beta=b, lam=lam, residual=res, method="spps")
        for i, (lam, b, res) in enumerate(records)
    )
    diagnostics = {
        "terms_used": max_terms,
        "max_im_residual": max_im_rel,
        "wall_ms": 1e3 * (time.perf_counter() - t0),
    }
    if truncated_at is not None:
        diagnostics["truncated_at_lam"] = truncated_at
    return Spectrum(problem=spec, records=out, diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# finite-difference oracle


def _sturm_count(diag, off2, sigma):
    # negative pivots of LDL^T of (T - sigma I) = eigenvalues below sigma
    count = 0
    p = diag[0] - sigma
    if p == 0.0:
        p = 1e-300
    if p < 0.0:
        count = 1
    for i in range(1, len(diag)):
        p = diag[i] - sigma - off2[i - 1] / p
        if p == 0.0:
            p = 1e-300
        if p < 0.0:
            count += 1
    return count


def _tridiag_smallest(diag, off, k):
    """Smallest k eigenvalues of a symmetric tridiagonal by Sturm bisection."""
    radius = np.abs(off)
    bound = np.zeros_like(diag)
    bound[:-1] += radius
    bound[1:] += radius
    lo0 = float(np.min(diag - bound))
    hi0 = float(np.max(diag + bound))
    d = diag.tolist()
    o2 = (off * off).tolist()
    out = np.empty(k)
    for j in range(k):
        lo, hi = lo0, hi0
        while hi - lo > 1e-13 * max(1.0, abs(lo), abs(hi)):
            mid = 0.5 * (lo + hi)
            if _sturm_count(d, o2, mid) >= j + 1:
                hi = mid
            else:
                lo = mid
        out[j] = 0.5 * (lo + hi)
    return out


def _fd_eigs(q_fn, mesh, n_eigs):
    # -u'' + q u on (0,1), Dirichlet; mesh = number of subintervals
    h = 1.0 / mesh
    x = h * np.arange(1, mesh)
    diag = 2.0 / h**2 + q_fn(x)
    off = np.full(mesh - 2, -1.0 / h**2)
    return _tridiag_smallest(diag, off, n_eigs)


def fd_oracle(norm: NormalizedProblem, n_eigs: int, mesh: int = 1000) -> np.ndarray:
    """First n_eigs Dirichlet eigenvalues from a finite-difference grid.

    Second-order symmetric discretization at ``mesh`` and ``2*mesh``
    subintervals, Richardson-extrapolated to cancel the h^2 term;
    entirely independent of the series machinery.
    """
    _require_real(norm, "finite-difference")
    if mesh < 200:
        raise ValueError(f"mesh must be >= 200, got {mesh}")
    if n_eigs < 1:
        raise ValueError("n_eigs must be >= 1")
    from scipy.interpolate import CubicSpline

    q = norm.q_unit.q
    q_at = CubicSpline(q.grid.nodes, q.values.real)

    lam_h = _fd_eigs(q_at, mesh, n_eigs)
    lam_h2 = _fd_eigs(q_at, 2 * mesh, n_eigs)
    lam = (4.0 * lam_h2 - lam_h) / 3.0
    return lam / norm.scale


def oracle_spectrum(norm: NormalizedProblem, spec: ProblemSpec, mesh: int = 1000) -> Spectrum:
    """FD-oracle eigenvalues packaged like the other methods."""
    t0 = time.perf_counter()
    lam_cap = spec.beta_max**2 / norm.scale
    n_guess = max(1, int(math.sqrt(max(lam_cap, 1.0) * norm.scale) / math.pi) + 2)
    lams = fd_oracle(norm, n_guess, mesh)
    records = tuple(
        EigenRecord(
            index=i + 1,
            beta=math.sqrt(lam * norm.scale) if lam >= 0 else None,
            lam=float(lam),
            residual=0.0,
            method="fd_oracle",
        )
        for i, lam in enumerate(lams)
        if lam <= lam_cap
    )
    diagnostics = {
        "terms_used": 0,
        "max_im_residual": 0.0,
        "wall_ms": 1e3 * (time.perf_counter() - t0),
    }
    return Spectrum(problem=spec, records=records, diagnostics=diagnostics)
