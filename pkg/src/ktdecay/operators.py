"""Quasi-multiplication operator models and their exact norms.

For a quasi-multiplication operator ``T`` every rational ``f`` without poles
on the spectrum satisfies ``||f(T)|| = sup_{lam in sigma(T)} |f(lam)|``.  The
two norms of interest then reduce to planar optimisation problems:

* ``||T^n (I - T)|| = sup |lam|^n |1 - lam|``       (decay norm)
* ``||R(e^{i theta}, T)|| = 1 / dist(e^{i theta}, sigma(T))``

Three spectral models are provided: a finite point set, a parametrised
curve, and the image of the closed disk under the generating function of a
density (analytic Toeplitz operator).  Curves and symbols are described by
their deficit ``u(t) = 1 - lam(t)`` so that quantities near the point 1 are
computed without cancellation.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
import os

import numpy as np

from . import density as dens
from ._search import grid_max, log_nodes
from .errors import NumericalError, SingularityError, ValidationError
from .ratefun import SampledRate

__all__ = [
    "GridConfig", "OperatorModel", "DiagonalSpectrum", "SpectralCurve", "ToeplitzDensity",
    "power_curve", "ProfileEntry", "DecayProfile", "FiniteSection",
    "spectrum_distance", "resolvent_norm", "resolvent_envelope", "envelope_rate",
    "decay_norm", "decay_profile", "finite_section", "section_decay_norm",
    "max_trusted_n", "THREADS_ENV",
]

PI = math.pi
MODULUS_TOL = 1e-12
THREADS_ENV = "KTDECAY_THREADS"


@dataclass(frozen=True)
class GridConfig:
    """Sampling controls shared by every sup/inf over a spectrum.

    ``t_min`` fixes the innermost curve parameter; when ``None`` it adapts
    to the request (``1/(100 (n+1))`` for decay norms, ``1e-4 |theta|`` for
    distances).  ``per_decade`` is the log-grid density.
    """

    per_decade: int = 64
    t_min: object = None
    xtol: float = 1e-12

    def finest_spacing(self, t_min):
        return t_min * (10.0 ** (1.0 / self.per_decade) - 1.0)


DEFAULT_GRID = GridConfig()


def max_trusted_n(grid):
    """Largest n for which the grid resolves the decay maximiser.

    The finest parameter spacing must not exceed ``1/(10 n)``.  Adaptive
    grids (``t_min=None``) satisfy this for every n.
    """
    if grid.t_min is None:
        return math.inf
    return 1.0 / (10.0 * grid.finest_spacing(grid.t_min))


class OperatorModel:
    """Common interface; all built-in models are contractions (``K = 1``)."""

    power_bound = 1.0
    contains_one = True

    @property
    def name(self):
        return type(self).__name__


@dataclass(frozen=True, eq=False)
class DiagonalSpectrum(OperatorModel):
    """Finite point spectrum in the closed unit disk."""

    points: np.ndarray = field(default_factory=lambda: np.array([1.0 + 0j]))
    contains_one: bool = True
    power_bound: float = 1.0

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.points, dtype=complex)).ravel()
        if self.contains_one and not np.any(p == 1):
            p = np.append(p, 1.0 + 0j)
        p = np.unique(p)
        if np.any(np.abs(p) > 1 + MODULUS_TOL):
            raise ValidationError("spectrum points must lie in the closed unit disk")
        if np.any((np.abs(p) >= 1 - MODULUS_TOL) & (p != 1)):
            raise ValidationError("spectrum meets the unit circle outside {1}")
        object.__setattr__(self, "points", p)

    @property
    def name(self):
        return "diagonal{" + ", ".join(f"{z.real:g}" if z.imag == 0 else f"{z:g}" for z in self.points) + "}"


class _BoundaryModel(OperatorModel):
    """Models whose spectral sup/inf are attained on a parametrised curve.

    Subclasses define ``t_max`` and ``deficit(t) = 1 - lam(t)`` on
    ``[-t_max, t_max]`` with ``deficit(0) = 0``.
    """

    t_max = PI

    def deficit(self, t):
        raise NotImplementedError

    def lam(self, t):
        return 1.0 - self.deficit(t)

    def check_peripheral(self, theta0=1e-3, per_decade=64):
        """Reject curves that reach the unit circle away from ``t = 0``."""
        t = log_nodes(min(theta0, self.t_max), self.t_max, per_decade)
        t = np.concatenate([-t[::-1], t])
        u = self.deficit(t)
        if np.any(np.abs(1 - u) > 1 + MODULUS_TOL):
            raise ValidationError(f"{self.name}: spectrum leaves the closed unit disk")
        log_mod = _log_modulus(u)
        if np.any(log_mod >= -MODULUS_TOL):
            bad = t[np.argmax(log_mod)]
            raise ValidationError(f"{self.name}: spectrum touches the unit circle at t={bad:.6g}")


@dataclass(frozen=True, eq=False)
class SpectralCurve(_BoundaryModel):
    """Normal operator whose spectrum is the curve ``t -> lam(t)``, ``|t| <= t_max``.

    ``deficit_fn`` returns ``1 - lam(t)``; ``lam(0) = 1`` is required.
    """

    deficit_fn: object = None
    t_max: float = PI
    label: str = "curve"
    power_bound: float = 1.0

    def __post_init__(self):
        if self.deficit_fn is None:
            raise ValidationError("SpectralCurve needs a deficit function")
        if abs(complex(np.asarray(self.deficit_fn(np.array([0.0])))[0])) > MODULUS_TOL:
            raise ValidationError("curve must pass through 1 at t = 0")
        self.check_peripheral()

    def deficit(self, t):
        return self.deficit_fn(np.asarray(t, dtype=float))

    @property
    def name(self):
        return self.label


def power_curve(alpha=2.0, scale=1.0):
    """Curve ``lam(t) = (1 - scale |t|^alpha) e^{it}`` for ``|t| <= scale^(-1/alpha)``.

    Resolvent growth is ``eps^-alpha`` at the point 1.
    """
    alpha = float(alpha)
    scale = float(scale)
    if alpha < 1 or scale <= 0:
        raise ValidationError("power_curve needs alpha >= 1 and scale > 0")

    def deficit_fn(t):
        t = np.asarray(t, dtype=float)
        return -np.expm1(1j * t) + scale * np.abs(t) ** alpha * np.exp(1j * t)

    t_max = min(PI, scale ** (-1.0 / alpha))
    return SpectralCurve(deficit_fn, t_max, f"power_curve(alpha={alpha:g}, scale={scale:g})")


@dataclass(frozen=True, eq=False)
class ToeplitzDensity(_BoundaryModel):
    """Analytic Toeplitz operator with symbol ``phi_a``; spectrum ``phi_a(closed disk)``."""

    density: dens.Density = None
    power_bound: float = 1.0

    def __post_init__(self):
        if self.density is None:
            raise ValidationError("ToeplitzDensity needs a density")
        dens.validate(self.density)
        if not dens.is_aperiodic(self.density):
            raise ValidationError(f"{self.density!r} is not aperiodic; sigma(T) meets the circle outside 1")
        self.check_peripheral()

    def deficit(self, t):
        return dens.deficit(self.density, t)

    @property
    def name(self):
        return f"toeplitz[{self.density!r}]"


def _log_modulus(u):
    """log|1 - u| computed from the deficit ``u``; ``-inf`` at the origin."""
    with np.errstate(divide="ignore"):
        return 0.5 * np.log1p(np.abs(u) ** 2 - 2.0 * u.real)


def _side_nodes(t_lo, t_hi, per_decade):
    """Two rows of log(t) nodes, for the positive and the negative half."""
    nodes = np.log(log_nodes(t_lo, t_hi, per_decade))
    return np.vstack([nodes, nodes])


def _signed(rows, u):
    # row 0 is t > 0, row 1 is t < 0
    return np.where(rows % 2 == 0, 1.0, -1.0) * np.exp(u)


# ---------------------------------------------------------------- distance

def spectrum_distance(T, theta, grid=DEFAULT_GRID, full_output=False):
    """``dist(e^{i theta}, sigma(T))`` for scalar or array ``theta``.

    Curves and symbols are scanned on a two-sided logarithmic parameter
    grid with golden-section polishing around each discrete local minimum;
    the parameter ``t = 0`` (the point 1) is always included exactly.
    ``full_output`` also returns the minimising parameter (or point).
    """
    scalar = np.ndim(theta) == 0
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    e_minus_1 = np.expm1(1j * th)
    if isinstance(T, DiagonalSpectrum):
        gaps = np.abs(e_minus_1[:, None] + (1.0 - T.points)[None, :])
        k = np.argmin(gaps, axis=1)
        dist = gaps[np.arange(th.size), k]
        where = T.points[k]
    else:
        dist, where = _curve_distance(T, th, e_minus_1, grid)
    if scalar:
        dist, where = float(dist[0]), where[0]
    return (dist, where) if full_output else dist


def _curve_distance(T, th, e_minus_1, grid):
    abs_th = np.abs(th[th != 0])
    base = abs_th.min() if abs_th.size else 1.0
    t_lo = grid.t_min if grid.t_min is not None else min(1e-3, base) * 1e-4
    t_lo = min(t_lo, T.t_max)
    nodes_one = np.log(log_nodes(t_lo, T.t_max, grid.per_decade))
    nrow = 2 * th.size
    nodes = np.tile(nodes_one, (nrow, 1))

    def neg_gap(rows, u):
        t = _signed(rows, u)
        return -np.abs(e_minus_1[rows // 2] + T.deficit(t))

    best, at = grid_max(neg_gap, nodes, xtol=grid.xtol)
    best = -best.reshape(th.size, 2)
    at = np.exp(at.reshape(th.size, 2)) * np.array([1.0, -1.0])
    side = np.argmin(best, axis=1)
    dist = best[np.arange(th.size), side]
    where = at[np.arange(th.size), side]
    at_one = np.abs(e_minus_1)
    one = at_one <= dist
    dist = np.where(one, at_one, dist)
    where = np.where(one, 0.0, where)
    return dist, where


def resolvent_norm(T, theta, grid=DEFAULT_GRID):
    """``||R(e^{i theta}, T)|| = 1/dist(e^{i theta}, sigma(T))``."""
    dist = spectrum_distance(T, theta, grid)
    if np.any(np.asarray(dist) <= 0):
        raise SingularityError(f"{T.name}: spectrum contains e^(i theta)")
    return 1.0 / dist


# ---------------------------------------------------------------- envelope

def _envelope_core(T, eps, grid):
    """Envelope ``max_{eps <= |theta| <= pi} ||R||`` on an array of eps."""
    eps = np.asarray(eps, dtype=float)
    theta = np.union1d(log_nodes(eps.min(), PI, grid.per_decade), eps)
    both = np.concatenate([theta, -theta])
    r = resolvent_norm(T, both, grid)
    r = np.maximum(r[: theta.size], r[theta.size:])
    # interior local maxima of theta -> R(theta) get polished
    peaks = np.flatnonzero((r[1:-1] > r[:-2]) & (r[1:-1] >= r[2:])) + 1
    extra_at, extra_val = [], []
    if peaks.size:
        lo = np.log(theta[peaks - 1])
        hi = np.log(theta[peaks + 1])

        def obj(rows, u):
            t = np.exp(u)
            rr = resolvent_norm(T, np.concatenate([t, -t]), grid)
            return np.maximum(rr[: t.size], rr[t.size:])

        from ._search import golden_max

        x, f = golden_max(obj, np.arange(peaks.size), lo, hi, xtol=1e-10)
        extra_at = list(np.exp(lo))
        extra_val = list(f)
    # suffix maximum from pi downwards
    suffix = np.maximum.accumulate(r[::-1])[::-1]
    idx = np.searchsorted(theta, eps * (1 - 1e-15))
    out = suffix[idx]
    for left, val in zip(extra_at, extra_val):
        out = np.where(eps <= left, np.maximum(out, val), out)
    return out


def resolvent_envelope(T, eps, grid=DEFAULT_GRID):
    """``sup_{eps <= |theta| <= pi} ||R(e^{i theta}, T)||`` for scalar or array eps."""
    scalar = np.ndim(eps) == 0
    e = np.atleast_1d(np.asarray(eps, dtype=float))
    if np.any(e <= 0) or np.any(e > PI * (1 + 1e-12)):
        raise ValueError("envelope needs 0 < eps <= pi")
    out = _envelope_core(T, np.minimum(e, PI), grid)
    return float(out[0]) if scalar else out


def envelope_rate(T, eps_min=1e-6, per_decade=16, grid=DEFAULT_GRID):
    """Sweep the envelope over a log eps-grid and return it as a rate function."""
    eps = log_nodes(eps_min, PI, per_decade)
    vals = _envelope_core(T, eps, grid)
    vals = np.maximum.accumulate(vals[::-1])[::-1]
    return SampledRate(eps=eps, values=vals, resolvent_majorant=T.contains_one,
                       power_bound_hint=T.power_bound, label=f"envelope[{T.name}]")


# ---------------------------------------------------------------- decay

@dataclass(frozen=True)
class ProfileEntry:
    n: int
    value: float
    method: str
    error_budget: float
    argmax: float = float("nan")


@dataclass(frozen=True)
class DecayProfile:
    """Table ``n -> ||T^n (I - T)||`` with per-entry provenance."""

    entries: tuple
    model: str = ""

    @property
    def n(self):
        return np.array([e.n for e in self.entries], dtype=np.int64)

    @property
    def values(self):
        return np.array([e.value for e in self.entries])

    def __len__(self):
        return len(self.entries)


def decay_norm(T, n, grid=DEFAULT_GRID, full_output=False):
    """``||T^n (I - T)|| = sup_{lam in sigma(T)} |lam|^n |1 - lam|``.

    Point spectra are maximised exactly; curves and symbols on an adaptive
    log grid in the curve parameter (finest spacing well below ``1/(10 n)``)
    with golden-section polishing.  ``full_output`` returns a
    :class:`ProfileEntry` carrying method and error budget.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    if isinstance(T, DiagonalSpectrum):
        u = 1.0 - T.points
        mod = np.abs(T.points)
        vals = (mod ** n if n else np.ones_like(mod)) * np.abs(u)
        k = int(np.argmax(vals))
        entry = ProfileEntry(n, float(vals[k]), "symbol-exact",
                             float(4 * np.finfo(float).eps * vals[k]), float(np.angle(T.points[k])))
    else:
        entry = _curve_decay(T, n, grid)
    return entry if full_output else entry.value


def _curve_decay(T, n, grid):
    t_lo = grid.t_min if grid.t_min is not None else min(1e-3, 1.0 / (100.0 * (n + 1)))
    t_lo = min(t_lo, T.t_max)
    nodes = _side_nodes(t_lo, T.t_max, grid.per_decade)

    def objective(rows, u):
        w = T.deficit(_signed(rows, u))
        if n == 0:
            return np.abs(w)
        with np.errstate(divide="ignore"):
            return np.exp(n * _log_modulus(w)) * np.abs(w)

    best, at = grid_max(objective, nodes, xtol=grid.xtol)
    side = int(np.argmax(best))
    value = float(max(best[side], 0.0))
    where = float(np.exp(at[side]) * (1 if side == 0 else -1))
    budget = 1e-9 * value
    if isinstance(T, ToeplitzDensity) and not T.density.exact:
        # |p_n| is (n+1)-Lipschitz on the disk; prefix evaluation is off by <= tail
        budget += (n + 1) * T.density.tail_mass_bound
    return ProfileEntry(n, value, "grid-sup", budget, where)


def decay_profile(T, n_list, grid=DEFAULT_GRID, threads=None):
    """Evaluate :func:`decay_norm` on an ascending list of n.

    For contractions the sequence must be non-increasing; violations inside
    the error budget are clipped to the running minimum, larger ones raise.
    Entries are independent; ``threads`` (default: ``$KTDECAY_THREADS`` or 1)
    evaluates them concurrently with results assembled in input order.
    """
    ns = [int(v) for v in n_list]
    if any(b < a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_list must be sorted ascending")
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    if threads > 1 and len(ns) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            entries = list(pool.map(lambda k: decay_norm(T, k, grid, full_output=True), ns))
    else:
        entries = [decay_norm(T, k, grid, full_output=True) for k in ns]
    if T.power_bound == 1:
        fixed = []
        running = math.inf
        for e in entries:
            if e.value > running:
                excess = e.value - running
                if excess > e.error_budget + 1e-12 * running:
                    raise NumericalError(
                        f"decay profile of {T.name} increases at n={e.n} by {excess:.3g}"
                    )
                e = ProfileEntry(e.n, running, e.method, e.error_budget + excess, e.argmax)
            running = e.value
            fixed.append(e)
        entries = fixed
    return DecayProfile(tuple(entries), T.name)


# ---------------------------------------------------------------- sections

@dataclass(frozen=True, eq=False)
class FiniteSection:
    """Leading ``N x N`` block of the convolution operator ``x -> a * x``."""

    matrix: np.ndarray
    density: dens.Density

    @property
    def N(self):
        return self.matrix.shape[0]

    def to_text(self, fname, fmt="%.17g"):
        """Write the matrix as a whitespace-delimited numeric array."""
        np.savetxt(fname, self.matrix, fmt=fmt)


def finite_section(a, N):
    """Lower-triangular Toeplitz section with entries ``a_{i-j}``, ``i >= j``."""
    from scipy.linalg import toeplitz

    N = int(N)
    if N < 1:
        raise ValueError("N must be >= 1")
    col = np.zeros(N)
    k = min(N, a.coefficients.size)
    col[:k] = a.coefficients[:k]
    return FiniteSection(toeplitz(col, np.zeros(N)), a)


def section_decay_norm(S, n, tol=1e-10, block=64, maxiter=20000, seed=0, full_output=False):
    """Spectral norm of ``S^n (I - S)`` by block power iteration on the Gram matrix.

    Top singular values of Toeplitz sections cluster, so a single vector
    crawls; a block of ``block`` vectors with Rayleigh-Ritz extraction
    converges at the gap to the ``block+1``-st value instead.  Stops once the
    leading Ritz value changes by less than ``tol`` (relative) over ten
    consecutive sweeps.  The result never exceeds the symbol norm.

    ``full_output`` adds ``(sweeps, valid)``; ``valid`` is False outside the
    trusted window ``n <= N/8``.
    """
    n = int(n)
    A = S.matrix
    B = np.linalg.matrix_power(A, n) @ (np.eye(S.N) - A)
    valid = n <= S.N / 8
    if not np.any(B):
        return (0.0, 0, valid) if full_output else 0.0
    G = B.T @ B
    k = min(block, S.N)
    rng = np.random.default_rng(seed)
    V, _ = np.linalg.qr(rng.standard_normal((S.N, k)))
    history = []
    for sweep in range(1, maxiter + 1):
        W = G @ V
        ritz = np.linalg.eigvalsh(V.T @ W)
        history.append(float(ritz[-1]))
        V, _ = np.linalg.qr(W)
        if len(history) > 10 and abs(history[-1] - history[-11]) <= tol * abs(history[-1]):
            break
    else:
        raise NumericalError(f"block power iteration did not converge in {maxiter} sweeps")
    value = math.sqrt(max(history[-1], 0.0))
    return (value, sweep, valid) if full_output else value
