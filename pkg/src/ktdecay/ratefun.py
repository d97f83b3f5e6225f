"""Rate functions m on (0, pi] and the transforms built from them.

A rate function is a continuous, positive, non-increasing majorant for the
resolvent growth ``||R(e^{i theta}, T)||`` as ``|theta| -> 0``.  This module
evaluates such functions, inverts them from the right,

    m^{-1}(s) = inf{eps in (0, pi] : m(eps) <= s},

and forms the two derived rate functions used by the decay bounds::

    m_log(eps) = m(eps) * log(1 + m(eps) / eps)
    m_max(eps) = max_{eps <= theta <= pi} m(theta) * log(theta / eps)

It also provides a finite-window diagnostic for reciprocally positive
increase, ``m(eps / t) / m(eps) >= c * t**alpha``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from ._search import grid_max, padded_log_rows
from .errors import DiagnosticError, DomainError, ValidationError

__all__ = [
    "RateFunction", "PowerLaw", "PowerLog", "SampledRate", "PositiveIncreaseReport",
    "eval_m", "right_inverse", "m_log", "m_log_inverse", "m_max", "m_max_inverse",
    "positive_increase_diagnostic", "power_law", "power_log", "sampled",
]

PI = math.pi
INVERSE_RTOL = 1e-12
INVERSE_MAXITER = 200
MMAX_PER_DECADE = 64
_DOMAIN_SLACK = 1e-12


def _as_output(values, scalar):
    return float(values[0]) if scalar else values


class RateFunction:
    """Base class: subclasses provide ``_raw`` on an ndarray of radians.

    Attributes
    ----------
    domain_min : float
        Smallest epsilon at which the function is trusted.
    resolvent_majorant : bool
        Set when the function bounds a resolvent with ``1`` in the spectrum;
        then ``m(eps) >= 1/eps`` is part of the contract.
    power_bound_hint : float or None
        Power bound ``K`` of the operator the function was built for.
    """

    domain_min: float
    resolvent_majorant: bool
    power_bound_hint: object

    def _raw(self, eps):
        raise NotImplementedError

    def _check_domain(self, eps):
        lo = self.domain_min * (1 - _DOMAIN_SLACK)
        hi = PI * (1 + _DOMAIN_SLACK)
        if np.any(~np.isfinite(eps)) or np.any(eps < lo) or np.any(eps > hi):
            bad = eps[(eps < lo) | (eps > hi) | ~np.isfinite(eps)][0]
            raise DomainError(
                f"eps={bad!r} outside [{self.domain_min!r}, pi] for {self.describe()}"
            )

    def __call__(self, eps):
        scalar = np.ndim(eps) == 0
        e = np.atleast_1d(np.asarray(eps, dtype=float))
        self._check_domain(e)
        return _as_output(self._raw(np.clip(e, self.domain_min, PI)), scalar)

    def describe(self):
        return type(self).__name__

    def validate(self, grid_per_decade=16):
        """Sample the function and check positivity, monotonicity and, for
        resolvent majorants, the lower bound ``m(eps) >= 1/eps``."""
        from ._search import log_nodes

        eps = log_nodes(self.domain_min, PI, grid_per_decade)
        vals = self._raw(eps)
        if np.any(~(vals > 0)):
            raise ValidationError(f"{self.describe()} is not positive on its domain")
        if np.any(np.diff(vals) > 1e-12 * vals[1:]):
            raise ValidationError(f"{self.describe()} is not non-increasing")
        if self.resolvent_majorant and np.any(vals < (1 - 1e-12) / eps):
            raise ValidationError(f"{self.describe()} violates m(eps) >= 1/eps")


@dataclass(frozen=True)
class PowerLaw(RateFunction):
    """``m(eps) = C * eps**(-alpha)``."""

    C: float = 1.0
    alpha: float = 1.0
    domain_min: float = 1e-12
    resolvent_majorant: bool = False
    power_bound_hint: object = None

    def __post_init__(self):
        if not (self.C > 0 and self.alpha >= 0 and 0 < self.domain_min <= PI):
            raise ValidationError(f"invalid power law parameters {self!r}")

    def _raw(self, eps):
        return self.C * eps ** (-self.alpha)

    def describe(self):
        return f"power(C={self.C:g}, alpha={self.alpha:g})"


@dataclass(frozen=True)
class PowerLog(RateFunction):
    """``m(eps) = C * eps**(-alpha) * |log eps|**beta`` below ``eps_flat``.

    Above ``eps_flat`` the function is continued by the constant
    ``m(eps_flat)`` so that it stays positive and non-increasing on all of
    (0, pi]; the raw expression vanishes at ``eps = 1`` when ``beta > 0``.
    The default knee is ``1/e``, moved down to the minimiser
    ``exp(beta / alpha)`` of the raw expression when ``beta / alpha < -1``.
    """

    C: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    domain_min: float = 1e-12
    eps_flat: object = None
    resolvent_majorant: bool = False
    power_bound_hint: object = None

    def __post_init__(self):
        if not (self.C > 0 and self.alpha >= 0 and 0 < self.domain_min <= PI):
            raise ValidationError(f"invalid power-log parameters {self!r}")
        if self.beta < 0 and self.alpha <= 0:
            raise ValidationError("beta < 0 requires alpha > 0")
        if self.eps_flat is None:
            knee = math.exp(-1.0) if self.beta >= 0 else math.exp(min(-1.0, self.beta / self.alpha))
            object.__setattr__(self, "eps_flat", knee)
        if not (self.eps_flat < 1.0 and self.eps_flat > 0):
            raise ValidationError("eps_flat must lie in (0, 1)")

    def _raw(self, eps):
        e = np.minimum(eps, self.eps_flat)
        return self.C * e ** (-self.alpha) * np.abs(np.log(e)) ** self.beta

    def describe(self):
        return f"power_log(C={self.C:g}, alpha={self.alpha:g}, beta={self.beta:g})"


@dataclass(frozen=True, eq=False)
class SampledRate(RateFunction):
    """Monotone sample table, interpolated linearly in log-log coordinates.

    The table must reach ``pi``; ``domain_min`` is its smallest node.
    """

    eps: np.ndarray = field(default_factory=lambda: np.array([PI]))
    values: np.ndarray = field(default_factory=lambda: np.array([1.0]))
    resolvent_majorant: bool = False
    power_bound_hint: object = None
    label: str = "sampled"

    def __post_init__(self):
        e = np.asarray(self.eps, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if e.shape != v.shape or e.ndim != 1 or e.size < 2:
            raise ValidationError("sample table needs matching 1-d eps/value arrays")
        order = np.argsort(e)
        e, v = e[order], v[order]
        if np.any(np.diff(e) <= 0):
            raise ValidationError("sample eps-grid must be strictly monotone")
        if np.any(~(v > 0)):
            raise ValidationError("sample values must be positive")
        if np.any(np.diff(v) > 0):
            raise ValidationError("sample values must be non-increasing in eps")
        if e[0] <= 0 or abs(e[-1] / PI - 1) > 1e-9:
            raise ValidationError("sample table must span (0, pi] and end at pi")
        e[-1] = PI
        object.__setattr__(self, "eps", e)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "_loge", np.log(e))
        object.__setattr__(self, "_logv", np.log(v))

    @property
    def domain_min(self):
        return float(self.eps[0])

    def _raw(self, eps):
        return np.exp(np.interp(np.log(eps), self._loge, self._logv))

    def describe(self):
        return f"{self.label}[{self.eps.size} nodes, eps>={self.eps[0]:.3g}]"


def power_law(C=1.0, alpha=1.0, **kw):
    return PowerLaw(C=C, alpha=alpha, **kw)


def power_log(C=1.0, alpha=1.0, beta=1.0, **kw):
    return PowerLog(C=C, alpha=alpha, beta=beta, **kw)


def sampled(fun, eps_grid, **kw):
    """Tabulate ``fun`` on ``eps_grid`` (``pi`` is appended when missing)."""
    e = np.unique(np.asarray(eps_grid, dtype=float))
    if abs(e[-1] / PI - 1) > 1e-9:
        e = np.append(e[e < PI], PI)
    return SampledRate(eps=e, values=np.asarray(fun(e), dtype=float), **kw)


def eval_m(m, eps):
    """Evaluate ``m`` at ``eps``; raises :class:`DomainError` off ``[domain_min, pi]``."""
    return m(eps)


def _decreasing_inverse(fun, s, lo, hi, label):
    """inf{eps in [lo, hi] : fun(eps) <= s} for a non-increasing ``fun``.

    Bisection in log(eps) on arrays of targets.  The returned nodes are
    points where ``fun <= s`` was actually observed, so ``fun(result) <= s``
    holds exactly for non-extrapolated entries.
    """
    s = np.asarray(s, dtype=float)
    f_hi = fun(np.full(s.shape, hi))
    if np.any(s < f_hi * (1 - 1e-15)):
        bad = s[s < f_hi * (1 - 1e-15)].flat[0]
        raise DomainError(f"{label}: s={bad!r} below the value at pi ({f_hi.flat[0]!r})")
    f_lo = fun(np.full(s.shape, lo))
    extrapolated = f_lo < s
    done = f_lo <= s
    a = np.full(s.shape, math.log(lo))
    b = np.full(s.shape, math.log(hi))
    b_eps = np.full(s.shape, hi)
    b_eps[done] = lo
    a[done] = b[done] = math.log(lo)
    active = ~done & (f_hi <= s)
    # s between f(hi) and f(hi)(1 - 1e-15): answer is hi
    tol = math.log1p(INVERSE_RTOL)
    for _ in range(INVERSE_MAXITER):
        active &= (b - a) > tol
        if not np.any(active):
            break
        mid = 0.5 * (a + b)
        mid_eps = np.exp(mid)
        f_mid = np.full(s.shape, np.inf)
        f_mid[active] = fun(mid_eps[active])
        below = active & (f_mid <= s)
        above = active & ~(f_mid <= s)
        b = np.where(below, mid, b)
        b_eps = np.where(below, mid_eps, b_eps)
        a = np.where(above, mid, a)
    return b_eps, extrapolated


def right_inverse(m, s, full_output=False):
    """Right inverse ``m^{-1}(s)`` by log-bisection, relative tolerance 1e-12.

    Parameters
    ----------
    m : RateFunction
    s : float or array_like
        Levels with ``s >= m(pi)``.
    full_output : bool
        Also return a boolean flag (array) marking levels above
        ``m(domain_min)``, where the result is clamped to ``domain_min``.

    Raises
    ------
    DomainError
        If some ``s < m(pi)``.
    """
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    value, flag = _decreasing_inverse(m._raw, s_arr, m.domain_min, PI, "right_inverse")
    if full_output:
        return _as_output(value, scalar), (bool(flag[0]) if scalar else flag)
    return _as_output(value, scalar)


def m_log(m, eps):
    """``m(eps) * log(1 + m(eps)/eps)``."""
    scalar = np.ndim(eps) == 0
    e = np.atleast_1d(np.asarray(eps, dtype=float))
    v = np.atleast_1d(m(e))
    return _as_output(v * np.log1p(v / e), scalar)


def _m_log_raw(m):
    def fun(e):
        v = m._raw(e)
        return v * np.log1p(v / e)
    return fun


def m_log_inverse(m, s, full_output=False):
    """Right inverse of :func:`m_log`, same contract as :func:`right_inverse`."""
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    value, flag = _decreasing_inverse(_m_log_raw(m), s_arr, m.domain_min, PI, "m_log_inverse")
    if full_output:
        return _as_output(value, scalar), (bool(flag[0]) if scalar else flag)
    return _as_output(value, scalar)


def _m_max_raw(m, eps, per_decade=MMAX_PER_DECADE):
    """m_max on an ndarray of eps inside the domain; returns (values, argmax theta)."""
    log_pi = math.log(PI)
    out = np.zeros(eps.shape)
    arg = np.full(eps.shape, PI)
    inner = eps < PI * (1 - 1e-15)
    if not np.any(inner):
        return out, arg
    e_in = eps[inner]
    nodes = padded_log_rows(e_in, PI, per_decade)
    loge = np.log(e_in)

    def objective(rows, u):
        return m._raw(np.exp(np.minimum(u, log_pi))) * (u - loge[rows])

    best, at = grid_max(objective, nodes)
    out[inner] = np.maximum(best, 0.0)
    arg[inner] = np.exp(at)
    return out, arg


def m_max(m, eps, per_decade=MMAX_PER_DECADE, full_output=False):
    """``max_{eps <= theta <= pi} m(theta) log(theta/eps)``.

    Computed on a logarithmic theta-grid (``per_decade`` nodes per decade,
    anchored at ``eps``) with golden-section polishing around every discrete
    local maximum.  ``full_output`` also returns the maximiser.
    """
    scalar = np.ndim(eps) == 0
    e = np.atleast_1d(np.asarray(eps, dtype=float))
    m._check_domain(e)
    e = np.clip(e, m.domain_min, PI)
    vals, arg = _m_max_raw(m, e, per_decade)
    if full_output:
        return _as_output(vals, scalar), _as_output(arg, scalar)
    return _as_output(vals, scalar)


def m_max_inverse(m, s, per_decade=MMAX_PER_DECADE, full_output=False):
    """``inf{eps : m_max(eps) <= s}``; ``s = 0`` gives ``pi``."""
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr < 0):
        raise DomainError("m_max_inverse needs s >= 0")
    value, flag = _decreasing_inverse(
        lambda e: _m_max_raw(m, e, per_decade)[0], s_arr, m.domain_min, PI, "m_max_inverse"
    )
    value = np.where(s_arr <= 0, PI, value)
    flag = np.where(s_arr <= 0, False, flag)
    if full_output:
        return _as_output(value, scalar), (bool(flag[0]) if scalar else flag)
    return _as_output(value, scalar)


@dataclass(frozen=True)
class PositiveIncreaseReport:
    """Outcome of :func:`positive_increase_diagnostic`.

    ``c_hat`` and ``alpha_hat`` satisfy ``ratio >= c_hat * t**alpha_hat`` at
    every sampled pair.  ``limit_index`` is the extrapolated local index
    used for the verdict and ``index_floor`` the threshold it must exceed.
    """

    holds: bool
    c_hat: float
    alpha_hat: float
    eps0: float
    window: tuple
    min_ratio: float
    limit_index: float
    index_floor: float
    t: float
    multipliers: tuple


def positive_increase_diagnostic(m, t=2.0, decades=3, eps0=None, powers=3, index_floor=0.05):
    """Finite-window check of ``m(eps/t)/m(eps) >= c t**alpha`` for small eps.

    Ratios are sampled on a dyadic eps-grid from ``eps0`` down to
    ``domain_min * t**powers`` for the multipliers ``t, t**2, ..., t**powers``.
    ``alpha_hat`` is the least-squares slope of log(ratio) against log(t)
    and ``c_hat = min(ratio / t**alpha_hat)`` clipped to (0, 1].

    The verdict needs the smallest base ratio to exceed 1 *and* the local
    index ``log(ratio)/log(t)`` to stay bounded away from 0 as eps -> 0.  The
    limit is estimated by regressing the local index on ``1/log(1/eps)``,
    which removes the logarithmic drift of regularly varying functions
    (exactly for ``eps^-alpha |log eps|^beta`` to first order).  A limit at
    or below ``index_floor`` means the ratios creep towards 1 and the
    verdict is ``holds=False``.
    """
    if t < 2 and not math.isclose(t, 2):
        raise DiagnosticError("t must be >= 2")
    if decades < 2:
        raise DiagnosticError("decades must be >= 2")
    top_mult = float(t) ** powers
    eps_lo = m.domain_min * top_mult
    if eps0 is None:
        eps0 = eps_lo * 10.0 ** decades
    if eps0 > PI * (1 + 1e-12) or eps0 / eps_lo < 10.0 ** decades * (1 - 1e-12):
        raise DiagnosticError(
            f"domain [{m.domain_min:g}, pi] cannot host {decades} decades below eps0={eps0:g} "
            f"with multipliers up to {top_mult:g}"
        )
    count = int(math.floor(math.log2(eps0 / eps_lo) + 1e-12)) + 1
    eps = eps0 * 2.0 ** -np.arange(count)
    mults = float(t) ** np.arange(1, powers + 1)
    base = m._raw(eps)
    ratios = m._raw(eps[:, None] / mults[None, :]) / base[:, None]

    x = np.broadcast_to(np.log(mults)[None, :], ratios.shape).ravel()
    y = np.log(ratios).ravel()
    slope, _ = np.polyfit(x, y, 1)
    alpha_hat = float(slope)
    c_hat = float(np.min(ratios / mults[None, :] ** alpha_hat))
    c_hat = min(c_hat, 1.0)

    local = np.log(ratios[:, 0]) / math.log(t)
    small = eps < math.exp(-1.0)
    if np.count_nonzero(small) >= 3:
        inv_log = 1.0 / np.log(1.0 / eps[small])
        _, intercept = np.polyfit(inv_log, local[small], 1)
        limit_index = float(intercept)
    else:
        limit_index = float(np.min(local))
    min_ratio = float(np.min(ratios[:, 0]))
    holds = bool(min_ratio > 1.0 and limit_index > index_floor and alpha_hat > 0)
    return PositiveIncreaseReport(
        holds=holds, c_hat=c_hat if c_hat > 0 else float(np.finfo(float).tiny),
        alpha_hat=alpha_hat, eps0=float(eps0), window=(float(eps[-1]), float(eps0)),
        min_ratio=min_ratio, limit_index=limit_index, index_floor=index_floor,
        t=float(t), multipliers=tuple(float(v) for v in mults),
    )
