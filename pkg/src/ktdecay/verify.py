"""Finite-range verification of decay bounds.

Every check compares a computed decay profile ``n -> ||T^n (I - T)||`` with
a bound expressed through a rate function, over an explicit n-range, and
returns a :class:`VerificationReport`.  Asymptotic statements are replaced
by finite-sample surrogates whose thresholds are recorded in the report:

* a ratio sequence is *bounded* when the least-squares slope of
  log(ratio) against log(n) over the top decade is at most ``SLOPE_LIMIT``;
* a limsup is *positive* when the maximum over the top decade is at least
  ``LIMSUP_FLOOR``;
* a liminf in theta is the minimum over the smallest trusted theta-decade.

Checks whose hypotheses fail numerically return a report with verdict
``"hypothesis-not-satisfied"`` naming the failed precondition rather than
raising, so that batch drivers can map them to a distinct exit status.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from ._search import log_nodes
from .errors import ApplicabilityError, FitError
from .operators import (
    DEFAULT_GRID, PI, decay_profile, envelope_rate, max_trusted_n,
    resolvent_envelope, resolvent_norm, spectrum_distance,
)
from .ratefun import (
    PowerLaw, PowerLog, m_log_inverse, m_max_inverse,
    positive_increase_diagnostic, power_law, right_inverse,
)

__all__ = [
    "Margin", "VerificationReport", "RateFit", "PASS", "FAIL", "HYPOTHESIS",
    "n_grid", "check_upper_mlog", "check_upper_posinc", "check_lower",
    "delta_estimate", "check_sandwich_quasimult", "check_comparisons",
    "necessity_diagnostic", "fit_rate", "fit_power_majorant",
    "SLOPE_LIMIT", "LIMSUP_FLOOR",
]

PASS = "pass"
FAIL = "fail"
HYPOTHESIS = "hypothesis-not-satisfied"
SKIPPED = "skipped"

SLOPE_LIMIT = 0.05
LIMSUP_FLOOR = 1e-3
HYPOTHESIS_MARGIN = 1e-3
MAJORANT_RTOL = 1e-9
COMPARE_RTOL = 1e-9


@dataclass(frozen=True)
class Margin:
    """One row of a margin table: ``ratio = lhs / rhs`` and its status."""

    n: int
    lhs: float
    rhs: float
    ratio: float
    status: str = "ok"


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one verification check.

    ``verdict`` is one of ``"pass"``, ``"fail"``, ``"hypothesis-not-satisfied"``
    or ``"skipped"``.  ``constants`` holds supplied and fitted constants and
    the surrogate thresholds used; ``applicability_window`` the eps and n
    ranges on which inputs were trusted.  Composite checks carry their parts
    in ``parts``.
    """

    claim_id: str
    verdict: str
    n_range: tuple
    constants: dict = field(default_factory=dict)
    margins: tuple = ()
    applicability_window: dict = field(default_factory=dict)
    failed_precondition: str = ""
    notes: tuple = ()
    parts: tuple = ()

    @property
    def passed(self):
        return self.verdict == PASS

    @property
    def ratios(self):
        return np.array([row.ratio for row in self.margins])

    def margin_extremes(self):
        """(min, max) of the finite margin ratios, or (nan, nan)."""
        r = self.ratios
        r = r[np.isfinite(r)] if r.size else r
        if r.size == 0:
            return float("nan"), float("nan")
        return float(r.min()), float(r.max())


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit ``value ~ K n^-a (log n)^b``."""

    a: float
    b: float
    residual: float
    log_constant: float
    n_window: tuple


# ---------------------------------------------------------------- helpers

def n_grid(n_lo, n_hi, per_decade=8):
    """Distinct integers on a log grid from ``n_lo`` to ``n_hi`` inclusive."""
    n_lo, n_hi = int(n_lo), int(n_hi)
    if n_lo < 1 or n_hi < n_lo:
        raise ValueError("need 1 <= n_lo <= n_hi")
    return np.unique(np.rint(log_nodes(n_lo, n_hi, per_decade)).astype(np.int64))


def _ns(n_range):
    """Accept ``(lo, hi)`` or an explicit list; return sorted unique ints."""
    arr = np.asarray(n_range)
    if arr.ndim == 1 and arr.size == 2 and not isinstance(n_range, np.ndarray):
        return n_grid(*n_range)
    ns = np.unique(arr.astype(np.int64).ravel())
    if ns.size == 0 or ns[0] < 1:
        raise ValueError("n values must be >= 1")
    return ns


def _check_trusted(ns, grid):
    limit = max_trusted_n(grid)
    if ns[-1] > limit:
        raise ApplicabilityError(
            f"n={ns[-1]} exceeds the grid validity limit n <= {limit:.6g} "
            "(finest spacing must be <= 1/(10 n))"
        )


def top_decade(ns):
    return ns >= ns[-1] / 10.0


def top_half(ns):
    return ns >= math.sqrt(ns[0] * ns[-1])


def log_slope(ns, ratios):
    """Slope of log(ratio) vs log(n) over the top decade.

    Returns ``-inf`` when the ratios vanish on the whole top decade and
    ``nan`` when fewer than two usable points remain.
    """
    sel = top_decade(ns)
    r = ratios[sel]
    x = ns[sel].astype(float)
    if np.all(r == 0):
        return -math.inf
    pos = r > 0
    if np.count_nonzero(pos) < 2:
        return math.nan
    if np.count_nonzero(pos) < r.size:
        # a ratio dropping to zero inside the window is a downward trend
        return -math.inf
    return float(np.polyfit(np.log(x), np.log(r), 1)[0])


def _bounded(slope):
    return bool(slope == -math.inf or (np.isfinite(slope) and slope <= SLOPE_LIMIT))


def _margins(ns, lhs, rhs, status=None):
    rows = []
    for k, n in enumerate(ns):
        ratio = lhs[k] / rhs[k] if rhs[k] > 0 else math.inf
        rows.append(Margin(int(n), float(lhs[k]), float(rhs[k]), float(ratio),
                           "ok" if status is None else str(status[k])))
    return tuple(rows)


def _majorizes(T, m, eps_lo, eps_hi, grid, per_decade=8):
    """Check ``m >= envelope`` on ``[eps_lo, eps_hi]``; return (ok, worst ratio, at).

    Only the eps-window visited by the inverses at the sampled n matters for
    the bound; ``m`` may be redefined freely outside it.
    """
    eps = log_nodes(max(eps_lo, m.domain_min), max(eps_hi, eps_lo), per_decade)
    env = resolvent_envelope(T, eps, grid)
    ratio = env / m(eps)
    k = int(np.argmax(ratio))
    return bool(ratio[k] <= 1 + MAJORANT_RTOL), float(ratio[k]), float(eps[k])


def _profile(T, ns, grid):
    prof = decay_profile(T, ns, grid)
    return prof.values, prof


def _hypothesis(claim, ns, reason, constants=None, window=None):
    return VerificationReport(
        claim_id=claim, verdict=HYPOTHESIS, n_range=(int(ns[0]), int(ns[-1])),
        constants=dict(constants or {}), applicability_window=dict(window or {}),
        failed_precondition=reason,
    )


def _inverse_window(inv, m, s, label):
    """Invert at levels ``s``; raise if the smallest level falls off the domain."""
    eps, flag = inv(m, s, full_output=True)
    if np.any(flag):
        raise ApplicabilityError(
            f"{label}({float(np.max(s)):.6g}) lies below domain_min={m.domain_min:g} of {m.describe()}"
        )
    return eps


# ---------------------------------------------------------------- upper bounds

def check_upper_mlog(T, m, c=0.5, n_range=(100, 10_000), grid=DEFAULT_GRID):
    """Upper bound ``||T^n (I - T)|| = O(m_log^{-1}(c n))`` for ``c`` in (0, 1).

    Requires ``m`` to majorize the resolvent envelope on the eps-window the
    inverse visits.  Fits ``C = max decay / m_log^{-1}(c n)`` and passes
    when the ratio sequence is bounded.
    """
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1)")
    claim = "upper-mlog"
    ns = _ns(n_range)
    _check_trusted(ns, grid)
    rhs = _inverse_window(m_log_inverse, m, c * ns, "m_log_inverse")
    window = {"eps": (float(rhs.min()), float(rhs.max())), "n": (int(ns[0]), int(ns[-1]))}
    ok, worst, at = _majorizes(T, m, float(rhs.min()), float(rhs.max()), grid)
    consts = {"c": c, "slope_limit": SLOPE_LIMIT}
    if not ok:
        return _hypothesis(claim, ns, f"m does not majorize the resolvent envelope "
                           f"(envelope/m = {worst:.6g} at eps={at:.6g})", consts, window)
    lhs, _ = _profile(T, ns, grid)
    ratios = lhs / rhs
    slope = log_slope(ns, ratios)
    consts.update(C=float(ratios.max()), slope=slope)
    return VerificationReport(claim, PASS if _bounded(slope) else FAIL, (int(ns[0]), int(ns[-1])),
                              consts, _margins(ns, lhs, rhs), window)


def _diagnostic_for(m, level):
    """Run the positive-increase diagnostic on the eps-window below ``m^{-1}(level)``."""
    top = 8.0
    eps0 = min(float(right_inverse(m, level)), 0.1)
    decades = int(math.floor(math.log10(eps0 / (m.domain_min * top)) + 1e-12))
    if decades < 2:
        eps0, decades = None, 2
    return positive_increase_diagnostic(m, eps0=eps0, decades=max(decades, 2))


def check_upper_posinc(T, m, n_range=(100, 10_000), grid=DEFAULT_GRID):
    """Optimal upper bound ``||T^n (I - T)|| = O(m^{-1}(n))`` under positive increase.

    The positive-increase diagnostic and the majorization of the envelope
    are preconditions.  The decay exponent fitted on the profile is stored
    as ``decay_exponent`` in the report constants.
    """
    claim = "upper-posinc"
    ns = _ns(n_range)
    _check_trusted(ns, grid)
    rhs = _inverse_window(right_inverse, m, ns.astype(float), "right_inverse")
    window = {"eps": (float(rhs.min()), float(rhs.max())), "n": (int(ns[0]), int(ns[-1]))}
    diag = _diagnostic_for(m, float(ns[0]))
    consts = {"slope_limit": SLOPE_LIMIT, "c_hat": diag.c_hat, "alpha_hat": diag.alpha_hat,
              "limit_index": diag.limit_index}
    window["positive_increase_eps"] = diag.window
    if not diag.holds:
        return _hypothesis(claim, ns, f"positive increase not verified (min ratio {diag.min_ratio:.6g}, "
                           f"limit index {diag.limit_index:.6g})", consts, window)
    ok, worst, at = _majorizes(T, m, float(rhs.min()), float(rhs.max()), grid)
    if not ok:
        return _hypothesis(claim, ns, f"m does not majorize the resolvent envelope "
                           f"(envelope/m = {worst:.6g} at eps={at:.6g})", consts, window)
    lhs, _ = _profile(T, ns, grid)
    ratios = lhs / rhs
    slope = log_slope(ns, ratios)
    consts.update(C=float(ratios.max()), slope=slope)
    if np.all(lhs > 0) and ns[-1] >= 100 * ns[0]:
        consts["decay_exponent"] = float(np.polyfit(np.log(ns.astype(float)), np.log(lhs), 1)[0])
    return VerificationReport(claim, PASS if _bounded(slope) else FAIL, (int(ns[0]), int(ns[-1])),
                              consts, _margins(ns, lhs, rhs), window)


# ---------------------------------------------------------------- lower bound

def check_lower(T, m, c_list=(0.5, 1.0, 2.0), n_range=(100, 10_000), theta_min=None,
                grid=DEFAULT_GRID):
    """Lower bound ``limsup ||T^n (I - T)|| / m^{-1}(c n) > 0``.

    The hypothesis ``theta ||R(e^{+-i theta}, T)|| > K`` is tested through
    its minimum over the smallest theta-decade ``[theta_min, 10 theta_min]``
    against ``K (1 + 1e-3)``; the non-triviality of ``m`` through the
    maximum of ``||R|| / m`` over the same decade.  Each ``c`` passes when
    the top-decade maximum of the ratio is at least ``LIMSUP_FLOOR``.
    """
    claim = "lower"
    ns = _ns(n_range)
    _check_trusted(ns, grid)
    theta_min = float(theta_min if theta_min is not None else max(m.domain_min, 1e-6))
    theta = log_nodes(theta_min, 10 * theta_min, 16)
    r = np.maximum(resolvent_norm(T, theta, grid), resolvent_norm(T, -theta, grid))
    liminf = float(np.min(theta * r))
    nontrivial = float(np.max(r / m(theta)))
    K = float(T.power_bound)
    consts = {"K": K, "theta_R_liminf": liminf, "R_over_m_limsup": nontrivial,
              "limsup_floor": LIMSUP_FLOOR, "c_list": tuple(float(c) for c in c_list)}
    window = {"theta": (theta_min, 10 * theta_min), "n": (int(ns[0]), int(ns[-1]))}
    if not liminf > K * (1 + HYPOTHESIS_MARGIN):
        return _hypothesis(claim, ns, f"resolvent growth hypothesis not satisfied: min theta*||R|| = {liminf:.6g} "
                           f"is not above K = {K:g}", consts, window)
    if not nontrivial >= LIMSUP_FLOOR:
        return _hypothesis(claim, ns, f"||R||/m vanishes on the theta-window (max {nontrivial:.3g})",
                           consts, window)
    lhs, _ = _profile(T, ns, grid)
    sel = top_decade(ns)
    rows, ok_all = [], True
    for c in c_list:
        rhs = right_inverse(m, float(c) * ns.astype(float))
        ratios = lhs / rhs
        sup = float(ratios[sel].max())
        ok = sup >= LIMSUP_FLOOR
        ok_all &= ok
        consts[f"limsup[c={c:g}]"] = sup
        status = ["ok" if ok else "fail"] * ns.size
        rows.extend(_margins(ns, lhs, rhs, status))
    return VerificationReport(claim, PASS if ok_all else FAIL, (int(ns[0]), int(ns[-1])),
                              consts, tuple(rows), window)


# ---------------------------------------------------------------- sandwich

def delta_estimate(T, eps_grid, grid=DEFAULT_GRID, full_output=False):
    """Smallest ``delta`` with ``min_{eps <= |theta| <= pi} dist(e^{i theta}, sigma) <= delta eps``.

    Evaluated on the sampled tail (the smallest decade of ``eps_grid``) and
    clipped to 1, which is always admissible when 1 is in the spectrum.
    """
    if not T.contains_one:
        raise ValueError("delta_estimate needs 1 in the spectrum")
    eps = np.sort(np.asarray(eps_grid, dtype=float).ravel())
    tail = eps[eps <= 10 * eps[0]]
    theta = np.union1d(log_nodes(tail[0], PI, grid.per_decade), tail)
    d = np.minimum(spectrum_distance(T, theta, grid), spectrum_distance(T, -theta, grid))
    suffix = np.minimum.accumulate(d[::-1])[::-1]
    at = suffix[np.searchsorted(theta, tail * (1 - 1e-15))]
    delta = float(min(1.0, np.max(at / tail)))
    if full_output:
        return delta, (float(tail[0]), float(tail[-1]))
    return delta


def check_sandwich_quasimult(T, delta=1.0, delta_prime=None, c=1.5, n_range=(1000, 100_000),
                             eps_min=1e-6, grid=DEFAULT_GRID, rtol=COMPARE_RTOL):
    """Two-sided bound for quasi-multiplication operators.

    With ``m(eps) = max_{eps <= |theta| <= pi} ||R(e^{i theta}, T)||``:

    (i)  ``||T^n (I - T)|| <= (1 + delta) m_max^{-1}(n)``, needing
         ``delta >= delta_hat``;
    (ii) ``||T^n (I - T)|| >= (1 - delta') m_max^{-1}(c n)``, needing
         ``delta_hat < delta' < 1`` and ``c > 1``.

    ``delta_prime=None`` skips part (ii).  The verdict passes when both
    parts hold on the top half of the n-range.
    """
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    if delta_prime is not None:
        if not delta < delta_prime < 1:
            raise ValueError("delta_prime must lie in (delta, 1)")
        if not c > 1:
            raise ValueError("c must exceed 1")
    claim = "sandwich-quasimult"
    ns = _ns(n_range)
    _check_trusted(ns, grid)
    span = (int(ns[0]), int(ns[-1]))
    m = envelope_rate(T, eps_min=eps_min, grid=grid)
    cn = (c if delta_prime is not None else 1.0) * ns[-1]
    _inverse_window(m_max_inverse, m, np.array([float(cn)]), "m_max_inverse")
    upper_eps = m_max_inverse(m, ns.astype(float))
    eps_lo = float(m_max_inverse(m, float(cn)))
    window = {"eps": (eps_lo, float(upper_eps.max())), "n": span, "envelope_eps_min": eps_min}
    eps_window = log_nodes(eps_lo, float(upper_eps.max()), 16)
    d_hat = delta_estimate(T, eps_window, grid)
    consts = {"delta": delta, "delta_prime": delta_prime, "c": c, "delta_hat": d_hat}
    half = top_half(ns)
    lhs, _ = _profile(T, ns, grid)

    if d_hat > delta:
        part_i = _hypothesis("sandwich-upper", ns, f"(i): delta_hat = {d_hat:.6g} exceeds delta = {delta:g}",
                             consts, window)
    else:
        rhs = (1 + delta) * upper_eps
        ok = lhs <= rhs * (1 + rtol)
        status = ["ok" if v else "fail" for v in ok]
        part_i = VerificationReport("sandwich-upper", PASS if np.all(ok[half]) else FAIL, span, consts,
                                    _margins(ns, lhs, rhs, status), window)
    if delta_prime is None:
        part_ii = VerificationReport("sandwich-lower", SKIPPED, span, consts, (), window,
                                     notes=("delta_prime not supplied",))
    elif d_hat >= delta_prime:
        part_ii = _hypothesis("sandwich-lower", ns, f"(ii): delta_hat = {d_hat:.6g} is not below "
                              f"delta_prime = {delta_prime:g}; dist <= delta*eps fails for every admissible delta",
                              consts, window)
    else:
        rhs = (1 - delta_prime) * m_max_inverse(m, c * ns.astype(float))
        ok = lhs >= rhs * (1 - rtol)
        status = ["ok" if v else "fail" for v in ok]
        part_ii = VerificationReport("sandwich-lower", PASS if np.all(ok[half]) else FAIL, span, consts,
                                     _margins(ns, lhs, rhs, status), window)

    parts = (part_i, part_ii)
    verdicts = [p.verdict for p in parts if p.verdict != SKIPPED]
    if HYPOTHESIS in verdicts:
        verdict = HYPOTHESIS
    else:
        verdict = PASS if all(v == PASS for v in verdicts) else FAIL
    failed = "; ".join(p.failed_precondition for p in parts if p.failed_precondition)
    return VerificationReport(claim, verdict, span, consts, part_i.margins + part_ii.margins,
                              window, failed, parts=parts)


# ---------------------------------------------------------------- comparisons

def _power_lower_bound(m, alpha):
    """Whether ``m(eps) >= c_alpha eps^-alpha`` near 0, judged from the form of m."""
    if isinstance(m, PowerLaw):
        return m.alpha >= alpha, f"power law of order {m.alpha:g}"
    if isinstance(m, PowerLog):
        ok = m.alpha > alpha or (m.alpha == alpha and m.beta >= 0)
        return ok, f"power-log of order ({m.alpha:g}, {m.beta:g})"
    eps = log_nodes(m.domain_min, 10 * m.domain_min, 8)
    local = -np.polyfit(np.log(eps), np.log(m(eps)), 1)[0]
    return local >= alpha - SLOPE_LIMIT, f"local order {local:.4g} on the smallest decade"


def check_comparisons(m, alpha=1.0, c=1.0, c_prime=2.0, n_range=(1000, 100_000), rtol=COMPARE_RTOL):
    """Three comparison inequalities between ``m_max^{-1}``, ``m_log^{-1}`` and ``m^{-1}``.

    1. ``m_max^{-1}(n) <= m_log^{-1}(c n)`` for ``c`` in (0, 1 + alpha),
       when ``m(eps) >= c_alpha eps^-alpha``;
    2. ``m_max^{-1}(n) = O(m^{-1}(n))`` under positive increase;
    3. ``m_max^{-1}(c n) >= e^{-c/c'} m^{-1}(c' n)``.

    Each sub-check passes when its inequality holds at every sampled n in
    the top half of the range; rows where an inverse leaves the domain of
    ``m`` are marked ``extrapolated`` and never count as failures.
    """
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if c <= 0 or c_prime <= 0:
        raise ValueError("c and c_prime must be positive")
    ns = _ns(n_range)
    span = (int(ns[0]), int(ns[-1]))
    x = ns.astype(float)
    half = top_half(ns)
    mmax_n, fl_n = m_max_inverse(m, x, full_output=True)
    parts = []

    def _part(claim, lhs, rhs, ok, extrap, consts, window):
        status = np.where(extrap, "extrapolated", np.where(ok, "ok", "fail"))
        judged = half & ~extrap
        if not np.any(judged):
            return VerificationReport(claim, SKIPPED, span, consts, _margins(ns, lhs, rhs, status), window,
                                      notes=("every row extrapolated",))
        verdict = PASS if np.all(ok[judged]) else FAIL
        return VerificationReport(claim, verdict, span, consts, _margins(ns, lhs, rhs, status), window)

    # 1
    form_ok, form = _power_lower_bound(m, alpha)
    consts1 = {"alpha": alpha, "c": c, "form": form}
    if not 0 < c < 1 + alpha:
        # rows kept for inspection; the inequality is not claimed here
        rhs, fl = m_log_inverse(m, c * x, full_output=True)
        ok = mmax_n <= rhs * (1 + rtol)
        status = np.where(fl | fl_n, "extrapolated", np.where(ok, "ok", "fail"))
        parts.append(VerificationReport("mmax-vs-mlog", SKIPPED, span, consts1,
                                        _margins(ns, mmax_n, rhs, status), {"n": span},
                                        notes=(f"c={c:g} outside (0, 1 + alpha)",)))
    elif not form_ok:
        parts.append(VerificationReport("mmax-vs-mlog", SKIPPED, span, consts1,
                                        notes=(f"m is not bounded below by eps^-{alpha:g}: {form}",)))
    else:
        rhs, fl = m_log_inverse(m, c * x, full_output=True)
        parts.append(_part("mmax-vs-mlog", mmax_n, rhs, mmax_n <= rhs * (1 + rtol),
                           fl | fl_n, consts1, {"n": span}))
    # 2
    diag = _diagnostic_for(m, float(ns[0]))
    consts2 = {"c_hat": diag.c_hat, "alpha_hat": diag.alpha_hat, "slope_limit": SLOPE_LIMIT}
    if not diag.holds:
        parts.append(VerificationReport("mmax-vs-m", SKIPPED, span, consts2,
                                        notes=("positive increase not verified",)))
    else:
        rhs, fl = right_inverse(m, x, full_output=True)
        ratios = mmax_n / rhs
        slope = log_slope(ns, ratios)
        consts2.update(slope=slope, C=float(ratios.max()))
        ok = np.full(ns.shape, _bounded(slope))
        parts.append(_part("mmax-vs-m", mmax_n, rhs, ok, fl | fl_n, consts2,
                           {"n": span, "positive_increase_eps": diag.window}))
    # 3
    lhs, fl_a = m_max_inverse(m, c * x, full_output=True)
    rhs_m, fl_b = right_inverse(m, c_prime * x, full_output=True)
    rhs = math.exp(-c / c_prime) * rhs_m
    parts.append(_part("mmax-lower", lhs, rhs, lhs >= rhs * (1 - rtol), fl_a | fl_b,
                       {"c": c, "c_prime": c_prime}, {"n": span}))

    verdicts = [p.verdict for p in parts if p.verdict != SKIPPED]
    verdict = PASS if verdicts and all(v == PASS for v in verdicts) else (FAIL if verdicts else SKIPPED)
    notes = tuple(f"{p.claim_id}: {p.verdict}" for p in parts)
    margins = tuple(mg for p in parts for mg in p.margins)
    return VerificationReport("comparisons", verdict, span,
                              {"alpha": alpha, "c": c, "c_prime": c_prime}, margins,
                              {"n": span}, notes=notes, parts=tuple(parts))


# ---------------------------------------------------------------- necessity

def necessity_diagnostic(T, m, c=1.0, delta=0.5, n_range=(100, 10_000), grid=DEFAULT_GRID):
    """Consistency of an observed bound ``O(m^{-1}(c n))`` with positive increase.

    Requires ``delta m <= p <= m`` for the resolvent envelope ``p`` on the
    window.  If the decay bound holds numerically the rate function must
    then have positive increase; a failure of the diagnostic in that case
    raises the ``paper-inconsistency`` flag and a ``fail`` verdict.
    """
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    claim = "necessity"
    ns = _ns(n_range)
    _check_trusted(ns, grid)
    rhs, extrap = right_inverse(m, c * ns.astype(float), full_output=True)
    eps = log_nodes(max(float(rhs.min()), m.domain_min), float(rhs.max()), 8)
    p = resolvent_envelope(T, eps, grid)
    mv = m(eps)
    window = {"eps": (float(eps[0]), float(eps[-1])), "n": (int(ns[0]), int(ns[-1]))}
    consts = {"c": c, "delta": delta, "slope_limit": SLOPE_LIMIT,
              "p_over_m_min": float(np.min(p / mv)), "p_over_m_max": float(np.max(p / mv))}
    if np.any(p > mv * (1 + MAJORANT_RTOL)):
        k = int(np.argmax(p / mv))
        return _hypothesis(claim, ns, f"p <= m fails (p/m = {p[k] / mv[k]:.6g} at eps={eps[k]:.6g})",
                           consts, window)
    if np.any(p < delta * mv * (1 - MAJORANT_RTOL)):
        k = int(np.argmin(p / mv))
        return _hypothesis(claim, ns, f"p >= delta m fails (p/m = {p[k] / mv[k]:.6g} at eps={eps[k]:.6g})",
                           consts, window)
    if np.any(extrap):
        raise ApplicabilityError(
            f"right_inverse({c * ns[-1]:.6g}) lies below domain_min={m.domain_min:g} of {m.describe()}"
        )
    lhs, _ = _profile(T, ns, grid)
    ratios = lhs / rhs
    slope = log_slope(ns, ratios)
    bound_holds = _bounded(slope)
    diag = _diagnostic_for(m, float(c * ns[0]))
    consts.update(slope=slope, C=float(ratios.max()), bound_holds=bound_holds,
                  positive_increase=diag.holds, alpha_hat=diag.alpha_hat, c_hat=diag.c_hat)
    inconsistent = bound_holds and not diag.holds
    notes = ("paper-inconsistency",) if inconsistent else ()
    if not bound_holds:
        notes = ("decay bound not observed; necessity statement not engaged",)
    return VerificationReport(claim, FAIL if inconsistent else PASS, (int(ns[0]), int(ns[-1])),
                              consts, _margins(ns, lhs, rhs), window, notes=notes)


# ---------------------------------------------------------------- fitting

def fit_rate(profile, n_window=None):
    """Fit ``log v = log K - a log n + b log log n`` by least squares.

    Parameters
    ----------
    profile : DecayProfile or tuple (n, values)
    n_window : (lo, hi), optional
        Restrict the fit; must span at least two decades.

    Returns
    -------
    RateFit
        ``residual`` is the maximum relative deviation of the fit over the
        top decade of the window.
    """
    if hasattr(profile, "entries"):
        n, v = profile.n.astype(float), profile.values
    else:
        n, v = (np.asarray(x, dtype=float).ravel() for x in profile)
        if n.shape != v.shape:
            raise FitError("n and values differ in length")
    if n_window is not None:
        keep = (n >= n_window[0]) & (n <= n_window[1])
        n, v = n[keep], v[keep]
    keep = n >= 2
    n, v = n[keep], v[keep]
    if n.size < 3 or n.max() < 100 * n.min() * (1 - 1e-12):
        raise FitError("fit needs at least two decades of n >= 2")
    if not np.any(v > 0):
        raise FitError("degenerate profile: all values are zero")
    if np.any(v <= 0):
        raise FitError("profile vanishes at some n; not of power-log form")
    A = np.column_stack([np.ones_like(n), -np.log(n), np.log(np.log(n))])
    coef, *_ = np.linalg.lstsq(A, np.log(v), rcond=None)
    fitted = np.exp(A @ coef)
    top = n >= n.max() / 10
    residual = float(np.max(np.abs(v[top] / fitted[top] - 1.0)))
    return RateFit(float(coef[1]), float(coef[2]), residual, float(coef[0]),
                   (int(n.min()), int(n.max())))


def fit_power_majorant(T, alpha, eps_min=1e-6, per_decade=16, grid=DEFAULT_GRID):
    """Smallest ``C`` with ``C eps^-alpha >=`` the resolvent envelope on ``[eps_min, pi]``."""
    eps = log_nodes(eps_min, PI, per_decade)
    env = resolvent_envelope(T, eps, grid)
    C = float(np.max(env * eps ** alpha)) * (1 + 1e-9)
    return power_law(C, alpha, domain_min=min(1e-12, eps_min))


def rate_fit_report(fit, n_range):
    """Wrap a :class:`RateFit` as a report for uniform rendering."""
    return VerificationReport("fit-rate", PASS, tuple(n_range),
                              {"a": fit.a, "b": fit.b, "residual": fit.residual,
                               "log_constant": fit.log_constant},
                              applicability_window={"n": fit.n_window})

