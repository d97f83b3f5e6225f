"""Probability densities on Z+ and their generating functions.

A :class:`Density` stores an explicit finite prefix ``a_0 .. a_N`` together
with a rigorous bound on the mass beyond ``N``.  Families with a closed-form
generating function keep it, and evaluation prefers it over the prefix.
"""

from dataclasses import dataclass, field
import math
from functools import reduce

import numpy as np

from .errors import DomainError, ValidationError

__all__ = [
    "Density", "validate", "is_aperiodic", "phi", "deficit", "convolve",
    "builtin_family", "point_mass", "lazy_bernoulli", "geometric", "log_example",
    "from_coefficients", "FAMILIES",
]

MASS_TOL = 1e-12
TRUNCATION_TOL = 1e-12
_CHUNK = 1 << 20


@dataclass(frozen=True, eq=False)
class Density:
    """Element of P(Z+): prefix coefficients plus a bound on the truncated mass.

    Instances are immutable.  ``closed_phi`` / ``closed_deficit`` are optional
    exact evaluators of ``phi_a(lam)`` and ``1 - phi_a(e^{i theta})``.
    """

    coefficients: np.ndarray
    tail_mass_bound: float = 0.0
    name: str = "explicit"
    params: dict = field(default_factory=dict)
    closed_phi: object = None
    closed_deficit: object = None

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float, copy=True).ravel()
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def support(self):
        """Indices ``n`` of the prefix with ``a_n > 0``."""
        return np.flatnonzero(self.coefficients > 0)

    @property
    def exact(self):
        return self.closed_phi is not None

    def __len__(self):
        return self.coefficients.size

    def __repr__(self):
        extra = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"Density({self.name}{'(' + extra + ')' if extra else ''}, N={len(self) - 1})"


def validate(a):
    """Raise :class:`ValidationError` unless ``a`` is a probability density."""
    c = a.coefficients
    if np.any(~np.isfinite(c)) or np.any(c < 0):
        raise ValidationError(f"{a!r}: negative or non-finite coefficient")
    if a.tail_mass_bound < 0:
        raise ValidationError(f"{a!r}: negative tail bound")
    mass = math.fsum(c) + a.tail_mass_bound
    if abs(mass - 1.0) > MASS_TOL:
        raise ValidationError(f"{a!r}: total mass {mass!r} differs from 1")


def from_coefficients(coefficients, tail_mass_bound=0.0):
    """Explicit density; validated."""
    a = Density(np.asarray(coefficients, dtype=float), float(tail_mass_bound))
    validate(a)
    return a


def is_aperiodic(a, full_output=False):
    """Aperiodicity through the gcd of pairwise support differences.

    The density is aperiodic iff its support has at least two points and
    the differences generate Z (gcd 1).  Consecutive positive coefficients
    ``a_n, a_{n+1} > 0`` are a sufficient witness and are reported when
    present.  ``full_output`` returns ``(verdict, info)`` where ``info`` has
    keys ``gcd``, ``witness`` and ``reason``.
    """
    support = a.support
    info = {"gcd": None, "witness": None, "reason": ""}
    if support.size < 2:
        info["reason"] = "empty support" if support.size == 0 else "singleton support"
        return (False, info) if full_output else False
    g = reduce(math.gcd, (int(d) for d in support[1:] - support[0]))
    info["gcd"] = g
    consecutive = np.flatnonzero(np.diff(support) == 1)
    if consecutive.size:
        info["witness"] = int(support[consecutive[0]])
    verdict = g == 1
    info["reason"] = "support differences have gcd 1" if verdict else f"support lies in a coset of {g}Z"
    return (verdict, info) if full_output else verdict


def _prefix_sum(coeffs, lam):
    """sum_n coeffs[n] * lam**n for an array of points, in fixed chunk order."""
    lam = np.asarray(lam, dtype=complex)
    if coeffs.size <= 64:
        out = np.zeros(lam.shape, dtype=complex)
        for c in coeffs[::-1]:
            out = out * lam + c
        return out
    flat = lam.ravel()
    out = np.zeros(flat.shape, dtype=complex)
    step = max(1, _CHUNK // max(1, flat.size))
    idx = np.flatnonzero(coeffs)
    for start in range(0, idx.size, step):
        n = idx[start:start + step]
        out += (np.power(flat[:, None], n[None, :]) * coeffs[n][None, :]).sum(axis=1)
    return out.reshape(lam.shape)


def phi(a, lam, full_output=False):
    """Generating function ``phi_a(lam) = sum a_n lam^n`` for ``|lam| <= 1``.

    Uses the family closed form when available (error radius 0), otherwise
    the prefix sum with error radius ``tail_mass_bound``.
    """
    scalar = np.ndim(lam) == 0
    z = np.atleast_1d(np.asarray(lam, dtype=complex))
    if np.any(np.abs(z) > 1 + 1e-12):
        raise DomainError("phi is defined on the closed unit disk only")
    if a.closed_phi is not None:
        val, radius = a.closed_phi(z), 0.0
    else:
        val, radius = _prefix_sum(a.coefficients, z), a.tail_mass_bound
    out = complex(val[0]) if scalar else val
    return (out, radius) if full_output else out


def deficit(a, theta):
    """``1 - phi_a(e^{i theta})`` evaluated without cancellation near 1."""
    th = np.asarray(theta, dtype=float)
    if a.closed_deficit is not None:
        return a.closed_deficit(th)
    flat = th.ravel()
    coeffs = a.coefficients
    idx = np.flatnonzero(coeffs)
    out = np.zeros(flat.shape, dtype=complex)
    step = max(1, _CHUNK // max(1, flat.size))
    for start in range(0, idx.size, step):
        n = idx[start:start + step]
        out -= (np.expm1(1j * flat[:, None] * n[None, :]) * coeffs[n][None, :]).sum(axis=1)
    # prefix mass below one is the truncated tail; it sits in phi's defect too
    return (out + (1.0 - math.fsum(coeffs))).reshape(th.shape)


def convolve(a, b):
    """Density of the sum of independent draws from ``a`` and ``b``.

    The prefix is the exact convolution of prefixes; the truncated mass is
    ``ta + tb - ta*tb``, which is exactly what the prefix misses.
    """
    validate(a)
    validate(b)
    if a.coefficients.size * b.coefficients.size <= 1 << 24:
        c = np.convolve(a.coefficients, b.coefficients)
    else:
        from scipy.signal import fftconvolve

        c = np.clip(fftconvolve(a.coefficients, b.coefficients), 0.0, None)
    ta, tb = a.tail_mass_bound, b.tail_mass_bound
    closed_phi = closed_deficit = None
    if a.closed_phi is not None and b.closed_phi is not None:
        def closed_phi(z):
            return a.closed_phi(z) * b.closed_phi(z)

    if a.closed_deficit is not None and b.closed_deficit is not None:
        def closed_deficit(th):
            ua, ub = a.closed_deficit(th), b.closed_deficit(th)
            return ua + ub - ua * ub

    out = Density(c, ta + tb - ta * tb, name=f"({a.name}*{b.name})",
                  closed_phi=closed_phi, closed_deficit=closed_deficit)
    validate(out)
    return out


def point_mass(k=0):
    """Unit mass at ``k``."""
    k = int(k)
    if k < 0:
        raise DomainError("point mass index must be >= 0")
    c = np.zeros(k + 1)
    c[k] = 1.0

    def closed_deficit(th):
        return -np.expm1(1j * k * th)

    return Density(c, 0.0, "point_mass", {"k": k},
                   closed_phi=lambda z: z ** k, closed_deficit=closed_deficit)


def lazy_bernoulli(p=0.5):
    """``a = (1 - p, p)``; ``p = 1/2`` is the lazy walk."""
    p = float(p)
    if not 0 <= p <= 1:
        raise DomainError("lazy_bernoulli needs p in [0, 1]")

    def closed_deficit(th):
        return -p * np.expm1(1j * th)

    return Density(np.array([1 - p, p]), 0.0, "lazy_bernoulli", {"p": p},
                   closed_phi=lambda z: (1 - p) + p * z, closed_deficit=closed_deficit)


def geometric(r=0.5):
    """``a_n = (1 - r) r^n``, truncated once the tail ``r^(N+1)`` drops below 1e-12."""
    r = float(r)
    if not 0 <= r < 1:
        raise DomainError("geometric needs r in [0, 1)")
    if r == 0:
        return point_mass(0)
    N = max(0, int(math.ceil(math.log(TRUNCATION_TOL) / math.log(r))) - 1)
    n = np.arange(N + 1)
    c = (1 - r) * r ** n

    def closed_phi(z):
        return (1 - r) / (1 - r * z)

    def closed_deficit(th):
        return -r * np.expm1(1j * th) / (1 - r * np.exp(1j * th))

    return Density(c, r ** (N + 1), "geometric", {"r": r},
                   closed_phi=closed_phi, closed_deficit=closed_deficit)


def _log_example_phi(z):
    z = np.asarray(z, dtype=complex)
    out = np.ones(z.shape, dtype=complex)
    away = z != 1
    w = 1 - z[away]
    # principal branch; w has Re >= 0 on the closed disk
    out[away] = z[away] + w * np.log(w)
    return out


def _log_example_deficit(th):
    th = np.asarray(th, dtype=float)
    out = np.zeros(th.shape, dtype=complex)
    away = th != 0
    w = -np.expm1(1j * th[away])
    out[away] = w - w * np.log(w)
    return out


def log_example(N=10**6):
    """``a_0 = a_1 = 0``, ``a_n = 1/(n(n-1))`` for ``n >= 2``.

    Generating function ``lam + (1 - lam) log(1 - lam)``.  The telescoping
    tail beyond ``N`` is exactly ``1/N``.
    """
    N = int(N)
    if N < 2:
        raise DomainError("log_example needs N >= 2")
    n = np.arange(N + 1, dtype=float)
    c = np.zeros(N + 1)
    c[2:] = 1.0 / (n[2:] * (n[2:] - 1))
    return Density(c, 1.0 / N, "log_example", {"N": N},
                   closed_phi=_log_example_phi, closed_deficit=_log_example_deficit)


FAMILIES = {
    "point_mass": point_mass,
    "lazy_bernoulli": lazy_bernoulli,
    "geometric": geometric,
    "log_example": log_example,
}


def builtin_family(name, **params):
    """Construct a named family: point_mass(k), lazy_bernoulli(p), geometric(r), log_example(N)."""
    try:
        factory = FAMILIES[name]
    except KeyError:
        raise DomainError(f"unknown density family {name!r}; choose from {sorted(FAMILIES)}") from None
    try:
        a = factory(**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name}: {exc}") from None
    validate(a)
    return a
