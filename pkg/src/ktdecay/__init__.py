"""Decay rates of power-bounded operators from resolvent growth.

Submodules
----------
ratefun    rate functions, right inverses, m_log / m_max transforms and the
           positive-increase diagnostic
density    probability densities on Z+ and their generating functions
operators  quasi-multiplication models, exact decay and resolvent norms,
           finite-section oracle
verify     finite-range checks of upper, lower and two-sided decay bounds
cli        job-file driver writing CSV tables, plot data and figures
"""

from .errors import *  # noqa: F401,F403
from .ratefun import (  # noqa: F401
    PowerLaw, PowerLog, SampledRate, m_log, m_log_inverse, m_max, m_max_inverse,
    positive_increase_diagnostic, power_law, power_log, right_inverse,
)
from .density import Density, builtin_family, convolve, is_aperiodic, phi  # noqa: F401
from .operators import (  # noqa: F401
    DiagonalSpectrum, GridConfig, SpectralCurve, ToeplitzDensity, decay_norm, decay_profile,
    envelope_rate, finite_section, power_curve, resolvent_envelope, resolvent_norm,
    section_decay_norm, spectrum_distance,
)
from .verify import (  # noqa: F401
    VerificationReport, check_comparisons, check_lower, check_sandwich_quasimult,
    check_upper_mlog, check_upper_posinc, delta_estimate, fit_rate, necessity_diagnostic,
)

__version__ = "0.1.0"
