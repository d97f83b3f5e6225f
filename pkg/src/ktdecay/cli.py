"""Batch driver: job files in, CSV tables, plot data, figures and reports out.

A job file is a flat sectioned key-value text::

    [operator]
    kind = toeplitz
    family = log_example

    [rate]
    kind = powerlog
    C = 2.2
    alpha = 1
    beta = 1

    [task]
    n = 100..10000

    [output]
    dir = out

Verbs: ``rates``, ``resolvent``, ``envelope``, ``verify``, ``compare``, ``fit``.
Exit status is 0 on pass, 2 when a verification hypothesis is not
satisfied, 1 on errors or failed verdicts.
"""

import argparse
import csv
from dataclasses import dataclass, field
import math
import os
from pathlib import Path
import sys
import traceback

import numpy as np

from . import density as dens
from . import operators as ops
from . import ratefun as rf
from . import verify as vf
from ._search import log_nodes
from .errors import KTDecayError, SpecError

__all__ = ["JobSpec", "parse_spec", "run", "render_report", "main", "DEFAULTS", "TASKS", "CLAIMS"]

TASKS = ("rates", "resolvent", "envelope", "verify", "compare", "fit")
CLAIMS = ("upper-mlog", "upper-posinc", "lower", "sandwich", "comparisons", "necessity")

DEFAULTS = {
    "grid_per_decade": 64,
    "tolerance": 1e-9,
    "n": (100, 10_000),
    "n_per_decade": 8,
    "theta": (1e-5, math.pi),
    "eps": (1e-6, math.pi),
    "sample_per_decade": 8,
    "output_dir": "ktdecay_out",
    "plots": True,
    "threads_env": ops.THREADS_ENV,
}

_KEYS = {
    "operator": {"kind", "family", "p", "r", "N", "k", "points", "alpha", "scale"},
    "rate": {"kind", "C", "alpha", "beta", "eps_flat", "domain_min", "eps_min", "per_decade"},
    "task": {"task", "n", "n_per_decade", "theta", "eps", "claim", "c", "c_list", "delta",
             "delta_prime", "c_prime", "alpha", "grid_per_decade", "t_min", "tolerance",
             "theta_min", "n_fit", "eps_min"},
    "output": {"dir", "plots"},
}
_OPERATOR_KINDS = ("toeplitz", "diagonal", "curve", "identity")
_RATE_KINDS = ("power", "powerlog", "envelope", "envelope-power")
_FAMILY_PARAMS = {"point_mass": {"k"}, "lazy_bernoulli": {"p"}, "geometric": {"r"}, "log_example": {"N"}}
_NEEDS_RATE = {"upper-mlog", "upper-posinc", "lower", "comparisons", "necessity"}
_NEEDS_OPERATOR = {"rates", "resolvent", "envelope", "fit"}


@dataclass
class JobSpec:
    """Validated job: operator and rate descriptors, task parameters, output flags."""

    task: str
    operator: dict = field(default_factory=dict)
    rate: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)

    @property
    def grid(self):
        return ops.GridConfig(per_decade=int(self.params.get("grid_per_decade", DEFAULTS["grid_per_decade"])),
                              t_min=self.params.get("t_min"))

    @property
    def tolerance(self):
        return float(self.params.get("tolerance", DEFAULTS["tolerance"]))

    @property
    def out_dir(self):
        return Path(self.output.get("dir", DEFAULTS["output_dir"]))

    def n_values(self):
        spec = self.params.get("n", DEFAULTS["n"])
        per = int(self.params.get("n_per_decade", DEFAULTS["n_per_decade"]))
        if isinstance(spec, tuple):
            return vf.n_grid(int(spec[0]), int(spec[1]), per)
        return np.unique(np.asarray(spec, dtype=np.int64))


# ---------------------------------------------------------------- parsing

def _scalar(text):
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    for conv in (int, float, complex):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _value(text, lineno):
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise SpecError("unterminated list", lineno)
        body = text[1:-1].strip()
        items = [_scalar(t.strip()) for t in body.split(",")] if body else []
        if any(isinstance(v, (str, bool)) for v in items):
            raise SpecError(f"list entries must be numbers: {text!r}", lineno)
        return items
    if ".." in text:
        lo, _, hi = text.partition("..")
        lo, hi = _scalar(lo.strip()), _scalar(hi.strip())
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (lo, hi)):
            raise SpecError(f"range ends must be numbers: {text!r}", lineno)
        if hi < lo:
            raise SpecError(f"empty range {text!r}", lineno)
        return (lo, hi)
    return _scalar(text)


def _number(job, section, key, positive=False):
    store = getattr(job, section if section != "task" else "params")
    v = store.get(key)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecError(f"[{section}] {key} must be a number", job.lines.get((section, key)))
    if positive and not v > 0:
        raise SpecError(f"[{section}] {key} must be positive", job.lines.get((section, key)))
    return v


def parse_spec(text, task=None):
    """Parse and validate a job file.

    Parameters
    ----------
    text : str
        Job file contents.
    task : str, optional
        Verb from the command line; must agree with ``[task] task`` if both
        are given.

    Raises
    ------
    SpecError
        Schema violations carry the offending line number; semantic
        rejections name the violated rule.
    """
    sections = {name: {} for name in _KEYS}
    lines = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise SpecError(f"malformed section header {line!r}", lineno)
            current = line[1:-1].strip()
            if current not in _KEYS:
                raise SpecError(f"unknown section [{current}]; expected one of {sorted(_KEYS)}", lineno)
            continue
        if current is None:
            raise SpecError("entry outside any section", lineno)
        key, sep, val = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise SpecError(f"expected key = value, got {line!r}", lineno)
        if key not in _KEYS[current]:
            raise SpecError(f"unknown key {key!r} in [{current}]", lineno)
        if key in sections[current]:
            raise SpecError(f"duplicate key {key!r} in [{current}]", lineno)
        sections[current][key] = _value(val, lineno)
        lines[(current, key)] = lineno

    file_task = sections["task"].pop("task", None)
    if task is not None and file_task is not None and task != file_task:
        raise SpecError(f"verb {task!r} disagrees with task = {file_task!r}", lines.get(("task", "task")))
    task = task or file_task
    if task not in TASKS:
        raise SpecError(f"task must be one of {TASKS}, got {task!r}", lines.get(("task", "task")))
    job = JobSpec(task, sections["operator"], sections["rate"], sections["task"], sections["output"], lines)
    validate_job(job)
    return job


def validate_job(job):
    """Semantic checks shared by :func:`parse_spec` and command-line overrides."""
    op, rate, p = job.operator, job.rate, job.params
    claim = p.get("claim")
    if job.task == "verify":
        if claim not in CLAIMS:
            raise SpecError(f"verify needs claim in {CLAIMS}, got {claim!r}", job.lines.get(("task", "claim")))
    elif claim is not None:
        raise SpecError("claim is only meaningful for verify", job.lines.get(("task", "claim")))

    needs_op = job.task in _NEEDS_OPERATOR or (job.task == "verify" and claim != "comparisons")
    if op:
        kind = op.get("kind")
        if kind not in _OPERATOR_KINDS:
            raise SpecError(f"[operator] kind must be one of {_OPERATOR_KINDS}", job.lines.get(("operator", "kind")))
        allowed = {"kind"} | {
            "toeplitz": {"family"} | set().union(*_FAMILY_PARAMS.values()),
            "diagonal": {"points"}, "curve": {"alpha", "scale"}, "identity": set(),
        }[kind]
        for key in op:
            if key not in allowed:
                raise SpecError(f"[operator] {key} does not apply to kind={kind}", job.lines.get(("operator", key)))
        if kind == "toeplitz":
            fam = op.get("family")
            if fam not in _FAMILY_PARAMS:
                raise SpecError(f"[operator] family must be one of {sorted(_FAMILY_PARAMS)}",
                                job.lines.get(("operator", "family")))
            for key in set(op) - {"kind", "family"} - _FAMILY_PARAMS[fam]:
                raise SpecError(f"[operator] {key} does not apply to family={fam}", job.lines.get(("operator", key)))
        if kind == "diagonal" and not isinstance(op.get("points"), list):
            raise SpecError("[operator] diagonal needs points = [ ... ]", job.lines.get(("operator", "kind")))
    elif needs_op:
        raise SpecError(f"task {job.task} needs an [operator] section")

    needs_rate = job.task == "compare" or (job.task == "verify" and claim in _NEEDS_RATE)
    if rate:
        kind = rate.get("kind")
        if kind not in _RATE_KINDS:
            raise SpecError(f"[rate] kind must be one of {_RATE_KINDS}", job.lines.get(("rate", "kind")))
        if kind in ("envelope", "envelope-power") and not op:
            raise SpecError(f"[rate] kind={kind} needs an [operator]", job.lines.get(("rate", "kind")))
        for key in ("C", "eps_flat", "domain_min", "eps_min"):
            _number(job, "rate", key, positive=True)
    elif needs_rate:
        raise SpecError(f"{claim or job.task} needs a [rate] section")

    for key in ("c", "delta", "delta_prime", "c_prime", "alpha", "t_min", "tolerance", "theta_min", "eps_min"):
        _number(job, "task", key, positive=True)
    if claim == "sandwich":
        d = p.get("delta", 1.0)
        dp = p.get("delta_prime")
        if not 0 < d <= 1:
            raise SpecError("rule violated: delta must lie in (0, 1]", job.lines.get(("task", "delta")))
        if dp is not None and not d < dp < 1:
            raise SpecError(f"rule violated: delta_prime must lie in (delta, 1); got delta={d:g}, "
                            f"delta_prime={dp:g}", job.lines.get(("task", "delta_prime")))
        if dp is not None and not p.get("c", 1.5) > 1:
            raise SpecError("rule violated: c must exceed 1 for the lower bound", job.lines.get(("task", "c")))
    if claim == "upper-mlog" and not 0 < p.get("c", 0.5) < 1:
        raise SpecError("rule violated: c must lie in (0, 1)", job.lines.get(("task", "c")))

    n = p.get("n", DEFAULTS["n"])
    if not (isinstance(n, tuple) or isinstance(n, list)) or any(
            isinstance(v, bool) or not float(v).is_integer() or v < 1 for v in n):
        raise SpecError("n must be a range lo..hi or a list of positive integers", job.lines.get(("task", "n")))
    n_max = max(n)
    limit = ops.max_trusted_n(job.grid)
    if n_max > limit:
        raise SpecError(f"rule violated: grid validity needs finest spacing <= 1/(10 n); "
                        f"n={n_max:g} exceeds {limit:.6g} at t_min={p.get('t_min')}",
                        job.lines.get(("task", "n")))
    return job


# ---------------------------------------------------------------- builders

def build_operator(job):
    op = job.operator
    kind = op["kind"]
    if kind == "toeplitz":
        fam = op["family"]
        params = {k: (int(v) if k in ("N", "k") else v) for k, v in op.items() if k not in ("kind", "family")}
        return ops.ToeplitzDensity(dens.builtin_family(fam, **params))
    if kind == "diagonal":
        return ops.DiagonalSpectrum(np.asarray(op["points"], dtype=complex))
    if kind == "curve":
        return ops.power_curve(float(op.get("alpha", 2.0)), float(op.get("scale", 1.0)))
    return ops.DiagonalSpectrum()


def build_rate(job, T=None):
    rate = job.rate
    kind = rate["kind"]
    if kind == "power":
        kw = {"domain_min": float(rate["domain_min"])} if "domain_min" in rate else {}
        return rf.power_law(float(rate.get("C", 1.0)), float(rate.get("alpha", 1.0)), **kw)
    if kind == "powerlog":
        kw = {k: float(rate[k]) for k in ("domain_min", "eps_flat") if k in rate}
        return rf.power_log(float(rate.get("C", 1.0)), float(rate.get("alpha", 1.0)),
                            float(rate.get("beta", 1.0)), **kw)
    eps_min = float(rate.get("eps_min", 1e-6))
    if kind == "envelope":
        return ops.envelope_rate(T, eps_min=eps_min, per_decade=int(rate.get("per_decade", 16)), grid=job.grid)
    return vf.fit_power_majorant(T, float(rate.get("alpha", 1.0)), eps_min=eps_min, grid=job.grid)


def _sample(job, key):
    spec = job.params.get(key, DEFAULTS[key])
    if isinstance(spec, tuple):
        lo, hi = float(spec[0]), min(float(spec[1]), math.pi)
        return log_nodes(lo, hi, DEFAULTS["sample_per_decade"])
    return np.asarray(spec, dtype=float)


# ---------------------------------------------------------------- output

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def write_plot_data(path, x, y):
    """Two-column series, 9 significant digits."""
    with open(path, "w") as fh:
        for a, b in zip(x, y):
            fh.write(f"{float(a):.9g} {float(b):.9g}\n")
    return path


def _emit_series(job, stem, series, xlabel, ylabel, title):
    out = job.out_dir
    for label, (x, y) in series.items():
        write_plot_data(out / f"{stem}_{label}.dat", x, y)
    if job.output.get("plots", DEFAULTS["plots"]):
        from .plotting import loglog_figure

        loglog_figure(out / f"{stem}.png", series, xlabel, ylabel, title)


def _value_text(v, digits):
    if isinstance(v, (float, np.floating)):
        return format(float(v), f".{digits}g")
    if isinstance(v, tuple):
        return "(" + ", ".join(_value_text(x, digits) for x in v) + ")"
    return str(v)


def render_report(report, indent=""):
    """Deterministic plain-text rendering of a :class:`VerificationReport`.

    Fit reports show ``a``, ``b`` and ``residual`` to 4 significant figures;
    other constants use 6.
    """
    digits = 4 if report.claim_id == "fit-rate" else 6
    out = [f"{indent}claim: {report.claim_id}",
           f"{indent}verdict: {report.verdict.upper()}",
           f"{indent}n_range: {report.n_range[0]}..{report.n_range[-1]}"]
    if report.constants:
        out.append(f"{indent}constants:")
        out.extend(f"{indent}  {k} = {_value_text(v, digits)}" for k, v in report.constants.items())
    if report.applicability_window:
        out.append(f"{indent}window:")
        out.extend(f"{indent}  {k} = {_value_text(v, 6)}" for k, v in report.applicability_window.items())
    if report.margins:
        lo, hi = report.margin_extremes()
        rows = [m for m in report.margins if np.isfinite(m.ratio)]
        n_lo = min(rows, key=lambda m: m.ratio).n if rows else "-"
        n_hi = max(rows, key=lambda m: m.ratio).n if rows else "-"
        out.append(f"{indent}margins: min ratio {lo:.6g} at n={n_lo}, max ratio {hi:.6g} at n={n_hi}")
    if report.failed_precondition:
        out.append(f"{indent}failed precondition: {report.failed_precondition}")
    for note in report.notes:
        out.append(f"{indent}note: {note}")
    for part in report.parts:
        out.append(f"{indent}part:")
        out.append(render_report(part, indent + "  "))
    return "\n".join(out)


# ---------------------------------------------------------------- tasks

def _task_rates(job):
    T = build_operator(job)
    prof = ops.decay_profile(T, job.n_values(), job.grid)
    write_csv(job.out_dir / "rates.csv", ["n", "value", "method", "error_budget"],
              [(e.n, e.value, e.method, e.error_budget) for e in prof.entries])
    _emit_series(job, "rates", {"decay": (prof.n, prof.values)}, "n", r"$\|T^n(I-T)\|$", T.name)
    return 0, None


def _task_resolvent(job):
    T = build_operator(job)
    theta = _sample(job, "theta")
    vals = ops.resolvent_norm(T, theta, job.grid)
    method = "symbol-exact" if isinstance(T, ops.DiagonalSpectrum) else "grid-inf"
    write_csv(job.out_dir / "resolvent.csv", ["theta", "value", "method", "error_budget"],
              [(t, v, method, 1e-9 * v) for t, v in zip(theta, vals)])
    _emit_series(job, "resolvent", {"resolvent": (theta, vals)}, r"$\theta$",
                 r"$\|R(e^{i\theta},T)\|$", T.name)
    return 0, None


def _task_envelope(job):
    T = build_operator(job)
    eps = _sample(job, "eps")
    vals = ops.resolvent_envelope(T, eps, job.grid)
    write_csv(job.out_dir / "envelope.csv", ["eps", "value", "method", "error_budget"],
              [(e, v, "grid-sup", 1e-9 * v) for e, v in zip(eps, vals)])
    _emit_series(job, "envelope", {"envelope": (eps, vals)}, r"$\varepsilon$", "envelope", T.name)
    return 0, None


def _task_compare(job):
    T = build_operator(job) if job.operator else None
    m = build_rate(job, T)
    n = job.n_values().astype(float)
    inv, f1 = rf.right_inverse(m, n, full_output=True)
    inv_log, f2 = rf.m_log_inverse(m, n, full_output=True)
    inv_max, f3 = rf.m_max_inverse(m, n, full_output=True)
    rows = [(int(k), a, b, c, "log-bisection", rf.INVERSE_RTOL * max(a, b, c), bool(x or y or z))
            for k, a, b, c, x, y, z in zip(n, inv, inv_log, inv_max, f1, f2, f3)]
    write_csv(job.out_dir / "compare.csv",
              ["n", "m_inverse", "m_log_inverse", "m_max_inverse", "method", "error_budget", "extrapolated"], rows)
    _emit_series(job, "compare", {"m_inverse": (n, inv), "m_log_inverse": (n, inv_log),
                                  "m_max_inverse": (n, inv_max)}, "n", "inverse", m.describe())
    return 0, None


def _task_fit(job):
    T = build_operator(job)
    prof = ops.decay_profile(T, job.n_values(), job.grid)
    write_csv(job.out_dir / "fit_profile.csv", ["n", "value", "method", "error_budget"],
              [(e.n, e.value, e.method, e.error_budget) for e in prof.entries])
    window = job.params.get("n_fit")
    fit = vf.fit_rate(prof, window if isinstance(window, tuple) else None)
    report = vf.rate_fit_report(fit, (int(prof.n[0]), int(prof.n[-1])))
    fitted = np.exp(fit.log_constant) * prof.n ** -fit.a * np.log(np.maximum(prof.n, 2)) ** fit.b
    _emit_series(job, "fit", {"decay": (prof.n, prof.values), "fit": (prof.n, fitted)}, "n",
                 r"$\|T^n(I-T)\|$", T.name)
    return 0, report


def _task_verify(job):
    p = job.params
    claim = p["claim"]
    T = build_operator(job) if job.operator else None
    m = build_rate(job, T) if job.rate else None
    n = job.n_values()
    grid = job.grid
    if claim == "upper-mlog":
        report = vf.check_upper_mlog(T, m, p.get("c", 0.5), n, grid)
    elif claim == "upper-posinc":
        report = vf.check_upper_posinc(T, m, n, grid)
    elif claim == "lower":
        c_list = tuple(p.get("c_list", [0.5, 1.0, 2.0]))
        report = vf.check_lower(T, m, c_list, n, p.get("theta_min"), grid)
    elif claim == "sandwich":
        report = vf.check_sandwich_quasimult(T, p.get("delta", 1.0), p.get("delta_prime"), p.get("c", 1.5), n,
                                             p.get("eps_min", 1e-6), grid, job.tolerance)
    elif claim == "comparisons":
        report = vf.check_comparisons(m, p.get("alpha", 1.0), p.get("c", 1.0), p.get("c_prime", 2.0), n,
                                      job.tolerance)
    else:
        report = vf.necessity_diagnostic(T, m, p.get("c", 1.0), p.get("delta", 0.5), n, grid)
    rows = []
    parts = report.parts or (report,)
    for part in parts:
        rows.extend((part.claim_id, mg.n, mg.lhs, mg.rhs, mg.ratio, mg.status, "ratio",
                     job.tolerance * abs(mg.ratio) if np.isfinite(mg.ratio) else math.inf)
                    for mg in part.margins)
    write_csv(job.out_dir / f"verify_{claim}.csv",
              ["claim", "n", "lhs", "rhs", "ratio", "status", "method", "error_budget"], rows)
    series = {}
    for part in parts:
        if part.margins:
            series[part.claim_id] = (np.array([mg.n for mg in part.margins]),
                                     np.array([mg.ratio for mg in part.margins]))
    if series:
        _emit_series(job, f"verify_{claim}", series, "n", "lhs / rhs", claim)
    code = {vf.PASS: 0, vf.HYPOTHESIS: 2}.get(report.verdict, 1)
    return code, report


_RUNNERS = {
    "rates": _task_rates, "resolvent": _task_resolvent, "envelope": _task_envelope,
    "compare": _task_compare, "fit": _task_fit, "verify": _task_verify,
}


def run(job, stream=None):
    """Execute a job; return the exit status.

    Artifacts go to ``job.out_dir``.  Errors leave an ``error.txt``
    diagnostic record there and return 1.
    """
    stream = stream or sys.stdout
    out = job.out_dir
    out.mkdir(parents=True, exist_ok=True)
    try:
        code, report = _RUNNERS[job.task](job)
    except (KTDecayError, ValueError, ArithmeticError) as exc:
        record = f"task: {job.task}\nerror: {type(exc).__name__}: {exc}\n"
        (out / "error.txt").write_text(record + "\n" + traceback.format_exc())
        stream.write(record)
        return 1
    if report is not None:
        text = render_report(report) + "\n"
        name = "fit.txt" if job.task == "fit" else "report.txt"
        (out / name).write_text(text)
        stream.write(text)
    return code


# ---------------------------------------------------------------- entry point

def _show_config(job=None):
    lines = ["defaults:"]
    lines.extend(f"  {k} = {_value_text(v, 6)}" for k, v in DEFAULTS.items())
    lines.append(f"  threads = ${ops.THREADS_ENV} (currently {os.environ.get(ops.THREADS_ENV, '1')})")
    if job is not None:
        lines.append("job:")
        lines.append(f"  task = {job.task}")
        for section, store in (("operator", job.operator), ("rate", job.rate), ("task", job.params),
                               ("output", job.output)):
            for k, v in store.items():
                lines.append(f"  [{section}] {k} = {_value_text(v, 6)}")
    return "\n".join(lines) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(prog="ktdecay", description="Decay rates of quasi-multiplication operators.")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in TASKS:
        p = sub.add_parser(verb)
        p.add_argument("--spec", type=Path, help="job file")
        p.add_argument("--out", type=Path, help="output directory (overrides [output] dir)")
        p.add_argument("--n-max", type=int, help="replace the upper end of the n-range")
        p.add_argument("--grid-per-decade", type=int, help="log-grid density for spectral sup/inf")
        p.add_argument("--no-plots", action="store_true", help="skip figure rendering")
        p.add_argument("--show-config", action="store_true", help="print defaults and the parsed job, then exit")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        job = None
        if args.spec is not None:
            job = parse_spec(args.spec.read_text(), task=args.verb)
            if args.n_max is not None:
                n = job.params.get("n", DEFAULTS["n"])
                lo = n[0] if isinstance(n, tuple) else min(n)
                job.params["n"] = (int(lo), int(args.n_max))
            if args.grid_per_decade is not None:
                job.params["grid_per_decade"] = args.grid_per_decade
            if args.out is not None:
                job.output["dir"] = str(args.out)
            if args.no_plots:
                job.output["plots"] = False
            validate_job(job)
        if args.show_config:
            sys.stdout.write(_show_config(job))
            return 0
        if job is None:
            raise SpecError("--spec is required")
    except (SpecError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
