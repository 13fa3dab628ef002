"""
Command-line front end: evaluate a regulated integral at a point, dump its
series or extracted value, tabulate it over a parameter grid, or run the
verification suite.

    loopreg eval --scheme cutoff --d 3 --alpha 1 --m2 1 --K 10
    loopreg extract --scheme two_sided --d 3 --alpha 1 --delta 1e-3
    loopreg grid --scheme cutoff --d 3 --alpha 2 --grid K=10:1e4:4:log
    loopreg verify --format csv --out verify.csv

Exit codes: 0 ok, 1 property failure (verify), 2 configuration or domain
error, 3 pole, 4 non-convergence.

License: BSD-style (see LICENSE.txt in main source directory)
"""

import argparse
import csv
import io
import json
import math
import numbers
import os
import sys
from concurrent import futures
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np
from sklearn.model_selection import ParameterGrid
from sklearn.utils import check_scalar

from loopreg import __version__, dimreg, oracle, schemes, series
from loopreg.base import DEFAULT_N_MAX, FAMILIES, Params, SchemeSpec
from loopreg.utils import (DomainError, LoopRegError, NonConvergence,
                           PoleError, RecurrenceViolation, relative_residual)


__all__ = ['COMMANDS',
           'FORMATS',
           'SCHEMES',
           'VERDICTS',
           'CSV_COLUMNS',
           'DEFAULT_GRID',
           'BESSEL_GRID',
           'FIXED_CHECKS',
           'ConfigError',
           'GridAxis',
           'RunConfig',
           'Record',
           'Report',
           'cmd_eval',
           'cmd_series',
           'cmd_extract',
           'cmd_verify',
           'cmd_grid',
           'build_parser',
           'load_config',
           'render',
           'main']


COMMANDS = ('eval', 'series', 'extract', 'verify', 'grid')
FORMATS = ('json', 'csv', 'text')

# CLI scheme names; 'dimreg' is the unregulated master formula.
SCHEMES = {
    'dimreg': None,
    'cutoff': 'cutoff_uv',
    'gaussian': 'gaussian_uv',
    'window': 'ir_window',
    'gaussian_ir': 'gaussian_ir',
    'two_sided': 'two_sided_gaussian',
    'separate_cutoff': 'separate_cutoff',
    'separate_two_sided': 'separate_two_sided',
    'mellin': 'mellin_demo',
    'quartic': 'quartic_demo',
}

VERDICTS = ('pass', 'fail', 'pole', 'nonconvergence', 'domain', 'info')

PARAM_NAMES = ('d', 'alpha', 'beta', 'm2', 'M2')
SCALE_NAMES = ('K', 'delta', 'xi', 'z', 'a')
INPUT_NAMES = ('d', 'alpha', 'beta', 'm2', 'M2', 'K', 'delta', 'xi')

CSV_COLUMNS = (INPUT_NAMES
               + ('value', 'err', 'dimreg', 'gap', 'oracle', 'residual_rel',
                  'verdict'))

DEFAULT_GRID = {
    'd': (1.5, 2.3, 3.0, 3.7),
    'alpha': (-1.3, -0.5, 0.4, 1.0, 2.6),
    'm2': (0.5, 1.0, 4.0),
    'K': (1e2, 1e4),
    'delta': (1e-2, 1e-4),
}

# Properties checked at fixed points, whatever the grid.
BESSEL_GRID = {
    'd': (2.5, 3.0, 3.5),
    'alpha': (0.7, 1.0, 1.8),
    'delta': (0.1, 1.0),
}
LOG_CASE_K = (1e2, 1e3)
TWO_MASS_POINTS = ({'d': 3.0, 'alpha': 1.0, 'beta': 1.0, 'm2': 1.0,
                    'M2': 4.0},)
# K/M and delta*M2 of the two-mass extractions.
TWO_MASS_K_RATIO = 1e3
TWO_MASS_DELTA = 1e-4
FIXED_CHECKS = ('bessel_closed_form', 'log_case', 'two_mass_oracle',
                'equal_mass', 'two_mass_cutoff_extraction',
                'two_mass_gaussian_extraction')

# Default relative tolerances of the comparisons.
ORACLE_RTOL = 1e-8
EXTRACT_RTOL = 1e-6
EQUAL_MASS_RTOL = 1e-10
TWO_MASS_EXTRACT_RTOL = 1e-5
LOG_CASE_RTOL = 0.1

THREADS_VARIABLE = 'LOOPREG_THREADS'

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_POLE = 3
EXIT_NONCONVERGENCE = 4


class ConfigError(LoopRegError, ValueError):
    """Exception raised for an invalid command line, config file or
    environment."""


@dataclass(frozen=True)
class GridAxis:
    """One swept parameter: `count` values from `lower` to `upper`."""
    name: str
    lower: float
    upper: float
    count: int
    spacing: str = 'linear'

    def __post_init__(self):
        if self.name not in PARAM_NAMES + SCALE_NAMES:
            raise ConfigError('cannot sweep {0!r}'.format(self.name))
        if self.spacing not in ('linear', 'log'):
            raise ConfigError('spacing {0!r} not understood'
                              .format(self.spacing))
        if self.count < 1:
            raise ConfigError('grid count must be at least 1')
        if self.spacing == 'log' and not (self.lower > 0 and self.upper > 0):
            raise ConfigError('log spacing needs positive limits')

    @classmethod
    def parse(cls, text):
        """Parse 'name=min:max:count[:log]'."""
        try:
            name, rest = text.split('=', 1)
            parts = rest.split(':')
            if len(parts) not in (3, 4):
                raise ValueError
            spacing = parts[3] if len(parts) == 4 else 'linear'
            return cls(name.strip(), float(parts[0]), float(parts[1]),
                       int(parts[2]), spacing.strip())
        except ValueError as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError('grid axis {0!r} is not name=min:max:count'
                              '[:log]'.format(text))

    def values(self):
        if self.count == 1:
            return [self.lower]
        if self.spacing == 'log':
            return [float(x) for x in np.geomspace(self.lower, self.upper,
                                                   self.count)]
        return [float(x) for x in np.linspace(self.lower, self.upper,
                                              self.count)]

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class RunConfig:
    """Everything one command needs.

    `values` holds the fixed parameters and scales given by flags or the
    config file; `grid` the swept ones.
    """
    command: str
    scheme: str = 'dimreg'
    values: dict = field(default_factory=dict)
    grid: tuple = ()
    terms: int = DEFAULT_N_MAX
    tol: Optional[float] = None
    output: str = 'json'
    out: Optional[str] = None
    threads: int = 1
    verbose: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError('command {0!r} not understood'
                              .format(self.command))
        if self.scheme not in SCHEMES:
            raise ConfigError('scheme {0!r} not understood; expected one of '
                              '{1}'.format(self.scheme, sorted(SCHEMES)))
        if self.output not in FORMATS:
            raise ConfigError('format {0!r} not understood'
                              .format(self.output))
        _validated(self.terms, 'terms', numbers.Integral, min_val=1)
        _validated(self.threads, 'threads', numbers.Integral, min_val=1)
        if self.tol is not None:
            _validated(self.tol, 'tol', numbers.Real, min_val=0.0,
                       include_boundaries='neither')
        names = [axis.name for axis in self.grid]
        if len(set(names)) != len(names):
            raise ConfigError('each parameter may be swept only once')

    @property
    def family(self):
        return SCHEMES[self.scheme]

    def points(self):
        """Parameter dicts of every grid point, in a fixed order."""
        axes = {axis.name: axis.values() for axis in self.grid}
        if not axes:
            return [dict(self.values)]
        return [dict(self.values, **point) for point in ParameterGrid(axes)]

    def as_dict(self):
        """Settings that determine the report; output location, threads and
        verbosity are left out."""
        return {'command': self.command,
                'scheme': self.scheme,
                'values': dict(sorted(self.values.items())),
                'grid': [axis.as_dict() for axis in self.grid],
                'terms': self.terms,
                'tol': self.tol}


def _validated(value, name, target_type, **bounds):
    try:
        return check_scalar(value, name, target_type, **bounds)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e))


@dataclass
class Record:
    """One evaluated point or one verified property."""
    check: str
    inputs: dict
    value: Optional[float] = None
    err: Optional[float] = None
    dimreg: Optional[float] = None
    gap: Optional[float] = None
    oracle: Optional[float] = None
    residual_rel: Optional[float] = None
    verdict: str = 'info'
    note: str = ''
    series: Optional[str] = None

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError('verdict {0!r} not understood'
                             .format(self.verdict))

    def as_dict(self):
        d = asdict(self)
        if d['series'] is None:
            del d['series']
        return d


@dataclass
class Report:
    config: dict
    records: list

    @property
    def summary(self):
        verdicts = [r.verdict for r in self.records]
        residuals = [r.residual_rel for r in self.records
                     if r.residual_rel is not None
                     and math.isfinite(r.residual_rel)]
        return {'records': len(self.records),
                'pass': verdicts.count('pass'),
                'fail': verdicts.count('fail'),
                'skipped': sum(v not in ('pass', 'fail', 'info')
                               for v in verdicts),
                'max_residual': max(residuals) if residuals else None}

    def as_dict(self):
        return {'config': self.config,
                'records': [r.as_dict() for r in self.records],
                'summary': self.summary}


def _inputs(values):
    return {name: values.get(name) for name in INPUT_NAMES}


def _params(values):
    if values.get('d') is None or values.get('alpha') is None:
        raise ConfigError('--d and --alpha are required')
    m2 = values.get('m2')
    return Params(d=values['d'], alpha=values['alpha'],
                  m2=1.0 if m2 is None else m2,
                  beta=values.get('beta'), M2=values.get('M2'))


def _spec(family, values):
    if family is None:
        return None
    scales = {}
    for name in FAMILIES[family]:
        value = values.get(name)
        if value is None and name == 'xi':
            value = values.get('delta')
        if value is None:
            raise ConfigError('scheme {0} needs --{1}'.format(family, name))
        scales[name] = value
    return SchemeSpec(family=family, **scales)


def _reference(p):
    """The dimensionally regularized value at `p`, or None at a pole."""
    if dimreg.classify(p).kind not in ('convergent', 'continued'):
        return None
    if p.two_mass:
        return dimreg.two_mass_master(p).value
    if p.m2 == 0:
        return dimreg.veltman_scaleless(p.d, p.alpha).value
    return dimreg.master_one_loop(p).value


def _oracle(p, spec, tol):
    if spec is None:
        if dimreg.classify(p).kind != 'convergent' or p.m2 == 0:
            return None, None
    try:
        res = oracle.scheme_oracle(p, spec, tol=tol)
    except DomainError:
        # The demo integrands only exist where their regulator converges.
        return None, None
    return res.value, res.err_est


def _compare(value, reference, allowance, tol):
    residual = relative_residual(value, reference)
    scale = abs(reference) if reference else 1.0
    return residual, residual <= max(tol, allowance / scale)


def _regulator(cfg, spec):
    return schemes.regulator_for(spec, n_max=cfg.terms, verbose=cfg.verbose)


def _log(cfg, message):
    if cfg.verbose:
        print(message, file=sys.stderr)


def _eval_point(cfg, values):
    p = _params(values)
    spec = _spec(cfg.family, values)
    if spec is None:
        value = _reference(p)
        if value is None:
            # Let the master formula raise the informative error.
            dimreg.master_one_loop(p)
        result_err = 0.0
    else:
        result = _regulator(cfg, spec).evaluate(p)
        value, result_err = result.value, result.abs_err
    reference = _safe_reference(p)
    tol = cfg.tol if cfg.tol is not None else ORACLE_RTOL
    truth, truth_err = _oracle(p, spec, min(tol, oracle.DEFAULT_RTOL))
    record = Record('eval', _inputs(values), value=value, err=result_err,
                    dimreg=reference, oracle=truth)
    if reference is not None:
        record.gap = value - reference
    if truth is not None:
        allowance = 0.0 if cfg.tol is not None else result_err + truth_err
        record.residual_rel, ok = _compare(value, truth, allowance, tol)
        record.verdict = 'pass' if ok else 'fail'
    return [record]


def _safe_reference(p):
    try:
        return _reference(p)
    except (PoleError, DomainError):
        return None


def _series_point(cfg, values):
    p = _params(values)
    spec = _spec(cfg.family, values)
    if spec is None:
        raise ConfigError('the dimreg scheme has no series form')
    s = _regulator(cfg, spec).expand(p)
    scales = spec.scale_values
    return [Record('series', _inputs(values), value=series.eval_at(s, scales),
                   dimreg=s.scale_free_value(),
                   note=s.truncation_note, series=series.to_text(s))]


def _extract_point(cfg, values):
    p = _params(values)
    spec = _spec(cfg.family, values)
    if spec is None:
        raise ConfigError('the dimreg scheme has no series form')
    reg = _regulator(cfg, spec)
    extracted = series.eval_at(reg.extract(p), spec.scale_values)
    reference = _reference(p)
    tol = cfg.tol if cfg.tol is not None else EXTRACT_RTOL
    record = Record('extract', _inputs(values), value=extracted,
                    dimreg=reference)
    if reference is not None:
        record.gap = extracted - reference
        record.residual_rel, ok = _compare(extracted, reference, 0.0, tol)
        record.verdict = 'pass' if ok else 'fail'
    return [record]


_ERROR_VERDICTS = ((PoleError, 'pole', EXIT_POLE),
                   (NonConvergence, 'nonconvergence', EXIT_NONCONVERGENCE),
                   (LoopRegError, 'domain', EXIT_CONFIG))


def _guarded(work, check):
    """Run `work` for one grid point, turning a loopreg error into a record
    carrying its verdict."""
    def run(cfg, values):
        try:
            return work(cfg, values)
        except ConfigError:
            raise
        except LoopRegError as e:
            for cls, verdict, _ in _ERROR_VERDICTS:
                if isinstance(e, cls):
                    return [Record(check, _inputs(values), verdict=verdict,
                                   note=str(e))]
            raise
    return run


def _map_points(cfg, work, points):
    """Evaluate `work` at every point, keeping the input order."""
    if cfg.threads == 1 or len(points) == 1:
        chunks = [work(cfg, values) for values in points]
    else:
        with futures.ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            chunks = list(pool.map(lambda v: work(cfg, v), points))
    records = []
    for i, chunk in enumerate(chunks):
        records.extend(chunk)
        _log(cfg, '[{0}/{1}] {2}'.format(i + 1, len(chunks),
                                         chunk[-1].verdict if chunk else ''))
    return records


def cmd_eval(cfg):
    """Evaluate the scheme at one point with its dimreg and oracle
    comparators."""
    if cfg.grid:
        raise ConfigError('eval takes a single point; use grid to sweep')
    return Report(cfg.as_dict(), _eval_point(cfg, cfg.points()[0]))


def cmd_series(cfg):
    return Report(cfg.as_dict(),
                  _map_points(cfg, _series_point, cfg.points()))


def cmd_extract(cfg):
    """Apply the extraction operator over the scheme's scales and compare
    with the master integral."""
    return Report(cfg.as_dict(),
                  _map_points(cfg, _extract_point, cfg.points()))


def cmd_grid(cfg):
    """Tabulate scheme, dimreg and oracle values over the grid.  Points
    that fail are kept in the table with the failure as their verdict."""
    return Report(cfg.as_dict(),
                  _map_points(cfg, _guarded(_eval_point, 'eval'), cfg.points()))


def _check(name, inputs, value, reference, allowance, tol, strict):
    """Compare two numbers; with an explicit tolerance the error bars give
    no extra room."""
    residual, ok = _compare(value, reference, 0.0 if strict else allowance,
                            tol)
    return Record(name, dict(inputs), value=value, oracle=reference,
                  residual_rel=residual, verdict='pass' if ok else 'fail')


def _run_check(name, inputs, fn):
    try:
        return fn()
    except PoleError as e:
        return Record(name, dict(inputs), verdict='pole', note=str(e))
    except (LoopRegError, ArithmeticError) as e:
        return Record(name, dict(inputs), verdict='fail', note=str(e))


def _verify_point(cfg, values, scales):
    """Property suite at one (d, alpha, m2[, beta, M2]) point."""
    p = _params(values)
    inputs = _inputs(values)
    verdict = dimreg.classify(p)
    if verdict.kind not in ('convergent', 'continued'):
        kind = 'pole' if verdict.kind == 'pole' else 'domain'
        return [Record('classify', inputs, verdict=kind,
                       note=verdict.reason)]
    if p.m2 == 0:
        return [Record('classify', inputs, verdict='domain',
                       note='the property suite needs m2 > 0')]
    if p.two_mass:
        return _two_mass_checks(cfg, p, inputs, verdict)

    strict = cfg.tol is not None
    tol = cfg.tol if strict else ORACLE_RTOL
    qtol = min(tol, oracle.DEFAULT_RTOL)
    n_max = cfg.terms
    records = []
    master = dimreg.master_one_loop(p)

    def add(name, point_inputs, fn):
        records.append(_run_check(name, point_inputs, fn))

    if verdict.kind == 'convergent':
        def master_oracle():
            truth = oracle.scheme_oracle(p, None, tol=qtol)
            return _check('master_oracle', inputs, master.value, truth.value,
                          master.abs_err + truth.err_est, tol, strict)
        add('master_oracle', inputs, master_oracle)

    def recurrence():
        try:
            value = dimreg.lower_index(p)
        except RecurrenceViolation as e:
            return Record('recurrence', dict(inputs), verdict='fail',
                          note=str(e))
        return Record('recurrence', dict(inputs), value=value.value,
                      verdict='pass', note=value.note)
    add('recurrence', inputs, recurrence)

    for K in scales['K']:
        at = dict(inputs, K=K)
        spec = SchemeSpec('cutoff_uv', K=K)
        reg = schemes.CutoffRegulator(spec, n_max=n_max)

        def cutoff_oracle(reg=reg, at=at):
            value = reg.evaluate(p)
            truth = reg.oracle(p)
            return _check('cutoff_oracle', at, value.value, truth.value,
                          value.abs_err + truth.err_est, tol, strict)

        def cutoff_series_total(reg=reg, at=at, K=K):
            total = series.eval_at(reg.expand(p), {'K': K})
            value = reg.evaluate(p)
            return _check('cutoff_series_total', at, total, value.value,
                          value.abs_err, tol, strict)

        def cutoff_extraction(reg=reg, at=at, K=K):
            extracted = series.eval_at(reg.extract(p), {'K': K})
            bound = cfg.tol if strict else 5 * p.m2 / (K * K)
            record = _check('cutoff_extraction', at, extracted, master.value,
                            0.0, bound, True)
            record.dimreg = master.value
            return record

        def commutation(spec=spec, at=at):
            report = series.commutes_with_mass_derivative(p, spec,
                                                          n_max=n_max)
            ok = report.passed if not strict else report.residual <= cfg.tol
            return Record('commutation', dict(at), value=report.lhs,
                          oracle=report.rhs, residual_rel=report.residual,
                          verdict='pass' if ok else 'fail')

        def window_decomposition(K=K, at=at):
            wspec = SchemeSpec('ir_window', K=K)
            reg = schemes.WindowRegulator(wspec, n_max=n_max)
            value = reg.evaluate(p)
            truth = reg.oracle(p)
            return _check('window_decomposition', at, value.value,
                          truth.value, value.abs_err + truth.err_est, tol,
                          strict)

        add('cutoff_oracle', at, cutoff_oracle)
        add('cutoff_series_total', at, cutoff_series_total)
        add('cutoff_extraction', at, cutoff_extraction)
        add('commutation', at, commutation)
        add('window_decomposition', at, window_decomposition)

        for delta in scales['delta']:
            if not (K > delta and delta * delta < p.m2):
                continue
            both = dict(at, delta=delta)

            def separate_cutoff_extraction(K=K, delta=delta, at=both):
                sspec = SchemeSpec('separate_cutoff', K=K, delta=delta)
                sreg = schemes.SeparateCutoffRegulator(sspec, n_max=n_max)
                extracted = series.eval_at(sreg.extract(p),
                                           sspec.scale_values)
                bound = cfg.tol if strict else 5 * p.m2 / (K * K)
                record = _check('separate_cutoff_extraction', at, extracted,
                                master.value, 0.0, bound, True)
                record.dimreg = master.value
                return record

            add('separate_cutoff_extraction', both,
                separate_cutoff_extraction)

    index = abs(p.alpha - 0.5 * p.d)
    for delta in scales['delta']:
        at = dict(inputs, delta=delta)
        spec = SchemeSpec('gaussian_uv', delta=delta)
        reg = schemes.GaussianRegulator(spec, n_max=n_max)

        def gaussian_oracle(reg=reg, at=at):
            value = reg.evaluate(p)
            truth = reg.oracle(p)
            return _check('gaussian_oracle', at, value.value, truth.value,
                          value.abs_err + truth.err_est, tol, strict)

        def gaussian_series_total(reg=reg, at=at, delta=delta):
            total = series.eval_at(reg.expand(p), {'delta': delta})
            value = reg.evaluate(p)
            return _check('gaussian_series_total', at, total, value.value,
                          value.abs_err, tol, strict)

        def gaussian_extraction(reg=reg, at=at, delta=delta):
            extracted = series.eval_at(reg.extract(p), {'delta': delta})
            x = delta * p.m2
            bound = cfg.tol if strict else 10 * max(x, x ** index)
            record = _check('gaussian_extraction', at, extracted,
                            master.value, 0.0, bound, True)
            record.dimreg = master.value
            return record

        def two_sided_extraction(at=at, delta=delta):
            tspec = SchemeSpec('two_sided_gaussian', delta=delta)
            treg = schemes.TwoSidedRegulator(tspec, n_max=n_max)
            extracted = series.eval_at(treg.extract(p), {'delta': delta})
            record = _check('two_sided_extraction', dict(at, xi=delta),
                            extracted, master.value, master.abs_err, tol,
                            strict)
            record.dimreg = master.value
            return record

        def gaussian_ir_extraction(at=at, delta=delta):
            ispec = SchemeSpec('gaussian_ir', delta=delta)
            ireg = schemes.GaussianIRRegulator(ispec, n_max=n_max)
            extracted = series.eval_at(ireg.extract(p), {'delta': delta})
            x = delta * p.m2
            bound = cfg.tol if strict else 10 * max(x, x ** index)
            record = _check('gaussian_ir_extraction', at, extracted,
                            master.value, 0.0, bound, True)
            record.dimreg = master.value
            return record

        add('gaussian_oracle', at, gaussian_oracle)
        add('gaussian_series_total', at, gaussian_series_total)
        add('gaussian_extraction', at, gaussian_extraction)
        add('two_sided_extraction', dict(at, xi=delta), two_sided_extraction)
        if delta * delta < p.m2:
            add('gaussian_ir_extraction', at, gaussian_ir_extraction)
    return records


def _two_mass_checks(cfg, p, inputs, verdict):
    """Two-propagator properties: the 2F1 form against quadrature, its
    equal-mass reduction, and the cut-off and Gaussian extractions."""
    strict = cfg.tol is not None
    tol = cfg.tol if strict else ORACLE_RTOL
    records = []

    def add(name, point_inputs, fn):
        records.append(_run_check(name, point_inputs, fn))

    def two_mass_oracle():
        value = dimreg.two_mass_master(p)
        truth = oracle.scheme_oracle(p, None,
                                     tol=min(tol, oracle.DEFAULT_RTOL))
        return _check('two_mass_oracle', inputs, value.value, truth.value,
                      value.abs_err + truth.err_est, tol, strict)

    def equal_mass():
        value = dimreg.two_mass_master(p.replace(M2=p.m2))
        merged = dimreg.master_one_loop(
            Params(d=p.d, alpha=p.alpha + p.beta, m2=p.m2))
        bound = cfg.tol if strict else EQUAL_MASS_RTOL
        return _check('equal_mass', dict(inputs, M2=p.m2), value.value,
                      merged.value, 0.0, bound, True)

    def extraction(name, reg, at):
        master = dimreg.two_mass_master(p)
        extracted = series.eval_at(reg.extract(p), reg.spec.scale_values)
        bound = cfg.tol if strict else TWO_MASS_EXTRACT_RTOL
        record = _check(name, at, extracted, master.value, 0.0, bound, True)
        record.dimreg = master.value
        return record

    if verdict.kind == 'convergent':
        add('two_mass_oracle', inputs, two_mass_oracle)
    add('equal_mass', dict(inputs, M2=p.m2), equal_mass)
    if p.M2 is None or not p.M2 > 0:
        return records

    K = TWO_MASS_K_RATIO * math.sqrt(p.M2)
    creg = schemes.CutoffRegulator(SchemeSpec('cutoff_uv', K=K),
                                   n_max=cfg.terms)
    at = dict(inputs, K=K)
    add('two_mass_cutoff_extraction', at,
        lambda: extraction('two_mass_cutoff_extraction', creg, at))

    delta = TWO_MASS_DELTA / p.M2
    greg = schemes.GaussianRegulator(SchemeSpec('gaussian_uv', delta=delta),
                                     n_max=cfg.terms)
    gat = dict(inputs, delta=delta)
    add('two_mass_gaussian_extraction', gat,
        lambda: extraction('two_mass_gaussian_extraction', greg, gat))
    return records


def _zero_check(name, inputs, s, scales):
    """Exact test: extraction over `scales` leaves no term at all."""
    rest = series.extract_multi(s, scales)
    value = series.eval_at(rest)
    ok = not rest.terms and value == 0.0
    return Record(name, dict(inputs), value=value, oracle=0.0,
                  residual_rel=abs(value), verdict='pass' if ok else 'fail',
                  note='' if ok else '{0} terms survive'
                  .format(len(rest.terms)))


def _massless_point(cfg, values, scales):
    """Scaleless integrals at one (d, alpha): the separate cut-off and the
    separate two-sided series extract to exactly nothing."""
    p = _params(values)
    inputs = _inputs(values)
    n_max = cfg.terms
    records = []

    def add(name, point_inputs, fn):
        records.append(_run_check(name, point_inputs, fn))

    for K in scales['K']:
        for delta in scales['delta']:
            if not K > delta:
                continue
            at = dict(inputs, K=K, delta=delta)
            spec = SchemeSpec('separate_cutoff', K=K, delta=delta)
            add('veltman_zero_cutoff', at,
                lambda spec=spec, at=at: _zero_check(
                    'veltman_zero_cutoff', at,
                    schemes.separate_cutoff_series(p, spec, n_max=n_max),
                    ('K', 'delta')))

    for delta in scales['delta']:
        for xi in scales['xi'] or [delta]:
            at = dict(inputs, delta=delta, xi=xi)
            spec = SchemeSpec('separate_two_sided', delta=delta, xi=xi)
            add('veltman_zero_two_sided', at,
                lambda spec=spec, at=at: _zero_check(
                    'veltman_zero_two_sided', at,
                    schemes.two_sided_series(p, spec, n_max=n_max),
                    ('delta', 'xi')))
    return records


def _bessel_point(cfg, values):
    """Massless two-sided damping: Bessel closed form against quadrature."""
    strict = cfg.tol is not None
    tol = cfg.tol if strict else ORACLE_RTOL
    p = Params(d=values['d'], alpha=values['alpha'], m2=0.0)
    inputs = _inputs(dict(values, m2=0.0, xi=values['delta']))

    def bessel_closed_form():
        reg = schemes.TwoSidedRegulator(
            SchemeSpec('two_sided_gaussian', delta=values['delta']))
        value = reg.closed_form(p)
        truth = reg.evaluate(p)
        return _check('bessel_closed_form', inputs, value.value, truth.value,
                      value.abs_err + truth.abs_err, tol, strict)

    return [_run_check('bessel_closed_form', inputs, bessel_closed_form)]


def _log_case(cfg):
    """d = 4, alpha = 2: the cut-off radial integral approaches
    ln(K^2/m2) - 1 with a remainder falling like m2/K^2."""
    p = Params(d=4.0, alpha=2.0, m2=1.0)
    inputs = _inputs(p.as_dict())
    lo, hi = LOG_CASE_K

    def log_case():
        residuals = []
        for K in LOG_CASE_K:
            res = oracle.scheme_oracle(p, SchemeSpec('cutoff_uv', K=K),
                                       tol=1e-12)
            radial = res.value / (0.5 * oracle.radial_measure(p.d))
            residuals.append(radial - dimreg.log_case_radial(K * K / p.m2)[1])
        bound = cfg.tol if cfg.tol is not None else LOG_CASE_RTOL
        record = _check('log_case', inputs, residuals[0] / residuals[1],
                        (hi / lo) ** 2, 0.0, bound, True)
        record.note = ('remainder ratio between K = {0:g} and K = {1:g}'
                       .format(lo, hi))
        return record

    return [_run_check('log_case', inputs, log_case)]


def cmd_verify(cfg):
    """Run the property suite over the grid.  The defaults of DEFAULT_GRID
    are overridden by fixed flags and then by swept axes.

    Besides the massive grid points, every (d, alpha) of the grid is
    checked massless, and the fixed-point properties of FIXED_CHECKS run
    once: the Bessel closed form over BESSEL_GRID, the log case, and the
    two-mass properties at TWO_MASS_POINTS unless the grid sets beta.
    """
    axes = {name: list(values) for name, values in DEFAULT_GRID.items()}
    for name, value in cfg.values.items():
        if value is not None:
            axes[name] = [value]
    for axis in cfg.grid:
        axes[axis.name] = axis.values()
    scales = {'K': axes.pop('K'), 'delta': axes.pop('delta'),
              'xi': axes.pop('xi', None)}
    for name in ('z', 'a'):
        axes.pop(name, None)
    points = list(ParameterGrid(axes))
    massless = list(ParameterGrid(
        dict({k: v for k, v in axes.items()
              if k not in ('m2', 'beta', 'M2')}, m2=[0.0])))

    def work(cfg, values):
        return _verify_point(cfg, values, scales)

    def massless_work(cfg, values):
        return _massless_point(cfg, values, scales)

    records = _map_points(cfg, work, points)
    records += _map_points(cfg, massless_work, massless)
    if not any(values.get('beta') for values in points):
        records += _map_points(cfg, work, [dict(v) for v in TWO_MASS_POINTS])
    records += _map_points(cfg, _bessel_point, list(ParameterGrid(
        {name: list(values) for name, values in BESSEL_GRID.items()})))
    records += _log_case(cfg)
    return Report(cfg.as_dict(), records)


_COMMANDS = {'eval': cmd_eval, 'series': cmd_series, 'extract': cmd_extract,
             'verify': cmd_verify, 'grid': cmd_grid}


def _format_number(x):
    if x is None:
        return ''
    if isinstance(x, float):
        return '{0:.17g}'.format(x)
    return str(x)


def _json_float(x):
    if not math.isfinite(x):
        return json.dumps(x)
    text = '{0:.17g}'.format(x)
    if not any(c in text for c in '.en'):
        text += '.0'
    return text


def _to_json(x, level=0):
    """json.dumps(x, indent=2, sort_keys=True), except that floats carry
    17 significant digits."""
    pad = '  ' * (level + 1)
    if isinstance(x, dict):
        if not x:
            return '{}'
        items = ['{0}{1}: {2}'.format(pad, json.dumps(str(k)),
                                      _to_json(x[k], level + 1))
                 for k in sorted(x)]
        return '{\n' + ',\n'.join(items) + '\n' + '  ' * level + '}'
    if isinstance(x, (list, tuple)):
        if not x:
            return '[]'
        items = [pad + _to_json(v, level + 1) for v in x]
        return '[\n' + ',\n'.join(items) + '\n' + '  ' * level + ']'
    if isinstance(x, float):
        return _json_float(x)
    return json.dumps(x)


def render(report, output):
    """Serialize a report as json, csv or text."""
    if output == 'json':
        return _to_json(report.as_dict()) + '\n'
    if output == 'csv':
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for r in report.records:
            row = dict(r.inputs, value=r.value, err=r.err,
                       dimreg=r.dimreg, gap=r.gap, oracle=r.oracle,
                       residual_rel=r.residual_rel, verdict=r.verdict)
            writer.writerow([_format_number(row.get(c)) for c in CSV_COLUMNS])
        return buf.getvalue()
    lines = []
    for r in report.records:
        if r.series is not None:
            lines.append(r.series.rstrip('\n'))
            continue
        fields = ['{0}={1}'.format(c, _format_number(getattr(r, c)))
                  for c in ('value', 'err', 'dimreg', 'gap', 'oracle',
                            'residual_rel') if getattr(r, c) is not None]
        inputs = ' '.join('{0}={1}'.format(k, _format_number(v))
                          for k, v in r.inputs.items() if v is not None)
        lines.append('{0} [{1}] {2} -> {3}{4}'.format(
            r.check, inputs, ' '.join(fields), r.verdict,
            ' ({0})'.format(r.note) if r.note else ''))
    s = report.summary
    lines.append('# {0} records: {1} pass, {2} fail, {3} skipped, max '
                 'residual {4}'.format(s['records'], s['pass'], s['fail'],
                                       s['skipped'],
                                       _format_number(s['max_residual'])))
    return '\n'.join(lines) + '\n'


def build_parser():
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument('--scheme', help='one of {0}'.format(
        ', '.join(SCHEMES)))
    for name in PARAM_NAMES + SCALE_NAMES:
        common.add_argument('--' + name, type=float, dest=name)
    common.add_argument('--terms', type=int,
                        help='series terms per summation index (default '
                             '{0})'.format(DEFAULT_N_MAX))
    common.add_argument('--tol', type=float,
                        help='comparison tolerance overriding the defaults')
    common.add_argument('--grid', action='append', default=[],
                        metavar='NAME=MIN:MAX:COUNT[:log]',
                        help='sweep a parameter; may be repeated')
    common.add_argument('--out', help='output file (default stdout)')
    common.add_argument('--format', dest='output', choices=FORMATS)
    common.add_argument('--config', help='key = value file; flags win')
    common.add_argument('-v', '--verbose', action='count', default=0)

    parser = argparse.ArgumentParser(
        prog='loopreg', allow_abbrev=False,
        description='Regulated one-loop integrals and their dimensionally '
                    'regularized content.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    sub = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        sub.add_parser(command, parents=[common], allow_abbrev=False,
                       help=_COMMANDS[command].__doc__.split('\n')[0]
                       if _COMMANDS[command].__doc__ else command)
    return parser


_CONFIG_KEYS = (PARAM_NAMES + SCALE_NAMES
                + ('scheme', 'terms', 'tol', 'grid', 'out', 'format'))


def load_config(path):
    """Read a `key = value` file.  '#' starts a comment; '-' and '_' in
    keys are interchangeable; `grid` may repeat."""
    settings = {'grid': []}
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise ConfigError('cannot read config file {0}: {1}'
                          .format(path, e.strerror))
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError('{0}:{1}: expected key = value'
                              .format(path, number))
        key, value = (x.strip() for x in line.split('=', 1))
        key = key.replace('-', '_')
        if key not in _CONFIG_KEYS:
            raise ConfigError('{0}:{1}: unknown key {2!r}'
                              .format(path, number, key))
        if key == 'grid':
            settings['grid'].append(value)
            continue
        try:
            if key in PARAM_NAMES + SCALE_NAMES + ('tol',):
                value = float(value)
            elif key == 'terms':
                value = int(value)
        except ValueError:
            raise ConfigError('{0}:{1}: bad value for {2}'
                              .format(path, number, key))
        settings['output' if key == 'format' else key] = value
    return settings


def _threads():
    raw = os.environ.get(THREADS_VARIABLE)
    if raw is None or raw.strip() == '':
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError('{0} must be a positive integer, got {1!r}'
                          .format(THREADS_VARIABLE, raw))
    return _validated(value, THREADS_VARIABLE, numbers.Integral, min_val=1)


def config_from_args(args):
    settings = load_config(args.config) if args.config else {'grid': []}
    merged = {}
    for key in PARAM_NAMES + SCALE_NAMES + ('scheme', 'terms', 'tol', 'out',
                                            'output'):
        value = getattr(args, key)
        merged[key] = value if value is not None else settings.get(key)
    grid_texts = args.grid or settings['grid']
    return RunConfig(
        command=args.command,
        scheme=merged['scheme'] or 'dimreg',
        values={k: merged[k] for k in PARAM_NAMES + SCALE_NAMES
                if merged[k] is not None},
        grid=tuple(GridAxis.parse(t) for t in grid_texts),
        terms=merged['terms'] if merged['terms'] is not None
        else DEFAULT_N_MAX,
        tol=merged['tol'],
        output=merged['output'] or 'json',
        out=merged['out'],
        threads=_threads(),
        verbose=args.verbose)


def _exit_code(report, command):
    if command == 'verify':
        return EXIT_FAILURE if report.summary['fail'] else EXIT_OK
    for r in report.records:
        for _, verdict, code in _ERROR_VERDICTS:
            if r.verdict == verdict:
                return code
    return EXIT_OK


def main(argv=None):
    """Run the command line; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG
    try:
        cfg = config_from_args(args)
        _log(cfg, 'loopreg {0}: {1} scheme, {2} worker(s)'
             .format(cfg.command, cfg.scheme, cfg.threads))
        report = _COMMANDS[cfg.command](cfg)
    except PoleError as e:
        print('loopreg: pole: {0}'.format(e), file=sys.stderr)
        return EXIT_POLE
    except NonConvergence as e:
        print('loopreg: no convergence: {0}'.format(e), file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (LoopRegError, ValueError) as e:
        print('loopreg: error: {0}'.format(e), file=sys.stderr)
        return EXIT_CONFIG

    text = render(report, cfg.output)
    if cfg.out:
        try:
            with open(cfg.out, 'w') as f:
                f.write(text)
        except OSError as e:
            print('loopreg: error: cannot write {0}: {1}'
                  .format(cfg.out, e.strerror), file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.write(text)
    return _exit_code(report, cfg.command)


if __name__ == "__main__":
    raise SystemExit(main())
