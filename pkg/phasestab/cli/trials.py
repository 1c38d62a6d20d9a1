# Copyright 2026 Google LLC. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Trial suites and the runners behind verify, scan and certify.

Every trial is a pure function of the RunConfig and its GenSpec, so trials
run in a thread pool and are merged in trial order.
"""

from concurrent import futures
import functools
import itertools
import logging
import math

from phasestab.cli import run_config
from phasestab.spectral import norms
from phasestab.spectral import support
from phasestab.stability import ambiguity
from phasestab.stability import bounds
from phasestab.stability import conditional
from phasestab.suite import gen

DEFAULT_OVERLAPS = (0.0, 0.25, 0.5, 0.75, 1.0)
SUITE_OVERLAPS = {'disjoint': 0.0, 'nested': 1.0}
GAUSSIAN_WIDTH_FRACTION = 1.0 / 24
PLANTED_TOLERANCE = 1e-10
MEMBERSHIP_STEP = 1e-3
# Below this fraction of ||f|| + ||g|| a magnitude gap counts as zero.
NEGLIGIBLE_GAP = 1e-6

OK = 'ok'
SKIPPED = 'skipped'

# Hypotheses that a trial may fail without being a finding.
_HYPOTHESIS_ERRORS = (bounds.BoundsError, conditional.ConditionalError,
                      support.SupportError)


class Trial(object):
  """One seeded pair, optionally g = P f for a planted element P."""

  def __init__(self, trial_id, genspec, element=None):
    self.trial_id = trial_id
    self.genspec = genspec
    self.element = element

  def Pair(self):
    try:
      if self.element is not None:
        f = self.genspec.Generate(0)
        return f, ambiguity.ApplyElement(self.element, f)
      return self.genspec.GeneratePair()
    except gen.GenError as e:
      raise run_config.ConfigError('Trial %d cannot be generated: %s' %
                                   (self.trial_id, e))

  def ToDict(self):
    return {
        'trial': self.trial_id,
        'genspec': self.genspec.ToDict(),
        'planted': self.element.ToDict() if self.element else None,
    }


def GaussianParams(grid, index):
  """Width and modulation of the index-th Gaussian suite member."""
  extent = min(grid.dims) * grid.spacing
  nyquist = math.pi / grid.spacing
  return {
      'width': extent * GAUSSIAN_WIDTH_FRACTION * (1 + 0.1 * (index % 3)),
      'wavenumber': [0.1 * nyquist * (index % 5 - 2)] * grid.n,
  }


def BuildSuite(config):
  """The trials of config.suite, ids 0..trials-1."""
  grid = config.Grid()
  group = config.Group()
  real_spectrum = config.target == run_config.COMPARE
  trials = []
  for index in range(config.trials):
    seed = (config.seed + index) & gen.SEED_MASK
    element = None
    if config.suite == 'gaussian':
      genspec = gen.GenSpec(seed, grid, gen.MODULATED_GAUSSIAN,
                            GaussianParams(grid, index))
    elif config.suite == 'planted':
      genspec = gen.GenSpec(seed, grid, gen.BAND_LIMITED_RANDOM, {
          'bins': config.bins,
          'real_spectrum': real_spectrum,
      })
      element = gen.RandomElement(seed, grid, group)
    else:
      overlap = SUITE_OVERLAPS.get(
          config.suite, DEFAULT_OVERLAPS[index % len(DEFAULT_OVERLAPS)])
      genspec = gen.GenSpec(seed, grid, gen.BAND_LIMITED_RANDOM, {
          'bins': config.bins,
          'union_bins': config.bins,
          'overlap': overlap,
          'real_spectrum': real_spectrum,
      })
    trials.append(Trial(index, genspec, element))
  logging.info('Built %d %s trials on %r.', len(trials), config.suite, grid)
  return trials


def _Record(trial, status=OK, violation=False, **values):
  record = {
      'trial': trial.trial_id,
      'status': status,
      'violation': violation,
      'genspec': trial.genspec.ToDict(),
  }
  if trial.element is not None:
    record['planted'] = trial.element.ToDict()
  record.update(values)
  return record


def _Skipped(trial, reason, **values):
  return _Record(trial, SKIPPED, reason=reason, **values)


def _RunLemma(config, trial, f, g):
  records = []
  tol = config.Tolerance()
  for s in config.s:
    lhs, magnitude, multiplier = bounds.LemmaGap(
        f, g, s, config.allow_detected, config.tau_rel)
    rhs = magnitude + multiplier
    margin = rhs - lhs
    records.append(_Record(
        trial, violation=margin < -tol * lhs, s=s, lhs=lhs,
        magnitude_term=magnitude, multiplier_term=multiplier, rhs=rhs,
        margin=margin, relative_gap=margin / lhs if lhs else 0.0))
  return records


def _PlantedCheck(config, report, f):
  scale = norms.SobolevNorm(f, report.params.s)
  recovered = (math.sqrt(report.lhs) <= PLANTED_TOLERANCE * scale and
               report.magnitude_term <= PLANTED_TOLERANCE * scale**2)
  if not recovered:
    logging.warning('Planted element not recovered: d^2=%g over %s.',
                    report.lhs, config.group)
  return recovered


def _RunTheorem(config, trial, f, g):
  records = []
  tol = config.Tolerance()
  group = config.Group()
  witnesses = {}
  for params in config.ParameterGrid():
    flags = bounds.FinitenessConditions(params, f.grid.n)
    if not flags.Satisfied():
      records.append(_Skipped(trial, 'finiteness', params=params.ToDict(),
                              conditions=flags.ToDict()))
      continue
    report = bounds.StabilityBound(f, g, params, group, config.constant_one,
                                   allow_detected=True, tau_rel=config.tau_rel,
                                   subgrid=config.subgrid,
                                   witness_cache=witnesses)
    violation = report.IsViolation(tol) or report.HoelderViolation(tol)
    values = report.ToDict()
    if trial.element is not None:
      values['planted_recovered'] = _PlantedCheck(config, report, f)
      violation = violation or not values['planted_recovered']
    records.append(_Record(trial, violation=violation, **values))
  return records


def _MembershipFlips(config, f, g, s, r0):
  above = conditional.IsMember(f, g, s, min(r0 + MEMBERSHIP_STEP, 1.0),
                               config.allow_detected, config.tau_rel)
  if r0 < MEMBERSHIP_STEP:
    return above
  below = conditional.IsMember(f, g, s, r0 - MEMBERSHIP_STEP,
                               config.allow_detected, config.tau_rel)
  return above and not below


def _RunAppendixA(config, trial, f, g):
  records = []
  tol = config.Tolerance()
  group = config.Group()
  for s in config.s:
    try:
      r0 = conditional.RZero(f, g, s, config.allow_detected, config.tau_rel)
      pair = conditional.ConditionalBound(f, g, s, min(r0, 1 - tol),
                                          config.allow_detected, config.tau_rel)
      quotient = conditional.QuotientConditionalBound(
          f, g, s, group, config.allow_detected, config.tau_rel,
          config.subgrid)
    except conditional.ConditionalError as e:
      records.append(_Skipped(trial, str(e), s=s))
      continue
    flips = _MembershipFlips(config, f, g, s, r0)
    ratio = conditional.DisjointnessRatio(f, g, s, config.allow_detected,
                                          config.tau_rel)
    squared_error = abs(r0**2 - ratio**2)
    for report in (pair, quotient):
      values = report.ToDict()
      values.update(membership_flips=flips, r0_squared_error=squared_error)
      records.append(_Record(
          trial, violation=report.IsViolation(tol) or not flips or
          squared_error > tol, **values))
  return records


def _RunAppendixB(config, trial, f, g):
  records = []
  tol = config.Tolerance()
  for s in config.s:
    _, distance = ambiguity.UnimodularOptimalMultiplier(
        f, g, s, allow_detected=True, tau_rel=config.tau_rel)
    magnitude = norms.MagnitudeGap(f, g, s)
    scale = norms.SobolevNorm(f, s) + norms.SobolevNorm(g, s)
    reference = magnitude if magnitude > NEGLIGIBLE_GAP * scale else scale
    error = abs(distance - magnitude) / reference if reference else 0.0
    records.append(_Record(trial, violation=error > tol, s=s,
                           distance=distance, magnitude_gap=magnitude,
                           relative_error=error))
  return records


def _RunEmbedding(config, trial, f, unused_g):
  records = []
  tol = config.Tolerance()
  for params in config.ParameterGrid():
    try:
      lhs, rhs = bounds.SobolevEmbeddingCheck(f, params, config.constant_one)
    except bounds.BoundsError as e:
      records.append(_Skipped(trial, str(e), params=params.ToDict()))
      continue
    records.append(_Record(trial, violation=lhs > rhs * (1 + tol),
                           params=params.ToDict(f.grid.n), lhs=lhs, rhs=rhs,
                           margin=rhs - lhs))
  return records


def _RunCompare(config, trial, f, g):
  comparison = bounds.CompareWithSteinerberger(f, g, config.allow_detected,
                                               config.tau_rel)
  return [_Record(trial, violation=not comparison.dominated,
                  **comparison._asdict())]


_RUNNERS = {
    run_config.LEMMA: _RunLemma,
    run_config.THEOREM: _RunTheorem,
    run_config.APPENDIX_A: _RunAppendixA,
    run_config.APPENDIX_B: _RunAppendixB,
    run_config.EMBEDDING: _RunEmbedding,
    run_config.COMPARE: _RunCompare,
}


def RunTrial(config, trial):
  """All records of one trial for config.target."""
  f, g = trial.Pair()
  try:
    records = _RUNNERS[config.target](config, trial, f, g)
  except _HYPOTHESIS_ERRORS as e:
    records = [_Skipped(trial, str(e))]
  for record in records:
    record['target'] = config.target
    if record['violation']:
      logging.warning('Trial %d: %s violation %s.', trial.trial_id,
                      config.target, record)
  return records


def RunSuite(config, trials):
  """Runs trials on config.workers threads.

  Returns:
    The records of every trial, ordered by trial id.
  """
  with futures.ThreadPoolExecutor(max_workers=config.workers) as pool:
    results = list(pool.map(functools.partial(RunTrial, config), trials))
  ordered = sorted(zip([t.trial_id for t in trials], results),
                   key=lambda item: item[0])
  return [record for _, records in ordered for record in records]


def _ScanPoint(config, settings):
  overlap = settings.get('overlap_fraction', config.overlap)
  bins = int(settings.get('L', config.bins))
  params = norms.StabilityParams(settings.get('s', config.s[0]),
                                 settings.get('t', config.t[0]),
                                 settings.get('p', config.p[0]))
  genspec = gen.GenSpec(config.seed, config.Grid(), gen.BAND_LIMITED_RANDOM, {
      'bins': bins,
      'union_bins': bins,
      'overlap': overlap,
  })
  return genspec, params


def RunScan(config):
  """One row per point of the swept axes, in row-major order."""
  group = config.Group()
  tol = config.Tolerance()
  names = [name for name, _ in config.axes]
  rows = []
  witnesses = {}
  for point in itertools.product(*[values for _, values in config.axes]):
    settings = dict(zip(names, point))
    try:
      genspec, params = _ScanPoint(config, settings)
      f, g = genspec.GeneratePair()
    except (gen.GenError, norms.NormError) as e:
      raise run_config.ConfigError('Scan point %s: %s' % (settings, e))
    pair_key = (genspec.params['overlap'], genspec.params['bins'])
    report = bounds.StabilityBound(
        f, g, params, group, config.constant_one, config.allow_detected,
        config.tau_rel, config.subgrid,
        witness_cache=witnesses.setdefault(pair_key, {}))
    row = dict(settings)
    row.update(report.CsvRow())
    row['L'] = genspec.params['bins']
    row['measure_union'] = support.PairSupports(f, g).union.Measure()
    try:
      row['trivial_ratio'] = conditional.QuotientConditionalBound(
          f, g, params.s, group, subgrid=config.subgrid).trivial_ratio
    except conditional.ConditionalError:
      row['trivial_ratio'] = None
    row['violation'] = report.IsViolation(tol)
    rows.append(row)
  return rows


def Certify(config, f, g):
  """The certificate for one user pair.

  Returns:
    (certificate dict, violation flag).

  Raises:
    run_config.ConfigError: the requested bound's hypotheses fail.
  """
  params = config.ParameterGrid()
  if len(params) != 1:
    raise run_config.ConfigError('certify takes a single (s, t, p).')
  params = params[0]
  group = config.Group()
  tol = config.Tolerance()
  try:
    if config.bound == run_config.APPENDIX_A:
      report = conditional.QuotientConditionalBound(
          f, g, params.s, group, config.allow_detected, config.tau_rel,
          config.subgrid)
    else:
      report = bounds.StabilityBound(f, g, params, group, config.constant_one,
                                     allow_detected=True,
                                     tau_rel=config.tau_rel,
                                     subgrid=config.subgrid)
  except _HYPOTHESIS_ERRORS as e:
    raise run_config.ConfigError('Cannot certify: %s' % e)
  certificate = report.ToDict()
  certificate['bound'] = math.sqrt(max(report.rhs, 0.0))
  certificate['inputs'] = list(config.inputs)
  return certificate, report.IsViolation(tol)
