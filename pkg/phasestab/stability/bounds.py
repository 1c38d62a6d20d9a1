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
"""Assembly and verification of the phase retrieval stability estimates.

The main estimate bounds the quotient distance of f and g by their Fourier
magnitude data plus an a priori term:

  d([f], [g])^2 <= ||<xi>^s (|f^| - |g^|)||_2^2
                   + c_{n,p} ||chi_{A_f&g} <xi>^(2s - 2t)||_{p/(2-p)}
                     * inf_{P, Q in G} ||P f - Q g||_{H^{t,p}}^2

with A_f&g the common spectral support.  A negative margin rhs - lhs is a
finding to be reported, not an error.
"""

import collections
import logging
import math

import numpy as np
from phasestab.spectral import field
from phasestab.spectral import norms
from phasestab.spectral import support
from phasestab.stability import ambiguity
from scipy import optimize

DEFAULT_TOLERANCE = 1e-8
EXACT_TOLERANCE = 1e-10
# Squared distances below this fraction of ||f||^2 + ||g||^2 are rounding.
ROUNDOFF_FLOOR = 1e-24
REAL_SPECTRUM_TOLERANCE = 1e-10
BECKNER = 'beckner'
ONE = 'one'

Comparison = collections.namedtuple(
    'Comparison', ['lhs', 'theorem_rhs', 'steinerberger_rhs', 'dominated'])


class BoundsError(Exception):
  pass


def BecknerConstant(n, p, constant_one=False):
  """Squared operator norm of the transform from L^p to L^p'.

  c_{n,p} = [(2 pi)^(2/p' - 1) p^(1/p) / p'^(1/p')]^n under the unitary
  convention; c_{n,1} = (2 pi)^-n and c_{n,2} = 1.

  Args:
    n: the dimension.
    p: exponent in [1, 2].
    constant_one: return 1, which bounds c_{n,p} from above.

  Returns:
    The constant as a float.

  Raises:
    BoundsError: p outside [1, 2] or n < 1.
  """
  if int(n) != n or n < 1:
    raise BoundsError('Dimension must be a positive integer: %r' % (n,))
  try:
    p = norms.AsExponent(p)
  except norms.NormError as e:
    raise BoundsError(str(e))
  if p.IsInfinite() or p.value > 2:
    raise BoundsError('The sharp constant needs p in [1, 2], got %r.' % (p,))
  if constant_one:
    return 1.0
  return norms.HausdorffYoungConstant(n, p)


def _Spectra(f, g):
  f_hat = field.AsSpectrum(f)
  g_hat = field.AsSpectrum(g)
  if f_hat.grid != g_hat.grid:
    raise BoundsError('Grid mismatch: %r vs %r.' % (f_hat.grid, g_hat.grid))
  return f_hat, g_hat


def _SobolevWeights(grid, s):
  return norms.BracketGrid(grid)**(2.0 * s)


def _MaskedEnergy(values, weights, bits, volume):
  if bits is not None:
    values = values * bits
  return volume * float(np.sum(weights * np.abs(values)**2))


def LemmaGap(f, g, s, allow_detected=True, tau_rel=support.DEFAULT_TAU_REL):
  """Terms of ||f - g||_{H^s}^2 <= magnitude term + multiplier term.

  Args:
    f: a SampledField.
    g: a SampledField on the same grid.
    s: the Sobolev order.
    allow_detected: threshold spectra without a declared support.
    tau_rel: relative threshold for detected supports.

  Returns:
    (lhs, magnitude_term, multiplier_term) with lhs = ||f - g||_{H^s}^2,
    magnitude_term = ||<xi>^s (|f^| - |g^|)||_2^2 and
    multiplier_term = ||M_{f&g} (f - g)||_{H^s}^2.
  """
  f_hat, g_hat = _Spectra(f, g)
  sets = support.PairSupports(f, g, allow_detected, tau_rel)
  weights = _SobolevWeights(f_hat.grid, s)
  volume = f_hat.CellVolume()
  difference = f_hat.values - g_hat.values
  lhs = _MaskedEnergy(difference, weights, None, volume)
  magnitude = norms.MagnitudeGap(f_hat, g_hat, s)**2
  multiplier = _MaskedEnergy(difference, weights, sets.intersection.bits,
                             volume)
  return lhs, magnitude, multiplier


class FinitenessFlags(object):
  """Sufficient conditions for a finite coefficient.

  (i) A_f&g is bounded; always true on a grid, hence grid_vacuous.
  (ii) A_f&g has finite measure and s <= t.
  (iii) s < t - a with a = n (1/p - 1/2).
  """

  def __init__(self, bounded, condition_ii, condition_iii, threshold):
    self.bounded = bounded
    self.condition_ii = condition_ii
    self.condition_iii = condition_iii
    self.threshold = threshold
    self.grid_vacuous = True

  def Satisfied(self):
    """Whether (ii) or (iii) holds; (i) carries no information on a grid."""
    return self.condition_ii or self.condition_iii

  def ToDict(self):
    return {
        'i': self.bounded,
        'ii': self.condition_ii,
        'iii': self.condition_iii,
        'grid_vacuous': self.grid_vacuous,
        'a': self.threshold,
        'satisfied': self.Satisfied(),
    }


def FinitenessConditions(params, n, mask=None):
  """Evaluates conditions (i)-(iii) for (s, t, p) in dimension n.

  Args:
    params: a StabilityParams.
    n: the dimension.
    mask: optional SupportMask of A_f&g; a grid mask always has finite
      measure.

  Returns:
    A FinitenessFlags.
  """
  finite_measure = mask is None or math.isfinite(mask.Measure())
  threshold = params.Threshold(n)
  return FinitenessFlags(
      bounded=True,
      condition_ii=finite_measure and params.s <= params.t,
      condition_iii=params.s < params.t - threshold,
      threshold=threshold)


def _Subgroups(group):
  """Every flag combination included in group, smallest first."""
  subgroups = []
  for reflect in (False, True):
    for shift in (False, True):
      for phase in (False, True):
        candidate = ambiguity.GroupSpec(phase, shift, reflect)
        if group.Includes(candidate):
          subgroups.append(candidate)
  return subgroups


class _AprioriSearch(object):
  """inf over P in G of ||f - P g||_{H^{t,p}}.

  Every element of the parametric family is an H^{t,p} isometry, so the
  pair infimum over P, Q reduces to the single element P^-1 Q.  The search
  visits the identity and the H^s witnesses of every subgroup of G; with
  global phases it also polishes the phase of each by golden section.
  A larger group therefore visits a superset of the candidates.
  """

  def __init__(self, f_hat, g_hat, params):
    self._grid = f_hat.grid
    self._f_hat = f_hat
    self._g_hat = g_hat
    self._params = params
    self._bessel = norms.BracketGrid(self._grid)**params.t
    self._sobolev = _SobolevWeights(self._grid, params.s)
    self._target = self._Spatial(f_hat.values)

  def _Spatial(self, values):
    return field.InverseTransform(
        field.SpectralField(self._grid, self._bessel * values)).values

  def _Norm(self, values):
    return norms.LpNorm(field.SampledField(self._grid, values),
                        self._params.p)

  def Value(self, element):
    moved = ambiguity.ElementSpectrum(element, self._g_hat).values
    return norms.BesselNorm(
        field.SpectralField(self._grid, self._f_hat.values - moved),
        self._params.t, self._params.p)

  def _InitialPhase(self, moved):
    inner = complex(np.sum(self._sobolev * self._f_hat.values *
                           np.conj(moved)))
    if not inner:
      return 0.0
    return math.atan2(inner.imag, inner.real)

  def _PolishPhase(self, base):
    moved = ambiguity.ElementSpectrum(base, self._g_hat).values
    spatial = self._Spatial(moved)
    start = self._InitialPhase(moved)

    def Objective(theta):
      return self._Norm(self._target - np.exp(1j * theta) * spatial)

    candidates = [start]
    try:
      result = optimize.minimize_scalar(
          Objective, bracket=(start - 0.25, start + 0.25), method='golden',
          tol=1e-10)
      candidates.append(float(result.x))
    except (ValueError, RuntimeError) as e:
      logging.warning('Golden-section phase search failed: %s', e)
    return [
        ambiguity.AmbiguityElement(theta, base.shift, base.tau_frac,
                                   base.reflect) for theta in candidates
    ]

  def Search(self, group, bases):
    best_value, best_element = None, None
    for base in bases:
      elements = [base]
      if group.global_phase:
        elements.extend(self._PolishPhase(base))
      for element in elements:
        value = self.Value(element)
        if best_value is None or value < best_value:
          best_value, best_element = value, element
    return best_value**2, best_element


def _Witness(f_hat, g_hat, s, group, subgrid, cache):
  key = (s, group.Name(), subgrid)
  if key not in cache:
    cache[key] = ambiguity.QuotientDistance(f_hat, g_hat, s, group, subgrid)
  return cache[key]


def _WitnessBases(f_hat, g_hat, s, group, subgrid, cache):
  """Phase-free parts of the H^s witnesses of every subgroup of group."""
  bases = [ambiguity.AmbiguityElement.Identity()]
  witnesses = {}
  for subgroup in _Subgroups(group):
    _, witness = _Witness(f_hat, g_hat, s, subgroup, subgrid, cache)
    witnesses[subgroup.Name()] = witness
    base = ambiguity.AmbiguityElement(0.0, witness.shift, witness.tau_frac,
                                      witness.reflect)
    if base not in bases:
      bases.append(base)
  return bases, witnesses


class StabilityReport(object):
  """Every term of one instance of the main estimate."""

  def __init__(self, params, group, n, lhs, magnitude_term, beckner,
               weight_norm, weight_norm_f_only, apriori_term,
               multiplier_term, conditions, witnesses, provenance, scale,
               constant_mode=BECKNER):
    self.params = params
    self.group = group
    self.n = n
    self.lhs = lhs
    self.magnitude_term = magnitude_term
    self.beckner = beckner
    self.weight_norm = weight_norm
    self.coefficient = beckner * weight_norm
    self.coefficient_f_only = beckner * weight_norm_f_only
    self.apriori_term = apriori_term
    self.multiplier_term = multiplier_term
    self.rhs = magnitude_term + self.coefficient * apriori_term
    self.margin = self.rhs - lhs
    self.hoelder_margin = self.coefficient * apriori_term - multiplier_term
    self.conditions = conditions
    self.witnesses = witnesses
    self.provenance = provenance
    self.scale = scale
    self.constant_mode = constant_mode

  def _Slack(self, tol, reference):
    return tol * reference + ROUNDOFF_FLOOR * self.scale

  def IsViolation(self, tol=DEFAULT_TOLERANCE):
    return self.margin < -self._Slack(tol, self.rhs)

  def HoelderViolation(self, tol=DEFAULT_TOLERANCE):
    return self.hoelder_margin < -self._Slack(tol, self.rhs)

  def ToDict(self):
    return {
        'kind': 'stability',
        'params': self.params.ToDict(self.n),
        'group': self.group.Name(),
        'n': self.n,
        'constant_mode': self.constant_mode,
        'lhs': self.lhs,
        'magnitude_term': self.magnitude_term,
        'beckner': self.beckner,
        'weight_norm': self.weight_norm,
        'coefficient': self.coefficient,
        'coefficient_f_only': self.coefficient_f_only,
        'apriori_term': self.apriori_term,
        'multiplier_term': self.multiplier_term,
        'rhs': self.rhs,
        'margin': self.margin,
        'hoelder_margin': self.hoelder_margin,
        'conditions': self.conditions.ToDict(),
        'witnesses': self.witnesses,
        'provenance': self.provenance,
    }

  def CsvRow(self):
    row = {
        's': self.params.s,
        't': self.params.t,
        'p': self.params.p,
        'group': self.group.Name(),
        'lhs': self.lhs,
        'magnitude_term': self.magnitude_term,
        'coefficient': self.coefficient,
        'apriori_term': self.apriori_term,
        'multiplier_term': self.multiplier_term,
        'rhs': self.rhs,
        'margin': self.margin,
        'provenance': self.provenance,
    }
    for key, value in self.conditions.ToDict().items():
      row['condition_' + key] = value
    return row

  def __repr__(self):
    return 'StabilityReport(lhs=%g, rhs=%g, margin=%g)' % (self.lhs, self.rhs,
                                                           self.margin)


def StabilityBound(f, g, params, group, constant_one=False,
                   allow_detected=True, tau_rel=support.DEFAULT_TAU_REL,
                   subgrid=False, witness_cache=None):
  """Evaluates the main estimate for one pair.

  Args:
    f: a SampledField.
    g: a SampledField on the same grid.
    params: a StabilityParams.
    group: the GroupSpec G.
    constant_one: replace c_{n,p} by 1.
    allow_detected: threshold spectra without a declared support.
    tau_rel: relative threshold for detected supports.
    subgrid: refine translations below one grid cell.
    witness_cache: optional dict reused across calls on the same pair; the
      H^s witnesses depend only on s, G and subgrid.

  Returns:
    A StabilityReport.  Its witnesses hold the H^s witness ('quotient'), the
    a priori witness ('apriori') and the witness of every subgroup searched.

  Raises:
    BoundsError: grid mismatch.
  """
  f_hat, g_hat = _Spectra(f, g)
  grid = f_hat.grid
  sets = support.PairSupports(f, g, allow_detected, tau_rel)
  cache = {} if witness_cache is None else witness_cache
  distance, witness = _Witness(f_hat, g_hat, params.s, group, subgrid, cache)
  magnitude = norms.MagnitudeGap(f_hat, g_hat, params.s)**2
  beckner = BecknerConstant(grid.n, params.p, constant_one)
  exponent = params.coefficient_exponent
  weight_norm = norms.WeightNorm(sets.intersection, params.weight_order,
                                 exponent)
  weight_norm_f_only = norms.WeightNorm(sets.support_f, params.weight_order,
                                        exponent)

  bases, subgroup_witnesses = _WitnessBases(f_hat, g_hat, params.s, group,
                                            subgrid, cache)
  apriori, apriori_witness = _AprioriSearch(f_hat, g_hat, params).Search(
      group, bases)
  moved = ambiguity.ElementSpectrum(apriori_witness, g_hat)
  multiplier = _MaskedEnergy(f_hat.values - moved.values,
                             _SobolevWeights(grid, params.s),
                             sets.intersection.bits, f_hat.CellVolume())

  scale = (norms.SobolevNorm(f_hat, params.s)**2 +
           norms.SobolevNorm(g_hat, params.s)**2)
  witnesses = {
      'quotient': witness.ToDict(),
      'apriori': apriori_witness.ToDict(),
  }
  report = StabilityReport(
      params, group, grid.n, distance**2, magnitude, beckner, weight_norm,
      weight_norm_f_only, apriori, multiplier,
      FinitenessConditions(params, grid.n, sets.intersection), witnesses,
      sets.provenance, scale, ONE if constant_one else BECKNER)
  logging.debug('%r over %s with %d subgroup witnesses.', report,
                group.Name(), len(subgroup_witnesses))
  return report


def _DeclaredMask(f, allow_detected, tau_rel, hypothesis):
  try:
    mask, _ = support.ResolveSupport(f, allow_detected, tau_rel)
  except support.SupportError as e:
    raise BoundsError('%s: %s' % (hypothesis, e))
  return mask


def BasicSupportEstimate(f, allow_detected=False,
                         tau_rel=support.DEFAULT_TAU_REL):
  """Both sides of ||f||_2^2 <= (2 pi)^-n L ||f||_1^2, L = |supp f^|.

  Raises:
    BoundsError: f carries no declared support and detection is not allowed.
  """
  mask = _DeclaredMask(f, allow_detected, tau_rel,
                       'The support estimate needs the support of f^')
  lhs = norms.LpNorm(f, 2)**2
  rhs = ((2 * math.pi)**-f.grid.n * mask.Measure() * norms.LpNorm(f, 1)**2)
  return lhs, rhs


def SteinerbergerBound(f, g, allow_detected=False,
                       tau_rel=support.DEFAULT_TAU_REL):
  """The comparison estimate for real-valued f^.

  lhs = ||f - g||_2 and
  rhs = 2 ||(|f^| - |g^|)||_2 + 30 sqrt(L) ||f - g||_1 + 2 ||Im g^||_2
  with L the measure of the support of f^.

  Raises:
    BoundsError: f^ is not real-valued or has no declared support.
  """
  f_hat, g_hat = _Spectra(f, g)
  peak = float(np.max(np.abs(f_hat.values)))
  if np.max(np.abs(f_hat.values.imag)) > REAL_SPECTRUM_TOLERANCE * peak:
    raise BoundsError('The comparison estimate needs a real-valued f^.')
  mask = _DeclaredMask(f, allow_detected, tau_rel,
                       'The comparison estimate needs a finite support of f^')
  difference = f - g
  imaginary = math.sqrt(f_hat.CellVolume() *
                        float(np.sum(g_hat.values.imag**2)))
  lhs = norms.LpNorm(difference, 2)
  rhs = (2 * norms.MagnitudeGap(f_hat, g_hat) +
         30 * math.sqrt(mask.Measure()) * norms.LpNorm(difference, 1) +
         2 * imaginary)
  return lhs, rhs


def CompareWithSteinerberger(f, g, allow_detected=False,
                             tau_rel=support.DEFAULT_TAU_REL):
  """Main estimate at (s, t, p) = (0, 0, 1), G = {id}, beside the comparison.

  Returns:
    A Comparison whose theorem_rhs is the square root of the main estimate's
    right-hand side, so both bound ||f - g||_2.
  """
  lhs, steinerberger = SteinerbergerBound(f, g, allow_detected, tau_rel)
  report = StabilityBound(f, g, norms.StabilityParams(0, 0, 1),
                          ambiguity.GroupSpec(), allow_detected=allow_detected,
                          tau_rel=tau_rel)
  theorem = math.sqrt(report.rhs)
  return Comparison(lhs, theorem, steinerberger,
                    theorem <= steinerberger * (1 + DEFAULT_TOLERANCE))


def SobolevEmbeddingCheck(f, params, constant_one=False):
  """Both sides of ||f||_{H^s} <= C ||f||_{H^{t,p}} for s < t - a.

  C^2 = c_{n,p} ||<xi>^(2s - 2t)||_{p/(2-p)} over the whole grid, the full
  support specialization of the main estimate with g = 0.

  Raises:
    BoundsError: s >= t - a.
  """
  n = f.grid.n
  if not params.s < params.t - params.Threshold(n):
    raise BoundsError('The embedding needs s < t - a, got s=%g, t=%g, a=%g.' %
                      (params.s, params.t, params.Threshold(n)))
  full = support.SupportMask.Full(f.grid)
  constant = math.sqrt(
      BecknerConstant(n, params.p, constant_one) *
      norms.WeightNorm(full, params.weight_order,
                       params.coefficient_exponent))
  return (norms.SobolevNorm(f, params.s),
          constant * norms.BesselNorm(f, params.t, params.p))
