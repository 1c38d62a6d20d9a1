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
"""Conditional estimates that use only Fourier magnitude difference data.

The disjointness ratio

  r(f, g) = ||M_{f&g} (f - g)||_{H^s} / ||f - g||_{H^s}

measures how much of the H^s energy of f - g lives on the common support.
With declared supports the energy splits exactly,

  ||f - g||^2 = ||M_{f&g} (f - g)||^2 + ||M_{f\\g} f||^2 + ||M_{g\\f} g||^2,

which gives r0 in closed form and the constant C = 1 / (1 - r^2).
Detected supports break the split, so they are refused unless the caller
allows them explicitly.
"""

import logging
import math

import numpy as np
from phasestab.spectral import field
from phasestab.spectral import norms
from phasestab.spectral import support
from phasestab.stability import ambiguity
from phasestab.stability import bounds

MEMBERSHIP_TOLERANCE = 1e-12
CONDITIONAL = 'conditional'
QUOTIENT_CONDITIONAL = 'quotient_conditional'


class ConditionalError(Exception):
  pass


class _Energies(object):
  """Squared H^s norms of the pieces of f - g over the support partition."""

  def __init__(self, f, g, s, allow_detected, tau_rel):
    f_hat = field.AsSpectrum(f)
    g_hat = field.AsSpectrum(g)
    if f_hat.grid != g_hat.grid:
      raise ConditionalError('Grid mismatch: %r vs %r.' %
                             (f_hat.grid, g_hat.grid))
    try:
      self.sets = support.PairSupports(f, g, allow_detected, tau_rel)
    except support.SupportError as e:
      raise ConditionalError(
          'Conditional estimates need declared spectral supports; pass '
          'allow_detected to threshold instead (%s).' % e)
    weights = norms.BracketGrid(f_hat.grid)**(2.0 * s)
    volume = f_hat.CellVolume()

    def Energy(values, mask):
      return volume * float(np.sum(weights * np.abs(values * mask.bits)**2))

    difference = f_hat.values - g_hat.values
    self.total = volume * float(np.sum(weights * np.abs(difference)**2))
    self.common = Energy(difference, self.sets.intersection)
    self.f_only = Energy(f_hat.values, self.sets.f_only)
    self.g_only = Energy(g_hat.values, self.sets.g_only)
    self.magnitude = norms.MagnitudeGap(f_hat, g_hat, s)**2
    self.scale = (volume * float(np.sum(weights * np.abs(f_hat.values)**2)) +
                  volume * float(np.sum(weights * np.abs(g_hat.values)**2)))

  @property
  def exclusive(self):
    return self.f_only + self.g_only

  def Ratio(self):
    if self.total == 0:
      raise ConditionalError('The disjointness ratio is undefined for f = g.')
    return math.sqrt(self.common / self.total)

  def RZero(self):
    if not self.sets.SupportsDiffer():
      raise ConditionalError(
          'r0 exists only when supp f^ differs from supp g^.')
    if self.total == 0:
      raise ConditionalError('r0 is undefined for f = g.')
    return math.sqrt(max(0.0, 1.0 - self.exclusive / self.total))


class ConditionalReport(object):
  """One instance of a conditional estimate."""

  def __init__(self, kind, s, r, r0, constant, lhs, rhs, member, member_f,
               scale, trivial_ratio=None, group=None,
               provenance=support.DECLARED):
    self.kind = kind
    self.s = s
    self.r = r
    self.r0 = r0
    self.constant = constant
    self.lhs = lhs
    self.rhs = rhs
    self.margin = rhs - lhs
    self.member = member
    self.member_f = member_f
    self.scale = scale
    self.trivial_ratio = trivial_ratio
    self.group = group
    self.provenance = provenance

  def IsViolation(self, tol=bounds.EXACT_TOLERANCE):
    slack = tol * self.rhs + bounds.ROUNDOFF_FLOOR * self.scale
    if self.margin < -slack:
      return True
    if self.trivial_ratio is not None and self.trivial_ratio < 1 - tol:
      return True
    return False

  def ToDict(self):
    return {
        'kind': self.kind,
        's': self.s,
        'r': self.r,
        'r0': self.r0,
        'C': self.constant,
        'lhs': self.lhs,
        'rhs': self.rhs,
        'margin': self.margin,
        'member': self.member,
        'member_f': self.member_f,
        'trivial_ratio': self.trivial_ratio,
        'group': self.group.Name() if self.group else None,
        'provenance': self.provenance,
    }

  CsvRow = ToDict

  def __repr__(self):
    return 'ConditionalReport(%s, r=%g, r0=%g, margin=%g)' % (
        self.kind, self.r, self.r0, self.margin)


def _InSingleSet(f, g, s, r, sets):
  """Whether g lies in X^s(f; r), measured through the multiplier M_{f&g}."""
  difference = field.InverseTransform(
      field.AsSpectrum(f) - field.AsSpectrum(g))
  common = norms.SobolevNorm(
      support.ApplyMultiplier(sets.intersection, difference), s)
  return common <= (r + MEMBERSHIP_TOLERANCE) * norms.SobolevNorm(difference,
                                                                   s)


def DisjointnessRatio(f, g, s, allow_detected=False,
                      tau_rel=support.DEFAULT_TAU_REL):
  """r(f, g) in [0, 1].

  Raises:
    ConditionalError: f = g, or supports are not declared.
  """
  return _Energies(f, g, s, allow_detected, tau_rel).Ratio()


def RZero(f, g, s, allow_detected=False, tau_rel=support.DEFAULT_TAU_REL):
  """The smallest r with (f, g) in X^s(r).

  r0 = sqrt(1 - (||M_{f\\g} f||^2 + ||M_{g\\f} g||^2) / ||f - g||^2).

  Raises:
    ConditionalError: equal supports, f = g, or undeclared supports.
  """
  return _Energies(f, g, s, allow_detected, tau_rel).RZero()


def IsMember(f, g, s, r, allow_detected=False,
             tau_rel=support.DEFAULT_TAU_REL):
  """Whether (f, g) lies in X^s(r); also decides g in X^s(f; r)."""
  ratio = DisjointnessRatio(f, g, s, allow_detected, tau_rel)
  return ratio <= r + MEMBERSHIP_TOLERANCE


def ConditionalBound(f, g, s, r, allow_detected=False,
                     tau_rel=support.DEFAULT_TAU_REL):
  """||f - g||_{H^s}^2 <= C ||<xi>^s (|f^| - |g^|)||_2^2 with C = 1/(1 - r^2).

  Args:
    f: a SampledField with a declared support.
    g: a SampledField on the same grid.
    s: the Sobolev order.
    r: the membership radius in [0, 1).
    allow_detected: accept thresholded supports.
    tau_rel: relative threshold for detected supports.

  Returns:
    A ConditionalReport.

  Raises:
    ConditionalError: r outside [0, 1) or (f, g) not in X^s(r).
  """
  if not 0.0 <= r < 1.0:
    raise ConditionalError('r must lie in [0, 1): %r' % (r,))
  energies = _Energies(f, g, s, allow_detected, tau_rel)
  ratio = energies.Ratio()
  member = ratio <= r + MEMBERSHIP_TOLERANCE
  if not member:
    raise ConditionalError('(f, g) is not in X^s(%g): the ratio is %g.' %
                           (r, ratio))
  r0 = energies.RZero() if energies.sets.SupportsDiffer() else ratio
  constant = 1.0 / (1.0 - r * r)
  return ConditionalReport(CONDITIONAL, s, r, r0, constant, energies.total,
                           constant * energies.magnitude, member,
                           _InSingleSet(f, g, s, r, energies.sets),
                           energies.scale,
                           provenance=energies.sets.provenance)


def QuotientConditionalBound(f, g, s, group, allow_detected=False,
                             tau_rel=support.DEFAULT_TAU_REL, subgrid=False):
  """d([f], [g])^2 <= C ||<xi>^s (|f^| - |g^|)||_2^2.

  C = d^2 / (||M_{f\\g} f||^2 + ||M_{g\\f} g||^2).  The report also carries
  the trivial ratio ||<xi>^s (|f^| - |g^|)||^2 / (||M_{f\\g} f||^2 +
  ||M_{g\\f} g||^2), which is at least 1 whenever the supports are exact.

  Raises:
    ConditionalError: equal supports or vanishing difference sets.
  """
  energies = _Energies(f, g, s, allow_detected, tau_rel)
  r0 = energies.RZero()
  if energies.exclusive == 0:
    raise ConditionalError('f and g vanish on their difference sets.')
  distance, _ = ambiguity.QuotientDistance(f, g, s, group, subgrid)
  lhs = distance**2
  constant = lhs / energies.exclusive
  trivial_ratio = energies.magnitude / energies.exclusive
  if trivial_ratio < 1 - bounds.EXACT_TOLERANCE:
    logging.warning('Trivial ratio %g below one over %s.', trivial_ratio,
                    group.Name())
  ratio = energies.Ratio()
  return ConditionalReport(QUOTIENT_CONDITIONAL, s, ratio, r0, constant, lhs,
                           constant * energies.magnitude, True,
                           _InSingleSet(f, g, s, ratio, energies.sets),
                           energies.scale, trivial_ratio, group,
                           energies.sets.provenance)
