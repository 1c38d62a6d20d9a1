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
"""Frequency supports, their set algebra and the multipliers M_A.

A support comes from one of two places.  A declared support is attached by
the code that built the spectrum and is exact.  A detected support is a
threshold on |f^| and is only a measurement; it exists for user data.
"""

import logging

import numpy as np
from phasestab.spectral import field

DEFAULT_TAU_REL = 1e-12
DECLARED = 'declared'
DETECTED = 'detected'


class SupportError(Exception):
  pass


class SupportMask(object):
  """One boolean per frequency node of a grid."""

  def __init__(self, grid, bits):
    bits = np.array(bits, dtype=bool)
    if bits.size != grid.size:
      raise SupportError('Mask has %d bits but the grid has %d nodes.' %
                         (bits.size, grid.size))
    bits = bits.reshape(grid.dims)
    bits.flags.writeable = False
    self._grid = grid
    self._bits = bits

  @classmethod
  def Full(cls, grid):
    return cls(grid, np.ones(grid.dims, dtype=bool))

  @classmethod
  def Empty(cls, grid):
    return cls(grid, np.zeros(grid.dims, dtype=bool))

  @property
  def grid(self):
    return self._grid

  @property
  def bits(self):
    return self._bits

  def Count(self):
    return int(np.count_nonzero(self._bits))

  def Measure(self):
    return self.Count() * self._grid.FrequencyCellVolume()

  def IsEmpty(self):
    return not self._bits.any()

  def _Check(self, other):
    if not isinstance(other, SupportMask):
      raise SupportError('Expected a SupportMask, got %r.' % (other,))
    if other.grid != self._grid:
      raise SupportError('Grid mismatch: %r vs %r.' % (self._grid, other.grid))

  def Intersect(self, other):
    self._Check(other)
    return SupportMask(self._grid, self._bits & other.bits)

  def Union(self, other):
    self._Check(other)
    return SupportMask(self._grid, self._bits | other.bits)

  def Difference(self, other):
    self._Check(other)
    return SupportMask(self._grid, self._bits & ~other.bits)

  def Complement(self):
    return SupportMask(self._grid, ~self._bits)

  __and__ = Intersect
  __or__ = Union
  __sub__ = Difference
  __invert__ = Complement

  def IsSubsetOf(self, other):
    self._Check(other)
    return not np.any(self._bits & ~other.bits)

  def ToList(self):
    return self._bits.reshape(-1).astype(int).tolist()

  def __eq__(self, other):
    if not isinstance(other, SupportMask):
      return NotImplemented
    return self._grid == other.grid and np.array_equal(self._bits, other.bits)

  def __ne__(self, other):
    result = self.__eq__(other)
    if result is NotImplemented:
      return result
    return not result

  __hash__ = None

  def __repr__(self):
    return 'SupportMask(%r, count=%d)' % (self._grid, self.Count())


def DetectSupport(f, tau_rel=DEFAULT_TAU_REL):
  """Thresholds |f^| relative to its peak.

  Args:
    f: a SpectralField (or a SampledField, which is transformed first).
    tau_rel: relative threshold in [0, 1).

  Returns:
    The SupportMask of bins with |f^_k| > tau_rel * max |f^|; empty for zero.

  Raises:
    SupportError: tau_rel outside [0, 1).
  """
  if not 0.0 <= tau_rel < 1.0:
    raise SupportError('Relative threshold must lie in [0, 1): %r' % tau_rel)
  spectrum = field.AsSpectrum(f)
  magnitudes = np.abs(spectrum.values)
  peak = magnitudes.max()
  if peak == 0:
    return SupportMask.Empty(spectrum.grid)
  return SupportMask(spectrum.grid, magnitudes > tau_rel * peak)


def DeclaredSupport(f):
  """The declared support of f as a SupportMask, or None."""
  if f.declared_support is None:
    return None
  return SupportMask(f.grid, f.declared_support)


def ResolveSupport(f, allow_detected=True, tau_rel=DEFAULT_TAU_REL):
  """Prefers the declared support and falls back to detection.

  Returns:
    A (SupportMask, provenance) tuple.

  Raises:
    SupportError: f has no declared support and detection is not allowed.
  """
  mask = DeclaredSupport(f)
  if mask is not None:
    return mask, DECLARED
  if not allow_detected:
    raise SupportError('Field has no declared spectral support and detected '
                       'supports are not allowed.')
  logging.debug('Detecting support with tau_rel=%g.', tau_rel)
  return DetectSupport(f, tau_rel), DETECTED


class SupportSets(object):
  """The partition of the frequency grid induced by two supports.

  intersection, f_only, g_only and exterior are pairwise disjoint and cover
  every node.
  """

  def __init__(self, support_f, support_g, provenance=DECLARED):
    support_f._Check(support_g)  # pylint: disable=protected-access
    self.support_f = support_f
    self.support_g = support_g
    self.provenance = provenance
    self.intersection = support_f & support_g
    self.union = support_f | support_g
    self.f_only = support_f - support_g
    self.g_only = support_g - support_f
    self.exterior = ~self.union

  def SupportsDiffer(self):
    return self.support_f != self.support_g

  def ToDict(self):
    return {
        'provenance': self.provenance,
        'measure_f': self.support_f.Measure(),
        'measure_g': self.support_g.Measure(),
        'measure_intersection': self.intersection.Measure(),
        'measure_union': self.union.Measure(),
    }


def PairSupports(f, g, allow_detected=True, tau_rel=DEFAULT_TAU_REL):
  """Resolves both supports and returns their SupportSets.

  The provenance is declared only when both supports are declared.
  """
  if f.grid != g.grid:
    raise SupportError('Grid mismatch: %r vs %r.' % (f.grid, g.grid))
  support_f, provenance_f = ResolveSupport(f, allow_detected, tau_rel)
  support_g, provenance_g = ResolveSupport(g, allow_detected, tau_rel)
  provenance = DECLARED
  if DETECTED in (provenance_f, provenance_g):
    provenance = DETECTED
  return SupportSets(support_f, support_g, provenance)


def ApplyMultiplier(mask, f):
  """M_A f = F^-1(chi_A f^).

  Args:
    mask: the SupportMask A.
    f: a SampledField on the same grid.

  Returns:
    The SampledField whose spectrum is chi_A f^.  Its declared support is
    A intersected with the declared support of f, when f has one.

  Raises:
    SupportError: grid mismatch.
  """
  if mask.grid != f.grid:
    raise SupportError('Grid mismatch: %r vs %r.' % (mask.grid, f.grid))
  spectrum = field.ForwardTransform(f)
  support = None
  if f.declared_support is not None:
    support = mask.bits & f.declared_support
  masked = field.SpectralField(f.grid, spectrum.values * mask.bits, support)
  return field.InverseTransform(masked)
