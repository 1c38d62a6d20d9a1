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
"""L^p, Sobolev H^s and Bessel potential H^{t,p} norms on grids.

All norms use the same rectangle rule as the transform: spatial sums weigh
h^n, spectral sums weigh the frequency cell volume.  The weight defining the
Sobolev scale is the Japanese bracket <xi> = sqrt(1 + |xi|^2).
"""

import math

import numpy as np
from phasestab.spectral import field


class NormError(Exception):
  pass


class Exponent(object):
  """A Lebesgue exponent in [1, inf].

  Infinity is a separate state rather than float('inf'), so conjugation and
  scaling never push an infinite value through float arithmetic.
  """

  def __init__(self, value=None):
    """Creates an exponent; value None means infinity."""
    if value is not None:
      value = float(value)
      if math.isinf(value) and value > 0:
        value = None
      elif not value >= 1:
        raise NormError('Exponent must lie in [1, inf]: %r' % value)
    self._value = value

  @classmethod
  def Infinite(cls):
    return cls(None)

  def IsInfinite(self):
    return self._value is None

  @property
  def value(self):
    if self._value is None:
      raise NormError('The infinite exponent has no finite value.')
    return self._value

  def Reciprocal(self):
    """1/p, with 1/inf = 0."""
    if self._value is None:
      return 0.0
    return 1.0 / self._value

  def Conjugate(self):
    """The Hoelder conjugate p' with 1/p + 1/p' = 1."""
    if self._value is None:
      return Exponent(1.0)
    if self._value == 1.0:
      return Exponent.Infinite()
    return Exponent(self._value / (self._value - 1.0))

  def Scaled(self, factor):
    """factor * p; infinity stays infinite."""
    if self._value is None:
      return Exponent.Infinite()
    return Exponent(self._value * factor)

  def SelfPower(self):
    """p^(1/p), with inf^0 = 1."""
    if self._value is None:
      return 1.0
    return self._value**(1.0 / self._value)

  def ToJson(self):
    if self._value is None:
      return 'inf'
    return self._value

  def __eq__(self, other):
    if not isinstance(other, Exponent):
      return NotImplemented
    return self._value == other._value  # pylint: disable=protected-access

  def __ne__(self, other):
    result = self.__eq__(other)
    if result is NotImplemented:
      return result
    return not result

  def __hash__(self):
    return hash(self._value)

  def __repr__(self):
    return 'Exponent(%s)' % ('inf' if self._value is None else self._value)


def AsExponent(p):
  """Accepts an Exponent, a number, float('inf') or the string 'inf'."""
  if isinstance(p, Exponent):
    return p
  if isinstance(p, str) and p.strip().lower() in ('inf', 'infinity'):
    return Exponent.Infinite()
  try:
    return Exponent(p)
  except (TypeError, ValueError):
    raise NormError('Cannot interpret exponent %r.' % (p,))


def _CheckBesselExponent(p):
  p = AsExponent(p)
  if p.IsInfinite() or p.value > 2.0:
    raise NormError('Only p in [1, 2] is supported, got %r.' % (p,))
  return p


class StabilityParams(object):
  """The orders s, t and the exponent p of the stability estimates.

  Derived constants follow the Hoelder step of the proof: p' is the conjugate
  of p, the spectral exponent is q = p'/2 with conjugate q' = p/(2 - p)
  (infinite at p = 2), and delta = 2t.
  """

  def __init__(self, s, t, p):
    self.s = float(s)
    self.t = float(t)
    self.p_exponent = _CheckBesselExponent(p)
    self.p = self.p_exponent.value

  @property
  def p_conjugate(self):
    return self.p_exponent.Conjugate()

  @property
  def hoelder_exponent(self):
    return self.p_conjugate.Scaled(0.5)

  @property
  def coefficient_exponent(self):
    if self.p == 2.0:
      return Exponent.Infinite()
    return Exponent(self.p / (2.0 - self.p))

  @property
  def delta(self):
    return 2.0 * self.t

  @property
  def weight_order(self):
    """Order 2s - 2t of the bracket inside the coefficient norm."""
    return 2.0 * self.s - 2.0 * self.t

  def Threshold(self, n):
    """a = n (1/p - 1/2) from the third finiteness condition."""
    return n * (1.0 / self.p - 0.5)

  def ToDict(self, n=None):
    data = {
        's': self.s,
        't': self.t,
        'p': self.p,
        'p_conjugate': self.p_conjugate.ToJson(),
        'coefficient_exponent': self.coefficient_exponent.ToJson(),
    }
    if n is not None:
      data['a'] = self.Threshold(n)
    return data

  @classmethod
  def FromDict(cls, data):
    return cls(data['s'], data['t'], data['p'])

  def __repr__(self):
    return 'StabilityParams(s=%r, t=%r, p=%r)' % (self.s, self.t, self.p)


def Bracket(xi):
  """<xi> = sqrt(1 + |xi|^2); the last axis of an array holds components."""
  xi = np.asarray(xi, dtype=float)
  if xi.ndim == 0:
    return math.sqrt(1.0 + float(xi)**2)
  result = np.sqrt(1.0 + np.sum(xi**2, axis=-1))
  if np.ndim(result) == 0:
    return float(result)
  return result


def BracketGrid(grid):
  """<xi_k> at every frequency node of grid."""
  return np.sqrt(1.0 + grid.FrequencySquared())


def _LpOfMagnitudes(magnitudes, p, volume):
  peak = float(np.max(magnitudes)) if magnitudes.size else 0.0
  if peak == 0.0:
    return 0.0
  if p.IsInfinite():
    return peak
  # Scaled by the peak so large p neither overflows nor underflows.
  total = volume * np.sum((magnitudes / peak)**p.value)
  return peak * float(total)**(1.0 / p.value)


def LpNorm(f, p):
  """Quadrature L^p norm of a sampled or spectral field.

  Args:
    f: a SampledField (weights h^n) or SpectralField (frequency cell volume).
    p: exponent in [1, inf].

  Returns:
    (volume * sum |f|^p)^(1/p), or max |f| for p = inf.

  Raises:
    NormError: p < 1.
  """
  return _LpOfMagnitudes(np.abs(f.values), AsExponent(p), f.CellVolume())


def SobolevNorm(f, s):
  """||<xi>^s f^||_2, evaluated on the spectrum of f."""
  spectrum = field.AsSpectrum(f)
  weights = BracketGrid(spectrum.grid)**(2.0 * s)
  return math.sqrt(spectrum.CellVolume() *
                   float(np.sum(weights * np.abs(spectrum.values)**2)))


def SobolevInnerProduct(f, g, s):
  """<f, g>_s = sum <xi>^(2s) f^ conj(g^) over frequency cells."""
  f_hat = field.AsSpectrum(f)
  g_hat = field.AsSpectrum(g)
  if f_hat.grid != g_hat.grid:
    raise NormError('Grid mismatch: %r vs %r.' % (f_hat.grid, g_hat.grid))
  weights = BracketGrid(f_hat.grid)**(2.0 * s)
  return complex(f_hat.CellVolume() *
                 np.sum(weights * f_hat.values * np.conj(g_hat.values)))


def MagnitudeGap(f, g, s=0.0):
  """||<xi>^s (|f^| - |g^|)||_2, the Fourier magnitude difference data."""
  f_hat = field.AsSpectrum(f)
  g_hat = field.AsSpectrum(g)
  if f_hat.grid != g_hat.grid:
    raise NormError('Grid mismatch: %r vs %r.' % (f_hat.grid, g_hat.grid))
  weights = BracketGrid(f_hat.grid)**(2.0 * s)
  gap = np.abs(f_hat.values) - np.abs(g_hat.values)
  return math.sqrt(f_hat.CellVolume() * float(np.sum(weights * gap**2)))


def BesselNorm(f, t, p):
  """||F^-1(<xi>^t f^)||_p for p in [1, 2].

  At t = 0 a sampled field is measured directly, without a transform round
  trip.

  Raises:
    NormError: p outside [1, 2].
  """
  p = _CheckBesselExponent(p)
  if t == 0 and isinstance(f, field.SampledField):
    return LpNorm(f, p)
  spectrum = field.AsSpectrum(f)
  weighted = field.SpectralField(
      spectrum.grid, BracketGrid(spectrum.grid)**t * spectrum.values)
  return LpNorm(field.InverseTransform(weighted), p)


def WeightNorm(mask, alpha, q):
  """||chi_A <xi>^alpha||_q over a frequency mask.

  Args:
    mask: a SupportMask.
    alpha: order of the bracket weight.
    q: exponent in [1, inf].

  Returns:
    (cell * sum_{k in A} <xi_k>^(alpha q))^(1/q), max_{k in A} <xi_k>^alpha
    for q = inf, and 0 for an empty mask.

  Raises:
    NormError: q < 1.
  """
  q = AsExponent(q)
  bits = mask.bits
  if not bits.any():
    return 0.0
  weights = BracketGrid(mask.grid)[bits]**alpha
  return _LpOfMagnitudes(weights, q, mask.grid.FrequencyCellVolume())


def HausdorffYoungConstant(n, p):
  """c_{n,p} = [(2 pi)^(2/p' - 1) p^(1/p) / p'^(1/p')]^n for p in [1, 2].

  Raises:
    NormError: n is not a positive integer or p lies outside [1, 2].
  """
  if int(n) != n or n < 1:
    raise NormError('Dimension must be a positive integer: %r' % (n,))
  p = _CheckBesselExponent(p)
  conjugate = p.Conjugate()
  power = 2 * conjugate.Reciprocal() - 1
  ratio = p.SelfPower() / conjugate.SelfPower()
  return ((2 * math.pi)**power * ratio)**int(n)


def HausdorffYoungCheck(f, p, constant_one=False):
  """Both sides of ||f^||_{p'} <= sqrt(c_{n,p}) ||f||_p.

  Args:
    f: a SampledField.
    p: exponent in [1, 2].
    constant_one: use c_{n,p} = 1 instead of the sharp constant.

  Returns:
    (lhs, rhs).
  """
  p = _CheckBesselExponent(p)
  constant = 1.0 if constant_one else HausdorffYoungConstant(f.grid.n, p)
  lhs = LpNorm(field.ForwardTransform(f), p.Conjugate())
  rhs = math.sqrt(constant) * LpNorm(f, p)
  return lhs, rhs
