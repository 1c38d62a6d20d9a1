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
"""Seeded generators of test fields.

Spectral families are built in frequency space, so their spectra vanish
exactly off the declared mask.  Random values come from a counter-based
Philox stream keyed by (seed, stream) with the flat bin index in the high
counter word: every bin draws from its own block, so the output does not
depend on the order or the thread in which bins are filled.
"""

import logging
import math
import numbers

import numpy as np
from phasestab.spectral import field
from phasestab.spectral import support
from phasestab.stability import ambiguity

GAUSSIAN = 'gaussian'
MODULATED_GAUSSIAN = 'modulated_gaussian'
BAND_LIMITED_RANDOM = 'band_limited_random'
FROM_SPECTRUM = 'from_spectrum'
FAMILIES = (GAUSSIAN, MODULATED_GAUSSIAN, BAND_LIMITED_RANDOM, FROM_SPECTRUM)

BOUNDARY_DECAY = 1e-12
MIN_CELLS_PER_WIDTH = 4
MAX_WIDTH_FRACTION = 1.0 / 8
DEFAULT_PAIR_WIDTH_RATIO = 1.25
SEED_MASK = 2**64 - 1
_BIN_COUNTER_SHIFT = 128
_ELEMENT_STREAM = 2**63


class GenError(Exception):
  pass


def _CheckSeed(seed):
  if isinstance(seed, bool) or not isinstance(seed, numbers.Integral):
    raise GenError('Seeds are 64-bit integers: %r' % (seed,))
  return int(seed) & SEED_MASK


def _BinGenerator(seed, stream, index):
  key = _CheckSeed(seed) | ((int(stream) & SEED_MASK) << 64)
  return np.random.Generator(
      np.random.Philox(key=key, counter=int(index) << _BIN_COUNTER_SHIFT))


def _AsMask(grid, mask):
  if isinstance(mask, support.SupportMask):
    if mask.grid != grid:
      raise GenError('Mask grid %r does not match %r.' % (mask.grid, grid))
    return mask
  try:
    return support.SupportMask(grid, mask)
  except support.SupportError as e:
    raise GenError('Malformed mask: %s' % e)


def _Vector(value, n, name):
  values = np.zeros(n) if value is None else np.atleast_1d(
      np.asarray(value, dtype=float))
  if values.shape == (1,) and n > 1:
    values = np.repeat(values, n)
  if values.shape != (n,):
    raise GenError('%s needs %d components, got %r.' % (name, n, value))
  return values


def Gaussian(grid, amplitude=1.0, center=None, width=1.0, wavenumber=None):
  """Samples A exp(-|x - c|^2 / (2 w^2)) exp(i k.x).

  Args:
    grid: a GridSpec.
    amplitude: the complex amplitude A.
    center: the center c, one entry per axis (default the origin).
    width: the width w.
    wavenumber: the modulation k, one entry per axis (default zero).

  Returns:
    A SampledField without a declared support.

  Raises:
    GenError: w is below 4 h or above extent / 8, or the samples do not
      decay to 1e-12 of their peak at the boundary.
  """
  width = float(width)
  extent = min(grid.dims) * grid.spacing
  if width < MIN_CELLS_PER_WIDTH * grid.spacing:
    raise GenError('Width %g is not resolved by spacing %g (need w >= %dh).' %
                   (width, grid.spacing, MIN_CELLS_PER_WIDTH))
  if width > MAX_WIDTH_FRACTION * extent:
    raise GenError('Width %g exceeds extent/8 = %g.' %
                   (width, MAX_WIDTH_FRACTION * extent))
  center = _Vector(center, grid.n, 'center')
  wavenumber = _Vector(wavenumber, grid.n, 'wavenumber')
  squared = np.zeros(grid.dims)
  phase = np.zeros(grid.dims)
  for axis, x in enumerate(grid.SpatialMesh()):
    squared += (x - center[axis])**2
    phase += wavenumber[axis] * x
  values = amplitude * np.exp(-squared / (2 * width**2)) * np.exp(1j * phase)
  magnitudes = np.abs(values)
  boundary = 0.0
  for axis in range(grid.n):
    edges = np.take(magnitudes, [0, -1], axis=axis)
    boundary = max(boundary, float(np.max(edges)))
  peak = float(np.max(magnitudes))
  if peak == 0 or boundary > BOUNDARY_DECAY * peak:
    raise GenError('Gaussian of width %g centered at %s does not decay at the '
                   'boundary: %g of peak.' %
                   (width, center.tolist(), boundary / peak if peak else 0))
  return field.SampledField(grid, values)


def BandLimitedRandom(grid, mask, seed, variance=1.0, real_spectrum=False,
                      stream=0):
  """A complex Gaussian spectrum on mask, zero elsewhere.

  Each in-mask bin holds an independent draw with E|f^(xi)|^2 = variance.
  Real and imaginary parts each carry half of it; a real spectrum puts all of
  it in the real part.

  Raises:
    GenError: the mask is empty or variance is not positive.
  """
  mask = _AsMask(grid, mask)
  if mask.IsEmpty():
    raise GenError('Band-limited fields need a nonempty mask.')
  if not variance > 0:
    raise GenError('Variance must be positive: %r' % (variance,))
  flat = np.zeros(grid.size, dtype=complex)
  for index in np.flatnonzero(mask.bits):
    draws = _BinGenerator(seed, stream, index).standard_normal(2)
    if real_spectrum:
      flat[index] = math.sqrt(variance) * draws[0]
    else:
      flat[index] = math.sqrt(variance / 2) * complex(draws[0], draws[1])
  spectrum = field.SpectralField(grid, flat.reshape(grid.dims), mask.bits)
  return field.InverseTransform(spectrum)


def FromSpectrum(grid, values, mask=None):
  """The field whose spectrum is values, with its mask declared.

  Raises:
    GenError: values do not vanish off mask, or the mask is empty.
  """
  values = np.asarray(values, dtype=complex).reshape(grid.dims)
  if mask is None:
    mask = support.SupportMask(grid, values != 0)
  mask = _AsMask(grid, mask)
  if mask.IsEmpty():
    raise GenError('The spectrum has an empty support.')
  if np.any(values[~mask.bits]):
    raise GenError('The spectrum does not vanish off the declared mask.')
  return field.InverseTransform(field.SpectralField(grid, values, mask.bits))


def LowFrequencyBins(grid, bins):
  """Flat indices of the bins nodes closest to xi = 0, ties by index."""
  bins = int(bins)
  if not 1 <= bins <= grid.size:
    raise GenError('Cannot pick %d bins on a grid of %d.' % (bins, grid.size))
  order = np.lexsort((np.arange(grid.size), grid.FrequencySquared().ravel()))
  return order[:bins]


def LowFrequencyMask(grid, bins):
  flat = np.zeros(grid.size, dtype=bool)
  flat[LowFrequencyBins(grid, bins)] = True
  return support.SupportMask(grid, flat.reshape(grid.dims))


def OverlapMasks(grid, overlap_fraction, union_bins=None):
  """Declared masks with |A_f & A_g| / |A_f | A_g| close to overlap_fraction.

  The union is the union_bins lowest-frequency bins (default half the grid).
  k = round(fraction * U) bins are shared; the rest is split between the two
  exclusive sets, f taking the extra bin when U - k is odd.

  Raises:
    GenError: the fraction is outside [0, 1] or the union does not fit.
  """
  overlap_fraction = float(overlap_fraction)
  if not 0.0 <= overlap_fraction <= 1.0:
    raise GenError('Overlap fraction must lie in [0, 1]: %r' %
                   (overlap_fraction,))
  union = grid.size // 2 if union_bins is None else int(union_bins)
  if union < 2 or union > grid.size:
    raise GenError('A union of %d bins does not fit a grid of %d.' %
                   (union, grid.size))
  ordered = LowFrequencyBins(grid, union)
  shared = int(round(overlap_fraction * union))
  f_only = (union - shared + 1) // 2
  f_bits = np.zeros(grid.size, dtype=bool)
  g_bits = np.zeros(grid.size, dtype=bool)
  f_bits[ordered[:f_only + shared]] = True
  g_bits[ordered[f_only:]] = True
  return (support.SupportMask(grid, f_bits.reshape(grid.dims)),
          support.SupportMask(grid, g_bits.reshape(grid.dims)))


def OverlapPair(grid, seed, overlap_fraction, union_bins=None,
                real_spectrum=False, variance=1.0):
  """Two band-limited fields on masks from OverlapMasks.

  f uses stream 0 and g stream 1 of the same seed.
  """
  f_mask, g_mask = OverlapMasks(grid, overlap_fraction, union_bins)
  logging.debug('Overlap pair: %d shared of %d bins.',
                (f_mask & g_mask).Count(), (f_mask | g_mask).Count())
  return (BandLimitedRandom(grid, f_mask, seed, variance, real_spectrum, 0),
          BandLimitedRandom(grid, g_mask, seed, variance, real_spectrum, 1))


def RandomElement(seed, grid, group=None):
  """A seeded ambiguity element of group (default the full family)."""
  if group is None:
    group = ambiguity.GroupSpec(True, True, True)
  rng = _BinGenerator(seed, _ELEMENT_STREAM, 0)
  theta = rng.uniform(0, 2 * math.pi)
  shift = [int(rng.integers(-(size // 2), size - size // 2))
           for size in grid.dims]
  reflect = bool(rng.integers(2))
  return ambiguity.AmbiguityElement(
      theta=theta if group.global_phase else 0.0,
      shift=shift if group.translations else (),
      reflect=reflect and group.conjugate_reflection)


class GenSpec(object):
  """Everything needed to regenerate a field or a pair bit for bit.

  Family parameters:
    gaussian: amplitude, center, width.
    modulated_gaussian: as gaussian plus wavenumber.
    band_limited_random: bins (low-frequency mask) or mask (flat 0/1 list),
      variance, real_spectrum, and for pairs overlap and union_bins.
    from_spectrum: spectrum as {'re': [...], 'im': [...]}, for pairs also
      spectrum_g.
  Gaussian pairs take g from the same parameters updated by params['g']; by
  default g is 1.25 times wider.
  """

  def __init__(self, seed, grid, family, params=None):
    self.seed = _CheckSeed(seed)
    self.grid = grid
    if family not in FAMILIES:
      raise GenError('Unknown family %r; expected one of %s.' %
                     (family, ', '.join(FAMILIES)))
    self.family = family
    self.params = dict(params or {})

  def _Gaussian(self, params):
    return Gaussian(
        self.grid,
        amplitude=params.get('amplitude', 1.0),
        center=params.get('center'),
        width=params.get('width', 1.0),
        wavenumber=(params.get('wavenumber')
                    if self.family == MODULATED_GAUSSIAN else None))

  def _Mask(self):
    if 'mask' in self.params:
      return _AsMask(self.grid, np.asarray(self.params['mask'],
                                           dtype=bool).reshape(self.grid.dims))
    return LowFrequencyMask(self.grid, self.params.get('bins', 32))

  def _Spectrum(self, key):
    try:
      data = self.params[key]
      values = np.asarray(data['re'], dtype=float) + 1j * np.asarray(
          data['im'], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
      raise GenError('Malformed %s parameter: %s' % (key, e))
    if values.size != self.grid.size:
      raise GenError('%s has %d values for %d nodes.' %
                     (key, values.size, self.grid.size))
    return FromSpectrum(self.grid, values)

  def Generate(self, stream=0):
    """Builds the field described by this spec."""
    if self.family in (GAUSSIAN, MODULATED_GAUSSIAN):
      return self._Gaussian(self.params)
    if self.family == BAND_LIMITED_RANDOM:
      return BandLimitedRandom(self.grid, self._Mask(), self.seed,
                               self.params.get('variance', 1.0),
                               self.params.get('real_spectrum', False), stream)
    return self._Spectrum('spectrum')

  def GeneratePair(self):
    """Builds (f, g)."""
    if self.family in (GAUSSIAN, MODULATED_GAUSSIAN):
      g_params = dict(self.params)
      g_params['width'] = (self.params.get('width', 1.0) *
                           DEFAULT_PAIR_WIDTH_RATIO)
      g_params.update(self.params.get('g', {}))
      return self._Gaussian(self.params), self._Gaussian(g_params)
    if self.family == BAND_LIMITED_RANDOM:
      if 'overlap' in self.params:
        return OverlapPair(self.grid, self.seed, self.params['overlap'],
                           self.params.get('union_bins'),
                           self.params.get('real_spectrum', False),
                           self.params.get('variance', 1.0))
      return self.Generate(0), self.Generate(1)
    return self._Spectrum('spectrum'), self._Spectrum('spectrum_g')

  def ToDict(self):
    return {
        'seed': self.seed,
        'grid': self.grid.ToDict(),
        'family': self.family,
        'params': self.params,
    }

  @classmethod
  def FromDict(cls, data):
    try:
      grid = field.GridSpec.FromDict(data['grid'])
      return cls(data['seed'], grid, data['family'], data.get('params'))
    except (KeyError, TypeError) as e:
      raise GenError('Malformed GenSpec: %s' % e)
    except field.FieldError as e:
      raise GenError('Malformed GenSpec grid: %s' % e)

  def __eq__(self, other):
    if not isinstance(other, GenSpec):
      return NotImplemented
    return self.ToDict() == other.ToDict()

  def __ne__(self, other):
    result = self.__eq__(other)
    if result is NotImplemented:
      return result
    return not result

  def __repr__(self):
    return 'GenSpec(%s, seed=%d, %r)' % (self.family, self.seed, self.grid)
