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
"""Uniform grids on R^n and the discrete unitary Fourier transform.

Samples live on a centered grid: on every axis the spatial nodes are
x_j = (j - N/2) h, so index N/2 is the origin, and the matching frequency
nodes are xi_k = 2 pi (k - N/2) / (N h).  The transform realizes

  f^(xi) = (2 pi)^(-n/2) integral e^(-i x.xi) f(x) dx

with the rectangle rule.  Spatial cells weigh h^n and frequency cells weigh
prod(2 pi / (N_i h)); with these weights the forward/inverse pair is exactly
unitary, so discrete Parseval holds up to rounding.

The grid is a torus.  Nothing here controls aliasing; fields are expected to
be negligible at the boundary or to carry an exact spectral support (see
phasestab.suite.gen).
"""

import json
import logging
import math

import numpy as np
from scipy import fft

FLD_JSON_VERSION = 1
SAMPLED = 'sampled'
SPECTRAL = 'spectral'


class FieldError(Exception):
  pass


class GridSpec(object):
  """A uniform centered grid with the same spacing on every axis."""

  def __init__(self, dims, spacing):
    try:
      dims = tuple(int(d) for d in dims)
      spacing = float(spacing)
    except (TypeError, ValueError) as e:
      raise FieldError('Cannot interpret grid %s / %s (%s)' %
                       (dims, spacing, e))
    if not dims:
      raise FieldError('A grid needs at least one axis.')
    for size in dims:
      if size < 4 or size % 2:
        raise FieldError('Axis sizes must be even and at least 4: %s' %
                         (dims,))
    if not (math.isfinite(spacing) and spacing > 0):
      raise FieldError('Grid spacing must be positive: %s' % spacing)
    self._dims = dims
    self._spacing = spacing

  @property
  def n(self):
    return len(self._dims)

  @property
  def dims(self):
    return self._dims

  @property
  def spacing(self):
    return self._spacing

  @property
  def size(self):
    return int(np.prod(self._dims))

  def CellVolume(self):
    return self._spacing**self.n

  def FrequencySpacing(self):
    return tuple(2 * math.pi / (size * self._spacing) for size in self._dims)

  def FrequencyCellVolume(self):
    return float(np.prod(self.FrequencySpacing()))

  def SpatialAxes(self):
    return [(np.arange(size) - size // 2) * self._spacing
            for size in self._dims]

  def FrequencyAxes(self):
    return [2 * math.pi * (np.arange(size) - size // 2) /
            (size * self._spacing) for size in self._dims]

  def SpatialMesh(self):
    return np.meshgrid(*self.SpatialAxes(), indexing='ij')

  def FrequencyMesh(self):
    return np.meshgrid(*self.FrequencyAxes(), indexing='ij')

  def FrequencySquared(self):
    """|xi_k|^2 at every frequency node, shaped like the grid."""
    total = np.zeros(self._dims)
    for component in self.FrequencyMesh():
      total += component**2
    return total

  def ToDict(self):
    return {'n': self.n, 'dims': list(self._dims), 'spacing': self._spacing}

  @classmethod
  def FromDict(cls, data):
    try:
      grid = cls(data['dims'], data['spacing'])
      n = int(data.get('n', grid.n))
    except (KeyError, TypeError, ValueError) as e:
      raise FieldError('Malformed grid description: %s' % e)
    if n != grid.n:
      raise FieldError('Grid dimension %d does not match dims %s.' %
                       (n, list(grid.dims)))
    return grid

  def __eq__(self, other):
    if not isinstance(other, GridSpec):
      return NotImplemented
    return self._dims == other.dims and self._spacing == other.spacing

  def __ne__(self, other):
    result = self.__eq__(other)
    if result is NotImplemented:
      return result
    return not result

  def __hash__(self):
    return hash((self._dims, self._spacing))

  def __repr__(self):
    return 'GridSpec(dims=%s, spacing=%r)' % (self._dims, self._spacing)


class _Field(object):
  """Complex samples on a grid, immutable after construction.

  declared_support is an optional boolean array over the frequency nodes: the
  exact support of the spectrum, attached by whoever constructed it.
  """

  kind = None

  def __init__(self, grid, values, declared_support=None):
    if not isinstance(grid, GridSpec):
      raise FieldError('Expected a GridSpec, got %r.' % (grid,))
    values = np.array(values, dtype=complex)
    if values.size != grid.size:
      raise FieldError('Field has %d values but the grid has %d nodes.' %
                       (values.size, grid.size))
    values = values.reshape(grid.dims)
    if not np.all(np.isfinite(values)):
      raise FieldError('Field values must be finite.')
    values.flags.writeable = False
    self._grid = grid
    self._values = values
    self._support = None
    if declared_support is not None:
      support = np.array(declared_support, dtype=bool)
      if support.size != grid.size:
        raise FieldError('Declared support has %d bits but the grid has %d '
                         'nodes.' % (support.size, grid.size))
      support = support.reshape(grid.dims)
      support.flags.writeable = False
      self._support = support

  @property
  def grid(self):
    return self._grid

  @property
  def values(self):
    return self._values

  @property
  def declared_support(self):
    return self._support

  def CellVolume(self):
    raise NotImplementedError

  def WithSupport(self, declared_support):
    return type(self)(self._grid, self._values, declared_support)

  def _CheckGrid(self, other):
    if not isinstance(other, type(self)):
      raise FieldError('Cannot combine %s with %r.' % (self.kind, other))
    if other.grid != self._grid:
      raise FieldError('Grid mismatch: %r vs %r.' % (self._grid, other.grid))

  def _JoinSupport(self, other):
    if self._support is None or other.declared_support is None:
      return None
    return self._support | other.declared_support

  def __add__(self, other):
    self._CheckGrid(other)
    return type(self)(self._grid, self._values + other.values,
                      self._JoinSupport(other))

  def __sub__(self, other):
    self._CheckGrid(other)
    return type(self)(self._grid, self._values - other.values,
                      self._JoinSupport(other))

  def __neg__(self):
    return type(self)(self._grid, -self._values, self._support)

  def Scale(self, factor):
    factor = complex(factor)
    support = self._support
    if factor == 0 and support is not None:
      support = np.zeros(self._grid.dims, dtype=bool)
    return type(self)(self._grid, factor * self._values, support)


class SampledField(_Field):
  """Samples f(x_j) at the spatial nodes."""

  kind = SAMPLED

  def CellVolume(self):
    return self._grid.CellVolume()


class SpectralField(_Field):
  """Samples f^(xi_k) at the frequency nodes."""

  kind = SPECTRAL

  def CellVolume(self):
    return self._grid.FrequencyCellVolume()


def _Axes(grid):
  return tuple(range(grid.n))


def ForwardTransform(f):
  """Discrete realization of the unitary Fourier transform.

  Centering x_j = (j - N/2) h and xi_k = 2 pi (k - N/2)/(N h) turns the
  quadrature sum into fftshift(fftn(ifftshift(f))), which is the plain DFT
  with the (-1)^(j + k + N/2) centering phases folded into index rotations.

  Args:
    f: a SampledField.

  Returns:
    The SpectralField on the matching frequency grid.  The declared support
    travels with it.

  Raises:
    FieldError: f is not a SampledField.
  """
  if not isinstance(f, SampledField):
    raise FieldError('ForwardTransform expects a SampledField, got %r.' % (f,))
  grid = f.grid
  axes = _Axes(grid)
  values = fft.fftshift(
      fft.fftn(fft.ifftshift(f.values, axes=axes), axes=axes), axes=axes)
  values *= (2 * math.pi)**(-grid.n / 2.0) * grid.CellVolume()
  return SpectralField(grid, values, f.declared_support)


def InverseTransform(spectrum):
  """Inverse of ForwardTransform with frequency cell-volume weights.

  Args:
    spectrum: a SpectralField.

  Returns:
    The SampledField whose forward transform is spectrum.

  Raises:
    FieldError: spectrum is not a SpectralField.
  """
  if not isinstance(spectrum, SpectralField):
    raise FieldError('InverseTransform expects a SpectralField, got %r.' %
                     (spectrum,))
  grid = spectrum.grid
  axes = _Axes(grid)
  values = fft.fftshift(
      fft.ifftn(fft.ifftshift(spectrum.values, axes=axes), axes=axes),
      axes=axes)
  # ifftn divides by the node count; the quadrature weight is
  # (2 pi)^(-n/2) prod(dxi) = (2 pi)^(n/2) / (h^n size).
  values *= (2 * math.pi)**(grid.n / 2.0) / grid.CellVolume()
  return SampledField(grid, values, spectrum.declared_support)


def AsSpectrum(f):
  """Returns the spectrum of f, transforming sampled fields."""
  if isinstance(f, SpectralField):
    return f
  return ForwardTransform(f)


def ToJson(f, genspec=None):
  """Builds the FLD-JSON v1 document for a field.

  Args:
    f: a SampledField or SpectralField.
    genspec: optional GenSpec dict embedded for reproduction.

  Returns:
    A JSON-serializable dict.
  """
  flat = f.values.reshape(-1)
  document = {
      'version': FLD_JSON_VERSION,
      'kind': f.kind,
      'n': f.grid.n,
      'dims': list(f.grid.dims),
      'spacing': f.grid.spacing,
      're': flat.real.tolist(),
      'im': flat.imag.tolist(),
  }
  if f.declared_support is not None:
    document['mask'] = f.declared_support.reshape(-1).astype(int).tolist()
  if genspec is not None:
    document['genspec'] = genspec
  return document


def FromJson(document):
  """Parses an FLD-JSON v1 document.

  Args:
    document: the decoded JSON dict.

  Returns:
    A SampledField or SpectralField.

  Raises:
    FieldError: unknown version or kind, or mismatched array lengths.
  """
  if not isinstance(document, dict):
    raise FieldError('FLD-JSON document must be an object.')
  version = document.get('version')
  if (isinstance(version, bool) or not isinstance(version, int) or
      version != FLD_JSON_VERSION):
    raise FieldError('Unsupported FLD-JSON version: %r' % (version,))
  kind = document.get('kind')
  if kind not in (SAMPLED, SPECTRAL):
    raise FieldError('Unknown field kind: %r' % (kind,))
  grid = GridSpec.FromDict(document)
  try:
    re = np.asarray(document['re'], dtype=float)
    im = np.asarray(document['im'], dtype=float)
  except (KeyError, TypeError, ValueError) as e:
    raise FieldError('Malformed sample arrays: %s' % e)
  if re.ndim != 1 or im.ndim != 1 or re.size != grid.size or (
      im.size != grid.size):
    raise FieldError('Expected %d real and imaginary parts, got %d and %d.' %
                     (grid.size, re.size, im.size))
  mask = document.get('mask')
  if mask is not None:
    mask = np.asarray(mask)
    if mask.ndim != 1 or mask.size != grid.size or not np.all(
        np.isin(mask, (0, 1))):
      raise FieldError('Mask must hold %d entries of 0 or 1.' % grid.size)
    mask = mask.astype(bool)
  cls = SampledField if kind == SAMPLED else SpectralField
  return cls(grid, re + 1j * im, mask)


def WriteField(f, path, genspec=None):
  logging.debug('Writing %s field on %r to %s.', f.kind, f.grid, path)
  with open(path, 'w') as handle:
    json.dump(ToJson(f, genspec=genspec), handle)


def ReadField(path):
  """Reads an FLD-JSON file.

  Raises:
    FieldError: the file is not valid FLD-JSON v1.
    IOError: the file cannot be read.
  """
  with open(path) as handle:
    try:
      document = json.load(handle)
    except ValueError as e:
      raise FieldError('Cannot decode %s: %s' % (path, e))
  return FromJson(document)
