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
"""Trivial ambiguities of the Fourier phase problem and quotient distances.

An AmbiguityElement acts on a field f by

  conjugate reflection (optional)  f(x) -> conj(f(-x))
  circular translation             f(x) -> f(x - m h - tau)
  global phase                     f    -> e^(i theta) f

applied in that order.  On the spectrum the action is

  f^ -> e^(i theta) e^(-i (m h + tau).xi) R(f^)

where R is pointwise conjugation when the element reflects and the identity
otherwise.  Every element preserves |f^| pointwise and is an isometry of
every H^s.

The quotient distance d([f], [g]) = inf_{P in G} ||f - P g||_{H^s} is found
exactly over the parametric subgroups: the H^s inner products against every
circular translate come out of a single weighted cross-correlation, and the
optimal phase for each translate is the argument of that inner product.
"""

import cmath
import logging
import math

import numpy as np
from phasestab.spectral import field
from phasestab.spectral import norms
from phasestab.spectral import support
from scipy import fft

TWO_PI = 2 * math.pi

PHASE = 'phase'
SHIFT = 'shift'
REFLECT = 'reflect'
IDENTITY_NAME = 'id'
GROUP_NAMES = ('id', 'phase', 'phase+shift', 'phase+shift+reflect')


class AmbiguityError(Exception):
  pass


def _UnitPhase(theta):
  """e^(i theta), exact at multiples of pi/2."""
  quarter = theta / (math.pi / 2)
  turns = round(quarter)
  if abs(quarter - turns) < 1e-14:
    return (1 + 0j, 1j, -1 + 0j, -1j)[int(turns) % 4]
  return cmath.exp(1j * theta)


def _ReducePhase(theta):
  theta = math.fmod(float(theta), TWO_PI)
  if theta < 0:
    theta += TWO_PI
  if theta >= TWO_PI:
    theta = 0.0
  return theta


class AmbiguityElement(object):
  """One element of the parametric family phase x translation x reflection."""

  def __init__(self, theta=0.0, shift=(), tau_frac=(), reflect=False):
    try:
      self.theta = _ReducePhase(theta)
      self.shift = tuple(int(m) for m in shift)
      self.tau_frac = tuple(float(tau) for tau in tau_frac)
    except (TypeError, ValueError) as e:
      raise AmbiguityError('Malformed ambiguity element: %s' % e)
    if not all(math.isfinite(tau) for tau in self.tau_frac):
      raise AmbiguityError('Sub-grid offsets must be finite.')
    self.reflect = bool(reflect)

  @classmethod
  def Identity(cls):
    return cls()

  def IsIdentity(self):
    return (self.theta == 0 and not any(self.shift) and
            not any(self.tau_frac) and not self.reflect)

  def HasTranslation(self):
    return any(self.shift) or any(self.tau_frac)

  def Shift(self, n):
    """The integer offsets padded to n axes."""
    return self._Padded(self.shift, n, 0)

  def TauFrac(self, n):
    return self._Padded(self.tau_frac, n, 0.0)

  def _Padded(self, values, n, zero):
    if not values:
      return (zero,) * n
    if len(values) != n:
      raise AmbiguityError('Element has %d offsets but the grid has %d axes.' %
                           (len(values), n))
    return values

  def Phase(self):
    return _UnitPhase(self.theta)

  def Inverse(self):
    """The inverse element.

    Reflecting elements are involutions: applying e twice gives
    e^(i theta) E conj(e^(i theta) E conj(f^)) = |E|^2 f^ = f^.
    """
    if self.reflect:
      return AmbiguityElement(self.theta, self.shift, self.tau_frac, True)
    return AmbiguityElement(-self.theta, [-m for m in self.shift],
                            [-tau for tau in self.tau_frac], False)

  def ToDict(self):
    return {
        'theta': self.theta,
        'shift': list(self.shift),
        'tau_frac': list(self.tau_frac),
        'reflect': int(self.reflect),
    }

  @classmethod
  def FromDict(cls, data):
    try:
      return cls(data.get('theta', 0.0), data.get('shift', ()),
                 data.get('tau_frac', ()), data.get('reflect', 0))
    except AttributeError:
      raise AmbiguityError('Ambiguity element must be an object: %r' % (data,))

  def __eq__(self, other):
    if not isinstance(other, AmbiguityElement):
      return NotImplemented
    return self.ToDict() == other.ToDict()

  def __ne__(self, other):
    result = self.__eq__(other)
    if result is NotImplemented:
      return result
    return not result

  def __hash__(self):
    return hash((self.theta, self.shift, self.tau_frac, self.reflect))

  def __repr__(self):
    return ('AmbiguityElement(theta=%r, shift=%r, tau_frac=%r, reflect=%r)' %
            (self.theta, self.shift, self.tau_frac, self.reflect))


def _Ramp(grid, shift, tau_frac):
  """e^(-i (m h + tau).xi) on the frequency nodes."""
  exponent = np.zeros(grid.dims)
  for offset, tau, xi in zip(shift, tau_frac, grid.FrequencyMesh()):
    exponent += (offset * grid.spacing + tau) * xi
  return np.exp(-1j * exponent)


def _Reflect(values, axes):
  """Index map j -> (N - j) mod N on every axis, then conjugation."""
  flipped = np.flip(values, axis=axes)
  return np.conj(np.roll(flipped, 1, axis=axes))


def ApplyElement(element, f):
  """Applies an element to a sampled field.

  Reflection and integer translation are exact index maps.  A sub-grid offset
  is applied as a spectral ramp.

  Args:
    element: an AmbiguityElement.
    f: a SampledField.

  Returns:
    The transformed SampledField; the declared support is unchanged because
    every element acts pointwise on the spectrum.
  """
  grid = f.grid
  axes = tuple(range(grid.n))
  values = f.values
  if element.reflect:
    values = _Reflect(values, axes)
  shift = element.Shift(grid.n)
  if any(shift):
    values = np.roll(values, shift, axis=axes)
  tau_frac = element.TauFrac(grid.n)
  if any(tau_frac):
    spectrum = field.ForwardTransform(field.SampledField(grid, values))
    ramped = field.SpectralField(
        grid, spectrum.values * _Ramp(grid, (0,) * grid.n, tau_frac))
    values = field.InverseTransform(ramped).values
  if element.theta:
    values = element.Phase() * values
  return field.SampledField(grid, values, f.declared_support)


def ElementSpectrum(element, spectrum):
  """The spectral action of an element on a SpectralField."""
  grid = spectrum.grid
  values = spectrum.values
  if element.reflect:
    values = np.conj(values)
  if element.HasTranslation():
    values = values * _Ramp(grid, element.Shift(grid.n),
                            element.TauFrac(grid.n))
  if element.theta:
    values = element.Phase() * values
  return field.SpectralField(grid, values, spectrum.declared_support)


class GroupSpec(object):
  """Which generator families a subgroup G uses.

  Any combination of the three families is closed under composition and
  inverses, so every flag setting describes a group.
  """

  def __init__(self, global_phase=False, translations=False,
               conjugate_reflection=False):
    self.global_phase = bool(global_phase)
    self.translations = bool(translations)
    self.conjugate_reflection = bool(conjugate_reflection)

  @classmethod
  def FromName(cls, name):
    """Parses 'id' or a '+'-joined subset of phase, shift and reflect."""
    if not isinstance(name, str):
      raise AmbiguityError('Group name must be a string: %r' % (name,))
    name = name.strip().lower()
    if name == IDENTITY_NAME:
      return cls()
    parts = name.split('+')
    unknown = set(parts) - {PHASE, SHIFT, REFLECT}
    if unknown or len(set(parts)) != len(parts):
      raise AmbiguityError('Unknown group %r; expected one of %s.' %
                           (name, ', '.join(GROUP_NAMES)))
    return cls(PHASE in parts, SHIFT in parts, REFLECT in parts)

  def Name(self):
    parts = []
    if self.global_phase:
      parts.append(PHASE)
    if self.translations:
      parts.append(SHIFT)
    if self.conjugate_reflection:
      parts.append(REFLECT)
    return '+'.join(parts) or IDENTITY_NAME

  def IsTrivial(self):
    return not (self.global_phase or self.translations or
                self.conjugate_reflection)

  def Contains(self, element):
    if element.theta and not self.global_phase:
      return False
    if element.HasTranslation() and not self.translations:
      return False
    if element.reflect and not self.conjugate_reflection:
      return False
    return True

  def Includes(self, other):
    """True when every generator of other is enabled here."""
    return ((self.global_phase or not other.global_phase) and
            (self.translations or not other.translations) and
            (self.conjugate_reflection or not other.conjugate_reflection))

  def ReflectionChoices(self):
    if self.conjugate_reflection:
      return (False, True)
    return (False,)

  def ToDict(self):
    return {
        'name': self.Name(),
        'global_phase': self.global_phase,
        'translations': self.translations,
        'conjugate_reflection': self.conjugate_reflection,
    }

  def __eq__(self, other):
    if not isinstance(other, GroupSpec):
      return NotImplemented
    return self.ToDict() == other.ToDict()

  def __ne__(self, other):
    result = self.__eq__(other)
    if result is NotImplemented:
      return result
    return not result

  def __hash__(self):
    return hash(self.Name())

  def __repr__(self):
    return 'GroupSpec(%r)' % self.Name()


def _Spectra(f, g):
  f_hat = field.AsSpectrum(f)
  g_hat = field.AsSpectrum(g)
  if f_hat.grid != g_hat.grid:
    raise AmbiguityError('Grid mismatch: %r vs %r.' % (f_hat.grid, g_hat.grid))
  return f_hat, g_hat


def _WeightedDistance(f_hat, other_values, weights):
  gap = np.abs(f_hat.values - other_values)**2
  return math.sqrt(f_hat.CellVolume() * float(np.sum(weights * gap)))


def _ElementDistance(f_hat, g_hat, element, weights):
  return _WeightedDistance(f_hat, ElementSpectrum(element, g_hat).values,
                           weights)


def OptimalPhase(f, g, s):
  """Closed-form inf over unit scalars w of ||f - w g||_{H^s}.

  Args:
    f: a SampledField or SpectralField.
    g: a field on the same grid.
    s: the Sobolev order.

  Returns:
    (theta, d) with theta = arg <f, g>_s in [0, 2 pi) and
    d = ||f - e^(i theta) g||_{H^s}.  Orthogonal pairs return theta = 0.
  """
  f_hat, g_hat = _Spectra(f, g)
  inner = norms.SobolevInnerProduct(f_hat, g_hat, s)
  theta = _ReducePhase(cmath.phase(inner)) if inner else 0.0
  element = AmbiguityElement(theta=theta)
  weights = norms.BracketGrid(f_hat.grid)**(2.0 * s)
  return element.theta, _ElementDistance(f_hat, g_hat, element, weights)


def _CrossCorrelation(f_hat, reflected, weights):
  """<f, T_m g>_s for every circular offset m, indexed by m mod N."""
  grid = f_hat.grid
  axes = tuple(range(grid.n))
  product = weights * f_hat.values * np.conj(reflected)
  correlation = fft.ifftn(fft.ifftshift(product, axes=axes), axes=axes)
  return f_hat.CellVolume() * grid.size * correlation


def _SignedShift(index, dims):
  return tuple(m - size if m >= size // 2 else m
               for m, size in zip(index, dims))


def _Objective(total, inner, global_phase):
  if global_phase:
    return total - 2 * np.abs(inner)
  return total - 2 * np.real(inner)


def _SubgridOffsets(objective, index, spacing):
  """Per-axis parabola vertex through the objective at m - 1, m, m + 1."""
  offsets = []
  for axis in range(objective.ndim):
    below = list(index)
    above = list(index)
    size = objective.shape[axis]
    below[axis] = (index[axis] - 1) % size
    above[axis] = (index[axis] + 1) % size
    left = objective[tuple(below)]
    center = objective[tuple(index)]
    right = objective[tuple(above)]
    curvature = left - 2 * center + right
    if curvature <= 0:
      offsets.append(0.0)
      continue
    vertex = 0.5 * (left - right) / curvature
    offsets.append(float(np.clip(vertex, -0.5, 0.5)) * spacing)
  return offsets


def _PhaseFor(f_hat, candidate, weights):
  inner = complex(f_hat.CellVolume() *
                  np.sum(weights * f_hat.values * np.conj(candidate)))
  if not inner:
    return 0.0
  return _ReducePhase(cmath.phase(inner))


def QuotientDistance(f, g, s, group, subgrid=False):
  """d([f], [g]) = inf over P in group of ||f - P g||_{H^s}.

  Every enabled reflection choice and, with translations, every circular
  offset is examined exactly; the optimal phase per candidate is closed
  form.  Ties go to the smaller reflection flag, then to the first offset in
  row-major order of m mod N.  The reported distance is evaluated directly at
  the witness and never exceeds the identity distance.

  Args:
    f: a SampledField or SpectralField.
    g: a field on the same grid.
    s: the Sobolev order.
    group: a GroupSpec.
    subgrid: refine the best integer offset by a parabola fit per axis and
      keep the refinement when it lowers the distance.

  Returns:
    (d, witness) with witness an AmbiguityElement in the group.

  Raises:
    AmbiguityError: grid mismatch.
  """
  f_hat, g_hat = _Spectra(f, g)
  grid = f_hat.grid
  weights = norms.BracketGrid(grid)**(2.0 * s)
  volume = f_hat.CellVolume()
  total = volume * float(
      np.sum(weights * (np.abs(f_hat.values)**2 + np.abs(g_hat.values)**2)))

  best = None
  for reflect in group.ReflectionChoices():
    reflected = np.conj(g_hat.values) if reflect else g_hat.values
    if group.translations:
      inner = _CrossCorrelation(f_hat, reflected, weights)
      objective = _Objective(total, inner, group.global_phase)
      flat = int(np.argmin(objective))
      index = np.unravel_index(flat, objective.shape)
      value = float(objective[index])
      candidate_inner = complex(inner[index])
    else:
      index = (0,) * grid.n
      objective = None
      candidate_inner = complex(volume *
                                np.sum(weights * f_hat.values *
                                       np.conj(reflected)))
      value = float(_Objective(total, candidate_inner, group.global_phase))
    if best is None or value < best[0]:
      best = (value, reflect, index, candidate_inner, objective)

  _, reflect, index, inner, objective = best
  theta = 0.0
  if group.global_phase and inner:
    theta = cmath.phase(inner)
  shift = _SignedShift(index, grid.dims) if group.translations else ()
  witness = AmbiguityElement(theta, shift, (), reflect)
  distance = _ElementDistance(f_hat, g_hat, witness, weights)

  if subgrid and group.translations:
    tau_frac = _SubgridOffsets(objective, index, grid.spacing)
    if any(tau_frac):
      moved = ElementSpectrum(AmbiguityElement(0.0, shift, tau_frac, reflect),
                              g_hat).values
      refined_theta = (_PhaseFor(f_hat, moved, weights)
                       if group.global_phase else 0.0)
      refined = AmbiguityElement(refined_theta, shift, tau_frac, reflect)
      refined_distance = _ElementDistance(f_hat, g_hat, refined, weights)
      if refined_distance < distance:
        logging.debug('Sub-grid offset %s lowers d from %g to %g.', tau_frac,
                      distance, refined_distance)
        witness, distance = refined, refined_distance

  identity_distance = _WeightedDistance(f_hat, g_hat.values, weights)
  if identity_distance <= distance:
    witness, distance = AmbiguityElement.Identity(), identity_distance
  logging.debug('Quotient distance over %s: %g at %r.', group.Name(), distance,
                witness)
  return distance, witness


def UnimodularOptimalMultiplier(f, g, s=0.0, allow_detected=True,
                                tau_rel=support.DEFAULT_TAU_REL):
  """The unimodular multiplier a aligning the phases of g^ with those of f^.

  Off A = {f^ = 0 or g^ = 0} the multiplier is a = f^/|f^| conj(g^)/|g^|;
  on A it is 1.  With M_a g = F^-1(a g^), the identity

    ||f - M_a g||_{H^s} = ||<xi>^s (|f^| - |g^|)||_2

  holds bin by bin.

  Args:
    f: a SampledField.
    g: a SampledField on the same grid.
    s: the Sobolev order of the distance.
    allow_detected: threshold the spectra when a declared support is missing.
    tau_rel: relative threshold for detected supports.

  Returns:
    (a, d): a SpectralField with |a| = 1 at every node, and
    d = ||f - M_a g||_{H^s}.
  """
  f_hat, g_hat = _Spectra(f, g)
  sets = support.PairSupports(f, g, allow_detected, tau_rel)
  common = sets.intersection.bits & (f_hat.values != 0) & (g_hat.values != 0)
  multiplier = np.ones(f_hat.grid.dims, dtype=complex)
  f_common = f_hat.values[common]
  g_common = g_hat.values[common]
  multiplier[common] = (f_common / np.abs(f_common) * np.conj(g_common) /
                        np.abs(g_common))
  weights = norms.BracketGrid(f_hat.grid)**(2.0 * s)
  distance = _WeightedDistance(f_hat, multiplier * g_hat.values, weights)
  return field.SpectralField(f_hat.grid, multiplier), distance


def ApplySpectralMultiplier(multiplier, g):
  """M_a g = F^-1(a g^) for a SpectralField a."""
  g_hat = field.AsSpectrum(g)
  if multiplier.grid != g_hat.grid:
    raise AmbiguityError('Grid mismatch: %r vs %r.' %
                         (multiplier.grid, g_hat.grid))
  return field.InverseTransform(
      field.SpectralField(g_hat.grid, multiplier.values * g_hat.values))
