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
"""Tests for phasestab.stability.ambiguity."""

import math

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np
from phasestab.spectral import field
from phasestab.spectral import norms
from phasestab.spectral import support
from phasestab.stability import ambiguity


def _RandomField(grid, seed):
  rng = np.random.default_rng(seed)
  values = (rng.standard_normal(grid.dims) +
            1j * rng.standard_normal(grid.dims))
  return field.SampledField(grid, values)


def _BandLimited(grid, bits, seed):
  rng = np.random.default_rng(seed)
  bits = np.asarray(bits, dtype=bool).reshape(grid.dims)
  values = np.zeros(grid.dims, dtype=complex)
  values[bits] = (rng.standard_normal(bits.sum()) +
                  1j * rng.standard_normal(bits.sum()))
  return field.InverseTransform(field.SpectralField(grid, values, bits))


def _Relative(a, b):
  return abs(a - b) / max(abs(b), 1e-300)


def _BruteForcePhase(f, g, s, phases=100000):
  f_hat = field.ForwardTransform(f).values
  g_hat = field.ForwardTransform(g).values
  weights = norms.BracketGrid(f.grid)**(2 * s)
  volume = f.grid.FrequencyCellVolume()
  a = volume * np.sum(weights * np.abs(f_hat)**2)
  b = volume * np.sum(weights * np.abs(g_hat)**2)
  c = volume * np.sum(weights * f_hat * np.conj(g_hat))
  theta = np.linspace(0, 2 * math.pi, phases, endpoint=False)
  return math.sqrt(max(np.min(a + b - 2 * np.real(np.exp(-1j * theta) * c)),
                       0.0))


_ELEMENTS = (
    ambiguity.AmbiguityElement(theta=0.7),
    ambiguity.AmbiguityElement(shift=[5]),
    ambiguity.AmbiguityElement(theta=2.1, shift=[-3], reflect=True),
    ambiguity.AmbiguityElement(shift=[1], tau_frac=[0.037]),
    ambiguity.AmbiguityElement(theta=4.0, shift=[2], tau_frac=[-0.01],
                               reflect=True),
)


class ElementTest(parameterized.TestCase):

  def setUp(self):
    super(ElementTest, self).setUp()
    self.grid = field.GridSpec([32], 0.25)
    self.f = _RandomField(self.grid, 1)

  def testIdentity(self):
    identity = ambiguity.AmbiguityElement.Identity()
    self.assertTrue(identity.IsIdentity())
    np.testing.assert_array_equal(
        ambiguity.ApplyElement(identity, self.f).values, self.f.values)

  def testPhasePiNegates(self):
    moved = ambiguity.ApplyElement(
        ambiguity.AmbiguityElement(theta=math.pi), self.f)
    np.testing.assert_array_equal(moved.values, -self.f.values)

  def testShiftIsIndexRotation(self):
    moved = ambiguity.ApplyElement(ambiguity.AmbiguityElement(shift=[5]),
                                   self.f)
    expected = [self.f.values[(j - 5) % 32] for j in range(32)]
    np.testing.assert_array_equal(moved.values, expected)

  def testReflectionIsIndexMap(self):
    grid = field.GridSpec([8, 4], 0.5)
    f = _RandomField(grid, 2)
    moved = ambiguity.ApplyElement(ambiguity.AmbiguityElement(reflect=True), f)
    for j, k in np.ndindex(8, 4):
      self.assertEqual(moved.values[j, k],
                       np.conj(f.values[(8 - j) % 8, (4 - k) % 4]))

  def testReflectionConjugatesSpectrum(self):
    moved = ambiguity.ApplyElement(ambiguity.AmbiguityElement(reflect=True),
                                   self.f)
    np.testing.assert_allclose(
        field.ForwardTransform(moved).values,
        np.conj(field.ForwardTransform(self.f).values), rtol=0, atol=1e-12)

  @parameterized.parameters(*_ELEMENTS)
  def testSpectralActionMatchesSpatial(self, element):
    spatial = field.ForwardTransform(ambiguity.ApplyElement(element, self.f))
    spectral = ambiguity.ElementSpectrum(element,
                                         field.ForwardTransform(self.f))
    self.assertLess(
        np.linalg.norm(spatial.values - spectral.values) /
        np.linalg.norm(spectral.values), 1e-12)

  @parameterized.parameters(*_ELEMENTS)
  def testMagnitudeInvariance(self, element):
    before = np.abs(field.ForwardTransform(self.f).values)
    after = np.abs(
        field.ForwardTransform(ambiguity.ApplyElement(element,
                                                      self.f)).values)
    np.testing.assert_allclose(after, before, rtol=1e-12, atol=1e-14)

  @parameterized.parameters(*_ELEMENTS)
  def testIsometry(self, element):
    moved = ambiguity.ApplyElement(element, self.f)
    for s in (-1, 0, 0.5, 2):
      self.assertLess(
          _Relative(norms.SobolevNorm(moved, s), norms.SobolevNorm(self.f, s)),
          1e-12)

  @parameterized.parameters(*_ELEMENTS)
  def testInverse(self, element):
    back = ambiguity.ApplyElement(element.Inverse(),
                                  ambiguity.ApplyElement(element, self.f))
    self.assertLess(
        np.linalg.norm(back.values - self.f.values) /
        np.linalg.norm(self.f.values), 1e-12)

  def testDeclaredSupportTravels(self):
    bits = np.arange(32) % 4 == 0
    f = _BandLimited(self.grid, bits, 3)
    moved = ambiguity.ApplyElement(_ELEMENTS[2], f)
    np.testing.assert_array_equal(moved.declared_support, bits)

  def testDictRoundTrip(self):
    element = ambiguity.AmbiguityElement(1.5, [3, -2], [0.01, 0.0], True)
    data = element.ToDict()
    self.assertEqual(data['reflect'], 1)
    self.assertEqual(ambiguity.AmbiguityElement.FromDict(data), element)
    self.assertRaises(ambiguity.AmbiguityError,
                      ambiguity.AmbiguityElement.FromDict, [1])

  def testPhaseReduced(self):
    self.assertAlmostEqual(
        ambiguity.AmbiguityElement(theta=-math.pi / 2).theta, 1.5 * math.pi)

  def testAxisMismatch(self):
    element = ambiguity.AmbiguityElement(shift=[1, 1])
    self.assertRaises(ambiguity.AmbiguityError, ambiguity.ApplyElement,
                      element, self.f)


class GroupSpecTest(parameterized.TestCase):

  @parameterized.parameters(*ambiguity.GROUP_NAMES)
  def testNames(self, name):
    self.assertEqual(ambiguity.GroupSpec.FromName(name).Name(), name)

  @parameterized.parameters('rotation', 'phase+phase', '', 3)
  def testUnknown(self, name):
    self.assertRaises(ambiguity.AmbiguityError, ambiguity.GroupSpec.FromName,
                      name)

  def testContains(self):
    phase = ambiguity.GroupSpec.FromName('phase')
    self.assertTrue(phase.Contains(ambiguity.AmbiguityElement(theta=1)))
    self.assertFalse(phase.Contains(ambiguity.AmbiguityElement(shift=[1])))
    self.assertFalse(phase.Contains(ambiguity.AmbiguityElement(reflect=True)))
    full = ambiguity.GroupSpec.FromName('phase+shift+reflect')
    for element in _ELEMENTS:
      self.assertTrue(full.Contains(element))

  def testIncludes(self):
    names = ambiguity.GROUP_NAMES
    for i, small in enumerate(names):
      for large in names[i:]:
        self.assertTrue(
            ambiguity.GroupSpec.FromName(large).Includes(
                ambiguity.GroupSpec.FromName(small)))
    self.assertFalse(
        ambiguity.GroupSpec.FromName('phase').Includes(
            ambiguity.GroupSpec.FromName('phase+shift')))

  def testIdentityOnly(self):
    group = ambiguity.GroupSpec()
    self.assertTrue(group.IsTrivial())
    self.assertEqual(group.Name(), 'id')
    self.assertEqual(group.ReflectionChoices(), (False,))


class OptimalPhaseTest(parameterized.TestCase):

  def testExactPhaseMatch(self):
    f = _RandomField(field.GridSpec([32], 0.25), 4)
    theta, d = ambiguity.OptimalPhase(f, f.Scale(1j), 0.5)
    self.assertAlmostEqual(theta, 1.5 * math.pi, places=12)
    self.assertLess(d, 1e-12 * norms.SobolevNorm(f, 0.5))

  def testOrthogonal(self):
    grid = field.GridSpec([32], 0.25)
    f = _BandLimited(grid, np.arange(32) < 10, 5)
    g = _BandLimited(grid, np.arange(32) >= 20, 6)
    _, d = ambiguity.OptimalPhase(f, g, 1.0)
    expected = math.sqrt(norms.SobolevNorm(f, 1.0)**2 +
                         norms.SobolevNorm(g, 1.0)**2)
    self.assertLess(_Relative(d, expected), 1e-10)

  @parameterized.parameters((7, 0.0), (8, 1.0), (9, -1.0))
  def testDensePhaseGrid(self, seed, s):
    grid = field.GridSpec([64], 0.2)
    f, g = _RandomField(grid, seed), _RandomField(grid, seed + 100)
    _, d = ambiguity.OptimalPhase(f, g, s)
    brute = _BruteForcePhase(f, g, s)
    self.assertLessEqual(d, brute * (1 + 1e-12))
    self.assertLess(_Relative(d, brute), 1e-8)


class QuotientDistanceTest(parameterized.TestCase):

  def setUp(self):
    super(QuotientDistanceTest, self).setUp()
    self.grid = field.GridSpec([64], 0.2)

  @parameterized.parameters(
      ('phase', ambiguity.AmbiguityElement(theta=2.5)),
      ('phase+shift', ambiguity.AmbiguityElement(theta=1.0, shift=[7])),
      ('phase+shift+reflect',
       ambiguity.AmbiguityElement(theta=5.0, shift=[-11], reflect=True)),
      ('phase+shift+reflect', ambiguity.AmbiguityElement(shift=[3])))
  def testPlantedSymmetry(self, name, element):
    f = _RandomField(self.grid, 10)
    g = ambiguity.ApplyElement(element, f)
    for s in (0.0, 1.0):
      d, witness = ambiguity.QuotientDistance(
          f, g, s, ambiguity.GroupSpec.FromName(name))
      self.assertLessEqual(d, 1e-10 * norms.SobolevNorm(f, s))
      self.assertTrue(ambiguity.GroupSpec.FromName(name).Contains(witness))

  def testPlantedSymmetryTwoDimensional(self):
    grid = field.GridSpec([16, 8], 0.3)
    f = _RandomField(grid, 11)
    element = ambiguity.AmbiguityElement(0.4, [3, -2], (), True)
    d, _ = ambiguity.QuotientDistance(
        f, ambiguity.ApplyElement(element, f), 0.5,
        ambiguity.GroupSpec.FromName('phase+shift+reflect'))
    self.assertLessEqual(d, 1e-10 * norms.SobolevNorm(f, 0.5))

  def testIdentityGroup(self):
    f, g = _RandomField(self.grid, 12), _RandomField(self.grid, 13)
    d, witness = ambiguity.QuotientDistance(f, g, 1.0, ambiguity.GroupSpec())
    self.assertTrue(witness.IsIdentity())
    self.assertLess(_Relative(d, norms.SobolevNorm(f - g, 1.0)), 1e-12)

  def testExhaustiveShiftAndPhase(self):
    f, g = _RandomField(self.grid, 14), _RandomField(self.grid, 15)
    s = 0.5
    weights = norms.BracketGrid(self.grid)**(2 * s)
    volume = self.grid.FrequencyCellVolume()
    f_hat = field.ForwardTransform(f).values
    theta = np.linspace(0, 2 * math.pi, 100000, endpoint=False)
    rotations = np.exp(-1j * theta)
    best = float('inf')
    for m in range(64):
      moved = field.SampledField(self.grid, np.roll(g.values, m))
      g_hat = field.ForwardTransform(moved).values
      a = volume * np.sum(weights * np.abs(f_hat)**2)
      b = volume * np.sum(weights * np.abs(g_hat)**2)
      c = volume * np.sum(weights * f_hat * np.conj(g_hat))
      best = min(best, float(np.min(a + b - 2 * np.real(rotations * c))))
    d, _ = ambiguity.QuotientDistance(
        f, g, s, ambiguity.GroupSpec.FromName('phase+shift'))
    self.assertLess(_Relative(d, math.sqrt(best)), 1e-8)

  def testExhaustiveShiftOnly(self):
    f, g = _RandomField(self.grid, 16), _RandomField(self.grid, 17)
    best = min(
        norms.SobolevNorm(f - field.SampledField(self.grid,
                                                 np.roll(g.values, m)), 0.0)
        for m in range(64))
    d, _ = ambiguity.QuotientDistance(f, g, 0.0,
                                      ambiguity.GroupSpec.FromName('shift'))
    self.assertLess(_Relative(d, best), 1e-12)

  @parameterized.parameters(*ambiguity.GROUP_NAMES)
  def testSymmetric(self, name):
    f, g = _RandomField(self.grid, 18), _RandomField(self.grid, 19)
    group = ambiguity.GroupSpec.FromName(name)
    forward, _ = ambiguity.QuotientDistance(f, g, 0.5, group)
    backward, _ = ambiguity.QuotientDistance(g, f, 0.5, group)
    scale = norms.SobolevNorm(f, 0.5) + norms.SobolevNorm(g, 0.5)
    self.assertLessEqual(abs(forward - backward), 1e-8 * scale)

  def testMonotoneInGroup(self):
    f, g = _RandomField(self.grid, 20), _RandomField(self.grid, 21)
    distances = [
        ambiguity.QuotientDistance(f, g, 1.0,
                                   ambiguity.GroupSpec.FromName(name))[0]
        for name in ambiguity.GROUP_NAMES
    ]
    for larger, smaller in zip(distances, distances[1:]):
      self.assertLessEqual(smaller, larger * (1 + 1e-12))
    self.assertLessEqual(distances[0], norms.SobolevNorm(f - g, 1.0) *
                         (1 + 1e-12))

  @parameterized.parameters(*ambiguity.GROUP_NAMES)
  def testMagnitudeGapIsLowerBound(self, name):
    f, g = _RandomField(self.grid, 22), _RandomField(self.grid, 23)
    d, _ = ambiguity.QuotientDistance(f, g, 1.0,
                                      ambiguity.GroupSpec.FromName(name))
    self.assertLessEqual(norms.MagnitudeGap(f, g, 1.0), d * (1 + 1e-12))

  def testTieGoesToFirstShift(self):
    f = field.SampledField(self.grid, np.zeros(64))
    d, witness = ambiguity.QuotientDistance(
        f, f, 0.0, ambiguity.GroupSpec.FromName('phase+shift+reflect'))
    self.assertEqual(d, 0.0)
    self.assertTrue(witness.IsIdentity())

  def testSubgridRefinement(self):
    grid = field.GridSpec([128], 0.1)
    x = grid.SpatialAxes()[0]
    f = field.SampledField(grid, np.exp(-x**2 / 2))
    g = ambiguity.ApplyElement(
        ambiguity.AmbiguityElement(shift=[2], tau_frac=[0.03]), f)
    group = ambiguity.GroupSpec.FromName('shift')
    coarse, _ = ambiguity.QuotientDistance(f, g, 0.0, group)
    fine, witness = ambiguity.QuotientDistance(f, g, 0.0, group, subgrid=True)
    self.assertLess(fine, coarse)
    self.assertTrue(any(witness.tau_frac))
    self.assertLessEqual(abs(witness.tau_frac[0]), 0.5 * grid.spacing)

  def testGridMismatch(self):
    f = _RandomField(self.grid, 24)
    g = _RandomField(field.GridSpec([64], 0.3), 25)
    self.assertRaises(ambiguity.AmbiguityError, ambiguity.QuotientDistance, f,
                      g, 0.0, ambiguity.GroupSpec())


class UnimodularMultiplierTest(parameterized.TestCase):

  def setUp(self):
    super(UnimodularMultiplierTest, self).setUp()
    self.grid = field.GridSpec([64], 0.2)
    self.bits_f = (np.arange(64) >= 16) & (np.arange(64) < 40)
    self.bits_g = (np.arange(64) >= 28) & (np.arange(64) < 52)

  def testNegatedSpectrum(self):
    f = _BandLimited(self.grid, self.bits_f, 30)
    g = f.Scale(-1)
    multiplier, d = ambiguity.UnimodularOptimalMultiplier(f, g)
    self.assertLess(d, 1e-12 * norms.LpNorm(f, 2))
    aligned = ambiguity.ApplySpectralMultiplier(multiplier, g)
    np.testing.assert_allclose(aligned.values, f.values, rtol=0, atol=1e-12)

  def testEqualFields(self):
    f = _BandLimited(self.grid, self.bits_f, 31)
    multiplier, d = ambiguity.UnimodularOptimalMultiplier(f, f)
    np.testing.assert_allclose(multiplier.values, 1.0, rtol=0, atol=1e-12)
    self.assertLess(d, 1e-12 * norms.LpNorm(f, 2))

  @parameterized.parameters(0.0, 1.0, -0.5)
  def testMagnitudeIdentity(self, s):
    f = _BandLimited(self.grid, self.bits_f, 32)
    g = _BandLimited(self.grid, self.bits_g, 33)
    multiplier, d = ambiguity.UnimodularOptimalMultiplier(f, g, s=s)
    np.testing.assert_allclose(np.abs(multiplier.values), 1.0, rtol=1e-12)
    self.assertLess(_Relative(d, norms.MagnitudeGap(f, g, s)), 1e-10)

  def testDetectedSupportsRefused(self):
    f, g = _RandomField(self.grid, 34), _RandomField(self.grid, 35)
    self.assertRaises(support.SupportError,
                      ambiguity.UnimodularOptimalMultiplier, f, g,
                      allow_detected=False)
    _, d = ambiguity.UnimodularOptimalMultiplier(f, g)
    self.assertLess(_Relative(d, norms.MagnitudeGap(f, g)), 1e-10)


if __name__ == '__main__':
  absltest.main()
