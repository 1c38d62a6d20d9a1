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
"""Tests for phasestab.cli.main."""

import json
import os

from absl import flags
from absl.testing import absltest
from absl.testing import flagsaver
from absl.testing import parameterized
import mock
from phasestab.cli import main
from phasestab.cli import run_config
from phasestab.cli import trials
from phasestab.spectral import field

FLAGS = flags.FLAGS


class MainTest(parameterized.TestCase):

  def setUp(self):
    super(MainTest, self).setUp()
    if not FLAGS.is_parsed():
      FLAGS.mark_as_parsed()
    self.tmp = self.create_tempdir().full_path
    self.out = os.path.join(self.tmp, 'run')
    self.saver = flagsaver.flagsaver(out=self.out, trials=4, bins=16)
    self.saver.__enter__()

  def tearDown(self):
    self.saver.__exit__(None, None, None)
    super(MainTest, self).tearDown()

  def testBuildConfig(self):
    with flagsaver.flagsaver(p=['1', '4/3'], group='phase', dim=2, grid=32):
      config = main.BuildConfig(['phasestab', 'verify', 'theorem'])
    self.assertEqual(config.target, 'theorem')
    self.assertEqual(config.p, [1.0, 4.0 / 3])
    self.assertEqual(config.dims, [32, 32])
    self.assertEqual(config.group, 'phase')

  def testBuildConfigErrors(self):
    for argv in (['phasestab'], ['phasestab', 'verify'],
                 ['phasestab', 'verify', 'lemma', 'extra'],
                 ['phasestab', 'certify', 'f.json'],
                 ['phasestab', 'dance']):
      self.assertRaises(run_config.ConfigError, main.BuildConfig, argv)
    with flagsaver.flagsaver(p=['1/0']):
      self.assertRaises(run_config.ConfigError, main.BuildConfig,
                        ['phasestab', 'verify', 'lemma'])

  def testConfigFileWithOverrides(self):
    path = os.path.join(self.tmp, 'run.json')
    with open(path, 'w') as handle:
      json.dump({'trials': 9, 'suite': 'disjoint', 's': [1.0]}, handle)
    with flagsaver.flagsaver(config=path):
      config = main.BuildConfig(['phasestab', 'verify', 'lemma'])
    self.assertEqual(config.suite, 'disjoint')
    self.assertEqual(config.s, [1.0])
    self.assertEqual(config.trials, 4)

  def testNormalizeFlags(self):
    self.assertEqual(
        main._NormalizeFlags(['phasestab', '--constant-one',
                              '--allow-detected', '--tau-rel=1e-9',
                              '--no-subgrid', '--not-a-flag', 'verify']),
        ['phasestab', '--constant_one', '--allow_detected', '--tau_rel=1e-9',
         '--nosubgrid', '--not-a-flag', 'verify'])

  def testVerify(self):
    self.assertEqual(main.main(['phasestab', 'verify', 'appendix-b']),
                     run_config.EXIT_OK)
    with open(self.out + '.jsonl') as handle:
      lines = [json.loads(line) for line in handle]
    self.assertEqual(lines[0]['summary']['violations'], 0)
    self.assertLen(lines, 5)
    self.assertTrue(os.path.exists(self.out + '.csv'))
    self.assertFalse(os.path.exists(self.out + '_findings'))

  def _Outputs(self):
    with open(self.out + '.jsonl') as handle:
      records = handle.read().splitlines()[1:]
    with open(self.out + '.csv') as handle:
      return records, handle.read()

  def testVerifyReproducible(self):
    with flagsaver.flagsaver(group='phase+shift', trials=8):
      self.assertEqual(main.main(['phasestab', 'verify', 'theorem']),
                       run_config.EXIT_OK)
      records, table = self._Outputs()
      with flagsaver.flagsaver(workers=4):
        main.main(['phasestab', 'verify', 'theorem'])
      again, again_table = self._Outputs()
    self.assertLen(records, 8)
    self.assertEqual(records, again)
    self.assertEqual(table, again_table)

  def testViolationWritesFindings(self):
    def Violating(config, suite):
      return [{'trial': t.trial_id, 'status': trials.OK, 'violation': True,
               'target': config.target} for t in suite]
    with mock.patch.object(trials, 'RunSuite', side_effect=Violating):
      self.assertEqual(main.main(['phasestab', 'verify', 'lemma']),
                       run_config.EXIT_VIOLATION)
    self.assertLen(os.listdir(self.out + '_findings'), 8)

  def testMalformedConfig(self):
    path = os.path.join(self.tmp, 'bad.json')
    with open(path, 'w') as handle:
      handle.write('{"trials": ')
    with flagsaver.flagsaver(config=path):
      self.assertEqual(main.main(['phasestab', 'verify', 'theorem']),
                       run_config.EXIT_CONFIG)
    self.assertFalse(os.path.exists(self.out + '.jsonl'))

  @parameterized.parameters(
      ('tol', '1e-8'),
      ('tau_rel', 'small'),
      ('overlap', None),
      ('out', 5),
      ('allow_detected', 'yes'),
      ('seed', 1.5),
  )
  def testBadlyTypedConfig(self, key, value):
    path = os.path.join(self.tmp, 'typed.json')
    with open(path, 'w') as handle:
      json.dump({key: value}, handle)
    with flagsaver.flagsaver(config=path):
      if key == 'out':
        FLAGS['out'].using_default_value = True
      self.assertEqual(main.main(['phasestab', 'verify', 'lemma']),
                       run_config.EXIT_CONFIG)
    self.assertFalse(os.path.exists(self.out + '.jsonl'))

  def testOutputError(self):
    with flagsaver.flagsaver(out='/nonexistent/dir/run'):
      with mock.patch('os.makedirs', side_effect=OSError('read-only')):
        self.assertEqual(main.main(['phasestab', 'verify', 'appendix-b']),
                         run_config.EXIT_IO)

  def testGenAndCertify(self):
    self.assertEqual(main.main(['phasestab', 'gen']), run_config.EXIT_OK)
    f_path, g_path = self.out + '_f.json', self.out + '_g.json'
    self.assertIsNotNone(field.ReadField(f_path).declared_support)
    with flagsaver.flagsaver(out=os.path.join(self.tmp, 'cert')):
      self.assertEqual(main.main(['phasestab', 'certify', f_path, g_path]),
                       run_config.EXIT_OK)
    with open(os.path.join(self.tmp, 'cert.json')) as handle:
      certificate = json.load(handle)
    self.assertEqual(certificate['inputs'], [f_path, g_path])
    self.assertGreaterEqual(certificate['margin'], 0)

  def testCertifyEqualInputs(self):
    main.main(['phasestab', 'gen'])
    f_path = self.out + '_f.json'
    with flagsaver.flagsaver(out=os.path.join(self.tmp, 'cert')):
      main.main(['phasestab', 'certify', f_path, f_path])
    with open(os.path.join(self.tmp, 'cert.json')) as handle:
      self.assertEqual(json.load(handle)['bound'], 0.0)

  def testCertifyMissingInput(self):
    self.assertEqual(
        main.main(['phasestab', 'certify', '/nonexistent/f.json',
                   '/nonexistent/g.json']), run_config.EXIT_IO)

  def testScan(self):
    with flagsaver.flagsaver(axis=['p=1,5/4,3/2,2'], format='csv'):
      self.assertEqual(main.main(['phasestab', 'scan']), run_config.EXIT_OK)
    with open(self.out + '.csv') as handle:
      self.assertLen(handle.read().splitlines(), 5)

  def testScanEmptyAxis(self):
    with flagsaver.flagsaver(axis=['s=']):
      self.assertEqual(main.main(['phasestab', 'scan']),
                       run_config.EXIT_CONFIG)


if __name__ == '__main__':
  absltest.main()
