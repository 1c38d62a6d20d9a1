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
"""Tests for phasestab.cli.report."""

import json
import os

from absl.testing import absltest
import mock
import numpy as np
import pandas
from phasestab.cli import report
from phasestab.cli import run_config
from phasestab.cli import trials
from phasestab.spectral import field


def _Records():
  return [
      {'trial': 0, 'status': 'ok', 'violation': False, 'margin': 1.5,
       'genspec': {'seed': 0, 'family': 'gaussian'},
       'params': {'s': 0.0, 'p': 1.0}},
      {'trial': 1, 'status': 'skipped', 'violation': False,
       'reason': 'finiteness', 'genspec': {'seed': 1, 'family': 'gaussian'}},
      {'trial': 2, 'status': 'ok', 'violation': True, 'margin': -3.0,
       'genspec': {'seed': 2, 'family': 'gaussian'},
       'params': {'s': 0.0, 'p': 1.0}},
  ]


class ReportTest(absltest.TestCase):

  def setUp(self):
    super(ReportTest, self).setUp()
    self.out = os.path.join(self.create_tempdir().full_path, 'run')
    self.writer = report.ReportWriter(self.out)
    self.config = run_config.RunConfig(trials=3, bins=16)

  def testDumpsNumpyScalars(self):
    text = report.Dumps({'a': np.float64(0.5), 'b': np.bool_(True),
                         'c': np.arange(2)})
    self.assertEqual(json.loads(text), {'a': 0.5, 'b': True, 'c': [0, 1]})
    self.assertRaises(TypeError, report.Dumps, {'a': object()})

  def testSummarize(self):
    summary = report.Summarize(_Records())
    self.assertEqual(summary['trials'], 3)
    self.assertEqual(summary['skipped'], 1)
    self.assertEqual(summary['violating_trials'], [2])

  def testWriteTrials(self):
    path = self.writer.WriteTrials(self.config, _Records())
    self.assertEqual(path, self.out + '.jsonl')
    with open(path) as handle:
      lines = [json.loads(line) for line in handle]
    self.assertLen(lines, 4)
    self.assertEqual(lines[0]['kind'], report.HEADER)
    self.assertEqual(lines[0]['config'], self.config.ToDict())
    self.assertEqual([line['trial'] for line in lines[1:]], [0, 1, 2])

  def testWriteSummary(self):
    frame = pandas.read_csv(self.writer.WriteSummary(_Records()))
    self.assertIn('params.s', frame.columns)
    self.assertIn('margin', frame.columns)
    self.assertFalse([c for c in frame.columns if c.startswith('genspec')])
    self.assertEqual(frame['violation'].tolist(), [False, False, True])

  def testWriteTable(self):
    rows = [{'p': 1.0, 'margin': 2.0}, {'p': 2.0, 'margin': 1.0}]
    frame = pandas.read_csv(self.writer.WriteTable(rows, 'csv'))
    self.assertEqual(frame['p'].tolist(), [1.0, 2.0])
    with open(self.writer.WriteTable(rows, 'jsonl')) as handle:
      self.assertEqual([json.loads(line)['margin'] for line in handle],
                       [2.0, 1.0])

  def testWriteFindings(self):
    config = run_config.RunConfig(trials=3, bins=16).Validate()
    suite = trials.BuildSuite(config)
    paths = self.writer.WriteFindings(suite, _Records())
    self.assertEqual([os.path.basename(p) for p in paths],
                     ['trial_000002_f.json', 'trial_000002_g.json'])
    f, _ = suite[2].Pair()
    restored = field.ReadField(paths[0])
    np.testing.assert_array_equal(restored.values, f.values)
    with open(paths[0]) as handle:
      self.assertEqual(json.load(handle)['genspec']['trial'], 2)

  def testWriteCertificate(self):
    path = self.writer.WriteCertificate(self.config, {'bound': 0.25})
    with open(path) as handle:
      document = json.load(handle)
    self.assertEqual(document['bound'], 0.25)
    self.assertEqual(document['config']['trials'], 3)

  @mock.patch.object(report, 'open', create=True, side_effect=IOError('full'))
  def testOutputError(self, _):
    self.assertRaises(run_config.OutputError, self.writer.WriteTrials,
                      self.config, _Records())


if __name__ == '__main__':
  absltest.main()
