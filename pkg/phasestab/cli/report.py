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
"""Report files: JSON-lines trial streams, CSV summaries and findings."""

import json
import logging
import os

import numpy as np
import pandas
from phasestab.cli import run_config
from phasestab.spectral import field

REPORT_VERSION = 1
HEADER = 'header'
_GENSPEC_PREFIX = 'genspec.'


def _JsonDefault(value):
  if isinstance(value, np.generic):
    return value.item()
  if isinstance(value, np.ndarray):
    return value.tolist()
  raise TypeError('%r is not JSON serializable' % (value,))


def Dumps(document):
  return json.dumps(document, sort_keys=True, default=_JsonDefault)


def Summarize(records):
  """Counts of a record list for logging and the exit code."""
  violations = [r['trial'] for r in records if r.get('violation')]
  return {
      'records': len(records),
      'trials': len(set(r['trial'] for r in records)),
      'skipped': sum(1 for r in records if r.get('status') == 'skipped'),
      'violations': len(violations),
      'violating_trials': sorted(set(violations)),
  }


class ReportWriter(object):
  """The single writer of every file a run produces.

  Files are named from the output prefix: <out>.jsonl, <out>.csv, <out>.json
  and the directory <out>_findings/.
  """

  def __init__(self, out):
    self._out = out

  @property
  def jsonl_path(self):
    return self._out + '.jsonl'

  @property
  def csv_path(self):
    return self._out + '.csv'

  @property
  def json_path(self):
    return self._out + '.json'

  @property
  def findings_dir(self):
    return self._out + '_findings'

  def _Write(self, path, text):
    directory = os.path.dirname(path)
    try:
      if directory and not os.path.isdir(directory):
        os.makedirs(directory)
      with open(path, 'w') as handle:
        handle.write(text)
    except (IOError, OSError) as e:
      raise run_config.OutputError('Cannot write %s: %s' % (path, e))
    logging.info('Wrote %s.', path)
    return path

  def WriteTrials(self, config, records):
    """Writes the header record and one line per trial record."""
    header = {
        'kind': HEADER,
        'version': REPORT_VERSION,
        'config': config.ToDict(),
        'summary': Summarize(records),
    }
    lines = [Dumps(header)] + [Dumps(record) for record in records]
    return self._Write(self.jsonl_path, '\n'.join(lines) + '\n')

  def WriteSummary(self, records):
    """A flat CSV of every record without the embedded GenSpec."""
    frame = pandas.json_normalize(records)
    frame = frame[[c for c in frame.columns
                   if not c.startswith(_GENSPEC_PREFIX)]]
    return self._Write(self.csv_path, frame.to_csv(index=False))

  def WriteTable(self, rows, fmt):
    """Writes a scan table as CSV or JSON lines."""
    frame = pandas.DataFrame(rows)
    if fmt == 'csv':
      return self._Write(self.csv_path, frame.to_csv(index=False))
    return self._Write(self.jsonl_path,
                       frame.to_json(orient='records', lines=True) + '\n')

  def WriteCertificate(self, config, certificate):
    document = dict(certificate)
    document['config'] = config.ToDict()
    return self._Write(self.json_path, Dumps(document) + '\n')

  def WriteFindings(self, trials, records):
    """Dumps the pair of every violating trial as FLD-JSON.

    Returns:
      The paths written.
    """
    violating = set(r['trial'] for r in records if r.get('violation'))
    paths = []
    for trial in trials:
      if trial.trial_id not in violating:
        continue
      f, g = trial.Pair()
      for name, value in (('f', f), ('g', g)):
        path = os.path.join(self.findings_dir,
                            'trial_%06d_%s.json' % (trial.trial_id, name))
        paths.append(self._Write(
            path, Dumps(field.ToJson(value, trial.ToDict()))))
    return paths

  def WritePair(self, genspec, f, g):
    """Writes a generated pair to <out>_f.json and <out>_g.json."""
    paths = []
    for name, value in (('f', f), ('g', g)):
      path = '%s_%s.json' % (self._out, name)
      paths.append(self._Write(path, Dumps(field.ToJson(value,
                                                        genspec.ToDict()))))
    return paths
