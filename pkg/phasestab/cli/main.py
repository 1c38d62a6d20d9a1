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
"""phasestab command line.

  phasestab verify {lemma|theorem|appendix-a|appendix-b|embedding|
                    compare-steinerberger} [flags]
  phasestab certify F.json G.json [flags]
  phasestab scan --axis NAME=v1,v2,... [--axis ...] [flags]
  phasestab gen [flags]

Exit codes: 0 all checks passed, 1 violation findings, 2 configuration
error, 3 I/O error.
"""

import fractions
import sys

from absl import app
from absl import flags
from absl import logging
from phasestab.cli import report
from phasestab.cli import run_config
from phasestab.cli import trials
from phasestab.spectral import field
from phasestab.stability import ambiguity
from phasestab.suite import gen

FLAGS = flags.FLAGS

flags.DEFINE_string('config', None, 'RunConfig JSON; flags given explicitly '
                    'override its entries.')
flags.DEFINE_list('s', ['0'], 'Sobolev orders s.')
flags.DEFINE_list('t', ['0'], 'Bessel potential orders t.')
flags.DEFINE_list('p', ['1'], 'Exponents p in [1, 2]; fractions like 4/3 '
                  'are accepted.')
flags.DEFINE_enum('group', 'id', list(ambiguity.GROUP_NAMES),
                  'Ambiguity subgroup G.')
flags.DEFINE_boolean('constant_one', False, 'Replace c_{n,p} by 1.')
flags.DEFINE_float('tol', None, 'Relative violation tolerance; defaults per '
                   'verification.')
flags.DEFINE_integer('seed', 0, 'Base seed; trial i uses seed + i.')
flags.DEFINE_integer('grid', 128, 'Nodes N per axis.')
flags.DEFINE_float('spacing', 0.2, 'Grid spacing h.')
flags.DEFINE_integer('dim', 1, 'Dimension n.')
flags.DEFINE_string('out', 'phasestab_report', 'Output path prefix.')
flags.DEFINE_enum('format', 'jsonl', list(run_config.FORMATS),
                  'Scan table format.')
flags.DEFINE_boolean('allow_detected', False, 'Threshold spectra that carry '
                     'no declared support.')
flags.DEFINE_float('tau_rel', 1e-12, 'Relative threshold for detected '
                   'supports.')
flags.DEFINE_boolean('subgrid', False, 'Refine translations below one cell.')
flags.DEFINE_integer('trials', 200, 'Trials per suite.')
flags.DEFINE_integer('workers', 1, 'Worker threads.')
flags.DEFINE_enum('suite', 'default', list(run_config.SUITES), 'Trial suite.')
flags.DEFINE_multi_string('axis', [], 'Scan axis NAME=v1,v2,... with NAME in '
                          'overlap_fraction, s, t, p, L.')
flags.DEFINE_enum('family', gen.BAND_LIMITED_RANDOM, list(gen.FAMILIES),
                  'Generator family for gen.')
flags.DEFINE_integer('bins', 32, 'Low-frequency bins in the union of the '
                     'supports.')
flags.DEFINE_float('overlap', 0.5, 'Overlap fraction for generated pairs.')
flags.DEFINE_enum('bound', run_config.THEOREM, list(run_config.BOUND_KINDS),
                  'Estimate used by certify.')


def _Number(text, name):
  try:
    return float(fractions.Fraction(str(text).strip()))
  except (ValueError, ZeroDivisionError) as e:
    raise run_config.ConfigError('Bad value %r for %s: %s' % (text, name, e))


def _Numbers(values, name):
  return [_Number(value, name) for value in values]


def _Axis(spec):
  name, sep, values = spec.partition('=')
  if not sep:
    raise run_config.ConfigError('Axis %r is not NAME=v1,v2,...' % spec)
  values = [v for v in values.split(',') if v.strip()]
  return [name.strip(), _Numbers(values, name)]


# Flag name -> (RunConfig key, converter).
_FLAG_KEYS = {
    's': ('s', lambda v: _Numbers(v, 's')),
    't': ('t', lambda v: _Numbers(v, 't')),
    'p': ('p', lambda v: _Numbers(v, 'p')),
    'group': ('group', None),
    'constant_one': ('constant_one', None),
    'tol': ('tol', None),
    'seed': ('seed', None),
    'spacing': ('spacing', None),
    'out': ('out', None),
    'format': ('format', None),
    'allow_detected': ('allow_detected', None),
    'tau_rel': ('tau_rel', None),
    'subgrid': ('subgrid', None),
    'trials': ('trials', None),
    'workers': ('workers', None),
    'suite': ('suite', None),
    'axis': ('axes', lambda v: [_Axis(spec) for spec in v]),
    'family': ('family', None),
    'bins': ('bins', None),
    'overlap': ('overlap', None),
    'bound': ('bound', None),
}


def _Given(name):
  return not FLAGS[name].using_default_value


def BuildConfig(argv):
  """Combines positional arguments, --config and flags into a RunConfig.

  Args:
    argv: the positional arguments left after flag parsing, program first.

  Returns:
    A validated RunConfig.

  Raises:
    run_config.ConfigError: missing command or invalid settings.
  """
  positional = list(argv[1:])
  if not positional:
    raise run_config.ConfigError('Missing command; expected one of %s.' %
                                 ', '.join(run_config.COMMANDS))
  settings = {}
  if FLAGS.config:
    settings = run_config.RunConfig.FromFile(FLAGS.config).ToDict()
  command = positional.pop(0)
  settings['command'] = command
  if command == run_config.VERIFY:
    if not positional:
      raise run_config.ConfigError('verify needs one of %s.' %
                                   ', '.join(run_config.TARGETS))
    settings['target'] = positional.pop(0)
  elif command == run_config.CERTIFY:
    settings['inputs'] = positional[:2]
    positional = positional[2:]
  if positional:
    raise run_config.ConfigError('Unexpected arguments: %s' %
                                 ' '.join(positional))
  for name, (key, convert) in _FLAG_KEYS.items():
    if _Given(name) or not FLAGS.config:
      value = FLAGS[name].value
      settings[key] = convert(value) if convert else value
  if _Given('grid') or _Given('dim') or not FLAGS.config:
    settings['dims'] = [FLAGS.grid] * FLAGS.dim
  return run_config.RunConfig.FromDict(settings).Validate()


def Verify(config):
  suite = trials.BuildSuite(config)
  records = trials.RunSuite(config, suite)
  writer = report.ReportWriter(config.out)
  writer.WriteTrials(config, records)
  writer.WriteSummary(records)
  writer.WriteFindings(suite, records)
  summary = report.Summarize(records)
  logging.info('%s: %d records, %d skipped, %d violations.', config.target,
               summary['records'], summary['skipped'], summary['violations'])
  if summary['violations']:
    return run_config.EXIT_VIOLATION
  return run_config.EXIT_OK


def _ReadInput(path):
  try:
    return field.ReadField(path)
  except (IOError, OSError) as e:
    raise run_config.OutputError('Cannot read %s: %s' % (path, e))
  except field.FieldError as e:
    raise run_config.ConfigError(str(e))


def Certify(config):
  f, g = [_ReadInput(path) for path in config.inputs]
  if f.grid != g.grid:
    raise run_config.ConfigError('Grid mismatch: %r vs %r.' % (f.grid, g.grid))
  certificate, violation = trials.Certify(config, f, g)
  report.ReportWriter(config.out).WriteCertificate(config, certificate)
  logging.info('Certified d <= %g (margin %g).', certificate['bound'],
               certificate['margin'])
  if violation:
    return run_config.EXIT_VIOLATION
  return run_config.EXIT_OK


def Scan(config):
  rows = trials.RunScan(config)
  report.ReportWriter(config.out).WriteTable(rows, config.format)
  violations = sum(1 for row in rows if row['violation'])
  logging.info('Scanned %d points, %d violations.', len(rows), violations)
  if violations:
    return run_config.EXIT_VIOLATION
  return run_config.EXIT_OK


def Gen(config):
  grid = config.Grid()
  if config.family == gen.FROM_SPECTRUM:
    raise run_config.ConfigError('from_spectrum pairs are built from data; '
                                 'use gen.FromSpectrum.')
  if config.family == gen.BAND_LIMITED_RANDOM:
    params = {
        'bins': config.bins,
        'union_bins': config.bins,
        'overlap': config.overlap,
    }
  else:
    params = trials.GaussianParams(grid, 0)
  try:
    genspec = gen.GenSpec(config.seed, grid, config.family, params)
    f, g = genspec.GeneratePair()
  except gen.GenError as e:
    raise run_config.ConfigError(str(e))
  report.ReportWriter(config.out).WritePair(genspec, f, g)
  return run_config.EXIT_OK


_COMMANDS = {
    run_config.VERIFY: Verify,
    run_config.CERTIFY: Certify,
    run_config.SCAN: Scan,
    run_config.GEN: Gen,
}


def main(argv):
  try:
    config = BuildConfig(argv)
    logging.info('Running %r.', config)
    return _COMMANDS[config.command](config)
  except run_config.CliError as e:
    logging.error('%s', e)
    return e.exit_code


def _NormalizeFlags(argv):
  """Rewrites --constant-one style spellings to registered flag names."""
  normalized = [argv[0]]
  for arg in argv[1:]:
    if arg.startswith('--') and '-' in arg[2:].partition('=')[0]:
      name, sep, value = arg[2:].partition('=')
      name = name.replace('-', '_')
      if name.startswith('no_') and name[3:] in FLAGS:
        name = 'no' + name[3:]
      if name in FLAGS or (name.startswith('no') and name[2:] in FLAGS):
        arg = '--' + name + sep + value
    normalized.append(arg)
  return normalized


def _ParseFlags(argv):
  try:
    return FLAGS(_NormalizeFlags(argv))
  except flags.Error as e:
    sys.stderr.write('FATAL Flags parsing error: %s\n' % e)
    sys.exit(run_config.EXIT_CONFIG)


def run():
  app.run(main, flags_parser=_ParseFlags)


if __name__ == '__main__':
  run()
