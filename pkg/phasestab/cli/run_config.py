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
"""Run configuration and exit codes for the phasestab command line."""

import json
import logging
import numbers

from phasestab.spectral import field
from phasestab.spectral import norms
from phasestab.stability import ambiguity
from phasestab.suite import gen

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_IO = 3

VERIFY = 'verify'
CERTIFY = 'certify'
SCAN = 'scan'
GEN = 'gen'
COMMANDS = (VERIFY, CERTIFY, SCAN, GEN)

LEMMA = 'lemma'
THEOREM = 'theorem'
APPENDIX_A = 'appendix-a'
APPENDIX_B = 'appendix-b'
EMBEDDING = 'embedding'
COMPARE = 'compare-steinerberger'
TARGETS = (LEMMA, THEOREM, APPENDIX_A, APPENDIX_B, EMBEDDING, COMPARE)
BOUND_KINDS = (THEOREM, APPENDIX_A)

SUITES = ('default', 'disjoint', 'nested', 'planted', 'gaussian')
SCAN_AXES = ('overlap_fraction', 's', 't', 'p', 'L')
FORMATS = ('jsonl', 'csv')

# Tolerances when none is configured.
DEFAULT_TOLERANCES = {
    LEMMA: 1e-10,
    THEOREM: 1e-8,
    APPENDIX_A: 1e-10,
    APPENDIX_B: 1e-10,
    EMBEDDING: 1e-8,
    COMPARE: 1e-8,
}


class CliError(Exception):
  """An error that ends the run with a specific exit code."""

  def __init__(self, message='', exit_code=EXIT_CONFIG):
    self.exit_code = exit_code
    super(CliError, self).__init__(message)


class ConfigError(CliError):

  def __init__(self, message=''):
    super(ConfigError, self).__init__(message, EXIT_CONFIG)


class OutputError(CliError):

  def __init__(self, message=''):
    super(OutputError, self).__init__(message, EXIT_IO)


class RunConfig(object):
  """Everything a run depends on; a run is reproducible from ToDict()."""

  _DEFAULTS = {
      'command': VERIFY,
      'target': THEOREM,
      'suite': 'default',
      'trials': 200,
      'seed': 0,
      'dims': [128],
      'spacing': 0.2,
      's': [0.0],
      't': [0.0],
      'p': [1.0],
      'group': 'id',
      'constant_one': False,
      'tol': None,
      'out': 'phasestab_report',
      'format': 'jsonl',
      'allow_detected': False,
      'tau_rel': 1e-12,
      'subgrid': False,
      'workers': 1,
      'axes': [],
      'inputs': [],
      'bound': THEOREM,
      'family': gen.BAND_LIMITED_RANDOM,
      'bins': 32,
      'overlap': 0.5,
  }

  def __init__(self, **kwargs):
    unknown = set(kwargs) - set(self._DEFAULTS)
    if unknown:
      raise ConfigError('Unknown configuration keys: %s' %
                        ', '.join(sorted(unknown)))
    for key, default in self._DEFAULTS.items():
      value = kwargs.get(key, default)
      if isinstance(value, list):
        value = list(value)
      setattr(self, key, value)

  @classmethod
  def FromDict(cls, data):
    if not isinstance(data, dict):
      raise ConfigError('A run configuration is a JSON object, got %r.' %
                        type(data).__name__)
    return cls(**data)

  @classmethod
  def FromFile(cls, path):
    """Loads a RunConfig JSON document.

    Raises:
      ConfigError: the file cannot be read or is not a valid configuration.
    """
    logging.debug('Loading run configuration from %s.', path)
    try:
      with open(path) as handle:
        data = json.load(handle)
    except (IOError, OSError) as e:
      raise ConfigError('Cannot read configuration %s: %s' % (path, e))
    except ValueError as e:
      raise ConfigError('Malformed configuration %s: %s' % (path, e))
    return cls.FromDict(data)

  def ToDict(self):
    return dict((key, getattr(self, key)) for key in sorted(self._DEFAULTS))

  def Grid(self):
    try:
      return field.GridSpec(self.dims, self.spacing)
    except field.FieldError as e:
      raise ConfigError(str(e))

  def Group(self):
    try:
      return ambiguity.GroupSpec.FromName(self.group)
    except ambiguity.AmbiguityError as e:
      raise ConfigError(str(e))

  def Tolerance(self):
    if self.tol is not None:
      return self.tol
    return DEFAULT_TOLERANCES.get(self.target, DEFAULT_TOLERANCES[THEOREM])

  def ParameterGrid(self):
    """Every StabilityParams of the s x t x p grid, in row-major order."""
    params = []
    try:
      for s in self.s:
        for t in self.t:
          for p in self.p:
            params.append(norms.StabilityParams(s, t, p))
    except norms.NormError as e:
      raise ConfigError(str(e))
    return params

  def _CheckList(self, key):
    values = getattr(self, key)
    if not isinstance(values, list) or not values:
      raise ConfigError('%s must be a nonempty list.' % key)
    try:
      setattr(self, key, [float(v) for v in values])
    except (TypeError, ValueError) as e:
      raise ConfigError('%s must hold numbers: %s' % (key, e))

  def _CheckNumber(self, key, optional=False):
    value = getattr(self, key)
    if value is None and optional:
      return
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
      raise ConfigError('%s must be a number, got %r.' % (key, value))
    setattr(self, key, float(value))

  def _CheckAxes(self):
    if not 1 <= len(self.axes) <= 2:
      raise ConfigError('A scan sweeps one or two axes, got %d.' %
                        len(self.axes))
    names = []
    for axis in self.axes:
      try:
        name, values = axis
      except (TypeError, ValueError):
        raise ConfigError('Malformed axis %r.' % (axis,))
      if name not in SCAN_AXES:
        raise ConfigError('Unknown axis %r; expected one of %s.' %
                          (name, ', '.join(SCAN_AXES)))
      if not isinstance(values, list) or not values:
        raise ConfigError('Axis %s needs a nonempty list of values.' % name)
      for value in values:
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
          raise ConfigError('Axis %s holds %r, not a number.' % (name, value))
      names.append(name)
    if len(set(names)) != len(names):
      raise ConfigError('Axis %s is swept twice.' % names[0])

  def Validate(self):
    """Checks the configuration before any output is written.

    Returns:
      self, for chaining.

    Raises:
      ConfigError: naming the first offending setting.
    """
    if self.command not in COMMANDS:
      raise ConfigError('Unknown command %r; expected one of %s.' %
                        (self.command, ', '.join(COMMANDS)))
    if self.command == VERIFY and self.target not in TARGETS:
      raise ConfigError('Unknown verification %r; expected one of %s.' %
                        (self.target, ', '.join(TARGETS)))
    if self.suite not in SUITES:
      raise ConfigError('Unknown suite %r; expected one of %s.' %
                        (self.suite, ', '.join(SUITES)))
    if self.format not in FORMATS:
      raise ConfigError('Unknown format %r.' % (self.format,))
    if self.bound not in BOUND_KINDS:
      raise ConfigError('Unknown bound %r; expected one of %s.' %
                        (self.bound, ', '.join(BOUND_KINDS)))
    if self.family not in gen.FAMILIES:
      raise ConfigError('Unknown family %r.' % (self.family,))
    for key in ('s', 't', 'p'):
      self._CheckList(key)
    for key in ('trials', 'workers', 'bins', 'seed'):
      value = getattr(self, key)
      if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError('%s must be an integer, got %r.' % (key, value))
      if key != 'seed' and value < 1:
        raise ConfigError('%s must be positive.' % key)
    for key in ('constant_one', 'allow_detected', 'subgrid'):
      if not isinstance(getattr(self, key), bool):
        raise ConfigError('%s must be true or false.' % key)
    self._CheckNumber('tol', optional=True)
    self._CheckNumber('tau_rel')
    self._CheckNumber('overlap')
    if self.tol is not None and not self.tol >= 0:
      raise ConfigError('tol must be nonnegative.')
    if not 0 <= self.tau_rel < 1:
      raise ConfigError('tau_rel must lie in [0, 1).')
    if not 0 <= self.overlap <= 1:
      raise ConfigError('overlap must lie in [0, 1].')
    if not isinstance(self.out, str) or not self.out:
      raise ConfigError('An output path is required, got %r.' % (self.out,))
    if not isinstance(self.group, str):
      raise ConfigError('group must be a name, got %r.' % (self.group,))
    if not isinstance(self.inputs, list):
      raise ConfigError('inputs must be a list of paths.')
    grid = self.Grid()
    if self.bins > grid.size:
      raise ConfigError('%d bins do not fit a grid of %d nodes.' %
                        (self.bins, grid.size))
    self.Group()
    self.ParameterGrid()
    if self.command == SCAN:
      self._CheckAxes()
    if self.command == CERTIFY and len(self.inputs) != 2:
      raise ConfigError('certify needs the paths of f and g.')
    return self

  def __repr__(self):
    return 'RunConfig(%s %s)' % (self.command, self.target)
