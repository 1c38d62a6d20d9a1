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
"""Setup installer for phasestab."""

from setuptools import setup

setup(
    name='phasestab',
    version='0.1.0',
    packages=[
        'phasestab', 'phasestab.cli', 'phasestab.spectral',
        'phasestab.stability', 'phasestab.suite'
    ],
    install_requires=['absl-py', 'numpy', 'pandas', 'scipy'],
    tests_require=['mock'],
    entry_points={
        'console_scripts': ['phasestab=phasestab.cli.main:run'],
    },
    license='Apache License',
)
