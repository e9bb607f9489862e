# Copyright 2026 The thermoq Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the thermoq kernels."""

import json

import numpy as np

from ._thermoq import *  # noqa: F401,F403
from ._thermoq import __version__, run_config as _run_config


def vacuum(n_max):
    """Probe density matrix |0><0| on n_max + 1 Fock levels."""
    rho = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def plus_state():
    """Qubit density matrix |+x><+x|."""
    return np.full((2, 2), 0.5, dtype=complex)


def run(config):
    """Run a config given as a dict or JSON text; the report is decoded."""
    text = config if isinstance(config, str) else json.dumps(config)
    result = _run_config(text)
    result["report"] = json.loads(result["report"])
    return result
