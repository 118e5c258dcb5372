# Copyright 2026 The noiseswitch Authors
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

from ._core import (
    ConfigError,
    ControlSystem,
    Error,
    NumericError,
    ReachabilityError,
    __version__,
    bit_flip_erasure_error_at,
    cooling_error_at,
    damping_rate,
    final_state,
    hlp_t_transforms,
    ion_trap_collective,
    ising_chain,
    list_experiments,
    majorization_floor,
    majorizes,
    optimize,
    random_density,
    reachability,
    run,
    spectrum,
    target_state,
)

__all__ = [
    "ConfigError",
    "ControlSystem",
    "Error",
    "NumericError",
    "ReachabilityError",
    "__version__",
    "bit_flip_erasure_error_at",
    "cooling_error_at",
    "damping_rate",
    "final_state",
    "hlp_t_transforms",
    "ion_trap_collective",
    "ising_chain",
    "list_experiments",
    "majorization_floor",
    "majorizes",
    "optimize",
    "random_density",
    "reachability",
    "run",
    "spectrum",
    "target_state",
]
