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

import math

import numpy as np
import pytest

import noiseswitch as ns


def test_ising_chain_labels():
    s = ns.ising_chain(2, 1.0, 0.0, 5.0)
    assert s.dimension() == 4
    assert s.control_labels == ["x1", "y1", "x2", "y2"]
    assert s.channel_labels == ["noise"]


def test_majorization():
    assert ns.majorizes([0.25] * 4, [1.0, 0.0, 0.0, 0.0])
    assert not ns.majorizes([1.0, 0.0], [0.5, 0.5])
    assert ns.majorization_floor([1.0, 0.0], [0.5, 0.5]) == pytest.approx(0.5)


def test_final_state_amplitude_damping():
    s = ns.ising_chain(1, 1.0, 0.0, 5.0)
    rho0 = ns.target_state("max_mixed", [2])
    rho = ns.final_state(s, np.zeros((1, 2)), np.full((1, 1), 5.0), 4.0, rho0)
    assert abs(rho[0, 0] - 1.0) < 1e-8
    assert abs(np.trace(rho) - 1.0) < 1e-12


def test_short_optimize():
    s = ns.ising_chain(1, 1.0, 0.0, 5.0)
    r = ns.optimize(s, ns.target_state("max_mixed", [2]), ns.target_state("ground", [2]), 2.0, 6,
                    restarts=1, max_iterations=50, seed=3, workers=1)
    assert r["best_error"] < 1e-2
    assert r["noise"].shape == (6, 1)


def test_protocol_bounds():
    assert ns.cooling_error_at(3, 1.0, 5.0, 6.0) == pytest.approx(0.011621, abs=1e-6)
    assert ns.bit_flip_erasure_error_at(3, 1.0, 2.5, 3.0) == pytest.approx(math.sqrt(7 / 8), abs=1e-12)


def test_catalog():
    entries = ns.list_experiments()
    names = {name for name, _, _ in entries}
    assert {"example1_cooling", "hlp_vs_greedy", "gmon_erase"} <= names
    assert all(":" in anchor for _, anchor, _ in entries)


def test_domain_error_maps_to_error():
    with pytest.raises(ns.Error):
        ns.reachability(ns.target_state("ground", [2]), ns.target_state("ground", [2]), [2], "no_such_noise")
