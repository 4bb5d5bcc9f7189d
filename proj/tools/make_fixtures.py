#!/usr/bin/env python3
# Copyright 2026 The PET Authors
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
"""Regenerates the backend fixtures under fixtures/backends."""

import json
import math
import pathlib

DT = 2.0 / 9.0
GRAN = 16
SIGMA = 64.0
N_SIGMA = 2.0
SQ = 160

# (name, cnot ns, (T1a, T1b) us, (T2a, T2b) us)
DEVICE_ROWS = [
    ("mumbai_q1_q2", 739, (102, 157), (34, 228)),
    ("mumbai_q16_q19", 754, (84, 141), (105, 132)),
    ("paris_q1_q2", 597, (66, 92), (82, 128)),
    ("paris_q13_q14", 434, (100, 23), (27, 33)),
    ("paris_q18_q15", 448, (86, 74), (103, 50)),
    ("paris_q18_q17", 725, (41, 71), (94, 157)),
    ("dublin_q1_q2", 540, (110, 103), (174, 89)),
    ("dublin_q3_q2", 370, (78, 96), (100, 83)),
    ("montreal_q14_q16", 356, (97, 87), (97, 52)),
    ("guadalupe_q7_q10", 299, (99, 68), (153, 90)),
]

MUMBAI_EDGES = [
    (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8), (6, 7), (7, 10), (8, 9),
    (8, 11), (10, 12), (11, 14), (12, 13), (12, 15), (13, 14), (14, 16), (15, 18),
    (16, 19), (17, 18), (18, 21), (19, 20), (19, 22), (21, 23), (22, 25), (23, 24),
    (24, 25), (25, 26),
]


def ceil_gran(x):
    return int(math.ceil(x / GRAN - 1e-9)) * GRAN


def floor_gran(x):
    return int(math.floor(x / GRAN + 1e-9)) * GRAN


def confusion(q):
    p10 = 0.015 + 0.005 * (q % 3)
    p01 = 0.03 + 0.01 * (q % 3)
    return [[1 - p10, p01], [p10, 1 - p01]]


def qubit(q, t1, t2):
    # T2 <= 2 T1 is required by the model
    return {"t1_us": t1, "t2_us": min(t2, 2 * t1), "sq_duration": SQ,
            "readout_confusion": confusion(q)}


def edge_pair(a, b, cnot_ns, amp):
    cnot = ceil_gran(cnot_ns / DT)
    cr_dur = floor_gran((cnot - 3 * SQ) / 2)
    width = cr_dur - 2 * N_SIGMA * SIGMA
    assert width >= 0, (a, b, cnot_ns)
    out = []
    for c, t in ((a, b), (b, a)):
        out.append({
            "control": c, "target": t, "cnot_duration_ns": cnot_ns,
            "cr": {"amp": [amp, 0.0], "sigma": SIGMA, "width": width, "n_sigma": N_SIGMA},
            "rotary": {"amp": [0.05, 0.0], "sigma": SIGMA, "width": width,
                       "n_sigma": N_SIGMA},
        })
    return out


def backend(name, qubits, edges):
    return {"name": name, "dt_ns": DT, "granularity": GRAN, "qubits": qubits, "edges": edges}


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "backends"
    root.mkdir(parents=True, exist_ok=True)
    out = {}
    for name, cnot, t1, t2 in DEVICE_ROWS:
        qubits = [qubit(0, t1[0], t2[0]), qubit(1, t1[1], t2[1])]
        out[name] = backend(name, qubits, edge_pair(0, 1, cnot, 0.3))

    table = {1: (102, 34), 2: (157, 228), 16: (84, 105), 19: (141, 132)}
    qubits = []
    for q in range(27):
        t1, t2 = table.get(q, (70 + (q * 37) % 60, 50 + (q * 53) % 110))
        qubits.append(qubit(q, t1, t2))
    edges = []
    for a, b in MUMBAI_EDGES:
        cnot = {(1, 2): 739, (16, 19): 754}.get((a, b), 320 + (a * 31 + b * 17) % 420)
        edges += edge_pair(a, b, cnot, 0.25 + 0.01 * ((a + b) % 7))
    out["mumbai27"] = backend("mumbai27", qubits, edges)

    qubits = [qubit(q, 90 + (q * 23) % 50, 70 + (q * 41) % 80) for q in range(10)]
    edges = []
    for a in range(9):
        edges += edge_pair(a, a + 1, 360 + (a * 53) % 200, 0.3)
    out["line10"] = backend("line10", qubits, edges)

    for name, data in out.items():
        (root / f"{name}.json").write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    main()
