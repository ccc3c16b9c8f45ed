#!/usr/bin/env python3
"""Independent oracle for the fixture-replay metrics.

Recomputes mutual information for the superdense-coding output tables and
QBER / normalized key length for the BB84 error tables using numpy only.
The printed values are frozen into tests/fixture_oracle.rs.
"""
import numpy as np

F_EC = 1.15

SDC = {
    "table1": ([0, 2, 4, 6, 8, 10, 12, 14], [
        [[0.940, 0.022, 0.031, 0.008], [0.117, 0.815, 0.029, 0.039], [0.121, 0.015, 0.840, 0.024], [0.031, 0.114, 0.115, 0.739]],
        [[0.684, 0.078, 0.172, 0.067], [0.154, 0.551, 0.094, 0.201], [0.250, 0.063, 0.617, 0.069], [0.113, 0.265, 0.136, 0.486]],
        [[0.595, 0.127, 0.164, 0.114], [0.190, 0.454, 0.143, 0.213], [0.263, 0.117, 0.511, 0.109], [0.177, 0.256, 0.173, 0.393]],
        [[0.510, 0.145, 0.219, 0.126], [0.240, 0.430, 0.166, 0.164], [0.324, 0.151, 0.396, 0.129], [0.194, 0.227, 0.193, 0.386]],
        [[0.406, 0.172, 0.276, 0.147], [0.253, 0.370, 0.184, 0.193], [0.326, 0.166, 0.366, 0.142], [0.212, 0.249, 0.205, 0.334]],
        [[0.374, 0.188, 0.287, 0.151], [0.257, 0.314, 0.209, 0.220], [0.353, 0.176, 0.313, 0.157], [0.250, 0.264, 0.218, 0.268]],
        [[0.357, 0.197, 0.282, 0.163], [0.264, 0.293, 0.212, 0.231], [0.360, 0.179, 0.297, 0.164], [0.257, 0.268, 0.225, 0.250]],
        [[0.357, 0.197, 0.283, 0.164], [0.264, 0.293, 0.212, 0.231], [0.360, 0.180, 0.297, 0.164], [0.257, 0.268, 0.225, 0.250]],
    ]),
    "table2": ([0.0, 1.3, 2.5, 3.8, 5.1, 6.0], [
        [[0.950, 0.018, 0.024, 0.008], [0.083, 0.885, 0.010, 0.022], [0.083, 0.007, 0.893, 0.016], [0.014, 0.070, 0.083, 0.833]],
        [[0.889, 0.029, 0.061, 0.020], [0.093, 0.824, 0.024, 0.059], [0.128, 0.021, 0.822, 0.028], [0.032, 0.121, 0.091, 0.756]],
        [[0.792, 0.044, 0.137, 0.028], [0.094, 0.731, 0.044, 0.131], [0.195, 0.037, 0.729, 0.040], [0.054, 0.209, 0.089, 0.649]],
        [[0.679, 0.056, 0.226, 0.039], [0.102, 0.619, 0.059, 0.220], [0.286, 0.049, 0.616, 0.050], [0.076, 0.319, 0.092, 0.514]],
        [[0.565, 0.061, 0.324, 0.050], [0.101, 0.510, 0.074, 0.315], [0.386, 0.053, 0.501, 0.061], [0.089, 0.407, 0.094, 0.410]],
        [[0.496, 0.065, 0.386, 0.054], [0.105, 0.447, 0.078, 0.370], [0.459, 0.063, 0.417, 0.061], [0.094, 0.456, 0.093, 0.357]],
    ]),
    "table3": ([0.0, 0.9, 1.8, 2.8, 3.7, 4.6], [
        [[0.945, 0.011, 0.043, 0.001], [0.144, 0.775, 0.030, 0.051], [0.156, 0.026, 0.765, 0.053], [0.044, 0.135, 0.128, 0.694]],
        [[0.794, 0.090, 0.074, 0.042], [0.156, 0.728, 0.054, 0.061], [0.163, 0.057, 0.706, 0.074], [0.079, 0.147, 0.135, 0.638]],
        [[0.699, 0.117, 0.118, 0.066], [0.170, 0.641, 0.082, 0.107], [0.204, 0.084, 0.617, 0.095], [0.109, 0.183, 0.151, 0.556]],
        [[0.620, 0.118, 0.179, 0.082], [0.170, 0.574, 0.098, 0.159], [0.269, 0.101, 0.528, 0.102], [0.131, 0.234, 0.158, 0.477]],
        [[0.531, 0.129, 0.244, 0.096], [0.181, 0.485, 0.120, 0.215], [0.339, 0.112, 0.438, 0.110], [0.149, 0.287, 0.156, 0.408]],
        [[0.461, 0.133, 0.307, 0.099], [0.180, 0.421, 0.128, 0.272], [0.399, 0.122, 0.367, 0.112], [0.169, 0.348, 0.150, 0.333]],
    ]),
    "table4": ([0.0, 0.9, 1.8, 2.8, 3.7, 4.6], [
        [[0.907, 0.039, 0.040, 0.013], [0.139, 0.801, 0.023, 0.036], [0.156, 0.027, 0.771, 0.046], [0.033, 0.119, 0.117, 0.731]],
        [[0.862, 0.054, 0.056, 0.028], [0.150, 0.777, 0.033, 0.040], [0.147, 0.055, 0.722, 0.075], [0.051, 0.112, 0.130, 0.707]],
        [[0.817, 0.069, 0.076, 0.039], [0.163, 0.737, 0.050, 0.051], [0.159, 0.085, 0.657, 0.099], [0.068, 0.125, 0.137, 0.670]],
        [[0.760, 0.081, 0.102, 0.057], [0.169, 0.710, 0.063, 0.058], [0.181, 0.108, 0.602, 0.109], [0.084, 0.129, 0.144, 0.643]],
        [[0.709, 0.092, 0.131, 0.068], [0.180, 0.674, 0.078, 0.068], [0.205, 0.119, 0.564, 0.111], [0.093, 0.140, 0.159, 0.608]],
        [[0.656, 0.107, 0.160, 0.076], [0.181, 0.647, 0.088, 0.084], [0.215, 0.125, 0.541, 0.119], [0.110, 0.133, 0.156, 0.601]],
    ]),
}

# rows: (+,0), (x,0), (+,1), (x,1); columns: sweep points
BB84 = {
    "table5": ([0.0, 1.2, 2.4, 3.6, 4.8, 6.0], [
        [0.008, 0.011, 0.009, 0.010, 0.008, 0.005],
        [0.011, 0.027, 0.052, 0.081, 0.098, 0.120],
        [0.051, 0.076, 0.095, 0.119, 0.177, 0.251],
        [0.050, 0.071, 0.091, 0.122, 0.176, 0.260],
    ]),
    "table6": ([0, 2, 4, 6], [
        [0.009, 0.036, 0.062, 0.078],
        [0.009, 0.043, 0.077, 0.084],
        [0.061, 0.092, 0.125, 0.184],
        [0.053, 0.089, 0.133, 0.175],
    ]),
    "table7": ([0, 2, 4, 6], [
        [0.003, 0.028, 0.048, 0.076],
        [0.024, 0.053, 0.081, 0.111],
        [0.002, 0.029, 0.059, 0.094],
        [0.021, 0.050, 0.089, 0.139],
    ]),
}


def h2(p):
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def mutual_information(block):
    m = np.array(block, dtype=float)
    m = m / m.sum(axis=1, keepdims=True)
    joint = 0.25 * m
    hb = h2(joint.sum(axis=0))
    hba = float(np.mean([h2(r) for r in m]))
    return hb - hba


def binh(q):
    if q <= 0 or q >= 1:
        return 0.0
    return -q * np.log2(q) - (1 - q) * np.log2(1 - q)


for name, (axis, blocks) in SDC.items():
    print(name)
    for x, b in zip(axis, blocks):
        print(f"  {x!r}: {mutual_information(b)!r}")

for name, (axis, rows) in BB84.items():
    print(name)
    r = np.array(rows)
    for i, x in enumerate(axis):
        q = float(np.mean(r[:, i]))
        print(f"  {x!r}: q={q!r} lsec_per_n={1 - (1 + F_EC) * binh(q)!r}")

print("q* root:")
lo, hi = 1e-9, 0.5
for _ in range(200):
    mid = (lo + hi) / 2
    if 1 - (1 + F_EC) * binh(mid) > 0:
        lo = mid
    else:
        hi = mid
print(repr(lo))
print("h(0.11)", repr(binh(0.11)))
print("lsec 8192 q=0.03", repr(8192 * (1 - 2.15 * binh(0.03))))
