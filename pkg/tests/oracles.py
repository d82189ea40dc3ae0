"""Frozen expected values, written out by hand independently of the package.

Amplitudes are indexed with party 0 slowest.  ``ket(dims, *digits)`` gives a
computational basis vector.
"""

import numpy as np

S3 = np.sqrt(3)


def ket(dims, *digits):
    v = np.zeros(int(np.prod(dims)), dtype=complex)
    v[np.ravel_multi_index(digits, dims)] = 1
    return v


def phase_fix(v, atol=1e-12):
    """Global phase removed: first entry within atol of max modulus made positive."""
    mags = np.abs(v)
    idx = int(np.flatnonzero(mags >= mags.max() - atol)[0])
    return v * (abs(v[idx]) / v[idx])


# Three-member UEB2 of two qubits, as coefficient matrices.
A1 = np.array([[-1, 0], [2, 2]]) / 3
A2 = np.array([[2, 0], [-1, 2]]) / 3
A3 = np.array([[2, 0], [2, -1]]) / 3
TWO_QUBIT_UEB2 = [A1, A2, A3]
TWO_QUBIT_COMPLEMENT = np.array([[0, 1], [0, 0]])

# Non-pattern three-member UEB2 of two qubits.
NONPATTERN = [
    2 / 5 * np.array([[0.5, 2], [1, 1]]),
    4 / np.sqrt(73) * np.array([[1, -1.25], [1, 1]]),
    21 / np.sqrt(3650) * np.array([[52 / 21, 8 / 21], [-1, -1]]),
]

# Four-member UEB2 of 2 (x) 3 with Schmidt coefficients 1/2 and sqrt(3)/2.
D23 = (2, 3)
UEB2_2X3 = [
    0.5 * ket(D23, 0, 0) + S3 / 2 * ket(D23, 1, 1),
    S3 / 2 * ket(D23, 0, 0) - 0.5 * ket(D23, 1, 1),
    0.5 * ket(D23, 0, 1) + S3 / 2 * ket(D23, 1, 0),
    S3 / 2 * ket(D23, 0, 1) - 0.5 * ket(D23, 1, 0),
]

# Its cyclic lift to 2 (x) 3 (x) 3, twelve members (member i, then j).  The
# j = 2 lift of the third member reads 1/2|012> + sqrt3/2|100>; the printed
# display has a typo in that ket.
D233 = (2, 3, 3)
UEB2_2X3X3 = []
for (a, b1), (c, b2) in [
    ((0.5, (0, 0)), (S3 / 2, (1, 1))),
    ((S3 / 2, (0, 0)), (-0.5, (1, 1))),
    ((0.5, (0, 1)), (S3 / 2, (1, 0))),
    ((S3 / 2, (0, 1)), (-0.5, (1, 0))),
]:
    for j in range(3):
        UEB2_2X3X3.append(a * ket(D233, *b1, j) + c * ket(D233, *b2, (j + 1) % 3))

# Maximally entangled basis of 2 (x) 3 and its lift.
PAULI = [
    np.eye(2),
    np.array([[0, 1], [1, 0]]),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]]),
]


def _umeb_branches(i):
    return [np.kron(PAULI[i] @ np.eye(2)[:, j], np.eye(3)[:, j]) for j in range(2)]


UMEB_2X3 = [sum(_umeb_branches(i)) / np.sqrt(2) for i in range(4)]
UMEB_2X3X3 = []
for i in range(4):
    b0, b1 = _umeb_branches(i)
    for j in range(3):
        UMEB_2X3X3.append(
            (np.kron(b0, np.eye(3)[:, j]) + np.kron(b1, np.eye(3)[:, (j + 1) % 3])) / np.sqrt(2)
        )

# TILES and Pyramid UPBs of 3 (x) 3.
_e = np.eye(3)
TILES = [
    np.kron(_e[0], (_e[0] - _e[1]) / np.sqrt(2)),
    np.kron(_e[2], (_e[1] - _e[2]) / np.sqrt(2)),
    np.kron((_e[0] - _e[1]) / np.sqrt(2), _e[2]),
    np.kron((_e[1] - _e[2]) / np.sqrt(2), _e[0]),
    np.kron(np.ones(3) / np.sqrt(3), np.ones(3) / np.sqrt(3)),
]
PYRAMID_H = 0.5 * np.sqrt(1 + np.sqrt(5))
PYRAMID_N = 2 / np.sqrt(5 + np.sqrt(5))
PYRAMID_V = [
    PYRAMID_N * np.array([np.cos(2 * np.pi * i / 5), np.sin(2 * np.pi * i / 5), PYRAMID_H])
    for i in range(5)
]
PYRAMID = [np.kron(PYRAMID_V[i], PYRAMID_V[(2 * i) % 5]) for i in range(5)]

# Negative control: six three-qubit states from a rank-2 HS basis of M_{2x4}.
HS_3QUBIT = []
for offset in (0, 2):
    for blk in TWO_QUBIT_UEB2:
        x = np.zeros((2, 4))
        x[:, offset : offset + 2] = blk
        HS_3QUBIT.append(x.reshape(-1).astype(complex))

# Tripartite SUEB2 instance (3, 5, 2, k=2): the complement is C^3 (x) |4> (x) C^2.
SUEBK_3522_COUNT = 24
