#!/usr/bin/env python3
# Copyright 2026 The rdmpt Authors
# SPDX-License-Identifier: Apache-2.0
"""Independent numpy evaluation of the four-qubit ansatz on the H2 fixtures.

Prints statevector amplitudes and energies used as golden values by the unit
tests. Operators are built as dense matrices; integrals are read with PySCF.
"""
import os
import sys

import numpy as np
from pyscf.tools import fcidump
from scipy.linalg import expm

DATA = os.path.join(os.path.dirname(__file__), "..", "..", "data", "fixtures")
N = 4

I2 = np.eye(2)
Z = np.diag([1.0, -1.0])
LOWER = np.array([[0.0, 1.0], [0.0, 0.0]])  # |1> -> |0> on one qubit


def kron_list(ops):
    # Qubit 0 is the least significant bit, so it is the rightmost factor.
    out = np.array([[1.0]])
    for op in reversed(ops):
        out = np.kron(out, op)
    return out


def annihilator(p):
    return kron_list([Z if k < p else LOWER if k == p else I2 for k in range(N)])


A = [annihilator(p) for p in range(N)]
AD = [a.T.conj() for a in A]


def hamiltonian(path):
    d = fcidump.read(path)
    n = d["NORB"]
    h1 = d["H1"]
    eri = d["H2"]
    from pyscf import ao2mo
    eri = ao2mo.restore(1, eri, n)
    nso = 2 * n
    h = np.zeros((nso, nso))
    g = np.zeros((nso,) * 4)
    for p in range(nso):
        for q in range(nso):
            if p % 2 == q % 2:
                h[p, q] = h1[p // 2, q // 2]
    for p in range(nso):
        for q in range(nso):
            for r in range(nso):
                for s in range(nso):
                    v = 0.0
                    if p % 2 == r % 2 and q % 2 == s % 2:
                        v += eri[p // 2, r // 2, q // 2, s // 2]
                    if p % 2 == s % 2 and q % 2 == r % 2:
                        v -= eri[p // 2, s // 2, q // 2, r // 2]
                    g[p, q, r, s] = v
    H = d["ECORE"] * np.eye(2 ** N)
    for p in range(nso):
        for q in range(nso):
            H += h[p, q] * AD[p] @ A[q]
    for p in range(nso):
        for q in range(nso):
            for r in range(nso):
                for s in range(nso):
                    if g[p, q, r, s] != 0.0:
                        H += 0.25 * g[p, q, r, s] * AD[p] @ AD[q] @ A[s] @ A[r]
    return H


def ansatz(t0, t1, t2):
    psi = np.zeros(2 ** N)
    psi[0b0011] = np.cos(t0 / 2)
    psi[0b1100] = np.sin(t0 / 2)
    for (a, b), t in (((0, 2), t1), ((1, 3), t2)):
        gen = AD[b] @ A[a] - AD[a] @ A[b]
        psi = expm(0.5 * t * gen) @ psi
    return psi


def main():
    points = [(0.0, 0.0, 0.0), (0.3, -0.2, 0.5), (-1.1, 0.7, 0.4), (2.0, 1.5, -2.5)]
    for geom in ("0.7", "2.0"):
        H = hamiltonian(os.path.join(DATA, f"h2_{geom}.fcidump"))
        print(f"h2 {geom}: exact ground (full 16-dim, any N) {np.linalg.eigvalsh(H)[0]:.15f}")
        for t in points:
            psi = ansatz(*t)
            print(f"  theta={t} energy={psi @ H @ psi:.15f}")
    for t in points[1:]:
        psi = ansatz(*t)
        nz = {i: psi[i] for i in range(2 ** N) if abs(psi[i]) > 1e-14}
        print(f"amplitudes theta={t}: " + ", ".join(f"{i}:{v:.15f}" for i, v in nz.items()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
