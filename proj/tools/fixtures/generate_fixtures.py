#!/usr/bin/env python3
# Copyright 2026 The rdmpt Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the FCIDUMP fixtures and manifest.json with PySCF.

Run from the repository root:  python3 tools/fixtures/generate_fixtures.py
"""
import json
import os
import sys

import numpy as np
import pyscf
from pyscf import ao2mo, cc, fci, gto, mcscf, mp, scf
from pyscf.tools import fcidump

OUT = os.path.join(os.path.dirname(__file__), "..", "..", "data", "fixtures")

# (file stem, fixture id, molecule, atoms, bond length in angstrom)
SYSTEMS = [
    ("h2_0.7", "h2", "H2", ("H", "H"), 0.7),
    ("h2_2.0", "h2", "H2", ("H", "H"), 2.0),
    ("h2_3.0", "h2", "H2", ("H", "H"), 3.0),
    ("h2_4.0", "h2", "H2", ("H", "H"), 4.0),
    ("lih_1.6", "lih", "LiH", ("Li", "H"), 1.6),
    ("nah_1.9", "nah", "NaH", ("Na", "H"), 1.9),
    ("kh_2.3", "kh", "KH", ("K", "H"), 2.3),
]

FCI_FULL_DIM_CAP = 2_000_000


def run(sid, fixture, name, atoms, r):
    mol = gto.M(atom=f"{atoms[0]} 0 0 0; {atoms[1]} 0 0 {r}", basis="sto-3g",
                unit="Angstrom", verbose=0, symmetry=False)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    assert mf.converged, sid
    norb = mf.mo_coeff.shape[1]
    nocc = mol.nelectron // 2
    h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
    eri = ao2mo.restore(1, ao2mo.full(mol, mf.mo_coeff), norb)
    path = os.path.join(OUT, f"{sid}.fcidump")
    fcidump.from_integrals(path, h1, eri, norb, mol.nelectron, mol.energy_nuc(),
                           ms=0, tol=1e-14, float_format=" %.16e")

    # HOMO/LUMO active space, everything else frozen.
    homo, lumo = nocc - 1, nocc
    cas = mcscf.CASCI(mf, 2, 2)
    cas.kernel()
    e_fci_frozen = float(cas.e_tot)

    from math import comb
    dim = comb(norb, nocc) ** 2
    if dim <= FCI_FULL_DIM_CAP:
        e_fci_full = float(fci.FCI(mf).kernel()[0])
        full_method = "FCI"
    else:
        mycc = cc.CCSD(mf).run()
        e_fci_full = float(mycc.e_tot + mycc.ccsd_t())
        full_method = "CCSD(T)"
    e_mp2 = float(mp.MP2(mf).kernel()[0])
    return {
        "fixture": fixture,
        "file": f"{sid}.fcidump",
        "molecule": name,
        "geometry_angstrom": r,
        "basis": "sto-3g",
        "n_spatial": norb,
        "n_electrons": mol.nelectron,
        "package": f"pyscf {pyscf.__version__}",
        "orbitals": "canonical RHF, ascending orbital energy",
        "active_spatial": [homo, lumo],
        "frozen_occupied_spatial": list(range(0, homo)),
        "frozen_virtual_spatial": list(range(lumo + 1, norb)),
        "e_hf": float(mf.e_tot),
        "e_mp2_corr_full": e_mp2,
        "e_exact_frozen": e_fci_frozen,
        "e_exact_full": e_fci_full,
        "e_exact_full_method": full_method,
    }


def main():
    os.makedirs(OUT, exist_ok=True)
    entries = []
    for s in SYSTEMS:
        e = run(*s)
        print(json.dumps(e), file=sys.stderr)
        entries.append(e)
    with open(os.path.join(OUT, "manifest.json"), "w") as f:
        json.dump({"fixtures": entries}, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
