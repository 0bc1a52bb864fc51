#!/usr/bin/env python3
# Copyright 2026 The qmolae Authors
# SPDX-License-Identifier: Apache-2.0
"""Generate a deterministic corpus of small organic molecules.

Molecules are grown at random from C, N, O and F with at most nine heavy
atoms (the GDB-9 chemical space), sanitized with RDKit and written as
canonical SMILES, one per line. Used when the QM9 file itself is not
available; the output is committed under data/ so the C++ build does not
depend on RDKit.
"""
import argparse
import random

from rdkit import Chem, RDLogger

RDLogger.DisableLog("rdApp.*")

VALENCE = {"C": 4, "N": 3, "O": 2, "F": 1}
ELEMENTS = ["C", "N", "O", "F"]
WEIGHTS = [0.62, 0.16, 0.18, 0.04]
SIZES = list(range(1, 10))
SIZE_WEIGHTS = [0.2, 0.3, 0.5, 1, 2, 4, 8, 16, 40]


def grow(rng):
    n = rng.choices(SIZES, SIZE_WEIGHTS)[0]
    atoms = [rng.choices(ELEMENTS, WEIGHTS)[0]]
    free = [VALENCE[atoms[0]]]
    bonds = {}
    while len(atoms) < n:
        hosts = [i for i, f in enumerate(free) if f > 0]
        if not hosts:
            break
        host = rng.choice(hosts)
        elem = rng.choices(ELEMENTS, WEIGHTS)[0]
        max_order = min(free[host], VALENCE[elem], 3)
        order = rng.choices([1, 2, 3][:max_order], [0.8, 0.15, 0.05][:max_order])[0]
        atoms.append(elem)
        free.append(VALENCE[elem] - order)
        free[host] -= order
        bonds[(host, len(atoms) - 1)] = order
    for _ in range(rng.choice([0, 0, 1, 1, 2])):
        cands = [i for i, f in enumerate(free) if f > 0]
        if len(cands) < 2:
            break
        a, b = sorted(rng.sample(cands, 2))
        if (a, b) in bonds:
            continue
        bonds[(a, b)] = 1
        free[a] -= 1
        free[b] -= 1
    mol = Chem.RWMol()
    for elem in atoms:
        mol.AddAtom(Chem.Atom(elem))
    kinds = {1: Chem.BondType.SINGLE, 2: Chem.BondType.DOUBLE, 3: Chem.BondType.TRIPLE}
    for (a, b), order in bonds.items():
        mol.AddBond(a, b, kinds[order])
    try:
        Chem.SanitizeMol(mol)
    except Exception:
        return None
    ring_info = mol.GetRingInfo()
    if any(len(r) > 7 for r in ring_info.AtomRings()):
        return None
    return Chem.MolToSmiles(mol)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    seen = []
    index = set()
    while len(seen) < args.count:
        smi = grow(rng)
        if smi and smi not in index:
            index.add(smi)
            seen.append(smi)
    with open(args.out, "w") as fh:
        fh.write("smiles\n")
        for smi in seen:
            fh.write(smi + "\n")


if __name__ == "__main__":
    main()
