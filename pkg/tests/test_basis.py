import math

import numpy as np
import pytest

from vqechem.basis import (ANGSTROM_TO_BOHR, Atom, MoleculeError,
                           MoleculeSpec, build_basis, expand_shells,
                           n_spatial_orbitals, nuclear_repulsion,
                           parse_basis_override, parse_molecule)
from vqechem.geometry import MOLECULES, build_geometry
from vqechem.integrals import overlap

import oracles


def test_parse_h2():
    mol = parse_molecule("charge 0\nH 0 0 0\nH 0 0 0.735")
    assert mol.n_electrons == 2
    d = np.linalg.norm(mol.atoms[0].position - mol.atoms[1].position)
    assert d == pytest.approx(0.735 * ANGSTROM_TO_BOHR, abs=1e-10)
    assert d == pytest.approx(1.38895, abs=1e-4)


def test_parse_hehp():
    mol = parse_molecule("charge 1\nHe 0 0 0\nH 0 0 0.913")
    assert mol.n_electrons == 2
    assert mol.charge == 1


def test_parse_comments_and_blank_lines():
    mol = parse_molecule(
        "# a comment\n\ncharge 0  # inline\nH 0 0 0\nH 0 0 0.7 # tail\n")
    assert len(mol.atoms) == 2


def test_parse_odd_electrons_rejected():
    with pytest.raises(MoleculeError, match="[Oo]dd"):
        parse_molecule("charge 0\nH 0 0 0")


def test_parse_unknown_element():
    with pytest.raises(MoleculeError, match="line 2"):
        parse_molecule("charge 0\nXx 0 0 0\nH 0 0 1")


def test_parse_malformed_line_names_line():
    with pytest.raises(MoleculeError, match="line 3"):
        parse_molecule("charge 0\nH 0 0 0\nH 0 0\n")


def test_parse_missing_charge():
    with pytest.raises(MoleculeError):
        parse_molecule("H 0 0 0\nH 0 0 0.7")


def test_coincident_atoms_rejected():
    with pytest.raises(MoleculeError, match="coincide"):
        parse_molecule("charge 0\nH 0 0 0\nH 0 0 0")


@pytest.mark.parametrize("name,params,qubits", [
    ("H2", (0.735,), 4),
    ("HeH+", (0.913,), 4),
    ("LiH", (1.546,), 12),
    ("OH-", (1.112,), 12),
    ("HF", (0.995,), 12),
    ("BeH2", (1.316,), 14),
    ("H2O", (1.028, 96.9), 14),
    ("H3O+", (1.021, 69.0), 16),
    ("NH3", (1.070, 62.2), 16),
    ("CH4", (1.108,), 18),
    ("NH4+", (1.067,), 18),
    ("F2", (1.387,), 20),
    ("HCl", (1.342,), 20),
    ("CO", (1.182,), 20),
])
def test_qubit_counts_all_molecules(name, params, qubits):
    mol = build_geometry(MOLECULES[name], params)
    assert 2 * n_spatial_orbitals(mol) == qubits


def test_shells_normalized(h2):
    # every contracted function has unit self-overlap, including p shells
    mol = parse_molecule("charge 0\nO 0 0 0\nH 0 0 0.95\nH 0 0.95 0")
    S = overlap(build_basis(mol), mol)
    assert np.allclose(np.diag(S), 1.0, atol=1e-10)


def test_shells_normalized_against_quadrature():
    mol = parse_molecule("charge 0\nO 0 0 0\nH 0 0 0.95\nH 0 0.95 0")
    funcs = expand_shells(build_basis(mol), mol)
    for f in (funcs[0], funcs[2], funcs[-1]):  # 1s, one p, one H s
        assert oracles.overlap_quad(f, f) == pytest.approx(1.0, abs=1e-9)


def test_nuclear_repulsion_h2(h2):
    assert nuclear_repulsion(h2) == pytest.approx(1.0 / 1.38897, abs=1e-4)
    assert nuclear_repulsion(h2) == pytest.approx(0.71997, abs=1e-5)


def test_nuclear_repulsion_single_atom():
    mol = parse_molecule("charge 0\nHe 0 0 0")
    assert nuclear_repulsion(mol) == 0.0


def test_nuclear_repulsion_scaling():
    def make(scale):
        atoms = (Atom("O", 8, np.array([0.0, 0.0, 0.0])),
                 Atom("H", 1, np.array([0.0, 0.0, 1.8 * scale])),
                 Atom("H", 1, np.array([0.0, 1.8 * scale, 0.0])))
        return MoleculeSpec(atoms, 0)
    assert nuclear_repulsion(make(2.0)) == pytest.approx(
        nuclear_repulsion(make(1.0)) / 2.0, rel=1e-12)


def test_nuclear_repulsion_rigid_motion_invariance():
    rng = np.random.default_rng(7)
    base = [np.zeros(3), np.array([0.0, 0.0, 1.9]), np.array([1.8, 0.0, 0.3])]
    zs = [("O", 8), ("H", 1), ("H", 1)]
    ref = nuclear_repulsion(MoleculeSpec(
        tuple(Atom(s, z, p) for (s, z), p in zip(zs, base)), 0))
    # random rotation + translation
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    shift = rng.normal(size=3)
    moved = [q @ p + shift for p in base]
    val = nuclear_repulsion(MoleculeSpec(
        tuple(Atom(s, z, p) for (s, z), p in zip(zs, moved)), 0))
    assert val == pytest.approx(ref, abs=1e-12)


def test_basis_override_roundtrip():
    text = """
# hydrogen with made-up numbers
element H
s 3.0 0.2  0.6 0.5  0.17 0.45
"""
    table = parse_basis_override(text)
    assert list(table) == ["H"]
    mol = parse_molecule("charge 0\nH 0 0 0\nH 0 0 0.8")
    shells = build_basis(mol, table)
    assert len(shells) == 2
    S = overlap(shells, mol)
    assert np.allclose(np.diag(S), 1.0, atol=1e-10)


@pytest.mark.parametrize("sym,z,charge,n_s,n_p", [
    ("H", 1, 0, 1, 0), ("He", 2, 1, 1, 0), ("Li", 3, 0, 2, 1),
    ("O", 8, 1, 2, 1), ("Cl", 17, 0, 3, 2),
])
def test_shell_structure_counts(sym, z, charge, n_s, n_p):
    mol = MoleculeSpec((Atom(sym, z, np.zeros(3)),
                        Atom("H", 1, np.array([0.0, 0.0, 2.0]))), charge)
    shells = [s for s in build_basis(mol) if s.center == 0]
    assert sum(1 for s in shells if s.l == 0) == n_s
    assert sum(1 for s in shells if s.l == 1) == n_p
