"""UCCSD/VQE quantum-chemistry engine on a classical statevector simulator."""

from .basis import (MoleculeSpec, Atom, parse_molecule, build_basis,
                    nuclear_repulsion)
from .integrals import AOIntegrals, compute_ao_integrals, boys
from .scf import RHFSolution, MOIntegrals, run_rhf, mo_transform
from .fermion_qubit import (FermionOperator, PauliString, QubitOperator,
                            jordan_wigner, build_hamiltonian,
                            qubit_hamiltonian, export_fcidump, import_fcidump)
from .statevector import (StateVector, prepare_occupation, apply_pauli,
                          apply_pauli_exponential, expectation)
from .uccsd import (Excitation, AnsatzProgram, generate_excitations,
                    generator, build_ansatz, uccsd_ansatz, apply_ansatz)
from .vqe import (SweepConfig, VQEResult, energy_at, sequential_optimize,
                  exact_ground_energy, solve_molecule)
from .geometry import (GeometryTemplate, SurfaceSample, build_geometry,
                       scan, paraboloid_fit, optimize_geometry, MOLECULES)

__version__ = "0.1.0"
