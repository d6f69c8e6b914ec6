"""Classical outer loop: sequential 1-D minimization of <Psi(theta)|H|Psi(theta)>,
plus an exact-diagonalization (Lanczos) oracle and the end-to-end pipeline.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize
import scipy.sparse
import scipy.sparse.linalg

from .basis import MoleculeSpec, build_basis
from .fermion_qubit import QubitOperator, qubit_hamiltonian
from .integrals import compute_ao_integrals
from .scf import RHFSolution, MOIntegrals, mo_transform, run_rhf
from .statevector import (CompiledObservable, StateVector, expectation,
                          prepare_occupation)
from .uccsd import AnsatzProgram, apply_ansatz, uccsd_ansatz

log = logging.getLogger("vqechem.vqe")


class LanczosError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    """Controls for the sequential (coordinate-descent) optimizer."""

    max_sweeps: int = 3
    energy_tol: float = 1e-9      # Hartree, per full sweep
    bracket: tuple = (-math.pi, math.pi)
    theta_tol: float = 1e-10

    def __post_init__(self):
        if self.energy_tol <= 0 or self.theta_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class VQEResult:
    theta: np.ndarray
    energy: float
    sweep_trace: tuple          # energy after each completed sweep
    n_sweeps: int
    n_evaluations: int
    converged: bool


def energy_at(H: QubitOperator, prog: AnsatzProgram,
              reference: StateVector, theta) -> float:
    """Deterministic statevector energy of the ansatz state."""
    return expectation(apply_ansatz(reference, prog, theta), H)


def impact_order(H: QubitOperator, prog: AnsatzProgram,
                 reference: StateVector) -> AnsatzProgram:
    """Reorder the excitations by a first-order importance estimate.

    For each excitation the estimate is |<D|H|ref>| / (E_D - E_ref), the
    perturbative amplitude of the excited determinant D.  Visiting the
    large-amplitude excitations first makes the coordinate sweeps converge
    markedly faster; singles have zero coupling to a converged reference
    (Brillouin) and keep their relative order at the tail.  Ties are
    broken by the original position, so the result is deterministic.
    """
    from .statevector import _pauli_image

    hpsi = np.zeros_like(reference.amplitudes)
    for P in H.paulis():
        hpsi += _pauli_image(reference, P)
    ref_idx = int(np.argmax(np.abs(reference.amplitudes)))
    e_ref = float(np.real(np.vdot(reference.amplitudes, hpsi)))
    occupied = {q for q in range(prog.n_qubits) if (ref_idx >> q) & 1}

    z_terms = [(np.real(P.coefficient), P.masks()[1])
               for P in H.paulis() if P.masks()[0] == 0]

    def diag_at(idx: int) -> float:
        return sum(c * (1.0 - 2.0 * (bin(idx & z).count("1") & 1))
                   for c, z in z_terms)

    scores = []
    for k, exc in enumerate(prog.excitations):
        occ = (occupied - set(exc.occupied)) | set(exc.virtual)
        idx = sum(1 << q for q in occ)
        gap = diag_at(idx) - e_ref
        scores.append(abs(hpsi[idx]) / max(gap, 1e-6))
    order = sorted(range(prog.n_parameters), key=lambda k: (-scores[k], k))
    return AnsatzProgram(prog.n_qubits,
                         tuple(prog.excitations[i] for i in order),
                         tuple(prog.rotations[i] for i in order))


def sequential_optimize(H: QubitOperator, prog: AnsatzProgram,
                        reference: StateVector,
                        cfg: SweepConfig | None = None) -> VQEResult:
    """Cycle through the excitations, minimizing each parameter on the
    bracket with a bounded Brent search, until a full sweep improves the
    energy by less than the tolerance or the sweep cap is reached."""
    cfg = cfg or SweepConfig()
    n = prog.n_parameters
    compiled = CompiledObservable(H)
    theta = np.zeros(n)
    n_evals = 1
    energy = compiled.expectation(apply_ansatz(reference, prog, theta))
    lo, hi = cfg.bracket

    trace = []
    converged = False
    sweeps_done = 0
    for sweep in range(1, cfg.max_sweeps + 1):
        sweep_start = energy
        theta_start = theta.copy()
        for k in range(n):
            prefix = apply_ansatz(reference, prog, theta, 0, k)
            evals = 0

            def f(t):
                nonlocal evals
                evals += 1
                trial = theta.copy()
                trial[k] = t
                state = apply_ansatz(prefix, prog, trial, k)
                return compiled.expectation(state)

            res = scipy.optimize.minimize_scalar(
                f, bounds=(lo, hi), method="bounded",
                options={"xatol": cfg.theta_tol})
            n_evals += evals
            if res.fun < energy:
                theta[k] = res.x
                energy = res.fun
            log.debug("%d,%d,%.12g,%.12f", sweep, k,
                      theta[k], energy)
        # pattern move: one line search along the sweep's net displacement
        # mops up the slow zigzag of coupled coordinates
        direction = theta - theta_start
        if np.any(direction):
            def along(a):
                return compiled.expectation(
                    apply_ansatz(reference, prog, theta + a * direction))

            res = scipy.optimize.minimize_scalar(
                along, bounds=(-1.0, 3.0), method="bounded",
                options={"xatol": cfg.theta_tol})
            n_evals += res.nfev
            if res.fun < energy:
                theta = theta + res.x * direction
                energy = res.fun
        trace.append(energy)
        sweeps_done = sweep
        if sweep_start - energy < cfg.energy_tol:
            converged = True
            break
    return VQEResult(theta=theta, energy=energy, sweep_trace=tuple(trace),
                     n_sweeps=sweeps_done, n_evaluations=n_evals,
                     converged=converged)


def _sector_states(M: int, n_particles: int, sz: float | None) -> np.ndarray:
    states = np.arange(1 << M, dtype=np.uint32)
    keep = np.bitwise_count(states) == n_particles
    if sz is not None:
        alpha_mask = np.uint32(sum(1 << p for p in range(0, M, 2)))
        n_alpha = round(n_particles / 2 + sz)
        keep &= np.bitwise_count(states & alpha_mask) == n_alpha
    return states[keep]


def sector_dimension(M: int, n_particles: int, sz: float | None = None) -> int:
    return int(_sector_states(M, n_particles, sz).size)


def exact_ground_energy(H: QubitOperator, n_particles: int,
                        sz: float | None = None, tol: float = 1e-10,
                        maxiter: int = 10000) -> float:
    """Lowest eigenvalue of H restricted to a fixed-particle-number sector.

    The sector Hamiltonian is assembled sparsely from the Pauli terms and
    diagonalized with Lanczos iteration (dense diagonalization below a few
    hundred states).  H must commute with the number operator for the
    restriction to be exact, which holds for every molecular Hamiltonian
    produced here.
    """
    M = H.n_qubits
    if M > 20:
        raise ValueError(f"sector diagonalization capped at 20 qubits, "
                         f"got {M}")
    states = _sector_states(M, n_particles, sz)
    dim = states.size
    if dim == 0:
        raise ValueError(f"empty sector: N={n_particles}, sz={sz}, M={M}")

    rows, cols, vals = [], [], []
    phase_i = np.array([1.0, 1.0j, -1.0, -1.0j])
    for P in H.paulis():
        x, z, ny = P.masks()
        # amplitude on |i> goes to |i^x> with phase i^ny * (-1)^par(i & z)
        par = (np.bitwise_count(states & np.uint32(z)) & 1).astype(np.float64)
        phases = P.coefficient * phase_i[ny % 4] * (1.0 - 2.0 * par)
        targets = states ^ np.uint32(x)
        pos = np.searchsorted(states, targets)
        pos_c = np.minimum(pos, dim - 1)
        valid = states[pos_c] == targets
        rows.append(pos_c[valid])
        cols.append(np.nonzero(valid)[0])
        vals.append(phases[valid])
    mat = scipy.sparse.coo_matrix(
        (np.concatenate(vals),
         (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim)).tocsr()
    herm_defect = abs(mat - mat.getH()).max()
    if herm_defect > 1e-9:
        raise LanczosError(f"sector matrix not Hermitian (defect "
                           f"{herm_defect:g}); H may not conserve N")

    if dim <= 600:
        return float(np.linalg.eigvalsh(mat.toarray())[0])
    try:
        w = scipy.sparse.linalg.eigsh(mat, k=1, which="SA", tol=tol,
                                      maxiter=maxiter,
                                      return_eigenvectors=False)
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        raise LanczosError(f"Lanczos did not converge: {exc}") from exc
    return float(w[0].real)


@dataclass(frozen=True)
class MoleculeResult:
    """Everything the pipeline produces for one fixed geometry."""

    mol: MoleculeSpec
    hf: RHFSolution
    mo: MOIntegrals
    hamiltonian: QubitOperator
    program: AnsatzProgram
    vqe: VQEResult

    @property
    def n_qubits(self) -> int:
        return self.mo.n_spin_orbitals

    @property
    def hf_energy(self) -> float:
        return self.hf.energy

    @property
    def uccsd_energy(self) -> float:
        return self.vqe.energy


def prepare_problem(mol: MoleculeSpec, basis_table=None):
    """HF + integrals + JW Hamiltonian + ansatz for one geometry."""
    shells = build_basis(mol, basis_table)
    ao = compute_ao_integrals(shells, mol)
    hf = run_rhf(ao, mol)
    mo = mo_transform(ao, hf, mol)
    M = mo.n_spin_orbitals
    H = qubit_hamiltonian(mo)
    prog = uccsd_ansatz(mol.n_electrons, M)
    reference = prepare_occupation(M, range(mol.n_electrons))
    prog = impact_order(H, prog, reference)
    return hf, mo, H, prog, reference


def solve_molecule(mol: MoleculeSpec, cfg: SweepConfig | None = None,
                   basis_table=None) -> MoleculeResult:
    """Full pipeline at a fixed geometry: RHF, integrals, JW, UCCSD/VQE."""
    hf, mo, H, prog, reference = prepare_problem(mol, basis_table)
    result = sequential_optimize(H, prog, reference, cfg)
    return MoleculeResult(mol=mol, hf=hf, mo=mo, hamiltonian=H,
                          program=prog, vqe=result)
