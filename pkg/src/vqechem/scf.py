"""Restricted Hartree-Fock and the transformation to MO spin-orbital integrals.

Spin-orbital convention used everywhere downstream: index 2k is spatial MO k
with alpha spin, 2k+1 the same MO with beta spin, spatial MOs sorted by
orbital energy.  The closed-shell determinant therefore occupies spin
orbitals 0..N-1 contiguously.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import MoleculeSpec, nuclear_repulsion
from .integrals import AOIntegrals


class SCFError(RuntimeError):
    pass


class SCFConvergenceError(SCFError):
    def __init__(self, n_iter, last_energy):
        super().__init__(
            f"SCF did not converge in {n_iter} iterations "
            f"(last energy {last_energy:.12f})")
        self.last_energy = last_energy


class LinearDependenceError(SCFError):
    pass


@dataclass(frozen=True)
class RHFSolution:
    """Converged restricted Hartree-Fock result."""

    C: np.ndarray               # AO -> MO coefficients, columns are MOs
    orbital_energies: np.ndarray
    density: np.ndarray         # AO density, trace(D S) = N
    energy: float               # total HF energy incl. nuclear repulsion
    n_iterations: int


@dataclass(frozen=True)
class MOIntegrals:
    """Spin-orbital integrals defining the second-quantized Hamiltonian.

    `h2[p, q, r, s]` multiplies a+_p a+_q a_r a_s (with the global 1/2
    factor applied separately): electron 1 carries (p, s), electron 2
    carries (q, r), i.e. h2[p,q,r,s] = (ps|qr) in chemists' notation with
    spin deltas delta(sp,ss) delta(sq,sr).
    """

    n_spin_orbitals: int
    h1: np.ndarray          # (M, M)
    h2: np.ndarray          # (M, M, M, M)
    core_energy: float      # nuclear repulsion


def _symmetric_orthogonalization(S: np.ndarray, cutoff: float = 1e-10):
    evals, evecs = np.linalg.eigh(S)
    if evals.min() < cutoff:
        raise LinearDependenceError(
            f"overlap matrix nearly singular (smallest eigenvalue "
            f"{evals.min():.3e})")
    return evecs @ np.diag(evals ** -0.5) @ evecs.T


def _fock(hcore, eri_dense, D):
    J = np.einsum("pqrs,rs->pq", eri_dense, D)
    K = np.einsum("prqs,rs->pq", eri_dense, D)
    return hcore + J - 0.5 * K


def run_rhf(ao: AOIntegrals, mol: MoleculeSpec, max_iter: int = 200,
            e_tol: float = 1e-10, d_tol: float = 1e-8,
            diis_size: int = 8) -> RHFSolution:
    """Solve the closed-shell Roothaan equations with DIIS acceleration."""
    n = ao.n
    n_occ = mol.n_electrons // 2
    if n_occ > n:
        raise SCFError(f"{mol.n_electrons} electrons do not fit in {n} "
                       "spatial orbitals")
    e_nuc = nuclear_repulsion(mol)
    hcore = ao.T + ao.V
    eri = ao.eri.dense()
    X = _symmetric_orthogonalization(ao.S)

    def diagonalize(F):
        Fp = X.T @ F @ X
        eps, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        return eps, C

    eps, C = diagonalize(hcore)
    D = 2.0 * C[:, :n_occ] @ C[:, :n_occ].T

    e_old = 0.0
    fock_list: list[np.ndarray] = []
    err_list: list[np.ndarray] = []
    for it in range(1, max_iter + 1):
        F = _fock(hcore, eri, D)
        e_elec = 0.5 * np.sum(D * (hcore + F))
        e_total = e_elec + e_nuc

        # DIIS from iteration 2 on; fall back to damping when singular
        err = X.T @ (F @ D @ ao.S - ao.S @ D @ F) @ X
        fock_list.append(F)
        err_list.append(err)
        if len(fock_list) > diis_size:
            fock_list.pop(0)
            err_list.pop(0)
        if it >= 2 and len(fock_list) >= 2:
            m = len(fock_list)
            B = np.empty((m + 1, m + 1))
            B[-1, :] = -1.0
            B[:, -1] = -1.0
            B[-1, -1] = 0.0
            for i in range(m):
                for j in range(m):
                    B[i, j] = np.sum(err_list[i] * err_list[j])
            rhs = np.zeros(m + 1)
            rhs[-1] = -1.0
            try:
                coeffs = np.linalg.solve(B, rhs)[:m]
                F = sum(c * f for c, f in zip(coeffs, fock_list))
            except np.linalg.LinAlgError:
                F = 0.5 * F + 0.5 * fock_list[-2]  # Roothaan damping

        eps, C = diagonalize(F)
        D_new = 2.0 * C[:, :n_occ] @ C[:, :n_occ].T
        d_rms = np.sqrt(np.mean((D_new - D) ** 2))
        D = D_new
        if it > 1 and abs(e_total - e_old) < e_tol and d_rms < d_tol:
            # energy of the final density
            F = _fock(hcore, eri, D)
            e_total = 0.5 * np.sum(D * (hcore + F)) + e_nuc
            return RHFSolution(C=C, orbital_energies=eps, density=D,
                               energy=e_total, n_iterations=it)
        e_old = e_total
    raise SCFConvergenceError(max_iter, e_old)


def mo_transform(ao: AOIntegrals, hf: RHFSolution,
                 mol: MoleculeSpec) -> MOIntegrals:
    """Transform AO integrals to the MO basis and expand to spin orbitals."""
    C = hf.C
    hcore_mo = C.T @ (ao.T + ao.V) @ C
    eri = ao.eri.dense()
    # (pq|rs) AO -> MO, one index at a time
    tmp = np.einsum("pi,pqrs->iqrs", C, eri, optimize=True)
    tmp = np.einsum("qj,iqrs->ijrs", C, tmp, optimize=True)
    tmp = np.einsum("rk,ijrs->ijks", C, tmp, optimize=True)
    eri_mo = np.einsum("sl,ijks->ijkl", C, tmp, optimize=True)
    return spin_orbital_integrals(hcore_mo, eri_mo, nuclear_repulsion(mol))


def spin_orbital_integrals(h1_spatial: np.ndarray, eri_chem: np.ndarray,
                           core_energy: float) -> MOIntegrals:
    """Expand spatial MO integrals to interleaved spin orbitals.

    `eri_chem` is the chemists'-notation spatial tensor (ab|cd).
    """
    n = h1_spatial.shape[0]
    M = 2 * n
    so = np.arange(M)
    spatial = so // 2
    spin = so % 2

    h1 = np.zeros((M, M))
    same_spin = spin[:, None] == spin[None, :]
    h1[same_spin] = h1_spatial[spatial[:, None], spatial[None, :]][same_spin]

    # h2[p,q,r,s] = (P S | Q R) delta(sp,ss) delta(sq,sr)
    h2 = eri_chem[spatial[:, None, None, None],
                  spatial[None, None, None, :],
                  spatial[None, :, None, None],
                  spatial[None, None, :, None]].astype(float).copy()
    d_ps = (spin[:, None, None, None] == spin[None, None, None, :])
    d_qr = (spin[None, :, None, None] == spin[None, None, :, None])
    h2 *= d_ps & d_qr
    return MOIntegrals(n_spin_orbitals=M, h1=h1, h2=h2,
                       core_energy=core_energy)


def hf_energy_from_integrals(mo: MOIntegrals, n_electrons: int) -> float:
    """Rebuild the HF energy of the lowest-N determinant from MOIntegrals."""
    occ = np.arange(n_electrons)
    e1 = np.sum(mo.h1[occ, occ])
    h2 = mo.h2[np.ix_(occ, occ, occ, occ)]
    coulomb = np.einsum("pqqp->", h2)
    exchange = np.einsum("pqpq->", h2)
    return e1 + 0.5 * (coulomb - exchange) + mo.core_energy


def spatial_integrals_from_spin(mo: MOIntegrals):
    """Recover spatial h1 and chemists' (ab|cd) from the spin tensors."""
    n = mo.n_spin_orbitals // 2
    a = 2 * np.arange(n)  # alpha spin orbital of each spatial MO
    h1 = mo.h1[np.ix_(a, a)]
    # (ab|cd) = h2[2a, 2c, 2d, 2b] (both electrons alpha)
    eri = mo.h2[a[:, None, None, None], a[None, None, :, None],
                a[None, None, None, :], a[None, :, None, None]]
    return h1, eri
