"""UCCSD excitation generation and the Trotterized ansatz.

Excitations are raw spin-orbital excitations against the HF reference that
occupies spin orbitals 0..N-1.  The excitation list and each generator's
Pauli expansion follow a frozen lexicographic order, because the Trotterized
product depends on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .fermion_qubit import FermionOperator, PauliString, jordan_wigner
from .statevector import StateVector, apply_pauli_exponential


@dataclass(frozen=True)
class Excitation:
    """A single or double spin-conserving excitation."""

    occupied: tuple[int, ...]  # 1 or 2 indices < N, ascending
    virtual: tuple[int, ...]   # 1 or 2 indices >= N, ascending

    @property
    def kind(self) -> str:
        return "single" if len(self.occupied) == 1 else "double"

    def __repr__(self):
        o = ",".join(map(str, self.occupied))
        v = ",".join(map(str, self.virtual))
        return f"{o}->{v}"


def _spin(p: int) -> int:
    return p % 2


def generate_excitations(n_electrons: int, n_spin_orbitals: int):
    """All Sz-preserving singles and doubles in canonical order.

    Singles first, then doubles; lexicographic by (occupied, virtual)
    within each kind.
    """
    N, M = n_electrons, n_spin_orbitals
    if N % 2 or M % 2:
        raise ValueError("electron and spin-orbital counts must be even")
    if N >= M:
        raise ValueError(f"no virtual orbitals with N={N}, M={M}")
    occ = range(N)
    virt = range(N, M)
    excitations = []
    for i in occ:
        for a in virt:
            if _spin(i) == _spin(a):
                excitations.append(Excitation((i,), (a,)))
    for i, j in combinations(occ, 2):
        for a, b in combinations(virt, 2):
            if sorted((_spin(i), _spin(j))) == sorted((_spin(a), _spin(b))):
                excitations.append(Excitation((i, j), (a, b)))
    return excitations


def generator(exc: Excitation) -> FermionOperator:
    """Anti-Hermitian generator A - A+ for one excitation.

    Single i->a: A = a+_a a_i.  Double (i<j)->(a<b): A = a+_a a+_b a_j a_i.
    """
    if exc.kind == "single":
        (i,), (a,) = exc.occupied, exc.virtual
        A = FermionOperator.ladder([(a, True), (i, False)])
    else:
        (i, j), (a, b) = exc.occupied, exc.virtual
        A = FermionOperator.ladder(
            [(a, True), (b, True), (j, False), (i, False)])
    return A - A.hermitian_conjugate()


@dataclass(frozen=True)
class AnsatzProgram:
    """Pre-expanded JW rotations of the UCCSD factors.

    For each excitation the JW image of its generator is a sum of Pauli
    strings with purely imaginary coefficients i*g; the factor
    exp((theta/2)*(A - A+)) Trotterizes into rotations
    exp(-i * (-theta*g/2) * P) sharing the single parameter theta.  The
    half angle makes theta = +-pi the fully excited state, so the energy
    is 2*pi-periodic in each parameter with one interior minimum.
    """

    n_qubits: int
    excitations: tuple[Excitation, ...]
    # per excitation: tuple of (PauliString with unit coefficient, g)
    rotations: tuple[tuple, ...]

    @property
    def n_parameters(self) -> int:
        return len(self.excitations)


def build_ansatz(excitations, n_qubits: int) -> AnsatzProgram:
    rotations = []
    for exc in excitations:
        op = jordan_wigner(generator(exc), n_qubits)
        rots = []
        for pattern in sorted(op.terms):
            c = op.terms[pattern]
            if abs(c.real) > 1e-12:
                raise ValueError(
                    f"generator {exc} is not anti-Hermitian under JW")
            rots.append((PauliString(n_qubits, pattern, 1.0), c.imag))
        rotations.append(tuple(rots))
    return AnsatzProgram(n_qubits, tuple(excitations), tuple(rotations))


def uccsd_ansatz(n_electrons: int, n_spin_orbitals: int) -> AnsatzProgram:
    return build_ansatz(generate_excitations(n_electrons, n_spin_orbitals),
                        n_spin_orbitals)


def apply_ansatz(reference: StateVector, prog: AnsatzProgram,
                 theta: np.ndarray, start: int = 0,
                 stop: int | None = None) -> StateVector:
    """Apply the Trotterized UCCSD product for excitations start..stop.

    `start`/`stop` let the sequential optimizer reuse a cached prefix state.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (prog.n_parameters,):
        raise ValueError(
            f"expected {prog.n_parameters} parameters, got {theta.shape}")
    if stop is None:
        stop = prog.n_parameters
    state = reference
    for k in range(start, stop):
        t = theta[k]
        if t == 0.0:
            continue
        for P, g in prog.rotations[k]:
            # exp((theta/2) * i * g * P) = exp(-i * (-theta * g / 2) * P)
            state = apply_pauli_exponential(state, P, -0.5 * t * g)
    return state


def dump_program(prog: AnsatzProgram) -> str:
    """Text dump of the excitation list and Pauli expansions."""
    lines = [f"qubits {prog.n_qubits}", f"parameters {prog.n_parameters}"]
    for k, (exc, rots) in enumerate(zip(prog.excitations, prog.rotations)):
        lines.append(f"excitation {k} {exc.kind} {exc!r}")
        for P, g in rots:
            body = " ".join(f"{l}{q}" for q, l in P.pattern)
            lines.append(f"  {g:+.12f}i {body}")
    return "\n".join(lines) + "\n"
