"""Dense 2^M-amplitude statevector simulator.

Pauli strings act in a single pass over the amplitude array: the X/Y bits
give the partner index (a XOR), the Z/Y bits give the phase (a parity).
No operator matrices are ever built.
"""

from __future__ import annotations

import numpy as np

from .fermion_qubit import PauliString, QubitOperator

MAX_QUBITS = 24  # 2^24 complex doubles ~ 256 MB

_PHASE_I = np.array([1.0, 1.0j, -1.0, -1.0j])


class StateVector:
    """Normalized 2^M complex amplitude array; qubit p is bit p."""

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None):
        if not 0 < n_qubits <= MAX_QUBITS:
            raise ValueError(
                f"qubit count must be in 1..{MAX_QUBITS}, got {n_qubits}")
        self.n_qubits = n_qubits
        dim = 1 << n_qubits
        if amplitudes is None:
            amplitudes = np.zeros(dim, dtype=complex)
            amplitudes[0] = 1.0
        else:
            amplitudes = np.asarray(amplitudes, dtype=complex)
            if amplitudes.shape != (dim,):
                raise ValueError(f"expected {dim} amplitudes, "
                                 f"got shape {amplitudes.shape}")
        self.amplitudes = amplitudes

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


def prepare_occupation(n_qubits: int, occupied) -> StateVector:
    """Basis state with the given modes occupied (e.g. the HF determinant)."""
    index = 0
    for p in occupied:
        p = int(p)
        if not 0 <= p < n_qubits:
            raise ValueError(f"mode {p} out of range for M={n_qubits}")
        index |= 1 << p
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


class _MaskCache:
    """Per-register cache of XOR permutations and parity sign vectors."""

    def __init__(self, budget_bytes: int = 256 * 1024 * 1024):
        self.budget = budget_bytes
        self.used = 0
        self.perms: dict[tuple, np.ndarray] = {}
        self.signs: dict[tuple, np.ndarray] = {}

    def _charge(self, nbytes: int) -> bool:
        if self.used + nbytes > self.budget:
            self.perms.clear()
            self.signs.clear()
            self.used = 0
        self.used += nbytes
        return True

    def perm(self, M: int, x_mask: int) -> np.ndarray:
        key = (M, x_mask)
        p = self.perms.get(key)
        if p is None:
            p = np.arange(1 << M, dtype=np.uint32) ^ np.uint32(x_mask)
            self._charge(p.nbytes)
            self.perms[key] = p
        return p

    def sign(self, M: int, z_mask: int) -> np.ndarray:
        """(-1)^popcount(i & z_mask) for all i, as float8-sized ints."""
        key = (M, z_mask)
        s = self.signs.get(key)
        if s is None:
            idx = np.arange(1 << M, dtype=np.uint32)
            par = np.bitwise_count(idx & np.uint32(z_mask)) & 1
            s = 1.0 - 2.0 * par.astype(np.float64)
            self._charge(s.nbytes)
            self.signs[key] = s
        return s


_cache = _MaskCache()


def _pauli_image(state: StateVector, P: PauliString) -> np.ndarray:
    """Amplitudes of P|psi> including the coefficient of P."""
    if P.n_qubits != state.n_qubits:
        raise ValueError(f"Pauli length {P.n_qubits} != register size "
                         f"{state.n_qubits}")
    M = state.n_qubits
    x_mask, z_mask, ny = P.masks()
    perm = _cache.perm(M, x_mask)
    sign = _cache.sign(M, z_mask)
    phase = P.coefficient * _PHASE_I[ny % 4]
    out = sign * state.amplitudes
    if x_mask:
        out = out[perm]
    if phase != 1.0:
        out = phase * out
    return out


def apply_pauli(state: StateVector, P: PauliString) -> StateVector:
    """|psi> -> P|psi>, coefficient and phase included."""
    return StateVector(state.n_qubits, _pauli_image(state, P))


def apply_pauli_exponential(state: StateVector, P: PauliString,
                            theta: float) -> StateVector:
    """|psi> -> exp(-i theta P)|psi> = (cos(theta) - i sin(theta) P)|psi>.

    Requires a unit real coefficient so that P is Hermitian with P^2 = I.
    """
    c = P.coefficient
    if abs(c.imag) > 1e-12 or abs(abs(c.real) - 1.0) > 1e-12:
        raise ValueError(f"Pauli exponential needs unit coefficient, got {c}")
    amps = (np.cos(theta) * state.amplitudes
            - 1j * np.sin(theta) * _pauli_image(state, P))
    return StateVector(state.n_qubits, amps)


def expectation(state: StateVector, H: QubitOperator) -> float:
    """<psi|H|psi> for Hermitian H; asserts a tiny imaginary residue."""
    if H.n_qubits != state.n_qubits:
        raise ValueError(f"operator size {H.n_qubits} != register size "
                         f"{state.n_qubits}")
    val = 0.0 + 0.0j
    conj = np.conj(state.amplitudes)
    for P in H.paulis():
        val += np.dot(conj, _pauli_image(state, P))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"non-negligible imaginary expectation {val.imag:g}; "
                         "operator is not Hermitian")
    return float(val.real)


class CompiledObservable:
    """Expectation evaluator with terms grouped by their X/Y flip mask.

    For each distinct flip mask x the matrix elements <i^x|H|i> form one
    weight vector, precomputed once; every expectation is then a handful of
    vector products.  Used by the VQE loop where the same Hamiltonian is
    evaluated thousands of times.
    """

    def __init__(self, H: QubitOperator, memory_budget: int = 1 << 30):
        self.n_qubits = H.n_qubits
        dim = 1 << H.n_qubits
        groups: dict[int, list] = {}
        for P in H.paulis():
            x, z, ny = P.masks()
            groups.setdefault(x, []).append((P.coefficient, z, ny))
        self.cached = len(groups) * dim * 16 <= memory_budget
        self.groups = groups
        self._weights: dict[int, np.ndarray] = {}
        self._H = H if not self.cached else None

    def _weight(self, x_mask: int) -> np.ndarray:
        w = self._weights.get(x_mask)
        if w is None:
            M = self.n_qubits
            w = np.zeros(1 << M, dtype=complex)
            for coeff, z, ny in self.groups[x_mask]:
                w = w + (coeff * _PHASE_I[ny % 4]) * _cache.sign(M, z)
            if np.abs(w.imag).max() < 1e-14:
                w = w.real.copy()
            self._weights[x_mask] = w
        return w

    def expectation(self, state: StateVector) -> float:
        if state.n_qubits != self.n_qubits:
            raise ValueError("register size mismatch")
        if not self.cached:
            return expectation(state, self._H)
        psi = state.amplitudes
        conj = np.conj(psi)
        val = 0.0 + 0.0j
        for x_mask in self.groups:
            w = self._weight(x_mask)
            if x_mask:
                perm = _cache.perm(self.n_qubits, x_mask)
                val += np.dot(conj[perm], w * psi)
            else:
                val += np.dot(conj, w * psi)
        if abs(val.imag) > 1e-10:
            raise ValueError(
                f"non-negligible imaginary expectation {val.imag:g}")
        return float(val.real)


def sample_expectation(state: StateVector, H: QubitOperator, shots: int,
                       rng: np.random.Generator | None = None) -> float:
    """Shot-based estimator of <psi|H|psi> (pedagogical; never used in
    acceptance runs).

    Each Pauli term is measured in its own rotated basis by sampling
    eigenvalues +-1 from the exact outcome distribution.
    """
    if rng is None:
        rng = np.random.default_rng()
    total = 0.0
    for P in H.paulis():
        if not P.pattern:
            total += P.coefficient.real
            continue
        # outcome probability of +1 from the exact expectation
        unit = QubitOperator(P.n_qubits, {P.pattern: 1.0})
        ev = expectation(state, unit)
        p_plus = min(max(0.5 * (1.0 + ev), 0.0), 1.0)
        hits = rng.binomial(shots, p_plus)
        total += P.coefficient.real * (2.0 * hits / shots - 1.0)
    return total
