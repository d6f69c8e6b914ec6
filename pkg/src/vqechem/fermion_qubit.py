"""Second-quantized operators, the Jordan-Wigner map and FCIDUMP interop.

Conventions fixed here (all observables are convention-independent):
  * qubit/mode p is bit p of the basis-state integer (mode 0 = LSB);
  * sigma+ = (X - iY)/2, so a+ |0> = |1> in this bit convention;
  * a+_p -> Z_0...Z_{p-1} (X_p - iY_p)/2, a_p -> Z_0...Z_{p-1} (X_p + iY_p)/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scf import MOIntegrals, spin_orbital_integrals, spatial_integrals_from_spin

PRUNE_THRESHOLD = 1e-12

# single-qubit products: (left, right) -> (phase, result)
_PAULI_MUL = {
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}


class FermionOperator:
    """Weighted sum of ladder-operator products.

    Terms are tuples of ``(mode, dagger)`` pairs applied right-to-left as
    written left-to-right (standard operator-product order).
    """

    def __init__(self, terms=None):
        self.terms: dict[tuple, complex] = dict(terms or {})

    @classmethod
    def identity(cls, coeff=1.0):
        return cls({(): complex(coeff)})

    @classmethod
    def ladder(cls, ops, coeff=1.0):
        """ops: sequence of (mode, dagger) pairs."""
        return cls({tuple((int(m), bool(d)) for m, d in ops): complex(coeff)})

    def __add__(self, other):
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, 0.0) + c
        return FermionOperator(out)

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, FermionOperator):
            out: dict[tuple, complex] = {}
            for t1, c1 in self.terms.items():
                for t2, c2 in other.terms.items():
                    t = t1 + t2
                    out[t] = out.get(t, 0.0) + c1 * c2
            return FermionOperator(out)
        out = {t: c * other for t, c in self.terms.items()}
        return FermionOperator(out)

    __rmul__ = __mul__

    def hermitian_conjugate(self):
        out = {}
        for t, c in self.terms.items():
            ct = tuple((m, not d) for m, d in reversed(t))
            out[ct] = out.get(ct, 0.0) + np.conj(c)
        return FermionOperator(out)

    def normal_order(self):
        """Rewrite with creators (descending mode) left of annihilators
        (ascending mode), using the canonical anticommutators."""
        result: dict[tuple, complex] = {}
        stack = [(t, c) for t, c in self.terms.items()]
        while stack:
            term, coeff = stack.pop()
            if abs(coeff) < PRUNE_THRESHOLD:
                continue
            swapped = False
            ops = list(term)
            for i in range(len(ops) - 1):
                (m1, d1), (m2, d2) = ops[i], ops[i + 1]
                if (not d1) and d2:
                    # a_m1 a+_m2 = delta - a+_m2 a_m1
                    rest = ops[:i] + ops[i + 2:]
                    if m1 == m2:
                        stack.append((tuple(rest), coeff))
                    swapped_term = ops[:i] + [(m2, d2), (m1, d1)] + ops[i + 2:]
                    stack.append((tuple(swapped_term), -coeff))
                    swapped = True
                    break
                if d1 == d2:
                    if m1 == m2:
                        swapped = True  # nilpotent: term vanishes
                        break
                    want_desc = d1  # creators descending, annihilators ascending
                    out_of_order = (m1 < m2) if want_desc else (m1 > m2)
                    if out_of_order:
                        swapped_term = (ops[:i] + [(m2, d2), (m1, d1)]
                                        + ops[i + 2:])
                        stack.append((tuple(swapped_term), -coeff))
                        swapped = True
                        break
            if not swapped:
                t = tuple(ops)
                result[t] = result.get(t, 0.0) + coeff
        return FermionOperator(
            {t: c for t, c in result.items() if abs(c) >= PRUNE_THRESHOLD})

    def __repr__(self):
        parts = []
        for t, c in sorted(self.terms.items(), key=lambda kv: kv[0]):
            ops = " ".join(f"a{'+' if d else ''}_{m}" for m, d in t) or "1"
            parts.append(f"({c:.6g}) {ops}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class PauliString:
    """A Pauli letter pattern with coefficient on an M-qubit register."""

    n_qubits: int
    pattern: tuple  # sorted tuple of (qubit, letter), identities omitted
    coefficient: complex = 1.0

    def __post_init__(self):
        for q, letter in self.pattern:
            if not 0 <= q < self.n_qubits:
                raise ValueError(f"qubit {q} out of range")
            if letter not in "XYZ":
                raise ValueError(f"bad Pauli letter {letter!r}")

    def __repr__(self):
        body = " ".join(f"{l}{q}" for q, l in self.pattern) or "I"
        return f"({self.coefficient:.6g}) {body}"

    def masks(self):
        """(x_mask, z_mask, n_y): X/Y set bits in x_mask, Z/Y in z_mask."""
        x = z = ny = 0
        for q, letter in self.pattern:
            if letter in "XY":
                x |= 1 << q
            if letter in "ZY":
                z |= 1 << q
            if letter == "Y":
                ny += 1
        return x, z, ny


def _mul_patterns(p1: tuple, p2: tuple):
    """Multiply two Pauli patterns; returns (phase, pattern)."""
    d = dict(p1)
    phase = 1.0 + 0.0j
    out = {}
    for q, l2 in p2:
        l1 = d.pop(q, None)
        if l1 is None:
            out[q] = l2
        elif l1 == l2:
            pass  # identity
        else:
            ph, l = _PAULI_MUL[(l1, l2)]
            phase *= ph
            out[q] = l
    out.update(d)
    return phase, tuple(sorted(out.items()))


class QubitOperator:
    """Weighted sum of Pauli strings on a fixed-size register."""

    def __init__(self, n_qubits: int, terms=None):
        self.n_qubits = n_qubits
        self.terms: dict[tuple, complex] = dict(terms or {})

    @classmethod
    def identity(cls, n_qubits, coeff=1.0):
        return cls(n_qubits, {(): complex(coeff)})

    @classmethod
    def from_string(cls, n_qubits, pattern, coeff=1.0):
        return cls(n_qubits, {tuple(sorted(pattern)): complex(coeff)})

    def _check(self, other):
        if self.n_qubits != other.n_qubits:
            raise ValueError(
                f"register size mismatch: {self.n_qubits} vs {other.n_qubits}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, 0.0) + c
        return QubitOperator(self.n_qubits, out)

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, QubitOperator):
            self._check(other)
            out: dict[tuple, complex] = {}
            for t1, c1 in self.terms.items():
                for t2, c2 in other.terms.items():
                    phase, t = _mul_patterns(t1, t2)
                    out[t] = out.get(t, 0.0) + phase * c1 * c2
            return QubitOperator(self.n_qubits, out)
        return QubitOperator(self.n_qubits,
                             {t: c * other for t, c in self.terms.items()})

    __rmul__ = __mul__

    def simplify(self, threshold: float = PRUNE_THRESHOLD):
        return QubitOperator(
            self.n_qubits,
            {t: c for t, c in self.terms.items() if abs(c) >= threshold})

    def constant(self) -> complex:
        return self.terms.get((), 0.0)

    def paulis(self):
        for t, c in self.terms.items():
            yield PauliString(self.n_qubits, t, c)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) < tol for c in self.terms.values())

    def norm(self) -> float:
        return float(sum(abs(c) for c in self.terms.values()))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        parts = []
        for t, c in sorted(self.terms.items()):
            body = " ".join(f"{l}{q}" for q, l in t) or "I"
            parts.append(f"({c:.6g}) {body}")
        return " + ".join(parts) if parts else "0"


def _jw_ladder(mode: int, dagger: bool, M: int) -> QubitOperator:
    """JW image of a single ladder operator."""
    zs = tuple((m, "Z") for m in range(mode))
    sign = -0.5j if dagger else 0.5j
    return QubitOperator(M, {
        tuple(sorted(zs + ((mode, "X"),))): 0.5,
        tuple(sorted(zs + ((mode, "Y"),))): sign,
    })


def jordan_wigner(f: FermionOperator, M: int) -> QubitOperator:
    """Map a fermionic operator to a qubit operator term by term."""
    total = QubitOperator(M)
    for term, coeff in f.terms.items():
        part = QubitOperator.identity(M, coeff)
        for mode, dagger in term:
            if mode >= M:
                raise ValueError(f"mode {mode} out of range for M={M}")
            part = part * _jw_ladder(mode, dagger, M)
        total = total + part
    return total.simplify()


def build_hamiltonian(mo: MOIntegrals) -> FermionOperator:
    """Second-quantized molecular Hamiltonian from spin-orbital integrals."""
    M = mo.n_spin_orbitals
    terms: dict[tuple, complex] = {(): complex(mo.core_energy)}
    for p in range(M):
        for q in range(M):
            c = mo.h1[p, q]
            if abs(c) >= PRUNE_THRESHOLD:
                terms[((p, True), (q, False))] = complex(c)
    for p in range(M):
        for q in range(M):
            for r in range(M):
                for s in range(M):
                    c = mo.h2[p, q, r, s]
                    if abs(c) >= PRUNE_THRESHOLD:
                        terms[((p, True), (q, True), (r, False),
                               (s, False))] = complex(0.5 * c)
    return FermionOperator(terms)


def qubit_hamiltonian(mo: MOIntegrals) -> QubitOperator:
    return jordan_wigner(build_hamiltonian(mo), mo.n_spin_orbitals)


def number_operator(M: int) -> FermionOperator:
    return FermionOperator({((p, True), (p, False)): 1.0 for p in range(M)})


def spin_z_operator(M: int) -> FermionOperator:
    """Sz in units of hbar for the interleaved alpha/beta convention."""
    return FermionOperator(
        {((p, True), (p, False)): (0.5 if p % 2 == 0 else -0.5)
         for p in range(M)})


class FCIDumpError(ValueError):
    pass


def export_fcidump(mo: MOIntegrals, n_electrons: int) -> str:
    """Serialize MO integrals in FCIDUMP format.

    Spatial-orbital integrals in chemists' notation, 1-based indices;
    one-electron records have k = l = 0, the core energy has all-zero
    indices.
    """
    h1, eri = spatial_integrals_from_spin(mo)
    n = h1.shape[0]
    lines = [
        f"&FCI NORB={n},NELEC={n_electrons},MS2=0,",
        "  ORBSYM=" + "1," * n,
        "  ISYM=1,",
        "&END",
    ]
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    v = eri[i, j, k, l]
                    if abs(v) >= PRUNE_THRESHOLD:
                        lines.append(
                            f"{v:23.16e} {i+1:4d} {j+1:4d} {k+1:4d} {l+1:4d}")
    for i in range(n):
        for j in range(i + 1):
            v = h1[i, j]
            if abs(v) >= PRUNE_THRESHOLD:
                lines.append(f"{v:23.16e} {i+1:4d} {j+1:4d} {0:4d} {0:4d}")
    lines.append(f"{mo.core_energy:23.16e} {0:4d} {0:4d} {0:4d} {0:4d}")
    return "\n".join(lines) + "\n"


def import_fcidump(text: str) -> tuple[MOIntegrals, int]:
    """Parse FCIDUMP text; returns (MOIntegrals, n_electrons)."""
    lines = text.splitlines()
    header = []
    body_start = None
    for idx, line in enumerate(lines):
        header.append(line)
        if "&END" in line.upper() or "/" == line.strip():
            body_start = idx + 1
            break
    if body_start is None:
        raise FCIDumpError("missing &END in FCIDUMP header")
    head = " ".join(header).replace(",", " , ")
    import re
    m = re.search(r"NORB\s*=\s*(\d+)", head, re.I)
    if not m:
        raise FCIDumpError("missing NORB in FCIDUMP header")
    n = int(m.group(1))
    m = re.search(r"NELEC\s*=\s*(\d+)", head, re.I)
    if not m:
        raise FCIDumpError("missing NELEC in FCIDUMP header")
    nelec = int(m.group(1))

    h1 = np.zeros((n, n))
    eri = np.zeros((n, n, n, n))
    core = 0.0
    for lineno, line in enumerate(lines[body_start:], start=body_start + 1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 5:
            raise FCIDumpError(f"line {lineno}: expected 'value i j k l'")
        try:
            v = float(fields[0])
            i, j, k, l = (int(x) for x in fields[1:])
        except ValueError:
            raise FCIDumpError(f"line {lineno}: malformed record") from None
        if i == j == k == l == 0:
            core = v
        elif k == l == 0:
            h1[i - 1, j - 1] = v
            h1[j - 1, i - 1] = v
        else:
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for p, q, r, s in ((a, b, c, d), (b, a, c, d), (a, b, d, c),
                               (b, a, d, c), (c, d, a, b), (d, c, a, b),
                               (c, d, b, a), (d, c, b, a)):
                eri[p, q, r, s] = v
    return spin_orbital_integrals(h1, eri, core), nelec
