"""One- and two-electron integrals over contracted Cartesian Gaussians.

McMurchie-Davidson scheme: Cartesian overlap distributions are expanded in
Hermite Gaussians and Coulomb integrals reduce to the Boys function.  Only
s and p functions are needed, but the recursions are written for general
angular momentum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisFunction, MoleculeSpec, expand_shells


def boys(m: int, x: float) -> float:
    """Boys function F_m(x) = int_0^1 t^{2m} e^{-x t^2} dt.

    Series expansion below x = 25, asymptotic form with upward recursion
    beyond; absolute accuracy ~1e-14.
    """
    if x < 0:
        raise ValueError(f"boys requires x >= 0, got {x}")
    if m < 0:
        raise ValueError(f"boys requires m >= 0, got {m}")
    if x < 25.0:
        # F_m(x) = e^{-x} sum_k (2x)^k / (2m+1)(2m+3)...(2m+2k+1)
        term = 1.0 / (2 * m + 1)
        total = term
        k = 1
        while True:
            term *= 2.0 * x / (2 * m + 2 * k + 1)
            total += term
            if term < total * 1e-16:
                break
            k += 1
        return math.exp(-x) * total
    # e^{-x} < 1.4e-11: erf(sqrt(x)) = 1 to machine precision
    f = 0.5 * math.sqrt(math.pi / x)
    ex = math.exp(-x)
    for k in range(m):
        f = ((2 * k + 1) * f - ex) / (2.0 * x)
    return f


def _hermite_coef(i: int, j: int, t: int, qx: float, a: float, b: float):
    """Hermite expansion coefficient E_t^{ij} for a 1-D Gaussian pair."""
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-q * qx * qx)
    if j == 0:
        return (_hermite_coef(i - 1, j, t - 1, qx, a, b) / (2 * p)
                - q * qx / a * _hermite_coef(i - 1, j, t, qx, a, b)
                + (t + 1) * _hermite_coef(i - 1, j, t + 1, qx, a, b))
    return (_hermite_coef(i, j - 1, t - 1, qx, a, b) / (2 * p)
            + q * qx / b * _hermite_coef(i, j - 1, t, qx, a, b)
            + (t + 1) * _hermite_coef(i, j - 1, t + 1, qx, a, b))


def _overlap_prim(a, lmn1, A, b, lmn2, B):
    s = 1.0
    for ax in range(3):
        s *= _hermite_coef(lmn1[ax], lmn2[ax], 0, A[ax] - B[ax], a, b)
    return s * (math.pi / (a + b)) ** 1.5


def _kinetic_prim(a, lmn1, A, b, lmn2, B):
    l2, m2, n2 = lmn2
    term0 = b * (2 * (l2 + m2 + n2) + 3) * _overlap_prim(a, lmn1, A, b, lmn2, B)
    term1 = -2.0 * b * b * (
        _overlap_prim(a, lmn1, A, b, (l2 + 2, m2, n2), B)
        + _overlap_prim(a, lmn1, A, b, (l2, m2 + 2, n2), B)
        + _overlap_prim(a, lmn1, A, b, (l2, m2, n2 + 2), B))
    term2 = -0.5 * (
        l2 * (l2 - 1) * _overlap_prim(a, lmn1, A, b, (l2 - 2, m2, n2), B)
        + m2 * (m2 - 1) * _overlap_prim(a, lmn1, A, b, (l2, m2 - 2, n2), B)
        + n2 * (n2 - 1) * _overlap_prim(a, lmn1, A, b, (l2, m2, n2 - 2), B))
    return term0 + term1 + term2


def _hermite_coulomb(t, u, v, n, p, PC):
    """Hermite Coulomb auxiliary R_{tuv}^{(n)}."""
    if t == u == v == 0:
        r2 = PC[0] * PC[0] + PC[1] * PC[1] + PC[2] * PC[2]
        return (-2.0 * p) ** n * boys(n, p * r2)
    if t > 0:
        val = PC[0] * _hermite_coulomb(t - 1, u, v, n + 1, p, PC)
        if t > 1:
            val += (t - 1) * _hermite_coulomb(t - 2, u, v, n + 1, p, PC)
        return val
    if u > 0:
        val = PC[1] * _hermite_coulomb(t, u - 1, v, n + 1, p, PC)
        if u > 1:
            val += (u - 1) * _hermite_coulomb(t, u - 2, v, n + 1, p, PC)
        return val
    val = PC[2] * _hermite_coulomb(t, u, v - 1, n + 1, p, PC)
    if v > 1:
        val += (v - 1) * _hermite_coulomb(t, u, v - 2, n + 1, p, PC)
    return val


def _nuclear_prim(a, lmn1, A, b, lmn2, B, C):
    """Attraction integral of one primitive pair to a unit charge at C."""
    p = a + b
    P = (a * A + b * B) / p
    PC = P - C
    val = 0.0
    for t in range(lmn1[0] + lmn2[0] + 1):
        Et = _hermite_coef(lmn1[0], lmn2[0], t, A[0] - B[0], a, b)
        if Et == 0.0:
            continue
        for u in range(lmn1[1] + lmn2[1] + 1):
            Eu = _hermite_coef(lmn1[1], lmn2[1], u, A[1] - B[1], a, b)
            if Eu == 0.0:
                continue
            for v in range(lmn1[2] + lmn2[2] + 1):
                Ev = _hermite_coef(lmn1[2], lmn2[2], v, A[2] - B[2], a, b)
                if Ev == 0.0:
                    continue
                val += Et * Eu * Ev * _hermite_coulomb(t, u, v, 0, p, PC)
    return 2.0 * math.pi / p * val


def _eri_prim(a, lmn1, A, b, lmn2, B, c, lmn3, C, d, lmn4, D):
    """Primitive (ab|cd) in chemists' notation."""
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * A + b * B) / p
    Q = (c * C + d * D) / q
    PQ = P - Q

    e1 = [[_hermite_coef(lmn1[ax], lmn2[ax], t, A[ax] - B[ax], a, b)
           for t in range(lmn1[ax] + lmn2[ax] + 1)] for ax in range(3)]
    e2 = [[_hermite_coef(lmn3[ax], lmn4[ax], t, C[ax] - D[ax], c, d)
           for t in range(lmn3[ax] + lmn4[ax] + 1)] for ax in range(3)]

    val = 0.0
    for t, Et in enumerate(e1[0]):
        if Et == 0.0:
            continue
        for u, Eu in enumerate(e1[1]):
            if Eu == 0.0:
                continue
            for v, Ev in enumerate(e1[2]):
                if Ev == 0.0:
                    continue
                for tau, Ft in enumerate(e2[0]):
                    if Ft == 0.0:
                        continue
                    for nu, Fu in enumerate(e2[1]):
                        if Fu == 0.0:
                            continue
                        for phi, Fv in enumerate(e2[2]):
                            if Fv == 0.0:
                                continue
                            sign = -1.0 if (tau + nu + phi) % 2 else 1.0
                            val += (Et * Eu * Ev * Ft * Fu * Fv * sign
                                    * _hermite_coulomb(t + tau, u + nu,
                                                       v + phi, 0, alpha, PQ))
    return val * 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))


def _contracted(prim_fn, f1: BasisFunction, f2: BasisFunction, *extra):
    val = 0.0
    for a, ca in zip(f1.exponents, f1.coefficients):
        for b, cb in zip(f2.exponents, f2.coefficients):
            val += ca * cb * prim_fn(a, f1.lmn, f1.origin,
                                     b, f2.lmn, f2.origin, *extra)
    return val


def _contracted_eri(f1, f2, f3, f4):
    val = 0.0
    for a, ca in zip(f1.exponents, f1.coefficients):
        for b, cb in zip(f2.exponents, f2.coefficients):
            cab = ca * cb
            for c, cc in zip(f3.exponents, f3.coefficients):
                for d, cd in zip(f4.exponents, f4.coefficients):
                    val += cab * cc * cd * _eri_prim(
                        a, f1.lmn, f1.origin, b, f2.lmn, f2.origin,
                        c, f3.lmn, f3.origin, d, f4.lmn, f4.origin)
    return val


class ERITensor:
    """Two-electron tensor (pq|rs) stored by canonical compound index.

    The 8-fold permutation symmetry holds exactly by construction: all
    equivalent index tuples read the same stored element.
    """

    def __init__(self, n: int, data: np.ndarray | None = None):
        self.n = n
        npair = n * (n + 1) // 2
        size = npair * (npair + 1) // 2
        self.data = np.zeros(size) if data is None else data

    @staticmethod
    def _pair(i: int, j: int) -> int:
        if i < j:
            i, j = j, i
        return i * (i + 1) // 2 + j

    @classmethod
    def index(cls, p: int, q: int, r: int, s: int) -> int:
        return cls._pair(cls._pair(p, q), cls._pair(r, s))

    def __getitem__(self, pqrs):
        return self.data[self.index(*pqrs)]

    def __setitem__(self, pqrs, value):
        self.data[self.index(*pqrs)] = value

    def dense(self) -> np.ndarray:
        n = self.n
        out = np.empty((n, n, n, n))
        for p in range(n):
            for q in range(n):
                for r in range(n):
                    for s in range(n):
                        out[p, q, r, s] = self[p, q, r, s]
        return out


@dataclass(frozen=True)
class AOIntegrals:
    """All AO-basis integrals: overlap, kinetic, nuclear attraction, ERI."""

    S: np.ndarray
    T: np.ndarray
    V: np.ndarray
    eri: ERITensor

    @property
    def n(self) -> int:
        return self.S.shape[0]


def overlap(shells, mol: MoleculeSpec) -> np.ndarray:
    funcs = expand_shells(shells, mol)
    n = len(funcs)
    S = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            S[i, j] = S[j, i] = _contracted(_overlap_prim, funcs[i], funcs[j])
    return S


def kinetic(shells, mol: MoleculeSpec) -> np.ndarray:
    funcs = expand_shells(shells, mol)
    n = len(funcs)
    T = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            T[i, j] = T[j, i] = _contracted(_kinetic_prim, funcs[i], funcs[j])
    return T


def nuclear_attraction(shells, mol: MoleculeSpec) -> np.ndarray:
    funcs = expand_shells(shells, mol)
    n = len(funcs)
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            val = 0.0
            for atom in mol.atoms:
                val -= atom.z * _contracted(_nuclear_prim, funcs[i], funcs[j],
                                            atom.position)
            V[i, j] = V[j, i] = val
    return V


def electron_repulsion(shells, mol: MoleculeSpec) -> ERITensor:
    funcs = expand_shells(shells, mol)
    n = len(funcs)
    eri = ERITensor(n)
    for p in range(n):
        for q in range(p + 1):
            pq = ERITensor._pair(p, q)
            for r in range(n):
                for s in range(r + 1):
                    if ERITensor._pair(r, s) > pq:
                        continue
                    eri[p, q, r, s] = _contracted_eri(
                        funcs[p], funcs[q], funcs[r], funcs[s])
    return eri


def compute_ao_integrals(shells, mol: MoleculeSpec) -> AOIntegrals:
    return AOIntegrals(
        S=overlap(shells, mol),
        T=kinetic(shells, mol),
        V=nuclear_attraction(shells, mol),
        eri=electron_repulsion(shells, mol),
    )
