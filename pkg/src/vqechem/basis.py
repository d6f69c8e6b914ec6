"""Molecule input handling and STO-3G basis construction.

Internal unit system is atomic units (Bohr, Hartree).  Angstrom and degrees
appear only at I/O boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sto3g_data import STO3G

ANGSTROM_TO_BOHR = 1.0 / 0.52917721067
BOHR_TO_ANGSTROM = 0.52917721067

ELEMENTS = {
    "H": 1, "He": 2, "Li": 3, "Be": 4, "C": 6, "N": 7, "O": 8, "F": 9,
    "Cl": 17,
}


class MoleculeError(ValueError):
    """Invalid molecule definition (unknown element, odd electrons, ...)."""


class BasisError(ValueError):
    """Invalid basis definition or unsupported element."""


@dataclass(frozen=True)
class Atom:
    """A nucleus: element symbol, charge Z and position in Bohr."""

    symbol: str
    z: int
    position: np.ndarray  # shape (3,), Bohr

    def __post_init__(self):
        if self.symbol not in ELEMENTS:
            raise MoleculeError(f"unsupported element {self.symbol!r}")
        if self.z < 1:
            raise MoleculeError(f"nuclear charge must be >= 1, got {self.z}")
        object.__setattr__(self, "position",
                           np.asarray(self.position, dtype=float))


@dataclass(frozen=True)
class MoleculeSpec:
    """A molecule: atoms plus total charge; electron count is derived."""

    atoms: tuple[Atom, ...]
    charge: int = 0

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        n = self.n_electrons
        if n < 1:
            raise MoleculeError(f"molecule has {n} electrons")
        if n % 2 != 0:
            raise MoleculeError(
                f"odd electron count {n}: only closed-shell molecules are "
                "supported")
        for i, a in enumerate(self.atoms):
            for b in self.atoms[i + 1:]:
                if np.linalg.norm(a.position - b.position) < 1e-10:
                    raise MoleculeError(
                        f"atoms {a.symbol} and {b.symbol} coincide")

    @property
    def n_electrons(self) -> int:
        return sum(a.z for a in self.atoms) - self.charge


def atom(symbol: str, x: float, y: float, z: float,
         unit: str = "angstrom") -> Atom:
    """Build an Atom from coordinates in Angstrom (default) or Bohr."""
    pos = np.array([x, y, z], dtype=float)
    if unit == "angstrom":
        pos = pos * ANGSTROM_TO_BOHR
    elif unit != "bohr":
        raise ValueError(f"unknown unit {unit!r}")
    return Atom(symbol, ELEMENTS[symbol] if symbol in ELEMENTS else 0, pos)


def parse_molecule(text: str) -> MoleculeSpec:
    """Parse the XYZ-with-charge molecule format.

    First non-comment line is ``charge <int>``; each following line is
    ``<Element> <x> <y> <z>`` with coordinates in Angstrom.  ``#`` starts a
    comment.
    """
    charge = None
    atoms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if charge is None:
            if fields[0].lower() != "charge" or len(fields) != 2:
                raise MoleculeError(
                    f"line {lineno}: expected 'charge <int>', got {raw!r}")
            try:
                charge = int(fields[1])
            except ValueError:
                raise MoleculeError(
                    f"line {lineno}: bad charge value {fields[1]!r}") from None
            continue
        if len(fields) != 4:
            raise MoleculeError(
                f"line {lineno}: expected '<Element> <x> <y> <z>', "
                f"got {raw!r}")
        sym = fields[0]
        if sym not in ELEMENTS:
            raise MoleculeError(f"line {lineno}: unknown element {sym!r}")
        try:
            xyz = [float(v) for v in fields[1:]]
        except ValueError:
            raise MoleculeError(
                f"line {lineno}: malformed coordinate in {raw!r}") from None
        atoms.append(atom(sym, *xyz))
    if charge is None:
        raise MoleculeError("missing 'charge <int>' line")
    if not atoms:
        raise MoleculeError("no atoms given")
    return MoleculeSpec(tuple(atoms), charge)


@dataclass(frozen=True)
class GaussianPrimitive:
    exponent: float   # inverse Bohr^2
    coefficient: float

    def __post_init__(self):
        if self.exponent <= 0:
            raise BasisError(f"primitive exponent must be > 0, "
                             f"got {self.exponent}")


@dataclass(frozen=True)
class ContractedShell:
    """A contracted s or p shell on one atom.

    Coefficients stored here already include primitive normalization and the
    overall contraction normalization (contracted self-overlap is 1).
    """

    center: int          # index into MoleculeSpec.atoms
    l: int               # 0 = s, 1 = p
    primitives: tuple[GaussianPrimitive, ...]

    def __post_init__(self):
        if self.l not in (0, 1):
            raise BasisError(f"only s and p shells supported, got l={self.l}")
        if len(self.primitives) != 3:
            raise BasisError("STO-3G shells carry exactly 3 primitives")


@dataclass(frozen=True)
class BasisFunction:
    """One Cartesian Gaussian basis function (a single shell component)."""

    origin: np.ndarray            # Bohr
    lmn: tuple[int, int, int]     # Cartesian powers
    exponents: np.ndarray
    coefficients: np.ndarray      # fully normalized


def _primitive_norm(alpha: float, l: int) -> float:
    """Norm of a Cartesian primitive x^l e^{-a r^2} (one component, l <= 1)."""
    lx = l  # single-axis power; the p norm is identical for px, py, pz
    num = (2.0 * alpha / math.pi) ** 0.75 * (4.0 * alpha) ** (lx / 2.0)
    den = math.sqrt(_double_factorial(2 * lx - 1))
    return num / den


def _double_factorial(n: int) -> float:
    if n <= 0:
        return 1.0
    out = 1.0
    while n > 0:
        out *= n
        n -= 2
    return out


def _self_overlap(exps, coeffs, l: int) -> float:
    """Contracted self-overlap for one Cartesian component."""
    s = 0.0
    for ai, ci in zip(exps, coeffs):
        for aj, cj in zip(exps, coeffs):
            p = ai + aj
            val = (math.pi / p) ** 1.5
            if l == 1:
                val *= 1.0 / (2.0 * p)
            s += ci * cj * val
    return s


def _normalize_shell(raw_primitives, l: int):
    exps = [a for a, _ in raw_primitives]
    coeffs = [c * _primitive_norm(a, l) for a, c in raw_primitives]
    norm = 1.0 / math.sqrt(_self_overlap(exps, coeffs, l))
    return tuple(GaussianPrimitive(a, c * norm) for a, c in zip(exps, coeffs))


def build_basis(mol: MoleculeSpec, table=None) -> list[ContractedShell]:
    """Build the contracted-shell list for a molecule.

    `table` may override the embedded STO-3G parameters (same structure as
    `sto3g_data.STO3G`, e.g. from `parse_basis_override`).
    """
    table = STO3G if table is None else table
    shells = []
    for i, a in enumerate(mol.atoms):
        if a.symbol not in table:
            raise BasisError(f"no basis for element {a.symbol!r}")
        for lsym, prims in table[a.symbol]:
            l = {"s": 0, "p": 1}[lsym]
            shells.append(ContractedShell(i, l, _normalize_shell(prims, l)))
    return shells


def parse_basis_override(text: str) -> dict:
    """Parse a basis override file.

    Format (one record per element)::

        element <Symbol>
        <s|p> <exp> <coef>  <exp> <coef>  <exp> <coef>

    Blank lines and ``#`` comments are ignored.
    """
    table: dict[str, list] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0].lower() == "element":
            if len(fields) != 2:
                raise BasisError(f"line {lineno}: expected 'element <Symbol>'")
            current = fields[1]
            table[current] = []
        elif fields[0] in ("s", "p"):
            if current is None:
                raise BasisError(f"line {lineno}: shell before any element")
            if len(fields) != 7:
                raise BasisError(
                    f"line {lineno}: expected 3 (exponent, coefficient) pairs")
            vals = [float(v) for v in fields[1:]]
            prims = [(vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5])]
            table[current].append((fields[0], prims))
        else:
            raise BasisError(f"line {lineno}: unrecognized record {raw!r}")
    return table


def expand_shells(shells, mol: MoleculeSpec) -> list[BasisFunction]:
    """Expand shells into Cartesian basis functions (p -> px, py, pz)."""
    funcs = []
    for sh in shells:
        origin = mol.atoms[sh.center].position
        exps = np.array([p.exponent for p in sh.primitives])
        coeffs = np.array([p.coefficient for p in sh.primitives])
        if sh.l == 0:
            lmns = [(0, 0, 0)]
        else:
            lmns = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        for lmn in lmns:
            funcs.append(BasisFunction(origin, lmn, exps, coeffs))
    return funcs


def n_spatial_orbitals(mol: MoleculeSpec, table=None) -> int:
    return len(expand_shells(build_basis(mol, table), mol))


def nuclear_repulsion(mol: MoleculeSpec) -> float:
    """Sum of Z_I Z_J / |R_I - R_J| over nuclear pairs, in Hartree."""
    e = 0.0
    for i, a in enumerate(mol.atoms):
        for b in mol.atoms[i + 1:]:
            r = np.linalg.norm(a.position - b.position)
            if r < 1e-10:
                raise MoleculeError("coincident atoms in nuclear repulsion")
            e += a.z * b.z / r
    return e
