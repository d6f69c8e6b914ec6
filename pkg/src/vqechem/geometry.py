"""Parameterized molecular templates, energy-surface scans and geometry
optimization (Hartree-Fock seed followed by a paraboloid fit of UCCSD
samples).

Template parameters are Angstrom / degrees; for the pyramidal templates the
angle is measured between each X-H bond and the threefold symmetry axis,
not between two bonds.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .basis import (ANGSTROM_TO_BOHR, ELEMENTS, Atom, MoleculeSpec,
                    build_basis, nuclear_repulsion)
from .integrals import compute_ao_integrals
from .scf import run_rhf
from .vqe import SweepConfig, solve_molecule

log = logging.getLogger("vqechem.geometry")

TEMPLATE_KINDS = ("diatomic", "linear-xh2", "bent-xh2", "pyramidal-xh3",
                  "tetrahedral-xh4")


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class GeometryTemplate:
    """A molecular shape with 1 or 2 free parameters.

    kind            parameters
    diatomic        (distance,)
    linear-xh2      (distance,)               H-X-H colinear
    bent-xh2        (distance, bond angle)
    pyramidal-xh3   (distance, axis angle)
    tetrahedral-xh4 (distance,)
    """

    kind: str
    elements: tuple[str, ...]   # diatomic: both atoms; others: central atom
    charge: int = 0

    def __post_init__(self):
        if self.kind not in TEMPLATE_KINDS:
            raise GeometryError(f"unknown template kind {self.kind!r}")
        for e in self.elements:
            if e not in ELEMENTS:
                raise GeometryError(f"unknown element {e!r}")
        n_needed = 2 if self.kind == "diatomic" else 1
        if len(self.elements) != n_needed:
            raise GeometryError(
                f"{self.kind} takes {n_needed} element(s), "
                f"got {len(self.elements)}")

    @property
    def n_parameters(self) -> int:
        return 2 if self.kind in ("bent-xh2", "pyramidal-xh3") else 1


@dataclass(frozen=True)
class SurfaceSample:
    """One scanned point: parameters (Angstrom/degrees) and both energies."""

    parameters: tuple
    e_hf: float
    e_uccsd: float


def _check_params(t: GeometryTemplate, params):
    params = tuple(float(p) for p in params)
    if len(params) != t.n_parameters:
        raise GeometryError(f"{t.kind} takes {t.n_parameters} parameter(s), "
                            f"got {len(params)}")
    if params[0] <= 0.1:
        raise GeometryError(f"distance must exceed 0.1 A, got {params[0]}")
    if t.n_parameters == 2 and not 0.0 < params[1] < 180.0:
        raise GeometryError(f"angle must be in (0, 180) degrees, "
                            f"got {params[1]}")
    return params


def build_geometry(t: GeometryTemplate, params) -> MoleculeSpec:
    """Realize a template at the given parameters as Cartesian coordinates."""
    params = _check_params(t, params)
    d = params[0] * ANGSTROM_TO_BOHR

    def _atom(sym, pos):
        return Atom(sym, ELEMENTS[sym], np.asarray(pos, dtype=float))

    if t.kind == "diatomic":
        e1, e2 = t.elements
        atoms = [_atom(e1, (0.0, 0.0, 0.0)), _atom(e2, (0.0, 0.0, d))]
    elif t.kind == "linear-xh2":
        x, = t.elements
        atoms = [_atom(x, (0.0, 0.0, 0.0)),
                 _atom("H", (0.0, 0.0, -d)), _atom("H", (0.0, 0.0, d))]
    elif t.kind == "bent-xh2":
        x, = t.elements
        half = math.radians(params[1]) / 2.0
        atoms = [_atom(x, (0.0, 0.0, 0.0)),
                 _atom("H", (d * math.sin(half), 0.0, d * math.cos(half))),
                 _atom("H", (-d * math.sin(half), 0.0, d * math.cos(half)))]
    elif t.kind == "pyramidal-xh3":
        x, = t.elements
        beta = math.radians(params[1])
        atoms = [_atom(x, (0.0, 0.0, 0.0))]
        for k in range(3):
            phi = 2.0 * math.pi * k / 3.0
            atoms.append(_atom("H", (d * math.sin(beta) * math.cos(phi),
                                     d * math.sin(beta) * math.sin(phi),
                                     d * math.cos(beta))))
    else:  # tetrahedral-xh4
        x, = t.elements
        atoms = [_atom(x, (0.0, 0.0, 0.0))]
        for corner in ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)):
            atoms.append(_atom("H", d / math.sqrt(3.0) * np.array(corner)))
    return MoleculeSpec(tuple(atoms), t.charge)


def hf_energy(t: GeometryTemplate, params) -> float:
    mol = build_geometry(t, params)
    shells = build_basis(mol)
    ao = compute_ao_integrals(shells, mol)
    return run_rhf(ao, mol).energy


def scan(t: GeometryTemplate, grid, cfg: SweepConfig | None = None):
    """Run the full HF + VQE pipeline on every grid point.

    Per-point failures are recorded (sample energies become NaN) and the
    scan continues.  Returns (samples, errors) with errors keyed by
    parameter tuple.
    """
    samples = []
    errors = {}
    for params in grid:
        params = tuple(float(p) for p in np.atleast_1d(params))
        try:
            result = solve_molecule(build_geometry(t, params), cfg)
            samples.append(SurfaceSample(params, result.hf_energy,
                                         result.uccsd_energy))
        except Exception as exc:  # per-point failure must not kill the scan
            log.warning("scan point %s failed: %s", params, exc)
            errors[params] = str(exc)
            samples.append(SurfaceSample(params, math.nan, math.nan))
    return samples, errors


class FitError(ValueError):
    pass


def paraboloid_fit(samples):
    """Least-squares quadratic fit E = c + g.p + p.Q.p/2 over samples.

    Accepts SurfaceSamples (using e_uccsd) or (params, energy) pairs.
    Returns (params_min, e_fit, info) where info carries the fitted
    coefficients and the design-matrix condition number.
    """
    pts = []
    for s in samples:
        if isinstance(s, SurfaceSample):
            pts.append((np.atleast_1d(s.parameters).astype(float), s.e_uccsd))
        else:
            p, e = s
            pts.append((np.atleast_1d(p).astype(float), float(e)))
    ndim = pts[0][0].size
    n_coef = 3 if ndim == 1 else 6
    if len(pts) < n_coef:
        raise FitError(f"need at least {n_coef} samples for {ndim} "
                       f"parameter(s), got {len(pts)}")

    rows, rhs = [], []
    for p, e in pts:
        if not np.isfinite(e):
            continue
        if ndim == 1:
            rows.append([1.0, p[0], 0.5 * p[0] ** 2])
        else:
            rows.append([1.0, p[0], p[1], 0.5 * p[0] ** 2, 0.5 * p[1] ** 2,
                        p[0] * p[1]])
        rhs.append(e)
    A = np.array(rows)
    if len(rhs) < n_coef:
        raise FitError("not enough finite samples for the fit")
    coef, _, rank, svals = np.linalg.lstsq(A, np.array(rhs), rcond=None)
    if rank < n_coef:
        raise FitError("under-determined sample set (rank-deficient fit)")
    cond = float(svals[0] / svals[-1])

    if ndim == 1:
        c, g, q = coef
        Q = np.array([[q]])
        gvec = np.array([g])
    else:
        c = coef[0]
        gvec = coef[1:3]
        Q = np.array([[coef[3], coef[5]], [coef[5], coef[4]]])
    evals = np.linalg.eigvalsh(Q)
    if evals.min() <= 0:
        raise FitError("no interior minimum: fitted quadratic form is not "
                       "positive definite")
    pmin = -np.linalg.solve(Q, gvec)
    e_fit = float(c + gvec @ pmin + 0.5 * pmin @ Q @ pmin)
    info = {"constant": float(c), "gradient": gvec.tolist(),
            "hessian": Q.tolist(), "condition_number": cond}
    return pmin, e_fit, info


_DEFAULT_BOUNDS = {"distance": (0.3, 3.5), "angle": (40.0, 175.0)}


def optimize_hf_geometry(t: GeometryTemplate, initial=None,
                         d_tol: float = 1e-4, a_tol: float = 1e-2,
                         max_cycles: int = 40):
    """Stage 1: minimize the HF energy by cyclic 1-D bounded searches."""
    nd = t.n_parameters
    p = np.array(initial if initial is not None
                 else ([1.0] if nd == 1 else [1.0, 100.0]), dtype=float)
    bounds = [_DEFAULT_BOUNDS["distance"]]
    if nd == 2:
        bounds.append(_DEFAULT_BOUNDS["angle"])
    tols = [d_tol] + ([a_tol] if nd == 2 else [])

    for _ in range(max_cycles):
        moved = 0.0
        for axis in range(nd):
            def f(v):
                q = p.copy()
                q[axis] = v
                return hf_energy(t, q)
            res = scipy.optimize.minimize_scalar(
                f, bounds=bounds[axis], method="bounded",
                options={"xatol": tols[axis] * 0.1})
            moved = max(moved, abs(res.x - p[axis]) / tols[axis])
            p[axis] = res.x
        if moved < 1.0:
            break
    return p


def _stencil(center, nd, step_d, step_a):
    if nd == 1:
        return [(center[0] + o,) for o in (-step_d, 0.0, step_d)]
    pts = []
    for od in (-step_d, 0.0, step_d):
        for oa in (-step_a, 0.0, step_a):
            pts.append((center[0] + od, center[1] + oa))
    return pts


def optimize_geometry(t: GeometryTemplate, cfg: SweepConfig | None = None,
                      hf_initial=None, step_d: float = 0.05,
                      step_a: float = 2.0):
    """Two-stage geometry optimization.

    Stage 1 minimizes the HF energy over the template parameters; stage 2
    samples a UCCSD stencil (+-step_d Angstrom, +-step_a degrees) centered
    there, fits a paraboloid, refits once re-centered if the minimum moved
    by more than half the stencil, and returns the fitted minimum with the
    VQE energy evaluated at it.
    """
    nd = t.n_parameters
    center = np.asarray(optimize_hf_geometry(t, hf_initial), dtype=float)
    hf_optimum = center.copy()

    half = np.array([0.5 * step_d] + ([0.5 * step_a] if nd == 2 else []))
    fits = []
    for attempt in range(2):
        pts = _stencil(center, nd, step_d, step_a)
        samples, errors = scan(t, pts, cfg)
        if errors:
            raise GeometryError(f"stencil points failed: {errors}")
        pmin, e_fit, info = paraboloid_fit(samples)
        fits.append({"center": center.tolist(), "minimum": pmin.tolist(),
                     "e_fit": e_fit, **info})
        if np.all(np.abs(pmin - center) <= half):
            break
        center = pmin  # re-center once and refit
    params_min = tuple(float(v) for v in pmin)
    final = solve_molecule(build_geometry(t, params_min), cfg)
    report = {
        "template": {"kind": t.kind, "elements": list(t.elements),
                     "charge": t.charge},
        "hf_optimum": hf_optimum.tolist(),
        "fits": fits,
        "parameters": list(params_min),
        "e_uccsd": final.uccsd_energy,
        "e_hf": final.hf_energy,
        "n_qubits": final.n_qubits,
    }
    return params_min, final.uccsd_energy, report


# Table-style molecule registry: all supported species by name.
MOLECULES: dict[str, GeometryTemplate] = {
    "H2": GeometryTemplate("diatomic", ("H", "H")),
    "HeH+": GeometryTemplate("diatomic", ("He", "H"), charge=1),
    "LiH": GeometryTemplate("diatomic", ("Li", "H")),
    "OH-": GeometryTemplate("diatomic", ("O", "H"), charge=-1),
    "HF": GeometryTemplate("diatomic", ("F", "H")),
    "BeH2": GeometryTemplate("linear-xh2", ("Be",)),
    "H2O": GeometryTemplate("bent-xh2", ("O",)),
    "H3O+": GeometryTemplate("pyramidal-xh3", ("O",), charge=1),
    "NH3": GeometryTemplate("pyramidal-xh3", ("N",)),
    "CH4": GeometryTemplate("tetrahedral-xh4", ("C",)),
    "NH4+": GeometryTemplate("tetrahedral-xh4", ("N",), charge=1),
    "F2": GeometryTemplate("diatomic", ("F", "F")),
    "HCl": GeometryTemplate("diatomic", ("Cl", "H")),
    "CO": GeometryTemplate("diatomic", ("C", "O")),
}
