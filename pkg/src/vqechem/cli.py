"""Command-line front end.

Subcommands: hf, energy, scan, sweep, optimize, fcidump, table1.
Exit codes: 0 ok, 1 usage error, 2 numeric failure (SCF/Lanczos
non-convergence), 3 I/O error.  All energies are Hartree; distances
Angstrom; angles degrees; at least 9 significant digits everywhere.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import geometry
from .basis import MoleculeSpec, MoleculeError, BasisError, parse_molecule
from .fermion_qubit import FCIDumpError, export_fcidump, import_fcidump
from .geometry import (GeometryError, GeometryTemplate, FitError, MOLECULES,
                       build_geometry, optimize_geometry, paraboloid_fit, scan)
from .scf import SCFError
from .statevector import prepare_occupation
from .uccsd import Excitation, uccsd_ansatz, apply_ansatz
from .vqe import (LanczosError, SweepConfig, impact_order, prepare_problem,
                  solve_molecule, sequential_optimize)
from .fermion_qubit import qubit_hamiltonian
from .statevector import CompiledObservable

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_IO = 3

# Species needing 16+ qubits are opt-in: desk-scale runtime grows steeply.
BIG_MOLECULES = ("H3O+", "NH3", "CH4", "NH4+", "F2", "HCl", "CO")

TABLE1_START = {
    # molecule -> starting guess for the HF stage (Angstrom / degrees)
    "H2": (0.7,), "HeH+": (0.9,), "LiH": (1.6,), "OH-": (1.0,),
    "HF": (1.0,), "BeH2": (1.3,), "H2O": (1.0, 100.0),
    "H3O+": (1.0, 70.0), "NH3": (1.05, 65.0), "CH4": (1.1,),
    "NH4+": (1.05,), "F2": (1.4,), "HCl": (1.3,), "CO": (1.15,),
}


class UsageError(ValueError):
    pass


def _parse_template(spec: str) -> GeometryTemplate:
    """Parse 'kind:Elem[,Elem]' or a registered molecule name like 'H2O'."""
    if spec in MOLECULES:
        return MOLECULES[spec]
    if ":" not in spec:
        raise UsageError(
            f"unknown molecule {spec!r}; use a registered name "
            f"({', '.join(MOLECULES)}) or 'kind:Elements[:charge]'")
    parts = spec.split(":")
    kind = parts[0]
    elements = tuple(parts[1].split(","))
    charge = int(parts[2]) if len(parts) > 2 else 0
    return GeometryTemplate(kind, elements, charge)


def _load_input(args):
    """Resolve the molecule from --molecule or --template/--params."""
    if bool(args.molecule) == bool(args.template):
        raise UsageError("exactly one of --molecule or --template required")
    if args.molecule:
        try:
            with open(args.molecule, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise IOError(f"cannot read {args.molecule}: {exc}") from exc
        return parse_molecule(text), None, None
    template = _parse_template(args.template)
    if args.params is None:
        raise UsageError("--template requires --params")
    params = tuple(float(p) for p in args.params.split(","))
    return build_geometry(template, params), template, params


def _sweep_config(args) -> SweepConfig:
    return SweepConfig(max_sweeps=args.max_sweeps,
                       energy_tol=args.energy_tol)


def _emit(args, payload: dict, csv_rows=None, csv_header=None):
    """Write the report in the requested format to --output or stdout."""
    if args.format == "csv" and csv_rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(csv_header)
        w.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise IOError(f"cannot write {args.output}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return f"{x:.9f}"


def cmd_hf(args) -> int:
    mol, _, _ = _load_input(args)
    from .basis import build_basis
    from .integrals import compute_ao_integrals
    from .scf import run_rhf
    shells = build_basis(mol)
    ao = compute_ao_integrals(shells, mol)
    hf = run_rhf(ao, mol)
    payload = {
        "command": "hf",
        "e_hf": hf.energy,
        "orbital_energies": hf.orbital_energies.tolist(),
        "n_iterations": hf.n_iterations,
        "n_electrons": mol.n_electrons,
    }
    _emit(args, payload)
    print(f"E_HF = {_fmt(hf.energy)} Hartree", file=sys.stderr)
    return EXIT_OK


def cmd_energy(args) -> int:
    mol, _, _ = _load_input(args)
    res = solve_molecule(mol, _sweep_config(args))
    payload = {
        "command": "energy",
        "e_hf": res.hf_energy,
        "e_uccsd": res.uccsd_energy,
        "n_qubits": res.n_qubits,
        "n_excitations": res.program.n_parameters,
        "sweep_trace": list(res.vqe.sweep_trace),
        "n_evaluations": res.vqe.n_evaluations,
        "converged": res.vqe.converged,
    }
    _emit(args, payload)
    print(f"E_HF = {_fmt(res.hf_energy)}  "
          f"E_UCCSD = {_fmt(res.uccsd_energy)} Hartree  "
          f"({res.n_qubits} qubits, {res.program.n_parameters} excitations)",
          file=sys.stderr)
    return EXIT_OK


def _parse_range(spec: str):
    """'start:stop:count' inclusive linear grid."""
    try:
        start, stop, count = spec.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise UsageError(f"bad range {spec!r}, expected start:stop:count")
    if count < 1 or (count == 1 and stop != start):
        raise UsageError(f"bad range {spec!r}")
    return np.linspace(start, stop, count)


def cmd_scan(args) -> int:
    if not args.template:
        raise UsageError("scan requires --template")
    template = _parse_template(args.template)
    if not args.range1:
        raise UsageError("scan requires --range1")
    g1 = _parse_range(args.range1)
    if template.n_parameters == 2:
        if not args.range2:
            raise UsageError(f"{template.kind} needs --range2 as well")
        g2 = _parse_range(args.range2)
        grid = [(a, b) for a in g1 for b in g2]
    else:
        if args.range2:
            raise UsageError(f"{template.kind} takes only --range1")
        grid = [(a,) for a in g1]
    samples, errors = scan(template, grid, _sweep_config(args))
    rows = []
    for s in samples:
        p2 = s.parameters[1] if len(s.parameters) == 2 else ""
        rows.append([repr(float(s.parameters[0])),
                     repr(float(p2)) if p2 != "" else "",
                     repr(float(s.e_hf)), repr(float(s.e_uccsd))])
    payload = {
        "command": "scan",
        "samples": [{"parameters": list(s.parameters), "e_hf": s.e_hf,
                     "e_uccsd": s.e_uccsd} for s in samples],
        "errors": {str(k): v for k, v in errors.items()},
    }
    if args.format == "json":
        _emit(args, payload)
    else:
        _emit(args, payload, rows, ["param1", "param2", "e_hf", "e_uccsd"])
    return EXIT_OK


def _parse_excitation(spec: str) -> Excitation:
    """'4,5->12,13' or '0->2'."""
    try:
        occ, virt = spec.split("->")
        occupied = tuple(sorted(int(v) for v in occ.split(",")))
        virtual = tuple(sorted(int(v) for v in virt.split(",")))
    except ValueError:
        raise UsageError(f"bad excitation {spec!r}, expected 'i[,j]->a[,b]'")
    if len(occupied) not in (1, 2) or len(occupied) != len(virtual):
        raise UsageError(f"bad excitation {spec!r}")
    return Excitation(occupied, virtual)


def cmd_sweep(args) -> int:
    mol, _, _ = _load_input(args)
    if not args.excitation:
        raise UsageError("sweep requires --excitation 'i[,j]->a[,b]'")
    exc = _parse_excitation(args.excitation)
    grid = _parse_range(args.theta_range)
    if grid.size < 2:
        raise UsageError("sweep needs a grid of at least 2 angles")
    hf, mo, H, prog, reference = prepare_problem(mol)
    try:
        k = prog.excitations.index(exc)
    except ValueError:
        raise UsageError(f"excitation {exc!r} not in the UCCSD list for "
                         f"this molecule")
    compiled = CompiledObservable(H)
    theta = np.zeros(prog.n_parameters)
    rows = []
    for t in grid:
        theta[k] = t
        e = compiled.expectation(apply_ansatz(reference, prog, theta))
        rows.append([repr(float(t)), repr(float(e))])
    payload = {
        "command": "sweep",
        "excitation": repr(exc),
        "samples": [{"theta": float(t), "energy": float(r[1])}
                    for t, r in zip(grid, rows)],
        "e_hf": hf.energy,
    }
    if args.format == "json":
        _emit(args, payload)
    else:
        _emit(args, payload, rows, ["theta", "energy"])
    return EXIT_OK


def cmd_optimize(args) -> int:
    if not args.template:
        raise UsageError("optimize requires --template")
    template = _parse_template(args.template)
    initial = None
    if args.params:
        initial = tuple(float(p) for p in args.params.split(","))
    elif args.template in TABLE1_START:
        initial = TABLE1_START[args.template]
    params, e_min, report = optimize_geometry(
        template, _sweep_config(args), hf_initial=initial)
    payload = {"command": "optimize", **report}
    _emit(args, payload)
    print("optimum: " + ", ".join(_fmt(p) for p in params)
          + f"  E = {_fmt(e_min)} Hartree", file=sys.stderr)
    return EXIT_OK


def cmd_fcidump(args) -> int:
    if args.import_file:
        try:
            with open(args.import_file, encoding="utf-8") as fh:
                mo, nelec = import_fcidump(fh.read())
        except OSError as exc:
            raise IOError(str(exc)) from exc
        H = qubit_hamiltonian(mo)
        prog = uccsd_ansatz(nelec, mo.n_spin_orbitals)
        reference = prepare_occupation(mo.n_spin_orbitals, range(nelec))
        prog = impact_order(H, prog, reference)
        res = sequential_optimize(H, prog, reference, _sweep_config(args))
        payload = {
            "command": "fcidump-import",
            "e_uccsd": res.energy,
            "n_qubits": mo.n_spin_orbitals,
            "converged": res.converged,
        }
        _emit(args, payload)
        return EXIT_OK
    mol, _, _ = _load_input(args)
    from .basis import build_basis
    from .integrals import compute_ao_integrals
    from .scf import mo_transform, run_rhf
    shells = build_basis(mol)
    ao = compute_ao_integrals(shells, mol)
    hf = run_rhf(ao, mol)
    mo = mo_transform(ao, hf, mol)
    text = export_fcidump(mo, mol.n_electrons)
    out = args.output or "FCIDUMP"
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOError(f"cannot write {out}: {exc}") from exc
    print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def cmd_table1(args) -> int:
    """Optimize every registered molecule; big species only with --big."""
    names = [n for n in MOLECULES
             if args.big or n not in BIG_MOLECULES]
    if args.only:
        names = [n for n in args.only.split(",") if n in MOLECULES]
    rows = []
    entries = []
    for name in names:
        template = MOLECULES[name]
        params, e_min, report = optimize_geometry(
            template, _sweep_config(args), hf_initial=TABLE1_START[name])
        entry = {"molecule": name, "n_qubits": report["n_qubits"],
                 "energy": e_min, "parameters": list(params)}
        entries.append(entry)
        p2 = params[1] if len(params) == 2 else ""
        rows.append([name, report["n_qubits"], repr(float(e_min)),
                     repr(float(params[0])),
                     repr(float(p2)) if p2 != "" else ""])
        print(f"{name:6s} {report['n_qubits']:3d} qubits  "
              f"E = {_fmt(e_min)}  at " + ", ".join(_fmt(p) for p in params),
              file=sys.stderr)
    payload = {"command": "table1", "rows": entries}
    if args.format == "json":
        _emit(args, payload)
    else:
        _emit(args, payload, rows,
              ["molecule", "qubits", "energy", "distance", "angle"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqechem",
        description="UCCSD/VQE ground-state energies of small molecules "
                    "on a statevector simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, molecule=True):
        if molecule:
            p.add_argument("--molecule", help="molecule file (XYZ-with-charge)")
            p.add_argument("--template",
                           help="registered name (H2O, ...) or kind:Elems[:q]")
            p.add_argument("--params",
                           help="comma-separated template parameters (A, deg)")
        p.add_argument("--output", help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--max-sweeps", type=int, default=3)
        p.add_argument("--energy-tol", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0,
                       help="random seed (shot-based estimator only)")
        p.add_argument("--threads", type=int, default=1)

    add_common(sub.add_parser("hf", help="Hartree-Fock only"))
    add_common(sub.add_parser("energy", help="full pipeline, fixed geometry"))

    p = sub.add_parser("scan", help="energy-surface grid scan")
    add_common(p)
    p.add_argument("--range1", help="param 1 grid start:stop:count")
    p.add_argument("--range2", help="param 2 grid start:stop:count")
    p.set_defaults(format="csv")

    p = sub.add_parser("sweep", help="single-excitation angle sweep")
    add_common(p)
    p.add_argument("--excitation", help="e.g. '4,5->12,13'")
    p.add_argument("--theta-range", default=f"{-math.pi}:{math.pi}:65")
    p.set_defaults(format="csv")

    add_common(sub.add_parser("optimize", help="geometry optimization"))

    p = sub.add_parser("fcidump", help="FCIDUMP export / import+solve")
    add_common(p)
    p.add_argument("--import-file", help="run the pipeline from this FCIDUMP")

    p = sub.add_parser("table1", help="optimize all registered molecules")
    add_common(p, molecule=False)
    p.add_argument("--big", action="store_true",
                   help="include the 16-20 qubit species")
    p.add_argument("--only", help="comma-separated subset of molecule names")
    return parser


_COMMANDS = {
    "hf": cmd_hf, "energy": cmd_energy, "scan": cmd_scan,
    "sweep": cmd_sweep, "optimize": cmd_optimize, "fcidump": cmd_fcidump,
    "table1": cmd_table1,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, MoleculeError, BasisError, GeometryError, FitError,
            FCIDumpError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SCFError, LanczosError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except IOError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
