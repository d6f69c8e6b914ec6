import numpy as np
import pytest

from vqechem.fermion_qubit import jordan_wigner, number_operator, spin_z_operator
from vqechem.statevector import expectation, prepare_occupation
from vqechem.uccsd import (AnsatzProgram, Excitation, apply_ansatz,
                           build_ansatz, dump_program, generate_excitations,
                           generator, uccsd_ansatz)

import oracles


def test_h2_excitation_counts():
    excs = generate_excitations(2, 4)
    singles = [e for e in excs if e.kind == "single"]
    doubles = [e for e in excs if e.kind == "double"]
    assert len(singles) == 2
    assert len(doubles) == 1
    assert doubles[0] == Excitation((0, 1), (2, 3))


def test_full_space_is_rejected():
    with pytest.raises(ValueError, match="virtual"):
        generate_excitations(2, 2)


def test_excitations_conserve_spin():
    for e in generate_excitations(4, 12):
        so = sum(p % 2 for p in e.occupied)
        sv = sum(p % 2 for p in e.virtual)
        assert so == sv


def test_excitations_lexicographic_and_deterministic():
    a = generate_excitations(4, 10)
    b = generate_excitations(4, 10)
    assert a == b
    singles = [e for e in a if e.kind == "single"]
    assert singles == sorted(singles, key=lambda e: (e.occupied, e.virtual))


def test_water_sector_contains_reference_double():
    excs = generate_excitations(10, 14)
    assert Excitation((4, 5), (12, 13)) in excs


def test_generator_is_antihermitian():
    for exc in (Excitation((0,), (2,)), Excitation((0, 1), (2, 3))):
        g = generator(exc)
        mat = oracles.fermion_operator_matrix(g, 4)
        assert np.allclose(mat, -mat.conj().T, atol=1e-14)


def test_generator_term_counts_and_coefficients():
    g1 = jordan_wigner(generator(Excitation((0,), (2,))), 4).simplify()
    assert len(g1) == 2
    assert all(abs(c.real) < 1e-15 and abs(abs(c.imag) - 0.5) < 1e-15
               for c in g1.terms.values())
    g2 = jordan_wigner(generator(Excitation((0, 1), (2, 3))), 4).simplify()
    assert len(g2) == 8
    assert all(abs(c.real) < 1e-15 and abs(abs(c.imag) - 0.125) < 1e-15
               for c in g2.terms.values())


def test_ansatz_unitary_matches_dense_single_factor():
    prog = build_ansatz([Excitation((0, 1), (2, 3))], 4)
    ref = prepare_occupation(4, (0, 1))
    theta = 0.37
    out = apply_ansatz(ref, prog, np.array([theta]))
    g = oracles.fermion_operator_matrix(generator(Excitation((0, 1), (2, 3))), 4)
    w, v = np.linalg.eigh(1j * g)  # g is anti-Hermitian, ig Hermitian
    U = (v * np.exp(-0.5j * theta * w)) @ v.conj().T  # exp((theta/2) g)
    assert np.allclose(out.amplitudes, U @ ref.amplitudes, atol=1e-12)


def test_zero_angles_are_identity():
    prog = uccsd_ansatz(2, 4)
    ref = prepare_occupation(4, (0, 1))
    out = apply_ansatz(ref, prog, np.zeros(prog.n_parameters))
    assert np.allclose(out.amplitudes, ref.amplitudes, atol=1e-15)


def test_ansatz_preserves_particle_number_and_sz():
    M, N = 14, 10
    prog = uccsd_ansatz(N, M)
    rng = np.random.default_rng(8)
    theta = rng.normal(scale=0.1, size=prog.n_parameters)
    ref = prepare_occupation(M, tuple(range(N)))
    out = apply_ansatz(ref, prog, theta)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    n_op = jordan_wigner(number_operator(M), M)
    sz_op = jordan_wigner(spin_z_operator(M), M)
    assert expectation(out, n_op) == pytest.approx(N, abs=1e-10)
    assert expectation(out, sz_op) == pytest.approx(0.0, abs=1e-10)
    # not just in expectation: variance of N vanishes
    assert expectation(out, n_op * n_op) == pytest.approx(N * N, abs=1e-9)


def test_single_parameter_periodicity():
    # theta = pi is the fully excited state, so a 2*pi shift flips the sign
    # of the rotated component (same energy) and 4*pi returns the state
    prog = build_ansatz([Excitation((0,), (2,))], 4)
    ref = prepare_occupation(4, (0, 1))
    a = apply_ansatz(ref, prog, np.array([0.4]))
    b = apply_ansatz(ref, prog, np.array([0.4 + 2 * np.pi]))
    c = apply_ansatz(ref, prog, np.array([0.4 + 4 * np.pi]))
    assert np.allclose(b.amplitudes, -a.amplitudes, atol=1e-12)
    assert np.allclose(c.amplitudes, a.amplitudes, atol=1e-12)


def test_trotter_ordering_effect_is_second_order(h2_hamiltonian):
    """Reversing the factor order changes the state only at the size of the
    neglected commutators; shrinking the angles tenfold shrinks the
    difference a hundredfold."""
    prog = uccsd_ansatz(2, 4)
    rev_prog = AnsatzProgram(4, tuple(reversed(prog.excitations)),
                             tuple(reversed(prog.rotations)))
    ref = prepare_occupation(4, (0, 1))

    def diff(scale):
        theta = scale * np.array([0.02, 0.02, -0.11])
        fwd = apply_ansatz(ref, prog, theta)
        rev = apply_ansatz(ref, rev_prog, theta[::-1])
        return np.linalg.norm(fwd.amplitudes - rev.amplitudes)

    d1, d01 = diff(1.0), diff(0.1)
    assert d1 < 0.01
    assert d01 < 0.02 * d1  # quadratic scaling, with slack


def test_reversed_order_energy_shift_below_tolerance(h2_hamiltonian):
    from vqechem.vqe import sequential_optimize
    prog = uccsd_ansatz(2, 4)
    ref = prepare_occupation(4, (0, 1))
    res = sequential_optimize(h2_hamiltonian, prog, ref)
    e_canonical = expectation(apply_ansatz(ref, prog, res.theta),
                              h2_hamiltonian)
    rev_exc = AnsatzProgram(4, tuple(reversed(prog.excitations)),
                            tuple(reversed(prog.rotations)))
    rev_pauli = AnsatzProgram(4, prog.excitations,
                              tuple(tuple(reversed(r))
                                    for r in prog.rotations))
    e_rev = expectation(apply_ansatz(ref, rev_exc, res.theta[::-1]),
                        h2_hamiltonian)
    e_rev_p = expectation(apply_ansatz(ref, rev_pauli, res.theta),
                          h2_hamiltonian)
    assert abs(e_rev - e_canonical) < 1e-6
    assert abs(e_rev_p - e_canonical) < 1e-6


def test_prefix_application_composes():
    prog = uccsd_ansatz(2, 4)
    theta = np.array([0.1, -0.2, 0.3])
    ref = prepare_occupation(4, (0, 1))
    full = apply_ansatz(ref, prog, theta)
    half = apply_ansatz(ref, prog, theta, stop=2)
    rest = apply_ansatz(half, prog, theta, start=2)
    assert np.allclose(full.amplitudes, rest.amplitudes, atol=1e-14)


def test_dump_program_mentions_every_excitation():
    prog = uccsd_ansatz(2, 4)
    text = dump_program(prog)
    for exc in prog.excitations:
        assert repr(exc) in text
