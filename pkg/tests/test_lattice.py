"""Geometry, operator construction, and Hamiltonian oracles.

The numeric oracles here (single-rung spectrum, all-down energy) are
computed independently inside the tests, not read back from the module
under test.
"""

import math

import numpy as np
import pytest

from spinladder.errors import InvalidArgumentError
from spinladder.lattice import (
    INITIAL_STATE_KINDS,
    LadderParams,
    build_hamiltonian,
    build_initial_state,
    dressed_gap,
    leg_bonds,
    mediating_mask,
    pauli_string,
    uniform_mask,
)


# ---------------------------------------------------------------- pauli_string

def test_single_z_site1():
    # |0> is spin-down with sigma_z eigenvalue -1 and site 1 is the most
    # significant factor, so basis states |00>, |01> pick up -1.
    op = pauli_string("z", [1], 2)
    assert np.array_equal(op, np.diag([-1.0, -1.0, 1.0, 1.0]).astype(complex))


def test_single_z_site2():
    op = pauli_string("z", [2], 2)
    assert np.array_equal(op, np.diag([-1.0, 1.0, -1.0, 1.0]).astype(complex))


def test_xx_is_antidiagonal_ones():
    op = pauli_string("xx", [1, 2], 2)
    assert np.array_equal(op, np.fliplr(np.eye(4)).astype(complex))


def test_pauli_string_squares_to_identity(rng):
    n = 3
    op = pauli_string("xzy", [2, 1, 3], n)
    assert np.allclose(op @ op, np.eye(2 ** n))
    assert np.allclose(op, op.conj().T)
    assert abs(np.trace(op)) < 1e-12


def test_pauli_string_site_order_irrelevant():
    a = pauli_string("xy", [1, 2], 2)
    b = pauli_string("yx", [2, 1], 2)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("axes,sites", [
    ("xx", [1, 1]),       # duplicate site
    ("x", [0]),           # out of range
    ("x", [3]),           # out of range
    ("xy", [1]),          # length mismatch
    ("q", [1]),           # unknown axis
])
def test_pauli_string_rejects(axes, sites):
    with pytest.raises(InvalidArgumentError):
        pauli_string(axes, sites, 2)


# ---------------------------------------------------------------- LadderParams

def test_default_params():
    p = LadderParams()
    assert (p.n_rungs, p.j_perp, p.j_parallel, p.g, p.d, p.h) == (3, 1.0, 1.0, 1.0, 0.5, 100.0)
    assert p.field_mask == frozenset({2})
    assert p.n_sites == 6
    assert p.dim == 64


def test_mask_defaults_scale_with_size():
    assert LadderParams(n_rungs=2).field_mask == frozenset()
    assert LadderParams(n_rungs=5).field_mask == frozenset({2, 3, 4})
    assert LadderParams(n_rungs=1).field_mask == frozenset()


def test_masks():
    assert mediating_mask(3) == frozenset({2})
    assert mediating_mask(2) == frozenset()
    assert uniform_mask(2) == frozenset({1, 2})


def test_params_validation():
    with pytest.raises(InvalidArgumentError):
        LadderParams(n_rungs=0)
    with pytest.raises(InvalidArgumentError):
        LadderParams(n_rungs=2.5)
    with pytest.raises(InvalidArgumentError):
        LadderParams(h=float("nan"))
    with pytest.raises(InvalidArgumentError):
        LadderParams(g=float("inf"))
    with pytest.raises(InvalidArgumentError):
        LadderParams(n_rungs=3, field_mask={4})


def test_replace_resets_mask_on_resize():
    p = LadderParams()  # mask {2}
    grown = p.replace(n_rungs=5)
    assert grown.field_mask == frozenset({2, 3, 4})
    # explicit mask wins over the reset
    custom = p.replace(n_rungs=4, field_mask={1})
    assert custom.field_mask == frozenset({1})
    # replacing an unrelated field keeps the mask
    assert p.replace(h=17.0).field_mask == frozenset({2})


def test_leg_bonds_order():
    # top leg first, then bottom: this ordering is the disorder contract
    assert leg_bonds(3) == [(1, 3), (3, 5), (2, 4), (4, 6)]
    assert leg_bonds(1) == []


# ------------------------------------------------------------ build_hamiltonian

def test_hamiltonian_is_hermitian():
    ham = build_hamiltonian(LadderParams())
    assert ham.shape == (64, 64)
    assert np.abs(ham - ham.conj().T).max() < 1e-14


def test_all_down_energy_reference():
    """Diagonal oracle: only zz bonds and the field touch the all-down state.

    Independent scalar: each bond gives +d*J (both spins down), the field
    gives -2h per masked rung. For the reference set that is
    3*0.5 + 4*0.5 - 2*100 = -196.5.
    """
    p = LadderParams()
    psi = build_initial_state("separable_zero_zero", p)
    energy = np.real(psi.conj() @ build_hamiltonian(p) @ psi)
    n_bonds_rung = p.n_rungs
    n_bonds_leg = 2 * (p.n_rungs - 1)
    expected = (n_bonds_rung * p.d * p.j_perp
                + n_bonds_leg * p.d * p.j_parallel
                - 2.0 * p.h * len(p.field_mask))
    assert expected == -196.5
    assert abs(energy - expected) < 1e-10


def test_all_down_energy_uniform_mask():
    p = LadderParams(field_mask=uniform_mask(3))
    psi = build_initial_state("separable_zero_zero", p)
    energy = np.real(psi.conj() @ build_hamiltonian(p) @ psi)
    assert abs(energy - (1.5 + 2.0 - 600.0)) < 1e-10


def test_single_rung_spectrum():
    # One rung at g=1: {|00>,|11>} block has energies d +- 1, the
    # {|01>,|10>} block -d +- 1 (in units of j_perp).
    p = LadderParams(n_rungs=1, d=0.5, h=0.0, field_mask=frozenset())
    w = np.linalg.eigvalsh(build_hamiltonian(p))
    assert np.allclose(np.sort(w), [-1.5, -0.5, 0.5, 1.5], atol=1e-12)


def test_bond_factors_scale_single_bonds():
    p = LadderParams(h=0.0, field_mask=frozenset())
    base = build_hamiltonian(p)
    scaled = build_hamiltonian(p, rung_factors=[2.0, 1.0, 1.0])
    diff = scaled - base
    # the difference must be exactly one extra copy of the rung-1 bond
    expected = (0.5 * (1 + p.g) * pauli_string("xx", [1, 2], 6)
                + 0.5 * (1 - p.g) * pauli_string("yy", [1, 2], 6)
                + p.d * pauli_string("zz", [1, 2], 6)) * p.j_perp
    assert np.allclose(diff, expected, atol=1e-12)


def test_leg_factor_order_matches_leg_bonds():
    p = LadderParams(h=0.0, field_mask=frozenset())
    base = build_hamiltonian(p)
    factors = np.ones(4)
    factors[2] = 3.0  # third leg bond is (2, 4), the first bottom bond
    scaled = build_hamiltonian(p, leg_factors=factors)
    expected = 2.0 * p.j_parallel * (
        0.5 * (1 + p.g) * pauli_string("xx", [2, 4], 6)
        + 0.5 * (1 - p.g) * pauli_string("yy", [2, 4], 6)
        + p.d * pauli_string("zz", [2, 4], 6))
    assert np.allclose(scaled - base, expected, atol=1e-12)


def test_field_never_scaled():
    p = LadderParams()
    a = build_hamiltonian(p)
    b = build_hamiltonian(p, rung_factors=[0.0, 0.0, 0.0],
                          leg_factors=np.zeros(4))
    field_only = p.h * (pauli_string("z", [3], 6) + pauli_string("z", [4], 6))
    assert np.allclose(b, field_only, atol=1e-12)
    assert not np.allclose(a, b)


def test_factor_shape_validation():
    p = LadderParams()
    with pytest.raises(InvalidArgumentError):
        build_hamiltonian(p, rung_factors=[1.0, 1.0])
    with pytest.raises(InvalidArgumentError):
        build_hamiltonian(p, leg_factors=[1.0] * 3)


def test_drop_odd_leg():
    p = LadderParams(h=0.0, field_mask=frozenset())
    partial = build_hamiltonian(p, include_odd_leg=False)
    expected = build_hamiltonian(LadderParams(n_rungs=3, h=0.0, field_mask=frozenset()))
    for (i, j) in [(1, 3), (3, 5)]:
        expected -= p.j_parallel * (
            0.5 * (1 + p.g) * pauli_string("xx", [i, j], 6)
            + 0.5 * (1 - p.g) * pauli_string("yy", [i, j], 6)
            + p.d * pauli_string("zz", [i, j], 6))
    assert np.allclose(partial, expected, atol=1e-12)


# ------------------------------------------------------------ initial states

def test_initial_state_kinds_complete():
    assert set(INITIAL_STATE_KINDS) == {
        "phi_plus", "psi_plus", "psi_minus_plus_phi_plus", "separable_zero_zero"}


def test_phi_plus_components():
    p = LadderParams()
    psi = build_initial_state("phi_plus", p)
    s2 = 1.0 / math.sqrt(2.0)
    assert psi[0] == s2
    assert psi[0b11 << 4] == s2
    assert np.count_nonzero(psi) == 2


def test_psi_plus_two_rungs():
    psi = build_initial_state("psi_plus", LadderParams(n_rungs=2))
    s2 = 1.0 / math.sqrt(2.0)
    assert psi[4] == s2 and psi[8] == s2
    assert np.count_nonzero(psi) == 2


def test_superposition_state():
    psi = build_initial_state("psi_minus_plus_phi_plus", LadderParams())
    nonzero = np.flatnonzero(psi)
    assert list(nonzero) == [0, 0b01 << 4, 0b10 << 4, 0b11 << 4]
    assert psi[0b10 << 4] == -0.5


def test_separable_state():
    psi = build_initial_state("separable_zero_zero", LadderParams())
    assert psi[0] == 1.0 and np.count_nonzero(psi) == 1


@pytest.mark.parametrize("kind", INITIAL_STATE_KINDS)
def test_initial_states_normalized(kind):
    psi = build_initial_state(kind, LadderParams(n_rungs=4))
    assert abs(np.linalg.norm(psi) - 1.0) < 1e-12


def test_unknown_state_kind():
    with pytest.raises(InvalidArgumentError):
        build_initial_state("bell", LadderParams())


# ---------------------------------------------------------------- dressed gap

@pytest.mark.parametrize("d,expected", [
    (0.0, 2.0),
    (0.1, 2.0 * math.sqrt(1.0 + 0.04)),
    (0.5, 2.0 * math.sqrt(2.0)),
    (1.0, 2.0 * math.sqrt(5.0)),
])
def test_dressed_gap_values(d, expected):
    assert dressed_gap(LadderParams(d=d)) == pytest.approx(expected, rel=1e-12)


def test_dressed_gap_uses_both_couplings():
    # bare splitting from the rung bond, sz dressing from the leg bond
    p = LadderParams(j_perp=2.0, j_parallel=3.0, g=1.0, d=0.5)
    assert dressed_gap(p) == pytest.approx(2.0 * math.sqrt(4.0 + 9.0), rel=1e-12)
