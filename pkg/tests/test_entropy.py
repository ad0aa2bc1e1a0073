import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spintomo.entropy import (complete_conditional_entropy, conditional_entropy_given, information_gain,
                              joint_entropy, joint_tomographic_entropy, kullback_mutual_information,
                              mutual_information, shannon_entropy, subsystem_tomographic_entropy, to_bits,
                              tomographic_entropy, tomographic_mutual_information, von_neumann_entropy)
from spintomo.errors import ValidationError, ZeroProbabilityError
from spintomo.state import (BipartiteShape, DensityMatrix, bell_state, conjugate, eigenframe, from_pure,
                            maximally_mixed, random_density, random_unitary, tensor_product)
from spintomo.su2 import EulerAngles, HalfInteger, half
from spintomo.tomography import (JointTomogram, spin_tomogram, two_spin_tomogram, two_spin_unitary_tomogram,
                                 unitary_tomogram)

from conftest import random_angles

LN2 = math.log(2.0)
HALF = half("1/2")
QUBITS = BipartiteShape(HALF, HALF)
BELL_CORNERS = np.array([[0.5, 0.0], [0.0, 0.5]])


def _oracle_shannon(p):
    # independent reference: scipy-free, explicit support filter
    return -sum(x * math.log(x) for x in np.ravel(p) if x > 0)


@st.composite
def joints(draw, max_side=5):
    rows = draw(st.integers(1, max_side))
    cols = draw(st.integers(1, max_side))
    raw = draw(arrays(float, (rows, cols), elements=st.floats(0, 1, allow_nan=False)))
    # sprinkle exact zeros to exercise the 0 ln 0 branch
    mask = draw(arrays(bool, (rows, cols)))
    raw = np.where(mask, 0.0, raw)
    assume(raw.sum() > 1e-3)
    return raw / raw.sum()


# ---------------------------------------------------------------- scalar examples

def test_shannon_examples():
    assert shannon_entropy([1.0, 0.0]) == 0.0
    assert shannon_entropy([0.5, 0.5]) == pytest.approx(LN2, abs=1e-15)
    assert shannon_entropy([0.7, 0.3]) == pytest.approx(0.610864, abs=5e-7)
    assert shannon_entropy([0.7, 0.3]) == pytest.approx(-0.7 * math.log(0.7) - 0.3 * math.log(0.3), abs=1e-15)


def test_shannon_rejects_bad_input():
    with pytest.raises(ValidationError):
        shannon_entropy([0.5, 0.4])
    with pytest.raises(ValidationError):
        shannon_entropy([[0.5, 0.5]])
    with pytest.raises(ValidationError):
        shannon_entropy([])


def test_shannon_clamps_tiny_negatives():
    assert shannon_entropy([1.0 + 1e-13, -1e-13]) == pytest.approx(0.0, abs=1e-12)


def test_joint_entropy_examples():
    assert joint_entropy(np.outer([0.5, 0.5], [0.5, 0.5])) == pytest.approx(2 * LN2, abs=1e-15)
    assert joint_entropy(BELL_CORNERS) == pytest.approx(LN2, abs=1e-15)
    assert joint_entropy([[0, 1.0], [0, 0]]) == 0.0


def test_conditional_entropy_examples():
    p, q = np.array([0.3, 0.7]), np.array([0.2, 0.5, 0.3])
    prod = np.outer(p, q)
    for i in range(2):
        assert conditional_entropy_given(prod, "row", i) == pytest.approx(_oracle_shannon(q), abs=1e-14)
    for k in range(3):
        assert conditional_entropy_given(prod, "column", k) == pytest.approx(_oracle_shannon(p), abs=1e-14)
    assert conditional_entropy_given(BELL_CORNERS, "row", 0) == 0.0
    assert conditional_entropy_given(np.full((2, 2), 0.25), "column", 1) == pytest.approx(LN2, abs=1e-15)
    with pytest.raises(ZeroProbabilityError):
        conditional_entropy_given([[1.0, 0.0], [0.0, 0.0]], "row", 1)
    with pytest.raises(ValueError):
        conditional_entropy_given(BELL_CORNERS, "diagonal", 0)


def test_complete_conditional_examples():
    p, q = np.array([0.3, 0.7]), np.array([0.2, 0.5, 0.3])
    assert complete_conditional_entropy(np.outer(p, q), "row") == pytest.approx(_oracle_shannon(q), abs=1e-14)
    for side in ("row", "column"):
        assert complete_conditional_entropy(BELL_CORNERS, side) == 0.0


def test_mutual_information_examples():
    assert mutual_information(np.outer([0.3, 0.7], [0.6, 0.4])) == pytest.approx(0.0, abs=1e-12)
    assert mutual_information(BELL_CORNERS) == pytest.approx(LN2, abs=1e-15)
    P = np.array([[0.4, 0.1], [0.1, 0.4]])
    # direct evaluation from the definition with marginals (0.5, 0.5)
    oracle = 2 * 0.4 * math.log(0.4 / 0.25) + 2 * 0.1 * math.log(0.1 / 0.25)
    assert oracle == pytest.approx(0.192745, abs=5e-7)
    assert mutual_information(P) == pytest.approx(oracle, abs=1e-15)
    assert kullback_mutual_information(P) == pytest.approx(oracle, abs=1e-15)


def test_to_bits():
    assert to_bits(LN2) == pytest.approx(1.0, abs=1e-15)


# ---------------------------------------------------------------- classical identities

@settings(max_examples=100, deadline=None)
@given(joints())
def test_chain_rule(P):
    for side, axis in (("row", 1), ("column", 0)):
        lhs = joint_entropy(P)
        rhs = shannon_entropy(P.sum(axis=axis)) + complete_conditional_entropy(P, side)
        assert abs(lhs - rhs) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(joints())
def test_subadditivity_and_dominance(P):
    hx, hy, hxy = shannon_entropy(P.sum(axis=1)), shannon_entropy(P.sum(axis=0)), joint_entropy(P)
    assert hxy <= hx + hy + 1e-10
    assert hxy >= max(hx, hy) - 1e-10


@settings(max_examples=100, deadline=None)
@given(joints())
def test_information_symmetry_and_nonnegativity(P):
    i = mutual_information(P)
    assert i >= 0.0
    assert abs(mutual_information(P.T) - i) <= 1e-10
    gain_x, gain_y = information_gain(P, "column"), information_gain(P, "row")
    assert gain_x >= -1e-10 and gain_y >= -1e-10
    assert abs(gain_x - gain_y) <= 1e-10
    assert abs(gain_x - i) <= 1e-10
    assert abs(kullback_mutual_information(P) - i) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(arrays(float, st.integers(1, 6), elements=st.floats(0.01, 1)),
       arrays(float, st.integers(1, 6), elements=st.floats(0.01, 1)))
def test_independence_gives_zero_information(p, q):
    P = np.outer(p / p.sum(), q / q.sum())
    assert mutual_information(P) <= 1e-12
    assert abs(kullback_mutual_information(P)) <= 1e-12
    hx, hy = shannon_entropy(P.sum(axis=1)), shannon_entropy(P.sum(axis=0))
    assert abs(joint_entropy(P) - hx - hy) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(joints(max_side=8))
def test_shannon_matches_oracle_and_bounds(P):
    p = P.ravel()
    h = shannon_entropy(p)
    assert abs(h - _oracle_shannon(p)) <= 1e-12
    assert -1e-15 <= h <= math.log(p.size) + 1e-12


# ---------------------------------------------------------------- tomographic

@pytest.mark.parametrize("twice_j", [1, 2, 3, 4])
def test_tomographic_entropy_examples(twice_j, rng):
    j = HalfInteger(twice_j)
    for _ in range(5):
        t = spin_tomogram(maximally_mixed(j.dim), j, random_angles(rng))
        assert tomographic_entropy(t) == pytest.approx(math.log(j.dim), abs=1e-12)
    top = np.zeros(j.dim)
    top[0] = 1.0
    assert tomographic_entropy(spin_tomogram(from_pure(top), j, EulerAngles())) == pytest.approx(0.0, abs=1e-15)


def test_tomographic_entropy_equator():
    t = spin_tomogram(from_pure([1, 0]), HALF, EulerAngles(0.3, math.pi / 2, 0))
    assert tomographic_entropy(t) == pytest.approx(LN2, abs=1e-15)


def test_tomographic_entropy_bounds(rng):
    for n in (2, 3, 5):
        for seed in range(20):
            t = unitary_tomogram(random_density(n, seed=seed), random_unitary(n, rng))
            assert -1e-15 <= tomographic_entropy(t) <= math.log(n) + 1e-12


def test_joint_tomographic_examples(rng):
    mm = two_spin_tomogram(maximally_mixed(4), QUBITS, random_angles(rng), random_angles(rng))
    assert joint_tomographic_entropy(mm) == pytest.approx(2 * LN2, abs=1e-12)
    bell = two_spin_tomogram(bell_state(), QUBITS, EulerAngles(), EulerAngles())
    assert joint_tomographic_entropy(bell) == pytest.approx(LN2, abs=1e-15)
    up = tensor_product(from_pure([1, 0]), from_pure([1, 0]))
    assert joint_tomographic_entropy(two_spin_tomogram(up, QUBITS, EulerAngles(), EulerAngles())) == 0.0


def test_subsystem_examples():
    bell = two_spin_tomogram(bell_state(), QUBITS, EulerAngles(), EulerAngles())
    for side in ("first", "second"):
        assert subsystem_tomographic_entropy(bell, side) == pytest.approx(LN2, abs=1e-15)
    p, q = np.array([0.2, 0.8]), np.array([0.1, 0.3, 0.6])
    prod = JointTomogram(BipartiteShape(HALF, half(1)), None, np.outer(p, q))
    assert subsystem_tomographic_entropy(prod, "first") == pytest.approx(_oracle_shannon(p), abs=1e-15)
    assert subsystem_tomographic_entropy(prod, "second") == pytest.approx(_oracle_shannon(q), abs=1e-15)
    det = JointTomogram(QUBITS, None, [[0, 0], [1.0, 0]])
    assert subsystem_tomographic_entropy(det, "first") == 0.0


def test_tomographic_mutual_information_examples(rng):
    prod = tensor_product(random_density(2, seed=1), random_density(3, seed=2))
    shape = BipartiteShape(HALF, half(1))
    for _ in range(5):
        t = two_spin_tomogram(prod, shape, random_angles(rng), random_angles(rng))
        assert tomographic_mutual_information(t, verify=True) <= 1e-12
    bell = two_spin_tomogram(bell_state(), QUBITS, EulerAngles(), EulerAngles())
    assert tomographic_mutual_information(bell, verify=True) == pytest.approx(LN2, abs=1e-10)
    for _ in range(50):
        t = two_spin_tomogram(bell_state(), QUBITS, random_angles(rng), random_angles(rng))
        assert 0.0 <= tomographic_mutual_information(t, verify=True) <= LN2 + 1e-10


@pytest.mark.parametrize("twice", [(1, 1), (1, 2), (2, 2), (3, 3)])
def test_dual_forms_agree(twice, rng):
    shape = BipartiteShape(HalfInteger(twice[0]), HalfInteger(twice[1]))
    for seed in range(25):
        rho = random_density(shape.n, rank=1 + seed % shape.n, seed=seed)
        t = two_spin_unitary_tomogram(rho, shape, random_unitary(shape.n, rng))
        s1 = subsystem_tomographic_entropy(t, "first")
        s2 = subsystem_tomographic_entropy(t, "second")
        diff_form = s1 + s2 - joint_tomographic_entropy(t)
        assert abs(diff_form - kullback_mutual_information(t.probabilities)) <= 1e-10


# ---------------------------------------------------------------- von Neumann

def test_von_neumann_examples():
    assert von_neumann_entropy(from_pure(np.array([1, 1j]) / math.sqrt(2))) == pytest.approx(0.0, abs=1e-12)
    for n in (2, 3, 6):
        assert von_neumann_entropy(maximally_mixed(n)) == pytest.approx(math.log(n), abs=1e-12)
    assert von_neumann_entropy(DensityMatrix(np.diag([0.7, 0.3]))) == pytest.approx(0.610864, abs=5e-7)
    assert von_neumann_entropy(DensityMatrix(np.diag([0.9, 0.1]))) == pytest.approx(0.325083, abs=5e-7)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_von_neumann_unitary_invariance(n, rng):
    for seed in range(20):
        rho = random_density(n, rank=1 + seed % n, seed=seed)
        rotated = conjugate(rho, random_unitary(n, rng))
        assert abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) <= 1e-10


@pytest.mark.parametrize("n", [2, 3, 4])
def test_minimum_principle_sampled(n, rng):
    for seed in range(10):
        rho = random_density(n, seed=seed)
        s_n = von_neumann_entropy(rho)
        for _ in range(100):
            assert tomographic_entropy(unitary_tomogram(rho, random_unitary(n, rng))) >= s_n - 1e-10
        at_eigenframe = tomographic_entropy(unitary_tomogram(rho, eigenframe(rho)))
        assert abs(at_eigenframe - s_n) <= 1e-12


def test_backends_agree_on_shannon(backend):
    p = np.array([0.5, 0.25, 0.125, 0.125, 0.0])
    assert shannon_entropy(p) == pytest.approx(1.75 * LN2, abs=1e-15)


def test_kullback_form_with_subnormal_entries():
    tiny = 5e-324
    P = np.array([[1.0, tiny], [tiny, tiny]])
    assert math.isfinite(kullback_mutual_information(P))
    assert abs(kullback_mutual_information(P) - mutual_information(P)) <= 1e-12
