import math

import numpy as np
import pytest

from spintomo.errors import DimensionError, ValidationError
from spintomo.state import (BipartiteShape, DensityMatrix, PureState, bell_state, check, conjugate,
                            eigenframe, from_pure, maximally_mixed, partial_trace, random_density,
                            random_unitary, spectrum, tensor_product, validate)
from spintomo.su2 import HalfInteger, half


def test_shape_parse():
    s = BipartiteShape.parse("1/2,1")
    assert (s.n1, s.n2, s.n) == (2, 3, 6)
    assert str(s) == "1/2,1"


def test_from_pure_basis_vector():
    assert np.array_equal(np.asarray(from_pure([1, 0])), np.diag([1, 0]).astype(complex))


def test_from_pure_uniform_superposition():
    rho = from_pure(np.array([1, 1]) / math.sqrt(2))
    assert np.abs(np.asarray(rho) - 0.5).max() < 1e-15


def test_from_pure_bell_corners():
    rho = np.asarray(from_pure(PureState(np.array([1, 0, 0, 1]) / math.sqrt(2))))
    expected = np.zeros((4, 4))
    for i, k in [(0, 0), (0, 3), (3, 0), (3, 3)]:
        expected[i, k] = 0.5
    assert np.abs(rho - expected).max() < 1e-15
    assert np.abs(np.asarray(bell_state()) - expected).max() < 1e-15


def test_from_pure_rejects_unnormalized():
    with pytest.raises(ValidationError):
        from_pure([1, 1])


def test_validate_examples():
    assert validate(np.diag([0.5, 0.5])).dim == 2
    with pytest.raises(ValidationError) as err:
        validate(np.diag([0.7, 0.4]))
    (v,) = err.value.report.violations
    assert v.invariant == "trace" and v.magnitude == pytest.approx(0.1, abs=1e-15)
    with pytest.raises(ValidationError) as err:
        validate([[0.5, 0.6], [0.6, 0.5]])
    (v,) = err.value.report.violations
    assert v.invariant == "positivity" and v.magnitude == pytest.approx(0.1, abs=1e-14)


def test_check_reports_all_violations():
    report = check([[0.7, 2j], [0.0, 0.4]])
    assert set(report.names()) == {"hermitian", "trace", "positivity"}
    assert check(np.ones((2, 3))).names() == ["square"]
    assert check([[np.nan, 0], [0, 1]]).names() == ["finite"]


def test_validate_tolerance_is_a_parameter():
    m = np.diag([0.5, 0.5 + 1e-8])
    with pytest.raises(ValidationError):
        validate(m)
    assert validate(m, tol=1e-6).dim == 2


def test_density_matrix_is_immutable():
    rho = maximally_mixed(2)
    with pytest.raises(ValueError):
        rho.entries[0, 0] = 1.0


def test_density_matrix_shape_mismatch():
    with pytest.raises(DimensionError):
        DensityMatrix(np.eye(3) / 3, BipartiteShape(half("1/2"), half("1/2")))


def test_tensor_product_examples():
    e0 = from_pure([1, 0])
    assert np.array_equal(np.asarray(tensor_product(e0, e0)).real, np.diag([1.0, 0, 0, 0]))
    mm = np.asarray(tensor_product(maximally_mixed(2), maximally_mixed(2)))
    assert np.abs(mm - np.eye(4) / 4).max() < 1e-16
    p, q = 0.3, 0.8
    out = np.asarray(tensor_product(DensityMatrix(np.diag([p, 1 - p])), DensityMatrix(np.diag([q, 1 - q]))))
    assert np.abs(out - np.diag([p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q)])).max() < 1e-16


def test_tensor_product_ordering_first_major():
    # index (j1-m1)*n2 + (j2-m2): |+> (x) |0> of a spin 1 is index 1
    up = from_pure([1, 0])
    zero = from_pure([0, 1, 0])
    prod = tensor_product(up, zero)
    assert prod.shape == BipartiteShape(half("1/2"), half(1))
    assert np.asarray(prod)[1, 1] == 1.0


def test_partial_trace_examples():
    shape = BipartiteShape(half("1/2"), half("1/2"))
    assert np.abs(np.asarray(partial_trace(bell_state(), shape, "first")) - np.eye(2) / 2).max() < 1e-15
    assert np.abs(np.asarray(partial_trace(maximally_mixed(4), shape, "second")) - np.eye(2) / 2).max() < 1e-15
    with pytest.raises(DimensionError):
        partial_trace(maximally_mixed(3), shape)
    with pytest.raises(ValueError):
        partial_trace(maximally_mixed(4), shape, "third")


@pytest.mark.parametrize("n1,n2", [(2, 2), (2, 3), (3, 2), (4, 3)])
def test_partial_trace_of_products(n1, n2):
    shape = BipartiteShape(HalfInteger(n1 - 1), HalfInteger(n2 - 1))
    for seed in range(50):
        r1, r2 = random_density(n1, seed=seed), random_density(n2, seed=1000 + seed)
        prod = tensor_product(r1, r2)
        assert np.abs(np.asarray(partial_trace(prod, shape, "first")) - np.asarray(r1)).max() <= 1e-10
        assert np.abs(np.asarray(partial_trace(prod, shape, "second")) - np.asarray(r2)).max() <= 1e-10
        assert abs(np.trace(np.asarray(prod)) - np.trace(np.asarray(r1)) * np.trace(np.asarray(r2))) <= 1e-12


def test_partial_trace_keeps_unit_trace():
    shape = BipartiteShape(half(1), half("3/2"))
    for seed in range(30):
        rho = random_density(12, seed=seed)
        for keep in ("first", "second"):
            assert abs(np.trace(np.asarray(partial_trace(rho, shape, keep))) - 1.0) <= 1e-12


def test_random_density_examples():
    rho = np.asarray(random_density(2, rank=1, seed=5))
    assert abs(np.trace(rho @ rho).real - 1.0) <= 1e-10
    assert np.array_equal(np.asarray(random_density(3, seed=9)), np.asarray(random_density(3, seed=9)))
    with pytest.raises(ValueError):
        random_density(3, rank=4)


def test_random_density_dim3_spectrum_matches_characteristic_polynomial():
    for seed in range(20):
        m = np.asarray(random_density(3, 3, seed))
        # x^3 - tr x^2 + (sum of principal 2x2 minors) x - det
        minors = sum(np.linalg.det(m[np.ix_(idx, idx)]) for idx in ([0, 1], [0, 2], [1, 2]))
        roots = np.sort(np.roots([1, -np.trace(m), minors, -np.linalg.det(m)]).real)[::-1]
        ev = spectrum(m)
        assert np.all(ev >= -1e-10)
        assert abs(ev.sum() - 1.0) <= 1e-10
        assert np.abs(ev - roots).max() <= 1e-8


def test_spectrum_examples():
    assert np.allclose(spectrum(np.diag([0.3, 0.7])), [0.7, 0.3], atol=1e-15)
    assert np.allclose(spectrum(np.eye(2) / 2), [0.5, 0.5], atol=1e-15)
    assert np.allclose(spectrum([[0.5, 0.5], [0.5, 0.5]]), [1.0, 0.0], atol=1e-15)


@pytest.mark.parametrize("dim", [2, 3, 4, 6])
def test_spectrum_of_validated_states(dim):
    for seed in range(20):
        ev = spectrum(random_density(dim, rank=1 + seed % dim, seed=seed))
        assert np.all(ev >= -1e-10)
        assert abs(ev.sum() - 1.0) <= 1e-10
        assert np.all(np.diff(ev) <= 0)


def test_eigenframe_diagonalizes(rng):
    rho = np.asarray(random_density(4, seed=3))
    v = eigenframe(rho)
    d = v.conj().T @ rho @ v
    assert np.abs(d - np.diag(spectrum(rho))).max() < 1e-12


def test_conjugate_preserves_validity(rng):
    rho = bell_state()
    u = random_unitary(4, rng)
    out = conjugate(rho, u)
    assert out.shape == rho.shape
    assert check(out).ok
    assert np.allclose(spectrum(out), spectrum(rho), atol=1e-12)
