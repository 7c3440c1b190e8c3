import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octolat import audits
from octolat.errors import SingularMatrix, SizeGuard
from octolat.lattice import GridFunction, GridSpec
from octolat.layer import LAYER_DIM, BoundaryData
from octolat.octonion import basis, basis_left, mul
from octolat.oracle import (
    dense_symbol_inverse,
    multiplication_matrix,
    naive_boundary_convolution,
    naive_dft,
    random_boundary,
    random_grid,
)
from octolat.spectral import dft

from conftest import nonzero_octonions

T3 = GridSpec.torus(3)


# --- naive DFT -------------------------------------------------------------------

@pytest.mark.parametrize("h", [0.5, 1.0])
def test_naive_dft_of_delta_is_flat(h):
    spec = GridSpec.torus(3, h)
    F = naive_dft(GridFunction.delta(spec, (0,) * 8, basis(4)))
    np.testing.assert_allclose(F.values, np.broadcast_to(basis(4), F.values.shape), atol=1e-15)


def test_naive_dft_matches_fft():
    f = random_grid(5, T3, kind="complex")
    np.testing.assert_allclose(naive_dft(f).values, dft(f).values, atol=1e-11)


def test_naive_dft_mixed_sizes():
    f = random_grid(6, GridSpec((2, 3, 2, 2, 2, 3, 2, 2)))
    np.testing.assert_allclose(naive_dft(f).values, dft(f).values, atol=1e-12)


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**16), st.floats(-2, 2, allow_nan=False))
def test_naive_dft_linear(seed, a):
    spec = GridSpec((2,) * 8)
    f, g = random_grid(seed, spec), random_grid(seed + 1, spec)
    lhs = naive_dft(f * a + g).values
    np.testing.assert_allclose(lhs, a * naive_dft(f).values + naive_dft(g).values, atol=1e-12)


def test_naive_dft_size_guard():
    with pytest.raises(SizeGuard):
        naive_dft(GridFunction.zeros(GridSpec.torus(5)))


# --- naive boundary convolution --------------------------------------------------

def test_naive_convolution_of_delta():
    rng = np.random.default_rng(0)
    K = rng.uniform(-1, 1, (3,) * LAYER_DIM + (8,))
    vals = np.zeros_like(K)
    vals[(0,) * 7] = basis(0)
    out = naive_boundary_convolution(K, BoundaryData((3,) * LAYER_DIM, 0.5, vals, 0), sign=-1.0)
    m = (1, 2, 0, 0, 1, 2, 1)
    want = -basis_left(7, K[tuple((-np.array(m)) % 3)]) * 0.5**8
    np.testing.assert_allclose(out.values[m], want, atol=1e-15)


def test_naive_convolution_zero_and_guards():
    K = np.ones((3,) * LAYER_DIM + (8,))
    out = naive_boundary_convolution(K, BoundaryData.zeros(3, layer=0))
    assert np.all(out.values == 0)
    with pytest.raises(ValueError):
        naive_boundary_convolution(K[..., :4], BoundaryData.zeros(3, layer=0))
    with pytest.raises(SizeGuard):
        naive_boundary_convolution(np.zeros((5,) * LAYER_DIM + (8,)), BoundaryData.zeros(5, layer=0))


def test_naive_convolution_matches_cauchy():
    (r,) = audits.cauchy_cross_check(audits.VerifyConfig(size=3))
    assert r.passed and r.residual_max < 1e-12


# --- dense symbol inverse --------------------------------------------------------

def test_multiplication_matrix_sides():
    s = np.arange(8.0) - 3
    x = np.linspace(-1, 1, 8)
    np.testing.assert_allclose(multiplication_matrix(s, "left") @ x, mul(s, x), atol=1e-14)
    np.testing.assert_allclose(multiplication_matrix(s, "right") @ x, mul(x, s), atol=1e-14)


def test_dense_inverse_of_basis_unit():
    np.testing.assert_allclose(dense_symbol_inverse(basis(1)), -basis(1), atol=1e-15)
    np.testing.assert_allclose(dense_symbol_inverse(basis(1), "right"), -basis(1), atol=1e-15)


@given(nonzero_octonions())
def test_dense_inverse_matches_conjugate_formula(a):
    inv = np.concatenate([[a[0]], -a[1:]]) / np.dot(a, a)
    for side in ("left", "right"):
        np.testing.assert_allclose(dense_symbol_inverse(a, side), inv, rtol=1e-9, atol=1e-12 / np.dot(a, a))


def test_dense_inverse_singular():
    s = basis(0, complex) + 1j * basis(1, complex)
    with pytest.raises(SingularMatrix):
        dense_symbol_inverse(s)
    with pytest.raises(ValueError):
        dense_symbol_inverse(basis(0), side="top")


def test_dense_inverse_reports_condition():
    x, cond = dense_symbol_inverse(2 * basis(0), return_cond=True)
    np.testing.assert_allclose(x, 0.5 * basis(0))
    assert cond == pytest.approx(1.0)


# --- random data -----------------------------------------------------------------

def test_random_grid_deterministic():
    a = random_grid(9, T3)
    b = random_grid(9, T3)
    np.testing.assert_array_equal(a.values, b.values)
    assert not np.array_equal(a.values, random_grid(10, T3).values)
    assert np.abs(a.values).max() <= 1.0


def test_random_grid_support_box():
    spec = GridSpec.block(-2, 2)
    f = random_grid(1, spec, box=(-1, 1))
    inside = np.zeros(spec.sizes, dtype=bool)
    inside[(slice(1, 4),) * 8] = True
    assert np.all(f.values[~inside] == 0)
    assert np.all(np.any(f.values[inside] != 0, axis=-1))
    with pytest.raises(ValueError):
        random_grid(1, spec, box=(-3, 0))


def test_random_grid_zero_mean_and_complex():
    f = random_grid(2, T3, zero_mean=True, kind="complex")
    assert np.iscomplexobj(f.values)
    np.testing.assert_allclose(f.values.mean(axis=tuple(range(8))), 0, atol=1e-15)
    with pytest.raises(ValueError):
        random_grid(2, T3, kind="quaternion")


def test_random_boundary():
    b = random_boundary(4, 3, h=0.5, layer=-1, zero_mean=True)
    assert b.layer == -1 and b.h == 0.5 and b.sizes == (3,) * LAYER_DIM
    np.testing.assert_allclose(b.values.mean(axis=tuple(range(LAYER_DIM))), 0, atol=1e-15)
    np.testing.assert_array_equal(random_boundary(4, 3).values, random_boundary(4, 3).values)
