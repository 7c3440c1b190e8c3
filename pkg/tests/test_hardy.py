import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octolat import audits, hardy
from octolat.errors import SingularFrequency
from octolat.layer import LAYER_DIM, BoundaryData, dft7
from octolat.octonion import basis, mul
from octolat.oracle import random_boundary

R2 = np.sqrt(2.0)
XI_PI = np.array([np.pi, 0, 0, 0, 0, 0, 0])
SIZES = (4,) * LAYER_DIM


# --- closed forms (values derived by hand at xi = (pi, 0, ..., 0), h = 1) ---------

def test_layer_zero_symbol_value():
    want = np.zeros(8)
    want[0] = -1 / (2 * R2)
    want[7] = -(0.5 - 1 / (2 * R2))
    np.testing.assert_allclose(hardy.boundary_symbol_E(XI_PI, 0), want, atol=1e-15)
    np.testing.assert_allclose(want, [-0.3535533905932738, 0, 0, 0, 0, 0, 0, -0.1464466094067262], atol=1e-15)


def test_hardy_symbol_value():
    s = hardy.hardy_multiplier(SIZES, 1.0, "+")[(2,) + (0,) * 6]
    np.testing.assert_allclose(s, (R2 + 1) * basis(7), atol=1e-14)
    s_minus = hardy.hardy_multiplier(SIZES, 1.0, "-")[(2,) + (0,) * 6]
    np.testing.assert_allclose(s_minus, (1 - R2) * basis(7), atol=1e-14)


def test_a_minus_value():
    a = hardy.extension_multiplier(SIZES, 1.0, "-")[(2,) + (0,) * 6]
    assert a == pytest.approx(3 + 2 * R2)
    r, factor = audits.a_minus_factor_check(4, 1.0)
    assert r < 1e-12 and factor == pytest.approx(5.828427124746190)


@pytest.mark.parametrize("h", [0.5, 1.0, 2.0])
def test_a_minus_factor_independent_of_h(h):
    assert audits.a_minus_factor_check(4, h)[0] < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.05, 3.0), min_size=7, max_size=7), st.floats(0.25, 2.0))
def test_plus_minus_layers_mirror(xi, h):
    up = hardy.boundary_symbol_E(np.array(xi), 1, h)
    lo = hardy.boundary_symbol_E(np.array(xi), -1, h)
    np.testing.assert_allclose(up[:7], lo[:7], atol=1e-13)
    np.testing.assert_allclose(up[7], -lo[7], atol=1e-13)


def test_symbols_singular_at_zero():
    with pytest.raises(SingularFrequency):
        hardy.boundary_symbol_E(np.zeros(7), 0)
    with pytest.raises(ValueError):
        hardy.boundary_symbol_E(XI_PI, 2)
    assert np.all(hardy.boundary_symbol_field(SIZES, 1.0, 0)[(0,) * 7] == 0)
    assert np.all(hardy.hardy_multiplier(SIZES)[(0,) * 7] == 0)


def test_layer_zero_closed_form_matches_quadrature():
    xi = np.array([0.4, 1.1, 0.0, 2.0, 0.3, 0.0, 1.5])
    np.testing.assert_allclose(hardy.boundary_symbol_E(xi, 0), hardy.layer_integral(xi, 0, M=4096), atol=1e-10)


def test_off_layer_closed_forms_disagree_with_quadrature():
    audit = hardy.layer_symbol_audit((3,) * LAYER_DIM, 1.0, 1024)
    assert audit[0][0] < 1e-10
    assert audit[1][0] > 1e-2 and audit[-1][0] > 1e-2


# --- multipliers -----------------------------------------------------------------

def test_single_mode_H_is_symbol_product():
    node = (1, 0, 3, 0, 0, 2, 0)
    coeffs = np.arange(8) + 1j * np.arange(8)[::-1]
    bd = hardy.single_mode(SIZES, 1.0, node, coeffs)
    out = dft7(hardy.apply_H(bd, "+").values, 1.0)
    s = hardy.hardy_multiplier(SIZES)[node]
    np.testing.assert_allclose(out[node], mul(s, coeffs), atol=1e-12)
    out[node] = 0
    assert np.abs(out).max() < 1e-12


@pytest.mark.parametrize("kind", ["identity", "hilbert-e7"])
def test_synthetic_multiplier_projection_idempotent(kind):
    # hilbert-e7 vanishes where sin(theta_0) = 0; on an odd torus that is theta_0 = 0 only
    bd = random_boundary(3, (5,) + (3,) * 6, layer=1)
    bd = bd.with_values(bd.values - bd.values.mean(axis=0, keepdims=True))
    p = hardy.apply_P(bd, "+", multiplier=kind)
    pp = hardy.apply_P(p, "+", multiplier=kind)
    np.testing.assert_allclose(pp.values, p.values, atol=1e-12)
    assert not np.iscomplexobj(p.values)


def test_hilbert_e7_squares_to_one():
    rep, qualifying, worst = hardy.sigma_audit(SIZES, 1.0, "+", "hilbert-e7")
    assert qualifying > 0 and worst < 1e-10 and rep.passed


def test_printed_sigma_never_vanishes():
    rep, qualifying, worst = hardy.sigma_audit(SIZES, 1.0, "+")
    assert qualifying == 0 and worst == 0.0
    assert rep.details["sigma_min"] > 1e-3


def test_eigen_mode_membership():
    node = (1, 2, 0, 0, 3, 0, 1)
    s = hardy.synthetic_multiplier(SIZES, "hilbert-e7")[node]
    v = hardy.eigen_mode(s, 1.0)
    assert v is not None
    bd = hardy.single_mode(SIZES, 1.0, node, v)
    ok, res = hardy.hardy_membership(bd, "+", multiplier="hilbert-e7")
    assert ok and res < 1e-12
    assert hardy.eigen_mode(s, 5.0) is None


def test_zero_in_zero_out():
    z = BoundaryData.zeros(3, layer=1)
    for out in (hardy.apply_H(z), hardy.apply_P(z), hardy.apply_extension(z)):
        assert np.all(out.values == 0)
    assert hardy.hardy_membership(z) == (True, 0.0)


def test_parenthesizations_differ_and_bad_name():
    bd = random_boundary(0, (3,) * LAYER_DIM, layer=1, zero_mean=True)
    a = hardy.apply_H(bd, "+", "left-nested").values
    b = hardy.apply_H(bd, "+", "right-nested").values
    assert np.abs(a - b).max() > 1e-3
    with pytest.raises(ValueError):
        hardy.apply_H(bd, "+", "middle")
    with pytest.raises(ValueError):
        hardy.apply_H(bd, "?")


def test_extension_layer_check():
    with pytest.raises(ValueError):
        hardy.apply_extension(BoundaryData.zeros(3, layer=0), "+")
    out = hardy.apply_extension(random_boundary(1, 3, layer=-1), "-")
    assert out.layer == 0


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**16), st.floats(-3, 3, allow_nan=False))
def test_H_linearity(seed, a):
    f = random_boundary(seed, 3, layer=1)
    g = random_boundary(seed + 1, 3, layer=1)
    lhs = hardy.apply_H(f * a + g).values
    rhs = a * hardy.apply_H(f).values + hardy.apply_H(g).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * max(1.0, np.abs(rhs).max()))


def test_membership_removes_mean():
    vals = np.ones((3,) * LAYER_DIM + (8,))
    assert hardy.hardy_membership(BoundaryData((3,) * LAYER_DIM, 1.0, vals, 1)) == (True, 0.0)


# --- inner product ---------------------------------------------------------------

@pytest.mark.parametrize("side", hardy.SIDES)
@pytest.mark.parametrize("h", [0.5, 1.0])
def test_inner_product_of_delta(side, h):
    vals = np.zeros((3,) * LAYER_DIM + (8,))
    vals[(0,) * 7] = basis(0)
    d = BoundaryData((3,) * LAYER_DIM, h, vals, 0)
    np.testing.assert_allclose(hardy.inner_product(d, d, side), h**2 * basis(0), atol=1e-15)


def test_o_homogeneity_exact_for_e7_on_delta():
    vals = np.zeros((3,) * LAYER_DIM + (8,))
    vals[(1,) * 7] = basis(0)
    f = BoundaryData((3,) * LAYER_DIM, 1.0, vals, 0)
    res = hardy._axiom_residuals(f, f, f, basis(7), 1.0, "upper", 2)
    assert res["o-homogeneity"] < 1e-15


def test_hilbert_axioms():
    reps = hardy.hilbert_axioms_check(trials=5, seed=1)
    by = {r.claim.split("-", 3)[-1]: r for r in reps}
    for a in hardy.HARD_AXIOMS:
        assert by[a].passed
    assert by["o-homogeneity"].passed is None and by["o-homogeneity"].residual_max > 1e-3
    assert by["para-linearity"].passed is None


def test_inner_product_shape_check():
    with pytest.raises(ValueError):
        hardy.inner_product(BoundaryData.zeros(3, layer=0), BoundaryData.zeros(4, layer=0))
