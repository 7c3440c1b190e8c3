import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octolat import audits
from octolat.calculus import (
    IdentityResidual,
    borel_pompeiu_eval,
    boundary_from_grid,
    cauchy_transform,
    half_window,
    is_monogenic,
    stokes_residual,
    stokes_residual_central_wholespace,
)
from octolat.errors import MissingFundamentalSolution, SupportViolation, TopologyMismatch
from octolat.lattice import DIM, GridFunction, GridSpec, HalfSpace
from octolat.layer import BoundaryData
from octolat.octonion import basis, basis_left
from octolat.oracle import random_boundary, random_grid
from octolat.spectral import fundsol_exact, fundsol_paper

T4 = GridSpec.torus(4)


@pytest.fixture(scope="module")
def exact4():
    return fundsol_exact(T4, "+")[0]


@pytest.fixture(scope="module")
def exact3():
    return fundsol_exact(GridSpec.torus(3), "+")[0]


# --- windows ---------------------------------------------------------------------

def test_half_window_geometry():
    up = half_window(1, 3, side="upper")
    assert up.origin == (-2,) * 7 + (-1,)
    assert up.sizes == (5,) * 7 + (6,)
    lo = half_window(1, 3, side=HalfSpace.LOWER)
    assert lo.origin[7] == -4 and lo.sizes[7] == 6


def test_identity_residual_scale_and_pass():
    r = IdentityResidual.from_sides("x", "v", np.full(8, 3.0), np.full(8, 3.0) + 1e-13)
    assert r.scale == pytest.approx(np.sqrt(72))
    assert r.passes(1e-12)
    r2 = IdentityResidual.from_sides("x", "v", np.zeros(8), np.full(8, 1e-9), mass=1e6)
    assert not r2.passes(1e-12)
    assert r2.passes(1e-12, use_mass=True)


# --- Stokes ----------------------------------------------------------------------

@pytest.mark.parametrize("side", ["upper", "lower"])
@pytest.mark.parametrize("variant", ["as-printed", "sbp-exact"])
def test_stokes_zero_function(side, variant):
    f, g = audits.stokes_pair(0, side)
    r = stokes_residual(GridFunction.zeros(f.spec), g, side, variant)
    assert r.residual_max == 0.0


def test_stokes_support_checks():
    spec = half_window(1, 3)
    touching = GridFunction.delta(spec, (2,) + (0,) * 6 + (1,))
    fine = GridFunction.delta(spec, (0,) * 7 + (1,))
    with pytest.raises(SupportViolation):
        stokes_residual(touching, fine)
    with pytest.raises(TopologyMismatch):
        stokes_residual(GridFunction.zeros(T4), GridFunction.zeros(T4))
    with pytest.raises(ValueError):
        stokes_residual(fine, fine, variant="other")


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 2**20), st.sampled_from(["upper", "lower"]))
def test_stokes_summation_by_parts_identity(seed, side):
    f, g = audits.stokes_pair(seed, side)
    r = stokes_residual(f, g, side, "sbp-exact")
    assert r.passes(1e-12)


@pytest.mark.parametrize("side", ["upper", "lower"])
def test_stokes_printed_form_misses_random_pairs(side):
    f, g = audits.stokes_pair(11, side)
    r = stokes_residual(f, g, side, "as-printed")
    assert r.residual_norm > 1e-3 * r.scale


@pytest.mark.parametrize("h", [1.0, 0.5])
def test_stokes_single_point_volume_sums(h):
    # f = g = e0 delta_p away from the boundary: the printed volume sum is -2 h^-9 (e0 + ... + e7)
    spec = half_window(1, 3, h)
    p = (0,) * 7 + (2,)
    f = GridFunction.delta(spec, p)
    printed = stokes_residual(f, f, "upper", "as-printed")
    np.testing.assert_allclose(printed.lhs, -2 * h**-9 * np.ones(8), rtol=1e-12)
    np.testing.assert_array_equal(printed.rhs, np.zeros(8))
    exact = stokes_residual(f, f, "upper", "sbp-exact")
    np.testing.assert_allclose(exact.lhs, 0, atol=1e-12 * h**-9)


def test_stokes_boundary_layers_used():
    # g on layer 1, f on layer 0: only the boundary sums see them
    spec = half_window(1, 3)
    f = GridFunction.delta(spec, (0,) * 8, basis(2))
    g = GridFunction.delta(spec, (0,) * 7 + (1,), basis(0))
    r = stokes_residual(f, g, "upper", "sbp-exact")
    assert r.passes(1e-12)
    assert np.abs(r.rhs).max() > 0


def test_central_stokes_constant_g():
    f = random_grid(3, T4)
    g = GridFunction(T4, np.tile(basis(0), T4.sizes + (1,)))
    for variant in ("as-printed", "sbp-exact"):
        r = stokes_residual_central_wholespace(f, g, variant)
        assert r.passes(1e-12, use_mass=True)


@pytest.mark.parametrize("i, k", [(0, 0), (1, 2), (3, 7)])
def test_central_stokes_neighbouring_points(i, k):
    p = (1,) * 8
    q = (2,) + (1,) * 7
    f = GridFunction.delta(T4, p, basis(i))
    g = GridFunction.delta(T4, q, basis(k))
    assert stokes_residual_central_wholespace(f, g, "sbp-exact").residual_max == 0.0
    assert stokes_residual_central_wholespace(f, g, "as-printed").residual_max == pytest.approx(1.0)


def test_central_stokes_random():
    f, g = audits.central_pair(5, 4)
    assert stokes_residual_central_wholespace(f, g, "sbp-exact").passes(1e-12, use_mass=True)


# --- Borel-Pompeiu ---------------------------------------------------------------

def test_borel_pompeiu_of_zero(exact4):
    f = GridFunction.zeros(half_window(1, 3))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        val = borel_pompeiu_eval(f, (0,) * 7 + (1,), E=exact4)
    assert np.all(val == 0)


def test_borel_pompeiu_errors(exact4):
    f, _ = audits.bp_setup(0)
    with pytest.raises(MissingFundamentalSolution):
        borel_pompeiu_eval(f, (0,) * 7 + (1,))
    with pytest.raises(TopologyMismatch):
        borel_pompeiu_eval(f, (0,) * 7 + (1,), E=f)
    with pytest.raises(ValueError):
        borel_pompeiu_eval(f, (0,) * 7 + (1,), E=exact4, convention="other")
    bad = GridFunction.delta(f.spec, (2,) + (0,) * 6 + (1,))
    with pytest.raises(SupportViolation):
        borel_pompeiu_eval(bad, (0,) * 7 + (1,), E=exact4)


def test_borel_pompeiu_warns_about_small_torus(exact4):
    f, pts = audits.bp_setup(0)
    with pytest.warns(RuntimeWarning):
        borel_pompeiu_eval(f, pts[0], E=exact4)


def test_borel_pompeiu_corrected_gives_minus_f(exact4):
    f, pts = audits.bp_setup(7)
    corrected = np.array(audits.bp_errors(f, pts, exact4, "corrected"))
    sbp = np.array(audits.bp_errors(f, pts, exact4, "sbp-exact"))
    assert np.all(corrected > 1.8)
    assert np.all(sbp < 0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for m, e in zip(pts, sbp):
            val = borel_pompeiu_eval(f, m, E=exact4)
            assert np.linalg.norm(val + f.at(m)) / np.linalg.norm(f.at(m)) == pytest.approx(e, rel=1e-9)


def test_borel_pompeiu_builds_its_kernel():
    f, pts = audits.bp_setup(1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        a = borel_pompeiu_eval(f, pts[0], torus_size=3)
        b = borel_pompeiu_eval(f, pts[0], E=fundsol_exact(GridSpec.torus(3), "+")[0])
    np.testing.assert_array_equal(a, b)


# --- Cauchy transform ------------------------------------------------------------

def test_cauchy_of_zero(exact3):
    bd = BoundaryData.zeros(3, layer=0)
    assert np.all(cauchy_transform(bd, E=exact3).values == 0)


def test_cauchy_layer_check(exact3):
    with pytest.raises(ValueError):
        cauchy_transform(BoundaryData.zeros(3, layer=1), "upper", E=exact3)
    with pytest.raises(ValueError):
        cauchy_transform(BoundaryData.zeros(4, layer=0), "upper", E=exact3)


@pytest.mark.parametrize("convention", ["corrected", "layer-fixed"])
def test_cauchy_of_delta(exact3, convention):
    vals = np.zeros((3,) * 7 + (8,))
    vals[(0,) * 7] = basis(0)
    C = cauchy_transform(BoundaryData((3,) * 7, 1.0, vals, 0), "upper", E=exact3, convention=convention)
    for m in [(0,) * 8, (1, 2, 0, 0, 1, 0, 2, 1), (2,) * 8]:
        m7 = 1 - m[7] if convention == "corrected" else 1
        want = basis_left(7, exact3.at(tuple(-np.array(m[:7])) + (m7,)))
        np.testing.assert_allclose(C.at(m), want, atol=1e-14)


def test_cauchy_lower_sign(exact3):
    vals = np.zeros((3,) * 7 + (8,))
    vals[(0,) * 7] = basis(0)
    C = cauchy_transform(BoundaryData((3,) * 7, 1.0, vals, -1), "lower", E=exact3, convention="corrected")
    np.testing.assert_allclose(C.at((0,) * 8), -basis_left(7, exact3.at((0,) * 8)), atol=1e-14)


@given(st.floats(-3, 3, allow_nan=False), st.integers(0, 2**16))
@settings(max_examples=10, deadline=None)
def test_cauchy_linearity(alpha, seed):
    E = fundsol_exact(GridSpec.torus(3), "+")[0] if not hasattr(test_cauchy_linearity, "E") else test_cauchy_linearity.E
    test_cauchy_linearity.E = E
    f = random_boundary(seed, 3, layer=0)
    g = random_boundary(seed + 1, 3, layer=0)
    lhs = cauchy_transform(f * alpha + g, E=E).values
    rhs = alpha * cauchy_transform(f, E=E).values + cauchy_transform(g, E=E).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-13 * max(1.0, np.abs(rhs).max()))


def test_cauchy_as_printed_uses_pointwise_density(exact3):
    bd = random_boundary(2, 3, layer=0)
    C = cauchy_transform(bd, E=exact3, convention="as-printed")
    ksum = np.sum(exact3.layer(1), axis=tuple(range(7)))
    from octolat.octonion import mul

    np.testing.assert_allclose(C.values[..., 0, :], basis_left(7, mul(ksum, bd.values)), atol=1e-14)


def test_boundary_from_grid_roundtrip():
    f = random_grid(1, GridSpec.torus(3))
    bd = boundary_from_grid(f, -1)
    assert bd.layer == -1
    np.testing.assert_array_equal(bd.values, f.layer(-1))


# --- monogenicity ----------------------------------------------------------------

@pytest.mark.parametrize("variant", ["forward", "backward"])
def test_constants_are_monogenic(variant):
    f = GridFunction(T4, np.tile(np.arange(8.0), T4.sizes + (1,)))
    ok, res = is_monogenic(f, variant)
    assert ok and res == 0.0


def test_delta_is_not_monogenic():
    spec = GridSpec.torus(3, 0.5)
    ok, res = is_monogenic(GridFunction.delta(spec))
    assert not ok
    assert res == pytest.approx(np.sqrt(8) * 0.5**-9)


def test_monogenic_region_and_bad_variant():
    f = GridFunction.delta(T4)
    far = np.zeros(T4.sizes, dtype=bool)
    far[(2,) * 8] = True
    assert is_monogenic(f, "forward", far, tol=1e-12)[0]
    with pytest.raises(ValueError):
        is_monogenic(f, "sideways")


def test_cauchy_transforms_are_not_monogenic():
    cfg = audits.VerifyConfig(size=3)
    reps = audits.cauchy_monogenicity(cfg)
    assert len(reps) == 4
    assert all(r.passed is None and r.residual_max > 1e-3 for r in reps)
