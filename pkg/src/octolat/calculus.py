"""Discrete Stokes, Borel-Pompeiu and Cauchy identities on half-lattices.

Half-lattices are ``Z+ = {m7 >= 1}`` and ``Z- = {m7 <= -1}``; the boundary
layers are ``m7 in {-1, 0, 1}``.  Test functions live on finite blocks
(zero outside); fundamental solutions live on tori and are read with
periodic wrap.

Two families of identities are provided:

``as-printed``
    The formulas exactly as stated, with ``e7`` multiplying the completed
    product ``g f`` and boundary weight ``h^8``.
``sbp-exact``
    The identity that summation by parts actually produces for the right
    action ``[g D] = sum_j (d_j g) e_j``::

        sum_{Z+} {[g D+] f + sum_j (g e_j)(d-_j f)} h^8 = -sum (g(.,1) e7) f(.,0) h^7
        sum_{Z-} {[g D+] f + sum_j (g e_j)(d-_j f)} h^8 = +sum (g(.,0) e7) f(.,-1) h^7
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from octolat.errors import MissingFundamentalSolution, SupportViolation, TopologyMismatch
from octolat.lattice import DIM, GridFunction, GridSpec, HalfSpace, apply_cr, support_box
from octolat.layer import BoundaryData
from octolat.octonion import basis_left, basis_right, mul

STOKES_VARIANTS = ("as-printed", "sbp-exact")
BOUNDARY_CONVENTIONS = ("corrected", "layer-fixed", "as-printed", "sbp-exact")

# (layer of g / kernel, layer of f, sign) in the printed boundary terms
_LAYERS = {HalfSpace.UPPER: (1, 0, 1.0), HalfSpace.LOWER: (0, -1, -1.0)}


@dataclass(frozen=True)
class IdentityResidual:
    """Residual of an identity ``lhs = rhs`` between two octonion aggregates."""

    claim: str
    variant: str
    lhs: tuple
    rhs: tuple
    residual_max: float
    residual_mean: float
    mass: float = 0.0

    @classmethod
    def from_sides(cls, claim, variant, lhs, rhs, mass=0.0):
        lhs = np.asarray(lhs, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        r = np.abs(lhs - rhs)
        return cls(claim, variant, tuple(lhs.tolist()), tuple(rhs.tolist()), float(r.max()), float(r.mean()),
                   float(mass))

    @property
    def residual_norm(self):
        return float(np.linalg.norm(np.subtract(self.lhs, self.rhs)))

    @property
    def scale(self):
        """``max(|lhs|, |rhs|, 1)``."""
        return max(float(np.linalg.norm(self.lhs)), float(np.linalg.norm(self.rhs)), 1.0)

    def passes(self, rtol=1e-12, use_mass=False):
        """``|lhs - rhs| < rtol * scale``; ``use_mass`` adds the l1 mass of the summed terms to the scale."""
        scale = max(self.scale, self.mass) if use_mass else self.scale
        return self.residual_norm < rtol * scale


def _mass(*parts):
    return float(sum(np.sum(np.abs(p)) for p in parts))


def _side(side):
    return side if isinstance(side, HalfSpace) else HalfSpace(side)


def _check_block(f, name="f"):
    if f.spec.is_torus:
        raise TopologyMismatch(f"{name} must live on a block window")
    box = support_box(f)
    if box is None:
        return
    lo, hi = box
    for j in range(DIM):
        if lo[j] < 1 or hi[j] > f.spec.sizes[j] - 2:
            raise SupportViolation(f"{name} touches the window faces along axis {j}")


def _half_mask(spec, side):
    return spec.axis_mask(7, _side(side).contains)


def _masked_sum(values, mask):
    return np.sum(values[mask], axis=0)


def _sbp_volume(g, f, active):
    """``[g D+] f + sum_j (g e_j)(d-_j f)`` at the ``active`` points."""
    from octolat.lattice import _diff_values

    gd = apply_cr(g, "D+", "right").values[active]
    ga = g.values[active]
    out = mul(gd, f.values[active])
    for j in range(DIM):
        out = out + mul(basis_right(ga, j), _diff_values(f.values, f.spec, j, "backward")[active])
    return out


def _active(mask, *funcs):
    """``mask`` restricted to points where some function is nonzero (all volume terms vanish elsewhere)."""
    nz = np.zeros(mask.shape, dtype=bool)
    for fn in funcs:
        nz |= np.any(fn.values != 0, axis=-1)
    return mask & nz


def stokes_residual(f, g, side="upper", variant="as-printed", weight_exponent=None):
    """Residual of the discrete Stokes formula on a half-lattice.

    Parameters
    ----------
    f, g : GridFunction
        Block-supported test functions on the same window, strictly inside
        its faces.  The window should contain the layers ``m7 = -1, 0, 1``.
    side : {'upper', 'lower'}
    variant : {'as-printed', 'sbp-exact'}
        ``as-printed`` checks
        ``sum {[g D+] f - g [D- f]} h^8 = +- sum e7 (g f) h^w`` with
        ``w = 8``; ``sbp-exact`` checks the summation-by-parts identity from
        the module docstring with ``w = 7``.
    weight_exponent : int, optional
        Override for the boundary weight exponent.
    """
    side = _side(side)
    if f.spec != g.spec:
        raise ValueError("f and g must share a window")
    _check_block(f, "f")
    _check_block(g, "g")
    h = f.spec.h
    mask = _half_mask(f.spec, side)
    lg, lf, sign = _LAYERS[side]
    gl, fl = g.layer(lg), f.layer(lf)
    if variant == "as-printed":
        w = 8 if weight_exponent is None else weight_exponent
        act = _active(mask, f, g)
        vol = (mul(apply_cr(g, "D+", "right").values[act], f.values[act])
               - mul(g.values[act], apply_cr(f, "D-", "left").values[act]))
        bterm = basis_left(7, mul(gl, fl)) * (sign * h**w)
    elif variant == "sbp-exact":
        w = 7 if weight_exponent is None else weight_exponent
        vol = _sbp_volume(g, f, _active(mask, g))
        bterm = mul(basis_right(gl, 7), fl) * (-sign * h**w)
    else:
        raise ValueError(f"unknown Stokes variant {variant!r}; expected one of {STOKES_VARIANTS}")
    vol = vol * h**DIM
    lhs = np.sum(vol, axis=0)
    rhs = np.sum(bterm.reshape(-1, 8), axis=0)
    return IdentityResidual.from_sides(f"stokes-{side.value}", variant, lhs, rhs, _mass(vol, bterm))


def stokes_residual_central_wholespace(f, g, variant="as-printed"):
    """Residual of the whole-space Stokes formula for the central operator.

    ``as-printed`` compares ``sum {[g D~] f - g [D~ f]} h^8`` with 0;
    ``sbp-exact`` compares ``sum {[g D~] f + sum_j (g e_j)(d~_j f)} h^8``
    with 0, where ``d~_j`` is the central difference.
    """
    from octolat.lattice import _diff_values

    if f.spec != g.spec:
        raise ValueError("f and g must share a grid")
    if not f.spec.is_torus:
        _check_block(f, "f")
        _check_block(g, "g")
    h = f.spec.h
    gd = apply_cr(g, "central", "right").values
    if variant == "as-printed":
        vol = mul(gd, f.values) - mul(g.values, apply_cr(f, "central", "left").values)
    elif variant == "sbp-exact":
        vol = mul(gd, f.values)
        for j in range(DIM):
            dc = 0.5 * (_diff_values(f.values, f.spec, j, "forward") + _diff_values(f.values, f.spec, j, "backward"))
            vol = vol + mul(basis_right(g.values, j), dc)
    else:
        raise ValueError(f"unknown Stokes variant {variant!r}; expected one of {STOKES_VARIANTS}")
    vol = vol.reshape(-1, 8) * h**DIM
    return IdentityResidual.from_sides("stokes-central-wholespace", variant, np.sum(vol, axis=0), np.zeros(8), _mass(vol))


def _torus_take(E, index_arrays):
    """``E`` values at lattice offsets given per axis (periodic wrap), via an open mesh."""
    idx = [np.mod(np.asarray(a) - E.spec.origin[j], E.spec.sizes[j]) for j, a in enumerate(index_arrays)]
    return E.values[np.ix_(*idx)]


def _resolve_kernel(E, E_variant, torus_size, h, direction="+"):
    if E is not None:
        if not E.spec.is_torus:
            raise TopologyMismatch("fundamental solution must live on a torus")
        return E
    if torus_size is None:
        raise MissingFundamentalSolution("pass a fundamental solution E or a torus_size to build one")
    from octolat.spectral import fundsol

    E, _ = fundsol(GridSpec.torus(torus_size, h), direction, E_variant)
    return E


def _wrap_check(E, f):
    box = support_box(f)
    if box is None:
        return
    lo, hi = box
    for j in range(DIM):
        if E.spec.sizes[j] < 2 * (hi[j] - lo[j] + 1):
            warnings.warn(
                f"torus size {E.spec.sizes[j]} along axis {j} is below twice the support extent; expect wrap error",
                RuntimeWarning,
                stacklevel=3,
            )
            return


def borel_pompeiu_eval(f, m, side="upper", E_variant="exact", E=None, torus_size=None,
                       convention="corrected", weight_exponent=None):
    """Evaluate the Borel-Pompeiu right-hand side at the lattice point ``m``.

    The result should reproduce ``f(m)`` for ``m`` in the half-lattice and
    vanish outside.  The kernel is ``E+`` from ``E`` (a torus grid function)
    or built on a ``torus_size`` torus with ``E_variant``.

    Conventions
    -----------
    corrected
        ``sum_{n in Z+-} E(n - m) [D- f](n) h^8 +- sum_n e7 (E(n - m, L - m7) f(n, Lf)) h^w``
        (kernel taken from ``g = E(. - m)`` on the layer ``L``).
    layer-fixed
        As ``corrected`` but with the kernel pinned to the layer ``L``:
        ``E(n - m, L)``.
    as-printed
        Literal reading: ``sum_n E(n - m) [D- f](m) h^8`` and
        ``+- sum_n e7 (E(n - m, L) f(m, Lf)) h^w``.
    sbp-exact
        The representation that follows from the exact summation-by-parts
        identity with ``g = E(. - m)``:
        ``-sum_{Z+-} sum_j (E(n - m) e_j)(d-_j f)(n) h^8 -+ sum_n (E(n - m, L - m7) e7) f(n, Lf) h^7``.
    """
    side = _side(side)
    _check_block(f, "f")
    E = _resolve_kernel(E, E_variant, torus_size, f.spec.h)
    if E.spec.h != f.spec.h:
        raise ValueError("kernel and function use different lattice constants")
    if convention not in BOUNDARY_CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; expected one of {BOUNDARY_CONVENTIONS}")
    _wrap_check(E, f)
    m = np.asarray(m, dtype=np.int64)
    spec = f.spec
    h = spec.h
    mask = _half_mask(spec, side)
    lg, lf, sign = _LAYERS[side]
    axes = [spec.axis_indices(j) for j in range(DIM)]
    kern = _torus_take(E, [axes[j] - m[j] for j in range(DIM)])

    if convention == "as-printed":
        df_m = apply_cr(f, "D-", "left").at(m)
        volume = mul(_masked_sum(kern, mask), df_m) * h**DIM
    elif convention == "sbp-exact":
        from octolat.lattice import _diff_values

        acc = np.zeros(spec.shape)
        for j in range(DIM):
            acc = acc + mul(basis_right(kern, j), _diff_values(f.values, spec, j, "backward"))
        volume = -_masked_sum(acc, mask) * h**DIM
    else:
        volume = _masked_sum(mul(kern, apply_cr(f, "D-", "left").values), mask) * h**DIM

    sub = [axes[j] - m[j] for j in range(7)]
    if convention == "sbp-exact":
        w = 7 if weight_exponent is None else weight_exponent
        k_layer = _torus_take_layer(E, sub, lg - m[7])
        boundary = -sign * np.sum(mul(basis_right(k_layer, 7), f.layer(lf)), axis=tuple(range(7))) * h**w
    else:
        w = 8 if weight_exponent is None else weight_exponent
        if convention == "corrected":
            k_layer = _torus_take_layer(E, sub, lg - m[7])
            prod = mul(k_layer, f.layer(lf))
        elif convention == "layer-fixed":
            k_layer = _torus_take_layer(E, sub, lg)
            prod = mul(k_layer, f.layer(lf))
        else:
            k_layer = _torus_take_layer(E, sub, lg)
            prod = mul(k_layer, f.at(tuple(m[:7]) + (lf,)))
        boundary = sign * np.sum(basis_left(7, prod), axis=tuple(range(7))) * h**w
    return np.real_if_close(volume + boundary)


def _torus_take_layer(E, sub_axes, m7):
    idx = [np.mod(np.asarray(a) - E.spec.origin[j], E.spec.sizes[j]) for j, a in enumerate(sub_axes)]
    k7 = (int(m7) - E.spec.origin[7]) % E.spec.sizes[7]
    return E.values[..., k7, :][np.ix_(*idx)]


def _layer_correlation(kernel, density):
    """``G(m) = sum_n K(n - m) f(n)`` on a 7-D torus (octonion product ``K f``)."""
    axes = tuple(range(7))
    n = int(np.prod(kernel.shape[:7]))
    # fftn(K) = sum_k K(k) e^{-i k theta};  ifftn(f) n = sum_n f(n) e^{+i n theta}
    kh = np.stack([np.fft.fftn(kernel[..., c], axes=axes) for c in range(8)], axis=-1)
    fh = np.stack([np.fft.ifftn(density[..., c], axes=axes) * n for c in range(8)], axis=-1)
    gh = mul(kh, fh)
    g = np.stack([np.fft.fftn(gh[..., c], axes=axes) / n for c in range(8)], axis=-1)
    if not (np.iscomplexobj(kernel) or np.iscomplexobj(density)):
        g = g.real
    return g


def cauchy_transform(bd, side="upper", E=None, E_variant="exact", convention="corrected", weight_exponent=8):
    """Discrete Cauchy transform of boundary data, evaluated on the torus of ``E``.

    ``bd`` sits on layer ``0`` (upper) or ``-1`` (lower) and must share the
    7-D sizes of the ``E`` torus.  The output is a grid function on the
    ``E`` torus; layer ``m7`` holds

    * corrected: ``+- sum_n e7 (E(n - m, L - m7) f(n)) h^w``
    * layer-fixed: ``+- sum_n e7 (E(n - m, L) f(n)) h^w`` (same for all ``m7``)
    * as-printed: ``+- e7 ((sum_n E(n, L)) f(m)) h^w`` (same for all ``m7``)

    with ``L = 1, +`` (upper) and ``L = 0, -`` (lower).  Sums over ``n`` are
    7-D correlations computed spectrally.
    """
    side = _side(side)
    if E is None:
        E = _resolve_kernel(None, E_variant, bd.sizes + (bd.sizes[0],), bd.h)
    if tuple(E.spec.sizes[:7]) != tuple(bd.sizes):
        raise ValueError(f"boundary sizes {bd.sizes} differ from kernel layer sizes {E.spec.sizes[:7]}")
    if E.spec.h != bd.h:
        raise ValueError("kernel and boundary data use different lattice constants")
    lg, lf, sign = _LAYERS[side]
    if bd.layer != lf:
        raise ValueError(f"{side.value} Cauchy transform expects data on layer {lf}, got {bd.layer}")
    spec = E.spec
    h = spec.h
    weight = sign * h**weight_exponent
    out = np.zeros(spec.shape, dtype=np.result_type(E.values, bd.values, float))
    if convention == "corrected":
        for t in range(spec.sizes[7]):
            m7 = spec.origin[7] + t
            k = E.layer(lg - m7)
            out[..., t, :] = basis_left(7, _layer_correlation(k, bd.values)) * weight
    elif convention == "layer-fixed":
        col = basis_left(7, _layer_correlation(E.layer(lg), bd.values)) * weight
        out[...] = col[..., None, :]
    elif convention == "as-printed":
        ksum = np.sum(E.layer(lg), axis=tuple(range(7)))
        col = basis_left(7, mul(ksum, bd.values)) * weight
        out[...] = col[..., None, :]
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return GridFunction(spec, out)


def is_monogenic(f, variant="forward", region=None, tol=None):
    """Check ``D+- f = 0`` (left action) on ``region``.

    Returns ``(flag, residual)`` with ``residual = max |D f|`` over the
    region (boolean mask of grid shape, default everywhere) and default
    tolerance ``1e-10 ||f||_inf / h``.
    """
    op = {"forward": "D+", "+": "D+", "backward": "D-", "-": "D-"}.get(variant)
    if op is None:
        raise ValueError(f"variant must be 'forward' or 'backward', got {variant!r}")
    d = apply_cr(f, op, "left").values
    mag = np.sqrt(np.sum(np.abs(d) ** 2, axis=-1))
    if region is not None:
        mag = mag[np.broadcast_to(region, f.spec.sizes)]
    residual = float(mag.max()) if mag.size else 0.0
    if tol is None:
        tol = 1e-10 * f.sup_norm() / f.spec.h
    return residual <= tol, residual


def half_window(half_width, depth, h=1.0, side="upper"):
    """Block window for half-lattice tests.

    Axes 0..6 span ``[-half_width - 1, half_width + 1]``; axis 7 spans
    ``[-1, depth + 1]`` (upper) or ``[-depth - 1, 1]`` (lower), so the
    layers ``-1, 0, 1`` always exist and a support of ``m7`` in
    ``[1, depth]`` (or ``[-depth, -1]``) keeps one point off the faces.
    """
    side = _side(side)
    w = half_width + 1
    if side is HalfSpace.UPPER:
        lo7, hi7 = -1, depth + 1
    else:
        lo7, hi7 = -depth - 1, 1
    return GridSpec.block((-w,) * 7 + (lo7,), (w,) * 7 + (hi7,), h)


def boundary_from_grid(f, m7):
    """Layer ``m7`` of a torus grid function as :class:`BoundaryData`."""
    return BoundaryData(f.spec.sizes[:7], f.spec.h, np.array(f.layer(m7)), m7)
