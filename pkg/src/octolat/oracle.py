"""Slow reference implementations and seeded random data.

Nothing here uses the FFT or the spectral/convolution code of the main
modules; only the octonion product is shared.
"""

from __future__ import annotations

import math

import numpy as np

from octolat.errors import SingularMatrix, SizeGuard
from octolat.lattice import DIM, GridFunction
from octolat.layer import LAYER_DIM, BoundaryData
from octolat.octonion import basis, basis_left, mul

NAIVE_DFT_MAX = 4**8
NAIVE_CONV_MAX = 4**7


def _lattice_points(sizes):
    grids = np.meshgrid(*[np.arange(n) for n in sizes], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1).astype(np.int64)


def naive_dft(f, chunk=128):
    """Direct evaluation of ``sum_m exp(i <mh, xi>) f(mh) h^8`` at every node.

    Phases are formed from exact integer products ``k_j m_j`` reduced
    modulo a common period, so no roundoff enters the exponent.  Output
    nodes are in the same storage order as the spectral module.

    Raises
    ------
    SizeGuard
        More than ``4^8`` lattice points.
    """
    spec = f.spec
    if spec.npoints > NAIVE_DFT_MAX:
        raise SizeGuard(f"naive_dft is limited to {NAIVE_DFT_MAX} points, got {spec.npoints}")
    sizes = spec.sizes
    period = math.lcm(*sizes)
    scale = np.array([period // n for n in sizes], dtype=np.int64)
    pts = _lattice_points(sizes)
    roots = np.exp(2j * np.pi * np.arange(period) / period)
    vals = f.values.reshape(-1, 8).astype(complex)
    out = np.empty_like(vals)
    mscaled = (pts * scale).T
    for s in range(0, len(pts), chunk):
        k = pts[s:s + chunk]
        idx = np.mod(k @ mscaled, period)
        out[s:s + chunk] = roots[idx] @ vals
    from octolat.spectral import SpectralField

    return SpectralField(spec, out.reshape(spec.shape) * spec.h**DIM)


def naive_boundary_convolution(kernel, bd, sign=1.0, weight_exponent=8):
    """Direct sum ``sign * sum_n e7 (K(n - m) f(n)) h^w`` over a 7-D torus layer.

    ``kernel`` is an array of shape ``(*sizes7, 8)`` indexed by the lattice
    offset modulo the sizes.  Each term forms ``K f`` first, then
    multiplies by ``e7`` from the left.

    Raises
    ------
    SizeGuard
        Layers with more than ``4^7`` points.
    """
    sizes = tuple(bd.sizes)
    kernel = np.asarray(kernel)
    if kernel.shape != sizes + (8,):
        raise ValueError(f"kernel shape {kernel.shape} does not match the layer {sizes}")
    if bd.npoints > NAIVE_CONV_MAX:
        raise SizeGuard(f"naive_boundary_convolution is limited to {NAIVE_CONV_MAX} points, got {bd.npoints}")
    out = np.zeros(sizes + (8,), dtype=np.result_type(kernel, bd.values, float))
    ar = [np.arange(n) for n in sizes]
    for n in np.argwhere(np.any(bd.values != 0, axis=-1)):
        shifted = kernel[np.ix_(*[np.mod(n[j] - ar[j], sizes[j]) for j in range(LAYER_DIM)])]
        out += basis_left(7, mul(shifted, bd.values[tuple(n)]))
    return BoundaryData(sizes, bd.h, out * (sign * bd.h**weight_exponent), bd.layer)


def multiplication_matrix(s, side="left"):
    """Complex 8x8 matrix ``A`` with ``A x = s x`` (left) or ``A x = x s`` (right)."""
    s = np.asarray(s)
    cols = []
    for k in range(8):
        ek = basis(k)
        cols.append(mul(s, ek) if side == "left" else mul(ek, s))
    return np.stack(cols, axis=-1)


def dense_symbol_inverse(s, side="left", max_cond=1e12, return_cond=False):
    """Solve ``s x = e0`` (left) or ``x s = e0`` (right) as a dense 8x8 system.

    Raises
    ------
    SingularMatrix
        The multiplication matrix is singular or has condition number
        above ``max_cond``.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    A = multiplication_matrix(s, side).astype(complex)
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > max_cond:
        raise SingularMatrix(f"multiplication matrix is singular (condition {cond:.3e})")
    x = np.linalg.solve(A, basis(0, complex))
    if not np.iscomplexobj(s):
        x = x.real
    return (x, cond) if return_cond else x


def _box_slices(spec, box):
    if box is None:
        return tuple(slice(None) for _ in range(DIM))
    lo, hi = box
    lo = (lo,) * DIM if np.isscalar(lo) else tuple(lo)
    hi = (hi,) * DIM if np.isscalar(hi) else tuple(hi)
    sl = []
    for j in range(DIM):
        a = lo[j] - spec.origin[j]
        b = hi[j] - spec.origin[j] + 1
        if spec.is_torus:
            a, b = max(a, 0), min(b, spec.sizes[j])
        if a < 0 or b > spec.sizes[j] or a >= b:
            raise ValueError(f"support box along axis {j} does not fit the grid")
        sl.append(slice(a, b))
    return tuple(sl)


def random_grid(seed, spec, box=None, kind="real", zero_mean=False):
    """Seeded random grid function, uniform in ``[-1, 1]`` on the lattice box ``(lo, hi)``.

    ``box`` gives inclusive lattice index bounds; outside it values are
    exactly 0.  ``kind='complex'`` draws real and imaginary parts.
    ``zero_mean`` subtracts the box mean so the zero Fourier node vanishes.
    """
    rng = np.random.default_rng(seed)
    sl = _box_slices(spec, box)
    shape = tuple(len(range(*s.indices(n))) for s, n in zip(sl, spec.sizes)) + (8,)
    vals = rng.uniform(-1.0, 1.0, shape)
    if kind == "complex":
        vals = vals + 1j * rng.uniform(-1.0, 1.0, shape)
    elif kind != "real":
        raise ValueError(f"kind must be 'real' or 'complex', got {kind!r}")
    if zero_mean:
        vals = vals - vals.mean(axis=tuple(range(DIM)), keepdims=True)
    out = np.zeros(spec.shape, dtype=vals.dtype)
    out[sl] = vals
    return GridFunction(spec, out)


def random_boundary(seed, sizes, h=1.0, layer=0, zero_mean=False):
    """Seeded random layer data, uniform in ``[-1, 1]``."""
    rng = np.random.default_rng(seed)
    sizes = (sizes,) * LAYER_DIM if np.isscalar(sizes) else tuple(sizes)
    vals = rng.uniform(-1.0, 1.0, sizes + (8,))
    if zero_mean:
        vals = vals - vals.mean(axis=tuple(range(LAYER_DIM)), keepdims=True)
    return BoundaryData(sizes, h, vals, layer)
