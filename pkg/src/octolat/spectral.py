"""Discrete Fourier analysis on the torus and discrete fundamental solutions.

Transform convention (on a torus with ``N_j`` points per axis)::

    F u(xi) = sum_m exp(+i <mh, xi>) u(mh) h^8,     xi_j = 2 pi k_j / (N_j h)
    u(mh)   = (2 pi)^-8 sum_xi exp(-i <mh, xi>) F u(xi) dxi,   dxi = prod 2 pi / (N_j h)

Frequency nodes are stored in FFT order (``k_j = 0`` first), so node 0 is
at storage index ``(0, ..., 0)``.  Spectral values are complexified
octonions, arrays of shape ``(N0, ..., N7, 8)`` with complex dtype.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from octolat.errors import TopologyMismatch
from octolat.lattice import DIM, GridFunction, GridSpec
from octolat.octonion import conj

logger = logging.getLogger(__name__)

_SIGNS = np.array([1.0, -1, -1, -1, -1, -1, -1, -1])


def _direction_sign(direction):
    if direction in ("+", "forward", 1, "plus"):
        return 1
    if direction in ("-", "backward", -1, "minus"):
        return -1
    raise ValueError(f"direction must be '+' or '-', got {direction!r}")


@dataclass(frozen=True)
class FrequencyGrid:
    """Dual grid of a torus: ``xi_j = 2 pi k_j / (N_j h)`` mapped into ``[-pi/h, pi/h)``."""

    spec: GridSpec

    def theta(self, axis):
        """``h xi_axis`` along one axis, in FFT storage order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.spec.sizes[axis])

    def xi(self, axis):
        return self.theta(axis) / self.spec.h

    def node(self, index):
        """Frequency vector ``xi`` of the node at storage ``index``."""
        return np.array([self.xi(j)[index[j]] for j in range(len(index))])

    def k_of(self, index):
        """Signed integer wavenumbers of the node at storage ``index``."""
        return tuple(int(round(self.theta(j)[index[j]] * self.spec.sizes[j] / (2 * np.pi))) for j in range(len(index)))

    @property
    def zero_node(self):
        return (0,) * len(self.spec.sizes)

    @property
    def node_count(self):
        return self.spec.npoints

    def broadcast(self, axis, values):
        shape = [1] * len(self.spec.sizes)
        shape[axis] = self.spec.sizes[axis]
        return np.reshape(values, shape)


class SpectralField:
    """Complexified-octonion valued function on the frequency grid of ``spec``."""

    __slots__ = ("spec", "values")

    def __init__(self, spec, values):
        values = np.asarray(values, dtype=complex)
        if values.shape != spec.shape:
            raise ValueError(f"values shape {values.shape} does not match {spec.shape}")
        self.spec = spec
        self.values = values

    @property
    def grid(self):
        return FrequencyGrid(self.spec)

    def at(self, index):
        return self.values[tuple(index)]


def _require_torus(spec):
    if not spec.is_torus:
        raise TopologyMismatch("Fourier analysis needs torus topology")


def _axes(spec):
    return tuple(range(len(spec.sizes)))


def dft_array(values, spec):
    """Forward transform of a raw ``(*sizes, 8)`` array (componentwise FFT)."""
    weight = spec.h ** len(spec.sizes) * spec.npoints
    out = np.empty(values.shape, dtype=complex)
    for c in range(values.shape[-1]):
        out[..., c] = np.fft.ifftn(values[..., c], axes=_axes(spec)) * weight
    return out


def idft_array(values, spec):
    """Inverse transform of a raw ``(*sizes, 8)`` spectral array."""
    weight = 1.0 / (spec.h ** len(spec.sizes) * spec.npoints)
    out = np.empty(values.shape, dtype=complex)
    for c in range(values.shape[-1]):
        out[..., c] = np.fft.fftn(values[..., c], axes=_axes(spec)) * weight
    return out


def dft(f):
    """Discrete Fourier transform ``sum_m exp(i<mh,xi>) f(mh) h^8`` of a torus grid function."""
    _require_torus(f.spec)
    return SpectralField(f.spec, dft_array(f.values, f.spec))


def idft(F, real=False):
    """Inverse transform; ``real=True`` drops the (roundoff) imaginary part."""
    _require_torus(F.spec)
    vals = idft_array(F.values, F.spec)
    return GridFunction(F.spec, vals.real.copy() if real else vals)


def _symbol_theta(theta, sign, h):
    # xi^{+j} = -(1 - e^{-i theta}) / h,  xi^{-j} = (1 - e^{+i theta}) / h
    return -sign * (1.0 - np.exp(-1j * sign * theta)) / h


def symbol_xi(xi, axis, direction, h=1.0):
    """Symbol ``xi_h^{+-j} = -+h^-1 (1 - exp(-+i h xi_j))`` of the forward/backward difference."""
    xi = np.asarray(xi, dtype=float)
    return _symbol_theta(h * xi[..., axis], _direction_sign(direction), h)


def symbol_d2(xi, h=1.0):
    """Star-Laplacian symbol ``(4/h^2) sum_j sin^2(xi_j h / 2)``."""
    xi = np.asarray(xi, dtype=float)
    return (4.0 / h**2) * np.sum(np.sin(xi * h / 2.0) ** 2, axis=-1)


def symbol_cr(xi, direction, h=1.0):
    """Complexified octonion ``sum_j e_j xi_h^{+-j}`` (symbol of ``D+`` or ``D-``)."""
    xi = np.asarray(xi, dtype=float)
    return _symbol_theta(h * xi, _direction_sign(direction), h)


def axis_symbols(spec, direction):
    """Broadcastable per-axis difference symbols on the frequency grid."""
    grid = FrequencyGrid(spec)
    sign = _direction_sign(direction)
    return [grid.broadcast(j, _symbol_theta(grid.theta(j), sign, spec.h)) for j in range(len(spec.sizes))]


def d2_field(spec):
    grid = FrequencyGrid(spec)
    total = 0.0
    for j in range(len(spec.sizes)):
        total = total + grid.broadcast(j, (4.0 / spec.h**2) * np.sin(grid.theta(j) / 2.0) ** 2)
    return np.broadcast_to(total, spec.sizes)


def cr_symbol_field(spec, direction):
    """``symbol_cr`` at every frequency node, shape ``(*sizes, 8)``."""
    syms = axis_symbols(spec, direction)
    out = np.empty(spec.shape, dtype=complex)
    for j, s in enumerate(syms):
        out[..., j] = s
    return out


def apply_symbol(F, symbol, side="left"):
    """Per-node product of a spectral field with a symbol field (left or right)."""
    from octolat.octonion import mul

    vals = mul(symbol, F.values) if side == "left" else mul(F.values, symbol)
    return SpectralField(F.spec, vals)


@dataclass(frozen=True)
class SingularSet:
    """Frequency nodes where the Cauchy-Riemann symbol has no inverse.

    ``nodes`` are storage indices into the FFT-ordered frequency grid;
    ``norm_forms`` holds ``|N(symbol)|`` at each of them.
    """

    spec: GridSpec
    nodes: tuple
    norm_forms: tuple

    def __len__(self):
        return len(self.nodes)

    @property
    def contains_zero(self):
        return (0,) * len(self.spec.sizes) in self.nodes

    def wavenumbers(self):
        grid = FrequencyGrid(self.spec)
        return [grid.k_of(n) for n in self.nodes]

    def indicator(self):
        ind = np.zeros(self.spec.sizes)
        for n in self.nodes:
            ind[n] = 1.0
        return ind

    def correction(self):
        """Inverse transform of the singular-set indicator (times e0).

        The exact fundamental solution satisfies ``D E = delta_h - correction``;
        for ``{0}`` alone this is the constant ``prod(N_j h)^-1``.
        """
        vals = np.zeros(self.spec.shape, dtype=complex)
        vals[..., 0] = self.indicator()
        out = idft_array(vals, self.spec)
        return GridFunction(self.spec, out.real.copy())


def singular_tolerance(d2):
    """Zero-divisor threshold ``1e-10 (1 + d^2)``."""
    return 1e-10 * (1.0 + d2)


def _assemble(spec, components, keep_complex):
    vals = np.empty(spec.shape, dtype=complex)
    for j, comp in enumerate(components):
        vals[..., j] = comp
    out = idft_array(vals, spec)
    scale = np.max(np.abs(out)) or 1.0
    imag = float(np.max(np.abs(out.imag)) / scale)
    logger.debug("fundamental solution imaginary residue %.3e", imag)
    return GridFunction(spec, out if keep_complex else out.real.copy())


def fundsol_paper(spec, direction="+", keep_complex=False):
    """Kernel with Fourier symbol ``symbol_cr / d^2`` (zero at node 0).

    This is the printed construction.  It is *not* in general a
    fundamental solution of ``D+-``: the per-node product
    ``symbol * (symbol / d^2) = symbol^2 / d^2`` differs from ``e0``.  Use
    :func:`fundsol_exact` for a kernel with the delta property.
    """
    _require_torus(spec)
    syms = axis_symbols(spec, direction)
    d2 = d2_field(spec)
    inv = np.zeros(spec.sizes)
    np.divide(1.0, d2, out=inv, where=d2 > 0)
    return _assemble(spec, [s * inv for s in syms], keep_complex)


def _norm_form_field(syms, spec):
    total = 0.0
    for s in syms:
        total = total + s * s
    return np.broadcast_to(total, spec.sizes)


def singular_set(spec, direction="+"):
    syms = axis_symbols(spec, direction)
    nf = _norm_form_field(syms, spec)
    mask = np.abs(nf) <= singular_tolerance(d2_field(spec))
    return _singular_from_mask(spec, mask, nf)


def _singular_from_mask(spec, mask, nf):
    nodes = tuple(tuple(int(v) for v in idx) for idx in np.argwhere(mask))
    norms = tuple(float(abs(nf[n])) for n in nodes)
    return SingularSet(spec, nodes, norms)


def fundsol_exact(spec, direction="+", keep_complex=False):
    """Kernel whose symbol is the exact inverse ``conj(s) / N(s)`` of ``s = symbol_cr``.

    Returns ``(E, singular)``.  Nodes where ``|N(s)| <= 1e-10 (1 + d^2)`` are
    collected in ``singular`` and get symbol 0, so that
    ``apply_cr(E, D+-, side) == delta_h - singular.correction()`` on both sides.
    """
    _require_torus(spec)
    syms = axis_symbols(spec, direction)
    nf = _norm_form_field(syms, spec)
    mask = np.abs(nf) <= singular_tolerance(d2_field(spec))
    inv_nf = np.zeros(spec.sizes, dtype=complex)
    np.divide(1.0, nf, out=inv_nf, where=~mask)
    sing = _singular_from_mask(spec, mask, nf)
    if len(sing) > 1:
        logger.info("singular set has %d nodes beyond the zero node", len(sing) - 1)
    comps = [_SIGNS[j] * syms[j] * inv_nf for j in range(len(syms))]
    return _assemble(spec, comps, keep_complex), sing


def fundsol(spec, direction="+", variant="exact"):
    """Dispatch on ``variant`` in ``{'paper', 'exact'}``; always returns ``(E, singular_or_None)``."""
    if variant == "paper":
        return fundsol_paper(spec, direction), None
    if variant == "exact":
        return fundsol_exact(spec, direction)
    raise ValueError(f"unknown fundamental-solution variant {variant!r}")


def _sum_distribution(svals, mult, naxes):
    """Distribution of ``sum_k s(theta_k)`` over ``naxes`` independent axes.

    ``svals[u]`` are the distinct values, ``mult[u]`` their multiplicity on
    one axis.  Returns (sums, counts) with sums evaluated in canonical order.
    """
    sums, counts = [], []
    for key in itertools.combinations_with_replacement(range(len(svals)), naxes):
        orderings = math.factorial(naxes)
        weight = 1
        for u in set(key):
            c = key.count(u)
            orderings //= math.factorial(c)
            weight *= mult[u] ** c
        sums.append(sum(svals[u] for u in key))
        counts.append(orderings * weight)
    return np.array(sums, dtype=float), np.array(counts, dtype=float)


def fundsol_pointwise(m, h=1.0, direction="+", M=12, chunk=1 << 22):
    """Trapezoidal quadrature of ``(2 pi)^-8 int (symbol/d^2) exp(-i<mh,xi>) dxi``.

    Uses ``M`` nodes per axis with the node ``xi = 0`` dropped, which equals
    the :func:`fundsol_paper` value on an ``M``-periodic torus at ``m mod M``.
    Axes with ``m_k = 0`` (other than the component axis) enter the
    integrand only through ``sin^2``, so their contribution is summed via
    the exact distribution of ``sum_k sin^2`` rather than node by node.
    Cost grows like ``M^(number of nonzero m_k + 1)``.
    """
    if M < 2:
        raise ValueError("need at least 2 quadrature nodes per axis")
    m = np.asarray(m, dtype=np.int64)
    sign = _direction_sign(direction)
    theta = 2.0 * np.pi * np.arange(M) / M
    tsym = _symbol_theta(theta, sign, h)
    s_all = (4.0 / h**2) * np.sin(theta / 2.0) ** 2
    # distinct sin^2 classes: u = min(t, M - t)
    ucls = np.minimum(np.arange(M), M - np.arange(M))
    svals = [(4.0 / h**2) * np.sin(np.pi * u / M) ** 2 for u in range(M // 2 + 1)]
    mult = [int(np.sum(ucls == u)) for u in range(M // 2 + 1)]
    out = np.zeros(DIM, dtype=complex)
    for j in range(DIM):
        explicit = sorted({k for k in range(DIM) if m[k] != 0} | {j})
        rest = DIM - len(explicit)
        sums, counts = _sum_distribution(svals, mult, rest)
        total = 0.0 + 0.0j
        npts = M ** len(explicit)
        step = max(1, chunk // max(1, len(sums)))
        for start in range(0, npts, step):
            flat = np.arange(start, min(npts, start + step))
            idx = np.unravel_index(flat, (M,) * len(explicit))
            phase = np.zeros(len(flat))
            sx = np.zeros(len(flat))
            tj = None
            for pos, k in enumerate(explicit):
                phase += m[k] * theta[idx[pos]]
                sx += s_all[idx[pos]]
                if k == j:
                    tj = tsym[idx[pos]]
            denom = sx[:, None] + sums[None, :]
            weights = np.zeros_like(denom)
            np.divide(counts[None, :], denom, out=weights, where=denom > 0)
            total += np.sum(tj * np.exp(-1j * phase) * weights.sum(axis=1))
        out[j] = total / (M * h) ** DIM
    return out


@dataclass(frozen=True)
class DecayProbe:
    direction: str
    axis: int
    M: int
    h: float
    radii: tuple
    magnitudes: tuple
    slope: float


def loglog_slope(radii, magnitudes):
    """Least-squares slope of ``log|E|`` against ``log r``."""
    return float(np.polyfit(np.log(np.asarray(radii, float)), np.log(np.asarray(magnitudes, float)), 1)[0])


def decay_probe(direction="+", axis=0, radii=(1, 2, 3), M=12, h=1.0):
    """Sample ``|E(r e_axis)|`` by quadrature and fit the log-log decay slope."""
    radii = tuple(int(r) for r in radii)
    if any(abs(r) >= M / 2 for r in radii):
        raise ValueError(f"radii must satisfy |r| < M/2 = {M / 2}")
    mags = []
    for r in radii:
        m = np.zeros(DIM, dtype=np.int64)
        m[axis] = r
        val = fundsol_pointwise(m, h, direction, M)
        mags.append(float(np.sqrt(np.sum(np.abs(val) ** 2))))
    return DecayProbe(str(direction), axis, M, h, radii, tuple(mags), loglog_slope(radii, mags))


def symbol_inverse_check(spec, direction="+"):
    """Max over non-singular nodes of ``|s * s^-1 - e0|`` and ``|s^-1 * s - e0|`` (direct per-node check)."""
    from octolat.octonion import mul

    sym = cr_symbol_field(spec, direction)
    nf = np.sum(sym * sym, axis=-1)
    mask = np.abs(nf) > singular_tolerance(d2_field(spec))
    inv = np.zeros_like(sym)
    inv[mask] = conj(sym[mask]) / nf[mask][:, None]
    e0 = np.zeros(8)
    e0[0] = 1.0
    left = np.abs(mul(sym[mask], inv[mask]) - e0).max(initial=0.0)
    right = np.abs(mul(inv[mask], sym[mask]) - e0).max(initial=0.0)
    return float(left), float(right)


def iter_nodes(spec):
    return itertools.product(*[range(n) for n in spec.sizes])
