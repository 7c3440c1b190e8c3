"""Octonion-valued grid functions on hZ^8 and the discrete difference operators.

A :class:`GridFunction` lives either on a discrete torus (periodic shifts)
or on a finite block of lattice points whose exterior is treated as zero.
Values are stored in an array of shape ``(N0, ..., N7, 8)``, row-major, so
``m7`` varies fastest and each ``m7`` layer is a contiguous slice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from octolat.errors import DegenerateGrid, TopologyMismatch
from octolat.octonion import basis_left, basis_right

DIM = 8


class Topology(str, Enum):
    TORUS = "torus"
    BLOCK = "block"


class HalfSpace(str, Enum):
    """Upper (``m7 >= 1``) or lower (``m7 <= -1``) half-lattice."""

    UPPER = "upper"
    LOWER = "lower"

    def contains(self, m7):
        m7 = np.asarray(m7)
        return m7 >= 1 if self is HalfSpace.UPPER else m7 <= -1


CR_VARIANTS = ("D+", "D-", "Dbar+", "Dbar-", "central")


@dataclass(frozen=True)
class GridSpec:
    """Finite computational window of hZ^8.

    ``origin`` is the lattice index of the first stored point.  On a torus
    lattice indices are reduced modulo ``sizes``; on a block, points outside
    ``origin + [0, sizes)`` read as zero.
    """

    sizes: tuple
    h: float = 1.0
    topology: Topology = Topology.TORUS
    origin: tuple = field(default=(0,) * DIM)

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        if len(sizes) != DIM:
            raise ValueError(f"need {DIM} sizes, got {len(sizes)}")
        if any(n < 2 for n in sizes):
            raise ValueError(f"all sizes must be >= 2, got {sizes}")
        if not self.h > 0:
            raise ValueError(f"lattice constant must be positive, got {self.h}")
        origin = tuple(int(o) for o in self.origin)
        if len(origin) != DIM:
            raise ValueError(f"need {DIM} origin indices, got {len(origin)}")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "topology", Topology(self.topology))

    @classmethod
    def torus(cls, n, h=1.0):
        sizes = (n,) * DIM if np.isscalar(n) else tuple(n)
        return cls(sizes, h, Topology.TORUS)

    @classmethod
    def block(cls, lo, hi, h=1.0):
        """Block holding lattice indices ``lo[j] <= m_j <= hi[j]``."""
        lo = (lo,) * DIM if np.isscalar(lo) else tuple(lo)
        hi = (hi,) * DIM if np.isscalar(hi) else tuple(hi)
        sizes = tuple(b - a + 1 for a, b in zip(lo, hi))
        return cls(sizes, h, Topology.BLOCK, lo)

    @property
    def shape(self):
        return self.sizes + (8,)

    @property
    def npoints(self):
        return int(np.prod(self.sizes))

    @property
    def is_torus(self):
        return self.topology is Topology.TORUS

    def axis_indices(self, axis):
        """Lattice indices ``m_axis`` along one axis, in storage order."""
        return self.origin[axis] + np.arange(self.sizes[axis])

    def index_of(self, m):
        """Storage index of lattice point ``m`` (``None`` outside a block)."""
        m = np.asarray(m, dtype=np.int64)
        rel = m - np.asarray(self.origin)
        if self.is_torus:
            return tuple(int(v) for v in np.mod(rel, self.sizes))
        if np.any(rel < 0) or np.any(rel >= np.asarray(self.sizes)):
            return None
        return tuple(int(v) for v in rel)

    def layer_index(self, m7):
        """Storage index along axis 7 of layer ``m7`` (``None`` if absent)."""
        rel = int(m7) - self.origin[7]
        if self.is_torus:
            return rel % self.sizes[7]
        return rel if 0 <= rel < self.sizes[7] else None

    def axis_mask(self, axis, predicate):
        """Boolean mask over the grid selecting points by their ``m_axis``."""
        idx = self.axis_indices(axis)
        if self.is_torus:
            n = self.sizes[axis]
            # centred representative in [-n//2, n - n//2)
            idx = (idx + n // 2) % n - n // 2
        sel = np.asarray(predicate(idx), dtype=bool)
        shape = [1] * DIM
        shape[axis] = self.sizes[axis]
        return np.broadcast_to(sel.reshape(shape), self.sizes)

    def with_h(self, h):
        return GridSpec(self.sizes, h, self.topology, self.origin)


class GridFunction:
    """Octonion (or complexified octonion) valued function on a :class:`GridSpec`."""

    __slots__ = ("spec", "values")

    def __init__(self, spec, values):
        values = np.asarray(values)
        if values.shape != spec.shape:
            raise ValueError(f"values shape {values.shape} does not match {spec.shape}")
        if not np.iscomplexobj(values):
            values = values.astype(float, copy=False)
        values = values.view()
        values.setflags(write=False)
        self.spec = spec
        self.values = values

    @classmethod
    def zeros(cls, spec, dtype=float):
        return cls(spec, np.zeros(spec.shape, dtype=dtype))

    @classmethod
    def delta(cls, spec, m=(0,) * DIM, coeff=None):
        """Discrete delta ``delta_h``: value ``h^-8 coeff`` at ``m`` (``coeff`` defaults to e0)."""
        vals = np.zeros(spec.shape)
        idx = spec.index_of(m)
        if idx is None:
            raise ValueError(f"point {m} lies outside the block")
        c = np.zeros(8)
        c[0] = 1.0
        if coeff is not None:
            c = np.asarray(coeff, dtype=float)
        vals[idx] = c * spec.h ** (-DIM)
        return cls(spec, vals)

    @classmethod
    def from_callable(cls, spec, fn):
        """Evaluate ``fn(m)`` where ``m`` is a list of 8 broadcastable index arrays."""
        grids = np.meshgrid(*[spec.axis_indices(j) for j in range(DIM)], indexing="ij", sparse=True)
        vals = np.broadcast_to(np.asarray(fn(grids)), spec.shape)
        return cls(spec, np.array(vals))

    @property
    def is_complex(self):
        return np.iscomplexobj(self.values)

    def at(self, m):
        """Value at lattice point ``m`` (zero outside a block)."""
        idx = self.spec.index_of(m)
        if idx is None:
            return np.zeros(8, dtype=self.values.dtype)
        return self.values[idx]

    def layer(self, m7):
        """The 7-D slice ``f(., m7)`` as an array of shape ``(N0..N6, 8)``."""
        k = self.spec.layer_index(m7)
        if k is None:
            return np.zeros(self.spec.sizes[:7] + (8,), dtype=self.values.dtype)
        return self.values[..., k, :]

    def sup_norm(self):
        """``max_m |f(m)|`` using the Euclidean norm of each octonion value."""
        return float(np.max(np.sqrt(np.sum(np.abs(self.values) ** 2, axis=-1))))

    def max_abs(self):
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def real(self):
        return GridFunction(self.spec, self.values.real.copy())

    def _check(self, other):
        if isinstance(other, GridFunction):
            if other.spec != self.spec:
                raise ValueError("grid functions live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return GridFunction(self.spec, self.values + self._check(other))

    def __sub__(self, other):
        return GridFunction(self.spec, self.values - self._check(other))

    def __neg__(self):
        return GridFunction(self.spec, -self.values)

    def __mul__(self, scalar):
        return GridFunction(self.spec, self.values * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return GridFunction(self.spec, self.values / scalar)

    def __repr__(self):
        return f"GridFunction(sizes={self.spec.sizes}, h={self.spec.h}, topology={self.spec.topology.value})"


def _require_stencil(spec):
    if min(spec.sizes) < 3:
        raise DegenerateGrid(f"stencil operations need >= 3 points per axis, got {spec.sizes}")


def shift(values, axis, k, topology):
    """Array ``g`` with ``g[m] = f[m + k e_axis]`` (periodic or zero-filled)."""
    if Topology(topology) is Topology.TORUS:
        return np.roll(values, -k, axis=axis)
    out = np.zeros_like(values)
    n = values.shape[axis]
    if abs(k) >= n:
        return out
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    if k >= 0:
        src[axis] = slice(k, n)
        dst[axis] = slice(0, n - k)
    else:
        src[axis] = slice(0, n + k)
        dst[axis] = slice(-k, n)
    out[tuple(dst)] = values[tuple(src)]
    return out


def _diff_values(values, spec, axis, direction):
    if direction in ("forward", "+"):
        return (shift(values, axis, 1, spec.topology) - values) / spec.h
    if direction in ("backward", "-"):
        return (values - shift(values, axis, -1, spec.topology)) / spec.h
    raise ValueError(f"unknown direction {direction!r}")


def diff(f, axis, direction):
    """Forward or backward difference ``h^-1 (f(m + e_j) - f(m))`` / ``h^-1 (f(m) - f(m - e_j))``."""
    return GridFunction(f.spec, _diff_values(f.values, f.spec, axis, direction))


def _cr_terms(variant):
    """(difference direction(s), sign of e_j for j >= 1) for an operator variant."""
    if variant == "D+":
        return ("forward",), 1
    if variant == "D-":
        return ("backward",), 1
    if variant == "Dbar+":
        return ("forward",), -1
    if variant == "Dbar-":
        return ("backward",), -1
    if variant == "central":
        return ("forward", "backward"), 1
    raise ValueError(f"unknown operator variant {variant!r}; expected one of {CR_VARIANTS}")


def apply_cr(f, variant, side="left"):
    """Discrete Cauchy-Riemann operator applied to ``f``.

    ``side='left'`` gives ``sum_j e_j (d_j f)``; ``side='right'`` gives
    ``sum_j (d_j f) e_j``.  The conjugated variants ``Dbar+``/``Dbar-`` use
    ``+d_0`` and ``-e_j d_j`` for ``j >= 1``; ``central`` is
    ``(D+ + D-) / 2``.
    """
    _require_stencil(f.spec)
    directions, imag_sign = _cr_terms(variant)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    out = np.zeros_like(f.values)
    weight = 1.0 / len(directions)
    for direction in directions:
        for j in range(DIM):
            d = _diff_values(f.values, f.spec, j, direction)
            term = basis_left(j, d) if side == "left" else basis_right(d, j)
            sign = 1 if j == 0 else imag_sign
            out += (sign * weight) * term
    return GridFunction(f.spec, out)


def star_laplacian(f):
    """``sum_j d_j^+ d_j^- f``: the 17-point stencil ``(f(m+e_j) - 2 f(m) + f(m-e_j)) / h^2``."""
    _require_stencil(f.spec)
    v, spec = f.values, f.spec
    out = -2.0 * DIM * v
    for j in range(DIM):
        out = out + shift(v, j, 1, spec.topology) + shift(v, j, -1, spec.topology)
    return GridFunction(spec, out / spec.h**2)


def support_box(f, tol=0.0):
    """Bounding box ``(lo, hi)`` of storage indices where ``|f| > tol`` (``None`` if f == 0)."""
    nz = np.any(np.abs(f.values) > tol, axis=-1)
    if not nz.any():
        return None
    lo, hi = [], []
    for j in range(DIM):
        other = tuple(k for k in range(DIM) if k != j)
        hit = np.flatnonzero(nz.any(axis=other))
        lo.append(int(hit[0]))
        hit_hi = int(hit[-1])
        hi.append(hit_hi)
    return tuple(lo), tuple(hi)
