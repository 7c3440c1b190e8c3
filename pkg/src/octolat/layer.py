"""Octonion-valued data on a single 7-D lattice layer ``m7 = const``.

Layers are periodic in axes 0..6 (a 7-D torus) with storage index equal to
the lattice index modulo the size.  The 7-D transform uses the same sign
and weight conventions as :mod:`octolat.spectral` restricted to axes 0..6::

    F7 u(xi) = sum_m exp(+i <mh, xi>) u(mh) h^7
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LAYER_DIM = 7
_AXES = tuple(range(LAYER_DIM))


class BoundaryData:
    """Octonion values on a 7-D layer ``m7 = layer`` with lattice constant ``h``."""

    __slots__ = ("sizes", "h", "values", "layer")

    def __init__(self, sizes, h, values, layer=0):
        sizes = tuple(int(n) for n in sizes)
        if len(sizes) != LAYER_DIM:
            raise ValueError(f"need {LAYER_DIM} sizes, got {len(sizes)}")
        values = np.asarray(values)
        if values.shape != sizes + (8,):
            raise ValueError(f"values shape {values.shape} does not match {sizes + (8,)}")
        if not h > 0:
            raise ValueError("lattice constant must be positive")
        if int(layer) not in (-1, 0, 1):
            raise ValueError(f"layer must be -1, 0 or 1, got {layer}")
        self.sizes = sizes
        self.h = float(h)
        self.values = values
        self.layer = int(layer)

    @classmethod
    def zeros(cls, sizes, h=1.0, layer=0):
        sizes = (sizes,) * LAYER_DIM if np.isscalar(sizes) else tuple(sizes)
        return cls(sizes, h, np.zeros(tuple(sizes) + (8,)), layer)

    @property
    def npoints(self):
        return int(np.prod(self.sizes))

    def with_values(self, values, layer=None):
        return BoundaryData(self.sizes, self.h, values, self.layer if layer is None else layer)

    def sup_norm(self):
        return float(np.max(np.sqrt(np.sum(np.abs(self.values) ** 2, axis=-1)))) if self.values.size else 0.0

    def max_abs(self):
        return float(np.max(np.abs(self.values)))

    def __add__(self, other):
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def __repr__(self):
        return f"BoundaryData(sizes={self.sizes}, h={self.h}, layer={self.layer})"


def dft7(values, h):
    """Forward 7-D transform of a ``(*sizes7, 8)`` array."""
    n = int(np.prod(values.shape[:LAYER_DIM]))
    out = np.empty(values.shape, dtype=complex)
    for c in range(values.shape[-1]):
        out[..., c] = np.fft.ifftn(values[..., c], axes=_AXES) * (n * h**LAYER_DIM)
    return out


def idft7(values, h):
    """Inverse of :func:`dft7`."""
    n = int(np.prod(values.shape[:LAYER_DIM]))
    out = np.empty(values.shape, dtype=complex)
    for c in range(values.shape[-1]):
        out[..., c] = np.fft.fftn(values[..., c], axes=_AXES) / (n * h**LAYER_DIM)
    return out


@dataclass(frozen=True)
class LayerGrid:
    """Frequency grid of a 7-D layer; nodes in FFT storage order."""

    sizes: tuple
    h: float = 1.0

    def theta(self, axis):
        return 2.0 * np.pi * np.fft.fftfreq(self.sizes[axis])

    def broadcast(self, axis, values):
        shape = [1] * LAYER_DIM
        shape[axis] = self.sizes[axis]
        return np.reshape(values, shape)

    def xi_nodes(self):
        """Array ``(*sizes, 7)`` of frequency vectors ``xi``."""
        grids = np.meshgrid(*[self.theta(j) / self.h for j in range(LAYER_DIM)], indexing="ij")
        return np.stack(grids, axis=-1)
