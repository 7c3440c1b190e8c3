"""Real and complexified octonion arithmetic.

Octonions are stored as numpy arrays whose trailing axis holds the eight
coefficients ``c0..c7`` of the basis ``e0..e7``.  The basis labelling is
``e4 = e1 e2``, ``e5 = e1 e3``, ``e6 = e2 e3``, ``e7 = (e1 e2) e3``.

All array functions broadcast over leading axes, so a grid of octonions
is simply an array of shape ``(..., 8)``.  Complex dtype arrays represent
complexified octonions ``a + i b`` with ``a, b`` real octonions; the
complex unit commutes with every ``e_j``.
"""

from __future__ import annotations

import numbers

import numpy as np

from octolat.errors import ZeroDivisor, ZeroInput

# Oriented triples (i, j, k) with e_i e_j = e_k; cyclic shifts hold as well.
FANO_TRIPLES = ((1, 2, 4), (1, 3, 5), (1, 7, 6), (2, 3, 6), (2, 5, 7), (4, 3, 7), (4, 6, 5))


def _build_table():
    index = np.zeros((8, 8), dtype=np.int64)
    sign = np.zeros((8, 8), dtype=np.int64)
    for i in range(8):
        index[0, i] = index[i, 0] = i
        sign[0, i] = sign[i, 0] = 1
    for i in range(1, 8):
        index[i, i] = 0
        sign[i, i] = -1
    for a, b, c in FANO_TRIPLES:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            index[x, y] = index[y, x] = z
            sign[x, y] = 1
            sign[y, x] = -1
    index.setflags(write=False)
    sign.setflags(write=False)
    return index, sign


#: ``e_i e_j = MUL_SIGN[i, j] * e_{MUL_INDEX[i, j]}``
MUL_INDEX, MUL_SIGN = _build_table()

# Multiplication table transcribed row by row (row e_i times column e_j).
REFERENCE_TABLE = (
    ("1", "e1", "e2", "e3", "e4", "e5", "e6", "e7"),
    ("e1", "-1", "e4", "e5", "-e2", "-e3", "-e7", "e6"),
    ("e2", "-e4", "-1", "e6", "e1", "e7", "-e3", "-e5"),
    ("e3", "-e5", "-e6", "-1", "-e7", "e1", "e2", "e4"),
    ("e4", "e2", "-e1", "e7", "-1", "-e6", "e5", "-e3"),
    ("e5", "e3", "-e7", "-e1", "e6", "-1", "-e4", "e2"),
    ("e6", "e7", "e3", "-e2", "-e5", "e4", "-1", "-e1"),
    ("e7", "-e6", "e5", "-e4", "e3", "-e2", "e1", "-1"),
)


def parse_table_entry(entry):
    """``'-e5'`` -> ``(-1, 5)``; ``'1'`` -> ``(1, 0)``."""
    entry = entry.strip().replace("\u2212", "-")
    sign = -1 if entry.startswith("-") else 1
    body = entry.lstrip("+-")
    return sign, 0 if body == "1" else int(body[1:])


def table_mismatches():
    """Basis pairs ``(i, j)`` where the generated table differs from :data:`REFERENCE_TABLE`."""
    bad = []
    for i in range(8):
        for j in range(8):
            if parse_table_entry(REFERENCE_TABLE[i][j]) != (int(MUL_SIGN[i, j]), int(MUL_INDEX[i, j])):
                bad.append((i, j))
    return bad


_CONJ_SIGNS = np.array([1.0, -1, -1, -1, -1, -1, -1, -1])


def basis(j, dtype=float):
    """Return the basis element ``e_j`` as a length-8 array."""
    out = np.zeros(8, dtype=dtype)
    out[j] = 1
    return out


def _structure_matrix():
    # out[k] = sum_{i,j} a_i b_j STRUCT[8 i + j, k]
    m = np.zeros((64, 8))
    for i in range(8):
        for j in range(8):
            m[8 * i + j, MUL_INDEX[i, j]] = MUL_SIGN[i, j]
    m.setflags(write=False)
    return m


_STRUCT = _structure_matrix()
_STRUCT3 = _STRUCT.reshape(8, 8, 8)
# e_j a = a @ _LEFT[j],  a e_j = a @ _RIGHT[j]
_LEFT = np.ascontiguousarray(_STRUCT3)
_RIGHT = np.ascontiguousarray(np.transpose(_STRUCT3, (1, 0, 2)))
_CHUNK = 1 << 15


def _mul_real(a, b):
    shape = np.broadcast_shapes(a.shape, b.shape)
    dtype = np.result_type(a, b, float)
    if a.ndim == 1:
        # left factor fixed: (a b)_k = sum_j b_j sum_i a_i S[i, j, k]
        return (b @ np.tensordot(a, _STRUCT3, axes=(0, 0))).astype(dtype, copy=False).reshape(shape)
    if b.ndim == 1:
        return (a @ np.tensordot(b, _STRUCT3, axes=(0, 1))).astype(dtype, copy=False).reshape(shape)
    a2 = np.broadcast_to(a, shape).reshape(-1, 8)
    b2 = np.broadcast_to(b, shape).reshape(-1, 8)
    out = np.empty(a2.shape, dtype=dtype)
    for s in range(0, a2.shape[0], _CHUNK):
        outer = a2[s:s + _CHUNK, :, None] * b2[s:s + _CHUNK, None, :]
        out[s:s + _CHUNK] = outer.reshape(-1, 64) @ _STRUCT
    return out.reshape(shape)


def mul(a, b):
    """Octonion product ``a b`` (bilinear, broadcasting over leading axes).

    Complex inputs are split as ``a = ar + i ai`` and multiplied as
    ``(ar br - ai bi) + i (ar bi + ai br)`` using the real product.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    a_cplx = np.iscomplexobj(a)
    b_cplx = np.iscomplexobj(b)
    if not a_cplx and not b_cplx:
        return _mul_real(a, b)
    if a_cplx and b_cplx:
        re = _mul_real(a.real, b.real) - _mul_real(a.imag, b.imag)
        im = _mul_real(a.real, b.imag) + _mul_real(a.imag, b.real)
    elif a_cplx:
        re = _mul_real(a.real, b)
        im = _mul_real(a.imag, b)
    else:
        re = _mul_real(a, b.real)
        im = _mul_real(a, b.imag)
    return re + 1j * im


def basis_left(j, a):
    """Return ``e_j a`` without a full product (signed permutation)."""
    return np.asarray(a) @ _LEFT[j]


def basis_right(a, j):
    """Return ``a e_j`` without a full product (signed permutation)."""
    return np.asarray(a) @ _RIGHT[j]


def left_matrix(a):
    """Real 8x8 matrix ``L`` with ``mul(a, x) == x @ L`` (rows: input coefficient)."""
    return np.tensordot(np.asarray(a), _STRUCT3, axes=(-1, 0))


def right_matrix(b):
    """Real 8x8 matrix ``R`` with ``mul(x, b) == x @ R``."""
    return np.tensordot(np.asarray(b), _STRUCT3, axes=(-1, 1))


def conj(a, complex_conjugate=False):
    """Octonionic conjugate: negate the coefficients of ``e1..e7``.

    For complexified octonions the coefficients themselves are left
    untouched unless ``complex_conjugate`` is set.
    """
    a = np.asarray(a)
    out = a * _CONJ_SIGNS
    if complex_conjugate:
        out = np.conj(out)
    return out


def norm(a):
    """Euclidean norm of a real octonion."""
    a = np.asarray(a)
    return np.sqrt(np.sum(a * a, axis=-1))


def norm_form(a):
    """Quadratic form ``N(a) = sum_j c_j**2`` (complex for complexified input).

    ``mul(a, conj(a)) == N(a) e0`` holds in both the real and the
    complexified algebra.
    """
    a = np.asarray(a)
    return np.sum(a * a, axis=-1)


def inverse_tolerance(a):
    """Default zero-divisor threshold ``1e-12 (1 + sum |c_j|^2)``."""
    a = np.asarray(a)
    return 1e-12 * (1.0 + np.sum(np.abs(a) ** 2, axis=-1))


def inverse(a, eps=None):
    """Two-sided inverse ``conj(a) / N(a)``.

    Raises
    ------
    ZeroInput
        A real octonion is exactly zero.
    ZeroDivisor
        A complexified octonion has ``|N(a)| <= eps`` (default
        :func:`inverse_tolerance`).
    """
    a = np.asarray(a)
    n = norm_form(a)
    if np.iscomplexobj(a):
        tol = inverse_tolerance(a) if eps is None else eps
        if np.any(np.abs(n) <= tol):
            raise ZeroDivisor("complexified octonion has vanishing norm form")
    elif np.any(n == 0):
        raise ZeroInput("the zero octonion has no inverse")
    return conj(a) / n[..., None]


def associator(a, b, c):
    """``(a b) c - a (b c)``."""
    return mul(mul(a, b), c) - mul(a, mul(b, c))


class Octonion:
    """Immutable real octonion value.

    Supports ``+``, ``-``, scalar and octonion ``*``, and ``/`` by a real
    scalar.  The product is the (non-associative) octonion product, so
    ``(x * y) * z`` and ``x * (y * z)`` generally differ.
    """

    __slots__ = ("_c",)
    _dtype = float

    def __init__(self, coeffs=0.0):
        c = np.zeros(8, dtype=self._dtype)
        if isinstance(coeffs, numbers.Number):
            c[0] = coeffs
        else:
            arr = np.asarray(coeffs)
            if arr.shape != (8,):
                raise ValueError(f"expected 8 coefficients, got shape {arr.shape}")
            if self._dtype is not complex and np.iscomplexobj(arr):
                raise TypeError("complex coefficients need ComplexOctonion")
            c[:] = arr
        if not np.all(np.isfinite(c)):
            raise ValueError("octonion coefficients must be finite")
        c.setflags(write=False)
        self._c = c

    @classmethod
    def basis(cls, j):
        return cls(basis(j))

    @property
    def coeffs(self):
        return self._c

    @property
    def real(self):
        return self._c[0]

    @staticmethod
    def _wrap(arr):
        return ComplexOctonion(arr) if np.iscomplexobj(arr) else Octonion(arr)

    @staticmethod
    def _coeffs_of(other):
        if isinstance(other, Octonion):
            return other._c
        if isinstance(other, numbers.Number):
            return other * basis(0, dtype=complex if isinstance(other, complex) else float)
        return None

    def __add__(self, other):
        o = self._coeffs_of(other)
        if o is None:
            return NotImplemented
        return self._wrap(self._c + o)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self._c)

    def __sub__(self, other):
        o = self._coeffs_of(other)
        if o is None:
            return NotImplemented
        return self._wrap(self._c - o)

    def __rsub__(self, other):
        o = self._coeffs_of(other)
        if o is None:
            return NotImplemented
        return self._wrap(o - self._c)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self._wrap(self._c * other)
        if isinstance(other, Octonion):
            return self._wrap(mul(self._c, other._c))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self._wrap(other * self._c)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            return self._wrap(self._c / other)
        return NotImplemented

    def conj(self, complex_conjugate=False):
        return type(self)(conj(self._c, complex_conjugate))

    def norm(self):
        return float(norm(self._c))

    def norm_form(self):
        return norm_form(self._c)

    def inverse(self):
        return type(self)(inverse(self._c))

    def __eq__(self, other):
        if isinstance(other, Octonion):
            return bool(np.array_equal(self._c, other._c))
        return NotImplemented

    def __hash__(self):
        return hash(self._c.tobytes())

    def isclose(self, other, atol=1e-12):
        o = other._c if isinstance(other, Octonion) else np.asarray(other)
        return bool(np.max(np.abs(self._c - o)) <= atol)

    def __repr__(self):
        terms = ", ".join(f"{v!r}" for v in self._c.tolist())
        return f"{type(self).__name__}([{terms}])"


class ComplexOctonion(Octonion):
    """Immutable element of the complexified octonions ``O (x) C``."""

    __slots__ = ()
    _dtype = complex

    @classmethod
    def from_parts(cls, re, im):
        """Build ``re + i im`` from two real octonions (or coefficient arrays)."""
        re = re.coeffs if isinstance(re, Octonion) else np.asarray(re, dtype=float)
        im = im.coeffs if isinstance(im, Octonion) else np.asarray(im, dtype=float)
        return cls(re + 1j * im)

    @property
    def parts(self):
        return Octonion(self._c.real), Octonion(self._c.imag)

    def norm(self):
        raise TypeError("the complexified algebra has no norm; use norm_form()")

    def norm_form(self):
        return complex(norm_form(self._c))
