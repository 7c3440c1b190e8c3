"""Boundary-layer symbols, Hardy-type multiplier operators and layer inner products.

All multipliers act on the 7-D layer transform of :mod:`octolat.layer`
by left multiplication ``g^(xi) = s(xi) f^(xi)``.  With
``c = sqrt(4 + h^2 d^2)`` and ``t = sum_{j<7} e_j xi^{+j}`` the printed
symbols are::

    s+ = (e7 (t / d)) * 2 / (h d - c)
    s- = -(e7 (t / d)) * (h d - c) / 2
    A+ = (t / d) * 2 / (c - h d)
    A- = (c + h d) / (c - h d)

All of them except ``A-`` are set to 0 at the zero frequency.
"""

from __future__ import annotations

import numpy as np

from octolat.errors import SingularFrequency
from octolat.layer import LAYER_DIM, BoundaryData, LayerGrid, dft7, idft7
from octolat.octonion import basis_left, left_matrix, mul, conj
from octolat.report import AuditReport, grid_echo

PARENTHESIZATIONS = ("left-nested", "right-nested")
SIDES = ("upper", "lower")


def _sign(sign):
    if sign in ("+", 1, "plus", "upper"):
        return 1
    if sign in ("-", -1, "minus", "lower"):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def _layer_t(theta, h):
    # xi^{+j} = -(1 - e^{-i theta}) / h
    return -(1.0 - np.exp(-1j * theta)) / h


def layer_symbol_parts(xi, h=1.0):
    """``(t, d)`` at frequency vectors ``xi`` of shape ``(..., 7)``.

    ``t`` is the complexified octonion ``sum_{j<7} e_j xi^{+j}`` (shape
    ``(..., 8)``, e7 part zero) and ``d`` the layer magnitude
    ``sqrt((4/h^2) sum sin^2(xi_j h / 2))``.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != LAYER_DIM:
        raise ValueError(f"layer frequencies need {LAYER_DIM} components")
    theta = xi * h
    t = np.zeros(xi.shape[:-1] + (8,), dtype=complex)
    t[..., :LAYER_DIM] = _layer_t(theta, h)
    d = np.sqrt((4.0 / h**2) * np.sum(np.sin(theta / 2.0) ** 2, axis=-1))
    return t, d


def _layer_fields(sizes, h):
    grid = LayerGrid(tuple(sizes), h)
    t = np.zeros(tuple(sizes) + (8,), dtype=complex)
    d2 = 0.0
    for j in range(LAYER_DIM):
        th = grid.theta(j)
        t[..., j] = grid.broadcast(j, _layer_t(th, h))
        d2 = d2 + grid.broadcast(j, (4.0 / h**2) * np.sin(th / 2.0) ** 2)
    return t, np.sqrt(np.broadcast_to(d2, tuple(sizes)))


def _closed_forms(t, d, layer, h):
    c = np.sqrt(4.0 + h**2 * d**2)
    d_ = d[..., None]
    out = np.zeros(t.shape, dtype=complex)
    if layer == 0:
        out += t / (d_ * c[..., None])
        out[..., 7] -= 0.5 - h * d / (2.0 * c)
        return out
    first = (2.0 + h**2 * d**2) / (2.0 * c) - h * d / 2.0
    out += (t / d_) * first[..., None]
    e7_part = -(3.0 * h * d + h**3 * d**3) / (2.0 * c) + (h**2 * d**2 + 1.0) / 2.0
    out[..., 7] += e7_part if layer == 1 else -e7_part
    return out


def boundary_symbol_E(xi, layer=0, h=1.0):
    """Printed closed form of the layer transform of ``E+`` on ``m7 = layer``.

    Parameters
    ----------
    xi : array_like, shape (..., 7)
        Layer frequencies.
    layer : {0, 1, -1}
        ``0``, ``+h`` or ``-h``.

    Raises
    ------
    SingularFrequency
        If any ``xi`` is the zero frequency.
    """
    if layer not in (0, 1, -1):
        raise ValueError(f"layer must be 0, 1 or -1, got {layer}")
    t, d = layer_symbol_parts(xi, h)
    if np.any(d == 0):
        raise SingularFrequency("layer symbols are undefined at the zero frequency")
    return _closed_forms(t, d, layer, h)


def boundary_symbol_field(sizes, h=1.0, layer=0):
    """Closed-form layer symbol at every node of a 7-D torus (0 at the zero node)."""
    t, d = _layer_fields(sizes, h)
    safe = np.where(d > 0, d, 1.0)
    out = _closed_forms(t, safe, layer, h)
    out[d == 0] = 0
    return out


def layer_integral(xi, m7, h=1.0, M=4096):
    """Trapezoidal evaluation of ``(1/2pi) int exp(-i m7 h xi7) (t + e7 xi^{+7}) / d^2 dxi7``.

    This is the layer transform of ``E+`` on the infinite lattice, computed
    independently of the closed forms.  ``xi`` has shape ``(..., 7)``.
    """
    t, d = layer_symbol_parts(xi, h)
    theta7 = 2.0 * np.pi * np.arange(M) / M
    denom = d[..., None] ** 2 + (4.0 / h**2) * np.sin(theta7 / 2.0) ** 2
    phase = np.exp(-1j * m7 * theta7)
    j0 = np.mean(phase / denom, axis=-1)
    j7 = np.mean(phase * _layer_t(theta7, h) / denom, axis=-1)
    out = t * j0[..., None]
    out[..., 7] = j7
    return out


# --- multipliers -----------------------------------------------------------------

def _hardy_factor(d, h, sign):
    c = np.sqrt(4.0 + h**2 * d**2)
    return 2.0 / (h * d - c) if sign > 0 else -(h * d - c) / 2.0


def hardy_multiplier(sizes, h=1.0, sign="+"):
    """Printed symbol ``s+-`` at every layer node, grouped left to right."""
    sign = _sign(sign)
    t, d = _layer_fields(sizes, h)
    safe = np.where(d > 0, d, 1.0)
    e7t = basis_left(7, t / safe[..., None])
    s = e7t * _hardy_factor(safe, h, sign)[..., None]
    s[d == 0] = 0
    return s


def synthetic_multiplier(sizes, kind="hilbert-e7"):
    """Test multipliers with ``s^2 = e0`` away from their zero set.

    ``identity`` is ``e0`` everywhere; ``hilbert-e7`` is
    ``i sign(sin theta_0) e7``, which is conjugate symmetric (real data stay
    real) and squares to ``e0`` where ``sin theta_0 != 0``.
    """
    sizes = tuple(sizes)
    s = np.zeros(sizes + (8,), dtype=complex)
    if kind == "identity":
        s[..., 0] = 1.0
        return s
    if kind == "hilbert-e7":
        grid = LayerGrid(sizes)
        sg = np.sign(np.round(np.sin(grid.theta(0)), 14))
        s[..., 7] = 1j * grid.broadcast(0, sg)
        return s
    raise ValueError(f"unknown synthetic multiplier {kind!r}")


def _as_multiplier(bd, sign, multiplier):
    if multiplier is None:
        return hardy_multiplier(bd.sizes, bd.h, sign), None
    if isinstance(multiplier, str):
        return synthetic_multiplier(bd.sizes, multiplier), None
    m = np.asarray(multiplier)
    if m.shape != tuple(bd.sizes) + (8,):
        raise ValueError(f"multiplier shape {m.shape} does not match the layer {bd.sizes}")
    return m, None


def _finish(bd, out_hat, layer=None):
    vals = idft7(out_hat, bd.h)
    if not np.iscomplexobj(bd.values):
        vals = vals.real.copy()
    return bd.with_values(vals, layer)


def apply_multiplier(bd, symbol, parenthesization="left-nested", factor=None):
    """Left multiplier ``s f^`` on the layer spectrum.

    ``right-nested`` is used for multipliers of the form ``e7 (x c)`` and
    evaluates ``e7 ((x c) f^)`` instead of ``((e7 x) c) f^``; pass ``x c``
    as ``factor`` in that case.
    """
    fh = dft7(bd.values, bd.h)
    if parenthesization == "left-nested":
        gh = mul(symbol, fh)
    elif parenthesization == "right-nested":
        if factor is None:
            raise ValueError("right-nested evaluation needs the inner factor")
        gh = basis_left(7, mul(factor, fh))
    else:
        raise ValueError(f"unknown parenthesization {parenthesization!r}; expected one of {PARENTHESIZATIONS}")
    return _finish(bd, gh)


def _inner_factor(sizes, h, sign):
    # x c with s = e7 (x c): x c = -e7 s
    sign = _sign(sign)
    t, d = _layer_fields(sizes, h)
    safe = np.where(d > 0, d, 1.0)
    inner = (t / safe[..., None]) * _hardy_factor(safe, h, sign)[..., None]
    inner[d == 0] = 0
    return inner


def apply_H(bd, sign="+", parenthesization="left-nested", multiplier=None):
    """Apply ``H+-`` (or a supplied ``multiplier``) to boundary data.

    ``left-nested`` forms the printed symbol ``((e7 t/d) c)`` and multiplies
    the spectrum by it; ``right-nested`` evaluates ``e7 (((t/d) c) f^)``.
    ``multiplier`` may be an array of shape ``(*sizes, 8)`` or the name of a
    :func:`synthetic_multiplier`; a synthetic multiplier is always applied
    left-nested.
    """
    if multiplier is not None:
        s, _ = _as_multiplier(bd, sign, multiplier)
        return apply_multiplier(bd, s, "left-nested")
    s = hardy_multiplier(bd.sizes, bd.h, sign)
    factor = _inner_factor(bd.sizes, bd.h, sign) if parenthesization == "right-nested" else None
    return apply_multiplier(bd, s, parenthesization, factor)


def apply_P(bd, sign="+", parenthesization="left-nested", multiplier=None):
    """Plemelj projection ``(bd + H bd) / 2``."""
    hb = apply_H(bd, sign, parenthesization, multiplier)
    return bd.with_values(0.5 * (bd.values + hb.values))


def remove_mean(bd):
    return bd.with_values(bd.values - bd.values.mean(axis=tuple(range(LAYER_DIM)), keepdims=True))


def hardy_membership(bd, sign="+", tol=1e-8, parenthesization="left-nested", multiplier=None):
    """Check ``bd = H bd`` on zero-mean data.

    The zero-frequency component is removed first (the multipliers vanish
    there).  Returns ``(flag, residual)`` with the relative residual
    ``||bd - H bd||_inf / ||bd||_inf`` (0 for zero data).
    """
    bd0 = remove_mean(bd)
    scale = bd0.max_abs()
    if scale == 0:
        return True, 0.0
    hb = apply_H(bd0, sign, parenthesization, multiplier)
    residual = float(np.max(np.abs(bd0.values - hb.values)) / scale)
    return residual <= tol, residual


def extension_multiplier(sizes, h=1.0, sign="+"):
    """Printed ``A+`` (octonion valued, 0 at the zero node) or scalar ``A-``."""
    sign = _sign(sign)
    t, d = _layer_fields(sizes, h)
    c = np.sqrt(4.0 + h**2 * d**2)
    if sign < 0:
        return (c + h * d) / (c - h * d)
    safe = np.where(d > 0, d, 1.0)
    a = (t / safe[..., None]) * (2.0 / (c - h * safe))[..., None]
    a[d == 0] = 0
    return a


def apply_extension(bd, sign="+"):
    """Extend data from layer ``+1`` (``A+``) or ``-1`` (``A-``) to layer 0."""
    s = _sign(sign)
    want = 1 if s > 0 else -1
    if bd.layer != want:
        raise ValueError(f"{'upper' if s > 0 else 'lower'} extension expects data on layer {want}, got {bd.layer}")
    fh = dft7(bd.values, bd.h)
    a = extension_multiplier(bd.sizes, bd.h, s)
    gh = mul(a, fh) if s > 0 else fh * a[..., None]
    return _finish(bd, gh, layer=0)


def sigma_field(sizes, h=1.0, sign="+", multiplier=None):
    """``s s - e0`` at every node (the zero node is reported as ``-e0``)."""
    s = hardy_multiplier(sizes, h, sign) if multiplier is None else (
        synthetic_multiplier(sizes, multiplier) if isinstance(multiplier, str) else np.asarray(multiplier))
    sq = mul(s, s)
    sq[..., 0] -= 1.0
    return sq


def sigma_audit(sizes, h=1.0, sign="+", multiplier=None, threshold=1e-10, parenthesization="left-nested"):
    """Symbol-squaring audit plus the conditional single-mode ``H^2 = I`` check.

    Returns ``(report, qualifying, worst)`` where ``qualifying`` counts
    non-zero nodes with ``|sigma| < threshold`` and ``worst`` is the largest
    single-mode ``|H H f - f|`` among them (0 if none qualify).
    """
    sizes = tuple(sizes)
    sig = sigma_field(sizes, h, sign, multiplier)
    mag = np.sqrt(np.sum(np.abs(sig) ** 2, axis=-1))
    nonzero = np.ones(sizes, dtype=bool)
    nonzero[(0,) * LAYER_DIM] = False
    good = np.argwhere((mag < threshold) & nonzero)
    rng = np.random.default_rng(0)
    worst = 0.0
    # a handful of qualifying nodes is enough: each check is a full transform pair
    picks = good if len(good) <= 16 else good[rng.choice(len(good), 16, replace=False)]
    for node in picks:
        bd = single_mode(sizes, h, tuple(node), rng.uniform(-1, 1, 8) + 1j * rng.uniform(-1, 1, 8))
        hh = apply_H(apply_H(bd, sign, parenthesization, multiplier), sign, parenthesization, multiplier)
        worst = max(worst, float(np.max(np.abs(hh.values - bd.values)) / bd.max_abs()))
    mags = mag[nonzero]
    report = AuditReport(
        claim=f"hardy-sigma{'+' if _sign(sign) > 0 else '-'}",
        residual_max=float(mags.max()),
        residual_mean=float(mags.mean()),
        variant={"parenthesization": parenthesization},
        grid=grid_echo(sizes, h, "torus"),
        passed=bool(worst < threshold),
        details={
            "multiplier": multiplier if isinstance(multiplier, str) else ("printed" if multiplier is None else "custom"),
            "sigma_min": float(mags.min()),
            "qualifying_nodes": int(len(good)),
            "checked_nodes": int(len(picks)),
            "single_mode_H2_residual": worst,
        },
    )
    return report, int(len(good)), worst


def single_mode(sizes, h, node, coeffs, layer=1):
    """Complex boundary data whose layer spectrum is ``coeffs`` at ``node`` and 0 elsewhere."""
    spec_vals = np.zeros(tuple(sizes) + (8,), dtype=complex)
    spec_vals[tuple(node)] = coeffs
    return BoundaryData(sizes, h, idft7(spec_vals, h), layer)


def eigen_mode(symbol_value, eigenvalue=1.0, tol=1e-8):
    """Eigenvector of ``x -> s x`` (8x8 complex matrix) for ``eigenvalue``.

    Returns ``None`` if no eigenvalue lies within ``tol``.
    """
    L = left_matrix(np.asarray(symbol_value)).T
    w, v = np.linalg.eig(L)
    k = int(np.argmin(np.abs(w - eigenvalue)))
    if abs(w[k] - eigenvalue) > tol:
        return None
    return v[:, k]


# --- inner products and Hilbert-space axioms -------------------------------------

def inner_product(f, g, side="upper", weight_exponent=2):
    """Layer inner product ``sum conj(-+e7 g) (-+e7 f) h^w`` (``w = 2`` as printed)."""
    if tuple(f.sizes) != tuple(g.sizes) or f.h != g.h:
        raise ValueError("inner product needs data on the same layer grid")
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    sgn = -1.0 if side == "upper" else 1.0
    left = conj(basis_left(7, sgn * g.values))
    right = basis_left(7, sgn * f.values)
    return np.sum(mul(left, right).reshape(-1, 8), axis=0) * f.h**weight_exponent


def _right_scale(bd, alpha):
    return bd.with_values(mul(bd.values, np.asarray(alpha, dtype=float)))


def _axiom_residuals(f, g, k, alpha, r, side, w):
    ip = lambda a, b: inner_product(a, b, side, w)  # noqa: E731
    fg = ip(f, g)
    ff = ip(f, f)
    res = {}
    res["additivity"] = np.abs(ip(f + g, k) - (ip(f, k) + ip(g, k))).max()
    res["hermitian"] = np.abs(ip(g, f) - conj(fg)).max()
    res["positivity"] = max(np.abs(ff[1:]).max(), max(0.0, -ff[0]))
    res["r-homogeneity"] = np.abs(ip(f * r, g) - fg * r).max()
    fa = _right_scale(f, alpha)
    res["o-homogeneity"] = np.abs(ip(fa, f) - mul(ff, alpha)).max()
    res["para-linearity"] = abs(ip(fa, g)[0] - mul(fg, alpha)[0])
    scale = max(1.0, float(np.abs(ff).max()), float(np.abs(fg).max()))
    return {key: float(v) / scale for key, v in res.items()}


AXIOMS = ("additivity", "hermitian", "positivity", "r-homogeneity", "o-homogeneity", "para-linearity")
HARD_AXIOMS = AXIOMS[:4]


def hilbert_axioms_check(sizes=(3,) * 7, h=1.0, side="upper", seed=0, trials=20, weight_exponent=2, tol=1e-12):
    """Property-test the octonionic Hilbert-space axioms (i)-(vi) for ``inner_product``.

    Returns one :class:`AuditReport` per axiom with the worst relative
    residual over ``trials`` random triples and random ``alpha``.  Axioms
    (i)-(iv) are hard claims; (v) and (vi) are reported only.
    """
    rng = np.random.default_rng(seed)
    worst = {a: [] for a in AXIOMS}
    sizes = tuple(sizes)
    for _ in range(trials):
        f, g, k = (BoundaryData(sizes, h, rng.uniform(-1, 1, sizes + (8,)), 0) for _ in range(3))
        alpha = rng.uniform(-1, 1, 8)
        r = float(rng.uniform(-2, 2))
        for key, v in _axiom_residuals(f, g, k, alpha, r, side, weight_exponent).items():
            worst[key].append(v)
    reports = []
    for i, a in enumerate(AXIOMS):
        vals = np.array(worst[a])
        reports.append(AuditReport(
            claim=f"hilbert-axiom-{['i', 'ii', 'iii', 'iv', 'v', 'vi'][i]}-{a}",
            residual_max=float(vals.max()),
            residual_mean=float(vals.mean()),
            variant={"weight_exponent": weight_exponent},
            grid=grid_echo(sizes, h, "torus"),
            seed=seed,
            passed=bool(vals.max() < tol) if a in HARD_AXIOMS else None,
            details={"side": side, "trials": trials},
        ))
    return reports


# --- layer-symbol audits ---------------------------------------------------------

def layer_symbol_audit(sizes, h=1.0, M=4096):
    """Closed-form layer symbols vs 1-D quadrature of the defining integral.

    Returns a dict ``layer -> (max abs difference, max abs difference of
    the e7 part, max abs difference of the remaining parts)`` over all
    non-zero nodes of a 7-D torus with ``sizes``.
    """
    grid = LayerGrid(tuple(sizes), h)
    xi = grid.xi_nodes().reshape(-1, LAYER_DIM)
    xi = xi[np.any(xi != 0, axis=-1)]
    out = {}
    for layer in (0, 1, -1):
        closed = boundary_symbol_E(xi, layer, h)
        quad = layer_integral(xi, layer, h, M)
        diff = np.abs(closed - quad)
        out[layer] = (float(diff.max()), float(diff[:, 7].max()), float(diff[:, :7].max()))
    return out


def torus_layer_transform(E, m7):
    """Layer transform of a torus kernel ``E`` on ``m7`` (aliasing-limited in axis 7)."""
    return dft7(np.asarray(E.layer(m7)), E.spec.h)
