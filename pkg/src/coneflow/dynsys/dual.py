"""Forward-mode dual numbers used for exact differentiation of field ASTs.

A :class:`Dual` carries a value and a gradient row.  Values may be plain
floats or 1-D arrays (one entry per evaluation point), in which case the
gradient has one row per point; all arithmetic broadcasts accordingly, so a
single expression evaluation differentiates the field at many points at once.
"""

from __future__ import annotations

import numpy as np

from ..errors import EvaluationError


def _scale(v, g):
    # multiply gradient rows g by value(s) v
    if isinstance(v, float):
        return v * g
    v = np.asarray(v)
    return v[:, None] * g if g.ndim > 1 or v.ndim == 1 else v * g


def _as_val(v):
    if isinstance(v, (int, float)):
        return float(v)
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


class Dual:
    __slots__ = ("val", "grad")
    __array_ufunc__ = None  # force numpy to defer to our reflected operators

    def __init__(self, val, grad):
        self.val = _as_val(val)
        self.grad = np.asarray(grad, dtype=float)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.grad + other.grad)
        return Dual(self.val + other, self.grad)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.grad - other.grad)
        return Dual(self.val - other, self.grad)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.grad)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.val * other.val,
                _scale(other.val, self.grad) + _scale(self.val, other.grad),
            )
        return Dual(self.val * other, _scale(other, self.grad))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.val
            return Dual(
                self.val * inv,
                _scale(inv, self.grad)
                - _scale(self.val * inv * inv, other.grad),
            )
        return Dual(self.val / other, _scale(1.0 / other, self.grad))

    def __rtruediv__(self, other):
        inv = 1.0 / self.val
        return Dual(other * inv, _scale(-other * inv * inv, self.grad))

    def __neg__(self):
        return Dual(-self.val, -self.grad)

    def __pow__(self, exponent):
        if isinstance(exponent, Dual):
            return dual_fpow(self, exponent)
        if isinstance(exponent, int) or (
            isinstance(exponent, float) and exponent.is_integer()
        ):
            return dual_ipow(self, int(exponent))
        return dual_fpow(self, exponent)

    def __repr__(self):
        return f"Dual({self.val!r}, {self.grad!r})"


def dual_ipow(base: Dual, k: int) -> Dual:
    """Integer power by repeated multiplication (binary powering)."""
    if k == 0:
        return Dual(np.ones_like(np.asarray(base.val, dtype=float)),
                    np.zeros_like(base.grad))
    if k < 0:
        return dual_ipow(1.0 / base, -k)
    result = None
    square = base
    while k:
        if k & 1:
            result = square if result is None else result * square
        square = square * square if k > 1 else square
        k >>= 1
    return result


def dual_fpow(base: Dual, exponent) -> Dual:
    vals = np.asarray(base.val)
    if np.any(vals <= 0.0):
        raise EvaluationError(
            "non-integer power requires a strictly positive base"
        )
    if isinstance(exponent, Dual):
        # a^b = exp(b * log(a))
        return dual_exp(exponent * dual_log(base))
    v = vals ** exponent
    return Dual(v, _scale(exponent * vals ** (exponent - 1.0), base.grad))


def _apply(base: Dual, f, df):
    return Dual(f(base.val), _scale(df(base.val), base.grad))


def dual_sin(x: Dual) -> Dual:
    return _apply(x, np.sin, np.cos)


def dual_cos(x: Dual) -> Dual:
    return _apply(x, np.cos, lambda v: -np.sin(v))


def dual_exp(x: Dual) -> Dual:
    return _apply(x, np.exp, np.exp)


def dual_log(x: Dual) -> Dual:
    vals = np.asarray(x.val)
    if np.any(vals <= 0.0):
        raise EvaluationError("log requires a strictly positive argument")
    return _apply(x, np.log, lambda v: 1.0 / v)


def seed_states(values: np.ndarray) -> list[Dual]:
    """One Dual per coordinate, gradients seeded with unit vectors.

    ``values`` has shape (n,) for a single point or (k, n) for a batch; the
    batch case yields Duals with (k,)-valued entries and (k, n) gradients.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        n = values.shape[0]
        eye = np.eye(n)
        return [Dual(values[i], eye[i]) for i in range(n)]
    k, n = values.shape
    out = []
    for i in range(n):
        g = np.zeros((k, n))
        g[:, i] = 1.0
        out.append(Dual(values[:, i], g))
    return out


def grad_rows(components, n: int, k: int | None = None) -> np.ndarray:
    """Stack component gradients into a Jacobian; constants give zero rows."""
    if k is None:
        rows = []
        for c in components:
            rows.append(c.grad if isinstance(c, Dual) else np.zeros(n))
        return np.vstack(rows)
    rows = []
    for c in components:
        if isinstance(c, Dual):
            g = np.asarray(c.grad)
            rows.append(np.broadcast_to(g, (k, n)) if g.ndim == 1 else g)
        else:
            rows.append(np.zeros((k, n)))
    return np.stack(rows, axis=1)  # (k, n_components, n)
