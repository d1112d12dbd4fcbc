"""System definitions: parsing, compiled evaluation, and differentiation.

Expressions are compiled once into plain Python functions; the same compiled
code evaluates floats (integrator hot path), numpy arrays (batched points),
and :class:`~coneflow.dynsys.dual.Dual` numbers (exact forward-mode
jacobians).  A :class:`SystemDef` is immutable after construction and its
evaluation is reentrant.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from ..errors import DimensionError, EvaluationError, ParseError
from . import expr as ex
from .dual import Dual, dual_cos, dual_exp, dual_fpow, dual_ipow, dual_sin, grad_rows, seed_states


# --- runtime helpers available to compiled expressions ----------------------

def _ipow(base, k: int):
    """Integer power by repeated multiplication (works for floats, arrays,
    and Duals alike)."""
    if isinstance(base, Dual):
        return dual_ipow(base, k)
    if k < 0:
        return _ipow(1.0 / base, -k)
    if k == 0:
        return 1.0
    result = None
    square = base
    while k:
        if k & 1:
            result = square if result is None else result * square
        square = square * square if k > 1 else square
        k >>= 1
    return result


def _fpow(base, exponent):
    if isinstance(base, Dual) or isinstance(exponent, Dual):
        if not isinstance(base, Dual):
            base = Dual(base, np.zeros_like(np.asarray(exponent.grad)))
        return dual_fpow(base, exponent)
    if isinstance(exponent, float) and exponent.is_integer():
        return _ipow(base, int(exponent))
    if isinstance(base, np.ndarray):
        if np.any(base <= 0.0):
            raise EvaluationError(
                "non-integer power requires a strictly positive base"
            )
        return base ** exponent
    if base <= 0.0:
        raise EvaluationError("non-integer power requires a strictly positive base")
    return base ** exponent


def _sin(x):
    if isinstance(x, Dual):
        return dual_sin(x)
    return np.sin(x) if isinstance(x, np.ndarray) else math.sin(x)


def _cos(x):
    if isinstance(x, Dual):
        return dual_cos(x)
    return np.cos(x) if isinstance(x, np.ndarray) else math.cos(x)


def _exp(x):
    if isinstance(x, Dual):
        return dual_exp(x)
    if isinstance(x, np.ndarray):
        return np.exp(x)
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


_OPS = {"_ipow": _ipow, "_fpow": _fpow, "sin": _sin, "cos": _cos, "exp": _exp}


def _emit(e: ex.Expr, sym: dict[str, str]) -> str:
    if isinstance(e, ex.Literal):
        return repr(e.value)
    if isinstance(e, (ex.Var, ex.Param)):
        return sym[e.name]
    if isinstance(e, ex.Neg):
        return f"(-{_emit(e.operand, sym)})"
    if isinstance(e, ex.Call):
        return f"{e.func}({_emit(e.arg, sym)})"
    assert isinstance(e, ex.BinOp)
    a, b = e.left, e.right
    if e.op == "^":
        if isinstance(b, ex.Literal) and float(b.value).is_integer():
            k = int(b.value)
            if 0 <= k <= 4 and isinstance(a, (ex.Var, ex.Param, ex.Literal)):
                s = sym[a.name] if not isinstance(a, ex.Literal) else repr(a.value)
                return "1.0" if k == 0 else "(" + "*".join([s] * k) + ")"
            return f"_ipow({_emit(a, sym)}, {k})"
        return f"_fpow({_emit(a, sym)}, {_emit(b, sym)})"
    return f"({_emit(a, sym)} {e.op} {_emit(b, sym)})"


def compile_components(
    components: Sequence[ex.Expr],
    state_names: Sequence[str],
    param_names: Sequence[str],
) -> Callable:
    """Compile expressions into ``f(state_seq, param_seq) -> tuple``."""
    sym = {name: f"_v{i}" for i, name in enumerate(state_names)}
    sym.update({name: f"_p{i}" for i, name in enumerate(param_names)})
    lines = ["def _field(_s, _q):"]
    for i, name in enumerate(state_names):
        lines.append(f"    _v{i} = _s[{i}]")
    for i, name in enumerate(param_names):
        lines.append(f"    _p{i} = _q[{i}]")
    body = ", ".join(_emit(c, sym) for c in components)
    if len(components) == 1:
        body += ","
    lines.append(f"    return ({body})")
    namespace = dict(_OPS)
    exec("\n".join(lines), namespace)  # noqa: S102 - our own generated code
    return namespace["_field"]


class SystemDef:
    """A parsed, differentiable autonomous vector field.

    Parameters are bound at evaluation time via a name -> value mapping; the
    reserved parameter name ``eps`` marks slow-fast systems.
    """

    def __init__(self, state_names, param_names, components):
        self.state_names = tuple(state_names)
        self.param_names = tuple(param_names)
        self.components = tuple(components)
        if len(self.components) != len(self.state_names):
            raise DimensionError(
                f"{len(self.state_names)} states but "
                f"{len(self.components)} component expressions"
            )
        if len(set(self.state_names) | set(self.param_names)) != len(
            self.state_names
        ) + len(self.param_names):
            raise ParseError("state/parameter names must be distinct")
        self.dim = len(self.state_names)
        self._fn = compile_components(
            self.components, self.state_names, self.param_names
        )

    def __repr__(self):
        return (
            f"SystemDef(states={self.state_names}, params={self.param_names})"
        )

    def pretty(self) -> str:
        """Canonical text form (re-parsable by :func:`parse_system`)."""
        lines = [f"states: {', '.join(self.state_names)}"]
        if self.param_names:
            lines.append(f"params: {', '.join(self.param_names)}")
        for name, comp in zip(self.state_names, self.components):
            lines.append(f"{name}' = {ex.pretty(comp)}")
        return "\n".join(lines)

    # -- parameter handling ---------------------------------------------

    def _pvals(self, params: Mapping[str, float] | None) -> list[float]:
        params = dict(params or {})
        vals = []
        for name in self.param_names:
            if name not in params:
                raise EvaluationError(f"unbound parameter {name!r}")
            vals.append(float(params.pop(name)))
        if params:
            raise EvaluationError(f"unknown parameters {sorted(params)}")
        return vals

    def _svals(self, state) -> list[float]:
        state = np.asarray(state, dtype=float)
        if state.shape != (self.dim,):
            raise DimensionError(
                f"expected a {self.dim}-vector, got shape {state.shape}"
            )
        return state.tolist()

    # -- evaluation -------------------------------------------------------

    def eval_field(self, state, params: Mapping[str, float] | None = None) -> np.ndarray:
        """Evaluate the field at one state; raises on non-finite results."""
        svals = self._svals(state)
        pvals = self._pvals(params)
        try:
            out = np.array(self._fn(svals, pvals), dtype=float)
        except ZeroDivisionError as exc:
            raise EvaluationError("division by zero") from exc
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"non-finite field value at {state}")
        return out

    def jacobian(self, state, params: Mapping[str, float] | None = None) -> np.ndarray:
        """Exact forward-mode Jacobian of the field at one state."""
        state = np.asarray(state, dtype=float)
        if state.shape != (self.dim,):
            raise DimensionError(
                f"expected a {self.dim}-vector, got shape {state.shape}"
            )
        pvals = self._pvals(params)
        try:
            out = self._fn(seed_states(state), pvals)
        except ZeroDivisionError as exc:
            raise EvaluationError("division by zero") from exc
        return grad_rows(out, self.dim)

    def jacobian_many(self, states, params: Mapping[str, float] | None = None) -> np.ndarray:
        """Jacobians at a (k, n) batch of states, returned as (k, n, n)."""
        states = np.asarray(states, dtype=float)
        if states.ndim != 2 or states.shape[1] != self.dim:
            raise DimensionError(f"expected (k, {self.dim}) states")
        pvals = self._pvals(params)
        out = self._fn(seed_states(states), pvals)
        return grad_rows(out, self.dim, k=states.shape[0])

    def param_derivative(
        self, state, params: Mapping[str, float], name: str
    ) -> np.ndarray:
        """Derivative of the field with respect to one scalar parameter."""
        svals = self._svals(state)
        pvals = self._pvals(params)
        if name not in self.param_names:
            raise EvaluationError(f"unknown parameter {name!r}")
        idx = self.param_names.index(name)
        seeded = list(pvals)
        seeded[idx] = Dual(pvals[idx], np.ones(1))
        out = self._fn(svals, seeded)
        return np.array(
            [c.grad[0] if isinstance(c, Dual) else 0.0 for c in out], dtype=float
        )

    def bind(self, params: Mapping[str, float] | None = None) -> "VectorField":
        """Fix parameters and return a plain-callable vector field."""
        pvals = self._pvals(params)
        fn = self._fn
        dim = self.dim

        def f(x: np.ndarray) -> np.ndarray:
            return np.array(fn(x.tolist(), pvals), dtype=float)

        pmap = dict(zip(self.param_names, pvals))
        return VectorField(
            dim=dim,
            f=f,
            jac=lambda x: self.jacobian(x, pmap),
            jac_many=lambda xs: self.jacobian_many(xs, pmap),
            names=self.state_names,
        )


@dataclass
class VectorField:
    """A bound autonomous field: callables only, no symbolic structure."""

    dim: int
    f: Callable[[np.ndarray], np.ndarray]
    jac: Callable[[np.ndarray], np.ndarray]
    jac_many: Callable[[np.ndarray], np.ndarray] | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.jac_many is None:
            jac = self.jac
            self.jac_many = lambda xs: np.stack([jac(x) for x in xs])
        if self.names is None:
            self.names = tuple(f"x{i}" for i in range(self.dim))


def from_callable(
    f: Callable[[np.ndarray], np.ndarray],
    dim: int,
    jac: Callable[[np.ndarray], np.ndarray] | None = None,
    names=None,
    fd_step: float = 1e-6,
) -> VectorField:
    """Wrap a plain callable; the Jacobian falls back to central differences."""
    if jac is None:
        def jac(x: np.ndarray) -> np.ndarray:
            x = np.asarray(x, dtype=float)
            cols = []
            for j in range(dim):
                h = fd_step * (1.0 + abs(float(x[j])))
                xp = x.copy()
                xm = x.copy()
                xp[j] += h
                xm[j] -= h
                cols.append((f(xp) - f(xm)) / (2.0 * h))
            return np.stack(cols, axis=1)

    return VectorField(dim=dim, f=f, jac=jac, names=names)


def as_field(sys, params: Mapping[str, float] | None = None) -> VectorField:
    """Coerce a SystemDef (with params) or a VectorField to a VectorField."""
    if isinstance(sys, VectorField):
        return sys
    if isinstance(sys, SystemDef):
        return sys.bind(params)
    inner = getattr(sys, "system", None)
    if isinstance(inner, SystemDef):
        return inner.bind(params)
    raise TypeError(f"cannot interpret {type(sys).__name__} as a vector field")


# --- the multi-line system text format --------------------------------------

def parse_system(text: str) -> SystemDef:
    """Parse the line-based system declaration format.

    ::

        states: x, y
        params: eps        # optional
        x' = -y
        y' = x

    Comments start with ``#``; each declared state needs exactly one
    ``name' = expression`` line.
    """
    states: list[str] | None = None
    params: list[str] = []
    exprs: dict[str, ex.Expr] = {}
    ident = "[A-Za-z_][A-Za-z0-9_]*"

    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("states:"):
            if states is not None:
                raise ParseError("duplicate states declaration", lineno, 1)
            states = [s.strip() for s in line[len("states:"):].split(",") if s.strip()]
            for s in states:
                if not re.fullmatch(ident, s):
                    raise ParseError(f"invalid state name {s!r}", lineno, 1)
            continue
        if line.startswith("params:"):
            params = [s.strip() for s in line[len("params:"):].split(",") if s.strip()]
            for s in params:
                if not re.fullmatch(ident, s):
                    raise ParseError(f"invalid parameter name {s!r}", lineno, 1)
            continue
        m = re.match(rf"({ident})'\s*=\s*(.*)$", line)
        if m is None:
            raise ParseError(f"cannot parse line {line!r}", lineno, 1)
        if states is None:
            raise ParseError("states must be declared first", lineno, 1)
        name, rhs = m.group(1), m.group(2)
        if name not in states:
            raise ParseError(f"undeclared state {name!r}", lineno, 1)
        if name in exprs:
            raise ParseError(f"duplicate equation for {name!r}", lineno, 1)
        exprs[name] = ex.parse_expression(rhs, states, params, line_offset=lineno)
    if states is None:
        raise ParseError("missing states declaration")
    missing = [s for s in states if s not in exprs]
    if missing:
        raise ParseError(f"missing equations for {missing}")
    return SystemDef(states, params, [exprs[s] for s in states])
