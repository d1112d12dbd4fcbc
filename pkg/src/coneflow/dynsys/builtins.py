"""Registry of bundled reference systems.

``paper-4d`` is a four-dimensional slow-fast system with one fast variable
(the last state relaxes onto the sum of the first three); ``paper-3d-limit``
is its three-dimensional limit at ``eps = 0``; ``circle`` is the harmonic
rotation used as an integrator baseline.  The slow-fast entries carry the
rank-2 cone and the invariant box used by the certification and sweep tools.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..box import Box
from ..cone import QuadraticCone
from ..errors import UnknownSystemError
from . import expr as ex
from .system import SystemDef, parse_system


@dataclass(frozen=True)
class SlowFastSplit:
    """Raw slow/fast decomposition: ``x' = f`` and ``eps * y' = g``."""

    slow_names: tuple[str, ...]
    fast_names: tuple[str, ...]
    param_names: tuple[str, ...]  # always includes "eps"
    f_components: tuple[ex.Expr, ...]
    g_components: tuple[ex.Expr, ...]
    eps0: float

    @property
    def names(self) -> tuple[str, ...]:
        return self.slow_names + self.fast_names

    def slow_time_system(self) -> SystemDef:
        """Evolution field in slow time: ``(f, g/eps)``."""
        eps_idx = self.param_names.index("eps")
        eps = ex.Param("eps", eps_idx)
        comps = list(self.f_components) + [
            ex.BinOp("/", g, eps) for g in self.g_components
        ]
        return SystemDef(self.names, self.param_names, comps)

    def fast_time_system(self) -> SystemDef:
        """Evolution field in fast time: ``(eps*f, g)``."""
        eps_idx = self.param_names.index("eps")
        eps = ex.Param("eps", eps_idx)
        comps = [ex.BinOp("*", eps, f) for f in self.f_components] + list(
            self.g_components
        )
        return SystemDef(self.names, self.param_names, comps)


def make_split(
    slow_names, fast_names, f_texts, g_texts, params=("eps",), eps0=0.1
) -> SlowFastSplit:
    names = tuple(slow_names) + tuple(fast_names)
    f_components = tuple(
        ex.parse_expression(t, names, params) for t in f_texts
    )
    g_components = tuple(
        ex.parse_expression(t, names, params) for t in g_texts
    )
    return SlowFastSplit(
        tuple(slow_names), tuple(fast_names), tuple(params),
        f_components, g_components, float(eps0),
    )


@dataclass(frozen=True)
class BuiltinSystem:
    name: str
    system: SystemDef
    cone: QuadraticCone | None = None
    v_plus: np.ndarray | None = None
    box: Box | None = None
    split: SlowFastSplit | None = None
    default_eps: float | None = None
    default_ic: tuple[float, ...] | None = None


_SLOW_F = (
    "x - y - 1.5*x*z^2 - 0.5*x*(x^2 + y^2) + eps*x*w",
    "x + y - 1.5*y*z^2 - 0.5*y*(x^2 + y^2) + eps*y*w",
    "-z - 0.5*z^3 - 1.5*z*(x^2 + y^2) + eps*z*w",
)
_FAST_G = ("-w + x + y + z",)

_LIMIT_TEXT = """
states: x, y, z
x' = x - y - 1.5*x*z^2 - 0.5*x*(x^2 + y^2)
y' = x + y - 1.5*y*z^2 - 0.5*y*(x^2 + y^2)
z' = -z - 0.5*z^3 - 1.5*z*(x^2 + y^2)
"""

_CIRCLE_TEXT = """
states: x, y
x' = -y
y' = x
"""


def _build_registry() -> dict[str, BuiltinSystem]:
    P = np.diag([-1.0, -1.0, 1.0])
    cone = QuadraticCone(P)
    v_plus = np.array([0.0, 0.0, 1.0])
    box3 = Box.symmetric([4.0, 4.0, 4.0])
    box4 = Box.symmetric([4.0, 4.0, 4.0, 16.0])

    split = make_split(("x", "y", "z"), ("w",), _SLOW_F, _FAST_G, eps0=0.1)
    registry = {
        "paper-4d": BuiltinSystem(
            name="paper-4d",
            system=split.slow_time_system(),
            cone=cone,
            v_plus=v_plus,
            box=box4,
            split=split,
            default_eps=0.05,
            default_ic=(2.0, 2.0, 3.0, 12.0),
        ),
        "paper-3d-limit": BuiltinSystem(
            name="paper-3d-limit",
            system=parse_system(_LIMIT_TEXT),
            cone=cone,
            v_plus=v_plus,
            box=box3,
            default_ic=(2.0, 2.0, 3.0),
        ),
        "circle": BuiltinSystem(
            name="circle",
            system=parse_system(_CIRCLE_TEXT),
            default_ic=(1.0, 0.0),
        ),
    }
    return registry


_REGISTRY = _build_registry()


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def get_builtin(name: str) -> BuiltinSystem:
    """Look up a bundled system by name.

    Returns the system definition together with its cone, competitive-cone
    axis, and invariant domain box where applicable.
    """
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownSystemError(
            f"unknown builtin {name!r}; available: {', '.join(builtin_names())}"
        ) from None
