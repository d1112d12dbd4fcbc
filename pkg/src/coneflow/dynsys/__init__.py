from .builtins import BuiltinSystem, SlowFastSplit, builtin_names, get_builtin, make_split
from .expr import Expr, parse_expression, pretty
from .system import (
    SystemDef,
    VectorField,
    as_field,
    compile_components,
    from_callable,
    parse_system,
)

__all__ = [
    "BuiltinSystem",
    "SlowFastSplit",
    "SystemDef",
    "VectorField",
    "Expr",
    "as_field",
    "builtin_names",
    "compile_components",
    "from_callable",
    "get_builtin",
    "make_split",
    "parse_expression",
    "parse_system",
    "pretty",
]
