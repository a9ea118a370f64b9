"""SITL planning via timed signal transducers.

The heavy lifting lives in the C++ extension `_sitlplan`; this package
re-exports its functions.
"""

from _sitlplan import (  # noqa: F401
    compile_info,
    eval_signal,
    parse_formula,
    plan,
    rewrite_core,
    sat,
    simulate,
)

__all__ = [
    "compile_info",
    "eval_signal",
    "parse_formula",
    "plan",
    "rewrite_core",
    "sat",
    "simulate",
]
