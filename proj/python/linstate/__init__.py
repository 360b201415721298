from ._linstate import (
    LinstateError,
    check,
    check_theory,
    decide_equal,
    evaluate,
    normalize,
    roundtrip,
    translate,
    untranslate,
)

__all__ = [
    "LinstateError",
    "check",
    "check_theory",
    "decide_equal",
    "evaluate",
    "normalize",
    "roundtrip",
    "translate",
    "untranslate",
]
