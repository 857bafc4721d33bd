"""Generator expression parsing, evaluation and monotone inversion"""

from hardylab.genparse.main import (
    BinOp,
    Call,
    ExprHandle,
    Neg,
    Num,
    Var,
    check_monotone,
    eval_expr,
    invert_monotone,
    parse_generator,
    print_expr,
)

__version__ = "1.0.0"

__all__ = [
    "BinOp",
    "Call",
    "ExprHandle",
    "Neg",
    "Num",
    "Var",
    "check_monotone",
    "eval_expr",
    "invert_monotone",
    "parse_generator",
    "print_expr",
]
