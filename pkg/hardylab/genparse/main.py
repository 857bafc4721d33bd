#!/usr/bin/env python3
"""
Generator Expression Parser

Parses, prints, evaluates and inverts the generator expressions of
quasiarithmetic means. The grammar is deliberately small:

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?          # right-associative, binds tightest
    primary := NUMBER | VAR | FUNC "(" expr ")" | "(" expr ")"

with ``FUNC`` one of ``log`` and ``exp`` and a single variable (``x`` unless a
different name is requested, e.g. ``n`` for sequence rules).
"""

import logging
import math
import re
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Union

import numpy as np
from scipy import optimize

from hardylab.config import SETTINGS
from hardylab.errors import (
    ExprDomainError,
    GeneratorSyntaxError,
    MonotonicityError,
    UnknownIdentifierError,
)

logger = logging.getLogger(__name__)

FUNCTIONS = {"log": math.log, "exp": math.exp}

# Binding strength used by the printer
PREC_ADD, PREC_MUL, PREC_UNARY, PREC_POW, PREC_ATOM = 1, 2, 3, 4, 5


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]


@dataclass(frozen=True)
class ExprHandle:
    """Immutable parsed expression together with its compiled evaluator."""

    root: Node
    variable: str = "x"
    text: str = field(default="", compare=False)
    _fn: Callable[[float], float] = field(
        init=False, repr=False, compare=False, default=None
    )

    def __post_init__(self):
        object.__setattr__(self, "_fn", _compile(self.root))

    def __call__(self, x: float) -> float:
        return eval_expr(self, x)

    def __str__(self) -> str:
        return print_expr(self.root)

    @property
    def inverse(self) -> Optional[Callable[[float], float]]:
        """Closed-form inverse when the generator has a registered one."""
        return _registered_inverse(self.root, self.variable)


# --------------------------------------------------------------------------
# Tokenizer and parser
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op" or "end"
    text: str
    offset: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if not match:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise GeneratorSyntaxError(
                f"unexpected character {text[offset]!r}", text, offset
            )
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variable: str):
        self.text = text
        self.variable = variable
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.token
        self.index += 1
        return token

    def error(self, message: str, token: Optional[Token] = None):
        token = token or self.token
        return GeneratorSyntaxError(message, self.text, token.offset)

    def expect(self, op: str) -> None:
        if self.token.kind == "op" and self.token.text == op:
            self.advance()
            return
        if op == ")":
            raise self.error("unbalanced parentheses: expected ')'")
        raise self.error(f"expected {op!r}")

    def parse(self) -> Node:
        node = self.expr()
        if self.token.kind != "end":
            if self.token.text == ")":
                raise self.error("unbalanced parentheses: unexpected ')'")
            raise self.error(f"unexpected token {self.token.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.token.kind == "op" and self.token.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.token.kind == "op" and self.token.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.token.kind == "op" and self.token.text == "-":
            self.advance()
            operand = self.unary()
            if isinstance(operand, Num):
                return Num(-operand.value)
            return Neg(operand)
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.token.kind == "op" and self.token.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Node:
        token = self.token
        if token.kind == "num":
            self.advance()
            value = float(token.text)
            if not math.isfinite(value):
                raise self.error("numeric literal out of range", token)
            return Num(value)
        if token.kind == "name":
            self.advance()
            if token.text == self.variable:
                return Var(self.variable)
            if token.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(token.text, arg)
            raise UnknownIdentifierError(
                f"unknown identifier {token.text!r}", self.text, token.offset
            )
        if token.kind == "op" and token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if token.kind == "end":
            raise self.error("unexpected end of input")
        if token.text == ")":
            raise self.error("unbalanced parentheses: unexpected ')'")
        raise self.error(f"unexpected token {token.text!r}")


def parse_generator(text: str, variable: str = "x") -> ExprHandle:
    """
    Parse generator text into an immutable expression handle.

    Args:
        text: Expression source, e.g. ``"log(x)"`` or ``"x^0.5 + 1"``
        variable: Name of the single free variable

    Returns:
        ExprHandle wrapping the syntax tree

    Raises:
        GeneratorSyntaxError: with the 0-based character offset of the problem
    """
    root = _Parser(text, variable).parse()
    return ExprHandle(root=root, variable=variable, text=text)


# --------------------------------------------------------------------------
# Printer
# --------------------------------------------------------------------------


def _precedence(node: Node) -> int:
    if isinstance(node, Num):
        return PREC_UNARY if math.copysign(1.0, node.value) < 0 else PREC_ATOM
    if isinstance(node, (Var, Call)):
        return PREC_ATOM
    if isinstance(node, Neg):
        return PREC_UNARY
    if node.op == "^":
        return PREC_POW
    return PREC_MUL if node.op in "*/" else PREC_ADD


def _wrap(node: Node, needs_parens: bool) -> str:
    text = print_expr(node)
    return f"({text})" if needs_parens else text


def print_expr(node: Union[Node, ExprHandle]) -> str:
    """Render an expression with the fewest parentheses that parse back to it."""
    if isinstance(node, ExprHandle):
        node = node.root
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({print_expr(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _precedence(node.operand) < PREC_UNARY)
    prec = _precedence(node)
    if node.op == "^":
        left = _wrap(node.left, _precedence(node.left) <= PREC_POW)
        right = _wrap(node.right, _precedence(node.right) < PREC_UNARY)
        return f"{left}^{right}"
    left = _wrap(node.left, _precedence(node.left) < prec)
    right = _wrap(node.right, _precedence(node.right) <= prec)
    return f"{left} {node.op} {right}"


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------


def _pow(base: float, exponent: float) -> float:
    return math.pow(base, exponent)


_BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "^": _pow,
}


def _compile(node: Node) -> Callable[[float], float]:
    if isinstance(node, Num):
        value = node.value
        return lambda x: value
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Neg):
        inner = _compile(node.operand)
        return lambda x: -inner(x)
    if isinstance(node, Call):
        func = FUNCTIONS[node.func]
        arg = _compile(node.arg)
        return lambda x: func(arg(x))
    op = _BINARY[node.op]
    left, right = _compile(node.left), _compile(node.right)
    return lambda x: op(left(x), right(x))


def _interpret(node: Node, x: float) -> float:
    """Slow tree walk that names the node responsible for a domain failure."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_interpret(node.operand, x)
    if isinstance(node, Call):
        arg = _interpret(node.arg, x)
        if node.func == "log" and arg <= 0:
            raise ExprDomainError(
                f"log of nonpositive value {arg!r} in {print_expr(node)}", node
            )
        try:
            result = FUNCTIONS[node.func](arg)
        except OverflowError:
            raise ExprDomainError(f"overflow in {print_expr(node)}", node)
        if not math.isfinite(result):
            raise ExprDomainError(f"non-finite result in {print_expr(node)}", node)
        return result
    left = _interpret(node.left, x)
    right = _interpret(node.right, x)
    if node.op == "/" and right == 0:
        raise ExprDomainError(f"division by zero in {print_expr(node)}", node)
    try:
        result = _BINARY[node.op](left, right)
    except ZeroDivisionError:
        raise ExprDomainError(f"division by zero in {print_expr(node)}", node)
    except OverflowError:
        raise ExprDomainError(f"overflow in {print_expr(node)}", node)
    except ValueError:
        raise ExprDomainError(
            f"{left!r}^{right!r} is undefined in {print_expr(node)}", node
        )
    if not math.isfinite(result):
        raise ExprDomainError(f"non-finite result in {print_expr(node)}", node)
    return result


def eval_expr(e: ExprHandle, x: float) -> float:
    """
    Evaluate an expression at a positive point.

    Raises:
        ExprDomainError: naming the offending node (log of a nonpositive value,
            division by zero, overflow, undefined power) or the variable itself
            when ``x`` is not a positive finite number
    """
    if not (x > 0 and math.isfinite(x)):
        raise ExprDomainError(
            f"{e.variable} must be a positive finite number, got {x!r}",
            Var(e.variable),
        )
    try:
        result = e._fn(x)
    except (ValueError, ZeroDivisionError, OverflowError):
        return _interpret(e.root, x)
    if not math.isfinite(result):
        return _interpret(e.root, x)
    return result


def _registered_inverse(node: Node, variable: str) -> Optional[Callable]:
    var = Var(variable)
    if isinstance(node, Call) and node.arg == var:
        return math.exp if node.func == "log" else math.log
    if (
        isinstance(node, BinOp)
        and node.op == "^"
        and node.left == var
        and isinstance(node.right, Num)
        and node.right.value != 0
    ):
        inv = 1.0 / node.right.value
        return lambda y: math.pow(y, inv)
    return None


# --------------------------------------------------------------------------
# Monotone inversion
# --------------------------------------------------------------------------


def check_monotone(
    e: ExprHandle,
    lo: float,
    hi: float,
    samples: int = SETTINGS.monotone_samples,
    log_spaced: bool = False,
) -> int:
    """
    Sample ``e`` on [lo, hi] and return +1 (increasing) or -1 (decreasing).

    Raises:
        MonotonicityError: when the sampled values are not strictly monotone
        ExprDomainError: when a sample point cannot be evaluated
    """
    grid = np.geomspace(lo, hi, samples) if log_spaced else np.linspace(lo, hi, samples)
    values = [eval_expr(e, float(point)) for point in grid]
    steps = np.diff(values)
    if np.all(steps > 0):
        return 1
    if np.all(steps < 0):
        return -1
    raise MonotonicityError(
        f"{print_expr(e)} is not strictly monotone on [{lo!r}, {hi!r}] "
        f"(checked at {samples} points)",
        samples=[float(point) for point in grid],
    )


def invert_monotone(
    e: ExprHandle,
    y: float,
    lo: float,
    hi: float,
    check: bool = True,
    tol: float = SETTINGS.bisection_tol,
    max_iter: int = SETTINGS.bisection_max_iter,
) -> float:
    """
    Solve ``e(x) = y`` for x in [lo, hi] by bisection.

    Monotonicity is sampled, not proven: with ``check`` the expression is
    evaluated at 64 evenly spaced points first. ``scipy.optimize.bisect`` then
    halves the bracket down to a few ulps of x or until ``max_iter`` steps.

    Raises:
        ValueError: when lo >= hi or lo is not positive
        MonotonicityError: when the sampling check fails
        ExprDomainError: when y lies outside [min(e(lo), e(hi)), max(...)]
    """
    if not (0 < lo < hi):
        raise ValueError(f"invert_monotone needs 0 < lo < hi, got [{lo!r}, {hi!r}]")
    if check:
        check_monotone(e, lo, hi)
    f_lo, f_hi = eval_expr(e, lo), eval_expr(e, hi)
    low, high = min(f_lo, f_hi), max(f_lo, f_hi)
    if not (low <= y <= high):
        raise ExprDomainError(
            f"target {y!r} outside the image [{low!r}, {high!r}] of "
            f"{print_expr(e)} on [{lo!r}, {hi!r}]"
        )
    if y == f_lo:
        return lo
    if y == f_hi:
        return hi
    x, info = optimize.bisect(
        lambda point: eval_expr(e, point) - y,
        lo,
        hi,
        xtol=np.finfo(float).tiny,
        rtol=4 * np.finfo(float).eps,
        maxiter=max_iter,
        full_output=True,
        disp=False,
    )
    residual = abs(eval_expr(e, x) - y)
    if residual > tol * max(1.0, abs(y)):
        logger.warning(
            "Bisection residual %.3e above tolerance for %s after %d iterations",
            residual,
            print_expr(e),
            info.iterations,
        )
    return float(x)
