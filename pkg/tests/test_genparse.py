import math

import numpy as np
import pytest

from hardylab.errors import (
    ExprDomainError,
    GeneratorSyntaxError,
    MonotonicityError,
    UnknownIdentifierError,
)
from hardylab.genparse import (
    BinOp,
    Call,
    Neg,
    Num,
    Var,
    check_monotone,
    eval_expr,
    invert_monotone,
    parse_generator,
    print_expr,
)


def test_parse_and_evaluate():
    e = parse_generator("x^0.5 + 1")
    assert e.root == BinOp("+", BinOp("^", Var(), Num(0.5)), Num(1.0))
    assert eval_expr(e, 4.0) == pytest.approx(3.0)
    assert print_expr(e) == "x^0.5 + 1.0"


def test_power_is_right_associative_and_binds_tightest():
    e = parse_generator("2^x^2")
    assert e.root == BinOp("^", Num(2.0), BinOp("^", Var(), Num(2.0)))
    assert parse_generator("-x^2").root == Neg(BinOp("^", Var(), Num(2.0)))


def test_functions_and_variable_name():
    e = parse_generator("log(n) * exp(1/n)", variable="n")
    assert eval_expr(e, 2.0) == pytest.approx(math.log(2.0) * math.exp(0.5))
    with pytest.raises(UnknownIdentifierError):
        parse_generator("log(x)", variable="n")


@pytest.mark.parametrize(
    "text, offset",
    [
        ("x +", 3),
        ("(x", 2),
        ("x $ 1", 2),
        ("x)", 1),
        ("log x", 4),
    ],
)
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(GeneratorSyntaxError) as info:
        parse_generator(text)
    assert info.value.offset == offset


def test_unbalanced_parentheses_are_named():
    with pytest.raises(GeneratorSyntaxError, match="unbalanced"):
        parse_generator("(x + 1")


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse_generator("x + sin(x)")
    assert info.value.offset == 4


def _random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return Var()
        value = round(float(rng.uniform(0.1, 9.9)), 3)
        return Num(-value if rng.random() < 0.2 else value)
    kind = int(rng.integers(4))
    if kind == 0:
        operand = _random_tree(rng, depth - 1)
        return Neg(operand) if not isinstance(operand, Num) else operand
    if kind == 1:
        return Call(str(rng.choice(["log", "exp"])), _random_tree(rng, depth - 1))
    op = str(rng.choice(["+", "-", "*", "/", "^"]))
    return BinOp(op, _random_tree(rng, depth - 1), _random_tree(rng, depth - 1))


def test_print_parse_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(100):
        tree = _random_tree(rng, 4)
        text = print_expr(tree)
        assert parse_generator(text).root == tree, text


def test_domain_errors_name_the_node():
    with pytest.raises(ExprDomainError) as info:
        eval_expr(parse_generator("log(x - 1)"), 0.5)
    assert info.value.node == Call("log", BinOp("-", Var(), Num(1.0)))
    with pytest.raises(ExprDomainError):
        eval_expr(parse_generator("1 / (x - 2)"), 2.0)
    with pytest.raises(ExprDomainError):
        eval_expr(parse_generator("x"), -1.0)


def test_invert_monotone():
    e = parse_generator("x^2")
    assert invert_monotone(e, 9.0, 0.1, 10.0) == pytest.approx(3.0, abs=1e-10)
    decreasing = parse_generator("1/x")
    assert check_monotone(decreasing, 0.1, 10.0) == -1
    assert invert_monotone(decreasing, 0.25, 0.1, 10.0) == pytest.approx(4.0)


def test_invert_recovers_random_points():
    generators = ["x^3", "log(x)", "exp(x)", "x + log(x)", "1/x", "x^0.5 + 2*x"]
    rng = np.random.default_rng(7)
    for _ in range(100):
        e = parse_generator(generators[rng.integers(len(generators))])
        x = float(10 ** rng.uniform(-2, 2))
        recovered = invert_monotone(e, eval_expr(e, x), 1e-2, 1e2)
        assert recovered == pytest.approx(x, rel=1e-12), print_expr(e)


def test_invert_stops_at_iteration_cap():
    e = parse_generator("x + log(x)")
    coarse = invert_monotone(e, eval_expr(e, 3.0), 1e-2, 1e2, max_iter=10)
    assert 1e-2 < coarse < 1e2
    assert coarse == pytest.approx(3.0, abs=100 / 2**10)


def test_invert_rejects_non_monotone_and_out_of_range():
    with pytest.raises(MonotonicityError) as info:
        invert_monotone(parse_generator("(x - 1)^2"), 0.5, 0.1, 10.0)
    assert len(info.value.samples) == 64
    with pytest.raises(ExprDomainError):
        invert_monotone(parse_generator("x^2"), 200.0, 0.1, 10.0)
    with pytest.raises(ValueError):
        invert_monotone(parse_generator("x"), 1.0, 2.0, 1.0)


def test_registered_inverse():
    assert parse_generator("log(x)").inverse(1.0) == pytest.approx(math.e)
    assert parse_generator("x^3").inverse(8.0) == pytest.approx(2.0)
    assert parse_generator("x^2 + 1").inverse is None
