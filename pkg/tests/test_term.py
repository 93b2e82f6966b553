import random

import pytest

from ovup import falg, pfun, term
from ovup.term import (
    App,
    Identity,
    ParseError,
    QuasiIdentity,
    Var,
    evaluate,
    ops_used,
    parse,
    parse_term,
    render,
    replace_at,
    substitute,
    subterm_at,
    variables,
)


def test_parse_special_identity():
    stmt = parse("x[y[x[z]]] = x[y[x][z]]")
    assert isinstance(stmt, Identity)
    x, y, z = Var("x"), Var("y"), Var("z")
    assert stmt.lhs == App("upd", x, App("upd", y, App("upd", x, z)))
    assert stmt.rhs == App("upd", x, App("upd", App("upd", y, x), z))


def test_parse_override_left_associates():
    stmt = parse("x | y | x = x | y")
    x, y = Var("x"), Var("y")
    assert stmt.lhs == App("ov", App("ov", x, y), x)


def test_parse_quasi_identity():
    stmt = parse("x|y=x & y|x=y -> x[u][y]=y")
    assert isinstance(stmt, QuasiIdentity)
    assert len(stmt.premises) == 2
    assert render(stmt.conclusion) == "x[u][y] = y"


def test_render_examples():
    assert render(Var("x")) == "x"
    assert render(App("ov", App("ov", Var("x"), Var("y")), Var("x"))) == "x | y | x"
    assert render(parse("x[y[x[z]]] = x[y[x][z]]")) == "x[y[x[z]]] = x[y[x][z]]"


def test_render_right_nested_override_keeps_parens():
    t = App("ov", Var("x"), App("ov", Var("y"), Var("x")))
    assert render(t) == "x | (y | x)"
    assert parse_term(render(t)) == t


def test_mixed_mid_operators_need_parens():
    with pytest.raises(ParseError):
        parse_term("a @ b - c")
    assert render(parse_term("(a @ b) - c")) == "(a @ b) - c"
    assert render(parse_term("a @ (b - c)")) == "a @ (b - c)"


def _random_term(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return Var(rng.choice(["x", "y", "z", "u"]))
    op = rng.choice(["ov", "upd", "at", "mns"])
    return App(op, _random_term(rng, depth - 1), _random_term(rng, depth - 1))


def test_parse_render_round_trip_random():
    rng = random.Random(11)
    for _ in range(500):
        t = _random_term(rng, 4)
        assert parse_term(render(t)) == t


def test_parse_errors_carry_location():
    with pytest.raises(ParseError) as err:
        parse("x | | y")
    assert err.value.line == 1 and err.value.col == 5
    assert err.value.expected
    with pytest.raises(ParseError):
        parse("x[y")
    with pytest.raises(ParseError):
        parse("X | y")  # uppercase identifiers are not in the grammar


def test_substitute():
    t = parse_term("x | y")
    sigma = {"x": parse_term("a[b]"), "y": Var("a")}
    assert render(substitute(t, sigma)) == "a[b] | a"
    assert substitute(t, {}) == t


def test_substitute_evaluate_compose():
    rng = random.Random(12)
    alg = falg.builtin_three()
    ops = alg.operations()
    for _ in range(200):
        t = _random_term(rng, 3)
        sigma = {v: _random_term(rng, 2) for v in variables(t)}
        env = {v: rng.randrange(3) for v in ("x", "y", "z", "u")}
        inner = {v: evaluate(s, ops, env) for v, s in sigma.items()}
        assert evaluate(substitute(t, sigma), ops, env) == evaluate(t, ops, inner)


def test_replace_at():
    t = parse_term("x | y")
    assert render(replace_at(t, ("L",), Var("z"))) == "z | y"
    assert replace_at(t, (), Var("z")) == Var("z")
    rng = random.Random(13)
    for _ in range(200):
        s = _random_term(rng, 4)
        path = []
        node = s
        while isinstance(node, App) and rng.random() < 0.7:
            step = rng.choice(["L", "R"])
            path.append(step)
            node = node.left if step == "L" else node.right
        assert replace_at(s, tuple(path), subterm_at(s, tuple(path))) == s
    with pytest.raises(ValueError):
        subterm_at(Var("x"), ("L",))
    with pytest.raises(ValueError):
        replace_at(Var("x"), ("R",), Var("y"))


def test_evaluate_on_three():
    alg = falg.builtin_three()
    ops = alg.operations()
    assert evaluate(parse_term("x[y]"), ops, {"x": 1, "y": 2}) == 2
    assert evaluate(parse_term("x | y"), ops, {"x": 0, "y": 2}) == 2


def test_evaluate_on_partial_functions_matches_ops():
    rng = random.Random(14)
    for _ in range(200):
        f = pfun.random_pfun(rng, "abc", [1, 2])
        g = pfun.random_pfun(rng, "abc", [1, 2])
        env = {"x": f, "y": g}
        assert evaluate(parse_term("x | y"), pfun.OPS, env) == pfun.override(f, g)
        assert evaluate(parse_term("x[y]"), pfun.OPS, env) == pfun.update(f, g)
        assert evaluate(parse_term("x @ y"), pfun.OPS, env) == pfun.rmult(f, g)
        assert evaluate(parse_term("x - y"), pfun.OPS, env) == pfun.minus(f, g)


def test_evaluate_errors():
    alg = falg.builtin_three({"ov"})
    with pytest.raises(term.EvalError):
        evaluate(parse_term("x | y"), alg.operations(), {"x": 0})
    with pytest.raises(term.EvalError):
        evaluate(parse_term("x[y]"), alg.operations(), {"x": 0, "y": 1})


def test_evaluate_commutes_with_range_quotient():
    # evaluating with full values and then collapsing them equals evaluating
    # with collapsed inputs
    rng = random.Random(15)
    classes = [{1, 2}, {3}]
    collapse = lambda f: pfun.quotient_range(f, classes)
    for _ in range(200):
        t = _random_term(rng, 3)
        env = {v: pfun.random_pfun(rng, "ab", [1, 2, 3]) for v in variables(t)}
        lifted = evaluate(t, pfun.OPS, env)
        dropped = evaluate(t, pfun.OPS, {v: collapse(f) for v, f in env.items()})
        assert collapse(lifted) == dropped


def test_variables_and_ops_used():
    q = parse("x|y=x & y|x=y -> x[u][y]=y")
    assert variables(q) == {"x", "y", "u"}
    assert ops_used(q) == {"ov", "upd"}
    assert term.sorted_variables(parse_term("z10 | z2 | x")) == ["x", "z2", "z10"]
