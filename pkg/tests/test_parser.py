"""Expression surface syntax: parsing, printing, and element bridging."""

import random

import pytest

from ores.algebra import load_preset, random_element
from ores.errors import ExpressionError
from ores.exprparse import (Dagger, FracNode, Neg, ParseError, Paren, Prod,
                            ScalarLit, Sum, Sym, ast_to_element,
                            ast_to_fraction, element_to_ast, fraction_to_text,
                            fraction_to_frac_text, parse, parse_element,
                            parse_fraction_text, parse_sproduct_text,
                            print_ast)
from ores.localization import Fraction, SProduct, eq_fraction
from ores.scalars import Scalar


def test_commutator_shape():
    ast = parse("a*a' - a'*a")
    assert isinstance(ast, Sum)
    first, second = ast.terms
    assert first == Prod((Sym("a"), Dagger(Sym("a"))))
    assert second == Neg(Prod((Dagger(Sym("a")), Sym("a"))))


def test_dagger_binds_to_parenthesized_group():
    ast = parse("(1+ x*x)'")
    assert isinstance(ast, Dagger)
    assert isinstance(ast.child, Paren)
    inner = ast.child.child
    assert isinstance(inner, Sum)
    assert inner.terms[0] == ScalarLit(Scalar(1))


def test_frac_node():
    ast = parse("frac(x; 1+x*x)")
    assert isinstance(ast, FracNode)
    assert ast.num == Sym("x")
    assert len(ast.dens) == 1
    ast2 = parse("frac(x;)")
    assert ast2.dens == ()
    ast3 = parse("frac(x + 1; 1+x*x, 1+x*x)")
    assert len(ast3.dens) == 2


def test_scalar_literals():
    from fractions import Fraction as Rational
    assert parse("3/4") == ScalarLit(Scalar(Rational(3, 4)))
    assert parse("i") == ScalarLit(Scalar(0, 1))
    assert parse("7") == ScalarLit(Scalar(7))


def test_print_is_canonical():
    assert print_ast(parse("a * a'- a' *a")) == "a*a' - a'*a"
    assert print_ast(parse("( 1+ x*x )'")) == "(1 + x*x)'"
    assert print_ast(parse("frac( x ;1+x*x )")) == "frac(x; 1 + x*x)"
    assert print_ast(parse("frac(x;)")) == "frac(x;)"
    assert print_ast(parse("2 * x + 1/2")) == "2*x + 1/2"


def test_print_parse_fixpoint():
    rng = random.Random(81)
    for name in ("poly_x", "heisenberg"):
        p = load_preset(name)
        for _ in range(40):
            el = random_element(p, rng, max_degree=3, max_terms=4)
            text = print_ast(element_to_ast(el))
            assert parse_element(text, p) == el
            assert print_ast(parse(text)) == text


def test_positioned_errors():
    with pytest.raises(ParseError) as e:
        parse("x + ")
    assert e.value.line == 1
    with pytest.raises(ParseError) as e:
        parse("x + + y")
    assert e.value.col == 5
    with pytest.raises(ParseError):
        parse("(x")
    with pytest.raises(ParseError):
        parse("x)")
    with pytest.raises(ParseError):
        parse("1/0")
    with pytest.raises(ParseError):
        parse("x $ y")
    with pytest.raises(ParseError):
        parse("")
    with pytest.raises(ParseError) as e:
        parse("x +\n* y")
    assert e.value.line == 2


def test_reserved_words():
    with pytest.raises(ParseError):
        parse("frac + 1")
    # i is a scalar literal, never a symbol
    ast = parse("i*x")
    assert ast == Prod((ScalarLit(Scalar(0, 1)), Sym("x")))


def test_fuzz_never_crashes_uncontrolled():
    rng = random.Random(82)
    alphabet = "xy'*+-()c;, 123/ifrac"
    for _ in range(300):
        text = "".join(rng.choice(alphabet)
                       for _ in range(rng.randint(1, 24)))
        try:
            ast = parse(text)
        except ParseError:
            continue
        printed = print_ast(ast)
        assert print_ast(parse(printed)) == printed


def test_ast_to_element_and_unknown_symbols():
    p = load_preset("heisenberg")
    el = parse_element("a*a' - a'*a", p)
    assert el == p.one()
    el2 = parse_element("i*(a + a')", p)
    assert el2 == (p.generator("a") + p.generator("ad")).scale(Scalar(0, 1))
    with pytest.raises(ExpressionError) as e:
        parse_element("a*z", p)
    assert "z" in str(e.value)
    assert "a" in str(e.value) or "generators" in str(e.value)


def test_dagger_names_map_to_partners():
    p = load_preset("heisenberg")
    assert parse_element("a'", p) == p.generator("ad")
    assert parse_element("a''", p) == p.generator("a")
    assert parse_element("x'", load_preset("poly_x")) \
        == load_preset("poly_x").generator("x")


def test_sproduct_text_round_trip():
    p = load_preset("heisenberg")
    s = parse_sproduct_text("(1 + a'*a)*(1 + (a + a')'*(a + a'))", p)
    assert len(s.ps) == 2
    assert s.ps[0] == p.generator("a")
    assert s.ps[1] == p.generator("a") + p.generator("ad")
    one = parse_sproduct_text("1", p)
    assert one.is_one()


def test_sproduct_text_rejects_wrong_shapes():
    p = load_preset("heisenberg")
    for bad in ("1 + a*a", "(1 + a'*a) + 1", "2 + a'*a", "(1 + a'*a)*(a)"):
        with pytest.raises(ExpressionError):
            parse_sproduct_text(bad, p)
    q = load_preset("poly_xy")
    with pytest.raises(ExpressionError):
        parse_sproduct_text("1 + x*y", q)


def test_fraction_text_round_trip():
    p = load_preset("heisenberg")
    a = p.generator("a")
    f = Fraction(a, SProduct(p, (a,)))
    text = fraction_to_text(f)
    g = parse_fraction_text(text, p)
    assert g.num == f.num
    assert g.den.key() == f.den.key()
    # frac() form parses to the same fraction
    h = parse_fraction_text(fraction_to_frac_text(f), p)
    assert h.num == f.num and h.den.key() == f.den.key()


def test_fraction_text_slash_form():
    p = load_preset("poly_x")
    x = p.generator("x")
    f = parse_fraction_text("(x + 1) / (1 + x*x)", p)
    assert f.num == x + 1
    assert f.den.ps == (x,)
    g = parse_fraction_text("(x) / (1)", p)
    assert g.den.is_one()
    got = fraction_to_text(g)
    assert parse_fraction_text(got, p).num == x


def test_frac_node_to_fraction():
    p = load_preset("poly_x")
    x = p.generator("x")
    node = parse("frac(x + x*x; 1+x*x, 1+x'*x)")
    f = ast_to_fraction(node, p)
    assert f.num == x + x * x
    assert len(f.den.ps) == 2
    expected = Fraction(f.num, SProduct(p, (x, x)))
    assert eq_fraction(f, expected)


def test_scalar_one_factors_are_skipped_in_fractions():
    p = load_preset("poly_x")
    f = ast_to_fraction(parse("frac(x; 1)"), p)
    assert f.den.is_one()
    g = ast_to_fraction(parse("frac(x; 1, 1+x*x, 1)"), p)
    assert g.den.ps == (p.generator("x"),)
