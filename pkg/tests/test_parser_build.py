from rtec.expr import label_occurrences
from rtec.machines import enumerate_outputs
from rtec.oracle import Oracle, check_kstar_conditions
from rtec.parser_build import (build_parser, parser_invariants_ok,
                               parser_size_formula)
from rtec.symbols import is_letter, render_word
from rtec.corpus import generate

from conftest import SIGMA, mk, words_upto


def outputs(parser, w):
    return enumerate_outputs(parser, w)


def test_worked_example_aab_and_ab():
    h = mk('((a -> "") * . (b -> "")) + ((a -> "") . (b -> "") *)')
    p = build_parser(h, SIGMA)
    # two Cauchy parsers of 10 states each, merged at the sum junctions
    assert p.n_states == 20
    got = {render_word(x) for x in outputs(p, "aab").outputs}
    assert got == {"(1 (2 (3 (4 a )4 (4 a )4 )3 (5 b )5 )2 )1"}
    got = {render_word(x) for x in outputs(p, "ab").outputs}
    assert got == {
        "(1 (2 (3 (4 a )4 )3 (5 b )5 )2 )1",
        "(1 (6 (7 a )7 (8 (9 b )9 )8 )6 )1",
    }


def test_hadamard_worked_example():
    h = mk('((a -> "") * . (b -> "")) odot ((a -> "") . (b -> "") *)')
    p = build_parser(h, SIGMA)
    got = {render_word(x) for x in outputs(p, "ab").outputs}
    assert got == {
        "(1 (2 (3 (4 (6 (7 a )4 )3 (5 )7 (8 (9 b )5 )2 )9 )8 )6 )1"}


def test_base_parser_size():
    h = mk('a*b + ab* -> "x"')
    p = build_parser(h, SIGMA)
    assert p.n_states == 4 + 3


def test_basic_function_parsers():
    d = mk("dup{#}")
    p = build_parser(d, SIGMA)
    assert p.n_states == 3
    got = outputs(p, "ab").outputs
    assert {render_word(x) for x in got} == {"(1 a b )1"}


def test_star_parses_empty_word():
    h = mk('((a -> "c") . (b -> "d"))*')
    p = build_parser(h, SIGMA)
    assert {render_word(x) for x in outputs(p, "").outputs} == {"(1 )1"}


def test_size_formulas_by_construction():
    texts = [
        '(a -> "c") + (b -> "d")',
        '(a -> "c") . (b -> "d")',
        '(a -> "c") .r (b -> "d")',
        '((ab -> "x"))*',
        '((ab -> "x"))*r',
        '(a -> "c") odot (ab* -> "d")',
        'kstar{2, a}((aa -> "x"))',
        'krstar{3, ab}((ababab -> "x"))',
        'kstar{1, a}((a -> "x"))',
    ]
    for text in texts:
        h = mk(text)
        p = build_parser(h, SIGMA)
        assert p.n_states == parser_size_formula(h), text
        assert parser_invariants_ok(p), text


def test_hadamard_product_size():
    h = mk('(a -> "c") odot (b -> "d")')
    p = build_parser(h, SIGMA)
    pf = build_parser(h.left, SIGMA)
    pg = build_parser(h.right, SIGMA)
    assert p.n_states == 2 * pf.n_states * pg.n_states + 2


def test_kstar_size_formula_terms():
    h = mk('kstar{2, a}((a -> "c") . (a -> "d"))')
    pf = build_parser(h.left, SIGMA)
    p = build_parser(h, SIGMA)
    ne = 1
    assert p.n_states == (4 * (ne + 1) * (pf.n_states + 1) ** 2
                          + (ne + 1) + 2)


def test_projection_property():
    corpus = generate(40, seed=11)
    for e in corpus[:25]:
        h = label_occurrences(e)
        p = build_parser(h, SIGMA)
        for w in words_upto(4):
            res = outputs(p, w)
            for al in res.outputs:
                proj = "".join(s[1] for s in al if is_letter(s))
                assert proj == w, (h, w)


def test_differential_against_oracle():
    corpus = generate(60, seed=12)
    for e in corpus[:60]:
        h = label_occurrences(e)
        o = Oracle(h)
        p = build_parser(h, SIGMA)
        assert parser_invariants_ok(p)
        assert p.n_states == parser_size_formula(h)
        for w in words_upto(4):
            got = outputs(p, w)
            exp = o.parsings(h, w)
            if got.truncated or exp.truncated:
                continue
            assert got.outputs == exp.items, (h, w)


def test_hadamard_no_right_paren_before_left():
    h = mk('(a -> "c") odot (a -> "d")')
    p = build_parser(h, SIGMA)
    f_occs = {2}
    g_occs = {3}
    for al in outputs(p, "a").outputs:
        for s, t in zip(al, al[1:]):
            if not is_letter(s) and not is_letter(t):
                assert not (s[1] in g_occs and t[1] in f_occs), render_word(al)


def test_hadamard_empty_domain_intersection():
    h = mk('(a -> "c") odot (b -> "d")')
    p = build_parser(h, SIGMA)
    for w in words_upto(3):
        assert not outputs(p, w).outputs


def test_kstar_short_branch_shape():
    h = mk('kstar{3, a+b}((aab -> "x"))')
    o = Oracle(h)
    p = build_parser(h, SIGMA)
    for w in words_upto(2):
        got = outputs(p, w).outputs
        want = {  # n < k: letters with separators only
            al for al in o.parsings(h, w).items
            if all(is_letter(s) or s[0] == 3 or s[1] == h.occ for s in al)
        }
        assert got == o.parsings(h, w).items == want, w


def test_kstar_parser_conditions():
    h = mk('kstar{2, a+b}((a(a+b) -> "x") + (ba -> "y"))')
    o = Oracle(h)
    p = build_parser(h, SIGMA)
    seen = 0
    for w in words_upto(5):
        for al in outputs(p, w).outputs:
            assert check_kstar_conditions(al, h, o), (w, render_word(al))
            seen += 1
    assert seen >= 8
