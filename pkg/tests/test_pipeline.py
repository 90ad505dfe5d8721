import random

from rtec.expr import label_occurrences
from rtec.machines import minimize_dfa, nfa_accepts
from rtec.oracle import Oracle
from rtec.parser_build import build_parser
from rtec.pipeline import (MacroStepTable, build_pipeline,
                           check_size_bounds, dom_dfa, udom_dfa,
                           uniformize_parser)
from rtec.corpus import cn_alphabet, cn_expression, cn_word, generate

from conftest import SIGMA, mk, words_upto


def test_checker_accepts_ambiguous_sum():
    h = mk('(a -> "c") + (a -> "d")')
    pl = build_pipeline(h, SIGMA)
    assert nfa_accepts(pl.checker, "a")
    assert not nfa_accepts(pl.checker, "b")
    assert not nfa_accepts(pl.checker, "")
    assert pl.checker.n_states == 2 * pl.parser.n_states ** 2


def test_checker_functional_base():
    h = mk('a* -> "x"')
    pl = build_pipeline(h, SIGMA)
    for w in words_upto(6):
        assert not nfa_accepts(pl.checker, w), w


def test_checker_intro_counterexample():
    h = mk('((((a -> "c") + (aa -> "cc")) . ((a -> "d") + (aa -> "dd"))) '
           '. ((b -> "e") + (ab -> "ee")))')
    pl = build_pipeline(h, SIGMA)
    assert nfa_accepts(pl.checker, "aaab")
    o = Oracle(h)
    for w in words_upto(5):
        assert nfa_accepts(pl.checker, w) == (o.dom(h, w)
                                              and not o.udom(h, w)), w


def test_acceptor_is_exact_complement():
    h = mk('((a -> "") * . (b -> "")) + ((a -> "") . (b -> "") *)')
    pl = build_pipeline(h, SIGMA)
    assert pl.acceptor.accepts("aab")
    assert not pl.acceptor.accepts("ab")
    for w in words_upto(6):
        assert pl.acceptor.accepts(w) != nfa_accepts(pl.checker, w), w


def test_acceptor_accepts_outside_domain():
    h = mk('(a -> "c")')
    pl = build_pipeline(h, SIGMA)
    assert pl.acceptor.accepts("bbb")
    assert pl.acceptor.accepts("")


def test_uniformizer_deterministic_member():
    h = mk('(a -> "c") + (a -> "d")')
    o = Oracle(h)
    u = uniformize_parser(build_parser(h, SIGMA))
    first = u.parse("a")
    assert first in o.parsings(h, "a").items
    for _ in range(5):
        assert u.parse("a") == first
    assert u.parse("b") is None


def test_uniformizer_singleton_case():
    h = mk('a*b -> "x"')
    o = Oracle(h)
    u = uniformize_parser(build_parser(h, SIGMA))
    for w in ["b", "ab", "aab"]:
        assert u.parse(w) == next(iter(o.parsings(h, w).items))


def test_uniformizer_domain_and_membership():
    corpus = generate(40, seed=41)
    for e in corpus[:30]:
        h = label_occurrences(e)
        o = Oracle(h)
        u = uniformize_parser(build_parser(h, SIGMA))
        for w in words_upto(4):
            al = u.parse(w)
            assert (al is not None) == o.dom(h, w), (e, w)
            if al is not None:
                exp = o.parsings(h, w)
                assert exp.truncated or al in exp.items, (e, w)


def test_uniformizer_with_epsilon_cycles():
    h = mk('(@ -> "x")*')
    u = uniformize_parser(build_parser(h, SIGMA))
    assert u.parse("") is not None
    assert u.parse("a") is None


def test_run_unambiguous_examples():
    d = mk("dup{#}")
    assert build_pipeline(d, SIGMA).run_unambiguous("ab") == "ab#ab"
    s = mk('(a -> "c") + (a -> "d")')
    assert build_pipeline(s, SIGMA).run_unambiguous("a") is None
    m = mk('((a -> "c") . (b -> "d")) odot dup{#}')
    assert build_pipeline(m, SIGMA).run_unambiguous("ab") == "cdab#ab"


def test_run_unambiguous_differential():
    corpus = generate(40, seed=42)
    for e in corpus[:25]:
        h = label_occurrences(e)
        o = Oracle(h)
        pl = build_pipeline(h, SIGMA)
        for w in words_upto(4):
            assert pl.run_unambiguous(w) == o.usem(h, w), (e, w)


def test_dom_udom_dfas():
    corpus = generate(40, seed=43)
    for e in corpus[:25]:
        h = label_occurrences(e)
        o = Oracle(h)
        dd = dom_dfa(h, SIGMA)
        ud = udom_dfa(h, SIGMA)
        for w in words_upto(4):
            assert dd.accepts(w) == o.dom(h, w), (e, w)
            assert ud.accepts(w) == o.udom(h, w), (e, w)


def test_bound_report():
    h = mk('(a*b -> "x") odot (ab* -> "y")')
    rep = check_size_bounds(h, SIGMA)
    assert rep.ok
    assert rep.checker_states == 2 * rep.parser_states ** 2
    names = [n for (n, *_rest) in rep.entries]
    assert "parser <= bound" in names and "evaluator <= bound" in names


def test_bound_report_catches_corruption():
    h = mk('(a -> "c") . (b -> "d")')
    pl = build_pipeline(h, SIGMA)
    pl.parser.n_states += 1  # corrupt the machine
    rep = check_size_bounds(h, SIGMA, pl)
    assert not rep.ok


def test_macro_step_table():
    h = mk('(a -> "c") + (a -> "d")')
    p = build_parser(h, SIGMA)
    t = MacroStepTable(p)
    a = ("a",)
    from rtec.symbols import letter
    same = t.same_targets(p.initial, p.initial, letter("a"))
    diff = t.diff_targets(p.initial, p.initial, letter("a"))
    assert same and diff
    # sides through distinct branches always appear in the diff relation
    assert all(d1 == d2 for (d1, d2) in same) or same
    assert any(d1 != d2 for (d1, d2) in diff)


def test_corrupted_parser_detected_by_differential():
    h = mk('(a -> "c") . (b -> "d")')
    o = Oracle(h)
    p = build_parser(h, SIGMA)
    p.transitions.pop()  # drop one transition
    from rtec.machines import enumerate_outputs
    bad = [w for w in words_upto(3)
           if enumerate_outputs(p, w).outputs != o.parsings(h, w).items]
    assert bad


def test_cn_family_small():
    for n in (2, 3):
        sigma = cn_alphabet(n)
        h = label_occurrences(cn_expression(n))
        u = cn_word(n)
        dd = dom_dfa(h, sigma)
        ud = udom_dfa(h, sigma)
        assert dd.accepts(u) and ud.accepts(u)
        assert minimize_dfa(dd).n_states >= 2 ** n
        rng = random.Random(3)
        for _ in range(60):
            w = "".join(rng.choice(sigma)
                        for _ in range(rng.randrange(0, len(u) + 2)))
            assert dd.accepts(w) == (w == u)
            assert ud.accepts(w) == (w == u)


def test_cn_materialized_pipeline_matches_gate():
    # at n = 2 the checker route is still buildable; cross-check the gates
    sigma = cn_alphabet(2)
    h = label_occurrences(cn_expression(2))
    pl = build_pipeline(h, sigma)
    ud = udom_dfa(h, sigma)
    rng = random.Random(4)
    words = {cn_word(2)} | {"".join(rng.choice(sigma) for _ in range(m))
                            for m in range(7) for _ in range(12)}
    for w in words:
        assert pl.gate(w) == ud.accepts(w), w
        assert pl.run_unambiguous(w) == ("" if w == cn_word(2) else None), w


def test_run_unambiguous_internal_error_on_corrupt_evaluator():
    import pytest
    h = mk('(a -> "c") . (b -> "d")')
    pl = build_pipeline(h, SIGMA)
    key = next(k for k in pl.evaluator.delta
               if k[1][0] == 0)  # drop a letter transition
    del pl.evaluator.delta[key]
    with pytest.raises(RuntimeError):
        pl.run_unambiguous("ab")
