"""Deep nesting combinations: index stacks from chained stars inside chained
stars, two-way bodies inside blocks, products of chained stars.  These sit
above the random corpus's machine-size caps, so they get their own pass."""

import pytest

from rtec.machines import enumerate_outputs, is_reversible, run_two_way
from rtec.oracle import Oracle
from rtec.evaluator_build import (build_evaluator, evaluator_shape_ok,
                                  evaluator_size_formula)
from rtec.parser_build import (build_parser, parser_invariants_ok,
                               parser_size_formula)
from rtec.pipeline import build_pipeline

from conftest import SIGMA, mk, words_upto

CASES = [
    ('kstar{2, aa}(kstar{1, a}((a -> "c")))', 5),
    ('kstar{1, aa}(kstar{2, a}((aa -> "x")))', 5),
    ('kstar{2, a}((aa -> "x") odot (aa -> "y"))', 5),
    ('(a* -> "z") odot kstar{2, a}((aa -> "x"))', 5),
    ('kstar{2, a}((a -> "c") .r (a -> "d"))', 5),
    ('krstar{2, a}(((a -> "c") . (a -> "d"))*r)', 4),
    ('kstar{2, a}(rev)', 5),
    ('krstar{2, a+b}(dup{#} odot rev)', 4),
    ('(kstar{2, a}((aa -> "x")))*', 4),
    ('kstar{2, a}((aa -> "x")) + krstar{2, b}((bb -> "y"))', 5),
]


@pytest.mark.parametrize("text,maxlen", CASES)
def test_nested_construction(text, maxlen):
    h = mk(text)
    o = Oracle(h)
    p = build_parser(h, SIGMA)
    t = build_evaluator(h, SIGMA)
    assert parser_invariants_ok(p)
    assert is_reversible(t)
    assert evaluator_shape_ok(t, h)
    assert p.n_states == parser_size_formula(h)
    assert t.n_states == evaluator_size_formula(h)
    pl = build_pipeline(h, SIGMA)
    for w in words_upto(maxlen):
        parsed = enumerate_outputs(p, w)
        exp = o.parsings(h, w)
        if not (parsed.truncated or exp.truncated):
            assert parsed.outputs == exp.items, w
            rsem = o.rsem(h, w)
            if not rsem.truncated:
                got = set()
                for al in parsed.outputs:
                    res = run_two_way(t, al)
                    assert res.status == "accept", w
                    got.add(res.output)
                assert got == rsem.items, w
        assert pl.run_unambiguous(w) == o.usem(h, w), w
