"""Seeded expression corpora for the differential suites.

The random generator keeps expressions at desk scale: bounded size, bounded
nesting, and bounded predicted parser size so the pair checker stays cheap.
It deliberately includes ambiguous sums, overlapping products, stars with
empty-word bodies (exercising the truncation paths) and both chained-star
variants.
"""

from __future__ import annotations

import random

from .expr import (Expr, base, cauchy, cauchy_rev, dom_nullable, dup, esum,
                   hadamard, kstar, kstar_rev, label_occurrences, r_cat,
                   r_eps, r_lit, r_star, r_sum, r_word, rev, size, star,
                   star_rev, width)
from .oracle import re_nullable
from .parser_build import parser_size_formula
from .expr import Regex

SIGMA = "ab"
GAMMA = "cdxy#"
DUP_SEP = "#"

MAX_SIZE = 60
MAX_DEPTH = 4
MAX_PARSER = 120
MAX_WIDTH = 6


def _random_regex(rng: random.Random, depth: int, allow_eps: bool) -> Regex:
    roll = rng.random()
    if depth <= 0 or roll < 0.45:
        return r_lit(rng.choice(SIGMA))
    if roll < 0.6:
        return r_cat(_random_regex(rng, depth - 1, allow_eps),
                     _random_regex(rng, depth - 1, allow_eps))
    if roll < 0.8:
        return r_sum(_random_regex(rng, depth - 1, allow_eps),
                     _random_regex(rng, depth - 1, allow_eps))
    if roll < 0.9 and allow_eps:
        return r_star(_random_regex(rng, depth - 1, allow_eps))
    if allow_eps and roll < 0.95:
        return r_eps()
    return r_lit(rng.choice(SIGMA))


def _block_regex(rng: random.Random) -> Regex:
    """Chained-star block language; kept free of the empty word so the
    factorization enumerations stay exact."""
    choices = [
        r_lit("a"), r_lit("b"),
        r_sum(r_lit("a"), r_lit("b")),
        r_word("ab"), r_word("aa"),
        r_cat(r_lit("a"), r_sum(r_lit("a"), r_lit("b"))),
    ]
    e = rng.choice(choices)
    assert not re_nullable(e)
    return e


def _random_output(rng: random.Random) -> str:
    n = rng.choice((0, 1, 1, 2))
    return "".join(rng.choice("cdxy") for _ in range(n))


def _random_expr(rng: random.Random, depth: int) -> Expr:
    kinds = ["base", "base", "sum", "cauchy", "cauchy_rev", "star",
             "star_rev", "hadamard", "dup", "rev", "kstar", "kstar_rev"]
    if depth <= 0:
        kinds = ["base", "base", "base", "dup", "rev"]
    kind = rng.choice(kinds)
    if kind == "base":
        return base(_random_regex(rng, 2, allow_eps=True), _random_output(rng))
    if kind == "dup":
        return dup(DUP_SEP)
    if kind == "rev":
        return rev()
    if kind == "sum":
        return esum(_random_expr(rng, depth - 1), _random_expr(rng, depth - 1))
    if kind == "cauchy":
        return cauchy(_random_expr(rng, depth - 1),
                      _random_expr(rng, depth - 1))
    if kind == "cauchy_rev":
        return cauchy_rev(_random_expr(rng, depth - 1),
                          _random_expr(rng, depth - 1))
    if kind in ("star", "star_rev"):
        # stars over empty-word domains have infinite relational semantics;
        # the handpicked corpus entries cover that truncation path
        body = _random_expr(rng, depth - 1)
        if dom_nullable(body):
            body = base(_block_regex(rng), _random_output(rng))
        return star(body) if kind == "star" else star_rev(body)
    if kind == "hadamard":
        return hadamard(_random_expr(rng, depth - 1),
                        _random_expr(rng, depth - 1))
    k = rng.choice((1, 2, 2, 3))
    body = _small_body(rng)
    ctor = kstar if kind == "kstar" else kstar_rev
    return ctor(k, _block_regex(rng), body)


def _small_body(rng: random.Random) -> Expr:
    roll = rng.random()
    b1 = base(_block_regex(rng), _random_output(rng))
    if roll < 0.4:
        return b1
    b2 = base(_block_regex(rng), _random_output(rng))
    if roll < 0.6:
        return esum(b1, b2)
    if roll < 0.8:
        return cauchy(b1, b2)
    return dup(DUP_SEP)


def acceptable(h: Expr) -> bool:
    if size(h) > MAX_SIZE or width(h) > MAX_WIDTH:
        return False
    lh = label_occurrences(h)
    return parser_size_formula(lh) <= MAX_PARSER


def generate(count: int = 200, seed: int = 20240811) -> list:
    """At least `count` expressions covering every combinator."""
    rng = random.Random(seed)
    out = []
    seen_kinds = set()
    seen = set()

    def push(h: Expr):
        key = repr(h)
        if key not in seen and acceptable(h):
            seen.add(key)
            out.append(h)
            seen_kinds.update(n.kind for n in _nodes(h))

    for text_free in _handpicked():
        push(text_free)
    while len(out) < count:
        push(_random_expr(rng, MAX_DEPTH - 1))
    # every combinator must appear somewhere in the corpus
    required = {"base", "sum", "cauchy", "cauchy_rev", "star", "star_rev",
                "hadamard", "kstar", "kstar_rev", "dup", "rev"}
    missing = required - seen_kinds
    assert not missing, "corpus generator missed: %r" % missing
    return out


def _nodes(h: Expr):
    yield h
    if h.left is not None:
        yield from _nodes(h.left)
    if h.right is not None:
        yield from _nodes(h.right)


def _handpicked() -> list:
    a, b = r_lit("a"), r_lit("b")
    worked_sum = esum(cauchy(star(base(a, "")), base(b, "")),
                      cauchy(base(a, ""), star(base(b, ""))))
    worked_had = hadamard(cauchy(star(base(a, "")), base(b, "")),
                          cauchy(base(a, ""), star(base(b, ""))))
    intro = cauchy(cauchy(esum(base(a, "c"), base(r_word("aa"), "cc")),
                          esum(base(a, "d"), base(r_word("aa"), "dd"))),
                   esum(base(b, "x"), base(r_word("ab"), "xx")))
    fg = esum(star(esum(base(a, "c"), base(b, ""))),
              star(esum(base(a, ""), base(b, "c"))))
    return [
        worked_sum,
        worked_had,
        intro,
        fg,
        esum(base(a, "c"), base(a, "d")),
        base(r_star(r_cat(a, b)), "x"),
        cauchy_rev(base(a, "c"), base(b, "d")),
        star_rev(cauchy(base(a, "c"), base(b, "d"))),
        dup(DUP_SEP),
        rev(),
        hadamard(cauchy(base(a, "c"), base(b, "d")), dup(DUP_SEP)),
        hadamard(rev(), dup(DUP_SEP)),
        kstar(2, a, cauchy(base(a, "c"), base(a, "d"))),
        kstar_rev(2, a, cauchy(base(a, "c"), base(a, "d"))),
        kstar(1, r_sum(a, b), base(r_sum(a, b), "c")),
        kstar_rev(1, r_sum(a, b), esum(base(a, "x"), base(b, "y"))),
        kstar(2, r_sum(a, b), esum(base(r_word("aa"), "x"),
                                   esum(base(r_word("ab"), "y"),
                                        esum(base(r_word("ba"), "z"),
                                             base(r_word("bb"), "w"))))),
        kstar(3, a, base(r_word("aaa"), "x")),
        kstar_rev(3, a, base(r_word("aaa"), "x")),
        kstar(2, r_sum(a, b), dup(DUP_SEP)),
        star(base(r_eps(), "x")),
        star(esum(base(r_eps(), ""), base(a, "c"))),
        cauchy(base(r_sum(a, r_word("ab")), "x"),
               base(r_sum(b, r_eps()), "y")),
        esum(base(a, "x"), base(a, "x")),
    ]


# ---------------------------------------------------------------------------
# The Hadamard lower-bound family: width-n expressions whose domain is one
# word of length 2^n

def cn_alphabet(n: int) -> str:
    return "".join(str(i) for i in range(1, n + 1))


def _lits_union(lo: int, hi: int) -> Regex:
    """Regex for the letter class {lo..hi}; empty class gives epsilon."""
    if lo > hi:
        return r_eps()
    e = r_lit(str(lo))
    for i in range(lo + 1, hi + 1):
        e = r_sum(e, r_lit(str(i)))
    return e


def cn_block_language(i: int, n: int) -> Regex:
    below = _lits_union(1, i - 1)
    if i < n:
        body = r_cat(r_cat(r_star(below), r_lit(str(i))),
                     r_cat(r_star(below), _lits_union(i + 1, n)))
        return r_star(body)
    return r_cat(r_cat(r_star(below), r_lit(str(n))),
                 r_cat(r_star(below), r_lit(str(n))))


def cn_expression(n: int) -> Expr:
    """Hadamard product of the n block languages; width n, domain {u_n}."""
    h = base(cn_block_language(1, n), "")
    for i in range(2, n + 1):
        h = hadamard(h, base(cn_block_language(i, n), ""))
    return h


def cn_word(n: int) -> str:
    u = "1"
    for i in range(2, n):
        u = u + str(i) + u
    if n >= 2:
        u = u + str(n) + u + str(n)
    return u
