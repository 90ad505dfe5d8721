"""Glushkov position automaton: 1 + nl(e) states, no incoming edges at start."""

from __future__ import annotations

from .expr import EMPTY, EPS, LIT, RCAT, RSTAR, RSUM, Regex
from .machines import Nfa
from .symbols import letter


def _positions(e: Regex, acc: list):
    # left-to-right literal occurrences; position ids are 1-based
    if e.kind == LIT:
        acc.append(e.ch)
    elif e.kind in (RSUM, RCAT):
        _positions(e.left, acc)
        _positions(e.right, acc)
    elif e.kind == RSTAR:
        _positions(e.left, acc)


def _analyze(e: Regex, next_pos: list):
    """Return (nullable, first, last, follow) with positions numbered in
    left-to-right order starting from next_pos[0]."""
    if e.kind == EMPTY:
        return (False, frozenset(), frozenset(), {})
    if e.kind == EPS:
        return (True, frozenset(), frozenset(), {})
    if e.kind == LIT:
        p = next_pos[0]
        next_pos[0] += 1
        return (False, frozenset({p}), frozenset({p}), {p: set()})
    if e.kind == RSUM:
        n1, f1, l1, fo1 = _analyze(e.left, next_pos)
        n2, f2, l2, fo2 = _analyze(e.right, next_pos)
        fo1.update(fo2)
        return (n1 or n2, f1 | f2, l1 | l2, fo1)
    if e.kind == RCAT:
        n1, f1, l1, fo1 = _analyze(e.left, next_pos)
        n2, f2, l2, fo2 = _analyze(e.right, next_pos)
        fo1.update(fo2)
        for p in l1:
            fo1[p] |= f2
        first = f1 | f2 if n1 else f1
        last = l1 | l2 if n2 else l2
        return (n1 and n2, first, last, fo1)
    if e.kind == RSTAR:
        n1, f1, l1, fo1 = _analyze(e.left, next_pos)
        for p in l1:
            fo1[p] |= f1
        return (True, f1, l1, fo1)
    raise ValueError(e.kind)


def glushkov(e: Regex, sigma) -> Nfa:
    """Position automaton for e; state 0 is initial and has no incoming edges."""
    labels = []
    _positions(e, labels)
    nullable, first, last, follow = _analyze(e, [1])
    trans = []
    for p in sorted(first):
        trans.append((0, letter(labels[p - 1]), p))
    for p in sorted(follow):
        for q in sorted(follow[p]):
            trans.append((p, letter(labels[q - 1]), q))
    finals = set(last)
    if nullable:
        finals.add(0)
    alphabet = frozenset(letter(c) for c in sigma)
    return Nfa(1 + len(labels), 0, frozenset(finals), trans, alphabet)
