"""Automaton and transducer representations with their execution semantics.

Two-way machines follow the between-positions convention: states carry a sign,
a + state reads the first letter of the suffix, a - state the last letter of
the prefix, and a transition (p, a, q) advances the boundary only when q keeps
the head moving in its own direction.  A run on w simulates on |- w -| from
configuration (initial, boundary 0) and accepts in a final state once the
whole tape, right endmarker included, has been consumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .symbols import LEFT_END, RIGHT_END, Sym, letters, render


class MachineError(ValueError):
    pass


# ---------------------------------------------------------------------------
# One-way machines

@dataclass
class Nfa:
    """Nondeterministic automaton; `None` input labels are epsilon moves."""

    n_states: int
    initial: int
    finals: frozenset
    transitions: list  # (src, sym | None, dst)
    alphabet: frozenset

    def eps_closure(self, states) -> frozenset:
        stack = list(states)
        seen = set(stack)
        adj = {}
        for (src, sym, dst) in self.transitions:
            if sym is None:
                adj.setdefault(src, []).append(dst)
        while stack:
            s = stack.pop()
            for d in adj.get(s, ()):
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        return frozenset(seen)


def nfa_accepts(nfa: Nfa, word) -> bool:
    """Subset simulation; `word` is a str or a tuple of symbols."""
    syms = letters(word) if isinstance(word, str) else tuple(word)
    by_sym = {}
    eps = {}
    for (src, sym, dst) in nfa.transitions:
        if sym is None:
            eps.setdefault(src, []).append(dst)
        else:
            by_sym.setdefault((src, sym), []).append(dst)

    def closure(states):
        stack = list(states)
        seen = set(stack)
        while stack:
            s = stack.pop()
            for d in eps.get(s, ()):
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        return seen

    cur = closure({nfa.initial})
    for a in syms:
        nxt = set()
        for s in cur:
            nxt.update(by_sym.get((s, a), ()))
        if not nxt:
            return False
        cur = closure(nxt)
    return any(s in nfa.finals for s in cur)


@dataclass
class Dfa:
    """Complete deterministic automaton over its alphabet."""

    n_states: int
    initial: int
    finals: frozenset
    delta: dict  # (state, sym) -> state
    alphabet: frozenset

    def accepts(self, word) -> bool:
        syms = letters(word) if isinstance(word, str) else tuple(word)
        s = self.initial
        for a in syms:
            key = (s, a)
            if key not in self.delta:
                return False
            s = self.delta[key]
        return s in self.finals

    def is_complete(self) -> bool:
        return all((s, a) in self.delta
                   for s in range(self.n_states) for a in self.alphabet)


def determinize(nfa: Nfa, alphabet=None) -> Dfa:
    """Powerset construction with epsilon closure; result is complete."""
    alpha = frozenset(alphabet if alphabet is not None else nfa.alphabet)
    by_sym = {}
    eps = {}
    for (src, sym, dst) in nfa.transitions:
        if sym is None:
            eps.setdefault(src, []).append(dst)
        else:
            by_sym.setdefault((src, sym), []).append(dst)

    def closure(states):
        stack = list(states)
        seen = set(stack)
        while stack:
            s = stack.pop()
            for d in eps.get(s, ()):
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        return frozenset(seen)

    start = closure({nfa.initial})
    index = {start: 0}
    order = [start]
    delta = {}
    todo = [start]
    while todo:
        cur = todo.pop()
        ci = index[cur]
        for a in alpha:
            nxt = set()
            for s in cur:
                nxt.update(by_sym.get((s, a), ()))
            nxt = closure(nxt)
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                todo.append(nxt)
            delta[(ci, a)] = index[nxt]
    finals = frozenset(i for st, i in index.items()
                       if any(s in nfa.finals for s in st))
    return Dfa(len(order), 0, finals, delta, alpha)


def complement_dfa(d: Dfa) -> Dfa:
    if not d.is_complete():
        raise MachineError("complement needs a complete DFA")
    finals = frozenset(s for s in range(d.n_states) if s not in d.finals)
    return Dfa(d.n_states, d.initial, finals, dict(d.delta), d.alphabet)


def dfa_product(d1: Dfa, d2: Dfa, accept) -> Dfa:
    """Product automaton; `accept(f1, f2)` decides finality per pair."""
    if d1.alphabet != d2.alphabet:
        raise MachineError("product over mismatched alphabets")
    index = {(d1.initial, d2.initial): 0}
    order = [(d1.initial, d2.initial)]
    delta = {}
    todo = [(d1.initial, d2.initial)]
    while todo:
        (s1, s2) = todo.pop()
        ci = index[(s1, s2)]
        for a in d1.alphabet:
            nxt = (d1.delta[(s1, a)], d2.delta[(s2, a)])
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                todo.append(nxt)
            delta[(ci, a)] = index[nxt]
    finals = frozenset(index[(s1, s2)] for (s1, s2) in order
                       if accept(s1 in d1.finals, s2 in d2.finals))
    return Dfa(len(order), 0, finals, delta, d1.alphabet)


def dfa_intersect(d1: Dfa, d2: Dfa) -> Dfa:
    return dfa_product(d1, d2, lambda a, b: a and b)


def dfa_union(d1: Dfa, d2: Dfa) -> Dfa:
    return dfa_product(d1, d2, lambda a, b: a or b)


def dfa_difference(d1: Dfa, d2: Dfa) -> Dfa:
    return dfa_product(d1, d2, lambda a, b: a and not b)


def minimize_dfa(d: Dfa) -> Dfa:
    """Moore partition refinement on the reachable part."""
    reach = {d.initial}
    todo = [d.initial]
    while todo:
        s = todo.pop()
        for a in d.alphabet:
            t = d.delta[(s, a)]
            if t not in reach:
                reach.add(t)
                todo.append(t)
    states = sorted(reach)
    alpha = sorted(d.alphabet)
    block = {s: (1 if s in d.finals else 0) for s in states}
    while True:
        sig = {s: (block[s],) + tuple(block[d.delta[(s, a)]] for a in alpha)
               for s in states}
        classes = {}
        for s in states:
            classes.setdefault(sig[s], len(classes))
        new_block = {s: classes[sig[s]] for s in states}
        if len(set(new_block.values())) == len(set(block.values())):
            block = new_block
            break
        block = new_block
    n = len(set(block.values()))
    delta = {}
    for s in states:
        for a in alpha:
            delta[(block[s], a)] = block[d.delta[(s, a)]]
    finals = frozenset(block[s] for s in states if s in d.finals)
    return Dfa(n, block[d.initial], finals, delta, d.alphabet)


def nfa_of_dfa(d: Dfa) -> Nfa:
    trans = [(s, a, t) for ((s, a), t) in d.delta.items()]
    return Nfa(d.n_states, d.initial, d.finals, trans, d.alphabet)


# ---------------------------------------------------------------------------
# One-way transducers

@dataclass
class OneWayTransducer:
    """1NFT with epsilon input moves; outputs are tuples of symbols."""

    n_states: int
    initial: int
    finals: frozenset
    transitions: list  # (src, insym | None, out_tuple, dst)
    input_alphabet: frozenset

    def underlying_nfa(self) -> Nfa:
        trans = [(s, a, t) for (s, a, _o, t) in self.transitions]
        return Nfa(self.n_states, self.initial, self.finals, trans,
                   self.input_alphabet)

    def domain_nfa(self) -> Nfa:
        """Acceptor of the input projection (outputs erased)."""
        return self.underlying_nfa()


@dataclass
class EnumResult:
    outputs: set
    truncated: bool = False


def enumerate_outputs(t: OneWayTransducer, word, max_eps_run: int | None = None) -> EnumResult:
    """All outputs of t on `word`, with a guard against epsilon cycles.

    Runs whose consecutive epsilon-move count would exceed `max_eps_run`, or
    that revisit a state within one epsilon run (a pumpable cycle, hence an
    infinite output set), are cut off and reported via the truncated flag.
    """
    syms = letters(word) if isinstance(word, str) else tuple(word)
    if max_eps_run is None:
        max_eps_run = t.n_states * max(1, len(t.input_alphabet)) * 4
    eps = {}
    by_sym = {}
    for (s, a, out, d) in t.transitions:
        if a is None:
            eps.setdefault(s, []).append((out, d))
        else:
            by_sym.setdefault((s, a), []).append((out, d))
    res = EnumResult(set())
    out_acc = []

    def moves(state, pos, eps_seen, eps_len):
        if pos < len(syms):
            for (out, d) in by_sym.get((state, syms[pos]), ()):
                yield (out, d, pos + 1, frozenset((d,)), 0)
        for (out, d) in eps.get(state, ()):
            if d in eps_seen or eps_len + 1 > max_eps_run:
                res.truncated = True
                continue
            yield (out, d, pos, eps_seen | {d}, eps_len + 1)

    def visit(state, pos):
        if state in t.finals and pos == len(syms):
            res.outputs.add(tuple(x for chunk in out_acc for x in chunk))

    visit(t.initial, 0)
    # stack frames own one output chunk each, popped on frame exit
    stack = [(moves(t.initial, 0, frozenset({t.initial}), 0), False)]
    while stack:
        it, owns_chunk = stack[-1]
        step = next(it, None)
        if step is None:
            stack.pop()
            if owns_chunk:
                out_acc.pop()
            continue
        (out, d, pos, eps_seen, eps_len) = step
        out_acc.append(out)
        visit(d, pos)
        stack.append((moves(d, pos, eps_seen, eps_len), True))
    return res


# ---------------------------------------------------------------------------
# Two-way transducers

@dataclass
class TwoWayTransducer:
    """2NFT over signed states; delta maps (state, sym) to [(dst, out_str)]."""

    n_states: int
    signs: list  # +1 forward, -1 backward
    initial: int
    finals: frozenset
    delta: dict
    input_alphabet: frozenset

    def successors(self, state: int, sym: Sym):
        return self.delta.get((state, sym), ())


@dataclass(frozen=True)
class Configuration:
    """Between-positions configuration: boundary index into |- w -|."""

    state: int
    boundary: int


@dataclass
class TwoWayResult:
    status: str  # "accept" | "reject" | "loop"
    output: str | None = None
    trace: list = field(default_factory=list)


def _read_position(sign: int, boundary: int) -> int:
    # tape index read by a state at `boundary`; -1 when off tape
    return boundary if sign > 0 else boundary - 1


def run_two_way(t: TwoWayTransducer, word, step_budget: int | None = None,
                want_trace: bool = False) -> TwoWayResult:
    """Simulate t on |- word -|.

    Deterministic machines run step by step with configuration-repeat
    detection; nondeterministic ones fall back to a depth-first search bounded
    by `step_budget`.  Acceptance needs a final state with the whole tape,
    right endmarker included, consumed.
    """
    syms = letters(word) if isinstance(word, str) else tuple(word)
    tape = (LEFT_END,) + syms + (RIGHT_END,)
    n = len(tape)
    if step_budget is None:
        step_budget = t.n_states * (n + 1) * 4 + 16

    deterministic = all(len(v) <= 1 for v in t.delta.values())
    if deterministic:
        state, boundary = t.initial, 0
        out = []
        trace = [Configuration(state, boundary)] if want_trace else []
        seen = {(state, boundary)}
        while True:
            if state in t.finals and boundary == n:
                return TwoWayResult("accept", "".join(out), trace)
            pos = _read_position(t.signs[state], boundary)
            if pos < 0 or pos >= n:
                return TwoWayResult("reject", None, trace)
            moves = t.successors(state, tape[pos])
            if not moves:
                return TwoWayResult("reject", None, trace)
            (dst, o) = moves[0]
            if o:
                out.append(o)
            if t.signs[state] > 0:
                boundary = boundary + 1 if t.signs[dst] > 0 else boundary
            else:
                boundary = boundary if t.signs[dst] > 0 else boundary - 1
            state = dst
            if want_trace:
                trace.append(Configuration(state, boundary))
            if (state, boundary) in seen:
                return TwoWayResult("loop", None, trace)
            seen.add((state, boundary))

    # nondeterministic: DFS over configurations
    budget = [step_budget]
    out_acc = []
    results = []
    hit_budget = [False]

    def dfs(state, boundary, path):
        if budget[0] <= 0:
            hit_budget[0] = True
            return
        budget[0] -= 1
        if state in t.finals and boundary == n and not results:
            results.append("".join(out_acc))
            return
        pos = _read_position(t.signs[state], boundary)
        if pos < 0 or pos >= n:
            return
        for (dst, o) in t.successors(state, tape[pos]):
            if t.signs[state] > 0:
                nb = boundary + 1 if t.signs[dst] > 0 else boundary
            else:
                nb = boundary if t.signs[dst] > 0 else boundary - 1
            key = (dst, nb)
            if key in path:
                continue
            if o:
                out_acc.append(o)
            dfs(dst, nb, path | {key})
            if o:
                out_acc.pop()
            if results:
                return

    dfs(t.initial, 0, frozenset({(t.initial, 0)}))
    if results:
        return TwoWayResult("accept", results[0])
    return TwoWayResult("loop" if hit_budget[0] else "reject", None)


def audit_trace(t: TwoWayTransducer, word, trace) -> bool:
    """Check a trace against the successor relation, step by step."""
    syms = letters(word) if isinstance(word, str) else tuple(word)
    tape = (LEFT_END,) + syms + (RIGHT_END,)
    for (cur, nxt) in zip(trace, trace[1:]):
        pos = _read_position(t.signs[cur.state], cur.boundary)
        if pos < 0 or pos >= len(tape):
            return False
        moves = t.successors(cur.state, tape[pos])
        if not any(d == nxt.state for (d, _o) in moves):
            return False
        if t.signs[cur.state] > 0:
            want = cur.boundary + 1 if t.signs[nxt.state] > 0 else cur.boundary
        else:
            want = cur.boundary if t.signs[nxt.state] > 0 else cur.boundary - 1
        if nxt.boundary != want:
            return False
    return True


# ---------------------------------------------------------------------------
# Structural predicates

def _two_way_edges(m: TwoWayTransducer):
    for (src, sym), moves in m.delta.items():
        for (dst, _o) in moves:
            yield (src, sym, dst)


def _one_way_edges(m: OneWayTransducer):
    for (src, sym, _o, dst) in m.transitions:
        yield (src, sym, dst)


def _edges(m):
    if isinstance(m, TwoWayTransducer):
        return _two_way_edges(m)
    if isinstance(m, OneWayTransducer):
        return _one_way_edges(m)
    if isinstance(m, Nfa):
        return iter(m.transitions)
    if isinstance(m, Dfa):
        return ((s, a, t) for ((s, a), t) in m.delta.items())
    raise MachineError("unsupported machine type: %r" % type(m))


def is_deterministic(m) -> bool:
    seen = set()
    for (src, sym, _dst) in _edges(m):
        if (src, sym) in seen:
            return False
        seen.add((src, sym))
    return True


def is_codeterministic(m) -> bool:
    finals = m.finals
    if len(finals) != 1:
        return False
    seen = set()
    for (_src, sym, dst) in _edges(m):
        if (sym, dst) in seen:
            return False
        seen.add((sym, dst))
    return True


def is_reversible(m) -> bool:
    return is_deterministic(m) and is_codeterministic(m)


# ---------------------------------------------------------------------------
# Export

def _sym_label(sym) -> str:
    if sym is None:
        return "eps"
    return render(sym)


def _out_label(out) -> str:
    if isinstance(out, str):
        return out if out else "eps"
    if not out:
        return "eps"
    return " ".join(render(s) for s in out)


def to_dot(m, name: str = "machine") -> str:
    lines = ["digraph %s {" % name, "  rankdir=LR;", '  start [shape=none label=""];']
    if isinstance(m, TwoWayTransducer):
        for s in range(m.n_states):
            sign = "+" if m.signs[s] > 0 else "-"
            shape = "doublecircle" if s in m.finals else "circle"
            lines.append('  %d [shape=%s label="%d%s"];' % (s, shape, s, sign))
        lines.append("  start -> %d;" % m.initial)
        for (src, sym), moves in sorted(m.delta.items(), key=str):
            for (dst, out) in moves:
                lines.append('  %d -> %d [label="%s | %s"];'
                             % (src, dst, _sym_label(sym), _out_label(out)))
    elif isinstance(m, OneWayTransducer):
        for s in range(m.n_states):
            shape = "doublecircle" if s in m.finals else "circle"
            lines.append('  %d [shape=%s label="%d"];' % (s, shape, s))
        lines.append("  start -> %d;" % m.initial)
        for (src, sym, out, dst) in m.transitions:
            lines.append('  %d -> %d [label="%s | %s"];'
                         % (src, dst, _sym_label(sym), _out_label(out)))
    elif isinstance(m, (Nfa, Dfa)):
        finals = m.finals
        for s in range(m.n_states):
            shape = "doublecircle" if s in finals else "circle"
            lines.append('  %d [shape=%s label="%d"];' % (s, shape, s))
        lines.append("  start -> %d;" % m.initial)
        for (src, sym, dst) in _edges(m):
            lines.append('  %d -> %d [label="%s"];' % (src, dst, _sym_label(sym)))
    else:
        raise MachineError("unsupported machine type: %r" % type(m))
    lines.append("}")
    return "\n".join(lines)


def _sym_json(sym):
    return None if sym is None else render(sym)


def to_json_dict(m) -> dict:
    """Stable JSON schema; symbols use the documented ASCII rendering."""
    if isinstance(m, TwoWayTransducer):
        return {
            "type": "2nft",
            "states": m.n_states,
            "signs": ["+" if s > 0 else "-" for s in m.signs],
            "initial": m.initial,
            "finals": sorted(m.finals),
            "transitions": [
                {"src": src, "in": _sym_json(sym), "dst": dst, "out": out}
                for (src, sym), moves in sorted(m.delta.items(), key=str)
                for (dst, out) in moves
            ],
        }
    if isinstance(m, OneWayTransducer):
        return {
            "type": "1nft",
            "states": m.n_states,
            "initial": m.initial,
            "finals": sorted(m.finals),
            "transitions": [
                {"src": src, "in": _sym_json(sym),
                 "out": [render(s) for s in out], "dst": dst}
                for (src, sym, out, dst) in m.transitions
            ],
        }
    if isinstance(m, Nfa):
        return {
            "type": "nfa",
            "states": m.n_states,
            "initial": m.initial,
            "finals": sorted(m.finals),
            "transitions": [
                {"src": src, "in": _sym_json(sym), "dst": dst}
                for (src, sym, dst) in m.transitions
            ],
        }
    if isinstance(m, Dfa):
        return {
            "type": "dfa",
            "states": m.n_states,
            "initial": m.initial,
            "finals": sorted(m.finals),
            "transitions": [
                {"src": src, "in": _sym_json(sym), "dst": dst}
                for ((src, sym), dst) in sorted(m.delta.items(), key=str)
            ],
        }
    raise MachineError("unsupported machine type: %r" % type(m))
