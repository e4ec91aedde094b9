"""Generalized nondeterministic pushdown automata.

A transition ``(src, dst, read, pop, push)`` reads ``read`` (``None`` for the
empty string) from the input, removes the string ``pop`` from the top of the
stack and writes ``push`` there.  Stack strings are tuples, top first.  The
stack starts as the single bottom symbol.

The machine reads its tape right to left: the first transition of a path
consumes the *last* symbol of the word.  Callers pass words in ordinary
order; the reversal happens here.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

EMPTY_STACK = "empty_stack"
TERMINAL_STATE = "terminal_state"
MODES = (EMPTY_STACK, TERMINAL_STATE)


class PdaError(ValueError):
    pass


class Transition(NamedTuple):
    src: str
    dst: str
    read: Optional[str]
    pop: tuple
    push: tuple

    @property
    def is_elementary(self) -> bool:
        return (len(self.pop) == 1 and not self.push) or (not self.pop and len(self.push) <= 1)


@dataclass(frozen=True)
class Pda:
    input_alphabet: frozenset
    stack_alphabet: frozenset
    states: tuple
    initial: str
    transitions: tuple
    terminals: frozenset = frozenset()
    mode: str = EMPTY_STACK
    bottom: str = "#"

    @classmethod
    def make(cls, input_alphabet, stack_alphabet, states, initial, transitions,
             terminals=(), mode=EMPTY_STACK, bottom="#") -> "Pda":
        ts = tuple(
            Transition(t[0], t[1], t[2] or None, tuple(t[3]), tuple(t[4])) for t in transitions
        )
        return cls(frozenset(input_alphabet), frozenset(stack_alphabet), tuple(states),
                   initial, ts, frozenset(terminals), mode, bottom)

    @cached_property
    def _engine(self) -> "_Engine":
        return _Engine(elementarize(self))


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self):
        return self.ok


def validate(p: Pda) -> ValidationReport:
    errors = []
    states = set(p.states)
    if len(states) != len(p.states):
        errors.append("states: duplicate state names")
    if p.initial not in states:
        errors.append(f"initial: {p.initial!r} is not a state")
    for s in sorted(p.terminals - states):
        errors.append(f"terminals: {s!r} is not a state")
    if p.mode not in MODES:
        errors.append(f"mode: {p.mode!r} is not one of {MODES}")
    if p.bottom not in p.stack_alphabet:
        errors.append(f"stack_alphabet: bottom marker {p.bottom!r} missing")
    for n, t in enumerate(p.transitions):
        for end in (t.src, t.dst):
            if end not in states:
                errors.append(f"transitions[{n}]: unknown state {end!r}")
        if t.read is not None and t.read not in p.input_alphabet:
            errors.append(f"transitions[{n}]: read symbol {t.read!r} not in input alphabet")
        for x in t.pop + t.push:
            if x not in p.stack_alphabet:
                errors.append(f"transitions[{n}]: stack symbol {x!r} not in stack alphabet")
    return ValidationReport(tuple(errors))


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name += "'"
    return name


def elementarize(p: Pda) -> Pda:
    """Equivalent machine whose steps pop one, push one, or touch no stack.

    Multi-symbol pops run through a trie of intermediate states shared by
    all transitions leaving the same state; pushes run through chains shared
    by all transitions entering the same state.  The read symbol rides on
    the first push (or on a stack-neutral step when nothing is pushed).

    In empty-stack mode a pop chain could empty the stack half way through a
    transition, so the result then gets a fresh bottom marker under the old
    one which only original states may pop (into a sink).
    """
    if all(t.is_elementary for t in p.transitions):
        return p
    taken = set(p.states)
    extra = []
    names = {}
    guard = p.mode == EMPTY_STACK and any(t.pop and not t.is_elementary for t in p.transitions)

    def node(key, label):
        if key not in names:
            names[key] = _fresh(label, taken)
            taken.add(names[key])
            extra.append(names[key])
        return names[key]

    def pop_node(src, popped):
        return node(("pop", src, popped), f"{src}/pop[{' '.join(popped)}]")

    def push_node(dst, rest):
        if not rest:
            return dst
        return node(("push", dst, rest), f"{dst}/push[{' '.join(rest)}]")

    out = []
    seen = set()

    def emit(t):
        if t not in seen:
            seen.add(t)
            out.append(t)

    for t in p.transitions:
        if t.is_elementary:
            emit(t)
            continue
        cur = t.src
        for k in range(len(t.pop)):
            nxt = pop_node(t.src, t.pop[:k + 1])
            emit(Transition(cur, nxt, None, (t.pop[k],), ()))
            cur = nxt
        if not t.push:
            emit(Transition(cur, t.dst, t.read, (), ()))
            continue
        rest = t.push[:-1]
        emit(Transition(cur, push_node(t.dst, rest), t.read, (), (t.push[-1],)))
        while rest:
            emit(Transition(push_node(t.dst, rest), push_node(t.dst, rest[:-1]), None, (), (rest[-1],)))
            rest = rest[:-1]
    if not guard:
        return Pda(p.input_alphabet, p.stack_alphabet, p.states + tuple(extra), p.initial,
                   tuple(out), p.terminals, p.mode, p.bottom)
    floor = p.bottom + "_"
    while floor in p.stack_alphabet:
        floor += "_"
    start = _fresh("start", taken)
    taken.add(start)
    sink = _fresh("emptied", taken)
    out.insert(0, Transition(start, p.initial, None, (), (p.bottom,)))
    out.extend(Transition(s, sink, None, (floor,), ()) for s in p.states)
    return Pda(p.input_alphabet, p.stack_alphabet | {floor}, (start,) + p.states + tuple(extra) + (sink,),
               start, tuple(out), p.terminals, p.mode, floor)


class _Engine:
    """Integer-coded elementary machine plus the summary-based decision."""

    def __init__(self, p: Pda):
        self.mode = p.mode
        sidx = {s: i for i, s in enumerate(p.states)}
        self.sym = {x: i for i, x in enumerate(sorted(p.stack_alphabet))}
        self.inp = {a: i for i, a in enumerate(sorted(p.input_alphabet))}
        n = len(p.states)
        self.noops = [[] for _ in range(n)]
        self.pops = [{} for _ in range(n)]
        self.pushes = [[] for _ in range(n)]
        for t in p.transitions:
            a = -1 if t.read is None else self.inp[t.read]
            s, d = sidx[t.src], sidx[t.dst]
            if t.pop:
                self.pops[s].setdefault(self.sym[t.pop[0]], []).append((a, d))
            elif t.push:
                self.pushes[s].append((a, self.sym[t.push[0]], d))
            else:
                self.noops[s].append((a, d))
        self.initial = sidx[p.initial]
        self.bottom = self.sym[p.bottom]
        self.terminal = [False] * n
        for s in p.terminals:
            self.terminal[sidx[s]] = True

    def accepts(self, word: Sequence[str]) -> bool:
        w = [self.inp[a] for a in reversed(word)]
        n = len(w)
        width = n + 1
        empty_mode = self.mode == EMPTY_STACK
        terminal = self.terminal
        noops, pops, pushes = self.noops, self.pops, self.pushes

        # context 0 is the bottom region: stack empty (its symbol is never popped)
        ctx_id = {}
        ctx_top = [-1]
        local = [set()]
        summ = [set()]
        callers = [set()]
        work = deque()

        def add_local(c, node):
            loc = local[c]
            if node in loc:
                return False
            loc.add(node)
            work.append((c, node))
            q, j = divmod(node, width)
            if j == n and ((empty_mode and c == 0) or (not empty_mode and terminal[q])):
                return True
            return False

        def add_summary(c, node):
            s = summ[c]
            if node in s:
                return False
            s.add(node)
            for cc in callers[c]:
                if add_local(cc, node):
                    return True
            return False

        def call(c, q, y, j):
            key = (q, y, j)
            callee = ctx_id.get(key)
            hit = False
            if callee is None:
                callee = len(ctx_top)
                ctx_id[key] = callee
                ctx_top.append(y)
                local.append(set())
                summ.append(set())
                callers.append({c})
                hit = add_local(callee, q * width + j)
            elif c not in callers[callee]:
                callers[callee].add(c)
                for node in summ[callee]:
                    if add_local(c, node):
                        return True
            return hit

        if call(0, self.initial, self.bottom, 0):
            return True
        while work:
            c, node = work.popleft()
            q, j = divmod(node, width)
            nxt = w[j] if j < n else -2
            for a, d in noops[q]:
                if a == -1:
                    if add_local(c, d * width + j):
                        return True
                elif a == nxt:
                    if add_local(c, d * width + j + 1):
                        return True
            if c:
                for a, d in pops[q].get(ctx_top[c], ()):
                    if a == -1:
                        if add_summary(c, d * width + j):
                            return True
                    elif a == nxt:
                        if add_summary(c, d * width + j + 1):
                            return True
            for a, y, d in pushes[q]:
                if a == -1:
                    if call(c, d, y, j):
                        return True
                elif a == nxt:
                    if call(c, d, y, j + 1):
                        return True
        return False


def _check_word(p: Pda, word) -> tuple:
    word = tuple(word)
    for a in word:
        if a not in p.input_alphabet:
            raise PdaError(f"symbol {a!r} not in the input alphabet")
    return word


def accepts(p: Pda, word: Sequence[str]) -> bool:
    """Exact membership: some successful path is labelled by ``word``."""
    return p._engine.accepts(_check_word(p, word))


def accepts_bounded(p: Pda, word: Sequence[str], stack_bound: int) -> bool:
    """Breadth-first search over configurations with stack height <= bound."""
    if stack_bound < 1:
        raise PdaError("stack_bound must be >= 1")
    word = _check_word(p, word)
    w = tuple(reversed(word))
    n = len(w)
    start = (p.initial, 0, (p.bottom,))
    seen = {start}
    queue = deque([start])
    by_src = {}
    for t in p.transitions:
        by_src.setdefault(t.src, []).append(t)
    while queue:
        q, j, stack = queue.popleft()
        if j == n:
            if p.mode == EMPTY_STACK and not stack:
                return True
            if p.mode == TERMINAL_STATE and q in p.terminals:
                return True
        for t in by_src.get(q, ()):
            if t.read is not None and (j >= n or w[j] != t.read):
                continue
            k = len(t.pop)
            if stack[:k] != t.pop:
                continue
            new = t.push + stack[k:]
            if len(new) > stack_bound:
                continue
            cfg = (t.dst, j + (t.read is not None), new)
            if cfg not in seen:
                seen.add(cfg)
                queue.append(cfg)
    return False


# -- export ------------------------------------------------------------------

def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _stack_label(xs: tuple) -> str:
    return "".join(xs) if xs else "ε"


def to_dot(p: Pda) -> str:
    lines = ["digraph pda {", "  rankdir=LR;", '  node [shape=circle];']
    for s in p.states:
        attrs = []
        if s in p.terminals:
            attrs.append("shape=doublecircle")
        if s == p.initial:
            attrs.append("style=bold")
        lines.append(f"  {_dot_quote(s)}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for t in p.transitions:
        label = f"({t.read or 'ε'}, {_stack_label(t.pop)}, {_stack_label(t.push)})"
        lines.append(f"  {_dot_quote(t.src)} -> {_dot_quote(t.dst)} [label={_dot_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_structured(p: Pda) -> str:
    doc = {
        "input_alphabet": sorted(p.input_alphabet),
        "stack_alphabet": sorted(p.stack_alphabet),
        "bottom": p.bottom,
        "states": list(p.states),
        "initial": p.initial,
        "terminals": sorted(p.terminals),
        "mode": p.mode,
        "transitions": [[t.src, t.dst, t.read, list(t.pop), list(t.push)] for t in p.transitions],
    }
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def export(p: Pda, format: str = "dot") -> str:
    if format == "dot":
        return to_dot(p)
    if format in ("structured", "json"):
        return to_structured(p)
    raise PdaError(f"unknown export format {format!r}")


def load_structured(text: str) -> Pda:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PdaError(f"line {exc.lineno}: {exc.msg}") from None
    try:
        return Pda.make(
            doc["input_alphabet"], doc["stack_alphabet"], doc["states"], doc["initial"],
            [tuple(t) for t in doc["transitions"]], doc.get("terminals", ()),
            doc.get("mode", EMPTY_STACK), doc.get("bottom", "#"),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise PdaError(f"malformed machine document: {exc!r}") from None
