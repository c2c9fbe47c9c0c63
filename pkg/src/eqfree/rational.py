"""Automata for rational subsets of free groups.

An :class:`Automaton` reads signed letter codes. ``benois_reduce`` turns an
automaton for a language ``L`` into one accepting exactly the reduced forms
of the words of ``L``; intersections of such automata are intersections of
rational subsets, which is how constrained equaliser questions are decided.
"""

from __future__ import annotations

import re
from collections import defaultdict, deque
from dataclasses import dataclass

from .errors import AlphabetMismatchError, ParseError
from .stallings import CoreGraph
from .words import Alphabet, Letter, Word


@dataclass(frozen=True, eq=False)
class Automaton:
    """An epsilon-free NFA over the letters of ``alphabet`` and their inverses."""

    alphabet: Alphabet
    n_states: int
    transitions: frozenset  # (state, code, state)
    initial: int
    accepting: frozenset

    def __post_init__(self):
        for p, c, q in self.transitions:
            self.alphabet.check_code(c)
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError("transition state out of range")

    def delta(self):
        out = defaultdict(list)
        for p, c, q in sorted(self.transitions):
            out[p].append((c, q))
        return out

    def accepts(self, w) -> bool:
        codes = w.codes if isinstance(w, Word) else tuple(w)
        d = self.delta()
        current = {self.initial}
        for c in codes:
            current = {q for p in current for (x, q) in d.get(p, ()) if x == c}
            if not current:
                return False
        return bool(current & self.accepting)

    def words(self, max_len: int) -> set:
        """All accepted code tuples of length at most ``max_len`` (for small automata)."""
        d = self.delta()
        found = set()
        frontier = {((), self.initial)}
        for n in range(max_len + 1):
            for w, q in frontier:
                if q in self.accepting:
                    found.add(w)
            if n == max_len:
                break
            frontier = {(w + (c,), r) for w, q in frontier for c, r in d.get(q, ())}
        return found

    def __repr__(self) -> str:
        return (
            f"Automaton(states={self.n_states}, transitions={len(self.transitions)}, "
            f"initial={self.initial}, accepting={sorted(self.accepting)})"
        )


def _trim(alphabet, n, transitions, initial, accepting):
    """Keep states that are reachable and co-reachable; renumber from 0."""
    fwd = defaultdict(list)
    bwd = defaultdict(list)
    for p, c, q in transitions:
        fwd[p].append(q)
        bwd[q].append(p)
    reach = {initial}
    stack = [initial]
    while stack:
        p = stack.pop()
        for q in fwd[p]:
            if q not in reach:
                reach.add(q)
                stack.append(q)
    coreach = set(a for a in accepting if a in reach)
    stack = list(coreach)
    while stack:
        q = stack.pop()
        for p in bwd[q]:
            if p in reach and p not in coreach:
                coreach.add(p)
                stack.append(p)
    live = coreach | {initial}
    order = {initial: 0}
    for s in sorted(live, key=repr):
        if s not in order:
            order[s] = len(order)
    trans = frozenset((order[p], c, order[q]) for p, c, q in transitions if p in coreach and q in coreach)
    acc = frozenset(order[a] for a in accepting if a in coreach)
    return Automaton(alphabet, len(order), trans, 0, acc)


def empty_automaton(alphabet: Alphabet) -> Automaton:
    return Automaton(alphabet, 1, frozenset(), 0, frozenset())


# -- constraint expressions -------------------------------------------------


@dataclass(frozen=True)
class Lit:
    code: int


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Concat:
    parts: tuple


@dataclass(frozen=True)
class Union:
    parts: tuple


@dataclass(frozen=True)
class Star:
    inner: object


_TOKEN = re.compile(r"\s*(?:([()|*])|([^\s()|*']+'?))")


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} in constraint", column=pos + 1)
        tokens.append((m.group(1) or m.group(2), m.start(m.lastindex) + 1))
        pos = m.end()
    return tokens


def parse_constraint(text: str, alphabet: Alphabet):
    """Parse ``(a|b)* a'``-style syntax into an expression tree.

    Juxtaposition is concatenation, ``|`` union, postfix ``*`` star, ``1``
    the empty word; letters are generator names with an optional ``'``.
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def union():
        nonlocal pos
        parts = [concat()]
        while peek() == "|":
            pos += 1
            parts.append(concat())
        return parts[0] if len(parts) == 1 else Union(tuple(parts))

    def concat():
        parts = []
        while peek() not in (None, "|", ")"):
            parts.append(postfix())
        if not parts:
            col = tokens[pos][1] if pos < len(tokens) else len(text) + 1
            raise ParseError("empty expression (write 1 for the empty word)", column=col)
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def postfix():
        nonlocal pos
        node = atom()
        while peek() == "*":
            pos += 1
            node = Star(node)
        return node

    def atom():
        nonlocal pos
        tok, col = tokens[pos]
        if tok == "(":
            pos += 1
            node = union()
            if peek() != ")":
                raise ParseError("missing ')'", column=col)
            pos += 1
            return node
        if tok in (")", "*", "|"):
            raise ParseError(f"unexpected {tok!r}", column=col)
        pos += 1
        if tok == "1":
            return One()
        try:
            return Lit(alphabet.parse_token(tok))
        except KeyError:
            raise ParseError(f"unknown generator in token {tok!r}", column=col) from None

    if not tokens:
        raise ParseError("empty constraint")
    tree = union()
    if pos != len(tokens):
        raise ParseError(f"unexpected {tokens[pos][0]!r}", column=tokens[pos][1])
    return tree


def render_constraint(expr, alphabet: Alphabet) -> str:
    if isinstance(expr, Lit):
        return alphabet.token(expr.code)
    if isinstance(expr, One):
        return "1"
    if isinstance(expr, Star):
        inner = render_constraint(expr.inner, alphabet)
        if not isinstance(expr.inner, (Lit, One)):
            inner = f"({inner})"
        return inner + "*"
    if isinstance(expr, Concat):
        out = []
        for p in expr.parts:
            s = render_constraint(p, alphabet)
            out.append(f"({s})" if isinstance(p, Union) else s)
        return " ".join(out)
    if isinstance(expr, Union):
        return "|".join(render_constraint(p, alphabet) for p in expr.parts)
    raise TypeError(f"not a constraint expression: {expr!r}")


def compile_expr(expr, alphabet: Alphabet) -> Automaton:
    """Thompson construction followed by epsilon elimination and trimming."""
    eps = defaultdict(set)
    trans = []
    counter = [0]

    def new():
        counter[0] += 1
        return counter[0] - 1

    def build(node):
        if isinstance(node, Lit):
            alphabet.check_code(node.code)
            s, t = new(), new()
            trans.append((s, node.code, t))
            return s, t
        if isinstance(node, One):
            s = new()
            return s, s
        if isinstance(node, Concat):
            s, t = build(node.parts[0])
            for p in node.parts[1:]:
                s2, t2 = build(p)
                eps[t].add(s2)
                t = t2
            return s, t
        if isinstance(node, Union):
            s, t = new(), new()
            for p in node.parts:
                s2, t2 = build(p)
                eps[s].add(s2)
                eps[t2].add(t)
            return s, t
        if isinstance(node, Star):
            s = new()
            s2, t2 = build(node.inner)
            eps[s].add(s2)
            eps[t2].add(s)
            return s, s
        raise TypeError(f"not a constraint expression: {node!r}")

    start, end = build(expr)
    n = counter[0]
    closure = {}
    for p in range(n):
        seen = {p}
        stack = [p]
        while stack:
            q = stack.pop()
            for r in eps[q]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        closure[p] = seen
    by_src = defaultdict(list)
    for p, c, q in trans:
        by_src[p].append((c, q))
    new_trans = set()
    for p in range(n):
        for r in closure[p]:
            for c, q in by_src[r]:
                new_trans.add((p, c, q))
    accepting = {p for p in range(n) if end in closure[p]}
    return _trim(alphabet, n, new_trans, start, accepting)


def compile(expr, alphabet: Alphabet | None = None) -> Automaton:  # noqa: A001 - public name
    """Compile an expression tree, or constraint text together with ``alphabet``."""
    if isinstance(expr, str):
        if alphabet is None:
            raise ValueError("an alphabet is required to parse constraint text")
        expr = parse_constraint(expr, alphabet)
    if alphabet is None:
        raise ValueError("an alphabet is required")
    return compile_expr(expr, alphabet)


def reduced_only(A: Automaton) -> Automaton:
    """Intersect with the local language of freely reduced words."""
    d = A.delta()
    start = (A.initial, 0)
    states = {start: 0}
    queue = deque([start])
    trans = set()
    accepting = set()
    while queue:
        st = queue.popleft()
        q, last = st
        if q in A.accepting:
            accepting.add(st)
        for c, r in d.get(q, ()):
            if c == -last:
                continue
            nxt = (r, c)
            if nxt not in states:
                states[nxt] = len(states)
                queue.append(nxt)
            trans.add((st, c, nxt))
    ids = {s: i for s, i in states.items()}
    return _trim(
        A.alphabet,
        len(ids),
        {(ids[p], c, ids[q]) for p, c, q in trans},
        ids[start],
        {ids[s] for s in accepting},
    )


def cancel_relation(A: Automaton) -> set:
    """Pairs ``(p, q)`` joined by a path whose label freely reduces to the identity.

    Least fixed point of: reflexivity; ``p -a-> p' ~> q' -a^-1-> q``; and
    composition.
    """
    n = A.n_states
    rel = {(p, p) for p in range(n)}
    out_by = defaultdict(list)  # code -> [(p, p')]
    in_by = defaultdict(list)  # code -> [(q', q)]
    for p, c, q in A.transitions:
        out_by[c].append((p, q))
        in_by[c].append((p, q))
    changed = True
    while changed:
        changed = False
        new = set()
        for c, pairs in out_by.items():
            for p, p1 in pairs:
                for q1, q in in_by.get(-c, ()):
                    if (p1, q1) in rel and (p, q) not in rel:
                        new.add((p, q))
        if new:
            rel |= new
            changed = True
        succ = defaultdict(set)
        for p, q in rel:
            succ[p].add(q)
        comp = set()
        for p, q in rel:
            for r in succ[q]:
                if (p, r) not in rel:
                    comp.add((p, r))
        if comp:
            rel |= comp
            changed = True
    return rel


def benois_reduce(A: Automaton) -> Automaton:
    """Automaton accepting exactly the reduced forms of the words accepted by ``A``."""
    rel = cancel_relation(A)
    succ = defaultdict(set)
    for p, q in rel:
        succ[p].add(q)
    by_src = defaultdict(list)
    for p, c, q in A.transitions:
        by_src[p].append((c, q))
    trans = set()
    for p in range(A.n_states):
        for p1 in succ[p]:
            for c, q1 in by_src[p1]:
                for q in succ[q1]:
                    trans.add((p, c, q))
    accepting = {p for p in range(A.n_states) if succ[p] & A.accepting}
    saturated = _trim(A.alphabet, A.n_states, trans, A.initial, accepting)
    return reduced_only(saturated)


def intersect(A: Automaton, B: Automaton) -> Automaton:
    """Product automaton accepting ``L(A) ∩ L(B)``."""
    if A.alphabet != B.alphabet:
        raise AlphabetMismatchError("automata are over different alphabets")
    da, db = A.delta(), B.delta()
    start = (A.initial, B.initial)
    ids = {start: 0}
    queue = deque([start])
    trans = set()
    while queue:
        p, q = queue.popleft()
        for c, p2 in da.get(p, ()):
            for c2, q2 in db.get(q, ()):
                if c != c2:
                    continue
                nxt = (p2, q2)
                if nxt not in ids:
                    ids[nxt] = len(ids)
                    queue.append(nxt)
                trans.add((ids[(p, q)], c, ids[nxt]))
    accepting = {i for (p, q), i in ids.items() if p in A.accepting and q in B.accepting}
    return _trim(A.alphabet, len(ids), trans, 0, accepting)


def shortest_nontrivial(A: Automaton) -> Word | None:
    """A shortest non-empty accepted word, or None."""
    d = A.delta()
    parent = {}
    queue = deque()
    for c, q in d.get(A.initial, ()):
        if q not in parent:
            parent[q] = (None, c)
            queue.append(q)
    while queue:
        q = queue.popleft()
        if q in A.accepting:
            codes = []
            cur = q
            while cur is not None:
                prev, c = parent[cur]
                codes.append(c)
                cur = prev
            return Word(A.alphabet, reversed(codes))
        for c, r in d.get(q, ()):
            if r not in parent:
                parent[r] = (q, c)
                queue.append(r)
    return None


def is_trivial(A: Automaton) -> bool:
    """True iff no accepting state is reachable from the initial state by a non-empty path."""
    d = A.delta()
    seen = set()
    stack = [q for _, q in d.get(A.initial, ())]
    while stack:
        q = stack.pop()
        if q in seen:
            continue
        seen.add(q)
        if q in A.accepting:
            return False
        stack.extend(r for _, r in d.get(q, ()))
    return True


def el_automaton(alphabet: Alphabet, a: Letter, omega, b: Letter) -> Automaton:
    """Reduced words ``a y b`` with ``y`` a reduced word over ``omega`` and inverses.

    ``omega`` is an iterable of generator names or indices.
    """
    idx = set()
    for o in omega:
        idx.add(alphabet.index(o) if isinstance(o, str) else int(o))
    trans = {(0, a.code, 1), (1, b.code, 2)}
    for i in idx:
        trans.add((1, i + 1, 1))
        trans.add((1, -(i + 1), 1))
    return reduced_only(Automaton(alphabet, 3, frozenset(trans), 0, frozenset({2})))


def sigma_plus(alphabet: Alphabet) -> Automaton:
    """All non-empty words: the constraint under which PCP_R is the plain PCP."""
    trans = set()
    for i in range(len(alphabet)):
        for c in (i + 1, -(i + 1)):
            trans.add((0, c, 1))
            trans.add((1, c, 1))
    return reduced_only(Automaton(alphabet, 2, frozenset(trans), 0, frozenset({1})))


def core_automaton(core: CoreGraph) -> Automaton:
    """Read each core edge in both directions; basepoint initial and accepting."""
    trans = set()
    for s, x, d in core.edges:
        trans.add((s, x + 1, d))
        trans.add((d, -(x + 1), s))
    return Automaton(core.alphabet, max(core.n_vertices, 1), frozenset(trans), 0, frozenset({0}))


def pcp_r_witness(eq_core: CoreGraph, constraint: Automaton) -> Word | None:
    """A shortest non-trivial element of ``R ∩ Eq``, or None when the intersection is trivial.

    ``constraint`` may accept unreduced words; it is Benois-reduced first.
    """
    reduced_core = reduced_only(core_automaton(eq_core))
    return shortest_nontrivial(intersect(reduced_core, benois_reduce(constraint)))


def decide_pcp_r(eq_core: CoreGraph, constraint: Automaton) -> bool:
    reduced_core = reduced_only(core_automaton(eq_core))
    return not is_trivial(intersect(reduced_core, benois_reduce(constraint)))
