"""Stallings core graphs of finitely generated subgroups of free groups.

Folding keeps, on every edge, an annotation: a reduced word over the
alphabet of the subgroup generators. Reading a closed path at the basepoint
multiplies annotations to a word in the generators evaluating to the path
label. Folding is a sequence of gauge changes at the vertex being absorbed,
so these products are preserved; when two parallel edges with the same label
carry different annotations, the loop they form is a relation among the
generators, i.e. a kernel element of the map sending generators to their
words.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from .errors import InjectiveError, NotBothNonInjectiveError, NotMemberError
from .kernels import apply_codes, invert_codes, reduce_codes
from .words import Alphabet, Homomorphism, Word, concat, invert, iter_reduced_codes, primitive_root


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, v):
        root = v
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while v != root:
            nxt = self.parent.get(v, v)
            self.parent[v] = root
            v = nxt
        return root

    def union_into(self, keep, drop):
        self.parent[self.find(drop)] = self.find(keep)


def _mul(*parts):
    out = []
    for p in parts:
        out.extend(p)
    return reduce_codes(out)


class _Folder:
    """Mutable graph used while folding a bouquet into a core graph.

    ``ends[v][letter]`` lists the edges leaving ``v`` along a signed letter;
    any such list with two entries is a pending fold.
    """

    def __init__(self, gens_codes, track_kernel=False):
        self.edges = {}  # id -> [src, gen (positive code), dst, annotation]
        self.at = defaultdict(set)
        self.ends = defaultdict(lambda: defaultdict(dict))
        self.pending = deque()
        self.uf = _UnionFind()
        self.next_vertex = 1
        self.next_edge = 0
        self.track_kernel = track_kernel
        self.kernel = []
        base = 0
        self.at[base]
        for j, w in enumerate(gens_codes):
            if not w:
                if track_kernel:
                    self.kernel.append((j + 1,))
                continue
            prev = base
            for pos, c in enumerate(w):
                nxt = base if pos == len(w) - 1 else self._new_vertex()
                ann = (j + 1,) if pos == 0 else ()
                if c > 0:
                    self._add_edge(prev, c, nxt, ann)
                else:
                    self._add_edge(nxt, -c, prev, invert_codes(ann))
                prev = nxt

    def _new_vertex(self):
        v = self.next_vertex
        self.next_vertex += 1
        self.at[v]
        return v

    def _attach(self, e):
        s, x, d, _ = self.edges[e]
        self.at[s].add(e)
        self.at[d].add(e)
        for v, letter in ((s, x), (d, -x)):
            bucket = self.ends[v][letter]
            bucket[e] = None
            if len(bucket) == 2:
                self.pending.append((v, letter))

    def _detach(self, e):
        s, x, d, _ = self.edges[e]
        self.at[s].discard(e)
        self.at[d].discard(e)
        self.ends[s][x].pop(e, None)
        self.ends[d][-x].pop(e, None)

    def _add_edge(self, s, x, d, ann):
        e = self.next_edge
        self.next_edge += 1
        self.edges[e] = [s, x, d, ann]
        self._attach(e)
        return e

    def _remove_edge(self, e):
        self._detach(e)
        del self.edges[e]

    def half_edges(self, v):
        """(signed letter, other end, annotation read from v, edge id) for each edge end at v."""
        out = []
        for e in sorted(self.at[v]):
            s, x, d, ann = self.edges[e]
            if s == v:
                out.append((x, d, ann, e))
            if d == v:
                out.append((-x, s, invert_codes(ann), e))
        return out

    def path_annotations(self, target):
        """Annotation of some path from the basepoint to ``target``."""
        seen = {0: ()}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            if v == target:
                return seen[v]
            for _, o, ann, _ in self.half_edges(v):
                if o not in seen:
                    seen[o] = _mul(seen[v], ann)
                    queue.append(o)
        raise AssertionError("folded graph is disconnected")

    def _end(self, v, letter, e):
        """Other end of edge ``e`` read from ``v`` along ``letter``, with its annotation."""
        s, _, d, ann = self.edges[e]
        if letter > 0:
            return d, ann
        return s, invert_codes(ann)

    def fold(self):
        while self.pending:
            v, letter = self.pending.popleft()
            if v not in self.at:
                continue
            bucket = self.ends[v][letter]
            while len(bucket) >= 2 and v in self.at:
                it = iter(bucket)
                e1, e2 = next(it), next(it)
                o1, s1 = self._end(v, letter, e1)
                o2, s2 = self._end(v, letter, e2)
                self._fold_pair(v, o1, s1, e1, o2, s2, e2)
                bucket = self.ends[v][letter] if v in self.at else {}

    def _fold_pair(self, v, o1, s1, e1, o2, s2, e2):
        if o1 == o2:
            if s1 != s2 and self.track_kernel:
                p = self.path_annotations(v)
                self.kernel.append(_mul(p, s1, invert_codes(s2), invert_codes(p)))
            self._remove_edge(e2)
            return
        keep, drop = o1, o2
        if drop == 0 or (keep != 0 and len(self.at[drop]) > len(self.at[keep])):
            keep, drop = o2, o1
            s1, s2 = s2, s1
            e1, e2 = e2, e1
        t = _mul(invert_codes(s1), s2)
        t_inv = invert_codes(t)
        # e2 would fold onto e1 anyway; drop it first so it is not re-indexed
        self._remove_edge(e2)
        moved = list(self.at[drop])
        for e in moved:
            self._detach(e)
            edge = self.edges[e]
            if edge[0] == drop:
                edge[3] = _mul(t, edge[3])
                edge[0] = keep
            if edge[2] == drop:
                edge[3] = _mul(edge[3], t_inv)
                edge[2] = keep
        del self.at[drop]
        self.ends.pop(drop, None)
        self.uf.union_into(keep, drop)
        for e in moved:
            self._attach(e)

    def prune(self, keep_base=True):
        """Iteratively delete vertices of degree at most one."""
        stack = sorted(self.at)
        while stack:
            v = stack.pop()
            if v not in self.at or (keep_base and v == 0):
                continue
            ends = self.half_edges(v)
            if len(ends) > 1:
                continue
            for _, other, _, e in ends:
                self._remove_edge(e)
                stack.append(other)
            del self.at[v]


@dataclass(frozen=True, eq=False)
class CoreGraph:
    """A folded, basepointed graph whose basepoint loops spell a subgroup.

    Vertices are ``0..n_vertices-1`` with basepoint ``0``. Each edge is
    ``(src, generator index, dst)`` with a positive label; ``annotations[i]``
    is a word over ``gen_alphabet`` (the subgroup generators) whose value
    under the generating tuple equals the label of any closed path using the
    edge in the same position.
    """

    alphabet: Alphabet
    n_vertices: int
    edges: tuple
    annotations: tuple
    gen_alphabet: Alphabet
    _out: dict = field(repr=False, compare=False)

    basepoint = 0

    @property
    def rank(self) -> int:
        if self.n_vertices == 0:
            return 0
        return len(self.edges) - self.n_vertices + 1

    def degree(self, v: int) -> int:
        return sum((s == v) + (d == v) for s, _, d in self.edges)

    def step(self, v: int, code: int):
        """Follow the edge leaving ``v`` reading ``code``: ``(target, edge index, forward)`` or None."""
        return self._out.get((v, code))

    def read(self, codes):
        """Walk ``codes`` from the basepoint; return the final vertex or None."""
        v = 0
        for c in codes:
            nxt = self._out.get((v, c))
            if nxt is None:
                return None
            v = nxt[0]
        return v

    def is_folded(self) -> bool:
        keys = []
        for s, x, d in self.edges:
            keys.append((s, x + 1))
            keys.append((d, -(x + 1)))
        return len(keys) == len(set(keys))

    def preimage(self, w: Word) -> Word:
        """A word in the subgroup generators evaluating to ``w``."""
        if w.alphabet != self.alphabet:
            raise ValueError("word is over the wrong alphabet")
        v = 0
        out = []
        for c in w.codes:
            nxt = self._out.get((v, c))
            if nxt is None:
                raise NotMemberError(f"{w} is not in the subgroup")
            v, e, forward = nxt
            ann = self.annotations[e]
            out.extend(ann if forward else invert_codes(ann))
        if v != 0:
            raise NotMemberError(f"{w} is not in the subgroup")
        return Word(self.gen_alphabet, out)

    def spanning_tree(self):
        """BFS tree from the basepoint: (parent edge per vertex, path codes per vertex)."""
        paths = {0: ()}
        tree_edges = set()
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for i, (s, x, d) in enumerate(self.edges):
                for a, b, c in ((s, d, x + 1), (d, s, -(x + 1))):
                    if a == v and b not in paths:
                        paths[b] = paths[v] + (c,)
                        tree_edges.add(i)
                        queue.append(b)
        return tree_edges, paths

    def __repr__(self) -> str:
        body = ", ".join(f"{s}-{self.alphabet.names[x]}->{d}" for s, x, d in self.edges)
        return f"CoreGraph(vertices={self.n_vertices}, rank={self.rank}, edges=[{body}])"


def _build_core(alphabet, gen_alphabet, gens_codes, track_kernel=False, keep_base=True):
    folder = _Folder(gens_codes, track_kernel=track_kernel)
    folder.fold()
    folder.prune(keep_base=keep_base)
    order = {}
    queue = deque()
    if 0 in folder.at:
        order[0] = 0
        queue.append(0)
    while queue:
        v = queue.popleft()
        for _, o, _, _ in folder.half_edges(v):
            if o not in order:
                order[o] = len(order)
                queue.append(o)
    # components not containing the basepoint only survive when keep_base is False
    for v in sorted(folder.at):
        if v not in order:
            order[v] = len(order)
            queue.append(v)
            while queue:
                u = queue.popleft()
                for _, o, _, _ in folder.half_edges(u):
                    if o not in order:
                        order[o] = len(order)
                        queue.append(o)
    edges = []
    anns = []
    for e in sorted(folder.edges):
        s, x, d, ann = folder.edges[e]
        edges.append((order[s], x - 1, order[d]))
        anns.append(ann)
    out = {}
    for i, (s, x, d) in enumerate(edges):
        out[(s, x + 1)] = (d, i, True)
        out[(d, -(x + 1))] = (s, i, False)
    core = CoreGraph(alphabet, len(order), tuple(edges), tuple(anns), gen_alphabet, out)
    return core, folder.kernel


def _default_gen_alphabet(n):
    return Alphabet([f"s{i + 1}" for i in range(n)])


def core_of(gens, alphabet: Alphabet | None = None, gen_alphabet: Alphabet | None = None) -> CoreGraph:
    """Fold the bouquet of ``gens`` into the core graph of the subgroup they generate."""
    gens = list(gens)
    if alphabet is None:
        if not gens:
            raise ValueError("an alphabet is required when no generators are given")
        alphabet = gens[0].alphabet
    for w in gens:
        if w.alphabet != alphabet:
            raise ValueError("all generators must be over one alphabet")
    if gen_alphabet is None:
        gen_alphabet = _default_gen_alphabet(len(gens))
    core, _ = _build_core(alphabet, gen_alphabet, [w.codes for w in gens])
    return core


def image_core(f: Homomorphism) -> CoreGraph:
    """Core graph of Im(f), annotated by words over f's domain."""
    core, _ = _build_core(f.codomain, f.domain, f.image_codes)
    return core


def member(c: CoreGraph, w: Word) -> bool:
    return c.read(w.codes) == 0


def rank(c: CoreGraph) -> int:
    return c.rank


def _basis_alphabet(r):
    return Alphabet([f"b{i + 1}" for i in range(r)])


def basis(c: CoreGraph) -> list[Word]:
    """Free basis read off a BFS spanning tree (one element per non-tree edge)."""
    tree, paths = c.spanning_tree()
    out = []
    for i, (s, x, d) in enumerate(c.edges):
        if i in tree:
            continue
        codes = paths[s] + (x + 1,) + invert_codes(paths[d])
        out.append(Word(c.alphabet, codes))
    return out


def express(c: CoreGraph, w: Word) -> Word:
    """Write ``w`` as a word in ``basis(c)`` (alphabet ``b1, b2, ...``)."""
    tree, _ = c.spanning_tree()
    index = {}
    for i in range(len(c.edges)):
        if i not in tree:
            index[i] = len(index) + 1
    v = 0
    out = []
    for code in w.codes:
        nxt = c.step(v, code)
        if nxt is None:
            raise NotMemberError(f"{w} is not in the subgroup")
        v, e, forward = nxt
        if e in index:
            out.append(index[e] if forward else -index[e])
    if v != 0:
        raise NotMemberError(f"{w} is not in the subgroup")
    return Word(_basis_alphabet(len(index)), out)


def evaluate(expression: Word, words) -> Word:
    """Substitute ``words[i]`` for the i-th letter of ``expression``."""
    words = list(words)
    if not words:
        if expression.codes:
            raise ValueError("non-empty expression with no words to substitute")
        raise ValueError("cannot infer the target alphabet from an empty list")
    alphabet = words[0].alphabet
    return Word(alphabet, apply_codes(tuple(w.codes for w in words), expression.codes))


def is_injective(f: Homomorphism) -> bool:
    return image_core(f).rank == len(f.domain)


def kernel_witness(f: Homomorphism) -> Word:
    """A non-trivial reduced word in the kernel of ``f``."""
    core, candidates = _build_core(f.codomain, f.domain, f.image_codes, track_kernel=True)
    if core.rank == len(f.domain):
        raise InjectiveError("the homomorphism is injective")
    for codes in candidates:
        if codes and not apply_codes(f.image_codes, codes):
            return Word(f.domain, codes)
    # fallback: the kernel is non-trivial, so the shortlex search terminates
    n = 1
    while True:
        for codes in iter_reduced_codes(len(f.domain), n, n):
            if not apply_codes(f.image_codes, codes):
                return Word(f.domain, codes)
        n += 1


def common_kernel_element(c: Word, d: Word) -> Word:
    """A non-trivial element lying in the normal closures of both ``c`` and ``d``.

    If ``c`` and ``d`` commute they are powers ``x**k``, ``x**l`` of a common
    root and ``x**(k*l)`` is returned; otherwise their commutator.
    """
    if not c or not d:
        raise ValueError("kernel elements must be non-trivial")
    if concat(c, d) == concat(d, c):
        x, k = primitive_root(c)
        y, l = primitive_root(d)
        if y != x:
            assert y == invert(x)
        return x ** (k * l)
    return concat(concat(c, d), concat(invert(c), invert(d)))


def common_kernel_witness(g: Homomorphism, h: Homomorphism) -> Word:
    if g.domain != h.domain or g.codomain != h.codomain:
        raise ValueError("g and h must share domain and codomain")
    try:
        c = kernel_witness(g)
        d = kernel_witness(h)
    except InjectiveError:
        raise NotBothNonInjectiveError("both maps must be non-injective") from None
    return common_kernel_element(c, d)


def cyclic_core(gens, alphabet: Alphabet) -> CoreGraph:
    """Core graph with every degree-1 vertex removed, basepoint included."""
    core, _ = _build_core(alphabet, _default_gen_alphabet(len(gens)), [w.codes for w in gens], keep_base=False)
    return core


def conjugacy_separated(g: Homomorphism, h: Homomorphism) -> bool:
    """True iff Im(g) meets every conjugate of Im(h) trivially.

    Computed from the pullback (label product) of the cyclic cores: a
    component of the product containing a cycle gives a non-trivial element
    conjugate into both images, and conversely.
    """
    if g.codomain != h.codomain:
        raise ValueError("g and h must share a codomain")
    a = cyclic_core(g.images, g.codomain)
    b = cyclic_core(h.images, h.codomain)
    if not a.edges or not b.edges:
        return True
    by_label = defaultdict(list)
    for s, x, d in b.edges:
        by_label[x].append((s, d))
    uf = _UnionFind()
    for s, x, d in a.edges:
        for s2, d2 in by_label.get(x, ()):
            u, v = (s, s2), (d, d2)
            ru, rv = uf.find(u), uf.find(v)
            if ru == rv:
                # an edge inside an already connected component closes a cycle
                return False
            uf.union_into(ru, rv)
    return True
