"""Equalisers of pairs of free group homomorphisms.

Two routes to ``Eq(g, h)``:

* :func:`brute_force_eq` lists every solution up to a length bound. It is
  exhaustive, implemented as a meet-in-the-middle join: a reduced word ``ps``
  solves ``c1 g(x) c2 = d1 h(x) d2`` iff
  ``h(p)^-1 d1^-1 c1 g(p) = h(s) d2 c2^-1 g(s)^-1``.
* :func:`basis_from_rank` grows the derived graph of ``phi = h o g^-1`` from
  the identity until its edge/vertex count matches the supplied rank, prunes
  it, and reads a basis off a spanning tree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import BudgetExceededError, NotInImageError, NotInjectiveError, NotMemberError
from .kernels import apply_codes, half_keys, invert_codes, reduce_codes
from .stallings import CoreGraph, core_of, image_core, is_injective, member
from .words import Homomorphism, Word, apply_hom, shortlex_key

DEFAULT_BUDGET = 100_000


def search_solutions(
    g: Homomorphism,
    h: Homomorphism,
    bound: int,
    c1: Word | None = None,
    c2: Word | None = None,
    d1: Word | None = None,
    d2: Word | None = None,
    include_trivial: bool = False,
) -> list[Word]:
    """All reduced ``x`` with ``|x| <= bound`` and ``c1 g(x) c2 = d1 h(x) d2``, in shortlex order."""
    if g.domain != h.domain or g.codomain != h.codomain:
        raise ValueError("g and h must share domain and codomain")
    one = ()
    c1 = c1.codes if c1 is not None else one
    c2 = c2.codes if c2 is not None else one
    d1 = d1.codes if d1 is not None else one
    d2 = d2.codes if d2 is not None else one
    left_mid = reduce_codes(invert_codes(d1) + c1)
    right_mid = reduce_codes(d2 + invert_codes(c2))
    n = len(g.domain)
    gi, hi = g.image_codes, h.image_codes
    prefix_tables = {}
    suffix_tables = {}

    def prefixes(k):
        if k not in prefix_tables:
            prefix_tables[k] = half_keys(gi, hi, n, k, left_mid, False)
        return prefix_tables[k]

    def suffixes(k):
        if k not in suffix_tables:
            suffix_tables[k] = half_keys(gi, hi, n, k, right_mid, True)
        return suffix_tables[k]

    found = []
    if include_trivial and left_mid == right_mid:
        found.append(())
    for length in range(1, bound + 1):
        plen = (length + 1) // 2
        slen = length - plen
        sufs = suffixes(slen)
        batch = []
        for key, ps in prefixes(plen).items():
            ss = sufs.get(key)
            if not ss:
                continue
            for p in ps:
                last = p[-1]
                for s in ss:
                    if s and s[0] == -last:
                        continue
                    batch.append(p + s)
        batch.sort(key=shortlex_key)
        found.extend(batch)
    return [Word._trusted(g.domain, w) for w in found]


@dataclass(frozen=True, eq=False)
class EqReport:
    g: Homomorphism
    h: Homomorphism
    solutions: tuple
    bound: int
    core: CoreGraph

    @property
    def rank_lower_bound(self) -> int:
        return self.core.rank

    @property
    def nontrivial(self) -> bool:
        return bool(self.solutions)


def _generated_cores(words, alphabet):
    """Yield ``(length, core)`` for the subgroup generated by the words up to each length.

    ``words`` must be in shortlex order. Words already in the current subgroup
    are skipped, so only a handful of folds are needed however many words
    there are.
    """
    gens = []
    core = core_of(gens, alphabet=alphabet)
    length = 0
    for w in words:
        while len(w) > length:
            yield length, core
            length += 1
        if not member(core, w):
            gens.append(w)
            core = core_of(gens, alphabet=alphabet)
    yield length, core


def _core_at(words, alphabet, bound):
    core = None
    for length, core in _generated_cores(words, alphabet):
        if length >= bound:
            break
    return core


def brute_force_eq(g: Homomorphism, h: Homomorphism, bound: int) -> EqReport:
    """Every non-trivial reduced ``x`` with ``|x| <= bound`` and ``g(x) = h(x)``."""
    sols = tuple(search_solutions(g, h, bound))
    return EqReport(g, h, sols, bound, _core_at(sols, g.domain, bound))


def _oriented(g: Homomorphism, h: Homomorphism):
    """Return ``(g, h, swapped)`` with the first map injective."""
    if g.domain != h.domain or g.codomain != h.codomain:
        raise ValueError("g and h must share domain and codomain")
    if is_injective(g):
        return g, h, False
    if is_injective(h):
        return h, g, True
    raise NotInjectiveError("neither g nor h is injective")


def apply_phi(g: Homomorphism, h: Homomorphism, w: Word) -> Word:
    """``h(g^-1(w))`` for ``w`` in the image of the injective map ``g``."""
    if not is_injective(g):
        raise NotInjectiveError("g must be injective")
    try:
        pre = image_core(g).preimage(w)
    except NotMemberError:
        raise NotInImageError(f"{w} is not in the image of g") from None
    return apply_hom(h, pre)


def derived_step(g: Homomorphism, h: Homomorphism, u: tuple, code: int) -> tuple:
    """Neighbour of vertex ``u`` along label ``alpha_i^{±1}`` in the derived graph.

    With ``alpha_i = g(x_i)`` and ``phi(alpha_i) = h(x_i)``, the edge
    ``u -> v`` labelled ``alpha_i`` exists iff ``u = phi(alpha_i) v alpha_i^-1``,
    i.e. ``v = h(x_i)^-1 u g(x_i)``.
    """
    i = abs(code) - 1
    gi, hi = g.image_codes[i], h.image_codes[i]
    if code > 0:
        return reduce_codes(invert_codes(hi) + u + gi)
    return reduce_codes(hi + u + invert_codes(gi))


@dataclass(frozen=True, eq=False)
class DerivedGraph:
    """The core of the derived graph at the identity vertex.

    ``vertices[k]`` is the element of the codomain (as codes) of vertex ``k``;
    vertex 0 is the identity. ``edges`` are ``(src, i, dst)`` with
    ``src = phi(alpha_i) dst alpha_i^-1``. ``g`` is the injective map used
    (``swapped`` records whether the caller's maps were exchanged).
    """

    g: Homomorphism
    h: Homomorphism
    swapped: bool
    vertices: tuple
    edges: tuple
    explored: int

    basepoint = 0

    @property
    def rank(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def degree(self, v: int) -> int:
        return sum((s == v) + (d == v) for s, _, d in self.edges)


def build_derived_graph(
    g: Homomorphism, h: Homomorphism, r: int, budget: int = DEFAULT_BUDGET, trace: list | None = None
) -> DerivedGraph:
    """Grow the derived graph from the identity until ``|E| - |V| = r - 1``, then prune.

    Exploration is breadth-first; every vertex is expanded along each
    ``alpha_i`` in both directions, and the counter is checked after every
    new edge. If ``trace`` is a list, the counter after each new edge is
    appended to it.
    """
    if r < 1:
        raise ValueError("rank must be at least 1 (rank 0 has the empty basis)")
    g, h, swapped = _oriented(g, h)
    k = len(g.domain)
    ids = {(): 0}
    verts = [()]
    edges = {}  # (src, i) -> dst
    queue = deque([0])

    def target_reached():
        return len(edges) - len(verts) == r - 1

    done = target_reached()
    while not done:
        if not queue:
            raise BudgetExceededError(
                f"derived graph component is finite with rank {len(edges) - len(verts) + 1} < {r}"
            )
        v = queue.popleft()
        u = verts[v]
        for i in range(1, k + 1):
            for code in (i, -i):
                w = derived_step(g, h, u, code)
                if w not in ids:
                    if len(verts) >= budget:
                        raise BudgetExceededError(f"vertex budget {budget} exhausted before reaching rank {r}")
                    ids[w] = len(verts)
                    verts.append(w)
                    queue.append(ids[w])
                t = ids[w]
                key = (v, i - 1) if code > 0 else (t, i - 1)
                dst = t if code > 0 else v
                if key in edges:
                    continue
                edges[key] = dst
                if trace is not None:
                    trace.append(len(edges) - len(verts))
                if target_reached():
                    done = True
                    break
            if done:
                break
    explored = len(verts)
    edge_list = [(s, i, d) for (s, i), d in edges.items()]
    # prune degree-1 vertices other than the identity
    alive = set(range(len(verts)))
    deg = [0] * len(verts)
    for s, _, d in edge_list:
        deg[s] += 1
        deg[d] += 1
    incident = [[] for _ in verts]
    for idx, (s, _, d) in enumerate(edge_list):
        incident[s].append(idx)
        if d != s:
            incident[d].append(idx)
    removed = set()
    stack = [v for v in alive if v != 0 and deg[v] <= 1]
    while stack:
        v = stack.pop()
        if v not in alive or v == 0 or deg[v] > 1:
            continue
        alive.discard(v)
        for idx in incident[v]:
            if idx in removed:
                continue
            removed.add(idx)
            s, _, d = edge_list[idx]
            other = d if s == v else s
            deg[s] -= 1
            deg[d] -= 1
            if other != 0 and other in alive and deg[other] <= 1:
                stack.append(other)
    kept = sorted(alive)
    renum = {old: new for new, old in enumerate(kept)}
    final_edges = tuple(
        (renum[s], i, renum[d]) for idx, (s, i, d) in enumerate(edge_list) if idx not in removed
    )
    graph = DerivedGraph(g, h, swapped, tuple(verts[v] for v in kept), final_edges, explored)
    if graph.rank != r:
        raise AssertionError(f"pruning changed the rank: {graph.rank} != {r}")
    if any(graph.degree(v) <= 1 for v in range(1, len(graph.vertices))):
        raise AssertionError("pruned derived graph still has a hair")
    return graph


def derived_graph_basis(graph: DerivedGraph) -> list[Word]:
    """Read a basis of the equaliser off a spanning tree of ``graph``.

    Loop words are words in the ``alpha_i = g(x_i)``; since ``g`` is injective,
    ``g^-1`` sends ``alpha_i`` back to ``x_i``, so the same word over the
    domain generators is the basis element.
    """
    adj = [[] for _ in graph.vertices]
    for idx, (s, i, d) in enumerate(graph.edges):
        adj[s].append((idx, i + 1, d))
        adj[d].append((idx, -(i + 1), s))
    paths = {0: ()}
    tree = set()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for idx, code, o in adj[v]:
            if o not in paths:
                paths[o] = paths[v] + (code,)
                tree.add(idx)
                queue.append(o)
    out = []
    for idx, (s, i, d) in enumerate(graph.edges):
        if idx in tree:
            continue
        codes = paths[s] + (i + 1,) + invert_codes(paths[d])
        out.append(Word(graph.g.domain, codes))
    return out


def basis_from_rank(g: Homomorphism, h: Homomorphism, r: int, budget: int = DEFAULT_BUDGET) -> list[Word]:
    """A basis of ``Eq(g, h)`` given its rank ``r`` (one of the maps must be injective)."""
    if r == 0:
        _oriented(g, h)
        return []
    graph = build_derived_graph(g, h, r, budget)
    out = derived_graph_basis(graph)
    for b in out:
        if apply_codes(g.image_codes, b.codes) != apply_codes(h.image_codes, b.codes):
            raise AssertionError(f"basis element {b} is not in the equaliser")
    return out


def eq_core_consistency(basis: list[Word], report: EqReport) -> bool:
    """True iff every reported solution lies in ``<basis>`` and every basis element solves."""
    core = core_of(basis, alphabet=report.g.domain)
    if not all(member(core, x) for x in report.solutions):
        return False
    return all(apply_hom(report.g, b) == apply_hom(report.h, b) for b in basis)


def stable_rank(g: Homomorphism, h: Homomorphism, bound: int, window: int = 2) -> int | None:
    """Rank of the brute-force equaliser core if unchanged over the last ``window`` bounds."""
    sols = search_solutions(g, h, bound)
    ranks = {length: core.rank for length, core in _generated_cores(sols, g.domain)}
    last = max(ranks)
    seen = {ranks[min(b, last)] for b in range(max(0, bound - window), bound + 1)}
    return seen.pop() if len(seen) == 1 else None


def brute_force_oracle(bound: int):
    """An ``eq_oracle`` for :func:`eqfree.reductions.decide_gpcp_ci`: shortest solution or None."""

    def oracle(instance):
        sols = search_solutions(instance.g, instance.h, bound)
        return sols[0] if sols else None

    return oracle


def rank_oracle(rank: int, budget: int = DEFAULT_BUDGET):
    """An ``eq_oracle`` that trusts a supplied rank of the equaliser."""

    def oracle(instance):
        basis = basis_from_rank(instance.g, instance.h, rank, budget)
        return basis[0] if basis else None

    return oracle


def fixed_word(g: Homomorphism, h: Homomorphism, w: Word) -> bool:
    """Whether ``phi = h o g^-1`` fixes ``w`` (which must lie in Im(g))."""
    return apply_phi(g, h, w) == w


__all__ = [
    "DEFAULT_BUDGET",
    "DerivedGraph",
    "EqReport",
    "apply_phi",
    "basis_from_rank",
    "brute_force_eq",
    "brute_force_oracle",
    "build_derived_graph",
    "derived_graph_basis",
    "derived_step",
    "eq_core_consistency",
    "fixed_word",
    "rank_oracle",
    "search_solutions",
    "stable_rank",
]
