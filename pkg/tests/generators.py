"""Random instance generators shared by the unit and acceptance tests."""

from eqfree import Alphabet, Homomorphism, Word, is_injective
from eqfree.rational import Automaton

from oracles import letters, naive_apply, naive_inverse, naive_reduce, random_images, random_word

KINDS = ("random", "conjugate", "equal", "partial")


def alphabet(n, prefix):
    return Alphabet([f"{prefix}{i + 1}" for i in range(n)])


def hom(images, dom, cod):
    return Homomorphism(dom, cod, [Word(cod, w) for w in images])


def random_injective(rng, m, k, max_len):
    while True:
        imgs = random_images(rng, m, k, max_len, 1)
        g = hom(imgs, alphabet(m, "x"), alphabet(k, "a"))
        if is_injective(g):
            return g


def injective_pair(rng, kind, m=2, k=2, max_len=3):
    """A pair ``(g, h)`` with ``g`` injective.

    ``conjugate`` sets ``h = c g c^-1`` with ``c = g(w)``, so the equaliser is the
    centraliser of ``w``; ``equal`` makes it the whole domain; ``partial`` keeps
    ``h(x1) = g(x1)`` and draws the other images afresh.
    """
    g = random_injective(rng, m, k, max_len)
    gi = g.image_codes
    if kind == "random":
        hi = random_images(rng, m, k, max_len, 1)
    elif kind == "conjugate":
        w = random_word(rng, m, 2, 1)
        c = naive_apply(gi, w)
        hi = [naive_reduce(c + x + naive_inverse(c)) for x in gi]
    elif kind == "equal":
        hi = list(gi)
    elif kind == "partial":
        hi = [gi[0]] + random_images(rng, m - 1, k, max_len, 1)
    else:
        raise ValueError(kind)
    return g, hom(hi, g.domain, g.codomain)


def random_expr(rng, depth=3):
    r = rng.random()
    if depth == 0 or r < 0.3:
        return rng.choice(["a", "a'", "b", "b'", "1"])
    if r < 0.55:
        return f"{random_expr(rng, depth - 1)} {random_expr(rng, depth - 1)}"
    if r < 0.8:
        return f"({random_expr(rng, depth - 1)}|{random_expr(rng, depth - 1)})"
    return f"({random_expr(rng, depth - 1)})*"


def random_automaton(rng, n_states, k=2, density=0.25):
    trans = set()
    for p in range(n_states):
        for c in letters(k):
            for q in range(n_states):
                if rng.random() < density / n_states * 2:
                    trans.add((p, c, q))
    acc = frozenset(q for q in range(n_states) if rng.random() < 0.4) or frozenset({n_states - 1})
    return Automaton(Alphabet("ab"[:k]), n_states, frozenset(trans), 0, acc)
