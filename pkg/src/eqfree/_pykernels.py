"""Pure-Python implementations of the hot word kernels.

Words are tuples of signed generator codes: generator ``i`` (0-based) is
``i + 1`` and its inverse is ``-(i + 1)``. The compiled module
``eqfree._ckernels`` exposes the same functions with the same semantics.
"""


def reduce_codes(seq):
    """Return the freely reduced form of a sequence of codes as a tuple."""
    out = []
    for c in seq:
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def invert_codes(word):
    return tuple(-c for c in reversed(word))


def apply_codes(images, word):
    """Image of ``word`` under the homomorphism with generator images ``images``."""
    out = []
    for c in word:
        img = images[c - 1] if c > 0 else invert_codes(images[-c - 1])
        for d in img:
            if out and out[-1] == -d:
                out.pop()
            else:
                out.append(d)
    return tuple(out)


def letter_order(ngens):
    """Signed codes in shortlex order: a < a' < b < b' < ..."""
    codes = []
    for i in range(1, ngens + 1):
        codes.append(i)
        codes.append(-i)
    return codes


def _push(stack, img):
    for d in img:
        if stack and stack[-1] == -d:
            stack.pop()
        else:
            stack.append(d)


def half_keys(g_images, h_images, ngens, length, middle, suffix):
    """Bucket every reduced word of exactly ``length`` letters by a key.

    For prefixes (``suffix`` false) the key of ``p`` is the reduced form of
    ``h(p)^-1 middle g(p)``; for suffixes it is ``h(s) middle g(s)^-1``. A
    reduced word ``ps`` then solves ``c1 g(x) c2 = d1 h(x) d2`` exactly when
    the prefix key (with ``middle = d1^-1 c1``) equals the suffix key (with
    ``middle = d2 c2^-1``).
    """
    g_img = {}
    h_img = {}
    for i in range(ngens):
        g_img[i + 1] = tuple(g_images[i])
        g_img[-i - 1] = invert_codes(g_images[i])
        h_img[i + 1] = tuple(h_images[i])
        h_img[-i - 1] = invert_codes(h_images[i])
    middle = tuple(middle)
    order = letter_order(ngens)
    table = {}

    def key_of(gs, hs):
        if suffix:
            buf = list(hs)
            _push(buf, middle)
            _push(buf, invert_codes(gs))
        else:
            buf = list(invert_codes(hs))
            _push(buf, middle)
            _push(buf, gs)
        return tuple(buf)

    if length == 0:
        table[key_of((), ())] = [()]
        return table

    def rec(word, gs, hs):
        last = word[-1] if word else 0
        for c in order:
            if c == -last:
                continue
            g2 = list(gs)
            _push(g2, g_img[c])
            h2 = list(hs)
            _push(h2, h_img[c])
            w2 = word + (c,)
            if len(w2) == length:
                table.setdefault(key_of(g2, h2), []).append(w2)
            else:
                rec(w2, g2, h2)

    rec((), [], [])
    return table
