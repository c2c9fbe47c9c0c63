"""Free groups: alphabets, letters, freely reduced words and homomorphisms.

Every :class:`Word` is stored freely reduced. Internally a word is a tuple of
signed codes (generator ``i`` is ``i + 1``, its inverse ``-(i + 1)``); the
text form writes generator names separated by spaces, inverses with a
trailing apostrophe, and the empty word as ``1``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from typing import NamedTuple

from .errors import AlphabetMismatchError, ParseError
from .kernels import apply_codes, invert_codes, letter_order, reduce_codes

_FORBIDDEN = set("'()|*;:,")
_RESERVED = {"1", "->"}


class Letter(NamedTuple):
    generator: int
    sign: int

    @property
    def code(self) -> int:
        return self.sign * (self.generator + 1)

    @classmethod
    def from_code(cls, code: int) -> Letter:
        return cls(abs(code) - 1, 1 if code > 0 else -1)

    def inverse(self) -> Letter:
        return Letter(self.generator, -self.sign)


def _as_code(x) -> int:
    if isinstance(x, Letter):
        if x.sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {x.sign}")
        return x.code
    c = int(x)
    if c == 0:
        raise ValueError("0 is not a letter code")
    return c


class Alphabet:
    """An ordered tuple of distinct generator names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for name in names:
            if not isinstance(name, str) or not name:
                raise ValueError(f"generator names must be non-empty strings, got {name!r}")
            if name in _RESERVED or any(ch.isspace() or ch in _FORBIDDEN for ch in name):
                raise ValueError(f"invalid generator name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def extend(self, *names: str) -> Alphabet:
        return Alphabet(self.names + names)

    def letter(self, name: str, sign: int = 1) -> Letter:
        return Letter(self.index(name), sign)

    def generator(self, name: str) -> Word:
        return Word(self, (self.index(name) + 1,))

    def gens(self) -> list[Word]:
        return [Word._trusted(self, (i + 1,)) for i in range(len(self))]

    def identity(self) -> Word:
        return Word._trusted(self, ())

    def token(self, code: int) -> str:
        name = self.names[abs(code) - 1]
        return name if code > 0 else name + "'"

    def parse_token(self, tok: str) -> int:
        sign = 1
        name = tok
        if tok.endswith("'"):
            sign = -1
            name = tok[:-1]
        if name not in self._index:
            raise KeyError(f"unknown generator {name!r}")
        return sign * (self._index[name] + 1)

    def parse(self, text: str) -> Word:
        """Parse the whitespace-separated word syntax (``1`` is the empty word)."""
        tokens = text.split()
        if tokens == ["1"]:
            return self.identity()
        if not tokens:
            raise ParseError("empty word text; write 1 for the identity")
        codes = []
        for tok in tokens:
            if tok == "1":
                raise ParseError(f"'1' may only appear alone, in {text!r}")
            try:
                codes.append(self.parse_token(tok))
            except KeyError as exc:
                raise ParseError(f"{exc.args[0]} in word {text!r}") from None
        return Word(self, codes)

    def check_code(self, code: int) -> None:
        if code == 0 or abs(code) > len(self.names):
            raise ValueError(f"letter code {code} out of range for {self!r}")


class Word:
    """A freely reduced word over an :class:`Alphabet`."""

    __slots__ = ("alphabet", "codes")

    def __init__(self, alphabet: Alphabet, letters: Iterable = ()):
        codes = [_as_code(x) for x in letters]
        for c in codes:
            alphabet.check_code(c)
        self.alphabet = alphabet
        self.codes = reduce_codes(codes)

    @classmethod
    def _trusted(cls, alphabet: Alphabet, codes: tuple) -> Word:
        w = object.__new__(cls)
        w.alphabet = alphabet
        w.codes = codes
        return w

    @property
    def letters(self) -> tuple[Letter, ...]:
        return tuple(Letter.from_code(c) for c in self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __bool__(self) -> bool:
        return bool(self.codes)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.codes == other.codes and self.alphabet == other.alphabet

    def __hash__(self) -> int:
        return hash(self.codes)

    def __str__(self) -> str:
        if not self.codes:
            return "1"
        return " ".join(self.alphabet.token(c) for c in self.codes)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __mul__(self, other: Word) -> Word:
        return concat(self, other)

    def __pow__(self, n: int) -> Word:
        base = self if n >= 0 else invert(self)
        out = self.alphabet.identity()
        for _ in range(abs(n)):
            out = concat(out, base)
        return out

    def inverse(self) -> Word:
        return invert(self)

    def is_cyclically_reduced(self) -> bool:
        return len(self.codes) < 2 or self.codes[0] != -self.codes[-1]


class Homomorphism:
    """A homomorphism F(domain) -> F(codomain) given by generator images."""

    __slots__ = ("domain", "codomain", "images", "image_codes")

    def __init__(self, domain: Alphabet, codomain: Alphabet, images: Sequence[Word]):
        images = tuple(images)
        if len(images) != len(domain):
            raise ValueError(f"expected {len(domain)} images, got {len(images)}")
        for w in images:
            if w.alphabet != codomain:
                raise AlphabetMismatchError("image word is not over the codomain alphabet")
        self.domain = domain
        self.codomain = codomain
        self.images = images
        self.image_codes = tuple(w.codes for w in images)

    @classmethod
    def from_strings(cls, domain: Alphabet, codomain: Alphabet, images: Mapping[str, str]) -> Homomorphism:
        missing = [n for n in domain if n not in images]
        if missing:
            raise ValueError(f"no image given for {missing}")
        return cls(domain, codomain, [codomain.parse(images[n]) for n in domain])

    @classmethod
    def identity(cls, alphabet: Alphabet) -> Homomorphism:
        return cls(alphabet, alphabet, alphabet.gens())

    def __call__(self, w: Word) -> Word:
        return apply_hom(self, w)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Homomorphism)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.image_codes == other.image_codes
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.image_codes))

    def __repr__(self) -> str:
        body = "; ".join(f"{n} -> {w}" for n, w in zip(self.domain, self.images))
        return f"Homomorphism({body})"

    def image(self, name: str) -> Word:
        return self.images[self.domain.index(name)]


def free_reduce(alphabet: Alphabet, raw: Iterable) -> Word:
    """Freely reduce a sequence of letters (or signed codes) over ``alphabet``."""
    return Word(alphabet, raw)


def concat(u: Word, v: Word) -> Word:
    if u.alphabet != v.alphabet:
        raise AlphabetMismatchError("cannot multiply words over different alphabets")
    return Word._trusted(u.alphabet, reduce_codes(u.codes + v.codes))


def invert(w: Word) -> Word:
    return Word._trusted(w.alphabet, invert_codes(w.codes))


def apply_hom(f: Homomorphism, w: Word) -> Word:
    if w.alphabet != f.domain:
        raise AlphabetMismatchError("word is not over the homomorphism's domain")
    return Word._trusted(f.codomain, apply_codes(f.image_codes, w.codes))


def product(alphabet: Alphabet, words: Iterable[Word]) -> Word:
    codes: list[int] = []
    for w in words:
        if w.alphabet != alphabet:
            raise AlphabetMismatchError("word is not over the expected alphabet")
        codes.extend(w.codes)
    return Word._trusted(alphabet, reduce_codes(codes))


def cyclic_decomposition(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``u c u^-1`` with ``c`` cyclically reduced; returns ``(u, c)``."""
    codes = w.codes
    i, j = 0, len(codes) - 1
    while i < j and codes[i] == -codes[j]:
        i += 1
        j -= 1
    return Word._trusted(w.alphabet, codes[:i]), Word._trusted(w.alphabet, codes[i : j + 1])


def primitive_root(w: Word) -> tuple[Word, int]:
    """Return ``(root, k)`` with ``w = root**k``, ``k`` maximal and ``root`` not a proper power."""
    if not w.codes:
        raise ValueError("the identity has no primitive root")
    u, c = cyclic_decomposition(w)
    n = len(c.codes)
    for p in range(1, n + 1):
        if n % p == 0 and c.codes[:p] * (n // p) == c.codes:
            period = Word._trusted(w.alphabet, c.codes[:p])
            return concat(concat(u, period), invert(u)), n // p
    raise AssertionError("unreachable")


def shortlex_key(codes: Sequence[int]) -> tuple:
    return (len(codes), tuple(2 * (abs(c) - 1) + (c < 0) for c in codes))


def iter_reduced_codes(ngens: int, max_len: int, min_len: int = 0) -> Iterator[tuple]:
    """All reduced code tuples of length in ``[min_len, max_len]`` in shortlex order."""
    order = letter_order(ngens)
    level = [()]
    for n in range(max_len + 1):
        if n >= min_len:
            yield from level
        if n == max_len:
            break
        nxt = []
        for w in level:
            last = w[-1] if w else 0
            for c in order:
                if c != -last:
                    nxt.append(w + (c,))
        level = nxt


def iter_reduced_words(alphabet: Alphabet, max_len: int, min_len: int = 0) -> Iterator[Word]:
    for codes in iter_reduced_codes(len(alphabet), max_len, min_len):
        yield Word._trusted(alphabet, codes)
