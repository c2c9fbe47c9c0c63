"""Instances of the PCP family and the marker reduction GPCP -> PCP.

The reduction adjoins two domain letters ``B``, ``E`` and a codomain letter
``#`` (renamed when the names are taken) and defines::

    g'(z) = #^-1 g(z) #      h'(z) = # h(z) #^-1      for z in the domain
    g'(B) = B # u1 #         h'(B) = B # v1 #^-1
    g'(E) = #^-1 u2 # E      h'(E) = # v2 # E

so that ``y`` solves ``u1 g(y) u2 = v1 h(y) v2`` iff ``B y E`` solves
``g'(x) = h'(x)``.
"""

from __future__ import annotations

import enum
from collections.abc import Callable
from dataclasses import dataclass, field

from .equaliser import search_solutions
from .errors import (
    HypothesesRefutedError,
    NotASolutionError,
    NotDecomposableError,
    NotInjectiveError,
    WrongShapeError,
)
from .stallings import conjugacy_separated, is_injective
from .words import Alphabet, Homomorphism, Letter, Word, apply_hom, concat, invert, product, shortlex_key


@dataclass(frozen=True)
class Markers:
    """Names of the marker letters; ``renamed`` is true when defaults collided."""

    begin: str = "B"
    end: str = "E"
    sharp: str = "#"
    renamed: bool = False


@dataclass(frozen=True, eq=False)
class PcpInstance:
    g: Homomorphism
    h: Homomorphism
    markers: Markers | None = field(default=None, compare=False)
    source: GpcpInstance | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.g.domain != self.h.domain or self.g.codomain != self.h.codomain:
            raise ValueError("g and h must share domain and codomain")

    @property
    def sigma(self) -> Alphabet:
        return self.g.domain

    @property
    def delta(self) -> Alphabet:
        return self.g.codomain


@dataclass(frozen=True, eq=False)
class GpcpInstance:
    base: PcpInstance
    u1: Word
    u2: Word
    v1: Word
    v2: Word

    def __post_init__(self):
        for w in (self.u1, self.u2, self.v1, self.v2):
            if w.alphabet != self.base.delta:
                raise ValueError("constants must be words over the codomain")

    @classmethod
    def make(cls, g, h, u1=None, u2=None, v1=None, v2=None) -> GpcpInstance:
        one = g.codomain.identity()
        return cls(PcpInstance(g, h), u1 or one, u2 or one, v1 or one, v2 or one)

    @property
    def g(self) -> Homomorphism:
        return self.base.g

    @property
    def h(self) -> Homomorphism:
        return self.base.h

    @property
    def sigma(self) -> Alphabet:
        return self.base.sigma

    @property
    def delta(self) -> Alphabet:
        return self.base.delta


@dataclass(frozen=True, eq=False)
class ElInstance:
    base: PcpInstance
    a: Letter
    omega: frozenset  # generator indices
    b: Letter

    def __post_init__(self):
        n = len(self.base.sigma)
        for letter in (self.a, self.b):
            if not 0 <= letter.generator < n:
                raise ValueError("extreme letter out of range")
        if not all(0 <= i < n for i in self.omega):
            raise ValueError("omega must be a subset of the domain generators")
        if len(self.omega) >= n:
            raise ValueError("omega must be a proper subset of the domain generators")

    def omega_names(self) -> list[str]:
        return [self.base.sigma.names[i] for i in sorted(self.omega)]


class FactorKind(enum.Enum):
    BXE = "BxE"
    INVERSE_BXE = "inverse-BxE"
    EINV_XE = "EinvXE"
    BXBINV = "BxBinv"


@dataclass(frozen=True)
class MarkerFactor:
    kind: FactorKind
    core: Word  # over the original domain
    word: Word  # the factor itself, over the reduced domain


def _fresh(default: str, taken: set, fallback: str) -> str:
    if default not in taken:
        return default
    name = fallback
    i = 1
    while name in taken:
        name = f"{fallback}_{i}"
        i += 1
    return name


def _markers_for(sigma: Alphabet, delta: Alphabet) -> Markers:
    taken = set(sigma) | set(delta)
    b = _fresh("B", taken, "__B")
    e = _fresh("E", taken | {b}, "__E")
    s = _fresh("#", taken | {b, e}, "__hash")
    return Markers(b, e, s, renamed=(b, e, s) != ("B", "E", "#"))


def _lift(w: Word, alphabet: Alphabet) -> Word:
    """Reinterpret a word over a prefix of ``alphabet``."""
    return Word._trusted(alphabet, w.codes)


def gpcp_to_pcp(I: GpcpInstance) -> PcpInstance:
    sigma, delta = I.sigma, I.delta
    m = _markers_for(sigma, delta)
    sigma2 = sigma.extend(m.begin, m.end)
    delta2 = delta.extend(m.begin, m.end, m.sharp)
    B = delta2.generator(m.begin)
    E = delta2.generator(m.end)
    S = delta2.generator(m.sharp)
    Si = invert(S)

    def word(*parts):
        return product(delta2, parts)

    g_imgs = [word(Si, _lift(w, delta2), S) for w in I.g.images]
    h_imgs = [word(S, _lift(w, delta2), Si) for w in I.h.images]
    g_imgs += [word(B, S, _lift(I.u1, delta2), S), word(Si, _lift(I.u2, delta2), S, E)]
    h_imgs += [word(B, S, _lift(I.v1, delta2), Si), word(S, _lift(I.v2, delta2), S, E)]
    g2 = Homomorphism(sigma2, delta2, g_imgs)
    h2 = Homomorphism(sigma2, delta2, h_imgs)
    return PcpInstance(g2, h2, markers=m, source=I)


def gpcp_to_el(I: GpcpInstance) -> ElInstance:
    reduced = gpcp_to_pcp(I)
    sigma2 = reduced.sigma
    return ElInstance(
        reduced,
        sigma2.letter(reduced.markers.begin),
        frozenset(range(len(I.sigma))),
        sigma2.letter(reduced.markers.end),
    )


def pcp_as_gpcp(I: PcpInstance) -> GpcpInstance:
    return GpcpInstance.make(I.g, I.h)


def verify_solution(I, x: Word, allow_trivial: bool = False) -> bool:
    """Check ``x`` against a PCP, GPCP or PCP_EL instance."""
    if not x and not allow_trivial:
        return False
    if isinstance(I, GpcpInstance):
        left = product(I.delta, [I.u1, apply_hom(I.g, x), I.u2])
        right = product(I.delta, [I.v1, apply_hom(I.h, x), I.v2])
        return left == right
    if isinstance(I, ElInstance):
        from .rational import el_automaton

        if not el_automaton(I.base.sigma, I.a, I.omega, I.b).accepts(x):
            return False
        return apply_hom(I.base.g, x) == apply_hom(I.base.h, x)
    return apply_hom(I.g, x) == apply_hom(I.h, x)


def _marker_codes(R: PcpInstance):
    n = len(R.sigma)
    return n - 1, n  # codes of B and E


def transfer_solution(I: GpcpInstance, y: Word, direction: str = "to_pcp") -> Word:
    """Move a solution across the reduction: ``y -> B y E`` or ``B y E -> y``."""
    R = gpcp_to_pcp(I)
    b, e = _marker_codes(R)
    if direction == "to_pcp":
        if y.alphabet != I.sigma:
            raise WrongShapeError("expected a word over the GPCP domain")
        if not verify_solution(I, y, allow_trivial=True):
            raise NotASolutionError(f"{y} does not solve the GPCP instance")
        return Word(R.sigma, (b,) + y.codes + (e,))
    if direction == "from_pcp":
        codes = y.codes
        if (
            y.alphabet != R.sigma
            or len(codes) < 2
            or codes[0] != b
            or codes[-1] != e
            or any(abs(c) in (b, e) for c in codes[1:-1])
        ):
            raise WrongShapeError(f"{y} is not of the form B y E")
        if not verify_solution(R, y):
            raise NotASolutionError(f"{y} does not solve the reduced instance")
        return Word(I.sigma, codes[1:-1])
    raise ValueError(f"unknown direction {direction!r}")


_KINDS = {
    ("B", 1, "E", 1): FactorKind.BXE,
    ("B", 1, "B", -1): FactorKind.BXBINV,
    ("E", -1, "E", 1): FactorKind.EINV_XE,
    ("E", -1, "B", -1): FactorKind.INVERSE_BXE,
}


def decompose_solution(R: PcpInstance, x: Word) -> list[MarkerFactor]:
    """Split a solution of a reduced instance into marker-delimited solutions.

    Each factor has the shape ``(B y E)^{±1}``, ``E^-1 y E`` or ``B y B^-1``
    and is itself a solution; the factors concatenate to ``x`` literally.
    """
    if R.markers is None or R.source is None:
        raise NotDecomposableError("instance was not produced by gpcp_to_pcp")
    if not (is_injective(R.g) or is_injective(R.h)):
        raise NotDecomposableError("neither map is injective")
    if not verify_solution(R, x, allow_trivial=True):
        raise NotASolutionError(f"{x} does not solve the reduced instance")
    b, e = _marker_codes(R)
    sigma = R.source.sigma
    names = {b: "B", e: "E"}
    codes = x.codes
    factors = []
    i = 0
    while i < len(codes):
        first = codes[i]
        if abs(first) not in names:
            raise NotDecomposableError(f"{x}: expected a marker at position {i}")
        j = i + 1
        while j < len(codes) and abs(codes[j]) not in names:
            j += 1
        if j == len(codes):
            raise NotDecomposableError(f"{x}: unmatched marker at position {i}")
        last = codes[j]
        kind = _KINDS.get((names[abs(first)], 1 if first > 0 else -1, names[abs(last)], 1 if last > 0 else -1))
        if kind is None:
            raise NotDecomposableError(f"{x}: marker pair at {i}..{j} has no admissible shape")
        word = Word(R.sigma, codes[i : j + 1])
        if not verify_solution(R, word):
            raise NotDecomposableError(f"factor {word} is not a solution")
        middle = Word(sigma, codes[i + 1 : j])
        core = invert(middle) if kind is FactorKind.INVERSE_BXE else middle
        factors.append(MarkerFactor(kind, core, word))
        i = j + 1
    return factors


def recover_gpcp_solution(I: GpcpInstance, x: Word) -> Word | None:
    """A GPCP solution read off a ``(B y E)^{±1}`` factor of a reduced solution ``x``."""
    for f in decompose_solution(gpcp_to_pcp(I), x):
        if f.kind in (FactorKind.BXE, FactorKind.INVERSE_BXE):
            return f.core
    return None


@dataclass(frozen=True)
class CiCheck:
    """Outcome of the bounded conjugacy-hypothesis check.

    ``refuted_by`` is a concrete violating word or None. ``separated`` is the
    conjugacy-separation test of the images; together with injectivity of
    one map it certifies the hypotheses for every length (``certified``).
    """

    refuted_by: Word | None
    bound: int
    separated: bool
    certified: bool

    @property
    def satisfied(self) -> bool:
        return self.refuted_by is None


def ci_hypotheses_check(I: GpcpInstance, bound: int) -> CiCheck:
    """Search for non-trivial ``x`` with ``u1 g(x) u1^-1 = v1 h(x) v1^-1`` or
    ``u2^-1 g(x) u2 = v2^-1 h(x) v2`` up to length ``bound``."""
    first = search_solutions(I.g, I.h, bound, c1=I.u1, c2=invert(I.u1), d1=I.v1, d2=invert(I.v1))
    second = search_solutions(I.g, I.h, bound, c1=invert(I.u2), c2=I.u2, d1=invert(I.v2), d2=I.v2)
    candidates = first[:1] + second[:1]
    witness = min(candidates, key=lambda w: shortlex_key(w.codes)) if candidates else None
    separated = conjugacy_separated(I.g, I.h)
    certified = separated and (is_injective(I.g) or is_injective(I.h))
    return CiCheck(witness, bound, separated, certified and witness is None)


def decide_gpcp_ci(I: GpcpInstance, eq_oracle: Callable[[PcpInstance], object], bound: int = 6) -> bool:
    """Answer the GPCP (trivial solutions allowed) via the reduced PCP instance.

    ``eq_oracle`` reports whether a PCP instance has a non-trivial solution
    (any truthy value, e.g. a witness word, means yes). The conjugacy
    hypotheses are checked up to ``bound`` first.
    """
    if not (is_injective(I.g) or is_injective(I.h)):
        raise NotInjectiveError("at least one of g, h must be injective")
    check = ci_hypotheses_check(I, bound)
    if check.refuted_by is not None:
        raise HypothesesRefutedError(check.refuted_by)
    return bool(eq_oracle(gpcp_to_pcp(I)))


def concat_factors(factors: list[MarkerFactor], alphabet: Alphabet) -> Word:
    out = alphabet.identity()
    for f in factors:
        out = concat(out, f.word)
    return out
