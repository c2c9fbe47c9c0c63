"""Line-based instance files.

::

    #! comments start with #!
    domain: a b
    codomain: x y
    g: a -> x y' ; b -> y
    h: a -> x ; b -> y x
    u1: 1            (optional; any of u1 u2 v1 v2 makes a GPCP instance)
    el: B | a b | E  (optional; extreme letters and the middle sub-alphabet)
    constraint: (a|b)* a   (optional rational constraint over the domain)

The empty word is written ``1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, ValidationError
from .rational import Automaton, compile_expr, parse_constraint, render_constraint
from .reductions import ElInstance, GpcpInstance, PcpInstance
from .words import Alphabet, Homomorphism, Letter, Word

_KEYS = ("domain", "codomain", "g", "h", "u1", "u2", "v1", "v2", "el", "constraint")
_CONSTANTS = ("u1", "u2", "v1", "v2")
_TOKENS = re.compile(r"\S+")


@dataclass(frozen=True, eq=False)
class InstanceFile:
    """A parsed instance plus its optional constraint expression."""

    instance: PcpInstance | GpcpInstance | ElInstance
    constraint: object | None = None

    @property
    def pcp(self) -> PcpInstance:
        inst = self.instance
        return inst if isinstance(inst, PcpInstance) else inst.base

    @property
    def constraint_automaton(self) -> Automaton | None:
        if self.constraint is None:
            return None
        return compile_expr(self.constraint, self.pcp.sigma)


def _word(text: str, alphabet: Alphabet, line: int, offset: int, what: str) -> Word:
    toks = list(_TOKENS.finditer(text))
    if not toks:
        raise ParseError(f"empty {what}; write 1 for the empty word", line, offset + 1)
    if len(toks) == 1 and toks[0].group() == "1":
        return alphabet.identity()
    codes = []
    for m in toks:
        tok = m.group()
        col = offset + m.start() + 1
        if tok == "1":
            raise ParseError(f"'1' must stand alone in {what}", line, col)
        try:
            codes.append(alphabet.parse_token(tok))
        except KeyError:
            raise ValidationError(f"line {line}, column {col}: unknown generator {tok!r} in {what}") from None
    return Word(alphabet, codes)


def _letter(text: str, alphabet: Alphabet, line: int, offset: int) -> Letter:
    toks = list(_TOKENS.finditer(text))
    if len(toks) != 1:
        raise ParseError("expected a single letter", line, offset + 1)
    tok = toks[0].group()
    try:
        code = alphabet.parse_token(tok)
    except KeyError:
        raise ValidationError(f"line {line}: unknown generator {tok!r}") from None
    return Letter.from_code(code)


def _map(text: str, dom: Alphabet, cod: Alphabet, line: int, offset: int, name: str) -> Homomorphism:
    images = {}
    pos = 0
    for part in text.split(";"):
        start = offset + pos
        pos += len(part) + 1
        if not part.strip():
            raise ParseError(f"empty clause in map {name}", line, start + 1)
        if "->" not in part:
            raise ParseError(f"expected 'generator -> word' in map {name}", line, start + 1)
        lhs, rhs = part.split("->", 1)
        gen = lhs.strip()
        if gen not in dom:
            raise ValidationError(f"line {line}: {gen!r} is not a domain generator (map {name})")
        if gen in images:
            raise ValidationError(f"line {line}: {gen!r} assigned twice in map {name}")
        images[gen] = _word(rhs, cod, line, start + len(lhs) + 2, f"image of {gen}")
    missing = [n for n in dom if n not in images]
    if missing:
        raise ValidationError(f"line {line}: map {name} has no image for {', '.join(missing)}")
    return Homomorphism(dom, cod, [images[n] for n in dom])


def parse_instance(text: str) -> InstanceFile:
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        cut = raw.find("#!")
        body = raw if cut < 0 else raw[:cut]
        if not body.strip():
            continue
        if ":" not in body:
            raise ParseError("expected 'key: value'", lineno, len(body) - len(body.lstrip()) + 1)
        key, value = body.split(":", 1)
        key = key.strip()
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, body.index(key) + 1 if key else 1)
        if key in fields:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        fields[key] = (value, lineno, len(key) + 1 + body.index(key))
    for key in ("domain", "codomain", "g", "h"):
        if key not in fields:
            raise ParseError(f"missing '{key}:' line")

    def alphabet(key):
        value, line, off = fields[key]
        try:
            return Alphabet(value.split())
        except ValueError as exc:
            raise ValidationError(f"line {line}: {exc}") from None

    dom, cod = alphabet("domain"), alphabet("codomain")
    if not len(dom):
        raise ValidationError(f"line {fields['domain'][1]}: the domain needs at least one generator")
    g = _map(fields["g"][0], dom, cod, fields["g"][1], fields["g"][2], "g")
    h = _map(fields["h"][0], dom, cod, fields["h"][1], fields["h"][2], "h")
    base = PcpInstance(g, h)
    instance = base
    if any(k in fields for k in _CONSTANTS):
        if "el" in fields:
            raise ValidationError("an instance cannot have both constants and an 'el:' line")
        consts = {}
        for k in _CONSTANTS:
            if k in fields:
                value, line, off = fields[k]
                consts[k] = _word(value, cod, line, off, k)
            else:
                consts[k] = cod.identity()
        instance = GpcpInstance(base, **consts)
    elif "el" in fields:
        value, line, off = fields["el"]
        parts = value.split("|")
        if len(parts) != 3:
            raise ParseError("expected 'el: a | omega | b'", line, off + 1)
        a = _letter(parts[0], dom, line, off)
        b = _letter(parts[2], dom, line, off + len(parts[0]) + len(parts[1]) + 2)
        omega = set()
        for tok in parts[1].split():
            if tok not in dom:
                raise ValidationError(f"line {line}: unknown generator {tok!r} in omega")
            omega.add(dom.index(tok))
        try:
            instance = ElInstance(base, a, frozenset(omega), b)
        except ValueError as exc:
            raise ValidationError(f"line {line}: {exc}") from None
    constraint = None
    if "constraint" in fields:
        value, line, off = fields["constraint"]
        try:
            constraint = parse_constraint(value, dom)
        except ParseError as exc:
            col = exc.column + off if exc.column is not None else None
            raise ValidationError(f"line {line}" + (f", column {col}" if col else "") + f": {exc}") from None
    return InstanceFile(instance, constraint)


def _render_map(f: Homomorphism) -> str:
    return " ; ".join(f"{n} -> {w}" for n, w in zip(f.domain, f.images))


def render_instance(inst) -> str:
    """Canonical text for an instance (or :class:`InstanceFile`)."""
    constraint = None
    if isinstance(inst, InstanceFile):
        inst, constraint = inst.instance, inst.constraint
    base = inst if isinstance(inst, PcpInstance) else inst.base
    lines = [
        "domain: " + " ".join(base.sigma),
        "codomain: " + " ".join(base.delta),
        "g: " + _render_map(base.g),
        "h: " + _render_map(base.h),
    ]
    if isinstance(inst, GpcpInstance):
        for k in _CONSTANTS:
            lines.append(f"{k}: {getattr(inst, k)}")
    elif isinstance(inst, ElInstance):
        sigma = base.sigma
        lines.append(
            f"el: {sigma.token(inst.a.code)} | {' '.join(inst.omega_names())} | {sigma.token(inst.b.code)}"
        )
    if constraint is not None:
        lines.append("constraint: " + render_constraint(constraint, base.sigma))
    return "\n".join(lines) + "\n"


def read_instance(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())
