"""Description language: AST, parser, canonical printer and validation.

Two surface forms are accepted.

The chain shorthand mirrors how an operator would phrase a path through the
installation.  Adjectives followed by a type word form one object phrase and
relation words link consecutive phrases::

    vertical elongated pipe elbow horizontal pipe on red floodgate[hunt]

The structured form makes objects, formulas and relations explicit and adds
``and`` / ``or`` / ``not`` connectives plus alternatives::

    { object o1: horizontal and pipe
      object o2: red and floodgate [hunt]
      relation on(o1, o2) }
    or
    { object o2: red and floodgate [hunt] }

``or`` between blocks separates whole alternatives; inside a formula it is the
usual disjunction.  ``not`` binds tightest, then ``and``, then ``or``.  The
``[hunt]`` marker singles out the object the description is meant to locate;
when omitted, the last object of a chain (or the only object of a one-object
alternative) is the hunt.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import vocab

# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AttributeAtom:
    """Leaf predicate over a single perceived object."""

    predicate: str


@dataclass(frozen=True)
class RelationAtom:
    """Leaf predicate over a tuple of perceived objects."""

    predicate: str
    arity: int = 2


@dataclass(frozen=True)
class Not:
    child: "Node"


@dataclass(frozen=True)
class And:
    children: tuple["Node", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["Node", ...]


Node = AttributeAtom | RelationAtom | Not | And | Or


@dataclass(frozen=True)
class ExpectedObject:
    id: str
    formula: Node
    is_hunt: bool = False


@dataclass(frozen=True)
class RelationEdge:
    formula: Node
    args: tuple[str, ...]


@dataclass(frozen=True)
class Alternative:
    objects: tuple[ExpectedObject, ...]
    relations: tuple[RelationEdge, ...] = ()


@dataclass(frozen=True)
class Description:
    alternatives: tuple[Alternative, ...]


def hunt_object(alternative: Alternative) -> ExpectedObject:
    """The object an alternative is hunting for (exactly one in valid input)."""
    for obj in alternative.objects:
        if obj.is_hunt:
            return obj
    raise ValueError("alternative has no hunt object")


# ---------------------------------------------------------------------------
# Errors and diagnostics
# ---------------------------------------------------------------------------


class DescriptionError(Exception):
    """Base class for description language failures."""


class DescriptionSyntaxError(DescriptionError):
    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {position}{hint}")


class UnknownWordError(DescriptionSyntaxError):
    """A word in predicate position is not in the vocabulary."""


class RelationArityError(DescriptionError):
    """A relation was applied to the wrong number of arguments."""


class HuntMarkerError(DescriptionError):
    """Missing or duplicate ``[hunt]`` marker."""


@dataclass(frozen=True)
class Diagnostic:
    code: str
    where: str
    message: str


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<hunt>\[\s*hunt\s*\])
  | (?P<punct>[{}(),:])
  | (?P<word>[A-Za-z][A-Za-z0-9_\-]*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"object", "relation", "or", "and", "not", "alternative"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "word", "hunt", "{", "}", "(", ")", ",", ":", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DescriptionSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup == "hunt":
            tokens.append(_Token("hunt", "[hunt]", pos))
        elif m.lastgroup == "punct":
            tokens.append(_Token(m.group(), m.group(), pos))
        elif m.lastgroup == "word":
            tokens.append(_Token("word", m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# Chain shorthand
# ---------------------------------------------------------------------------

# Surface words of each relation in a chain.  Compound aliases desugar to a
# conjunction of two relation atoms on the same edge.
_RELATION_SURFACE: dict[str, str] = {
    "on": "on",
    "above": "above",
    "below": "below",
    "under": "under",
    "behind": "behind",
    "elbow": "elbow",
    "connected_to": "connected to",
    "near_from": "near from",
    "in_front_of": "in front of",
    "on_the_left_to": "on the left to",
    "on_the_right_to": "on the right to",
}

_CHAIN_LINKS: dict[tuple[str, ...], tuple[str, ...]] = {}
for _name, _surface in _RELATION_SURFACE.items():
    _CHAIN_LINKS[tuple(_surface.split())] = (_name,)
    _CHAIN_LINKS[(_name,)] = (_name,)
_CHAIN_LINKS[("connected", "on", "the", "left", "to")] = ("connected_to", "on_the_left_to")
_CHAIN_LINKS[("connected", "on", "the", "right", "to")] = ("connected_to", "on_the_right_to")

_MAX_LINK_WORDS = max(len(k) for k in _CHAIN_LINKS)


def _link_formula(names: tuple[str, ...]) -> Node:
    atoms = tuple(RelationAtom(n) for n in names)
    return atoms[0] if len(atoms) == 1 else And(atoms)


class _ChainParser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def parse(self) -> Description:
        phrases: list[tuple[list[str], bool, int]] = [self._phrase()]
        links: list[tuple[str, ...]] = []
        while self.peek().kind == "word":
            links.append(self._link())
            phrases.append(self._phrase())
        tok = self.peek()
        if tok.kind != "end":
            raise DescriptionSyntaxError(
                f"unexpected {tok.text!r}", tok.pos, ("relation word", "end of description")
            )

        hunts = [idx for idx, (_, marked, _) in enumerate(phrases) if marked]
        if len(hunts) > 1:
            raise HuntMarkerError("more than one [hunt] marker")
        hunt_idx = hunts[0] if hunts else len(phrases) - 1

        objects = []
        for idx, (atoms, _, _) in enumerate(phrases):
            leaves = tuple(AttributeAtom(a) for a in atoms)
            formula: Node = leaves[0] if len(leaves) == 1 else And(leaves)
            objects.append(ExpectedObject(f"o{idx + 1}", formula, is_hunt=idx == hunt_idx))
        relations = tuple(
            RelationEdge(_link_formula(names), (f"o{idx + 1}", f"o{idx + 2}"))
            for idx, names in enumerate(links)
        )
        return Description((Alternative(tuple(objects), relations),))

    def _phrase(self) -> tuple[list[str], bool, int]:
        """Adjective words followed by one type word, optionally ``[hunt]``."""
        tok = self.peek()
        start = tok.pos
        atoms: list[str] = []
        while True:
            tok = self.peek()
            if tok.kind != "word":
                raise DescriptionSyntaxError(
                    "expected an object phrase", tok.pos, ("attribute word", "type word")
                )
            word = vocab.normalize_word(tok.text)
            if word in vocab.TYPE_ATOMS:
                self.i += 1
                atoms.append(word)
                break
            if word in vocab.ATTRIBUTE_ATOMS:
                self.i += 1
                atoms.append(word)
                continue
            raise UnknownWordError(f"unknown word {tok.text!r}", tok.pos, ("attribute word",))
        marked = False
        if self.peek().kind == "hunt":
            marked = True
            self.i += 1
        return atoms, marked, start

    def _link(self) -> tuple[str, ...]:
        """Longest sequence of words naming a relation."""
        tok = self.peek()
        window = []
        j = self.i
        while j < len(self.tokens) and self.tokens[j].kind == "word" and len(window) < _MAX_LINK_WORDS:
            window.append(self.tokens[j].text.lower())
            j += 1
        for width in range(len(window), 0, -1):
            names = _CHAIN_LINKS.get(tuple(window[:width]))
            if names is not None:
                self.i += width
                return names
        raise DescriptionSyntaxError(
            f"unexpected {tok.text!r}", tok.pos, ("relation word", "end of description")
        )


# ---------------------------------------------------------------------------
# Structured form
# ---------------------------------------------------------------------------


class _StructuredParser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise DescriptionSyntaxError(f"unexpected {tok.text or 'end of text'!r}", tok.pos, (what,))
        return self.take()

    def _is_keyword(self, tok: _Token, word: str) -> bool:
        return tok.kind == "word" and tok.text.lower() == word

    def parse(self) -> Description:
        alternatives = [self._alternative()]
        while self._is_keyword(self.peek(), "or"):
            self.take()
            alternatives.append(self._alternative())
        tok = self.peek()
        if tok.kind != "end":
            raise DescriptionSyntaxError(f"unexpected {tok.text!r}", tok.pos, ("or", "end of description"))
        return Description(tuple(alternatives))

    def _alternative(self) -> Alternative:
        if self._is_keyword(self.peek(), "alternative"):
            self.take()
        braced = False
        if self.peek().kind == "{":
            braced = True
            self.take()
        objects: list[ExpectedObject] = []
        relations: list[RelationEdge] = []
        marks = 0
        while True:
            tok = self.peek()
            if self._is_keyword(tok, "object"):
                obj, marked = self._object_decl()
                if any(o.id == obj.id for o in objects):
                    raise DescriptionSyntaxError(f"duplicate object id {obj.id!r}", tok.pos)
                objects.append(obj)
                marks += 1 if marked else 0
            elif self._is_keyword(tok, "relation"):
                relations.append(self._relation_decl())
            elif (objects or relations) and (
                braced or tok.kind == "end" or self._is_keyword(tok, "or")
            ):
                break
            else:
                expected = ("object", "relation") if not (objects or relations) else (
                    "object",
                    "relation",
                    "or",
                    "end of description",
                )
                raise DescriptionSyntaxError(
                    f"unexpected {tok.text or 'end of text'!r}", tok.pos, expected
                )
        if braced:
            self.expect("}", "}")
        if marks > 1:
            raise HuntMarkerError("more than one [hunt] marker in an alternative")
        if marks == 0:
            if len(objects) == 1:
                objects[0] = ExpectedObject(objects[0].id, objects[0].formula, is_hunt=True)
            else:
                raise HuntMarkerError("missing [hunt] marker in a multi-object alternative")
        return Alternative(tuple(objects), tuple(relations))

    def _object_decl(self) -> tuple[ExpectedObject, bool]:
        self.take()  # "object"
        ident = self.expect("word", "object id")
        self.expect(":", ":")
        formula = self._formula("attribute")
        marked = False
        if self.peek().kind == "hunt":
            marked = True
            self.take()
        return ExpectedObject(ident.text, formula, is_hunt=marked), marked

    def _relation_decl(self) -> RelationEdge:
        tok = self.take()  # "relation"
        formula = self._formula("relation")
        self.expect("(", "(")
        args = [self.expect("word", "object id").text]
        while self.peek().kind == ",":
            self.take()
            args.append(self.expect("word", "object id").text)
        self.expect(")", ")")
        if len(args) != 2:
            raise RelationArityError(
                f"relation at position {tok.pos} takes 2 arguments, got {len(args)}"
            )
        return RelationEdge(formula, tuple(args))

    # Formula parsing: "or" is consumed only when what follows can start a
    # factor, so a brace-free "... or object o2: ..." still splits alternatives.
    def _formula(self, kind: str) -> Node:
        terms = [self._term(kind)]
        while self._is_keyword(self.peek(), "or") and self._starts_factor(self.tokens[self.i + 1]):
            self.take()
            terms.append(self._term(kind))
        return terms[0] if len(terms) == 1 else Or(tuple(terms))

    def _term(self, kind: str) -> Node:
        factors = [self._factor(kind)]
        while self._is_keyword(self.peek(), "and"):
            self.take()
            factors.append(self._factor(kind))
        return factors[0] if len(factors) == 1 else And(tuple(factors))

    def _starts_factor(self, tok: _Token) -> bool:
        if tok.kind == "(":
            return True
        if tok.kind != "word":
            return False
        return tok.text.lower() not in _KEYWORDS or tok.text.lower() == "not"

    def _factor(self, kind: str) -> Node:
        tok = self.peek()
        if self._is_keyword(tok, "not"):
            self.take()
            return Not(self._factor(kind))
        if tok.kind == "(":
            self.take()
            inner = self._formula(kind)
            self.expect(")", ")")
            return inner
        if tok.kind == "word" and tok.text.lower() not in _KEYWORDS:
            self.take()
            word = vocab.normalize_word(tok.text)
            if kind == "attribute":
                if word in vocab.ATTRIBUTE_ATOMS:
                    return AttributeAtom(word)
                raise UnknownWordError(f"unknown attribute {tok.text!r}", tok.pos, ("attribute word",))
            if word in vocab.RELATION_ATOMS:
                return RelationAtom(word, vocab.RELATION_ARITY[word])
            raise UnknownWordError(f"unknown relation {tok.text!r}", tok.pos, ("relation word",))
        raise DescriptionSyntaxError(
            f"unexpected {tok.text or 'end of text'!r}", tok.pos, ("not", "(", "predicate")
        )


def parse_description(text: str) -> Description:
    """Parse either surface form into a :class:`Description`."""
    tokens = _tokenize(text)
    if tokens[0].kind == "end":
        raise DescriptionSyntaxError("empty description", 0, ("object phrase", "object", "{"))
    first = tokens[0]
    structured = first.kind == "{" or (
        first.kind == "word" and first.text.lower() in {"object", "relation", "alternative"}
    )
    if structured:
        return _StructuredParser(tokens).parse()
    return _ChainParser(tokens).parse()


# ---------------------------------------------------------------------------
# Canonical printer
# ---------------------------------------------------------------------------

_PREC_OR, _PREC_AND, _PREC_NOT = 1, 2, 3


def format_formula(node: Node) -> str:
    """Render a formula; re-parsing the result reproduces the same tree."""
    return _fmt(node, 0)


def _fmt(node: Node, parent_prec: int) -> str:
    if isinstance(node, (AttributeAtom, RelationAtom)):
        return node.predicate
    if isinstance(node, Not):
        return f"not {_fmt(node.child, _PREC_NOT)}"
    if isinstance(node, And):
        # Parenthesize And-in-And so nesting survives a round trip.
        parts = [
            f"({_fmt(c, 0)})" if isinstance(c, And) else _fmt(c, _PREC_AND)
            for c in node.children
        ]
        text = " and ".join(parts)
        return f"({text})" if parent_prec > _PREC_AND else text
    if isinstance(node, Or):
        parts = [
            f"({_fmt(c, 0)})" if isinstance(c, Or) else _fmt(c, _PREC_OR)
            for c in node.children
        ]
        text = " or ".join(parts)
        return f"({text})" if parent_prec > _PREC_OR else text
    raise TypeError(f"not a formula node: {node!r}")


def _chain_phrase(formula: Node) -> list[str] | None:
    """Word list for a chain phrase, or None when the formula is not chain-shaped."""
    if isinstance(formula, AttributeAtom):
        leaves = [formula]
    elif isinstance(formula, And) and all(isinstance(c, AttributeAtom) for c in formula.children):
        leaves = list(formula.children)
    else:
        return None
    *adjectives, last = [leaf.predicate for leaf in leaves]
    if last not in vocab.TYPE_ATOMS:
        return None
    if any(adj in vocab.TYPE_ATOMS or adj not in vocab.ATTRIBUTE_ATOMS for adj in adjectives):
        return None
    return adjectives + [last]


def _chain_link_surface(formula: Node) -> str | None:
    if isinstance(formula, RelationAtom):
        return _RELATION_SURFACE.get(formula.predicate)
    if isinstance(formula, And) and all(isinstance(c, RelationAtom) for c in formula.children):
        names = tuple(c.predicate for c in formula.children)
        if names == ("connected_to", "on_the_left_to"):
            return "connected on the left to"
        if names == ("connected_to", "on_the_right_to"):
            return "connected on the right to"
    return None


def _try_chain(d: Description) -> str | None:
    if len(d.alternatives) != 1:
        return None
    alt = d.alternatives[0]
    n = len(alt.objects)
    if [o.id for o in alt.objects] != [f"o{i + 1}" for i in range(n)]:
        return None
    if sum(o.is_hunt for o in alt.objects) != 1:
        return None
    if len(alt.relations) != n - 1:
        return None
    pieces: list[str] = []
    for idx, obj in enumerate(alt.objects):
        words = _chain_phrase(obj.formula)
        if words is None:
            return None
        phrase = " ".join(words) + ("[hunt]" if obj.is_hunt else "")
        if idx:
            edge = alt.relations[idx - 1]
            if edge.args != (f"o{idx}", f"o{idx + 1}"):
                return None
            surface = _chain_link_surface(edge.formula)
            if surface is None:
                return None
            pieces.append(surface)
        pieces.append(phrase)
    return " ".join(pieces)


def print_description(d: Description) -> str:
    """Canonical text for a description: chain form when possible, else structured."""
    chain = _try_chain(d)
    if chain is not None:
        return chain
    blocks = []
    for alt in d.alternatives:
        decls = []
        for obj in alt.objects:
            hunt = " [hunt]" if obj.is_hunt else ""
            decls.append(f"object {obj.id}: {format_formula(obj.formula)}{hunt}")
        for edge in alt.relations:
            decls.append(f"relation {format_formula(edge.formula)}({', '.join(edge.args)})")
        blocks.append("{ " + " ".join(decls) + " }")
    return " or ".join(blocks)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _walk(node: Node, under_not: bool = False):
    yield node, under_not
    if isinstance(node, Not):
        yield from _walk(node.child, True)
    elif isinstance(node, (And, Or)):
        for child in node.children:
            yield from _walk(child, under_not)


def _check_operators(formula: Node, where: str, out: list[Diagnostic]) -> None:
    for node, _ in _walk(formula):
        if isinstance(node, (And, Or)) and len(node.children) < 2:
            out.append(Diagnostic("bad-operator-arity", where, "and/or needs at least 2 children"))


def validate_description(d: Description) -> list[Diagnostic]:
    """Structural diagnostics; an empty list means the description is well formed."""
    out: list[Diagnostic] = []
    if not d.alternatives:
        out.append(Diagnostic("empty-description", "description", "no alternatives"))
    for ai, alt in enumerate(d.alternatives):
        where_alt = f"alternative {ai}"
        if not alt.objects:
            out.append(Diagnostic("no-objects", where_alt, "alternative declares no objects"))
            continue
        ids = [o.id for o in alt.objects]
        for dup in sorted({i for i in ids if ids.count(i) > 1}):
            out.append(Diagnostic("duplicate-object-id", where_alt, f"object id {dup!r} repeats"))
        hunts = sum(o.is_hunt for o in alt.objects)
        if hunts == 0:
            out.append(Diagnostic("missing-hunt", where_alt, "no hunt object"))
        elif hunts > 1:
            out.append(Diagnostic("duplicate-hunt", where_alt, "several hunt objects"))
        for obj in alt.objects:
            where = f"{where_alt}, object {obj.id}"
            _check_operators(obj.formula, where, out)
            positive_types = 0
            for node, under_not in _walk(obj.formula):
                if isinstance(node, RelationAtom):
                    out.append(Diagnostic("wrong-leaf-kind", where, "relation atom in object formula"))
                elif isinstance(node, AttributeAtom):
                    if node.predicate not in vocab.ATTRIBUTE_ATOMS:
                        out.append(
                            Diagnostic("unknown-predicate", where, f"unknown attribute {node.predicate!r}")
                        )
                    elif node.predicate in vocab.TYPE_ATOMS and not under_not:
                        positive_types += 1
            if positive_types == 0:
                out.append(Diagnostic("missing-type-atom", where, "object formula names no type"))
            elif positive_types > 1:
                out.append(Diagnostic("multiple-type-atoms", where, "object formula names several types"))
        declared = set(ids)
        for ri, edge in enumerate(alt.relations):
            where = f"{where_alt}, relation {ri}"
            _check_operators(edge.formula, where, out)
            arities = set()
            for node, _ in _walk(edge.formula):
                if isinstance(node, AttributeAtom):
                    out.append(Diagnostic("wrong-leaf-kind", where, "attribute atom in relation formula"))
                elif isinstance(node, RelationAtom):
                    if node.predicate not in vocab.RELATION_ATOMS:
                        out.append(
                            Diagnostic("unknown-predicate", where, f"unknown relation {node.predicate!r}")
                        )
                    arities.add(node.arity)
            if len(arities) > 1:
                out.append(Diagnostic("mixed-arity", where, "relation formula mixes arities"))
            elif arities and len(edge.args) != next(iter(arities)):
                out.append(
                    Diagnostic(
                        "relation-arity",
                        where,
                        f"{len(edge.args)} arguments for arity {next(iter(arities))}",
                    )
                )
            for arg in edge.args:
                if arg not in declared:
                    out.append(Diagnostic("unknown-object-ref", where, f"undeclared object {arg!r}"))
            if len(set(edge.args)) != len(edge.args):
                out.append(Diagnostic("repeated-argument", where, "relation repeats an argument"))
    return out


__all__ = [
    "AttributeAtom",
    "RelationAtom",
    "Not",
    "And",
    "Or",
    "Node",
    "ExpectedObject",
    "RelationEdge",
    "Alternative",
    "Description",
    "hunt_object",
    "DescriptionError",
    "DescriptionSyntaxError",
    "UnknownWordError",
    "RelationArityError",
    "HuntMarkerError",
    "Diagnostic",
    "parse_description",
    "print_description",
    "format_formula",
    "validate_description",
]
