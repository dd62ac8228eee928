"""Lexer and recursive-descent parser for the formula surface syntax.

Binding strength, tightest first:  &  then  /\\  then  |  then  ->  (right
associative).  a <-> b is sugar for (a -> b) /\\ (b -> a) and does not chain.
Constants are numerals ("0.5", "1/3") or canonical c{index}; bare identifiers
are declared propositions; identifiers applied to arguments are modalities.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra import ResiduatedLattice
from .report import InputError
from .syntax import Bin, Const, Formula, Modal, Prop

__all__ = ["ParseError", "parse_formula", "tokenize"]

_CINDEX = re.compile(r"^c(\d+)$")
_IDENT_START = re.compile(r"[A-Za-z_]")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class ParseError(InputError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        snippet = text[pos : pos + 12] or "<end of input>"
        super().__init__(f"{message} at position {pos}: {snippet!r}")


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' | 'numeral' | operator/punct literal
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("<->", i):
            tokens.append(Token("<->", "<->", i))
            i += 3
        elif text.startswith("->", i):
            tokens.append(Token("->", "->", i))
            i += 2
        elif text.startswith("/\\", i):
            tokens.append(Token("/\\", "/\\", i))
            i += 2
        elif ch in "|&(),":
            tokens.append(Token(ch, ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            # a slash continues the numeral only when a digit follows,
            # so "1/\p" still lexes as 1, /\, p
            elif j < n and text[j] == "/" and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            tokens.append(Token("numeral", text[i:j], i))
            i = j
        elif _IDENT_START.match(ch):
            m = _IDENT.match(text, i)
            tokens.append(Token("ident", m.group(0), i))
            i = m.end()
        else:
            raise ParseError(f"unexpected character {ch!r}", text, i)
    return tokens


class _Parser:
    def __init__(self, text: str, lattice: ResiduatedLattice,
                 propositions: Sequence[str], modalities: Mapping[str, int]):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.lattice = lattice
        self.props = set(propositions)
        self.modalities = dict(modalities)

    def _peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _next(self) -> Token:
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.text, len(self.text))
        self.i += 1
        return tok

    def _expect(self, kind: str) -> Token:
        tok = self._peek()
        if tok is None or tok.kind != kind:
            pos = tok.pos if tok else len(self.text)
            raise ParseError(f"expected {kind!r}", self.text, pos)
        return self._next()

    def _at(self, kind: str) -> bool:
        tok = self._peek()
        return tok is not None and tok.kind == kind

    def parse(self) -> Formula:
        phi = self.implication()
        if self._peek() is not None:
            raise ParseError("trailing input", self.text, self._peek().pos)
        return phi

    def implication(self) -> Formula:
        left = self.disjunct()
        if self._at("->"):
            self._next()
            return Bin("imp", left, self.implication())
        if self._at("<->"):
            self._next()
            right = self.disjunct()
            return Bin("and", Bin("imp", left, right), Bin("imp", right, left))
        return left

    def disjunct(self) -> Formula:
        phi = self.conjunct()
        while self._at("|"):
            self._next()
            phi = Bin("or", phi, self.conjunct())
        return phi

    def conjunct(self) -> Formula:
        phi = self.fused()
        while self._at("/\\"):
            self._next()
            phi = Bin("and", phi, self.fused())
        return phi

    def fused(self) -> Formula:
        phi = self.atom()
        while self._at("&"):
            self._next()
            phi = Bin("fuse", phi, self.atom())
        return phi

    def atom(self) -> Formula:
        tok = self._next()
        if tok.kind == "(":
            phi = self.implication()
            self._expect(")")
            return phi
        if tok.kind == "numeral":
            idx = self.lattice.index_of_label(tok.text)
            if idx is None:
                raise ParseError(f"numeral {tok.text!r} names no carrier element of {self.lattice.name}",
                                 self.text, tok.pos)
            return Const(idx)
        if tok.kind == "ident":
            if self._at("("):  # modality application
                if tok.text not in self.modalities:
                    raise ParseError(f"unknown modality {tok.text!r}", self.text, tok.pos)
                self._next()
                args = [self.implication()]
                while self._at(","):
                    self._next()
                    args.append(self.implication())
                self._expect(")")
                arity = self.modalities[tok.text]
                if len(args) != arity:
                    raise ParseError(f"modality {tok.text!r} takes {arity} argument(s), got {len(args)}",
                                     self.text, tok.pos)
                return Modal(tok.text, tuple(args))
            m = _CINDEX.match(tok.text)
            if m and tok.text not in self.props:
                idx = int(m.group(1))
                if idx >= self.lattice.size:
                    raise ParseError(f"constant index {idx} outside carrier 0..{self.lattice.size - 1}",
                                     self.text, tok.pos)
                return Const(idx)
            if tok.text in self.props:
                return Prop(tok.text)
            raise ParseError(f"undeclared proposition {tok.text!r}", self.text, tok.pos)
        raise ParseError(f"unexpected token {tok.text!r}", self.text, tok.pos)


def parse_formula(text: str, lattice: ResiduatedLattice,
                  propositions: Sequence[str] = (),
                  modalities: Mapping[str, int] | None = None) -> Formula:
    return _Parser(text, lattice, propositions, modalities or {}).parse()
