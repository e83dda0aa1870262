"""Recursive-descent parser for the TRANSFORM query subset.

Grammar (keywords case-insensitive, trailing semicolon optional):

    query      := SELECT projection FROM ident [WHERE predicate] [";"]
    projection := TRANSFORM "(" ident {"," ident} ")" USING "'" modref "'"
                  [AS ident {"," ident}]
                | "*" | ident {"," ident}
    modref     := ident ["(" key "=" text {"," key "=" text} ")"]
    predicate  := term {AND term}
    term       := ident cmp literal | ident IN "(" literal {"," literal} ")"
    cmp        := "=" | ">=" | "<="
    literal    := "'" text "'" | number | date (YYYY-MM-DD)

Date literals are accepted bare or quoted and normalize to DATE; a
quoted string that is a valid calendar date is treated as a date.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..errors import ParseError
from ..model import ValueKind, looks_like_date, parse_date_text
from .ast import (
    And,
    Columns,
    Compare,
    In,
    Literal,
    Predicate,
    QueryAst,
    Transform,
    check_ast,
)

KEYWORDS = {"SELECT", "TRANSFORM", "USING", "AS", "FROM", "WHERE", "AND", "IN"}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_DATE = re.compile(r"\d{4}-\d{2}-\d{2}(?![0-9\-])")
_NUMBER = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_MODREF = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_\-]*)\s*(?:\((.*)\)\s*)?\Z", re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT STRING NUMBER DATE SYMBOL EOF
    text: str
    pos: int  # character offset into the source


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[Token] = []
        self._scan()

    def _error(self, message: str, pos: int) -> ParseError:
        return ParseError(
            f"{message} at offset {_byte_offset(self.text, pos)}",
            offset=_byte_offset(self.text, pos),
        )

    def _scan(self) -> None:
        text = self.text
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isalpha() or ch == "_":
                match = _IDENT.match(text, i)
                assert match is not None
                self.tokens.append(Token("IDENT", match.group(), i))
                i = match.end()
                continue
            if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
                match = _DATE.match(text, i)
                if match is not None:
                    self.tokens.append(Token("DATE", match.group(), i))
                    i = match.end()
                    continue
                match = _NUMBER.match(text, i)
                if match is None:
                    raise self._error(f"bad number {text[i]!r}", i)
                self.tokens.append(Token("NUMBER", match.group(), i))
                i = match.end()
                continue
            if ch == "'":
                start = i
                i += 1
                chunks: list[str] = []
                while True:
                    if i >= n:
                        raise self._error("unterminated string literal", start)
                    if text[i] == "'":
                        if i + 1 < n and text[i + 1] == "'":
                            chunks.append("'")
                            i += 2
                            continue
                        i += 1
                        break
                    chunks.append(text[i])
                    i += 1
                self.tokens.append(Token("STRING", "".join(chunks), start))
                continue
            if text.startswith(">=", i) or text.startswith("<=", i):
                self.tokens.append(Token("SYMBOL", text[i : i + 2], i))
                i += 2
                continue
            if ch in "=*,();":
                self.tokens.append(Token("SYMBOL", ch, i))
                i += 1
                continue
            raise self._error(f"unexpected character {ch!r}", i)
        self.tokens.append(Token("EOF", "", n))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _Lexer(text).tokens
        self.pos = 0

    def _peek(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _fail(self, expected: tuple[str, ...]) -> ParseError:
        token = self._peek()
        got = repr(token.text) if token.kind != "EOF" else "end of input"
        offset = _byte_offset(self.text, token.pos)
        wanted = " or ".join(sorted(expected))
        return ParseError(
            f"expected {wanted}, got {got} at offset {offset}",
            offset=offset,
            expected=expected,
        )

    def _is_keyword(self, token: Token, keyword: str) -> bool:
        return token.kind == "IDENT" and token.text.upper() == keyword

    def _at_keyword(self, keyword: str) -> bool:
        return self._is_keyword(self._peek(), keyword)

    def _expect_keyword(self, keyword: str) -> Token:
        if not self._at_keyword(keyword):
            raise self._fail((keyword,))
        return self._advance()

    def _expect_symbol(self, symbol: str) -> Token:
        token = self._peek()
        if token.kind != "SYMBOL" or token.text != symbol:
            raise self._fail((f"'{symbol}'",))
        return self._advance()

    def _expect_identifier(self, what: str = "identifier") -> Token:
        token = self._peek()
        if token.kind != "IDENT" or token.text.upper() in KEYWORDS:
            raise self._fail((what,))
        return self._advance()

    def _at_symbol(self, symbol: str) -> bool:
        token = self._peek()
        return token.kind == "SYMBOL" and token.text == symbol

    def parse_query(self) -> QueryAst:
        self._expect_keyword("SELECT")
        projection = self._parse_projection()
        self._expect_keyword("FROM")
        source = self._expect_identifier("table name").text
        predicate: Optional[Predicate] = None
        if self._at_keyword("WHERE"):
            self._advance()
            predicate = self._parse_predicate()
        if self._at_symbol(";"):
            self._advance()
        if self._peek().kind != "EOF":
            raise self._fail(("end of input",))
        return check_ast(QueryAst(projection=projection, source=source, predicate=predicate))

    def _parse_ident_list(self, what: str) -> tuple[str, ...]:
        names = [self._expect_identifier(what).text]
        while self._at_symbol(","):
            self._advance()
            names.append(self._expect_identifier(what).text)
        return tuple(names)

    def _parse_projection(self):
        if self._at_keyword("TRANSFORM"):
            self._advance()
            self._expect_symbol("(")
            inputs = self._parse_ident_list("column name")
            self._expect_symbol(")")
            self._expect_keyword("USING")
            token = self._peek()
            if token.kind != "STRING":
                raise self._fail(("quoted module reference",))
            self._advance()
            module_name, params = self._parse_modref(token)
            output_names = None
            if self._at_keyword("AS"):
                self._advance()
                output_names = self._parse_ident_list("output name")
            return Transform(
                input_columns=inputs,
                module_name=module_name,
                module_params=params,
                output_names=output_names,
            )
        if self._at_symbol("*"):
            self._advance()
            return Columns(star=True)
        return Columns(names=self._parse_ident_list("column name"))

    def _parse_modref(self, token: Token) -> tuple[str, tuple[tuple[str, str], ...]]:
        match = _MODREF.match(token.text)
        offset = _byte_offset(self.text, token.pos)
        if match is None:
            raise ParseError(
                f"bad module reference {token.text!r} at offset {offset}",
                offset=offset,
                expected=("module name, optionally with (key=value, ...)",),
            )
        name = match.group(1)
        raw_params = match.group(2)
        params: list[tuple[str, str]] = []
        if raw_params is not None and raw_params.strip():
            for part in raw_params.split(","):
                key, eq, value = part.partition("=")
                key = key.strip()
                if not eq or not _IDENT.fullmatch(key):
                    raise ParseError(
                        f"bad module parameter {part.strip()!r} at offset {offset}",
                        offset=offset,
                        expected=("key=value",),
                    )
                params.append((key, value.strip()))
        return name, tuple(params)

    def _parse_predicate(self) -> Predicate:
        terms = [self._parse_term()]
        while self._at_keyword("AND"):
            self._advance()
            terms.append(self._parse_term())
        if len(terms) == 1:
            return terms[0]
        return And(children=tuple(terms))

    def _parse_term(self):
        column = self._expect_identifier("column name").text
        if self._at_keyword("IN"):
            self._advance()
            self._expect_symbol("(")
            literals = [self._parse_literal()]
            while self._at_symbol(","):
                self._advance()
                literals.append(self._parse_literal())
            self._expect_symbol(")")
            return In(column=column, literals=tuple(literals))
        token = self._peek()
        if token.kind == "SYMBOL" and token.text in ("=", ">=", "<="):
            self._advance()
            return Compare(column=column, op=token.text, literal=self._parse_literal())
        raise self._fail(("'='", "'>='", "'<='", "IN"))

    def _parse_literal(self) -> Literal:
        token = self._peek()
        if token.kind == "STRING":
            self._advance()
            if looks_like_date(token.text):
                return Literal(ValueKind.DATE, parse_date_text(token.text))
            return Literal(ValueKind.TEXT, token.text)
        if token.kind == "DATE":
            self._advance()
            try:
                return Literal(ValueKind.DATE, parse_date_text(token.text))
            except ValueError:
                offset = _byte_offset(self.text, token.pos)
                raise ParseError(
                    f"invalid date literal {token.text!r} at offset {offset}",
                    offset=offset,
                    expected=("valid YYYY-MM-DD date",),
                ) from None
        if token.kind == "NUMBER":
            self._advance()
            if re.fullmatch(r"-?\d+", token.text):
                return Literal(ValueKind.INT, int(token.text))
            return Literal(ValueKind.FLOAT, float(token.text))
        raise self._fail(("string literal", "number", "date"))


def parse(text: str) -> QueryAst:
    """Parse query text into an AST; raises ParseError with byte offset
    and the expected-token set on bad syntax."""
    return _Parser(text).parse_query()
