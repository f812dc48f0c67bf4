"""
Tokenizer shared by the formula grammar and the scenario grammar.

=== TOKENS ===

NAME     [A-Za-z_][A-Za-z0-9_]*   (atom names are the lowercase subset;
                                    keywords are NAMEs checked by the parser)
NUMBER   nonnegative decimal, e.g. 3 or 0.25
STRING   double-quoted, backslash escapes for '"' and '\\' only
SYMBOL   -> ! & | ( ) { } , ; =
EOF      end of input

Whitespace is insignificant and '#' starts a comment that runs to the end of
the line. Every token records its 1-based line and column so parse errors
can point at the offending text.
"""

import re
from dataclasses import dataclass
from typing import Iterator, List, Optional

from hourglass.errors import ParseError

NAME = "NAME"
NUMBER = "NUMBER"
STRING = "STRING"
SYMBOL = "SYMBOL"
EOF = "EOF"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<string>")
  | (?P<symbol>->|[!&|(){},;=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int
    value: Optional[str] = None  # decoded STRING contents

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        return f"'{self.text}'"


def tokenize(text: str) -> List[Token]:
    """Split ``text`` into tokens, ending with a single EOF token."""
    return list(_scan(text))


def _scan(text: str) -> Iterator[Token]:
    pos = 0
    line = 1
    line_start = 0
    length = len(text)
    while pos < length:
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}",
                name=text[pos],
                line=line,
                column=column,
            )
        kind = match.lastgroup
        if kind == "newline":
            pos = match.end()
            line += 1
            line_start = pos
            continue
        if kind in ("ws", "comment"):
            pos = match.end()
            continue
        if kind == "string":
            value, end = _read_string(text, pos, line, column)
            yield Token(STRING, text[pos:end], line, column, value)
            pos = end
            continue
        lexeme = match.group()
        yield Token(
            {"name": NAME, "number": NUMBER, "symbol": SYMBOL}[kind],
            lexeme,
            line,
            column,
        )
        pos = match.end()
    yield Token(EOF, "", line, pos - line_start + 1)


_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t"}


def _read_string(text: str, start: int, line: int, column: int):
    chars = []
    pos = start + 1
    while pos < len(text):
        ch = text[pos]
        if ch == '"':
            return "".join(chars), pos + 1
        if ch == "\n":
            break
        if ch == "\\":
            nxt = text[pos + 1] if pos + 1 < len(text) else ""
            if nxt not in _ESCAPES:
                raise ParseError(
                    f"invalid escape sequence '\\{nxt}' in string",
                    name="\\" + nxt,
                    line=line,
                    column=column + (pos - start),
                )
            chars.append(_ESCAPES[nxt])
            pos += 2
            continue
        chars.append(ch)
        pos += 1
    raise ParseError("unterminated string", name=text[start:pos], line=line, column=column)


def quote(value: str) -> str:
    """Inverse of string decoding: wrap in quotes and escape quotes, backslashes and line breaks."""
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    escaped = escaped.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    return '"' + escaped + '"'


class TokenStream:
    """Cursor over a token list with the usual peek/advance/expect helpers."""

    def __init__(self, tokens: List[Token]):
        self._tokens = tokens
        self._index = 0

    @property
    def token(self) -> Token:
        return self._tokens[self._index]

    def advance(self) -> Token:
        token = self.token
        if token.kind != EOF:
            self._index += 1
        return token

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        token = self.token
        return token.kind == kind and (text is None or token.text == text)

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        if self.at(kind, text):
            return self.advance()
        return None

    def expect(self, kind: str, text: Optional[str] = None, what: Optional[str] = None) -> Token:
        if self.at(kind, text):
            return self.advance()
        self.fail(what or (f"'{text}'" if text else kind.lower()))

    def fail(self, expected: str):
        token = self.token
        raise ParseError(
            f"expected {expected}, found {token.describe()}",
            name=token.text,
            line=token.line,
            column=token.column,
        )
