"""Tokenizer for Java source.

Produces a flat token stream with comments stripped; tracks which physical
lines carry code so LOC can be computed per span. Handles string/char
literals (including text blocks), all numeric literal forms, and
longest-match operators.
"""

from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while var record sealed
    permits yield""".split()
)

PRIMITIVES = frozenset("boolean byte char short int long float double void var".split())

# Longest-match first.
OPERATORS = [
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "<<", ">>",
    "<=", ">=", "==", "!=", "&&", "||", "++", "--", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^",
    "~", "?", ":", ";", ",", ".", "(", ")", "{", "}", "[", "]", "@",
]

IDENT = "ident"
NUMBER = "number"
STRING = "string"
CHAR = "char"
OP = "op"
KEYWORD = "keyword"


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


class LexError(Exception):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def tokenize(text: str) -> tuple[list[Token], set[int]]:
    """Lex ``text`` into tokens plus the set of 1-based lines carrying code."""
    tokens: list[Token] = []
    code_lines: set[int] = set()
    i = 0
    line = 1
    col = 1
    n = len(text)

    def advance(k: int) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    def emit(kind: str, value: str, tline: int, tcol: int) -> None:
        tokens.append(Token(kind, value, tline, tcol))
        code_lines.add(tline)

    while i < n:
        ch = text[i]
        if ch in " \t\r\n\f":
            advance(1)
            continue
        if ch == "/" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "/":
                while i < n and text[i] != "\n":
                    advance(1)
                continue
            if nxt == "*":
                advance(2)
                while i < n:
                    if text[i] == "*" and i + 1 < n and text[i + 1] == "/":
                        advance(2)
                        break
                    advance(1)
                else:
                    raise LexError("unterminated block comment", line)
                continue
        if ch == '"':
            tline, tcol = line, col
            if text.startswith('"""', i):
                advance(3)
                start = i
                while i < n and not text.startswith('"""', i):
                    advance(1)
                if i >= n:
                    raise LexError("unterminated text block", tline)
                value = text[start:i]
                advance(3)
                emit(STRING, value, tline, tcol)
                for ln in range(tline, line + 1):
                    code_lines.add(ln)
                continue
            advance(1)
            start = i
            while i < n and text[i] != '"':
                if text[i] == "\n":
                    raise LexError("unterminated string literal", tline)
                if text[i] == "\\":
                    advance(2)
                else:
                    advance(1)
            if i >= n:
                raise LexError("unterminated string literal", tline)
            value = text[start:i]
            advance(1)
            emit(STRING, value, tline, tcol)
            continue
        if ch == "'":
            tline, tcol = line, col
            advance(1)
            start = i
            while i < n and text[i] != "'":
                if text[i] == "\n":
                    raise LexError("unterminated char literal", tline)
                if text[i] == "\\":
                    advance(2)
                else:
                    advance(1)
            if i >= n:
                raise LexError("unterminated char literal", tline)
            value = text[start:i]
            advance(1)
            emit(CHAR, value, tline, tcol)
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            tline, tcol = line, col
            start = i
            if text.startswith(("0x", "0X"), i):
                advance(2)
                while i < n and (text[i] in "0123456789abcdefABCDEF_"):
                    advance(1)
            elif text.startswith(("0b", "0B"), i):
                advance(2)
                while i < n and text[i] in "01_":
                    advance(1)
            else:
                while i < n and (text[i].isdigit() or text[i] == "_"):
                    advance(1)
                if i < n and text[i] == "." and (i + 1 >= n or text[i + 1] != "."):
                    advance(1)
                    while i < n and (text[i].isdigit() or text[i] == "_"):
                        advance(1)
                if i < n and text[i] in "eE":
                    j = i + 1
                    if j < n and text[j] in "+-":
                        j += 1
                    if j < n and text[j].isdigit():
                        advance(j - i)
                        while i < n and (text[i].isdigit() or text[i] == "_"):
                            advance(1)
            if i < n and text[i] in "lLfFdD":
                advance(1)
            emit(NUMBER, text[start:i], tline, tcol)
            continue
        if ch.isalpha() or ch == "_" or ch == "$":
            tline, tcol = line, col
            start = i
            while i < n and (text[i].isalnum() or text[i] in "_$"):
                advance(1)
            word = text[start:i]
            emit(KEYWORD if word in KEYWORDS else IDENT, word, tline, tcol)
            continue
        for op in OPERATORS:
            if text.startswith(op, i):
                tline, tcol = line, col
                advance(len(op))
                emit(OP, op, tline, tcol)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", line)
    return tokens, code_lines


def parse_number_literal(value: str) -> float:
    """Numeric value of a Java literal token (suffix and underscores removed)."""
    v = value.replace("_", "")
    if v and v[-1] in "lLfFdD":
        v = v[:-1]
    try:
        if v.lower().startswith("0x"):
            return float(int(v, 16))
        if v.lower().startswith("0b"):
            return float(int(v, 2))
        if v.startswith("0") and len(v) > 1 and v.isdigit():
            return float(int(v, 8))
        return float(v)
    except ValueError:
        return float("nan")
