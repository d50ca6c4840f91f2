"""Structural Java parser.

Not a full grammar: a deterministic token-stream walker that recovers the
structure the metrics need (types, members, statement counters, call sites).
Statement counters follow fixed token rules documented per counter; nested
and anonymous classes are parsed as separate classes and their tokens are
excluded from the enclosing method's counters.
"""

from __future__ import annotations

import re
from pathlib import Path

from .lexer import CHAR, IDENT, KEYWORD, NUMBER, OP, STRING, LexError, Token, parse_number_literal, tokenize
from .model import ClassInfo, ClassKind, FieldInfo, Invocation, MethodInfo, SourceUnit, StatementStats, UnitError

MODIFIER_KEYWORDS = frozenset(
    "public private protected static final abstract native synchronized transient volatile strictfp default sealed".split()
)

PRIMITIVE_TYPES = frozenset("boolean byte char short int long float double void var".split())

TYPE_DECL_KEYWORDS = frozenset(("class", "interface", "enum", "record"))

ASSIGNMENT_OPS = frozenset(("=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="))
MATH_OPS = frozenset(("+", "-", "*", "/", "%", "<<", ">>", ">>>"))
COMPARISON_OPS = frozenset(("==", "!=", "<", ">", "<=", ">="))
LOG_NAMES = frozenset(("Log", "log", "logger", "println", "printStackTrace"))

# a '(' counts as a parenthesized expression when it directly follows one of these
PAREN_EXPR_PREV = frozenset(
    (
        "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
        "==", "!=", "<", ">", "<=", ">=", "+", "-", "*", "/", "%", "<<", ">>", ">>>",
        "&&", "||", "!", "&", "|", "^", "~", "?", ":", ",", "(", "->",
        "return", "case", "yield",
    )
)

GENERIC_INNER_OK = frozenset((",", ".", "?", "&", "[", "]", "@", "<", ">", ">>", ">>>"))
GENERIC_FOLLOW_OK = frozenset(("(", ")", ".", "::", ",", "[", ";"))

_WORD_SPLIT = re.compile(r"[^0-9A-Za-z]+")
_CAMEL_SPLIT = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")


def split_words(text: str) -> list[str]:
    """Case-folded word fragments: non-alphanumeric boundaries + camelCase."""
    words = []
    for chunk in _WORD_SPLIT.split(text):
        if not chunk:
            continue
        for part in _CAMEL_SPLIT.split(chunk):
            if part:
                words.append(part.lower())
    return words


class ParseError(Exception):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class _Parser:
    def __init__(self, path: str, text: str):
        self.path = path
        self.text = text
        self.toks, self.code_lines = tokenize(text)
        self.n = len(self.toks)
        self.i = 0
        self.unit = SourceUnit(path=path)
        self.anon_counter: dict[str, int] = {}
        lines = text.splitlines()
        self.line_lengths = {ln: len(line.rstrip()) for ln, line in enumerate(lines, start=1)}

    # ------------------------------------------------------------------ utils

    def peek(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.toks[j] if j < self.n else None

    def at(self, value: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok is not None and tok.value == value

    def advance(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.peek()
        if tok is None or tok.value != value:
            line = tok.line if tok else (self.toks[-1].line if self.toks else 1)
            raise ParseError(f"expected {value!r}", line)
        return self.advance()

    def eof(self) -> bool:
        return self.i >= self.n

    def loc_of_span(self, start_line: int, end_line: int) -> int:
        return sum(1 for ln in self.code_lines if start_line <= ln <= end_line)

    # ------------------------------------------------------- low-level pieces

    def skip_annotation(self) -> None:
        """At '@': consume annotation, its dotted name, and any argument list."""
        self.advance()
        if self.at("interface"):
            raise ParseError("annotation-type declaration reached skip_annotation", self.peek().line)
        while self.peek() and self.peek().kind in (IDENT, KEYWORD):
            self.advance()
            if self.at("."):
                self.advance()
                continue
            break
        if self.at("("):
            self.skip_balanced("(", ")")

    def skip_balanced(self, open_v: str, close_v: str) -> None:
        tok = self.expect(open_v)
        depth = 1
        while depth:
            if self.eof():
                raise ParseError(f"unbalanced {open_v!r}", tok.line)
            v = self.advance().value
            if v == open_v:
                depth += 1
            elif v == close_v:
                depth -= 1

    def try_skip_generic(self, start: int, budget: int = 200) -> tuple[int, list[str]] | None:
        """If tokens[start] == '<' opens a plausible generic span, return
        (index after close, referenced dotted names inside); else None."""
        if start >= self.n or self.toks[start].value != "<":
            return None
        depth = 1
        j = start + 1
        refs: list[str] = []
        chain: list[str] = []
        steps = 0
        while j < self.n and depth > 0:
            steps += 1
            if steps > budget:
                return None
            tok = self.toks[j]
            v = tok.value
            if tok.kind == IDENT or (tok.kind == KEYWORD and (v in PRIMITIVE_TYPES or v in ("extends", "super"))):
                if tok.kind == IDENT:
                    chain.append(v)
                j += 1
                if j < self.n and self.toks[j].value == ".":
                    continue
                if chain:
                    refs.append(".".join(chain))
                    chain = []
                continue
            if chain:
                refs.append(".".join(chain))
                chain = []
            if v == "<":
                depth += 1
            elif v == ">":
                depth -= 1
            elif v == ">>":
                depth -= 2
            elif v == ">>>":
                depth -= 3
            elif v in GENERIC_INNER_OK:
                pass
            else:
                return None
            j += 1
        if depth != 0:
            return None
        nxt = self.toks[j] if j < self.n else None
        if nxt is not None and not (nxt.kind in (IDENT,) or nxt.value in GENERIC_FOLLOW_OK):
            return None
        return j, refs

    def parse_type(self) -> tuple[str, str, list[str]] | None:
        """Parse a type reference at the cursor.

        Returns (raw text, base dotted name, referenced names incl. generic
        arguments) or None when the cursor is not at a type. Consumes tokens
        only on success.
        """
        save = self.i
        refs: list[str] = []
        tok = self.peek()
        if tok is None:
            return None
        while tok is not None and tok.value == "@":
            self.skip_annotation()
            tok = self.peek()
        if tok is None:
            self.i = save
            return None
        if tok.kind == KEYWORD and tok.value in PRIMITIVE_TYPES:
            self.advance()
            base = tok.value
            raw = base
        elif tok.kind == IDENT:
            parts = [self.advance().value]
            while self.at(".") and self.peek(1) is not None and self.peek(1).kind == IDENT:
                self.advance()
                parts.append(self.advance().value)
            base = ".".join(parts)
            raw = base
            refs.append(base)
        else:
            self.i = save
            return None
        if self.at("<"):
            skipped = self.try_skip_generic(self.i)
            if skipped is None:
                self.i = save
                return None
            end, inner = skipped
            self.i = end
            refs.extend(inner)
            raw += "<>"
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()
            raw += "[]"
        return raw, base, refs

    # --------------------------------------------------------------- unit

    def parse(self) -> SourceUnit:
        if self.at("package"):
            self.advance()
            parts = []
            while self.peek() and not self.at(";"):
                if self.peek().kind in (IDENT, KEYWORD):
                    parts.append(self.advance().value)
                else:
                    self.advance()
            self.expect(";")
            self.unit.package = ".".join(p for p in parts if p != ".")
        while self.at("import"):
            self.advance()
            is_static = False
            if self.at("static"):
                is_static = True
                self.advance()
            parts = []
            while self.peek() and not self.at(";"):
                tok = self.advance()
                if tok.value == "*":
                    parts.append("*")
                elif tok.kind in (IDENT, KEYWORD):
                    parts.append(tok.value)
            self.expect(";")
            if not is_static and parts:
                self.unit.imports.append(".".join(parts))
        while not self.eof():
            start_i = self.i
            mods = self.collect_modifiers_and_annotations()
            tok = self.peek()
            if tok is None:
                break
            if tok.value in TYPE_DECL_KEYWORDS or (tok.value == "@" and self.at("interface", 1)):
                self.parse_type_decl(None, mods, start_i)
            else:
                self.advance()
        self.finish_unit()
        return self.unit

    def finish_unit(self) -> None:
        self.unit.code_line_count = len(self.code_lines)
        self.unit.code_line_lengths = [self.line_lengths.get(ln, 0) for ln in sorted(self.code_lines)]
        self.unit.identifiers = {t.value for t in self.toks if t.kind == IDENT}

    def collect_modifiers_and_annotations(self) -> set[str]:
        mods: set[str] = set()
        while True:
            tok = self.peek()
            if tok is None:
                return mods
            if tok.value == "@" and not self.at("interface", 1):
                self.skip_annotation()
                continue
            if tok.kind == KEYWORD and tok.value in MODIFIER_KEYWORDS:
                mods.add(self.advance().value)
                continue
            if tok.value == "non":  # non-sealed splits oddly; not a Java corpus concern
                self.advance()
                continue
            return mods

    # --------------------------------------------------------------- classes

    def qualified_name(self, enclosing: ClassInfo | None, simple: str) -> str:
        if enclosing is not None:
            base = f"{enclosing.qualified_name}.{simple}"
        elif self.unit.package:
            base = f"{self.unit.package}.{simple}"
        else:
            base = simple
        taken = {c.qualified_name for c in self.unit.classes}
        name = base
        k = 2
        while name in taken:
            name = f"{base}${k}"
            k += 1
        return name

    def parse_type_decl(self, enclosing: ClassInfo | None, mods: set[str], decl_start_i: int) -> ClassInfo:
        tok = self.peek()
        is_annotation_type = False
        if tok.value == "@":
            self.advance()
            self.expect("interface")
            keyword = "interface"
            is_annotation_type = True
        else:
            keyword = self.advance().value
        name_tok = self.peek()
        if name_tok is None or name_tok.kind != IDENT:
            raise ParseError(f"missing type name after {keyword!r}", tok.line)
        simple = self.advance().value
        if keyword == "interface" or is_annotation_type:
            kind = ClassKind.INTERFACE
        elif keyword == "enum":
            kind = ClassKind.ENUM
        elif enclosing is None:
            kind = ClassKind.NORMAL
        else:
            kind = ClassKind.INNER
        cls = ClassInfo(
            qualified_name=self.qualified_name(enclosing, simple),
            simple_name=simple,
            kind=kind,
            package=self.unit.package,
            unit_path=self.path,
            superclass_name=None,
            interface_names=[],
            fields=[],
            methods=[],
            loc=1,
            start_line=self.toks[decl_start_i].line,
            end_line=name_tok.line,
            modifiers=mods,
            enclosing=enclosing.qualified_name if enclosing else None,
            declared_with_class_keyword=(keyword in ("class", "record")),
        )
        self.unit.classes.append(cls)
        if self.at("<"):
            skipped = self.try_skip_generic(self.i)
            if skipped is not None:
                self.i = skipped[0]
            else:
                self.skip_balanced("<", ">")
        if keyword == "record" and self.at("("):
            self.advance()
            while not self.at(")"):
                parsed = self.parse_type()
                if parsed is None:
                    self.advance()
                    continue
                raw, base, refs = parsed
                cls.type_refs.update(refs)
                if self.peek() and self.peek().kind == IDENT:
                    comp = self.advance().value
                    cls.fields.append(FieldInfo(name=comp, raw_type=base, modifiers={"private", "final"}))
                if self.at(","):
                    self.advance()
            self.expect(")")
        if self.at("extends"):
            self.advance()
            parsed = self.parse_type()
            if parsed is not None:
                raw, base, refs = parsed
                cls.type_refs.update(refs)
                if kind == ClassKind.INTERFACE:
                    cls.interface_names.append(base)
                    while self.at(","):
                        self.advance()
                        more = self.parse_type()
                        if more is None:
                            break
                        cls.interface_names.append(more[1])
                        cls.type_refs.update(more[2])
                else:
                    cls.superclass_name = base
        if self.at("implements"):
            self.advance()
            while True:
                parsed = self.parse_type()
                if parsed is None:
                    break
                cls.interface_names.append(parsed[1])
                cls.type_refs.update(parsed[2])
                if self.at(","):
                    self.advance()
                    continue
                break
        if self.at("permits"):
            self.advance()
            while self.peek() and not self.at("{"):
                self.advance()
        body_start_i = self.i
        self.parse_class_body(cls)
        end_tok = self.toks[self.i - 1]
        cls.end_line = end_tok.line
        cls.loc = max(1, self.loc_of_span(cls.start_line, cls.end_line))
        words: set[str] = set()
        for t in self.toks[decl_start_i : self.i]:
            if t.kind in (IDENT, KEYWORD, NUMBER, STRING):
                words.update(split_words(t.value))
        cls.unique_word_count = len(words)
        return cls

    def parse_class_body(self, cls: ClassInfo) -> None:
        self.expect("{")
        if cls.kind == ClassKind.ENUM:
            self.parse_enum_constants(cls)
        while True:
            tok = self.peek()
            if tok is None:
                raise ParseError(f"unterminated body of {cls.simple_name}", cls.start_line)
            if tok.value == "}":
                self.advance()
                return
            if tok.value == ";":
                self.advance()
                continue
            self.parse_member(cls)

    def parse_enum_constants(self, cls: ClassInfo) -> None:
        while True:
            tok = self.peek()
            if tok is None or tok.value in (";", "}"):
                if tok is not None and tok.value == ";":
                    self.advance()
                return
            if tok.value == "@":
                self.skip_annotation()
                continue
            if tok.kind != IDENT:
                return
            self.advance()  # constant name
            if self.at("("):
                stats = StatementStats()
                sink = MethodInfo(
                    name="<enum-args>", is_constructor=False, parameters=[], modifiers=set(),
                    return_type=None, stats=stats, invocations=[], loc=1,
                    start_line=tok.line, end_line=tok.line, has_body=True,
                )
                close = self.find_matching_paren(self.i)
                self.scan_expression_tokens(cls, sink, self.i + 1, close)
                self.i = close + 1
            if self.at("{"):
                self.parse_anonymous_class(cls, cls.simple_name, tok.line)
            if self.at(","):
                self.advance()
                continue

    def parse_member(self, cls: ClassInfo) -> None:
        start_i = self.i
        mods = self.collect_modifiers_and_annotations()
        tok = self.peek()
        if tok is None:
            return
        if tok.value in TYPE_DECL_KEYWORDS or (tok.value == "@" and self.at("interface", 1)):
            self.parse_type_decl(cls, mods, self.i)
            return
        if tok.value == "{":
            # static or instance initializer: discover classes, discard stats
            stats = StatementStats()
            sink = MethodInfo(
                name="<initializer>", is_constructor=False, parameters=[], modifiers=mods,
                return_type=None, stats=stats, invocations=[], loc=1,
                start_line=tok.line, end_line=tok.line, has_body=True,
            )
            self.scan_body(cls, sink)
            return
        if tok.value == "<":
            skipped = self.try_skip_generic(self.i)
            if skipped is not None:
                self.i = skipped[0]
            else:
                self.skip_balanced("<", ">")
            tok = self.peek()
            if tok is None:
                return
        if tok.kind == IDENT and tok.value == cls.simple_name and self.at("(", 1):
            name = self.advance().value
            self.parse_method(cls, mods, None, name, tok, is_constructor=True, decl_start_i=start_i)
            return
        parsed = self.parse_type()
        if parsed is None:
            self.advance()  # recovery: drop one token
            return
        raw, base, refs = parsed
        cls.type_refs.update(refs)
        name_tok = self.peek()
        if name_tok is None or name_tok.kind != IDENT:
            return
        name = self.advance().value
        if self.at("("):
            self.parse_method(cls, mods, raw, name, name_tok, is_constructor=False, decl_start_i=start_i)
        else:
            self.parse_fields(cls, mods, base, name)

    def find_matching_paren(self, open_i: int) -> int:
        depth = 0
        j = open_i
        while j < self.n:
            v = self.toks[j].value
            if v == "(":
                depth += 1
            elif v == ")":
                depth -= 1
                if depth == 0:
                    return j
            j += 1
        raise ParseError("unbalanced '('", self.toks[open_i].line)

    def parse_fields(self, cls: ClassInfo, mods: set[str], base_type: str, first_name: str) -> None:
        """Field declarator list: NAME [= init] (, NAME [= init])* ';'."""
        name = first_name
        while True:
            while self.at("[") and self.at("]", 1):
                self.advance()
                self.advance()
            values: list[float] = []
            if self.at("="):
                self.advance()
                self.scan_field_initializer(cls, values)
            cls.fields.append(FieldInfo(name=name, raw_type=base_type, modifiers=set(mods), init_number_values=values))
            if self.at(","):
                self.advance()
                nxt = self.peek()
                if nxt is not None and nxt.kind == IDENT:
                    name = self.advance().value
                    continue
            break
        if self.at(";"):
            self.advance()

    def scan_field_initializer(self, cls: ClassInfo, values: list[float]) -> None:
        """Consume an initializer expression up to a top-level ',' or ';'."""
        depth = 0
        while not self.eof():
            tok = self.peek()
            v = tok.value
            if depth == 0 and v in (",", ";"):
                return
            if v in ("(", "[", "{"):
                depth += 1
                self.advance()
                continue
            if v in (")", "]", "}"):
                if depth == 0:
                    return
                depth -= 1
                self.advance()
                continue
            if tok.kind == NUMBER:
                values.append(parse_number_literal(v))
                self.advance()
                continue
            if v == "new":
                self.handle_new_in_expression(cls, None)
                continue
            self.advance()

    def handle_new_in_expression(self, cls: ClassInfo, meth: MethodInfo | None) -> None:
        """At 'new': consume the created type; parse anonymous bodies."""
        new_tok = self.advance()
        type_start = self.i
        parsed = self.parse_type()
        if parsed is None:
            return
        raw, base, refs = parsed
        cls.type_refs.update(refs)
        if meth is not None:
            words = getattr(meth, "_word_set", None)
            for t in self.toks[type_start : self.i]:
                if t.kind == IDENT:
                    meth.stats.identifier_lengths.append(len(t.value))
                if words is not None and t.kind in (IDENT, KEYWORD, NUMBER, STRING):
                    words.update(split_words(t.value))
        if self.at("["):
            return  # array creation; indices/initializer handled by caller
        if self.at("("):
            close = self.find_matching_paren(self.i)
            after = self.toks[close + 1] if close + 1 < self.n else None
            open_i = self.i
            if after is not None and after.value == "{":
                if meth is not None:
                    self.scan_expression_tokens(cls, meth, open_i + 1, close)
                else:
                    sink_stats = StatementStats()
                    sink = MethodInfo(
                        name="<init-expr>", is_constructor=False, parameters=[], modifiers=set(),
                        return_type=None, stats=sink_stats, invocations=[], loc=1,
                        start_line=new_tok.line, end_line=new_tok.line, has_body=True,
                    )
                    self.scan_expression_tokens(cls, sink, open_i + 1, close)
                self.i = close + 1
                self.parse_anonymous_class(cls, base, new_tok.line)

    def parse_anonymous_class(self, enclosing: ClassInfo, supertype: str, line: int) -> ClassInfo:
        count = self.anon_counter.get(enclosing.qualified_name, 0) + 1
        self.anon_counter[enclosing.qualified_name] = count
        cls = ClassInfo(
            qualified_name=f"{enclosing.qualified_name}${count}",
            simple_name=f"{enclosing.simple_name}${count}",
            kind=ClassKind.ANONYMOUS,
            package=self.unit.package,
            unit_path=self.path,
            superclass_name=supertype,
            interface_names=[],
            fields=[],
            methods=[],
            loc=1,
            start_line=line,
            end_line=line,
            modifiers=set(),
            enclosing=enclosing.qualified_name,
            declared_with_class_keyword=False,
        )
        self.unit.classes.append(cls)
        start_i = self.i
        self.parse_class_body(cls)
        cls.end_line = self.toks[self.i - 1].line
        cls.loc = max(1, self.loc_of_span(cls.start_line, cls.end_line))
        words: set[str] = set()
        for t in self.toks[start_i : self.i]:
            if t.kind in (IDENT, KEYWORD, NUMBER, STRING):
                words.update(split_words(t.value))
        cls.unique_word_count = len(words)
        return cls

    # --------------------------------------------------------------- methods

    def parse_method(
        self,
        cls: ClassInfo,
        mods: set[str],
        return_type: str | None,
        name: str,
        name_tok: Token,
        is_constructor: bool,
        decl_start_i: int,
    ) -> None:
        params: list[tuple[str, str]] = []
        self.expect("(")
        while not self.at(")"):
            if self.at("@"):
                self.skip_annotation()
                continue
            if self.at("final"):
                self.advance()
                continue
            parsed = self.parse_type()
            if parsed is None:
                self.advance()
                continue
            raw, base, refs = parsed
            cls.type_refs.update(refs)
            if self.at("..."):
                self.advance()
            ptok = self.peek()
            if ptok is not None and ptok.kind == IDENT:
                pname = self.advance().value
                while self.at("[") and self.at("]", 1):
                    self.advance()
                    self.advance()
                params.append((pname, base))
            if self.at(","):
                self.advance()
        self.expect(")")
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()
        if self.at("throws"):
            self.advance()
            while True:
                parsed = self.parse_type()
                if parsed is None:
                    break
                cls.type_refs.update(parsed[2])
                if self.at(","):
                    self.advance()
                    continue
                break
        stats = StatementStats()
        start_line = self.toks[decl_start_i].line
        meth = MethodInfo(
            name=name,
            is_constructor=is_constructor,
            parameters=params,
            modifiers=mods,
            return_type=return_type,
            stats=stats,
            invocations=[],
            loc=1,
            start_line=start_line,
            end_line=name_tok.line,
            has_body=False,
            declaring_class=cls.qualified_name,
        )
        if self.at("default"):  # annotation-type member default value
            while self.peek() and not self.at(";"):
                self.advance()
        if self.at("{"):
            meth.has_body = True
            self.scan_body(cls, meth)
        elif self.at(";"):
            self.advance()
        meth.end_line = self.toks[self.i - 1].line
        meth.loc = max(1, self.loc_of_span(meth.start_line, meth.end_line))
        meth.stats.line_lengths = [
            self.line_lengths.get(ln, 0)
            for ln in sorted(self.code_lines)
            if meth.start_line <= ln <= meth.end_line
        ]
        cls.methods.append(meth)

    # ------------------------------------------------------------ body walk

    def scan_body(self, cls: ClassInfo, meth: MethodInfo) -> None:
        """Scan a braced body starting at '{'; cursor ends after matching '}'."""
        self.expect("{")
        self._walk(cls, meth)

    def scan_expression_tokens(self, cls: ClassInfo, meth: MethodInfo, start: int, end: int) -> None:
        """Scan tokens[start:end] (an argument list span) with the same rules."""
        save = self.i
        self.i = start
        self._walk(cls, meth, stop_index=end)
        self.i = save

    def _walk(self, cls: ClassInfo, meth: MethodInfo, stop_index: int | None = None) -> None:
        stats = meth.stats
        words: set[str] = getattr(meth, "_word_set", None) or set()
        meth._word_set = words  # accumulate across nested walks of this method
        depth = 0
        prev: Token | None = None
        do_stack: list[int] = []
        switch_stack: list[list] = []  # [open_depth, has_default]
        pending_switch_braces: list[int] = []  # token index where a switch block '{' is expected

        def note_words(tok: Token) -> None:
            if tok.kind in (IDENT, KEYWORD, NUMBER, STRING):
                words.update(split_words(tok.value))

        while True:
            if stop_index is not None and self.i >= stop_index:
                break
            if self.eof():
                raise ParseError("unterminated body", self.toks[-1].line if self.toks else 1)
            tok = self.peek()
            v = tok.value

            if v == "}":
                if stop_index is None and depth == 0:
                    self.advance()
                    break
                self.advance()
                depth -= 1
                if switch_stack and switch_stack[-1][0] == depth + 1:
                    _, has_default = switch_stack.pop()
                    if not has_default:
                        stats.missing_default_count += 1
                note_words(tok)
                prev = tok
                continue

            if v == "{":
                idx = self.i
                self.advance()
                depth += 1
                if depth > stats.max_nesting:
                    stats.max_nesting = depth
                if pending_switch_braces and pending_switch_braces[-1] == idx:
                    pending_switch_braces.pop()
                    switch_stack.append([depth, False])
                prev = tok
                continue

            if v == "@":
                self.skip_annotation()
                continue

            if v == "new":
                note_words(tok)
                self.handle_new_in_expression(cls, meth)
                prev = tok
                continue

            if tok.kind == KEYWORD and v in TYPE_DECL_KEYWORDS:
                # local class declaration; parsed as its own class
                self.parse_type_decl(cls, set(), self.i)
                prev = None
                continue

            if tok.kind == KEYWORD:
                note_words(tok)
                if v == "if":
                    stats.if_count += 1
                elif v == "for":
                    stats.loop_count += 1
                elif v == "do":
                    stats.loop_count += 1
                    do_stack.append(depth)
                elif v == "while":
                    if do_stack and do_stack[-1] == depth and prev is not None and prev.value in ("}", ";"):
                        do_stack.pop()
                    else:
                        stats.loop_count += 1
                elif v == "switch":
                    nxt = self.peek(1)
                    if nxt is not None and nxt.value == "(":
                        close = self.find_matching_paren(self.i + 1)
                        if close + 1 < self.n and self.toks[close + 1].value == "{":
                            pending_switch_braces.append(close + 1)
                elif v == "case":
                    stats.case_count += 1
                elif v == "default":
                    if switch_stack:
                        switch_stack[-1][1] = True
                elif v == "try":
                    stats.try_catch_count += 1
                elif v == "catch":
                    stats.catch_count += 1
                    self.advance()
                    if self.at("("):
                        close = self.find_matching_paren(self.i)
                        self.i += 1
                        while self.i < close:
                            parsed = self.parse_type()
                            if parsed is None:
                                self.advance()
                            else:
                                cls.type_refs.update(parsed[2])
                        self.i = close + 1
                        if self.at("{") and self.at("}", 1):
                            stats.empty_catch_count += 1
                    prev = tok
                    continue
                elif v == "return":
                    stats.return_count += 1
                elif v in PRIMITIVE_TYPES or v == "final":
                    if self.try_variable_declaration(cls, meth, prev):
                        prev = self.toks[self.i - 1]
                        continue
                self.advance()
                prev = tok
                continue

            if tok.kind == NUMBER:
                stats.number_literal_count += 1
                stats.number_literal_values.append(parse_number_literal(v))
                note_words(tok)
                self.advance()
                prev = tok
                continue

            if tok.kind == STRING:
                stats.string_literal_count += 1
                note_words(tok)
                self.advance()
                prev = tok
                continue

            if tok.kind == CHAR:
                self.advance()
                prev = tok
                continue

            if tok.kind == IDENT:
                if self.try_variable_declaration(cls, meth, prev):
                    prev = self.toks[self.i - 1]
                    continue
                note_words(tok)
                stats.identifier_lengths.append(len(v))
                nxt = self.peek(1)
                if nxt is not None and nxt.value == "(":
                    self.record_invocation(cls, meth, tok, prev)
                    self.advance()
                    prev = tok
                    continue
                if prev is not None and prev.value == ".":
                    before = self.toks[self.i - 2] if self.i >= 2 else None
                    if before is not None and before.value == "this":
                        meth.used_idents.add(v)
                else:
                    meth.used_idents.add(v)
                self.advance()
                prev = tok
                continue

            # operators and punctuation
            if v == "<":
                skipped = self.try_skip_generic(self.i, budget=60)
                if skipped is not None:
                    end, refs = skipped
                    for t in self.toks[self.i : end]:
                        note_words(t)
                        if t.kind == IDENT:
                            stats.identifier_lengths.append(len(t.value))
                    cls.type_refs.update(refs)
                    self.i = end
                    prev = self.toks[end - 1]
                    continue
                stats.comparison_count += 1
            elif v in COMPARISON_OPS:
                stats.comparison_count += 1
            elif v in ASSIGNMENT_OPS:
                stats.assignment_count += 1
                if v != "=":
                    stats.math_op_count += 1
            elif v in MATH_OPS:
                stats.math_op_count += 1
            elif v in ("&&", "||"):
                stats.logical_op_count += 1
            elif v == "?":
                stats.ternary_count += 1
            elif v == "->":
                if not self.arrow_is_switch_rule():
                    stats.lambda_count += 1
            elif v == "(":
                if prev is not None and prev.value in PAREN_EXPR_PREV:
                    try:
                        close = self.find_matching_paren(self.i)
                        is_lambda_params = close + 1 < self.n and self.toks[close + 1].value == "->"
                    except ParseError:
                        is_lambda_params = False
                    if not is_lambda_params:
                        stats.parenthesized_expr_count += 1
            self.advance()
            prev = tok

        stats.unique_word_count = len(words)

    def arrow_is_switch_rule(self) -> bool:
        """True when the '->' at the cursor belongs to a switch case/default rule."""
        j = self.i - 1
        depth = 0
        steps = 0
        while j >= 0 and steps < 80:
            v = self.toks[j].value
            if v in (")", "]"):
                depth += 1
            elif v in ("(", "["):
                if depth == 0:
                    return False
                depth -= 1
            elif depth == 0:
                if v in (";", "{", "}"):
                    return False
                if v in ("case", "default"):
                    return True
            j -= 1
            steps += 1
        return False

    def try_variable_declaration(self, cls: ClassInfo, meth: MethodInfo, prev: Token | None) -> bool:
        """Recognize ``[final] Type name`` at a statement position.

        Consumes through the first declarator name on success; trailing
        declarators in the same statement are detected by lookahead so each
        one increments the counter.
        """
        if prev is not None and prev.value not in (";", "{", "}", "(", ":"):
            return False
        save = self.i
        if self.at("final"):
            self.advance()
        parsed = self.parse_type()
        if parsed is None:
            self.i = save
            return False
        raw, base, refs = parsed
        name_tok = self.peek()
        follow = self.peek(1)
        if (
            name_tok is None
            or name_tok.kind != IDENT
            or follow is None
            or follow.value not in ("=", ";", ":", ",")
        ):
            self.i = save
            return False
        self.advance()
        cls.type_refs.update(refs)
        stats = meth.stats
        stats.variable_decl_count += 1
        stats.identifier_lengths.append(len(name_tok.value))
        meth.local_var_types.setdefault(name_tok.value, base)
        words = getattr(meth, "_word_set", None)
        if words is not None:
            for t in self.toks[save : self.i]:
                if t.kind in (IDENT, KEYWORD, NUMBER, STRING):
                    words.update(split_words(t.value))
            for t in self.toks[save : self.i - 1]:
                if t.kind == IDENT:
                    stats.identifier_lengths.append(len(t.value))
        # count additional declarators: scan ahead to the statement end
        j = self.i
        depth = 0
        expecting = False
        while j < self.n:
            v = self.toks[j].value
            if v in ("(", "[", "{"):
                depth += 1
            elif v in (")", "]", "}"):
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0:
                if v in (";", ":"):
                    break
                if v == ",":
                    expecting = True
                elif expecting and self.toks[j].kind == IDENT:
                    after = self.toks[j + 1].value if j + 1 < self.n else ""
                    if after in ("=", ",", ";"):
                        stats.variable_decl_count += 1
                        meth.local_var_types.setdefault(v, base)
                    expecting = False
                else:
                    expecting = False
            j += 1
        return True

    def record_invocation(self, cls: ClassInfo, meth: MethodInfo, name_tok: Token, prev: Token | None) -> None:
        open_i = self.i + 1
        try:
            close = self.find_matching_paren(open_i)
        except ParseError:
            return
        arg_count = 0
        depth = 0
        has_content = False
        for j in range(open_i + 1, close):
            v = self.toks[j].value
            if v in ("(", "[", "{"):
                depth += 1
            elif v in (")", "]", "}"):
                depth -= 1
            elif v == "," and depth == 0:
                arg_count += 1
            has_content = True
        if has_content:
            arg_count += 1
        receiver: str | None = None
        if prev is not None and prev.value == ".":
            k = self.i - 2
            before = self.toks[k] if k >= 0 else None
            if before is None:
                receiver = "<expr>"
            elif before.value == "this":
                receiver = None
            elif before.value == "super":
                receiver = "super"
            elif before.kind == IDENT:
                parts = [before.value]
                k -= 1
                while k >= 1 and self.toks[k].value == "." and self.toks[k - 1].kind == IDENT:
                    parts.append(self.toks[k - 1].value)
                    k -= 2
                if k >= 0 and self.toks[k].value == "new":
                    receiver = "<expr>"
                else:
                    receiver = ".".join(reversed(parts))
            else:
                receiver = "<expr>"
        inv = Invocation(receiver=receiver, name=name_tok.value, arg_count=arg_count, line=name_tok.line)
        meth.invocations.append(inv)
        first_seg = receiver.split(".")[0] if receiver and receiver not in ("<expr>", "super") else None
        if first_seg:
            meth.used_idents.add(first_seg)
        if name_tok.value in LOG_NAMES or (first_seg in LOG_NAMES) or (receiver and receiver.split(".")[-1] in LOG_NAMES):
            meth.stats.log_statement_count += 1


def parse_unit(path: str | Path, text: str | None = None, rel_path: str | None = None) -> SourceUnit:
    """Parse one Java file into a SourceUnit.

    Syntax problems never raise: the unit comes back with ``error`` set and
    no classes, so a corpus run can keep going.
    """
    path = Path(path)
    rel = rel_path or str(path)
    if text is None:
        text = path.read_text(encoding="utf-8", errors="replace")
    try:
        parser = _Parser(rel, text)
    except LexError as exc:
        unit = SourceUnit(path=rel)
        unit.error = UnitError(str(exc), exc.line)
        return unit
    try:
        return parser.parse()
    except (ParseError, RecursionError) as exc:
        unit = SourceUnit(path=rel)
        if isinstance(exc, ParseError):
            unit.error = UnitError(str(exc), exc.line)
        else:
            unit.error = UnitError("nesting too deep", 1)
        return unit
