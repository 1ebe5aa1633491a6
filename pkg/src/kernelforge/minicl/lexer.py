"""MiniCL tokenizer."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..source import Diagnostic, Loc, SourceUnit

KEYWORDS = {
    "kernel", "void", "global", "pipe", "read_only", "write_only", "queue_t",
    "int", "uint", "float", "bool", "true", "false",
    "if", "else", "for", "while",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<float>(\d+\.\d*|\.\d+)([eE][+-]?\d+)?[fF]?|\d+[eE][+-]?\d+[fF]?)
  | (?P<int>(0[xX][0-9a-fA-F]+|\d+)[uU]?)
  | (?P<string>"[^"\n]*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>&&|\|\||==|!=|<=|>=|[{}()\[\];,=<>!+\-*/%])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass
class Token:
    kind: str   # keyword/punct lexeme, or "ident" | "int" | "float" | "string" | "eof"
    text: str
    loc: Loc

    def __repr__(self) -> str:
        return f"Token({self.kind!r}, {self.text!r}, {self.loc})"


def tokenize(src: SourceUnit) -> tuple[list[Token], list[Diagnostic]]:
    """Scan the whole unit; bad characters become error diagnostics."""
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    pos = 0
    text = src.text
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            diags.append(Diagnostic("error", f"unexpected character {text[pos]!r}", src.loc_at(pos)))
            pos += 1
            continue
        kind = m.lastgroup
        lexeme = m.group()
        loc = src.loc_at(pos)
        pos = m.end()
        if kind in ("ws", "comment"):
            continue
        if kind == "ident":
            tokens.append(Token(lexeme if lexeme in KEYWORDS else "ident", lexeme, loc))
        elif kind == "punct":
            tokens.append(Token(lexeme, lexeme, loc))
        else:
            # literal kinds are suffixed so they never collide with the
            # 'int'/'float' type keywords
            tokens.append(Token(kind + "lit", lexeme, loc))
    tokens.append(Token("eof", "", src.loc_at(len(text))))
    return tokens, diags
