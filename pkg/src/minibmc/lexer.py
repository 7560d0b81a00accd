"""Tokenizer for the MiniC subset.

Operates on already-preprocessed text: no #directives, no string literals.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import Diagnostic, DiagnosticsError, SourceUnit

KEYWORDS = {
    "int", "char", "short", "long", "unsigned", "signed", "void",
    "float", "double", "_Bool",
    "struct", "union", "enum",
    "if", "else", "while", "for", "do", "return",
    # recognized so that they can be rejected as unsupported, not as typos
    "break", "continue", "switch", "case", "default", "goto", "sizeof",
    "static", "const", "volatile", "typedef", "extern", "register", "inline",
}

# longest match first
PUNCT = [
    "<<=", ">>=", "...",
    "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "++", "--", "->",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^", "~",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "?", ":",
]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<fnum>(\d+\.\d*|\.\d+)([eE][+-]?\d+)?[fFlL]?|\d+[eE][+-]?\d+[fFlL]?)
  | (?P<num>0[xX][0-9a-fA-F]+[uUlL]*|\d+[uUlL]*)
  | (?P<char>'(\\.|[^\\'])')
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>""" + "|".join(re.escape(p) for p in PUNCT) + r""")
    """,
    re.VERBOSE | re.DOTALL,
)

_ESCAPES = {"n": 10, "t": 9, "r": 13, "0": 0, "\\": 92, "'": 39, '"': 34,
            "a": 7, "b": 8, "f": 12, "v": 11}


@dataclass
class Token:
    kind: str  # "id", "int", "float", "char", keyword text, or punctuation text
    text: str
    offset: int
    value: int | Fraction | None = None
    suffix: str = ""  # integer/float suffix letters, lowercased

    def __repr__(self) -> str:
        return f"Token({self.kind!r}, {self.text!r})"


def tokenize(src: SourceUnit) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    text = src.text
    diags: list[Diagnostic] = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            diags.append(Diagnostic("syntax", f"unexpected character {text[pos]!r}", src.loc(pos)))
            raise DiagnosticsError(diags)
        if m.lastgroup in ("ws", "comment"):
            pos = m.end()
            continue
        tok_text = m.group(m.lastgroup)
        kind = m.lastgroup
        value: int | Fraction | None = None
        suffix = ""
        if kind == "num":
            body = tok_text.rstrip("uUlL")
            suffix = tok_text[len(body):].lower()
            value = int(body, 0)
        elif kind == "fnum":
            body = tok_text
            if body[-1] in "fFlL":
                suffix = body[-1].lower()
                body = body[:-1]
            value = _fraction_of(body)
        elif kind == "char":
            kind = "num"
            value = _char_value(tok_text, src, pos, diags)
        elif kind == "id":
            if tok_text in KEYWORDS:
                kind = tok_text
        else:  # punct
            kind = tok_text
        tokens.append(Token(kind, tok_text, pos, value, suffix))
        pos = m.end()
    tokens.append(Token("eof", "", pos))
    if diags:
        raise DiagnosticsError(diags)
    return tokens


def _fraction_of(body: str) -> Fraction:
    if "e" in body or "E" in body:
        mant, _, exp = body.replace("E", "e").partition("e")
        base = Fraction(mant if mant not in ("", ".") else "0")
        return base * Fraction(10) ** int(exp)
    return Fraction(body if body not in ("", ".") else "0")


def _char_value(tok_text: str, src: SourceUnit, pos: int, diags: list[Diagnostic]) -> int:
    inner = tok_text[1:-1]
    if inner.startswith("\\"):
        esc = inner[1:]
        if esc in _ESCAPES:
            return _ESCAPES[esc]
        if esc.startswith("x"):
            return int(esc[1:], 16) & 0xFF
        diags.append(Diagnostic("syntax", f"unknown escape {inner!r}", src.loc(pos)))
        return 0
    return ord(inner)
