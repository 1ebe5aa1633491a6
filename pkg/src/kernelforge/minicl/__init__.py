from .ast import Program
from .lexer import tokenize
from .parser import parse
from .printer import pretty_print
from .typecheck import typecheck

__all__ = ["Program", "tokenize", "parse", "pretty_print", "typecheck"]
