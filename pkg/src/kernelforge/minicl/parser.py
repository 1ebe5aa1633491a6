"""Recursive-descent parser for MiniCL.

The full grammar lives in docs/minicl-grammar.md. Parsing is total: every
failure is reported as a Diagnostic and `parse` never raises.
"""

from __future__ import annotations

import struct

from ..source import Diagnostic, DiagnosticSink, SourceUnit
from .ast import (
    AssignStmt, BinaryExpr, Block, BoolLit, CallExpr, CastExpr, DeclStmt,
    ExprStmt, FloatLit, ForStmt, GlobalBufferParam, IfStmt, IndexExpr, IntLit,
    KernelDecl, ParamDecl, PipeParam, Program, QueueParam, ScalarParam,
    StrLit, Ty, UnaryExpr, VarRef, WhileStmt,
)
from .lexer import Token, tokenize

_TYPE_TOKENS = {"int": Ty.I32, "uint": Ty.U32, "float": Ty.F32, "bool": Ty.BOOL}

# binary operators by descending binding strength
_MUL_OPS = ("*", "/", "%")
_ADD_OPS = ("+", "-")
_CMP_OPS = ("<", "<=", ">", ">=", "==", "!=")


def round_f32(value: float) -> float:
    """Round a Python float to the nearest binary32 value."""
    return struct.unpack("<f", struct.pack("<f", value))[0]


class _ParseAbort(Exception):
    pass


class Parser:
    def __init__(self, tokens: list[Token], sink: DiagnosticSink):
        self.tokens = tokens
        self.pos = 0
        self.sink = sink

    # --- token helpers ---

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def at(self, kind: str) -> bool:
        return self.cur.kind == kind

    def accept(self, kind: str) -> Token | None:
        if self.at(kind):
            tok = self.cur
            self.pos += 1
            return tok
        return None

    def expect(self, kind: str, what: str = "") -> Token:
        if self.at(kind):
            tok = self.cur
            self.pos += 1
            return tok
        return self.fail(f"expected {what or kind!r}, found {self.describe(self.cur)}")

    def describe(self, tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def fail(self, message: str):
        self.sink.error(message, self.cur.loc)
        raise _ParseAbort()

    # --- grammar ---

    def program(self) -> Program:
        kernels = []
        while not self.at("eof"):
            kernels.append(self.kernel())
        return Program(kernels)

    def kernel(self) -> KernelDecl:
        start = self.expect("kernel", "'kernel'")
        self.expect("void", "'void'")
        name = self.expect("ident", "kernel name")
        self.expect("(")
        params: list[ParamDecl] = []
        if not self.at(")"):
            params.append(self.param())
            while self.accept(","):
                params.append(self.param())
        self.expect(")")
        body = self.block()
        return KernelDecl(name.text, params, body, loc=start.loc)

    def param(self) -> ParamDecl:
        loc = self.cur.loc
        if self.accept("global"):
            elem = self.type_name()
            self.expect("*", "'*'")
            name = self.expect("ident", "parameter name")
            return ParamDecl(name.text, GlobalBufferParam(elem), loc=loc)
        direction = None
        if self.accept("read_only"):
            direction = "read"
        elif self.accept("write_only"):
            direction = "write"
        if direction is not None or self.at("pipe"):
            if direction is None:
                self.fail("pipe parameter requires read_only or write_only")
            self.expect("pipe", "'pipe'")
            elem = self.type_name()
            name = self.expect("ident", "parameter name")
            return ParamDecl(name.text, PipeParam(elem, direction), loc=loc)
        if self.accept("queue_t"):
            name = self.expect("ident", "parameter name")
            return ParamDecl(name.text, QueueParam(), loc=loc)
        ty = self.type_name()
        name = self.expect("ident", "parameter name")
        return ParamDecl(name.text, ScalarParam(ty), loc=loc)

    def type_name(self) -> Ty:
        for kw, ty in _TYPE_TOKENS.items():
            if self.accept(kw):
                return ty
        return self.fail(f"expected a type, found {self.describe(self.cur)}")

    def block(self) -> Block:
        start = self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.at("eof"):
                self.fail("unterminated block, expected '}'")
            stmts.append(self.statement())
        self.expect("}")
        return Block(stmts, loc=start.loc)

    def statement(self):
        if self.at("{"):
            return self.block()
        if self.at("if"):
            return self.if_statement()
        if self.at("while"):
            return self.while_statement()
        if self.at("for"):
            return self.for_statement()
        stmt = self.simple_statement()
        self.expect(";")
        return stmt

    def simple_statement(self):
        """declaration | assignment | expression statement (no trailing ';')."""
        loc = self.cur.loc
        if self.cur.kind in _TYPE_TOKENS:
            ty = self.type_name()
            name = self.expect("ident", "variable name")
            init = self.expression() if self.accept("=") else None
            return DeclStmt(ty, name.text, init, loc=loc)
        expr = self.expression()
        if self.accept("="):
            if not isinstance(expr, (VarRef, IndexExpr)):
                self.fail("assignment target must be a variable or buffer element")
            value = self.expression()
            return AssignStmt(expr, value, loc=loc)
        return ExprStmt(expr, loc=loc)

    def if_statement(self) -> IfStmt:
        start = self.expect("if")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        then_body = self.statement_as_block()
        else_body = self.statement_as_block() if self.accept("else") else None
        return IfStmt(cond, then_body, else_body, loc=start.loc)

    def while_statement(self) -> WhileStmt:
        start = self.expect("while")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        return WhileStmt(cond, self.statement_as_block(), loc=start.loc)

    def for_statement(self) -> ForStmt:
        start = self.expect("for")
        self.expect("(")
        init = None if self.at(";") else self.simple_statement()
        if init is not None and not isinstance(init, (DeclStmt, AssignStmt)):
            self.fail("for-loop initializer must be a declaration or assignment")
        self.expect(";")
        cond = self.expression()
        self.expect(";")
        step = None
        if not self.at(")"):
            step = self.simple_statement()
            if not isinstance(step, AssignStmt):
                self.fail("for-loop step must be an assignment")
        self.expect(")")
        return ForStmt(init, cond, step, self.statement_as_block(), loc=start.loc)

    def statement_as_block(self) -> Block:
        stmt = self.statement()
        if isinstance(stmt, Block):
            return stmt
        return Block([stmt], loc=stmt.loc)

    # --- expressions (precedence climbing) ---

    def expression(self):
        return self.or_expr()

    def or_expr(self):
        left = self.and_expr()
        while True:
            tok = self.accept("||")
            if not tok:
                return left
            left = BinaryExpr("||", left, self.and_expr(), loc=tok.loc)

    def and_expr(self):
        left = self.cmp_expr()
        while True:
            tok = self.accept("&&")
            if not tok:
                return left
            left = BinaryExpr("&&", left, self.cmp_expr(), loc=tok.loc)

    def cmp_expr(self):
        left = self.add_expr()
        if self.cur.kind in _CMP_OPS:
            tok = self.cur
            self.pos += 1
            return BinaryExpr(tok.kind, left, self.add_expr(), loc=tok.loc)
        return left

    def add_expr(self):
        left = self.mul_expr()
        while self.cur.kind in _ADD_OPS:
            tok = self.cur
            self.pos += 1
            left = BinaryExpr(tok.kind, left, self.mul_expr(), loc=tok.loc)
        return left

    def mul_expr(self):
        left = self.unary_expr()
        while self.cur.kind in _MUL_OPS:
            tok = self.cur
            self.pos += 1
            left = BinaryExpr(tok.kind, left, self.unary_expr(), loc=tok.loc)
        return left

    def unary_expr(self):
        if self.at("-"):
            tok = self.cur
            self.pos += 1
            return UnaryExpr("-", self.unary_expr(), loc=tok.loc)
        if self.at("!"):
            tok = self.cur
            self.pos += 1
            return UnaryExpr("!", self.unary_expr(), loc=tok.loc)
        # cast: '(' type ')' unary
        if self.at("(") and self.tokens[self.pos + 1].kind in _TYPE_TOKENS \
                and self.tokens[self.pos + 2].kind == ")":
            tok = self.cur
            self.pos += 1
            target = self.type_name()
            self.expect(")")
            return CastExpr(target, self.unary_expr(), loc=tok.loc)
        return self.primary_expr()

    def primary_expr(self):
        tok = self.cur
        if self.accept("("):
            inner = self.expression()
            self.expect(")")
            return inner
        if self.accept("true"):
            return BoolLit(True, loc=tok.loc)
        if self.accept("false"):
            return BoolLit(False, loc=tok.loc)
        lit = self.accept("intlit")
        if lit:
            text = lit.text
            unsigned = text[-1] in "uU"
            if unsigned:
                text = text[:-1]
            value = int(text, 0)
            limit = 0xFFFFFFFF if unsigned else 0x7FFFFFFF
            if value > limit:
                self.sink.error("integer literal out of range", lit.loc)
                value &= limit
            return IntLit(value, unsigned, loc=lit.loc)
        lit = self.accept("floatlit")
        if lit:
            text = lit.text.rstrip("fF")
            return FloatLit(round_f32(float(text)), loc=lit.loc)
        lit = self.accept("stringlit")
        if lit:
            return StrLit(lit.text[1:-1], loc=lit.loc)
        ident = self.accept("ident")
        if ident:
            if self.accept("("):
                args = []
                if not self.at(")"):
                    args.append(self.expression())
                    while self.accept(","):
                        args.append(self.expression())
                self.expect(")")
                return CallExpr(ident.text, args, loc=ident.loc)
            if self.accept("["):
                index = self.expression()
                self.expect("]")
                return IndexExpr(ident.text, index, loc=ident.loc)
            return VarRef(ident.text, loc=ident.loc)
        return self.fail(f"expected an expression, found {self.describe(tok)}")


def parse(src: SourceUnit) -> tuple[Program | None, list[Diagnostic]]:
    """Parse a source unit. Returns (program, diagnostics); program is None
    iff any error diagnostic was produced."""
    tokens, lex_diags = tokenize(src)
    sink = DiagnosticSink()
    sink.items.extend(lex_diags)
    if sink.has_errors:
        return None, sink.items
    parser = Parser(tokens, sink)
    try:
        program = parser.program()
    except _ParseAbort:
        return None, sink.items
    if sink.has_errors:
        return None, sink.items
    return program, sink.items
