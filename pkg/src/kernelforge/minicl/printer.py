"""Canonical MiniCL formatter.

The output of `pretty_print` re-parses to a structurally identical AST;
golden tests and the round-trip property depend on its stability.
"""

from __future__ import annotations

from .ast import (
    AssignStmt, BinaryExpr, Block, BoolLit, CallExpr, CastExpr, DeclStmt,
    ExprStmt, FloatLit, ForStmt, GlobalBufferParam, IfStmt, IndexExpr, IntLit,
    KernelDecl, PipeParam, Program, QueueParam, ScalarParam, StrLit,
    UnaryExpr, VarRef, WhileStmt,
)

_INDENT = "    "

# precedence levels; higher binds tighter
_PREC = {"||": 1, "&&": 2, "<": 3, "<=": 3, ">": 3, ">=": 3, "==": 3, "!=": 3,
         "+": 4, "-": 4, "*": 5, "/": 5, "%": 5}
_UNARY_PREC = 6


def pretty_print(program: Program) -> str:
    out: list[str] = []
    for i, kernel in enumerate(program.kernels):
        if i:
            out.append("")
        _kernel(out, kernel)
    return "\n".join(out) + ("\n" if out else "")


def _kernel(out: list[str], k: KernelDecl) -> None:
    params = ", ".join(_param(p) for p in k.params)
    out.append(f"kernel void {k.name}({params}) {{")
    _stmts(out, k.body.stmts, 1)
    out.append("}")


def _param(p) -> str:
    kind = p.kind
    if isinstance(kind, GlobalBufferParam):
        return f"global {kind.elem}* {p.name}"
    if isinstance(kind, PipeParam):
        return f"{kind.direction}_only pipe {kind.elem} {p.name}"
    if isinstance(kind, QueueParam):
        return f"queue_t {p.name}"
    assert isinstance(kind, ScalarParam)
    return f"{kind.ty} {p.name}"


def _stmts(out: list[str], stmts, depth: int) -> None:
    for stmt in stmts:
        _stmt(out, stmt, depth)


def _stmt(out: list[str], stmt, depth: int) -> None:
    pad = _INDENT * depth
    if isinstance(stmt, Block):
        out.append(pad + "{")
        _stmts(out, stmt.stmts, depth + 1)
        out.append(pad + "}")
    elif isinstance(stmt, IfStmt):
        out.append(pad + f"if ({_expr(stmt.cond)}) {{")
        _stmts(out, stmt.then_body.stmts, depth + 1)
        if stmt.else_body is not None:
            out.append(pad + "} else {")
            _stmts(out, stmt.else_body.stmts, depth + 1)
        out.append(pad + "}")
    elif isinstance(stmt, WhileStmt):
        out.append(pad + f"while ({_expr(stmt.cond)}) {{")
        _stmts(out, stmt.body.stmts, depth + 1)
        out.append(pad + "}")
    elif isinstance(stmt, ForStmt):
        init = _simple(stmt.init) if stmt.init is not None else ""
        step = _simple(stmt.step) if stmt.step is not None else ""
        out.append(pad + f"for ({init}; {_expr(stmt.cond)}; {step}) {{")
        _stmts(out, stmt.body.stmts, depth + 1)
        out.append(pad + "}")
    else:
        out.append(pad + _simple(stmt) + ";")


def _simple(stmt) -> str:
    if isinstance(stmt, DeclStmt):
        if stmt.init is None:
            return f"{stmt.ty} {stmt.name}"
        return f"{stmt.ty} {stmt.name} = {_expr(stmt.init)}"
    if isinstance(stmt, AssignStmt):
        return f"{_expr(stmt.target)} = {_expr(stmt.value)}"
    if isinstance(stmt, ExprStmt):
        return _expr(stmt.expr)
    raise AssertionError(f"unprintable statement {stmt!r}")  # pragma: no cover


def _float_text(value: float) -> str:
    text = repr(value)
    if "e" not in text and "E" not in text and "." not in text:
        text += ".0"
    return text


def _expr(expr, parent_prec: int = 0) -> str:
    if isinstance(expr, IntLit):
        return f"{expr.value}u" if expr.unsigned else str(expr.value)
    if isinstance(expr, FloatLit):
        return _float_text(expr.value)
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, StrLit):
        return f'"{expr.value}"'
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, IndexExpr):
        return f"{expr.base}[{_expr(expr.index)}]"
    if isinstance(expr, CallExpr):
        return f"{expr.name}({', '.join(_expr(a) for a in expr.args)})"
    if isinstance(expr, CastExpr):
        text = f"({expr.target}){_expr(expr.operand, _UNARY_PREC)}"
        return f"({text})" if parent_prec > _UNARY_PREC else text
    if isinstance(expr, UnaryExpr):
        text = f"{expr.op}{_expr(expr.operand, _UNARY_PREC)}"
        return f"({text})" if parent_prec > _UNARY_PREC else text
    if isinstance(expr, BinaryExpr):
        prec = _PREC[expr.op]
        # left-associative in general; comparisons do not chain, so both
        # sides of a comparison are parenthesized when they are comparisons
        left = _expr(expr.left, prec + 1 if prec == 3 else prec)
        right = _expr(expr.right, prec + 1)
        text = f"{left} {expr.op} {right}"
        return f"({text})" if parent_prec > prec else text
    raise AssertionError(f"unprintable expression {expr!r}")  # pragma: no cover
