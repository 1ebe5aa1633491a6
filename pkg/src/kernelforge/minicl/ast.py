"""Typed syntax tree for MiniCL.

Structural equality intentionally ignores source locations and inferred
types, so that parse(pretty_print(ast)) == ast can be checked directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..source import Loc, UNKNOWN_LOC


class Ty(enum.Enum):
    I32 = "int"
    U32 = "uint"
    F32 = "float"
    BOOL = "bool"
    VOID = "void"
    STR = "str"  # internal: enqueue_kernel child-name literal

    def __str__(self) -> str:
        return self.value

    @property
    def is_integer(self) -> bool:
        return self in (Ty.I32, Ty.U32)

    @property
    def is_numeric(self) -> bool:
        return self in (Ty.I32, Ty.U32, Ty.F32)


SCALAR_TYPES = (Ty.I32, Ty.U32, Ty.F32, Ty.BOOL)


# --- parameters -------------------------------------------------------------

@dataclass
class GlobalBufferParam:
    elem: Ty
    # "read" | "write" | "readwrite" | "unused"; inferred by the type checker.
    access: str = field(default="unused", compare=False)


@dataclass
class PipeParam:
    elem: Ty
    direction: str  # "read" | "write"


@dataclass
class QueueParam:
    pass


@dataclass
class ScalarParam:
    ty: Ty


ParamKind = GlobalBufferParam | PipeParam | QueueParam | ScalarParam


@dataclass
class ParamDecl:
    name: str
    kind: ParamKind
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


# --- expressions ------------------------------------------------------------

@dataclass
class Expr:
    pass


def _expr(cls):
    """Append shared loc/ty fields (excluded from structural equality)."""
    cls.__annotations__["loc"] = Loc
    cls.__annotations__["ty"] = "Ty | None"
    cls.loc = field(default=UNKNOWN_LOC, compare=False, repr=False)
    cls.ty = field(default=None, compare=False, repr=False)
    return dataclass(cls)


@_expr
class IntLit(Expr):
    value: int
    unsigned: bool = False


@_expr
class FloatLit(Expr):
    value: float  # already rounded to binary32


@_expr
class BoolLit(Expr):
    value: bool


@_expr
class StrLit(Expr):
    value: str


@_expr
class VarRef(Expr):
    name: str


@_expr
class IndexExpr(Expr):
    base: str
    index: Expr


@_expr
class UnaryExpr(Expr):
    op: str  # "-" | "!"
    operand: Expr


@_expr
class BinaryExpr(Expr):
    op: str  # + - * / % < <= > >= == != && ||
    left: Expr
    right: Expr


@_expr
class CastExpr(Expr):
    target: Ty
    operand: Expr


@_expr
class CallExpr(Expr):
    name: str
    args: list[Expr]
    # set by the type checker on barrier/work_group_* calls; a stable,
    # kernel-local id shared by the simulator and the interpreter
    sync_site: "int | None" = field(default=None, compare=False, repr=False)


# --- statements -------------------------------------------------------------

@dataclass
class Stmt:
    pass


def _stmt(cls):
    cls.__annotations__["loc"] = Loc
    cls.loc = field(default=UNKNOWN_LOC, compare=False, repr=False)
    return dataclass(cls)


@_stmt
class Block(Stmt):
    stmts: list[Stmt]


@_stmt
class DeclStmt(Stmt):
    ty: Ty
    name: str
    init: Expr | None


@_stmt
class AssignStmt(Stmt):
    target: VarRef | IndexExpr
    value: Expr


@_stmt
class ExprStmt(Stmt):
    expr: Expr


@_stmt
class IfStmt(Stmt):
    cond: Expr
    then_body: Block
    else_body: Block | None


@_stmt
class WhileStmt(Stmt):
    cond: Expr
    body: Block


@_stmt
class ForStmt(Stmt):
    init: Stmt | None   # DeclStmt or AssignStmt
    cond: Expr
    step: AssignStmt | None
    body: Block


# --- top level --------------------------------------------------------------

@dataclass
class KernelDecl:
    name: str
    params: list[ParamDecl]
    body: Block
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)

    def param(self, name: str) -> ParamDecl | None:
        for p in self.params:
            if p.name == name:
                return p
        return None


@dataclass
class Program:
    kernels: list[KernelDecl]

    def kernel(self, name: str) -> KernelDecl | None:
        for k in self.kernels:
            if k.name == name:
                return k
        return None
