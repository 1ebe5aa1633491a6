"""Type checker and name resolution for parsed MiniCL programs.

Annotates every expression with its type, resolves identifier uses, infers
buffer access directions, and assigns kernel-local sync-site ids to barrier
and work-group calls (the simulator and the reference interpreter use these
ids to agree on synchronization identity).
"""

from __future__ import annotations

from ..source import Diagnostic, DiagnosticSink
from . import builtins as bi
from .ast import (
    AssignStmt, BinaryExpr, Block, BoolLit, CallExpr, CastExpr, DeclStmt,
    ExprStmt, FloatLit, ForStmt, GlobalBufferParam, IfStmt, IndexExpr, IntLit,
    KernelDecl, PipeParam, Program, QueueParam, ScalarParam, StrLit, Ty,
    UnaryExpr, VarRef, WhileStmt,
)

_ARITH_INT = ("+", "-", "*", "/", "%")
_ARITH_F32 = ("+", "-", "*", "/")
_CMP = ("<", "<=", ">", ">=", "==", "!=")


class _Scope:
    def __init__(self, parent: "_Scope | None" = None):
        self.parent = parent
        self.names: dict[str, object] = {}

    def declare(self, name: str, entry) -> bool:
        if name in self.names:
            return False
        self.names[name] = entry
        return True

    def lookup(self, name: str):
        scope = self
        while scope is not None:
            if name in scope.names:
                return scope.names[name]
            scope = scope.parent
        return None


class _Local:
    def __init__(self, ty: Ty):
        self.ty = ty


class _Checker:
    def __init__(self, program: Program, sink: DiagnosticSink):
        self.program = program
        self.sink = sink
        self.kernel: KernelDecl | None = None
        self.scope = _Scope()
        self.divergence_depth = 0  # > 0 inside if/for/while bodies
        self.next_sync_site = 0

    def error(self, msg, loc):
        self.sink.error(msg, loc)

    # --- program level ---

    def check(self):
        seen = set()
        for k in self.program.kernels:
            if k.name in seen:
                self.error(f"duplicate kernel name '{k.name}'", k.loc)
            seen.add(k.name)
        for k in self.program.kernels:
            self.check_kernel(k)

    def check_kernel(self, kernel: KernelDecl):
        self.kernel = kernel
        self.scope = _Scope()
        self.divergence_depth = 0
        self.next_sync_site = 0
        for p in kernel.params:
            if isinstance(p.kind, GlobalBufferParam):
                p.kind.access = "unused"
            if not self.scope.declare(p.name, p):
                self.error(f"duplicate parameter name '{p.name}'", p.loc)
        self.check_block(kernel.body, new_scope=True)

    # --- statements ---

    def check_block(self, block: Block, new_scope: bool):
        if new_scope:
            self.scope = _Scope(self.scope)
        for stmt in block.stmts:
            self.check_stmt(stmt)
        if new_scope:
            self.scope = self.scope.parent

    def check_stmt(self, stmt):
        if isinstance(stmt, Block):
            self.check_block(stmt, new_scope=True)
        elif isinstance(stmt, DeclStmt):
            if stmt.init is not None:
                ty = self.check_expr(stmt.init)
                if ty is not None and ty != stmt.ty:
                    self.error(f"type mismatch: cannot initialize {stmt.ty} with {ty}", stmt.loc)
            if not self.scope.declare(stmt.name, _Local(stmt.ty)):
                self.error(f"redeclaration of '{stmt.name}'", stmt.loc)
        elif isinstance(stmt, AssignStmt):
            self.check_assign(stmt)
        elif isinstance(stmt, ExprStmt):
            self.check_expr(stmt.expr, allow_void=True)
        elif isinstance(stmt, IfStmt):
            self.require_bool(stmt.cond, "if condition")
            self.divergence_depth += 1
            self.check_block(stmt.then_body, new_scope=True)
            if stmt.else_body is not None:
                self.check_block(stmt.else_body, new_scope=True)
            self.divergence_depth -= 1
        elif isinstance(stmt, WhileStmt):
            self.require_bool(stmt.cond, "while condition")
            self.divergence_depth += 1
            self.check_block(stmt.body, new_scope=True)
            self.divergence_depth -= 1
        elif isinstance(stmt, ForStmt):
            self.scope = _Scope(self.scope)
            if stmt.init is not None:
                self.check_stmt(stmt.init)
            self.require_bool(stmt.cond, "for condition")
            self.divergence_depth += 1
            self.check_block(stmt.body, new_scope=True)
            if stmt.step is not None:
                self.check_stmt(stmt.step)
            self.divergence_depth -= 1
            self.scope = self.scope.parent
        else:  # pragma: no cover
            raise AssertionError(f"unknown statement {stmt!r}")

    def check_assign(self, stmt: AssignStmt):
        value_ty = self.check_expr(stmt.value)
        target = stmt.target
        if isinstance(target, VarRef):
            entry = self.scope.lookup(target.name)
            if entry is None:
                self.error(f"undeclared identifier '{target.name}'", target.loc)
                return
            if isinstance(entry, _Local):
                target.ty = entry.ty
            elif isinstance(entry.kind, ScalarParam):
                target.ty = entry.kind.ty
            else:
                self.error(f"'{target.name}' is not assignable", target.loc)
                return
            if value_ty is not None and value_ty != target.ty:
                self.error(f"type mismatch: cannot assign {value_ty} to {target.ty}", stmt.loc)
        else:  # IndexExpr: buffer store
            elem = self.check_buffer_index(target, writing=True)
            if elem is not None and value_ty is not None and value_ty != elem:
                self.error(f"type mismatch: cannot store {value_ty} into {elem} buffer", stmt.loc)

    # --- expressions ---

    def require_bool(self, expr, what: str):
        ty = self.check_expr(expr)
        if ty is not None and ty != Ty.BOOL:
            self.error(f"{what} must be bool, found {ty}", expr.loc)

    def check_expr(self, expr, allow_void: bool = False) -> Ty | None:
        ty = self._expr_type(expr)
        expr.ty = ty
        if ty == Ty.VOID and not allow_void:
            self.error("void value used in an expression", expr.loc)
            return None
        return ty

    def _expr_type(self, expr) -> Ty | None:
        if isinstance(expr, IntLit):
            return Ty.U32 if expr.unsigned else Ty.I32
        if isinstance(expr, FloatLit):
            return Ty.F32
        if isinstance(expr, BoolLit):
            return Ty.BOOL
        if isinstance(expr, StrLit):
            self.error("string literal is only valid as an enqueue_kernel kernel name", expr.loc)
            return None
        if isinstance(expr, VarRef):
            entry = self.scope.lookup(expr.name)
            if entry is None:
                self.error(f"undeclared identifier '{expr.name}'", expr.loc)
                return None
            if isinstance(entry, _Local):
                return entry.ty
            if isinstance(entry.kind, ScalarParam):
                return entry.kind.ty
            self.error(f"'{expr.name}' is an opaque handle and cannot be used as a value", expr.loc)
            return None
        if isinstance(expr, IndexExpr):
            return self.check_buffer_index(expr, writing=False)
        if isinstance(expr, UnaryExpr):
            ty = self.check_expr(expr.operand)
            if ty is None:
                return None
            if expr.op == "-":
                if not ty.is_numeric:
                    self.error(f"unary '-' requires a numeric operand, found {ty}", expr.loc)
                    return None
                return ty
            if ty != Ty.BOOL:
                self.error(f"'!' requires a bool operand, found {ty}", expr.loc)
                return None
            return Ty.BOOL
        if isinstance(expr, BinaryExpr):
            return self.check_binary(expr)
        if isinstance(expr, CastExpr):
            ty = self.check_expr(expr.operand)
            if ty is None:
                return None
            if not ty.is_numeric:
                self.error(f"cannot cast {ty} to {expr.target}", expr.loc)
                return None
            return expr.target
        if isinstance(expr, CallExpr):
            return self.check_call(expr)
        raise AssertionError(f"unknown expression {expr!r}")  # pragma: no cover

    def check_binary(self, expr: BinaryExpr) -> Ty | None:
        lt = self.check_expr(expr.left)
        rt = self.check_expr(expr.right)
        if lt is None or rt is None:
            return None
        if lt != rt:
            self.error(f"type mismatch: {lt} vs {rt} for operator '{expr.op}'", expr.loc)
            return None
        if expr.op in ("&&", "||"):
            if lt != Ty.BOOL:
                self.error(f"'{expr.op}' requires bool operands, found {lt}", expr.loc)
                return None
            return Ty.BOOL
        if expr.op in _CMP:
            if not lt.is_numeric:
                self.error(f"'{expr.op}' requires numeric operands, found {lt}", expr.loc)
                return None
            return Ty.BOOL
        # arithmetic
        if lt == Ty.F32:
            if expr.op not in _ARITH_F32:
                self.error(f"operator '{expr.op}' is not defined for float", expr.loc)
                return None
            return Ty.F32
        if lt.is_integer:
            if expr.op not in _ARITH_INT:
                self.error(f"operator '{expr.op}' is not defined for {lt}", expr.loc)
                return None
            return lt
        self.error(f"operator '{expr.op}' is not defined for {lt}", expr.loc)
        return None

    def check_buffer_index(self, expr: IndexExpr, writing: bool) -> Ty | None:
        entry = self.scope.lookup(expr.base)
        idx_ty = self.check_expr(expr.index)
        if entry is None:
            self.error(f"undeclared identifier '{expr.base}'", expr.loc)
            return None
        if isinstance(entry, _Local) or not isinstance(entry.kind, GlobalBufferParam):
            self.error(f"'{expr.base}' is not a global buffer", expr.loc)
            return None
        if idx_ty is not None and not idx_ty.is_integer:
            self.error(f"buffer index must be int or uint, found {idx_ty}", expr.index.loc)
        kind = entry.kind
        kind.access = _merge_access(kind.access, "write" if writing else "read")
        if not writing:
            expr.ty = kind.elem
        return kind.elem

    # --- builtin calls ---

    def check_call(self, expr: CallExpr) -> Ty | None:
        name = expr.name
        if name not in bi.ALL_BUILTINS:
            entry = self.scope.lookup(name)
            if entry is not None:
                self.error(f"'{name}' is not callable", expr.loc)
            else:
                self.error(f"unknown builtin '{name}'", expr.loc)
            for a in expr.args:
                self.check_expr(a)
            return None

        if name in bi.ID_BUILTINS:
            if not self.check_arity(expr, 1):
                return bi.ID_RESULT_TYPE
            dim = expr.args[0]
            if not isinstance(dim, IntLit) or dim.value not in (0, 1, 2):
                self.error(f"{name} dimension must be a literal 0, 1, or 2", expr.args[0].loc)
            else:
                self.check_expr(dim)
            return bi.ID_RESULT_TYPE

        if name == bi.BARRIER:
            self.mark_sync(expr)
            self.check_arity(expr, 0)
            return Ty.VOID

        if name in bi.WG_REDUCE_OPS:
            self.mark_sync(expr)
            if not self.check_arity(expr, 1):
                return None
            ty = self.check_expr(expr.args[0])
            if ty is not None and not ty.is_numeric:
                self.error(f"{name} requires a numeric argument, found {ty}", expr.loc)
                return None
            return ty

        if name == bi.WG_BROADCAST:
            self.mark_sync(expr)
            if not self.check_arity(expr, 2):
                return None
            ty = self.check_expr(expr.args[0])
            src_ty = self.check_expr(expr.args[1])
            if ty is not None and not ty.is_numeric:
                self.error(f"{name} requires a numeric argument, found {ty}", expr.loc)
                ty = None
            if src_ty is not None and src_ty != Ty.I32:
                self.error(f"{name} source id must be int, found {src_ty}", expr.args[1].loc)
            return ty

        if name == bi.PIPE_READ:
            pipe = self.pipe_arg(expr, 0, want_direction="read")
            self.check_arity(expr, 1)
            return pipe.elem if pipe else None

        if name == bi.PIPE_WRITE:
            pipe = self.pipe_arg(expr, 0, want_direction="write")
            if not self.check_arity(expr, 2):
                return Ty.VOID
            vty = self.check_expr(expr.args[1])
            if pipe and vty is not None and vty != pipe.elem:
                self.error(f"type mismatch: cannot write {vty} into {pipe.elem} pipe", expr.loc)
            return Ty.VOID

        if name == bi.ENQUEUE:
            self.check_enqueue(expr)
            return Ty.VOID

        raise AssertionError(name)  # pragma: no cover

    def mark_sync(self, expr: CallExpr):
        expr.sync_site = self.next_sync_site
        self.next_sync_site += 1
        if self.divergence_depth > 0:
            self.sink.warning(
                f"{expr.name} under divergent control flow: all work-items of a "
                "group must reach it or the run faults", expr.loc)

    def check_arity(self, expr: CallExpr, n: int) -> bool:
        if len(expr.args) != n:
            self.error(f"{expr.name} expects {n} argument(s), got {len(expr.args)}", expr.loc)
            return False
        return True

    def pipe_arg(self, expr: CallExpr, i: int, want_direction: str) -> PipeParam | None:
        if len(expr.args) <= i:
            self.error(f"{expr.name} expects a pipe argument", expr.loc)
            return None
        arg = expr.args[i]
        if not isinstance(arg, VarRef):
            self.error(f"{expr.name} pipe argument must name a pipe parameter", arg.loc)
            return None
        entry = self.scope.lookup(arg.name)
        if entry is None or isinstance(entry, _Local) or not isinstance(entry.kind, PipeParam):
            self.error(f"'{arg.name}' is not a pipe parameter", arg.loc)
            return None
        if entry.kind.direction != want_direction:
            self.error(
                f"pipe direction violation: '{arg.name}' is "
                f"{entry.kind.direction}_only but is used for {want_direction}", arg.loc)
            return None
        return entry.kind

    def check_enqueue(self, expr: CallExpr):
        # enqueue_kernel(q, gsize, lsize, "child", args...)
        if len(expr.args) < 4:
            self.error("enqueue_kernel expects (queue, gsize, lsize, \"kernel\", args...)", expr.loc)
            for a in expr.args:
                if not isinstance(a, StrLit):
                    self.check_expr(a)
            return
        qarg = expr.args[0]
        qentry = self.scope.lookup(qarg.name) if isinstance(qarg, VarRef) else None
        if qentry is None or isinstance(qentry, _Local) \
                or not isinstance(qentry.kind, QueueParam):
            self.error("enqueue_kernel first argument must be a queue parameter", qarg.loc)
        for sz in expr.args[1:3]:
            ty = self.check_expr(sz)
            if ty is not None and ty != Ty.I32:
                self.error(f"enqueue size must be int, found {ty}", sz.loc)
        name_arg = expr.args[3]
        if not isinstance(name_arg, StrLit):
            self.error("enqueue_kernel kernel name must be a string literal", name_arg.loc)
            return
        child = self.program.kernel(name_arg.value)
        if child is None:
            self.error(f"enqueue_kernel names unknown kernel '{name_arg.value}'", name_arg.loc)
            return
        given = expr.args[4:]
        if len(given) != len(child.params):
            self.error(
                f"enqueue_kernel for '{child.name}' expects {len(child.params)} "
                f"argument(s), got {len(given)}", expr.loc)
            return
        for arg, param in zip(given, child.params):
            kind = param.kind
            if isinstance(kind, ScalarParam):
                ty = self.check_expr(arg)
                if ty is not None and ty != kind.ty:
                    self.error(
                        f"type mismatch for enqueue argument '{param.name}': "
                        f"expected {kind.ty}, found {ty}", arg.loc)
                continue
            # resource arguments must forward one of the parent's parameters
            if not isinstance(arg, VarRef):
                self.error(f"enqueue argument '{param.name}' must name a parent parameter", arg.loc)
                continue
            entry = self.scope.lookup(arg.name)
            if entry is None or isinstance(entry, _Local):
                self.error(f"'{arg.name}' is not a parameter", arg.loc)
                continue
            pk = entry.kind
            if isinstance(kind, GlobalBufferParam):
                if not isinstance(pk, GlobalBufferParam) or pk.elem != kind.elem:
                    self.error(
                        f"enqueue argument '{param.name}' must be a global {kind.elem} buffer", arg.loc)
            elif isinstance(kind, PipeParam):
                if not isinstance(pk, PipeParam) or pk.elem != kind.elem \
                        or pk.direction != kind.direction:
                    self.error(
                        f"enqueue argument '{param.name}' must be a matching pipe parameter", arg.loc)
            elif isinstance(kind, QueueParam):
                if not isinstance(pk, QueueParam):
                    self.error(f"enqueue argument '{param.name}' must be a queue parameter", arg.loc)


def _merge_access(old: str, new: str) -> str:
    if old == "unused":
        return new
    if old == new:
        return old
    return "readwrite"


def typecheck(program: Program) -> list[Diagnostic]:
    """Annotate `program` in place. Returns diagnostics; the program is only
    valid for later stages when no error diagnostic is present."""
    sink = DiagnosticSink()
    _Checker(program, sink).check()
    return sink.items
