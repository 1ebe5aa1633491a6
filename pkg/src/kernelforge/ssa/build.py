"""Lower a type-checked kernel to a pre-SSA control-flow graph.

Mutable locals (and scalar parameters, which may be reassigned) go through
var_load / var_store pseudo-instructions; `to_ssa` removes them. Sync
instructions (barrier, work-group functions) terminate their block: the
per-group synchronization point is a block boundary, so later stages can
treat a block as a straight-line pipeline with at most one trailing sync.
"""

from __future__ import annotations

from ..minicl import builtins as bi
from ..minicl.ast import (
    AssignStmt, BinaryExpr, Block, BoolLit, CallExpr, CastExpr, DeclStmt,
    ExprStmt, FloatLit, ForStmt, GlobalBufferParam, IfStmt, IndexExpr,
    IntLit, KernelDecl, PipeParam, QueueParam, ScalarParam, StrLit, Ty,
    UnaryExpr, VarRef, WhileStmt,
)
from .ir import BasicBlock, CondBr, Instr, Jump, Ret, SsaFunction

_BINOP = {"+": "add", "-": "sub", "*": "mul", "/": "div", "%": "mod",
          "&&": "and", "||": "or",
          "<": "cmp_lt", "<=": "cmp_le", ">": "cmp_gt", ">=": "cmp_ge",
          "==": "cmp_eq", "!=": "cmp_ne"}


class _Builder:
    def __init__(self, kernel: KernelDecl):
        self.kernel = kernel
        self.fn = SsaFunction(kernel.name, kernel.params)
        self.cur = self.fn.new_block()
        self.scopes: list[dict[str, int]] = [{}]
        self.next_slot = 0
        self.slot_types: dict[int, Ty] = {}

    # --- slots (mutable variables before SSA) ---

    def declare_slot(self, name: str, ty: Ty) -> int:
        slot = self.next_slot
        self.next_slot += 1
        self.scopes[-1][name] = slot
        self.slot_types[slot] = ty
        return slot

    def lookup_slot(self, name: str) -> int | None:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    def emit(self, op: str, ty: Ty, operands=(), **attrs) -> int | None:
        result = self.fn.new_value(ty) if ty != Ty.VOID else None
        self.cur.instrs.append(Instr(result, op, ty, list(operands), attrs))
        return result

    def cut_after_sync(self) -> None:
        nxt = self.fn.new_block()
        self.cur.terminator = Jump(nxt.id)
        self.cur = nxt

    # --- top level ---

    def build(self) -> SsaFunction:
        for p in self.kernel.params:
            if isinstance(p.kind, ScalarParam):
                vid = self.fn.new_value(p.kind.ty)
                self.fn.param_values[p.name] = vid
                slot = self.declare_slot(p.name, p.kind.ty)
                self.cur.instrs.append(
                    Instr(None, "var_store", Ty.VOID, [vid], {"var": slot}))
        self.stmts(self.kernel.body.stmts)
        self.cur.terminator = Ret()
        _merge_blocks(self.fn)
        return self.fn

    # --- statements ---

    def stmts(self, stmts):
        for s in stmts:
            self.stmt(s)

    def stmt(self, s):
        if isinstance(s, Block):
            self.scopes.append({})
            self.stmts(s.stmts)
            self.scopes.pop()
        elif isinstance(s, DeclStmt):
            slot = self.declare_slot(s.name, s.ty)
            if s.init is not None:
                v = self.expr(s.init)
                self.cur.instrs.append(Instr(None, "var_store", Ty.VOID, [v], {"var": slot}))
        elif isinstance(s, AssignStmt):
            v = self.expr(s.value)
            if isinstance(s.target, VarRef):
                slot = self.lookup_slot(s.target.name)
                assert slot is not None
                self.cur.instrs.append(Instr(None, "var_store", Ty.VOID, [v], {"var": slot}))
            else:
                idx = self.expr(s.target.index)
                self.emit("store", Ty.VOID, [idx, v], buf=s.target.base)
        elif isinstance(s, ExprStmt):
            self.expr(s.expr, discard=True)
        elif isinstance(s, IfStmt):
            cond = self.expr(s.cond)
            then_b = self.fn.new_block()
            else_b = self.fn.new_block() if s.else_body is not None else None
            join_b = self.fn.new_block()
            self.cur.terminator = CondBr(cond, then_b.id, (else_b or join_b).id)
            self.cur = then_b
            self.scopes.append({})
            self.stmts(s.then_body.stmts)
            self.scopes.pop()
            self.cur.terminator = Jump(join_b.id)
            if else_b is not None:
                self.cur = else_b
                self.scopes.append({})
                self.stmts(s.else_body.stmts)
                self.scopes.pop()
                self.cur.terminator = Jump(join_b.id)
            self.cur = join_b
        elif isinstance(s, WhileStmt):
            header = self.fn.new_block()
            self.cur.terminator = Jump(header.id)
            self.cur = header
            cond = self.expr(s.cond)
            body = self.fn.new_block()
            exit_b = self.fn.new_block()
            # header id can shift if the cond introduced a sync cut
            self.cur.terminator = CondBr(cond, body.id, exit_b.id)
            self.cur = body
            self.scopes.append({})
            self.stmts(s.body.stmts)
            self.scopes.pop()
            self.cur.terminator = Jump(header.id)
            self.cur = exit_b
        elif isinstance(s, ForStmt):
            self.scopes.append({})
            if s.init is not None:
                self.stmt(s.init)
            header = self.fn.new_block()
            self.cur.terminator = Jump(header.id)
            self.cur = header
            cond = self.expr(s.cond)
            body = self.fn.new_block()
            exit_b = self.fn.new_block()
            self.cur.terminator = CondBr(cond, body.id, exit_b.id)
            self.cur = body
            self.scopes.append({})
            self.stmts(s.body.stmts)
            self.scopes.pop()
            if s.step is not None:
                self.stmt(s.step)
            self.cur.terminator = Jump(header.id)
            self.scopes.pop()
            self.cur = exit_b
        else:  # pragma: no cover
            raise AssertionError(f"unknown statement {s!r}")

    # --- expressions ---

    def expr(self, e, discard: bool = False) -> int | None:
        if isinstance(e, IntLit):
            return self.emit("const", e.ty, value=e.value if not e.unsigned else e.value & 0xFFFFFFFF)
        if isinstance(e, FloatLit):
            return self.emit("const", Ty.F32, value=e.value)
        if isinstance(e, BoolLit):
            return self.emit("const", Ty.BOOL, value=1 if e.value else 0)
        if isinstance(e, VarRef):
            slot = self.lookup_slot(e.name)
            assert slot is not None, e.name
            return self.emit("var_load", self.slot_types[slot], var=slot)
        if isinstance(e, IndexExpr):
            idx = self.expr(e.index)
            return self.emit("load", e.ty, [idx], buf=e.base)
        if isinstance(e, UnaryExpr):
            v = self.expr(e.operand)
            return self.emit("neg" if e.op == "-" else "not", e.ty, [v])
        if isinstance(e, BinaryExpr):
            # hardware dataflow: both operands always evaluate (no
            # short-circuit), see docs/minicl-grammar.md
            left = self.expr(e.left)
            right = self.expr(e.right)
            return self.emit(_BINOP[e.op], e.ty, [left, right])
        if isinstance(e, CastExpr):
            v = self.expr(e.operand)
            src = e.operand.ty
            dst = e.target
            if src == dst:
                return v
            if src.is_integer and dst.is_integer:
                kind = "cast_bits"
            elif dst == Ty.F32:
                kind = "cast_i2f" if src == Ty.I32 else "cast_u2f"
            else:
                kind = "cast_f2i" if dst == Ty.I32 else "cast_f2u"
            return self.emit(kind, dst, [v])
        if isinstance(e, CallExpr):
            return self.call(e, discard)
        raise AssertionError(f"unknown expression {e!r}")  # pragma: no cover

    def call(self, e: CallExpr, discard: bool) -> int | None:
        name = e.name
        if name in bi.ID_BUILTINS:
            return self.emit("id_" + bi.ID_BUILTINS[name], e.ty, dim=e.args[0].value)
        if name == bi.BARRIER:
            self.emit("barrier", Ty.VOID, site=e.sync_site)
            self.cut_after_sync()
            return None
        if name in bi.WG_REDUCE_OPS:
            v = self.expr(e.args[0])
            result = self.emit("wg_reduce_" + bi.WG_REDUCE_OPS[name], e.ty, [v], site=e.sync_site)
            self.cut_after_sync()
            return result
        if name == bi.WG_BROADCAST:
            v = self.expr(e.args[0])
            sel = self.expr(e.args[1])
            result = self.emit("wg_broadcast", e.ty, [v, sel], site=e.sync_site)
            self.cut_after_sync()
            return result
        if name == bi.PIPE_READ:
            return self.emit("pipe_read", e.ty, pipe=e.args[0].name)
        if name == bi.PIPE_WRITE:
            v = self.expr(e.args[1])
            return self.emit("pipe_write", Ty.VOID, [v], pipe=e.args[0].name)
        if name == bi.ENQUEUE:
            return self.enqueue(e)
        raise AssertionError(name)  # pragma: no cover

    def enqueue(self, e: CallExpr) -> None:
        gsize = self.expr(e.args[1])
        lsize = self.expr(e.args[2])
        child = e.args[3].value
        operands = [gsize, lsize]
        # per child parameter: ("val", operand index) or ("res", parent param)
        arg_spec: list[tuple[str, object]] = []
        for arg in e.args[4:]:
            if isinstance(arg, VarRef) and self.lookup_slot(arg.name) is None \
                    and self.kernel.param(arg.name) is not None \
                    and not isinstance(self.kernel.param(arg.name).kind, ScalarParam):
                arg_spec.append(("res", arg.name))
            else:
                operands.append(self.expr(arg))
                arg_spec.append(("val", len(operands) - 1))
        self.emit("enqueue", Ty.VOID, operands,
                  queue=e.args[0].name, child=child, args=arg_spec)
        return None


def _merge_blocks(fn: SsaFunction) -> None:
    """Enforce block maximality: merge A->B whenever A has one successor,
    B has one predecessor, B is not the entry, and A does not end in a sync
    (sync points stay block boundaries)."""
    changed = True
    dead: set[int] = set()
    while changed:
        changed = False
        preds = fn.predecessors()
        for a in fn.blocks:
            if a.id in dead:
                continue
            succs = a.successors()
            if len(succs) != 1:
                continue
            b_id = succs[0]
            if b_id == fn.entry or b_id == a.id or b_id in dead:
                continue
            if len(preds[b_id]) != 1 or a.ends_in_sync:
                continue
            b = fn.block(b_id)
            a.instrs.extend(b.instrs)
            a.terminator = b.terminator
            dead.add(b_id)
            changed = True
            break
    if not dead:
        return
    keep = [b for b in fn.blocks if b.id not in dead]
    remap = {b.id: i for i, b in enumerate(keep)}
    for b in keep:
        b.id = remap[b.id]
        t = b.terminator
        if isinstance(t, Jump):
            t.target = remap[t.target]
        elif isinstance(t, CondBr):
            t.then_target = remap[t.then_target]
            t.else_target = remap[t.else_target]
    fn.blocks = keep
    fn.entry = 0


def build_cfg(kernel: KernelDecl) -> SsaFunction:
    """Lower a type-checked kernel into a pre-SSA CFG of maximal blocks."""
    return _Builder(kernel).build()
