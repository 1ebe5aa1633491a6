"""SSA intermediate representation.

A function is a CFG of maximal basic blocks; blocks hold phi nodes, an
ordered instruction list, and exactly one terminator. Scalar kernel
parameters are function-level values (defined "before" the entry block),
like LLVM arguments. Before SSA conversion the builder uses var_load /
var_store pseudo-instructions for mutable locals.

Opcodes (op field):
  const
  add sub mul div mod          (operand type selects int/float flavor)
  neg not and or
  cmp_eq cmp_ne cmp_lt cmp_le cmp_gt cmp_ge
  select
  cast_bits cast_i2f cast_u2f cast_f2i cast_f2u
  id_gid id_lid id_grp id_gsz id_lsz        attrs: dim
  load  (attrs: buf)          store (attrs: buf)
  pipe_read (attrs: pipe)     pipe_write (attrs: pipe)
  barrier wg_broadcast wg_reduce_add wg_reduce_min wg_reduce_max
                              attrs: site (kernel-local sync-site id)
  enqueue                     attrs: queue, child, resources
  var_load var_store          pre-SSA only; attrs: var
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..minicl.ast import ParamDecl, Ty

ValueId = int

PURE_OPS = frozenset({
    "const", "add", "sub", "mul", "div", "mod", "neg", "not", "and", "or",
    "cmp_eq", "cmp_ne", "cmp_lt", "cmp_le", "cmp_gt", "cmp_ge", "select",
    "cast_bits", "cast_i2f", "cast_u2f", "cast_f2i", "cast_f2u",
    "id_gid", "id_lid", "id_grp", "id_gsz", "id_lsz",
})
SYNC_OPS = frozenset({"barrier", "wg_broadcast", "wg_reduce_add",
                      "wg_reduce_min", "wg_reduce_max"})
CMP_OPS = frozenset({"cmp_eq", "cmp_ne", "cmp_lt", "cmp_le", "cmp_gt", "cmp_ge"})
CAST_OPS = frozenset({"cast_bits", "cast_i2f", "cast_u2f", "cast_f2i", "cast_f2u"})
ID_OPS = frozenset({"id_gid", "id_lid", "id_grp", "id_gsz", "id_lsz"})


@dataclass
class Instr:
    result: ValueId | None
    op: str
    ty: Ty  # result type; VOID for effects without a result
    operands: list[ValueId] = field(default_factory=list)
    attrs: dict = field(default_factory=dict)

    @property
    def is_pure(self) -> bool:
        return self.op in PURE_OPS

    @property
    def is_sync(self) -> bool:
        return self.op in SYNC_OPS


@dataclass
class PhiNode:
    result: ValueId
    ty: Ty
    incoming: list[tuple[int, ValueId]]  # (pred block id, value)


@dataclass
class Jump:
    target: int


@dataclass
class CondBr:
    cond: ValueId
    then_target: int
    else_target: int


@dataclass
class Ret:
    pass


Terminator = Jump | CondBr | Ret


@dataclass
class BasicBlock:
    id: int
    phis: list[PhiNode] = field(default_factory=list)
    instrs: list[Instr] = field(default_factory=list)
    terminator: Terminator | None = None

    def successors(self) -> list[int]:
        t = self.terminator
        if isinstance(t, Jump):
            return [t.target]
        if isinstance(t, CondBr):
            return [t.then_target, t.else_target]
        return []

    @property
    def ends_in_sync(self) -> bool:
        return bool(self.instrs) and self.instrs[-1].is_sync


class SsaFunction:
    def __init__(self, name: str, params: list[ParamDecl]):
        self.name = name
        self.params = params
        self.blocks: list[BasicBlock] = []
        self.entry = 0
        self._next_value = 0
        self.value_types: dict[ValueId, Ty] = {}
        # scalar parameters are function-level values
        self.param_values: dict[str, ValueId] = {}

    def new_value(self, ty: Ty) -> ValueId:
        vid = self._next_value
        self._next_value += 1
        self.value_types[vid] = ty
        return vid

    def new_block(self) -> BasicBlock:
        block = BasicBlock(len(self.blocks))
        self.blocks.append(block)
        return block

    def block(self, bid: int) -> BasicBlock:
        return self.blocks[bid]

    def predecessors(self) -> dict[int, list[int]]:
        preds: dict[int, list[int]] = {b.id: [] for b in self.blocks}
        for b in self.blocks:
            for s in b.successors():
                preds[s].append(b.id)
        return preds

    def defining_block(self) -> dict[ValueId, int]:
        """Value id -> block id; parameters map to -1."""
        out = {vid: -1 for vid in self.param_values.values()}
        for b in self.blocks:
            for phi in b.phis:
                out[phi.result] = b.id
            for ins in b.instrs:
                if ins.result is not None:
                    out[ins.result] = b.id
        return out

    def replace_uses(self, mapping: dict[ValueId, ValueId]) -> None:
        """Rewrite operand references through `mapping` (chases chains)."""
        def resolve(v: ValueId) -> ValueId:
            while v in mapping:
                v = mapping[v]
            return v

        for b in self.blocks:
            for phi in b.phis:
                phi.incoming = [(p, resolve(v)) for p, v in phi.incoming]
            for ins in b.instrs:
                ins.operands = [resolve(v) for v in ins.operands]
            if isinstance(b.terminator, CondBr):
                b.terminator.cond = resolve(b.terminator.cond)

    # --- textual dump (stable; documented in docs/ir-dumps.md) ---

    def dump(self) -> str:
        lines = [f"func {self.name}({', '.join(p.name for p in self.params)})"]
        for name, vid in self.param_values.items():
            lines.append(f"  param %{vid} = {name} : {self.value_types[vid]}")
        preds = self.predecessors()
        for b in self.blocks:
            plist = ", ".join(f"b{p}" for p in preds[b.id]) or "-"
            lines.append(f"b{b.id}:  ; preds: {plist}")
            for phi in b.phis:
                inc = ", ".join(f"[b{p}: %{v}]" for p, v in phi.incoming)
                lines.append(f"  %{phi.result} = phi {phi.ty} {inc}")
            for ins in b.instrs:
                lines.append("  " + format_instr(ins))
            t = b.terminator
            if isinstance(t, Jump):
                lines.append(f"  jump b{t.target}")
            elif isinstance(t, CondBr):
                lines.append(f"  br %{t.cond} ? b{t.then_target} : b{t.else_target}")
            elif isinstance(t, Ret):
                lines.append("  ret")
            else:
                lines.append("  <no terminator>")
        return "\n".join(lines) + "\n"


def format_instr(ins: Instr) -> str:
    parts = []
    if ins.result is not None:
        parts.append(f"%{ins.result} =")
    parts.append(ins.op)
    if ins.ty != Ty.VOID:
        parts.append(str(ins.ty))
    parts.extend(f"%{v}" for v in ins.operands)
    for key in sorted(ins.attrs):
        parts.append(f"{key}={ins.attrs[key]}")
    return " ".join(parts)
