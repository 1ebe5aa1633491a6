"""SSA conversion.

Replaces var_load / var_store pseudo-instructions with direct value flow,
inserting phi nodes where paths merge.

Two passes: the local pass resolves loads against stores earlier in the
same block and records each block's exit value per variable; the global
pass resolves block-entry reads by walking predecessors, placing one
(memoized) phi per merge point to break cycles. Trivial phis are removed
afterwards, so single-definition variables end up with no phis at all.

Variables read before any assignment yield 0 (see docs/minicl-grammar.md).
"""

from __future__ import annotations

from ..minicl.ast import Ty
from .ir import Instr, PhiNode, SsaFunction


class _Converter:
    def __init__(self, fn: SsaFunction):
        self.fn = fn
        self.preds = fn.predecessors()
        self.exit_def: dict[tuple[int, int], int] = {}   # (block, slot) -> value
        self.entry_memo: dict[tuple[int, int], int] = {}  # (block, slot) -> value
        self.phi_of: dict[tuple[int, int], PhiNode] = {}
        self.pending: list[tuple[int, int, int]] = []     # (block, slot, placeholder)
        self.replacements: dict[int, int] = {}
        self.slot_types: dict[int, Ty] = {}
        self.zero_consts: dict[int, int] = {}             # slot -> value
        self.zero_instrs: list[Instr] = []

    # --- pass 1: block-local resolution ---

    def local_pass(self) -> None:
        for block in self.fn.blocks:
            local: dict[int, int] = {}
            new_instrs: list[Instr] = []
            for ins in block.instrs:
                if ins.op == "var_store":
                    local[ins.attrs["var"]] = ins.operands[0]
                elif ins.op == "var_load":
                    slot = ins.attrs["var"]
                    self.slot_types[slot] = ins.ty
                    if slot in local:
                        self.replacements[ins.result] = local[slot]
                    else:
                        # placeholder: the value flowing in at block entry
                        self.pending.append((block.id, slot, ins.result))
                        local[slot] = ins.result
                else:
                    new_instrs.append(ins)
            block.instrs = new_instrs
            for slot, val in local.items():
                self.exit_def[(block.id, slot)] = val

    # --- pass 2: global resolution ---

    def read_exit(self, block: int, slot: int) -> int:
        if (block, slot) in self.exit_def:
            return self.exit_def[(block, slot)]
        return self.read_entry(block, slot)

    def read_entry(self, block: int, slot: int) -> int:
        key = (block, slot)
        if key in self.entry_memo:
            return self.entry_memo[key]
        preds = self.preds[block]
        if not preds:
            val = self.zero_const(slot)
        elif len(preds) == 1:
            # no cycle risk: any CFG cycle passes a multi-predecessor block,
            # and those memoize a phi before recursing
            val = self.read_exit(preds[0], slot)
        else:
            ty = self.slot_types[slot]
            phi_val = self.fn.new_value(ty)
            phi = PhiNode(phi_val, ty, [])
            self.fn.block(block).phis.append(phi)
            self.phi_of[key] = phi
            self.entry_memo[key] = phi_val
            for p in preds:
                phi.incoming.append((p, self.read_exit(p, slot)))
            val = phi_val
        self.entry_memo[key] = val
        return val

    def zero_const(self, slot: int) -> int:
        if slot not in self.zero_consts:
            ty = self.slot_types[slot]
            vid = self.fn.new_value(ty)
            value = 0.0 if ty == Ty.F32 else 0
            self.zero_instrs.append(Instr(vid, "const", ty, [], {"value": value}))
            self.zero_consts[slot] = vid
        return self.zero_consts[slot]

    def convert(self) -> None:
        self.local_pass()
        for block_id, slot, placeholder in self.pending:
            self.replacements[placeholder] = self.read_entry(block_id, slot)
        if self.zero_instrs:
            entry = self.fn.block(self.fn.entry)
            entry.instrs[:0] = self.zero_instrs
        self.fn.replace_uses(self.replacements)
        self.remove_trivial_phis()
        self.prune_dead_phis()

    # A phi is trivial when all incoming values (ignoring self-references)
    # agree; it is replaced by that value. Removal can cascade, so iterate.
    def remove_trivial_phis(self) -> None:
        fn = self.fn
        changed = True
        while changed:
            changed = False
            mapping: dict[int, int] = {}
            for block in fn.blocks:
                keep: list[PhiNode] = []
                for phi in block.phis:
                    others = {v for _, v in phi.incoming if v != phi.result}
                    if len(others) == 1:
                        mapping[phi.result] = next(iter(others))
                        changed = True
                    else:
                        keep.append(phi)
                block.phis = keep
            if mapping:
                fn.replace_uses(mapping)

    def prune_dead_phis(self) -> None:
        fn = self.fn
        while True:
            used: set[int] = set()
            for block in fn.blocks:
                for phi in block.phis:
                    used.update(v for _, v in phi.incoming)
                for ins in block.instrs:
                    used.update(ins.operands)
                t = block.terminator
                if hasattr(t, "cond"):
                    used.add(t.cond)
            removed = False
            for block in fn.blocks:
                keep = [p for p in block.phis if p.result in used]
                if len(keep) != len(block.phis):
                    block.phis = keep
                    removed = True
            if not removed:
                return


def to_ssa(fn: SsaFunction) -> SsaFunction:
    """Convert the pre-SSA output of build_cfg to SSA form, in place."""
    _Converter(fn).convert()
    return fn
