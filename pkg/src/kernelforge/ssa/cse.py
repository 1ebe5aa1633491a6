"""Block-local common-subexpression elimination.

Within each block, pure instructions with an identical (op, type, operands,
attrs) key collapse onto the first occurrence. Loads are reused only when
the same (buffer, index value) is loaded again with no intervening impure
instruction (stores, pipe ops, syncs, enqueues invalidate every pending
load; loads themselves do not). Impure instructions are never merged or
reordered. The pass is idempotent.
"""

from __future__ import annotations

from .ir import Instr, SsaFunction


def _pure_key(ins: Instr):
    return (ins.op, ins.ty, tuple(ins.operands),
            tuple(sorted(ins.attrs.items())))


def run_cse(fn: SsaFunction) -> SsaFunction:
    mapping: dict[int, int] = {}

    def resolve(v: int) -> int:
        while v in mapping:
            v = mapping[v]
        return v

    for block in fn.blocks:
        available: dict[tuple, int] = {}
        loads: dict[tuple, int] = {}
        kept: list[Instr] = []
        for ins in block.instrs:
            ins.operands = [resolve(v) for v in ins.operands]
            if ins.is_pure:
                key = _pure_key(ins)
                prior = available.get(key)
                if prior is not None:
                    mapping[ins.result] = prior
                    continue
                available[key] = ins.result
                kept.append(ins)
                continue
            if ins.op == "load":
                key = (ins.attrs["buf"], ins.operands[0])
                prior = loads.get(key)
                if prior is not None:
                    mapping[ins.result] = prior
                    continue
                loads[key] = ins.result
                kept.append(ins)
                continue
            # any other impure instruction invalidates pending loads
            loads.clear()
            kept.append(ins)
        block.instrs = kept

    if mapping:
        fn.replace_uses(mapping)
    return fn
