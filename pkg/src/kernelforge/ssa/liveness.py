"""SSA liveness and per-edge handshake payloads.

live_in(B): values defined outside B that B (or anything it reaches) still
needs. Phi results are defined by their block; phi arguments are uses on
the incoming edge. The payload carried across a CFG edge P->B is
live_in(B) plus the phi arguments selected along that edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ir import CondBr, SsaFunction


@dataclass
class BlockLiveness:
    live_in: set[int] = field(default_factory=set)
    live_out: set[int] = field(default_factory=set)


def compute_liveness(fn: SsaFunction) -> dict[int, BlockLiveness]:
    defs: dict[int, set[int]] = {}
    upward: dict[int, set[int]] = {}
    for b in fn.blocks:
        block_defs: set[int] = {phi.result for phi in b.phis}
        uses: set[int] = set()
        for ins in b.instrs:
            for v in ins.operands:
                if v not in block_defs:
                    uses.add(v)
            if ins.result is not None:
                block_defs.add(ins.result)
        if isinstance(b.terminator, CondBr) and b.terminator.cond not in block_defs:
            uses.add(b.terminator.cond)
        defs[b.id] = block_defs
        upward[b.id] = uses

    param_ids = set(fn.param_values.values())
    live = {b.id: BlockLiveness() for b in fn.blocks}
    changed = True
    while changed:
        changed = False
        for b in reversed(fn.blocks):
            out: set[int] = set()
            for s in b.successors():
                out |= live[s].live_in
                for phi in fn.block(s).phis:
                    for p, v in phi.incoming:
                        if p == b.id:
                            out.add(v)
            new_in = upward[b.id] | (out - defs[b.id])
            # scalar parameters ride every token from injection; they are
            # broadcast wires, not handshake payload
            new_in -= param_ids
            out -= param_ids
            if new_in != live[b.id].live_in or out != live[b.id].live_out:
                live[b.id].live_in = new_in
                live[b.id].live_out = out
                changed = True
    return live


def edge_payload(fn: SsaFunction, live: dict[int, BlockLiveness],
                 src: int, dst: int) -> set[int]:
    payload = set(live[dst].live_in)
    for phi in fn.block(dst).phis:
        for p, v in phi.incoming:
            if p == src and v not in fn.param_values.values():
                payload.add(v)
    return payload
