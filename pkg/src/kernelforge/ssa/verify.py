"""Structural SSA checker.

Reports violations as data; used as a postcondition after construction and
by tests that deliberately corrupt functions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ir import CondBr, Jump, Ret, SsaFunction


@dataclass
class Violation:
    kind: str  # "single-def" | "dominance" | "phi" | "terminator" | "maximality" | "structure"
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def compute_dominators(fn: SsaFunction) -> dict[int, set[int]]:
    """dom[b] = set of blocks dominating b (including b). Iterative set
    intersection; block counts are small."""
    all_ids = {b.id for b in fn.blocks}
    preds = fn.predecessors()
    dom = {b.id: set(all_ids) for b in fn.blocks}
    dom[fn.entry] = {fn.entry}
    changed = True
    while changed:
        changed = False
        for b in fn.blocks:
            if b.id == fn.entry:
                continue
            ps = preds[b.id]
            new = set.intersection(*(dom[p] for p in ps)) if ps else set()
            new.add(b.id)
            if new != dom[b.id]:
                dom[b.id] = new
                changed = True
    return dom


def verify_ssa(fn: SsaFunction) -> list[Violation]:
    violations: list[Violation] = []
    preds = fn.predecessors()

    # structure: entry, terminators, reachability
    if not fn.blocks:
        return [Violation("structure", "function has no blocks")]
    if preds[fn.entry]:
        violations.append(Violation("structure", "entry block has predecessors"))
    reachable = {fn.entry}
    work = [fn.entry]
    while work:
        for s in fn.block(work.pop()).successors():
            if s not in reachable:
                reachable.add(s)
                work.append(s)
    for b in fn.blocks:
        if b.terminator is None or not isinstance(b.terminator, (Jump, CondBr, Ret)):
            violations.append(Violation("terminator", f"block b{b.id} has no terminator"))
        if b.id not in reachable:
            violations.append(Violation("structure", f"block b{b.id} unreachable from entry"))

    # single definition
    def_site: dict[int, tuple[int, int]] = {}  # value -> (block, position)
    for vid in fn.param_values.values():
        def_site[vid] = (-1, -1)
    for b in fn.blocks:
        for i, phi in enumerate(b.phis):
            if phi.result in def_site:
                violations.append(Violation("single-def", f"%{phi.result} defined more than once"))
            def_site[phi.result] = (b.id, -1)  # phis define at block top
        for i, ins in enumerate(b.instrs):
            if ins.op in ("var_load", "var_store"):
                violations.append(Violation("structure", f"pre-SSA {ins.op} remains in b{b.id}"))
            if ins.result is None:
                continue
            if ins.result in def_site:
                violations.append(Violation("single-def", f"%{ins.result} defined more than once"))
            def_site[ins.result] = (b.id, i)

    # dominance of uses
    dom = compute_dominators(fn)

    def check_use(value: int, block: int, position: int, what: str):
        site = def_site.get(value)
        if site is None:
            violations.append(Violation("dominance", f"{what} uses undefined value %{value}"))
            return
        def_block, def_pos = site
        if def_block == -1:
            return  # parameters dominate everything
        if def_block == block:
            if def_pos >= position:
                violations.append(Violation(
                    "dominance", f"{what} uses %{value} before its definition"))
        elif def_block not in dom.get(block, set()):
            violations.append(Violation(
                "dominance", f"{what} in b{block} not dominated by def of %{value} in b{def_block}"))

    for b in fn.blocks:
        for phi in b.phis:
            inc_preds = [p for p, _ in phi.incoming]
            if sorted(inc_preds) != sorted(preds[b.id]):
                violations.append(Violation(
                    "phi", f"phi %{phi.result} incoming {inc_preds} != preds {preds[b.id]}"))
            for p, v in phi.incoming:
                # the value must be available at the end of predecessor p
                check_use(v, p, len(fn.block(p).instrs) if p < len(fn.blocks) else 0,
                          f"phi %{phi.result} (via b{p})")
        for i, ins in enumerate(b.instrs):
            for v in ins.operands:
                check_use(v, b.id, i, f"instr %{ins.result} {ins.op}" if ins.result is not None
                          else f"instr {ins.op}")
        if isinstance(b.terminator, CondBr):
            check_use(b.terminator.cond, b.id, len(b.instrs), "branch condition")

    # maximality: no mergeable straight-line pair (sync boundaries exempt)
    for a in fn.blocks:
        succs = a.successors()
        if len(succs) != 1:
            continue
        b_id = succs[0]
        if b_id == fn.entry or b_id == a.id:
            continue
        if len(preds[b_id]) == 1 and not a.ends_in_sync:
            violations.append(Violation(
                "maximality", f"blocks b{a.id} -> b{b_id} should have been merged"))

    # sync placement: a sync instruction must be the last in its block
    for b in fn.blocks:
        for i, ins in enumerate(b.instrs):
            if ins.is_sync and i != len(b.instrs) - 1:
                violations.append(Violation(
                    "structure", f"sync {ins.op} not at end of block b{b.id}"))

    return violations
