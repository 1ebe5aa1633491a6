"""Structural checks on lowered designs: acyclicity, width discipline,
sync placement, and control-edge agreement with the CFG."""

from __future__ import annotations

from ..minicl.ast import Ty
from .graph import BlockGraph, KernelDesign, width_of

# expected operand widths by node kind; None entries are type-dependent
_BOOL_OPS = {"and", "or", "not"}
_CMP_PREFIX = "cmp_"


def _slot_widths(node) -> list[int]:
    kind = node.kind
    if kind == "arith":
        op = node.params["op"]
        if op == "select":
            return [1, node.out_width, node.out_width]
        if op in _BOOL_OPS:
            return [1] * len(node.srcs)
        if op.startswith(_CMP_PREFIX):
            return [32, 32]
        if op.startswith("cast_") or op in ("neg",):
            return [32] * len(node.srcs)
        return [32, 32]
    if kind == "stream_load":
        return [32]
    if kind == "stream_store":
        return [32, 32]
    if kind == "pipe_write":
        return [32]
    if kind == "sync":
        if node.params["kind"] == "broadcast":
            return [32, 32]
        if node.params["kind"] == "reduce":
            return [32]
        return []
    if kind == "enqueue":
        return [32] * len(node.srcs)
    return [0] * len(node.srcs)


def verify_design(design: KernelDesign) -> list[str]:
    errors: list[str] = []
    for graph in design.blocks:
        errors.extend(_check_block(design, graph))
    cfg = set(design.cfg_edges)
    derived = set()
    for g in design.blocks:
        t = g.terminator
        if t[0] == "jump":
            derived.add((g.block_id, t[1]))
        elif t[0] == "br":
            derived.add((g.block_id, t[2]))
            derived.add((g.block_id, t[3]))
    if cfg != derived:
        errors.append(f"control edges {sorted(derived)} != CFG edges {sorted(cfg)}")
    return errors


def _check_block(design: KernelDesign, graph: BlockGraph) -> list[str]:
    errors: list[str] = []
    bid = graph.block_id

    # acyclic and forward-referencing: node srcs must point at earlier nodes
    for node in graph.nodes:
        for tag, idx in node.srcs:
            if tag == "n" and idx >= node.id:
                errors.append(f"b{bid}: edge n{idx}->n{node.id} is not forward")

    # width discipline on node-to-node edges and live-in values
    for node in graph.nodes:
        expected = _slot_widths(node)
        for slot, (tag, idx) in enumerate(node.srcs):
            want = expected[slot] if slot < len(expected) else 32
            if want == 0:
                continue
            if tag == "n":
                have = graph.nodes[idx].out_width
            else:
                have = width_of(design.value_types.get(idx, Ty.I32))
            if have != want:
                errors.append(
                    f"b{bid}: n{node.id} slot {slot} expects width {want}, "
                    f"producer has {have}")
    if graph.terminator[0] == "br":
        tag, idx = graph.terminator[1]
        have = graph.nodes[idx].out_width if tag == "n" else \
            width_of(design.value_types.get(idx, Ty.I32))
        if have != 1:
            errors.append(f"b{bid}: branch condition must be 1-bit, found {have}")

    # a sync node terminates its region: nothing may follow it
    if graph.sync_node is not None:
        if graph.sync_node != len(graph.nodes) - 1:
            errors.append(f"b{bid}: sync node n{graph.sync_node} is not last")
    return errors
