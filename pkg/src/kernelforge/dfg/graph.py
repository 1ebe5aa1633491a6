"""Hardware dataflow graphs: one BlockGraph per basic block plus the
kernel-level design that ties them together.

Node kinds:
  const        params: value
  arith        params: op (add/sub/.../cmp_eq/.../not/and/or/select/cast_*)
  idgen        params: which (gid|lid|grp|gsz|lsz), dim
  stream_load  params: stream          srcs: [index]
  stream_store params: stream          srcs: [index, data]
  sync         params: kind (barrier|broadcast|reduce), op, site
  pipe_read    params: pipe
  pipe_write   params: pipe            srcs: [value]
  enqueue      params: queue, child, args   srcs: [gsize, lsize, scalars...]
  phi          params: incoming {pred block id: value id}

A node source is ("n", node_id) for an in-block producer or ("v", value_id)
for a value carried in by the token (live-in or scalar parameter).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..minicl.ast import Ty

Src = tuple[str, int]


@dataclass
class HwNode:
    id: int
    kind: str
    out_width: int  # 0 (no result), 1, or 32
    result: int | None = None  # SSA value id produced, if any
    srcs: list[Src] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    ty: Ty = Ty.VOID

    def describe(self) -> str:
        extra = " ".join(f"{k}={self.params[k]}" for k in sorted(self.params)
                         if k != "incoming")
        if self.kind == "phi":
            inc = self.params["incoming"]
            extra = "incoming=" + ",".join(f"b{p}:%{v}" for p, v in sorted(inc.items()))
        srcs = " ".join(f"{tag}{idx}" for tag, idx in self.srcs)
        res = f"%{self.result}" if self.result is not None else "-"
        return f"n{self.id} {self.kind} w{self.out_width} {res} [{srcs}] {extra}".rstrip()


@dataclass
class BlockGraph:
    block_id: int
    nodes: list[HwNode] = field(default_factory=list)
    live_in: set[int] = field(default_factory=set)
    live_out: set[int] = field(default_factory=set)
    sync_node: int | None = None
    # terminator: ("jump", target) | ("br", cond_src, then, else) | ("ret",)
    terminator: tuple = ("ret",)

    def edges(self):
        """Node-to-node edges as (producer id, consumer id, slot)."""
        for node in self.nodes:
            for slot, (tag, idx) in enumerate(node.srcs):
                if tag == "n":
                    yield (idx, node.id, slot)

    def node_by_result(self, value_id: int) -> HwNode | None:
        for n in self.nodes:
            if n.result == value_id:
                return n
        return None


@dataclass
class StreamDescriptor:
    stream_id: int
    buffer: str
    direction: str  # "read" | "write"
    # ("static", constant, {term: coeff}) | ("dynamic",)
    # term: ("gid"|"lid"|"grp", dim) | ("loop", phi value id)
    index_class: tuple

    def describe(self) -> str:
        if self.index_class[0] == "dynamic":
            idx = "dynamic"
        else:
            _, const, terms = self.index_class
            parts = [str(const)]
            for term in sorted(terms, key=str):
                coeff = terms[term]
                name = f"{term[0]}{term[1]}" if term[0] != "loop" else f"loop%{term[1]}"
                parts.append(f"{coeff}*{name}")
            idx = "static(" + " + ".join(parts) + ")"
        return f"s{self.stream_id} {self.buffer} {self.direction} {idx}"


@dataclass
class KernelDesign:
    name: str
    blocks: list[BlockGraph]
    entry: int
    cfg_edges: list[tuple[int, int]]
    streams: list[StreamDescriptor]
    pipe_ports: dict[str, dict]      # name -> {direction, elem}
    queue_ports: list[str]
    scalar_ports: dict[str, Ty]      # name -> type
    param_values: dict[str, int]     # scalar param name -> SSA value id
    value_types: dict[int, Ty]
    nd_dims_used: set[int]
    edge_payloads: dict[tuple[int, int], list[int]] = field(default_factory=dict)

    @property
    def exit_blocks(self) -> list[int]:
        return [b.block_id for b in self.blocks if b.terminator[0] == "ret"]

    def block(self, bid: int) -> BlockGraph:
        return self.blocks[bid]

    def dump(self) -> str:
        """Stable text form, one node per line then one edge per line
        (docs/ir-dumps.md); consumed by golden tests."""
        lines = [f"design {self.name}"]
        for s in self.streams:
            lines.append("stream " + s.describe())
        for b in self.blocks:
            term = " ".join(str(x) for x in b.terminator)
            lines.append(f"block b{b.block_id} live_in={sorted(b.live_in)} "
                         f"live_out={sorted(b.live_out)} term=({term})")
            for n in b.nodes:
                lines.append("  node " + n.describe())
            for p, c, slot in b.edges():
                lines.append(f"  edge n{p} -> n{c}.{slot}")
        for a, b in self.cfg_edges:
            lines.append(f"cfg b{a} -> b{b}")
        return "\n".join(lines) + "\n"


def width_of(ty: Ty) -> int:
    if ty == Ty.VOID:
        return 0
    return 1 if ty == Ty.BOOL else 32
