"""Lower SSA functions to per-block hardware dataflow graphs."""

from __future__ import annotations

from ..minicl.ast import GlobalBufferParam, PipeParam, QueueParam, ScalarParam, Ty
from ..ssa.ir import CondBr, Jump, Ret, SsaFunction
from ..ssa.liveness import compute_liveness, edge_payload
from .affine import classify_index
from .graph import BlockGraph, HwNode, KernelDesign, StreamDescriptor, width_of

_ARITH_OPS = frozenset({
    "add", "sub", "mul", "div", "mod", "neg", "not", "and", "or",
    "cmp_eq", "cmp_ne", "cmp_lt", "cmp_le", "cmp_gt", "cmp_ge", "select",
    "cast_bits", "cast_i2f", "cast_u2f", "cast_f2i", "cast_f2u",
})
_ID_WHICH = {"id_gid": "gid", "id_lid": "lid", "id_grp": "grp",
             "id_gsz": "gsz", "id_lsz": "lsz"}


class LoweringError(Exception):
    """Internal error: type-checked MiniCL produced an unmappable instruction."""


def lower_function(fn: SsaFunction) -> KernelDesign:
    live = compute_liveness(fn)
    param_ids = set(fn.param_values.values())
    streams: list[StreamDescriptor] = []
    blocks: list[BlockGraph] = []
    nd_dims: set[int] = set()

    for b in fn.blocks:
        graph = BlockGraph(block_id=b.id)
        produced: dict[int, int] = {}  # value id -> node id (within block)

        def src_of(value: int, graph=graph, produced=produced):
            if value in produced:
                return ("n", produced[value])
            return ("v", value)

        def add(node_kind, result, ty, srcs, **params):
            node = HwNode(len(graph.nodes), node_kind, width_of(ty), result,
                          list(srcs), params, ty)
            graph.nodes.append(node)
            if result is not None:
                produced[result] = node.id
            return node

        for phi in b.phis:
            add("phi", phi.result, phi.ty, [],
                incoming={p: v for p, v in phi.incoming})

        for ins in b.instrs:
            srcs = [src_of(v) for v in ins.operands]
            if ins.op == "const":
                add("const", ins.result, ins.ty, [], value=ins.attrs["value"])
            elif ins.op in _ARITH_OPS:
                add("arith", ins.result, ins.ty, srcs, op=ins.op,
                    operand_ty=fn.value_types[ins.operands[0]])
            elif ins.op in _ID_WHICH:
                which = _ID_WHICH[ins.op]
                dim = ins.attrs["dim"]
                if which in ("gid", "lid", "grp"):
                    nd_dims.add(dim)
                add("idgen", ins.result, ins.ty, [], which=which, dim=dim)
            elif ins.op == "load":
                sid = len(streams)
                streams.append(StreamDescriptor(
                    sid, ins.attrs["buf"], "read",
                    classify_index(fn, ins.operands[0])))
                add("stream_load", ins.result, ins.ty, srcs, stream=sid,
                    buf=ins.attrs["buf"])
            elif ins.op == "store":
                sid = len(streams)
                streams.append(StreamDescriptor(
                    sid, ins.attrs["buf"], "write",
                    classify_index(fn, ins.operands[0])))
                add("stream_store", None, Ty.VOID, srcs, stream=sid,
                    buf=ins.attrs["buf"], data_ty=fn.value_types[ins.operands[1]])
            elif ins.op == "pipe_read":
                add("pipe_read", ins.result, ins.ty, [], pipe=ins.attrs["pipe"])
            elif ins.op == "pipe_write":
                add("pipe_write", None, Ty.VOID, srcs, pipe=ins.attrs["pipe"],
                    data_ty=fn.value_types[ins.operands[0]])
            elif ins.op == "barrier":
                node = add("sync", None, Ty.VOID, [], kind="barrier",
                           site=ins.attrs["site"])
                graph.sync_node = node.id
            elif ins.op == "wg_broadcast":
                node = add("sync", ins.result, ins.ty, srcs, kind="broadcast",
                           site=ins.attrs["site"])
                graph.sync_node = node.id
            elif ins.op.startswith("wg_reduce_"):
                node = add("sync", ins.result, ins.ty, srcs, kind="reduce",
                           op=ins.op.removeprefix("wg_reduce_"),
                           site=ins.attrs["site"])
                graph.sync_node = node.id
            elif ins.op == "enqueue":
                add("enqueue", None, Ty.VOID, srcs, queue=ins.attrs["queue"],
                    child=ins.attrs["child"], args=ins.attrs["args"])
            else:
                raise LoweringError(f"unmappable instruction '{ins.op}' in b{b.id}")

        graph.live_in = set(live[b.id].live_in)
        graph.live_out = set(live[b.id].live_out)
        t = b.terminator
        if isinstance(t, Jump):
            graph.terminator = ("jump", t.target)
        elif isinstance(t, CondBr):
            graph.terminator = ("br", src_of(t.cond), t.then_target, t.else_target)
        elif isinstance(t, Ret):
            graph.terminator = ("ret",)
        blocks.append(graph)

    cfg_edges = [(b.id, s) for b in fn.blocks for s in b.successors()]

    pipe_ports: dict[str, dict] = {}
    queue_ports: list[str] = []
    scalar_ports: dict[str, Ty] = {}
    for p in fn.params:
        if isinstance(p.kind, PipeParam):
            pipe_ports[p.name] = {"direction": p.kind.direction, "elem": p.kind.elem}
        elif isinstance(p.kind, QueueParam):
            queue_ports.append(p.name)
        elif isinstance(p.kind, ScalarParam):
            scalar_ports[p.name] = p.kind.ty

    design = KernelDesign(
        name=fn.name, blocks=blocks, entry=fn.entry, cfg_edges=cfg_edges,
        streams=streams, pipe_ports=pipe_ports, queue_ports=queue_ports,
        scalar_ports=scalar_ports, param_values=dict(fn.param_values),
        value_types=dict(fn.value_types), nd_dims_used=nd_dims)
    for a, s in cfg_edges:
        design.edge_payloads[(a, s)] = sorted(edge_payload(fn, live, a, s))
    return design
