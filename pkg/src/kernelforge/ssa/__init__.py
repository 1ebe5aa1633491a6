from .ir import BasicBlock, Instr, PhiNode, SsaFunction
from .build import build_cfg
from .ssaform import to_ssa
from .verify import verify_ssa
from .cse import run_cse
from .liveness import compute_liveness, edge_payload

__all__ = [
    "BasicBlock", "Instr", "PhiNode", "SsaFunction",
    "build_cfg", "to_ssa", "verify_ssa", "run_cse",
    "compute_liveness", "edge_payload",
]
