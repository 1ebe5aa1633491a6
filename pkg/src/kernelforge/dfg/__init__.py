from .graph import BlockGraph, HwNode, KernelDesign, StreamDescriptor
from .affine import classify_index
from .lower import lower_function
from .verify import verify_design

__all__ = ["BlockGraph", "HwNode", "KernelDesign", "StreamDescriptor",
           "classify_index", "lower_function", "verify_design"]
