"""kernelforge: a desk-scale high-level-synthesis toolchain.

Compiles MiniCL kernels (an OpenCL-C-style subset with pipes, work-group
functions, device-side enqueue and coarse SVM) into scheduled dataflow
hardware designs, emits a checkable Verilog subset, and executes the design
in a cycle-accurate simulator that is verified against an AST-level
reference interpreter.
"""

__version__ = "0.1.0"
