"""MiniCL arithmetic semantics.

This module is the single definition of what the language's operators
compute: 32-bit two's-complement wraparound integers, IEEE-754 binary32
round-to-nearest-even floats, and deterministic edge-case rules. Both the
cycle simulator and the reference interpreter evaluate through it, so
bit-exact comparison between the two is meaningful.

Representation: i32/u32/bool values are Python ints (bool as 0/1, i32
sign-extended, u32 in [0, 2^32)); f32 values are Python floats that are
always exact binary32 values. Memory and pipes hold raw 32-bit words.

Edge cases (deterministic by definition, mirrored in docs/builtins.md):
  - integer divide/modulo by zero: quotient = all-ones, remainder = dividend
  - integer divide truncates toward zero; modulo has the dividend's sign
  - float -> int casts: NaN -> 0, otherwise truncate toward zero and
    saturate to the target range
"""

from __future__ import annotations

import math
import struct

import numpy as np

from .minicl.ast import Ty

MASK32 = 0xFFFFFFFF
I32_MIN = -(1 << 31)
I32_MAX = (1 << 31) - 1

_np_err = np.errstate(all="ignore")


def wrap_i32(v: int) -> int:
    v &= MASK32
    return v - (1 << 32) if v >= (1 << 31) else v


def wrap_u32(v: int) -> int:
    return v & MASK32


def f32(v: float) -> float:
    """Round to the nearest binary32 value."""
    return float(np.float32(v))


# --- word <-> value conversions (buffer and pipe storage) -------------------

def value_to_word(v, ty: Ty) -> int:
    if ty == Ty.F32:
        return struct.unpack("<I", struct.pack("<f", v))[0]
    if ty == Ty.BOOL:
        return 1 if v else 0
    return v & MASK32


def word_to_value(word: int, ty: Ty):
    if ty == Ty.F32:
        return struct.unpack("<f", struct.pack("<I", word & MASK32))[0]
    if ty == Ty.BOOL:
        return word & 1
    if ty == Ty.I32:
        return wrap_i32(word)
    return wrap_u32(word)


# --- operator evaluation -----------------------------------------------------

def binop(op: str, ty: Ty, a, b):
    """Evaluate `a op b` at type `ty` (the operand type)."""
    if ty == Ty.F32:
        with _np_err:
            x, y = np.float32(a), np.float32(b)
            if op == "add":
                return float(x + y)
            if op == "sub":
                return float(x - y)
            if op == "mul":
                return float(x * y)
            if op == "div":
                return float(x / y)
        raise AssertionError(op)
    if op == "add":
        r = a + b
    elif op == "sub":
        r = a - b
    elif op == "mul":
        r = a * b
    elif op == "div":
        if b == 0:
            return wrap_i32(MASK32) if ty == Ty.I32 else MASK32
        q = abs(a) // abs(b)
        r = q if (a < 0) == (b < 0) else -q
    elif op == "mod":
        if b == 0:
            return a
        q = abs(a) // abs(b)
        q = q if (a < 0) == (b < 0) else -q
        r = a - q * b
    else:
        raise AssertionError(op)
    return wrap_i32(r) if ty == Ty.I32 else wrap_u32(r)


def compare(op: str, ty: Ty, a, b) -> int:
    """Comparisons return 0/1. For f32, IEEE semantics (NaN compares
    false for everything except !=)."""
    if ty == Ty.F32 and (math.isnan(a) or math.isnan(b)):
        return 1 if op == "ne" else 0
    result = {
        "eq": a == b, "ne": a != b, "lt": a < b,
        "le": a <= b, "gt": a > b, "ge": a >= b,
    }[op]
    return 1 if result else 0


def neg(ty: Ty, a):
    if ty == Ty.F32:
        return float(-np.float32(a))
    return wrap_i32(-a) if ty == Ty.I32 else wrap_u32(-a)


def cast(kind: str, a):
    """kind: bits | i2f | u2f | f2i | f2u."""
    if kind == "bits":
        return a  # reinterpretation happens at the word level
    if kind == "i2f" or kind == "u2f":
        return f32(a)
    if math.isnan(a):
        return 0
    if kind == "f2i":
        if a >= I32_MAX:
            return I32_MAX
        if a <= I32_MIN:
            return I32_MIN
        return math.trunc(a)
    if kind == "f2u":
        if a >= MASK32:
            return MASK32
        if a <= 0:
            return 0
        return math.trunc(a)
    raise AssertionError(kind)


def cast_value(src: Ty, dst: Ty, a):
    """Cast `a` from scalar type src to dst per the (type) cast rules."""
    if src == dst:
        return a
    if src.is_integer and dst.is_integer:
        # reinterpret the 32-bit pattern
        return word_to_value(value_to_word(a, src), dst)
    if dst == Ty.F32:
        return f32(a)
    return word_to_value(value_to_word(cast("f2i" if dst == Ty.I32 else "f2u", a), dst), dst)


def reduce_op(op: str, ty: Ty, values):
    """Fold for work_group_reduce_*: ascending-local-id order (relevant
    for f32 add rounding); min/max propagate NaN."""
    it = iter(values)
    acc = next(it)
    for v in it:
        if op == "add":
            acc = binop("add", ty, acc, v)
        elif op == "min":
            if ty == Ty.F32 and (math.isnan(acc) or math.isnan(v)):
                acc = float("nan")
            else:
                acc = min(acc, v)
        elif op == "max":
            if ty == Ty.F32 and (math.isnan(acc) or math.isnan(v)):
                acc = float("nan")
            else:
                acc = max(acc, v)
        else:
            raise AssertionError(op)
    return acc
