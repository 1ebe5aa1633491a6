"""Static/dynamic classification of stream indices.

An index is Static when it is an integer-linear combination of NDRange id
values and literal-bounded loop counters with literal coefficients:

    constant + sum(coeff * term),  term in {gid(d), lid(d), grp(d), loop counter}

Everything else (loaded values, size builtins, casts, products of two
non-constant values, counters with non-literal bounds or steps) is Dynamic.
Classification is sound: a Static verdict always carries the exact
coefficient vector.
"""

from __future__ import annotations

from ..ssa.ir import CondBr, Instr, PhiNode, SsaFunction

_ID_TERMS = {"id_gid": "gid", "id_lid": "lid", "id_grp": "grp"}

Affine = tuple[int, dict]  # (constant, {term: coeff})


def _combine(a: Affine, b: Affine, sign: int) -> Affine:
    const = a[0] + sign * b[0]
    terms = dict(a[1])
    for term, coeff in b[1].items():
        terms[term] = terms.get(term, 0) + sign * coeff
        if terms[term] == 0:
            del terms[term]
    return (const, terms)


def _scale(a: Affine, k: int) -> Affine:
    return (a[0] * k, {t: c * k for t, c in a[1].items() if c * k != 0})


class _Classifier:
    def __init__(self, fn: SsaFunction):
        self.fn = fn
        self.defs: dict[int, Instr] = {}
        self.phi_defs: dict[int, tuple[PhiNode, int]] = {}  # value -> (phi, block)
        for b in fn.blocks:
            for phi in b.phis:
                self.phi_defs[phi.result] = (phi, b.id)
            for ins in b.instrs:
                if ins.result is not None:
                    self.defs[ins.result] = ins
        self.memo: dict[int, Affine | None] = {}

    def affine(self, value: int) -> Affine | None:
        if value in self.memo:
            return self.memo[value]
        self.memo[value] = None  # cycle guard: recursive phis are dynamic
        result = self._affine(value)
        self.memo[value] = result
        return result

    def _affine(self, value: int) -> Affine | None:
        if value in self.phi_defs:
            return self._induction(value)
        ins = self.defs.get(value)
        if ins is None:
            return None  # scalar parameter or unknown
        op = ins.op
        if op == "const" and ins.ty.is_integer:
            return (ins.attrs["value"], {})
        if op in _ID_TERMS:
            return (0, {(_ID_TERMS[op], ins.attrs["dim"]): 1})
        if op in ("add", "sub") and ins.ty.is_integer:
            a = self.affine(ins.operands[0])
            b = self.affine(ins.operands[1])
            if a is None or b is None:
                return None
            return _combine(a, b, 1 if op == "add" else -1)
        if op == "neg" and ins.ty.is_integer:
            a = self.affine(ins.operands[0])
            return None if a is None else _scale(a, -1)
        if op == "mul" and ins.ty.is_integer:
            a = self.affine(ins.operands[0])
            b = self.affine(ins.operands[1])
            if a is None or b is None:
                return None
            if not a[1]:  # constant * affine
                return _scale(b, a[0])
            if not b[1]:
                return _scale(a, b[0])
            return None
        return None

    def _induction(self, value: int) -> Affine | None:
        """A loop counter term: phi(init=literal, step=phi +/- literal) in a
        block whose exit condition compares the counter against a literal."""
        phi, block_id = self.phi_defs[value]
        if len(phi.incoming) != 2 or not phi.ty.is_integer:
            return None
        init_ok = False
        step_ok = False
        for _, inc_val in phi.incoming:
            ins = self.defs.get(inc_val)
            if ins is None:
                return None
            if ins.op == "const":
                init_ok = True
            elif ins.op in ("add", "sub"):
                ops = ins.operands
                literal = [o for o in ops if self.defs.get(o) is not None
                           and self.defs[o].op == "const"]
                if phi.result in ops and literal:
                    step_ok = True
                else:
                    return None
            else:
                return None
        if not (init_ok and step_ok):
            return None
        term = self.fn.block(block_id).terminator
        if not isinstance(term, CondBr):
            return None
        cond = self.defs.get(term.cond)
        if cond is None or not cond.op.startswith("cmp_"):
            return None
        sides = cond.operands
        has_literal_bound = any(
            self.defs.get(o) is not None and self.defs[o].op == "const" for o in sides)
        involves_counter = phi.result in sides
        if not (has_literal_bound and involves_counter):
            return None
        return (0, {("loop", phi.result): 1})


def classify_index(fn: SsaFunction, value: int) -> tuple:
    """Returns ("static", constant, terms) or ("dynamic",)."""
    result = _Classifier(fn).affine(value)
    if result is None:
        return ("dynamic",)
    return ("static", result[0], result[1])
