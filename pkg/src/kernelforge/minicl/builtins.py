"""Builtin signature table (version 1).

The human-readable copy lives in docs/builtins.md; typecheck behavior is
defined by this table. Signature checking for the pipe, queue, and enqueue
builtins needs parameter-kind context, so those are handled specially in
the type checker and only enumerated here.
"""

from __future__ import annotations

from .ast import Ty

BUILTIN_TABLE_VERSION = 1

# name -> returns; all take a single literal dimension argument 0..2
ID_BUILTINS = {
    "get_global_id": "gid",
    "get_local_id": "lid",
    "get_group_id": "grp",
    "get_global_size": "gsz",
    "get_local_size": "lsz",
}
ID_RESULT_TYPE = Ty.I32

# work-group functions: value argument may be any numeric scalar type and
# the result has the same type
WG_REDUCE_OPS = {
    "work_group_reduce_add": "add",
    "work_group_reduce_min": "min",
    "work_group_reduce_max": "max",
}
WG_BROADCAST = "work_group_broadcast"
BARRIER = "barrier"

PIPE_READ = "read_pipe"
PIPE_WRITE = "write_pipe"
ENQUEUE = "enqueue_kernel"

SYNC_BUILTINS = frozenset(WG_REDUCE_OPS) | {WG_BROADCAST, BARRIER}

ALL_BUILTINS = (
    frozenset(ID_BUILTINS)
    | SYNC_BUILTINS
    | {PIPE_READ, PIPE_WRITE, ENQUEUE}
)
