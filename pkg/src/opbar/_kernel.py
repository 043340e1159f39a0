"""Rank kernel selection: compiled int64 path when importable, big-int Python otherwise."""
import os

from ._rank_py import rank_int_rows as rank_int_rows_py

try:
    if os.environ.get("OPBAR_KERNEL", "").lower() == "python":
        raise ImportError
    from ._rank import rank_int_rows as rank_int_rows_c
    BACKEND = "cython"
except ImportError:
    rank_int_rows_c = None
    BACKEND = "python"


def rank_int_rows(rows) -> int:
    rows = list(rows)
    if rank_int_rows_c is not None:
        try:
            return rank_int_rows_c(rows)
        except OverflowError:
            pass
    return rank_int_rows_py(rows)
