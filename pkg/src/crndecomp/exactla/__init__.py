"""Exact rational linear algebra: rank, null space, span membership, direct sums."""
from ._backend import BACKEND
from .matrix import RationalMatrix, kernel_basis, member, rank, span_rank, sum_is_direct

__all__ = ["BACKEND", "RationalMatrix", "kernel_basis", "member", "rank", "span_rank", "sum_is_direct"]
