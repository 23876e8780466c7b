"""Closed-form security and root-rank maxima, as pure integer functions.

All logarithms are evaluated with exact integer arithmetic (bit length and
repeated multiplication); no floating point is involved anywhere.
"""

from dataclasses import dataclass

from .builders import LEAF_RANGE, binary_power_representation
from .errors import GuardError, SizeError

__all__ = [
    "BoundReport",
    "floor_log2",
    "intlog",
    "zero_bits",
    "max_security",
    "power_spine_security",
    "complete_binary_security",
    "max_root_rank_general",
    "max_root_rank_starlike",
    "max_root_rank_kary",
]


def floor_log2(x):
    """floor(log2(x)) for a positive integer."""
    if x < 1:
        raise GuardError("argument must be positive")
    return x.bit_length() - 1


def intlog(base, x):
    """floor(log_base(x)): the largest e with base**e <= x."""
    if base < 2:
        raise GuardError("base must be at least 2")
    if x < 1:
        raise GuardError("argument must be positive")
    e = 0
    power = base
    while power <= x:
        e += 1
        power *= base
    return e


def zero_bits(x):
    """Number of zero bits in the binary expansion of a positive integer."""
    if x < 1:
        raise GuardError("argument must be positive")
    return x.bit_length() - x.bit_count()


def max_security(leaves):
    """Maximum security over all proper binary trees with ``leaves`` leaves.

    Equals 2*(leaves - floor_log2(leaves) - 1) + zero_bits(leaves), which is
    attained by :func:`~treesec.builders.build_power_spine` (and by
    :func:`~treesec.builders.build_almost_complete`).
    """
    if leaves < 1:
        raise GuardError("leaf count must be at least 1")
    if leaves > LEAF_RANGE:
        raise SizeError(f"leaf count over guard ({LEAF_RANGE})")
    return 2 * (leaves - floor_log2(leaves) - 1) + zero_bits(leaves)


def power_spine_security(leaves):
    """Security of the power-spine tree in closed form: 2*leaves - n1 - k - 1
    where (n1, ..., nk) is the binary power representation of ``leaves``.

    Identical to :func:`max_security` for every leaf count.
    """
    rep = binary_power_representation(leaves)
    return 2 * leaves - rep[0] - len(rep) - 1


def complete_binary_security(height):
    """Security of the complete binary tree: 2**(height+1) - height - 2."""
    if height < 0:
        raise GuardError("height must be non-negative")
    return (1 << (height + 1)) - height - 2


@dataclass(frozen=True)
class BoundReport:
    """A closed-form maximum together with a family attaining it."""

    value: int
    witness_family: str


def max_root_rank_general(order):
    """Maximum root rank over all rooted trees of the given order: order - 1,
    attained exactly by a path rooted at one of its ends."""
    if order < 1:
        raise GuardError("order must be at least 1")
    return BoundReport(value=order - 1, witness_family="path")


def max_root_rank_starlike(order, k):
    """Maximum root rank over trees of the given order whose root has degree
    k: floor((order-1)/k), attained by a starlike tree whose shortest arm
    has that length."""
    if k < 1:
        raise GuardError("root degree must be at least 1")
    if order < k + 1:
        raise GuardError("order must be at least k + 1")
    return BoundReport(value=(order - 1) // k, witness_family="starlike")


def max_root_rank_kary(order, k):
    """Maximum root rank over k-ary trees (outdegrees at most k) of the given
    order: floor(log_k(order*(k-1)+1)) - 1, attained by the complete k-ary
    tree.  Equivalently the value is h-1 exactly when
    (k**h - 1)/(k-1) <= order < (k**(h+1) - 1)/(k-1).
    """
    if k < 2:
        raise GuardError("arity must be at least 2")
    if order < 1:
        raise GuardError("order must be at least 1")
    return BoundReport(
        value=intlog(k, order * (k - 1) + 1) - 1,
        witness_family="complete_kary",
    )
