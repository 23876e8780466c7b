"""Builders for the extremal tree families.

Every builder returns a fresh :class:`~treesec.trees.RootedTree`; all are
pure functions and safe for concurrent use.  Size guards keep requests at a
scale the arena representation can actually hold.
"""

from itertools import chain

from .errors import GuardError, SizeError
from .trees import RootedTree

__all__ = [
    "binary_power_representation",
    "build_complete_binary",
    "build_power_spine",
    "build_almost_complete",
    "build_almost_complete_stepwise",
    "build_binary_caterpillar",
    "build_starlike",
    "build_complete_kary",
]

MAX_COMPLETE_HEIGHT = 25
MAX_LEAVES = 1 << 25
MAX_ORDER = 1 << 26
LEAF_RANGE = 1 << 30


def binary_power_representation(leaves):
    """Strictly decreasing exponents (n1, ..., nk) with sum 2**ni = leaves.

    This is the unique representation of ``leaves`` as a sum of distinct
    powers of two, i.e. the positions of its set bits, largest first.
    """
    if leaves < 1:
        raise GuardError("leaf count must be at least 1")
    if leaves > LEAF_RANGE:
        raise SizeError(f"leaf count over guard ({LEAF_RANGE})")
    return tuple(i for i in range(leaves.bit_length() - 1, -1, -1) if (leaves >> i) & 1)


def _extend_complete(parents, parent_of_root, height):
    """Append a complete binary block of the given height; return its root id.

    Vertices are appended in level order, so parents precede children.
    """
    off = len(parents)
    parents.append(parent_of_root)
    half = (1 << height) - 1
    if half:
        run = range(off, off + half)
        parents.extend(chain.from_iterable(zip(run, run)))
    return off


def build_complete_binary(height):
    """Complete binary tree: 2**height leaves, all at depth ``height``."""
    if height < 0:
        raise GuardError("height must be non-negative")
    if height > MAX_COMPLETE_HEIGHT:
        raise SizeError(f"height over guard ({MAX_COMPLETE_HEIGHT})")
    parents = []
    _extend_complete(parents, -1, height)
    return RootedTree._make(parents, topo=True)


def _spine_parents(exponents):
    """Parent array of the spine-of-complete-subtrees tree for strictly
    decreasing ``exponents``: a path hangs from the root, each path vertex
    carrying a complete block, ordered smallest block nearest the root, and
    the path ends in the largest block."""
    k = len(exponents)
    parents = []
    if k == 1:
        _extend_complete(parents, -1, exponents[0])
        return parents
    prev = -1
    for j in range(k, 1, -1):
        vid = len(parents)
        parents.append(prev)
        _extend_complete(parents, vid, exponents[j - 1])
        prev = vid
    _extend_complete(parents, prev, exponents[0])
    return parents


def build_power_spine(leaves):
    """The maximal-security proper binary tree on ``leaves`` leaves built
    from the binary power representation.

    A complete binary subtree for each set bit of ``leaves`` hangs off a
    path from the root, smallest subtree nearest the root.  For a power of
    two this degenerates to the complete binary tree itself.  Its partition
    vector equals :func:`binary_power_representation` of ``leaves``.
    """
    rep = binary_power_representation(leaves)
    if leaves > MAX_LEAVES:
        raise SizeError(f"leaf count over guard ({MAX_LEAVES})")
    return RootedTree._make(_spine_parents(rep), topo=True)


def build_almost_complete(leaves):
    """The almost complete proper binary tree on ``leaves`` leaves.

    Start from the complete binary tree of height floor(log2(leaves)) and
    give each of the first ``leaves - 2**height`` leaves (left to right) two
    children.  All leaves end up on at most two consecutive levels, and its
    security equals that of :func:`build_power_spine`.
    """
    if leaves < 1:
        raise GuardError("leaf count must be at least 1")
    if leaves > MAX_LEAVES:
        raise SizeError(f"leaf count over guard ({MAX_LEAVES})")
    height = leaves.bit_length() - 1
    extra = leaves - (1 << height)
    parents = []
    _extend_complete(parents, -1, height)
    first_leaf = (1 << height) - 1
    if extra:
        run = range(first_leaf, first_leaf + extra)
        parents.extend(chain.from_iterable(zip(run, run)))
    return RootedTree._make(parents, topo=True)


def build_almost_complete_stepwise(leaves):
    """Same family as :func:`build_almost_complete`, built incrementally.

    One block of the binary power representation is absorbed per step: the
    leftmost undisturbed complete subtree of the next size down is expanded
    by one level.  Produces a tree isomorphic to the direct construction.
    """
    if leaves < 1:
        raise GuardError("leaf count must be at least 1")
    if leaves > MAX_LEAVES:
        raise SizeError(f"leaf count over guard ({MAX_LEAVES})")
    rep = binary_power_representation(leaves)
    parents = []
    _extend_complete(parents, -1, rep[0])
    if len(rep) == 1:
        return RootedTree._make(parents, topo=True)
    # children in construction order; child lists stay [left, right]
    kids = [[] for _ in parents]
    for v, p in enumerate(parents):
        if p >= 0:
            kids[p].append(v)
    q = 0
    for i in range(1, len(rep)):
        gap = rep[i - 1] - rep[i]
        rho = kids[q][0]
        for _ in range(gap - 1):
            rho = kids[rho][0]
        p = parents[rho]
        q_next = kids[p][1] if kids[p][0] == rho else kids[p][0]
        # expand every leaf of the block rooted at rho by one level
        block_leaves = []
        stack = [rho]
        while stack:
            v = stack.pop()
            if kids[v]:
                stack.extend(kids[v])
            else:
                block_leaves.append(v)
        for v in block_leaves:
            for _ in range(2):
                parents.append(v)
                kids.append([])
                kids[v].append(len(parents) - 1)
        q = q_next
    return RootedTree._make(parents, topo=True)


def build_binary_caterpillar(leaves):
    """Proper binary caterpillar: every internal vertex has a leaf child,
    except the deepest one which has two."""
    if leaves < 2:
        raise GuardError("a binary caterpillar needs at least 2 leaves")
    if leaves > MAX_LEAVES:
        raise SizeError(f"leaf count over guard ({MAX_LEAVES})")
    parents = [-1]
    cur = 0
    for _ in range(leaves - 2):
        parents.append(cur)
        parents.append(cur)
        cur = len(parents) - 1
    parents.append(cur)
    parents.append(cur)
    return RootedTree._make(parents, topo=True)


def build_starlike(arms):
    """Paths of the given lengths sharing one end vertex, which is the root.

    ``arms`` are edge counts; the order is 1 + sum(arms) and the root rank
    equals the shortest arm length.
    """
    arms = tuple(arms)
    if not arms:
        raise GuardError("at least one arm is required")
    if any(a < 1 for a in arms):
        raise GuardError("arm lengths must be positive")
    if 1 + sum(arms) > MAX_ORDER:
        raise SizeError(f"order over guard ({MAX_ORDER})")
    parents = [-1]
    for a in arms:
        prev = 0
        for _ in range(a):
            parents.append(prev)
            prev = len(parents) - 1
    return RootedTree._make(parents, topo=True)


def build_complete_kary(order, k):
    """Complete k-ary tree of the given order, filled level by level.

    All outdegrees are k except along the partially filled boundary: leaves
    sit on at most two consecutive levels and at most one vertex mixes leaf
    and non-leaf children.
    """
    if k < 2:
        raise GuardError("arity must be at least 2")
    if order < 1:
        raise GuardError("order must be at least 1")
    if order > MAX_ORDER:
        raise SizeError(f"order over guard ({MAX_ORDER})")
    parents = [-1]
    full = (order - 1) // k
    parents.extend(chain.from_iterable(zip(*[range(full)] * k)))
    parents.extend([full] * ((order - 1) % k))
    return RootedTree._make(parents, topo=True)
