"""Exhaustive enumeration of tree shapes and brute-force extremes.

This module is the independent check on every closed form in
:mod:`treesec.formulas`: it enumerates all non-isomorphic shapes at desk
scale and measures them directly.  Shapes are generated by unordered
pairing (proper binary) or by multiset composition of child subtrees
(bounded-outdegree), deduplicated at generation time by construction, and
streamed in canonical order.  Generation is sequential; the merge order is
deterministic for fixed inputs.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product

from .errors import GuardError, SizeError
from .trees import RootedTree, _canon_key

__all__ = [
    "ShapeCensus",
    "RootRankExtremes",
    "MAX_ENUM_LEAVES",
    "enumerate_shapes",
    "count_shapes",
    "brute_force_extremes",
    "maximizer_shapes",
    "enumerate_kary_trees",
    "brute_force_max_root_rank",
    "census_table",
    "census_tsv",
    "census_json",
]

MAX_ENUM_LEAVES = 22
MAX_CENSUS_LEAVES = 20


class _Shape:
    """Proper binary shape node with composable measurements; subtrees are
    shared structurally across the memoized per-leaf-count tables."""

    __slots__ = ("left", "right", "leaves", "rank", "sec", "canon")

    def __init__(self, left, right, leaves, rank, sec, canon):
        self.left = left
        self.right = right
        self.leaves = leaves
        self.rank = rank
        self.sec = sec
        self.canon = canon


_BLEAF = _Shape(None, None, 1, 0, 0, "L")
_blevels = {1: [_BLEAF]}


def _bpair(a, b):
    if _canon_key(b.canon) < _canon_key(a.canon):
        a, b = b, a
    rank = 1 + min(a.rank, b.rank)
    return _Shape(
        a,
        b,
        a.leaves + b.leaves,
        rank,
        a.sec + b.sec + rank,
        "(" + a.canon + b.canon + ")",
    )


def _bshapes(leaves):
    if leaves < 1:
        raise GuardError("leaf count must be at least 1")
    if leaves > MAX_ENUM_LEAVES:
        raise SizeError(f"leaf count over enumeration guard ({MAX_ENUM_LEAVES})")
    lst = _blevels.get(leaves)
    if lst is None:
        out = []
        for a in range(1, leaves // 2 + 1):
            small = _bshapes(a)
            if 2 * a == leaves:
                for i in range(len(small)):
                    for j in range(i, len(small)):
                        out.append(_bpair(small[i], small[j]))
            else:
                big = _bshapes(leaves - a)
                for x in small:
                    for y in big:
                        out.append(_bpair(x, y))
        out.sort(key=lambda s: _canon_key(s.canon))
        _blevels[leaves] = out
        lst = out
    return lst


def _shape_tree(shape):
    parents = []
    stack = [(shape, -1)]
    while stack:
        node, par = stack.pop()
        idx = len(parents)
        parents.append(par)
        if node.left is not None:
            stack.append((node.right, idx))
            stack.append((node.left, idx))
    return RootedTree._make(parents, topo=True)


def enumerate_shapes(leaves):
    """Yield every non-isomorphic proper binary tree with the given number
    of leaves exactly once, in canonical (serialization) order."""
    for shape in _bshapes(leaves):
        yield _shape_tree(shape)


def count_shapes(leaves):
    """Number of non-isomorphic proper binary trees with ``leaves`` leaves."""
    return len(_bshapes(leaves))


@dataclass(frozen=True)
class ShapeCensus:
    """Exhaustive security census over one leaf count."""

    leaf_count: int
    total_shapes: int
    max_security: int
    maximizer_count: int
    maximizer_fraction: Fraction


def brute_force_extremes(leaves):
    """Measure every shape: the exact maximum security, how many shapes
    attain it, and the fraction of shapes that do."""
    best = -1
    count = 0
    total = 0
    for shape in _bshapes(leaves):
        total += 1
        if shape.sec > best:
            best = shape.sec
            count = 1
        elif shape.sec == best:
            count += 1
    return ShapeCensus(
        leaf_count=leaves,
        total_shapes=total,
        max_security=best,
        maximizer_count=count,
        maximizer_fraction=Fraction(count, total),
    )


def maximizer_shapes(leaves):
    """Yield the maximum-security shapes for one leaf count, in canonical
    order (streamed; nothing is materialized beyond the shape table)."""
    best = max(s.sec for s in _bshapes(leaves))
    for shape in _bshapes(leaves):
        if shape.sec == best:
            yield _shape_tree(shape)


def census_table(max_leaves):
    """One census row per leaf count in [1, max_leaves]."""
    if max_leaves < 1:
        raise GuardError("max leaves must be at least 1")
    if max_leaves > MAX_CENSUS_LEAVES:
        raise SizeError(f"census guard is {MAX_CENSUS_LEAVES} leaves")
    return [brute_force_extremes(l) for l in range(1, max_leaves + 1)]


def census_tsv(rows):
    """Render census rows as TSV; fractions stay exact (no floating point)."""
    lines = ["leaves\tshapes\tmax_security\tmaximizers\tfraction"]
    for r in rows:
        frac = f"{r.maximizer_count}/{r.total_shapes}"
        lines.append(
            f"{r.leaf_count}\t{r.total_shapes}\t{r.max_security}"
            f"\t{r.maximizer_count}\t{frac}"
        )
    return "\n".join(lines) + "\n"


def census_json(rows):
    import json

    return json.dumps(
        [
            {
                "leaves": r.leaf_count,
                "shapes": r.total_shapes,
                "max_security": r.max_security,
                "maximizers": r.maximizer_count,
                "fraction": f"{r.maximizer_count}/{r.total_shapes}",
            }
            for r in rows
        ]
    )


class _KShape:
    """Bounded-outdegree shape node with composable measurements; subtrees
    are shared structurally across the memoized tables.

    ``proper`` records whether every outdegree is 0 or exactly the arity
    bound the shape was generated under.
    """

    __slots__ = ("kids", "order", "root_rank", "max_rank", "proper", "canon")

    def __init__(self, kids, order, root_rank, max_rank, proper, canon):
        self.kids = kids
        self.order = order
        self.root_rank = root_rank
        self.max_rank = max_rank
        self.proper = proper
        self.canon = canon


_KLEAF = _KShape((), 1, 0, 0, True, "L")
_klevels = {}


def _kary_guard(n, k):
    if n < 1:
        raise GuardError("order must be at least 1")
    if k is not None and k < 1:
        raise GuardError("arity must be at least 1")
    if k == 1:
        limit = 64
    elif k == 2:
        limit = 14
    elif k == 3:
        limit = 12
    else:
        limit = 11
    if n > limit:
        raise SizeError(f"order over enumeration guard ({limit} for this arity)")


def _partitions_desc(total, max_parts):
    """Weakly decreasing partitions of ``total`` into at most ``max_parts``
    positive parts (max_parts None = unbounded)."""
    if max_parts is None:
        max_parts = total

    def rec(remaining, parts_left, cap):
        if remaining == 0:
            yield ()
            return
        if parts_left == 0:
            return
        for first in range(min(cap, remaining), 0, -1):
            for rest in rec(remaining - first, parts_left - 1, first):
                yield (first,) + rest

    yield from rec(total, max_parts, total)


def _kshapes(n, k):
    key = (n, k)
    lst = _klevels.get(key)
    if lst is None:
        if n == 1:
            lst = [_KLEAF]
        else:
            out = []
            for partition in _partitions_desc(n - 1, k):
                groups = []
                run_val = None
                run = 0
                for part in partition:
                    if part == run_val:
                        run += 1
                    else:
                        if run_val is not None:
                            groups.append((run_val, run))
                        run_val = part
                        run = 1
                groups.append((run_val, run))
                pools = [
                    combinations_with_replacement(_kshapes(size, k), copies)
                    for size, copies in groups
                ]
                for picks in product(*pools):
                    kids = [s for group in picks for s in group]
                    kids.sort(key=lambda s: _canon_key(s.canon))
                    root_rank = 1 + min(s.root_rank for s in kids)
                    out.append(
                        _KShape(
                            tuple(kids),
                            n,
                            root_rank,
                            max(root_rank, max(s.max_rank for s in kids)),
                            len(kids) == k and all(s.proper for s in kids),
                            "(" + "".join(s.canon for s in kids) + ")",
                        )
                    )
            out.sort(key=lambda s: _canon_key(s.canon))
            lst = out
        _klevels[key] = lst
    return lst


def _kshape_tree(shape):
    parents = []
    stack = [(shape, -1)]
    while stack:
        node, par = stack.pop()
        idx = len(parents)
        parents.append(par)
        for kid in reversed(node.kids):
            stack.append((kid, idx))
    return RootedTree._make(parents, topo=True)


def enumerate_kary_trees(n, k=None, proper=False):
    """Yield every non-isomorphic rooted tree of order ``n`` with outdegrees
    at most ``k`` (k None = unbounded) exactly once, in canonical order.

    With ``proper=True`` (requires k), only trees whose outdegrees are all 0
    or exactly k are yielded; for some orders this class is empty.
    """
    _kary_guard(n, k)
    if proper and k is None:
        raise GuardError("proper enumeration needs an arity bound")
    for shape in _kshapes(n, k):
        if proper and not shape.proper:
            continue
        yield _kshape_tree(shape)


@dataclass(frozen=True)
class RootRankExtremes:
    """Brute-force root-rank maxima over one enumerated class of trees."""

    max_root_rank: int
    max_vertex_rank: int
    trees_scanned: int


def brute_force_max_root_rank(n, k=None, root_degree=None, proper=False):
    """Exhaustive maxima of (a) the root rank and (b) the rank over all
    vertices, across trees of order ``n`` with outdegrees at most ``k``;
    with ``root_degree`` set, only trees whose root has that outdegree
    count, and with ``proper=True`` only outdegrees 0 and exactly k occur
    (the class the k-ary root-rank formula is exact for).  For the classes
    without a root-degree restriction the two maxima agree."""
    _kary_guard(n, k)
    if proper and k is None:
        raise GuardError("proper enumeration needs an arity bound")
    best_root = -1
    best_any = -1
    scanned = 0
    for shape in _kshapes(n, k):
        if root_degree is not None and len(shape.kids) != root_degree:
            continue
        if proper and not shape.proper:
            continue
        scanned += 1
        if shape.root_rank > best_root:
            best_root = shape.root_rank
        if shape.max_rank > best_any:
            best_any = shape.max_rank
    if scanned == 0:
        raise GuardError("no trees of this order in the requested class")
    return RootRankExtremes(
        max_root_rank=best_root, max_vertex_rank=best_any, trees_scanned=scanned
    )
