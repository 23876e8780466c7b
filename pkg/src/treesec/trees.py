"""Rooted-tree data model and the rank / security measures.

Trees are unordered: the order in which children are stored carries no
meaning, and :func:`canonical_form` fixes a deterministic order when one is
needed.  A tree is an arena of vertices addressed by integer ids; vertex ids
are only valid for the tree that issued them.

The *rank* (protection number) of a vertex is the minimum distance from the
vertex to any leaf of its own subtree; leaves have rank 0.  The *security*
of a tree is the sum of all vertex ranks.

Text format::

    Tree := "L" | "(" Tree+ ")"

``L`` is a leaf; an internal vertex is written as the parenthesised sequence
of its child subtrees (one or more).  ASCII whitespace between tokens is
ignored; any other stray character is a parse error.  A JSON form
``{"children": [...]}`` (a leaf is ``{"children": []}``) is accepted by
:func:`tree_from_json` and by :func:`read_tree`, which sniffs the format.
"""

import json
from dataclasses import dataclass

from .errors import GuardError, ParseError

__all__ = [
    "RootedTree",
    "ShapeReport",
    "parse",
    "serialize",
    "read_tree",
    "tree_from_json",
    "tree_to_json",
    "all_ranks",
    "security",
    "protected_count",
    "canonical_form",
    "canonical_order",
    "is_isomorphic",
    "classify",
    "saturated_vertices",
    "partition_vector",
]


class RootedTree:
    """An immutable rooted tree stored as a parent array.

    ``parents[v]`` is the parent id of vertex ``v`` (-1 for the root).
    Children are derived on demand, in increasing id order.  All operations
    in this package treat trees as values: none mutates an existing tree,
    so any tree may be shared freely across threads.
    """

    __slots__ = ("_parents", "_children", "_root", "_topo", "_leafcount")

    def __init__(self, parents):
        """Build a tree from a parent array, validating its shape.

        Raises GuardError unless there is exactly one root, every parent id
        is a valid vertex id, and every vertex is reachable from the root.
        """
        tree = _from_parents_checked(list(parents))
        self._parents = tree._parents
        self._children = tree._children
        self._root = tree._root
        self._topo = tree._topo
        self._leafcount = tree._leafcount

    @classmethod
    def _make(cls, parents, topo=False):
        """Trusted constructor: no validation. ``topo`` promises that every
        parent id is smaller than its child ids."""
        self = object.__new__(cls)
        self._parents = parents
        self._children = None
        self._root = parents.index(-1)
        self._topo = topo
        self._leafcount = None
        return self

    def __len__(self):
        return len(self._parents)

    def __repr__(self):
        text = serialize(self)
        if len(text) > 60:
            text = text[:57] + "..."
        return f"RootedTree({text!r})"

    @property
    def root(self):
        return self._root

    def parent(self, v):
        """Parent id of ``v``, or None for the root."""
        p = self._parents[v]
        return None if p < 0 else p

    def children(self, v):
        """Child ids of ``v`` in storage order."""
        return self._child_lists()[v]

    def is_leaf(self, v):
        return not self._child_lists()[v]

    def degree(self, v):
        """Number of children of ``v`` (the outdegree)."""
        return len(self._child_lists()[v])

    def leaf_count(self):
        if self._leafcount is None:
            has_child = bytearray(len(self._parents))
            for p in self._parents:
                if p >= 0:
                    has_child[p] = 1
            self._leafcount = len(self._parents) - sum(has_child)
        return self._leafcount

    def _child_lists(self):
        # lazy, idempotent cache: a concurrent duplicate build is benign
        if self._children is None:
            ch = [[] for _ in self._parents]
            for i, p in enumerate(self._parents):
                if p >= 0:
                    ch[p].append(i)
            self._children = [tuple(kids) for kids in ch]
        return self._children

    def _top_down_order(self):
        """Vertex ids with every parent before its children."""
        if self._topo:
            return range(len(self._parents))
        order = [self._root]
        ch = self._child_lists()
        for v in order:
            order.extend(ch[v])
        return order

    def depths(self):
        """Depth of every vertex (root depth 0)."""
        d = [0] * len(self._parents)
        par = self._parents
        for v in self._top_down_order():
            p = par[v]
            if p >= 0:
                d[v] = d[p] + 1
        return d


def _from_parents_checked(parents):
    n = len(parents)
    if n == 0:
        raise GuardError("a tree needs at least one vertex")
    roots = 0
    for i, p in enumerate(parents):
        if p == -1 or p is None:
            parents[i] = -1
            roots += 1
        elif not isinstance(p, int) or not 0 <= p < n or p == i:
            raise GuardError(f"invalid parent {p!r} for vertex {i}")
    if roots != 1:
        raise GuardError(f"expected exactly one root, found {roots}")
    tree = RootedTree._make(parents, topo=all(parents[i] < i for i in range(n)))
    seen = 0
    for _ in tree._top_down_order():
        seen += 1
        if seen > n:
            break
    if seen != n:
        raise GuardError("parent links contain a cycle or unreachable vertices")
    return tree


def parse(text):
    """Parse the parenthesis format into a tree.

    Vertices are numbered in preorder of the input.  Raises ParseError with
    the byte offset on malformed input.
    """
    parents = []
    childcount = []
    stack = []
    done = False
    for i, c in enumerate(text):
        if c.isspace():
            continue
        if done:
            raise ParseError("trailing content after the tree", i)
        if c == "L":
            parents.append(stack[-1] if stack else -1)
            childcount.append(0)
            if stack:
                childcount[stack[-1]] += 1
            else:
                done = True
        elif c == "(":
            idx = len(parents)
            parents.append(stack[-1] if stack else -1)
            childcount.append(0)
            if stack:
                childcount[stack[-1]] += 1
            stack.append(idx)
        elif c == ")":
            if not stack:
                raise ParseError("unbalanced ')'", i)
            v = stack.pop()
            if childcount[v] == 0:
                raise ParseError("empty internal vertex", i)
            if not stack:
                done = True
        else:
            raise ParseError(f"stray character {c!r}", i)
    if stack:
        raise ParseError("unbalanced '('", len(text))
    if not parents:
        raise ParseError("empty input", 0)
    return RootedTree._make(parents, topo=True)


def serialize(tree, canonical=False):
    """Render a tree in the parenthesis format.

    With ``canonical=True`` children are emitted in the canonical order, so
    two trees are isomorphic iff their canonical serializations are equal.
    """
    if canonical:
        return _canon_strings(tree)[tree.root]
    out = []
    stack = [(tree.root, False)]
    ch = tree._child_lists()
    while stack:
        v, closing = stack.pop()
        if closing:
            out.append(")")
            continue
        kids = ch[v]
        if not kids:
            out.append("L")
        else:
            out.append("(")
            stack.append((v, True))
            for c in reversed(kids):
                stack.append((c, False))
    return "".join(out)


def read_tree(text):
    """Parse a tree given either as parenthesis text or as JSON."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.pos) from None
        return tree_from_json(obj)
    return parse(text)


def tree_from_json(obj):
    """Build a tree from the ``{"children": [...]}`` JSON schema."""
    parents = []
    stack = [(obj, -1)]
    while stack:
        node, par = stack.pop()
        if not isinstance(node, dict) or set(node) != {"children"}:
            raise ParseError('each JSON vertex must be {"children": [...]}')
        kids = node["children"]
        if not isinstance(kids, list):
            raise ParseError('"children" must be a list')
        idx = len(parents)
        parents.append(par)
        for kid in reversed(kids):
            stack.append((kid, idx))
    return RootedTree(parents)


def tree_to_json(tree):
    """Inverse of :func:`tree_from_json` (children in storage order)."""
    ch = tree._child_lists()
    nodes = [None] * len(tree)
    for v in reversed(tree._top_down_order()):
        nodes[v] = {"children": [nodes[c] for c in ch[v]]}
    return nodes[tree.root]


def all_ranks(tree):
    """Rank of every vertex, indexed by vertex id.

    Satisfies rank(leaf) = 0 and rank(v) = 1 + min over children, which
    equals the minimum distance from v to a leaf of its subtree.
    """
    n = len(tree)
    par = tree._parents
    big = n + 1
    ranks = [big] * n
    if tree._topo:
        # parents precede children, so a reverse index scan is post-order
        for v in range(n - 1, 0, -1):
            rv = ranks[v]
            if rv == big:
                rv = 0
                ranks[v] = 0
            c = rv + 1
            p = par[v]
            if c < ranks[p]:
                ranks[p] = c
        if ranks[0] == big:
            ranks[0] = 0
        return ranks
    for v in reversed(tree._top_down_order()):
        rv = ranks[v]
        if rv == big:
            rv = 0
            ranks[v] = 0
        p = par[v]
        if p >= 0:
            c = rv + 1
            if c < ranks[p]:
                ranks[p] = c
    return ranks


def security(tree):
    """Sum of the ranks of all vertices."""
    return sum(all_ranks(tree))


def protected_count(tree, level):
    """Number of vertices whose rank is at least ``level``.

    Level 0 counts every vertex; level 2 matches the classical notion of a
    protected vertex.
    """
    if level < 0:
        raise GuardError("level must be non-negative")
    if level == 0:
        return len(tree)
    return sum(1 for r in all_ranks(tree) if r >= level)


# Collation for canonical child order: at every position a closed group
# beats a leaf beats an opening group, so leaves come first and smaller
# subtrees precede larger ones with a common prefix.
_COLLATION = str.maketrans(")L(", "012")


def _canon_key(s):
    return s.translate(_COLLATION)


def _canon_strings(tree):
    """Canonical serialization of every vertex's subtree."""
    canon = [None] * len(tree)
    ch = tree._child_lists()
    for v in reversed(tree._top_down_order()):
        kids = ch[v]
        if not kids:
            canon[v] = "L"
        else:
            parts = sorted((canon[c] for c in kids), key=_canon_key)
            canon[v] = "(" + "".join(parts) + ")"
    return canon


def canonical_order(tree):
    """Vertex ids listed in canonical preorder.

    The canonical preorder index of a vertex is its position in this list;
    it is the vertex addressing used by the CLI.
    """
    canon = _canon_strings(tree)
    ch = tree._child_lists()
    order = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        for c in sorted(ch[v], key=lambda c: _canon_key(canon[c]), reverse=True):
            stack.append(c)
    return order


def canonical_form(tree):
    """An isomorphic copy whose vertices are numbered in canonical preorder
    and whose children are stored in canonical order.  Idempotent."""
    order = canonical_order(tree)
    newid = [0] * len(tree)
    for i, v in enumerate(order):
        newid[v] = i
    par = tree._parents
    parents = [-1] * len(tree)
    for i, v in enumerate(order):
        p = par[v]
        parents[i] = -1 if p < 0 else newid[p]
    return RootedTree._make(parents, topo=True)


def is_isomorphic(a, b):
    """True iff the trees are isomorphic as unordered rooted trees."""
    if len(a) != len(b):
        return False
    return _canon_strings(a)[a.root] == _canon_strings(b)[b.root]


@dataclass(frozen=True)
class ShapeReport:
    """Shape summary produced by :func:`classify`."""

    leaf_count: int
    height: int
    is_proper_binary: bool
    is_complete_binary: bool
    outdegree_sequence: tuple


def classify(tree):
    """Classify a tree's shape.

    ``is_proper_binary``: every internal vertex has exactly two children.
    ``is_complete_binary``: proper binary with all leaves at one depth and
    2**height leaves.  ``outdegree_sequence`` is the sorted multiset of
    children counts.
    """
    ch = tree._child_lists()
    depths = tree.depths()
    height = max(depths)
    leaves = [v for v in range(len(tree)) if not ch[v]]
    proper = all(len(ch[v]) in (0, 2) for v in range(len(tree)))
    leaf_depths = {depths[v] for v in leaves}
    complete = proper and leaf_depths == {height} and len(leaves) == 1 << height
    return ShapeReport(
        leaf_count=len(leaves),
        height=height,
        is_proper_binary=proper,
        is_complete_binary=complete,
        outdegree_sequence=tuple(sorted(len(ch[v]) for v in range(len(tree)))),
    )


def _complete_heights(tree):
    """For every vertex: height of its subtree if that subtree is a complete
    binary tree, else -1.  Requires a proper binary tree."""
    n = len(tree)
    ch = tree._child_lists()
    h = [-1] * n
    for v in reversed(tree._top_down_order()):
        kids = ch[v]
        if not kids:
            h[v] = 0
        elif len(kids) != 2:
            raise GuardError("tree is not proper binary")
        else:
            a, b = kids
            if h[a] >= 0 and h[a] == h[b]:
                h[v] = h[a] + 1
    return h


def saturated_vertices(tree):
    """Vertices whose subtree is complete binary while no ancestor's subtree
    is, as (vertex id, exponent) pairs in vertex-id order.

    The exponent m means the subtree has 2**m leaves.  The listed subtrees
    are vertex-disjoint and their leaves partition the tree's leaves.
    Raises GuardError for non-proper-binary trees.
    """
    h = _complete_heights(tree)
    par = tree._parents
    return [
        (v, h[v])
        for v in range(len(tree))
        if h[v] >= 0 and (par[v] < 0 or h[par[v]] < 0)
    ]


def partition_vector(tree):
    """Exponents of the saturated subtrees, weakly decreasing.

    The powers 2**m sum to the leaf count.  Requires a proper binary tree.
    """
    return tuple(sorted((m for _, m in saturated_vertices(tree)), reverse=True))
