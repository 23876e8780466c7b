"""Guarded tree rewrites that never decrease security.

The four *switching* rewrites exchange the subtrees of two saturated
vertices of equal rank (or re-thread one of their parents onto the root
path), the *hoist* step moves an already-distinct complete subtree into its
spine position, and :func:`normalize_to_power_spine` drives both phases to
reach the maximal power-spine shape.  :func:`flip_adjacent` produces a
different maximizer of exactly equal security, and
:func:`reroot_at_vertex` realizes the root-rank rerooting arguments.

All rewrites return new trees; inputs are never mutated.  Vertex ids are
preserved by every switching/hoist rewrite, so the edge pairs recorded in a
:class:`RewriteTrace` refer to the input tree's ids throughout.
"""

import json
from dataclasses import dataclass

from .builders import _extend_complete, binary_power_representation, build_power_spine
from .errors import GuardError
from .trees import (
    RootedTree,
    all_ranks,
    canonical_order,
    is_isomorphic,
    saturated_vertices,
    security,
)

__all__ = [
    "SwitchContext",
    "RewriteStep",
    "RewriteTrace",
    "switch_disjoint",
    "switch_nested_high_sibling",
    "switch_nested_low_sibling",
    "spine_reinsert",
    "hoist_min_saturated",
    "normalize_to_power_spine",
    "flip_adjacent",
    "reroot_at_vertex",
]


@dataclass(frozen=True)
class SwitchContext:
    """The two saturated vertices of a switching rewrite, with their parents
    (u0, w0) and siblings (u1, w1)."""

    u: int
    w: int
    u0: int
    w0: int
    u1: int
    w1: int

    @classmethod
    def for_pair(cls, tree, u, w):
        """Derive parents and siblings for the pair (u, w).

        Raises GuardError if either vertex is the root or its parent does
        not have exactly two children.
        """
        if u == w:
            raise GuardError("the two switched vertices must differ")
        u0, u1 = _parent_and_sibling(tree, u)
        w0, w1 = _parent_and_sibling(tree, w)
        return cls(u=u, w=w, u0=u0, w0=w0, u1=u1, w1=w1)


def _parent_and_sibling(tree, v):
    p = tree.parent(v)
    if p is None:
        raise GuardError(f"vertex {v} is the root and has no parent")
    kids = tree.children(p)
    if len(kids) != 2:
        raise GuardError(f"parent of vertex {v} must have exactly two children")
    a, b = kids
    return p, (b if a == v else a)


def _is_strict_ancestor(tree, a, b):
    v = tree.parent(b)
    while v is not None:
        if v == a:
            return True
        v = tree.parent(v)
    return False


def _check_context(tree, ctx):
    """Validate a context against the tree: links consistent, both vertices
    saturated, ranks equal.  Returns the rank table."""
    n = len(tree)
    for v in (ctx.u, ctx.w, ctx.u0, ctx.w0, ctx.u1, ctx.w1):
        if not 0 <= v < n:
            raise GuardError(f"vertex id {v} out of range")
    derived = SwitchContext.for_pair(tree, ctx.u, ctx.w)
    if derived != ctx:
        raise GuardError("context does not match the tree's parent/sibling links")
    sat = dict(saturated_vertices(tree))
    if ctx.u not in sat or ctx.w not in sat:
        raise GuardError("both switched vertices must be saturated")
    ranks = all_ranks(tree)
    if ranks[ctx.u] != ranks[ctx.w]:
        raise GuardError("switched vertices must have equal rank")
    return ranks


def _rewire(tree, removed, added):
    """Apply edge surgery, keeping vertex ids.  Edges are (parent, child)
    pairs; after all removals and additions exactly one vertex must be left
    without a parent, and it becomes the root."""
    par = list(tree._parents)
    for p, c in removed:
        if par[c] != p:
            raise GuardError(f"edge ({p}, {c}) is not present")
        par[c] = -2
    for p, c in added:
        if par[c] >= 0:
            raise GuardError(f"vertex {c} is already attached")
        par[c] = p
    roots = [i for i, p in enumerate(par) if p < 0]
    if len(roots) != 1:
        raise GuardError("rewrite must leave exactly one root")
    par[roots[0]] = -1
    return RootedTree(par)


def _switch_edges(ctx):
    if ctx.u0 == ctx.w0:
        # u and w are siblings, so w's sibling is u itself and the exchange
        # degenerates to the identity
        return (), ()
    removed = ((ctx.u0, ctx.u), (ctx.w0, ctx.w1))
    added = ((ctx.w0, ctx.u), (ctx.u0, ctx.w1))
    return removed, added


def switch_disjoint(tree, ctx):
    """Exchange the subtrees at u and at w's sibling when neither parent is
    an ancestor of the other.

    Guards: context consistent (saturated, equal rank); u0/w0 not nested;
    rank(w1) >= rank(u1).  Security never decreases.
    """
    ranks = _check_context(tree, ctx)
    if _is_strict_ancestor(tree, ctx.u0, ctx.w0) or _is_strict_ancestor(
        tree, ctx.w0, ctx.u0
    ):
        raise GuardError("parents must not be nested; use a nested switch")
    if ranks[ctx.w1] < ranks[ctx.u1]:
        raise GuardError("rank(w1) >= rank(u1) required; swap the pair's roles")
    return _rewire(tree, *_switch_edges(ctx))


def switch_nested_high_sibling(tree, ctx):
    """Exchange the subtrees at u and at w's sibling when u0 is an ancestor
    of w0 and w's sibling outranks the switched vertices.

    Guards: u0 strict ancestor of w0; rank(w1) >= rank(u) = rank(w).
    Security never decreases and the rank of w0 is unchanged.
    """
    ranks = _check_context(tree, ctx)
    if not _is_strict_ancestor(tree, ctx.u0, ctx.w0):
        raise GuardError("u0 must be a strict ancestor of w0")
    if ranks[ctx.w1] < ranks[ctx.u]:
        raise GuardError("rank(w1) >= rank(u) required; use the low-sibling switch")
    return _rewire(tree, *_switch_edges(ctx))


def switch_nested_low_sibling(tree, ctx):
    """Exchange the subtrees at u and at w's sibling when u0 is an ancestor
    of w0 and w's sibling is outranked by the switched vertices.

    Guards: u0 strict ancestor of w0; rank(w1) <= rank(u) - 1; and either u0
    is the root or its parent v1 satisfies rank(v1) <= 2 + rank(w1).
    Security never decreases.
    """
    ranks = _check_context(tree, ctx)
    if not _is_strict_ancestor(tree, ctx.u0, ctx.w0):
        raise GuardError("u0 must be a strict ancestor of w0")
    if ranks[ctx.w1] > ranks[ctx.u] - 1:
        raise GuardError("rank(w1) <= rank(u) - 1 required; use the high-sibling switch")
    v1 = tree.parent(ctx.u0)
    if v1 is not None and ranks[v1] > 2 + ranks[ctx.w1]:
        raise GuardError(
            "rank of u0's parent exceeds 2 + rank(w1); use spine_reinsert"
        )
    return _rewire(tree, *_switch_edges(ctx))


def _spine_reinsert_edges(tree, ctx, ranks):
    spine = []
    v = tree.parent(ctx.u0)
    while v is not None:
        spine.append(v)
        v = tree.parent(v)
    wp = tree.parent(ctx.w0)
    cut = None
    for idx in range(1, len(spine)):
        if ranks[spine[idx]] <= ranks[ctx.w1]:
            cut = idx
            break
    if cut is None:
        # every root-path vertex outranks w1: w0 becomes the new root
        removed = ((ctx.w0, ctx.w), (wp, ctx.w0))
        added = ((ctx.w0, spine[-1]), (wp, ctx.w))
    else:
        # splice w0 (keeping child w1) into the root path at the first
        # vertex that w1 does not outrank; w takes w0's old place
        below, above = spine[cut - 1], spine[cut]
        removed = ((ctx.w0, ctx.w), (wp, ctx.w0), (above, below))
        added = ((above, ctx.w0), (ctx.w0, below), (wp, ctx.w))
    return removed, added


def spine_reinsert(tree, ctx):
    """Move w's parent (keeping w's sibling) up onto the root path, and let
    w take its old place.

    Guards: u0 strict ancestor of w0; rank(w1) < rank(u) = rank(w); u0 is
    not the root; u0's parent outranks w1; w0 has a parent.  Security never
    decreases, and the ranks of w, w1 and w0 are unchanged.
    """
    ranks = _check_context(tree, ctx)
    if not _is_strict_ancestor(tree, ctx.u0, ctx.w0):
        raise GuardError("u0 must be a strict ancestor of w0")
    if ranks[ctx.w1] >= ranks[ctx.u]:
        raise GuardError("rank(w1) < rank(u) required")
    v1 = tree.parent(ctx.u0)
    if v1 is None:
        raise GuardError("u0 must not be the root; use a nested switch")
    if ranks[v1] <= ranks[ctx.w1]:
        raise GuardError("u0's parent must outrank w1; use a nested switch")
    if tree.parent(ctx.w0) is None:
        raise GuardError("w0 must have a parent")
    return _rewire(tree, *_spine_reinsert_edges(tree, ctx, ranks))


def _hoist_edges(tree):
    """One placement step toward the power-spine shape, or None at the fixed
    point.  Requires pairwise distinct saturated exponents."""
    sat = saturated_vertices(tree)
    exponents = [m for _, m in sat]
    if len(set(exponents)) != len(exponents):
        raise GuardError("repeated partition exponents; normalize first")
    s = tree.root
    for u, _ in sorted(sat, key=lambda vm: vm[1]):
        if u == s:
            return None
        p = tree.parent(u)
        if p == s:
            a, b = tree.children(s)
            s = b if a == u else a
            continue
        u0 = p
        a, b = tree.children(u0)
        u1 = b if a == u else a
        up = tree.parent(u0)
        removed = [(up, u0), (u0, u1)]
        added = [(up, u1), (u0, s)]
        ps = tree.parent(s)
        if ps is not None:
            removed.append((ps, s))
            added.append((ps, u0))
        return tuple(removed), tuple(added)
    return None


def hoist_min_saturated(tree):
    """Lift the smallest out-of-place complete subtree next to the spine.

    The saturated vertices, taken in increasing exponent order, must hang
    off the root path one per level; this applies one step of that
    placement (u's parent becomes the local root, u's sibling takes the
    parent's old position).  Fixed point: the power-spine shape itself.
    Security never decreases.

    Raises GuardError when the partition vector has repeated exponents.
    """
    edges = _hoist_edges(tree)
    if edges is None:
        return tree
    return _rewire(tree, *edges)


@dataclass(frozen=True)
class RewriteStep:
    """One applied rewrite: rule name, edge surgery, and the security on
    both sides (never decreasing)."""

    rule: str
    edges_removed: tuple
    edges_added: tuple
    security_before: int
    security_after: int


@dataclass(frozen=True)
class RewriteTrace:
    """Ordered record of the rewrites applied by a normalization run."""

    steps: tuple

    def to_text(self):
        """Line-oriented log, one step per line."""
        lines = []
        for s in self.steps:
            rem = " ".join(f"-({p},{c})" for p, c in s.edges_removed)
            add = " ".join(f"+({p},{c})" for p, c in s.edges_added)
            lines.append(
                f"{s.rule}: security {s.security_before} -> {s.security_after}; "
                f"{rem} {add}"
            )
        return "\n".join(lines)

    def to_json(self):
        return json.dumps(
            [
                {
                    "rule": s.rule,
                    "edges_removed": [list(e) for e in s.edges_removed],
                    "edges_added": [list(e) for e in s.edges_added],
                    "security_before": s.security_before,
                    "security_after": s.security_after,
                }
                for s in self.steps
            ]
        )


def _select_switch(tree, x, y, ranks):
    """Orient the pair and pick the applicable switching rule, in the order:
    disjoint parents; nested with high sibling; nested with low sibling and
    admissible root path; spine reinsertion otherwise."""
    x0 = tree.parent(x)
    y0 = tree.parent(y)
    if _is_strict_ancestor(tree, y0, x0):
        x, y = y, x
        x0, y0 = y0, x0
    ctx = SwitchContext.for_pair(tree, x, y)
    if x0 == y0 or not _is_strict_ancestor(tree, x0, y0):
        if ranks[ctx.u1] > ranks[ctx.w1]:
            ctx = SwitchContext.for_pair(tree, y, x)
        return "switch_disjoint", ctx
    if ranks[ctx.w1] >= ranks[ctx.u]:
        return "switch_nested_high_sibling", ctx
    v1 = tree.parent(ctx.u0)
    if v1 is None or ranks[v1] <= 2 + ranks[ctx.w1]:
        return "switch_nested_low_sibling", ctx
    return "spine_reinsert", ctx


def normalize_to_power_spine(tree):
    """Rewrite a proper binary tree into the power-spine shape.

    Phase one repeatedly picks the largest repeated partition exponent and
    switches its first two saturated vertices (in canonical preorder) until
    they merge into one complete subtree; phase two hoists the now-distinct
    complete subtrees into spine order.  Every step weakly increases
    security.  Returns the rewritten tree and the trace.
    """
    current = tree
    steps = []
    step_guard = 8 * len(tree) * len(tree) + 64

    def apply(rule, removed, added):
        nonlocal current
        before = security(current)
        nxt = _rewire(current, removed, added)
        after = security(nxt)
        steps.append(RewriteStep(rule, tuple(removed), tuple(added), before, after))
        if len(steps) > step_guard:
            raise RuntimeError("rewrite did not terminate within the step guard")
        current = nxt

    while True:
        sat = saturated_vertices(current)
        repeated = None
        seen_desc = sorted((m for _, m in sat), reverse=True)
        for a, b in zip(seen_desc, seen_desc[1:]):
            if a == b:
                repeated = a
                break
        if repeated is None:
            break
        pos = {v: i for i, v in enumerate(canonical_order(current))}
        group = sorted((v for v, m in sat if m == repeated), key=pos.__getitem__)
        x, y = group[0], group[1]
        while True:
            ranks = all_ranks(current)
            rule, ctx = _select_switch(current, x, y, ranks)
            if rule == "spine_reinsert":
                removed, added = _spine_reinsert_edges(current, ctx, ranks)
            else:
                removed, added = _switch_edges(ctx)
            apply(rule, removed, added)
            merged = dict(saturated_vertices(current))
            if merged.get(x) != repeated or merged.get(y) != repeated:
                break

    while True:
        edges = _hoist_edges(current)
        if edges is None:
            break
        apply("hoist_min_saturated", *edges)

    return current, RewriteTrace(tuple(steps))


def flip_adjacent(tree, i, variant):
    """A security-preserving reshuffle of the power-spine tree at spine
    position ``i`` (1-based from the deep end), defined when the blocks at
    positions i and i+1 have exponents differing by exactly one.

    Variant 1 swaps the two blocks between their spine vertices; variant 2
    re-hangs the lower spine and pairs the two blocks under one vertex.
    The result has exactly the input's security but is generally not
    isomorphic to it.
    """
    leaves = tree.leaf_count()
    rep = binary_power_representation(leaves)
    k = len(rep)
    if variant not in (1, 2):
        raise GuardError("variant must be 1 or 2")
    if not 2 <= i <= k - 1:
        raise GuardError(f"index must be in [2, {k - 1}] for this leaf count")
    if rep[i - 1] != rep[i] + 1:
        raise GuardError("block exponents at i and i+1 must differ by one")
    if not is_isomorphic(tree, build_power_spine(leaves)):
        raise GuardError("tree must be the power-spine construction")

    parents = []
    prev = -1
    if variant == 1:
        exps = list(rep)
        exps[i - 1], exps[i] = exps[i], exps[i - 1]
        for j in range(k, 1, -1):
            vid = len(parents)
            parents.append(prev)
            _extend_complete(parents, vid, exps[j - 1])
            prev = vid
        _extend_complete(parents, prev, exps[0])
    else:
        for j in range(k, i + 1, -1):
            vid = len(parents)
            parents.append(prev)
            _extend_complete(parents, vid, rep[j - 1])
            prev = vid
        fork = len(parents)
        parents.append(prev)
        paired = len(parents)
        parents.append(fork)
        _extend_complete(parents, paired, rep[i - 1])
        _extend_complete(parents, paired, rep[i])
        if i == 2:
            _extend_complete(parents, fork, rep[0])
        else:
            prev = fork
            for j in range(i - 1, 1, -1):
                vid = len(parents)
                parents.append(prev)
                _extend_complete(parents, vid, rep[j - 1])
                prev = vid
            _extend_complete(parents, prev, rep[0])
    return RootedTree._make(parents, topo=True)


def _deepest_canonical_leaf(tree, v):
    """Deepest leaf of v's subtree, ties broken by canonical preorder."""
    depths = tree.depths()
    pos = {u: i for i, u in enumerate(canonical_order(tree))}
    best_key = None
    best = None
    stack = [v]
    while stack:
        x = stack.pop()
        kids = tree.children(x)
        if kids:
            stack.extend(kids)
        else:
            key = (-depths[x], pos[x])
            if best_key is None or key < best_key:
                best_key = key
                best = x
    return best


def reroot_at_vertex(tree, v, mode="general"):
    """Make ``v`` the root without decreasing its rank.

    ``general`` cuts v loose and hangs the remainder below one of v's
    deepest leaves (that leaf gains one child).  ``degree_preserving``
    instead identifies the old root with that leaf, exchanging their roles,
    which preserves the outdegree multiset exactly.  Rerooting at the root
    is the identity; in degree_preserving mode so is rerooting at a leaf
    (the old root is identified with the leaf itself).
    """
    if mode not in ("general", "degree_preserving"):
        raise GuardError(f"unknown mode {mode!r}")
    if not 0 <= v < len(tree):
        raise GuardError(f"vertex id {v} out of range")
    if v == tree.root:
        return tree
    u = tree.parent(v)
    if mode == "general":
        w = _deepest_canonical_leaf(tree, v)
        return _rewire(tree, [(u, v)], [(w, tree.root)])
    if tree.is_leaf(v):
        return tree
    w = _deepest_canonical_leaf(tree, v)
    pw = tree.parent(w)
    r = tree.root
    return _rewire(tree, [(u, v), (pw, w)], [(pw, r), (u, w)])
