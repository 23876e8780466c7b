"""Command-line interface.

Exit status: 0 on success, 1 on parse/guard errors (message on stderr),
2 when a size guard refuses the request.  All output is line-oriented and
byte-deterministic for fixed inputs.
"""

import argparse
import sys

from . import builders, exhaustive, formulas, rewrites, trees
from .errors import GuardError, ParseError, SizeError

__all__ = ["main", "export_dot"]


def export_dot(tree, annotate="none"):
    """Render a tree as a DOT digraph.

    Vertex names are canonical preorder indices; edges run parent -> child.
    With ``annotate="ranks"`` each vertex is labelled with its rank.
    """
    if annotate not in ("none", "ranks"):
        raise GuardError(f"unknown annotation {annotate!r}")
    canon = trees.canonical_form(tree)
    lines = ["digraph tree {"]
    if annotate == "ranks":
        ranks = trees.all_ranks(canon)
        for v in range(len(canon)):
            lines.append(f'  {v} [label="{ranks[v]}"];')
    else:
        for v in range(len(canon)):
            lines.append(f"  {v};")
    for v in range(len(canon)):
        for c in canon.children(v):
            lines.append(f"  {v} -> {c};")
    lines.append("}")
    return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; flag/usage problems are exit 1
    # here, reserving 2 for size-guard refusals.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_tree_input(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--tree", help="tree text (parenthesis or JSON)")
    g.add_argument("--file", help="read the tree from this path ('-' = stdin)")


def _read_tree_arg(args):
    if args.tree is not None:
        text = args.tree
    elif args.file == "-":
        text = sys.stdin.read()
    else:
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
    return trees.read_tree(text)


def _build_parser():
    parser = _Parser(prog="treesec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="construct a named tree family")
    p.add_argument(
        "--family",
        required=True,
        choices=["tl", "f", "complete", "caterpillar", "starlike", "complete-kary"],
    )
    p.add_argument("--leaves", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--arms", help="comma-separated arm lengths")

    p = sub.add_parser("rank", help="vertex ranks (canonical preorder indices)")
    _add_tree_input(p)
    p.add_argument("--vertex", type=int, help="canonical preorder index")

    p = sub.add_parser("security", help="sum of all vertex ranks")
    _add_tree_input(p)

    p = sub.add_parser("protected", help="count vertices of rank >= level")
    _add_tree_input(p)
    p.add_argument("--level", type=int, required=True)

    p = sub.add_parser("partition", help="saturated-subtree exponents")
    _add_tree_input(p)

    p = sub.add_parser("normalize", help="rewrite into the maximal spine shape")
    _add_tree_input(p)
    p.add_argument("--trace", action="store_true", help="print the rewrite log")

    p = sub.add_parser("flip", help="security-preserving spine reshuffle")
    _add_tree_input(p)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--variant", type=int, required=True, choices=[1, 2])

    p = sub.add_parser("enumerate", help="all proper binary shapes for a leaf count")
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--count-only", action="store_true")

    p = sub.add_parser("verify", help="check closed forms against brute force")
    p.add_argument("--max-leaves", type=int)
    p.add_argument(
        "--kary", nargs=2, type=int, metavar=("N", "K"), help="root-rank check"
    )
    p.add_argument(
        "--starlike", nargs=2, type=int, metavar=("N", "K"), help="root-rank check"
    )

    p = sub.add_parser("table", help="security census as TSV")
    p.add_argument("--max-leaves", type=int, required=True)

    p = sub.add_parser("export", help="emit DOT or JSON")
    _add_tree_input(p)
    p.add_argument("--format", required=True, choices=["dot", "json"])
    p.add_argument("--ranks", action="store_true", help="label vertices with ranks")

    return parser


def _require(condition, message):
    if not condition:
        raise GuardError(message)


def _cmd_build(args, out):
    fam = args.family
    if fam == "tl":
        _require(args.leaves is not None, "--leaves is required for family tl")
        tree = builders.build_power_spine(args.leaves)
    elif fam == "f":
        _require(args.leaves is not None, "--leaves is required for family f")
        tree = builders.build_almost_complete(args.leaves)
    elif fam == "complete":
        _require(args.height is not None, "--height is required for family complete")
        tree = builders.build_complete_binary(args.height)
    elif fam == "caterpillar":
        _require(args.leaves is not None, "--leaves is required for family caterpillar")
        tree = builders.build_binary_caterpillar(args.leaves)
    elif fam == "starlike":
        _require(args.arms, "--arms is required for family starlike")
        try:
            arms = [int(a) for a in args.arms.split(",")]
        except ValueError:
            raise GuardError("--arms must be comma-separated integers") from None
        tree = builders.build_starlike(arms)
    else:
        _require(args.order is not None, "--order is required for family complete-kary")
        _require(args.k is not None, "--k is required for family complete-kary")
        tree = builders.build_complete_kary(args.order, args.k)
    out.write(trees.serialize(tree, canonical=True) + "\n")


def _cmd_rank(args, out):
    tree = trees.canonical_form(_read_tree_arg(args))
    ranks = trees.all_ranks(tree)
    if args.vertex is not None:
        _require(0 <= args.vertex < len(tree), "vertex index out of range")
        out.write(f"{ranks[args.vertex]}\n")
    else:
        for v, r in enumerate(ranks):
            out.write(f"{v}\t{r}\n")


def _cmd_normalize(args, out):
    tree = trees.canonical_form(_read_tree_arg(args))
    result, trace = rewrites.normalize_to_power_spine(tree)
    if args.trace and trace.steps:
        out.write(trace.to_text() + "\n")
    out.write(trees.serialize(result, canonical=True) + "\n")


def _cmd_verify(args, out):
    if args.max_leaves is None and not args.kary and not args.starlike:
        raise GuardError("nothing to verify: pass --max-leaves, --kary or --starlike")
    if args.max_leaves is not None:
        _require(args.max_leaves >= 3, "--max-leaves must be at least 3")
        for leaves in range(3, args.max_leaves + 1):
            census = exhaustive.brute_force_extremes(leaves)
            want = formulas.max_security(leaves)
            if census.max_security != want:
                raise GuardError(
                    f"formula {want} != oracle {census.max_security} at {leaves} leaves"
                )
        out.write(f"OK: formula = oracle for ℓ=3..{args.max_leaves}\n")
    if args.kary:
        n, k = args.kary
        _require(k >= 2, "--kary arity must be at least 2")
        for order in range(1, n + 1):
            if (order - 1) % k != 0:
                continue  # no proper k-ary tree of this order
            got = exhaustive.brute_force_max_root_rank(order, k=k, proper=True)
            want = formulas.max_root_rank_kary(order, k).value
            if got.max_root_rank != want or got.max_vertex_rank != want:
                raise GuardError(
                    f"k-ary root-rank mismatch at n={order}, k={k}: "
                    f"formula {want}, oracle {got.max_root_rank}"
                )
        out.write(f"OK: k-ary root rank = oracle for n=1..{n}, k={k}\n")
    if args.starlike:
        n, k = args.starlike
        _require(k >= 1, "--starlike degree must be at least 1")
        for order in range(k + 1, n + 1):
            got = exhaustive.brute_force_max_root_rank(order, root_degree=k)
            want = formulas.max_root_rank_starlike(order, k).value
            if got.max_root_rank != want:
                raise GuardError(
                    f"starlike root-rank mismatch at n={order}, k={k}: "
                    f"formula {want}, oracle {got.max_root_rank}"
                )
        out.write(f"OK: degree-{k} root rank = oracle for n={k + 1}..{n}\n")


def _cmd_export(args, out):
    tree = _read_tree_arg(args)
    if args.format == "dot":
        out.write(export_dot(tree, annotate="ranks" if args.ranks else "none"))
    else:
        import json

        out.write(json.dumps(trees.tree_to_json(trees.canonical_form(tree))) + "\n")


def _run(args, out):
    cmd = args.command
    if cmd == "build":
        _cmd_build(args, out)
    elif cmd == "rank":
        _cmd_rank(args, out)
    elif cmd == "security":
        out.write(f"{trees.security(_read_tree_arg(args))}\n")
    elif cmd == "protected":
        out.write(f"{trees.protected_count(_read_tree_arg(args), args.level)}\n")
    elif cmd == "partition":
        vec = trees.partition_vector(_read_tree_arg(args))
        out.write(" ".join(str(m) for m in vec) + "\n")
    elif cmd == "normalize":
        _cmd_normalize(args, out)
    elif cmd == "flip":
        tree = _read_tree_arg(args)
        flipped = rewrites.flip_adjacent(tree, args.index, args.variant)
        out.write(trees.serialize(flipped, canonical=True) + "\n")
    elif cmd == "enumerate":
        if args.count_only:
            out.write(f"{exhaustive.count_shapes(args.leaves)}\n")
        else:
            for tree in exhaustive.enumerate_shapes(args.leaves):
                out.write(trees.serialize(tree, canonical=True) + "\n")
    elif cmd == "verify":
        _cmd_verify(args, out)
    elif cmd == "table":
        out.write(exhaustive.census_tsv(exhaustive.census_table(args.max_leaves)))
    elif cmd == "export":
        _cmd_export(args, out)


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _run(args, sys.stdout)
    except SizeError as e:
        print(f"treesec: size guard: {e}", file=sys.stderr)
        return 2
    except (ParseError, GuardError) as e:
        print(f"treesec: error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:
        return e.code or 0
    except BrokenPipeError:
        return 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
