"""Command-line front end: build, idp, quad, descend, and kempe subcommands.

All outputs are key-sorted pretty-printed JSON, so identical invocations
produce byte-identical files.  Exit codes are a stable contract:

    0  verdicts agree / success
    2  input could not be parsed
    3  an object failed its structural invariants
    4  paired verdicts disagree
    5  no quadratic chain connects the requested endpoints
    6  a state-space budget was exceeded
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import InvariantViolation, NoChainFound
from .fibers import PointConfiguration, quad_generation_check, reflections
from .graphs import Graph, stable_set_polytope, theorem_equivalence_harness
from .polytopes import (
    build_anti_blocking,
    build_unconditional,
    idp_check,
    validate_locally_anti_blocking,
)
from .transfer import descend_chain, find_quadratic_chain, verify_chain
from .vectors import Monomial, all_sign_vectors

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_DISAGREE = 4
EXIT_NO_CHAIN = 5
EXIT_BUDGET = 6


class ParseFailure(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseFailure(f"cannot read {path}: {exc}")


def load_graph(path: str) -> Graph:
    """Read a graph from JSON {n, edges} or an edge-list file ('n m' then 'i j' lines)."""
    if path.endswith(".json"):
        data = _load_json(path)
        try:
            return Graph.of(int(data["n"]), [tuple(e) for e in data["edges"]])
        except (KeyError, TypeError, ValueError, InvariantViolation) as exc:
            raise ParseFailure(f"bad graph file {path}: {exc}")
    try:
        with open(path) as fh:
            tokens = fh.read().split()
        n, m = int(tokens[0]), int(tokens[1])
        nums = [int(t) for t in tokens[2:]]
        if len(nums) != 2 * m:
            raise ValueError(f"expected {2 * m} endpoints, got {len(nums)}")
        edges = [(nums[2 * i], nums[2 * i + 1]) for i in range(m)]
        return Graph.of(n, edges)
    except (OSError, ValueError, IndexError, InvariantViolation) as exc:
        raise ParseFailure(f"bad edge list {path}: {exc}")


def _sign_key_to_vector(key: str, dim: int):
    if len(key) != dim or any(c not in "+-" for c in key):
        raise ParseFailure(f"bad sign pattern {key!r} for dimension {dim}")
    return tuple(1 if c == "+" else -1 for c in key)


def load_polytope_input(path: str, stable_set: bool):
    """Returns either an AntiBlockingPolytope or a validated locally anti-blocking object."""
    if stable_set:
        return stable_set_polytope(load_graph(path))
    data = _load_json(path)
    if "pieces" in data:
        try:
            raw = {str(k): v for k, v in data["pieces"].items()}
            dims = {int(v["dim"]) for v in raw.values()}
            if len(dims) != 1:
                raise ValueError("pieces disagree on dimension")
            dim = dims.pop()
            pieces = {}
            for key, body in raw.items():
                e = _sign_key_to_vector(key, dim)
                pieces[e] = build_anti_blocking([tuple(g) for g in body["generators"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseFailure(f"bad pieces file {path}: {exc}")
        return validate_locally_anti_blocking(pieces)
    try:
        gens = [tuple(int(x) for x in g) for g in data["generators"]]
        dim = int(data["dim"])
        if any(len(g) != dim for g in gens):
            raise ValueError("generator dimension mismatch")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseFailure(f"bad polytope file {path}: {exc}")
    return build_anti_blocking(gens)


def load_binomial(path: str, dim: int):
    data = _load_json(path)
    try:
        lhs = Monomial.of([tuple(int(x) for x in f) for f in data["lhs"]], dim=dim)
        rhs = Monomial.of([tuple(int(x) for x in f) for f in data["rhs"]], dim=dim)
    except (KeyError, TypeError, ValueError, InvariantViolation) as exc:
        raise ParseFailure(f"bad binomial file {path}: {exc}")
    if lhs.degree != rhs.degree or lhs.weight() != rhs.weight():
        raise ParseFailure(
            f"binomial is not weight balanced: {lhs.weight()} vs {rhs.weight()}"
        )
    return lhs, rhs


def emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_block(args, **extra):
    block = {"command": args.command, "input": args.input, "seed": args.seed}
    block.update(extra)
    return block


def cmd_build(args) -> int:
    loaded = load_polytope_input(args.input, args.stable_set)
    if hasattr(loaded, "pieces"):
        payload = {
            "config": _config_block(args),
            "locally_anti_blocking": {
                "dim": loaded.dim,
                "pieces": {
                    "".join("+" if s == 1 else "-" for s in e): p.to_json_dict()
                    for e, p in sorted(loaded.pieces.items())
                },
            },
        }
        emit(payload, args.out)
        return EXIT_OK
    p = loaded
    u = build_unconditional(p)
    payload = {
        "config": _config_block(args),
        "polytope": p.to_json_dict(),
        "reflection": u.to_json_dict(),
        "counts": {
            "lattice_points": len(p.lattice_points),
            "reflected_lattice_points": len(u.lattice_points),
        },
    }
    emit(payload, args.out)
    return EXIT_OK


def cmd_idp(args) -> int:
    p = load_polytope_input(args.input, args.stable_set)
    if hasattr(p, "pieces"):
        raise ParseFailure("idp expects a single anti-blocking polytope input")
    u = build_unconditional(p)
    rep_p = idp_check(p.lattice_points, p.hrep, args.t_max)
    rep_u = idp_check(u.lattice_points, u.hrep, args.t_max)
    agree = rep_p.passed == rep_u.passed
    payload = {
        "config": _config_block(args, t_max=args.t_max),
        "polytope_report": rep_p.to_json_dict(),
        "reflection_report": rep_u.to_json_dict(),
        "agree": agree,
    }
    emit(payload, args.out)
    return EXIT_OK if agree else EXIT_DISAGREE


def cmd_quad(args) -> int:
    p = load_polytope_input(args.input, args.stable_set)
    if hasattr(p, "pieces"):
        raise ParseFailure("quad expects a single anti-blocking polytope input")
    cfg = PointConfiguration.of(p.lattice_points)
    cert_p = quad_generation_check(cfg, args.d_max, jobs=args.jobs)
    cert_u = quad_generation_check(reflections(cfg), args.d_max, jobs=args.jobs)
    agree = cert_p.certified == cert_u.certified
    payload = {
        "config": _config_block(args, d_max=args.d_max),
        "polytope_certificate": cert_p.to_json_dict(),
        "reflection_certificate": cert_u.to_json_dict(),
        "agree": agree,
    }
    emit(payload, args.out)
    return EXIT_OK if agree else EXIT_DISAGREE


def cmd_descend(args) -> int:
    p = load_polytope_input(args.input, args.stable_set)
    if hasattr(p, "pieces"):
        raise ParseFailure("descend expects a single anti-blocking polytope input")
    u, v = load_binomial(args.binomial, p.dim)
    pts = set(p.lattice_points)
    for f in u.factors + v.factors:
        if f not in pts:
            raise ParseFailure(f"binomial factor {list(f)} is not a lattice point of the polytope")
    cfg = PointConfiguration.of(p.lattice_points)
    source = find_quadratic_chain(reflections(cfg), u, v)
    chain = descend_chain(source, u, v)
    verify_chain(chain, allowed_points=p.lattice_points)
    payload = {
        "config": _config_block(args, binomial=args.binomial),
        "source_chain_length": len(source.steps),
        "descended_chain_length": len(chain.steps),
        "chain": chain.to_json_dict(),
    }
    emit(payload, args.out)
    return EXIT_OK


def cmd_kempe(args) -> int:
    g = load_graph(args.input)
    report = theorem_equivalence_harness(
        g,
        a_budget=args.a_budget,
        k_extra=args.k_extra,
        d_max=args.d_max,
        jobs=args.jobs,
    )
    print(
        f"reflected-ideal quadratic: {report.condition_reflected}   "
        f"plain-ideal quadratic: {report.condition_plain}"
    )
    print(f"{'a':>18} {'|V|':>4} {'chi':>4} {'k':>3}  equivalent")
    for cell in report.cells:
        status = "BUDGET" if cell.equivalent is None else str(cell.equivalent)
        print(
            f"{str(tuple(cell.a)):>18} {cell.vertices:>4} {cell.chromatic:>4} "
            f"{cell.k:>3}  {status}"
        )
    payload = {
        "config": _config_block(
            args, a_budget=args.a_budget, k_extra=args.k_extra, d_max=args.d_max
        ),
        "report": report.to_json_dict(),
    }
    emit(payload, args.out)
    if not report.consistent:
        return EXIT_DISAGREE
    if report.budget_exceeded:
        return EXIT_BUDGET
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abpoly",
        description="Exact workbench for anti-blocking polytopes and their reflections",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, jobs=False):
        sp.add_argument("input", help="input file (polytope JSON, pieces JSON, or graph)")
        sp.add_argument("--stable-set", action="store_true", help="treat input as a graph and use its stable set polytope")
        sp.add_argument("--seed", type=int, default=0, help="seed echoed into outputs")
        sp.add_argument("--out", default=None, help="write JSON here instead of stdout")
        if jobs:
            sp.add_argument("--jobs", type=int, default=1, help="worker processes for fiber sweeps")

    sp = sub.add_parser("build", help="emit lattice points and facets of P and its reflection")
    common(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("idp", help="compare integer-decomposition reports of P and its reflection")
    common(sp)
    sp.add_argument("--t-max", type=int, default=4, dest="t_max")
    sp.set_defaults(func=cmd_idp)

    sp = sub.add_parser("quad", help="compare quadratic-generation certificates of P and its reflection")
    common(sp, jobs=True)
    sp.add_argument("--d-max", type=int, default=4, dest="d_max")
    sp.set_defaults(func=cmd_quad)

    sp = sub.add_parser("descend", help="descend a quadratic chain for a binomial over P")
    common(sp)
    sp.add_argument("--binomial", required=True, help="JSON file with lhs and rhs factor lists")
    sp.set_defaults(func=cmd_descend)

    sp = sub.add_parser("kempe", help="run the three-way equivalence harness on a graph")
    sp.add_argument("input", help="graph file (JSON or edge list)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--a-budget", type=int, default=6, dest="a_budget")
    sp.add_argument("--k-extra", type=int, default=2, dest="k_extra")
    sp.add_argument("--d-max", type=int, default=4, dest="d_max")
    sp.set_defaults(func=cmd_kempe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "jobs"):
        args.jobs = 1
    if not hasattr(args, "stable_set"):
        args.stable_set = False
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NoChainFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CHAIN
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
