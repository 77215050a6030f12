"""Command-line front door.

Subcommands: solve, reduce, verify, generate, check-class, bench.
Result documents go to stdout or --out; diagnostics go to stderr.

Exit codes: 0 satisfied/valid/clean, 1 unsatisfied/invalid/disagreement,
2 usage or input or class error, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import multiprocessing
import queue as queue_mod
import sys
import time
from pathlib import Path

from .baselines import DEFAULT_SUBSET_CAP, brute_force, type1_solver
from .dp import solve
from .errors import (
    ClassViolationError,
    ConfigError,
    GenerationError,
    InputError,
    InternalError,
    ParseError,
    ScaleLimitError,
    UaqError,
)
from .generators import (
    RandomSpec,
    gen_mcb_k22,
    gen_mcb_nosod,
    gen_random,
    gen_rbds_type1,
    gen_rbds_type2,
    random_bipartite,
    random_blocked,
)
from .instio import (
    INSTANCE_SUFFIX,
    SolutionDocument,
    load_instance,
    load_solution,
    serialize_instance,
    serialize_solution,
)
from .model import ClassParams, Solution, check_class, verify_solution
from .reduce import preprocess, reduction0, tree_document
from .repfam import RepConfig

_USAGE_ERRORS = (
    InputError, ParseError, ClassViolationError, ConfigError,
    ScaleLimitError, GenerationError, FileNotFoundError, IsADirectoryError,
)


def _class_params(inst, alpha, beta, max_constraint) -> ClassParams:
    """--max-constraint defaults to the widest constraint present."""
    if max_constraint is None:
        widths = [len(c.roles) for c in inst.constraints]
        max_constraint = max(widths) if widths else 1
    return ClassParams(alpha=alpha, beta=beta, max_width=max_constraint)


def _emit(text: str, out_path) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- solve --------------------------------------------------------------------


def _cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    if args.engine == "fpt":
        if args.alpha is None or args.beta is None:
            raise InputError("--engine fpt requires --alpha and --beta")
        params = _class_params(inst, args.alpha, args.beta, args.max_constraint)
        cfg = RepConfig(mode=args.repfam, seed=args.seed)
        doc, _ = solve(inst, params, cfg=cfg, threads=args.threads)
    else:
        started = time.perf_counter()
        if args.engine == "brute":
            sol = brute_force(inst, max_subsets=args.max_subsets)
        else:
            sol = type1_solver(inst)
        wall_ms = (time.perf_counter() - started) * 1000.0
        labels = (frozenset(inst.role_labels[r] for r in sol.roles)
                  if sol is not None else None)
        doc = SolutionDocument(
            status="sat" if sol is not None else "unsat",
            roles=labels,
            engine=args.engine,
            wall_ms=wall_ms,
        )
    _emit(serialize_solution(doc), args.out)
    return 0 if doc.status == "sat" else 1


# -- reduce -------------------------------------------------------------------


def _cmd_reduce(args) -> int:
    inst = load_instance(args.instance)
    params = _class_params(inst, args.alpha, args.beta, args.max_constraint)
    tree = preprocess(reduction0(inst), params)
    text = json.dumps(tree_document(tree), indent=2, ensure_ascii=False) + "\n"
    _emit(text, args.out)
    return 0


# -- verify -------------------------------------------------------------------


def _cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    doc = load_solution(args.solution)
    if doc.status != "sat" or doc.roles is None:
        print("invalid: document carries no role set")
        return 1
    try:
        ids = inst.role_ids(doc.roles)
    except InputError as exc:
        print(f"invalid: {exc}")
        return 1
    verdict = verify_solution(inst, Solution(ids))
    if verdict.ok:
        print("valid")
        return 0
    for violation in verdict.violations:
        print(f"invalid: {violation}")
    return 1


# -- generate -----------------------------------------------------------------


def _cmd_generate(args) -> int:
    planted_doc = None
    if args.kind in ("rbds1", "rbds2"):
        g = random_bipartite(args.na, args.nb, args.edge_prob, args.seed)
        gen = gen_rbds_type1 if args.kind == "rbds1" else gen_rbds_type2
        inst = gen(g, args.k)
    elif args.kind in ("mcb-nosod", "mcb-k22"):
        g = random_blocked(args.k, args.block_size, args.edge_prob, args.seed,
                           plant_biclique=args.plant_biclique)
        inst = gen_mcb_nosod(g) if args.kind == "mcb-nosod" else gen_mcb_k22(g)
    else:
        spec = RandomSpec(
            n_roles=args.n_roles,
            n_perms=args.n_perms,
            plb_size=args.plb_size,
            max_role_degree=args.max_role_degree,
            alpha=args.alpha,
            beta=args.beta,
            c=args.max_constraint,
            n_constraints=args.n_constraints,
            kr=args.kr,
            kp=args.kp,
            plant=args.plant,
            seed=args.seed,
        )
        inst, planted = gen_random(spec)
        if planted is not None:
            labels = frozenset(inst.role_labels[r] for r in planted.roles)
            planted_doc = SolutionDocument(
                status="sat", roles=labels, engine="planted", wall_ms=0.0)
    _emit(serialize_instance(inst), args.out)
    if planted_doc is not None:
        plant_out = args.plant_out
        if plant_out is None and args.out:
            base = str(args.out)
            if base.endswith(INSTANCE_SUFFIX):
                base = base[: -len(INSTANCE_SUFFIX)]
            plant_out = base + ".planted.sol.json"
        if plant_out is None:
            raise InputError("--plant needs --out or --plant-out for the solution")
        Path(plant_out).write_text(serialize_solution(planted_doc), encoding="utf-8")
    return 0


# -- check-class --------------------------------------------------------------


def _cmd_check_class(args) -> int:
    inst = load_instance(args.instance)
    params = ClassParams(alpha=args.alpha, beta=args.beta,
                         max_width=args.max_constraint)
    report = check_class(inst, params)
    print(f"shared-permissions: {'ok' if report.kab_free else 'violated'}")
    print(f"constraint-width: {'ok' if report.widths_ok else 'violated'}")
    print(f"constraint-overlap: {'ok' if report.disjoint_ok else 'violated'}")
    for kind, labels in report.witnesses:
        print(f"witness {kind}: {sorted(labels)}")
    return 0 if report.ok else 1


# -- bench --------------------------------------------------------------------


def _engine_row(path: str, engine: str, alpha: int, beta: int,
                max_constraint, repfam_mode: str, seed: int,
                max_subsets: int) -> dict:
    inst = load_instance(path)
    started = time.perf_counter()
    leaves = cells = ""
    try:
        if engine == "brute":
            sol = brute_force(inst, max_subsets=max_subsets)
            verdict = "sat" if sol is not None else "unsat"
        elif engine == "type1":
            sol = type1_solver(inst)
            verdict = "sat" if sol is not None else "unsat"
        elif engine == "fpt":
            params = _class_params(inst, alpha, beta, max_constraint)
            cfg = RepConfig(mode=repfam_mode, seed=seed)
            doc, _ = solve(inst, params, cfg=cfg)
            verdict = doc.status
            leaves = doc.leaves
            cells = doc.table_cells
        else:
            raise InputError(f"unknown engine {engine!r}")
    except (UaqError, ValueError) as exc:
        print(f"{Path(path).name} [{engine}]: {exc}", file=sys.stderr)
        verdict = "error"
    wall_ms = (time.perf_counter() - started) * 1000.0
    return {
        "instance": Path(path).name,
        "engine": engine,
        "verdict": verdict,
        "wall_ms": round(wall_ms, 3),
        "leaves": leaves,
        "table_cells": cells,
    }


def _engine_row_job(payload):
    queue, kwargs = payload
    queue.put(_engine_row(**kwargs))


def _row_with_timeout(timeout_ms, **kwargs) -> dict:
    if timeout_ms is None:
        return _engine_row(**kwargs)
    queue = multiprocessing.Queue()
    proc = multiprocessing.Process(target=_engine_row_job, args=((queue, kwargs),))
    proc.start()
    proc.join(timeout_ms / 1000.0)
    if proc.is_alive():
        proc.terminate()
        proc.join()
        return {
            "instance": Path(kwargs["path"]).name,
            "engine": kwargs["engine"],
            "verdict": "timeout",
            "wall_ms": float(timeout_ms),
            "leaves": "",
            "table_cells": "",
        }
    try:
        return queue.get(timeout=5.0)
    except queue_mod.Empty:
        return {
            "instance": Path(kwargs["path"]).name,
            "engine": kwargs["engine"],
            "verdict": "error",
            "wall_ms": 0.0,
            "leaves": "",
            "table_cells": "",
        }


_BENCH_COLUMNS = ("instance", "engine", "verdict", "wall_ms", "leaves", "table_cells")


def _cmd_bench(args) -> int:
    spec_dir = Path(args.spec_dir)
    paths = sorted(str(p) for p in spec_dir.glob(f"*{INSTANCE_SUFFIX}"))
    if not paths:
        raise InputError(f"no *{INSTANCE_SUFFIX} files under {spec_dir}")
    rows = []
    for path in paths:
        for engine in args.engines:
            rows.append(_row_with_timeout(
                args.timeout_ms,
                path=path,
                engine=engine,
                alpha=args.alpha,
                beta=args.beta,
                max_constraint=args.max_constraint,
                repfam_mode=args.repfam,
                seed=args.seed,
                max_subsets=args.max_subsets,
            ))
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in _BENCH_COLUMNS}
    header = "  ".join(c.ljust(widths[c]) for c in _BENCH_COLUMNS)
    print(header)
    print("-" * len(header))
    for row in rows:
        print("  ".join(str(row[c]).ljust(widths[c]) for c in _BENCH_COLUMNS))
    disagreements = 0
    for path in paths:
        name = Path(path).name
        verdicts = {r["verdict"] for r in rows
                    if r["instance"] == name and r["verdict"] in ("sat", "unsat")}
        if len(verdicts) > 1:
            disagreements += 1
    print(f"disagreements: {disagreements}")
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=_BENCH_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    return 0 if disagreements == 0 else 1


# -- parser -------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uaq",
        description="Exact solvers, reducers, and generators for "
                    "budgeted role-selection queries.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="decide an instance")
    p_solve.add_argument("instance")
    p_solve.add_argument("--engine", choices=("brute", "fpt", "type1"),
                         default="fpt")
    p_solve.add_argument("--alpha", type=int)
    p_solve.add_argument("--beta", type=int)
    p_solve.add_argument("--max-constraint", type=int)
    p_solve.add_argument("--repfam", choices=("exact", "truncated"),
                         default="exact")
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--threads", type=int, default=1)
    p_solve.add_argument("--max-subsets", type=int, default=DEFAULT_SUBSET_CAP)
    p_solve.add_argument("--out")
    p_solve.set_defaults(func=_cmd_solve)

    p_reduce = sub.add_parser("reduce", help="dump the preprocessing tree")
    p_reduce.add_argument("instance")
    p_reduce.add_argument("--alpha", type=int, required=True)
    p_reduce.add_argument("--beta", type=int, required=True)
    p_reduce.add_argument("--max-constraint", type=int)
    p_reduce.add_argument("--out")
    p_reduce.set_defaults(func=_cmd_reduce)

    p_verify = sub.add_parser("verify", help="check a solution document")
    p_verify.add_argument("instance")
    p_verify.add_argument("solution")
    p_verify.set_defaults(func=_cmd_verify)

    p_gen = sub.add_parser("generate", help="emit a benchmark instance")
    p_gen.add_argument("kind", choices=("rbds1", "rbds2", "mcb-nosod",
                                        "mcb-k22", "random"))
    p_gen.add_argument("--na", type=int, default=4)
    p_gen.add_argument("--nb", type=int, default=4)
    p_gen.add_argument("--k", type=int, default=2)
    p_gen.add_argument("--block-size", type=int, default=2)
    p_gen.add_argument("--edge-prob", type=float, default=0.5)
    p_gen.add_argument("--plant-biclique", action="store_true")
    p_gen.add_argument("--n-roles", type=int, default=10)
    p_gen.add_argument("--n-perms", type=int, default=12)
    p_gen.add_argument("--plb-size", type=int, default=4)
    p_gen.add_argument("--max-role-degree", type=int, default=3)
    p_gen.add_argument("--alpha", type=int, default=2)
    p_gen.add_argument("--beta", type=int, default=2)
    p_gen.add_argument("--max-constraint", type=int, default=3)
    p_gen.add_argument("--n-constraints", type=int, default=1)
    p_gen.add_argument("--kr", type=int, default=3)
    p_gen.add_argument("--kp", type=int, default=2)
    p_gen.add_argument("--plant", action="store_true")
    p_gen.add_argument("--plant-out")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out")
    p_gen.set_defaults(func=_cmd_generate)

    p_check = sub.add_parser("check-class", help="report class compliance")
    p_check.add_argument("instance")
    p_check.add_argument("--alpha", type=int, required=True)
    p_check.add_argument("--beta", type=int, required=True)
    p_check.add_argument("--max-constraint", type=int, required=True)
    p_check.set_defaults(func=_cmd_check_class)

    p_bench = sub.add_parser("bench", help="run an engine matrix")
    p_bench.add_argument("spec_dir")
    p_bench.add_argument("--engines", nargs="+",
                         choices=("brute", "fpt", "type1"),
                         default=["brute", "fpt"])
    p_bench.add_argument("--alpha", type=int, default=2)
    p_bench.add_argument("--beta", type=int, default=2)
    p_bench.add_argument("--max-constraint", type=int)
    p_bench.add_argument("--repfam", choices=("exact", "truncated"),
                         default="exact")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--max-subsets", type=int, default=DEFAULT_SUBSET_CAP)
    p_bench.add_argument("--timeout-ms", type=int)
    p_bench.add_argument("--csv")
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except UaqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - the contract demands a code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
