"""Command line: ``dyndist gen|run|verify|bench``.

Every option can also come from a JSON file given with ``--config``; keys
are option names with dashes or underscores.  Top-level keys apply to every
subcommand that knows them, and a section named after the subcommand
overrides them.  Precedence, lowest first: built-in defaults, config file,
environment (``DYNDIST_SEED``, ``DYNDIST_THREADS``), command line.

Exit status is 0 iff the run recorded zero failures, 1 on failures and 2
on usage, config or stream errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")
COMMANDS = ("gen", "run", "verify", "bench")


def _limit_threads(value: str | int | None) -> None:
    # must happen before numpy loads its BLAS
    if value is None:
        return
    for var in THREAD_VARS:
        os.environ[var] = str(int(value))


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("stream", nargs="?", help="stream file (or 'stream' in the config)")
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--mode", choices=("randomized", "deterministic"), default="randomized",
                   help="field mode of the algebraic channels")
    p.add_argument("--copies", type=int, default=None, help="prime copies (randomized mode)")
    p.add_argument("--prime-bits", type=int, default=22)
    p.add_argument("--modulus", type=int, default=None, help="explicit prime modulus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap-inner", type=int, default=None)
    p.add_argument("--backend", choices=("auto", "algebraic", "bfs"), default="auto",
                   help="bounded-distance engine")
    p.add_argument("--max-algebraic-hop", type=int, default=32)
    p.add_argument("--xst-h", type=int, default=5, help="hop parameter of exact st queries")
    p.add_argument("--diam-eps", type=float, default=None)
    p.add_argument("--simple-apsp", action="store_true", default=False,
                   help="rebuild the APSP emulator statically each update")
    p.add_argument("--audit", action=argparse.BooleanOptionalAction, default=None,
                   help="structural audits after each update (default: on for verify)")
    p.add_argument("--timings", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--report", "-o", default="-", help="NDJSON report path ('-' = stdout)")
    p.add_argument("--dump-emulators", metavar="DIR", default=None,
                   help="write final emulator edge lists (u v w per line) here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dyndist", description="Dynamic distance oracles: "
                                 "replay, verify and benchmark update streams.")
    ap.add_argument("--config", help="JSON file with option values")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an update stream")
    g.add_argument("--kind", default="random",
                   choices=("random", "path-churn", "star-churn", "adversarial-degree"))
    g.add_argument("--n", type=int, default=100)
    g.add_argument("--length", type=int, default=200, help="number of updates")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--directed", action="store_true", default=False)
    g.add_argument("--density", type=float, default=2.0, help="initial edges per node")
    g.add_argument("--d", type=int, default=None, help="degree threshold (adversarial-degree)")
    g.add_argument("--query", default=None, help="query to interleave, e.g. 'sssp 0'")
    g.add_argument("--query-every", type=int, default=1)
    g.add_argument("--output", "-o", default="-")

    for name, text in (("run", "replay a stream and report answers"),
                       ("verify", "replay and check every answer and invariant")):
        _add_run_options(sub.add_parser(name, help=text))

    b = sub.add_parser("bench", help="SSSP oracle vs BFS recompute, per update")
    b.add_argument("--n", type=int, nargs="+", default=[250, 500, 1000, 2000])
    b.add_argument("--updates", type=int, default=20)
    b.add_argument("--eps", type=float, default=0.5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--copies", type=int, default=1)
    b.add_argument("--density", type=float, default=2.0, help="initial edges per node")
    b.add_argument("--backend", choices=("auto", "algebraic", "bfs"), default="auto")
    b.add_argument("--cap-inner", type=int, default=None)
    b.add_argument("--report", "-o", default="-")
    return ap


def _config_defaults(path: str | None, command: str, parser: argparse.ArgumentParser) -> dict:
    if not path:
        return {}
    with open(path) as fp:
        raw = json.load(fp)
    if not isinstance(raw, dict):
        raise ValueError("config file must hold a JSON object")
    sub = parser._subparsers._group_actions[0].choices[command]
    dests = {a.dest for a in sub._actions}
    out = {}
    for key, value in raw.items():
        if key in COMMANDS or key == "threads":
            continue
        k = key.replace("-", "_")
        if k in dests:
            out[k] = value
    section = raw.get(command, {})
    for key, value in section.items():
        k = key.replace("-", "_")
        if k not in dests:
            raise ValueError(f"unknown option {key!r} in config section {command!r}")
        out[k] = value
    return out


def _open_out(path: str):
    return sys.stdout if path in ("-", None) else open(path, "w")


def _cmd_gen(a) -> int:
    from .generators import gen_stream
    s = gen_stream(a.kind, a.n, a.length, a.seed, directed=a.directed, density=a.density,
                   d=a.d, query=a.query, query_every=a.query_every)
    out = _open_out(a.output)
    s.write(out)
    if out is not sys.stdout:
        out.close()
    return 0


def _cmd_run(a, verify: bool) -> int:
    from .runner import RunConfig, run, write_report
    if not a.stream:
        raise ValueError("no stream given")
    cfg = RunConfig(stream=a.stream, eps=a.eps, verify=verify, audit=a.audit, mode=a.mode,
                    copies=a.copies, prime_bits=a.prime_bits, modulus=a.modulus, seed=a.seed,
                    cap_inner=a.cap_inner, backend=a.backend,
                    max_algebraic_hop=a.max_algebraic_hop, xst_h=a.xst_h,
                    diam_eps=a.diam_eps, simple_apsp=a.simple_apsp, timings=a.timings)
    records, instances = run(cfg, return_instances=True)
    out = _open_out(a.report)
    write_report(records, out)
    if out is not sys.stdout:
        out.close()
    if a.dump_emulators:
        _dump(instances, a.dump_emulators)
    s = records[-1]
    print(f"events={s['events']} queries={s['queries']} failures={s['failures']} "
          f"max_ratio={s['max_ratio']}", file=sys.stderr)
    return 0 if s["failures"] == 0 else 1


def _dump(instances, folder: str) -> None:
    from ..emulator import Emulator
    from .runner import _components
    os.makedirs(folder, exist_ok=True)
    for j, inst in enumerate(instances):
        for c in _components(inst.obj):
            if isinstance(c, Emulator):
                name = f"{j}-{inst.q.kind}-{c.variant}.txt"
                with open(os.path.join(folder, name), "w") as fp:
                    c.dump(fp)


def _cmd_bench(a) -> int:
    from .bench import bench
    from .runner import write_report
    records = bench(a.n, a.updates, a.eps, a.seed, a.copies, backend=a.backend,
                    cap_inner=a.cap_inner, density=a.density)
    out = _open_out(a.report)
    write_report(records, out)
    if out is not sys.stdout:
        out.close()
    for r in records[:-1]:
        t = r["timing"]
        print(f"n={r['n']} oracle_median_ms={t['oracle_ms']['median']} "
              f"bfs_median_ms={t['bfs_ms']['median']} spikes={t['spikes']}", file=sys.stderr)
    print(f"crossover_n={records[-1]['crossover_n']}", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    pre = parser.parse_known_args(argv)[0]
    try:
        cfg = _config_defaults(pre.config, pre.command, parser)
        threads = None
        if pre.config:
            with open(pre.config) as fp:
                threads = json.load(fp).get("threads")
    except (OSError, ValueError) as exc:
        print(f"dyndist: config error: {exc}", file=sys.stderr)
        return 2
    threads = os.environ.get("DYNDIST_THREADS", threads)
    if os.environ.get("DYNDIST_SEED") is not None:
        cfg["seed"] = int(os.environ["DYNDIST_SEED"])
    _limit_threads(threads)
    sub = parser._subparsers._group_actions[0].choices[pre.command]
    sub.set_defaults(**cfg)
    a = parser.parse_args(argv)

    from ..errors import DynDistError, StreamError
    try:
        if a.command == "gen":
            return _cmd_gen(a)
        if a.command == "bench":
            return _cmd_bench(a)
        return _cmd_run(a, a.command == "verify")
    except StreamError as exc:
        print(f"dyndist: stream error: {exc}", file=sys.stderr)
        return 2
    except (DynDistError, ValueError, OSError) as exc:
        print(f"dyndist: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
