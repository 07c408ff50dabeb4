"""Command-line driver: generate workloads and replay streams through a pipeline.

Generate a stream::

    dynmatch --generate uniform-random --seed 1 --events 10000 --nodes 300 --out s.txt

Replay a stream (or a freshly generated workload) through a configured pipeline::

    dynmatch --config desk.cfg --stream s.txt --out run.csv
    dynmatch --config desk.cfg --generate delete-matched-adversary --seed 3 --out run.csv

A run writes one CSV row per update to ``--out`` and a JSON summary next to it
(``run.csv`` -> ``run.summary.json``). With ``--out -`` the CSV goes to stdout
and the summary to stderr.

Exit codes: 0 ok, 2 invariant violation, 3 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from typing import Iterator

from .graph import StreamFormatError, UpdateEvent, format_stream, parse_stream
from .kernel import MAX_CHANGES, PoolKernel, check_kernel, check_pools
from .oracle import BlossomOracle, is_matching
from .pipelines import ConfigError, Pipeline, PipelineConfig, StepMetrics, load_config
from .workloads import KINDS, MatchedEdgeAdversary, gadget_family, gadget_nodes, sliding_window, uniform_random

EXIT_OK = 0
EXIT_INVARIANT = 2
EXIT_INPUT = 3

SUMMARY_SCHEMA = 1

METRIC_NAMES = [f.name for f in fields(StepMetrics)]
# fixed CSV column order; mu and ratio are blank on steps without an oracle sample
CSV_COLUMNS = ["step", "op", "u", "v", *METRIC_NAMES, "mu", "ratio"]

CHECK_MODES = ("off", "sampled", "full")


class InputError(Exception):
    pass


@dataclass
class WorkloadSpec:
    kind: str
    seed: int = 0
    nodes: int = 100
    events: int = 1000
    params: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InputError(f"unknown workload kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.events < 0:
            raise InputError("--events must be non-negative")
        if self.kind == "gadget-family":
            if self.nodes < 4:
                raise InputError("gadget-family needs at least 4 nodes")
        elif self.nodes < 2:
            raise InputError("--nodes must be at least 2")

    @property
    def n(self) -> int:
        if self.kind == "gadget-family":
            return gadget_nodes(self.nodes // 4)
        return self.nodes


def oblivious_events(wl: WorkloadSpec, cfg: PipelineConfig | None = None) -> list[UpdateEvent]:
    """Events of a non-adaptive workload."""
    if wl.kind == "uniform-random":
        return list(uniform_random(wl.n, wl.events, wl.seed, **wl.params))
    if wl.kind == "sliding-window":
        return list(sliding_window(wl.n, wl.events, wl.seed, **wl.params))
    if wl.kind == "gadget-family":
        k = wl.n // 4
        cfg = cfg or PipelineConfig()
        core = wl.params.get("core_degree", cfg.degree_for(max(1, wl.events)))
        base = gadget_family(k, core, wl.seed)
        churn = max(0, (wl.events - len(base)) // 2)
        return gadget_family(k, core, wl.seed, churn=churn)
    raise InputError(f"{wl.kind} is adaptive and needs a running pipeline")


def workload_events(wl: WorkloadSpec, pipeline: Pipeline | None = None,
                    cfg: PipelineConfig | None = None) -> Iterator[UpdateEvent]:
    """Stream of events; the adversary reads ``pipeline``'s output before each event.

    The caller must feed every yielded event to ``pipeline`` before asking
    for the next one.
    """
    wl.validate()
    if wl.kind != "delete-matched-adversary":
        yield from oblivious_events(wl, cfg)
        return
    if pipeline is None:
        raise InputError("the adaptive adversary needs a pipeline")
    adv = MatchedEdgeAdversary(wl.n, wl.seed, **wl.params)
    for _ in range(wl.events):
        ev = adv.next_event(pipeline.output_matching())
        if ev is None:
            return
        yield ev


def generate(wl: WorkloadSpec, cfg: PipelineConfig | None = None) -> str:
    """Stream text for ``wl``; adaptive workloads run against a pipeline built from ``cfg``."""
    wl.validate()
    if wl.kind != "delete-matched-adversary":
        return format_stream(oblivious_events(wl, cfg))
    p = Pipeline(wl.n, cfg or PipelineConfig())
    evs = []
    for ev in workload_events(wl, p):
        p.update(ev)
        evs.append(ev)
    return format_stream(evs)


class Checker:
    """Invariant checks on a running pipeline. Records every outcome and the first witness."""

    def __init__(self, p: Pipeline, mode: str):
        self.p = p
        self.mode = mode
        self.checked: dict[str, int] = {}
        self.violations: dict[str, int] = {}
        self.first: dict | None = None

    def _record(self, name: str, ok: bool, step: int, witness: str = "") -> None:
        self.checked[name] = self.checked.get(name, 0) + 1
        if not ok:
            self.violations[name] = self.violations.get(name, 0) + 1
            if self.first is None:
                self.first = {"step": step, "check": name, "witness": witness}

    def per_update(self, step: int, m: StepMetrics) -> None:
        if self.mode == "off":
            return
        cfg = self.p.cfg
        lim = MAX_CHANGES * max(1, m.sparse_events)
        self._record("kernel_changes", m.kernel_changes <= lim, step,
                     f"{m.kernel_changes} kernel changes for {m.sparse_events} sparse events")
        cab = cfg.ak_change_bound()
        self._record("ak_changes", m.ak_changes <= cab, step, f"{m.ak_changes} > {cab}")

    def snapshot(self, step: int) -> None:
        """The O(m) checks; run every step in full mode, at oracle samples otherwise."""
        if self.mode == "off":
            return
        p = self.p
        chain = p.chain
        out = p.output_matching()
        self._record("matching", is_matching(out, p.has_edge), step, f"output {out[:8]}...")
        rep = check_kernel(chain.kernel)
        self._record("kernel", rep.ok, step,
                     f"over={rep.over_degree[:3]} unsat={rep.unsatisfied[:3]} stray={rep.stray[:3]}")
        if isinstance(chain.kernel, PoolKernel):
            errs = check_pools(chain.kernel)
            self._record("pools", not errs, step, "; ".join(errs[:3]))
        deg, bound = chain.ak_max_degree(), chain.ak_bound
        self._record("ak_degree", deg <= bound, step, f"AK degree {deg} > {bound}")
        if chain.sparsifier is not None:
            sd, cap = chain.sparsifier.max_sparse_degree(), chain.sparsifier.cap
            self._record("sparse_degree", sd <= cap, step, f"sparse degree {sd} > {cap}")

    def ratio(self, step: int, size: int, mu: int) -> None:
        if self.mode == "off":
            return
        g = self.p.cfg.guarantee
        self._record("approximation", g * size >= mu, step,
                     f"output {size}, mu {mu}, guarantee factor {float(g):.6f}")

    def summary(self) -> dict:
        return {name: {"checked": self.checked[name], "violations": self.violations.get(name, 0)}
                for name in sorted(self.checked)}


@dataclass
class RunResult:
    csv_text: str
    summary: dict
    exit_code: int


def replay(cfg: PipelineConfig, n: int, events, oracle_every: int = 50,
           check: str = "sampled", pipeline: Pipeline | None = None) -> RunResult:
    """Drive one pipeline over ``events`` and collect per-update metrics.

    ``events`` may be a generator that reads ``pipeline`` (adaptive adversary).
    Malformed or invalid events raise ``InputError``.
    """
    if check not in CHECK_MODES:
        raise InputError(f"unknown check mode {check!r}")
    p = pipeline or Pipeline(n, cfg)
    oracle = BlossomOracle(n) if oracle_every > 0 else None
    checker = Checker(p, check)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    maxes = dict.fromkeys(METRIC_NAMES, 0)
    sums = dict.fromkeys(METRIC_NAMES, 0)
    worst_ratio = None
    steps = 0
    for step, ev in enumerate(events, 1):
        if not (0 <= ev.u < n and 0 <= ev.v < n):
            raise InputError(f"update {step}: node out of range 0..{n - 1}")
        try:
            _, m = p.update(ev)
        except ValueError as exc:
            raise InputError(f"update {step}: {exc}") from None
        steps = step
        row = asdict(m)
        for k, val in row.items():
            maxes[k] = max(maxes[k], val)
            sums[k] += val
        checker.per_update(step, m)
        mu = ratio = ""
        if oracle is not None:
            oracle.update(ev.kind, ev.u, ev.v)
            if step % oracle_every == 0 or check == "full":
                mu = oracle.mu
                ratio = f"{m.output_size / mu:.6f}" if mu else "1.000000"
                r = m.output_size / mu if mu else 1.0
                worst_ratio = r if worst_ratio is None else min(worst_ratio, r)
                checker.ratio(step, m.output_size, mu)
        if check == "full" or (check == "sampled" and oracle_every > 0 and step % oracle_every == 0):
            checker.snapshot(step)
        w.writerow([step, ev.kind, ev.u, ev.v, *(row[k] for k in METRIC_NAMES), mu, ratio])
    summary = {
        "schema_version": SUMMARY_SCHEMA,
        "config": asdict(cfg),
        "nodes": n,
        "updates": steps,
        "final_output_size": len(p.output_matching()),
        "final_mu": oracle.mu if oracle is not None else None,
        "worst_sampled_ratio": None if worst_ratio is None else round(worst_ratio, 6),
        "rebuilds": p.rebuilds,
        "metrics": {k: {"max": maxes[k], "mean": round(sums[k] / steps, 6) if steps else 0.0}
                    for k in METRIC_NAMES},
        "check_mode": check,
        "checks": checker.summary(),
        "first_violation": checker.first,
    }
    code = EXIT_INVARIANT if checker.first is not None else EXIT_OK
    return RunResult(buf.getvalue(), summary, code)


def summary_path(out: str) -> str:
    root, _ = os.path.splitext(out)
    return root + ".summary.json"


def _read_stream(path: str) -> list[UpdateEvent]:
    try:
        if path == "-":
            return list(parse_stream(sys.stdin))
        with open(path) as fh:
            return list(parse_stream(fh))
    except OSError as exc:
        raise InputError(f"cannot read stream: {exc}") from None
    except StreamFormatError as exc:
        raise InputError(str(exc)) from None


def _write(path: str | None, text: str, fallback) -> None:
    if path is None or path == "-":
        fallback.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dynmatch", description="Dynamic matching workloads and replay.")
    ap.add_argument("--config", help="pipeline config file (key=value lines)")
    ap.add_argument("--stream", help="update stream to replay ('-' for stdin)")
    ap.add_argument("--generate", metavar="KIND", choices=KINDS, help="workload generator")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--events", type=int, default=1000)
    ap.add_argument("--nodes", type=int, default=None,
                    help="node count (default 100 for generators, max id + 1 for streams)")
    ap.add_argument("--out", default=None, help="output path ('-' or omitted for stdout)")
    ap.add_argument("--oracle-every", type=int, default=50,
                    help="exact maximum matching sample period, 0 disables")
    ap.add_argument("--check-invariants", choices=CHECK_MODES, default="sampled")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _main(args)
    except (InputError, ConfigError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _main(args) -> int:
    if args.oracle_every < 0:
        raise InputError("--oracle-every must be non-negative")
    if args.stream and args.generate:
        raise InputError("give either --stream or --generate, not both")
    if not args.stream and not args.generate:
        raise InputError("nothing to do: pass --stream or --generate")
    cfg = None
    if args.config:
        try:
            cfg = load_config(args.config)
        except OSError as exc:
            raise InputError(f"cannot read config: {exc}") from None

    if args.generate:
        wl = WorkloadSpec(args.generate, args.seed, args.nodes if args.nodes is not None else 100,
                            args.events)
        wl.validate()
        if cfg is None:
            _write(args.out, generate(wl), sys.stdout)
            return EXIT_OK
        p = Pipeline(wl.n, cfg)
        res = replay(cfg, wl.n, workload_events(wl, p, cfg), args.oracle_every,
                     args.check_invariants, pipeline=p)
    else:
        events = _read_stream(args.stream)
        cfg = cfg or PipelineConfig()
        top = max((max(e.u, e.v) for e in events), default=-1)
        n = args.nodes if args.nodes is not None else max(top + 1, 1)
        res = replay(cfg, n, events, args.oracle_every, args.check_invariants)

    _write(args.out, res.csv_text, sys.stdout)
    text = json.dumps(res.summary, indent=2, sort_keys=True) + "\n"
    if args.out is None or args.out == "-":
        sys.stderr.write(text)
    else:
        _write(summary_path(args.out), text, sys.stderr)
    if res.summary["first_violation"] is not None:
        print(f"invariant violation: {json.dumps(res.summary['first_violation'])}", file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
