"""Command-line entry point: ``bqcsim {run,attack,analyze,verify}``.

Exit codes: 0 on success, 1 when a verification or attack assertion fails,
2 on bad arguments or an unreadable trace.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime as dt
import json
import logging
import sys
import time
from collections import Counter
from pathlib import Path
from typing import Optional, Sequence

from . import adversary, verification
from .protocol import FIDELITY_TOL, run_protocol
from .records import MAX_M, ProtocolConfig
from .transcript import Transcript, TraceFormatError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("bqcsim")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _m_value(text: str) -> int:
    m = int(text)
    if not 1 <= m <= MAX_M:
        raise argparse.ArgumentTypeError(f"m must be in 1..{MAX_M}")
    return m


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _seed(text: str) -> int:
    n = int(text)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bqcsim", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def batch_flags(p):
        p.add_argument("--m", type=_m_value, default=2)
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--runs", type=_positive, default=1)
        p.add_argument("--trace", type=Path, help="JSONL trace path (one file per run when --runs > 1)")
        p.add_argument("--debug-trace", type=Path, help="trace including ground-truth photon ids")
        p.add_argument("--report", type=Path, help="JSON report path")
        p.add_argument("--no-timestamp", action="store_true")

    p_run = sub.add_parser("run", help="honest runs")
    batch_flags(p_run)
    p_run.add_argument("--model", choices=["honest"], default="honest")
    p_run.add_argument("--filter", choices=["on", "off"], default="off")

    p_attack = sub.add_parser("attack", help="runs against an attacking server")
    batch_flags(p_attack)
    p_attack.add_argument("--model", choices=["eavesdrop", "trojan"], default="eavesdrop")
    p_attack.add_argument("--filter", choices=["on", "off"], default="off")

    p_an = sub.add_parser("analyze", help="candidate count and entropy of a trace")
    p_an.add_argument("--trace", type=Path, required=True)
    p_an.add_argument("--report", type=Path)

    p_ver = sub.add_parser("verify", help="exhaustive oracle suites")
    p_ver.add_argument("--seed", type=_seed, default=2024)
    return parser


def _trace_path(path: Path, seed: int, runs: int) -> Path:
    if runs == 1:
        return path
    return path.with_name(f"{path.stem}-{seed}{path.suffix}")


def _write_json(path: Optional[Path], doc: dict) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def _batch(args) -> int:
    start = time.perf_counter()
    seeds = [args.seed + i for i in range(args.runs)]
    if seeds[-1] >= 2**64:
        log.error("seed range overflows 64 bits")
        return EXIT_USAGE
    entries = []
    outcomes = Counter()
    for seed in sorted(seeds):
        config = ProtocolConfig(args.m, seed, args.model, args.filter == "on")
        run = run_protocol(config)
        if args.trace:
            run.transcript.write_jsonl(_trace_path(args.trace, seed, args.runs))
        if args.debug_trace:
            run.transcript.write_jsonl(_trace_path(args.debug_trace, seed, args.runs), debug=True)
        outcomes.update(f"{o.z}{o.x}" for o in run.secrets.swap_outcomes)
        honest_count = None
        if args.m <= adversary.MAX_ENUM_M:
            honest_count = adversary.blindness_candidates(
                dataclasses.replace(run.view, side_channel=None), args.m
            )
        entries.append({
            "seed": seed,
            "fidelities": [round(f, 12) for f in run.fidelities()],
            "swap_outcomes": [[o.z, o.x] for o in run.secrets.swap_outcomes],
            "honest_candidate_count": honest_count,
            "attack": run.attack.to_json() if run.attack else None,
        })

    fids = [f for e in entries for f in e["fidelities"]]
    fid_ok = min(fids) >= 1 - FIDELITY_TOL
    total = sum(outcomes.values())
    aggregate = {
        "runs": len(entries),
        "min_fidelity": min(fids),
        "fidelities_ok": fid_ok,
        "outcome_frequencies": {k: outcomes[k] / total for k in ("00", "01", "10", "11")},
        "candidate_counts": dict(sorted(Counter(
            str(e["attack"]["candidate_count"] if e["attack"] else e["honest_candidate_count"])
            for e in entries).items())),
        "candidate_metric": adversary.CANDIDATE_METRIC,
        "success_rate": None,
    }
    attacked = [e["attack"] for e in entries if e["attack"]]
    if attacked:
        aggregate["success_rate"] = sum(a["success"] for a in attacked) / len(attacked)

    report = {
        "command": args.command,
        "config": {"m": args.m, "seed": args.seed, "runs": args.runs,
                   "model": args.model, "filter": args.filter},
        "runs": entries,
        "aggregate": aggregate,
    }
    if not args.no_timestamp:
        report["timestamp"] = dt.datetime.now(dt.timezone.utc).isoformat()
        report["duration_s"] = time.perf_counter() - start
    if args.report:
        _write_json(args.report, report)

    summary = f"{args.command}: m={args.m} runs={args.runs} min_fidelity={min(fids):.12f}"
    if aggregate["success_rate"] is not None:
        summary += f" success_rate={aggregate['success_rate']:.4f}"
    print(summary)

    if not fid_ok:
        return EXIT_FAIL
    # an unfiltered attack is expected to always succeed
    if args.command == "attack" and args.filter == "off" and aggregate["success_rate"] != 1.0:
        return EXIT_FAIL
    return EXIT_OK


def _analyze(args) -> int:
    try:
        transcript = Transcript.read_jsonl(args.trace)
        view = adversary.view_from_transcript(transcript)
        presence = adversary.presence_trace(transcript)
    except (OSError, TraceFormatError, adversary.MalformedTraceError) as exc:
        log.error("cannot analyze %s: %s", args.trace, exc)
        return EXIT_USAGE
    m = view.m
    if not 1 <= m <= adversary.MAX_ENUM_M:
        log.error("analysis enumerates candidates only for m in 1..%d (trace has m=%d)",
                  adversary.MAX_ENUM_M, m)
        return EXIT_USAGE
    try:
        count = adversary.blindness_candidates(view, m)
        view.side_channel = presence
        timed = adversary.blindness_candidates(view, m)
    except adversary.MalformedViewError as exc:
        log.error("cannot analyze %s: %s", args.trace, exc)
        return EXIT_USAGE
    doc = {
        "trace": str(args.trace),
        "m": m,
        "candidate_count": count,
        "entropy_bits": adversary.entropy_bits(count),
        "timing_candidate_count": timed,
        "timing_entropy_bits": adversary.entropy_bits(timed) if timed else None,
        "candidate_metric": adversary.CANDIDATE_METRIC,
    }
    _write_json(args.report, doc)
    if args.report:
        print(f"analyze: m={m} candidate_count={count} entropy_bits={doc['entropy_bits']:.3f}")
    return EXIT_OK


def _verify(args) -> int:
    results = verification.run_all(args.seed)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command in ("run", "attack"):
        return _batch(args)
    if args.command == "analyze":
        return _analyze(args)
    return _verify(args)


if __name__ == "__main__":
    sys.exit(main())
