"""Command-line entry points: scripted batches, interactive turns, the gateway.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 internal error. Batch
mode is fully non-interactive and, with mock adapters, deterministic under a
fixed seed (reports replay byte-identically).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .benchmark import bundled_script_path, read_script
from .metrics import (
    aggregate,
    format_summary_table,
    report_csv_lines,
    report_to_json,
    trials_csv_lines,
)
from .pipeline import (
    Adapters,
    external_adapters,
    load_trial_scene,
    mock_adapters,
    run_turn,
)
from .scene import Scene, load_scene

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INTERNAL = 3

ENDPOINT_VARS = ("FUZZYARM_STT_URL", "FUZZYARM_LLM_URL", "FUZZYARM_DETECT_URL")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzyarm",
        description="Fuzzy-servo pick-and-place workbench: batch benchmarks, "
        "interactive sessions, and the gateway server.",
    )
    parser.add_argument("--mode", choices=("batch", "interactive", "serve"),
                        default="interactive")
    parser.add_argument("--script", help="trial script (JSONL); 'bundled' for the packaged 60-trial benchmark")
    parser.add_argument("--scene", help="scene JSON for interactive/serve modes")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--adapters", choices=("mock", "external"), default="mock")
    parser.add_argument("--out", default="out", help="output directory for reports and plots")
    parser.add_argument("--port", type=int, default=8700)
    parser.add_argument("--wav", help="route a WAV recording through the audio frontend first")
    parser.add_argument("--plots", action="store_true", help="also export SVG charts in batch mode")
    parser.add_argument("--ui", help="static directory to serve the operator console from")
    return parser


def make_adapters(kind: str, events=None) -> Adapters:
    if kind == "mock":
        return mock_adapters(events=events)
    urls = [os.environ.get(v) for v in ENDPOINT_VARS]
    if not all(urls):
        missing = [v for v, u in zip(ENDPOINT_VARS, urls) if not u]
        raise UsageError(f"external adapters need endpoint URLs: set {', '.join(missing)}")
    return external_adapters(*urls, events=events)


class UsageError(Exception):
    pass


def default_scene(seed: int) -> Scene:
    from .benchmark import table_scene

    return table_scene(0, seed=seed)


def run_batch(args) -> int:
    if not args.script:
        raise UsageError("batch mode requires --script")
    script = bundled_script_path() if args.script == "bundled" else Path(args.script)
    try:
        entries = read_script(script)
    except OSError as exc:
        print(f"error: cannot read script: {exc}", file=sys.stderr)
        return EXIT_IO
    if not entries:
        print("error: no trials in script", file=sys.stderr)
        return EXIT_USAGE

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    trajectory: list[tuple[float, float]] = []

    def collect(event: dict) -> None:
        if event["type"] == "turn" and event["status"] == "started":
            trajectory.clear()
        elif event["type"] == "trajectory":
            trajectory.append((event["x"], event["y"]))

    adapters = make_adapters(args.adapters, events=collect)
    records = []
    errored = False
    last_scene = None
    for entry in entries:
        try:
            scene = load_trial_scene(entry, script.parent)
            outcome = run_turn(entry, adapters, scene)
            records.append(outcome.record)
            last_scene = scene
        except Exception:
            log.exception("trial %s errored", entry.get("id"))
            errored = True
    if not records:
        print("error: every trial errored", file=sys.stderr)
        return EXIT_INTERNAL

    report = aggregate(records)
    (out_dir / "metrics.csv").write_text("\n".join(report_csv_lines(report)) + "\n")
    (out_dir / "trials.csv").write_text("\n".join(trials_csv_lines(records)) + "\n")
    (out_dir / "report.json").write_text(report_to_json(report, records) + "\n")
    if args.plots:
        from .plots import contribution_chart, trajectory_chart

        contribution_chart(report, out_dir / "contributions.svg")
        if last_scene is not None:
            trajectory_chart(trajectory, last_scene.snapshot(), out_dir / "trajectory.svg",
                             title="Final trial trajectory")
    print(format_summary_table(report))
    print(f"\n{report.n_trials} trials, {report.errors.total_failures} failed; "
          f"reports in {out_dir}/")
    return EXIT_INTERNAL if errored else EXIT_OK


def _print_turn(outcome) -> None:
    record = outcome.record
    print(f"  transcript: {outcome.transcript}")
    if outcome.action_error:
        print(f"  action error: {outcome.action_error}")
    else:
        rendered = ", ".join(
            f"{c.method_name}({', '.join(c.args)})" for c in outcome.actions
        ) or "(none)"
        print(f"  actions: {rendered}")
    for call, result in outcome.execution:
        status = "ok" if result.success else f"FAILED ({result.reason})"
        print(f"    {call.method_name}: {status}")
    stage_times = ", ".join(
        f"{s}={record.stages.time(s):.2f}s" for s in ("stt", "ae", "od", "ra")
    )
    print(f"  timing: {stage_times}, total={record.t_total:.2f}s")


def run_interactive(args) -> int:
    if args.scene:
        try:
            scene = load_scene(args.scene)
        except OSError as exc:
            print(f"error: cannot read scene: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        scene = default_scene(args.seed)
    adapters = make_adapters(args.adapters)

    if args.wav:
        code = _run_wav_front(args.wav)
        if code != EXIT_OK:
            return code

    print("objects:", ", ".join(sorted(scene.objects)))
    print("type a command ('grab the apple'), or 'quit' to exit")
    turn = 0
    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            break
        if not line:
            continue
        if line.lower() in ("quit", "exit"):
            break
        turn += 1
        entry = {"id": f"turn-{turn:03d}", "utterance": line, "seed": args.seed + turn}
        before = scene.snapshot()
        try:
            outcome = run_turn(entry, adapters, scene)
        except Exception as exc:  # keep the session alive
            print(f"  error: {exc}")
            continue
        _print_turn(outcome)
        after = scene.snapshot()
        if before["held"] != after["held"]:
            print(f"  held: {before['held']} -> {after['held']}")
        moved = [
            label for label, box in after["objects"].items()
            if before["objects"].get(label) != box
        ]
        if moved:
            print(f"  moved: {', '.join(sorted(moved))}")
    print("bye")
    return EXIT_OK


def _run_wav_front(path: str) -> int:
    """Demo parity: run wake detection and end-pointing over a recording."""
    from .audio import (
        ChunkConfig,
        MarkerToneClassifier,
        endpoint_silence,
        load_wav,
        scan_for_wake,
    )

    try:
        samples, rate = load_wav(path)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read wav: {exc}", file=sys.stderr)
        return EXIT_IO
    if rate != 16000:
        print(f"error: expected 16 kHz audio, got {rate}", file=sys.stderr)
        return EXIT_USAGE
    event = scan_for_wake(samples, MarkerToneClassifier())
    if event is None:
        print("no wake marker found in recording", file=sys.stderr)
        return EXIT_USAGE
    print(f"wake detected at t={event.start_time:.2f}s (score {event.result.score:.2f})")
    wake_end = round(event.start_time * rate) + ChunkConfig().window_samples
    capture = endpoint_silence(samples[wake_end:])
    flags = []
    if capture.truncated:
        flags.append("truncated")
    if capture.silent:
        flags.append("silent")
    noted = f" [{', '.join(flags)}]" if flags else ""
    print(f"captured {capture.duration:.2f}s utterance{noted}; type its transcript below")
    return EXIT_OK


def run_serve(args) -> int:
    from .gateway import Session, serve

    scene = load_scene(args.scene) if args.scene else default_scene(args.seed)
    adapters = make_adapters(args.adapters)
    session = Session(scene, adapters)
    static = args.ui if args.ui and Path(args.ui).is_dir() else None
    print(f"gateway on http://127.0.0.1:{args.port}  (scene: {len(scene.objects)} objects)")
    serve(session, port=args.port, static_dir=static)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.mode == "batch":
            return run_batch(args)
        if args.mode == "serve":
            return run_serve(args)
        return run_interactive(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_OK
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
