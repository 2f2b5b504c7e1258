"""Five-stage turn execution with mock adapters and fault injection."""

import numpy as np
import pytest

from fuzzyarm.benchmark import build_script, read_script, table_scene, write_benchmark
from fuzzyarm.grammar import ActionCall
from fuzzyarm.metrics import aggregate, total_time
from fuzzyarm.pipeline import (
    VirtualClock,
    load_trial_scene,
    mock_adapters,
    normalize_transcript,
    phrase_to_actions,
    run_trial,
    run_turn,
)


def entry_for(utterance, predicate, inject=(), seed=3):
    from fuzzyarm.grammar import actions_to_json

    return {
        "id": "t0",
        "utterance": utterance,
        "expected_transcript": utterance,
        "expected_actions": actions_to_json(phrase_to_actions(utterance)),
        "expected_final": predicate,
        "seed": seed,
        "inject": list(inject),
    }


def test_phrase_mapping():
    assert phrase_to_actions("grab the apple") == [ActionCall("pick_up", ("apple",))]
    assert phrase_to_actions("Pick up the green apple!") == [
        ActionCall("pick_up", ("green apple",))
    ]
    assert phrase_to_actions("hand me the lemon") == [
        ActionCall("pick_up", ("lemon",)),
        ActionCall("hand_over", ("lemon",)),
    ]
    assert phrase_to_actions("move the apple to the right of the orange") == [
        ActionCall("move_object_to_right_of", ("apple", "orange"))
    ]
    assert phrase_to_actions("place the orange at 400, 600") == [
        ActionCall("place_at", ("orange", "400", "600"))
    ]
    assert phrase_to_actions("what is the weather") == []


def test_normalize_transcript():
    assert normalize_transcript("  Grab   the APPLE! ") == "grab the apple"


def test_happy_path_all_stages_pass():
    scene = table_scene(0, seed=5)
    outcome = run_turn(entry_for("grab the apple", {"held": "apple"}), mock_adapters(), scene)
    record = outcome.record
    assert record.a_total == 100
    assert scene.held == "apple"
    assert outcome.transcript == "grab the apple"
    assert outcome.actions == [ActionCall("pick_up", ("apple",))]
    assert "apple" in outcome.objects
    assert record.t_total == total_time(record.stages, record.overhead)
    assert record.overhead > 0


def test_stt_fault_zeroes_everything_downstream():
    scene = table_scene(0, seed=5)
    record = run_trial(
        entry_for("grab the apple", {"held": "apple"}, inject=("stt",)), mock_adapters(), scene
    )
    assert record.stages.a_stt == 0
    assert record.stages.a_ae == 0
    assert record.stages.a_od == 0
    assert record.stages.a_ra == 0
    assert record.a_total == 0
    assert record.first_failing_stage() == "stt"


def test_ae_fault_keeps_stt_green():
    scene = table_scene(0, seed=5)
    record = run_trial(
        entry_for("grab the apple", {"held": "apple"}, inject=("ae",)), mock_adapters(), scene
    )
    assert record.stages.a_stt == 100
    assert record.stages.a_ae == 0
    assert record.a_total == 0
    assert record.first_failing_stage() == "ae"


def test_od_fault_detected_and_isolated():
    scene = table_scene(0, seed=5)
    record = run_trial(
        entry_for("grab the apple", {"held": "apple"}, inject=("od",)), mock_adapters(), scene
    )
    assert record.stages.a_stt == 100
    assert record.stages.a_ae == 100
    assert record.stages.a_od == 0
    assert record.a_total == 0


def test_ra_fault_fails_final_predicate():
    scene = table_scene(0, seed=5)
    record = run_trial(
        entry_for("grab the apple", {"held": "apple"}, inject=("ra",)), mock_adapters(), scene
    )
    assert record.stages.a_od == 100
    assert record.stages.a_ra == 0
    assert record.first_failing_stage() == "ra"


def test_final_scene_mismatch_fails_ra():
    scene = table_scene(0, seed=5)
    record = run_trial(
        entry_for("grab the apple", {"held": "lemon"}), mock_adapters(), scene
    )
    assert record.stages.a_ra == 0
    assert record.a_total == 0


def test_live_turn_without_expectations():
    scene = table_scene(0, seed=5)
    outcome = run_turn({"id": "live", "utterance": "grab the apple", "seed": 9},
                       mock_adapters(), scene)
    assert outcome.record.a_total == 100
    assert scene.held == "apple"


def test_unknown_object_is_ra_failure_not_crash():
    scene = table_scene(0, seed=5)
    outcome = run_turn({"id": "live", "utterance": "grab the banana", "seed": 9},
                       mock_adapters(), scene)
    assert outcome.record.stages.a_od == 0  # banana not in ground truth
    assert outcome.execution[0][1].reason == "object not detected"
    assert scene.held is None


def test_events_stream_in_stage_order():
    scene = table_scene(0, seed=5)
    events = []
    adapters = mock_adapters(events=events.append)
    run_trial(entry_for("grab the apple", {"held": "apple"}), adapters, scene)
    kinds = [e["type"] for e in events]
    assert kinds[0] == "turn" and events[0]["status"] == "started"
    assert kinds[-1] == "turn" and events[-1]["status"] == "finished"
    stage_seq = [(e["stage"], e["status"]) for e in events if e["type"] == "stage"]
    assert stage_seq == [
        ("stt", "running"), ("stt", "ok"),
        ("ae", "running"), ("ae", "ok"),
        ("od", "running"), ("od", "ok"),
        ("ra", "running"), ("ra", "ok"),
    ]
    assert any(e["type"] == "trajectory" for e in events)
    assert any(e["type"] == "detection" for e in events)


def test_virtual_clock_makes_replays_identical(tmp_path):
    entries = build_script(6, seed=11)
    script = write_benchmark(tmp_path, entries)

    def run():
        adapters = mock_adapters()
        return [
            run_trial(e, adapters, load_trial_scene(e, tmp_path)).to_dict()
            for e in read_script(script)
        ]

    assert run() == run()


def test_eq6_identity_holds_on_real_runs(tmp_path):
    entries = build_script(4, seed=13)
    write_benchmark(tmp_path, entries)
    adapters = mock_adapters()
    for e in entries:
        record = run_trial(e, adapters, load_trial_scene(e, tmp_path))
        assert record.t_total == total_time(record.stages, record.overhead)
        assert record.overhead >= 0


def test_clock_validation():
    clock = VirtualClock()
    clock.advance(1.5)
    assert clock.now() == 1.5
    with pytest.raises(ValueError):
        clock.advance(-1.0)


def test_fault_rates_reproduced_exactly(tmp_path):
    entries = build_script(20, seed=17, faults={"ae": 3, "ra": 2})
    script = write_benchmark(tmp_path, entries)
    adapters = mock_adapters()
    records = [run_trial(e, adapters, load_trial_scene(e, tmp_path)) for e in read_script(script)]
    report = aggregate(records)
    assert report.errors.total_failures == 5
    assert report.errors.counts == {"stt": 0, "ae": 3, "od": 0, "ra": 2}
    assert report.summaries["a_total"].mean == pytest.approx(100 * 15 / 20)
