"""Action-list grammar: parsing, round-trips, validation, fuzzing."""

import random
import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzyarm.grammar import (
    ActionCall,
    CommandQueue,
    CommandRegistry,
    CommandSpec,
    ParseError,
    ValidationError,
    actions_from_json,
    actions_to_json,
    default_registry,
    format_actions,
    parse_actions,
    referenced_labels,
    validate,
)


def test_paper_example_parses_to_method_and_args():
    calls = parse_actions("[ move_object_to_left_of(apple, orange) ]")
    assert calls == [ActionCall("move_object_to_left_of", ("apple", "orange"))]


def test_empty_action_list():
    assert parse_actions("[]") == []
    assert parse_actions("  [   ]  ") == []


def test_two_calls_in_textual_order():
    calls = parse_actions("[ pick_up(lemon), hand_over(lemon) ]")
    assert calls == [
        ActionCall("pick_up", ("lemon",)),
        ActionCall("hand_over", ("lemon",)),
    ]


def test_zero_arg_call():
    assert parse_actions("[stop()]") == [ActionCall("stop", ())]


def test_quoted_multiword_label():
    calls = parse_actions('[pick_up("green apple")]')
    assert calls == [ActionCall("pick_up", ("green apple",))]
    calls = parse_actions("[pick_up('green apple')]")
    assert calls[0].args == ("green apple",)


def test_numeric_literal_args():
    calls = parse_actions("[place_at(apple, 200, 300.5)]")
    assert calls == [ActionCall("place_at", ("apple", "200", "300.5"))]


def test_whitespace_insensitive():
    a = parse_actions("[pick_up(apple),hand_over(apple)]")
    b = parse_actions(" [ pick_up ( apple ) ,\n hand_over ( apple ) ] ")
    assert a == b


def test_json_canonical_form_accepted():
    text = '[{"method": "pick_up", "args": ["apple"]}, {"method": "stop", "args": []}]'
    assert parse_actions(text) == [ActionCall("pick_up", ("apple",)), ActionCall("stop", ())]


def test_json_round_trip():
    calls = [ActionCall("move_object_above", ("green apple", "orange"))]
    assert actions_from_json(actions_to_json(calls)) == calls
    import json

    assert parse_actions(json.dumps(actions_to_json(calls))) == calls


@pytest.mark.parametrize(
    "text",
    [
        "",
        "pick_up(apple)",
        "[pick_up(apple)",
        "[pick_up(apple)] extra",
        "[pick_up(apple),]",
        "[pick_up(apple) hand_over(apple)]",
        "[pick_up(]",
        "[pick_up(apple]",
        "[1pick(apple)]",
        '[pick_up("unterminated)]',
        "[,]",
    ],
)
def test_malformed_inputs_raise_positioned_errors(text):
    with pytest.raises(ParseError) as err:
        parse_actions(text)
    assert isinstance(err.value.offset, int)
    assert 0 <= err.value.offset <= len(text)
    assert "expected" in str(err.value) or "trailing" in str(err.value) or " at offset " in str(err.value)


def random_valid_actions(rng: random.Random) -> list[ActionCall]:
    calls = []
    for _ in range(rng.randint(0, 4)):
        name = rng.choice(["a", "do_thing", "pick_up", "m1", "go_left"])
        args = []
        for _ in range(rng.randint(0, 3)):
            kind = rng.randint(0, 2)
            if kind == 0:
                args.append(
                    "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(1, 8)))
                )
            elif kind == 1:
                args.append(str(rng.randint(-500, 500)))
            else:
                args.append(
                    "".join(rng.choice(string.ascii_lowercase + " ") for _ in range(rng.randint(1, 12))).strip()
                    or "x"
                )
        calls.append(ActionCall(name, tuple(args)))
    return calls


def test_round_trip_seeded_sample():
    rng = random.Random(123)
    for _ in range(500):
        calls = random_valid_actions(rng)
        assert parse_actions(format_actions(calls)) == calls


ident_st = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,10}", fullmatch=True)
arg_st = st.one_of(
    ident_st,
    st.from_regex(r"-?\d{1,6}(\.\d{1,4})?", fullmatch=True),
    st.text(
        alphabet=string.ascii_letters + string.digits + " _-",
        min_size=1,
        max_size=15,
    ).filter(lambda s: s == s.strip() and s != ""),
)
calls_st = st.lists(
    st.builds(ActionCall, ident_st, st.lists(arg_st, max_size=4).map(tuple)),
    max_size=5,
)


@given(calls_st)
@settings(max_examples=300)
def test_round_trip_property(calls):
    assert parse_actions(format_actions(calls)) == calls


@given(calls_st, st.randoms())
@settings(max_examples=300)
def test_mutation_never_crashes(calls, rng):
    text = list(format_actions(calls))
    for _ in range(rng.randint(1, 4)):
        pos = rng.randrange(len(text))
        text[pos] = chr(rng.randint(32, 126))
    mutated = "".join(text)
    try:
        parse_actions(mutated)
    except ParseError as err:
        assert isinstance(err.offset, int)


def test_validate_happy_path():
    registry = default_registry()
    queue = validate([ActionCall("pick_up", ("apple",))], registry)
    assert isinstance(queue, CommandQueue)
    assert list(queue) == [ActionCall("pick_up", ("apple",))]


def test_validate_arity_mismatch_message():
    registry = default_registry()
    with pytest.raises(ValidationError, match="expected 1 argument.s., got 2"):
        validate([ActionCall("pick_up", ("apple", "orange"))], registry)


def test_validate_unknown_method():
    registry = default_registry()
    with pytest.raises(ValidationError, match="unknown method 'fly_to'"):
        validate([ActionCall("fly_to", ("moon",))], registry)


def test_validate_reports_every_violation():
    registry = default_registry()
    with pytest.raises(ValidationError) as err:
        validate(
            [
                ActionCall("fly_to", ("moon",)),
                ActionCall("pick_up", ()),
                ActionCall("hand_over", ("lemon",)),
            ],
            registry,
        )
    assert len(err.value.violations) == 2


def test_queue_preserves_fifo_order():
    queue = CommandQueue()
    for name in ("a", "b", "c"):
        queue.push(ActionCall(name))
    assert [c.method_name for c in queue] == ["a", "b", "c"]
    assert queue.pop().method_name == "a"
    assert queue.pop().method_name == "b"
    assert len(queue) == 1


def test_queue_order_equals_textual_order():
    text = "[pick_up(a), pick_up(b), hand_over(b)]"
    registry = default_registry()
    queue = validate(parse_actions(text), registry)
    assert [c.args[0] for c in queue] == ["a", "b", "b"]


def test_referenced_labels():
    registry = default_registry()
    calls = parse_actions("[pick_up(lemon), hand_over(lemon), move_object_above(apple, lemon)]")
    assert referenced_labels(calls, registry) == ["lemon", "hand", "apple"]


def test_registry_rejects_duplicates():
    registry = CommandRegistry()
    registry.register("go", CommandSpec(0, "go"))
    with pytest.raises(ValueError):
        registry.register("go", CommandSpec(1, "go"))
