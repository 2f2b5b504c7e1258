"""Parser and validation for language-model action lists.

The model emits a bracketed list of Python-style calls:

    [ move_object_to_left_of(apple, orange) ]

Grammar (whitespace-insensitive):

    actions : '[' ']' | '[' call (',' call)* ']'
    call    : IDENT '(' ')' | IDENT '(' arg (',' arg)* ')'
    arg     : IDENT | NUMBER | quoted string

Arguments stay uninterpreted strings at parse time; semantic resolution
happens at execution. The JSON canonical form
[{"method": ..., "args": [...]}] is also accepted on input.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
NUMBER_RE = re.compile(r"-?\d+(\.\d+)?")
_BARE_ARG_RE = re.compile(r"(?:[A-Za-z_][A-Za-z0-9_]*|-?\d+(?:\.\d+)?)\Z")


class ParseError(ValueError):
    """Syntax error with the offset it occurred at and what was expected."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ValidationError(ValueError):
    """All-or-nothing validation report: every violation, not just the first."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class ActionCall:
    method_name: str
    args: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not IDENT_RE.fullmatch(self.method_name):
            raise ValueError(f"invalid method name {self.method_name!r}")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def expect(self, char: str, expected: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != char:
            raise ParseError(f"expected {expected}", self.pos)
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        m = IDENT_RE.match(self.text, self.pos)
        if not m:
            raise ParseError("expected identifier", self.pos)
        self.pos = m.end()
        return m.group()

    def argument(self) -> str:
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] in "\"'":
            quote = self.text[self.pos]
            end = self.text.find(quote, self.pos + 1)
            if end == -1:
                raise ParseError("unterminated string", self.pos)
            value = self.text[self.pos + 1 : end]
            if "\n" in value:
                raise ParseError("newline inside string", self.pos)
            self.pos = end + 1
            return value
        m = IDENT_RE.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return m.group()
        m = NUMBER_RE.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return m.group()
        raise ParseError("expected identifier, number or quoted string", self.pos)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_call(scanner: _Scanner) -> ActionCall:
    start = scanner.pos
    name = scanner.ident()
    scanner.expect("(", "'('")
    args: list[str] = []
    if scanner.peek() != ")":
        args.append(scanner.argument())
        while scanner.peek() == ",":
            scanner.expect(",", "','")
            args.append(scanner.argument())
    scanner.expect(")", "')'")
    try:
        return ActionCall(name, tuple(args))
    except ValueError as exc:
        raise ParseError(str(exc), start) from exc


def _parse_json_form(text: str) -> list[ActionCall]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON action list: {exc.msg}", exc.pos) from exc
    if not isinstance(payload, list):
        raise ParseError("JSON action list must be an array", 0)
    calls = []
    for i, entry in enumerate(payload):
        if not isinstance(entry, dict) or "method" not in entry:
            raise ParseError(f"action {i} must be an object with a 'method' key", 0)
        args = entry.get("args", [])
        if not isinstance(args, list):
            raise ParseError(f"action {i} 'args' must be an array", 0)
        try:
            calls.append(ActionCall(str(entry["method"]), tuple(str(a) for a in args)))
        except ValueError as exc:
            raise ParseError(str(exc), 0) from exc
    return calls


def parse_actions(text: str) -> list[ActionCall]:
    """Parse action text into calls, in textual order.

    Raises ParseError (with offset) on malformed syntax, including trailing
    garbage after the closing bracket.
    """
    if not isinstance(text, str):
        raise ParseError("input must be text", 0)
    scanner = _Scanner(text)
    scanner.expect("[", "'['")
    if scanner.peek() == "{":
        return _parse_json_form(text)
    calls: list[ActionCall] = []
    if scanner.peek() != "]":
        calls.append(_parse_call(scanner))
        while scanner.peek() == ",":
            scanner.expect(",", "','")
            calls.append(_parse_call(scanner))
    scanner.expect("]", "']' or ','")
    if not scanner.at_end():
        raise ParseError("trailing input after ']'", scanner.pos)
    return calls


def format_actions(calls: Iterable[ActionCall]) -> str:
    """Canonical call-syntax text; parse_actions(format_actions(x)) == x."""
    rendered = []
    for call in calls:
        args = ", ".join(a if _BARE_ARG_RE.fullmatch(a) else f'"{a}"' for a in call.args)
        rendered.append(f"{call.method_name}({args})")
    return "[" + ", ".join(rendered) + "]"


def actions_to_json(calls: Iterable[ActionCall]) -> list[dict]:
    """Canonical JSON form used in logs, trial scripts and the UI."""
    return [{"method": c.method_name, "args": list(c.args)} for c in calls]


def actions_from_json(payload: Iterable[dict]) -> list[ActionCall]:
    return [ActionCall(str(e["method"]), tuple(str(a) for a in e.get("args", []))) for e in payload]


@dataclass(frozen=True)
class CommandSpec:
    arity: int
    executor: str
    label_args: tuple[int, ...] = ()  # argument positions naming scene objects
    implicit_labels: tuple[str, ...] = ()  # extra objects the executor must see

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise ValueError("arity must be nonnegative")


class CommandRegistry:
    """Known methods with their exact arities and executor tags."""

    def __init__(self):
        self._specs: dict[str, CommandSpec] = {}

    def register(self, name: str, spec: CommandSpec) -> None:
        if name in self._specs:
            raise ValueError(f"method {name!r} already registered")
        self._specs[name] = spec

    def __contains__(self, name: str) -> bool:
        return name in self._specs

    def spec(self, name: str) -> CommandSpec:
        return self._specs[name]

    def names(self) -> list[str]:
        return sorted(self._specs)


def default_registry() -> CommandRegistry:
    reg = CommandRegistry()
    reg.register("pick_up", CommandSpec(1, "pick_up", label_args=(0,)))
    reg.register("hand_over", CommandSpec(1, "hand_over", label_args=(0,), implicit_labels=("hand",)))
    reg.register("move_object_to_left_of", CommandSpec(2, "relation", label_args=(0, 1)))
    reg.register("move_object_to_right_of", CommandSpec(2, "relation", label_args=(0, 1)))
    reg.register("move_object_above", CommandSpec(2, "relation", label_args=(0, 1)))
    reg.register("move_object_below", CommandSpec(2, "relation", label_args=(0, 1)))
    reg.register("place_at", CommandSpec(3, "place_at", label_args=(0,)))
    return reg


class CommandQueue:
    """FIFO of validated calls; one producer, one consumer."""

    def __init__(self, calls: Iterable[ActionCall] = ()):
        self._queue: deque[ActionCall] = deque(calls)

    def push(self, call: ActionCall) -> None:
        self._queue.append(call)

    def pop(self) -> ActionCall:
        return self._queue.popleft()

    def __len__(self) -> int:
        return len(self._queue)

    def __iter__(self) -> Iterator[ActionCall]:
        return iter(self._queue)

    def __eq__(self, other) -> bool:
        return isinstance(other, CommandQueue) and list(self) == list(other)


def validate(calls: list[ActionCall], registry: CommandRegistry) -> CommandQueue:
    """All-or-nothing: return the queue, or report every violation at once."""
    violations = []
    for i, call in enumerate(calls):
        if call.method_name not in registry:
            violations.append(f"call {i}: unknown method {call.method_name!r}")
            continue
        spec = registry.spec(call.method_name)
        if len(call.args) != spec.arity:
            violations.append(
                f"call {i}: {call.method_name} expected {spec.arity} argument(s), "
                f"got {len(call.args)}"
            )
    if violations:
        raise ValidationError(violations)
    return CommandQueue(calls)


def referenced_labels(calls: Iterable[ActionCall], registry: CommandRegistry) -> list[str]:
    """Object labels the calls name, in first-reference order, deduplicated."""
    seen: dict[str, None] = {}
    for call in calls:
        if call.method_name not in registry:
            continue
        spec = registry.spec(call.method_name)
        for idx in spec.label_args:
            if idx < len(call.args):
                seen.setdefault(call.args[idx])
        for label in spec.implicit_labels:
            seen.setdefault(label)
    return list(seen)
