"""Problem files: a canonical JSON format for problems plus policies.

One document carries the whole setup: states with prior masses, outcomes
with utilities, actions, the evidence partition, and the update policy
(either the literal string ``"conditionalization"`` or an explicit
state-by-state posterior table).

Serialization is canonical — sorted keys, two-space indent, trailing
newline, every rational in lowest terms as ``"num"`` or ``"num/den"`` — so
saving the same objects twice yields byte-identical files.  Decimals are
rejected on input: this package does not traffic in floats.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .decision import Action, ChoiceSet, DecisionProblem, OutcomeSpace
from .errors import (
    CertaintyError,
    InfoValueError,
    MalformedDocumentError,
    NormalizationError,
    PartitionError,
    PolicyError,
    RationalFormatError,
)
from .prob import Credence, Event, StateSpace, probability
from .updating import (
    CONDITIONALIZATION,
    EvidencePartition,
    UpdatePolicy,
    conditionalization_policy,
)

__all__ = [
    "format_rational",
    "parse_rational",
    "problem_document",
    "dumps",
    "loads",
    "save_problem",
    "load_problem",
]

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def parse_rational(text: Any, location: str) -> Fraction:
    """Parse an exact rational string, rejecting decimals and floats."""
    if isinstance(text, str) and _RATIONAL.match(text):
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise RationalFormatError(location, f"zero denominator in {text!r}") from None
    raise RationalFormatError(
        location,
        f"expected an exact rational string like '3/4' or '-2', got {text!r}",
    )


def problem_document(problem: DecisionProblem, policy: UpdatePolicy) -> dict:
    """The JSON-ready document for a problem and its update policy."""
    if policy.space != problem.space:
        raise InfoValueError("policy is not over the problem's space")
    states = [
        {"id": s, "prob": format_rational(problem.prior(s))} for s in problem.space
    ]
    outcomes = [
        {"id": o, "utility": format_rational(problem.outcomes.u(o))}
        for o in problem.outcomes.outcomes
    ]
    actions = [
        {"id": a.id, "map": {s: a.outcome_in(s) for s in problem.space}}
        for a in problem.choices
    ]
    partition = [list(cell.sorted_members()) for cell in policy.partition.cells]
    if policy.kind == CONDITIONALIZATION:
        policy_doc: Any = CONDITIONALIZATION
    else:
        policy_doc = [
            {
                "state": s,
                "posterior": {
                    t: format_rational(policy.posterior(s)(t))
                    for t in policy.posterior(s).support()
                },
            }
            for s in problem.space
        ]
    return {
        "states": states,
        "outcomes": outcomes,
        "actions": actions,
        "partition": partition,
        "policy": policy_doc,
    }


def dumps(problem: DecisionProblem, policy: UpdatePolicy) -> str:
    return json.dumps(problem_document(problem, policy), sort_keys=True, indent=2) + "\n"


def _require_object(value: Any, location: str, keys: tuple[str, ...]) -> dict:
    if not isinstance(value, dict):
        raise MalformedDocumentError(location, f"expected an object, got {_kind(value)}")
    missing = [k for k in keys if k not in value]
    if missing:
        raise MalformedDocumentError(location, f"missing keys: {', '.join(missing)}")
    unknown = [k for k in value if k not in keys]
    if unknown:
        raise MalformedDocumentError(location, f"unknown keys: {', '.join(unknown)}")
    return value


def _require_list(value: Any, location: str) -> list:
    if not isinstance(value, list):
        raise MalformedDocumentError(location, f"expected an array, got {_kind(value)}")
    return value


def _require_string(value: Any, location: str) -> str:
    if not isinstance(value, str) or not value:
        raise MalformedDocumentError(
            location, f"expected a non-empty string, got {value!r}"
        )
    return value


def _kind(value: Any) -> str:
    return {
        dict: "an object",
        list: "an array",
        str: "a string",
        bool: "a boolean",
        int: "a number",
        float: "a number",
        type(None): "null",
    }.get(type(value), type(value).__name__)


def _parse_states(doc: Any) -> tuple[StateSpace, Credence]:
    entries = _require_list(doc, "states")
    if not entries:
        raise MalformedDocumentError("states", "at least one state is required")
    ids: list[str] = []
    masses: dict[str, Fraction] = {}
    for i, entry in enumerate(entries):
        loc = f"states[{i}]"
        obj = _require_object(entry, loc, ("id", "prob"))
        state = _require_string(obj["id"], f"{loc}.id")
        if state in masses:
            raise MalformedDocumentError(f"{loc}.id", f"duplicate state id {state!r}")
        mass = parse_rational(obj["prob"], f"{loc}.prob")
        if mass < 0:
            raise NormalizationError(f"{loc}.prob", f"negative mass {mass}")
        ids.append(state)
        masses[state] = mass
    total = sum(masses.values(), Fraction(0))
    if total != 1:
        raise NormalizationError("states", f"masses sum to {total}, expected 1")
    space = StateSpace(tuple(ids))
    return space, Credence(space, masses)


def _parse_outcomes(doc: Any) -> OutcomeSpace:
    entries = _require_list(doc, "outcomes")
    if not entries:
        raise MalformedDocumentError("outcomes", "at least one outcome is required")
    ids: list[str] = []
    utilities: dict[str, Fraction] = {}
    for i, entry in enumerate(entries):
        loc = f"outcomes[{i}]"
        obj = _require_object(entry, loc, ("id", "utility"))
        outcome = _require_string(obj["id"], f"{loc}.id")
        if outcome in utilities:
            raise MalformedDocumentError(f"{loc}.id", f"duplicate outcome id {outcome!r}")
        ids.append(outcome)
        utilities[outcome] = parse_rational(obj["utility"], f"{loc}.utility")
    return OutcomeSpace(tuple(ids), utilities)


def _parse_actions(
    doc: Any, space: StateSpace, outcomes: OutcomeSpace
) -> ChoiceSet:
    entries = _require_list(doc, "actions")
    if not entries:
        raise MalformedDocumentError("actions", "at least one action is required")
    actions: list[Action] = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        loc = f"actions[{i}]"
        obj = _require_object(entry, loc, ("id", "map"))
        action_id = _require_string(obj["id"], f"{loc}.id")
        if action_id in seen:
            raise MalformedDocumentError(f"{loc}.id", f"duplicate action id {action_id!r}")
        seen.add(action_id)
        mapping = obj["map"]
        if not isinstance(mapping, dict):
            raise MalformedDocumentError(f"{loc}.map", "expected an object")
        assignment: dict[str, str] = {}
        for state, outcome in mapping.items():
            if state not in space:
                raise MalformedDocumentError(
                    f"{loc}.map", f"unknown state {state!r}"
                )
            outcome_id = _require_string(outcome, f"{loc}.map[{state!r}]")
            if outcome_id not in outcomes:
                raise MalformedDocumentError(
                    f"{loc}.map[{state!r}]", f"unknown outcome {outcome_id!r}"
                )
            assignment[state] = outcome_id
        missing = [s for s in space if s not in assignment]
        if missing:
            raise MalformedDocumentError(
                f"{loc}.map", f"no outcome for states: {', '.join(missing)}"
            )
        actions.append(Action(action_id, assignment))
    return ChoiceSet(tuple(actions))


def _parse_partition(
    doc: Any, space: StateSpace, prior: Credence
) -> EvidencePartition:
    entries = _require_list(doc, "partition")
    if not entries:
        raise PartitionError("partition", "at least one cell is required")
    cells: list[Event] = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        loc = f"partition[{i}]"
        members = _require_list(entry, loc)
        if not members:
            raise PartitionError(loc, "empty cell")
        for state in members:
            state_id = _require_string(state, loc)
            if state_id not in space:
                raise PartitionError(loc, f"unknown state {state_id!r}")
            if state_id in seen:
                raise PartitionError(loc, f"state {state_id!r} appears in two cells")
            seen.add(state_id)
        cells.append(Event(space, frozenset(members)))
    uncovered = [s for s in space if s not in seen]
    if uncovered:
        raise PartitionError(
            "partition", f"states not covered by any cell: {', '.join(uncovered)}"
        )
    for i, cell in enumerate(cells):
        if probability(prior, cell) == 0:
            raise PartitionError(
                f"partition[{i}]",
                f"cell {cell.describe()} has zero prior probability; "
                "it could never be learned",
            )
    return EvidencePartition(space, tuple(cells))


def _parse_policy(
    doc: Any, space: StateSpace, prior: Credence, partition: EvidencePartition
) -> UpdatePolicy:
    if doc == CONDITIONALIZATION:
        return conditionalization_policy(prior, partition)
    if isinstance(doc, str):
        raise PolicyError(
            "policy",
            f"expected {CONDITIONALIZATION!r} or an array of posteriors, got {doc!r}",
        )
    entries = _require_list(doc, "policy")
    posteriors: dict[str, Credence] = {}
    for i, entry in enumerate(entries):
        loc = f"policy[{i}]"
        obj = _require_object(entry, loc, ("state", "posterior"))
        state = _require_string(obj["state"], f"{loc}.state")
        if state not in space:
            raise PolicyError(f"{loc}.state", f"unknown state {state!r}")
        if state in posteriors:
            raise PolicyError(f"{loc}.state", f"duplicate posterior for {state!r}")
        table = obj["posterior"]
        if not isinstance(table, dict):
            raise PolicyError(f"{loc}.posterior", "expected an object")
        masses: dict[str, Fraction] = {}
        for target, raw in table.items():
            if target not in space:
                raise PolicyError(f"{loc}.posterior", f"unknown state {target!r}")
            masses[target] = parse_rational(raw, f"{loc}.posterior[{target!r}]")
        total = sum(masses.values(), Fraction(0))
        if total != 1:
            raise NormalizationError(
                f"{loc}.posterior", f"masses sum to {total}, expected 1"
            )
        if any(v < 0 for v in masses.values()):
            raise NormalizationError(f"{loc}.posterior", "negative mass")
        posterior = Credence(space, masses)
        cell = partition.cell_of(state)
        in_cell = probability(posterior, cell)
        if in_cell != 1:
            raise CertaintyError(
                loc,
                f"posterior for state {state!r} must assign probability exactly 1 "
                f"to its partition cell {cell.describe()} (got {in_cell})",
            )
        posteriors[state] = posterior
    missing = [s for s in space if s not in posteriors]
    if missing:
        raise PolicyError("policy", f"no posterior for states: {', '.join(missing)}")
    return UpdatePolicy(partition, posteriors)


def loads(text: str) -> tuple[DecisionProblem, EvidencePartition, UpdatePolicy]:
    """Parse a problem document, validating bottom-up with located errors."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(
            f"line {exc.lineno} column {exc.colno}", exc.msg
        ) from None
    top = _require_object(
        doc, "document", ("states", "outcomes", "actions", "partition", "policy")
    )
    space, prior = _parse_states(top["states"])
    outcomes = _parse_outcomes(top["outcomes"])
    choices = _parse_actions(top["actions"], space, outcomes)
    partition = _parse_partition(top["partition"], space, prior)
    policy = _parse_policy(top["policy"], space, prior, partition)
    problem = DecisionProblem(space, outcomes, prior, choices)
    return problem, partition, policy


def save_problem(path, problem: DecisionProblem, policy: UpdatePolicy) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(problem, policy))


def load_problem(path) -> tuple[DecisionProblem, EvidencePartition, UpdatePolicy]:
    with open(path, "r", encoding="utf-8") as handle:
        return loads(handle.read())
