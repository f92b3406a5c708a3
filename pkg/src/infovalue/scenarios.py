"""Worked scenarios and epsilon sweeps.

Three presets, each a complete problem-plus-policy pairing:

``race``
    A day at the races.  Whether it rains decides which horse is favored;
    learning the weather before betting is classically valuable, and the
    bettor conditionalizes.  The baseline case where information is worth
    paying for.

``gamblers``
    Two fair, independent coin flips.  Bets on the second flip all lose
    money on expectation, so a conditionalizer ignores news about the
    first flip: the evidence is worthless but harmless.  An agent who
    suspects (with probability epsilon) that seeing the first flip will
    trigger the gambler's fallacy — 9/10 confident the second flip comes
    up opposite — expects that news to push them into a losing bet.

``unknown-bias``
    Two flips of a coin whose bias is unknown, so the flips are
    correlated and the first is genuinely informative about the second.
    Here learning has classical value 1/3, but the same fallacy (tuned to
    confidence 91/100, where it tips the agent into a reckless 2-to-minus-10
    bet) costs more than the news is worth once epsilon exceeds 1/7.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .decision import (
    ERROR_ON_TIE,
    Action,
    ChoiceSet,
    DecisionProblem,
    OutcomeSpace,
    best_action,
)
from .errors import ConfigError, TieError
from .prob import Credence, Event, StateSpace, as_fraction
from .updating import (
    DeviationSpec,
    EvidencePartition,
    UpdatePolicy,
    conditionalization_policy,
    mixture_expand,
)
from .voi import val_general, val_good

__all__ = [
    "RACE",
    "GAMBLERS",
    "UNKNOWN_BIAS",
    "SCENARIO_NAMES",
    "Scenario",
    "SweepRow",
    "SweepTable",
    "scenario_race",
    "scenario_gamblers",
    "scenario_unknown_bias",
    "build_scenario",
    "sweep",
]

RACE = "race"
GAMBLERS = "gamblers"
UNKNOWN_BIAS = "unknown-bias"
SCENARIO_NAMES = (RACE, GAMBLERS, UNKNOWN_BIAS)

_MIXTURE_LABELS = ("bayes", "fallacy")


@dataclass(frozen=True)
class Scenario:
    """A named, ready-to-evaluate problem with its update policy."""

    name: str
    problem: DecisionProblem
    policy: UpdatePolicy


def scenario_race() -> Scenario:
    """Rain favors one horse, shine the other; the bettor conditionalizes.

    It rains with probability 1/2, and the favored horse wins with
    probability 3/4.  Each bet pays +1 when right and -2 when wrong, so
    neither is worth taking on the prior (both expect -1/2 against the
    do-nothing 0), but after a weather report the favored bet expects
    +1/4.  Learning the weather is worth exactly 1/4.
    """
    space = StateSpace(("rain-a", "rain-b", "shine-a", "shine-b"))
    prior = Credence(
        space,
        {
            "rain-a": Fraction(3, 8),
            "rain-b": Fraction(1, 8),
            "shine-a": Fraction(1, 8),
            "shine-b": Fraction(3, 8),
        },
    )
    outcomes = OutcomeSpace(
        ("nothing", "win", "loss"),
        {"nothing": Fraction(0), "win": Fraction(1), "loss": Fraction(-2)},
    )
    safe = Action("safe", {s: "nothing" for s in space})
    bet_a = Action(
        "bet-a", {s: ("win" if s.endswith("-a") else "loss") for s in space}
    )
    bet_b = Action(
        "bet-b", {s: ("win" if s.endswith("-b") else "loss") for s in space}
    )
    problem = DecisionProblem(space, outcomes, prior, ChoiceSet((safe, bet_a, bet_b)))
    partition = EvidencePartition(
        space,
        (
            Event(space, frozenset({"rain-a", "rain-b"})),
            Event(space, frozenset({"shine-a", "shine-b"})),
        ),
    )
    return Scenario(RACE, problem, conditionalization_policy(prior, partition))


def _two_flip_problem(
    masses: dict[str, Fraction],
    outcomes: OutcomeSpace,
    actions: tuple[Action, ...],
) -> tuple[DecisionProblem, EvidencePartition]:
    space = StateSpace(("hh", "ht", "th", "tt"))
    prior = Credence(space, masses)
    problem = DecisionProblem(space, outcomes, prior, ChoiceSet(actions))
    partition = EvidencePartition(
        space,
        (
            Event(space, frozenset({"hh", "ht"})),
            Event(space, frozenset({"th", "tt"})),
        ),
    )
    return problem, partition


def scenario_gamblers(epsilon) -> Scenario:
    """Fair independent flips, losing bets, and a feared gambler's fallacy.

    States are the four outcomes of two fair independent flips; evidence
    is the first flip.  Bets on the second flip pay +1 right, -2 wrong —
    never worth it, with or without the news, so the news is classically
    worthless and a pure conditionalizer just declines everything.

    With probability ``epsilon`` (independent of the flips), seeing the
    first flip triggers the fallacy: 9/10 confidence that the second flip
    comes up the opposite face, which makes the matching bet look like a
    winner.  The expected cost of being offered the news is epsilon/2.
    """
    eps = as_fraction(epsilon)
    space4 = ("hh", "ht", "th", "tt")
    outcomes = OutcomeSpace(
        ("nothing", "win", "loss"),
        {"nothing": Fraction(0), "win": Fraction(1), "loss": Fraction(-2)},
    )
    safe = Action("safe", {s: "nothing" for s in space4})
    risky_heads = Action(
        "risky-heads", {s: ("win" if s[1] == "h" else "loss") for s in space4}
    )
    risky_tails = Action(
        "risky-tails", {s: ("win" if s[1] == "t" else "loss") for s in space4}
    )
    problem, partition = _two_flip_problem(
        {s: Fraction(1, 4) for s in space4},
        outcomes,
        (safe, risky_heads, risky_tails),
    )
    heads_cell, tails_cell = partition.cells
    spec = DeviationSpec(
        eps,
        {
            heads_cell: Credence(
                problem.space, {"ht": Fraction(9, 10), "hh": Fraction(1, 10)}
            ),
            tails_cell: Credence(
                problem.space, {"th": Fraction(9, 10), "tt": Fraction(1, 10)}
            ),
        },
    )
    expanded, policy = mixture_expand(problem, partition, spec, labels=_MIXTURE_LABELS)
    return Scenario(GAMBLERS, expanded, policy)


def scenario_unknown_bias(
    epsilon, fallacy_confidence: Fraction = Fraction(91, 100)
) -> Scenario:
    """Correlated flips make the news valuable; the fallacy makes it costly.

    A coin of unknown bias is flipped twice: the joint distribution puts
    1/3 on each matching pair and 1/6 on each mismatch, so after seeing
    the first flip the second matches it with probability 2/3.  Modest
    +1/-1 bets on the second flip are the sensible play (worth 1/3 with
    the news in hand, so the news is classically worth 1/3), while the
    reckless +2/-10 bets only pay for the very confident.

    The feared deviation here is streak-chasing: with probability
    ``epsilon``, seeing the first flip leaves the agent
    ``fallacy_confidence`` sure the second will match it.  At the default
    91/100 that tips the deviant self into the reckless matching bet
    (conditional expected utility -2), so the news nets
    (1 - epsilon)/3 - 2*epsilon: positive below epsilon = 1/7, negative
    above.

    Confidence values at which the deviant self is exactly torn between
    two acts are rejected with :class:`ConfigError` naming the tied acts.
    """
    eps = as_fraction(epsilon)
    confidence = as_fraction(fallacy_confidence)
    if not 0 <= confidence <= 1:
        raise ConfigError(
            f"fallacy confidence must lie in [0, 1], got {confidence}"
        )
    space4 = ("hh", "ht", "th", "tt")
    outcomes = OutcomeSpace(
        ("nothing", "small-win", "small-loss", "big-win", "big-loss"),
        {
            "nothing": Fraction(0),
            "small-win": Fraction(1),
            "small-loss": Fraction(-1),
            "big-win": Fraction(2),
            "big-loss": Fraction(-10),
        },
    )
    safe = Action("safe", {s: "nothing" for s in space4})
    bet_heads = Action(
        "bet-heads", {s: ("small-win" if s[1] == "h" else "small-loss") for s in space4}
    )
    bet_tails = Action(
        "bet-tails", {s: ("small-win" if s[1] == "t" else "small-loss") for s in space4}
    )
    vrisky_heads = Action(
        "v-risky-heads", {s: ("big-win" if s[1] == "h" else "big-loss") for s in space4}
    )
    vrisky_tails = Action(
        "v-risky-tails", {s: ("big-win" if s[1] == "t" else "big-loss") for s in space4}
    )
    problem, partition = _two_flip_problem(
        {
            "hh": Fraction(1, 3),
            "ht": Fraction(1, 6),
            "th": Fraction(1, 6),
            "tt": Fraction(1, 3),
        },
        outcomes,
        (safe, bet_heads, bet_tails, vrisky_heads, vrisky_tails),
    )
    heads_cell, tails_cell = partition.cells
    spec = DeviationSpec(
        eps,
        {
            heads_cell: Credence(
                problem.space, {"hh": confidence, "ht": 1 - confidence}
            ),
            tails_cell: Credence(
                problem.space, {"tt": confidence, "th": 1 - confidence}
            ),
        },
    )
    expanded, policy = mixture_expand(problem, partition, spec, labels=_MIXTURE_LABELS)
    for state in expanded.space:
        try:
            best_action(policy.posterior(state), expanded, tie_policy=ERROR_ON_TIE)
        except TieError as exc:
            raise ConfigError(
                f"fallacy confidence {confidence} makes acts tie at expected "
                f"utility {exc.value}: {', '.join(exc.actions)}"
            ) from None
    return Scenario(UNKNOWN_BIAS, expanded, policy)


def build_scenario(name: str, epsilon=None, confidence=None) -> Scenario:
    """Dispatch by name, rejecting parameters a scenario does not take."""
    if name == RACE:
        if epsilon is not None:
            raise ConfigError("the race scenario has no epsilon parameter")
        if confidence is not None:
            raise ConfigError("the race scenario has no confidence parameter")
        return scenario_race()
    if name == GAMBLERS:
        if confidence is not None:
            raise ConfigError(
                "the gamblers scenario has a fixed fallacy confidence of 9/10"
            )
        return scenario_gamblers(Fraction(0) if epsilon is None else epsilon)
    if name == UNKNOWN_BIAS:
        if confidence is None:
            return scenario_unknown_bias(Fraction(0) if epsilon is None else epsilon)
        return scenario_unknown_bias(
            Fraction(0) if epsilon is None else epsilon, confidence
        )
    raise ConfigError(
        f"unknown scenario {name!r}; expected one of {', '.join(SCENARIO_NAMES)}"
    )


@dataclass(frozen=True)
class SweepRow:
    epsilon: Fraction
    val_good: Fraction
    val_general: Fraction
    decision: str


@dataclass(frozen=True)
class SweepTable:
    """Values of learning across epsilon, with the learn/decline verdict.

    The verdict is ``learn`` whenever ``val_general >= 0``: an agent
    indifferent at exactly 0 is counted as accepting the evidence.
    """

    scenario: str
    rows: tuple[SweepRow, ...]

    def format_table(self) -> str:
        headers = ("epsilon", "val_good", "val_general", "decision")
        cells = [
            (str(r.epsilon), str(r.val_good), str(r.val_general), r.decision)
            for r in self.rows
        ]
        widths = [
            max(len(h), *(len(row[i]) for row in cells)) if cells else len(h)
            for i, h in enumerate(headers)
        ]
        lines = [
            "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
            "  ".join("-" * w for w in widths),
        ]
        for row in cells:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        return "\n".join(lines)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("epsilon", "val_good", "val_general", "decision"))
        for r in self.rows:
            writer.writerow((str(r.epsilon), str(r.val_good), str(r.val_general), r.decision))
        return buffer.getvalue()


def sweep(name: str, epsilons, confidence=None) -> SweepTable:
    """Evaluate a mixture scenario at each epsilon, in the order given."""
    if name == RACE:
        raise ConfigError("the race scenario has no epsilon parameter to sweep")
    rows = []
    for raw in epsilons:
        scenario = build_scenario(name, epsilon=as_fraction(raw), confidence=confidence)
        good = val_good(scenario.problem, scenario.policy.partition)
        general = val_general(scenario.problem, scenario.policy)
        rows.append(
            SweepRow(
                epsilon=as_fraction(raw),
                val_good=good,
                val_general=general,
                decision="learn" if general >= 0 else "decline",
            )
        )
    return SweepTable(name, tuple(rows))
