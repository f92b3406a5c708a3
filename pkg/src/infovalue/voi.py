"""Exact value of information, classical and generalized.

Two quantities, same baseline.  The baseline is the best expected utility
available by acting on the prior alone.

``val_good`` is the classical value of learning which cell of a partition
obtains, for an agent who will condition on it and then optimize:
probability-weighted best conditional expected utility, minus the baseline.
It is never negative, and it is strictly positive exactly when the evidence
could change the best choice.

``val_general`` drops the assumption that the agent trusts their own
updating.  An update policy says what the agent would actually believe in
each state after learning its cell; the agent then takes whatever action is
best by that possibly-distorted posterior, and gets paid by the true state.
The value of learning is the prior expectation of that realized payoff,
minus the same baseline.  For policies that just conditionalize the two
quantities coincide; for policies the agent's own prior expects to deviate,
``val_general`` can go negative — learning can hurt.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .decision import Action, DecisionProblem, best_action, expected_utility, max_expected_utility
from .errors import IndependenceBrokenError, ValidationError
from .prob import Event, condition, probability
from .updating import EvidencePartition, UpdatePolicy, find_independence_violation

__all__ = [
    "LemmaOneRow",
    "PerCell",
    "VoiReport",
    "val_good",
    "sophisticated_choice",
    "val_general",
    "lemma1_decompose",
    "cellwise_decomposition",
    "val_general_via_cells",
    "evaluate",
]


@dataclass(frozen=True)
class LemmaOneRow:
    """One (cell, action) entry of the cellwise decomposition.

    ``choose_prob`` is the conditional probability, given the cell, of
    being in a state where the policy leads the agent to pick ``action_id``;
    ``cond_eu`` is that action's expected utility under the *conditioned
    prior* for the cell.  The decomposition is only sound when choices are
    evidentially independent of payoffs, which is exactly when multiplying
    these two numbers is legitimate.
    """

    cell: Event
    action_id: str
    choose_prob: Fraction
    cond_eu: Fraction

    def __post_init__(self) -> None:
        if not 0 < self.choose_prob <= 1:
            raise ValidationError(
                f"choose_prob must lie in (0, 1], got {self.choose_prob}"
            )


@dataclass(frozen=True)
class PerCell:
    """The cellwise decomposition for a single evidence cell."""

    cell: Event
    prob: Fraction
    max_cond_eu: Fraction
    rows: tuple[LemmaOneRow, ...]

    def __post_init__(self) -> None:
        if self.prob <= 0:
            raise ValidationError(f"cell probability must be positive, got {self.prob}")
        total = sum((r.choose_prob for r in self.rows), Fraction(0))
        if total != 1:
            raise ValidationError(
                f"choose probabilities in cell {self.cell.describe()} must sum "
                f"to 1, got {total}"
            )
        for row in self.rows:
            if row.cell != self.cell:
                raise ValidationError("row belongs to a different cell")
            if row.cond_eu > self.max_cond_eu:
                raise ValidationError(
                    f"row for {row.action_id!r} beats the recorded cell maximum"
                )

    def realized_eu(self) -> Fraction:
        """Expected payoff within this cell, weighting each chosen action."""
        return sum((r.choose_prob * r.cond_eu for r in self.rows), Fraction(0))


@dataclass(frozen=True)
class VoiReport:
    """Everything one evaluation establishes, cross-checked on construction.

    The per-cell table must reproduce both headline numbers exactly:
    ``val_good`` from the cell maxima and ``val_general`` from the
    choose-probability-weighted rows.  Construction fails loudly if the
    definitional and cellwise routes disagree, so a report in hand is
    itself evidence the two computations matched.
    """

    baseline: Fraction
    val_good: Fraction
    val_general: Fraction
    per_cell: tuple[PerCell, ...]
    chosen_by_state: Mapping[str, str] = field(hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "chosen_by_state", dict(self.chosen_by_state))
        total_cell_prob = sum((c.prob for c in self.per_cell), Fraction(0))
        if total_cell_prob != 1:
            raise ValidationError(
                f"cell probabilities must sum to 1, got {total_cell_prob}"
            )
        classical = sum(
            (c.prob * c.max_cond_eu for c in self.per_cell), Fraction(0)
        ) - self.baseline
        if classical != self.val_good:
            raise ValidationError(
                f"per-cell table reconstructs val_good={classical}, "
                f"report claims {self.val_good}"
            )
        general = sum(
            (c.prob * c.realized_eu() for c in self.per_cell), Fraction(0)
        ) - self.baseline
        if general != self.val_general:
            raise ValidationError(
                f"per-cell table reconstructs val_general={general}, "
                f"report claims {self.val_general}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VoiReport):
            return NotImplemented
        return (
            self.baseline == other.baseline
            and self.val_good == other.val_good
            and self.val_general == other.val_general
            and self.per_cell == other.per_cell
            and self.chosen_by_state == other.chosen_by_state
        )

    def __hash__(self) -> int:
        return hash(
            (
                self.baseline,
                self.val_good,
                self.val_general,
                self.per_cell,
                frozenset(self.chosen_by_state.items()),
            )
        )


def val_good(problem: DecisionProblem, partition: EvidencePartition) -> Fraction:
    """Classical value of learning the partition, for a conditionalizer.

    Probability-weighted maximum conditional expected utility across cells,
    minus the best expected utility under the prior.  Tie-insensitive, since
    only maxima enter.  A zero-probability cell is a hard error (conditioning
    on it is undefined), not a silently skipped term.
    """
    if partition.space != problem.space:
        raise ValidationError("partition is not over the problem's space")
    informed = Fraction(0)
    for cell in partition.cells:
        p_cell = probability(problem.prior, cell)
        informed += p_cell * max_expected_utility(condition(problem.prior, cell), problem)
    return informed - max_expected_utility(problem.prior, problem)


def sophisticated_choice(
    problem: DecisionProblem, policy: UpdatePolicy, state: str
) -> Action:
    """What the agent would pick if ``state`` obtained.

    The best action by the posterior the policy assigns at ``state``,
    resolved by the problem's tie policy.  Only meaningful at states that
    could actually obtain, so zero-prior states are rejected.
    """
    if policy.space != problem.space:
        raise ValidationError("policy is not over the problem's space")
    if problem.prior(state) == 0:
        raise ValidationError(
            f"state {state!r} has zero prior probability; no choice to foresee"
        )
    chosen, _ = best_action(policy.posterior(state), problem)
    return chosen


def _chosen_by_state(
    problem: DecisionProblem, policy: UpdatePolicy
) -> dict[str, Action]:
    return {
        state: sophisticated_choice(problem, policy, state)
        for state in problem.prior.support()
    }


def val_general(problem: DecisionProblem, policy: UpdatePolicy) -> Fraction:
    """Value of learning for an agent who may not trust their own update.

    The agent foresees, state by state, which action the policy would lead
    them to take, and scores each by what it actually pays in that state.
    The prior expectation of that realized payoff, minus the same
    no-learning baseline as :func:`val_good`.  Unlike the classical value,
    this can be negative.
    """
    chosen = _chosen_by_state(problem, policy)
    realized = sum(
        (
            problem.prior(s) * problem.outcomes.u(chosen[s].outcome_in(s))
            for s in problem.prior.support()
        ),
        Fraction(0),
    )
    return realized - max_expected_utility(problem.prior, problem)


def lemma1_decompose(
    problem: DecisionProblem, policy: UpdatePolicy, cell: Event
) -> tuple[LemmaOneRow, ...]:
    """Decompose one cell's realized value by which action gets chosen.

    Groups the cell's positive-prior states by the action the policy picks
    there and records each group's conditional choose-probability alongside
    the action's expected utility under the cell's conditioned prior, in
    choice-set order.  That factoring is exact only when choices carry no
    payoff-relevant information; if they do, raises
    :class:`IndependenceBrokenError` carrying the witnessing
    (cell, chosen action, probe action) triple.
    """
    witness = find_independence_violation(problem, policy, cell)
    if witness is not None:
        where, action, probe = witness
        raise IndependenceBrokenError(where, action.id, probe.id)
    p_cell = probability(problem.prior, cell)
    if p_cell == 0:
        raise ValidationError(
            f"cannot decompose zero-probability cell {cell.describe()}"
        )
    conditioned = condition(problem.prior, cell)
    groups: dict[str, Fraction] = {}
    for s in cell.sorted_members():
        mass = problem.prior(s)
        if mass == 0:
            continue
        picked, _ = best_action(policy.posterior(s), problem)
        groups[picked.id] = groups.get(picked.id, Fraction(0)) + mass
    return tuple(
        LemmaOneRow(
            cell=cell,
            action_id=action.id,
            choose_prob=groups[action.id] / p_cell,
            cond_eu=expected_utility(problem, action, conditioned),
        )
        for action in problem.choices
        if action.id in groups
    )


def cellwise_decomposition(
    problem: DecisionProblem, policy: UpdatePolicy
) -> tuple[PerCell, ...]:
    """Per-cell tables for every cell of the policy's partition, in order.

    Each entry pairs the cell's probability and best conditional expected
    utility with its :func:`lemma1_decompose` rows, so the one structure
    reconstructs both the classical and the generalized value.
    """
    out = []
    for cell in policy.partition.cells:
        rows = lemma1_decompose(problem, policy, cell)
        conditioned = condition(problem.prior, cell)
        out.append(
            PerCell(
                cell=cell,
                prob=probability(problem.prior, cell),
                max_cond_eu=max_expected_utility(conditioned, problem),
                rows=rows,
            )
        )
    return tuple(out)


def val_general_via_cells(
    problem: DecisionProblem, policy: UpdatePolicy
) -> Fraction:
    """Realized value computed through the cellwise decomposition.

    Agrees with :func:`val_general` whenever the decomposition's
    independence precondition holds; the two together are a cross-check,
    not redundancy.
    """
    cells = cellwise_decomposition(problem, policy)
    informed = sum((c.prob * c.realized_eu() for c in cells), Fraction(0))
    return informed - max_expected_utility(problem.prior, problem)


def evaluate(problem: DecisionProblem, policy: UpdatePolicy) -> VoiReport:
    """Full evaluation: both values, the per-cell table, and chosen actions.

    Computes the definitional quantities and the cellwise decomposition
    independently; :class:`VoiReport` refuses to construct unless they
    agree exactly.  Requires the decomposition's independence precondition,
    like :func:`lemma1_decompose`.
    """
    per_cell = cellwise_decomposition(problem, policy)
    chosen = _chosen_by_state(problem, policy)
    return VoiReport(
        baseline=max_expected_utility(problem.prior, problem),
        val_good=val_good(problem, policy.partition),
        val_general=val_general(problem, policy),
        per_cell=per_cell,
        chosen_by_state={s: a.id for s, a in chosen.items()},
    )
