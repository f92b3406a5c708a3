"""Evidence partitions and update policies.

An update policy says, for each state, what the agent's credence would
become upon learning which partition cell that state lies in.  The one
structural constraint is certainty: having learned a cell, the agent must
be certain of it.  Nothing forces the posterior to be the conditioned
prior — policies that deviate from conditionalization are the interesting
ones here — but every posterior must at least respect what was learned.

:func:`mixture_expand` builds the canonical self-doubt model: an agent who
thinks that with probability epsilon, independently of everything else,
they will respond to evidence with a fixed distorted posterior instead of
conditionalizing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .decision import (
    Action,
    ChoiceSet,
    DecisionProblem,
    best_action,
    expected_utility,
)
from .errors import (
    MissingPosteriorError,
    SpaceMismatchError,
    ValidationError,
)
from .prob import (
    Credence,
    Event,
    StateSpace,
    as_fraction,
    condition,
    is_partition,
    probability,
)

__all__ = [
    "EvidencePartition",
    "UpdatePolicy",
    "DeviationSpec",
    "CONDITIONALIZATION",
    "EXPLICIT",
    "conditionalization_policy",
    "mixture_expand",
    "is_immodest",
    "modesty_degree",
    "deviating_states",
    "find_independence_violation",
    "check_evidential_independence",
]

CONDITIONALIZATION = "conditionalization"
EXPLICIT = "explicit"


@dataclass(frozen=True)
class EvidencePartition:
    """An ordered partition of a state space into learnable events."""

    space: StateSpace
    cells: tuple[Event, ...]

    def __post_init__(self) -> None:
        if not is_partition(self.space, self.cells):
            raise ValidationError(
                "cells must be non-empty, pairwise disjoint, and cover the space"
            )
        lookup = {}
        for cell in self.cells:
            for state in cell.members:
                lookup[state] = cell
        object.__setattr__(self, "_cell_of", lookup)

    def __iter__(self):
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def cell_of(self, state: str) -> Event:
        try:
            return self._cell_of[state]
        except KeyError:
            raise ValidationError(f"unknown state {state!r}") from None


@dataclass(frozen=True)
class UpdatePolicy:
    """What the agent would believe in each state, after learning its cell.

    ``posteriors`` is total: every state of the space gets a posterior,
    and each posterior assigns probability exactly 1 to the state's own
    cell.  ``kind`` records whether the policy was built as literal
    conditionalization (so it can round-trip through files as the keyword
    rather than a spelled-out table).
    """

    partition: EvidencePartition
    posteriors: Mapping[str, Credence] = field(hash=False)
    kind: str = EXPLICIT

    def __post_init__(self) -> None:
        if self.kind not in (CONDITIONALIZATION, EXPLICIT):
            raise ValidationError(f"unknown policy kind {self.kind!r}")
        space = self.partition.space
        cleaned: dict[str, Credence] = {}
        for state, posterior in self.posteriors.items():
            if state not in space:
                raise ValidationError(f"posterior assigned to unknown state {state!r}")
            if posterior.space != space:
                raise SpaceMismatchError(
                    f"posterior for state {state!r} is over a different space"
                )
            cell = self.partition.cell_of(state)
            in_cell = probability(posterior, cell)
            if in_cell != 1:
                raise ValidationError(
                    f"posterior for state {state!r} must assign probability "
                    f"exactly 1 to its partition cell (got {in_cell})"
                )
            cleaned[state] = posterior
        missing = [s for s in space if s not in cleaned]
        if missing:
            raise MissingPosteriorError(f"no posterior for states: {missing}")
        object.__setattr__(self, "posteriors", cleaned)

    @property
    def space(self) -> StateSpace:
        return self.partition.space

    def posterior(self, state: str) -> Credence:
        try:
            return self.posteriors[state]
        except KeyError:
            raise MissingPosteriorError(f"no posterior for state {state!r}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UpdatePolicy):
            return NotImplemented
        return (
            self.partition == other.partition
            and self.posteriors == other.posteriors
            and self.kind == other.kind
        )

    def __hash__(self) -> int:
        return hash((self.partition, frozenset(self.posteriors.items()), self.kind))


@dataclass(frozen=True)
class DeviationSpec:
    """How an agent suspects they might misupdate.

    ``epsilon`` is the probability, independent of everything else, of
    responding to evidence with the distorted posterior instead of
    conditionalizing.  ``deviant_posteriors`` gives that distorted
    posterior for each affected cell, as a credence over the *base* space
    concentrated on the cell; cells left out are updated on correctly even
    when the deviant disposition fires.
    """

    epsilon: Fraction
    deviant_posteriors: Mapping[Event, Credence] = field(hash=False)

    def __post_init__(self) -> None:
        eps = as_fraction(self.epsilon)
        if not 0 <= eps <= 1:
            raise ValidationError(f"epsilon must lie in [0, 1], got {eps}")
        object.__setattr__(self, "epsilon", eps)
        cleaned = {}
        for cell, posterior in self.deviant_posteriors.items():
            if posterior.space != cell.space:
                raise SpaceMismatchError(
                    f"deviant posterior for cell {cell.describe()} is over a "
                    "different space"
                )
            in_cell = probability(posterior, cell)
            if in_cell != 1:
                raise ValidationError(
                    f"deviant posterior for cell {cell.describe()} must assign "
                    f"probability exactly 1 to the cell (got {in_cell})"
                )
            cleaned[cell] = posterior
        object.__setattr__(self, "deviant_posteriors", cleaned)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DeviationSpec):
            return NotImplemented
        return (
            self.epsilon == other.epsilon
            and self.deviant_posteriors == other.deviant_posteriors
        )

    def __hash__(self) -> int:
        return hash((self.epsilon, frozenset(self.deviant_posteriors.items())))


def conditionalization_policy(
    prior: Credence, partition: EvidencePartition
) -> UpdatePolicy:
    """The policy that conditions the prior on whichever cell obtains."""
    if prior.space != partition.space:
        raise SpaceMismatchError("prior and partition live on different spaces")
    posteriors = {}
    by_cell = {cell: condition(prior, cell) for cell in partition.cells}
    for state in partition.space:
        posteriors[state] = by_cell[partition.cell_of(state)]
    return UpdatePolicy(partition, posteriors, kind=CONDITIONALIZATION)


def _joined(state: str, label: str) -> str:
    return f"{state}·{label}"


def mixture_expand(
    problem: DecisionProblem,
    partition: EvidencePartition,
    spec: DeviationSpec,
    labels: tuple[str, str] = ("stay", "deviate"),
) -> tuple[DecisionProblem, UpdatePolicy]:
    """Fold self-doubt about updating into the state space itself.

    Each base state splits into two: one where the agent updates correctly
    and one where the deviant disposition fires.  The disposition is
    independent of the base state (probability ``spec.epsilon``), actions
    can't see it (they pay what their base action pays), and evidence
    can't reveal it (cells are lifted wholesale).  Deviant-side posteriors
    distort only the action-relevant part of the belief: the deviant agent
    still assigns the disposition its correct marginal, so choosing among
    the lifted actions is exactly choosing by the distorted base belief.

    Returns the expanded problem and the expanded update policy.
    """
    stay, deviate = labels
    if stay == deviate or not stay or not deviate:
        raise ValidationError(f"labels must be distinct and non-empty, got {labels!r}")
    if partition.space != problem.space:
        raise SpaceMismatchError("partition is not over the problem's space")
    for cell in spec.deviant_posteriors:
        if cell not in partition.cells:
            raise ValidationError(
                f"deviant posterior given for {cell.describe()}, which is not a "
                "cell of the partition"
            )

    eps = spec.epsilon
    base_states = tuple(problem.space)
    expanded_ids = []
    for s in base_states:
        expanded_ids.append(_joined(s, stay))
        expanded_ids.append(_joined(s, deviate))
    if len(set(expanded_ids)) != len(expanded_ids):
        raise ValidationError(
            "expanded state ids collide; rename base states or pass other labels"
        )
    space = StateSpace(tuple(expanded_ids))

    prior = Credence(
        space,
        {
            _joined(s, stay): problem.prior(s) * (1 - eps)
            for s in base_states
        }
        | {
            _joined(s, deviate): problem.prior(s) * eps
            for s in base_states
        },
    )

    actions = tuple(
        Action(
            a.id,
            {
                _joined(s, label): a.outcome_in(s)
                for s in base_states
                for label in (stay, deviate)
            },
        )
        for a in problem.choices
    )
    lifted_cells = tuple(
        Event(
            space,
            frozenset(
                _joined(s, label)
                for s in cell.members
                for label in (stay, deviate)
            ),
        )
        for cell in partition.cells
    )
    expanded_partition = EvidencePartition(space, lifted_cells)

    expanded = DecisionProblem(
        space,
        problem.outcomes,
        prior,
        ChoiceSet(actions),
        tie_policy=problem.tie_policy,
    )

    posteriors: dict[str, Credence] = {}
    for base_cell, lifted in zip(partition.cells, lifted_cells):
        correct = condition(prior, lifted)
        deviant_base = spec.deviant_posteriors.get(base_cell)
        if deviant_base is None:
            distorted = correct
        else:
            distorted = Credence(
                space,
                {
                    _joined(t, stay): deviant_base(t) * (1 - eps)
                    for t in base_cell.sorted_members()
                }
                | {
                    _joined(t, deviate): deviant_base(t) * eps
                    for t in base_cell.sorted_members()
                },
            )
        for s in base_cell.members:
            posteriors[_joined(s, stay)] = correct
            posteriors[_joined(s, deviate)] = distorted

    policy = UpdatePolicy(expanded_partition, posteriors)
    return expanded, policy


def deviating_states(policy: UpdatePolicy, prior: Credence) -> tuple[str, ...]:
    """Positive-prior states whose posterior differs from conditioning.

    Returned in state-space order.  Zero-prior states never count: what the
    agent would believe in a state that cannot obtain carries no weight.
    """
    if prior.space != policy.space:
        raise SpaceMismatchError("prior and policy live on different spaces")
    out = []
    conditioned: dict[Event, Credence] = {}
    for state in prior.support():
        cell = policy.partition.cell_of(state)
        if cell not in conditioned:
            conditioned[cell] = condition(prior, cell)
        if policy.posterior(state) != conditioned[cell]:
            out.append(state)
    return tuple(out)


def is_immodest(policy: UpdatePolicy, prior: Credence) -> bool:
    """Whether the policy conditionalizes at every state that could obtain."""
    return not deviating_states(policy, prior)


def modesty_degree(policy: UpdatePolicy, prior: Credence) -> Fraction:
    """Prior probability of ending up in a state where the policy deviates."""
    return sum(
        (prior(s) for s in deviating_states(policy, prior)), Fraction(0)
    )


def find_independence_violation(
    problem: DecisionProblem,
    policy: UpdatePolicy,
    cell: Event | None = None,
) -> tuple[Event, Action, Action] | None:
    """Search for evidence that choices leak payoff-relevant information.

    Within each positive-probability cell, group states by the action the
    policy leads the agent to choose there, and test whether further
    conditioning on that choice moves the conditional expected utility of
    any action in the problem.  Returns the first witnessing
    ``(cell, chosen action, probe action)`` triple — cells in declared
    order, actions in choice-set order — or ``None`` if choices reveal
    nothing that matters.  Pass ``cell`` to restrict the search to one cell.
    """
    if policy.space != problem.space:
        raise SpaceMismatchError("policy is not over the problem's space")
    if cell is not None and cell not in policy.partition.cells:
        raise ValidationError(
            f"{cell.describe()} is not a cell of the policy's partition"
        )
    targets = policy.partition.cells if cell is None else (cell,)
    for target in targets:
        if probability(problem.prior, target) == 0:
            continue
        p_cell = condition(problem.prior, target)
        groups: dict[str, list[str]] = {}
        for s in target.sorted_members():
            if problem.prior(s) == 0:
                continue
            chosen, _ = best_action(policy.posterior(s), problem)
            groups.setdefault(chosen.id, []).append(s)
        for action in problem.choices:
            members = groups.get(action.id)
            if not members:
                continue
            p_choose = condition(problem.prior, Event(problem.space, frozenset(members)))
            for probe in problem.choices:
                if expected_utility(problem, probe, p_choose) != expected_utility(
                    problem, probe, p_cell
                ):
                    return target, action, probe
    return None


def check_evidential_independence(
    problem: DecisionProblem, policy: UpdatePolicy
) -> bool:
    """Whether what the agent would choose is uninformative about payoffs.

    Holds exactly when, within every cell, conditioning further on "the
    policy picks action f here" leaves every action's conditional expected
    utility unchanged.
    """
    return find_independence_violation(problem, policy) is None
