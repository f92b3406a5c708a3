"""Constructive exploitation of self-distrusted updating.

If an agent's own prior expects their update policy to deviate from
conditioning somewhere that matters, there is a concrete pair of options —
a do-nothing act and one bet — such that the agent, by their own lights,
does strictly worse being offered the bet *after* learning than never
being offered the evidence at all.  This module finds where the policy
deviates, prices the bet, and packages the whole thing as a self-verifying
certificate.

The bet is priced at the midpoint: if the deviant posterior puts
probability ``q`` on an event the conditioned prior gives ``r``, stakes
``(win, loss) = (1 - m, m)`` with ``m = (q + r) / 2`` put the bet's
break-even threshold strictly between the two, so the deviant self takes a
bet the sober self correctly prices as a loss.

Not every disagreement supports the construction: a bet on an event that
*reveals who takes it* (for instance, a bet directly on the agent's own
deviant disposition) pays the deviant self for existing rather than
punishing it for misjudging the world, and the accounting behind the
demonstration breaks.  :func:`demonstrate_aversion` therefore walks
candidate events in a deterministic order and certifies the first one
whose synthesized bet leaves choices uninformative about payoffs; it
refuses, with a witness, only if no event in the deviation's cell
qualifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .decision import (
    FIRST_BY_ORDER,
    Action,
    ChoiceSet,
    DecisionProblem,
    OutcomeSpace,
    expected_utility,
    max_expected_utility,
)
from .errors import (
    IndependenceBrokenError,
    NoDeviationError,
    ValidationError,
)
from .prob import Credence, Event, condition, probability
from .updating import UpdatePolicy, find_independence_violation
from .voi import val_general

__all__ = [
    "Deviation",
    "AversionCertificate",
    "find_deviation",
    "construct_bet",
    "demonstrate_aversion",
    "SAFE_ID",
    "RISKY_ID",
]

SAFE_ID = "safe"
RISKY_ID = "risky"

_OUTCOME_ZERO = "zero"
_OUTCOME_WIN = "win"
_OUTCOME_LOSS = "loss"


@dataclass(frozen=True)
class Deviation:
    """A located disagreement between a policy and conditioning.

    In ``state`` (prior-possible, inside ``cell``), the policy's posterior
    puts probability ``q`` on ``event`` while the conditioned prior puts
    ``r`` on it, and the two differ.  That gap is what a bet can exploit.
    """

    cell: Event
    state: str
    event: Event
    q: Fraction
    r: Fraction

    def __post_init__(self) -> None:
        if self.state not in self.cell:
            raise ValidationError(
                f"state {self.state!r} is not in cell {self.cell.describe()}"
            )
        for name, value in (("q", self.q), ("r", self.r)):
            if not 0 <= value <= 1:
                raise ValidationError(f"{name} must lie in [0, 1], got {value}")
        if self.q == self.r:
            raise ValidationError(
                "q and r agree; a deviation must disagree about its event"
            )


def find_deviation(prior: Credence, policy: UpdatePolicy) -> Deviation:
    """Locate the smallest disagreement, deterministically.

    Cells in declared order; within a cell, prior-possible states in
    state-space order; for the first state whose posterior differs from
    the conditioned prior, candidate events are the space's singletons in
    state order, then their complements.  (Two distributions that differ
    at all differ on some singleton, so the complement pass is a
    completeness backstop.)  Raises :class:`NoDeviationError` if the
    policy conditions everywhere the prior deems possible.
    """
    if prior.space != policy.space:
        raise ValidationError("prior and policy live on different spaces")
    for cell in policy.partition.cells:
        if probability(prior, cell) == 0:
            continue
        conditioned = condition(prior, cell)
        for state in cell.sorted_members():
            if prior(state) == 0:
                continue
            posterior = policy.posterior(state)
            if posterior == conditioned:
                continue
            singletons = [Event(prior.space, frozenset({t})) for t in prior.space]
            for event in singletons + [e.complement() for e in singletons]:
                q = probability(posterior, event)
                r = probability(conditioned, event)
                if q != r:
                    return Deviation(cell=cell, state=state, event=event, q=q, r=r)
    raise NoDeviationError(
        "the policy conditionalizes at every prior-possible state; "
        "there is no disagreement to bet against"
    )


def construct_bet(q: Fraction, r: Fraction) -> tuple[Fraction, Fraction]:
    """Stakes ``(win, loss)`` that split the disagreement between q and r.

    The bet pays ``win`` if the disputed event obtains and costs ``loss``
    otherwise (when ``q > r``; for ``q < r`` the same stakes apply to the
    event's complement, which flips the inequality).  Stakes are
    normalized to ``win + loss = 1``, so the bet is favorable to a
    credence exactly when it puts more than ``loss`` on the event; the
    midpoint construction puts that threshold strictly between ``r`` and
    ``q``, and both stakes land strictly inside (0, 1).
    """
    for name, value in (("q", q), ("r", r)):
        if not 0 <= value <= 1:
            raise ValidationError(f"{name} must lie in [0, 1], got {value}")
    if q == r:
        raise ValidationError("q and r agree; no bet can split them")
    if q < r:
        return construct_bet(1 - q, 1 - r)
    m = (q + r) / 2
    return 1 - m, m


@dataclass(frozen=True)
class AversionCertificate:
    """A checked demonstration that learning has strictly negative value.

    Holds the located deviation, the priced bet, and the two-action
    problem: ``safe`` always pays 0; ``risky`` wins ``bet_win`` on
    ``bet_event`` inside the deviation's cell, loses ``bet_loss`` on the
    rest of the cell, and pays 0 outside it.  Construction re-derives
    everything it claims: the break-even threshold separates q from r,
    the bet is strictly attractive to the deviant posterior and strictly
    unattractive to the conditioned one, declining is prior-optimal at
    exactly 0, and ``val_general`` — recomputed from scratch, not trusted
    from the caller — is strictly negative.
    """

    deviation: Deviation
    bet_win: Fraction
    bet_loss: Fraction
    bet_event: Event
    problem: DecisionProblem
    policy: UpdatePolicy
    val_general: Fraction

    @property
    def choice_set(self) -> ChoiceSet:
        return self.problem.choices

    def __post_init__(self) -> None:
        if self.bet_win <= 0 or self.bet_loss <= 0:
            raise ValidationError("stakes must be positive on both sides")
        threshold = self.bet_loss / (self.bet_win + self.bet_loss)
        q, r = self.deviation.q, self.deviation.r
        if q > r:
            separated = r < threshold < q
        else:
            separated = (1 - r) < threshold < (1 - q)
        if not separated:
            raise ValidationError(
                f"break-even threshold {threshold} does not separate "
                f"q={q} from r={r} on the event bet on"
            )
        risky = self.problem.choices.by_id(RISKY_ID)
        deviant_eu = expected_utility(
            self.problem, risky, self.policy.posterior(self.deviation.state)
        )
        sober_eu = expected_utility(
            self.problem, risky, condition(self.problem.prior, self.deviation.cell)
        )
        if not deviant_eu > 0 > sober_eu:
            raise ValidationError(
                f"the bet must be strictly attractive to the deviant posterior "
                f"(EU {deviant_eu}) and strictly unattractive to the conditioned "
                f"one (EU {sober_eu})"
            )
        baseline = max_expected_utility(self.problem.prior, self.problem)
        if baseline != 0:
            raise ValidationError(
                f"declining must be prior-optimal at exactly 0, got {baseline}"
            )
        recomputed = val_general(self.problem, self.policy)
        if recomputed != self.val_general:
            raise ValidationError(
                f"certificate claims val_general={self.val_general}, "
                f"recomputation gives {recomputed}"
            )
        if self.val_general >= 0:
            raise ValidationError(
                f"certificate requires strictly negative value, got {self.val_general}"
            )


def _synthesize(
    problem: DecisionProblem,
    cell: Event,
    bet_event: Event,
    bet_win: Fraction,
    bet_loss: Fraction,
) -> DecisionProblem:
    """The problem with its choice set replaced by {safe, risky}.

    Safe is listed first, so every state indifferent between the two
    (everything outside the deviation's cell, where both pay 0) declines.
    """
    space = problem.space
    outcomes = OutcomeSpace(
        (_OUTCOME_ZERO, _OUTCOME_WIN, _OUTCOME_LOSS),
        {_OUTCOME_ZERO: Fraction(0), _OUTCOME_WIN: bet_win, _OUTCOME_LOSS: -bet_loss},
    )
    safe = Action(SAFE_ID, {s: _OUTCOME_ZERO for s in space})

    def risky_outcome(state: str) -> str:
        if state not in cell:
            return _OUTCOME_ZERO
        return _OUTCOME_WIN if state in bet_event else _OUTCOME_LOSS

    risky = Action(RISKY_ID, {s: risky_outcome(s) for s in space})
    return DecisionProblem(
        space,
        outcomes,
        problem.prior,
        ChoiceSet((safe, risky)),
        tie_policy=FIRST_BY_ORDER,
    )


def _choices_stay_uninformative(
    prior: Credence,
    policy: UpdatePolicy,
    cell: Event,
    bet_event: Event,
    threshold: Fraction,
) -> bool:
    """Fast within-cell equivalent of the full independence check.

    Outside the deviation's cell both acts pay 0, every state declines by
    ties-to-safe, and conditioning on "everyone declined" is a no-op — so
    only the deviation's cell can break independence.  Within it, a state
    takes the bet iff its posterior puts more than ``threshold`` on the
    bet event, and independence holds iff the true conditional probability
    of the bet event is the same among takers, among decliners, and
    overall.
    """
    cell_mass = Fraction(0)
    cell_bet_mass = Fraction(0)
    group_mass = {True: Fraction(0), False: Fraction(0)}
    group_bet_mass = {True: Fraction(0), False: Fraction(0)}
    for state in cell.sorted_members():
        mass = prior(state)
        if mass == 0:
            continue
        takes = probability(policy.posterior(state), bet_event) > threshold
        cell_mass += mass
        group_mass[takes] += mass
        if state in bet_event:
            cell_bet_mass += mass
            group_bet_mass[takes] += mass
    overall = cell_bet_mass / cell_mass
    for takes in (True, False):
        if group_mass[takes] and group_bet_mass[takes] / group_mass[takes] != overall:
            return False
    return True


def demonstrate_aversion(
    problem: DecisionProblem, policy: UpdatePolicy
) -> AversionCertificate:
    """Replace the problem's options with a bet that makes learning hurt.

    Walks the policy's disagreements with conditioning in deterministic
    order — cells as declared, deviating states in state order, candidate
    events by size then state order within the cell — and synthesizes the
    midpoint bet for each until one leaves choices uninformative about
    payoffs.  That first surviving candidate becomes the certificate, with
    its strictly negative realized value recomputed definitionally.

    Raises :class:`NoDeviationError` if the policy conditionalizes at
    every prior-possible state, and :class:`IndependenceBrokenError` (with
    the witnessing cell/chosen/probe triple from the first candidate) if
    every exploitable disagreement is of the self-revealing kind the
    demonstration's accounting excludes.
    """
    prior = problem.prior
    if prior.space != policy.space:
        raise ValidationError("policy is not over the problem's space")
    first_rejected: tuple[Event, Event, Fraction, Fraction] | None = None
    found_deviating_state = False
    for cell in policy.partition.cells:
        if probability(prior, cell) == 0:
            continue
        conditioned = condition(prior, cell)
        members = cell.sorted_members()
        for state in members:
            if prior(state) == 0:
                continue
            posterior = policy.posterior(state)
            if posterior == conditioned:
                continue
            found_deviating_state = True
            for size in range(1, len(members)):
                for combo in combinations(members, size):
                    event = Event(prior.space, frozenset(combo))
                    q = probability(posterior, event)
                    r = probability(conditioned, event)
                    if q == r:
                        continue
                    bet_win, bet_loss = construct_bet(q, r)
                    bet_event = event if q > r else event.complement()
                    if not _choices_stay_uninformative(
                        prior, policy, cell, bet_event, bet_loss
                    ):
                        if first_rejected is None:
                            first_rejected = (cell, bet_event, bet_win, bet_loss)
                        continue
                    synthesized = _synthesize(problem, cell, bet_event, bet_win, bet_loss)
                    witness = find_independence_violation(synthesized, policy)
                    if witness is not None:  # pragma: no cover - fast check mirrors this
                        if first_rejected is None:
                            first_rejected = (cell, bet_event, bet_win, bet_loss)
                        continue
                    return AversionCertificate(
                        deviation=Deviation(
                            cell=cell, state=state, event=event, q=q, r=r
                        ),
                        bet_win=bet_win,
                        bet_loss=bet_loss,
                        bet_event=bet_event,
                        problem=synthesized,
                        policy=policy,
                        val_general=val_general(synthesized, policy),
                    )
    if not found_deviating_state:
        raise NoDeviationError(
            "the policy conditionalizes at every prior-possible state; "
            "there is no disagreement to bet against"
        )
    cell, bet_event, bet_win, bet_loss = first_rejected
    synthesized = _synthesize(problem, cell, bet_event, bet_win, bet_loss)
    witness = find_independence_violation(synthesized, policy)
    w_cell, w_action, w_probe = witness
    raise IndependenceBrokenError(w_cell, w_action.id, w_probe.id)
