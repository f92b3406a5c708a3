"""Partitions, update policies, mixtures, modesty, and independence checks."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from infovalue.decision import (
    ERROR_ON_TIE,
    Action,
    ChoiceSet,
    DecisionProblem,
    OutcomeSpace,
)
from infovalue.errors import (
    MissingPosteriorError,
    SpaceMismatchError,
    ValidationError,
)
from infovalue.prob import Credence, Event, StateSpace, condition, probability
from infovalue.updating import (
    CONDITIONALIZATION,
    DeviationSpec,
    EvidencePartition,
    UpdatePolicy,
    check_evidential_independence,
    conditionalization_policy,
    deviating_states,
    find_independence_violation,
    is_immodest,
    mixture_expand,
    modesty_degree,
)

BASE = StateSpace(("u1", "u2", "v1", "v2"))
U = Event(BASE, frozenset({"u1", "u2"}))
V = Event(BASE, frozenset({"v1", "v2"}))
PARTITION = EvidencePartition(BASE, (U, V))

PRIOR = Credence(
    BASE,
    {
        "u1": Fraction(1, 2),
        "u2": Fraction(1, 6),
        "v1": Fraction(1, 6),
        "v2": Fraction(1, 6),
    },
)

OUTCOMES = OutcomeSpace(("zero", "one"), {"zero": 0, "one": 1})


def base_problem():
    actions = (
        Action("never", {s: "zero" for s in BASE}),
        Action("u-bet", {"u1": "one", "u2": "one", "v1": "zero", "v2": "zero"}),
    )
    return DecisionProblem(BASE, OUTCOMES, PRIOR, ChoiceSet(actions))


class TestEvidencePartition:
    def test_cell_lookup(self):
        assert PARTITION.cell_of("u2") is U
        assert PARTITION.cell_of("v1") is V
        assert len(PARTITION) == 2
        assert tuple(PARTITION) == (U, V)

    def test_unknown_state(self):
        with pytest.raises(ValidationError, match="unknown state"):
            PARTITION.cell_of("w")

    def test_rejects_non_partitions(self):
        with pytest.raises(ValidationError, match="disjoint"):
            EvidencePartition(BASE, (U, Event(BASE, frozenset({"u2", "v1", "v2"}))))
        with pytest.raises(ValidationError):
            EvidencePartition(BASE, (U,))  # does not cover


class TestUpdatePolicy:
    def test_certainty_constraint_is_enforced(self):
        leaky = Credence(BASE, {"u1": Fraction(1, 2), "v1": Fraction(1, 2)})
        posteriors = {s: condition(PRIOR, PARTITION.cell_of(s)) for s in BASE}
        posteriors["u1"] = leaky
        with pytest.raises(
            ValidationError, match="probability exactly 1 to its partition cell"
        ):
            UpdatePolicy(PARTITION, posteriors)

    def test_must_cover_every_state(self):
        posteriors = {s: condition(PRIOR, PARTITION.cell_of(s)) for s in ("u1", "u2")}
        with pytest.raises(MissingPosteriorError, match="v1"):
            UpdatePolicy(PARTITION, posteriors)

    def test_rejects_foreign_posteriors(self):
        other = StateSpace(("x",))
        posteriors = {s: condition(PRIOR, PARTITION.cell_of(s)) for s in BASE}
        posteriors["u1"] = Credence(other, {"x": Fraction(1)})
        with pytest.raises(SpaceMismatchError):
            UpdatePolicy(PARTITION, posteriors)

    def test_rejects_unknown_kind(self):
        posteriors = {s: condition(PRIOR, PARTITION.cell_of(s)) for s in BASE}
        with pytest.raises(ValidationError, match="kind"):
            UpdatePolicy(PARTITION, posteriors, kind="vibes")

    def test_posterior_lookup(self):
        policy = conditionalization_policy(PRIOR, PARTITION)
        assert policy.posterior("u1") == condition(PRIOR, U)
        with pytest.raises(MissingPosteriorError):
            policy.posterior("missing")


class TestConditionalizationPolicy:
    def test_every_state_gets_its_cells_conditioned_prior(self):
        policy = conditionalization_policy(PRIOR, PARTITION)
        for s in BASE:
            assert policy.posterior(s) == condition(PRIOR, PARTITION.cell_of(s))
        assert policy.kind == CONDITIONALIZATION

    def test_is_immodest_with_degree_zero(self):
        policy = conditionalization_policy(PRIOR, PARTITION)
        assert is_immodest(policy, PRIOR)
        assert modesty_degree(policy, PRIOR) == 0
        assert deviating_states(policy, PRIOR) == ()

    def test_zero_probability_cell_is_an_error(self):
        thin = Credence(BASE, {"u1": Fraction(1, 2), "u2": Fraction(1, 2)})
        with pytest.raises(Exception, match="zero-probability"):
            conditionalization_policy(thin, PARTITION)

    def test_space_mismatch(self):
        other = Credence(StateSpace(("x",)), {"x": Fraction(1)})
        with pytest.raises(SpaceMismatchError):
            conditionalization_policy(other, PARTITION)


class TestDeviationSpec:
    def test_epsilon_bounds(self):
        with pytest.raises(ValidationError, match="epsilon"):
            DeviationSpec(Fraction(-1, 10), {})
        with pytest.raises(ValidationError, match="epsilon"):
            DeviationSpec(Fraction(11, 10), {})
        with pytest.raises(ValidationError, match="float"):
            DeviationSpec(0.1, {})

    def test_deviant_posterior_must_respect_the_cell(self):
        outside = Credence(BASE, {"u1": Fraction(1, 2), "v1": Fraction(1, 2)})
        with pytest.raises(ValidationError, match="exactly 1 to the cell"):
            DeviationSpec(Fraction(1, 4), {U: outside})


def u_deviant():
    return Credence(BASE, {"u1": Fraction(1, 5), "u2": Fraction(4, 5)})


def expanded_fixture(epsilon=Fraction(1, 4)):
    spec = DeviationSpec(epsilon, {U: u_deviant()})
    return mixture_expand(base_problem(), PARTITION, spec)


class TestMixtureExpand:
    """The disposition-product construction, checked field by field."""

    def test_state_order_interleaves_dispositions(self):
        expanded, _ = expanded_fixture()
        assert tuple(expanded.space) == (
            "u1·stay",
            "u1·deviate",
            "u2·stay",
            "u2·deviate",
            "v1·stay",
            "v1·deviate",
            "v2·stay",
            "v2·deviate",
        )

    def test_prior_is_the_independent_product(self):
        expanded, _ = expanded_fixture()
        assert expanded.prior("u1·stay") == Fraction(3, 8)
        assert expanded.prior("u1·deviate") == Fraction(1, 8)
        assert expanded.prior("u2·deviate") == Fraction(1, 24)
        # disposition marginal is exactly epsilon
        deviate_mass = sum(
            expanded.prior(s) for s in expanded.space if s.endswith("·deviate")
        )
        assert deviate_mass == Fraction(1, 4)

    def test_actions_ignore_the_disposition(self):
        expanded, _ = expanded_fixture()
        u_bet = expanded.choices.by_id("u-bet")
        assert u_bet.outcome_in("u1·stay") == "one"
        assert u_bet.outcome_in("u1·deviate") == "one"
        assert u_bet.outcome_in("v2·deviate") == "zero"

    def test_cells_are_lifted_wholesale(self):
        _, policy = expanded_fixture()
        first = policy.partition.cells[0]
        assert first.members == {"u1·stay", "u1·deviate", "u2·stay", "u2·deviate"}

    def test_stay_states_condition_on_the_lifted_cell(self):
        expanded, policy = expanded_fixture()
        lifted_u = policy.partition.cells[0]
        assert policy.posterior("u1·stay") == condition(expanded.prior, lifted_u)
        assert policy.posterior("u2·stay") == policy.posterior("u1·stay")

    def test_deviate_states_get_the_distorted_posterior(self):
        _, policy = expanded_fixture()
        distorted = policy.posterior("u1·deviate")
        # base marginal follows the deviant credence, disposition marginal stays 1/4
        assert distorted("u1·stay") == Fraction(3, 20)
        assert distorted("u1·deviate") == Fraction(1, 20)
        assert distorted("u2·stay") == Fraction(3, 5)
        assert distorted("u2·deviate") == Fraction(1, 5)

    def test_uncovered_cells_update_correctly_even_when_deviating(self):
        expanded, policy = expanded_fixture()
        lifted_v = policy.partition.cells[1]
        assert policy.posterior("v1·deviate") == condition(expanded.prior, lifted_v)

    def test_every_posterior_is_certain_of_its_cell(self):
        _, policy = expanded_fixture()
        for state in policy.space:
            cell = policy.partition.cell_of(state)
            assert probability(policy.posterior(state), cell) == 1

    def test_deviating_states_and_modesty_degree(self):
        expanded, policy = expanded_fixture()
        assert deviating_states(policy, expanded.prior) == (
            "u1·deviate",
            "u2·deviate",
        )
        # deviant disposition has mass 1/4 but only the U cell is distorted
        assert modesty_degree(policy, expanded.prior) == Fraction(1, 4) * Fraction(2, 3)
        assert not is_immodest(policy, expanded.prior)

    def test_epsilon_zero_collapses_to_conditionalization(self):
        expanded, policy = expanded_fixture(epsilon=Fraction(0))
        assert is_immodest(policy, expanded.prior)
        assert modesty_degree(policy, expanded.prior) == 0

    def test_tie_policy_is_inherited(self):
        strict = DecisionProblem(
            BASE,
            OUTCOMES,
            PRIOR,
            base_problem().choices,
            tie_policy=ERROR_ON_TIE,
        )
        expanded, _ = mixture_expand(
            strict, PARTITION, DeviationSpec(Fraction(1, 4), {U: u_deviant()})
        )
        assert expanded.tie_policy == ERROR_ON_TIE

    def test_custom_labels(self):
        spec = DeviationSpec(Fraction(1, 4), {U: u_deviant()})
        expanded, _ = mixture_expand(
            base_problem(), PARTITION, spec, labels=("ok", "oops")
        )
        assert "u1·ok" in expanded.space and "u1·oops" in expanded.space

    def test_equal_or_empty_labels_rejected(self):
        spec = DeviationSpec(Fraction(1, 4), {U: u_deviant()})
        with pytest.raises(ValidationError, match="labels"):
            mixture_expand(base_problem(), PARTITION, spec, labels=("x", "x"))
        with pytest.raises(ValidationError, match="labels"):
            mixture_expand(base_problem(), PARTITION, spec, labels=("", "y"))

    def test_colliding_expanded_ids_rejected(self):
        space = StateSpace(("a", "a·y"))
        prior = Credence(space, {"a": Fraction(1, 2), "a·y": Fraction(1, 2)})
        cell = Event(space, frozenset({"a", "a·y"}))
        partition = EvidencePartition(space, (cell,))
        actions = (Action("idle", {"a": "zero", "a·y": "zero"}),)
        problem = DecisionProblem(space, OUTCOMES, prior, ChoiceSet(actions))
        deviant = Credence(space, {"a": Fraction(1, 4), "a·y": Fraction(3, 4)})
        spec = DeviationSpec(Fraction(1, 2), {cell: deviant})
        with pytest.raises(ValidationError, match="collide"):
            mixture_expand(problem, partition, spec, labels=("x", "y·x"))

    def test_deviant_for_a_non_cell_rejected(self):
        stray = Event(BASE, frozenset({"u1", "v1"}))
        bad = DeviationSpec(
            Fraction(1, 4),
            {stray: Credence(BASE, {"u1": Fraction(1, 2), "v1": Fraction(1, 2)})},
        )
        with pytest.raises(ValidationError, match="not a\\s+cell"):
            mixture_expand(base_problem(), PARTITION, bad)

    @given(
        st.lists(st.integers(min_value=1, max_value=9), min_size=4, max_size=4),
        st.integers(min_value=0, max_value=16),
    )
    def test_base_marginals_are_preserved(self, weights, sixteenths):
        total = sum(weights)
        prior = Credence(
            BASE, {s: Fraction(w, total) for s, w in zip(BASE, weights)}
        )
        problem = DecisionProblem(BASE, OUTCOMES, prior, base_problem().choices)
        spec = DeviationSpec(Fraction(sixteenths, 16), {U: u_deviant()})
        expanded, _ = mixture_expand(problem, PARTITION, spec)
        for s in BASE:
            lifted = expanded.prior(f"{s}·stay") + expanded.prior(f"{s}·deviate")
            assert lifted == prior(s)


class TestEvidentialIndependence:
    def test_conditionalization_never_violates(self):
        policy = conditionalization_policy(PRIOR, PARTITION)
        assert check_evidential_independence(base_problem(), policy)

    def test_mixture_with_blind_actions_never_violates(self):
        expanded, policy = expanded_fixture()
        assert find_independence_violation(expanded, policy) is None

    def clairvoyant_setup(self):
        """A policy that deviates exactly in the state a bet pays off in."""
        space = StateSpace(("x1", "x2", "y"))
        prior = Credence(
            space,
            {"x1": Fraction(1, 4), "x2": Fraction(1, 4), "y": Fraction(1, 2)},
        )
        x_cell = Event(space, frozenset({"x1", "x2"}))
        y_cell = Event(space, frozenset({"y"}))
        partition = EvidencePartition(space, (x_cell, y_cell))
        outcomes = OutcomeSpace(
            ("zero", "one", "steady"),
            {"zero": 0, "one": 1, "steady": Fraction(5, 8)},
        )
        actions = (
            Action("bet1", {"x1": "one", "x2": "zero", "y": "zero"}),
            Action("keep", {s: "steady" for s in space}),
        )
        problem = DecisionProblem(space, outcomes, prior, ChoiceSet(actions))
        posteriors = {
            "x1": Credence(space, {"x1": Fraction(1)}),  # foresees the payoff
            "x2": condition(prior, x_cell),
            "y": condition(prior, y_cell),
        }
        policy = UpdatePolicy(partition, posteriors)
        return problem, policy, x_cell

    def test_clairvoyant_policy_is_caught_with_a_witness(self):
        problem, policy, x_cell = self.clairvoyant_setup()
        assert not check_evidential_independence(problem, policy)
        witness = find_independence_violation(problem, policy)
        assert witness is not None
        cell, chosen, probe = witness
        assert cell == x_cell
        # choosing bet1 happens exactly on {x1}, where bet1's payoff differs
        assert chosen.id == "bet1"
        assert probe.id == "bet1"

    def test_single_cell_restriction(self):
        problem, policy, x_cell = self.clairvoyant_setup()
        y_cell = policy.partition.cells[1]
        assert find_independence_violation(problem, policy, y_cell) is None
        assert find_independence_violation(problem, policy, x_cell) is not None
        stray = Event(problem.space, frozenset({"x1", "y"}))
        with pytest.raises(ValidationError, match="not a cell"):
            find_independence_violation(problem, policy, stray)
