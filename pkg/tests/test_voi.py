"""The two value functionals, the per-cell decomposition, and the report."""

import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from infovalue.decision import (
    Action,
    ChoiceSet,
    DecisionProblem,
    OutcomeSpace,
    is_relevant,
)
from infovalue.errors import IndependenceBrokenError, ValidationError
from infovalue.prob import Credence, Event, StateSpace, condition
from infovalue.updating import (
    EvidencePartition,
    UpdatePolicy,
    conditionalization_policy,
)
from infovalue.voi import (
    LemmaOneRow,
    PerCell,
    cellwise_decomposition,
    evaluate,
    lemma1_decompose,
    sophisticated_choice,
    val_general,
    val_general_via_cells,
    val_good,
)

from _oracles import brute_val_general, brute_val_good

SPACE = StateSpace(("a", "b", "c", "d"))
LEFT = Event(SPACE, frozenset({"a", "b"}))
RIGHT = Event(SPACE, frozenset({"c", "d"}))
PARTITION = EvidencePartition(SPACE, (LEFT, RIGHT))


def four_state_problem():
    """Left cell wants the bet, right cell wants to pass: val_good is 1/2."""
    prior = Credence(SPACE, {s: Fraction(1, 4) for s in SPACE})
    outcomes = OutcomeSpace(
        ("nil", "good", "bad"), {"nil": 0, "good": 1, "bad": -1}
    )
    actions = (
        Action("pass", {s: "nil" for s in SPACE}),
        Action("bet-left", {"a": "good", "b": "good", "c": "bad", "d": "bad"}),
        Action("bet-a", {"a": "good", "b": "bad", "c": "bad", "d": "bad"}),
    )
    return DecisionProblem(SPACE, outcomes, prior, ChoiceSet(actions))


def trap_problem():
    """Two states, one cell: a distorted posterior walks into a losing bet.

    Learning carries no classical value here (the single cell is the whole
    space) but an agent who would adopt the skewed posterior pays for it.
    """
    space = StateSpace(("g", "h"))
    whole = Event(space, frozenset({"g", "h"}))
    partition = EvidencePartition(space, (whole,))
    prior = Credence(space, {"g": Fraction(1, 2), "h": Fraction(1, 2)})
    outcomes = OutcomeSpace(("nil", "win", "lose"), {"nil": 0, "win": 1, "lose": -2})
    actions = (
        Action("safe", {"g": "nil", "h": "nil"}),
        Action("bet", {"g": "win", "h": "lose"}),
    )
    problem = DecisionProblem(space, outcomes, prior, ChoiceSet(actions))
    skewed = Credence(space, {"g": Fraction(9, 10), "h": Fraction(1, 10)})
    policy = UpdatePolicy(partition, {"g": skewed, "h": skewed})
    return problem, policy, whole


class TestValGood:
    def test_four_state_problem_by_hand(self):
        problem = four_state_problem()
        # left cell: bet-left pays 1; right cell: pass pays 0; the prior's
        # best is bet-left breaking even at 0, so the whole gain is 1/2
        assert val_good(problem, PARTITION) == Fraction(1, 2)

    def test_agrees_with_the_brute_oracle(self):
        problem = four_state_problem()
        assert val_good(problem, PARTITION) == brute_val_good(problem, PARTITION)

    def test_trivial_partition_is_worthless(self):
        problem = four_state_problem()
        whole = EvidencePartition(SPACE, (Event(SPACE, frozenset(SPACE.states)),))
        assert val_good(problem, whole) == 0

    def test_zero_when_irrelevant_positive_when_relevant(self):
        problem = four_state_problem()
        assert is_relevant(problem, PARTITION)
        assert val_good(problem, PARTITION) > 0

    def test_space_mismatch(self):
        problem, _, _ = trap_problem()
        with pytest.raises(ValidationError):
            val_good(problem, PARTITION)


class TestSophisticatedChoice:
    def test_follows_the_posterior_not_the_prior(self):
        problem, policy, _ = trap_problem()
        assert sophisticated_choice(problem, policy, "g").id == "bet"
        assert sophisticated_choice(problem, policy, "h").id == "bet"

    def test_zero_prior_states_are_rejected(self):
        space = StateSpace(("g", "h"))
        whole = Event(space, frozenset({"g", "h"}))
        prior = Credence(space, {"g": Fraction(1)})
        outcomes = OutcomeSpace(("nil",), {"nil": 0})
        problem = DecisionProblem(
            space,
            outcomes,
            prior,
            ChoiceSet((Action("safe", {"g": "nil", "h": "nil"}),)),
        )
        policy = conditionalization_policy(
            prior, EvidencePartition(space, (whole,))
        )
        with pytest.raises(ValidationError, match="zero prior"):
            sophisticated_choice(problem, policy, "h")

    def test_space_mismatch(self):
        problem = four_state_problem()
        _, policy, _ = trap_problem()
        with pytest.raises(ValidationError):
            sophisticated_choice(problem, policy, "a")


class TestValGeneral:
    def test_trap_policy_loses_half(self):
        problem, policy, _ = trap_problem()
        # the skewed posterior takes the bet everywhere: EU -1/2 against baseline 0
        assert val_general(problem, policy) == Fraction(-1, 2)
        assert val_good(problem, policy.partition) == 0

    def test_conditionalization_matches_val_good(self):
        problem = four_state_problem()
        policy = conditionalization_policy(problem.prior, PARTITION)
        assert val_general(problem, policy) == val_good(problem, PARTITION)

    def test_agrees_with_the_brute_oracle(self):
        problem, policy, _ = trap_problem()
        assert val_general(problem, policy) == brute_val_general(problem, policy)


class TestLemmaOneDecomposition:
    def test_conditionalization_gives_one_full_weight_row(self):
        problem = four_state_problem()
        policy = conditionalization_policy(problem.prior, PARTITION)
        rows = lemma1_decompose(problem, policy, LEFT)
        assert len(rows) == 1
        (row,) = rows
        assert row.action_id == "bet-left"
        assert row.choose_prob == 1
        assert row.cond_eu == 1

    def test_trap_cell_rows(self):
        problem, policy, whole = trap_problem()
        rows = lemma1_decompose(problem, policy, whole)
        assert [(r.action_id, r.choose_prob, r.cond_eu) for r in rows] == [
            ("bet", Fraction(1), Fraction(-1, 2))
        ]

    def test_zero_probability_cell_is_an_error(self):
        space = StateSpace(("g", "h"))
        cells = (
            Event(space, frozenset({"g"})),
            Event(space, frozenset({"h"})),
        )
        partition = EvidencePartition(space, cells)
        prior = Credence(space, {"g": Fraction(1)})
        outcomes = OutcomeSpace(("nil",), {"nil": 0})
        problem = DecisionProblem(
            space,
            outcomes,
            prior,
            ChoiceSet((Action("safe", {"g": "nil", "h": "nil"}),)),
        )
        point = {
            "g": Credence(space, {"g": Fraction(1)}),
            "h": Credence(space, {"h": Fraction(1)}),
        }
        policy = UpdatePolicy(partition, point)
        with pytest.raises(ValidationError, match="zero-probability cell"):
            lemma1_decompose(problem, policy, cells[1])

    def test_broken_independence_raises_with_witness(self):
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
        policy = UpdatePolicy(
            partition,
            {
                "x1": Credence(space, {"x1": Fraction(1)}),
                "x2": condition(prior, x_cell),
                "y": condition(prior, y_cell),
            },
        )
        with pytest.raises(IndependenceBrokenError) as exc:
            lemma1_decompose(problem, policy, x_cell)
        assert exc.value.cell == x_cell
        assert exc.value.chosen_action == "bet1"
        # the harmless cell still decomposes on its own
        assert lemma1_decompose(problem, policy, y_cell)[0].action_id == "keep"

    def test_cellwise_covers_the_partition_in_order(self):
        problem = four_state_problem()
        policy = conditionalization_policy(problem.prior, PARTITION)
        cells = cellwise_decomposition(problem, policy)
        assert [c.cell for c in cells] == [LEFT, RIGHT]
        assert [c.prob for c in cells] == [Fraction(1, 2), Fraction(1, 2)]
        assert [c.max_cond_eu for c in cells] == [Fraction(1), Fraction(0)]

    def test_via_cells_route_matches_the_definitional_route(self):
        problem, policy, _ = trap_problem()
        assert val_general_via_cells(problem, policy) == val_general(problem, policy)


class TestRowAndCellValidation:
    def test_choose_prob_bounds(self):
        with pytest.raises(ValidationError, match="choose_prob"):
            LemmaOneRow(LEFT, "pass", Fraction(0), Fraction(0))
        with pytest.raises(ValidationError, match="choose_prob"):
            LemmaOneRow(LEFT, "pass", Fraction(3, 2), Fraction(0))

    def test_cell_rows_must_sum_to_one(self):
        row = LemmaOneRow(LEFT, "pass", Fraction(1, 2), Fraction(0))
        with pytest.raises(ValidationError, match="sum"):
            PerCell(LEFT, Fraction(1, 2), Fraction(0), (row,))

    def test_rows_cannot_beat_the_recorded_maximum(self):
        row = LemmaOneRow(LEFT, "pass", Fraction(1), Fraction(2))
        with pytest.raises(ValidationError, match="beats"):
            PerCell(LEFT, Fraction(1, 2), Fraction(1), (row,))

    def test_rows_must_belong_to_the_cell(self):
        row = LemmaOneRow(RIGHT, "pass", Fraction(1), Fraction(0))
        with pytest.raises(ValidationError, match="different cell"):
            PerCell(LEFT, Fraction(1, 2), Fraction(0), (row,))

    def test_cell_probability_must_be_positive(self):
        row = LemmaOneRow(LEFT, "pass", Fraction(1), Fraction(0))
        with pytest.raises(ValidationError, match="positive"):
            PerCell(LEFT, Fraction(0), Fraction(0), (row,))

    def test_realized_eu_weights_rows(self):
        rows = (
            LemmaOneRow(LEFT, "pass", Fraction(3, 4), Fraction(0)),
            LemmaOneRow(LEFT, "bet-left", Fraction(1, 4), Fraction(1)),
        )
        cell = PerCell(LEFT, Fraction(1, 2), Fraction(1), rows)
        assert cell.realized_eu() == Fraction(1, 4)


class TestVoiReport:
    def test_evaluate_cross_checks_and_reports(self):
        problem, policy, whole = trap_problem()
        report = evaluate(problem, policy)
        assert report.baseline == 0
        assert report.val_good == 0
        assert report.val_general == Fraction(-1, 2)
        assert report.chosen_by_state == {"g": "bet", "h": "bet"}
        assert len(report.per_cell) == 1
        assert report.per_cell[0].cell == whole

    def test_tampered_headline_numbers_are_rejected(self):
        problem, policy, _ = trap_problem()
        report = evaluate(problem, policy)
        with pytest.raises(ValidationError, match="val_good"):
            dataclasses.replace(report, val_good=report.val_good + 1)
        with pytest.raises(ValidationError, match="val_general"):
            dataclasses.replace(report, val_general=Fraction(0))
        # a shifted baseline breaks the val_good reconstruction first
        with pytest.raises(ValidationError, match="val_good"):
            dataclasses.replace(report, baseline=report.baseline + 1)

    def test_cell_probabilities_must_cover_everything(self):
        problem = four_state_problem()
        policy = conditionalization_policy(problem.prior, PARTITION)
        report = evaluate(problem, policy)
        with pytest.raises(ValidationError, match="sum to 1"):
            dataclasses.replace(report, per_cell=report.per_cell[:1])


@given(
    st.lists(st.integers(min_value=1, max_value=9), min_size=4, max_size=4),
    st.lists(
        st.lists(st.integers(min_value=-6, max_value=6), min_size=4, max_size=4),
        min_size=1,
        max_size=4,
    ),
)
def test_conditionalization_never_beats_or_trails_val_good(weights, tables):
    """Theorem-1 shape on random instances: immodesty means the values agree."""
    total = sum(weights)
    prior = Credence(SPACE, {s: Fraction(w, total) for s, w in zip(SPACE, weights)})
    outcomes = sorted({v for row in tables for v in row})
    outcome_space = OutcomeSpace(
        tuple(f"o{v}" for v in outcomes), {f"o{v}": Fraction(v) for v in outcomes}
    )
    actions = tuple(
        Action(f"a{i}", {s: f"o{v}" for s, v in zip(SPACE, row)})
        for i, row in enumerate(tables)
    )
    problem = DecisionProblem(SPACE, outcome_space, prior, ChoiceSet(actions))
    policy = conditionalization_policy(prior, PARTITION)
    classical = val_good(problem, PARTITION)
    assert val_general(problem, policy) == classical
    assert classical == brute_val_good(problem, PARTITION)
    assert classical >= 0
