"""Finite probability spaces with exact rational arithmetic.

States are opaque string ids.  All masses are :class:`fractions.Fraction`;
floats are rejected at the boundary so that every downstream comparison
(equality of two expected utilities, sign of a value difference) is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import (
    SpaceMismatchError,
    ValidationError,
    ZeroProbabilityError,
)

__all__ = [
    "StateSpace",
    "Event",
    "Credence",
    "StateFunction",
    "as_fraction",
    "probability",
    "condition",
    "expectation",
    "is_partition",
]


def as_fraction(value) -> Fraction:
    """Coerce ``value`` to an exact :class:`Fraction`.

    Accepts ints, Fractions, and strings like ``"3/4"``.  Floats are
    rejected outright: a float that *looks* like 0.1 is not 1/10, and
    exactness is the whole point of this package.
    """
    if isinstance(value, bool):
        raise ValidationError(f"expected an exact rational, got bool {value!r}")
    if isinstance(value, float):
        raise ValidationError(
            f"expected an exact rational, got float {value!r}; "
            "pass a Fraction, an int, or a string like '1/10'"
        )
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
    raise ValidationError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class StateSpace:
    """An ordered, duplicate-free tuple of state ids.

    Order is load-bearing: deterministic tie-breaking and serialization
    both follow it.
    """

    states: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.states:
            raise ValidationError("a state space needs at least one state")
        seen = set()
        for s in self.states:
            if not isinstance(s, str) or not s:
                raise ValidationError(f"state ids must be non-empty strings, got {s!r}")
            if s in seen:
                raise ValidationError(f"duplicate state id: {s!r}")
            seen.add(s)

    def __iter__(self) -> Iterator[str]:
        return iter(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __contains__(self, state: object) -> bool:
        return state in self.states

    def index(self, state: str) -> int:
        return self.states.index(state)


@dataclass(frozen=True)
class Event:
    """A subset of a state space's states."""

    space: StateSpace
    members: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        stray = self.members - set(self.space.states)
        if stray:
            raise ValidationError(
                f"event members not in the state space: {sorted(stray)}"
            )

    def __contains__(self, state: object) -> bool:
        return state in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> tuple[str, ...]:
        """Members in state-space order."""
        return tuple(s for s in self.space if s in self.members)

    def complement(self) -> Event:
        return Event(self.space, frozenset(self.space.states) - self.members)

    def intersection(self, other: Event) -> Event:
        if other.space != self.space:
            raise SpaceMismatchError("cannot intersect events over different spaces")
        return Event(self.space, self.members & other.members)

    def describe(self) -> str:
        return "{" + ", ".join(self.sorted_members()) + "}"


@dataclass(frozen=True)
class Credence:
    """An exact probability distribution over a state space.

    States absent from ``mass`` get probability 0; zero entries passed in
    are dropped so that equal distributions compare (and hash) equal.
    """

    space: StateSpace
    mass: Mapping[str, Fraction] = field(hash=False)

    def __post_init__(self) -> None:
        cleaned: dict[str, Fraction] = {}
        total = Fraction(0)
        for state, raw in self.mass.items():
            if state not in self.space:
                raise ValidationError(f"mass assigned to unknown state {state!r}")
            value = as_fraction(raw)
            if value < 0:
                raise ValidationError(f"negative mass {value} on state {state!r}")
            total += value
            if value:
                cleaned[state] = value
        if total != 1:
            raise ValidationError(f"masses must sum to exactly 1, got {total}")
        object.__setattr__(self, "mass", cleaned)

    def __call__(self, state: str) -> Fraction:
        if state not in self.space:
            raise ValidationError(f"unknown state {state!r}")
        return self.mass.get(state, Fraction(0))

    def support(self) -> tuple[str, ...]:
        """Positive-probability states, in state-space order."""
        return tuple(s for s in self.space if s in self.mass)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Credence):
            return NotImplemented
        return self.space == other.space and self.mass == other.mass

    def __hash__(self) -> int:
        return hash((self.space, frozenset(self.mass.items())))


@dataclass(frozen=True)
class StateFunction:
    """A total map from states to exact rational values (a random variable)."""

    space: StateSpace
    values: Mapping[str, Fraction] = field(hash=False)

    def __post_init__(self) -> None:
        cleaned = {}
        for state, raw in self.values.items():
            if state not in self.space:
                raise ValidationError(f"value assigned to unknown state {state!r}")
            cleaned[state] = as_fraction(raw)
        missing = [s for s in self.space if s not in cleaned]
        if missing:
            raise ValidationError(f"no value for states: {missing}")
        object.__setattr__(self, "values", cleaned)

    def __call__(self, state: str) -> Fraction:
        try:
            return self.values[state]
        except KeyError:
            raise ValidationError(f"unknown state {state!r}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateFunction):
            return NotImplemented
        return self.space == other.space and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.space, frozenset(self.values.items())))


def probability(credence: Credence, event: Event) -> Fraction:
    """Total mass the credence assigns to the event."""
    if event.space != credence.space:
        raise SpaceMismatchError("event and credence live on different spaces")
    return sum((credence(s) for s in event.members), Fraction(0))


def condition(credence: Credence, event: Event) -> Credence:
    """Bayesian conditioning: restrict to the event and renormalize.

    Raises :class:`ZeroProbabilityError` if the event has probability 0 —
    there is no canonical answer there and pretending otherwise hides bugs.
    """
    p_event = probability(credence, event)
    if p_event == 0:
        raise ZeroProbabilityError(
            f"cannot condition on zero-probability event {event.describe()}"
        )
    return Credence(
        credence.space,
        {s: credence(s) / p_event for s in event.members if credence(s)},
    )


def expectation(credence: Credence, f: StateFunction) -> Fraction:
    """Expected value of ``f`` under ``credence``, summed over the support."""
    if f.space != credence.space:
        raise SpaceMismatchError("function and credence live on different spaces")
    return sum((credence(s) * f(s) for s in credence.support()), Fraction(0))


def is_partition(space: StateSpace, cells: Iterable[Event]) -> bool:
    """True iff ``cells`` are pairwise-disjoint, non-empty, and cover ``space``."""
    seen: set[str] = set()
    for cell in cells:
        if cell.space != space:
            return False
        if not cell.members:
            return False
        if cell.members & seen:
            return False
        seen |= cell.members
    return seen == set(space.states)
