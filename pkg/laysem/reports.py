"""Check reports and the law enumeration engine."""

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Optional

logger = logging.getLogger(__name__)

DEFAULT_SEED = 1729
DEFAULT_BUDGET = 2000
DEFAULT_EXHAUSTIVE_LIMIT = 10_000


@dataclass(frozen=True)
class Domain:
    """Where a law's arguments come from.

    A finite domain lists its elements in canonical order. An infinite one
    supplies a sampler; finite domains fall back to uniform choice when
    exhaustive enumeration would exceed the limit.
    """

    elements: Optional[tuple[Any, ...]] = None
    sampler: Optional[Callable[[random.Random], Any]] = None

    @property
    def is_finite(self) -> bool:
        return self.elements is not None

    def draw(self, rng: random.Random) -> Any:
        if self.sampler is not None:
            return self.sampler(rng)
        if self.elements:
            return rng.choice(self.elements)
        raise ValueError("cannot sample from an empty domain")


@dataclass
class LawResult:
    """Outcome of one law."""

    law: str
    passed: bool
    examined: int = 0
    witness: Optional[tuple[str, ...]] = None
    sampled: bool = False
    note: str = ""

    def render(self) -> str:
        parts = [f"CHECK {self.law} {'PASS' if self.passed else 'FAIL'}"]
        if self.witness is not None:
            parts.append(f"[witness: {', '.join(self.witness)}]")
        parts.append(f"[n={self.examined}]")
        if self.sampled:
            parts.append("[sampled]")
        if self.note:
            parts.append(f"[note: {self.note}]")
        return " ".join(parts)


@dataclass
class CheckReport:
    """Ordered collection of law results; the verdict is their conjunction."""

    title: str
    results: list[LawResult] = field(default_factory=list)
    scope_notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def sampled(self) -> bool:
        return any(result.sampled for result in self.results)

    def add(self, result: LawResult) -> LawResult:
        self.results.append(result)
        return result

    def extend(self, other: "CheckReport") -> "CheckReport":
        self.results.extend(other.results)
        self.scope_notes.extend(other.scope_notes)
        return self

    def failures(self) -> list[LawResult]:
        return [result for result in self.results if not result.passed]

    def get(self, law: str) -> LawResult:
        """Look up a result by law name.

        Raises:
            KeyError: If the report has no entry for the law
        """
        for result in self.results:
            if result.law == law:
                return result
        raise KeyError(law)

    def laws(self) -> list[str]:
        return [result.law for result in self.results]

    def render(self, sort: bool = True) -> str:
        results = sorted(self.results, key=lambda r: r.law) if sort else self.results
        return "\n".join(result.render() for result in results)

    def __str__(self) -> str:
        return f"{self.title}\n{self.render(sort=False)}"


class LawChecker:
    """Runs predicates over tuples drawn from a Domain.

    Enumeration is exhaustive in canonical order when the tuple space fits under
    ``exhaustive_limit``; otherwise ``budget`` tuples are sampled from a stream
    seeded per law so verdicts do not depend on the order laws are checked in.
    """

    def __init__(
        self,
        *,
        budget: int = DEFAULT_BUDGET,
        seed: int = DEFAULT_SEED,
        exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
        render: Callable[[Any], str] = str,
    ):
        """Initialize checker.

        Args:
            budget: Samples per law when not exhaustive
            seed: Base seed for sampling
            exhaustive_limit: Largest tuple count enumerated exhaustively
            render: Formatter for witness components
        """
        self.budget = budget
        self.seed = seed
        self.exhaustive_limit = exhaustive_limit
        self.render = render

    def rng(self, law: str) -> random.Random:
        return random.Random(f"{self.seed}:{law}")

    def is_exhaustive(self, domain: Domain, arity: int) -> bool:
        return domain.elements is not None and len(domain.elements) ** arity <= self.exhaustive_limit

    def tuples(self, law: str, domain: Domain, arity: int) -> tuple[Iterator[tuple], bool]:
        if self.is_exhaustive(domain, arity):
            assert domain.elements is not None
            return itertools.product(domain.elements, repeat=arity), False
        rng = self.rng(law)
        samples = (tuple(domain.draw(rng) for _ in range(arity)) for _ in range(self.budget))
        return samples, True

    def check(
        self,
        law: str,
        domain: Domain,
        arity: int,
        predicate: Callable[..., bool],
        note: str = "",
    ) -> LawResult:
        """Evaluate a law over its domain.

        Args:
            law: Report name of the law
            domain: Argument domain
            arity: Number of arguments per tuple
            predicate: Returns True when the law holds for the tuple
            note: Text attached to the report line

        Returns:
            LawResult with the first failing tuple as witness
        """
        tuples, sampled = self.tuples(law, domain, arity)
        examined = 0
        for args in tuples:
            examined += 1
            if not predicate(*args):
                logger.debug("law %s failed after %d tuples", law, examined)
                return LawResult(
                    law,
                    False,
                    examined,
                    witness=tuple(self.render(arg) for arg in args),
                    sampled=sampled,
                    note=note,
                )
        return LawResult(law, True, examined, sampled=sampled, note=note)

    def check_over(
        self,
        law: str,
        cases: Iterable[tuple],
        predicate: Callable[..., bool],
        note: str = "",
        sampled: bool = False,
    ) -> LawResult:
        """Evaluate a law over an explicit case list."""
        examined = 0
        for args in cases:
            examined += 1
            if not predicate(*args):
                return LawResult(
                    law,
                    False,
                    examined,
                    witness=tuple(self.render(arg) for arg in args),
                    sampled=sampled,
                    note=note,
                )
        return LawResult(law, True, examined, sampled=sampled, note=note)

    def fact(
        self,
        law: str,
        holds: bool,
        witness: Iterable[Any] = (),
        note: str = "",
    ) -> LawResult:
        """Record a single-instance law."""
        rendered = tuple(self.render(item) for item in witness)
        return LawResult(
            law,
            holds,
            1,
            witness=None if holds else (rendered or ("-",)),
            note=note,
        )
