"""Built-in rule sets used throughout the test suite and the CLI.

Count matrices of the four registry fixtures are transcribed verbatim from
their sources; the geometric layouts (`s4-3d`, `s5-ex1-geo`) are this
repository's own concrete realizations, so facet areas and net geometry are
layout-specific while every count-level quantity is layout-independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .ruleset import RuleSet, parse_ruleset, substitution_matrix

__all__ = ["Fixture", "FIXTURES", "fixture_names", "get_fixture", "load_ruleset"]


@dataclass(frozen=True)
class Fixture:
    name: str
    filename: str
    matrix: tuple[tuple[int, ...], ...]
    dimension: int
    inflation: Fraction
    volumes: tuple[Fraction, ...]
    geometric: bool
    # calibrated economic-packing contraction threshold (see packing module);
    # None for matrix-only fixtures
    packing_epsilon: Fraction | None = None
    note: str = ""


FIXTURES: dict[str, Fixture] = {
    f.name: f
    for f in [
        Fixture(
            name="s4-3d",
            filename="s4-3d.rules",
            matrix=((6, 1), (4, 6)),
            dimension=3,
            inflation=Fraction(2),
            volumes=(Fraction(2), Fraction(1)),
            geometric=True,
            packing_epsilon=Fraction(1, 32),
            note=(
                "equality case |lambda_2|^3 = lambda_1^2; the shipped layout's "
                "eroded supertile family witnesses failure of the unit-cube "
                "discrepancy/perimeter bound, so its net is not a bounded "
                "displacement of the integer lattice even though the spectral "
                "test alone leaves the equality case open"
            ),
        ),
        Fixture(
            name="s5-ex1",
            filename="s5-ex1.rules",
            matrix=((1, 1, 1, 5), (1, 2, 5, 2), (2, 3, 4, 1), (0, 1, 1, 6)),
            dimension=2,
            inflation=Fraction(3),
            volumes=(Fraction(1), Fraction(2), Fraction(3), Fraction(4)),
            geometric=False,
        ),
        Fixture(
            name="s5-ex2",
            filename="s5-ex2.rules",
            matrix=((4, 3, 1, 3), (1, 4, 5, 5), (1, 1, 4, 1), (0, 1, 1, 5)),
            dimension=2,
            inflation=Fraction(3),
            volumes=(Fraction(1), Fraction(2), Fraction(3), Fraction(4)),
            geometric=False,
        ),
        Fixture(
            name="s5-ex3",
            filename="s5-ex3.rules",
            matrix=((4, 5, 1, 7), (1, 3, 4, 1), (1, 1, 6, 1), (0, 1, 0, 6)),
            dimension=2,
            inflation=Fraction(3),
            volumes=(Fraction(1), Fraction(2), Fraction(3), Fraction(4)),
            geometric=False,
        ),
        Fixture(
            name="s5-ex1-geo",
            filename="s5-ex1-geo.rules",
            matrix=((1, 1, 1, 5), (1, 2, 5, 2), (2, 3, 4, 1), (0, 1, 1, 6)),
            dimension=2,
            inflation=Fraction(3),
            volumes=(Fraction(1), Fraction(2), Fraction(3), Fraction(4)),
            geometric=True,
            packing_epsilon=Fraction(1, 16),
            note="translation-only geometric realization of the s5-ex1 count matrix",
        ),
    ]
}


def fixture_names() -> list[str]:
    return sorted(FIXTURES)


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}") from None


def rule_text(name: str) -> str:
    fx = get_fixture(name)
    return resources.files("subtiling").joinpath("rulefiles").joinpath(fx.filename).read_text()


def load_ruleset(name: str) -> RuleSet:
    """Parse a registry fixture and check it against its pinned parameters."""
    fx = get_fixture(name)
    rs = parse_ruleset(rule_text(name))
    A = substitution_matrix(rs)
    if tuple(tuple(row) for row in A) != fx.matrix:
        raise AssertionError(f"fixture {name}: rule file matrix deviates from registry")
    if rs.dimension != fx.dimension or rs.inflation != fx.inflation:
        raise AssertionError(f"fixture {name}: parameters deviate from registry")
    if rs.volumes() != fx.volumes:
        raise AssertionError(f"fixture {name}: tile volumes deviate from registry")
    if rs.geometric != fx.geometric:
        raise AssertionError(f"fixture {name}: mode deviates from registry")
    return rs
