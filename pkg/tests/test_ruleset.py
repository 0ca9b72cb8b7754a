from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subtiling.fixtures import FIXTURES, get_fixture, load_ruleset, rule_text
from subtiling.ruleset import (
    ChildPlacement,
    RuleFileSyntaxError,
    RuleSet,
    RuleValidationError,
    parse_ruleset,
    primitivity_check,
    serialize_ruleset,
    substitution_matrix,
    volume_conservation_holds,
)

MINI_3D = """
dimension = 3
inflation = 2
tile T1 extent 1 1 2
tile T2 extent 1 1 1
rule T1:
  child T1 at 0 0 0
  child T1 at 0 0 2
  child T1 at 1 0 0
  child T1 at 1 0 2
  child T1 at 0 1 0
  child T1 at 0 1 2
  child T2 at 1 1 0
  child T2 at 1 1 1
  child T2 at 1 1 2
  child T2 at 1 1 3
rule T2:
  child T1 at 0 0 0
  child T2 at 1 0 0
  child T2 at 0 1 0
  child T2 at 1 1 0
  child T2 at 1 0 1
  child T2 at 0 1 1
  child T2 at 1 1 1
"""


def test_parse_3d_rule_file():
    rs = parse_ruleset(MINI_3D)
    assert rs.dimension == 3 and rs.n == 2 and rs.mode == "geometric"
    assert substitution_matrix(rs) == [[6, 1], [4, 6]]


def test_parse_matrix_only_fixture():
    rs = load_ruleset("s5-ex1")
    assert rs.mode == "matrix"
    assert rs.dimension == 2 and rs.inflation == 3
    assert substitution_matrix(rs) == [[1, 1, 1, 5], [1, 2, 5, 2], [2, 3, 4, 1], [0, 1, 1, 6]]


def test_volume_conservation_violation_rejected():
    # drop one unit-cube child: conservation fails
    bad = MINI_3D.replace("  child T2 at 1 1 3\n", "")
    with pytest.raises(RuleValidationError) as ei:
        parse_ruleset(bad)
    assert ei.value.kind == "gap"


def test_matrix_mode_volume_mismatch():
    bad = rule_text("s5-ex1").replace("count c 2", "count c 3")
    with pytest.raises(RuleValidationError) as ei:
        parse_ruleset(bad)
    assert ei.value.kind == "volume-mismatch"


def test_overlap_rejected():
    bad = MINI_3D.replace("child T2 at 1 1 3", "child T2 at 1 1 2")
    with pytest.raises(RuleValidationError) as ei:
        parse_ruleset(bad)
    assert ei.value.kind == "overlap"


def test_child_outside_parent_rejected():
    bad = MINI_3D.replace("child T2 at 1 1 3", "child T2 at 1 1 4")
    with pytest.raises(RuleValidationError) as ei:
        parse_ruleset(bad)
    assert ei.value.kind == "child-outside-parent"


def test_unknown_tile_rejected():
    bad = MINI_3D.replace("child T2 at 1 1 3", "child T9 at 1 1 3")
    with pytest.raises(RuleValidationError) as ei:
        parse_ruleset(bad)
    assert ei.value.kind == "unknown-tile"


def test_syntax_error_carries_line_and_column():
    text = "dimension = 3\ninflation = 2\ntile T1 extent 1 1 oops\n"
    with pytest.raises(RuleFileSyntaxError) as ei:
        parse_ruleset(text)
    assert ei.value.line == 3 and ei.value.col == 20


def test_missing_rule_rejected():
    text = "dimension = 1\ninflation = 2\ntile a extent 1\n"
    with pytest.raises(RuleValidationError) as ei:
        parse_ruleset(text)
    assert ei.value.kind == "missing-rule"


def test_substitution_matrix_self_similar_cube():
    text = (
        "dimension = 2\ninflation = 2\ntile q extent 1 1\nrule q:\n"
        + "".join(f"  child q at {i} {j}\n" for i in range(2) for j in range(2))
    )
    rs = parse_ruleset(text)
    assert substitution_matrix(rs) == [[4]]  # xi^d copies of itself


def test_substitution_matrix_fixture_s5_ex2():
    rs = load_ruleset("s5-ex2")
    assert substitution_matrix(rs) == [[4, 3, 1, 3], [1, 4, 5, 5], [1, 1, 4, 1], [0, 1, 1, 5]]


def test_primitivity_examples():
    assert primitivity_check([[6, 1], [4, 6]]) == (True, 1)
    assert primitivity_check([[1, 0], [0, 1]]) == (False, None)
    assert primitivity_check([[0, 1], [1, 0]]) == (False, None)
    ok, m = primitivity_check([[0, 1], [1, 1]])
    assert ok and m == 2  # within the Wielandt bound n^2 - 2n + 2 = 2


def test_tile_type_invariants():
    for name in FIXTURES:
        rs = load_ruleset(name)
        for t in rs.tiles:
            vol = Fraction(1)
            for e in t.extent:
                vol *= e
            assert t.volume == vol
            assert t.surface == 2 * sum(vol / e for e in t.extent)


def test_volume_conservation_all_fixtures():
    for name in FIXTURES:
        assert volume_conservation_holds(load_ruleset(name)), name


def test_parse_serialize_roundtrip_all_fixtures():
    for name in FIXTURES:
        rs = load_ruleset(name)
        assert parse_ruleset(serialize_ruleset(rs)) == rs


@settings(max_examples=40, deadline=None)
@given(
    fixture=st.sampled_from(["s4-3d", "s5-ex1-geo"]),
    tile_pick=st.integers(0, 10**6),
    child_pick=st.integers(0, 10**6),
    axis_pick=st.integers(0, 2),
    num=st.integers(-8, 8).filter(lambda n: n != 0),
    den=st.integers(1, 8),
)
def test_any_offset_perturbation_rejected(fixture, tile_pick, child_pick, axis_pick, num, den):
    rs = load_ruleset(fixture)
    tile = rs.tiles[tile_pick % rs.n].id
    children = list(rs.rules[tile])
    ci = child_pick % len(children)
    axis = axis_pick % rs.dimension
    delta = Fraction(num, den)
    ch = children[ci]
    off = list(ch.offset)
    off[axis] += delta
    children[ci] = ChildPlacement(ch.tile, tuple(off))
    perturbed = RuleSet(
        dimension=rs.dimension,
        inflation=rs.inflation,
        tiles=rs.tiles,
        rules={**rs.rules, tile: tuple(children)},
        counts=rs.counts,
        mode=rs.mode,
    )
    with pytest.raises(RuleValidationError):
        parse_ruleset(serialize_ruleset(perturbed))


def test_rational_inflation_literals():
    # non-integer rational literals parse, but no such rule set can satisfy
    # conservation (xi^d must be an algebraic integer), so validation rejects
    text = "dimension = 1\ninflation = 3/2\ntile a extent 2\nrule a:\n  child a at 0\n"
    with pytest.raises(RuleValidationError) as ei:
        parse_ruleset(text)
    assert ei.value.kind == "gap"
    # integer-valued rational is fine
    rs = parse_ruleset(MINI_3D.replace("inflation = 2", "inflation = 4/2"))
    assert rs.inflation == 2


def test_fractional_extents_supported():
    text = (
        "dimension = 2\ninflation = 2\ntile h extent 1 1/2\nrule h:\n"
        "  child h at 0 0\n  child h at 1 0\n  child h at 0 1/2\n  child h at 1 1/2\n"
    )
    rs = parse_ruleset(text)
    assert substitution_matrix(rs) == [[4]]
    assert volume_conservation_holds(rs)
