"""Block algebra: construction, parsing, tetris, addition, star, ordering."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from fink import (
    MismatchedLevel,
    NotABlock,
    OverlappingSupport,
    ParseError,
    Subblock,
    add,
    peak,
    star,
    tetris,
)


def blk(k, pairs):
    return Subblock.from_pairs(k, pairs)


class TestConstruction:
    def test_canonical_form_ignores_zero_entries(self):
        assert blk(2, [(0, 2), (3, 0)]) == blk(2, [(0, 2)])

    def test_support_and_extremes(self):
        p = blk(2, [(1, 2), (4, 1)])
        assert p.support == (1, 4)
        assert p.min_support == 1
        assert p.max_support == 4
        assert p.value_at(0) == 0
        assert p.value_at(4) == 1

    def test_empty_subblock(self):
        e = Subblock(2, ())
        assert e.is_empty
        assert not e.is_block
        assert not e
        assert e.support == ()

    def test_rejects_values_above_level(self):
        with pytest.raises(ValueError):
            blk(2, [(0, 3)])
        with pytest.raises(ValueError):
            blk(2, [(0, -1)])

    def test_rejects_duplicate_positions(self):
        with pytest.raises(ValueError):
            blk(2, [(0, 1), (0, 2)])

    def test_immutable(self):
        p = blk(2, [(0, 2)])
        with pytest.raises(AttributeError):
            p.k = 3

    def test_is_block_requires_full_value(self):
        assert blk(2, [(0, 2), (1, 1)]).is_block
        assert not blk(2, [(0, 1), (1, 1)]).is_block


class TestParseRender:
    def test_parse_body(self):
        assert Subblock.parse_body(2, "0:2,3:1") == blk(2, [(0, 2), (3, 1)])
        assert Subblock.parse_body(2, "-") == Subblock(2, ())

    def test_parse_full_literal(self):
        assert Subblock.parse("k=2|0:2,1:1") == blk(2, [(0, 2), (1, 1)])

    def test_render_round_trip(self):
        p = blk(3, [(0, 3), (2, 1), (5, 2)])
        assert Subblock.parse(p.render()) == p
        assert p.render() == "k=3|0:3,2:1,5:2"
        assert Subblock(2, ()).render_body() == "-"

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            Subblock.parse_body(2, "3:1,0:2")  # positions must increase
        with pytest.raises(ParseError):
            Subblock.parse_body(2, "0:0")
        with pytest.raises(ParseError):
            Subblock.parse_body(2, "0:9")
        with pytest.raises(ParseError):
            Subblock.parse("0:2,1:1")  # missing level header
        with pytest.raises(ParseError):
            Subblock.parse("k=x|0:2")


class TestTetris:
    def test_single_step(self):
        assert tetris(blk(2, [(0, 2), (3, 1)])) == blk(2, [(0, 1)])

    def test_full_level_clears(self):
        p = blk(2, [(1, 2), (2, 1)])
        assert tetris(p, 2) == Subblock(2, ())

    def test_zero_steps_is_identity(self):
        p = blk(2, [(0, 2)])
        assert tetris(p, 0) == p

    def test_negative_steps_rejected(self):
        with pytest.raises(ValueError):
            tetris(blk(2, [(0, 2)]), -1)


class TestAdd:
    def test_disjoint_supports(self):
        assert add(blk(2, [(0, 2)]), blk(2, [(1, 2), (2, 1)])) == blk(
            2, [(0, 2), (1, 2), (2, 1)]
        )

    def test_operator_form(self):
        assert blk(2, [(0, 2)]) + blk(2, [(2, 1)]) == blk(2, [(0, 2), (2, 1)])

    def test_overlap_rejected(self):
        with pytest.raises(OverlappingSupport):
            add(blk(2, [(0, 2), (1, 1)]), blk(2, [(1, 2)]))

    def test_level_mismatch_rejected(self):
        with pytest.raises(MismatchedLevel):
            add(blk(2, [(0, 2)]), blk(3, [(1, 3)]))

    def test_empty_is_identity(self):
        p = blk(2, [(0, 2)])
        assert add(p, Subblock(2, ())) == p


class TestStar:
    def test_pointwise_max(self):
        assert star(blk(2, [(0, 2), (1, 1)]), blk(2, [(1, 2), (3, 1)])) == blk(
            2, [(0, 2), (1, 2), (3, 1)]
        )

    def test_agrees_with_add_on_disjoint(self):
        p, q = blk(2, [(0, 2)]), blk(2, [(2, 1)])
        assert star(p, q) == add(p, q)


class TestPeak:
    def test_last_full_position(self):
        assert peak(blk(2, [(0, 2), (1, 1)])) == 0
        assert peak(blk(2, [(0, 2), (3, 2)])) == 3
        assert peak(blk(3, [(4, 3)])) == 4

    def test_requires_a_block(self):
        with pytest.raises(NotABlock):
            peak(blk(2, [(1, 1)]))
        with pytest.raises(NotABlock):
            peak(Subblock(2, ()))


class TestOrdering:
    def test_strict_separation(self):
        assert blk(2, [(0, 2)]).before(blk(2, [(1, 2)]))
        assert not blk(2, [(0, 2), (1, 1)]).before(blk(2, [(1, 2)]))
        assert blk(2, [(0, 2)]) < blk(2, [(3, 2)])

    def test_empty_compares_both_ways(self):
        e = Subblock(2, ())
        p = blk(2, [(0, 2)])
        assert e.before(p)
        assert p.before(e)

    def test_level_mismatch_rejected(self):
        with pytest.raises(MismatchedLevel):
            blk(2, [(0, 2)]).before(blk(3, [(1, 3)]))

    def test_restrict_and_shift(self):
        p = blk(2, [(0, 1), (2, 2), (5, 1)])
        # both cuts are strict, so position 2 survives in neither part
        assert p.restrict_below(2) == blk(2, [(0, 1)])
        assert p.restrict_above(2) == blk(2, [(5, 1)])
        assert p.restrict_below(2) + blk(2, [(2, 2)]) + p.restrict_above(2) == p
        assert p.shift(3) == blk(2, [(3, 1), (5, 2), (8, 1)])


# random sparse maps, possibly empty, values 1..k
def subblocks(k):
    return st.dictionaries(st.integers(0, 14), st.integers(1, k), max_size=6).map(
        lambda d: Subblock.from_pairs(k, d.items())
    )


def disjoint_triples(k):
    # assign every position an owner so the three supports never collide
    return st.dictionaries(
        st.integers(0, 14),
        st.tuples(st.integers(0, 2), st.integers(1, k)),
        max_size=9,
    ).map(
        lambda d: tuple(
            Subblock.from_pairs(
                k, [(pos, val) for pos, (owner, val) in d.items() if owner == who]
            )
            for who in range(3)
        )
    )


@given(disjoint_triples(2))
def test_add_commutes_and_associates(triple):
    p, q, r = triple
    assert add(p, q) == add(q, p)
    assert add(add(p, q), r) == add(p, add(q, r))


@given(subblocks(3), subblocks(3), subblocks(3))
def test_star_laws(p, q, r):
    assert star(p, q) == star(q, p)
    assert star(star(p, q), r) == star(p, star(q, r))
    assert star(p, p) == p


@given(disjoint_triples(3), st.integers(0, 3))
def test_tetris_distributes(triple, steps):
    p, q, _ = triple
    assert tetris(add(p, q), steps) == add(tetris(p, steps), tetris(q, steps))
    assert tetris(star(p, q), steps) == star(tetris(p, steps), tetris(q, steps))


@given(subblocks(3), st.integers(0, 2), st.integers(0, 2))
def test_tetris_composes(p, i, j):
    assert tetris(tetris(p, i), j) == tetris(p, i + j)


@given(subblocks(2))
def test_render_parse_round_trip(p):
    assert Subblock.parse(p.render()) == p


@given(subblocks(3), st.integers(1, 3))
def test_tetris_matches_oracle(p, steps):
    image = oracle.tetris_dict(oracle.to_dict(p), steps)
    assert oracle.to_dict(tetris(p, steps)) == image
