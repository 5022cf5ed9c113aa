import random

import pytest
from hypothesis import given, strategies as st

from clonegym.errors import (
    AlphabetError,
    EmptyPoolError,
    NameCollisionError,
    TopologyError,
)
from clonegym.sequences import (
    CIRCULAR,
    LINEAR,
    Sequence,
    SequencePool,
    add,
    at_fraction,
    equivalent_sequences,
    gc_fraction,
    max_homopolymer,
    merge,
    normalize_bases,
    reverse_complement,
    reverse_complement_text,
    rotations_equal,
    slice_sequence,
    view_sequence_stats,
)

bases_st = st.text(alphabet="ACGT", min_size=0, max_size=80)


def test_normalize_uppercases_and_validates():
    assert normalize_bases("atgc") == "ATGC"
    assert normalize_bases("") == ""
    with pytest.raises(AlphabetError):
        normalize_bases("AT-GC")
    with pytest.raises(AlphabetError):
        normalize_bases("ATGN")


def test_sequence_construction():
    s = Sequence("x", "atgc")
    assert s.bases == "ATGC"
    assert s.topology == LINEAR
    assert not s.is_circular
    assert len(s) == 4
    assert s.renamed("y").name == "y"
    assert s.renamed("y").bases == s.bases
    with pytest.raises(ValueError):
        Sequence("x", "AT", topology="coiled")
    with pytest.raises(TopologyError):
        Sequence("x", "", topology=CIRCULAR)


def test_add_concatenates():
    joined = add(Sequence("a", "AT"), Sequence("b", "GC"))
    assert joined.bases == "ATGC"
    assert joined.name == "a+b"
    assert joined.topology == LINEAR


def test_add_rejects_circular_inputs():
    with pytest.raises(TopologyError):
        add(Sequence("a", "AT", CIRCULAR), Sequence("b", "GC"))
    with pytest.raises(TopologyError):
        add(Sequence("a", "AT"), Sequence("b", "GC", CIRCULAR))


@given(bases_st, bases_st)
def test_add_length_additive(x, y):
    got = add(Sequence("a", x), Sequence("b", y))
    assert len(got) == len(x) + len(y)


def test_merge_single_and_pair():
    a = Sequence("a", "AT")
    b = Sequence("b", "GC")
    assert merge([a]).names() == ["a"]
    pool = merge([a, b])
    assert isinstance(pool, SequencePool)
    assert pool.names() == ["a", "b"]
    assert len(pool) == 2
    assert list(pool) == [a, b]


def test_merge_rejects_duplicates_and_empty():
    a = Sequence("a", "AT")
    with pytest.raises(NameCollisionError):
        merge([a, a])
    with pytest.raises(EmptyPoolError):
        merge([])


def test_slice_linear():
    s = Sequence("x", "ATGCAT")
    assert slice_sequence(s, 1, 4).bases == "TGC"
    assert slice_sequence(s, 0, 6).bases == "ATGCAT"
    with pytest.raises(IndexError):
        slice_sequence(s, 2, 9)
    with pytest.raises(IndexError):
        slice_sequence(s, -1, 3)
    with pytest.raises(TopologyError):
        slice_sequence(s, 4, 2)


def test_slice_circular_wraps_origin():
    s = Sequence("x", "ATGCAT", CIRCULAR)
    got = slice_sequence(s, 4, 2)
    assert got.bases == "ATAT"
    assert got.topology == LINEAR


def test_slice_circular_agrees_with_rotation_oracle():
    # oracle: rotate the text so start becomes the origin, then take a prefix
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randrange(4, 30)
        text = "".join(rng.choice("ACGT") for _ in range(n))
        s = Sequence("x", text, CIRCULAR)
        start = rng.randrange(n)
        end = rng.randrange(n)
        rotated = text[start:] + text[:start]
        want = text[start:end] if start <= end else rotated[: n - start + end]
        assert slice_sequence(s, start, end).bases == want


def test_reverse_complement():
    assert reverse_complement_text("ATGC") == "GCAT"
    s = reverse_complement(Sequence("x", "AACG"))
    assert s.bases == "CGTT"
    assert s.name == "x_rc"


@given(bases_st)
def test_reverse_complement_involution(text):
    assert reverse_complement_text(reverse_complement_text(text)) == text


def test_stats_trivial_values():
    assert gc_fraction("ATGC") == 0.5
    assert gc_fraction("AAAA") == 0.0
    assert gc_fraction("GGGGCC") == 1.0
    assert at_fraction("GGGGCC") == 0.0
    assert max_homopolymer("ATGC") == 1
    assert max_homopolymer("AAAA") == 4
    assert max_homopolymer("GGGGCC") == 4
    assert max_homopolymer("") == 0


def test_stats_render():
    stats = view_sequence_stats(Sequence("s", "ATGC"))
    assert stats.length == 4
    assert stats.render() == "s: length 4, gc_fraction 0.5000, max_homopolymer 1"


@given(bases_st)
def test_stats_bounds(text):
    if text:
        assert 0.0 <= gc_fraction(text) <= 1.0
        assert abs(gc_fraction(text) + at_fraction(text) - 1.0) < 1e-12
    assert 0 <= max_homopolymer(text) <= len(text)


def test_rotations_equal():
    a = Sequence("a", "ATGCAT", CIRCULAR)
    b = Sequence("b", "CATATG", CIRCULAR)
    assert rotations_equal(a, b)
    assert not rotations_equal(a, Sequence("c", "ATGCAA", CIRCULAR))
    # linear comparison requires identical text, no rotation credit
    assert rotations_equal(Sequence("a", "ATGC"), Sequence("b", "ATGC"))
    assert not rotations_equal(Sequence("a", "ATGC"), Sequence("b", "GCAT"))


def test_equivalent_sequences_accepts_reflection():
    a = Sequence("a", "AACGT", CIRCULAR)
    flipped = reverse_complement(a)
    rotated = Sequence("r", flipped.bases[2:] + flipped.bases[:2], CIRCULAR)
    assert equivalent_sequences(a, rotated)
    assert not equivalent_sequences(a, Sequence("c", "AAAAA", CIRCULAR))
