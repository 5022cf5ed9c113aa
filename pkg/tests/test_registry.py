import pytest
from hypothesis import given, strategies as st

from clonegym.errors import (
    AlphabetError,
    ParseError,
    QueryParseError,
    VendorLimitError,
)
from clonegym.registry import (
    GeneRecord,
    LibraryFeature,
    PlasmidFeature,
    PlasmidRecord,
    annotate,
    create_sequence,
    gene_search,
    load_feature_library,
    load_plasmid_records,
    parse_query,
    plasmid_search,
)
from clonegym.sequences import CIRCULAR, Sequence, reverse_complement_text


def tiny_record(name, feature_names):
    features = tuple(
        PlasmidFeature(name=f, start=i * 10, end=i * 10 + 8, strand="+", kind="misc")
        for i, f in enumerate(feature_names)
    )
    return PlasmidRecord(name=name, seq=Sequence(name, "ATGC" * 30, CIRCULAR), features=features)


TWO_RECORDS = (
    tiny_record("pUC19", ["AmpR", "ori"]),
    tiny_record("pET28a", ["KanR", "ori"]),
)


def test_parse_query_shapes():
    q = parse_query("AmpR ori")
    assert q.branches == ((("ampr", False), ("ori", False)),)
    q = parse_query("AmpR AND ori")
    assert q.branches == ((("ampr", False), ("ori", False)),)
    q = parse_query("AmpR OR KanR")
    assert q.branches == ((("ampr", False),), (("kanr", False),))
    q = parse_query("ori -KanR")
    assert q.branches == ((("ori", False), ("kanr", True)),)
    assert parse_query("AmpR ori").positive_terms() == ("ampr", "ori")


def test_parse_query_errors():
    for bad in ("", "   ", "-KanR", "OR AmpR", "AmpR OR", "AND", "-", "AmpR OR -KanR"):
        with pytest.raises(QueryParseError):
            parse_query(bad)


def test_parse_query_operators_are_uppercase_only():
    # lowercase "or" is an ordinary search term
    q = parse_query("AmpR or KanR")
    assert q.branches == ((("ampr", False), ("or", False), ("kanr", False)),)


def test_plasmid_search_two_record_examples():
    assert [h.name for h in plasmid_search("AmpR", TWO_RECORDS)] == ["pUC19"]
    assert [h.name for h in plasmid_search("ori -KanR", TWO_RECORDS)] == ["pUC19"]
    names = {h.name for h in plasmid_search("AmpR OR KanR", TWO_RECORDS)}
    assert names == {"pUC19", "pET28a"}
    assert plasmid_search("zzzz", TWO_RECORDS) == []


def test_plasmid_search_hit_shape():
    hits = plasmid_search("AmpR", TWO_RECORDS)
    assert hits[0].matched_features == ("AmpR",)
    assert hits[0].record is TWO_RECORDS[0]


def test_plasmid_search_ranks_by_matched_terms_then_name():
    records = (
        tiny_record("pBoth", ["AmpR", "GFP"]),
        tiny_record("pAmpOnly", ["AmpR"]),
        tiny_record("pGfpOnly", ["GFP"]),
    )
    names = [h.name for h in plasmid_search("AmpR OR GFP", records)]
    assert names == ["pBoth", "pAmpOnly", "pGfpOnly"]


def test_plasmid_search_caps_at_five():
    records = tuple(tiny_record(f"pM{i}", ["AmpR"]) for i in range(7))
    hits = plasmid_search("AmpR", records)
    assert len(hits) == 5
    assert [h.name for h in hits] == sorted(r.name for r in records)[:5]


def test_plasmid_search_on_bundled_db():
    bundled = load_plasmid_records()
    assert len(bundled) >= 10
    amp = {h.name for h in plasmid_search("AmpR", limit=100)}
    kan = {h.name for h in plasmid_search("KanR", limit=100)}
    both = {h.name for h in plasmid_search("AmpR AND KanR", limit=100)}
    either = {h.name for h in plasmid_search("AmpR OR KanR", limit=100)}
    amp_not_kan = {h.name for h in plasmid_search("AmpR -KanR", limit=100)}
    assert both == amp & kan
    assert either == amp | kan
    assert amp_not_kan == amp - kan
    assert both and amp_not_kan  # fixture exercises both sides


def test_gene_search_fixture_lookup():
    hits = gene_search("GFP")
    assert hits
    assert hits[0].id == "GFP"
    assert len(gene_search("polymerase")) == 5  # more matches exist, capped
    assert gene_search("no such gene anywhere") == []


def test_gene_search_rank_and_tiebreak():
    backend_records = (
        GeneRecord("b2", "widget widget", Sequence("b2", "ATGC")),
        GeneRecord("a1", "widget", Sequence("a1", "ATGC")),
        GeneRecord("a0", "widget", Sequence("a0", "ATGC")),
    )

    class FakeBackend:
        def search(self, query, limit):
            terms = [t.lower() for t in query.split()]
            ranked = [
                (sum(r.title.lower().count(t) for t in terms), r.id, r)
                for r in backend_records
                if all(t in (r.id + " " + r.title).lower() for t in terms)
            ]
            ranked.sort(key=lambda item: (-item[0], item[1]))
            return [r for _, _, r in ranked[:limit]]

    hits = gene_search("widget", backend=FakeBackend())
    assert [h.id for h in hits] == ["b2", "a0", "a1"]


def test_annotate_planted_feature():
    lib = load_feature_library()
    gfp = next(f for f in lib if f.name == "GFP")
    backbone = "AT" * 50 + gfp.bases + "GC" * 50
    rows = annotate(Sequence("x", backbone), library=lib)
    gfp_rows = [a for a in rows if a.feature_name == "GFP"]
    assert len(gfp_rows) == 1
    hit = gfp_rows[0]
    assert (hit.start, hit.end, hit.strand, hit.kind) == (100, 100 + len(gfp.bases), "+", "protein")


def test_annotate_reverse_complement_strand():
    lib = load_feature_library()
    gfp = next(f for f in lib if f.name == "GFP")
    backbone = "AT" * 50 + reverse_complement_text(gfp.bases) + "GC" * 50
    rows = [a for a in annotate(Sequence("x", backbone), library=lib) if a.feature_name == "GFP"]
    assert len(rows) == 1
    assert rows[0].strand == "-"
    assert rows[0].start == 100


def test_annotate_includes_long_orfs():
    lib = (LibraryFeature(name="tag", kind="misc", bases="GGGGGGGG"),)
    cds = "ATG" + "GCA" * 120 + "TAA"  # 366 nt
    rows = annotate(Sequence("x", "TT" + cds + "TT"), library=lib)
    plus_orfs = [a for a in rows if a.kind == "orf" and a.strand == "+"]
    assert len(plus_orfs) == 1
    assert plus_orfs[0].feature_name == "ORF"
    assert (plus_orfs[0].start, plus_orfs[0].end) == (2, 2 + len(cds))


def test_annotate_wraps_on_circular():
    lib = (LibraryFeature(name="mark", kind="misc", bases="GATTACAGGGTT"),)
    text = "ACAGGGTT" + "A" * 40 + "GATT"  # feature spans the origin
    rows = annotate(Sequence("x", text, CIRCULAR), library=lib)
    marks = [a for a in rows if a.feature_name == "mark"]
    assert len(marks) == 1
    assert marks[0].strand == "+"
    assert marks[0].start == 48
    assert marks[0].end == 48 + 12  # runs past the length to signal the wrap
    assert annotate(Sequence("x", text), library=lib) == []


def test_create_sequence_specs():
    s = create_sequence("name=ins1;ATGC")
    assert (s.name, s.bases, s.topology) == ("ins1", "ATGC", "linear")
    s = create_sequence("circular;AT")
    assert (s.topology, len(s)) == (CIRCULAR, 2)
    s = create_sequence("name=x; circular; AT GC")
    assert (s.name, s.topology, s.bases) == ("x", CIRCULAR, "ATGC")
    assert create_sequence("ATGC").name == "custom"
    assert create_sequence("atgc", default_name="given").name == "given"


def test_create_sequence_errors():
    with pytest.raises(AlphabetError):
        create_sequence("AT-GC")
    with pytest.raises(ParseError):
        create_sequence("name=;ATGC")
    with pytest.raises(ParseError):
        create_sequence("name=x ATGC")  # missing semicolon
    with pytest.raises(VendorLimitError):
        create_sequence("A" * 50_001)
    assert len(create_sequence("A" * 50_000)) == 50_000


@given(st.lists(st.sampled_from(["ampr", "kanr", "gfp", "ori"]), min_size=1, max_size=3, unique=True))
def test_query_and_narrows_or_widens(terms):
    base = {h.name for h in plasmid_search(terms[0], limit=100)}
    anded = {h.name for h in plasmid_search(" AND ".join(terms), limit=100)}
    ored = {h.name for h in plasmid_search(" OR ".join(terms), limit=100)}
    assert anded <= base <= ored
