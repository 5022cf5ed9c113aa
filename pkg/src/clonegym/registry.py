"""Plasmid and gene fixture stores, boolean search, and feature annotation.

The bundled records are synthetic stand-ins with realistic names and sizes.
Plasmids ship as FASTA plus a JSONL sidecar of feature placements; genes as
a directory of FASTA files. A remote gene backend can replace the local one
but nothing in the test suite depends on the network.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import requests

from .errors import BackendUnavailableError, ParseError, QueryParseError, VendorLimitError
from .fasta import parse_fasta
from .orfs import find_orfs
from .sequences import CIRCULAR, LINEAR, Sequence, normalize_bases, reverse_complement_text

__all__ = [
    "PlasmidFeature",
    "PlasmidRecord",
    "SearchHit",
    "Annotation",
    "GeneRecord",
    "LocalGeneBackend",
    "HttpGeneBackend",
    "load_feature_library",
    "load_plasmid_records",
    "parse_query",
    "plasmid_search",
    "gene_search",
    "annotate",
    "create_sequence",
]

RESULT_CAP = 5
ORF_ANNOTATION_MIN = 300
VENDOR_MAX_LENGTH = 50_000

ANNOTATION_KINDS = ("protein", "ori", "orf", "misc")


@dataclass(frozen=True)
class PlasmidFeature:
    name: str
    start: int
    end: int
    strand: str
    kind: str


@dataclass(frozen=True)
class PlasmidRecord:
    name: str
    seq: Sequence
    features: tuple[PlasmidFeature, ...]


@dataclass(frozen=True)
class SearchHit:
    name: str
    matched_features: tuple[str, ...]
    record: PlasmidRecord


@dataclass(frozen=True)
class Annotation:
    """A located feature; end may exceed the length when a circular span wraps."""

    feature_name: str
    start: int
    end: int
    strand: str
    kind: str


@dataclass(frozen=True)
class GeneRecord:
    id: str
    title: str
    seq: Sequence


@dataclass(frozen=True)
class LibraryFeature:
    name: str
    kind: str
    bases: str


def _data_root():
    return resources.files("clonegym") / "data"


@lru_cache(maxsize=None)
def load_feature_library() -> tuple[LibraryFeature, ...]:
    text = (_data_root() / "features.fa").read_text(encoding="utf-8")
    out = []
    for seq in parse_fasta(text):
        kind = "misc"
        for token in seq.description.split():
            if token.startswith("kind="):
                kind = token[len("kind=") :]
        if kind not in ANNOTATION_KINDS:
            raise ParseError(f"feature {seq.name!r} has unknown kind {kind!r}")
        out.append(LibraryFeature(name=seq.name, kind=kind, bases=seq.bases))
    return tuple(out)


@lru_cache(maxsize=None)
def load_plasmid_records() -> tuple[PlasmidRecord, ...]:
    root = _data_root() / "plasmids"
    seqs = {s.name: s for s in parse_fasta((root / "plasmids.fa").read_text(encoding="utf-8"))}
    placed: dict[str, list[PlasmidFeature]] = {name: [] for name in seqs}
    for lineno, line in enumerate((root / "features.jsonl").read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        row = json.loads(line)
        plasmid = row["plasmid"]
        if plasmid not in seqs:
            raise ParseError(f"feature row names unknown plasmid {plasmid!r}", lineno)
        feature = PlasmidFeature(
            name=row["name"], start=row["start"], end=row["end"], strand=row["strand"], kind=row["kind"]
        )
        if not 0 <= feature.start < feature.end <= len(seqs[plasmid]):
            raise ParseError(f"feature {feature.name!r} span outside {plasmid}", lineno)
        placed[plasmid].append(feature)
    records = []
    for name, seq in seqs.items():
        if not seq.is_circular:
            raise ParseError(f"plasmid {name!r} must be circular")
        records.append(PlasmidRecord(name=name, seq=seq, features=tuple(placed[name])))
    return tuple(records)


# ---------------------------------------------------------------------------
# Query language: whitespace-separated terms, implicit AND, explicit AND/OR
# (uppercase only), and -term negation. Every OR branch needs a positive term.


@dataclass(frozen=True)
class Query:
    branches: tuple[tuple[tuple[str, bool], ...], ...]
    """OR over branches; each branch is AND over (term, negated) units."""

    def positive_terms(self) -> tuple[str, ...]:
        seen: list[str] = []
        for branch in self.branches:
            for term, negated in branch:
                if not negated and term not in seen:
                    seen.append(term)
        return tuple(seen)


def parse_query(text: str) -> Query:
    tokens = text.split()
    if not tokens:
        raise QueryParseError("empty query")
    branches: list[tuple[tuple[str, bool], ...]] = []
    current: list[tuple[str, bool]] = []

    def close_branch() -> None:
        if not current:
            raise QueryParseError("operator without operand")
        if not any(not negated for _, negated in current):
            raise QueryParseError("a query branch needs at least one positive term")
        branches.append(tuple(current))
        current.clear()

    for token in tokens:
        if token == "OR":
            close_branch()
        elif token == "AND":
            if not current:
                raise QueryParseError("operator without operand")
        elif token == "-":
            raise QueryParseError("dangling minus sign")
        elif token.startswith("-"):
            current.append((token[1:].lower(), True))
        else:
            current.append((token.lower(), False))
    close_branch()
    return Query(branches=tuple(branches))


def _term_in_record(term: str, record: PlasmidRecord) -> bool:
    if term in record.name.lower():
        return True
    return any(term in feature.name.lower() for feature in record.features)


def plasmid_search(
    query_text: str, records: tuple[PlasmidRecord, ...] | None = None, limit: int = RESULT_CAP
) -> list[SearchHit]:
    """Boolean search over plasmid and feature names.

    Terms match case-insensitively as substrings. Hits are sorted by the
    number of distinct positive terms matched (descending), then name, and
    capped at five.
    """
    query = parse_query(query_text)
    if records is None:
        records = load_plasmid_records()
    positives = query.positive_terms()
    hits: list[tuple[int, str, SearchHit]] = []
    for record in records:
        satisfied = any(
            all(_term_in_record(term, record) != negated for term, negated in branch)
            for branch in query.branches
        )
        if not satisfied:
            continue
        matched_terms = [t for t in positives if _term_in_record(t, record)]
        matched_features = tuple(
            dict.fromkeys(
                f.name for f in record.features if any(t in f.name.lower() for t in matched_terms)
            )
        )
        hit = SearchHit(name=record.name, matched_features=matched_features, record=record)
        hits.append((len(matched_terms), record.name, hit))
    hits.sort(key=lambda item: (-item[0], item[1]))
    return [hit for _, _, hit in hits[:limit]]


# ---------------------------------------------------------------------------
# Gene search backends.


class LocalGeneBackend:
    """Reads every .fa file in a directory once; ranking is deterministic."""

    def __init__(self, directory: str | os.PathLike[str]):
        self.directory = os.fspath(directory)
        records: list[GeneRecord] = []
        for filename in sorted(os.listdir(self.directory)):
            if not filename.endswith(".fa"):
                continue
            with open(os.path.join(self.directory, filename), encoding="utf-8") as fh:
                for seq in parse_fasta(fh.read()):
                    records.append(GeneRecord(id=seq.name, title=seq.description, seq=seq))
        self.records = tuple(records)

    def search(self, query: str, limit: int) -> list[GeneRecord]:
        terms = [t.lower() for t in query.split()]
        if not terms:
            return []
        ranked: list[tuple[int, str, GeneRecord]] = []
        for record in self.records:
            haystack = (record.id + " " + record.title).lower()
            if not all(t in haystack for t in terms):
                continue
            occurrences = sum(record.title.lower().count(t) for t in terms)
            ranked.append((occurrences, record.id, record))
        ranked.sort(key=lambda item: (-item[0], item[1]))
        return [record for _, _, record in ranked[:limit]]


class HttpGeneBackend:
    """Nucleotide-database lookup over HTTP GET with query/limit parameters."""

    def __init__(self, base_url: str, timeout: float = 10.0):
        self.base_url = base_url
        self.timeout = timeout

    def search(self, query: str, limit: int) -> list[GeneRecord]:
        try:
            response = requests.get(
                self.base_url, params={"query": query, "limit": limit}, timeout=self.timeout
            )
            response.raise_for_status()
            rows = response.json()
        except (requests.RequestException, ValueError) as exc:
            raise BackendUnavailableError(f"gene backend failed: {exc}") from exc
        records = []
        for row in rows[:limit]:
            seq = Sequence(name=row["id"], bases=row["seq"], topology=LINEAR)
            records.append(GeneRecord(id=row["id"], title=row.get("title", ""), seq=seq))
        return records


@lru_cache(maxsize=None)
def _default_gene_backend() -> LocalGeneBackend:
    return LocalGeneBackend(os.fspath(_data_root() / "genes"))


def gene_search(query: str, backend=None, limit: int = RESULT_CAP) -> list[GeneRecord]:
    if backend is None:
        backend = _default_gene_backend()
    return backend.search(query, limit)


# ---------------------------------------------------------------------------
# Annotation.


def _occurrences(haystack: str, needle: str, circular: bool) -> list[int]:
    if not needle or len(needle) > len(haystack) + (len(needle) - 1 if circular else 0):
        return []
    text = haystack + haystack[: len(needle) - 1] if circular else haystack
    out = []
    at = text.find(needle)
    while at != -1:
        if at < len(haystack):
            out.append(at)
        at = text.find(needle, at + 1)
    return out


def annotate(seq: Sequence, library: tuple[LibraryFeature, ...] | None = None) -> list[Annotation]:
    """Exact matches of library features on either strand, plus long ORFs.

    Open reading frames of at least 300 nt are reported with kind "orf".
    Circular inputs are scanned across the origin; a wrapping annotation
    keeps start < len and lets end run past it.
    """
    if library is None:
        library = load_feature_library()
    found: list[Annotation] = []
    for feature in library:
        rc = reverse_complement_text(feature.bases)
        for at in _occurrences(seq.bases, feature.bases, seq.is_circular):
            found.append(
                Annotation(feature.name, at, at + len(feature.bases), "+", feature.kind)
            )
        if rc != feature.bases:
            for at in _occurrences(seq.bases, rc, seq.is_circular):
                found.append(
                    Annotation(feature.name, at, at + len(feature.bases), "-", feature.kind)
                )
    for orf in find_orfs(seq, min_length=ORF_ANNOTATION_MIN, strand="both"):
        found.append(Annotation("ORF", orf.start, orf.end, orf.strand, "orf"))
    found.sort(key=lambda a: (a.start, a.end, a.feature_name, a.strand))
    return found


# ---------------------------------------------------------------------------
# Vendor-style sequence creation.


def create_sequence(sequence_spec: str, default_name: str = "custom") -> Sequence:
    """Build a sequence from vendor order text.

    The text is raw nucleotides, optionally prefixed by "name=<id>;" and/or
    "circular;" in any order. Whitespace inside the nucleotide text is
    ignored. Orders longer than 50 kb are refused.
    """
    remainder = sequence_spec.strip()
    name = default_name
    topology = LINEAR
    while True:
        if remainder.startswith("name="):
            head, sep, tail = remainder.partition(";")
            if not sep:
                raise ParseError("name= prefix must end with ';'")
            name = head[len("name=") :].strip()
            if not name:
                raise ParseError("empty name in sequence spec")
            remainder = tail.lstrip()
        elif remainder.startswith("circular;"):
            topology = CIRCULAR
            remainder = remainder[len("circular;") :].lstrip()
        else:
            break
    bases = "".join(remainder.split())
    bases = normalize_bases(bases, what="sequence order")
    if len(bases) > VENDOR_MAX_LENGTH:
        raise VendorLimitError(
            f"order of {len(bases)} nt exceeds the {VENDOR_MAX_LENGTH} nt limit"
        )
    return Sequence(name=name, bases=bases, topology=topology)
