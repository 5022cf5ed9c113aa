"""Codon tables, translation, and codon usage frequencies.

Tables ship as TSV data assets. A codon table row is
``codon<TAB>amino_acid<TAB>is_start`` and a usage row is
``amino_acid<TAB>codon<TAB>frequency`` with frequencies summing to 1 per
amino acid. The default table id is 11 (bacterial).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import ParseError
from .sequences import Sequence, normalize_bases

__all__ = [
    "CodonTable",
    "CodonUsage",
    "load_codon_table",
    "load_codon_usage",
    "translate",
    "STOP_SYMBOL",
    "AMINO_ACIDS",
]

STOP_SYMBOL = "*"
AMINO_ACIDS = "ACDEFGHIKLMNPQRSTVWY"

_BUNDLED_TABLES = (1, 11)
_BUNDLED_USAGE = (11,)


def _data_text(filename: str) -> str:
    return (resources.files("clonegym") / "data" / filename).read_text(encoding="utf-8")


@dataclass(frozen=True)
class CodonTable:
    """Maps codons to single-letter amino acids; stops map to '*'."""

    table_id: int
    codon_to_aa: dict[str, str]
    start_codons: frozenset[str]

    def amino_acid(self, codon: str) -> str:
        return self.codon_to_aa[codon]

    @property
    def stop_codons(self) -> frozenset[str]:
        return frozenset(c for c, aa in self.codon_to_aa.items() if aa == STOP_SYMBOL)


def parse_codon_table(text: str, table_id: int) -> CodonTable:
    codon_to_aa: dict[str, str] = {}
    starts: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError("expected codon<TAB>aa<TAB>is_start", lineno)
        codon, aa, is_start = fields
        codon = normalize_bases(codon, what="codon")
        if len(codon) != 3:
            raise ParseError(f"codon {codon!r} is not 3 bases", lineno)
        if codon in codon_to_aa:
            raise ParseError(f"duplicate codon {codon!r}", lineno)
        codon_to_aa[codon] = aa
        if is_start == "1":
            starts.add(codon)
    if len(codon_to_aa) != 64:
        raise ParseError(f"table has {len(codon_to_aa)} codons, expected 64")
    return CodonTable(table_id=table_id, codon_to_aa=codon_to_aa, start_codons=frozenset(starts))


@lru_cache(maxsize=None)
def load_codon_table(table_id: int = 11) -> CodonTable:
    if table_id not in _BUNDLED_TABLES:
        raise ValueError(f"no bundled codon table with id {table_id}")
    return parse_codon_table(_data_text(f"codon_table_{table_id}.tsv"), table_id)


@dataclass(frozen=True)
class CodonUsage:
    """Per-amino-acid codon frequencies, each list sorted most frequent first."""

    table_id: int
    aa_to_codons: dict[str, tuple[tuple[str, float], ...]]

    def codons_for(self, aa: str) -> tuple[tuple[str, float], ...]:
        return self.aa_to_codons[aa]

    def top_codon(self, aa: str) -> str:
        return self.aa_to_codons[aa][0][0]


def parse_codon_usage(text: str, table_id: int) -> CodonUsage:
    grouped: dict[str, list[tuple[str, float]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError("expected aa<TAB>codon<TAB>frequency", lineno)
        aa, codon, freq_text = fields
        codon = normalize_bases(codon, what="codon")
        freq = float(freq_text)
        grouped.setdefault(aa, []).append((codon, freq))
    table: dict[str, tuple[tuple[str, float], ...]] = {}
    for aa, entries in grouped.items():
        total = sum(freq for _, freq in entries)
        if abs(total - 1.0) > 1e-6:
            raise ParseError(f"frequencies for {aa!r} sum to {total}, expected 1")
        # Most frequent first; codon text breaks exact ties deterministically.
        entries.sort(key=lambda item: (-item[1], item[0]))
        table[aa] = tuple(entries)
    return CodonUsage(table_id=table_id, aa_to_codons=table)


@lru_cache(maxsize=None)
def load_codon_usage(table_id: int = 11) -> CodonUsage:
    if table_id not in _BUNDLED_USAGE:
        raise ValueError(f"no bundled codon usage for table id {table_id}")
    return parse_codon_usage(_data_text(f"codon_usage_{table_id}.tsv"), table_id)


def translate(seq: Sequence | str, table: CodonTable | None = None) -> str:
    """Translate frame 0 of the top strand.

    Translation stops at the first stop codon, which is emitted as '*'.
    A trailing partial codon is ignored.
    """
    if table is None:
        table = load_codon_table(11)
    bases = seq.bases if isinstance(seq, Sequence) else normalize_bases(seq)
    out: list[str] = []
    for i in range(0, len(bases) - 2, 3):
        aa = table.codon_to_aa[bases[i : i + 3]]
        out.append(aa)
        if aa == STOP_SYMBOL:
            break
    return "".join(out)
