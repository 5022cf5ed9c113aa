"""FASTA reading and writing.

Headers look like ">name [circular] free text". The optional "[circular]"
token right after the name marks topology; everything else after the name
becomes the description. Bodies are written uppercase at 60 columns.
"""
from __future__ import annotations

import os

from .errors import AlphabetError, ParseError
from .sequences import CIRCULAR, LINEAR, Sequence, normalize_bases

__all__ = ["parse_fasta", "write_fasta", "read_fasta_file", "write_fasta_file"]

_CIRCULAR_TOKEN = "[circular]"
_LINE_WIDTH = 60


def parse_fasta(text: str) -> list[Sequence]:
    """Parse FASTA text into sequences.

    Raises ParseError with a 1-based line number for content before the
    first header, illegal sequence characters, or an empty circular record.
    """
    records: list[Sequence] = []
    name: str | None = None
    topology = LINEAR
    description = ""
    chunks: list[str] = []
    header_line = 0

    def flush() -> None:
        if name is None:
            return
        bases = "".join(chunks)
        if topology == CIRCULAR and not bases:
            raise ParseError(f"circular record {name!r} has no sequence", header_line)
        records.append(
            Sequence(name=name, bases=bases, topology=topology, description=description)
        )

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            flush()
            fields = line[1:].split()
            if not fields or not fields[0]:
                raise ParseError("header has no name", lineno)
            name = fields[0]
            rest = fields[1:]
            if rest and rest[0].lower() == _CIRCULAR_TOKEN:
                topology = CIRCULAR
                rest = rest[1:]
            else:
                topology = LINEAR
            description = " ".join(rest)
            chunks = []
            header_line = lineno
        else:
            if name is None:
                raise ParseError("sequence data before the first header", lineno)
            try:
                chunks.append(normalize_bases(line))
            except AlphabetError as exc:
                raise ParseError(str(exc), lineno) from exc
    flush()
    return records


def write_fasta(seqs: list[Sequence]) -> str:
    """Render sequences as FASTA text that parse_fasta round-trips."""
    out: list[str] = []
    for seq in seqs:
        header = ">" + seq.name
        if seq.is_circular:
            header += " " + _CIRCULAR_TOKEN
        if seq.description:
            header += " " + seq.description
        out.append(header)
        for i in range(0, len(seq.bases), _LINE_WIDTH):
            out.append(seq.bases[i : i + _LINE_WIDTH])
    return "\n".join(out) + "\n" if out else ""


def read_fasta_file(path: str | os.PathLike[str]) -> list[Sequence]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_fasta(fh.read())


def write_fasta_file(path: str | os.PathLike[str], seqs: list[Sequence]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_fasta(seqs))
