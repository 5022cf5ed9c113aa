"""Nucleotide sequences and the value-level operations the tools build on.

Conventions used throughout the package:

* bases are uppercase ACGT; U is accepted on input and converted to T
* coordinates are 0-based half-open
* topology is "linear" or "circular"; a circular sequence wraps at its origin
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import (
    AlphabetError,
    EmptyPoolError,
    NameCollisionError,
    TopologyError,
)

__all__ = [
    "LINEAR",
    "CIRCULAR",
    "Sequence",
    "SequencePool",
    "SequenceStats",
    "normalize_bases",
    "complement_base",
    "reverse_complement_text",
    "reverse_complement",
    "slice_sequence",
    "add",
    "merge",
    "gc_fraction",
    "at_fraction",
    "max_homopolymer",
    "view_sequence_stats",
    "rotations_equal",
    "equivalent_sequences",
]

LINEAR = "linear"
CIRCULAR = "circular"

_COMPLEMENT = str.maketrans("ACGT", "TGCA")
_VALID = frozenset("ACGT")


def normalize_bases(text: str, *, what: str = "sequence") -> str:
    """Uppercase, convert U to T, and reject anything outside ACGT."""
    bases = text.upper().replace("U", "T")
    bad = set(bases) - _VALID
    if bad:
        shown = "".join(sorted(bad))
        raise AlphabetError(f"{what} contains illegal character(s): {shown!r}")
    return bases


def complement_base(base: str) -> str:
    return base.translate(_COMPLEMENT)


def reverse_complement_text(bases: str) -> str:
    return bases.translate(_COMPLEMENT)[::-1]


@dataclass(frozen=True)
class Sequence:
    """A named double-stranded DNA molecule, represented by its top strand."""

    name: str
    bases: str
    topology: str = LINEAR
    description: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "bases", normalize_bases(self.bases))
        if self.topology not in (LINEAR, CIRCULAR):
            raise ValueError(f"unknown topology: {self.topology!r}")
        if self.topology == CIRCULAR and not self.bases:
            raise TopologyError("a circular sequence cannot be empty")

    def __len__(self) -> int:
        return len(self.bases)

    @property
    def is_circular(self) -> bool:
        return self.topology == CIRCULAR

    def renamed(self, name: str) -> "Sequence":
        return replace(self, name=name)


@dataclass(frozen=True)
class SequencePool:
    """An ordered collection of sequences with pairwise distinct names."""

    members: tuple[Sequence, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise EmptyPoolError("a sequence pool cannot be empty")
        seen: set[str] = set()
        for seq in self.members:
            if seq.name in seen:
                raise NameCollisionError(f"duplicate sequence name: {seq.name!r}")
            seen.add(seq.name)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def names(self) -> list[str]:
        return [seq.name for seq in self.members]


def reverse_complement(seq: Sequence) -> Sequence:
    """Return the reverse complement, named after the input with an _rc suffix."""
    return Sequence(
        name=seq.name + "_rc",
        bases=reverse_complement_text(seq.bases),
        topology=seq.topology,
        description=seq.description,
    )


def slice_sequence(seq: Sequence, start: int, end: int) -> Sequence:
    """Extract [start, end) as a new linear sequence.

    On a circular sequence start > end wraps through the origin and the
    result has length (len - start) + end. On a linear sequence a wrap
    request raises TopologyError and out-of-range bounds raise IndexError.
    """
    n = len(seq)
    if seq.is_circular:
        if not (0 <= start < n and 0 <= end < n):
            raise IndexError(
                f"slice bounds [{start}, {end}) outside circular sequence of length {n}"
            )
        if start <= end:
            bases = seq.bases[start:end]
        else:
            bases = seq.bases[start:] + seq.bases[:end]
    else:
        if not (0 <= start <= n and 0 <= end <= n):
            raise IndexError(
                f"slice bounds [{start}, {end}) outside linear sequence of length {n}"
            )
        if start > end:
            raise TopologyError("cannot wrap a slice on a linear sequence")
        bases = seq.bases[start:end]
    return Sequence(name=f"{seq.name}_slice", bases=bases, topology=LINEAR)


def add(a: Sequence, b: Sequence) -> Sequence:
    """Concatenate two linear sequences end to end."""
    if a.is_circular or b.is_circular:
        raise TopologyError("only linear sequences can be concatenated")
    return Sequence(name=f"{a.name}+{b.name}", bases=a.bases + b.bases, topology=LINEAR)


def merge(seqs: list[Sequence]) -> SequencePool:
    """Collect sequences into a pool, preserving order."""
    return SequencePool(members=tuple(seqs))


def gc_fraction(bases: str) -> float:
    if not bases:
        return 0.0
    gc = bases.count("G") + bases.count("C")
    return gc / len(bases)


def at_fraction(bases: str) -> float:
    if not bases:
        return 0.0
    at = bases.count("A") + bases.count("T")
    return at / len(bases)


def max_homopolymer(bases: str) -> int:
    """Length of the longest run of one repeated base."""
    best = 0
    run = 0
    prev = ""
    for ch in bases:
        run = run + 1 if ch == prev else 1
        prev = ch
        if run > best:
            best = run
    return best


@dataclass(frozen=True)
class SequenceStats:
    name: str
    length: int
    gc_fraction: float
    max_homopolymer: int

    def render(self) -> str:
        return (
            f"{self.name}: length {self.length}, "
            f"gc_fraction {self.gc_fraction:.4f}, "
            f"max_homopolymer {self.max_homopolymer}"
        )


def view_sequence_stats(seq: Sequence) -> SequenceStats:
    return SequenceStats(
        name=seq.name,
        length=len(seq),
        gc_fraction=gc_fraction(seq.bases),
        max_homopolymer=max_homopolymer(seq.bases),
    )


def rotations_equal(a: Sequence, b: Sequence) -> bool:
    """True if the sequences are equal up to rotation of a circular origin.

    Linear sequences compare by exact text. Comparing a linear sequence with
    a circular one is always False.
    """
    if a.topology != b.topology or len(a) != len(b):
        return False
    if not a.is_circular:
        return a.bases == b.bases
    return b.bases in (a.bases + a.bases)


def equivalent_sequences(a: Sequence, b: Sequence) -> bool:
    """Rotation equality that also accepts the reverse complement strand."""
    return rotations_equal(a, b) or rotations_equal(a, reverse_complement(b))
