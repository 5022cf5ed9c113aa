"""Primer design, melting temperature, and PCR simulation.

The melting temperature model is the short-oligo rule 2(A+T) + 4(G+C) below
14 bases and 64.9 + 41 * (GC - 16.4) / N at 14 bases and up. Priming is
exact-match only: a primer anneals where its 3'-terminal MIN_ANNEAL bases
match the template, and the simulated product carries the full primer texts
at its ends.
"""
from __future__ import annotations

from dataclasses import dataclass

from .enzymes import EnzymeCatalogue, default_catalogue
from .errors import (
    AlphabetError,
    AmbiguousPrimingError,
    ArgumentConflictError,
    EmptyPrimerError,
    OrientationError,
    OverlapNotFoundError,
    PrimerNotFoundError,
    TmUnreachableError,
)
from .sequences import (
    LINEAR,
    Sequence,
    normalize_bases,
    reverse_complement_text,
)

__all__ = [
    "MIN_ANNEAL",
    "MIN_OVERLAP",
    "CORE_LENGTH_RANGE",
    "OVERHANG_LEADER",
    "Primer",
    "PrimerPair",
    "PcrProduct",
    "melting_temp",
    "design_primers",
    "simulate_pcr",
    "find_sequence_overlap",
    "render_primer_pair",
]

MIN_ANNEAL = 12
MIN_OVERLAP = 8
CORE_LENGTH_RANGE = (15, 60)
OVERHANG_LEADER = "TTTT"


def melting_temp(core: str) -> float:
    """Melting temperature of a primer annealing core in degrees Celsius."""
    bases = normalize_bases(core, what="primer core")
    if not bases:
        raise EmptyPrimerError("cannot compute a melting temperature for an empty core")
    n = len(bases)
    gc = bases.count("G") + bases.count("C")
    at = n - gc
    if n < 14:
        return float(2 * at + 4 * gc)
    return 64.9 + 41.0 * (gc - 16.4) / n


@dataclass(frozen=True)
class Primer:
    """A primer: optional 5' overhang followed by the annealing core."""

    bases: str
    overhang_length: int
    core_tm: float

    @property
    def core(self) -> str:
        return self.bases[self.overhang_length :]

    @property
    def overhang(self) -> str:
        return self.bases[: self.overhang_length]


@dataclass(frozen=True)
class PrimerPair:
    forward: Primer
    reverse: Primer
    amplicon: Sequence


@dataclass(frozen=True)
class PcrProduct:
    amplicon: Sequence
    fwd_span: tuple[int, int]
    rev_span: tuple[int, int]


def _resolve_overhang(
    overhang: str | None,
    overhang_name: str | None,
    catalogue: EnzymeCatalogue,
    side: str,
) -> str:
    if overhang is not None and overhang_name is not None:
        raise ArgumentConflictError(
            f"give either a {side} overhang text or an enzyme name, not both"
        )
    if overhang_name is not None:
        enzyme = catalogue.get(overhang_name)
        recognition = enzyme.recognition
        if set(recognition) - set("ACGT"):
            raise AlphabetError(
                f"{enzyme.name} has a degenerate recognition site and cannot be "
                "used as a primer overhang"
            )
        return OVERHANG_LEADER + recognition
    if overhang is not None:
        return normalize_bases(overhang, what=f"{side} overhang")
    return ""


def _shortest_core(bases: str, target_tm: float, side: str) -> str:
    lo, hi = CORE_LENGTH_RANGE
    limit = min(hi, len(bases))
    for length in range(lo, limit + 1):
        core = bases[:length]
        if melting_temp(core) >= target_tm:
            return core
    raise TmUnreachableError(
        f"no {side} core of length {lo}..{limit} reaches Tm {target_tm:g}"
    )


def design_primers(
    seq: Sequence,
    target_tm: float,
    forward_overhang: str | None = None,
    forward_overhang_name: str | None = None,
    reverse_overhang: str | None = None,
    reverse_overhang_name: str | None = None,
    catalogue: EnzymeCatalogue | None = None,
) -> PrimerPair:
    """Design a primer pair amplifying the whole input.

    Each core is the shortest prefix of its template strand (the top strand
    for the forward primer, the reverse complement for the reverse) whose Tm
    reaches target_tm, with core length clamped to CORE_LENGTH_RANGE. An
    enzyme-name overhang contributes a TTTT leader plus the recognition text.
    """
    if len(seq) < 30:
        raise ValueError("template must be at least 30 bases for primer design")
    if not (40.0 <= target_tm <= 75.0):
        raise ValueError("target_tm must lie in [40, 75]")
    cat = catalogue or default_catalogue()
    fwd_tail = _resolve_overhang(forward_overhang, forward_overhang_name, cat, "forward")
    rev_tail = _resolve_overhang(reverse_overhang, reverse_overhang_name, cat, "reverse")

    fwd_core = _shortest_core(seq.bases, target_tm, "forward")
    rev_core = _shortest_core(reverse_complement_text(seq.bases), target_tm, "reverse")
    forward = Primer(
        bases=fwd_tail + fwd_core,
        overhang_length=len(fwd_tail),
        core_tm=melting_temp(fwd_core),
    )
    reverse = Primer(
        bases=rev_tail + rev_core,
        overhang_length=len(rev_tail),
        core_tm=melting_temp(rev_core),
    )
    return PrimerPair(forward=forward, reverse=reverse, amplicon=seq)


def _anchor_positions(template: Sequence, anchor: str) -> list[int]:
    text = template.bases + template.bases[: len(anchor) - 1] if template.is_circular else template.bases
    hits = []
    at = text.find(anchor)
    while at != -1:
        if at < len(template):
            hits.append(at)
        at = text.find(anchor, at + 1)
    return hits


def _resolve_primer(
    primer: str | Primer,
    side: str,
    template: Sequence,
    catalogue: EnzymeCatalogue,
) -> Primer:
    if isinstance(primer, Primer):
        return primer
    text = primer.strip()
    if all(ch in "ACGTUacgtu" for ch in text) and text:
        bases = normalize_bases(text, what=f"{side} primer")
        return Primer(bases=bases, overhang_length=0, core_tm=melting_temp(bases))
    # Not nucleotide text: treat it as an enzyme name and design the primer.
    kwargs = {f"{side}_overhang_name": text}
    pair = design_primers(template, 55.0, catalogue=catalogue, **kwargs)
    return pair.forward if side == "forward" else pair.reverse


def simulate_pcr(
    template: Sequence,
    forward: str | Primer,
    reverse: str | Primer,
    catalogue: EnzymeCatalogue | None = None,
) -> PcrProduct:
    """Simulate PCR with exact 3'-terminal annealing.

    Primer arguments may be nucleotide text, a Primer, or an enzyme name;
    an enzyme name designs the primer on this template at Tm 55 with that
    enzyme's overhang. Each primer must anneal at exactly one site via its
    last MIN_ANNEAL bases. On a circular template the product may wrap the
    origin; on a linear one the reverse site must lie downstream.
    """
    cat = catalogue or default_catalogue()
    fwd = _resolve_primer(forward, "forward", template, cat)
    rev = _resolve_primer(reverse, "reverse", template, cat)
    for side, primer in (("forward", fwd), ("reverse", rev)):
        if len(primer.bases) < MIN_ANNEAL:
            raise PrimerNotFoundError(
                f"{side} primer is shorter than the minimum annealing length {MIN_ANNEAL}"
            )

    fwd_anchor = fwd.bases[-MIN_ANNEAL:]
    rev_anchor = reverse_complement_text(rev.bases[-MIN_ANNEAL:])
    fwd_hits = _anchor_positions(template, fwd_anchor)
    rev_hits = _anchor_positions(template, rev_anchor)
    for side, hits in (("forward", fwd_hits), ("reverse", rev_hits)):
        if not hits:
            raise PrimerNotFoundError(f"{side} primer does not anneal to the template")
        if len(hits) > 1:
            raise AmbiguousPrimingError(
                f"{side} primer anneals at {len(hits)} sites: {hits}"
            )
    m = fwd_hits[0]
    r = rev_hits[0]
    fwd_end = m + MIN_ANNEAL

    n = len(template)
    if template.is_circular:
        doubled = template.bases + template.bases
        s = fwd_end % n  # the anchor window itself may wrap the origin
        interior = template.bases[s:r] if s <= r else doubled[s : r + n]
    else:
        if r < fwd_end:
            raise OrientationError(
                "reverse primer site lies upstream of the forward primer site"
            )
        interior = template.bases[fwd_end:r]

    amplicon = Sequence(
        name=f"{template.name}_amplicon",
        bases=fwd.bases + interior + reverse_complement_text(rev.bases),
        topology=LINEAR,
    )

    # Annealing spans: extend the anchor match as far as the primer keeps
    # matching the template, wrapping when circular.
    window = template.bases * 3 if template.is_circular else template.bases
    offset = n if template.is_circular else 0
    a_f = MIN_ANNEAL
    while (
        a_f < len(fwd.bases)
        and offset + m - (a_f - MIN_ANNEAL) - 1 >= 0
        and window[offset + m - (a_f - MIN_ANNEAL) - 1] == fwd.bases[-a_f - 1]
    ):
        a_f += 1
    rev_rc = reverse_complement_text(rev.bases)
    a_r = MIN_ANNEAL
    while (
        a_r < len(rev_rc)
        and offset + r + a_r < len(window)
        and window[offset + r + a_r] == rev_rc[a_r]
    ):
        a_r += 1
    fwd_start = fwd_end - a_f
    if template.is_circular:
        fwd_start %= n  # start > end then signals a wrapped binding site
    return PcrProduct(
        amplicon=amplicon,
        fwd_span=(fwd_start, fwd_end),
        rev_span=(r, r + a_r),
    )


def find_sequence_overlap(
    seq: Sequence, primer: str, reverse: bool = False
) -> tuple[int, int]:
    """Locate the longest terminal match between a primer and a sequence.

    With reverse False this is the longest suffix of the primer found in the
    sequence; with reverse True the primer is reverse-complemented first and
    its leading text (the reverse complement of the primer's 3' end) is
    matched instead, so both directions probe the primer's annealing end.
    Matches shorter than MIN_OVERLAP do not count; the leftmost match of the
    winning length is reported as a half-open span.
    """
    probe = normalize_bases(primer, what="primer")
    if len(probe) < 4:
        raise ValueError("primer must be at least 4 bases")
    text = seq.bases + seq.bases if seq.is_circular else seq.bases
    if reverse:
        flipped = reverse_complement_text(probe)
        candidates = (flipped[:length] for length in range(len(probe), MIN_OVERLAP - 1, -1))
    else:
        candidates = (probe[-length:] for length in range(len(probe), MIN_OVERLAP - 1, -1))
    for sub in candidates:
        at = text.find(sub)
        if at != -1 and at < len(seq):
            return (at, at + len(sub))
    raise OverlapNotFoundError(
        f"no terminal match of at least {MIN_OVERLAP} bases"
    )


def render_primer_pair(pair: PrimerPair) -> str:
    lines = []
    for label, primer in (("forward", pair.forward), ("reverse", pair.reverse)):
        if primer.overhang_length:
            shown = f"{primer.overhang}/{primer.core}"
        else:
            shown = primer.bases
        lines.append(f"{label:<8} {shown}  Tm {primer.core_tm:.1f}")
    lines.append(f"amplicon {pair.amplicon.name}: {len(pair.amplicon)} bp")
    return "\n".join(lines)
