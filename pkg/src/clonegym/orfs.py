"""Open-reading-frame discovery and codon optimization."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .codons import CodonTable, load_codon_table, load_codon_usage
from .errors import AlphabetError, PrematureStopError
from .sequences import LINEAR, Sequence, gc_fraction, normalize_bases, reverse_complement_text

START_CODON = "ATG"
MIN_ORF_LENGTH = 6

GC_TOLERANCE = 2.0
MAX_REPAIR_PASSES = 10

PROTEIN_LETTERS = frozenset("ACDEFGHIKLMNPQRSTVWY")


@dataclass(frozen=True)
class Orf:
    """A maximal start-to-stop span, in top-strand coordinates.

    ``end - start`` counts nucleotides including the stop codon. ``frame``
    is the offset within the strand actually read (the reverse complement
    for minus-strand hits). ``protein`` excludes the stop.
    """

    start: int
    end: int
    strand: str
    frame: int
    protein: str

    def __len__(self) -> int:
        return self.end - self.start


def _scan_strand(text: str, length: int, circular: bool, table: CodonTable) -> list[tuple[int, int, int, str]]:
    """Maximal ATG->stop spans as (start, end, frame, protein) on this strand.

    Circular scans read a tripled copy and keep spans starting in the middle
    lap, so origin-crossing frames see a full lap of context on both sides.
    """
    stops = table.stop_codons
    if circular:
        window = text * 3
        lo, hi = length, 2 * length
    else:
        window = text
        lo, hi = 0, len(text)
    spans: list[tuple[int, int, int, str]] = []
    for frame in range(3):
        start: int | None = None
        for pos in range(frame, len(window) - 2, 3):
            codon = window[pos : pos + 3]
            if codon in stops:
                if start is not None and lo <= start < hi:
                    end = pos + 3
                    if end - start <= length or not circular:
                        protein = translate_span(window[start:end], table)
                        spans.append((start - lo, end - lo, (start - lo) % 3, protein))
                start = None
            elif codon == START_CODON and start is None:
                start = pos
    return spans


def translate_span(codons_text: str, table: CodonTable) -> str:
    out = []
    for pos in range(0, len(codons_text) - 2, 3):
        aa = table.codon_to_aa[codons_text[pos : pos + 3]]
        if aa == "*":
            break
        out.append(aa)
    return "".join(out)


def find_orfs(
    seq: Sequence,
    min_length: int = 300,
    codon_table: int = 11,
    strand: str = "both",
) -> list[Orf]:
    """Every maximal ATG-to-stop span of at least min_length nucleotides.

    Lengths include the stop codon. Minus-strand hits are mapped back to
    top-strand coordinates. Circular inputs are scanned across the origin,
    each span reported once; a span never exceeds one full turn.
    """
    if min_length < MIN_ORF_LENGTH:
        raise ValueError(f"min_length must be >= {MIN_ORF_LENGTH}, got {min_length}")
    if strand not in ("both", "forward", "reverse"):
        raise ValueError(f"strand must be both, forward, or reverse, got {strand!r}")
    table = load_codon_table(codon_table)
    n = len(seq)
    found: list[Orf] = []
    if strand in ("both", "forward"):
        for s, e, frame, protein in _scan_strand(seq.bases, n, seq.is_circular, table):
            if e - s >= min_length:
                found.append(Orf(start=s, end=e, strand="+", frame=frame, protein=protein))
    if strand in ("both", "reverse"):
        rc = reverse_complement_text(seq.bases)
        for s, e, frame, protein in _scan_strand(rc, n, seq.is_circular, table):
            if e - s < min_length:
                continue
            top_start = (n - e) % n if seq.is_circular else n - e
            found.append(Orf(start=top_start, end=top_start + (e - s), strand="-", frame=frame, protein=protein))
    found.sort(key=lambda o: (o.start, o.strand, o.end))
    return found


def _repeat_score(text: str, window: int) -> int:
    """Number of window positions whose text occurs elsewhere too."""
    counts = Counter(text[i : i + window] for i in range(len(text) - window + 1))
    return sum(c for c in counts.values() if c >= 2)


def _gc_error(text: str, target_percent: float) -> float:
    gap = abs(gc_fraction(text) * 100.0 - target_percent) - GC_TOLERANCE
    return gap if gap > 0 else 0.0


def _as_protein(text: str, table: CodonTable) -> tuple[str, bool]:
    """Interpret input as DNA when possible, else as protein.

    Returns (protein, had_terminal_stop). All-ACGTU text reads as DNA.
    """
    cleaned = "".join(text.split()).upper()
    if not cleaned:
        raise AlphabetError("empty input")
    if set(cleaned) <= set("ACGTU"):
        dna = normalize_bases(cleaned, what="sequence")
        protein = []
        for pos in range(0, len(dna) - 2, 3):
            aa = table.codon_to_aa[dna[pos : pos + 3]]
            if aa == "*":
                if pos + 3 < len(dna) - (len(dna) % 3):
                    raise PrematureStopError(
                        f"internal stop codon at nucleotide {pos}"
                    )
                return "".join(protein), True
            protein.append(aa)
        return "".join(protein), False
    bad = sorted(set(cleaned) - PROTEIN_LETTERS)
    if bad:
        raise AlphabetError(f"not a protein: unknown residue {bad[0]!r}")
    return cleaned, False


def optimize_translation(
    text: str,
    cg_content: float = 50.0,
    codon_table: int = 11,
    min_repeat_length: int = 12,
) -> Sequence:
    """Back-translate toward a GC target while avoiding exact repeats.

    Starts from each residue's highest-usage codon, then runs up to ten
    deterministic left-to-right repair passes, swapping a position to the
    next-best synonymous codon whenever that strictly reduces repeat count
    first and GC error second. GC within 2 points of the target counts as
    met; the achieved GC goes in the result description.
    """
    if not 20.0 <= cg_content <= 80.0:
        raise ValueError(f"cg_content must be within [20, 80], got {cg_content}")
    if min_repeat_length < 8:
        raise ValueError(f"min_repeat_length must be >= 8, got {min_repeat_length}")
    table = load_codon_table(codon_table)
    usage = load_codon_usage(codon_table)
    protein, terminal_stop = _as_protein(text, table)

    residues = protein + ("*" if terminal_stop else "")
    choices = [usage.aa_to_codons[aa] for aa in residues]
    picks = [0] * len(residues)

    def render() -> str:
        return "".join(choices[i][picks[i]][0] for i in range(len(residues)))

    def score(dna: str) -> tuple[int, float]:
        return (_repeat_score(dna, min_repeat_length), _gc_error(dna, cg_content))

    current = render()
    best = score(current)
    for _ in range(MAX_REPAIR_PASSES):
        if best == (0, 0.0):
            break
        changed = False
        for i in range(len(residues)):
            options = choices[i]
            if len(options) < 2:
                continue
            rank = picks[i]
            for step in range(1, len(options)):
                trial_rank = (rank + step) % len(options)
                picks[i] = trial_rank
                trial = render()
                trial_score = score(trial)
                if trial_score < best:
                    current, best = trial, trial_score
                    changed = True
                    break
                picks[i] = rank
        if not changed:
            break

    gc = gc_fraction(current) * 100.0
    return Sequence(
        name="optimized",
        bases=current,
        topology=LINEAR,
        description=f"codon-optimized, GC {gc:.1f}%",
    )
