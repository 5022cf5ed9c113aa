"""Restriction enzymes: catalogue, site finding, and digestion.

Cut offsets are measured in bases from the start of the recognition text on
the strand that carries it. For EcoRI (GAATTC, 1/5) the top strand is cut
after base 1 of the site and the bottom strand after base 5, leaving a 4-nt
5' extension. Type IIS enzymes store offsets larger than the recognition
length because they cut downstream of the site; a site found on the bottom
strand cuts upstream with mirrored offsets.

Fragment text is the top-strand interval between successive top-strand
cuts, so re-ligating adjacent fragments in order reconstructs the parent
exactly and fragment lengths always sum to the parent length. Overhang
geometry lives in the fragment metadata: the signed overhang at an end is
cut_bottom - cut_top of the generating cut (positive for a 5' extension,
negative for a 3' extension, zero for blunt).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import EmptyPoolError, ParseError, UnknownEnzymeError
from .sequences import Sequence

__all__ = [
    "IUPAC",
    "RestrictionEnzyme",
    "EnzymeCatalogue",
    "Site",
    "CutSite",
    "Fragment",
    "load_enzyme_table",
    "default_catalogue",
    "iupac_matches",
    "find_iupac_sites",
    "reverse_complement_pattern",
    "find_sites",
    "enzyme_cut",
    "separate",
    "view_restriction_sites",
    "render_fragments",
]

IUPAC: dict[str, str] = {
    "A": "A", "C": "C", "G": "G", "T": "T",
    "R": "AG", "Y": "CT", "S": "CG", "W": "AT", "K": "GT", "M": "AC",
    "B": "CGT", "D": "AGT", "H": "ACT", "V": "ACG", "N": "ACGT",
}

_IUPAC_COMPLEMENT = str.maketrans("ACGTRYSWKMBDHVN", "TGCAYRSWMKVHDBN")


def reverse_complement_pattern(pattern: str) -> str:
    """Reverse complement of an IUPAC pattern."""
    return pattern.translate(_IUPAC_COMPLEMENT)[::-1]


@dataclass(frozen=True)
class RestrictionEnzyme:
    name: str
    recognition: str
    cut_top: int
    cut_bottom: int
    type_iis: bool = False

    def __post_init__(self) -> None:
        pattern = self.recognition.upper()
        bad = set(pattern) - set(IUPAC)
        if bad:
            raise ParseError(f"recognition for {self.name} has non-IUPAC codes: {sorted(bad)}")
        object.__setattr__(self, "recognition", pattern)

    @property
    def overhang(self) -> int:
        """Signed staggered-cut width: positive 5', negative 3', zero blunt."""
        return self.cut_bottom - self.cut_top


class EnzymeCatalogue:
    """Name-indexed enzyme collection with case-insensitive lookup."""

    def __init__(self, enzymes: list[RestrictionEnzyme]):
        self._by_key: dict[str, RestrictionEnzyme] = {}
        for enzyme in enzymes:
            key = enzyme.name.lower()
            if key in self._by_key:
                raise ParseError(f"duplicate enzyme name {enzyme.name!r}")
            self._by_key[key] = enzyme

    def __len__(self) -> int:
        return len(self._by_key)

    def __iter__(self):
        return iter(sorted(self._by_key.values(), key=lambda e: e.name))

    def __contains__(self, name: str) -> bool:
        return name.lower() in self._by_key

    def get(self, name: str) -> RestrictionEnzyme:
        try:
            return self._by_key[name.lower()]
        except KeyError:
            raise UnknownEnzymeError(f"unknown enzyme: {name!r}") from None

    def names(self) -> list[str]:
        return [e.name for e in self]


def load_enzyme_table(text: str) -> EnzymeCatalogue:
    """Parse a TSV of name, recognition, cut_top, cut_bottom, type_iis."""
    enzymes: list[RestrictionEnzyme] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise ParseError("expected 5 tab-separated fields", lineno)
        name, recognition, cut_top, cut_bottom, type_iis = fields
        try:
            enzymes.append(
                RestrictionEnzyme(
                    name=name,
                    recognition=recognition,
                    cut_top=int(cut_top),
                    cut_bottom=int(cut_bottom),
                    type_iis=type_iis not in ("0", "", "false", "False"),
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
    return EnzymeCatalogue(enzymes)


@lru_cache(maxsize=None)
def default_catalogue() -> EnzymeCatalogue:
    text = (resources.files("clonegym") / "data" / "enzymes.tsv").read_text(encoding="utf-8")
    return load_enzyme_table(text)


def iupac_matches(pattern: str, text: str, at: int) -> bool:
    if at < 0 or at + len(pattern) > len(text):
        return False
    return all(text[at + i] in IUPAC[p] for i, p in enumerate(pattern))


def find_iupac_sites(pattern: str, text: str) -> list[int]:
    """Start positions of every (possibly overlapping) pattern match."""
    return [i for i in range(len(text) - len(pattern) + 1) if iupac_matches(pattern, text, i)]


@dataclass(frozen=True)
class Site:
    """One recognition site: 0-based start of the site text on the top strand."""

    position: int
    strand: str  # "+" or "-"


@dataclass(frozen=True)
class CutSite:
    """A double-strand cut placed by one enzyme at one site."""

    enzyme: str
    position: int
    strand: str
    top_cut: int  # top-strand cut boundary, 0-based, between bases
    bottom_cut: int  # bottom-strand cut boundary in top-strand coordinates
    overhang_text: str  # top-strand text of the staggered region

    @property
    def overhang(self) -> int:
        return self.bottom_cut - self.top_cut


@dataclass(frozen=True)
class Fragment:
    """A digestion product plus the overhang geometry at each end.

    five_prime_overhang describes the left end, three_prime_overhang the
    right end; positive values are 5' single-strand extensions, negative 3',
    zero blunt (or an uncut physical end). source_cuts holds the generating
    cut at each end, None at a physical end.
    """

    seq: Sequence
    five_prime_overhang: int
    three_prime_overhang: int
    source_cuts: tuple[CutSite | None, CutSite | None]

    def __len__(self) -> int:
        return len(self.seq)


def _scan_text(seq: Sequence, pattern_len: int) -> str:
    """Text to search: circular sequences expose a window across the origin."""
    if seq.is_circular and len(seq) >= pattern_len:
        return seq.bases + seq.bases[: pattern_len - 1]
    return seq.bases


def find_sites(seq: Sequence, enzyme: RestrictionEnzyme) -> list[Site]:
    """All recognition sites on either strand, sorted by (position, strand).

    Palindromic sites are reported once, on the + strand. Site positions are
    starts of the recognition text on the top strand; on circular sequences
    sites may span the origin.
    """
    pattern = enzyme.recognition
    rc_pattern = reverse_complement_pattern(pattern)
    text = _scan_text(seq, len(pattern))
    n = len(seq)
    sites = [Site(p, "+") for p in find_iupac_sites(pattern, text) if p < n]
    if rc_pattern != pattern:
        sites.extend(Site(p, "-") for p in find_iupac_sites(rc_pattern, text) if p < n)
    sites.sort(key=lambda s: (s.position, s.strand))
    return sites


def _cut_boundaries(site: Site, enzyme: RestrictionEnzyme) -> tuple[int, int]:
    """Top and bottom cut boundaries for a site, before range handling."""
    if site.strand == "+":
        top = site.position + enzyme.cut_top
        bottom = site.position + enzyme.cut_bottom
    else:
        size = len(enzyme.recognition)
        top = site.position + size - enzyme.cut_bottom
        bottom = site.position + size - enzyme.cut_top
    return top, bottom


def _resolve_enzyme(
    enzyme: RestrictionEnzyme | str, catalogue: EnzymeCatalogue | None
) -> RestrictionEnzyme:
    if isinstance(enzyme, RestrictionEnzyme):
        return enzyme
    return (catalogue or default_catalogue()).get(enzyme)


def enzyme_cut(
    seq: Sequence,
    enzyme: RestrictionEnzyme | str,
    catalogue: EnzymeCatalogue | None = None,
) -> list[Fragment]:
    """Digest a sequence with one enzyme.

    A linear sequence with n usable cuts yields n + 1 fragments; a circular
    one with n >= 1 cuts yields n linear fragments. With no usable cut the
    input comes back unchanged as a single fragment. Sites whose cut
    boundaries fall outside a linear sequence are skipped.
    """
    enz = _resolve_enzyme(enzyme, catalogue)
    n = len(seq)
    cuts: list[CutSite] = []
    seen_boundaries: set[int] = set()
    doubled = seq.bases + seq.bases
    for site in find_sites(seq, enz):
        top, bottom = _cut_boundaries(site, enz)
        if not seq.is_circular:
            if min(top, bottom) < 0 or max(top, bottom) > n:
                continue
            overhang_text = seq.bases[min(top, bottom) : max(top, bottom)]
            key = top
        else:
            lo = min(top, bottom) % n
            overhang_text = doubled[lo : lo + abs(bottom - top)]
            shift = top - (top % n)
            top, bottom = top - shift, bottom - shift
            key = top % n
        if key in seen_boundaries:
            continue
        seen_boundaries.add(key)
        cuts.append(
            CutSite(
                enzyme=enz.name,
                position=site.position,
                strand=site.strand,
                top_cut=top,
                bottom_cut=bottom,
                overhang_text=overhang_text,
            )
        )
    cuts.sort(key=lambda c: c.top_cut)

    if not cuts:
        return [Fragment(seq=seq, five_prime_overhang=0, three_prime_overhang=0, source_cuts=(None, None))]

    fragments: list[Fragment] = []
    if not seq.is_circular:
        boundaries: list[tuple[int, CutSite | None]] = [(0, None)]
        boundaries += [(c.top_cut, c) for c in cuts]
        boundaries.append((n, None))
        for i in range(len(boundaries) - 1):
            start, left_cut = boundaries[i]
            end, right_cut = boundaries[i + 1]
            frag_seq = Sequence(name=f"{seq.name}_f{i}", bases=seq.bases[start:end])
            fragments.append(
                Fragment(
                    seq=frag_seq,
                    five_prime_overhang=left_cut.overhang if left_cut else 0,
                    three_prime_overhang=right_cut.overhang if right_cut else 0,
                    source_cuts=(left_cut, right_cut),
                )
            )
    else:
        for i, left_cut in enumerate(cuts):
            right_cut = cuts[(i + 1) % len(cuts)]
            start = left_cut.top_cut % n
            end = right_cut.top_cut % n
            # A single cut opens the full circle; start == end then means one lap.
            bases = seq.bases[start:end] if start < end else doubled[start : end + n]
            frag_seq = Sequence(name=f"{seq.name}_f{i}", bases=bases)
            fragments.append(
                Fragment(
                    seq=frag_seq,
                    five_prime_overhang=left_cut.overhang,
                    three_prime_overhang=right_cut.overhang,
                    source_cuts=(left_cut, right_cut),
                )
            )
    return fragments


def separate(seqs: list[Sequence]) -> list[Sequence]:
    """Size-separate sequences: longest first, ties keep input order."""
    if not seqs:
        raise EmptyPoolError("nothing to separate")
    return sorted(seqs, key=lambda s: -len(s))


def view_restriction_sites(
    seq: Sequence, catalogue: EnzymeCatalogue | None = None
) -> list[tuple[str, int, str]]:
    """(enzyme, position, strand) for every catalogue enzyme site, sorted."""
    cat = catalogue or default_catalogue()
    rows: list[tuple[str, int, str]] = []
    for enzyme in cat:
        for site in find_sites(seq, enzyme):
            rows.append((enzyme.name, site.position, site.strand))
    rows.sort(key=lambda r: (r[1], r[0], r[2]))
    return rows


def render_fragments(fragments: list[Fragment]) -> str:
    """Fixed-width table used by the tool observations."""
    lines = [f"{'fragment':<24}{'length':>8}  {'5_end':>6}  {'3_end':>6}"]
    for frag in fragments:
        lines.append(
            f"{frag.seq.name:<24}{len(frag):>8}  "
            f"{frag.five_prime_overhang:>6}  {frag.three_prime_overhang:>6}"
        )
    return "\n".join(lines)
