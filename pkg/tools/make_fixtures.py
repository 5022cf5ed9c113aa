"""Regenerate the bundled data assets under src/clonegym/data.

Everything here is deterministic (fixed seeds) so reruns are byte-stable.
The registry fixtures are synthetic stand-ins with realistic names and
lengths, not the real genes; they exist so search, annotation, and the
agent environments have a self-contained corpus to work against.

Run from the repository root:

    python tools/make_fixtures.py
"""
from __future__ import annotations

import json
import os
import random
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "src", "clonegym", "data")

sys.path.insert(0, os.path.join(ROOT, "src"))

# The standard genetic code, written out once.
GENETIC_CODE = {
    "TTT": "F", "TTC": "F", "TTA": "L", "TTG": "L",
    "CTT": "L", "CTC": "L", "CTA": "L", "CTG": "L",
    "ATT": "I", "ATC": "I", "ATA": "I", "ATG": "M",
    "GTT": "V", "GTC": "V", "GTA": "V", "GTG": "V",
    "TCT": "S", "TCC": "S", "TCA": "S", "TCG": "S",
    "CCT": "P", "CCC": "P", "CCA": "P", "CCG": "P",
    "ACT": "T", "ACC": "T", "ACA": "T", "ACG": "T",
    "GCT": "A", "GCC": "A", "GCA": "A", "GCG": "A",
    "TAT": "Y", "TAC": "Y", "TAA": "*", "TAG": "*",
    "CAT": "H", "CAC": "H", "CAA": "Q", "CAG": "Q",
    "AAT": "N", "AAC": "N", "AAA": "K", "AAG": "K",
    "GAT": "D", "GAC": "D", "GAA": "E", "GAG": "E",
    "TGT": "C", "TGC": "C", "TGA": "*", "TGG": "W",
    "CGT": "R", "CGC": "R", "CGA": "R", "CGG": "R",
    "AGT": "S", "AGC": "S", "AGA": "R", "AGG": "R",
    "GGT": "G", "GGC": "G", "GGA": "G", "GGG": "G",
}

START_CODONS = {
    1: {"TTG", "CTG", "ATG"},
    11: {"TTG", "CTG", "ATT", "ATC", "ATA", "ATG", "GTG"},
}

# E. coli K-12 usage, fraction of each amino acid's codons (public values,
# lightly rounded; renormalized below so every group sums to exactly 1).
CODON_USAGE_11 = {
    "A": [("GCG", 0.36), ("GCC", 0.27), ("GCA", 0.21), ("GCT", 0.16)],
    "R": [("CGC", 0.40), ("CGT", 0.38), ("CGG", 0.10), ("CGA", 0.06), ("AGA", 0.04), ("AGG", 0.02)],
    "N": [("AAC", 0.55), ("AAT", 0.45)],
    "D": [("GAT", 0.63), ("GAC", 0.37)],
    "C": [("TGC", 0.55), ("TGT", 0.45)],
    "Q": [("CAG", 0.65), ("CAA", 0.35)],
    "E": [("GAA", 0.68), ("GAG", 0.32)],
    "G": [("GGC", 0.40), ("GGT", 0.34), ("GGG", 0.15), ("GGA", 0.11)],
    "H": [("CAT", 0.57), ("CAC", 0.43)],
    "I": [("ATT", 0.51), ("ATC", 0.42), ("ATA", 0.07)],
    "L": [("CTG", 0.50), ("TTA", 0.13), ("TTG", 0.13), ("CTC", 0.10), ("CTT", 0.10), ("CTA", 0.04)],
    "K": [("AAA", 0.74), ("AAG", 0.26)],
    "M": [("ATG", 1.00)],
    "F": [("TTT", 0.57), ("TTC", 0.43)],
    "P": [("CCG", 0.52), ("CCA", 0.19), ("CCT", 0.16), ("CCC", 0.13)],
    "S": [("AGC", 0.28), ("TCT", 0.15), ("TCC", 0.15), ("TCG", 0.15), ("AGT", 0.15), ("TCA", 0.12)],
    "T": [("ACC", 0.44), ("ACG", 0.27), ("ACT", 0.17), ("ACA", 0.12)],
    "W": [("TGG", 1.00)],
    "Y": [("TAT", 0.57), ("TAC", 0.43)],
    "V": [("GTG", 0.37), ("GTT", 0.26), ("GTC", 0.22), ("GTA", 0.15)],
    "*": [("TAA", 0.64), ("TGA", 0.29), ("TAG", 0.07)],
}

# name, recognition, cut_top, cut_bottom, type_iis. Offsets are measured
# from the start of the recognition text on the strand carrying it; Type IIS
# enzymes cut downstream of the site, so their offsets exceed its length.
ENZYMES = [
    ("AluI", "AGCT", 2, 2, 0),
    ("ApaI", "GGGCCC", 5, 1, 0),
    ("AvaI", "CYCGRG", 1, 5, 0),
    ("BamHI", "GGATCC", 1, 5, 0),
    ("BglII", "AGATCT", 1, 5, 0),
    ("BstXI", "CCANNNNNNTGG", 8, 4, 0),
    ("DraI", "TTTAAA", 3, 3, 0),
    ("EcoRI", "GAATTC", 1, 5, 0),
    ("EcoRV", "GATATC", 3, 3, 0),
    ("HaeIII", "GGCC", 2, 2, 0),
    ("HincII", "GTYRAC", 3, 3, 0),
    ("HindIII", "AAGCTT", 1, 5, 0),
    ("HpaI", "GTTAAC", 3, 3, 0),
    ("KpnI", "GGTACC", 5, 1, 0),
    ("MluI", "ACGCGT", 1, 5, 0),
    ("NcoI", "CCATGG", 1, 5, 0),
    ("NdeI", "CATATG", 2, 4, 0),
    ("NheI", "GCTAGC", 1, 5, 0),
    ("NotI", "GCGGCCGC", 2, 6, 0),
    ("PstI", "CTGCAG", 5, 1, 0),
    ("PvuII", "CAGCTG", 3, 3, 0),
    ("SacI", "GAGCTC", 5, 1, 0),
    ("SalI", "GTCGAC", 1, 5, 0),
    ("Sau3AI", "GATC", 0, 4, 0),
    ("ScaI", "AGTACT", 3, 3, 0),
    ("SmaI", "CCCGGG", 3, 3, 0),
    ("SpeI", "ACTAGT", 1, 5, 0),
    ("SphI", "GCATGC", 5, 1, 0),
    ("XbaI", "TCTAGA", 1, 5, 0),
    ("XhoI", "CTCGAG", 1, 5, 0),
    ("XmaI", "CCCGGG", 1, 5, 0),
    ("AarI", "CACCTGC", 11, 15, 1),
    ("BbsI", "GAAGAC", 8, 12, 1),
    ("BsaI", "GGTCTC", 7, 11, 1),
    ("BsmBI", "CGTCTC", 7, 11, 1),
    ("SapI", "GCTCTTC", 8, 11, 1),
]


def write(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    print(f"wrote {os.path.relpath(path, ROOT)}")


def gen_codon_tables() -> None:
    for table_id, starts in START_CODONS.items():
        lines = ["# codon\tamino_acid\tis_start"]
        for codon in sorted(GENETIC_CODE):
            aa = GENETIC_CODE[codon]
            lines.append(f"{codon}\t{aa}\t{1 if codon in starts else 0}")
        write(os.path.join(DATA, f"codon_table_{table_id}.tsv"), "\n".join(lines) + "\n")


def gen_codon_usage() -> None:
    lines = ["# amino_acid\tcodon\tfrequency"]
    for aa in sorted(CODON_USAGE_11):
        entries = CODON_USAGE_11[aa]
        codons = {c for c, _ in entries}
        expected = {c for c, a in GENETIC_CODE.items() if a == aa}
        if codons != expected:
            raise SystemExit(f"usage table for {aa!r} does not cover its codons")
        total = sum(f for _, f in entries)
        # Fold any rounding slack into the top codon so the sum is exact.
        head_codon, head_freq = entries[0]
        adjusted = [(head_codon, round(head_freq + (1.0 - total), 6))] + entries[1:]
        for codon, freq in adjusted:
            lines.append(f"{aa}\t{codon}\t{freq:.6f}")
    write(os.path.join(DATA, "codon_usage_11.tsv"), "\n".join(lines) + "\n")


def gen_enzymes() -> None:
    lines = ["# name\trecognition\tcut_top\tcut_bottom\ttype_iis"]
    for name, recognition, cut_top, cut_bottom, type_iis in ENZYMES:
        lines.append(f"{name}\t{recognition}\t{cut_top}\t{cut_bottom}\t{type_iis}")
    write(os.path.join(DATA, "enzymes.tsv"), "\n".join(lines) + "\n")


NON_STOP_CODONS = sorted(c for c, aa in GENETIC_CODE.items() if aa != "*")

# (name, kind, length or literal bases); CDS lengths include ATG and TAA.
FEATURES = [
    ("GFP", "protein", 720),
    ("mCherry", "protein", 711),
    ("AmpR", "protein", 861),
    ("KanR", "protein", 816),
    ("CmR", "protein", 660),
    ("TcR", "protein", 1191),
    ("SmR", "protein", 792),
    ("lacZalpha", "protein", 324),
    ("ccdB", "protein", 306),
    ("ColE1_ori", "ori", 589),
    ("p15A_ori", "ori", 546),
    ("f1_ori", "ori", 456),
    ("T7_promoter", "misc", "TAATACGACTCACTATAGGG"),
    ("lac_promoter", "misc", 60),
    ("T7_terminator", "misc", 120),
    ("His6_tag", "misc", "CACCACCACCACCACCAC"),
]

PLASMIDS = [
    ("pUC19", [("AmpR", "+"), ("lacZalpha", "-"), ("ColE1_ori", "+")]),
    ("pUC18", [("AmpR", "+"), ("lacZalpha", "+"), ("ColE1_ori", "+")]),
    ("pBR322", [("AmpR", "+"), ("TcR", "+"), ("ColE1_ori", "+")]),
    ("pET28a", [("KanR", "+"), ("T7_promoter", "+"), ("His6_tag", "+"), ("T7_terminator", "+"), ("ColE1_ori", "-")]),
    ("pET21b", [("AmpR", "+"), ("T7_promoter", "+"), ("His6_tag", "+"), ("T7_terminator", "+"), ("ColE1_ori", "+")]),
    ("pACYC184", [("CmR", "+"), ("TcR", "-"), ("p15A_ori", "+")]),
    ("pACYC177", [("AmpR", "+"), ("KanR", "+"), ("p15A_ori", "+")]),
    ("pBluescriptII", [("AmpR", "+"), ("lacZalpha", "+"), ("ColE1_ori", "+"), ("f1_ori", "+")]),
    ("pGEMT", [("AmpR", "+"), ("lacZalpha", "+"), ("ColE1_ori", "+"), ("f1_ori", "-")]),
    ("pEGFP", [("GFP", "+"), ("KanR", "+"), ("ColE1_ori", "+"), ("lac_promoter", "+")]),
    ("pmCherry", [("mCherry", "+"), ("KanR", "+"), ("ColE1_ori", "+"), ("lac_promoter", "+")]),
    ("pBAD33", [("CmR", "+"), ("p15A_ori", "+"), ("lac_promoter", "+")]),
    ("pTrc99a", [("AmpR", "+"), ("ColE1_ori", "+"), ("lac_promoter", "+")]),
    ("pRSFDuet", [("KanR", "+"), ("T7_promoter", "+"), ("ColE1_ori", "+")]),
    ("pCDFDuet", [("SmR", "+"), ("T7_promoter", "+"), ("ColE1_ori", "+")]),
    ("pGEX", [("AmpR", "+"), ("lac_promoter", "+"), ("ColE1_ori", "+")]),
    ("pMAL", [("AmpR", "+"), ("lac_promoter", "+"), ("ColE1_ori", "+"), ("lacZalpha", "+")]),
    ("pKD46", [("AmpR", "+"), ("ColE1_ori", "+")]),
    ("pSB1C3", [("CmR", "+"), ("ColE1_ori", "+"), ("T7_terminator", "+")]),
    ("pSB1A3", [("AmpR", "+"), ("ColE1_ori", "+"), ("T7_terminator", "+")]),
    ("pDonor", [("ccdB", "+"), ("CmR", "+"), ("ColE1_ori", "+")]),
]

# (file, id, title, cds length)
GENES = [
    ("fluorescent", "GFP", "green fluorescent protein CDS", None),
    ("fluorescent", "mCherry", "red fluorescent protein mCherry CDS", None),
    ("core", "lacZ", "beta-galactosidase lacZ CDS", 999),
    ("core", "araC", "arabinose operon regulator araC CDS", 879),
    ("core", "recA", "recombinase A recA CDS", 1062),
    ("core", "polA", "DNA polymerase I polA CDS", 1287),
    ("core", "polB", "DNA polymerase II polB CDS", 1200),
    ("core", "dnaE", "DNA polymerase III alpha subunit dnaE CDS", 1500),
    ("core", "rpoB", "RNA polymerase beta subunit rpoB CDS", 1344),
    ("core", "rpoC", "RNA polymerase beta prime subunit rpoC CDS", 1407),
    ("phage", "t7rnap", "T7 RNA polymerase CDS", 1500),
    ("phage", "phi29pol", "phi29 DNA polymerase CDS", 1725),
]

COMPLEMENT = str.maketrans("ACGT", "TGCA")


def synth_dna(rng: random.Random, length: int) -> str:
    return "".join(rng.choice("ACGT") for _ in range(length))


def synth_cds(rng: random.Random, length: int) -> str:
    if length % 3 != 0 or length < 6:
        raise SystemExit(f"CDS length must be a positive multiple of 3, got {length}")
    interior = (length - 6) // 3
    body = "".join(rng.choice(NON_STOP_CODONS) for _ in range(interior))
    return "ATG" + body + "TAA"


def fasta_block(name: str, description: str, bases: str, circular: bool = False) -> str:
    header = ">" + name
    if circular:
        header += " [circular]"
    if description:
        header += " " + description
    lines = [header]
    for i in range(0, len(bases), 60):
        lines.append(bases[i : i + 60])
    return "\n".join(lines) + "\n"


def build_features(rng: random.Random) -> dict[str, tuple[str, str]]:
    """name -> (kind, bases)"""
    built: dict[str, tuple[str, str]] = {}
    for name, kind, spec in FEATURES:
        if isinstance(spec, str):
            bases = spec
        elif kind == "protein":
            bases = synth_cds(rng, spec)
        else:
            bases = synth_dna(rng, spec)
        built[name] = (kind, bases)
    return built


def gen_features() -> dict[str, tuple[str, str]]:
    rng = random.Random(160301)
    built = build_features(rng)
    blocks = [fasta_block(name, f"kind={kind}", bases) for name, (kind, bases) in built.items()]
    write(os.path.join(DATA, "features.fa"), "".join(blocks))
    return built


def gen_plasmids(features: dict[str, tuple[str, str]]) -> None:
    rng = random.Random(160302)
    fasta_parts: list[str] = []
    sidecar: list[str] = []
    for plasmid_name, placements in PLASMIDS:
        bases = synth_dna(rng, rng.randrange(300, 700))
        for feat_name, strand in placements:
            kind, feat_bases = features[feat_name]
            planted = feat_bases if strand == "+" else feat_bases.translate(COMPLEMENT)[::-1]
            start = len(bases)
            bases += planted
            row = {
                "plasmid": plasmid_name,
                "name": feat_name,
                "start": start,
                "end": start + len(planted),
                "strand": strand,
                "kind": kind,
            }
            sidecar.append(json.dumps(row, sort_keys=True))
            bases += synth_dna(rng, rng.randrange(200, 600))
        fasta_parts.append(fasta_block(plasmid_name, "synthetic fixture", bases, circular=True))
    write(os.path.join(DATA, "plasmids", "plasmids.fa"), "".join(fasta_parts))
    write(os.path.join(DATA, "plasmids", "features.jsonl"), "\n".join(sidecar) + "\n")


def gen_genes(features: dict[str, tuple[str, str]]) -> None:
    rng = random.Random(160303)
    files: dict[str, list[str]] = {}
    for file_stem, gene_id, title, length in GENES:
        if length is None:
            bases = features[gene_id][1]
        else:
            bases = synth_cds(rng, length)
        files.setdefault(file_stem, []).append(fasta_block(gene_id, title, bases))
    for stem, blocks in sorted(files.items()):
        write(os.path.join(DATA, "genes", f"{stem}.fa"), "".join(blocks))


# ---------------------------------------------------------------------------
# Task datasets. Every ideal answer is planted by construction; the library
# is then asserted to agree, so a regression here fails generation instead of
# silently baking a wrong answer into the fixtures.

# stop codons in all three frames, no ATG, no G
STOP_BLOCK = "TTAATTAATTAA"

UNSURE_TEXTS = [
    "Cannot be determined from the given information",
    "Not enough information to tell",
    "The inputs do not determine this",
]


def synth_dna_avoiding(rng: random.Random, length: int, forbidden: list[str]) -> str:
    from clonegym.sequences import reverse_complement_text

    patterns = set(forbidden) | {reverse_complement_text(p) for p in forbidden}
    while True:
        bases = synth_dna(rng, length)
        doubled = bases + bases
        if not any(p in doubled for p in patterns):
            return bases


def _mc_options(rng: random.Random, correct, distractors, unsure_index: int) -> tuple[list[dict], str, str]:
    """Shuffle one correct value, three distractors, and an unsure option."""
    values = [str(correct)] + [str(d) for d in distractors]
    rng.shuffle(values)
    values.append(UNSURE_TEXTS[unsure_index % len(UNSURE_TEXTS)])
    letters = "ABCDE"
    options = [{"letter": letters[i], "text": v} for i, v in enumerate(values)]
    ideal = letters[values.index(str(correct))]
    return options, ideal, letters[len(values) - 1]


def _task(rng, task_id, question, correct, distractors, inputs=()):
    options, ideal, unsure = _mc_options(rng, correct, distractors, len(task_id))
    return {
        "id": task_id,
        "question": question,
        "options": options,
        "ideal": ideal,
        "unsure_letter": unsure,
        "inputs": [
            {"name": s.name, "bases": s.bases, "topology": s.topology} for s in inputs
        ],
    }


def gen_cloning_tasks() -> None:
    from clonegym.assembly import gibson, goldengate
    from clonegym.enzymes import enzyme_cut
    from clonegym.orfs import find_orfs
    from clonegym.pcr import melting_temp, simulate_pcr
    from clonegym.sequences import Sequence, gc_fraction, reverse_complement_text

    rng = random.Random(160304)
    tasks = []

    # digestion counts: circular plasmids with n planted EcoRI sites -> n fragments
    for i, n_sites in enumerate([2, 3]):
        site = "GAATTC"
        parts = []
        for _ in range(n_sites):
            parts.append(site)
            parts.append(synth_dna_avoiding(rng, rng.randrange(220, 420), [site]))
        seq = Sequence(name=f"plasmid_d{i}", bases="".join(parts), topology="circular")
        assert len(enzyme_cut(seq, "EcoRI")) == n_sites
        tasks.append(_task(
            rng, f"digest_circ_{i}",
            f"How many fragments does an EcoRI digest of {seq.name} produce?",
            n_sites, sorted({n_sites + 1, n_sites - 1, n_sites + 2} - {n_sites})[:3],
            inputs=(seq,),
        ))

    # linear digest: n sites -> n+1 fragments
    site = "GGATCC"
    bases = (synth_dna_avoiding(rng, 300, [site]) + site
             + synth_dna_avoiding(rng, 250, [site]) + site
             + synth_dna_avoiding(rng, 200, [site]))
    seq = Sequence(name="insert_d2", bases=bases, topology="linear")
    assert len(enzyme_cut(seq, "BamHI")) == 3
    tasks.append(_task(
        rng, "digest_linear_0",
        "How many fragments does a BamHI digest of insert_d2 produce?",
        3, [2, 4, 1], inputs=(seq,),
    ))

    # Gibson: two parts with 25 bp terminal homology -> one circle of known size
    for i, cut in enumerate([(0, 480), (0, 350)]):
        total = rng.randrange(900, 1200)
        circle = synth_dna_avoiding(rng, total, [])
        a = cut[1]
        part1 = Sequence(name=f"part_a{i}", bases=circle[: a + 25], topology="linear")
        part2 = Sequence(name=f"part_b{i}", bases=circle[a:] + circle[:25], topology="linear")
        products = gibson([part1, part2])
        assert len(products) == 1
        assert products[0].seq.topology == "circular"
        assert len(products[0].seq) == total
        tasks.append(_task(
            rng, f"gibson_len_{i}",
            f"A Gibson assembly of {part1.name} and {part2.name} yields one circular "
            "product. How many base pairs long is it?",
            total, [total + 25, total + 50, total - 25],
            inputs=(part1, part2),
        ))

    # Golden Gate: three parts, BsaI, planted junction tokens -> one circle
    tokens = ["AACG", "CTTG", "GCAT"]
    payloads = [synth_dna_avoiding(rng, rng.randrange(160, 260), ["GGTCTC"]) for _ in range(3)]
    gg_parts = []
    for i in range(3):
        left, right = tokens[i], tokens[(i + 1) % 3]
        body = ("GGTCTC" + "A" + left + payloads[i] + right + "A" + "GAGACC")
        pad_l = synth_dna_avoiding(rng, 30, ["GGTCTC"])
        pad_r = synth_dna_avoiding(rng, 30, ["GGTCTC"])
        gg_parts.append(Sequence(name=f"module_{i}", bases=pad_l + body + pad_r, topology="linear"))
    gg_products = goldengate(gg_parts, "BsaI")
    assert len(gg_products) == 1 and gg_products[0].seq.topology == "circular"
    gg_len = sum(len(p) + 4 for p in payloads)
    assert len(gg_products[0].seq) == gg_len
    tasks.append(_task(
        rng, "goldengate_count_0",
        "How many circular products does a BsaI Golden Gate assembly of module_0, "
        "module_1, and module_2 produce?",
        1, [0, 2, 3], inputs=tuple(gg_parts),
    ))
    tasks.append(_task(
        rng, "goldengate_len_0",
        "A BsaI Golden Gate assembly of module_0, module_1, and module_2 yields one "
        "circular product. How many base pairs long is it?",
        gg_len, [gg_len + 12, gg_len - 4, gg_len + 4], inputs=tuple(gg_parts),
    ))

    # PCR with end primers amplifies the whole template
    total = 525
    template = Sequence(name="template_p0", bases=synth_dna_avoiding(rng, total, []), topology="linear")
    fwd = template.bases[:20]
    rev = reverse_complement_text(template.bases[-20:])
    product = simulate_pcr(template, fwd, rev)
    assert len(product.amplicon) == total
    tasks.append(_task(
        rng, "pcr_len_0",
        f"PCR on template_p0 with forward primer {fwd} and reverse primer {rev} "
        "yields an amplicon of how many base pairs?",
        total, [total - 20, total - 40, total + 20], inputs=(template,),
    ))

    # ORF counting: planted CDS runs separated by all-frame stop blocks
    cds_lengths = [450, 603]
    orf_parts = [STOP_BLOCK * 3]
    for length in cds_lengths:
        orf_parts.append(synth_cds(rng, length))
        orf_parts.append(STOP_BLOCK * 3)
    orf_seq = Sequence(name="orf_probe_0", bases="".join(orf_parts), topology="linear")
    found = find_orfs(orf_seq, min_length=300, strand="forward")
    assert len(found) == len(cds_lengths), [len(o) for o in found]
    assert sorted(len(o) for o in found) == sorted(cds_lengths)
    tasks.append(_task(
        rng, "orf_count_0",
        "How many open reading frames of at least 300 bp does the forward strand "
        "of orf_probe_0 contain?",
        2, [1, 3, 0], inputs=(orf_seq,),
    ))
    tasks.append(_task(
        rng, "orf_protein_0",
        "The longest forward-strand open reading frame of orf_probe_0 encodes a "
        "protein of how many amino acids (stop excluded)?",
        200, [201, 150, 149], inputs=(orf_seq,),
    ))
    longest = max(found, key=len)
    assert len(longest.protein) == 200

    # GC fraction planted exactly
    gc_bases = "".join(rng.sample("G" * 6 + "C" * 6 + "A" * 6 + "T" * 6, 24))
    gc_seq = Sequence(name="gc_probe_0", bases=gc_bases, topology="linear")
    assert abs(gc_fraction(gc_bases) - 0.5) < 1e-12
    tasks.append(_task(
        rng, "gc_fraction_0",
        "What is the GC fraction of gc_probe_0?",
        "0.5", ["0.25", "0.42", "0.58"], inputs=(gc_seq,),
    ))

    # melting temperatures under the configured two-regime formula
    assert melting_temp("AATT") == 8.0
    tasks.append(_task(
        rng, "tm_short_0",
        "What is the melting temperature, in Celsius, of the primer AATT under "
        "the simple base-counting rule?",
        "8.0", ["16.0", "12.0", "4.0"],
    ))
    primer20 = "".join(rng.sample("G" * 5 + "C" * 5 + "A" * 5 + "T" * 5, 20))
    tm = melting_temp(primer20)
    assert abs(tm - 51.78) < 1e-9
    tasks.append(_task(
        rng, "tm_long_0",
        f"What is the melting temperature, in Celsius, of the 20-mer primer "
        f"{primer20} (10 G/C) under the length-adjusted GC formula, to two decimals?",
        "51.78", ["64.90", "51.08", "49.30"],
    ))

    # enzyme identification: exactly one catalogue enzyme cuts
    site = "GGTCTC"
    probe = (synth_dna_avoiding(rng, 180, [site, "GAATTC", "GGATCC", "AAGCTT"]) + site
             + synth_dna_avoiding(rng, 180, [site, "GAATTC", "GGATCC", "AAGCTT"]))
    enz_seq = Sequence(name="site_probe_0", bases=probe, topology="linear")
    assert len(enzyme_cut(enz_seq, "BsaI")) == 2
    for other in ("EcoRI", "BamHI", "HindIII"):
        assert len(enzyme_cut(enz_seq, other)) == 1
    letters = "ABCDE"
    values = ["EcoRI", "BamHI", "BsaI", "HindIII"]
    rng.shuffle(values)
    values.append(UNSURE_TEXTS[0])
    tasks.append({
        "id": "which_enzyme_0",
        "question": "Which of these enzymes cuts site_probe_0 into two fragments?",
        "options": [{"letter": letters[i], "text": v} for i, v in enumerate(values)],
        "ideal": letters[values.index("BsaI")],
        "unsure_letter": letters[4],
        "inputs": [{"name": enz_seq.name, "bases": enz_seq.bases, "topology": "linear"}],
    })

    # overhang identity: EcoRI leaves AATT
    eco_seq = Sequence(
        name="overhang_probe_0",
        bases=synth_dna_avoiding(rng, 120, ["GAATTC"]) + "GAATTC" + synth_dna_avoiding(rng, 120, ["GAATTC"]),
        topology="linear",
    )
    frags = enzyme_cut(eco_seq, "EcoRI")
    right_cut = frags[0].source_cuts[1]
    assert frags[0].three_prime_overhang == 4
    assert right_cut is not None and right_cut.overhang_text == "AATT"
    tasks.append(_task(
        rng, "overhang_0",
        "Digesting overhang_probe_0 with EcoRI leaves which single-stranded "
        "overhang sequence at the cut?",
        "AATT", ["TTAA", "GATC", "AGCT"], inputs=(eco_seq,),
    ))

    # deliberately unanswerable: the right choice is the unsure option
    mys_seq = Sequence(name="pMYS1", bases=synth_dna_avoiding(rng, 400, []), topology="circular")
    letters = "ABCDE"
    strain_values = ["DH5alpha", "BL21", "TOP10", "MG1655", UNSURE_TEXTS[1]]
    tasks.append({
        "id": "unanswerable_0",
        "question": "From which laboratory strain was pMYS1 originally isolated?",
        "options": [{"letter": letters[i], "text": v} for i, v in enumerate(strain_values)],
        "ideal": "E",
        "unsure_letter": "E",
        "inputs": [{"name": mys_seq.name, "bases": mys_seq.bases, "topology": "circular"}],
    })

    lines = [json.dumps(task, sort_keys=True) for task in tasks]
    write(os.path.join(DATA, "tasks", "cloning_demo.jsonl"), "\n".join(lines) + "\n")


CALCULATOR_TASKS = [
    ("calc_colonies", "Three plates each grow 24 colonies. How many colonies in total?", 72),
    ("calc_mix", "A reaction uses 2.5 uL of polymerase mix per tube. How many uL are needed for 12 tubes?", 30),
    ("calc_dilution", "A stock is diluted 1 in 20, and that dilution is diluted 1 in 5. What is the overall dilution factor?", 100),
    ("calc_voltage", "A gel is run at 2.2 volts per centimeter across a 15 cm gel. What is the applied voltage?", 33),
    ("calc_wells", "A 96-well plate has 8 wells reserved for controls. How many wells remain for samples?", 88),
    ("calc_cycles", "Each PCR cycle doubles the number of copies. Starting from one copy, how many copies exist after 10 cycles?", 1024),
    ("calc_primer_cost", "Primers cost 0.12 dollars per base. What do two 24-base primers cost in dollars?", 5.76),
    ("calc_doublings", "A culture doubles every 30 minutes. How many doublings happen in 4 hours?", 8),
    ("calc_pieces", "A 6.0 kb plasmid yields one 1.5 kb fragment plus several equal 0.9 kb fragments. How many 0.9 kb fragments?", 5),
    ("calc_reads", "Covering a 4800 bp construct with non-overlapping 600 bp reads requires how many reads?", 8),
    ("calc_buffer", "A buffer needs 1.2 g of salt per 100 mL. How many grams for 750 mL?", 9),
    ("calc_percent", "If 18 of 60 colonies are white, what percentage of colonies are white?", 30),
]


def gen_calculator_tasks() -> None:
    lines = []
    for task_id, question, ideal in CALCULATOR_TASKS:
        lines.append(json.dumps(
            {"id": task_id, "question": question, "ideal": float(ideal)},
            sort_keys=True,
        ))
    write(os.path.join(DATA, "tasks", "calculator_demo.jsonl"), "\n".join(lines) + "\n")


def main() -> None:
    gen_codon_tables()
    gen_codon_usage()
    gen_enzymes()
    features = gen_features()
    gen_plasmids(features)
    gen_genes(features)
    gen_cloning_tasks()
    gen_calculator_tasks()


if __name__ == "__main__":
    main()
