"""Homology- and overhang-directed assembly.

Both assemblers work the same way underneath: every input piece is
considered in both orientations, each right end is matched against
candidate left ends, a right end with two or more distinct partners is an
ambiguity error, and the resulting unique successor relation decomposes
into open chains and closed cycles. Gibson matches exact terminal homology
of at least MIN_HOMOLOGY bases and chews back the duplicated overlap;
Golden Gate digests with a Type IIS enzyme first and matches the staggered
overhang text left by the cuts.

Products are deterministic: member names are joined with '+', circular
products are rotated to start at the lexicographically first piece, and
that piece is reported in its input orientation.
"""
from __future__ import annotations

from dataclasses import dataclass

from .enzymes import (
    EnzymeCatalogue,
    Fragment,
    default_catalogue,
    enzyme_cut,
    find_sites,
)
from .errors import (
    AmbiguousAssemblyError,
    NoAssemblyError,
    NotTypeIISError,
    TopologyError,
)
from .sequences import (
    CIRCULAR,
    LINEAR,
    Sequence,
    merge,
    reverse_complement_text,
)

__all__ = [
    "MIN_HOMOLOGY",
    "Join",
    "AssemblyProduct",
    "gibson",
    "goldengate",
    "render_products",
]

MIN_HOMOLOGY = 20


@dataclass(frozen=True)
class Join:
    """One junction: the named pieces joined and the shared text between them."""

    left: str
    right: str
    overlap: str


@dataclass(frozen=True)
class AssemblyProduct:
    seq: Sequence
    joins: tuple[Join, ...]


# A node is one piece in one orientation: (piece index, +1 or -1).
_Node = tuple[int, int]


def _max_overlap(a: str, b: str, min_len: int) -> int:
    """Largest proper terminal overlap: a's suffix equal to b's prefix."""
    top = min(len(a), len(b)) - 1
    for length in range(top, min_len - 1, -1):
        if a[-length:] == b[:length]:
            return length
    return 0


def _successors(
    names: list[str],
    candidates: dict[_Node, list[tuple[_Node, str]]],
) -> dict[_Node, tuple[_Node, str]]:
    """Collapse candidate lists to a unique successor per right end."""
    succ: dict[_Node, tuple[_Node, str]] = {}
    for node, cands in candidates.items():
        if len(cands) > 1:
            i, _ = node
            partners = sorted({names[j] for (j, _), _ in cands})
            raise AmbiguousAssemblyError(
                f"{names[i]} can join more than one partner: {', '.join(partners)}"
            )
        if cands:
            succ[node] = cands[0]
    return succ


def _walk_products(
    names: list[str],
    texts: dict[_Node, str],
    succ: dict[_Node, tuple[_Node, str]],
    chew: bool,
    emit_chains: bool,
) -> list[AssemblyProduct]:
    preds: dict[_Node, _Node] = {}
    for node, (target, _) in succ.items():
        preds[target] = node

    products: list[AssemblyProduct] = []
    visited: set[_Node] = set()

    all_nodes = sorted(texts)

    def rep_key(walk: list[_Node]) -> tuple[tuple[str, int], ...]:
        return tuple((names[i], 0 if o == 1 else 1) for i, o in walk)

    def build(walk: list[_Node], overlaps: list[str], closing: str | None) -> AssemblyProduct:
        bases = texts[walk[0]]
        joins: list[Join] = []
        for idx in range(1, len(walk)):
            shared = overlaps[idx - 1]
            piece = texts[walk[idx]]
            joins.append(Join(names[walk[idx - 1][0]], names[walk[idx][0]], shared))
            bases += piece[len(shared) :] if chew else piece
        name = "+".join(names[i] for i, _ in walk)
        if closing is None:
            return AssemblyProduct(
                seq=Sequence(name=name, bases=bases, topology=LINEAR), joins=tuple(joins)
            )
        joins.append(Join(names[walk[-1][0]], names[walk[0][0]], closing))
        if chew and closing:
            bases = bases[: len(bases) - len(closing)]
        return AssemblyProduct(
            seq=Sequence(name=name, bases=bases, topology=CIRCULAR), joins=tuple(joins)
        )

    # Open chains first (only nodes that never appear as a successor).
    # Every chain is walked twice, once per strand; the copy with the
    # smaller (name, orientation) key is the one that gets emitted.
    for node in all_nodes:
        if node in preds or node in visited:
            continue
        walk = [node]
        overlaps: list[str] = []
        while walk[-1] in succ:
            target, shared = succ[walk[-1]]
            overlaps.append(shared)
            walk.append(target)
        for n_ in walk:
            visited.add(n_)
        mirror = [(i, -o) for i, o in reversed(walk)]
        if rep_key(walk) > rep_key(mirror):
            continue
        if emit_chains:
            products.append(build(walk, overlaps, closing=None))

    # Remaining nodes with successors sit on cycles.
    for node in all_nodes:
        if node in visited or node not in succ:
            continue
        cycle = [node]
        cur = succ[node][0]
        while cur != node:
            cycle.append(cur)
            cur = succ[cur][0]
        for n_ in cycle:
            visited.add(n_)
        # Anchor on the lexicographically first name, preferring its
        # forward-orientation node so fixtures reassemble rotation-equal.
        anchor_name = min(names[i] for i, _ in cycle)
        anchor_options = [n_ for n_ in cycle if names[n_[0]] == anchor_name]
        anchor = min(anchor_options, key=lambda n_: n_[1] == -1)
        if anchor[1] == -1:
            continue  # this is the mirror copy; the +1 copy forms its own cycle
        at = cycle.index(anchor)
        walk = cycle[at:] + cycle[:at]
        overlaps = [succ[walk[i]][1] for i in range(len(walk) - 1)]
        closing = succ[walk[-1]][1]
        products.append(build(walk, overlaps, closing=closing))

    products.sort(key=lambda p: p.seq.name)
    return products


def gibson(seqs: list[Sequence]) -> list[AssemblyProduct]:
    """Join linear members on exact terminal homology of >= 20 bases.

    Members may be used in either orientation. A path whose final right end
    overlaps its own left end circularizes, duplicated overlaps are chewed
    back, and members that join nothing pass through unchanged. With more
    than one member and no junction at all the assembly fails.
    """
    pool = merge(seqs)
    for seq in pool:
        if seq.is_circular:
            raise TopologyError(f"gibson members must be linear: {seq.name}")
    names = pool.names()
    texts: dict[_Node, str] = {}
    for i, seq in enumerate(pool):
        texts[(i, 1)] = seq.bases
        texts[(i, -1)] = reverse_complement_text(seq.bases)

    candidates: dict[_Node, list[tuple[_Node, str]]] = {}
    for node, a in texts.items():
        i, o = node
        cands: list[tuple[_Node, str]] = []
        for other, b in texts.items():
            j, o2 = other
            if j == i and o2 != o:
                continue  # a member cannot join its own reverse complement
            length = _max_overlap(a, b, MIN_HOMOLOGY)
            if length:
                cands.append((other, b[:length]))
        candidates[node] = cands

    succ = _successors(names, candidates)
    if len(names) > 1 and not succ:
        raise NoAssemblyError("no terminal homology of at least 20 bases between members")
    return _walk_products(names, texts, succ, chew=True, emit_chains=True)


def _end_token(frag: Fragment, which: int, flipped: bool) -> tuple[int, str] | None:
    """Ligatable-end descriptor: (overhang sign, top-strand overhang text)."""
    cut = frag.source_cuts[1 - which if flipped else which]
    if cut is None or cut.overhang == 0:
        return None
    sign = 1 if cut.overhang > 0 else -1
    text = reverse_complement_text(cut.overhang_text) if flipped else cut.overhang_text
    return (sign, text)


def _flipped_fragment_text(frag: Fragment) -> str:
    """Top-strand text of a fragment used in the flipped orientation.

    Fragment text runs between top-strand cuts. Flipping the molecule turns
    the old bottom-strand cuts into the new top-strand cuts, so the interval
    shifts by the overhang width at each cut end before complementing.
    """
    text = frag.seq.bases
    left, right = frag.source_cuts
    if right is not None:
        text = text + right.overhang_text if right.overhang >= 0 else text[: right.overhang]
    if left is not None:
        text = text[left.overhang :] if left.overhang >= 0 else left.overhang_text + text
    return reverse_complement_text(text)


def goldengate(
    seqs: list[Sequence],
    enzyme_name: str,
    catalogue: EnzymeCatalogue | None = None,
) -> list[AssemblyProduct]:
    """One-pot Type IIS digestion and ligation.

    Every member is digested, fragments still carrying a recognition site on
    either strand are discarded, and remaining fragments ligate wherever one
    right overhang text equals another left overhang text, in either
    orientation. Only closed circles are reported, and they carry no
    recognition site by construction.
    """
    pool = merge(seqs)
    cat = catalogue or default_catalogue()
    enzyme = cat.get(enzyme_name)
    if not enzyme.type_iis:
        raise NotTypeIISError(f"{enzyme.name} is not a Type IIS enzyme")

    kept: list[Fragment] = []
    for seq in pool:
        for frag in enzyme_cut(seq, enzyme):
            if find_sites(frag.seq, enzyme):
                continue
            kept.append(frag)
    if not kept:
        raise NoAssemblyError("digestion left no usable fragments")

    names = [frag.seq.name for frag in kept]
    texts: dict[_Node, str] = {}
    left_tokens: dict[_Node, tuple[int, str] | None] = {}
    right_tokens: dict[_Node, tuple[int, str] | None] = {}
    for i, frag in enumerate(kept):
        for o in (1, -1):
            flipped = o == -1
            texts[(i, o)] = _flipped_fragment_text(frag) if flipped else frag.seq.bases
            left_tokens[(i, o)] = _end_token(frag, 0, flipped)
            right_tokens[(i, o)] = _end_token(frag, 1, flipped)

    candidates: dict[_Node, list[tuple[_Node, str]]] = {}
    for node in texts:
        i, o = node
        token = right_tokens[node]
        cands: list[tuple[_Node, str]] = []
        if token is not None:
            for other in texts:
                j, o2 = other
                if j == i and o2 != o:
                    continue
                if left_tokens[other] == token:
                    cands.append((other, token[1]))
        candidates[node] = cands

    succ = _successors(names, candidates)
    products = _walk_products(names, texts, succ, chew=False, emit_chains=False)
    if not products:
        raise NoAssemblyError("no closed assembly could be formed")
    return products


def render_products(products: list[AssemblyProduct]) -> str:
    lines = []
    for product in products:
        lines.append(
            f"{product.seq.name}: {len(product.seq)} bp, {product.seq.topology}, "
            f"{len(product.joins)} junction(s)"
        )
        for join in product.joins:
            lines.append(f"  {join.left} | {join.right}  ({len(join.overlap)} nt shared)")
    return "\n".join(lines)
