"""Molecular-cloning environment: 21 tools over a per-episode sequence store.

Rewards: 1 correct answer, -1 incorrect answer, 0.1 unsure answer; tool
errors render as observations with reward 0 and the episode continues.
Transitions are deterministic; every step consumes one of max_steps.
"""
from __future__ import annotations

from .. import assembly, enzymes, orfs, pcr, registry, sequences
from ..codons import translate
from ..errors import EpisodeOverError, NameCollisionError, SimulationError
from ..sequences import Sequence
from .base import Observation, ToolCall, ToolParam, ToolSchema, validate_call
from .tasks import Task

__all__ = ["CloningEnv", "CLONING_SCHEMAS", "reward_cloning"]

DEFAULT_MAX_STEPS = 10

REWARD_CORRECT = 1.0
REWARD_INCORRECT = -1.0
REWARD_UNSURE = 0.1


def _p(name, type_, required=True, desc=""):
    return ToolParam(name, type_, required, desc)


CLONING_SCHEMAS = (
    ToolSchema("add", "Concatenate two linear sequences end to end.",
               (_p("sequence1", "sequence"), _p("sequence2", "sequence"))),
    ToolSchema("annotate", "Annotate known features and long open reading frames.",
               (_p("sequence", "sequence"),)),
    ToolSchema("create_sequence", "Order a custom sequence; text may carry name=<id>; and circular; prefixes.",
               (_p("sequence_spec", "text"),)),
    ToolSchema("design_primers", "Design forward/reverse primers hitting a target melting temperature.",
               (_p("sequence", "sequence"),
                _p("target_tm", "number", required=False, desc="default 55"),
                _p("forward_overhang", "text", required=False),
                _p("forward_overhang_name", "text", required=False, desc="enzyme name"),
                _p("reverse_overhang", "text", required=False),
                _p("reverse_overhang_name", "text", required=False, desc="enzyme name"))),
    ToolSchema("enzyme_cut", "Digest a sequence with a restriction enzyme.",
               (_p("sequence", "sequence"), _p("enzyme", "text"))),
    ToolSchema("find_orfs", "List open reading frames.",
               (_p("sequence", "sequence"),
                _p("min_length", "integer", required=False, desc="default 300"),
                _p("codon_table", "integer", required=False, desc="default 11"),
                _p("strand", "text", required=False, desc="both, forward, or reverse"))),
    ToolSchema("find_sequence_overlap", "Locate where a primer's annealing end matches a sequence.",
               (_p("sequence", "sequence"), _p("primer", "text"),
                _p("reverse", "boolean", required=False))),
    ToolSchema("gene_search", "Search the gene database; matches are stored as sequences.",
               (_p("query", "text"),)),
    ToolSchema("gibson", "Simulate Gibson assembly of stored sequences.",
               (_p("sequences", "sequence_list"),)),
    ToolSchema("goldengate", "Simulate Golden Gate assembly with a Type IIS enzyme.",
               (_p("sequences", "sequence_list"), _p("enzyme", "text"))),
    ToolSchema("merge", "Combine stored sequences into a named pool for assembly tools.",
               (_p("sequences", "sequence_list"),)),
    ToolSchema("optimize_translation", "Codon-optimize a DNA or protein sequence.",
               (_p("sequence", "text", desc="stored name, DNA, or protein text"),
                _p("cg_content", "number", required=False, desc="default 50"),
                _p("codon_table", "integer", required=False, desc="default 11"),
                _p("min_repeat_length", "integer", required=False, desc="default 12"))),
    ToolSchema("plasmid_search", "Search plasmids by name/feature; supports AND, OR, and -negation.",
               (_p("query", "text"),)),
    ToolSchema("separate", "Simulate gel electrophoresis: order sequences by size.",
               (_p("sequences", "sequence_list"),)),
    ToolSchema("simulate_pcr", "Amplify between two primers (bases, stored name, or enzyme name).",
               (_p("sequence", "sequence"), _p("forward_primer", "text"),
                _p("reverse_primer", "text"))),
    ToolSchema("slice_sequence", "Extract [start, end) as a new sequence.",
               (_p("sequence", "sequence"), _p("start", "integer"), _p("end", "integer"),
                _p("name", "text", required=False))),
    ToolSchema("submit_answer", "Submit an option letter. Ends the episode.",
               (_p("answer", "text"),)),
    ToolSchema("view_restriction_sites", "List recognition sites of the common enzymes.",
               (_p("sequence", "sequence"),)),
    ToolSchema("view_sequence", "Show the raw bases of a stored sequence.",
               (_p("sequence", "sequence"),)),
    ToolSchema("view_sequence_stats", "Show length, GC fraction, and longest homopolymer.",
               (_p("sequence", "sequence"),)),
    ToolSchema("view_translation", "Translate frame 0 of the top strand.",
               (_p("sequence", "sequence"),)),
)

_SCHEMA_MAP = {schema.name: schema for schema in CLONING_SCHEMAS}


def reward_cloning(task: Task, submitted_letter: str) -> float:
    if submitted_letter not in task.letters:
        raise ValueError(f"{submitted_letter!r} is not an option letter")
    if submitted_letter == task.ideal:
        return REWARD_CORRECT
    if submitted_letter == task.unsure_letter:
        return REWARD_UNSURE
    return REWARD_INCORRECT


class _BadCall(Exception):
    """Internal: argument did not resolve; rendered as an invalid call."""


class CloningEnv:
    def __init__(
        self,
        task: Task,
        max_steps: int = DEFAULT_MAX_STEPS,
        catalogue=None,
        plasmid_records=None,
        gene_backend=None,
        feature_library=None,
    ):
        if max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        self.task = task
        self.max_steps = max_steps
        self.catalogue = catalogue or enzymes.default_catalogue()
        self.plasmid_records = plasmid_records
        self.gene_backend = gene_backend
        self.feature_library = feature_library
        self.store: dict[str, Sequence] = {}
        self.pools: dict[str, tuple[str, ...]] = {}
        self.step_count = 0
        self.finished = False
        self.submitted: str | None = None

    def tool_schemas(self) -> tuple[ToolSchema, ...]:
        return CLONING_SCHEMAS

    # -- episode protocol ---------------------------------------------------

    def reset(self) -> Observation:
        self.store = {}
        self.pools = {}
        self.step_count = 0
        self.finished = False
        self.submitted = None
        for seq in self.task.inputs:
            if seq.name in self.store:
                raise NameCollisionError(f"duplicate input sequence name {seq.name!r}")
            self.store[seq.name] = seq
        lines = [self.task.question, "", "Options:"]
        for option in self.task.options:
            lines.append(f"{option.letter}) {option.text}")
        if self.store:
            lines.append("")
            lines.append("Sequences:")
            for name, seq in self.store.items():
                lines.append(f"- {name}: {len(seq)} nt, {seq.topology}")
        lines.append("")
        lines.append("Tools:")
        lines.extend(f"- {schema.signature()}" for schema in CLONING_SCHEMAS)
        return Observation(text="\n".join(lines))

    def step(self, action: ToolCall) -> Observation:
        if self.finished:
            raise EpisodeOverError("episode already ended; call reset")
        self.step_count += 1
        problem = validate_call(_SCHEMA_MAP, action)
        if problem is not None:
            return self._continue(f"invalid tool call: {problem}")
        if action.tool == "submit_answer":
            return self._submit(str(action.args["answer"]))
        try:
            text = self._dispatch(action.tool, dict(action.args))
        except _BadCall as exc:
            return self._continue(f"invalid tool call: {exc}")
        except SimulationError as exc:
            return self._continue(f"error: {exc}")
        except (IndexError, ValueError) as exc:
            return self._continue(f"error: {exc}")
        return self._continue(text)

    def _submit(self, answer: str) -> Observation:
        letter = answer.strip().upper()
        if letter not in self.task.letters:
            return self._continue(
                f"error: {answer!r} is not an option letter; options are "
                + ", ".join(self.task.letters)
            )
        reward = reward_cloning(self.task, letter)
        self.finished = True
        self.submitted = letter
        verdict = {REWARD_CORRECT: "correct", REWARD_UNSURE: "unsure"}.get(reward, "incorrect")
        return Observation(text=f"submitted {letter}: {verdict}", reward=reward, done=True)

    def _continue(self, text: str) -> Observation:
        if self.step_count >= self.max_steps:
            self.finished = True
            return Observation(text=text, truncated=True)
        return Observation(text=text)

    # -- argument resolution ------------------------------------------------

    def _seq(self, name: str) -> Sequence:
        try:
            return self.store[name]
        except KeyError:
            raise _BadCall(f"no stored sequence named {name!r}") from None

    def _seq_list(self, value) -> list[Sequence]:
        if isinstance(value, str):
            if value not in self.pools:
                raise _BadCall(f"no stored pool named {value!r}")
            return [self._seq(n) for n in self.pools[value]]
        return [self._seq(n) for n in value]

    def _primer_text(self, value: str) -> str:
        return self.store[value].bases if value in self.store else value

    def _register(self, name: str, seq: Sequence) -> Sequence:
        stored = seq.renamed(name)
        self.store[name] = stored
        return stored

    @staticmethod
    def _describe(seq: Sequence) -> str:
        return f"{seq.name}: {len(seq)} nt, {seq.topology}"

    # -- tool dispatch ------------------------------------------------------

    def _dispatch(self, tool: str, args: dict) -> str:
        step = self.step_count
        if tool == "add":
            result = sequences.add(self._seq(args["sequence1"]), self._seq(args["sequence2"]))
            return self._describe(self._register(f"add_{step}", result))

        if tool == "annotate":
            rows = registry.annotate(self._seq(args["sequence"]), library=self.feature_library)
            if not rows:
                return "no annotations"
            lines = [f"{len(rows)} annotation(s):"]
            lines.extend(
                f"  {a.feature_name}  [{a.start}, {a.end})  strand {a.strand}  {a.kind}"
                for a in rows
            )
            return "\n".join(lines)

        if tool == "create_sequence":
            seq = registry.create_sequence(args["sequence_spec"], default_name=f"create_sequence_{step}")
            if seq.name in self.store:
                raise NameCollisionError(f"a sequence named {seq.name!r} already exists")
            return self._describe(self._register(seq.name, seq))

        if tool == "design_primers":
            pair = pcr.design_primers(
                self._seq(args["sequence"]),
                target_tm=float(args.get("target_tm", 55.0)),
                forward_overhang=args.get("forward_overhang"),
                forward_overhang_name=args.get("forward_overhang_name"),
                reverse_overhang=args.get("reverse_overhang"),
                reverse_overhang_name=args.get("reverse_overhang_name"),
                catalogue=self.catalogue,
            )
            amplicon = self._register(f"design_primers_{step}", pair.amplicon)
            pair = pcr.PrimerPair(forward=pair.forward, reverse=pair.reverse, amplicon=amplicon)
            return pcr.render_primer_pair(pair)

        if tool == "enzyme_cut":
            fragments = enzymes.enzyme_cut(
                self._seq(args["sequence"]), args["enzyme"], catalogue=self.catalogue
            )
            renamed = []
            for i, frag in enumerate(fragments):
                stored = self._register(f"enzyme_cut_{step}_f{i}", frag.seq)
                renamed.append(
                    enzymes.Fragment(
                        seq=stored,
                        five_prime_overhang=frag.five_prime_overhang,
                        three_prime_overhang=frag.three_prime_overhang,
                        source_cuts=frag.source_cuts,
                    )
                )
            header = f"{len(renamed)} fragment(s):\n"
            return header + enzymes.render_fragments(renamed)

        if tool == "find_orfs":
            rows = orfs.find_orfs(
                self._seq(args["sequence"]),
                min_length=int(args.get("min_length", 300)),
                codon_table=int(args.get("codon_table", 11)),
                strand=args.get("strand", "both"),
            )
            if not rows:
                return "no ORFs found"
            lines = [f"{len(rows)} ORF(s):"]
            lines.extend(
                f"  [{o.start}, {o.end})  strand {o.strand}  frame {o.frame}  {o.protein}"
                for o in rows
            )
            return "\n".join(lines)

        if tool == "find_sequence_overlap":
            start, end = pcr.find_sequence_overlap(
                self._seq(args["sequence"]),
                self._primer_text(args["primer"]),
                reverse=bool(args.get("reverse", False)),
            )
            return f"overlap at [{start}, {end}) ({end - start} nt)"

        if tool == "gene_search":
            hits = registry.gene_search(args["query"], backend=self.gene_backend)
            if not hits:
                return "no matches"
            lines = [f"{len(hits)} match(es):"]
            for hit in hits:
                stored = self._register(f"gene_search_{step}_{hit.id}", hit.seq)
                lines.append(f"  {stored.name}: {hit.title} ({len(stored)} nt)")
            return "\n".join(lines)

        if tool == "gibson":
            products = assembly.gibson(self._seq_list(args["sequences"]))
            return self._register_products("gibson", step, products)

        if tool == "goldengate":
            products = assembly.goldengate(
                self._seq_list(args["sequences"]), args["enzyme"], catalogue=self.catalogue
            )
            return self._register_products("goldengate", step, products)

        if tool == "merge":
            members = self._seq_list(args["sequences"])
            sequences.merge(members)  # validates the pool
            pool_name = f"merge_{step}"
            self.pools[pool_name] = tuple(s.name for s in members)
            return f"pool {pool_name}: " + ", ".join(self.pools[pool_name])

        if tool == "optimize_translation":
            raw = args["sequence"]
            text = self.store[raw].bases if raw in self.store else raw
            result = orfs.optimize_translation(
                text,
                cg_content=float(args.get("cg_content", 50.0)),
                codon_table=int(args.get("codon_table", 11)),
                min_repeat_length=int(args.get("min_repeat_length", 12)),
            )
            stored = self._register(f"optimize_translation_{step}", result)
            return f"{self._describe(stored)} ({result.description})"

        if tool == "plasmid_search":
            hits = registry.plasmid_search(args["query"], records=self.plasmid_records)
            if not hits:
                return "no matches"
            lines = [f"{len(hits)} match(es):"]
            for hit in hits:
                stored = self._register(f"plasmid_search_{step}_{hit.name}", hit.record.seq)
                features = ", ".join(hit.matched_features) or "-"
                lines.append(f"  {stored.name}: {len(stored)} nt, features: {features}")
            return "\n".join(lines)

        if tool == "separate":
            ordered = enzymes.separate(self._seq_list(args["sequences"]))
            lines = ["gel order (largest first):"]
            lines.extend(f"  {seq.name}: {len(seq)} nt" for seq in ordered)
            return "\n".join(lines)

        if tool == "simulate_pcr":
            product = pcr.simulate_pcr(
                self._seq(args["sequence"]),
                self._primer_text(args["forward_primer"]),
                self._primer_text(args["reverse_primer"]),
                catalogue=self.catalogue,
            )
            stored = self._register(f"simulate_pcr_{step}", product.amplicon)
            return (
                f"{self._describe(stored)}; forward anchor {list(product.fwd_span)}, "
                f"reverse anchor {list(product.rev_span)}"
            )

        if tool == "slice_sequence":
            result = sequences.slice_sequence(
                self._seq(args["sequence"]), int(args["start"]), int(args["end"])
            )
            name = args.get("name") or f"slice_sequence_{step}"
            if name in self.store:
                raise NameCollisionError(f"a sequence named {name!r} already exists")
            return self._describe(self._register(name, result))

        if tool == "view_restriction_sites":
            rows = enzymes.view_restriction_sites(self._seq(args["sequence"]), catalogue=self.catalogue)
            if not rows:
                return "no recognition sites"
            lines = [f"{len(rows)} site(s):"]
            lines.extend(f"  {name} at {position} ({strand})" for name, position, strand in rows)
            return "\n".join(lines)

        if tool == "view_sequence":
            seq = self._seq(args["sequence"])
            return f"{self._describe(seq)}\n{seq.bases}"

        if tool == "view_sequence_stats":
            return sequences.view_sequence_stats(self._seq(args["sequence"])).render()

        if tool == "view_translation":
            return translate(self._seq(args["sequence"]))

        raise _BadCall(f"tool {tool!r} is not dispatchable")

    def _register_products(self, tool: str, step: int, products) -> str:
        renamed = []
        for i, product in enumerate(products):
            stored = self._register(f"{tool}_{step}_p{i}", product.seq)
            renamed.append(assembly.AssemblyProduct(seq=stored, joins=product.joins))
        header = f"{len(renamed)} product(s):\n"
        return header + assembly.render_products(renamed)
