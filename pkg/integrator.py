"""Aggregation, bridging and full merge of source ontologies."""
import itertools
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from alignment import EQUIVALENCE_RELATIONS, Alignment, Cell, threshold_filter, to_one_to_one
from errors import (
    InvalidPlan, MalformedIri, NotOneToOne, ThresholdOutOfRange, TooFewOntologies, TooManyOntologies,
)
from logging_config import get_logger
from models import (
    EQUIVALENCE_FOR_KIND, Axiom, EntityKind, Iri, Ontology, OntologyBuilder, OutputConfig,
    is_anonymous, is_builtin, local_name, merged_iri, refactor_anonymous, refactor_iri,
)

logger = get_logger('integrator')


class Mode(Enum):
    AGGREGATE = 'aggregate'
    BRIDGE = 'bridge'
    FULL_MERGE = 'full-merge'


class Style(Enum):
    REFACTOR = 'refactor'
    REFERENCE = 'reference'


class TopologyKind(Enum):
    TWO_TO_TWO = '2-to-2'
    ONE_TO_N = '1-to-n'
    N_TO_N = 'n-to-n'


@dataclass(frozen=True)
class Topology:
    kind: TopologyKind
    pivot: Optional[int] = None

    @classmethod
    def two_to_two(cls):
        return cls(TopologyKind.TWO_TO_TWO)

    @classmethod
    def one_to_n(cls, pivot: int):
        return cls(TopologyKind.ONE_TO_N, pivot)

    @classmethod
    def n_to_n(cls):
        return cls(TopologyKind.N_TO_N)

    def __str__(self):
        if self.kind is TopologyKind.ONE_TO_N:
            return f'{self.kind.value}(pivot={self.pivot})'
        return self.kind.value


@dataclass(frozen=True)
class IntegrationPlan:
    mode: Mode = Mode.BRIDGE
    style: Style = Style.REFACTOR
    topology: Topology = Topology(TopologyKind.N_TO_N)
    threshold: float = 0.0
    one_to_one: bool = False
    repair: bool = False

    def validate(self, n: int):
        if n < 1:
            raise TooFewOntologies("at least one ontology is required")
        if self.mode is Mode.FULL_MERGE and n != 2:
            raise InvalidPlan(f"full merge takes exactly 2 ontologies, got {n}")
        if self.topology.kind is TopologyKind.ONE_TO_N and not (
                self.topology.pivot is not None and 1 <= self.topology.pivot <= n):
            raise InvalidPlan(f"pivot {self.topology.pivot} is outside [1, {n}]")
        if not 0.0 <= self.threshold <= 1.0:
            raise ThresholdOutOfRange(self.threshold)


class SkipReason(Enum):
    KIND_MISMATCH = 'KindMismatch'
    UNKNOWN_ENTITY = 'UnknownEntity'
    UNSUPPORTED_KIND = 'UnsupportedKind'
    UNSUPPORTED_RELATION = 'UnsupportedRelation'
    SELF_CORRESPONDENCE = 'SelfCorrespondence'
    DUPLICATE_AXIOM = 'DuplicateAxiom'
    SAME_SOURCE = 'SameSource'


# lookup order when an IRI is punned in several tables
TABLE_KINDS = (
    EntityKind.CLASS,
    EntityKind.OBJECT_PROPERTY,
    EntityKind.DATA_PROPERTY,
    EntityKind.NAMED_INDIVIDUAL,
)


class EntityTypeMap:
    """Original IRI -> (ontology index, kind), one table per bridgeable kind."""

    def __init__(self):
        self.classes: Dict[Iri, Tuple[int, EntityKind]] = {}
        self.object_properties: Dict[Iri, Tuple[int, EntityKind]] = {}
        self.data_properties: Dict[Iri, Tuple[int, EntityKind]] = {}
        self.individuals: Dict[Iri, Tuple[int, EntityKind]] = {}
        # only consulted to explain why a cell cannot be bridged
        self.annotation_properties: Dict[Iri, Tuple[int, EntityKind]] = {}

    def table(self, kind: EntityKind) -> Optional[dict]:
        return {
            EntityKind.CLASS: self.classes,
            EntityKind.OBJECT_PROPERTY: self.object_properties,
            EntityKind.DATA_PROPERTY: self.data_properties,
            EntityKind.NAMED_INDIVIDUAL: self.individuals,
            EntityKind.ANNOTATION_PROPERTY: self.annotation_properties,
        }.get(kind)

    def register(self, iri: Iri, ont_index: int, kind: EntityKind) -> bool:
        table = self.table(kind)
        if table is None:
            return False
        held = table.setdefault(iri, (ont_index, kind))
        if held[0] != ont_index:
            logger.debug("%s %s already registered for ontology %d", kind.value, iri, held[0])
        return held[0] == ont_index

    def register_ontology(self, ontology: Ontology, ont_index: int):
        for kind in TABLE_KINDS + (EntityKind.ANNOTATION_PROPERTY,):
            for iri in ontology.entities(kind):
                self.register(iri, ont_index, kind)

    def resolve(self, iri: Iri) -> Dict[EntityKind, int]:
        """Kinds under which iri is known, with the index of its ontology."""
        return {kind: self.table(kind)[iri][0] for kind in TABLE_KINDS if iri in self.table(kind)}

    def is_annotation_property(self, iri: Iri) -> bool:
        return iri in self.annotation_properties

    def sizes(self) -> Dict[str, int]:
        return {
            'classes': len(self.classes),
            'object_properties': len(self.object_properties),
            'data_properties': len(self.data_properties),
            'individuals': len(self.individuals),
        }

    def __len__(self):
        return sum(self.sizes().values())


@dataclass
class SourceTally:
    index: int
    iri: Iri
    logical: int
    declarations: int
    annotations: int
    total: int


@dataclass(frozen=True)
class MergedPair:
    cell: Cell
    kind: EntityKind
    iri: Iri


@dataclass
class IntegrationOutcome:
    ontology: Ontology
    type_map: EntityTypeMap
    bridged_cells: int = 0
    skipped_cells: List[Tuple[Cell, SkipReason]] = field(default_factory=list)
    source_tallies: List[SourceTally] = field(default_factory=list)
    raw_axiom_count: int = 0
    uncertain_cells: int = 0
    cells_presented: int = 0
    bridge_axioms: Dict[Axiom, Cell] = field(default_factory=dict)
    merged: List[MergedPair] = field(default_factory=list)
    renamers: list = field(default_factory=list, repr=False)
    _origins: Optional[Dict[Iri, Iri]] = field(default=None, repr=False)

    @property
    def source_logical_axioms(self) -> int:
        return sum(tally.logical for tally in self.source_tallies)

    @property
    def expected_logical_axioms(self) -> int:
        return self.source_logical_axioms + self.bridged_cells

    def skipped_by_reason(self) -> Dict[str, int]:
        return dict(Counter(reason.value for _, reason in self.skipped_cells))

    def original_iri(self, iri: Iri) -> Iri:
        """Source IRI an output IRI was renamed from (itself when untouched)."""
        if self._origins is None:
            self._origins = {}
            for renamer in self.renamers:
                for (source, _), renamed in renamer.renamed_items():
                    self._origins.setdefault(renamed, source)
        return self._origins.get(iri, iri)


def plan_alignment_pairs(n: int, topology: Topology) -> List[Tuple[int, int]]:
    """Ontology index pairs (1-based) that contribute alignments under a topology."""
    if n < 2:
        raise TooFewOntologies(f"a topology needs at least 2 ontologies, got {n}")
    if topology.kind is TopologyKind.TWO_TO_TWO:
        return [(i, i + 1) for i in range(1, n)]
    if topology.kind is TopologyKind.ONE_TO_N:
        pivot = topology.pivot
        if pivot is None or not 1 <= pivot <= n:
            raise InvalidPlan(f"pivot {pivot} is outside [1, {n}]")
        return [(pivot, j) for j in range(1, n + 1) if j != pivot]
    return list(itertools.combinations(range(1, n + 1), 2))


class _SourceRenamer:
    """Maps the IRIs of one source ontology into the output ontology."""

    def __init__(self, ontology: Ontology, index: int, cfg: OutputConfig, style: Style,
                 merges: Optional[Dict[Tuple[Iri, EntityKind], Iri]] = None):
        self.index = index
        self.cfg = cfg
        self.active = style is Style.REFACTOR
        self.signature = ontology.signature()
        self.merges = merges or {}
        self._merged_any = {iri: target for (iri, _), target in sorted(self.merges.items(), key=lambda i: i[0][0])}
        self._cache: Dict[Tuple[Iri, Optional[EntityKind]], Iri] = {}
        self._origins: Dict[Iri, Iri] = {}

    def __call__(self, iri: Iri, kind: Optional[EntityKind]) -> Iri:
        key = (iri, kind)
        renamed = self._cache.get(key)
        if renamed is None:
            renamed = self._cache[key] = self._rename(iri, kind)
        return renamed

    def renamed_items(self):
        return self._cache.items()

    def _rename(self, iri: Iri, kind: Optional[EntityKind]) -> Iri:
        if not self.active or is_builtin(iri):
            return iri
        merged = self._merged_any.get(iri) if kind is None else self.merges.get((iri, kind))
        if merged is not None:
            return merged
        if is_anonymous(iri):
            return refactor_anonymous(iri, self.index)
        if kind is None and iri not in self.signature:
            # annotation values pointing outside the source stay as they are
            return iri
        try:
            renamed = refactor_iri(iri, self.cfg, self.index)
        except MalformedIri as e:
            logger.warning("Ontology %d: keeping %s unrefactored (%s)", self.index, iri, e.message)
            return iri
        origin = self._origins.setdefault(renamed, iri)
        if origin != iri:
            logger.warning("Ontology %d: %s and %s both refactor to %s", self.index, origin, iri, renamed)
        return renamed


class _Assembly:
    """Output builder shared by the three integration modes."""

    def __init__(self, ontologies: Sequence[Ontology], cfg: OutputConfig, style: Style,
                 merges: Optional[Dict[int, dict]] = None):
        if not ontologies:
            raise TooFewOntologies("at least one ontology is required")
        if style is Style.REFACTOR and len(ontologies) > cfg.max_index:
            raise TooManyOntologies(f"refactoring supports at most {cfg.max_index} ontologies")
        merges = merges or {}
        self.cfg = cfg
        self.builder = OntologyBuilder(cfg.base_iri)
        self.type_map = EntityTypeMap()
        self.tallies: List[SourceTally] = []
        self.raw_axiom_count = 0
        self.renamers: List[_SourceRenamer] = []

        for index, ontology in enumerate(ontologies, start=1):
            renamer = _SourceRenamer(ontology, index, cfg, style, merges.get(index))
            self.renamers.append(renamer)
            self.type_map.register_ontology(ontology, index)
            copied = _copy_source(ontology, renamer)
            self.raw_axiom_count += len(copied)
            self.builder.extend(copied)
            counts = ontology.counts()
            self.tallies.append(SourceTally(index, ontology.iri, *counts))
            logger.info("Copied ontology %d (%s): %d axioms", index, ontology.iri, len(copied))

    def output_iri(self, iri: Iri, ont_index: int, kind: EntityKind) -> Iri:
        return self.renamers[ont_index - 1](iri, kind)

    def outcome(self, **fields) -> IntegrationOutcome:
        return IntegrationOutcome(
            ontology=self.builder.build(),
            type_map=self.type_map,
            source_tallies=self.tallies,
            raw_axiom_count=self.raw_axiom_count,
            renamers=self.renamers,
            **fields,
        )


def _copy_source(ontology: Ontology, renamer: _SourceRenamer) -> List[Axiom]:
    """Source axioms, renamed when the style calls for it.

    Only the declarations the source states are copied. An IRI used without
    one stays undeclared in the output, so source and output axiom counts
    line up; the parser already warned about it.
    """
    if not renamer.active:
        return list(ontology.axioms)
    copied = []
    for axiom in ontology.axioms:
        mapped = axiom.map_iris(renamer)
        if mapped is None:
            logger.warning("Ontology %d: %s collapsed to fewer than two operands", renamer.index, axiom.type.value)
            continue
        copied.append(mapped)
    return copied


def _resolve_cell(cell: Cell, type_map: EntityTypeMap) -> Union[SkipReason, Tuple[EntityKind, int, int]]:
    if cell.relation not in EQUIVALENCE_RELATIONS:
        return SkipReason.UNSUPPORTED_RELATION
    kinds1 = type_map.resolve(cell.entity1)
    kinds2 = type_map.resolve(cell.entity2)
    if not kinds1 or not kinds2:
        if type_map.is_annotation_property(cell.entity1) or type_map.is_annotation_property(cell.entity2):
            return SkipReason.UNSUPPORTED_KIND
        return SkipReason.UNKNOWN_ENTITY
    for kind in TABLE_KINDS:
        if kind in kinds1 and kind in kinds2:
            return kind, kinds1[kind], kinds2[kind]
    return SkipReason.KIND_MISMATCH


def _skip(skipped: list, cell: Cell, reason: SkipReason):
    logger.debug("Skipping cell %s %s %s: %s", cell.entity1, cell.relation, cell.entity2, reason.value)
    skipped.append((cell, reason))


def aggregate(ontologies: Sequence[Ontology], cfg: OutputConfig, style: Style = Style.REFACTOR) -> IntegrationOutcome:
    """Union of the sources without any bridging axiom."""
    return _Assembly(ontologies, cfg, style).outcome()


def bridge(ontologies: Sequence[Ontology], alignments: Sequence[Tuple[Tuple[int, int], Alignment]],
           cfg: OutputConfig, plan: IntegrationPlan) -> IntegrationOutcome:
    """Aggregate, then translate every equivalence cell into a bridging axiom."""
    plan.validate(len(ontologies))
    assembly = _Assembly(ontologies, cfg, plan.style)
    skipped: List[Tuple[Cell, SkipReason]] = []
    bridge_axioms: Dict[Axiom, Cell] = {}
    presented = uncertain = 0

    for pair, alignment in alignments:
        alignment = threshold_filter(alignment, plan.threshold)
        if plan.one_to_one:
            alignment = to_one_to_one(alignment)
        for cell in alignment.cells:
            presented += 1
            resolution = _resolve_cell(cell, assembly.type_map)
            if isinstance(resolution, SkipReason):
                _skip(skipped, cell, resolution)
                continue
            kind, index1, index2 = resolution
            axiom = Axiom.of(
                EQUIVALENCE_FOR_KIND[kind],
                assembly.output_iri(cell.entity1, index1, kind),
                assembly.output_iri(cell.entity2, index2, kind),
            )
            if axiom is None:
                _skip(skipped, cell, SkipReason.SELF_CORRESPONDENCE)
            elif not assembly.builder.add(axiom):
                _skip(skipped, cell, SkipReason.DUPLICATE_AXIOM)
            else:
                bridge_axioms[axiom] = cell
                if cell.relation == '?':
                    uncertain += 1
        logger.info("Alignment %s: %d cells presented so far", pair, presented)

    outcome = assembly.outcome(
        bridged_cells=len(bridge_axioms),
        skipped_cells=skipped,
        uncertain_cells=uncertain,
        cells_presented=presented,
        bridge_axioms=bridge_axioms,
    )
    if skipped:
        logger.warning("Skipped %d of %d cells: %s", len(skipped), presented, outcome.skipped_by_reason())
    logger.info("Bridged %d cells into %s", outcome.bridged_cells, cfg.base_iri)
    return outcome


def full_merge(o1: Ontology, o2: Ontology, a: Alignment, cfg: OutputConfig) -> IntegrationOutcome:
    """Fuse every equivalent pair into one entity named <base>/000#name1=name2."""
    a = to_one_to_one(a)
    type_map = EntityTypeMap()
    type_map.register_ontology(o1, 1)
    type_map.register_ontology(o2, 2)

    merges: Dict[int, Dict[Tuple[Iri, EntityKind], Iri]] = {1: {}, 2: {}}
    merged: List[MergedPair] = []
    skipped: List[Tuple[Cell, SkipReason]] = []
    for cell in a.cells:
        resolution = _resolve_cell(cell, type_map)
        if isinstance(resolution, SkipReason):
            _skip(skipped, cell, resolution)
            continue
        kind, index1, index2 = resolution
        if index1 == index2:
            _skip(skipped, cell, SkipReason.SAME_SOURCE)
            continue
        ends = sorted([(index1, cell.entity1), (index2, cell.entity2)])
        target = merged_iri(local_name(ends[0][1]), local_name(ends[1][1]), cfg)
        for index, iri in ends:
            if (iri, kind) in merges[index]:
                raise NotOneToOne(f"{iri} is merged twice")
            merges[index][(iri, kind)] = target
        merged.append(MergedPair(cell, kind, target))

    assembly = _Assembly([o1, o2], cfg, Style.REFACTOR, merges)
    logger.info("Merged %d entity pairs", len(merged))
    return assembly.outcome(
        bridged_cells=len(merged),
        skipped_cells=skipped,
        uncertain_cells=sum(1 for pair in merged if pair.cell.relation == '?'),
        cells_presented=len(a.cells),
        merged=merged,
    )
