"""parse → filter → repair → integrate → reason, shared by the CLI and the HTTP service."""
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from alignment import Alignment, combine_alignments, threshold_filter, to_one_to_one
from errors import PairResolutionError
from integrator import (
    IntegrationOutcome, IntegrationPlan, Mode, Style, Topology, TopologyKind, aggregate, bridge, full_merge,
    plan_alignment_pairs,
)
from logging_config import get_logger
from models import Ontology, OutputConfig
from owl_syntax import ParseDiagnostics, parse_ontology
from reasoner import ConsistencyVerdict, UnsatReport, classify, is_consistent, unsatisfiable_classes
from repair import RepairOutcome, repair_alignment
from report import MetricsReport, Timers, compute_metrics

logger = get_logger('pipeline')

Pair = Tuple[int, int]


def _normalise(iri: str) -> str:
    return iri.strip().rstrip('#/')


def resolve_pair(alignment: Alignment, ontologies: Sequence[Ontology]) -> Pair:
    """Ontology indices named by an alignment's onto1/onto2 header."""
    indices = []
    for header in (alignment.onto1, alignment.onto2):
        matches = [i for i, o in enumerate(ontologies, start=1) if _normalise(o.iri) == _normalise(header)]
        if len(matches) != 1:
            found = 'no' if not matches else 'several'
            raise PairResolutionError(f"alignment header {header!r} matches {found} input ontologies")
        indices.append(matches[0])
    if indices[0] == indices[1]:
        raise PairResolutionError(f"alignment relates ontology {indices[0]} to itself")
    return indices[0], indices[1]


def parse_ontologies(texts: Sequence, workers: int = 4) -> List[Tuple[Ontology, ParseDiagnostics]]:
    """Parse several documents concurrently, keeping input order."""
    if len(texts) < 2 or workers <= 1:
        return [parse_ontology(text) for text in texts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(parse_ontology, texts))


def prepare_alignments(alignments: Sequence[Tuple[Pair, Alignment]], plan: IntegrationPlan,
                       n: int) -> List[Tuple[Pair, Alignment]]:
    """Keep the alignments the topology uses, then threshold and 1-to-1 them."""
    if n < 2:
        if alignments:
            logger.warning("Ignoring %d alignments: a single ontology has nothing to align", len(alignments))
        return []
    wanted = plan_alignment_pairs(n, plan.topology)
    allowed = {frozenset(pair) for pair in wanted}

    grouped: "OrderedDict[frozenset, List[Tuple[Pair, Alignment]]]" = OrderedDict()
    for pair, alignment in alignments:
        key = frozenset(pair)
        if key not in allowed:
            logger.warning("Ignoring alignment %s: pair %s is outside topology %s",
                           alignment.onto1 or '?', pair, plan.topology)
            continue
        grouped.setdefault(key, []).append((pair, alignment))

    prepared = []
    for pair in wanted:
        entries = grouped.get(frozenset(pair))
        if not entries:
            continue
        if len(entries) > 1:
            logger.info("Combining %d alignments for pair %s", len(entries), pair)
        alignment = combine_alignments([alignment for _, alignment in entries])
        alignment = threshold_filter(alignment, plan.threshold)
        if plan.one_to_one:
            alignment = to_one_to_one(alignment)
        prepared.append((entries[0][0], alignment))
    return prepared


def integrate(ontologies: Sequence[Ontology], alignments: Sequence[Tuple[Pair, Alignment]],
              cfg: OutputConfig, plan: IntegrationPlan) -> Tuple[IntegrationOutcome, Optional[RepairOutcome]]:
    plan.validate(len(ontologies))
    if plan.mode is Mode.AGGREGATE:
        if alignments:
            logger.info("Aggregate mode ignores %d alignments", len(alignments))
        return aggregate(ontologies, cfg, plan.style), None

    prepared = prepare_alignments(alignments, plan, len(ontologies))
    repaired = None
    if plan.repair:
        repaired = repair_alignment(ontologies, prepared, cfg, replace(plan, mode=Mode.BRIDGE))
        prepared = repaired.alignments

    if plan.mode is Mode.BRIDGE:
        return bridge(ontologies, prepared, cfg, plan), repaired

    o1, o2 = ontologies
    alignment = prepared[0][1] if prepared else Alignment(o1.iri, o2.iri)
    return full_merge(o1, o2, alignment, cfg), repaired


@dataclass
class PipelineResult:
    outcome: IntegrationOutcome
    report: UnsatReport
    verdict: ConsistencyVerdict
    metrics: MetricsReport
    repair: Optional[RepairOutcome] = None

    @property
    def ontology(self) -> Ontology:
        return self.outcome.ontology


def check_ontology(o: Ontology, justify_limit: Optional[int] = None) -> UnsatReport:
    """Unsat classes and consistency verdict of a single ontology."""
    report = unsatisfiable_classes(o, classify(o), justify_limit)
    return report.with_consistency(is_consistent(o, report))


def run_pipeline(ontologies: Sequence[Ontology], alignments: Sequence[Tuple[Pair, Alignment]],
                 cfg: OutputConfig, plan: IntegrationPlan, timers: Optional[Timers] = None,
                 justify_limit: Optional[int] = 10) -> PipelineResult:
    timers = timers or Timers()
    with timers.phase('integrate'):
        outcome, repaired = integrate(ontologies, alignments, cfg, plan)

    with timers.phase('reason'):
        report = check_ontology(outcome.ontology, justify_limit)
    verdict = ConsistencyVerdict(report.consistent, tuple(report.inconsistency_reasons))
    timers.stop()

    metrics = compute_metrics(outcome, outcome.ontology, report, timers, plan.mode.value, repaired)
    logger.info("Integrated %d ontologies: %d logical axioms, %d unsatisfiable classes",
                len(ontologies), metrics.logical_axioms, metrics.unsat_count)
    return PipelineResult(outcome, report, verdict, metrics, repaired)


def build_plan(options: dict) -> IntegrationPlan:
    """Plan from validated CLI or HTTP options (mode, style, topology, pivot, ...)."""
    kind = TopologyKind(options['topology'])
    return IntegrationPlan(
        mode=Mode(options['mode']),
        style=Style(options['style']),
        topology=Topology(kind, options['pivot'] if kind is TopologyKind.ONE_TO_N else None),
        threshold=options['threshold'],
        one_to_one=options['one_to_one'],
        repair=options['repair'],
    )
