"""Evaluation metrics for an integration run and their JSON/text renderings."""
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from integrator import IntegrationOutcome
from logging_config import get_logger
from models import EntityKind, Ontology
from reasoner import UnsatReport, classify, hierarchy_depth, is_consistent, unsatisfiable_classes
from schemas import MetricsReportSchema

logger = get_logger('report')

REPORT_VERSION = 1
REASONER_SCOPE = (
    "structural: named-class subsumption, equivalence and disjointness; "
    "domains, ranges and property characteristics are not reasoned over"
)

ENTITY_KEYS = {
    EntityKind.CLASS: 'classes',
    EntityKind.OBJECT_PROPERTY: 'object_properties',
    EntityKind.DATA_PROPERTY: 'data_properties',
    EntityKind.ANNOTATION_PROPERTY: 'annotation_properties',
    EntityKind.NAMED_INDIVIDUAL: 'named_individuals',
    EntityKind.ANONYMOUS_INDIVIDUAL: 'anonymous_individuals',
    EntityKind.DATATYPE: 'datatypes',
}

PHASES = ('parse', 'integrate', 'reason')


class Timers:
    """Phase stopwatch; phases may be entered several times and accumulate."""

    def __init__(self):
        self._elapsed = dict.fromkeys(PHASES, 0.0)
        self._started = time.perf_counter()
        self._total: Optional[float] = None

    @contextmanager
    def phase(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self._elapsed[name] += time.perf_counter() - start

    def stop(self):
        self._total = time.perf_counter() - self._started

    def as_dict(self) -> Dict[str, float]:
        parts = {f'{name}_seconds': round(self._elapsed[name], 3) for name in PHASES}
        total = self._total if self._total is not None else time.perf_counter() - self._started
        # rounding must not push the parts above the total
        parts['total_seconds'] = max(round(total, 3), round(sum(parts.values()), 3))
        return parts


@dataclass
class MetricsReport:
    output_iri: str
    mode: str
    entities: Dict[str, int]
    logical_axioms: int
    declaration_axioms: int
    annotation_axioms: int
    total_axioms: int
    raw_axioms: int
    source_logical_axioms: int
    bridged_cells: int
    expected_logical_axioms: int
    axiom_law: str
    uncertain_cells: int
    skipped_cells: Dict[str, int]
    unsat_count: int
    unsat_classes: List[str]
    justifications: List[dict]
    coherent: bool
    consistent: bool
    inconsistency_reasons: List[str]
    depth: int
    timings: Dict[str, float]
    repair: Optional[dict] = None
    reasoner_scope: str = REASONER_SCOPE
    version: int = REPORT_VERSION


def _entity_counts(o: Ontology) -> Dict[str, int]:
    return {key: len(o.entities(kind)) for kind, key in ENTITY_KEYS.items()}


def _repair_summary(repair) -> Optional[dict]:
    if repair is None:
        return None
    return {
        'iterations': repair.iterations,
        'removed_cells': len(repair.removed),
        'removed': [
            {'pair': list(item.pair), 'entity1': item.cell.entity1, 'entity2': item.cell.entity2,
             'measure': item.cell.measure, 'justified_by': item.justified_by}
            for item in repair.removed
        ],
        'residual_unsat': sorted(repair.residual_unsat),
    }


def compute_metrics(outcome: IntegrationOutcome, o: Ontology, r: UnsatReport, timers: Timers,
                    mode: str = 'bridge', repair=None) -> MetricsReport:
    counts = o.counts()
    expected = outcome.expected_logical_axioms
    if mode == 'full-merge':
        # merging collapses axioms, so no additive law applies
        law = 'N/A'
    else:
        law = 'PASS' if counts.logical == expected else 'FAIL'
    if law == 'FAIL':
        logger.warning("Axiom preservation failed: expected %d logical axioms, measured %d", expected, counts.logical)

    consistent = r.consistent
    reasons = list(r.inconsistency_reasons)
    if consistent is None:
        verdict = is_consistent(o, r)
        consistent, reasons = verdict.consistent, list(verdict.reasons)

    return MetricsReport(
        output_iri=o.iri,
        mode=mode,
        entities=_entity_counts(o),
        logical_axioms=counts.logical,
        declaration_axioms=counts.declarations,
        annotation_axioms=counts.annotations,
        total_axioms=counts.total,
        raw_axioms=outcome.raw_axiom_count + outcome.bridged_cells,
        source_logical_axioms=outcome.source_logical_axioms,
        bridged_cells=outcome.bridged_cells,
        expected_logical_axioms=expected,
        axiom_law=law,
        uncertain_cells=outcome.uncertain_cells,
        skipped_cells=dict(sorted(outcome.skipped_by_reason().items())),
        unsat_count=len(r.unsat),
        unsat_classes=sorted(r.unsat),
        justifications=[r.justifications[iri].to_dict() for iri in sorted(r.justifications)],
        coherent=r.coherent,
        consistent=consistent,
        inconsistency_reasons=reasons,
        depth=hierarchy_depth(r.taxonomy),
        timings=timers.as_dict(),
        repair=_repair_summary(repair),
    )


def _yes(flag: bool) -> str:
    return 'yes' if flag else 'no'


def _render_text(report: MetricsReport) -> str:
    lines = [
        f"output: {report.output_iri} ({report.mode})",
        "entities:",
    ]
    lines += [f"  {key:<24}{count:>10}" for key, count in report.entities.items()]
    lines += [
        f"logical axioms: {report.logical_axioms} "
        f"(expected {report.expected_logical_axioms}: {report.axiom_law})",
        f"declarations: {report.declaration_axioms}",
        f"annotation assertions: {report.annotation_axioms}",
        f"bridged cells: {report.bridged_cells} ({report.uncertain_cells} uncertain)",
    ]
    if report.skipped_cells:
        skipped = ', '.join(f"{reason}={count}" for reason, count in report.skipped_cells.items())
        lines.append(f"skipped cells: {skipped}")
    lines.append(f"coherent: {_yes(report.coherent)}" +
                 ("" if report.coherent else f" ({report.unsat_count} unsatisfiable classes)"))
    for justification in report.justifications:
        lines.append(
            f"  {justification['class']}: disjoint {' / '.join(justification['disjoint'])} "
            f"via {' > '.join(justification['path1'])} and {' > '.join(justification['path2'])}"
        )
    lines.append(f"consistent: {_yes(report.consistent)}")
    lines += [f"  {reason}" for reason in report.inconsistency_reasons]
    lines.append(f"depth: {report.depth}")
    if report.repair is not None:
        lines.append(f"repair: {report.repair['removed_cells']} cells removed in "
                     f"{report.repair['iterations']} iterations")
    timings = report.timings
    lines.append(
        "timings: " + ', '.join(f"{name} {timings[f'{name}_seconds']:.3f}s" for name in PHASES + ('total',))
    )
    lines.append(f"reasoner: {report.reasoner_scope}")
    return '\n'.join(lines) + '\n'


def render(report: MetricsReport, format: str = 'json') -> str:
    if format == 'text':
        return _render_text(report)
    if format != 'json':
        raise ValueError(f"unknown report format {format!r}")
    return json.dumps(MetricsReportSchema().dump(report), indent=2, sort_keys=True) + '\n'


def parse_report(text: str) -> MetricsReport:
    """Inverse of render(report, 'json')."""
    return MetricsReport(**MetricsReportSchema().loads(text))


def profile_ontology(o: Ontology) -> dict:
    """Input characteristics: entity counts, axiom counts, depth and unsat count."""
    taxonomy = classify(o)
    report = unsatisfiable_classes(o, taxonomy, justify_limit=0)
    counts = o.counts()
    return {
        'iri': o.iri,
        'entities': _entity_counts(o),
        'logical_axioms': counts.logical,
        'declaration_axioms': counts.declarations,
        'annotation_axioms': counts.annotations,
        'depth': hierarchy_depth(taxonomy),
        'unsat_count': len(report.unsat),
    }
