"""Greedy alignment repair: drop the weakest implicated bridging cell until
the bridged pair is coherent."""
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Sequence, Tuple

from alignment import Alignment, Cell
from errors import InvalidPlan
from integrator import IntegrationPlan, Mode, Topology, bridge
from logging_config import get_logger
from models import Iri, Ontology, OutputConfig
from reasoner import classify, justify_unsat, unsatisfiable_classes

logger = get_logger('repair')

Pair = Tuple[int, int]


@dataclass(frozen=True)
class RemovedCell:
    pair: Pair
    cell: Cell
    justified_by: Iri


@dataclass
class RepairOutcome:
    alignments: List[Tuple[Pair, Alignment]] = field(default_factory=list)
    removed: List[RemovedCell] = field(default_factory=list)
    iterations: int = 0
    residual_unsat: FrozenSet[Iri] = frozenset()
    # implicated cells seen by each removal, in order
    trace: List[Tuple[Cell, ...]] = field(default_factory=list, repr=False)

    @property
    def kept(self) -> List[Cell]:
        return [cell for _, alignment in self.alignments for cell in alignment.cells]

    def repaired(self, pair: Pair) -> Alignment:
        for key, alignment in self.alignments:
            if key == pair:
                return alignment
        raise KeyError(pair)


def _removal_key(cell: Cell):
    # lowest measure first; on ties the later cell, then the smaller entity1
    return cell.measure, -cell.doc_order, cell.entity1


def _repair_pair(o1: Ontology, o2: Ontology, pair: Pair, alignment: Alignment,
                 cfg: OutputConfig, plan: IntegrationPlan) -> RepairOutcome:
    cells = list(alignment.cells)
    result = RepairOutcome()
    pair_plan = replace(plan, topology=Topology.n_to_n(), threshold=0.0, one_to_one=False, repair=False)

    while True:
        result.iterations += 1
        outcome = bridge([o1, o2], [((1, 2), replace(alignment, cells=tuple(cells)))], cfg, pair_plan)
        taxonomy = classify(outcome.ontology)
        report = unsatisfiable_classes(outcome.ontology, taxonomy, justify_limit=0)
        if report.coherent:
            break

        implicated: Dict[Cell, Iri] = {}
        for root in report.root_classes:
            justification = justify_unsat(root, outcome.ontology, taxonomy)
            for axiom in justification.axioms:
                cell = outcome.bridge_axioms.get(axiom)
                if cell is not None:
                    implicated.setdefault(cell, root)
        if not implicated:
            result.residual_unsat = frozenset(outcome.original_iri(iri) for iri in report.unsat)
            logger.warning("Pair %s: %d unsatisfiable classes come from the sources themselves",
                           pair, len(result.residual_unsat))
            break

        victim = min(implicated, key=_removal_key)
        cells.remove(victim)
        result.trace.append(tuple(implicated))
        result.removed.append(RemovedCell(pair, victim, outcome.original_iri(implicated[victim])))
        logger.debug("Pair %s iteration %d: removed %s = %s (%.3f), %d unsat left to explain",
                     pair, result.iterations, victim.entity1, victim.entity2, victim.measure, len(report.unsat))

    result.alignments.append((pair, replace(alignment, cells=tuple(cells))))
    logger.info("Pair %s repaired in %d iterations: %d cells removed", pair, result.iterations, len(result.removed))
    return result


def repair_alignment(ontologies: Sequence[Ontology], alignments: Sequence[Tuple[Pair, Alignment]],
                     cfg: OutputConfig, plan: IntegrationPlan) -> RepairOutcome:
    """Repair each pair's alignment against its own two ontologies.

    Pairs are independent: a pair is bridged alone, never together with the
    other alignments of the plan.
    """
    if plan.mode is not Mode.BRIDGE:
        raise InvalidPlan(f"repair needs bridge mode, not {plan.mode.value}")
    combined = RepairOutcome()
    residual = set()
    for pair, alignment in alignments:
        i, j = pair
        if not (1 <= i <= len(ontologies) and 1 <= j <= len(ontologies)):
            raise InvalidPlan(f"alignment pair {pair} refers to a missing ontology")
        outcome = _repair_pair(ontologies[i - 1], ontologies[j - 1], pair, alignment, cfg, plan)
        combined.alignments.extend(outcome.alignments)
        combined.removed.extend(outcome.removed)
        combined.trace.extend(outcome.trace)
        combined.iterations += outcome.iterations
        residual |= outcome.residual_unsat
    combined.residual_unsat = frozenset(residual)
    return combined
