"""Seeded generators for coherent test ontologies, noisy alignments and the
scale benchmark suite."""
import random
from collections import defaultdict
from typing import List, Optional, Sequence, Tuple

from alignment import Alignment, Cell
from logging_config import get_logger
from models import (
    RDFS, XSD, Axiom, AxiomType, Characteristic, EntityKind, Literal, Ontology, OntologyBuilder,
)

logger = get_logger('synthetic')

BASE = 'http://synthetic.org/o'
LABEL = RDFS + 'label'


def ontology_iri(index: int) -> str:
    return f'{BASE}{index}'


def _declare(builder: OntologyBuilder, kind: EntityKind, iri: str):
    builder.add(Axiom.of(AxiomType.DECLARATION, iri, qualifier=kind))


def generate_ontology(index: int, n_classes: int, rng: random.Random, disjoint_ratio: float = 0.2,
                      individual_ratio: float = 0.2, property_ratio: float = 0.02,
                      link_ratio: float = 0.05, labels: bool = True) -> Ontology:
    """A single-inheritance class tree with disjoint siblings, some properties and individuals.

    Single inheritance keeps it coherent: no class has two disjoint subsumers.
    """
    ns = ontology_iri(index) + '#'
    builder = OntologyBuilder(ontology_iri(index))
    classes = [f'{ns}C{i}' for i in range(n_classes)]
    children = defaultdict(list)

    for i, cls in enumerate(classes):
        _declare(builder, EntityKind.CLASS, cls)
        if labels:
            builder.add(Axiom.of(AxiomType.ANNOTATION_ASSERTION, LABEL, cls, Literal(f'class {i} of ontology {index}')))
        if i:
            parent = rng.randrange(i)
            children[parent].append(i)
            builder.add(Axiom.of(AxiomType.SUB_CLASS_OF, cls, classes[parent]))

    families = [kids for kids in children.values() if len(kids) > 1]
    if families:
        for _ in range(int(n_classes * disjoint_ratio)):
            a, b = rng.sample(rng.choice(families), 2)
            builder.add(Axiom.of(AxiomType.DISJOINT_CLASSES, classes[a], classes[b]))

    n_properties = max(1, int(n_classes * property_ratio)) if n_classes else 0
    object_properties = [f'{ns}p{k}' for k in range(n_properties)]
    for prop in object_properties:
        _declare(builder, EntityKind.OBJECT_PROPERTY, prop)
        builder.add(Axiom.of(AxiomType.OBJECT_PROPERTY_DOMAIN, prop, rng.choice(classes)))
        builder.add(Axiom.of(AxiomType.OBJECT_PROPERTY_RANGE, prop, rng.choice(classes)))
    if object_properties:
        builder.add(Axiom.of(AxiomType.PROPERTY_CHARACTERISTIC, object_properties[0],
                             qualifier=Characteristic.TRANSITIVE))
        name = f'{ns}name'
        _declare(builder, EntityKind.DATA_PROPERTY, name)
        builder.add(Axiom.of(AxiomType.DATA_PROPERTY_DOMAIN, name, classes[0]))
        builder.add(Axiom.of(AxiomType.DATA_PROPERTY_RANGE, name, XSD + 'string'))

    individuals = [f'{ns}i{k}' for k in range(int(n_classes * individual_ratio))]
    for individual in individuals:
        _declare(builder, EntityKind.NAMED_INDIVIDUAL, individual)
        builder.add(Axiom.of(AxiomType.CLASS_ASSERTION, rng.choice(classes), individual))
    if individuals and object_properties:
        for _ in range(int(n_classes * link_ratio)):
            builder.add(Axiom.of(AxiomType.OBJECT_PROPERTY_ASSERTION, rng.choice(object_properties),
                                 rng.choice(individuals), rng.choice(individuals)))

    ontology = builder.build()
    logger.debug("Generated %s: %d classes, %d axioms", ontology.iri, n_classes, len(ontology))
    return ontology


def generate_alignment(o1: Ontology, o2: Ontology, n_cells: int, rng: random.Random,
                       noise: float = 0.0) -> Alignment:
    """Random class equivalences between o1 and o2.

    noise adds int(n_cells * noise) extra, lower-confidence equivalences on
    top of the n_cells base cells.
    """
    sources, targets = sorted(o1.classes), sorted(o2.classes)
    if not sources or not targets:
        return Alignment(o1.iri, o2.iri)
    pairs = set()
    cells: List[Cell] = []

    def draw(count: int, low: float, high: float):
        budget = 20 * (count + 10)
        wanted, attempts = count, 0
        while count and attempts < budget:
            attempts += 1
            pair = (rng.choice(sources), rng.choice(targets))
            if pair in pairs:
                continue
            pairs.add(pair)
            count -= 1
            cells.append(Cell(pair[0], pair[1], '=', round(rng.uniform(low, high), 3), len(cells)))
        if count:
            logger.warning("Alignment %s -> %s: generated %d of %d requested cells from %d class pairs",
                           o1.iri, o2.iri, wanted - count, wanted, len(sources) * len(targets))

    draw(n_cells, 0.5, 1.0)
    draw(int(n_cells * noise), 0.05, 0.7)
    return Alignment(o1.iri, o2.iri, tuple(cells))


def generate_suite(n_ontologies: int = 3, total_classes: int = 250_000, total_cells: int = 25_000,
                   seed: int = 0, pairs: Optional[Sequence[Tuple[int, int]]] = None, noise: float = 0.0,
                   **ontology_options) -> Tuple[List[Ontology], List[Tuple[Tuple[int, int], Alignment]]]:
    """Ontologies of roughly equal size plus one alignment per pair (all pairs by default)."""
    rng = random.Random(seed)
    sizes = [total_classes // n_ontologies] * n_ontologies
    sizes[0] += total_classes - sum(sizes)
    ontologies = [generate_ontology(i, size, rng, **ontology_options) for i, size in enumerate(sizes, start=1)]

    if pairs is None:
        pairs = [(i, j) for i in range(1, n_ontologies + 1) for j in range(i + 1, n_ontologies + 1)]
    alignments = []
    per_pair = total_cells // len(pairs) if pairs else 0
    for number, (i, j) in enumerate(pairs):
        count = per_pair + (total_cells - per_pair * len(pairs) if number == 0 else 0)
        alignments.append(((i, j), generate_alignment(ontologies[i - 1], ontologies[j - 1], count, rng, noise)))
    logger.info("Generated suite: %d ontologies, %d classes, %d cells",
                n_ontologies, total_classes, sum(len(a) for _, a in alignments))
    return ontologies, alignments
