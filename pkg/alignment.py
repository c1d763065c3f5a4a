"""Alignment format reader/writer, threshold filtering and the 1-to-N to 1-to-1
transformation."""
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Tuple

from errors import AlignmentXmlError, MeasureOutOfRange, ThresholdOutOfRange, UnknownRelation
from logging_config import get_logger

logger = get_logger('alignment')

ALIGN_NS = 'http://knowledgeweb.semanticweb.org/heterogeneity/alignment'
RDF_NS = 'http://www.w3.org/1999/02/22-rdf-syntax-ns#'
XSD_FLOAT = 'http://www.w3.org/2001/XMLSchema#float'

RELATIONS = ('=', '?', '<', '>', '%')
EQUIVALENCE_RELATIONS = ('=', '?')

ET.register_namespace('', ALIGN_NS)
ET.register_namespace('rdf', RDF_NS)


def _a(tag):
    return f'{{{ALIGN_NS}}}{tag}'


def _r(tag):
    return f'{{{RDF_NS}}}{tag}'


@dataclass(frozen=True)
class Cell:
    entity1: str
    entity2: str
    relation: str = '='
    measure: float = 1.0
    doc_order: int = 0

    @property
    def key(self) -> Tuple[str, str, str]:
        return self.entity1, self.entity2, self.relation


@dataclass(frozen=True)
class Alignment:
    onto1: str
    onto2: str
    cells: Tuple[Cell, ...] = ()
    level: str = '0'
    arity: str = '**'

    def __len__(self):
        return len(self.cells)


def _onto_iri(element: Optional[ET.Element]) -> str:
    if element is None:
        return ''
    ontology = element.find(_a('Ontology'))
    if ontology is not None:
        return ontology.get(_r('about'), '').strip()
    return (element.text or '').strip()


def _measure(text: Optional[str]) -> float:
    if text is None or not text.strip():
        return 1.0
    try:
        value = float(text)
    except ValueError:
        raise AlignmentXmlError(f"measure {text!r} is not a number")
    if not 0.0 <= value <= 1.0:
        raise MeasureOutOfRange(text.strip())
    return value


def _relation(text: Optional[str]) -> str:
    if text is None or not text.strip():
        return '='
    token = text.strip()
    if token not in RELATIONS:
        raise UnknownRelation(token)
    return token


def parse_alignment(xml) -> Alignment:
    """Read an Alignment document (root Alignment, or rdf:RDF wrapping one)."""
    if hasattr(xml, 'read'):
        xml = xml.read()
    try:
        root = ET.fromstring(xml)
    except ET.ParseError as e:
        raise AlignmentXmlError(f"malformed alignment XML: {e}")

    node = root if root.tag == _a('Alignment') else root.find(_a('Alignment'))
    if node is None:
        raise AlignmentXmlError(f"no Alignment element in namespace {ALIGN_NS}")

    cells: List[Cell] = []
    seen = set()
    for order, element in enumerate(node.iter(_a('Cell'))):
        entity1 = element.find(_a('entity1'))
        entity2 = element.find(_a('entity2'))
        if entity1 is None or entity2 is None:
            raise AlignmentXmlError(f"cell {order} lacks entity1 or entity2")
        source, target = entity1.get(_r('resource')), entity2.get(_r('resource'))
        if not source or not target:
            raise AlignmentXmlError(f"cell {order} lacks an rdf:resource attribute")
        measure_element = element.find(_a('measure'))
        relation_element = element.find(_a('relation'))
        cell = Cell(
            entity1=source.strip(),
            entity2=target.strip(),
            relation=_relation(relation_element.text if relation_element is not None else None),
            measure=_measure(measure_element.text if measure_element is not None else None),
            doc_order=len(cells),
        )
        if cell.key in seen:
            logger.warning("Duplicate cell %s %s %s dropped", *cell.key)
            continue
        seen.add(cell.key)
        cells.append(cell)

    level = node.findtext(_a('level'), '0').strip()
    arity = node.findtext(_a('type'), '**').strip()
    return Alignment(
        onto1=_onto_iri(node.find(_a('onto1'))),
        onto2=_onto_iri(node.find(_a('onto2'))),
        cells=tuple(cells),
        level=level,
        arity=arity,
    )


def _format_measure(value: float) -> str:
    # repr() is the shortest decimal that reads back to the same float
    return repr(float(value))


def serialize_alignment(a: Alignment) -> str:
    root = ET.Element(_a('Alignment'))
    ET.SubElement(root, _a('xml')).text = 'yes'
    ET.SubElement(root, _a('level')).text = a.level
    ET.SubElement(root, _a('type')).text = a.arity
    for tag, iri in (('onto1', a.onto1), ('onto2', a.onto2)):
        onto = ET.SubElement(root, _a(tag))
        ET.SubElement(onto, _a('Ontology'), {_r('about'): iri})
    for cell in a.cells:
        mapping = ET.SubElement(root, _a('map'))
        element = ET.SubElement(mapping, _a('Cell'))
        ET.SubElement(element, _a('entity1'), {_r('resource'): cell.entity1})
        ET.SubElement(element, _a('entity2'), {_r('resource'): cell.entity2})
        ET.SubElement(element, _a('relation')).text = cell.relation
        ET.SubElement(element, _a('measure'), {_r('datatype'): XSD_FLOAT}).text = _format_measure(cell.measure)
    ET.indent(root)
    body = ET.tostring(root, encoding='unicode')
    return "<?xml version='1.0' encoding='utf-8'?>\n" + body + '\n'


def _check_threshold(t: float):
    if not 0.0 <= t <= 1.0:
        raise ThresholdOutOfRange(t)


def threshold_filter(a: Alignment, t: float) -> Alignment:
    """Keep the cells whose measure is at least t."""
    _check_threshold(t)
    return replace(a, cells=tuple(cell for cell in a.cells if cell.measure >= t))


def _keep_best(cells: Iterable[Cell], key) -> Dict[str, Cell]:
    best: Dict[str, Cell] = {}
    for cell in cells:
        held = best.get(key(cell))
        # strictly greater: on ties the earlier cell stays
        if held is None or cell.measure > held.measure:
            best[key(cell)] = cell
    return best


def to_one_to_one(a: Alignment) -> Alignment:
    """Reduce a 1-to-N alignment to a mapping.

    Pass one keeps, per source entity, the most confident cell; pass two does
    the same per target entity over the pass-one survivors, visited in
    document order.
    """
    by_source = _keep_best(a.cells, lambda cell: cell.entity1)
    survivors = sorted(by_source.values(), key=lambda cell: cell.doc_order)
    by_target = _keep_best(survivors, lambda cell: cell.entity2)
    kept = tuple(sorted(by_target.values(), key=lambda cell: cell.doc_order))
    logger.debug("One-to-one filter kept %d of %d cells", len(kept), len(a.cells))
    return replace(a, cells=kept, arity='11')


def combine_alignments(alignments: List[Alignment]) -> Alignment:
    """Concatenate alignments for one ontology pair, renumbering document order."""
    if not alignments:
        raise ValueError("nothing to combine")
    first = alignments[0]
    cells, seen = [], set()
    for alignment in alignments:
        for cell in alignment.cells:
            if cell.key in seen:
                continue
            seen.add(cell.key)
            cells.append(replace(cell, doc_order=len(cells)))
    return replace(first, cells=tuple(cells))


def alignment_stats(a: Alignment) -> dict:
    relations = Counter(cell.relation for cell in a.cells)
    sources = {cell.entity1 for cell in a.cells}
    targets = {cell.entity2 for cell in a.cells}
    return {
        'cells': len(a.cells),
        'relations': {relation: relations[relation] for relation in RELATIONS if relations[relation]},
        'sources': len(sources),
        'targets': len(targets),
        'one_to_one': len(sources) == len(targets) == len(a.cells),
    }
