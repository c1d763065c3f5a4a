"""Core vocabulary: IRIs, entity kinds, axioms, ontologies and the IRI
refactoring scheme used by the integrator."""
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterator, NamedTuple, Optional, Tuple, Union

from errors import IndexOutOfRange, MalformedIri

RDF = 'http://www.w3.org/1999/02/22-rdf-syntax-ns#'
RDFS = 'http://www.w3.org/2000/01/rdf-schema#'
OWL = 'http://www.w3.org/2002/07/owl#'
XSD = 'http://www.w3.org/2001/XMLSchema#'
XML = 'http://www.w3.org/XML/1998/namespace'

BUILTIN_NAMESPACES = (RDF, RDFS, OWL, XSD, XML)

OWL_THING = OWL + 'Thing'
OWL_NOTHING = OWL + 'Nothing'

BUILTIN_ANNOTATION_PROPERTIES = frozenset({
    RDFS + 'label',
    RDFS + 'comment',
    RDFS + 'seeAlso',
    OWL + 'versionInfo',
    OWL + 'priorVersion',
})

ANONYMOUS_PREFIX = '_:'

Iri = str


class EntityKind(Enum):
    CLASS = 'Class'
    OBJECT_PROPERTY = 'ObjectProperty'
    DATA_PROPERTY = 'DataProperty'
    ANNOTATION_PROPERTY = 'AnnotationProperty'
    NAMED_INDIVIDUAL = 'NamedIndividual'
    ANONYMOUS_INDIVIDUAL = 'AnonymousIndividual'
    DATATYPE = 'Datatype'


class Characteristic(Enum):
    FUNCTIONAL = 'Functional'
    INVERSE_FUNCTIONAL = 'InverseFunctional'
    TRANSITIVE = 'Transitive'
    SYMMETRIC = 'Symmetric'
    REFLEXIVE = 'Reflexive'
    IRREFLEXIVE = 'Irreflexive'


class Slot(Enum):
    """Role of one axiom operand."""
    CLASS = 'class'
    OBJECT_PROPERTY = 'object property'
    DATA_PROPERTY = 'data property'
    ANNOTATION_PROPERTY = 'annotation property'
    INDIVIDUAL = 'individual'
    DATATYPE = 'datatype'
    LITERAL = 'literal'
    DECLARED = 'declared entity'
    SUBJECT = 'annotation subject'
    VALUE = 'annotation value'


class AxiomType(Enum):
    DECLARATION = 'Declaration'
    SUB_CLASS_OF = 'SubClassOf'
    EQUIVALENT_CLASSES = 'EquivalentClasses'
    DISJOINT_CLASSES = 'DisjointClasses'
    SUB_OBJECT_PROPERTY_OF = 'SubObjectPropertyOf'
    EQUIVALENT_OBJECT_PROPERTIES = 'EquivalentObjectProperties'
    DISJOINT_OBJECT_PROPERTIES = 'DisjointObjectProperties'
    INVERSE_OBJECT_PROPERTIES = 'InverseObjectProperties'
    OBJECT_PROPERTY_DOMAIN = 'ObjectPropertyDomain'
    OBJECT_PROPERTY_RANGE = 'ObjectPropertyRange'
    PROPERTY_CHARACTERISTIC = 'PropertyCharacteristic'
    FUNCTIONAL_DATA_PROPERTY = 'FunctionalDataProperty'
    SUB_DATA_PROPERTY_OF = 'SubDataPropertyOf'
    EQUIVALENT_DATA_PROPERTIES = 'EquivalentDataProperties'
    DISJOINT_DATA_PROPERTIES = 'DisjointDataProperties'
    DATA_PROPERTY_DOMAIN = 'DataPropertyDomain'
    DATA_PROPERTY_RANGE = 'DataPropertyRange'
    SUB_ANNOTATION_PROPERTY_OF = 'SubAnnotationPropertyOf'
    CLASS_ASSERTION = 'ClassAssertion'
    OBJECT_PROPERTY_ASSERTION = 'ObjectPropertyAssertion'
    DATA_PROPERTY_ASSERTION = 'DataPropertyAssertion'
    SAME_INDIVIDUAL = 'SameIndividual'
    DIFFERENT_INDIVIDUALS = 'DifferentIndividuals'
    ANNOTATION_ASSERTION = 'AnnotationAssertion'


_C, _OP, _DP, _AP = Slot.CLASS, Slot.OBJECT_PROPERTY, Slot.DATA_PROPERTY, Slot.ANNOTATION_PROPERTY
_IND = Slot.INDIVIDUAL

# Fixed-arity operand roles
SIGNATURES: Dict[AxiomType, Tuple[Slot, ...]] = {
    AxiomType.DECLARATION: (Slot.DECLARED,),
    AxiomType.SUB_CLASS_OF: (_C, _C),
    AxiomType.SUB_OBJECT_PROPERTY_OF: (_OP, _OP),
    AxiomType.INVERSE_OBJECT_PROPERTIES: (_OP, _OP),
    AxiomType.OBJECT_PROPERTY_DOMAIN: (_OP, _C),
    AxiomType.OBJECT_PROPERTY_RANGE: (_OP, _C),
    AxiomType.PROPERTY_CHARACTERISTIC: (_OP,),
    AxiomType.FUNCTIONAL_DATA_PROPERTY: (_DP,),
    AxiomType.SUB_DATA_PROPERTY_OF: (_DP, _DP),
    AxiomType.DATA_PROPERTY_DOMAIN: (_DP, _C),
    AxiomType.DATA_PROPERTY_RANGE: (_DP, Slot.DATATYPE),
    AxiomType.SUB_ANNOTATION_PROPERTY_OF: (_AP, _AP),
    AxiomType.CLASS_ASSERTION: (_C, _IND),
    AxiomType.OBJECT_PROPERTY_ASSERTION: (_OP, _IND, _IND),
    AxiomType.DATA_PROPERTY_ASSERTION: (_DP, _IND, Slot.LITERAL),
    AxiomType.ANNOTATION_ASSERTION: (_AP, Slot.SUBJECT, Slot.VALUE),
}

# Unordered n-ary axioms: operands are kept sorted and distinct
NARY: Dict[AxiomType, Slot] = {
    AxiomType.EQUIVALENT_CLASSES: _C,
    AxiomType.DISJOINT_CLASSES: _C,
    AxiomType.EQUIVALENT_OBJECT_PROPERTIES: _OP,
    AxiomType.DISJOINT_OBJECT_PROPERTIES: _OP,
    AxiomType.EQUIVALENT_DATA_PROPERTIES: _DP,
    AxiomType.DISJOINT_DATA_PROPERTIES: _DP,
    AxiomType.SAME_INDIVIDUAL: _IND,
    AxiomType.DIFFERENT_INDIVIDUALS: _IND,
}

EQUIVALENCE_FOR_KIND = {
    EntityKind.CLASS: AxiomType.EQUIVALENT_CLASSES,
    EntityKind.OBJECT_PROPERTY: AxiomType.EQUIVALENT_OBJECT_PROPERTIES,
    EntityKind.DATA_PROPERTY: AxiomType.EQUIVALENT_DATA_PROPERTIES,
    EntityKind.NAMED_INDIVIDUAL: AxiomType.SAME_INDIVIDUAL,
}

_SLOT_KINDS = {
    Slot.CLASS: EntityKind.CLASS,
    Slot.OBJECT_PROPERTY: EntityKind.OBJECT_PROPERTY,
    Slot.DATA_PROPERTY: EntityKind.DATA_PROPERTY,
    Slot.ANNOTATION_PROPERTY: EntityKind.ANNOTATION_PROPERTY,
    Slot.DATATYPE: EntityKind.DATATYPE,
}


def is_anonymous(iri: Iri) -> bool:
    return iri.startswith(ANONYMOUS_PREFIX)


def is_builtin(iri: Iri) -> bool:
    """IRIs of the rdf/rdfs/owl/xsd/xml vocabularies; never refactored."""
    return iri.startswith(BUILTIN_NAMESPACES)


def individual_kind(iri: Iri) -> EntityKind:
    return EntityKind.ANONYMOUS_INDIVIDUAL if is_anonymous(iri) else EntityKind.NAMED_INDIVIDUAL


def validate_iri(value: str) -> Iri:
    if not value:
        raise MalformedIri("IRI is empty")
    if is_anonymous(value):
        if len(value) == len(ANONYMOUS_PREFIX):
            raise MalformedIri(f"anonymous node id {value!r} is empty")
        return value
    if '://' not in value:
        raise MalformedIri(f"{value!r} is not an absolute IRI")
    return value


def local_name(iri: Iri) -> str:
    """Short name of an entity: text after the last '#', else after the last '/'."""
    if is_anonymous(iri):
        raise MalformedIri(f"{iri!r} is an anonymous node, not a named entity")
    cut = iri.rfind('#')
    if cut < 0:
        cut = iri.rfind('/')
    name = iri[cut + 1:]
    if not name or cut < 0:
        raise MalformedIri(f"{iri!r} has no local name")
    return name


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Optional[Iri] = None
    language: Optional[str] = None


Operand = Union[Iri, Literal]


@dataclass(frozen=True)
class Axiom:
    type: AxiomType
    args: Tuple[Operand, ...]
    # EntityKind for declarations, Characteristic for property characteristics
    qualifier: Optional[Enum] = None

    @classmethod
    def of(cls, type_: AxiomType, *args: Operand, qualifier: Optional[Enum] = None) -> Optional['Axiom']:
        """Build an axiom, normalising n-ary operand lists.

        Returns None when an n-ary axiom has fewer than two distinct operands.
        """
        if type_ in NARY:
            operands = tuple(sorted(set(args)))
            if len(operands) < 2:
                return None
            return cls(type_, operands)
        return cls(type_, tuple(args), qualifier)

    @property
    def is_logical(self) -> bool:
        return self.type not in (AxiomType.DECLARATION, AxiomType.ANNOTATION_ASSERTION)

    def slots(self) -> Tuple[Slot, ...]:
        if self.type in NARY:
            return (NARY[self.type],) * len(self.args)
        return SIGNATURES[self.type]

    def slot_kind(self, slot: Slot, operand: Iri) -> Optional[EntityKind]:
        if slot is Slot.DECLARED:
            return self.qualifier
        if slot is Slot.INDIVIDUAL:
            return individual_kind(operand)
        if slot is Slot.SUBJECT and is_anonymous(operand):
            return EntityKind.ANONYMOUS_INDIVIDUAL
        return _SLOT_KINDS.get(slot)

    def entities(self) -> Iterator[Tuple[Iri, EntityKind]]:
        """Entity IRIs this axiom uses, with the kind each is used as."""
        for slot, operand in zip(self.slots(), self.args):
            if isinstance(operand, Literal) or slot in (Slot.SUBJECT, Slot.VALUE):
                continue
            yield operand, self.slot_kind(slot, operand)

    def classes(self) -> Tuple[Iri, ...]:
        return tuple(arg for slot, arg in zip(self.slots(), self.args) if slot is Slot.CLASS)

    def map_iris(self, fn: Callable[[Iri, Optional[EntityKind]], Iri]) -> Optional['Axiom']:
        """Rewrite every IRI operand through fn(iri, kind).

        Annotation subjects and IRI annotation values reach fn with kind None
        (or AnonymousIndividual for blank-node subjects).
        """
        mapped = []
        for slot, operand in zip(self.slots(), self.args):
            if isinstance(operand, Literal):
                if operand.datatype is not None:
                    operand = Literal(operand.lexical, fn(operand.datatype, EntityKind.DATATYPE), operand.language)
                mapped.append(operand)
            else:
                mapped.append(fn(operand, self.slot_kind(slot, operand)))
        return Axiom.of(self.type, *mapped, qualifier=self.qualifier)


class AxiomCounts(NamedTuple):
    logical: int
    declarations: int
    annotations: int
    total: int


class Ontology:
    """Immutable ordered set of axioms plus a per-kind entity index."""

    __slots__ = ('iri', 'axioms', '_axiom_set', '_index')

    def __init__(self, iri: Iri, axioms: Tuple[Axiom, ...], index: Dict[EntityKind, FrozenSet[Iri]]):
        self.iri = iri
        self.axioms = axioms
        self._axiom_set = frozenset(axioms)
        self._index = index

    def entities(self, kind: EntityKind) -> FrozenSet[Iri]:
        return self._index.get(kind, frozenset())

    @property
    def classes(self) -> FrozenSet[Iri]:
        return self.entities(EntityKind.CLASS)

    def kinds_of(self, iri: Iri) -> FrozenSet[EntityKind]:
        return frozenset(kind for kind, iris in self._index.items() if iri in iris)

    def signature(self) -> FrozenSet[Iri]:
        return frozenset().union(*self._index.values())

    def of_type(self, *types: AxiomType) -> Iterator[Axiom]:
        return (axiom for axiom in self.axioms if axiom.type in types)

    def counts(self) -> AxiomCounts:
        declarations = annotations = 0
        for axiom in self.axioms:
            if axiom.type is AxiomType.DECLARATION:
                declarations += 1
            elif axiom.type is AxiomType.ANNOTATION_ASSERTION:
                annotations += 1
        total = len(self.axioms)
        return AxiomCounts(total - declarations - annotations, declarations, annotations, total)

    def entity_counts(self) -> Dict[EntityKind, int]:
        return {kind: len(self.entities(kind)) for kind in EntityKind}

    def __contains__(self, axiom) -> bool:
        return axiom in self._axiom_set

    def __iter__(self):
        return iter(self.axioms)

    def __len__(self) -> int:
        return len(self.axioms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return self.iri == other.iri and self.axioms == other.axioms

    def __hash__(self):
        return hash((self.iri, self._axiom_set))

    def __repr__(self):
        return f'<Ontology {self.iri} axioms={len(self.axioms)}>'


class OntologyBuilder:
    """Accumulates axioms with set semantics, then freezes into an Ontology."""

    def __init__(self, iri: Iri):
        self.iri = validate_iri(iri)
        self._axioms: Dict[Axiom, None] = {}
        self._index: Dict[EntityKind, set] = {kind: set() for kind in EntityKind}

    def add(self, axiom: Axiom) -> bool:
        """Add an axiom; returns False when it was already present."""
        if axiom in self._axioms:
            return False
        self._axioms[axiom] = None
        for iri, kind in axiom.entities():
            if not is_builtin(iri):
                self._index[kind].add(iri)
        return True

    def extend(self, axioms) -> int:
        return sum(1 for axiom in axioms if self.add(axiom))

    def __contains__(self, axiom) -> bool:
        return axiom in self._axioms

    def __len__(self) -> int:
        return len(self._axioms)

    def build(self) -> Ontology:
        index = {kind: frozenset(iris) for kind, iris in self._index.items() if iris}
        return Ontology(self.iri, tuple(self._axioms), index)


@dataclass(frozen=True)
class OutputConfig:
    base_iri: Iri
    id_width: int = 3
    merged_id: str = '000'

    def __post_init__(self):
        validate_iri(self.base_iri)
        object.__setattr__(self, 'base_iri', self.base_iri.rstrip('/#'))

    @property
    def max_index(self) -> int:
        return 10 ** self.id_width - 1

    def prefix(self, ont_index: int) -> str:
        if not 1 <= ont_index <= self.max_index:
            raise IndexOutOfRange(f"ontology index {ont_index} is outside [1, {self.max_index}]")
        return f'{self.base_iri}/{ont_index:0{self.id_width}d}#'

    @property
    def merged_prefix(self) -> str:
        return f'{self.base_iri}/{self.merged_id}#'


def refactor_iri(iri: Iri, cfg: OutputConfig, ont_index: int) -> Iri:
    """Move a source entity under the output namespace, keeping its short name.

    >>> refactor_iri('http://cmt#Paper', OutputConfig('http://integration'), 1)
    'http://integration/001#Paper'
    """
    return cfg.prefix(ont_index) + local_name(iri)


def refactor_anonymous(node_id: Iri, ont_index: int) -> Iri:
    """Blank nodes get a per-source prefix so ids from different inputs never clash."""
    if not is_anonymous(node_id):
        raise MalformedIri(f"{node_id!r} is not an anonymous node id")
    return f'{ANONYMOUS_PREFIX}o{ont_index}_{node_id[len(ANONYMOUS_PREFIX):]}'


def merged_iri(name1: str, name2: str, cfg: OutputConfig) -> Iri:
    """IRI of an entity fused from an equivalent pair: <base>/000#name1=name2."""
    if not name1 or not name2:
        raise MalformedIri("merged entity names must be non-empty")
    return f'{cfg.merged_prefix}{name1}={name2}'
