import itertools
import random

import pytest

from alignment import Alignment, Cell
from app import create_app
from models import OWL_NOTHING, OWL_THING, Axiom, AxiomType, EntityKind, OntologyBuilder, is_builtin
from owl_syntax import parse_ontology


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run full-scale benchmark tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


O1 = 'http://o1.org/onto'
O2 = 'http://o2.org/onto'

THREE_CLASS_O1 = f"""
Prefix(:=<{O1}#>)
Ontology(<{O1}>
Declaration(Class(:A1))
Declaration(Class(:A2))
Declaration(Class(:D1))
Declaration(Class(:D2))
SubClassOf(:A1 :D1)
SubClassOf(:A2 :D2)
DisjointClasses(:D1 :D2)
)
"""

THREE_CLASS_O2 = f"""
Prefix(:=<{O2}#>)
Ontology(<{O2}>
Declaration(Class(:C))
)
"""


def parse(text):
    ontology, _ = parse_ontology(text)
    return ontology


@pytest.fixture
def app():
    flask_app = create_app('testing')
    with flask_app.app_context():
        yield flask_app


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def three_class():
    """O1 {A1⊑D1, A2⊑D2, D1 disjoint D2}, O2 {C}, alignment C=A1 (0.9), C=A2 (0.6)."""
    o1, o2 = parse(THREE_CLASS_O1), parse(THREE_CLASS_O2)
    alignment = Alignment(O2, O1, (
        Cell(f'{O2}#C', f'{O1}#A1', '=', 0.9, 0),
        Cell(f'{O2}#C', f'{O1}#A2', '=', 0.6, 1),
    ))
    return o1, o2, alignment


def closure_unsat(ontology):
    """Unsat named classes by Warshall closure and an exhaustive disjoint-pair scan."""
    classes = set(ontology.classes)
    edges = []
    for axiom in ontology.axioms:
        if axiom.type is AxiomType.SUB_CLASS_OF:
            edges.append(axiom.args)
        elif axiom.type is AxiomType.EQUIVALENT_CLASSES:
            edges.extend(itertools.permutations(axiom.args, 2))
    disjoint = set()
    for axiom in ontology.axioms:
        if axiom.type is AxiomType.DISJOINT_CLASSES:
            disjoint.update(itertools.permutations(axiom.args, 2))
    for edge in edges:
        classes.update(edge)
    for pair in disjoint:
        classes.update(pair)
    # every class is under owl:Thing, so disjointness with it is a self-clash
    disjoint.update((x, x) for x, y in list(disjoint) if y == OWL_THING and x != OWL_THING)
    classes.discard(OWL_THING)
    if OWL_NOTHING in classes:
        disjoint.add((OWL_NOTHING, OWL_NOTHING))

    names = sorted(classes)
    index = {name: i for i, name in enumerate(names)}
    size = len(names)
    sub = [[i == j for j in range(size)] for i in range(size)]
    for a, b in edges:
        if OWL_THING not in (a, b):
            sub[index[a]][index[b]] = True
    for k in range(size):
        for i in range(size):
            if sub[i][k]:
                row_k = sub[k]
                row_i = sub[i]
                for j in range(size):
                    if row_k[j]:
                        row_i[j] = True

    unsat = set()
    for c in names:
        supers = [names[j] for j in range(size) if sub[index[c]][j]]
        if any((x, y) in disjoint for x in supers for y in supers):
            unsat.add(c)
    return {c for c in unsat if not is_builtin(c)}


@pytest.fixture
def unsat_oracle():
    return closure_unsat


def random_ontology(rng: random.Random, n_classes: int, iri='http://random.org/onto', nothing=False, thing=False):
    """Random subsumptions, equivalences and disjointness over n_classes classes."""
    builder = OntologyBuilder(iri)
    classes = [f'{iri}#K{i}' for i in range(n_classes)]
    for cls in classes:
        builder.add(Axiom.of(AxiomType.DECLARATION, cls, qualifier=EntityKind.CLASS))
    for _ in range(rng.randint(0, 2 * n_classes)):
        a, b = rng.choice(classes), rng.choice(classes)
        if a != b:
            builder.add(Axiom.of(AxiomType.SUB_CLASS_OF, a, b))
    for _ in range(rng.randint(0, max(1, n_classes // 6))):
        axiom = Axiom.of(AxiomType.EQUIVALENT_CLASSES, *rng.sample(classes, min(n_classes, rng.randint(2, 3))))
        builder.add(axiom)
    for _ in range(rng.randint(0, max(1, n_classes // 4))):
        builder.add(Axiom.of(AxiomType.DISJOINT_CLASSES, *rng.sample(classes, 2)))
    if nothing and rng.random() < 0.5:
        builder.add(Axiom.of(AxiomType.SUB_CLASS_OF, rng.choice(classes), OWL_NOTHING))
    if thing and rng.random() < 0.3:
        builder.add(Axiom.of(AxiomType.DISJOINT_CLASSES, rng.choice(classes), OWL_THING))
    return builder.build()


@pytest.fixture
def random_ontology_factory():
    return random_ontology
