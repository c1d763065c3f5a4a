import random

import pytest

from errors import NotUnsatisfiable
from integrator import IntegrationPlan, bridge
from models import OWL_NOTHING, OWL_THING, Axiom, AxiomType, OutputConfig
from reasoner import classify, hierarchy_depth, is_consistent, justify_unsat, unsatisfiable_classes

from conftest import parse

T = 'http://t.org/o#'


def onto(*lines):
    body = '\n'.join(lines)
    return parse(f"Prefix(:=<{T}>)\nOntology(<http://t.org/o>\n{body}\n)")


def check(ontology, justify_limit=None):
    taxonomy = classify(ontology)
    report = unsatisfiable_classes(ontology, taxonomy, justify_limit)
    return report.with_consistency(is_consistent(ontology, report))


def test_taxonomy_queries():
    ontology = onto("SubClassOf(:A :B)", "SubClassOf(:B :C)", "EquivalentClasses(:C :D)", "SubClassOf(:E owl:Thing)")
    taxonomy = classify(ontology)

    assert taxonomy.subsumes(T + 'C', T + 'A')
    assert taxonomy.subsumes(T + 'D', T + 'A')
    assert not taxonomy.subsumes(T + 'A', T + 'C')
    assert taxonomy.subsumes(OWL_THING, T + 'E')
    assert taxonomy.equivalents(T + 'C') == {T + 'C', T + 'D'}
    assert taxonomy.ancestors(T + 'A') == {T + 'B', T + 'C', T + 'D'}
    assert taxonomy.classes == {T + c for c in 'ABCDE'}
    assert taxonomy.node_of(OWL_THING) is None


def test_three_class_bridge_is_incoherent(three_class):
    o1, o2, alignment = three_class
    output = bridge([o1, o2], [((2, 1), alignment)], OutputConfig('http://integration'), IntegrationPlan()).ontology
    report = check(output)
    i = 'http://integration/'

    assert report.unsat == {i + '002#C', i + '001#A1', i + '001#A2'}
    assert report.root_classes == (i + '001#A1',)
    assert not report.coherent
    assert report.consistent

    justification = report.justifications[i + '001#A1']
    assert justification.pair == (i + '001#D1', i + '001#D2')
    assert justification.path1 == (i + '001#A1', i + '001#D1')
    assert justification.path2[0] == i + '001#A1'
    assert justification.path2[-1] == i + '001#D2'
    assert Axiom.of(AxiomType.DISJOINT_CLASSES, i + '001#D1', i + '001#D2') in justification.axioms
    assert Axiom.of(AxiomType.EQUIVALENT_CLASSES, i + '002#C', i + '001#A2') in justification.axioms


def test_coherent_ontology():
    report = check(onto("SubClassOf(:A :B)", "DisjointClasses(:A :C)"))
    assert report.unsat == frozenset()
    assert report.coherent
    assert report.root_classes == ()
    assert report.justifications == {}


def test_equivalent_disjoint_classes():
    ontology = onto("EquivalentClasses(:A :B)", "DisjointClasses(:A :B)")
    report = check(ontology)
    assert report.unsat == {T + 'A', T + 'B'}
    assert report.root_classes == (T + 'A',)

    justification = report.justifications[T + 'A']
    assert justification.pair == (T + 'A', T + 'B')
    assert justification.path1 == (T + 'A',)
    assert justification.path2 == (T + 'A', T + 'B')
    assert justification.hops == (0, 0)


def test_subclass_of_nothing():
    report = check(onto("SubClassOf(:A owl:Nothing)", "SubClassOf(:B :A)"))
    assert report.unsat == {T + 'A', T + 'B'}
    assert report.root_classes == (T + 'A',)
    assert report.is_unsat(OWL_NOTHING)
    assert OWL_NOTHING not in report.unsat

    justification = report.justifications[T + 'A']
    assert justification.pair == (OWL_NOTHING, OWL_NOTHING)
    assert justification.axioms == (Axiom.of(AxiomType.SUB_CLASS_OF, T + 'A', OWL_NOTHING),)


def test_disjointness_with_thing_is_a_clash():
    ontology = onto("DisjointClasses(:A owl:Thing)", "SubClassOf(:B :A)", "SubClassOf(:C owl:Thing)")
    report = check(ontology)
    assert report.unsat == {T + 'A', T + 'B'}
    assert report.root_classes == (T + 'A',)
    assert classify(ontology).subsumes(OWL_THING, T + 'A')

    justification = report.justifications[T + 'A']
    assert justification.pair == (T + 'A', T + 'A')
    assert justification.path1 == justification.path2 == (T + 'A',)
    assert justification.axioms == (Axiom.of(AxiomType.DISJOINT_CLASSES, T + 'A', OWL_THING),)


def test_justify_limit():
    lines = [f"SubClassOf(:X{i} :P{i})" for i in range(5)] + [f"SubClassOf(:X{i} :Q{i})" for i in range(5)]
    lines += [f"DisjointClasses(:P{i} :Q{i})" for i in range(5)]
    report = check(onto(*lines), justify_limit=2)
    assert len(report.root_classes) == 5
    assert sorted(report.justifications) == list(report.root_classes[:2])


def test_justify_satisfiable_class():
    ontology = onto("SubClassOf(:A :B)")
    with pytest.raises(NotUnsatisfiable):
        justify_unsat(T + 'A', ontology, classify(ontology))
    with pytest.raises(NotUnsatisfiable):
        justify_unsat(T + 'Missing', ontology, classify(ontology))


@pytest.mark.parametrize('lines, depth', [
    ((), 0),
    (("Declaration(Class(:A))",), 1),
    (("SubClassOf(:A :B)", "SubClassOf(:B :C)"), 3),
    (("SubClassOf(:A :B)", "EquivalentClasses(:B :C)", "SubClassOf(:C owl:Thing)"), 2),
    (("SubClassOf(:A :B)", "SubClassOf(:B owl:Nothing)"), 2),
])
def test_hierarchy_depth(lines, depth):
    assert hierarchy_depth(classify(onto(*lines))) == depth


def test_unsat_class_assertion_is_inconsistent():
    report = check(onto("SubClassOf(:A :B)", "SubClassOf(:A :C)", "DisjointClasses(:B :C)", "ClassAssertion(:A :i)"))
    assert report.consistent is False
    assert 'unsatisfiable' in report.inconsistency_reasons[0]


@pytest.mark.parametrize('lines', [
    ("DisjointClasses(:B :C)", "ClassAssertion(:B :i)", "ClassAssertion(:C :i)"),
    ("DisjointClasses(:B :C)", "SubClassOf(:A :B)", "ClassAssertion(:A :i)", "ClassAssertion(:C :j)",
     "SameIndividual(:i :k)", "SameIndividual(:k :j)"),
])
def test_individual_in_disjoint_classes(lines):
    report = check(onto(*lines))
    assert report.coherent
    assert report.consistent is False
    assert 'disjoint classes' in report.inconsistency_reasons[0]


def test_same_and_different_individuals():
    report = check(onto("SameIndividual(:i :j)", "DifferentIndividuals(:i :j)"))
    assert report.consistent is False
    assert report.inconsistency_reasons == [f"{T}i and {T}j are the same individual and declared different"]


def test_consistent_abox():
    report = check(onto("DisjointClasses(:B :C)", "ClassAssertion(:B :i)", "ClassAssertion(:C :j)",
                        "DifferentIndividuals(:i :j)"))
    assert report.consistent is True
    assert report.inconsistency_reasons == []


def test_matches_closure_oracle(random_ontology_factory, unsat_oracle):
    rng = random.Random(7)
    for trial in range(200):
        ontology = random_ontology_factory(rng, rng.randint(2, 30), nothing=True, thing=True)
        taxonomy = classify(ontology)
        report = unsatisfiable_classes(ontology, taxonomy)
        assert report.unsat == unsat_oracle(ontology), f"trial {trial}"

        for cls, justification in report.justifications.items():
            d1, d2 = justification.pair
            assert justification.path1[0] == justification.path2[0] == cls
            assert (justification.path1[-1], justification.path2[-1]) == (d1, d2)
            assert taxonomy.subsumes(d1, cls) and taxonomy.subsumes(d2, cls)
            assert d2 in taxonomy.class_partners[d1]
        assert set(report.justifications) == set(report.root_classes)
