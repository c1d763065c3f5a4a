import pytest

from alignment import Alignment, Cell
from errors import InvalidPlan
from integrator import IntegrationPlan, Mode, bridge
from models import OutputConfig
from reasoner import classify, unsatisfiable_classes
from repair import repair_alignment

from conftest import O1, O2, parse

CFG = OutputConfig('http://integration')


def test_repair_three_class(three_class):
    o1, o2, alignment = three_class
    outcome = repair_alignment([o1, o2], [((2, 1), alignment)], CFG, IntegrationPlan())

    assert [(r.cell.entity1, r.cell.entity2) for r in outcome.removed] == [(f'{O2}#C', f'{O1}#A2')]
    assert outcome.removed[0].justified_by in (f'{O2}#C', f'{O1}#A1', f'{O1}#A2')
    assert outcome.kept == [alignment.cells[0]]
    assert outcome.iterations == 2
    assert outcome.residual_unsat == frozenset()
    assert set(outcome.trace[0]) == set(alignment.cells)

    repaired = bridge([o1, o2], outcome.alignments, CFG, IntegrationPlan())
    output = repaired.ontology
    assert unsatisfiable_classes(output, classify(output)).coherent


def test_ties_remove_the_later_cell(three_class):
    o1, o2, alignment = three_class
    tied = Alignment(O2, O1, (
        Cell(f'{O2}#C', f'{O1}#A1', '=', 0.8, 0),
        Cell(f'{O2}#C', f'{O1}#A2', '=', 0.8, 1),
    ))
    outcome = repair_alignment([o1, o2], [((2, 1), tied)], CFG, IntegrationPlan())
    assert outcome.removed[0].cell == tied.cells[1]


def test_coherent_alignment_is_untouched(three_class):
    o1, o2, alignment = three_class
    single = Alignment(O2, O1, alignment.cells[:1])
    outcome = repair_alignment([o1, o2], [((2, 1), single)], CFG, IntegrationPlan())
    assert outcome.removed == []
    assert outcome.iterations == 1
    assert outcome.repaired((2, 1)) == single


def test_source_incoherence_is_reported_not_repaired():
    o1 = parse(f"""Ontology(<{O1}>
SubClassOf(<{O1}#A> <{O1}#B>) SubClassOf(<{O1}#A> <{O1}#C>) DisjointClasses(<{O1}#B> <{O1}#C>)
Declaration(Class(<{O1}#D>)))""")
    o2 = parse(f"Ontology(<{O2}> Declaration(Class(<{O2}#E>)))")
    alignment = Alignment(O1, O2, (Cell(f'{O1}#D', f'{O2}#E', '=', 0.5, 0),))

    outcome = repair_alignment([o1, o2], [((1, 2), alignment)], CFG, IntegrationPlan())
    assert outcome.removed == []
    assert outcome.residual_unsat == {f'{O1}#A'}
    assert outcome.kept == list(alignment.cells)


def test_repair_needs_bridge_mode(three_class):
    o1, o2, alignment = three_class
    with pytest.raises(InvalidPlan):
        repair_alignment([o1, o2], [((2, 1), alignment)], CFG, IntegrationPlan(mode=Mode.FULL_MERGE))
    with pytest.raises(InvalidPlan):
        repair_alignment([o1, o2], [((3, 1), alignment)], CFG, IntegrationPlan())


def test_repaired_pair_is_missing(three_class):
    o1, o2, alignment = three_class
    outcome = repair_alignment([o1, o2], [((2, 1), alignment)], CFG, IntegrationPlan())
    with pytest.raises(KeyError):
        outcome.repaired((1, 2))
