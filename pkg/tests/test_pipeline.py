import random
import time

import pytest

from alignment import Alignment, Cell, parse_alignment, serialize_alignment, to_one_to_one
from errors import PairResolutionError
from integrator import IntegrationPlan, Mode, Style, Topology, aggregate, bridge, full_merge
from models import OutputConfig
from owl_syntax import parse_ontology, serialize_ontology
from pipeline import (
    build_plan, check_ontology, integrate, parse_ontologies, prepare_alignments, resolve_pair, run_pipeline,
)
from reasoner import classify, hierarchy_depth, unsatisfiable_classes
from synthetic import generate_alignment, generate_ontology, generate_suite

from conftest import O1, O2, THREE_CLASS_O1, THREE_CLASS_O2, closure_unsat, parse, random_ontology

CFG = OutputConfig('http://integration')
TOPOLOGIES = [Topology.two_to_two(), Topology.one_to_n(1), Topology.n_to_n()]


def unsat_count(outcome):
    ontology = outcome.ontology
    return len(unsatisfiable_classes(ontology, classify(ontology)).unsat)


def shared_five_fixture():
    """Three ontologies whose classes X0..X4 hang under disjoint A/B parents, aligned with a shift."""
    ontologies = []
    for k in range(1, 4):
        ns = f'http://s{k}.org/onto#'
        lines = [f"DisjointClasses(<{ns}A> <{ns}B>)"]
        for m in range(5):
            parent = 'A' if (m + k) % 2 == 0 else 'B'
            lines.append(f"SubClassOf(<{ns}X{m}> <{ns}{parent}>)")
        ontologies.append(parse(f"Ontology(<http://s{k}.org/onto>\n" + '\n'.join(lines) + "\n)"))

    alignments = []
    for i, j in ((1, 2), (1, 3), (2, 3)):
        cells = tuple(
            Cell(f'http://s{i}.org/onto#X{m}', f'http://s{j}.org/onto#X{(m + 1) % 5}', '=', 0.5 + m / 10, m)
            for m in range(5)
        )
        alignments.append(((i, j), Alignment(f'http://s{i}.org/onto', f'http://s{j}.org/onto', cells)))
    return ontologies, alignments


def test_resolve_pair():
    o1, o2 = parse(THREE_CLASS_O1), parse(THREE_CLASS_O2)
    assert resolve_pair(Alignment(O2 + '#', O1), [o1, o2]) == (2, 1)
    with pytest.raises(PairResolutionError):
        resolve_pair(Alignment('http://unknown', O1), [o1, o2])
    with pytest.raises(PairResolutionError):
        resolve_pair(Alignment(O1, O1), [o1, o2])


def test_parse_ontologies_keeps_order():
    parsed = parse_ontologies([THREE_CLASS_O1, THREE_CLASS_O2, THREE_CLASS_O1], workers=3)
    assert [o.iri for o, _ in parsed] == [O1, O2, O1]


def test_prepare_alignments_follows_topology():
    ontologies, alignments = shared_five_fixture()
    plan = IntegrationPlan(topology=Topology.two_to_two(), threshold=0.65)
    prepared = prepare_alignments(alignments, plan, 3)
    assert [pair for pair, _ in prepared] == [(1, 2), (2, 3)]
    assert all(cell.measure >= 0.65 for _, a in prepared for cell in a.cells)


def test_prepare_alignments_combines_same_pair():
    first = Alignment('http://x', 'http://y', (Cell('http://x#a', 'http://y#b', '=', 1.0, 0),))
    second = Alignment('http://y', 'http://x', (Cell('http://y#c', 'http://x#d', '=', 1.0, 0),))
    prepared = prepare_alignments([((1, 2), first), ((2, 1), second)], IntegrationPlan(), 2)
    assert len(prepared) == 1
    assert len(prepared[0][1]) == 2


def test_aggregate_ignores_alignments(three_class):
    o1, o2, alignment = three_class
    outcome, repaired = integrate([o1, o2], [((2, 1), alignment)], CFG, IntegrationPlan(mode=Mode.AGGREGATE))
    assert outcome.bridged_cells == 0
    assert repaired is None


def test_aggregate_single_ontology(three_class):
    o1, _, _ = three_class
    result = run_pipeline([o1], [], CFG, IntegrationPlan(mode=Mode.AGGREGATE))
    assert result.ontology.classes == {f'{CFG.base_iri}/001#{name}' for name in ('A1', 'A2', 'D1', 'D2')}
    assert result.metrics.axiom_law == 'PASS'


def test_build_plan():
    plan = build_plan({'mode': 'full-merge', 'style': 'refactor', 'topology': '1-to-n', 'pivot': 2,
                       'threshold': 0.3, 'one_to_one': True, 'repair': False})
    assert plan == IntegrationPlan(Mode.FULL_MERGE, Style.REFACTOR, Topology.one_to_n(2), 0.3, True, False)
    assert build_plan({'mode': 'bridge', 'style': 'reference', 'topology': 'n-to-n', 'pivot': 2,
                       'threshold': 0.0, 'one_to_one': False, 'repair': True}).topology == Topology.n_to_n()


@pytest.mark.parametrize('topology', TOPOLOGIES)
@pytest.mark.parametrize('style', [Style.REFACTOR, Style.REFERENCE])
def test_axiom_preservation(topology, style):
    rng = random.Random(11)
    ontologies = [generate_ontology(i, size, rng) for i, size in enumerate((50, 70, 90), start=1)]
    alignments = [((i, j), generate_alignment(ontologies[i - 1], ontologies[j - 1], 15, rng))
                  for i, j in ((1, 2), (1, 3), (2, 3))]
    plan = IntegrationPlan(style=style, topology=topology)

    started = time.perf_counter()
    result = run_pipeline(ontologies, alignments, CFG, plan)
    assert time.perf_counter() - started < 1.0

    metrics = result.metrics
    assert metrics.logical_axioms == sum(o.counts().logical for o in ontologies) + metrics.bridged_cells
    assert metrics.axiom_law == 'PASS'
    assert metrics.bridged_cells + sum(metrics.skipped_cells.values()) == result.outcome.cells_presented


def test_one_to_one_resolves_three_class(three_class):
    o1, o2, alignment = three_class
    bridged = bridge([o1, o2], [((2, 1), alignment)], CFG, IntegrationPlan())
    assert len(unsatisfiable_classes(bridged.ontology, classify(bridged.ontology)).unsat) == 3
    assert closure_unsat(bridged.ontology) == {
        f'{CFG.base_iri}/002#C', f'{CFG.base_iri}/001#A1', f'{CFG.base_iri}/001#A2'}

    mapped = bridge([o1, o2], [((2, 1), to_one_to_one(alignment))], CFG, IntegrationPlan())
    assert unsat_count(mapped) == 0


def test_pairwise_repair_reaches_zero():
    rng = random.Random(3)
    started = time.perf_counter()
    for _ in range(20):
        o1 = generate_ontology(1, rng.randint(20, 40), rng)
        o2 = generate_ontology(2, rng.randint(20, 40), rng)
        alignment = generate_alignment(o1, o2, 8, rng, noise=1.0)
        result = run_pipeline([o1, o2], [((1, 2), alignment)], CFG, IntegrationPlan(repair=True))
        assert result.metrics.unsat_count == 0
        assert result.repair.residual_unsat == frozenset()
    assert time.perf_counter() - started < 5.0


def test_topology_ordering():
    ontologies, alignments = shared_five_fixture()
    counts = {}
    for topology in TOPOLOGIES:
        prepared = prepare_alignments(alignments, IntegrationPlan(topology=topology), 3)
        outcome = bridge(ontologies, prepared, CFG, IntegrationPlan(topology=topology))
        counts[topology.kind] = unsat_count(outcome)
        assert counts[topology.kind] == len(closure_unsat(outcome.ontology))

    n_to_n = counts[Topology.n_to_n().kind]
    assert n_to_n > 0
    assert n_to_n >= counts[Topology.two_to_two().kind]
    assert n_to_n >= counts[Topology.one_to_n(1).kind]


def test_full_merge_class_count():
    rng = random.Random(5)
    for _ in range(10):
        o1 = generate_ontology(1, rng.randint(10, 30), rng)
        o2 = generate_ontology(2, rng.randint(10, 30), rng)
        outcome = full_merge(o1, o2, generate_alignment(o1, o2, 8, rng), CFG)
        assert len(outcome.ontology.classes) == len(o1.classes) + len(o2.classes) - len(outcome.merged)


def test_full_merge_has_fewer_conflicts(three_class):
    o1, o2, alignment = three_class
    merged = full_merge(o1, o2, alignment, CFG)
    bridged = bridge([o1, o2], [((2, 1), alignment)], CFG, IntegrationPlan())
    assert unsat_count(merged) <= unsat_count(bridged)

    ontologies, alignments = shared_five_fixture()
    for (i, j), a in alignments:
        pair = [ontologies[i - 1], ontologies[j - 1]]
        merged = full_merge(*pair, a, CFG)
        bridged = bridge(pair, [((1, 2), a)], CFG, IntegrationPlan())
        assert unsat_count(merged) <= unsat_count(bridged)


def test_aggregate_neutrality():
    rng = random.Random(13)
    for trial in range(20):
        sources = [random_ontology(rng, rng.randint(3, 12), f'http://r{k}.org/onto') for k in range(1, 4)]
        outcome = aggregate(sources, CFG)
        output = outcome.ontology
        taxonomy = classify(output)
        unsat = {outcome.original_iri(iri) for iri in unsatisfiable_classes(output, taxonomy).unsat}

        assert unsat == set().union(*(closure_unsat(o) for o in sources)), f"trial {trial}"
        assert hierarchy_depth(taxonomy) == max(hierarchy_depth(classify(o)) for o in sources)


def test_round_trip_fixture_corpus(three_class):
    ontologies, alignments = generate_suite(3, 300, 40, seed=2)
    fixtures, _ = shared_five_fixture()
    for ontology in ontologies + fixtures + list(three_class[:2]):
        again, _ = parse_ontology(serialize_ontology(ontology))
        assert again == ontology
    for _, alignment in alignments + [((2, 1), three_class[2])]:
        assert parse_alignment(serialize_alignment(alignment)) == alignment


def test_pipeline_is_deterministic(three_class):
    o1, o2, alignment = three_class
    runs = [run_pipeline([o1, o2], [((2, 1), alignment)], CFG, IntegrationPlan(repair=True)) for _ in range(2)]
    assert serialize_ontology(runs[0].ontology) == serialize_ontology(runs[1].ontology)
    first, second = (run.metrics for run in runs)
    first.timings = second.timings = {}
    assert first == second


def test_check_ontology(three_class):
    o1, _, _ = three_class
    report = check_ontology(o1)
    assert report.coherent and report.consistent


def test_scaled_bridge_performance():
    ontologies, alignments = generate_suite(3, 25_000, 2_500, seed=1)
    assert sum(len(a) for _, a in alignments) == 2_500
    started = time.perf_counter()
    outcome = bridge(ontologies, alignments, CFG, IntegrationPlan())
    assert time.perf_counter() - started < 60.0
    assert outcome.bridged_cells + len(outcome.skipped_cells) == 2_500

    result = check_ontology(outcome.ontology, justify_limit=5)
    assert result.consistent is not None


@pytest.mark.slow
def test_full_scale_benchmark():
    ontologies, alignments = generate_suite(3, 250_000, 25_000, seed=1)
    assert sum(len(o.classes) for o in ontologies) == 250_000
    assert sum(len(a) for _, a in alignments) == 25_000
    texts = [serialize_ontology(o) for o in ontologies]

    started = time.perf_counter()
    parsed = [o for o, _ in parse_ontologies(texts)]
    bridge_started = time.perf_counter()
    outcome = bridge(parsed, alignments, CFG, IntegrationPlan())
    assert time.perf_counter() - bridge_started < 60.0
    assert outcome.bridged_cells + len(outcome.skipped_cells) == 25_000
    assert outcome.bridged_cells == 25_000

    check_ontology(outcome.ontology, justify_limit=10)
    serialize_ontology(outcome.ontology)
    assert time.perf_counter() - started < 300.0
