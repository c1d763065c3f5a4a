"""Structural coherence checking over the named-class hierarchy.

Subsumption is read from SubClassOf and EquivalentClasses, condensed into a
DAG of equivalence nodes; a class is unsatisfiable when two of its
subsumers (itself included) are declared disjoint.
"""
import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from errors import NotUnsatisfiable
from logging_config import get_logger
from models import OWL_NOTHING, OWL_THING, Axiom, AxiomType, Iri, Ontology, is_builtin

logger = get_logger('reasoner')


class Taxonomy:
    """Named classes condensed into a DAG; edges point from subclass to superclass."""

    def __init__(self, graph: nx.DiGraph, class_partners: Dict[Iri, Dict[Iri, Optional[Axiom]]]):
        self.graph = graph
        self.dag = nx.condensation(graph)
        self.class_partners = class_partners
        self._node_of: Dict[Iri, int] = self.dag.graph['mapping']
        self._ancestors: Dict[int, FrozenSet[int]] = {}

        self.node_partners: Dict[int, Set[int]] = defaultdict(set)
        for iri, partners in class_partners.items():
            for other in partners:
                self.node_partners[self._node_of[iri]].add(self._node_of[other])

    @property
    def classes(self) -> FrozenSet[Iri]:
        return frozenset(self.graph.nodes)

    def node_of(self, iri: Iri) -> Optional[int]:
        return self._node_of.get(iri)

    def members(self, node: int) -> FrozenSet[Iri]:
        return frozenset(self.dag.nodes[node]['members'])

    def representative(self, node: int) -> Iri:
        return min(self.dag.nodes[node]['members'])

    def parents(self, node: int) -> List[int]:
        return list(self.dag.successors(node))

    def equivalents(self, iri: Iri) -> FrozenSet[Iri]:
        node = self.node_of(iri)
        return self.members(node) if node is not None else frozenset({iri})

    def ancestor_nodes(self, node: int) -> FrozenSet[int]:
        cached = self._ancestors.get(node)
        if cached is None:
            cached = self._ancestors[node] = frozenset(nx.descendants(self.dag, node))
        return cached

    def ancestors(self, iri: Iri) -> FrozenSet[Iri]:
        """Strict named superclasses of iri, equivalents excluded."""
        node = self.node_of(iri)
        if node is None:
            return frozenset()
        return frozenset(itertools.chain.from_iterable(self.members(n) for n in self.ancestor_nodes(node)))

    def subsumes(self, sup: Iri, sub: Iri) -> bool:
        """True when sub ⊑ sup follows from the asserted hierarchy."""
        if sup == sub or sup == OWL_THING or sub == OWL_NOTHING:
            return True
        sup_node, sub_node = self.node_of(sup), self.node_of(sub)
        if sup_node is None or sub_node is None:
            return False
        return sup_node == sub_node or sup_node in self.ancestor_nodes(sub_node)

    def __len__(self):
        return self.graph.number_of_nodes()

    def __repr__(self):
        return f'<Taxonomy classes={len(self)} nodes={self.dag.number_of_nodes()}>'


def classify(o: Ontology) -> Taxonomy:
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(o.classes))

    for axiom in o.of_type(AxiomType.SUB_CLASS_OF, AxiomType.EQUIVALENT_CLASSES):
        if axiom.type is AxiomType.SUB_CLASS_OF:
            edges = [axiom.args]
        else:
            edges = itertools.permutations(axiom.args, 2)
        for sub, sup in edges:
            # owl:Thing adds no information to a subsumption edge
            if sub == sup or OWL_THING in (sub, sup):
                continue
            if not graph.has_edge(sub, sup):
                graph.add_edge(sub, sup, axiom=axiom)

    class_partners: Dict[Iri, Dict[Iri, Optional[Axiom]]] = defaultdict(dict)
    for axiom in o.of_type(AxiomType.DISJOINT_CLASSES):
        for x, y in itertools.combinations(axiom.args, 2):
            if OWL_THING in (x, y):
                # every class is under owl:Thing, so its disjoint partner clashes with itself
                other = y if x == OWL_THING else x
                if other != OWL_THING:
                    graph.add_node(other)
                    class_partners[other].setdefault(other, axiom)
                continue
            graph.add_nodes_from((x, y))
            class_partners[x].setdefault(y, axiom)
            class_partners[y].setdefault(x, axiom)
    if OWL_NOTHING in graph:
        class_partners[OWL_NOTHING][OWL_NOTHING] = None

    taxonomy = Taxonomy(graph, dict(class_partners))
    logger.info("Classified %d classes into %d nodes", len(taxonomy), taxonomy.dag.number_of_nodes())
    return taxonomy


@dataclass(frozen=True)
class Justification:
    """Why cls is unsatisfiable: a disjoint pair and a path from cls up to each member.

    Paths list every class visited, equivalence hops included, so each step
    maps back to an axiom. hops counts only the steps between equivalence
    nodes; a self-disjoint node (A equivalent to B, A disjoint with B) has
    paths (A,) and (A, B) with hops (0, 0).
    """
    cls: Iri
    pair: Tuple[Iri, Iri]
    path1: Tuple[Iri, ...]
    path2: Tuple[Iri, ...]
    axioms: Tuple[Axiom, ...]
    hops: Tuple[int, int] = (0, 0)

    def to_dict(self) -> dict:
        return {
            'class': self.cls,
            'disjoint': list(self.pair),
            'path1': list(self.path1),
            'path2': list(self.path2),
        }


@dataclass(frozen=True)
class ConsistencyVerdict:
    consistent: bool
    reasons: Tuple[str, ...] = ()

    def __bool__(self):
        return self.consistent


@dataclass
class UnsatReport:
    unsat: FrozenSet[Iri]
    taxonomy: Taxonomy = field(repr=False)
    root_classes: Tuple[Iri, ...] = ()
    justifications: Dict[Iri, Justification] = field(default_factory=dict)
    consistent: Optional[bool] = None
    inconsistency_reasons: List[str] = field(default_factory=list)
    unsat_nodes: FrozenSet[int] = field(default=frozenset(), repr=False)
    disjoint_ancestors: Dict[int, Set[int]] = field(default_factory=dict, repr=False)

    @property
    def coherent(self) -> bool:
        return not self.unsat

    def is_unsat(self, iri: Iri) -> bool:
        """Like membership in unsat, but also true for owl:Nothing and its equivalents."""
        node = self.taxonomy.node_of(iri)
        if node is None:
            return iri == OWL_NOTHING
        return node in self.unsat_nodes

    def with_consistency(self, verdict: ConsistencyVerdict) -> 'UnsatReport':
        return replace(self, consistent=verdict.consistent, inconsistency_reasons=list(verdict.reasons))


def _clashes(dset: Set[int], node_partners: Dict[int, Set[int]]) -> bool:
    return any(not node_partners[x].isdisjoint(dset) for x in dset)


def _builtin_only(t: Taxonomy, node: int) -> bool:
    return all(is_builtin(iri) for iri in t.members(node))


def unsatisfiable_classes(o: Ontology, t: Taxonomy, justify_limit: Optional[int] = None) -> UnsatReport:
    """Find every unsatisfiable named class.

    Nodes are visited superclasses first, each carrying the set of
    disjointness-participating nodes among its subsumers; a node is unsat
    when that set contains a disjoint pair or a parent is already unsat.
    Justifications are computed for the topmost unsat classes, at most
    justify_limit of them.
    """
    dag, partners = t.dag, t.node_partners
    dsets: Dict[int, Set[int]] = {}
    unsat_nodes: Set[int] = set()
    roots: List[int] = []

    for node in reversed(list(nx.topological_sort(dag))):
        parents = t.parents(node)
        own = node in partners
        if len(parents) == 1 and not own:
            dset = dsets[parents[0]]
            clash = False
        else:
            dset = set()
            for parent in parents:
                dset |= dsets[parent]
            if own:
                dset.add(node)
            clash = _clashes(dset, partners)
        dsets[node] = dset
        if clash or any(parent in unsat_nodes for parent in parents):
            unsat_nodes.add(node)
            # a class under owl:Nothing is still the topmost reportable one
            if not any(parent in unsat_nodes and not _builtin_only(t, parent) for parent in parents):
                roots.append(node)

    unsat = frozenset(
        iri for node in unsat_nodes for iri in t.members(node) if not is_builtin(iri)
    )
    root_classes = tuple(sorted(
        min(m for m in t.members(node) if not is_builtin(m))
        for node in roots if any(not is_builtin(m) for m in t.members(node))
    ))

    sample = root_classes if justify_limit is None else root_classes[:justify_limit]
    justifications = {iri: justify_unsat(iri, o, t) for iri in sample}
    logger.info("Found %d unsatisfiable classes (%d roots)", len(unsat), len(root_classes))
    return UnsatReport(
        unsat=unsat,
        taxonomy=t,
        root_classes=root_classes,
        justifications=justifications,
        unsat_nodes=frozenset(unsat_nodes),
        disjoint_ancestors=dsets,
    )


def _individual_groups(o: Ontology) -> nx.Graph:
    same = nx.Graph()
    for axiom in o.of_type(AxiomType.CLASS_ASSERTION):
        same.add_node(axiom.args[1])
    for axiom in o.of_type(AxiomType.SAME_INDIVIDUAL):
        nx.add_path(same, axiom.args)
    return same


def is_consistent(o: Ontology, r: UnsatReport) -> ConsistencyVerdict:
    t = r.taxonomy
    reasons: List[str] = []

    asserted: Dict[Iri, Set[Iri]] = defaultdict(set)
    for axiom in o.of_type(AxiomType.CLASS_ASSERTION):
        cls, individual = axiom.args
        asserted[individual].add(cls)
        if r.is_unsat(cls):
            reasons.append(f"ClassAssertion({cls} {individual}) instantiates an unsatisfiable class")

    same = _individual_groups(o)
    group_of: Dict[Iri, int] = {}
    for number, group in enumerate(nx.connected_components(same)):
        for individual in group:
            group_of[individual] = number
        nodes = {t.node_of(cls) for individual in group for cls in asserted[individual]}
        nodes.discard(None)
        if len(nodes) < 2 or nodes & r.unsat_nodes:
            continue
        dset = set().union(*(r.disjoint_ancestors[n] for n in nodes))
        clash = _find_clash(dset, t.node_partners)
        if clash is not None:
            a, b = (t.representative(n) for n in clash)
            reasons.append(f"individual {min(group)} belongs to disjoint classes {a} and {b}")

    for axiom in o.of_type(AxiomType.DIFFERENT_INDIVIDUALS):
        for i, j in itertools.combinations(axiom.args, 2):
            if i in group_of and group_of[i] == group_of.get(j):
                reasons.append(f"{i} and {j} are the same individual and declared different")

    verdict = ConsistencyVerdict(not reasons, tuple(reasons))
    if reasons:
        logger.warning("Ontology %s is inconsistent: %s", o.iri, reasons[0])
    return verdict


def _find_clash(dset: Iterable[int], node_partners: Dict[int, Set[int]]) -> Optional[Tuple[int, int]]:
    dset = set(dset)
    for x in sorted(dset):
        hits = node_partners.get(x, set()) & dset
        if hits:
            return x, min(hits)
    return None


def hierarchy_depth(t: Taxonomy) -> int:
    """Levels on the longest subclass chain; owl:Thing and owl:Nothing do not count."""
    keep = [n for n in t.dag if not t.members(n) <= {OWL_THING, OWL_NOTHING}]
    if not keep:
        return 0
    return nx.dag_longest_path_length(t.dag.subgraph(keep)) + 1


def _reach_costs(c: Iri, t: Taxonomy) -> Tuple[Dict[Iri, int], Dict[Iri, Iri]]:
    # 0-1 BFS: hops inside an equivalence node cost nothing
    dist, prev = {c: 0}, {}
    queue = deque([c])
    while queue:
        u = queue.popleft()
        for v in sorted(t.graph.successors(u)):
            weight = 0 if t.node_of(u) == t.node_of(v) else 1
            cost = dist[u] + weight
            if v not in dist or cost < dist[v]:
                dist[v], prev[v] = cost, u
                if weight:
                    queue.append(v)
                else:
                    queue.appendleft(v)
    return dist, prev


def _path(c: Iri, end: Iri, prev: Dict[Iri, Iri]) -> Tuple[Iri, ...]:
    path = [end]
    while path[-1] != c:
        path.append(prev[path[-1]])
    return tuple(reversed(path))


def justify_unsat(c: Iri, o: Ontology, t: Taxonomy) -> Justification:
    """Cheapest disjoint pair above c with a subsumption path to each member."""
    if c not in t.graph:
        raise NotUnsatisfiable(c)
    dist, prev = _reach_costs(c, t)

    best = None
    for x in dist:
        for y, axiom in t.class_partners.get(x, {}).items():
            if y not in dist:
                continue
            pair = (x, y) if x <= y else (y, x)
            key = (dist[x] + dist[y], pair)
            if best is None or key < best[0]:
                best = key, axiom
    if best is None:
        raise NotUnsatisfiable(c)

    (_, (d1, d2)), disjoint_axiom = best
    hops = (dist[d1], dist[d2])
    path1, path2 = _path(c, d1, prev), _path(c, d2, prev)
    axioms = []
    for path in (path1, path2):
        for u, v in zip(path, path[1:]):
            axioms.append(t.graph.edges[u, v]['axiom'])
    if disjoint_axiom is not None:
        axioms.append(disjoint_axiom)
    return Justification(c, (d1, d2), path1, path2, tuple(dict.fromkeys(axioms)), hops)
