import pytest

from alignment import (
    Alignment, Cell, alignment_stats, combine_alignments, parse_alignment, serialize_alignment, threshold_filter,
    to_one_to_one,
)
from errors import AlignmentXmlError, MeasureOutOfRange, ThresholdOutOfRange, UnknownRelation


def document(cells, wrap_rdf=False):
    body = ''.join(
        f"""<map><Cell>
  <entity1 rdf:resource="{e1}"/><entity2 rdf:resource="{e2}"/>
  <relation>{rel}</relation><measure rdf:datatype="http://www.w3.org/2001/XMLSchema#float">{m}</measure>
</Cell></map>""" for e1, e2, rel, m in cells
    )
    alignment = f"""<Alignment xmlns="http://knowledgeweb.semanticweb.org/heterogeneity/alignment"
  xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">
<xml>yes</xml><level>0</level><type>**</type>
<onto1><Ontology rdf:about="http://cmt"/></onto1>
<onto2><Ontology rdf:about="http://conference"/></onto2>
{body}
</Alignment>"""
    if wrap_rdf:
        return f"""<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">{alignment}</rdf:RDF>"""
    return alignment


def cells(*specs):
    return tuple(Cell(e1, e2, '=', m, i) for i, (e1, e2, m) in enumerate(specs))


@pytest.mark.parametrize('wrap_rdf', [False, True])
def test_parse_alignment(wrap_rdf):
    a = parse_alignment(document([('http://cmt#Paper', 'http://conference#Paper', '=', '0.87')], wrap_rdf))
    assert a.onto1 == 'http://cmt'
    assert a.onto2 == 'http://conference'
    assert a.cells == (Cell('http://cmt#Paper', 'http://conference#Paper', '=', 0.87, 0),)


def test_missing_relation_and_measure_default():
    xml = document([]).replace('</Alignment>', """<map><Cell>
<entity1 rdf:resource="http://cmt#A"/><entity2 rdf:resource="http://conference#B"/>
</Cell></map></Alignment>""")
    cell, = parse_alignment(xml).cells
    assert (cell.relation, cell.measure) == ('=', 1.0)


def test_duplicate_cells_are_dropped():
    a = parse_alignment(document([('http://cmt#A', 'http://conference#B', '=', '0.5'),
                                  ('http://cmt#A', 'http://conference#B', '=', '0.9')]))
    assert len(a) == 1
    assert a.cells[0].measure == 0.5


@pytest.mark.parametrize('cell, error', [
    (('http://cmt#A', 'http://conference#B', '=', '1.5'), MeasureOutOfRange),
    (('http://cmt#A', 'http://conference#B', '=', 'high'), AlignmentXmlError),
    (('http://cmt#A', 'http://conference#B', 'sameAs', '0.5'), UnknownRelation),
])
def test_invalid_cells(cell, error):
    with pytest.raises(error):
        parse_alignment(document([cell]))


@pytest.mark.parametrize('xml', ['<Alignment', '<Other/>', ''])
def test_malformed_documents(xml):
    with pytest.raises(AlignmentXmlError):
        parse_alignment(xml)


def test_serialize_reads_back():
    a = Alignment('http://cmt', 'http://conference', (
        Cell('http://cmt#A', 'http://conference#B', '=', 0.1, 0),
        Cell('http://cmt#C', 'http://conference#D', '?', 1 / 3, 1),
    ))
    again = parse_alignment(serialize_alignment(a))
    assert again == a
    assert serialize_alignment(again) == serialize_alignment(a)


def test_threshold_filter():
    a = Alignment('http://x', 'http://y', cells(('http://x#a', 'http://y#b', 0.4), ('http://x#c', 'http://y#d', 0.5)))
    assert [c.entity1 for c in threshold_filter(a, 0.5).cells] == ['http://x#c']
    assert threshold_filter(a, 0.0) == a
    assert len(threshold_filter(a, 1.0)) == 0


@pytest.mark.parametrize('t', [-0.1, 1.01])
def test_threshold_out_of_range(t):
    with pytest.raises(ThresholdOutOfRange):
        threshold_filter(Alignment('http://x', 'http://y'), t)


def test_one_to_one_keeps_most_confident():
    a = Alignment('http://x', 'http://y', cells(
        ('http://x#a', 'http://y#b', 0.9),
        ('http://x#a', 'http://y#c', 0.7),
        ('http://x#d', 'http://y#b', 0.95),
    ))
    kept = to_one_to_one(a)
    assert [(c.entity1, c.entity2) for c in kept.cells] == [('http://x#d', 'http://y#b')]
    assert kept.arity == '11'


def test_one_to_one_ties_keep_first_in_document_order():
    a = Alignment('http://x', 'http://y', cells(('http://x#a', 'http://y#b', 0.8), ('http://x#a', 'http://y#c', 0.8)))
    assert to_one_to_one(a).cells == a.cells[:1]


def test_one_to_one_is_idempotent_and_injective():
    a = Alignment('http://x', 'http://y', cells(
        ('http://x#a', 'http://y#b', 0.3), ('http://x#a', 'http://y#c', 0.6),
        ('http://x#e', 'http://y#c', 0.6), ('http://x#e', 'http://y#f', 0.2),
        ('http://x#g', 'http://y#f', 0.9),
    ))
    once = to_one_to_one(a)
    assert to_one_to_one(once).cells == once.cells
    assert len({c.entity1 for c in once.cells}) == len({c.entity2 for c in once.cells}) == len(once)
    assert alignment_stats(once)['one_to_one']


def test_combine_renumbers_and_deduplicates():
    first = Alignment('http://x', 'http://y', cells(('http://x#a', 'http://y#b', 0.3)))
    second = Alignment('http://x', 'http://y', cells(('http://x#a', 'http://y#b', 0.9), ('http://x#c', 'http://y#d', 0.5)))
    combined = combine_alignments([first, second])
    assert [c.doc_order for c in combined.cells] == [0, 1]
    assert combined.cells[0].measure == 0.3
    with pytest.raises(ValueError):
        combine_alignments([])


def test_alignment_stats():
    a = Alignment('http://x', 'http://y', (
        Cell('http://x#a', 'http://y#b', '=', 1.0, 0),
        Cell('http://x#a', 'http://y#c', '?', 1.0, 1),
    ))
    assert alignment_stats(a) == {
        'cells': 2, 'relations': {'=': 1, '?': 1}, 'sources': 1, 'targets': 2, 'one_to_one': False,
    }
