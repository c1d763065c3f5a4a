"""Reader and writer for the OWL 2 functional-style subset covering the axiom
forms of models.py.

Restrictions, imports, axiom annotations and other well-formed constructs
outside the subset are skipped and counted in ParseDiagnostics.
"""
import bisect
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple, Union

from errors import EmptyDocument, MalformedIri, OwlSyntaxError
from logging_config import get_logger
from models import (
    BUILTIN_ANNOTATION_PROPERTIES, OWL, RDF, RDFS, XML, XSD, Axiom, AxiomType, Characteristic,
    EntityKind, Literal, Ontology, OntologyBuilder, Slot, NARY, SIGNATURES, is_anonymous, is_builtin,
    validate_iri,
)

logger = get_logger('owl_syntax')

DEFAULT_PREFIXES = {
    'owl:': OWL,
    'rdf:': RDF,
    'rdfs:': RDFS,
    'xsd:': XSD,
    'xml:': XML,
}

_TOKEN = re.compile(r'''
    (?P<ws>\s+)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<dtype>\^\^)
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<eq>=)
  | (?P<blank>_:[A-Za-z0-9_\-.]+)
  | (?P<pname>(?:[A-Za-z][\w\-.]*)?:[^\s()<>"=^@]*)
  | (?P<keyword>[A-Za-z][A-Za-z0-9]*)
  | (?P<error>.)
''', re.VERBOSE | re.DOTALL)

_ESCAPE = re.compile(r'\\(.)', re.DOTALL)

MAX_NESTING = 200

_DECLARATION_KINDS = {
    kind.value: kind for kind in EntityKind if kind is not EntityKind.ANONYMOUS_INDIVIDUAL
}

# functional-syntax keyword -> (axiom type, qualifier)
_AXIOM_KEYWORDS = {
    axiom_type.value: (axiom_type, None)
    for axiom_type in AxiomType
    if axiom_type not in (AxiomType.DECLARATION, AxiomType.PROPERTY_CHARACTERISTIC)
}
_AXIOM_KEYWORDS.update({
    f'{characteristic.value}ObjectProperty': (AxiomType.PROPERTY_CHARACTERISTIC, characteristic)
    for characteristic in Characteristic
})

_IRI_SLOTS = {
    Slot.CLASS, Slot.OBJECT_PROPERTY, Slot.DATA_PROPERTY, Slot.ANNOTATION_PROPERTY,
    Slot.INDIVIDUAL, Slot.DATATYPE, Slot.SUBJECT,
}


@dataclass
class ParseDiagnostics:
    warnings: List[Tuple[int, str]] = field(default_factory=list)
    ignored_constructs: Counter = field(default_factory=Counter)

    def warn(self, line: int, message: str):
        self.warnings.append((line, message))

    def ignore(self, construct: str, line: int, message: Optional[str] = None):
        self.ignored_constructs[construct] += 1
        if message:
            self.warn(line, message)


class _Call(NamedTuple):
    name: str
    args: list
    pos: int


Term = Union[str, Literal, _Call]


class _Unsupported(Exception):
    def __init__(self, construct):
        super().__init__(construct)
        self.construct = construct


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self._newlines = [m.start() for m in re.finditer('\n', text)]
        self._tokens = (
            (m.lastgroup, m.group(), m.start())
            for m in _TOKEN.finditer(text) if m.lastgroup != 'ws'
        )
        self._peeked = None
        self._advance()

    def _advance(self):
        self._peeked = next(self._tokens, ('eof', '', len(self.text)))
        if self._peeked[0] == 'error':
            kind, value, pos = self._peeked
            raise OwlSyntaxError(self.line(pos), 'a token', value)

    def line(self, pos: int) -> int:
        return bisect.bisect_left(self._newlines, pos) + 1

    def peek(self):
        return self._peeked

    def next(self):
        token = self._peeked
        if token[0] != 'eof':
            self._advance()
        return token

    def expect(self, kind: str, expected: str):
        token = self.next()
        if token[0] != kind:
            raise OwlSyntaxError(self.line(token[2]), expected, token[1] or 'end of document')
        return token


class _Reader:
    def __init__(self, text: str):
        self.lexer = _Lexer(text)
        self.prefixes = dict(DEFAULT_PREFIXES)

    def iri(self, token) -> str:
        kind, value, pos = token
        if kind == 'iri':
            value = value[1:-1]
        elif kind == 'pname':
            cut = value.index(':') + 1
            namespace = self.prefixes.get(value[:cut])
            if namespace is None:
                raise OwlSyntaxError(self.lexer.line(pos), 'a declared prefix', value[:cut])
            value = namespace + value[cut:]
        elif kind != 'blank':
            raise OwlSyntaxError(self.lexer.line(pos), 'an IRI', value or 'end of document')
        try:
            return validate_iri(value)
        except MalformedIri:
            raise OwlSyntaxError(self.lexer.line(pos), 'an absolute IRI', value)

    def term(self, depth: int = 0) -> Term:
        token = self.lexer.next()
        kind, value, pos = token
        if kind == 'keyword':
            if depth >= MAX_NESTING:
                raise OwlSyntaxError(self.lexer.line(pos), f'at most {MAX_NESTING} nested expressions', value)
            self.lexer.expect('lpar', f"'(' after {value}")
            args = []
            while self.lexer.peek()[0] != 'rpar':
                if self.lexer.peek()[0] == 'eof':
                    raise OwlSyntaxError(self.lexer.line(pos), f"')' closing {value}", 'end of document')
                args.append(self.term(depth + 1))
            self.lexer.next()
            return _Call(value, args, pos)
        if kind == 'string':
            lexical = _ESCAPE.sub(r'\1', value[1:-1])
            follow = self.lexer.peek()[0]
            if follow == 'dtype':
                self.lexer.next()
                return Literal(lexical, datatype=self.iri(self.lexer.next()))
            if follow == 'lang':
                return Literal(lexical, language=self.lexer.next()[1][1:])
            return Literal(lexical)
        return self.iri(token)

    def prefix_declaration(self):
        start = self.lexer.next()
        self.lexer.expect('lpar', "'(' after Prefix")
        kind, name, pos = self.lexer.expect('pname', 'a prefix name')
        if not name.endswith(':'):
            raise OwlSyntaxError(self.lexer.line(pos), "a prefix name ending with ':'", name)
        self.lexer.expect('eq', "'='")
        self.prefixes[name] = self.iri(self.lexer.expect('iri', 'a full IRI'))
        self.lexer.expect('rpar', "')' closing Prefix")
        return start


def _read_text(text) -> str:
    if hasattr(text, 'read'):
        text = text.read()
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as e:
            line = text.count(b'\n', 0, e.start) + 1
            raise OwlSyntaxError(line, 'UTF-8 text', text[e.start:e.end])
    return text


def _convert(call: _Call) -> Optional[Axiom]:
    """Turn one top-level construct into an Axiom; raises _Unsupported."""
    args = [arg for arg in call.args if not (isinstance(arg, _Call) and arg.name == 'Annotation')]

    if call.name == 'Declaration':
        if len(args) != 1 or not isinstance(args[0], _Call) or args[0].name not in _DECLARATION_KINDS:
            raise _Unsupported(call.name)
        inner = args[0]
        if len(inner.args) != 1 or not isinstance(inner.args[0], str) or is_anonymous(inner.args[0]):
            raise _Unsupported(call.name)
        return Axiom.of(AxiomType.DECLARATION, inner.args[0], qualifier=_DECLARATION_KINDS[inner.name])

    if call.name not in _AXIOM_KEYWORDS:
        raise _Unsupported(call.name)
    axiom_type, qualifier = _AXIOM_KEYWORDS[call.name]

    if axiom_type in NARY:
        slots = (NARY[axiom_type],) * len(args)
        if len(args) < 2:
            raise _BadArity(call, 'at least 2')
    else:
        slots = SIGNATURES[axiom_type]
        if len(args) != len(slots):
            raise _BadArity(call, str(len(slots)))

    for slot, arg in zip(slots, args):
        if isinstance(arg, _Call):
            raise _Unsupported(arg.name)
        if slot in _IRI_SLOTS and not isinstance(arg, str):
            raise _BadOperand(call, slot)
        if slot is Slot.LITERAL and not isinstance(arg, Literal):
            raise _BadOperand(call, slot)
        if isinstance(arg, str) and is_anonymous(arg) and slot not in (Slot.INDIVIDUAL, Slot.SUBJECT, Slot.VALUE):
            raise _BadOperand(call, slot)
    return Axiom.of(axiom_type, *args, qualifier=qualifier)


class _BadArity(Exception):
    def __init__(self, call, expected):
        super().__init__(call.name)
        self.call = call
        self.expected = f'{expected} operands for {call.name}'


class _BadOperand(Exception):
    def __init__(self, call, slot):
        super().__init__(call.name)
        self.call = call
        self.expected = f'{slot.value} operand in {call.name}'


def parse_ontology(text) -> Tuple[Ontology, ParseDiagnostics]:
    """Parse a functional-style document into an Ontology plus diagnostics."""
    text = _read_text(text)
    if not text.strip():
        raise EmptyDocument()

    reader = _Reader(text)
    lexer = reader.lexer
    diagnostics = ParseDiagnostics()

    while lexer.peek()[:2] == ('keyword', 'Prefix'):
        reader.prefix_declaration()

    kind, value, pos = lexer.next()
    if (kind, value) != ('keyword', 'Ontology'):
        raise OwlSyntaxError(lexer.line(pos), 'Ontology', value or 'end of document')
    lexer.expect('lpar', "'(' after Ontology")
    if lexer.peek()[0] not in ('iri', 'pname'):
        kind, value, pos = lexer.peek()
        raise OwlSyntaxError(lexer.line(pos), 'the ontology IRI', value or 'end of document')
    ontology_iri = reader.iri(lexer.next())
    if lexer.peek()[0] in ('iri', 'pname'):
        version_token = lexer.next()
        diagnostics.ignore('VersionIRI', lexer.line(version_token[2]),
                           f'version IRI {reader.iri(version_token)} ignored')

    items: List[Tuple[Axiom, int]] = []
    while lexer.peek()[0] != 'rpar':
        kind, value, pos = lexer.peek()
        if kind == 'eof':
            raise OwlSyntaxError(lexer.line(pos), "')' closing Ontology", 'end of document')
        if kind != 'keyword':
            raise OwlSyntaxError(lexer.line(pos), 'an axiom', value)
        term = reader.term()
        line = lexer.line(term.pos)
        if term.name == 'Import':
            diagnostics.ignore('Import', line, 'import declaration ignored; load every input explicitly')
            continue
        if term.name == 'Annotation':
            diagnostics.ignore('Annotation', line)
            continue
        try:
            axiom = _convert(term)
        except _Unsupported as e:
            diagnostics.ignore(e.construct, line, f'{term.name} skipped: {e.construct} is not supported')
            continue
        except (_BadArity, _BadOperand) as e:
            raise OwlSyntaxError(line, e.expected)
        if axiom is None:
            diagnostics.ignore(term.name, line, f'{term.name} skipped: fewer than two distinct operands')
            continue
        if any(isinstance(arg, _Call) and arg.name == 'Annotation' for arg in term.args):
            diagnostics.ignore('AxiomAnnotation', line)
        items.append((axiom, line))

    lexer.next()
    trailing = lexer.peek()
    if trailing[0] != 'eof':
        raise OwlSyntaxError(lexer.line(trailing[2]), 'end of document', trailing[1])

    builder = OntologyBuilder(ontology_iri)
    declared = set()
    annotation_properties = set(BUILTIN_ANNOTATION_PROPERTIES)
    for axiom, line in items:
        if axiom.type is AxiomType.DECLARATION:
            declared.add((axiom.args[0], axiom.qualifier))
            if axiom.qualifier is EntityKind.ANNOTATION_PROPERTY:
                annotation_properties.add(axiom.args[0])
        elif axiom.type is AxiomType.SUB_ANNOTATION_PROPERTY_OF:
            annotation_properties.update(axiom.args)

    warned = set()
    for axiom, line in items:
        if axiom.type is AxiomType.ANNOTATION_ASSERTION and axiom.args[0] not in annotation_properties:
            diagnostics.ignore('AnnotationAssertion', line,
                               f'annotation property {axiom.args[0]} is neither declared nor built in')
            continue
        builder.add(axiom)
        if not axiom.is_logical:
            continue
        for iri, kind in axiom.entities():
            if kind is EntityKind.ANONYMOUS_INDIVIDUAL or is_builtin(iri):
                continue
            if (iri, kind) not in declared and (iri, kind) not in warned:
                warned.add((iri, kind))
                diagnostics.warn(line, f'{kind.value} {iri} used without declaration')

    ontology = builder.build()
    logger.debug("Parsed %s: %d axioms, %d warnings, ignored %s",
                 ontology.iri, len(ontology), len(diagnostics.warnings), dict(diagnostics.ignored_constructs))
    return ontology, diagnostics


def _escape(lexical: str) -> str:
    return lexical.replace('\\', '\\\\').replace('"', '\\"')


def format_operand(operand) -> str:
    if isinstance(operand, Literal):
        text = f'"{_escape(operand.lexical)}"'
        if operand.datatype is not None:
            return f'{text}^^<{operand.datatype}>'
        if operand.language is not None:
            return f'{text}@{operand.language}'
        return text
    if is_anonymous(operand):
        return operand
    return f'<{operand}>'


def format_axiom(axiom: Axiom) -> str:
    if axiom.type is AxiomType.DECLARATION:
        return f'Declaration({axiom.qualifier.value}({format_operand(axiom.args[0])}))'
    if axiom.type is AxiomType.PROPERTY_CHARACTERISTIC:
        keyword = f'{axiom.qualifier.value}ObjectProperty'
    else:
        keyword = axiom.type.value
    return f"{keyword}({' '.join(format_operand(arg) for arg in axiom.args)})"


def serialize_ontology(o: Ontology) -> str:
    """Emit the functional-style document: full IRIs, one axiom per line."""
    lines = [f'Ontology(<{o.iri}>']
    lines.extend(format_axiom(axiom) for axiom in o.axioms)
    lines.append(')')
    return '\n'.join(lines)
