from marshmallow import Schema, ValidationError, fields, validate, validates, validates_schema

MODES = ('aggregate', 'bridge', 'full-merge')
STYLES = ('refactor', 'reference')
TOPOLOGIES = ('2-to-2', '1-to-n', 'n-to-n')
REPORT_FORMATS = ('json', 'text')

# "i:j=path" or a bare path
ALIGNMENT_SPEC = r'^(\d+:\d+=)?.+$'
IRI = validate.Regexp(r'^\S+://\S*$', error='not an absolute IRI')
UNIT_RANGE = validate.Range(min=0.0, max=1.0)


class JustificationSchema(Schema):
    cls = fields.Str(required=True, data_key='class', attribute='class')
    disjoint = fields.List(fields.Str(), required=True, validate=validate.Length(equal=2))
    path1 = fields.List(fields.Str(), required=True)
    path2 = fields.List(fields.Str(), required=True)


class TimingsSchema(Schema):
    parse_seconds = fields.Float(required=True, validate=validate.Range(min=0))
    integrate_seconds = fields.Float(required=True, validate=validate.Range(min=0))
    reason_seconds = fields.Float(required=True, validate=validate.Range(min=0))
    total_seconds = fields.Float(required=True, validate=validate.Range(min=0))


class RemovedCellSchema(Schema):
    pair = fields.List(fields.Int(), validate=validate.Length(equal=2))
    entity1 = fields.Str(required=True)
    entity2 = fields.Str(required=True)
    measure = fields.Float(validate=UNIT_RANGE)
    justified_by = fields.Str()


class RepairSummarySchema(Schema):
    iterations = fields.Int(required=True)
    removed_cells = fields.Int(required=True)
    removed = fields.List(fields.Nested(RemovedCellSchema))
    residual_unsat = fields.List(fields.Str())


class MetricsReportSchema(Schema):
    """Report JSON. Keys are stable; counts are integers, timings seconds."""
    version = fields.Int(required=True)
    output_iri = fields.Str(required=True)
    mode = fields.Str(required=True, validate=validate.OneOf(MODES))
    entities = fields.Dict(keys=fields.Str(), values=fields.Int(), required=True)
    logical_axioms = fields.Int(required=True)
    declaration_axioms = fields.Int(required=True)
    annotation_axioms = fields.Int(required=True)
    total_axioms = fields.Int(required=True)
    raw_axioms = fields.Int(required=True)
    source_logical_axioms = fields.Int(required=True)
    bridged_cells = fields.Int(required=True)
    expected_logical_axioms = fields.Int(required=True)
    axiom_law = fields.Str(required=True, validate=validate.OneOf(('PASS', 'FAIL', 'N/A')))
    uncertain_cells = fields.Int(required=True)
    skipped_cells = fields.Dict(keys=fields.Str(), values=fields.Int(), required=True)
    unsat_count = fields.Int(required=True)
    unsat_classes = fields.List(fields.Str(), required=True)
    justifications = fields.List(fields.Nested(JustificationSchema), required=True)
    coherent = fields.Bool(required=True)
    consistent = fields.Bool(required=True)
    inconsistency_reasons = fields.List(fields.Str(), required=True)
    depth = fields.Int(required=True)
    timings = fields.Nested(TimingsSchema, required=True)
    repair = fields.Nested(RepairSummarySchema, allow_none=True, load_default=None)
    reasoner_scope = fields.Str(required=True)


class CliConfigSchema(Schema):
    command = fields.Str(required=True, validate=validate.OneOf(('integrate', 'check', 'filter-alignment')))
    ontologies = fields.List(fields.Str(), required=True, validate=validate.Length(min=1))
    alignments = fields.List(fields.Str(validate=validate.Regexp(ALIGNMENT_SPEC)), load_default=list)
    mode = fields.Str(load_default='bridge', validate=validate.OneOf(MODES))
    style = fields.Str(load_default='refactor', validate=validate.OneOf(STYLES))
    topology = fields.Str(load_default='n-to-n', validate=validate.OneOf(TOPOLOGIES))
    pivot = fields.Int(load_default=1, validate=validate.Range(min=1))
    threshold = fields.Float(load_default=0.0, validate=UNIT_RANGE)
    one_to_one = fields.Bool(load_default=False)
    repair = fields.Bool(load_default=False)
    output_iri = fields.Str(load_default='http://example.org/integrated', validate=IRI)
    output = fields.Str(required=True)
    report = fields.Str(allow_none=True, load_default=None)
    report_format = fields.Str(load_default='json', validate=validate.OneOf(REPORT_FORMATS))

    @validates_schema
    def validate_indices(self, data, **kwargs):
        n = len(data.get('ontologies', []))
        if data.get('topology') == '1-to-n' and data.get('pivot', 1) > n:
            raise ValidationError(f"pivot {data['pivot']} is outside [1, {n}]", 'pivot')
        if data.get('mode') == 'full-merge' and n != 2:
            raise ValidationError("full-merge takes exactly 2 ontologies", 'mode')


class AlignmentEntrySchema(Schema):
    pair = fields.List(fields.Int(validate=validate.Range(min=1)), allow_none=True,
                       load_default=None, validate=validate.Length(equal=2))
    alignment = fields.Str(required=True, validate=validate.Length(min=1))


class CheckRequestSchema(Schema):
    ontology = fields.Str(required=True, validate=validate.Length(min=1))
    justifications = fields.Int(load_default=10, validate=validate.Range(min=0, max=1000))


class FilterRequestSchema(Schema):
    alignment = fields.Str(required=True, validate=validate.Length(min=1))
    threshold = fields.Float(load_default=0.0, validate=UNIT_RANGE)
    one_to_one = fields.Bool(load_default=False)


class IntegrateRequestSchema(Schema):
    ontologies = fields.List(fields.Str(), required=True, validate=validate.Length(min=1))
    alignments = fields.List(fields.Nested(AlignmentEntrySchema), load_default=list)
    mode = fields.Str(load_default='bridge', validate=validate.OneOf(MODES))
    style = fields.Str(load_default='refactor', validate=validate.OneOf(STYLES))
    topology = fields.Str(load_default='n-to-n', validate=validate.OneOf(TOPOLOGIES))
    pivot = fields.Int(load_default=1, validate=validate.Range(min=1))
    threshold = fields.Float(load_default=0.0, validate=UNIT_RANGE)
    one_to_one = fields.Bool(load_default=False)
    repair = fields.Bool(load_default=False)
    output_iri = fields.Str(load_default='http://example.org/integrated', validate=IRI)

    @validates('ontologies')
    def validate_ontologies(self, value, **kwargs):
        if any(not text.strip() for text in value):
            raise ValidationError("ontology documents must be non-empty")
