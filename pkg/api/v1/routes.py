from flask import current_app, request
from flask_restx import Namespace, Resource, fields
from marshmallow import ValidationError

from alignment import alignment_stats, parse_alignment, serialize_alignment, threshold_filter, to_one_to_one
from api import cache, limiter
from errors import InvalidRequest, PairResolutionError
from logging_config import get_logger
from models import OutputConfig
from owl_syntax import parse_ontology, serialize_ontology
from pipeline import build_plan, check_ontology, parse_ontologies, resolve_pair, run_pipeline
from schemas import (
    CheckRequestSchema, FilterRequestSchema, IntegrateRequestSchema, MetricsReportSchema, MODES, STYLES,
    TOPOLOGIES,
)

logger = get_logger('api')

# Initialize API namespace
api = Namespace('v1', description='Integration and coherence checking')

check_schema = CheckRequestSchema()
filter_schema = FilterRequestSchema()
integrate_schema = IntegrateRequestSchema()
report_schema = MetricsReportSchema()


def load_request(schema):
    try:
        return schema.load(request.get_json() or {})
    except ValidationError as e:
        logger.warning("Invalid request: %s", e.messages)
        raise InvalidRequest(e.messages)


# API Models
check_model = api.model('CheckRequest', {
    'ontology': fields.String(required=True, description='Ontology in functional-style syntax'),
    'justifications': fields.Integer(description='How many justifications to return', default=10)
})

filter_model = api.model('FilterRequest', {
    'alignment': fields.String(required=True, description='Alignment format RDF/XML document'),
    'threshold': fields.Float(description='Minimum measure kept', default=0.0),
    'one_to_one': fields.Boolean(description='Reduce to a 1-to-1 mapping', default=False)
})

alignment_entry_model = api.model('AlignmentEntry', {
    'pair': fields.List(fields.Integer, description='1-based ontology indices; inferred from the header if absent'),
    'alignment': fields.String(required=True, description='Alignment format RDF/XML document')
})

integrate_model = api.model('IntegrateRequest', {
    'ontologies': fields.List(fields.String, required=True, description='Input ontologies, in index order'),
    'alignments': fields.List(fields.Nested(alignment_entry_model)),
    'mode': fields.String(enum=list(MODES), default='bridge'),
    'style': fields.String(enum=list(STYLES), default='refactor'),
    'topology': fields.String(enum=list(TOPOLOGIES), default='n-to-n'),
    'pivot': fields.Integer(default=1),
    'threshold': fields.Float(default=0.0),
    'one_to_one': fields.Boolean(default=False),
    'repair': fields.Boolean(default=False),
    'output_iri': fields.String(default='http://example.org/integrated')
})


@cache.memoize()
def check_document(text, justifications):
    ontology, diagnostics = parse_ontology(text)
    report = check_ontology(ontology, justifications)
    return {
        "iri": ontology.iri,
        "unsat_count": len(report.unsat),
        "unsat": sorted(report.unsat),
        "justifications": [report.justifications[iri].to_dict() for iri in sorted(report.justifications)],
        "coherent": report.coherent,
        "consistent": report.consistent,
        "inconsistency_reasons": list(report.inconsistency_reasons),
        "warnings": len(diagnostics.warnings),
    }


# Routes
@api.route('/check')
class Check(Resource):
    @api.doc('check_ontology')
    @api.expect(check_model)
    @limiter.limit("60/hour")
    def post(self):
        """Unsatisfiable classes, justifications and consistency of one ontology"""
        data = load_request(check_schema)
        logger.info("Checking an ontology of %d characters", len(data['ontology']))
        return {
            "status": "success",
            "data": check_document(data['ontology'], data['justifications'])
        }, 200


@api.route('/alignments/filter')
class FilterAlignment(Resource):
    @api.doc('filter_alignment')
    @api.expect(filter_model)
    @limiter.limit("60/hour")
    def post(self):
        """Threshold an alignment and optionally reduce it to 1-to-1"""
        data = load_request(filter_schema)
        alignment = parse_alignment(data['alignment'])
        filtered = threshold_filter(alignment, data['threshold'])
        if data['one_to_one']:
            filtered = to_one_to_one(filtered)
        logger.info("Filtered alignment: kept %d of %d cells", len(filtered), len(alignment))
        return {
            "status": "success",
            "data": {
                "alignment": serialize_alignment(filtered),
                "kept": len(filtered),
                "dropped": len(alignment) - len(filtered),
                "stats": alignment_stats(filtered)
            }
        }, 200


@api.route('/integrate')
class Integrate(Resource):
    @api.doc('integrate')
    @api.expect(integrate_model)
    @limiter.limit("20/hour")
    def post(self):
        """Integrate ontologies through alignments"""
        data = load_request(integrate_schema)
        logger.info("Integrating %d ontologies with %d alignments", len(data['ontologies']), len(data['alignments']))
        ontologies = [o for o, _ in parse_ontologies(data['ontologies'], current_app.config['PARSE_WORKERS'])]

        alignments = []
        for entry in data['alignments']:
            alignment = parse_alignment(entry['alignment'])
            if entry['pair'] is None:
                pair = resolve_pair(alignment, ontologies)
            else:
                pair = tuple(entry['pair'])
                if max(pair) > len(ontologies) or pair[0] == pair[1]:
                    raise PairResolutionError(f"pair {pair} does not name two of the input ontologies")
            alignments.append((pair, alignment))

        result = run_pipeline(ontologies, alignments, OutputConfig(data['output_iri']), build_plan(data),
                              justify_limit=current_app.config['JUSTIFICATION_SAMPLE'])
        return {
            "status": "success",
            "data": {
                "ontology": serialize_ontology(result.ontology),
                "report": report_schema.dump(result.metrics)
            }
        }, 200


@api.route('/')
class Home(Resource):
    @api.doc('home')
    def get(self):
        """Service banner"""
        logger.info("Home endpoint accessed")
        return {
            "status": "success",
            "message": "Ontology Integrator API",
            "version": "1.0"
        }
