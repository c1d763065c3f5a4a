"""Command-line front end: integrate, check, filter-alignment, describe, generate."""
import json
import os
import re
import sys
from typing import List, Optional, Tuple

import click as ck
from marshmallow import ValidationError

from alignment import Alignment, parse_alignment, serialize_alignment, threshold_filter, to_one_to_one
from config import Config
from errors import InputEncodingError, InputFileNotFound, IntegrationError, PairResolutionError
from logging_config import get_logger, setup_logger
from models import Ontology, OutputConfig
from owl_syntax import parse_ontology, serialize_ontology
from pipeline import build_plan, check_ontology, parse_ontologies, resolve_pair, run_pipeline
from report import Timers, profile_ontology, render
from schemas import CliConfigSchema, MODES, REPORT_FORMATS, STYLES, TOPOLOGIES
from synthetic import generate_suite

logger = get_logger('cli')

EXIT_OK = 0
EXIT_INCOHERENT = 1
EXIT_INPUT_ERROR = 2
EXIT_INCONSISTENT = 3

_PAIR_SPEC = re.compile(r'^(\d+):(\d+)=(.+)$')


def _read(path: str) -> str:
    try:
        with open(path, encoding='utf-8') as handle:
            return handle.read()
    except FileNotFoundError:
        raise InputFileNotFound(path)
    except UnicodeDecodeError as e:
        raise InputEncodingError(path, e)
    except OSError as e:
        raise InputFileNotFound(f"{path} ({e.strerror})")


def _write(path: Optional[str], text: str):
    if path is None:
        ck.echo(text, nl=False)
        return
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(text)


def _fail(e: Exception) -> int:
    message = e.message if isinstance(e, IntegrationError) else str(e)
    logger.error(message)
    ck.echo(f"error: {message}", err=True)
    return EXIT_INPUT_ERROR


def load_alignments(specs: List[str], ontologies: List[Ontology]) -> List[Tuple[Tuple[int, int], Alignment]]:
    """Read "i:j=path" specs (1-based indices) and bare paths resolved by header."""
    n = len(ontologies)
    loaded = []
    for spec in specs:
        match = _PAIR_SPEC.match(spec)
        path = match.group(3) if match else spec
        alignment = parse_alignment(_read(path))
        if match:
            pair = int(match.group(1)), int(match.group(2))
            if not all(1 <= i <= n for i in pair) or pair[0] == pair[1]:
                raise PairResolutionError(f"pair {pair[0]}:{pair[1]} does not name two of the {n} input ontologies")
        else:
            pair = resolve_pair(alignment, ontologies)
        logger.info("Alignment %s: %d cells for pair %s", path, len(alignment), pair)
        loaded.append((pair, alignment))
    return loaded


def run_integrate(cfg: dict) -> int:
    try:
        cfg = CliConfigSchema().load(dict(cfg, command='integrate'))
    except ValidationError as e:
        return _fail(ValueError(f"invalid options: {e.messages}"))

    timers = Timers()
    try:
        with timers.phase('parse'):
            parsed = parse_ontologies([_read(path) for path in cfg['ontologies']], Config.PARSE_WORKERS)
            ontologies = [ontology for ontology, _ in parsed]
            for path, (_, diagnostics) in zip(cfg['ontologies'], parsed):
                if diagnostics.warnings or diagnostics.ignored_constructs:
                    logger.warning("%s: %d warnings, ignored %s", path, len(diagnostics.warnings),
                                   dict(diagnostics.ignored_constructs))
            alignments = load_alignments(cfg['alignments'], ontologies)
        result = run_pipeline(ontologies, alignments, OutputConfig(cfg['output_iri']), build_plan(cfg),
                              timers, justify_limit=Config.JUSTIFICATION_SAMPLE)
    except IntegrationError as e:
        return _fail(e)

    _write(cfg['output'], serialize_ontology(result.ontology))
    _write(cfg['report'], render(result.metrics, cfg['report_format']))
    return EXIT_OK


def run_check(path: str, justifications: Optional[int] = None) -> int:
    try:
        ontology, _ = parse_ontology(_read(path))
    except IntegrationError as e:
        return _fail(e)

    limit = Config.JUSTIFICATION_SAMPLE if justifications is None else justifications
    report = check_ontology(ontology, limit)
    ck.echo(f"unsatisfiable classes: {len(report.unsat)}")
    for iri in sorted(report.unsat):
        ck.echo(f"  {iri}")
        justification = report.justifications.get(iri)
        if justification is not None:
            ck.echo(f"    disjoint: {justification.pair[0]} / {justification.pair[1]}")
            ck.echo(f"    path: {' > '.join(justification.path1)}")
            ck.echo(f"    path: {' > '.join(justification.path2)}")
    ck.echo(f"coherent: {'yes' if report.coherent else 'no'}")
    ck.echo(f"consistent: {'yes' if report.consistent else 'no'}")
    for reason in report.inconsistency_reasons:
        ck.echo(f"  {reason}")

    if not report.consistent:
        return EXIT_INCONSISTENT
    return EXIT_OK if report.coherent else EXIT_INCOHERENT


def run_filter_alignment(in_path: str, out_path: str, threshold: float = 0.0, one_to_one: bool = False) -> int:
    try:
        alignment = parse_alignment(_read(in_path))
        filtered = threshold_filter(alignment, threshold)
        if one_to_one:
            filtered = to_one_to_one(filtered)
    except IntegrationError as e:
        return _fail(e)
    _write(out_path, serialize_alignment(filtered))
    kept = len(filtered)
    ck.echo(f"kept {kept} of {len(alignment)} cells (dropped {len(alignment) - kept})")
    return EXIT_OK


@ck.group()
@ck.option('--log-level', type=ck.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR']), default=None,
           help='Overrides LOG_LEVEL from the environment')
def cli(log_level):
    """Integrate OWL ontologies through alignments and check the result's coherence."""
    setup_logger(level=log_level)


@cli.command('integrate')
@ck.option('--ontology', '-i', 'ontologies', multiple=True, required=True, type=ck.Path(),
           help='Input ontology, repeatable; order gives the 1-based index')
@ck.option('--alignment', '-a', 'alignments', multiple=True,
           help='"i:j=path" or a bare path resolved through the onto1/onto2 header')
@ck.option('--mode', type=ck.Choice(MODES), default='bridge', show_default=True)
@ck.option('--style', type=ck.Choice(STYLES), default='refactor', show_default=True)
@ck.option('--topology', type=ck.Choice(TOPOLOGIES), default='n-to-n', show_default=True)
@ck.option('--pivot', type=int, default=1, show_default=True, help='Pivot ontology for 1-to-n')
@ck.option('--threshold', type=float, default=0.0, show_default=True)
@ck.option('--one-to-one', is_flag=True, help='Reduce every alignment to a 1-to-1 mapping')
@ck.option('--repair', is_flag=True, help='Repair each pair alignment before integrating')
@ck.option('--output-iri', default='http://example.org/integrated', show_default=True)
@ck.option('--output', '-o', required=True, type=ck.Path(), help='Output ontology path')
@ck.option('--report', type=ck.Path(), default=None, help='Report path (stdout when omitted)')
@ck.option('--report-format', type=ck.Choice(REPORT_FORMATS), default='json', show_default=True)
def integrate_command(**options):
    """Integrate ontologies and write the output ontology and a metrics report."""
    options['ontologies'] = list(options['ontologies'])
    options['alignments'] = list(options['alignments'])
    sys.exit(run_integrate(options))


@cli.command('check')
@ck.argument('path', type=ck.Path())
@ck.option('--justifications', type=int, default=None, help='How many justifications to print')
def check_command(path, justifications):
    """Exit 0 coherent and consistent, 1 incoherent, 3 inconsistent, 2 on input errors."""
    sys.exit(run_check(path, justifications))


@cli.command('filter-alignment')
@ck.argument('in_path', type=ck.Path())
@ck.argument('out_path', type=ck.Path())
@ck.option('--threshold', type=float, default=0.0, show_default=True)
@ck.option('--one-to-one', is_flag=True)
def filter_alignment_command(in_path, out_path, threshold, one_to_one):
    """Threshold an alignment and optionally reduce it to 1-to-1."""
    sys.exit(run_filter_alignment(in_path, out_path, threshold, one_to_one))


@cli.command('describe')
@ck.argument('paths', nargs=-1, required=True, type=ck.Path())
@ck.option('--format', 'output_format', type=ck.Choice(REPORT_FORMATS), default='text', show_default=True)
def describe_command(paths, output_format):
    """Print entity counts, axiom counts, depth and unsat count of each input."""
    profiles = []
    try:
        for path in paths:
            ontology, _ = parse_ontology(_read(path))
            profiles.append(dict(profile_ontology(ontology), path=path))
    except IntegrationError as e:
        sys.exit(_fail(e))

    if output_format == 'json':
        ck.echo(json.dumps(profiles, indent=2, sort_keys=True))
        return
    for profile in profiles:
        entities = profile['entities']
        ck.echo(f"{profile['path']} ({profile['iri']})")
        ck.echo(f"  classes {entities['classes']}, object properties {entities['object_properties']}, "
                f"data properties {entities['data_properties']}, individuals {entities['named_individuals']}")
        ck.echo(f"  logical axioms {profile['logical_axioms']}, depth {profile['depth']}, "
                f"unsatisfiable {profile['unsat_count']}")


@cli.command('generate')
@ck.argument('out_dir', type=ck.Path(file_okay=False))
@ck.option('--ontologies', 'n_ontologies', type=int, default=3, show_default=True)
@ck.option('--classes', type=int, default=250_000, show_default=True, help='Total over all ontologies')
@ck.option('--cells', type=int, default=25_000, show_default=True, help='Total over all alignments')
@ck.option('--noise', type=float, default=0.0, show_default=True)
@ck.option('--seed', type=int, default=0, show_default=True)
def generate_command(out_dir, n_ontologies, classes, cells, noise, seed):
    """Write a synthetic suite: one ontology per index and one alignment per pair."""
    ontologies, alignments = generate_suite(n_ontologies, classes, cells, seed=seed, noise=noise)
    os.makedirs(out_dir, exist_ok=True)
    for index, ontology in enumerate(ontologies, start=1):
        _write(os.path.join(out_dir, f'o{index}.ofn'), serialize_ontology(ontology))
    for (i, j), alignment in alignments:
        _write(os.path.join(out_dir, f'a{i}-{j}.rdf'), serialize_alignment(alignment))
    ck.echo(f"wrote {len(ontologies)} ontologies and {len(alignments)} alignments to {out_dir}")


if __name__ == '__main__':
    cli()
