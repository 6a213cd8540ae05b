"""Batch commands: enumerate complexes, export presentations, reduce apartments, coinvariants, checks, homology."""
import inspect
import json
import logging
from functools import wraps
from typing import List, Optional, Tuple

import click

from cli.config import RunConfig, TOOL_VERSION
from collector.collector import PropertyCheckCollector
from collector.validator import ComplexValidator
from complexes import BoundedComplexSpec, Variant
from database.models import CacheManager
from homology import (
    CoinvariantSpec,
    chain_complex,
    coinvariant_dim,
    homology_profile,
    partition_weight,
    projector_rank,
    relative_chain_complex,
    stabilizer,
    vcd,
)
from homology.coinvariants import DEFAULT_WORK_BOUND
from lattice import standard_augmented_frame, standard_frame
from steinberg import (
    InconclusiveComplexTooSmall,
    RationalApartment,
    ash_rudolph_reduce,
    presentation_matrices,
    verify_in_tits,
)

logger = logging.getLogger(__name__)

VARIANTS = [v.value for v in Variant]


def parse_vectors(text: str) -> List[Tuple[int, ...]]:
    """'1,0;5,3' -> [(1, 0), (5, 3)]"""
    try:
        return [tuple(int(x) for x in part.split(',')) for part in text.split(';') if part.strip()]
    except ValueError:
        raise click.BadParameter(f"Expected vectors like '1,0;5,3', got {text!r}")


def parse_partition(text: Optional[str]) -> Optional[Tuple[int, ...]]:
    if not text:
        return None
    try:
        return tuple(int(x) for x in text.split(','))
    except ValueError:
        raise click.BadParameter(f"Expected a partition like '2,1', got {text!r}")


def emit(payload: dict, output: Optional[str]):
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
    if output:
        with open(output, 'w', encoding='utf-8') as f:
            f.write(text + '\n')
        logger.info(f"Wrote {output}")
    else:
        click.echo(text)


def domain_errors(func):
    """Turn domain errors into a logged ClickException (nonzero exit)."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ValueError, RuntimeError) as e:
            logger.error(f"{func.__name__.replace('_', ' ')} failed: {e}")
            raise click.ClickException(str(e))
    return wrapper


def _cache(config: RunConfig) -> CacheManager:
    return CacheManager(config.cache_dir, TOOL_VERSION)


@click.group()
@click.version_option(TOOL_VERSION)
def cli():
    """Computations around the codimension-one cohomology of SL_n(Z)."""


@cli.command('enum')
@click.option('--variant', type=click.Choice(VARIANTS), default='BA', show_default=True)
@click.option('--n', 'n', type=int, required=True)
@click.option('--m', 'm', type=int, default=0, show_default=True)
@click.option('--ball', type=int, default=1, show_default=True)
@click.option('--max-dim', type=int, default=None)
@click.option('-o', '--output', type=click.Path(), default=None)
@domain_errors
def cmd_enum(variant, n, m, ball, max_dim, output):
    """Enumerate a bounded B_n^m, BA_n^m or BA'_n."""
    config = RunConfig('enum', {'variant': variant, 'n': n, 'm': m, 'ball': ball, 'max_dim': max_dim}, output)
    spec = BoundedComplexSpec(n, m, ball, Variant(variant))
    X = _cache(config).get_or_enumerate(spec, max_dim, config.jobs)
    is_valid, issues = ComplexValidator().validate_complex(X, max_dim)
    if not is_valid:
        raise RuntimeError(f"Enumerated complex failed re-validation: {issues[:3]}")
    payload = X.to_json()
    result = {'complex': payload, 'f_vector': list(X.f_vector), 'dimension': X.dimension}
    emit(config.report(result, {'spec': spec.to_json()}), output)


@cli.command('presentation')
@click.option('--n', 'n', type=int, required=True)
@click.option('--generators-ball', type=int, default=1, show_default=True)
@click.option('--relations-ball', type=int, default=None, help='Defaults to the generators ball')
@click.option('--format', 'fmt', type=click.Choice(['json', 'sparse-matrix']), default='json', show_default=True)
@click.option('-o', '--output', type=click.Path(), default=None)
@domain_errors
def cmd_presentation(n, generators_ball, relations_ball, fmt, output):
    """Export the boundary matrix I1 -> I0 on a bounded ball."""
    relations_ball = generators_ball if relations_ball is None else relations_ball
    config = RunConfig('presentation', {'n': n, 'generators_ball': generators_ball,
                                        'relations_ball': relations_ball}, output, fmt)
    presentation = presentation_matrices(n, generators_ball, relations_ball)
    if fmt == 'sparse-matrix':
        result = {'boundary': presentation.boundary.to_json(), 'cokernel_rank': presentation.cokernel_rank()}
        emit(config.report(result), output)
        return

    result = presentation.to_json()
    result['cokernel_rank'] = presentation.cokernel_rank()
    if n == 2:
        result['farey'] = {'edges': len(presentation.symbols), 'triangles': len(presentation.relations)}
    emit(config.report(result), output)


@cli.command('reduce')
@click.option('--vectors', type=str, default=None, help="Apartment as '1,0;5,3'")
@click.option('--input', 'input_path', type=click.Path(exists=True), default=None, help='JSON file with "vectors"')
@click.option('--verify', is_flag=True, help='Confirm class equality in the Tits building')
@click.option('-o', '--output', type=click.Path(), default=None)
@domain_errors
def cmd_reduce(vectors, input_path, verify, output):
    """Rewrite a rational apartment class as a sum of integral symbols."""
    if input_path:
        with open(input_path, encoding='utf-8') as f:
            vectors = [tuple(int(x) for x in v) for v in json.load(f)['vectors']]
    elif vectors:
        vectors = parse_vectors(vectors)
    else:
        raise click.UsageError('Give --vectors or --input')
    config = RunConfig('reduce', {'vectors': [list(v) for v in vectors], 'verify': verify}, output)
    apartment = RationalApartment(tuple(vectors))
    trace: List[Tuple[int, int]] = []
    reduced = ash_rudolph_reduce(apartment, trace)

    result = {'det': apartment.det, 'symbols': reduced.to_json(), 'trace': [list(edge) for edge in trace]}
    if verify:
        try:
            result['verified'] = verify_in_tits(apartment, reduced)
        except InconclusiveComplexTooSmall as e:
            logger.warning(f"Verification inconclusive: {e}")
            result['verified'] = 'InconclusiveComplexTooSmall'
    emit(config.report(result, {'apartment': [list(v) for v in vectors]}), output)


@cli.command('coinv')
@click.option('--simplex', type=click.Choice(['frame', 'augmented']), default='augmented', show_default=True)
@click.option('--n', 'n', type=int, required=True)
@click.option('--k', 'k', type=int, default=0, show_default=True)
@click.option('--group', type=click.Choice(['GL', 'SL']), default='SL', show_default=True)
@click.option('--twist', type=click.Choice(['orientation', 'none']), default='orientation', show_default=True)
@click.option('--partition', type=str, default=None, help="Schur functor, e.g. '2,1' (a partition of k)")
@click.option('--work-bound', type=int, default=DEFAULT_WORK_BOUND, show_default=True)
@click.option('-o', '--output', type=click.Path(), default=None)
@domain_errors
def cmd_coinv(simplex, n, k, group, twist, partition, work_bound, output):
    """Dimension of (Q_σ ⊗ V^{⊗k}) coinvariants of a stabilizer."""
    partition = parse_partition(partition)
    config = RunConfig('coinv', {'simplex': simplex, 'n': n, 'k': k, 'group': group, 'twist': twist,
                                 'partition': None if partition is None else list(partition),
                                 'work_bound': work_bound}, output)
    sigma = standard_augmented_frame(n) if simplex == 'augmented' else standard_frame(n)
    spec = CoinvariantSpec(stabilizer(sigma, group), k, sigma if twist == 'orientation' else None,
                           'all', partition)
    result = {
        'spec': spec.to_json(),
        'dim': coinvariant_dim(spec, config.jobs),
        'projector_rank': projector_rank(spec, work_bound),
        'group_order': spec.group.order,
        'vcd': vcd(n),
        'degree': vcd(n) - 1 if simplex == 'augmented' else vcd(n),
    }
    if partition is not None:
        result['partition_weight'] = partition_weight(partition, n)
    emit(config.report(result), output)


@cli.command('check')
@click.argument('suite')
@click.option('--n', 'n', type=int, default=None)
@click.option('--m', 'm', type=int, default=None)
@click.option('--ball', type=int, default=None)
@click.option('--N', 'N', type=int, default=None)
@click.option('--cases', type=int, default=None)
@click.option('--n-max', type=int, default=None)
@click.option('--k-max', type=int, default=None)
@click.option('--max-ball', type=int, default=None)
@click.option('--seed', type=int, default=None, help='Defaults to STEINBERG_SEED')
@click.option('-o', '--output', type=click.Path(), default=None)
@click.pass_context
def cmd_check(ctx, suite, seed, output, **options):
    """Run a property suite; exits 1 when any property fails."""
    config = RunConfig('check', {'suite': suite}, output)
    if seed is not None:
        config.seed = seed
    collector = PropertyCheckCollector(_cache(config), ComplexValidator(), config.seed, config.jobs)
    if suite not in collector.suites:
        raise click.BadParameter(f"Unknown suite {suite!r}; choose from {sorted(collector.suites)}")

    accepted = inspect.signature(collector.suites[suite]).parameters
    params = {key: value for key, value in options.items() if value is not None and key in accepted}
    ignored = sorted(key for key, value in options.items() if value is not None and key not in accepted)
    if ignored:
        logger.warning(f"Suite {suite} ignores {ignored}")
    config.params.update(params)

    try:
        result = collector.run_suite(suite, **params)
    except (ValueError, RuntimeError) as e:
        logger.error(f"check failed: {e}")
        raise click.ClickException(str(e))
    emit(config.report(result.to_json()), output)
    if not result.passed:
        logger.error(f"Suite {suite} failed with {len(result.failures)} counterexamples")
        ctx.exit(1)


@cli.command('homology')
@click.option('--variant', type=click.Choice(VARIANTS), default='BA', show_default=True)
@click.option('--n', 'n', type=int, required=True)
@click.option('--m', 'm', type=int, default=0, show_default=True)
@click.option('--ball', type=int, default=1, show_default=True)
@click.option('--ring', type=click.Choice(['Z', 'Q']), default='Q', show_default=True)
@click.option('--relative', is_flag=True, help="Homology of (BA_n, BA'_n) instead")
@click.option('--reduced', is_flag=True)
@click.option('-o', '--output', type=click.Path(), default=None)
@domain_errors
def cmd_homology(variant, n, m, ball, ring, relative, reduced, output):
    """Homology of a bounded truncation (exploratory)."""
    config = RunConfig('homology', {'variant': variant, 'n': n, 'm': m, 'ball': ball, 'ring': ring,
                                    'relative': relative, 'reduced': reduced}, output)
    cache = _cache(config)
    if relative:
        X = cache.get_or_enumerate(BoundedComplexSpec(n, 0, ball, Variant.BA), None, config.jobs)
        A = cache.get_or_enumerate(BoundedComplexSpec(n, 0, ball, Variant.BAPRIME), None, config.jobs)
        cc = relative_chain_complex(X, A)
        inputs = {'complex': X.to_json()['content_hash'], 'subcomplex': A.to_json()['content_hash']}
    else:
        X = cache.get_or_enumerate(BoundedComplexSpec(n, m, ball, Variant(variant)), None, config.jobs)
        cc = chain_complex(X)
        inputs = {'complex': X.to_json()['content_hash']}
    result = {'dims': list(cc.dims), 'homology': homology_profile(cc, ring, reduced and not relative)}
    emit(config.report(result, inputs), output)
