"""Command line interface for wittlab."""
from typing import Optional

import click

from . import __version__, api
from .log import configure_logging
from .schema import FORMATS, split_list, split_pairs


file_option = click.option('--file', '-f', 'path', type=click.Path(exists=True, dir_okay=False),
                           help='JSON request file')
field_option = click.option('--field', 'field', help='Base field: Q, Q(t) or Q(sqrtD)')


def _run(ctx: click.Context, worker, path: Optional[str], inline):
    command = ctx.command_path.split(" ", 1)[1]
    api.run_worker(ctx.obj, command, path, inline, worker)


@click.group()
@click.version_option(version=__version__)
@click.option('--verbose', '-v', is_flag=True, help='Log search progress')
@click.option('--format', 'output_format', type=click.Choice(FORMATS), default='json',
              help='Report format')
@click.option('--seed', type=int, help='Seed for shuffling search candidates; 0 keeps enumeration order')
@click.option('--threads', type=int, help='Worker threads for candidate checks')
@click.option('--budget', 'budget_text', help='Search budget, e.g. "search_bound=500,height=4"')
@click.pass_context
def cli(ctx: click.Context, verbose: bool, output_format: str, seed: Optional[int],
        threads: Optional[int], budget_text: Optional[str]):
    """wittlab - degree-3 invariants of quadratic forms and orthogonal involutions."""
    configure_logging(verbose)
    ctx.obj = api.Settings(output_format, seed, threads, budget_text, verbose)


# ---------------------------------------------------------------- qform

@cli.group()
def qform():
    """Quadratic forms: invariants, isotropy, Witt decomposition."""


def _qform_command(name: str, worker, help_text: str):
    @qform.command(name=name, help=help_text)
    @file_option
    @field_option
    @click.option('--diag', help='Diagonal entries, e.g. "1,-2,-3,6"')
    @click.pass_context
    def command(ctx, path, field, diag):
        _run(ctx, worker, path, lambda: dict(field=field, diag=split_list(diag)))

    return command


_qform_command('invariants', api.qform_invariants, 'Discriminant, Clifford invariant and e3.')
_qform_command('isotropy', api.qform_isotropy, 'Isotropy with an isotropic vector.')
_qform_command('witt', api.qform_witt, 'Anisotropic kernel and Witt index.')
_qform_command('decompose12', api.qform_decompose12,
               'Split a 12-dimensional form of I^3 into three Pfister multiples.')


# ---------------------------------------------------------------- group / xi

@cli.group()
def group():
    """Subgroups of the 2-torsion Brauer group generated by quaternion classes."""


def _group_command(name: str, worker, help_text: str):
    @group.command(name=name, help=help_text)
    @file_option
    @field_option
    @click.option('--gens', help='Quaternion generators, e.g. "-1:3,-1:7"')
    @click.pass_context
    def command(ctx, path, field, gens):
        _run(ctx, worker, path, lambda: dict(field=field, gens=split_pairs(gens)))

    return command


_group_command('f3u', api.group_f3u, 'The degree-3 class f3(U) of an order-8 group.')
_group_command('split', api.group_split, 'Search a quadratic extension splitting the group.')
_group_command('peyre', api.group_peyre, 'Homology of the complex attached to the group.')


@cli.command()
@file_option
@click.option('--a', 'a')
@click.option('--b', 'b')
@click.option('--c', 'c')
@click.option('--x', 'x', help='Element of Q(sqrt a), written with s = sqrt a')
@click.option('--y', 'y', help='Element of Q(sqrt a), written with s = sqrt a')
@click.option('--C', 'algebra', help='Class [C] as quaternion symbols, e.g. "-1:3"')
@click.option('--split/--no-split', default=None, help='Search a quadratic splitting field')
@click.pass_context
def xi(ctx, path, a, b, c, x, y, algebra, split):
    """Build xi = t.[C] + e3(s*psi) and its group over Q(t)."""
    _run(ctx, api.xi, path,
         lambda: dict(a=a, b=b, c=c, x=x, y=y, C=split_pairs(algebra), split=split))


# ---------------------------------------------------------------- herm

@cli.group()
def herm():
    """Skew-hermitian forms over quaternion algebras."""


@herm.command()
@file_option
@field_option
@click.pass_context
def invariants(ctx, path, field):
    """Discriminant, Clifford invariant, e3 and f3."""
    _run(ctx, api.herm_invariant_report, path, lambda: dict(field=field))


@herm.command()
@file_option
@field_option
@click.pass_context
def isotropy(ctx, path, field):
    """Witt index, isotropy and hyperbolicity."""
    _run(ctx, api.herm_isotropy, path, lambda: dict(field=field))


# ---------------------------------------------------------------- deg12

@cli.group()
def deg12():
    """Orthogonal involutions of degree 12 with trivial discriminant and Clifford invariant."""


def _deg12_command(name: str, worker, help_text: str):
    @deg12.command(name=name, help=help_text)
    @file_option
    @field_option
    @click.option('--diag', help='Split input: the 12 diagonal entries of the form')
    @click.pass_context
    def command(ctx, path, field, diag):
        _run(ctx, worker, path, lambda: dict(field=field, form=split_list(diag)))

    return command


_deg12_command('decompose', api.deg12_decompose, 'Additive decomposition into three blocks.')
_deg12_command('invariants', api.deg12_invariants, 'e3 modulo the decomposition group, and f3.')
_deg12_command('isotropy', api.deg12_isotropy, 'Isotropy decided directly and through e3.')
_deg12_command('peyre', api.deg12_peyre, 'Homology generator of the decomposition group.')
_deg12_command('quadsplit', api.deg12_quadsplit,
               'Quadratic extension splitting and hyperbolizing the involution.')


# ---------------------------------------------------------------- deg8

@cli.group()
def deg8():
    """Orthogonal involutions of degree 8 with trivial discriminant."""


@deg8.command(name='decompose')
@file_option
@field_option
@click.option('--diag', help='Split input: the 8 diagonal entries of the form')
@click.option('--d', 'd', help='Decompose along a quadratic extension F(sqrt d)')
@click.pass_context
def deg8_decompose(ctx, path, field, diag, d):
    """Decomposition into two tensor products of quaternion algebras."""
    _run(ctx, api.deg8_decompose, path, lambda: dict(field=field, form=split_list(diag), d=d))


@deg8.command()
@file_option
@field_option
@click.option('--diag', help='Split input: the 8 diagonal entries of the form')
@click.pass_context
def triality(ctx, path, field, diag):
    """Clifford components and their triality data."""
    _run(ctx, api.deg8_triality, path, lambda: dict(field=field, form=split_list(diag)))


@deg8.command(name='invariants')
@file_option
@field_option
@click.option('--lam', help='Scalar choosing the degree-12 carrier')
@click.pass_context
def deg8_invariants(ctx, path, field, lam):
    """e3 and f3 read off a degree-12 carrier."""
    _run(ctx, api.deg8_invariants, path, lambda: dict(field=field, lam=lam))


if __name__ == '__main__':
    cli()
