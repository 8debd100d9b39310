"""Command line entry point: ``k3sextic <command>``."""

from __future__ import annotations

import functools
import os
import sys

import click
import numpy as np

from ..models.equivalence import NoQuadrupleError
from ..models.involution import InvolutionError
from ..models.model import ModelError
from ..models.sections import DEFAULT_MAX_D, TractabilityError
from ..nsengine.lattice import PreconditionError
from .pipeline import AcceptanceMismatch, Pipeline, PipelineConfig, ResourceGuard, render_table

EXIT_MISMATCH = 2
EXIT_RESOURCE = 3


def _set_threads(n: int) -> None:
    os.environ.setdefault("NUMBA_NUM_THREADS", str(n))
    if n == 1:
        return
    try:
        import numba
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
    except (ImportError, ValueError):
        pass


def guarded(fn):
    """Map failures to the documented exit codes."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ResourceGuard, TractabilityError, MemoryError) as exc:
            click.echo(f"resource guard: {exc}", err=True)
            sys.exit(EXIT_RESOURCE)
        except (AcceptanceMismatch, AssertionError, ArithmeticError, InvolutionError,
                ModelError, NoQuadrupleError, PreconditionError, FileNotFoundError) as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_MISMATCH)
    return wrapper


@click.group()
@click.option("--cache-dir", envvar="K3SEXTIC_CACHE", default="k3cache", show_default=True,
              type=click.Path(file_okay=False), help="Directory for cached results.")
@click.option("--threads", default=1, show_default=True, type=click.IntRange(1))
@click.option("--max-d", default=DEFAULT_MAX_D, show_default=True, type=click.IntRange(1),
              help="Refuse section spaces with d(h) above this bound.")
@click.pass_context
def cli(ctx, cache_dir, threads, max_d):
    _set_threads(threads)
    ctx.obj = {"cache_dir": cache_dir, "threads": threads, "max_d": max_d}


def _pipeline(ctx, **kw) -> Pipeline:
    cfg = PipelineConfig(ctx.obj["cache_dir"], threads=ctx.obj["threads"], max_d=ctx.obj["max_d"], **kw)
    return Pipeline(cfg)


@cli.command("build-geometry")
@click.pass_context
@guarded
def build_geometry(ctx):
    """Lines, Gram matrix, Aut(X, h_F) and the Frobenius action."""
    facts = _pipeline(ctx).build_geometry()
    for k, v in facts.items():
        click.echo(f"{k}: {v}")


@cli.command("enumerate")
@click.option("--degree", required=True, type=click.IntRange(0, 5))
@click.option("--count-only", is_flag=True, help="Count without storing vectors.")
@click.pass_context
@guarded
def enumerate_cmd(ctx, degree, count_only):
    """|V_D| = #{v : v^2 = 2, <v, h_F> = D}."""
    p = _pipeline(ctx)
    if count_only:
        n = p.count(degree)
    else:
        n = len(p.vectors(degree))
    click.echo(f"|V{degree}| = {n}")


_FULL_FLAG = click.option("--allow-degree5-full", is_flag=True,
                          help="Acknowledge the hours-long disk-backed degree-5 run.")


@cli.command()
@click.option("--degree", required=True, type=click.IntRange(2, 5))
@_FULL_FLAG
@click.pass_context
@guarded
def orbits(ctx, degree, allow_degree5_full):
    """Orbit representatives with stabilizers, polarization flags and RT."""
    mode = "full" if allow_degree5_full else "off"
    p = _pipeline(ctx, max_degree=degree, degree5=mode, allow_full=allow_degree5_full)
    for i, o in enumerate(p.orbits(degree)):
        tag = o.rt if o.is_polarization else f"not a polarization ({o.failure})"
        click.echo(f"{i:3d} {list(map(int, o.representative))} size={o.size} "
                   f"stab={o.stabilizer_order} partner={o.galois_partner} {tag}")


@cli.command()
@click.option("--max-degree", default=4, show_default=True, type=click.IntRange(2, 5))
@click.option("--degree5", type=click.Choice(["off", "count-only", "full"]), default="count-only",
              show_default=True, help="Treatment of degree 5 when --max-degree is 5.")
@_FULL_FLAG
@click.pass_context
@guarded
def classify(ctx, max_degree, degree5, allow_degree5_full):
    """Orbits, polarizations, models and projective equivalence classes."""
    p = _pipeline(ctx, max_degree=max_degree, degree5=degree5, allow_full=allow_degree5_full)
    summary = p.classify()
    for k, v in summary.items():
        click.echo(f"{k}: {v}")


@cli.command()
@click.option("--h", "h", required=True, help="22 integers, comma or space separated.")
@click.pass_context
@guarded
def model(ctx, h):
    """Double-plane model of one polarization of degree 2."""
    vec = np.array([int(x) for x in h.replace(",", " ").split()], dtype=np.int64)
    if len(vec) != 22:
        raise click.BadParameter("expected 22 integers", param_hint="--h")
    p = _pipeline(ctx)
    if p.ns.norm(vec) != 2 or not p.ns.is_polarization(vec):
        raise AcceptanceMismatch("h is not a polarization of degree 2")
    click.echo(p.compute_model(vec).to_text(), nl=False)


@cli.command()
@click.pass_context
@guarded
def table(ctx):
    """Projective models found so far, one row per equivalence class."""
    click.echo(render_table(_pipeline(ctx).class_rows()), nl=False)


@cli.command()
@click.pass_context
@guarded
def involution(ctx):
    """The involution of X_F with <h_F, g* h_F> = 4."""
    p = _pipeline(ctx)
    p.involution()
    click.echo(f"written {p.cache.path('involution.txt')}")
    click.echo("G^2 = Id, isometry, <h_F G, h_F> = 4, outside Aut(X, h_F): ok")


def main():  # pragma: no cover - console entry
    cli()


if __name__ == "__main__":  # pragma: no cover
    main()
