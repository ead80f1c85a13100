"""
Command-line front end: build complexes, run verification suites, convert
artifacts and seed the enumeration cache.

Every command validates its configuration before computing anything and
exits with the code attached to the error it hit: 2 for bad configuration,
3 for a cache mismatch, 4 when a suite fails.
"""
import functools
import logging
import os
from dataclasses import dataclass

import click

from . import CACHE_DIR_ENV, create_app
from .complexes import (build_disk_complex, build_dual_tree, build_pprime_complex,
                        build_primitive_complex, build_sphere_complex)
from .errors import ConfigError, SphereTrackError, VerificationFailed
from .splitting import SIDES, check_lens_parameters, seed_disk
from .utils import (FORMATS, load_json, load_or_build_diagram, render, seed_presets,
                    warm_cache, write_artifact)
from .verify import ALIASES, SUITES, suite_name, verify

logger = logging.getLogger(__name__)

BUILD_KINDS = ("diagram", "disk-complex", "primitive-complex", "pprime", "dual-tree", "sphere-complex")
DUAL_TREE_BASES = ("alpha2", "beta2")


@dataclass(frozen=True)
class RunConfig:
    p: int
    q: int
    max_weight: int = 6
    radius: int = 3
    suites: tuple = ()
    out: str = None
    fmt: str = "json"
    cache_dir: str = None
    workers: int = 1

    def validate(self):
        """Raises ConfigError before any computation when a field is out of range."""
        check_lens_parameters(self.p, self.q)
        if self.max_weight < 1:
            raise ConfigError(f"--max-weight must be at least 1, got {self.max_weight}")
        if self.radius < 1:
            raise ConfigError(f"--radius must be at least 1, got {self.radius}")
        if self.workers < 1:
            raise ConfigError(f"--workers must be at least 1, got {self.workers}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"--format must be one of {', '.join(FORMATS)}, got {self.fmt!r}")
        for name in self.suites:
            suite_name(name)
        return self

    @property
    def budgets(self):
        """The budget chain searched by verification: two below the maximum, then the maximum."""
        return sorted({max(1, self.max_weight - 2), self.max_weight})

    def output_path(self, stem, fmt=None):
        return self.out or f"{stem}-L{self.p}-{self.q}-N{self.max_weight}.{fmt or self.fmt}"


def handle_errors(command):
    """Turns SphereTrackError into a message on stderr and the error's exit code."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SphereTrackError as exc:
            logger.error("%s: %s", type(exc).__name__, exc)
            click.echo(f"Error: {exc}", err=True)
            report_path = getattr(exc, "report_path", None)
            if report_path:
                click.echo(f"Report: {report_path}", err=True)
            raise click.exceptions.Exit(exc.exit_code)
    return wrapper


def lens_options(command):
    command = click.option("--workers", default=1, show_default=True, type=int,
                           help="Processes used to enumerate disks.")(command)
    command = click.option("--cache-dir", envvar=CACHE_DIR_ENV, default=None,
                           help="Folder holding cache.db.")(command)
    command = click.option("--max-weight", default=6, show_default=True, type=int,
                           help="Largest edge weight of enumerated curves.")(command)
    command = click.option("--q", "q", required=True, type=int)(command)
    command = click.option("--p", "p", required=True, type=int)(command)
    return command


def _open_diagram(config, budgets):
    app = create_app({"DATA_FOLDER": config.cache_dir} if config.cache_dir else None)
    session = app.Session()
    try:
        diagram = load_or_build_diagram(session, config.p, config.q)
        warm_cache(session, diagram, budgets, config.workers)
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
    return diagram


@click.group()
@click.option("--verbose", "-v", count=True, help="Repeat for debug output.")
def cli(verbose):
    """SphereTrack: Haken spheres and primitive disks of genus-2 lens space splittings."""
    level = logging.WARNING if not verbose else (logging.INFO if verbose == 1 else logging.DEBUG)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


@cli.command()
@click.argument("kind", type=click.Choice(BUILD_KINDS))
@lens_options
@click.option("--side", type=click.Choice(SIDES), default="V", show_default=True)
@click.option("--base", type=click.Choice(DUAL_TREE_BASES), default="alpha2", show_default=True,
              help="Meridian whose dual tree is built.")
@click.option("--out", default=None, help="Output file.")
@click.option("--format", "fmt", default="json", show_default=True)
@handle_errors
def build(kind, p, q, max_weight, cache_dir, workers, side, base, out, fmt):
    """Builds a diagram or a budgeted complex and writes it as JSON or DOT."""
    config = RunConfig(p, q, max_weight, out=out, fmt=fmt, cache_dir=cache_dir, workers=workers).validate()
    if kind == "diagram" and fmt != "json":
        raise ConfigError("a diagram is exported as json only")
    diagram = _open_diagram(config, [] if kind == "diagram" else [max_weight])

    if kind == "diagram":
        payload = diagram.to_dict()
    elif kind == "disk-complex":
        payload = build_disk_complex(diagram, side, max_weight, workers).to_dict()
    elif kind == "primitive-complex":
        payload = build_primitive_complex(diagram, side, max_weight, workers).to_dict()
    elif kind == "pprime":
        payload = build_pprime_complex(diagram, max_weight, side, workers).to_dict()
    elif kind == "dual-tree":
        payload = build_dual_tree(diagram, seed_disk(diagram, base), max_weight, workers).to_dict()
    else:
        payload = build_sphere_complex(diagram, max_weight, workers).to_dict()

    path = write_artifact(payload, config.output_path(kind), fmt)
    click.echo(f"{kind} for L({p},{q}) at max weight {max_weight} written to {path}")


@cli.command("verify")
@lens_options
@click.option("--suite", "suites", multiple=True, required=True,
              help=f"Repeatable; one of {', '.join(list(SUITES) + list(ALIASES))}.")
@click.option("--radius", default=3, show_default=True, type=int)
@click.option("--out", default=None, help="Report file.")
@handle_errors
def verify_command(p, q, max_weight, cache_dir, workers, suites, radius, out):
    """Runs verification suites and writes their report; exits 4 on any failure."""
    config = RunConfig(p, q, max_weight, radius, tuple(suites), out, "json", cache_dir, workers).validate()
    diagram = _open_diagram(config, config.budgets)

    reports = [verify(diagram, name, config.budgets, radius, workers) for name in config.suites]
    payload = {"p": p, "q": q, "budgets": config.budgets, "reports": [r.to_dict() for r in reports]}
    path = write_artifact(payload, config.output_path("verify"), "json")

    for report in reports:
        verdicts = ", ".join(f"{prop.name}={prop.verdict}" for prop in report.properties)
        click.echo(f"{report.suite}: {verdicts}")
    failed = [r.suite for r in reports if not r.passed]
    if failed:
        raise VerificationFailed(f"suites with failing properties: {', '.join(failed)}", report_path=path)
    click.echo(f"Report written to {path}")


@cli.command()
@click.argument("artifact", type=click.Path())
@click.option("--format", "fmt", default="json", show_default=True)
@click.option("--out", default=None, help="Output file; stdout when omitted.")
@handle_errors
def export(artifact, fmt, out):
    """Re-renders a build or verify artifact as JSON or DOT."""
    payload = load_json(artifact)
    if out:
        write_artifact(payload, out, fmt)
        click.echo(f"Exported {artifact} to {out}")
    else:
        click.echo(render(payload, fmt), nl=False)


@cli.command()
@click.option("--max-p", default=8, show_default=True, type=int)
@click.option("--max-weight", "max_weights", multiple=True, type=int,
              help="Repeatable; disk sets cached at each budget.")
@click.option("--cache-dir", envvar=CACHE_DIR_ENV, default=None)
@click.option("--workers", default=1, show_default=True, type=int)
@handle_errors
def seed(max_p, max_weights, cache_dir, workers):
    """Fills the cache with presets (and optional disk sets) for every p <= max-p."""
    if max_p < 2:
        raise ConfigError(f"--max-p must be at least 2, got {max_p}")
    if any(n < 1 for n in max_weights):
        raise ConfigError("--max-weight values must be at least 1")
    app = create_app({"DATA_FOLDER": cache_dir} if cache_dir else None)
    count = seed_presets(app, max_p, max_weights, workers)
    click.echo(f"Seeded {count} presets into {os.path.join(app.config['DATA_FOLDER'], 'cache.db')}")
