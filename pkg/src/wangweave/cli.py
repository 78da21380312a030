"""Command line entry point: wangweave."""
from __future__ import annotations

import json
import os
import sys

import click

from . import formats, jeandelrao as J
from .desubstitution import find_substitution
from .errors import WangError
from .markers import find_markers
from .morphisms import (apply, compose, generate_fixed_patch, perron_frequencies,
                        push_frequencies)
from .shear import shear_tileset
from .solver import UNSAT, SolveInstance, export_cnf, has_surrounding, solve_external, solve_rectangle
from .words import Word2D


def _load(spec, kind):
    """A JSON file path, or the name of a built-in artifact."""
    if os.path.exists(spec):
        obj = formats.load(spec)
    else:
        obj = J.builtin(spec)
    if not isinstance(obj, kind):
        raise WangError(f"{spec} is not a {kind.__name__}")
    return obj


def _tileset(spec):
    from .tiles import TileSet
    return _load(spec, TileSet)


def _morphism(spec):
    from .morphisms import Morphism2D
    return _load(spec, Morphism2D)


def _word(spec):
    """File path, or inline rows top to bottom like '17 13/6 5'."""
    if os.path.exists(spec):
        return _load(spec, Word2D)
    return Word2D.from_display([[int(a) for a in r.split()] for r in spec.split("/")])


def _ints(text):
    return [int(a) for a in text.replace(" ", "").split(",") if a]


def _emit(obj):
    click.echo(json.dumps(obj, separators=(",", ":")))


class Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except WangError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(2)


@click.group(cls=Cli)
def main():
    """Wang tile sets, markers, desubstitutions and the Jeandel-Rao replay."""


@main.command()
@click.option("--tileset", required=True)
@click.option("--width", type=int, required=True)
@click.option("--height", type=int, required=True)
@click.option("--preassign", multiple=True, help="x,y,tile")
@click.option("--export-cnf", "cnf_path", default=None)
@click.option("--solver", type=click.Choice(["dlx", "external"]), default="dlx")
@click.option("--propagation", type=click.Choice(["ac", "sac"]), default="sac")
@click.option("--budget", type=float, default=None, help="seconds")
@click.option("--json", "as_json", is_flag=True)
def solve(tileset, width, height, preassign, cnf_path, solver, propagation, budget, as_json):
    """Tile a rectangle. Exit 0 when a tiling exists, 1 when none does."""
    T = _tileset(tileset)
    pre = {}
    for p in preassign:
        x, y, t = _ints(p)
        pre[(x, y)] = t
    inst = SolveInstance(T, width, height, pre)
    if cnf_path:
        export_cnf(inst).write(cnf_path)
    if solver == "dlx":
        res = solve_rectangle(inst, budget=budget, propagation=propagation)
    else:
        res = solve_external(inst)
    if res is UNSAT:
        if as_json:
            _emit({"status": "unsat"})
        else:
            click.echo("UNSAT")
        sys.exit(1)
    if as_json:
        _emit({"status": "sat", "word": formats.word_to_json(res)})
    else:
        for row in res.display():
            click.echo(" ".join(f"{a:>2}" for a in row))


@main.command()
@click.option("--tileset", required=True)
@click.option("--pattern", required=True, help="word file or rows like '0/0'")
@click.option("--radius", type=int, default=None)
@click.option("--margin", default=None, help="mx,my")
def surround(tileset, pattern, radius, margin):
    """Does the pattern admit a surrounding? Exit 0 yes, 1 no."""
    T = _tileset(tileset)
    if margin:
        m = tuple(_ints(margin))
    elif radius is not None:
        m = (radius, radius)
    else:
        raise click.UsageError("give --radius or --margin")
    ok = has_surrounding(T, _word(pattern), m)
    _emit(ok)
    sys.exit(0 if ok else 1)


@main.command()
@click.option("--tileset", required=True)
@click.option("--axis", type=click.Choice(["1", "2"]), required=True)
@click.option("--radius", type=int, required=True)
def markers(tileset, axis, radius):
    """Marker candidates as JSON arrays."""
    _emit([list(c.tiles) for c in find_markers(_tileset(tileset), int(axis), radius)])


@main.command()
@click.option("--tileset", required=True)
@click.option("--markers", "marker_list", required=True, help="comma separated tile indices")
@click.option("--axis", type=click.Choice(["1", "2"]), required=True)
@click.option("--radius", type=int, required=True)
@click.option("--side", type=click.Choice(["left", "right"]), default="left")
@click.option("--out-tileset", default=None)
@click.option("--out-morphism", default=None)
def desub(tileset, marker_list, axis, radius, side, out_tileset, out_morphism):
    """Derived tile set and morphism from a marker set."""
    res = find_substitution(_tileset(tileset), _ints(marker_list), int(axis), radius, side)
    if out_tileset:
        formats.save(res.derived, out_tileset)
    if out_morphism:
        formats.save(res.morphism, out_morphism)
    _emit({"tileset": formats.to_json(res.derived), "morphism": formats.to_json(res.morphism)})


@main.command()
@click.option("--tileset", required=True)
@click.option("--radius", type=int, required=True)
@click.option("--out-tileset", default=None)
def shear(tileset, radius, out_tileset):
    """Sheared tile set and the letter map eta."""
    res = shear_tileset(_tileset(tileset), radius)
    if out_tileset:
        formats.save(res.derived, out_tileset)
    _emit({"tileset": formats.to_json(res.derived), "eta": list(res.eta)})


@main.group()
def morph():
    """Morphism algebra."""


@morph.command("apply")
@click.option("--morphism", required=True)
@click.option("--word", required=True)
def morph_apply(morphism, word):
    _emit(formats.to_json(apply(_morphism(morphism), _word(word))))


@morph.command("compose")
@click.option("--outer", required=True)
@click.option("--inner", required=True)
def morph_compose(outer, inner):
    _emit(formats.to_json(compose(_morphism(outer), _morphism(inner))))


@morph.command("freq")
@click.option("--chain", default=None, help="'pipeline' for the Jeandel-Rao tiles")
@click.option("--morphism", default=None)
def morph_freq(chain, morphism):
    """Letter frequencies of a primitive self-morphism, or pushed down the chain."""
    if chain == "pipeline":
        f, _, _ = J.tile_frequencies()
    elif chain is not None:
        names = chain.split(",")
        f = push_frequencies([_morphism(n) for n in names[:-1]],
                             perron_frequencies(_morphism(names[-1]))[0])
    elif morphism:
        f, _ = perron_frequencies(_morphism(morphism))
    else:
        raise click.UsageError("give --chain or --morphism")
    _emit({str(k): float(v) for k, v in enumerate(f)})


@morph.command("fixed")
@click.option("--morphism", default="omegaU")
@click.option("--seed", required=True, help="2x2 rows like '17 13/6 5'")
@click.option("--n", "iterations", type=int, default=1)
def morph_fixed(morphism, seed, iterations):
    aw = generate_fixed_patch(_morphism(morphism), _word(seed), iterations)
    _emit({**formats.word_to_json(aw.word), "origin": list(aw.origin)})


@main.command()
@click.option("--budget", type=float, default=None, help="seconds")
@click.option("--skip-unsat-check", is_flag=True)
@click.option("--report", "report_path", default=None)
@click.option("--json", "as_json", is_flag=True)
def pipeline(budget, skip_unsat_check, report_path, as_json):
    """Replay T0 <- T1 <- ... <- T12 ~ U and compare with the embedded data."""
    rep = J.run_pipeline(budget=budget, skip_unsat_check=skip_unsat_check, strict=False)
    doc = rep.to_json()
    if report_path:
        with open(report_path, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
    if as_json:
        _emit(doc)
    else:
        for st in rep.steps:
            click.echo(f"{'ok  ' if st['ok'] else 'FAIL'} {st['step']}")
        click.echo("cardinalities " + " ".join(map(str, rep.cardinalities)))
    sys.exit(0 if rep.ok else 1)


@main.command()
@click.option("--tileset", required=True)
@click.option("--word", default=None)
@click.option("--out", required=True)
@click.option("--cell", type=int, default=60)
@click.option("--no-labels", is_flag=True)
def render(tileset, word, out, cell, no_labels):
    """SVG of a tile set, or of a word over it."""
    T = _tileset(tileset)
    spec = formats.RenderSpec(cell=cell, labels=not no_labels, path=out)
    if word:
        formats.render_svg(_word(word), spec, tileset=T)
    else:
        formats.render_svg(T, spec)


if __name__ == "__main__":
    main()
