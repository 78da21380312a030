"""JSON formats and SVG rendering."""
from __future__ import annotations

import colorsys
import hashlib
import json
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .errors import WangError
from .morphisms import Morphism2D
from .shear import SparsePatch
from .tiles import TileSet
from .words import Word2D


def tileset_to_json(T):
    return {"tiles": [list(t) for t in T]}


def tileset_from_json(obj):
    return TileSet(obj["tiles"])


def word_to_json(w):
    return {"shape": list(w.shape), "rows_top_to_bottom": w.display()}


def word_from_json(obj):
    w = Word2D.from_display(obj["rows_top_to_bottom"])
    if "shape" in obj and list(w.shape) != list(obj["shape"]):
        raise WangError(f"shape {obj['shape']} does not match rows of shape {list(w.shape)}")
    return w


def morphism_to_json(m):
    return {"codomain_size": m.codomain_size,
            "rules": {str(a): word_to_json(r) for a, r in enumerate(m.rules)}}


def morphism_from_json(obj):
    rules = obj["rules"]
    keys = sorted(int(k) for k in rules)
    if keys != list(range(len(keys))):
        raise WangError("morphism rules must cover letters 0..n-1")
    return Morphism2D([word_from_json(rules[str(k)]) for k in keys], obj.get("codomain_size"))


def sparse_to_json(p):
    return {"cells": [{"x": x, "y": y, "tile": t} for (x, y), t in sorted(p.items(), key=lambda c: (c[0][1], c[0][0]))]}


def sparse_from_json(obj):
    return SparsePatch({(c["x"], c["y"]): c["tile"] for c in obj["cells"]})


def to_json(obj):
    if isinstance(obj, TileSet):
        return tileset_to_json(obj)
    if isinstance(obj, Word2D):
        return word_to_json(obj)
    if isinstance(obj, Morphism2D):
        return morphism_to_json(obj)
    if isinstance(obj, SparsePatch):
        return sparse_to_json(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json(obj):
    if "tiles" in obj:
        return tileset_from_json(obj)
    if "rows_top_to_bottom" in obj:
        return word_from_json(obj)
    if "rules" in obj:
        return morphism_from_json(obj)
    if "cells" in obj:
        return sparse_from_json(obj)
    raise WangError("unrecognized JSON document")


def dumps(obj):
    return json.dumps(to_json(obj))


def loads(text):
    return from_json(json.loads(text))


def load(path):
    try:
        with open(path) as fh:
            return from_json(json.load(fh))
    except OSError as e:
        raise WangError(f"cannot read {path}: {e}") from e


def save(obj, path):
    try:
        with open(path, "w") as fh:
            json.dump(to_json(obj), fh)
    except OSError as e:
        raise WangError(f"cannot write {path}: {e}") from e


def hash_color(name):
    h = int(hashlib.sha1(name.encode()).hexdigest()[:8], 16)
    r, g, b = colorsys.hls_to_rgb((h % 360) / 360, 0.72, 0.55)
    return "#%02x%02x%02x" % (round(r * 255), round(g * 255), round(b * 255))


@dataclass
class RenderSpec:
    cell: int = 60
    palette: dict = field(default_factory=dict)
    labels: bool = True
    path: str | None = None

    def fill(self, color):
        return self.palette.get(color) or hash_color(color)


def _tile_svg(tile, x0, y0, spec, caption=None):
    s = spec.cell
    cx, cy = x0 + s / 2, y0 + s / 2
    corners = {"tl": (x0, y0), "tr": (x0 + s, y0), "br": (x0 + s, y0 + s), "bl": (x0, y0 + s)}
    sides = [("right", "tr", "br"), ("top", "tl", "tr"), ("left", "bl", "tl"), ("bottom", "br", "bl")]
    out = []
    for name, a, b in sides:
        (ax, ay), (bx, by) = corners[a], corners[b]
        color = getattr(tile, name)
        out.append(f'<polygon points="{cx:g},{cy:g} {ax:g},{ay:g} {bx:g},{by:g}" '
                   f'fill="{spec.fill(color)}" stroke="black" stroke-width="0.5"/>')
    out.append(f'<rect x="{x0:g}" y="{y0:g}" width="{s}" height="{s}" fill="none" stroke="black"/>')
    if spec.labels:
        fs = max(6, s // 6)
        pos = {"right": (x0 + s * 0.82, cy), "top": (cx, y0 + s * 0.2),
               "left": (x0 + s * 0.18, cy), "bottom": (cx, y0 + s * 0.84)}
        for name, (lx, ly) in pos.items():
            out.append(f'<text x="{lx:g}" y="{ly:g}" font-size="{fs}" text-anchor="middle" '
                       f'dominant-baseline="middle">{escape(getattr(tile, name))}</text>')
    if caption is not None:
        out.append(f'<text x="{cx:g}" y="{y0 + s + 14:g}" font-size="12" '
                   f'text-anchor="middle">{escape(str(caption))}</text>')
    return out


def render_svg(obj, spec=None, tileset=None):
    """SVG text for a tile set, a rectangular word or a sparse patch (the latter need tileset)."""
    spec = spec or RenderSpec()
    s = spec.cell
    body = []
    if isinstance(obj, TileSet):
        gap = s // 3
        width = max(1, len(obj)) * (s + gap)
        height = s + 24
        for k, t in enumerate(obj):
            body += _tile_svg(t, k * (s + gap) + gap / 2, 2, spec, caption=k)
    else:
        if tileset is None:
            raise WangError("rendering a patch needs its tile set")
        if isinstance(obj, Word2D):
            cells = {(x, y): obj[x, y] for y in range(obj.height) for x in range(obj.width)}
        else:
            cells = dict(obj)
        if cells:
            xs = [p[0] for p in cells]
            ys = [p[1] for p in cells]
            xmin, ymax = min(xs), max(ys)
            width = (max(xs) - xmin + 1) * s
            height = (ymax - min(ys) + 1) * s
        else:
            xmin = ymax = 0
            width = height = 0
        for (x, y), t in sorted(cells.items(), key=lambda c: (-c[0][1], c[0][0])):
            body += _tile_svg(tileset[t], (x - xmin) * s, (ymax - y) * s, spec)
    svg = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
           f'viewBox="0 0 {width:g} {height:g}">\n<g>\n' + "\n".join(body) + ("\n" if body else "")
           + "</g>\n</svg>\n")
    if spec.path:
        try:
            with open(spec.path, "w") as fh:
                fh.write(svg)
        except OSError as e:
            raise WangError(f"cannot write {spec.path}: {e}") from e
    return svg
