"""Wang tiles, tile sets, fusion, equivalence and the transducer view."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import networkx as nx
import numpy as np

from .errors import DuplicateTile, NotEquivalent, SizeMismatch


class WangTile(NamedTuple):
    right: str
    top: str
    left: str
    bottom: str


def make_tile(t):
    if isinstance(t, WangTile):
        return t
    r, tp, l, b = t
    return WangTile(str(r), str(tp), str(l), str(b))


class TileSet:
    """Ordered, duplicate-free list of Wang tiles. The index is the tile identity."""

    __slots__ = ("tiles", "_codes")

    def __init__(self, tiles=()):
        tiles = tuple(make_tile(t) for t in tiles)
        if len(set(tiles)) != len(tiles):
            seen = set()
            for k, t in enumerate(tiles):
                if t in seen:
                    raise DuplicateTile(f"tile {k} {tuple(t)} occurs twice")
                seen.add(t)
        self.tiles = tiles
        self._codes = None

    def __len__(self):
        return len(self.tiles)

    def __getitem__(self, k):
        return self.tiles[k]

    def __iter__(self):
        return iter(self.tiles)

    def __eq__(self, other):
        return isinstance(other, TileSet) and self.tiles == other.tiles

    def __hash__(self):
        return hash(self.tiles)

    def __repr__(self):
        return f"TileSet({len(self)} tiles)"

    def index(self, tile):
        return self.tiles.index(make_tile(tile))

    def vertical_colors(self):
        return sorted({t.right for t in self} | {t.left for t in self})

    def horizontal_colors(self):
        return sorted({t.top for t in self} | {t.bottom for t in self})

    def subset(self, indices):
        return TileSet(self.tiles[k] for k in indices)

    def codes(self):
        """Integer color codes: (vertical names, horizontal names, int array n x 4)."""
        if self._codes is None:
            vc = self.vertical_colors()
            hc = self.horizontal_colors()
            vi = {c: k for k, c in enumerate(vc)}
            hi = {c: k for k, c in enumerate(hc)}
            arr = np.array([[vi[t.right], hi[t.top], vi[t.left], hi[t.bottom]] for t in self],
                           dtype=np.int64).reshape(len(self), 4)
            self._codes = (vc, hc, arr)
        return self._codes


def fuse(i, u, v):
    """Fuse u with v along axis i (1: v right of u, 2: v on top of u); None if undefined."""
    u = make_tile(u)
    v = make_tile(v)
    if i == 1:
        if u.right != v.left:
            return None
        return WangTile(v.right, u.top + v.top, u.left, u.bottom + v.bottom)
    if i == 2:
        if u.top != v.bottom:
            return None
        return WangTile(u.right + v.right, v.top, u.left + v.left, u.bottom)
    raise ValueError(f"axis must be 1 or 2, got {i}")


@dataclass(frozen=True)
class Transducer:
    states: frozenset
    # (src, dst, input, output) = (left, right, bottom, top)
    transitions: tuple

    def graph(self):
        g = nx.MultiDiGraph()
        g.add_nodes_from(sorted(self.states))
        for s, t, a, b in self.transitions:
            g.add_edge(s, t, label=f"{a}|{b}")
        return g

    def components(self):
        """Weakly connected components, as sorted lists of states."""
        comps = nx.weakly_connected_components(self.graph())
        return sorted((sorted(c) for c in comps), key=lambda c: c[0])

    def run(self, start, word):
        """All (end_state, output) pairs reachable by reading the input word from start."""
        paths = [(start, ())]
        for a in word:
            paths = [(t, out + (b,)) for s, out in paths
                     for (src, t, inp, b) in self.transitions if src == s and inp == a]
        return paths


def to_transducer(T):
    trans = tuple((t.left, t.right, t.bottom, t.top) for t in T)
    states = frozenset(t.left for t in T) | frozenset(t.right for t in T)
    return Transducer(states, trans)


def transducer_product(T, S, prune=False):
    """The tile set of all defined vertical fusions fuse(2, u, v), u in T, v in S."""
    out = []
    seen = set()
    for u in T:
        for v in S:
            w = fuse(2, u, v)
            if w is not None and w not in seen:
                seen.add(w)
                out.append(w)
    if prune:
        out = prune_tiles(out)
    return TileSet(out)


def prune_tiles(tiles):
    """Drop tiles leaving from a source state or entering a sink state, until stable."""
    tiles = list(tiles)
    while True:
        incoming = {t.right for t in tiles}
        outgoing = {t.left for t in tiles}
        kept = [t for t in tiles if t.left in incoming and t.right in outgoing]
        if len(kept) == len(tiles):
            return kept
        tiles = kept


@dataclass(frozen=True)
class Equivalence:
    vertical: dict
    horizontal: dict
    tiles: tuple  # tiles[k] = index in the target set of the image of tile k

    def inverse(self):
        inv = [0] * len(self.tiles)
        for k, m in enumerate(self.tiles):
            inv[m] = k
        return Equivalence({b: a for a, b in self.vertical.items()},
                           {b: a for a, b in self.horizontal.items()}, tuple(inv))

    def then(self, other):
        return Equivalence({a: other.vertical[b] for a, b in self.vertical.items()},
                           {a: other.horizontal[b] for a, b in self.horizontal.items()},
                           tuple(other.tiles[m] for m in self.tiles))


def equivalent(T, S):
    """Find color bijections i, j with S = {(i(a), j(b), i(c), j(d)) : (a,b,c,d) in T}."""
    if len(T) != len(S):
        raise SizeMismatch(f"{len(T)} tiles vs {len(S)} tiles")
    if len(T.vertical_colors()) != len(S.vertical_colors()) or \
            len(T.horizontal_colors()) != len(S.horizontal_colors()):
        raise NotEquivalent("color counts differ")
    n = len(T)
    vmap, vinv, hmap, hinv = {}, {}, {}, {}
    used = [False] * n
    assign = [0] * n

    def bind(m, inv, a, b, trail):
        if a in m:
            return m[a] == b
        if b in inv:
            return False
        m[a] = b
        inv[b] = a
        trail.append((m, inv, a, b))
        return True

    order = list(range(n))

    def search(pos):
        if pos == n:
            return True
        t = T[order[pos]]
        for k in range(n):
            if used[k]:
                continue
            s = S[k]
            trail = []
            ok = (bind(vmap, vinv, t.right, s.right, trail) and bind(hmap, hinv, t.top, s.top, trail)
                  and bind(vmap, vinv, t.left, s.left, trail) and bind(hmap, hinv, t.bottom, s.bottom, trail))
            if ok:
                used[k] = True
                assign[order[pos]] = k
                if search(pos + 1):
                    return True
                used[k] = False
            for m, inv, a, b in reversed(trail):
                del m[a]
                del inv[b]
        return False

    if not search(0):
        raise NotEquivalent("no color bijection maps one set onto the other")
    return Equivalence(dict(vmap), dict(hmap), tuple(assign))
