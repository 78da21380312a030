"""Shear conjugacy by the matrix [[1,1],[0,1]]."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidPatch
from .morphisms import Morphism2D
from .solver import dominoes_with_surrounding
from .tiles import TileSet, WangTile, fuse
from .words import Word2D, is_valid


def flat_tile(tu, tv):
    return WangTile(tv.top, tv.top, tu.top, tu.top)


def theta_tile(tu, tv):
    return fuse(2, tu, flat_tile(tu, tv))


@dataclass(frozen=True)
class ShearResult:
    derived: TileSet
    eta: tuple
    provenance: tuple  # (u, v) that produced each derived tile first
    source: TileSet

    def eta_morphism(self):
        return Morphism2D.letter_map(self.eta, len(self.source))

    def theta_index(self, u, top_v):
        for k, (a, b) in enumerate(self.provenance):
            if a == u and self.source[b].top == top_v:
                return k
        return None


def shear_tileset(T, r):
    tiles, eta, prov = [], [], []
    seen = set()
    for u, v in sorted(dominoes_with_surrounding(T, 1, r)):
        t = theta_tile(T[u], T[v])
        if t in seen:
            continue
        seen.add(t)
        tiles.append(t)
        eta.append(u)
        prov.append((u, v))
    return ShearResult(TileSet(tiles), tuple(eta), tuple(prov), T)


class SparsePatch(dict):
    """Partial patch: (x, y) -> tile index."""

    def shifted(self, dx, dy):
        return SparsePatch({(x + dx, y + dy): t for (x, y), t in self.items()})

    def bad_edges(self, T):
        bad = []
        for (x, y), t in self.items():
            r = self.get((x + 1, y))
            if r is not None and T[t].right != T[r].left:
                bad.append(((x, y), (x + 1, y)))
            a = self.get((x, y + 1))
            if a is not None and T[t].top != T[a].bottom:
                bad.append(((x, y), (x, y + 1)))
        return bad

    def is_valid(self, T):
        return not self.bad_edges(T)

    @classmethod
    def from_word(cls, w, origin=(0, 0)):
        ox, oy = origin
        return cls({(x - ox, y - oy): w[x, y] for y in range(w.height) for x in range(w.width)})


def sheared_position(p):
    """M p with M = [[1,1],[0,1]]."""
    return (p[0] + p[1], p[1])


def unsheared_position(p):
    return (p[0] - p[1], p[1])


def unshear_patch(result, patch):
    """eta letter-wise, with cell p moved to M p."""
    S = result.derived
    if isinstance(patch, Word2D):
        if not is_valid(S, patch):
            raise InvalidPatch("patch is not a valid tiling over the sheared set")
        patch = SparsePatch.from_word(patch)
    elif not SparsePatch(patch).is_valid(S):
        raise InvalidPatch("patch is not a valid tiling over the sheared set")
    return SparsePatch({sheared_position(p): result.eta[s] for p, s in patch.items()})


def shear_patch(result, patch):
    """theta on a finite patch over the source set: y_p = theta(x_{Mp}, x_{Mp + e1})."""
    T = result.source
    if isinstance(patch, Word2D):
        patch = SparsePatch.from_word(patch)
    out = SparsePatch()
    for q, u in patch.items():
        v = patch.get((q[0] + 1, q[1]))
        if v is None:
            continue
        if T[u].right != T[v].left:
            raise InvalidPatch(f"cells {q} and its right neighbour do not match")
        k = result.theta_index(u, T[v].top)
        if k is None:
            raise InvalidPatch(f"domino ({u}, {v}) at {q} has no sheared tile")
        out[unsheared_position(q)] = k
    return out
