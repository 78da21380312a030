"""Recognizable desubstitution of a Wang shift from a set of marker tiles."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAMarkerSet
from .markers import is_marker_subset
from .morphisms import Morphism2D
from .solver import domino, dominoes_with_surrounding
from .tiles import TileSet, fuse
from .words import Word2D


@dataclass(frozen=True)
class Provenance:
    tiles: tuple  # (k,) for a kept tile, (u, v) for a fused pair
    axis: int = 0
    side: str = ""

    @property
    def fused(self):
        return len(self.tiles) == 2


@dataclass(frozen=True)
class DesubResult:
    derived: TileSet
    morphism: Morphism2D
    provenance: tuple


def find_substitution(T, M, i, r, side="left", check=True):
    """Derived tile set and morphism from markers M along axis i.

    side="left" glues each marker to the tile after it (above it for i=2);
    side="right" glues it to the tile before it.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be left or right, got {side!r}")
    M = set(M)
    if check and not is_marker_subset(T, M, i, r):
        raise NotAMarkerSet(f"{sorted(M)} is not a marker set along axis {i} at radius {r}")
    D = sorted(dominoes_with_surrounding(T, i, r))
    if side == "left":
        P = [(u, v) for u, v in D if u in M and v not in M]
        K = sorted({v for u, v in D if u not in M and v not in M})
    else:
        P = [(u, v) for u, v in D if u not in M and v in M]
        K = sorted({u for u, v in D if u not in M and v not in M})
    tiles = [T[k] for k in K] + [fuse(i, T[u], T[v]) for u, v in P]
    rules = [Word2D.letter(k) for k in K] + [domino(i, u, v) for u, v in P]
    prov = tuple(Provenance((k,)) for k in K) + tuple(Provenance((u, v), i, side) for u, v in P)
    return DesubResult(TileSet(tiles), Morphism2D(rules, len(T)), prov)
