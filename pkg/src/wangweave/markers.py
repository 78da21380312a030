"""Marker subsets: tiles that only occur on nonadjacent full rows or columns."""
from __future__ import annotations

from dataclasses import dataclass

from networkx.utils import UnionFind

from .errors import InvalidSubset
from .solver import dominoes_with_surrounding


@dataclass(frozen=True)
class MarkerCandidate:
    direction: int
    radius: int
    tiles: tuple


def is_marker_subset(T, M, i, r):
    """True proves M is a marker set along axis i; False only means not provable at radius r."""
    M = set(M)
    if not M or len(M) >= len(T) or not M <= set(range(len(T))):
        raise InvalidSubset(f"need a non-empty proper subset of 0..{len(T) - 1}")
    j = 3 - i
    Di = dominoes_with_surrounding(T, i, r)
    if any(u in M and v in M for u, v in Di):
        return False
    Dj = dominoes_with_surrounding(T, j, r)
    return not any((u in M) != (v in M) for u, v in Dj)


def find_markers(T, i, r):
    j = 3 - i
    uf = UnionFind(range(len(T)))
    for u, v in sorted(dominoes_with_surrounding(T, j, r)):
        uf.union(u, v)
    Di = dominoes_with_surrounding(T, i, r)
    out = []
    for cls in sorted((sorted(c) for c in uf.to_sets()), key=lambda c: c[0]):
        s = set(cls)
        if not any(u in s and v in s for u, v in Di):
            out.append(MarkerCandidate(i, r, tuple(cls)))
    return out
