"""Finite rectangular words over tile indices, stored with row 0 at the bottom."""
from __future__ import annotations

import numpy as np

from .errors import ShapeMismatch


class Word2D:
    __slots__ = ("cells",)

    def __init__(self, cells):
        # cells[y][x], y = 0 is the bottom row
        a = np.array(cells, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
            raise ShapeMismatch(f"need a non-empty 2-d array, got shape {a.shape}")
        a.setflags(write=False)
        self.cells = a

    @classmethod
    def from_display(cls, rows):
        """Build from rows listed top to bottom, the usual way matrices are written."""
        return cls(np.array(rows, dtype=np.int64)[::-1])

    @classmethod
    def letter(cls, a):
        return cls([[a]])

    @classmethod
    def row(cls, letters):
        return cls([list(letters)])

    @classmethod
    def column(cls, letters_bottom_to_top):
        return cls([[a] for a in letters_bottom_to_top])

    @property
    def shape(self):
        return (self.cells.shape[1], self.cells.shape[0])

    @property
    def width(self):
        return self.cells.shape[1]

    @property
    def height(self):
        return self.cells.shape[0]

    def __getitem__(self, p):
        x, y = p
        return int(self.cells[y, x])

    def display(self):
        return [[int(a) for a in r] for r in self.cells[::-1]]

    def letters(self):
        return sorted({int(a) for a in self.cells.flat})

    def window(self, x, y, w, h):
        return Word2D(self.cells[y:y + h, x:x + w])

    def map(self, f):
        return Word2D(np.vectorize(f, otypes=[np.int64])(self.cells))

    def __eq__(self, other):
        return isinstance(other, Word2D) and self.cells.shape == other.cells.shape \
            and bool((self.cells == other.cells).all())

    def __hash__(self):
        return hash((self.cells.shape, self.cells.tobytes()))

    def __repr__(self):
        return "Word2D(" + " / ".join(" ".join(map(str, r)) for r in self.display()) + ")"


def concat(i, u, v):
    if i == 1:
        if u.height != v.height:
            raise ShapeMismatch(f"heights {u.height} and {v.height} differ")
        return Word2D(np.hstack([u.cells, v.cells]))
    if i == 2:
        if u.width != v.width:
            raise ShapeMismatch(f"widths {u.width} and {v.width} differ")
        return Word2D(np.vstack([u.cells, v.cells]))
    raise ValueError(f"axis must be 1 or 2, got {i}")


def occurs_at(u, v, p):
    x, y = p
    if x < 0 or y < 0 or x + u.width > v.width or y + u.height > v.height:
        return False
    return bool((v.cells[y:y + u.height, x:x + u.width] == u.cells).all())


def factors(w, shape):
    a, b = shape
    if a > w.width or b > w.height:
        return set()
    win = np.lib.stride_tricks.sliding_window_view(w.cells, (b, a))
    return {Word2D(win[y, x]) for y in range(win.shape[0]) for x in range(win.shape[1])}


def is_valid(T, w):
    """Edge-matching check of a rectangular word over the tile set T."""
    _, _, codes = T.codes()
    c = codes[w.cells]
    horiz = (c[:, :-1, 0] == c[:, 1:, 2]).all()
    vert = (c[:-1, :, 1] == c[1:, :, 3]).all()
    return bool(horiz and vert)


def invalid_edges(T, w):
    """List of ((x,y), (x2,y2)) adjacent cells whose shared edge colors differ."""
    _, _, codes = T.codes()
    c = codes[w.cells]
    bad = []
    for y, x in zip(*np.nonzero(c[:, :-1, 0] != c[:, 1:, 2])):
        bad.append(((int(x), int(y)), (int(x) + 1, int(y))))
    for y, x in zip(*np.nonzero(c[:-1, :, 1] != c[1:, :, 3])):
        bad.append(((int(x), int(y)), (int(x), int(y) + 1)))
    return bad
